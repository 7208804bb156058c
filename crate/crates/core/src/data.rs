//! Score ingestion and serialization, the embedded 50-item demo table, and
//! the seeded random instance generator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::format::significant;
use crate::scores::ScoreMatrix;

fn parse_number(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn is_id_header(cell: &str) -> bool {
    matches!(
        cell.trim().to_ascii_lowercase().as_str(),
        "item_id" | "id" | "item"
    )
}

/// Reads scores from CSV text.
///
/// The first row is a header when any cell after the first is non-numeric
/// (or, for single-column files, when its only cell is). A leading item id
/// column is recognized by a header named `item_id`/`id`/`item`, or by a
/// non-numeric first cell in the first data row. Without ids, items are
/// labelled `1..=n`.
pub fn parse_csv(text: &str) -> Result<ScoreMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        records.push((line + 1, rec));
    }
    let Some((_, first)) = records.first() else {
        return Err(Error::InvalidMatrix("no rows".into()));
    };
    let header = if first.len() == 1 {
        parse_number(&first[0]).is_none() && records.len() > 1
    } else {
        first.iter().skip(1).any(|c| parse_number(c).is_none())
    };
    let id_column = match (header, records.get(usize::from(header))) {
        (true, _) if first.len() > 1 && is_id_header(&first[0]) => true,
        (_, Some((_, row))) => row.len() > 1 && parse_number(&row[0]).is_none(),
        (_, None) => false,
    };
    let data = &records[usize::from(header)..];
    if data.is_empty() {
        return Err(Error::InvalidMatrix("no data rows".into()));
    }
    let width = data[0].1.len();
    let mut ids = Vec::with_capacity(data.len());
    let mut rows = Vec::with_capacity(data.len());
    for (pos, (line, rec)) in data.iter().enumerate() {
        if rec.len() != width {
            return Err(Error::Parse {
                row: *line,
                column: rec.len().min(width) + 1,
                message: format!("expected {width} columns, found {}", rec.len()),
            });
        }
        let first_score = usize::from(id_column);
        ids.push(if id_column {
            rec[0].to_string()
        } else {
            (pos + 1).to_string()
        });
        let row = rec
            .iter()
            .enumerate()
            .skip(first_score)
            .map(|(col, cell)| {
                parse_number(cell).ok_or_else(|| Error::Parse {
                    row: *line,
                    column: col + 1,
                    message: format!("`{cell}` is not a finite number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    ScoreMatrix::with_ids(ids, rows)
}

/// CSV with an `item_id` column and `score_1..score_m`; shortest round-trip
/// decimal representation, LF line endings.
pub fn to_csv(scores: &ScoreMatrix) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["item_id".to_string()];
    header.extend((1..=scores.m()).map(|j| format!("score_{j}")));
    writer.write_record(&header).expect("in-memory write");
    for (id, row) in scores.ids().iter().zip(scores.rows()) {
        let mut rec = vec![id.clone()];
        rec.extend(row.iter().map(|v| v.to_string()));
        writer.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Like [`to_csv`] with 6 significant digits.
pub fn to_csv_rounded(scores: &ScoreMatrix) -> String {
    let mut out = String::from("item_id");
    for j in 1..=scores.m() {
        out.push_str(&format!(",score_{j}"));
    }
    out.push('\n');
    for (id, row) in scores.ids().iter().zip(scores.rows()) {
        out.push_str(id);
        for v in row {
            out.push(',');
            out.push_str(&significant(*v, 6));
        }
        out.push('\n');
    }
    out
}

#[rustfmt::skip]
const DEMO_TABLE: [[f64; 3]; 50] = [
    [-1.25, -0.94, -0.53], [0.72, 1.10, 0.08], [0.67, -0.81, 0.52], [-1.36, -2.26, 0.73],
    [0.77, -1.51, -0.57], [-0.23, 0.13, 1.30], [-0.14, 0.49, 0.06], [0.90, -0.07, -0.27],
    [-1.34, 1.82, -0.04], [-1.08, 1.08, 0.58], [-0.16, 0.09, -0.86], [0.21, -0.71, -1.33],
    [0.93, 0.38, -1.31], [2.05, 1.06, -1.30], [-0.01, 0.28, -0.17], [-1.17, 2.32, 1.37],
    [0.38, 0.45, 0.46], [0.45, 0.58, 1.28], [-0.29, 0.81, 0.88], [0.46, -1.14, 0.78],
    [0.65, -0.70, 1.08], [-0.88, 0.60, 0.18], [2.03, -0.16, 1.61], [0.85, -0.74, -1.25],
    [-0.58, -1.22, -0.97], [0.58, 0.92, 0.01], [-0.55, -0.78, -0.67], [-0.70, 0.75, 0.46],
    [0.75, 0.11, 1.78], [-0.76, -0.05, 1.06], [0.68, -0.58, 0.88], [0.15, -1.05, 0.23],
    [-1.07, -0.64, -0.32], [1.19, -1.91, -0.41], [0.34, -2.33, -0.26], [0.46, 1.26, -0.41],
    [0.64, -0.23, 0.13], [0.67, 0.30, -1.26], [-0.16, 0.25, -0.37], [-0.60, -0.19, 0.13],
    [1.22, 0.97, -1.19], [0.57, -0.89, 1.62], [0.53, -1.22, -0.11], [0.17, -0.14, -0.07],
    [1.10, 0.61, 0.31], [-1.44, -0.40, -1.13], [1.91, 0.00, -1.57], [-1.70, -1.14, -0.42],
    [-0.03, 0.85, -0.96], [-0.20, 0.22, -0.04],
];

/// The 50-item, 3-score demonstration dataset; items are labelled `1..=50`.
pub fn demo_table() -> ScoreMatrix {
    ScoreMatrix::from_rows(DEMO_TABLE.iter().map(|r| r.to_vec()).collect())
        .expect("embedded table is valid")
}

/// Parameters of one generated instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceSpec {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    /// ChaCha stream id; distinct instances of one ensemble use distinct streams.
    pub stream: u64,
    pub scale: f64,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        Self {
            n: 100,
            m: 3,
            seed: 0,
            stream: 0,
            scale: 100.0,
        }
    }
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.m < 1 || !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::Precondition(format!(
                "instance needs n >= 2, m >= 1, scale > 0 (got n = {}, m = {}, scale = {})",
                self.n, self.m, self.scale
            )));
        }
        Ok(())
    }
}

const COVARIANCE_ATTEMPTS: usize = 16;

/// Lower Cholesky factor of a row-major `m x m` matrix, or `None` if a pivot
/// is not clearly positive.
fn cholesky(a: &[f64], m: usize) -> Option<Vec<f64>> {
    let trace: f64 = (0..m).map(|i| a[i * m + i]).sum();
    let floor = 1e-10 * trace.max(f64::MIN_POSITIVE);
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let dot: f64 = (0..j).map(|k| l[i * m + k] * l[j * m + k]).sum();
            if i == j {
                let d = a[i * m + i] - dot;
                if d <= floor {
                    return None;
                }
                l[i * m + i] = d.sqrt();
            } else {
                l[i * m + j] = (a[i * m + j] - dot) / l[j * m + j];
            }
        }
    }
    Some(l)
}

/// A generated instance together with the covariance it was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedInstance {
    pub scores: ScoreMatrix,
    /// Row-major `m x m` covariance of the unscaled Gaussian.
    pub covariance: Vec<f64>,
}

/// Draws `G` (`m x m`, standard normal entries), sets the covariance to
/// `G^T G`, then draws `n` rows from `N(0, G^T G)` through its Cholesky
/// factor, multiplies by `scale` and rounds half away from zero.
///
/// The generator is ChaCha8 seeded with `seed` on stream `stream`.
pub fn generate_instance_with_covariance(spec: &InstanceSpec) -> Result<GeneratedInstance> {
    spec.validate()?;
    let m = spec.m;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(spec.stream);
    let mut draw = move || -> f64 { StandardNormal.sample(&mut rng) };
    for _ in 0..COVARIANCE_ATTEMPTS {
        let g: Vec<f64> = (0..m * m).map(|_| draw()).collect();
        let mut cov = vec![0.0; m * m];
        for a in 0..m {
            for b in 0..m {
                cov[a * m + b] = (0..m).map(|k| g[k * m + a] * g[k * m + b]).sum();
            }
        }
        let Some(l) = cholesky(&cov, m) else { continue };
        let mut rows = Vec::with_capacity(spec.n);
        let mut z = vec![0.0; m];
        for _ in 0..spec.n {
            z.iter_mut().for_each(|v| *v = draw());
            let row = (0..m)
                .map(|a| {
                    let x: f64 = (0..=a).map(|k| l[a * m + k] * z[k]).sum();
                    (x * spec.scale).round()
                })
                .collect();
            rows.push(row);
        }
        return Ok(GeneratedInstance {
            scores: ScoreMatrix::from_rows(rows)?,
            covariance: cov,
        });
    }
    Err(Error::DegenerateCovariance {
        attempts: COVARIANCE_ATTEMPTS,
    })
}

pub fn generate_instance(spec: &InstanceSpec) -> Result<ScoreMatrix> {
    generate_instance_with_covariance(spec).map(|g| g.scores)
}
