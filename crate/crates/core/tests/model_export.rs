mod common;

use std::collections::HashMap;

use common::*;
use distcut::data::demo_table;
use distcut::lp::{export_ilp, export_iqp, Formulation, LpModel};
use distcut::ScoreMatrix;

fn tiny() -> ScoreMatrix {
    ScoreMatrix::from_rows(vec![vec![2.0], vec![1.0]]).unwrap()
}

#[test]
fn golden_iqp() {
    assert_eq!(
        export_iqp(&tiny()).unwrap(),
        include_str!("golden/iqp_n2_m1.lp")
    );
}

#[test]
fn golden_ilp() {
    assert_eq!(
        export_ilp(&tiny()).unwrap(),
        include_str!("golden/ilp_n2_m1.lp")
    );
}

#[test]
fn demo_variable_count() {
    let model = LpModel::build(&demo_table(), Formulation::Quadratic).unwrap();
    assert_eq!(model.variables().len(), 50 * 3 + 50 * 4 + 4);
    assert_eq!(model.variables().len(), 354);
    let text = export_iqp(&demo_table()).unwrap();
    let declared = parse(&text);
    assert_eq!(declared.binaries.len() + declared.bounded.len(), 354);
}

#[test]
fn formulations_share_the_constraint_core() {
    let s = demo_table();
    let iqp = export_iqp(&s).unwrap();
    let ilp = export_ilp(&s).unwrap();
    let rows = |t: &str| -> Vec<String> {
        parse(t)
            .rows
            .into_iter()
            .filter(|r| {
                ["mono_", "tie_", "link_", "assign_"]
                    .iter()
                    .any(|p| r.name.starts_with(p))
            })
            .map(|r| format!("{r:?}"))
            .collect()
    };
    assert_eq!(rows(&iqp), rows(&ilp));
    assert!(ilp.contains("obj: s - t"));
    // the demo table has tied values in every score
    assert!(parse(&iqp).rows.iter().any(|r| r.name.starts_with("tie_")));
}

#[test]
fn output_is_byte_stable() {
    let s = demo_table();
    assert_eq!(export_iqp(&s).unwrap(), export_iqp(&s).unwrap());
    assert!(!export_iqp(&s).unwrap().contains('\r'));
}

#[derive(Debug)]
struct ParsedRow {
    name: String,
    terms: Vec<(f64, String)>,
    sense: String,
    rhs: f64,
}

struct Parsed {
    objective: String,
    rows: Vec<ParsedRow>,
    bounded: Vec<String>,
    binaries: Vec<String>,
}

fn parse_terms(tokens: &[&str]) -> Vec<(f64, String)> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef = 1.0;
    for tok in tokens {
        match *tok {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            t => match t.parse::<f64>() {
                Ok(v) => coef = v,
                Err(_) => {
                    terms.push((sign * coef, t.to_string()));
                    sign = 1.0;
                    coef = 1.0;
                }
            },
        }
    }
    terms
}

/// Minimal reader for the subset of LP format the writer emits.
fn parse(text: &str) -> Parsed {
    let mut section = "";
    let mut logical: Vec<(String, String)> = Vec::new();
    for line in text.lines() {
        match line {
            "Minimize" | "Subject To" | "Bounds" | "Binaries" | "End" => {
                section = line;
                continue;
            }
            l if l.starts_with('\\') => continue,
            l if l.starts_with("   ") => logical.last_mut().unwrap().1.push_str(l),
            l => logical.push((section.to_string(), l.to_string())),
        }
    }
    let mut parsed = Parsed {
        objective: String::new(),
        rows: Vec::new(),
        bounded: Vec::new(),
        binaries: Vec::new(),
    };
    for (section, line) in logical {
        match section.as_str() {
            "Minimize" => parsed.objective = line.trim().to_string(),
            "Subject To" => {
                let (name, body) = line.trim().split_once(": ").unwrap();
                let tokens: Vec<&str> = body.split_whitespace().collect();
                let n = tokens.len();
                parsed.rows.push(ParsedRow {
                    name: name.to_string(),
                    terms: parse_terms(&tokens[..n - 2]),
                    sense: tokens[n - 2].to_string(),
                    rhs: tokens[n - 1].parse().unwrap(),
                });
            }
            "Bounds" => parsed
                .bounded
                .push(line.split_whitespace().nth(2).unwrap().to_string()),
            "Binaries" => parsed
                .binaries
                .extend(line.split_whitespace().map(String::from)),
            _ => {}
        }
    }
    parsed
}

fn holds(row: &ParsedRow, values: &HashMap<String, f64>) -> bool {
    let lhs: f64 = row.terms.iter().map(|(c, v)| c * values[v]).sum();
    match row.sense.as_str() {
        ">=" => lhs >= row.rhs - 1e-9,
        "<=" => lhs <= row.rhs + 1e-9,
        "=" => (lhs - row.rhs).abs() < 1e-9,
        s => panic!("unknown sense {s}"),
    }
}

/// Enumerates every binary assignment of the emitted model, fixes the
/// continuous variables at their best values, and checks that feasible
/// assignments correspond one-to-one to candidate cut-off vectors with the
/// same objective.
fn check_model_semantics(s: &ScoreMatrix, formulation: Formulation) {
    let text = LpModel::build(s, formulation).unwrap().to_lp_string();
    let model = parse(&text);
    let (n, m) = (s.n(), s.m());
    let nbin = model.binaries.len();
    assert_eq!(nbin, n * m + n * (m + 1));
    let points = all_points(s, false);
    let mut matched = std::collections::HashSet::new();
    for mask in 0u64..(1 << nbin) {
        let mut values: HashMap<String, f64> = model
            .binaries
            .iter()
            .enumerate()
            .map(|(b, v)| (v.clone(), ((mask >> b) & 1) as f64))
            .collect();
        let col_sums: Vec<f64> = (0..=m)
            .map(|k| (1..=n).map(|i| values[&format!("y_{i}_{k}")]).sum())
            .collect();
        match formulation {
            Formulation::Quadratic => {
                for (k, &c) in col_sums.iter().enumerate() {
                    values.insert(format!("t_{k}"), c);
                }
            }
            Formulation::Range => {
                values.insert(
                    "s".into(),
                    col_sums.iter().cloned().fold(f64::MIN, f64::max),
                );
                values.insert(
                    "t".into(),
                    col_sums.iter().cloned().fold(f64::MAX, f64::min),
                );
            }
        }
        if !model.rows.iter().all(|r| holds(r, &values)) {
            continue;
        }
        // which candidate cut-off vector produces exactly these crossings?
        let pos = points
            .iter()
            .position(|(c, _)| {
                (0..n).all(|i| {
                    (0..m).all(|j| {
                        let x = values[&format!("x_{}_{}", i + 1, j + 1)] == 1.0;
                        x == (s.get(i, j) >= c[j])
                    })
                })
            })
            .unwrap_or_else(|| panic!("feasible assignment {mask:#b} is not a valid cut"));
        assert!(matched.insert(pos), "two feasible assignments for one cut");
        let counts = &points[pos].1;
        let objective = match formulation {
            Formulation::Quadratic => col_sums.iter().map(|c| c * c).sum::<f64>(),
            Formulation::Range => values["s"] - values["t"],
        };
        let expected = match formulation {
            Formulation::Quadratic => sum_sq(counts) as f64,
            Formulation::Range => range(counts) as f64,
        };
        assert_eq!(objective, expected);
    }
    assert_eq!(matched.len(), points.len());
}

#[test]
fn model_feasible_set_is_the_cut_grid() {
    let instances = [
        ScoreMatrix::from_rows(vec![vec![1.0, 2.0], vec![1.0, 0.0], vec![3.0, 2.0]]).unwrap(),
        ScoreMatrix::from_rows(vec![vec![0.5, 1.0], vec![2.0, 3.0], vec![1.0, 3.0]]).unwrap(),
        ScoreMatrix::from_rows(vec![vec![1.0], vec![1.0]]).unwrap(),
        ScoreMatrix::from_rows(vec![vec![4.0], vec![1.0], vec![4.0], vec![2.0]]).unwrap(),
    ];
    for s in &instances {
        check_model_semantics(s, Formulation::Quadratic);
        check_model_semantics(s, Formulation::Range);
    }
}

#[test]
fn tied_pair_allows_only_joint_crossing() {
    let s = ScoreMatrix::from_rows(vec![vec![1.0], vec![1.0]]).unwrap();
    let model = parse(&export_iqp(&s).unwrap());
    let tie = model.rows.iter().find(|r| r.name == "tie_1_1").unwrap();
    let assignment =
        |a: f64, b: f64| HashMap::from([("x_1_1".to_string(), a), ("x_2_1".to_string(), b)]);
    assert!(holds(tie, &assignment(0.0, 0.0)));
    assert!(holds(tie, &assignment(1.0, 1.0)));
    assert!(!holds(tie, &assignment(1.0, 0.0)));
    assert!(!holds(tie, &assignment(0.0, 1.0)));
    assert!(model.objective.starts_with("obj: ["));
}
