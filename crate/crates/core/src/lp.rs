//! Writers for the binary quadratic program and its range surrogate in
//! CPLEX LP text format, for cross-checking with external MIP solvers.
//!
//! Variables: `x_i_j` (item `i` clears cut-off `j`), `y_i_k` (item `i` clears
//! exactly `k` cut-offs, `k = 0..=m`), and bucket counts `t_k` for the
//! quadratic model or the bounds `s`, `t` for the range model. Items and
//! scores are numbered from 1.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::format::significant;
use crate::scores::{ScoreMatrix, SortedScoreIndex};

const TERMS_PER_LINE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// Minimize the sum of squared bucket counts.
    Quadratic,
    /// Minimize `s - t` with every bucket count between `t` and `s`.
    Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Ge => ">=",
            Sense::Le => "<=",
            Sense::Eq => "=",
        }
    }
}

pub type Term = (f64, String);

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<Term>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// `sum coef * var^2`
    Quadratic(Vec<Term>),
    Linear(Vec<Term>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bound {
    pub var: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub title: String,
    pub objective: Objective,
    pub rows: Vec<Row>,
    pub bounds: Vec<Bound>,
    pub binaries: Vec<String>,
}

fn x(i: usize, j: usize) -> String {
    format!("x_{}_{}", i + 1, j + 1)
}

fn y(i: usize, k: usize) -> String {
    format!("y_{}_{k}", i + 1)
}

impl LpModel {
    pub fn build(scores: &ScoreMatrix, formulation: Formulation) -> Result<Self> {
        let (n, m) = (scores.n(), scores.m());
        if n < 2 {
            return Err(Error::UndefinedMetric { n });
        }
        let index = SortedScoreIndex::new(scores);
        let mut rows = Vec::new();
        for (j, col) in index.columns().iter().enumerate() {
            for r in 0..n - 1 {
                let (lo, hi) = (col.order[r], col.order[r + 1]);
                rows.push(Row {
                    name: format!("mono_{}_{}", j + 1, r + 1),
                    terms: vec![(1.0, x(hi, j)), (-1.0, x(lo, j))],
                    sense: Sense::Ge,
                    rhs: 0.0,
                });
            }
        }
        for (j, col) in index.columns().iter().enumerate() {
            for r in 0..n - 1 {
                if col.values[r] == col.values[r + 1] {
                    let (lo, hi) = (col.order[r], col.order[r + 1]);
                    rows.push(Row {
                        name: format!("tie_{}_{}", j + 1, r + 1),
                        terms: vec![(1.0, x(hi, j)), (-1.0, x(lo, j))],
                        sense: Sense::Eq,
                        rhs: 0.0,
                    });
                }
            }
        }
        for i in 0..n {
            let mut terms: Vec<Term> = (1..=m).map(|k| (k as f64, y(i, k))).collect();
            terms.extend((0..m).map(|j| (-1.0, x(i, j))));
            rows.push(Row {
                name: format!("link_{}", i + 1),
                terms,
                sense: Sense::Eq,
                rhs: 0.0,
            });
        }
        for i in 0..n {
            rows.push(Row {
                name: format!("assign_{}", i + 1),
                terms: (0..=m).map(|k| (1.0, y(i, k))).collect(),
                sense: Sense::Eq,
                rhs: 1.0,
            });
        }
        let column = |k: usize| -> Vec<Term> { (0..n).map(|i| (1.0, y(i, k))).collect() };
        let (objective, bounds, title) = match formulation {
            Formulation::Quadratic => {
                for k in 0..=m {
                    let mut terms = column(k);
                    terms.push((-1.0, format!("t_{k}")));
                    rows.push(Row {
                        name: format!("colsum_{k}"),
                        terms,
                        sense: Sense::Eq,
                        rhs: 0.0,
                    });
                }
                let bounds = (0..=m)
                    .map(|k| Bound {
                        var: format!("t_{k}"),
                        lower: 0.0,
                        upper: n as f64,
                    })
                    .collect();
                let obj = (0..=m).map(|k| (1.0, format!("t_{k}"))).collect();
                (
                    Objective::Quadratic(obj),
                    bounds,
                    "sum of squared bucket counts",
                )
            }
            Formulation::Range => {
                for k in 0..=m {
                    let mut terms = column(k);
                    terms.push((-1.0, "t".to_string()));
                    rows.push(Row {
                        name: format!("lo_{k}"),
                        terms,
                        sense: Sense::Ge,
                        rhs: 0.0,
                    });
                }
                for k in 0..=m {
                    let mut terms = column(k);
                    terms.push((-1.0, "s".to_string()));
                    rows.push(Row {
                        name: format!("hi_{k}"),
                        terms,
                        sense: Sense::Le,
                        rhs: 0.0,
                    });
                }
                let bounds = ["s", "t"]
                    .iter()
                    .map(|v| Bound {
                        var: v.to_string(),
                        lower: 0.0,
                        upper: n as f64,
                    })
                    .collect();
                let obj = vec![(1.0, "s".to_string()), (-1.0, "t".to_string())];
                (Objective::Linear(obj), bounds, "range of bucket counts")
            }
        };
        let mut binaries: Vec<String> = (0..n).flat_map(|i| (0..m).map(move |j| x(i, j))).collect();
        binaries.extend((0..n).flat_map(|i| (0..=m).map(move |k| y(i, k))));
        Ok(Self {
            title: format!("cut-off selection, {title}: n = {n} items, m = {m} scores"),
            objective,
            rows,
            bounds,
            binaries,
        })
    }

    /// Every declared variable: binaries followed by the continuous ones.
    pub fn variables(&self) -> Vec<&str> {
        self.binaries
            .iter()
            .map(String::as_str)
            .chain(self.bounds.iter().map(|b| b.var.as_str()))
            .collect()
    }

    pub fn to_lp_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "\\ {}", self.title);
        out.push_str("Minimize\n");
        match &self.objective {
            Objective::Quadratic(terms) => {
                let doubled: Vec<Term> = terms
                    .iter()
                    .map(|(c, v)| (2.0 * c, format!("{v} ^2")))
                    .collect();
                let _ = writeln!(out, " obj: [ {} ] / 2", join_terms(&doubled));
            }
            Objective::Linear(terms) => {
                let _ = writeln!(out, " obj: {}", join_terms(terms));
            }
        }
        out.push_str("Subject To\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                " {}: {} {} {}",
                row.name,
                join_terms(&row.terms),
                row.sense.symbol(),
                significant(row.rhs, 6)
            );
        }
        out.push_str("Bounds\n");
        for b in &self.bounds {
            let _ = writeln!(
                out,
                " {} <= {} <= {}",
                significant(b.lower, 6),
                b.var,
                significant(b.upper, 6)
            );
        }
        out.push_str("Binaries\n");
        for chunk in self.binaries.chunks(TERMS_PER_LINE) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
        out.push_str("End\n");
        out
    }
}

fn join_terms(terms: &[Term]) -> String {
    let mut out = String::new();
    for (pos, (coef, var)) in terms.iter().enumerate() {
        if pos > 0 && pos % TERMS_PER_LINE == 0 {
            out.push_str("\n  ");
        }
        let magnitude = coef.abs();
        let sign = if *coef < 0.0 { "-" } else { "+" };
        if pos == 0 {
            if *coef < 0.0 {
                out.push_str("- ");
            }
        } else {
            out.push(' ');
            out.push_str(sign);
            out.push(' ');
        }
        if magnitude != 1.0 {
            out.push_str(&significant(magnitude, 6));
            out.push(' ');
        }
        out.push_str(var);
    }
    out
}

/// LP text of the quadratic program over binary crossing variables.
pub fn export_iqp(scores: &ScoreMatrix) -> Result<String> {
    Ok(LpModel::build(scores, Formulation::Quadratic)?.to_lp_string())
}

/// LP text of the linear range surrogate.
pub fn export_ilp(scores: &ScoreMatrix) -> Result<String> {
    Ok(LpModel::build(scores, Formulation::Range)?.to_lp_string())
}
