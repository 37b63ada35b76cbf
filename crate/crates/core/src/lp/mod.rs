//! Dense linear programs with `≤`/`≥` rows and per-variable box bounds.
//!
//! Problems are minimizations. [`solve`] runs a bounded-variable revised
//! simplex: nonbasic variables sit at one of their bounds instead of being
//! shifted and split into standard form, which keeps the LCC programs (almost
//! every variable boxed) at their natural size.

mod simplex;

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub use simplex::SolverOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    objective: Vec<f64>,
    /// Row-major `rows × vars` coefficients.
    matrix: Vec<f64>,
    relations: Vec<Relation>,
    rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl LpProblem {
    /// A problem over `objective.len()` variables with the given bounds and
    /// no rows yet. Use `f64::NEG_INFINITY` / `f64::INFINITY` for open sides.
    pub fn new(objective: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let d = objective.len();
        if lower.len() != d || upper.len() != d {
            return Err(Error::MalformedLp(format!(
                "{d} variables but {} lower and {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        for j in 0..d {
            if !objective[j].is_finite() {
                return Err(Error::MalformedLp(format!(
                    "objective coefficient {j} is not finite"
                )));
            }
            if lower[j].is_nan()
                || upper[j].is_nan()
                || lower[j] > upper[j]
                || lower[j] == f64::INFINITY
                || upper[j] == f64::NEG_INFINITY
            {
                return Err(Error::MalformedLp(format!(
                    "variable {j} has bounds [{}, {}]",
                    lower[j], upper[j]
                )));
            }
        }
        Ok(LpProblem {
            objective,
            matrix: Vec::new(),
            relations: Vec::new(),
            rhs: Vec::new(),
            lower,
            upper,
        })
    }

    pub fn add_row(&mut self, coefficients: &[f64], relation: Relation, rhs: f64) -> Result<()> {
        if coefficients.len() != self.num_vars() {
            return Err(Error::MalformedLp(format!(
                "row has {} coefficients for {} variables",
                coefficients.len(),
                self.num_vars()
            )));
        }
        if !rhs.is_finite() || coefficients.iter().any(|v| !v.is_finite()) {
            return Err(Error::MalformedLp(format!(
                "row {} has non-finite entries",
                self.num_rows()
            )));
        }
        self.matrix.extend_from_slice(coefficients);
        self.relations.push(relation);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.num_vars();
        &self.matrix[i * d..(i + 1) * d]
    }

    pub fn relation(&self, i: usize) -> Relation {
        self.relations[i]
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Number of variables with at least one finite bound.
    pub fn num_bounded_vars(&self) -> usize {
        (0..self.num_vars())
            .filter(|&j| self.lower[j].is_finite() || self.upper[j].is_finite())
            .count()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any row or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> (f64, f64) {
        let mut row_viol: f64 = 0.0;
        for i in 0..self.num_rows() {
            let lhs: f64 = self.row(i).iter().zip(x).map(|(a, v)| a * v).sum();
            let v = match self.relations[i] {
                Relation::Le => lhs - self.rhs[i],
                Relation::Ge => self.rhs[i] - lhs,
            };
            row_viol = row_viol.max(v);
        }
        let mut bound_viol: f64 = 0.0;
        for (j, &v) in x.iter().enumerate() {
            bound_viol = bound_viol.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        (row_viol, bound_viol)
    }

    /// Plain-text dump: a bounds/cost table followed by the constraint rows.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# minimize, {} variables, {} rows",
            self.num_vars(),
            self.num_rows()
        );
        let _ = writeln!(
            out,
            "{:<8}{:>14}{:>14}{:>14}",
            "var", "lower", "upper", "cost"
        );
        for j in 0..self.num_vars() {
            let _ = writeln!(
                out,
                "{:<8}{:>14}{:>14}{:>14}",
                format!("x{j}"),
                fmt_num(self.lower[j]),
                fmt_num(self.upper[j]),
                fmt_num(self.objective[j])
            );
        }
        let _ = write!(out, "{:<8}", "row");
        for j in 0..self.num_vars() {
            let _ = write!(out, "{:>14}", format!("x{j}"));
        }
        let _ = writeln!(out, "{:>6}{:>14}", "rel", "rhs");
        for i in 0..self.num_rows() {
            let _ = write!(out, "{:<8}", format!("r{i}"));
            for v in self.row(i) {
                let _ = write!(out, "{:>14}", fmt_num(*v));
            }
            let _ = writeln!(
                out,
                "{:>6}{:>14}",
                self.relations[i].symbol(),
                fmt_num(self.rhs[i])
            );
        }
        out
    }
}

fn fmt_num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.6}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal values; meaningful only when `status` is optimal.
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Solves `problem` with default tolerances.
pub fn solve(problem: &LpProblem) -> Result<LpSolution> {
    solve_with(problem, &SolverOptions::default())
}

pub fn solve_with(problem: &LpProblem, options: &SolverOptions) -> Result<LpSolution> {
    simplex::Simplex::new(problem, options).run()
}
