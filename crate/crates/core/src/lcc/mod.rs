//! The linear centralization classifier.
//!
//! Training solves one linear program over `β ∈ [−1, 1]ⁿ` and slacks
//! `ε ∈ [σ, ∞)ᵐ`:
//!
//! ```text
//! min  (C₋₁ − C₁)·β + λ Σ εᵢ
//! s.t. yᵢ (l − xᵢ)·β − εᵢ ≤ 0      for every training instance i
//!      (C₋₁ − C₁)·β ≤ σ
//! ```
//!
//! where `C₋₁`, `C₁` are the class means and `l` their midpoint. A new
//! instance is projected to `x̂ = x·β` and labelled −1 when it falls below
//! the projected midpoint `l̂`, +1 otherwise.

mod fqcc;

pub use fqcc::{
    fqcc_objective, fqcc_slacks, nearest_center_label, train_fqcc, train_fqcc_with, FqccModel,
    FqccOptions,
};

use crate::data::{check_dim, dot, Dataset, Label};
use crate::error::{Error, Result};
use crate::lp::{self, LpProblem, LpStatus, Relation};

/// Slack penalty weight used when none is given.
pub const DEFAULT_LAMBDA: f64 = 2.0;
/// Margin offset used when none is given.
pub const DEFAULT_SIGMA: f64 = -0.01;

/// Per-class means `(C₋₁, C₁)`.
pub fn class_centers(train: &Dataset) -> Result<(Vec<f64>, Vec<f64>)> {
    train.require_both_classes()?;
    let n = train.n();
    let mut sums = [vec![0.0; n], vec![0.0; n]];
    let mut counts = [0usize; 2];
    for (row, &label) in train.rows().zip(train.labels()) {
        let c = usize::from(label == Label::Pos);
        counts[c] += 1;
        sums[c].iter_mut().zip(row).for_each(|(s, v)| *s += v);
    }
    let [mut neg, mut pos] = sums;
    neg.iter_mut().for_each(|v| *v /= counts[0] as f64);
    pos.iter_mut().for_each(|v| *v /= counts[1] as f64);
    Ok((neg, pos))
}

pub(crate) fn check_hyperparameters(lambda: f64, sigma: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    if !(sigma < 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sigma must be negative, got {sigma}"
        )));
    }
    Ok(())
}

/// Builds the training program from per-instance projection coefficients.
///
/// `projections(i)` is the vector `p` with `x̂ᵢ = p·θ` for the decision
/// variables `θ`; `center_neg`/`center_pos` play the same role for `Ĉ₋₁`, `Ĉ₁`.
/// Shared by the linear trainer (`θ = β`) and the kernel trainer (`θ = α`).
pub(crate) fn assemble_centralization_lp(
    labels: &[Label],
    projections: impl Fn(usize) -> Vec<f64>,
    center_neg: &[f64],
    center_pos: &[f64],
    lambda: f64,
    sigma: f64,
) -> Result<LpProblem> {
    check_hyperparameters(lambda, sigma)?;
    let k = center_neg.len();
    let m = labels.len();
    let d = k + m;
    let gap: Vec<f64> = center_neg
        .iter()
        .zip(center_pos)
        .map(|(a, b)| a - b)
        .collect();
    let mid: Vec<f64> = center_neg
        .iter()
        .zip(center_pos)
        .map(|(a, b)| 0.5 * (a + b))
        .collect();

    let mut objective = gap.clone();
    objective.resize(d, lambda);
    let mut lower = vec![-1.0; k];
    lower.resize(d, sigma);
    let mut upper = vec![1.0; k];
    upper.resize(d, f64::INFINITY);
    let mut lp = LpProblem::new(objective, lower, upper)?;

    let mut row = vec![0.0; d];
    for (i, label) in labels.iter().enumerate() {
        let y = label.sign();
        let p = projections(i);
        row.iter_mut().for_each(|v| *v = 0.0);
        for j in 0..k {
            row[j] = y * (mid[j] - p[j]);
        }
        row[k + i] = -1.0;
        lp.add_row(&row, Relation::Le, 0.0)?;
    }
    row.iter_mut().for_each(|v| *v = 0.0);
    row[..k].copy_from_slice(&gap);
    lp.add_row(&row, Relation::Le, sigma)?;
    Ok(lp)
}

/// Assembles the LCC program: `n + m` variables, `m + 1` rows.
pub fn assemble_lcc_lp(train: &Dataset, lambda: f64, sigma: f64) -> Result<LpProblem> {
    let (neg, pos) = class_centers(train)?;
    assemble_centralization_lp(
        train.labels(),
        |i| train.row(i).to_vec(),
        &neg,
        &pos,
        lambda,
        sigma,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct LccModel {
    pub beta: Vec<f64>,
    /// Class means in feature space, `C₋₁` and `C₁`.
    pub center_neg: Vec<f64>,
    pub center_pos: Vec<f64>,
    pub c_neg_hat: f64,
    pub c_pos_hat: f64,
    pub l_hat: f64,
    pub lambda: f64,
    pub sigma: f64,
    /// Training slacks, in training order.
    pub epsilons: Vec<f64>,
    pub objective: f64,
    pub lp_iterations: usize,
}

pub fn train_lcc(train: &Dataset, lambda: f64, sigma: f64) -> Result<LccModel> {
    let lp = assemble_lcc_lp(train, lambda, sigma)?;
    let (neg, pos) = class_centers(train)?;
    let solution = lp::solve(&lp)?;
    match solution.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(infeasible(&neg, &pos, sigma)),
        LpStatus::Unbounded => return Err(Error::Unbounded),
    }
    let n = train.n();
    let beta = solution.x[..n].to_vec();
    let epsilons = solution.x[n..].to_vec();
    Ok(LccModel::from_parts(
        beta,
        neg,
        pos,
        lambda,
        sigma,
        epsilons,
        solution.objective_value,
        solution.iterations,
    ))
}

pub(crate) fn infeasible(neg: &[f64], pos: &[f64], sigma: f64) -> Error {
    Error::Infeasible {
        sigma_abs: sigma.abs(),
        center_gap: neg.iter().zip(pos).map(|(a, b)| (a - b).abs()).sum(),
    }
}

impl LccModel {
    /// Rebuilds a model from its stored parts; projected centers and the
    /// threshold are recomputed from `beta`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        beta: Vec<f64>,
        center_neg: Vec<f64>,
        center_pos: Vec<f64>,
        lambda: f64,
        sigma: f64,
        epsilons: Vec<f64>,
        objective: f64,
        lp_iterations: usize,
    ) -> LccModel {
        let c_neg_hat = dot(&center_neg, &beta);
        let c_pos_hat = dot(&center_pos, &beta);
        LccModel {
            beta,
            center_neg,
            center_pos,
            c_neg_hat,
            c_pos_hat,
            l_hat: (c_neg_hat + c_pos_hat) / 2.0,
            lambda,
            sigma,
            epsilons,
            objective,
            lp_iterations,
        }
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    /// `x·β`.
    pub fn transform(&self, instance: &[f64]) -> Result<f64> {
        check_dim(self.n(), instance.len())?;
        Ok(dot(instance, &self.beta))
    }

    /// Signed distance `x̂ − l̂` to the threshold.
    pub fn score(&self, instance: &[f64]) -> Result<f64> {
        Ok(self.transform(instance)? - self.l_hat)
    }

    pub fn predict(&self, instance: &[f64]) -> Result<Label> {
        Ok(threshold_label(self.transform(instance)?, self.l_hat))
    }

    /// The same classifier with `β` scaled by `c` and centers re-projected.
    pub fn rescaled(&self, c: f64) -> LccModel {
        LccModel::from_parts(
            self.beta.iter().map(|b| b * c).collect(),
            self.center_neg.clone(),
            self.center_pos.clone(),
            self.lambda,
            self.sigma,
            self.epsilons.clone(),
            self.objective,
            self.lp_iterations,
        )
    }

    /// Index of the training instance contributing most slack penalty,
    /// `argmaxᵢ λ(εᵢ − σ)`, or `None` when every slack sits at `σ`.
    pub fn worst_outlier(&self) -> Option<usize> {
        let (idx, eps) = self
            .epsilons
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))?;
        (self.lambda * (eps - self.sigma) > 1e-9).then_some(idx)
    }
}

/// −1 strictly below the threshold, +1 otherwise.
pub fn threshold_label(value: f64, threshold: f64) -> Label {
    if value < threshold {
        Label::Neg
    } else {
        Label::Pos
    }
}
