//! Regularized linear discriminant analysis.
//!
//! `w = S_reg⁻¹ (μ₂ − μ₁)` with `S_reg = λ (Σ₁ + Σ₂) + (1 − λ) I`, where
//! class 1 is −1 and class 2 is +1. The threshold is
//! `k = ½ μ₂ᵀ Σ₂,reg⁻¹ μ₂ − ½ μ₁ᵀ Σ₁,reg⁻¹ μ₁` and an instance is +1 when
//! `x·w ≥ k`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::data::{check_dim, dot, Dataset, Label};
use crate::error::{Error, Result};
use crate::lcc::threshold_label;

pub const DEFAULT_LDA_LAMBDA: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct LdaModel {
    pub weight: Vec<f64>,
    pub threshold: f64,
    pub lambda_reg: f64,
}

impl LdaModel {
    pub fn score(&self, instance: &[f64]) -> Result<f64> {
        check_dim(self.weight.len(), instance.len())?;
        Ok(dot(instance, &self.weight) - self.threshold)
    }

    pub fn predict(&self, instance: &[f64]) -> Result<Label> {
        check_dim(self.weight.len(), instance.len())?;
        Ok(threshold_label(dot(instance, &self.weight), self.threshold))
    }
}

/// Mean and population covariance of the rows in `idx`.
fn moments(data: &Dataset, idx: &[usize]) -> (DVector<f64>, DMatrix<f64>) {
    let n = data.n();
    let mut mean = DVector::zeros(n);
    for &i in idx {
        mean += DVector::from_column_slice(data.row(i));
    }
    mean /= idx.len() as f64;
    let mut cov = DMatrix::zeros(n, n);
    for &i in idx {
        let d = DVector::from_column_slice(data.row(i)) - &mean;
        cov += &d * d.transpose();
    }
    cov /= idx.len() as f64;
    (mean, cov)
}

fn regularize(s: &DMatrix<f64>, lambda: f64) -> DMatrix<f64> {
    let n = s.nrows();
    let mut r = s * lambda + DMatrix::identity(n, n) * (1.0 - lambda);
    // Symmetrize against rounding.
    r = (&r + r.transpose()) * 0.5;
    r
}

/// `A⁻¹ b` for symmetric PSD `A`, or `None` when `A` is numerically singular.
fn solve_spd(a: DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let eig = SymmetricEigen::new(a);
    let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-12 * top.max(1.0);
    if eig.eigenvalues.iter().any(|&v| v <= floor) {
        return None;
    }
    let q = &eig.eigenvectors;
    let coef = q.transpose() * b;
    let scaled = DVector::from_iterator(
        coef.len(),
        coef.iter().zip(eig.eigenvalues.iter()).map(|(c, v)| c / v),
    );
    Some(q * scaled)
}

/// `bᵀ A⁺ b` using the pseudo-inverse; a singular class covariance only
/// shifts the threshold, so it is tolerated here.
fn quad_pinv(a: DMatrix<f64>, b: &DVector<f64>) -> f64 {
    let eig = SymmetricEigen::new(a);
    let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-12 * top.max(1.0);
    let coef = eig.eigenvectors.transpose() * b;
    coef.iter()
        .zip(eig.eigenvalues.iter())
        .filter(|(_, v)| **v > floor)
        .map(|(c, v)| c * c / v)
        .sum()
}

pub fn train_lda(train: &Dataset, lambda_reg: f64) -> Result<LdaModel> {
    if !(0.0..=1.0).contains(&lambda_reg) {
        return Err(Error::InvalidParameter(format!(
            "lda lambda must lie in [0, 1], got {lambda_reg}"
        )));
    }
    train.require_both_classes()?;
    if train.n() == 0 {
        return Err(Error::InvalidParameter(
            "lda needs at least one feature".into(),
        ));
    }
    let (mu1, cov1) = moments(train, &train.class_indices(Label::Neg));
    let (mu2, cov2) = moments(train, &train.class_indices(Label::Pos));
    let s = regularize(&(&cov1 + &cov2), lambda_reg);
    let w = solve_spd(s, &(&mu2 - &mu1)).ok_or(Error::SingularScatter)?;
    let k = 0.5 * quad_pinv(regularize(&cov2, lambda_reg), &mu2)
        - 0.5 * quad_pinv(regularize(&cov1, lambda_reg), &mu1);
    if w.iter().any(|v| !v.is_finite()) || !k.is_finite() {
        return Err(Error::SingularScatter);
    }
    Ok(LdaModel {
        weight: w.iter().copied().collect(),
        threshold: k,
        lambda_reg,
    })
}
