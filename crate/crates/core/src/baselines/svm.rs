//! Linear soft-margin SVM, `min λ‖ω‖² + (1/m) Σ max(0, 1 − yᵢ(xᵢ·ω + r))`.
//!
//! `ω` is learned by seeded stochastic subgradient steps of length
//! `1/(2λt)` with projection onto the ball `‖ω‖ ≤ 1/√λ` that contains the
//! optimum. After every epoch the iterates of that epoch are averaged, the
//! intercept is set to its exact optimum for the averaged `ω`, and the best
//! model seen so far is kept.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{check_dim, dot, Dataset, Label};
use crate::discriminators::best_intercept;
use crate::error::{Error, Result};
use crate::lcc::threshold_label;

pub const DEFAULT_SVM_LAMBDA: f64 = 1.0;
pub const DEFAULT_SVM_EPOCHS: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct SvmModel {
    pub weight: Vec<f64>,
    pub intercept: f64,
    pub lambda: f64,
    /// Best objective after each epoch; non-increasing.
    pub objective_trace: Vec<f64>,
}

impl SvmModel {
    pub fn score(&self, instance: &[f64]) -> Result<f64> {
        check_dim(self.weight.len(), instance.len())?;
        Ok(dot(instance, &self.weight) + self.intercept)
    }

    /// `sign(x·ω + r)` with 0 mapped to +1.
    pub fn predict(&self, instance: &[f64]) -> Result<Label> {
        Ok(threshold_label(self.score(instance)?, 0.0))
    }

    pub fn objective(&self) -> f64 {
        *self
            .objective_trace
            .last()
            .expect("trained model has a trace")
    }
}

pub fn svm_objective(train: &Dataset, weight: &[f64], intercept: f64, lambda: f64) -> f64 {
    let hinge: f64 = train
        .rows()
        .zip(train.labels())
        .map(|(x, y)| (1.0 - y.sign() * (dot(x, weight) + intercept)).max(0.0))
        .sum();
    lambda * dot(weight, weight) + hinge / train.m() as f64
}

pub fn train_linear_svm(
    train: &Dataset,
    lambda: f64,
    epochs: usize,
    seed: u64,
) -> Result<SvmModel> {
    if epochs == 0 {
        return Err(Error::InvalidParameter(
            "svm needs at least one epoch".into(),
        ));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "svm lambda must be positive, got {lambda}"
        )));
    }
    train.require_both_classes()?;
    let (m, n) = (train.m(), train.n());
    let positives = train.class_counts().1;
    let radius = 1.0 / lambda.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..m).collect();

    let mut w = vec![0.0; n];
    let mut r = 0.0;
    let mut t = 0usize;
    let mut best: Option<(Vec<f64>, f64, f64)> = None;
    let mut trace = Vec::with_capacity(epochs);
    let mut avg = vec![0.0; n];
    let mut projected = vec![0.0; m];

    for _ in 0..epochs {
        order.shuffle(&mut rng);
        avg.iter_mut().for_each(|a| *a = 0.0);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (2.0 * lambda * t as f64);
            let x = train.row(i);
            let y = train.label(i).sign();
            let active = y * (dot(x, &w) + r) < 1.0;
            w.iter_mut().for_each(|v| *v *= 1.0 - 2.0 * eta * lambda);
            if active {
                w.iter_mut().zip(x).for_each(|(v, xj)| *v += eta * y * xj);
                r += eta * y;
            }
            let norm = dot(&w, &w).sqrt();
            if norm > radius {
                w.iter_mut().for_each(|v| *v *= radius / norm);
            }
            avg.iter_mut().zip(&w).for_each(|(a, v)| *a += v);
        }
        avg.iter_mut().for_each(|a| *a /= m as f64);

        for (p, x) in projected.iter_mut().zip(train.rows()) {
            *p = dot(x, &avg);
        }
        let (intercept, _) = best_intercept(&projected, train.labels(), positives, 1.0);
        let obj = svm_objective(train, &avg, intercept, lambda);
        if best.as_ref().is_none_or(|b| obj < b.2) {
            best = Some((avg.clone(), intercept, obj));
        }
        trace.push(best.as_ref().expect("set above").2);
        // Continue from the averaged point with the exact intercept.
        w.copy_from_slice(&avg);
        r = intercept;
    }
    let (weight, intercept, _) = best.expect("at least one epoch");
    Ok(SvmModel {
        weight,
        intercept,
        lambda,
        objective_trace: trace,
    })
}
