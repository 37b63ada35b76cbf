//! The norm-based formulation the linear program is derived from.
//!
//! Slacks are eliminated in closed form,
//! `εᵢ = max(σ, yᵢ(|x̂ᵢ − Ĉ₁| − |x̂ᵢ − Ĉ₋₁|))`, leaving a nonsmooth objective
//! in `β` alone that is minimized by projected subgradient descent from
//! several starting points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_hyperparameters, class_centers};
use crate::data::{check_dim, dot, Dataset, Label};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FqccOptions {
    pub restarts: usize,
    pub iterations: usize,
    /// First step length; later steps shrink as `1/√k`.
    pub initial_step: f64,
}

impl Default for FqccOptions {
    fn default() -> Self {
        FqccOptions {
            restarts: 8,
            iterations: 1000,
            initial_step: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FqccModel {
    pub beta: Vec<f64>,
    pub c_neg_hat: f64,
    pub c_pos_hat: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub objective_achieved: f64,
}

impl FqccModel {
    pub fn from_parts(
        beta: Vec<f64>,
        center_neg: &[f64],
        center_pos: &[f64],
        lambda: f64,
        sigma: f64,
        objective_achieved: f64,
    ) -> Self {
        FqccModel {
            c_neg_hat: dot(center_neg, &beta),
            c_pos_hat: dot(center_pos, &beta),
            beta,
            lambda,
            sigma,
            objective_achieved,
        }
    }

    pub fn transform(&self, instance: &[f64]) -> Result<f64> {
        check_dim(self.beta.len(), instance.len())?;
        Ok(dot(instance, &self.beta))
    }

    /// `|x̂ − Ĉ₋₁| − |x̂ − Ĉ₁|`: positive when nearer the +1 center.
    pub fn score(&self, instance: &[f64]) -> Result<f64> {
        let v = self.transform(instance)?;
        Ok((v - self.c_neg_hat).abs() - (v - self.c_pos_hat).abs())
    }

    /// −1 when at least as close to `Ĉ₋₁` as to `Ĉ₁`.
    pub fn predict(&self, instance: &[f64]) -> Result<Label> {
        let v = self.transform(instance)?;
        Ok(nearest_center_label(v, self.c_neg_hat, self.c_pos_hat))
    }
}

pub fn nearest_center_label(value: f64, c_neg_hat: f64, c_pos_hat: f64) -> Label {
    if (value - c_neg_hat).abs() <= (value - c_pos_hat).abs() {
        Label::Neg
    } else {
        Label::Pos
    }
}

struct Problem<'a> {
    train: &'a Dataset,
    center_neg: Vec<f64>,
    center_pos: Vec<f64>,
    lambda: f64,
    sigma: f64,
}

impl Problem<'_> {
    /// Closed-form slack of every training instance at `beta`.
    fn slacks(&self, beta: &[f64]) -> Vec<f64> {
        let cn = dot(&self.center_neg, beta);
        let cp = dot(&self.center_pos, beta);
        self.train
            .rows()
            .zip(self.train.labels())
            .map(|(x, y)| {
                let v = dot(x, beta);
                (y.sign() * ((v - cp).abs() - (v - cn).abs())).max(self.sigma)
            })
            .collect()
    }

    fn objective(&self, beta: &[f64]) -> f64 {
        let gap = dot(&self.center_neg, beta) - dot(&self.center_pos, beta);
        -gap.abs() + self.lambda * self.slacks(beta).iter().sum::<f64>()
    }

    fn subgradient(&self, beta: &[f64], grad: &mut [f64]) {
        let n = beta.len();
        let cn = dot(&self.center_neg, beta);
        let cp = dot(&self.center_pos, beta);
        let s = -(cn - cp).signum();
        for j in 0..n {
            grad[j] = s * (self.center_neg[j] - self.center_pos[j]);
        }
        for (x, y) in self.train.rows().zip(self.train.labels()) {
            let v = dot(x, beta);
            let h = y.sign() * ((v - cp).abs() - (v - cn).abs());
            if h <= self.sigma {
                continue;
            }
            let sp = (v - cp).signum();
            let sn = (v - cn).signum();
            let w = self.lambda * y.sign();
            for j in 0..n {
                grad[j] +=
                    w * (sp * (x[j] - self.center_pos[j]) - sn * (x[j] - self.center_neg[j]));
            }
        }
    }
}

/// Value of the penalized norm objective at `beta`.
pub fn fqcc_objective(train: &Dataset, beta: &[f64], lambda: f64, sigma: f64) -> Result<f64> {
    Ok(problem(train, lambda, sigma)?.objective(beta))
}

/// Closed-form slacks at `beta`.
pub fn fqcc_slacks(train: &Dataset, beta: &[f64], lambda: f64, sigma: f64) -> Result<Vec<f64>> {
    Ok(problem(train, lambda, sigma)?.slacks(beta))
}

fn problem(train: &Dataset, lambda: f64, sigma: f64) -> Result<Problem<'_>> {
    check_hyperparameters(lambda, sigma)?;
    let (center_neg, center_pos) = class_centers(train)?;
    Ok(Problem {
        train,
        center_neg,
        center_pos,
        lambda,
        sigma,
    })
}

pub fn train_fqcc(
    train: &Dataset,
    lambda: f64,
    sigma: f64,
    restarts: usize,
    seed: u64,
) -> Result<FqccModel> {
    let options = FqccOptions {
        restarts,
        ..FqccOptions::default()
    };
    train_fqcc_with(train, lambda, sigma, &options, seed)
}

pub fn train_fqcc_with(
    train: &Dataset,
    lambda: f64,
    sigma: f64,
    options: &FqccOptions,
    seed: u64,
) -> Result<FqccModel> {
    if options.restarts == 0 {
        return Err(Error::InvalidParameter(
            "fqcc needs at least one restart".into(),
        ));
    }
    let problem = problem(train, lambda, sigma)?;
    let n = train.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut grad = vec![0.0; n];

    for restart in 0..options.restarts {
        let mut beta: Vec<f64> = if restart == 0 {
            problem
                .center_pos
                .iter()
                .zip(&problem.center_neg)
                .map(|(p, q)| (p - q).clamp(-1.0, 1.0))
                .collect()
        } else {
            (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
        };
        let (mut run_best, mut run_obj) = (beta.clone(), problem.objective(&beta));
        for k in 0..options.iterations {
            problem.subgradient(&beta, &mut grad);
            let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if norm == 0.0 {
                break;
            }
            let step = options.initial_step / ((k + 1) as f64).sqrt() / norm;
            for (b, g) in beta.iter_mut().zip(&grad) {
                *b = (*b - step * g).clamp(-1.0, 1.0);
            }
            let obj = problem.objective(&beta);
            if obj < run_obj {
                run_obj = obj;
                run_best.copy_from_slice(&beta);
            }
        }
        if best.as_ref().is_none_or(|(_, b)| run_obj < *b) {
            best = Some((run_best, run_obj));
        }
    }
    let (beta, objective) = best.expect("at least one restart");
    Ok(FqccModel::from_parts(
        beta,
        &problem.center_neg,
        &problem.center_pos,
        lambda,
        sigma,
        objective,
    ))
}
