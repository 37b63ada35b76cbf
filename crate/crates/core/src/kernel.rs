//! Kernelized LCC.
//!
//! Writing `β = Σ αᵢ x⁽ⁱ⁾` turns every projection into a weighted sum of
//! kernel evaluations, `x̂ = Σ αᵢ κ(x, x⁽ⁱ⁾)`, so the same linear program
//! is solved over `α ∈ [−1, 1]ᵐ` with Gram-matrix rows in place of the
//! feature rows.

use std::fmt;
use std::str::FromStr;

use crate::data::{check_dim, dot, Dataset, Label};
use crate::error::{Error, Result};
use crate::lcc::{assemble_centralization_lp, infeasible, threshold_label};
use crate::lp::{self, LpProblem, LpStatus};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelSpec {
    Linear,
    /// `exp(−‖x − z‖² / (2 w²))` with `w = rbf_width`.
    Rbf {
        rbf_width: f64,
    },
}

impl KernelSpec {
    pub fn rbf(rbf_width: f64) -> Result<KernelSpec> {
        if !(rbf_width > 0.0) || !rbf_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rbf width must be positive, got {rbf_width}"
            )));
        }
        Ok(KernelSpec::Rbf { rbf_width })
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Linear => "linear",
            KernelSpec::Rbf { .. } => "rbf",
        }
    }

    fn eval_unchecked(&self, x: &[f64], z: &[f64]) -> f64 {
        match *self {
            KernelSpec::Linear => dot(x, z),
            KernelSpec::Rbf { rbf_width } => {
                let d2: f64 = x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
                (-d2 / (2.0 * rbf_width * rbf_width)).exp()
            }
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Linear => write!(f, "linear"),
            KernelSpec::Rbf { rbf_width } => write!(f, "rbf({rbf_width})"),
        }
    }
}

/// How the RBF width is chosen when training.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RbfWidth {
    Fixed(f64),
    /// Median pairwise Euclidean distance of the training set.
    Median,
}

impl FromStr for RbfWidth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "median" {
            return Ok(RbfWidth::Median);
        }
        let w: f64 = s.parse().map_err(|_| {
            Error::InvalidParameter(format!(
                "rbf width must be a number or \"median\", got {s:?}"
            ))
        })?;
        KernelSpec::rbf(w)?;
        Ok(RbfWidth::Fixed(w))
    }
}

impl RbfWidth {
    pub fn resolve(self, train: &Dataset) -> Result<f64> {
        match self {
            RbfWidth::Fixed(w) => KernelSpec::rbf(w).map(|_| w),
            RbfWidth::Median => {
                let w = median_pairwise_distance(train);
                if w > 0.0 {
                    Ok(w)
                } else {
                    Err(Error::InvalidParameter(
                        "median pairwise distance is zero; give an explicit rbf width".into(),
                    ))
                }
            }
        }
    }
}

/// Median of `‖x⁽ⁱ⁾ − x⁽ʲ⁾‖` over all pairs `i < j`; 0 with fewer than two rows.
pub fn median_pairwise_distance(data: &Dataset) -> f64 {
    let m = data.m();
    if m < 2 {
        return 0.0;
    }
    let mut d = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            let s: f64 = data
                .row(i)
                .iter()
                .zip(data.row(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            d.push(s.sqrt());
        }
    }
    let k = d.len();
    let (_, hi, _) = d.select_nth_unstable_by(k / 2, f64::total_cmp);
    let hi = *hi;
    if k % 2 == 1 {
        hi
    } else {
        let lo = d[..k / 2].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    }
}

pub fn kernel_eval(spec: &KernelSpec, x: &[f64], z: &[f64]) -> Result<f64> {
    check_dim(x.len(), z.len())?;
    Ok(spec.eval_unchecked(x, z))
}

/// Row-major `m×m` Gram matrix.
pub fn gram(spec: &KernelSpec, data: &Dataset) -> Vec<f64> {
    let m = data.m();
    let mut k = vec![0.0; m * m];
    for i in 0..m {
        for j in i..m {
            let v = spec.eval_unchecked(data.row(i), data.row(j));
            k[i * m + j] = v;
            k[j * m + i] = v;
        }
    }
    k
}

/// Per-class column means of the Gram matrix: `K̄_c[i] = mean_{j: yⱼ=c} K[j][i]`.
fn class_gram_means(k: &[f64], labels: &[Label]) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = labels.len();
    let mut sums = [vec![0.0; m], vec![0.0; m]];
    let mut counts = [0usize; 2];
    for (j, label) in labels.iter().enumerate() {
        let c = usize::from(*label == Label::Pos);
        counts[c] += 1;
        sums[c]
            .iter_mut()
            .zip(&k[j * m..(j + 1) * m])
            .for_each(|(s, v)| *s += v);
    }
    if counts[0] == 0 {
        return Err(Error::MissingClass(-1));
    }
    if counts[1] == 0 {
        return Err(Error::MissingClass(1));
    }
    let [mut neg, mut pos] = sums;
    neg.iter_mut().for_each(|v| *v /= counts[0] as f64);
    pos.iter_mut().for_each(|v| *v /= counts[1] as f64);
    Ok((neg, pos))
}

/// The kernel program: `2m` variables (`α`, then `ε`) and `m + 1` rows.
pub fn assemble_klcc_lp(
    train: &Dataset,
    spec: &KernelSpec,
    lambda: f64,
    sigma: f64,
) -> Result<LpProblem> {
    let k = gram(spec, train);
    assemble_from_gram(train, &k, lambda, sigma).map(|(lp, _, _)| lp)
}

fn assemble_from_gram(
    train: &Dataset,
    k: &[f64],
    lambda: f64,
    sigma: f64,
) -> Result<(LpProblem, Vec<f64>, Vec<f64>)> {
    train.require_both_classes()?;
    let m = train.m();
    let (neg, pos) = class_gram_means(k, train.labels())?;
    let lp = assemble_centralization_lp(
        train.labels(),
        |i| k[i * m..(i + 1) * m].to_vec(),
        &neg,
        &pos,
        lambda,
        sigma,
    )?;
    Ok((lp, neg, pos))
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelLccModel {
    pub alphas: Vec<f64>,
    /// Training rows, row-major, `alphas.len() × n`.
    pub support: Vec<f64>,
    pub n: usize,
    pub kernel: KernelSpec,
    pub c_neg_hat: f64,
    pub c_pos_hat: f64,
    pub l_hat: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub epsilons: Vec<f64>,
    pub objective: f64,
}

pub fn train_klcc(
    train: &Dataset,
    spec: &KernelSpec,
    lambda: f64,
    sigma: f64,
) -> Result<KernelLccModel> {
    if let KernelSpec::Rbf { rbf_width } = spec {
        KernelSpec::rbf(*rbf_width)?;
    }
    let k = gram(spec, train);
    let (lp, neg, pos) = assemble_from_gram(train, &k, lambda, sigma)?;
    let solution = lp::solve(&lp)?;
    match solution.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(infeasible(&neg, &pos, sigma)),
        LpStatus::Unbounded => return Err(Error::Unbounded),
    }
    let m = train.m();
    let alphas = solution.x[..m].to_vec();
    let epsilons = solution.x[m..].to_vec();
    let c_neg_hat = dot(&neg, &alphas);
    let c_pos_hat = dot(&pos, &alphas);
    Ok(KernelLccModel {
        alphas,
        support: train.features_flat().to_vec(),
        n: train.n(),
        kernel: *spec,
        c_neg_hat,
        c_pos_hat,
        l_hat: (c_neg_hat + c_pos_hat) / 2.0,
        lambda,
        sigma,
        epsilons,
        objective: solution.objective_value,
    })
}

impl KernelLccModel {
    /// Rebuilds a model from stored parts; the projected centers are
    /// recomputed from the support rows and their labels.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        alphas: Vec<f64>,
        support: Vec<f64>,
        labels: &[Label],
        n: usize,
        kernel: KernelSpec,
        lambda: f64,
        sigma: f64,
        epsilons: Vec<f64>,
        objective: f64,
    ) -> Result<KernelLccModel> {
        let data = Dataset::from_flat(support, n, labels.to_vec())?;
        check_dim(data.m(), alphas.len())?;
        let k = gram(&kernel, &data);
        let (neg, pos) = class_gram_means(&k, labels)?;
        let c_neg_hat = dot(&neg, &alphas);
        let c_pos_hat = dot(&pos, &alphas);
        Ok(KernelLccModel {
            alphas,
            support: data.features_flat().to_vec(),
            n,
            kernel,
            c_neg_hat,
            c_pos_hat,
            l_hat: (c_neg_hat + c_pos_hat) / 2.0,
            lambda,
            sigma,
            epsilons,
            objective,
        })
    }

    /// `Σ αᵢ κ(x, x⁽ⁱ⁾)`.
    pub fn transform(&self, instance: &[f64]) -> Result<f64> {
        check_dim(self.n, instance.len())?;
        Ok(self
            .alphas
            .iter()
            .zip(self.support.chunks_exact(self.n.max(1)))
            .map(|(a, x)| a * self.kernel.eval_unchecked(instance, x))
            .sum())
    }

    pub fn score(&self, instance: &[f64]) -> Result<f64> {
        Ok(self.transform(instance)? - self.l_hat)
    }

    pub fn predict(&self, instance: &[f64]) -> Result<Label> {
        Ok(threshold_label(self.transform(instance)?, self.l_hat))
    }
}

pub fn kpredict(model: &KernelLccModel, instance: &[f64]) -> Result<Label> {
    model.predict(instance)
}

pub fn kscore(model: &KernelLccModel, instance: &[f64]) -> Result<f64> {
    model.score(instance)
}
