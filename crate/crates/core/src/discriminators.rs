//! Rules that turn a projected scalar `x̂` into a class label.
//!
//! * `dist`: threshold at the midpoint of the projected centers.
//! * `1nn`: label of the nearest projected training value.
//! * `1sv`: a one-dimensional soft-margin SVM fitted on values rescaled so
//!   the projected centers sit `h` apart.

use std::str::FromStr;

use crate::data::Label;
use crate::error::{Error, Result};
use crate::lcc::threshold_label;

/// Center spacing the 1-D SVM sees after rescaling.
pub const DEFAULT_H: f64 = 10.0;
/// Hinge weight of the 1-D SVM.
pub const ONE_SV_LAMBDA: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscriminatorKind {
    Dist,
    OneNn,
    OneSv,
}

impl DiscriminatorKind {
    pub fn name(self) -> &'static str {
        match self {
            DiscriminatorKind::Dist => "dist",
            DiscriminatorKind::OneNn => "1nn",
            DiscriminatorKind::OneSv => "1sv",
        }
    }
}

impl FromStr for DiscriminatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dist" => Ok(DiscriminatorKind::Dist),
            "1nn" | "one_nn" => Ok(DiscriminatorKind::OneNn),
            "1sv" | "one_sv" => Ok(DiscriminatorKind::OneSv),
            other => Err(Error::InvalidParameter(format!(
                "unknown discriminator {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Discriminator {
    Dist {
        threshold: f64,
    },
    OneNn {
        /// `(value, label, training index)` sorted by value, then index.
        points: Vec<(f64, Label, usize)>,
    },
    OneSv {
        scale: f64,
        weight: f64,
        intercept: f64,
        h: f64,
    },
}

/// Fits `kind` on projected training values. `c_neg_hat`/`c_pos_hat` are the
/// projected class centers of the model that produced them.
pub fn fit_discriminator(
    kind: DiscriminatorKind,
    projected: &[(f64, Label)],
    c_neg_hat: f64,
    c_pos_hat: f64,
) -> Result<Discriminator> {
    fit_discriminator_with_h(kind, projected, c_neg_hat, c_pos_hat, DEFAULT_H)
}

pub fn fit_discriminator_with_h(
    kind: DiscriminatorKind,
    projected: &[(f64, Label)],
    c_neg_hat: f64,
    c_pos_hat: f64,
    h: f64,
) -> Result<Discriminator> {
    if projected.is_empty() {
        return Err(Error::InvalidParameter(
            "no projected training values".into(),
        ));
    }
    if projected.iter().any(|(v, _)| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "projected training value is not finite".into(),
        ));
    }
    match kind {
        DiscriminatorKind::Dist => Ok(Discriminator::Dist {
            threshold: (c_neg_hat + c_pos_hat) / 2.0,
        }),
        DiscriminatorKind::OneNn => {
            let mut points: Vec<(f64, Label, usize)> = projected
                .iter()
                .enumerate()
                .map(|(i, &(v, l))| (v, l, i))
                .collect();
            points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
            Ok(Discriminator::OneNn { points })
        }
        DiscriminatorKind::OneSv => {
            let gap = c_pos_hat - c_neg_hat;
            if !(gap > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "1sv needs the +1 center above the −1 center, got gap {gap}"
                )));
            }
            if !(h > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "h must be positive, got {h}"
                )));
            }
            let scale = h / gap;
            let values: Vec<f64> = projected.iter().map(|(v, _)| v * scale).collect();
            let labels: Vec<Label> = projected.iter().map(|(_, l)| *l).collect();
            let (weight, intercept) = solve_svm_1d(&values, &labels, ONE_SV_LAMBDA)?;
            Ok(Discriminator::OneSv {
                scale,
                weight,
                intercept,
                h,
            })
        }
    }
}

impl Discriminator {
    pub fn kind(&self) -> DiscriminatorKind {
        match self {
            Discriminator::Dist { .. } => DiscriminatorKind::Dist,
            Discriminator::OneNn { .. } => DiscriminatorKind::OneNn,
            Discriminator::OneSv { .. } => DiscriminatorKind::OneSv,
        }
    }

    pub fn discriminate(&self, value: f64) -> Result<Label> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(
                "cannot discriminate a non-finite value".into(),
            ));
        }
        Ok(match self {
            Discriminator::Dist { threshold } => threshold_label(value, *threshold),
            Discriminator::OneNn { points } => nearest(points, value, None)
                .map(|(l, _)| l)
                .expect("fitted on data"),
            Discriminator::OneSv { .. } => threshold_label(self.score(value)?, 0.0),
        })
    }

    /// Continuous score whose sign agrees with [`Self::discriminate`] away
    /// from ties; larger means more +1-like.
    pub fn score(&self, value: f64) -> Result<f64> {
        Ok(match self {
            Discriminator::Dist { threshold } => value - threshold,
            Discriminator::OneNn { points } => {
                let d_neg =
                    nearest(points, value, Some(Label::Neg)).map_or(f64::INFINITY, |(_, d)| d);
                let d_pos =
                    nearest(points, value, Some(Label::Pos)).map_or(f64::INFINITY, |(_, d)| d);
                d_neg - d_pos
            }
            Discriminator::OneSv {
                scale,
                weight,
                intercept,
                ..
            } => weight * (scale * value) + intercept,
        })
    }
}

/// Nearest stored point (optionally of one class) and its distance; equal
/// distances resolve to the lowest training index.
fn nearest(
    points: &[(f64, Label, usize)],
    value: f64,
    class: Option<Label>,
) -> Option<(Label, f64)> {
    let mut best: Option<(f64, usize, Label)> = None;
    let split = points.partition_point(|p| p.0 < value);
    // Walk outwards in both directions until distances exceed the best.
    let keep = |p: &&(f64, Label, usize)| class.is_none_or(|c| c == p.1);
    for p in points[split..].iter().filter(keep) {
        if !visit(&mut best, p, value) {
            break;
        }
    }
    for p in points[..split].iter().rev().filter(keep) {
        if !visit(&mut best, p, value) {
            break;
        }
    }
    best.map(|(d, _, l)| (l, d))
}

/// Offers `p` as the nearest candidate; false once `p` is farther than the best.
fn visit(best: &mut Option<(f64, usize, Label)>, p: &(f64, Label, usize), value: f64) -> bool {
    let d = (p.0 - value).abs();
    match *best {
        Some((bd, _, _)) if d > bd => return false,
        Some((bd, bi, _)) if d == bd && p.2 > bi => {}
        _ => *best = Some((d, p.2, p.1)),
    }
    true
}

/// Hinge part of the 1-D SVM objective, `(1/m) Σ max(0, 1 − yᵢ(w vᵢ + r))`.
fn hinge(values: &[f64], labels: &[Label], w: f64, r: f64) -> f64 {
    values
        .iter()
        .zip(labels)
        .map(|(v, y)| (1.0 - y.sign() * (w * v + r)).max(0.0))
        .sum::<f64>()
        / values.len() as f64
}

/// `λw² + (1/m) Σ max(0, 1 − yᵢ(w vᵢ + r))`.
pub fn svm_1d_objective(values: &[f64], labels: &[Label], lambda: f64, w: f64, r: f64) -> f64 {
    lambda * w * w + hinge(values, labels, w, r)
}

/// Best intercept for a fixed slope, with its hinge value.
///
/// With `rᵢ = yᵢ − w vᵢ` each hinge term is `max(0, yᵢ(rᵢ − r))`, so the
/// hinge sum has slope `(k − P)/m` after passing `k` sorted kinks (`P`
/// positives). It is flat between the `P`-th and `(P+1)`-th smallest kink;
/// the midpoint of that interval is returned.
pub(crate) fn best_intercept(
    values: &[f64],
    labels: &[Label],
    positives: usize,
    w: f64,
) -> (f64, f64) {
    let mut kinks: Vec<f64> = values
        .iter()
        .zip(labels)
        .map(|(v, y)| y.sign() - w * v)
        .collect();
    kinks.sort_by(f64::total_cmp);
    let r = 0.5 * (kinks[positives - 1] + kinks[positives]);
    (r, hinge(values, labels, w, r))
}

/// Exact minimizer of `λw² + (1/m) Σ max(0, 1 − yᵢ(w vᵢ + r))`.
///
/// Minimizing out `r` leaves `F(w) = λw² + h(w)` with `h` convex and
/// piecewise linear; its breakpoints lie where two kinks `rᵢ(w)` cross,
/// i.e. at `w = 2 / (vᵢ − vⱼ)` for a positive `i` and negative `j`, plus
/// `w = 0`. A binary search over the sorted breakpoints finds the best one,
/// and the stationary point of the quadratic on each adjacent linear piece
/// is checked in closed form.
pub fn solve_svm_1d(values: &[f64], labels: &[Label], lambda: f64) -> Result<(f64, f64)> {
    if values.len() != labels.len() || values.is_empty() {
        return Err(Error::InvalidParameter(
            "values and labels must be nonempty and equally long".into(),
        ));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let positives = labels.iter().filter(|&&l| l == Label::Pos).count();
    if positives == 0 {
        return Err(Error::MissingClass(1));
    }
    if positives == labels.len() {
        return Err(Error::MissingClass(-1));
    }

    let pos: Vec<f64> = values
        .iter()
        .zip(labels)
        .filter(|(_, l)| **l == Label::Pos)
        .map(|(v, _)| *v)
        .collect();
    let neg: Vec<f64> = values
        .iter()
        .zip(labels)
        .filter(|(_, l)| **l == Label::Neg)
        .map(|(v, _)| *v)
        .collect();
    let mut breaks = vec![0.0];
    for p in &pos {
        for q in &neg {
            if p != q {
                breaks.push(2.0 / (p - q));
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let h = |w: f64| best_intercept(values, labels, positives, w).1;
    let f = |w: f64| lambda * w * w + h(w);

    // F is convex, so its values on the sorted breakpoints are unimodal.
    let (mut lo, mut hi) = (0usize, breaks.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if f(breaks[mid]) <= f(breaks[mid + 1]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let b = lo;
    let mut best_w = breaks[b];
    let mut best_f = f(best_w);

    let left = if b > 0 {
        breaks[b - 1]
    } else {
        breaks[b] - 1.0
    };
    let right = if b + 1 < breaks.len() {
        breaks[b + 1]
    } else {
        breaks[b] + 1.0
    };
    for (a, c, open_left, open_right) in [
        (left, breaks[b], b == 0, false),
        (breaks[b], right, false, b + 1 == breaks.len()),
    ] {
        let slope = (h(c) - h(a)) / (c - a);
        let mut w = -slope / (2.0 * lambda);
        if !open_left {
            w = w.max(a);
        }
        if !open_right {
            w = w.min(c);
        }
        let fw = f(w);
        if fw < best_f {
            best_f = fw;
            best_w = w;
        }
    }
    let (r, _) = best_intercept(values, labels, positives, best_w);
    Ok((best_w, r))
}
