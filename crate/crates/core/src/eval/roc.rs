use crate::data::Label;
use crate::error::{Error, Result};

use super::stats::midranks;

#[derive(Clone, Debug, PartialEq)]
pub struct RocResult {
    pub auc: f64,
    /// `(false-positive rate, true-positive rate)` from `(0, 0)` to `(1, 1)`,
    /// one point per distinct score threshold.
    pub curve: Vec<(f64, f64)>,
}

/// ROC curve and AUC; the AUC is the rank statistic with midranks, i.e. the
/// probability a random positive outscores a random negative, ties ½.
pub fn roc_auc(scores: &[f64], labels: &[Label]) -> Result<RocResult> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            found: scores.len(),
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidParameter("scores must be finite".into()));
    }
    let pos = labels.iter().filter(|&&l| l == Label::Pos).count();
    let neg = labels.len() - pos;
    if pos == 0 {
        return Err(Error::MissingClass(1));
    }
    if neg == 0 {
        return Err(Error::MissingClass(-1));
    }

    let ranks = midranks(scores);
    let rank_sum: f64 = ranks
        .iter()
        .zip(labels)
        .filter(|(_, &l)| l == Label::Pos)
        .map(|(r, _)| r)
        .sum();
    let (p, n) = (pos as f64, neg as f64);
    let auc = (rank_sum - p * (p + 1.0) / 2.0) / (p * n);

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut curve = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            match labels[order[i]] {
                Label::Pos => tp += 1,
                Label::Neg => fp += 1,
            }
            i += 1;
        }
        curve.push((fp as f64 / n, tp as f64 / p));
    }
    Ok(RocResult { auc, curve })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trapezoid(curve: &[(f64, f64)]) -> f64 {
        curve
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
            .sum()
    }

    fn labels(ys: &[bool]) -> Vec<Label> {
        ys.iter()
            .map(|&b| if b { Label::Pos } else { Label::Neg })
            .collect()
    }

    #[test]
    fn perfect_and_tied() {
        let l = labels(&[false, false, true, true]);
        assert_eq!(roc_auc(&[0.1, 0.2, 0.8, 0.9], &l).unwrap().auc, 1.0);
        assert_eq!(roc_auc(&[0.9, 0.8, 0.2, 0.1], &l).unwrap().auc, 0.0);
        let tied = roc_auc(&[3.0; 4], &l).unwrap();
        assert_eq!(tied.auc, 0.5);
        assert_eq!(tied.curve, vec![(0.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn errors() {
        assert!(roc_auc(&[1.0, 2.0], &labels(&[true, true])).is_err());
        assert!(roc_auc(&[1.0], &labels(&[true, false])).is_err());
        assert!(roc_auc(&[f64::NAN, 1.0], &labels(&[true, false])).is_err());
    }

    proptest! {
        #[test]
        fn curve_shape_and_area(
            pts in prop::collection::vec((0i32..8, any::<bool>()), 2..50),
        ) {
            let ys: Vec<bool> = pts.iter().map(|p| p.1).collect();
            prop_assume!(ys.iter().any(|&b| b) && ys.iter().any(|&b| !b));
            let s: Vec<f64> = pts.iter().map(|p| p.0 as f64).collect();
            let r = roc_auc(&s, &labels(&ys)).unwrap();
            prop_assert_eq!(r.curve[0], (0.0, 0.0));
            prop_assert_eq!(*r.curve.last().unwrap(), (1.0, 1.0));
            prop_assert!(r.curve.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 >= w[0].1));
            prop_assert!((trapezoid(&r.curve) - r.auc).abs() <= 1e-9);
        }

        #[test]
        fn invariant_under_increasing_maps(
            pts in prop::collection::vec((-5.0f64..5.0, any::<bool>()), 2..50),
        ) {
            let ys: Vec<bool> = pts.iter().map(|p| p.1).collect();
            prop_assume!(ys.iter().any(|&b| b) && ys.iter().any(|&b| !b));
            let l = labels(&ys);
            let s: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let a = roc_auc(&s, &l).unwrap().auc;
            let cubed: Vec<f64> = s.iter().map(|v| v * v * v + 2.0 * v).collect();
            let expd: Vec<f64> = s.iter().map(|v| v.exp()).collect();
            prop_assert_eq!(roc_auc(&cubed, &l).unwrap().auc, a);
            prop_assert_eq!(roc_auc(&expd, &l).unwrap().auc, a);
        }

        #[test]
        fn negating_labels_and_scores_preserves_auc(
            pts in prop::collection::vec((0i32..6, any::<bool>()), 2..50),
        ) {
            let ys: Vec<bool> = pts.iter().map(|p| p.1).collect();
            prop_assume!(ys.iter().any(|&b| b) && ys.iter().any(|&b| !b));
            let s: Vec<f64> = pts.iter().map(|p| p.0 as f64).collect();
            let neg_s: Vec<f64> = s.iter().map(|v| -v).collect();
            let flipped: Vec<Label> = labels(&ys).iter().map(|l| l.flip()).collect();
            let a = roc_auc(&s, &labels(&ys)).unwrap().auc;
            let b = roc_auc(&neg_s, &flipped).unwrap().auc;
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }
}
