//! Two-sided Wilcoxon rank-sum (Mann-Whitney) test.

use statrs::function::erf::erfc;

/// Combined sample sizes up to this use exact enumeration.
pub const EXACT_LIMIT: usize = 12;

/// 1-based ranks with tied values sharing the mean of the ranks they span.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

fn pooled_ranks(a: &[f64], b: &[f64]) -> (Vec<f64>, f64) {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let w = ranks[..a.len()].iter().sum();
    (ranks, w)
}

/// p-value from `P(|W − E| ≥ |w − E|)` over every assignment of the pooled
/// midranks to a sample of size `|a|`. Cost grows as `C(|a|+|b|, |a|)`.
pub fn rank_sum_exact(a: &[f64], b: &[f64]) -> f64 {
    let (n1, n2) = (a.len(), b.len());
    if n1 == 0 || n2 == 0 {
        return 1.0;
    }
    let (ranks, w) = pooled_ranks(a, b);
    let n = n1 + n2;
    let expected = n1 as f64 * (n as f64 + 1.0) / 2.0;
    let observed = (w - expected).abs();
    // Rank sums are multiples of ½, so a small slack absorbs rounding.
    let slack = 1e-9;
    let (mut extreme, mut total) = (0u64, 0u64);
    let mut chosen = Vec::with_capacity(n1);
    enumerate(&ranks, n1, 0, 0.0, &mut chosen, &mut |sum| {
        total += 1;
        if (sum - expected).abs() >= observed - slack {
            extreme += 1;
        }
    });
    extreme as f64 / total as f64
}

fn enumerate(
    ranks: &[f64],
    k: usize,
    start: usize,
    sum: f64,
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(f64),
) {
    if chosen.len() == k {
        visit(sum);
        return;
    }
    let need = k - chosen.len();
    for i in start..=ranks.len() - need {
        chosen.push(i);
        enumerate(ranks, k, i + 1, sum + ranks[i], chosen, visit);
        chosen.pop();
    }
}

/// Normal approximation with tie-corrected variance and a ½ continuity
/// correction.
pub fn rank_sum_normal(a: &[f64], b: &[f64]) -> f64 {
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    if a.is_empty() || b.is_empty() {
        return 1.0;
    }
    let (ranks, w) = pooled_ranks(a, b);
    let n = n1 + n2;
    let expected = n1 * (n + 1.0) / 2.0;

    let mut sorted = ranks;
    sorted.sort_by(f64::total_cmp);
    let mut ties = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&r| r == sorted[i]).count();
        let t = j as f64;
        ties += t * t * t - t;
        i += j;
    }
    let variance = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if !(variance > 0.0) {
        return 1.0;
    }
    let z = ((w - expected).abs() - 0.5).max(0.0) / variance.sqrt();
    erfc(z / std::f64::consts::SQRT_2).min(1.0)
}

/// Two-sided rank-sum p-value: exact for `|a| + |b| ≤ 12`, normal
/// approximation otherwise.
pub fn rank_sum_test(a: &[f64], b: &[f64]) -> f64 {
    if a.len() + b.len() <= EXACT_LIMIT {
        rank_sum_exact(a, b)
    } else {
        rank_sum_normal(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midranks_average_ties() {
        assert_eq!(midranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn identical_samples_not_significant() {
        let a: Vec<f64> = (0..20).map(|i| (i as f64 * 0.7).sin()).collect();
        assert!(rank_sum_test(&a, &a) >= 0.99);
        assert!(rank_sum_test(&a[..5], &a[..5]) >= 0.99);
    }

    #[test]
    fn separated_samples_significant() {
        let a: Vec<f64> = (1..=10).map(f64::from).collect();
        let b: Vec<f64> = (11..=20).map(f64::from).collect();
        assert!(rank_sum_test(&a, &b) < 0.01);
    }

    #[test]
    fn exact_small_cases() {
        // Sizes (2, 2): 6 equally likely rank pairs, sums 3,4,5,5,6,7.
        assert!((rank_sum_exact(&[1.0, 2.0], &[3.0, 4.0]) - 2.0 / 6.0).abs() < 1e-15);
        assert!((rank_sum_exact(&[1.0, 3.0], &[2.0, 4.0]) - 4.0 / 6.0).abs() < 1e-15);
        assert_eq!(rank_sum_exact(&[1.0, 4.0], &[2.0, 3.0]), 1.0);
        // (3, 3) complete separation: 2 of 20 arrangements as extreme.
        assert!((rank_sum_exact(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn all_tied_gives_one() {
        assert_eq!(rank_sum_normal(&[1.0; 8], &[1.0; 9]), 1.0);
        assert_eq!(rank_sum_exact(&[1.0; 3], &[1.0; 3]), 1.0);
    }

    #[test]
    fn normal_matches_reference_value() {
        // Samples 1..=10 vs 11..=20: W = 55, E = 105, var = 175, |z| = 49.5/√175.
        let a: Vec<f64> = (1..=10).map(f64::from).collect();
        let b: Vec<f64> = (11..=20).map(f64::from).collect();
        let z: f64 = 49.5 / 175f64.sqrt();
        let p = rank_sum_normal(&a, &b);
        // Two-sided normal tail at z = 3.74185.
        assert!((p - 1.826_717_911e-4).abs() < 1e-12, "{p} at z {z}");
    }
}
