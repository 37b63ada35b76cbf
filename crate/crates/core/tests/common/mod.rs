//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use lcc_core::lp::{LpProblem, Relation};
use lcc_core::Label;
use rand::Rng;

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting; `None` when singular.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = a[row][col] / a[col][col];
                if f != 0.0 {
                    for k in col..n {
                        a[row][k] -= f * a[col][k];
                    }
                    b[row] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        combinations(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Minimum objective over every vertex formed by intersecting `d` of the
/// constraint and bound hyperplanes; `None` if no vertex is feasible.
/// Only valid for problems with finite boxes.
pub fn vertex_enumeration(lp: &LpProblem) -> Option<(f64, Vec<f64>)> {
    let d = lp.num_vars();
    let mut planes: Vec<(Vec<f64>, f64)> = (0..lp.num_rows())
        .map(|i| (lp.row(i).to_vec(), lp.rhs()[i]))
        .collect();
    for j in 0..d {
        let mut e = vec![0.0; d];
        e[j] = 1.0;
        planes.push((e.clone(), lp.lower()[j]));
        planes.push((e, lp.upper()[j]));
    }
    let mut sets = vec![];
    combinations(planes.len(), d, 0, &mut vec![], &mut sets);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for set in sets {
        let a = set.iter().map(|&i| planes[i].0.clone()).collect();
        let b = set.iter().map(|&i| planes[i].1).collect();
        let Some(x) = solve_dense(a, b) else { continue };
        let (rows, bounds) = lp.max_violation(&x);
        if rows > 1e-9 || bounds > 1e-9 {
            continue;
        }
        let obj = lp.objective_value(&x);
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, x));
        }
    }
    best
}

/// A random LP with a finite box that is feasible by construction: every
/// row is satisfied by a random interior point with some slack.
pub fn random_feasible_lp(rng: &mut impl Rng) -> LpProblem {
    let d = rng.random_range(1..=4);
    let r = rng.random_range(0..=6);
    let lower: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..0.0)).collect();
    let upper: Vec<f64> = lower
        .iter()
        .map(|l| l + rng.random_range(0.5..6.0))
        .collect();
    let objective = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
    let x0: Vec<f64> = lower
        .iter()
        .zip(&upper)
        .map(|(l, u)| rng.random_range(*l..*u))
        .collect();
    let mut lp = LpProblem::new(objective, lower, upper).unwrap();
    for _ in 0..r {
        let a: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
        let ax: f64 = a.iter().zip(&x0).map(|(p, q)| p * q).sum();
        let slack = rng.random_range(0.0..2.0);
        if rng.random_bool(0.5) {
            lp.add_row(&a, Relation::Le, ax + slack).unwrap();
        } else {
            lp.add_row(&a, Relation::Ge, ax - slack).unwrap();
        }
    }
    lp
}

/// Fraction of positive/negative pairs where the positive scores higher,
/// ties counting one half.
pub fn brute_force_auc(scores: &[f64], labels: &[Label]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for (sp, _) in scores.iter().zip(labels).filter(|(_, l)| **l == Label::Pos) {
        for (sn, _) in scores.iter().zip(labels).filter(|(_, l)| **l == Label::Neg) {
            pairs += 1.0;
            if sp > sn {
                wins += 1.0;
            } else if sp == sn {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Every subset of `0..n` of size `k`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    combinations(n, k, 0, &mut vec![], &mut out);
    out
}
