//! Fixtures shared by the benchmarks.

use lcc_core::data::{gen_gaussian_pair, gen_shape, GaussianClass, Preprocess, Shape};
use lcc_core::Dataset;

/// Standardized two-Gaussian data with `per_class` instances per class.
pub fn gaussian(per_class: usize, seed: u64) -> Dataset {
    let (neg, pos) = GaussianClass::walkthrough_pair();
    standardize(gen_gaussian_pair(neg, pos, per_class, seed).expect("valid generator parameters"))
}

pub fn shape(shape: Shape, m: usize, seed: u64) -> Dataset {
    standardize(gen_shape(shape, m, 0.05, seed).expect("valid generator parameters"))
}

/// Two overlapping classes in `n` dimensions; class +1 is shifted by 0.5
/// along every axis. Deterministic without an RNG.
pub fn high_dimensional(m: usize, n: usize) -> Dataset {
    let mut rows = Vec::with_capacity(m);
    let mut labels = Vec::with_capacity(m);
    for i in 0..m {
        let pos = i % 2 == 1;
        let row = (0..n)
            .map(|j| {
                let t = ((i * 31 + j * 17) % 97) as f64 / 97.0 - 0.5;
                t + if pos { 0.5 } else { 0.0 }
            })
            .collect();
        rows.push(row);
        labels.push(if pos {
            lcc_core::Label::Pos
        } else {
            lcc_core::Label::Neg
        });
    }
    standardize(Dataset::new(rows, labels).expect("rectangular"))
}

fn standardize(d: Dataset) -> Dataset {
    Preprocess::fit(&d)
        .and_then(|p| p.apply(&d))
        .expect("non-constant columns")
}
