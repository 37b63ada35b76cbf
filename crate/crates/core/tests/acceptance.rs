//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! appear in `cargo test` output.

mod common;

use std::time::{Duration, Instant};

use lcc_core::data::{
    gen_gaussian_pair, gen_shape, load_csv, GaussianClass, LabelColumn, Preprocess, Shape,
};
use lcc_core::eval::{
    rank_sum_exact, rank_sum_normal, rank_sum_test, roc_auc, run_benchmark, stratified_split,
    BenchmarkConfig,
};
use lcc_core::kernel::{assemble_klcc_lp, train_klcc, KernelSpec};
use lcc_core::lcc::{assemble_lcc_lp, train_fqcc};
use lcc_core::lp::{solve, LpStatus};
use lcc_core::methods::Method;
use lcc_core::{train_lcc, Dataset, Label, LccModel, DEFAULT_LAMBDA, DEFAULT_SIGMA};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let took = start.elapsed();
    (
        took < limit,
        format!(
            "{:.2}s of {:.0}s budget",
            took.as_secs_f64(),
            limit.as_secs_f64()
        ),
    )
}

fn lp_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut mismatches = 0;
    for _ in 0..200 {
        let lp = common::random_feasible_lp(&mut rng);
        let sol = solve(&lp).expect("solver error");
        let (oracle, _) = common::vertex_enumeration(&lp).expect("feasible by construction");
        if sol.status != LpStatus::Optimal {
            mismatches += 1;
            continue;
        }
        worst = worst.max((sol.objective_value - oracle).abs());
    }
    let (fast, time) = within(Duration::from_secs(5), start);
    outcome(
        mismatches == 0 && worst <= 1e-6 && fast,
        format!(
            "200 LPs, max |solver - vertex oracle| = {worst:.2e}, non-optimal {mismatches}, {time}"
        ),
    )
}

fn linearization_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = 0;
    for i in 0..10_000 {
        // Half the triples on a small integer grid so ties and exact
        // midpoints occur; the rest continuous.
        let (a, mut b, mut c) = if i % 2 == 0 {
            (
                rng.random_range(-6..=6) as f64,
                rng.random_range(-6..=6) as f64,
                rng.random_range(-6..=6) as f64,
            )
        } else {
            (
                rng.random_range(-1e3..1e3),
                rng.random_range(-1e3..1e3),
                rng.random_range(-1e3..1e3),
            )
        };
        if b == c {
            c += 1.0;
        }
        if b > c {
            std::mem::swap(&mut b, &mut c);
        }
        let closer = (a - b).abs() < (a - c).abs();
        let below = a < (b + c) / 2.0;
        if closer != below {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("10000 triples, {violations} violations"),
    )
}

fn random_dataset(rng: &mut impl Rng, m: usize, n: usize) -> Dataset {
    let rows = (0..m)
        .map(|_| (0..n).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    let labels = (0..m)
        .map(|i| if i % 2 == 0 { Label::Neg } else { Label::Pos })
        .collect();
    Dataset::new(rows, labels).unwrap()
}

fn lp_shape() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = vec![];
    for (m, n) in [(4, 2), (10, 3), (25, 7), (60, 1), (7, 12)] {
        let d = random_dataset(&mut rng, m, n);
        let lp = assemble_lcc_lp(&d, DEFAULT_LAMBDA, DEFAULT_SIGMA).unwrap();
        if lp.num_rows() != m + 1 || lp.num_vars() != m + n {
            bad.push(format!(
                "lcc m={m} n={n}: {} rows {} vars",
                lp.num_rows(),
                lp.num_vars()
            ));
        }
        let klp = assemble_klcc_lp(
            &d,
            &KernelSpec::rbf(1.0).unwrap(),
            DEFAULT_LAMBDA,
            DEFAULT_SIGMA,
        )
        .unwrap();
        if klp.num_rows() != m + 1 || klp.num_vars() != 2 * m {
            bad.push(format!(
                "klcc m={m}: {} rows {} vars",
                klp.num_rows(),
                klp.num_vars()
            ));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "5 datasets, exact counts".to_string()
        } else {
            bad.join("; ")
        },
    )
}

fn scale_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut differing = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..6);
        let vec = |rng: &mut ChaCha8Rng| {
            (0..n)
                .map(|_| rng.random_range(-3.0..3.0))
                .collect::<Vec<f64>>()
        };
        let beta: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let model = LccModel::from_parts(
            beta,
            vec(&mut rng),
            vec(&mut rng),
            2.0,
            -0.01,
            vec![],
            0.0,
            0,
        );
        let c = rng.random_range(0.01..100.0);
        let scaled = model.rescaled(c);
        let xs: Vec<Vec<f64>> = (0..50).map(|_| vec(&mut rng)).collect();
        let a: Vec<Label> = xs.iter().map(|x| model.predict(x).unwrap()).collect();
        let b: Vec<Label> = xs.iter().map(|x| scaled.predict(x).unwrap()).collect();
        differing += usize::from(a != b);
    }
    outcome(
        differing == 0,
        format!("100 models x 50 instances, {differing} label vectors differ"),
    )
}

fn gaussian_example() -> Outcome {
    let start = Instant::now();
    let (neg, pos) = GaussianClass::walkthrough_pair();
    let mut aucs = vec![];
    for seed in 0..20 {
        let d = gen_gaussian_pair(neg, pos, 100, seed).unwrap();
        let (train, test) = stratified_split(&d, 0.7, seed).unwrap();
        let pre = Preprocess::fit(&train).unwrap();
        let (train, test) = (pre.apply(&train).unwrap(), pre.apply(&test).unwrap());
        let model = train_lcc(&train, DEFAULT_LAMBDA, DEFAULT_SIGMA).unwrap();
        let scores: Vec<f64> = test.rows().map(|x| model.score(x).unwrap()).collect();
        aucs.push(roc_auc(&scores, test.labels()).unwrap().auc);
    }
    let mean = aucs.iter().sum::<f64>() / aucs.len() as f64;
    let (fast, time) = within(Duration::from_secs(10), start);
    outcome(
        mean >= 0.99 && fast,
        format!("mean test AUC {mean:.4} over 20 seeds, {time}"),
    )
}

/// RBF width used for the shape datasets, after standardization.
const SHAPE_RBF_WIDTH: f64 = 0.3;

fn kernel_shapes() -> Outcome {
    let start = Instant::now();
    let spec = KernelSpec::rbf(SHAPE_RBF_WIDTH).unwrap();
    let mut parts = vec![];
    let mut pass = true;
    for (shape, noise, need_train, need_test) in [
        (Shape::Circles, 0.05, 0.98, 0.98),
        (Shape::Spiral, 0.02, 0.98, 0.98),
        (Shape::JainLike, 0.08, 0.0, 0.95),
    ] {
        let (mut train_acc, mut test_acc) = (vec![], vec![]);
        for seed in 0..10 {
            let d = gen_shape(shape, 300, noise, seed).unwrap();
            let (train, test) = stratified_split(&d, 0.7, seed).unwrap();
            let pre = Preprocess::fit(&train).unwrap();
            let (train, test) = (pre.apply(&train).unwrap(), pre.apply(&test).unwrap());
            let model = train_klcc(&train, &spec, DEFAULT_LAMBDA, DEFAULT_SIGMA).unwrap();
            let acc = |data: &Dataset| {
                let hits = data
                    .rows()
                    .zip(data.labels())
                    .filter(|(x, y)| model.predict(x).unwrap() == **y)
                    .count();
                hits as f64 / data.m() as f64
            };
            train_acc.push(acc(&train));
            test_acc.push(acc(&test));
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (tr, te) = (mean(&train_acc), mean(&test_acc));
        pass &= tr >= need_train && te >= need_test;
        parts.push(format!("{} train {tr:.3} test {te:.3}", shape.name()));
    }
    let (fast, time) = within(Duration::from_secs(60), start);
    outcome(pass && fast, format!("{}, {time}", parts.join("; ")))
}

fn fqcc_equivalence() -> Outcome {
    let (wneg, wpos) = GaussianClass::walkthrough_pair();
    let overlap = (
        GaussianClass {
            mean: [0.0, 0.0],
            cov: [[1.0, 0.3], [0.3, 1.0]],
        },
        GaussianClass {
            mean: [1.5, 1.0],
            cov: [[1.0, -0.2], [-0.2, 0.8]],
        },
    );
    type Gen = Box<dyn Fn(u64) -> Dataset>;
    let datasets: Vec<(&str, Gen)> = vec![
        (
            "gaussian_example",
            Box::new(move |s| gen_gaussian_pair(wneg, wpos, 60, s).unwrap()),
        ),
        (
            "gaussian_overlap",
            Box::new(move |s| gen_gaussian_pair(overlap.0, overlap.1, 60, s).unwrap()),
        ),
        (
            "jain_like",
            Box::new(|s| gen_shape(Shape::JainLike, 120, 0.1, s).unwrap()),
        ),
        (
            "flame_like",
            Box::new(|s| gen_shape(Shape::FlameLike, 120, 0.1, s).unwrap()),
        ),
        (
            "spiral",
            Box::new(|s| gen_shape(Shape::Spiral, 120, 0.05, s).unwrap()),
        ),
    ];
    let mut pass = true;
    let mut parts = vec![];
    let (mut lcc_times, mut fqcc_times) = (vec![], vec![]);
    for (name, generate) in &datasets {
        let (mut lcc_auc, mut fqcc_auc) = (vec![], vec![]);
        for seed in 0..20 {
            let d = generate(seed);
            let (train, test) = stratified_split(&d, 0.7, seed).unwrap();
            let pre = Preprocess::fit(&train).unwrap();
            let (train, test) = (pre.apply(&train).unwrap(), pre.apply(&test).unwrap());

            let t = Instant::now();
            let lcc = train_lcc(&train, DEFAULT_LAMBDA, DEFAULT_SIGMA).unwrap();
            lcc_times.push(t.elapsed());
            let t = Instant::now();
            let fqcc = train_fqcc(&train, DEFAULT_LAMBDA, DEFAULT_SIGMA, 8, seed).unwrap();
            fqcc_times.push(t.elapsed());

            let s: Vec<f64> = test.rows().map(|x| lcc.score(x).unwrap()).collect();
            lcc_auc.push(roc_auc(&s, test.labels()).unwrap().auc);
            let s: Vec<f64> = test.rows().map(|x| fqcc.score(x).unwrap()).collect();
            fqcc_auc.push(roc_auc(&s, test.labels()).unwrap().auc);
        }
        let p = rank_sum_test(&lcc_auc, &fqcc_auc);
        pass &= p > 0.05;
        parts.push(format!("{name} p={p:.3}"));
    }
    lcc_times.sort();
    fqcc_times.sort();
    let (ml, mf) = (
        lcc_times[lcc_times.len() / 2],
        fqcc_times[fqcc_times.len() / 2],
    );
    pass &= ml < mf;
    outcome(
        pass,
        format!(
            "{}; median train time lcc {:.3}ms fqcc {:.3}ms",
            parts.join(", "),
            ml.as_secs_f64() * 1e3,
            mf.as_secs_f64() * 1e3
        ),
    )
}

fn auc_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 1000 {
        let m = rng.random_range(2..=50);
        let discrete = rng.random_bool(0.5);
        let scores: Vec<f64> = (0..m)
            .map(|_| {
                if discrete {
                    rng.random_range(0..5) as f64
                } else {
                    rng.random_range(-1.0..1.0)
                }
            })
            .collect();
        let labels: Vec<Label> = (0..m)
            .map(|_| {
                if rng.random_bool(0.4) {
                    Label::Pos
                } else {
                    Label::Neg
                }
            })
            .collect();
        if !labels.contains(&Label::Pos) || !labels.contains(&Label::Neg) {
            continue;
        }
        let auc = roc_auc(&scores, &labels).unwrap().auc;
        worst = worst.max((auc - common::brute_force_auc(&scores, &labels)).abs());
        done += 1;
    }
    outcome(
        worst <= 1e-12,
        format!("1000 vectors, max |auc - pairwise| = {worst:.2e}"),
    )
}

fn rank_sum_small_samples() -> Outcome {
    // Every size pair with n1 + n2 <= 12 and every attainable untied rank
    // arrangement (distinct rank sums) of the first sample.
    let mut worst = (0.0f64, 0, 0, 0.0);
    let (mut cases, mut over) = (0, 0);
    let mut failing_pairs = 0;
    for total in 2..=12usize {
        for n1 in 1..total {
            let n2 = total - n1;
            let mut seen = std::collections::BTreeSet::new();
            let mut pair_fails = false;
            for subset in common::subsets(total, n1) {
                let w: usize = subset.iter().map(|i| i + 1).sum();
                if !seen.insert(w) {
                    continue;
                }
                let a: Vec<f64> = subset.iter().map(|&i| i as f64).collect();
                let b: Vec<f64> = (0..total)
                    .filter(|i| !subset.contains(i))
                    .map(|i| i as f64)
                    .collect();
                let diff = (rank_sum_normal(&a, &b) - rank_sum_exact(&a, &b)).abs();
                cases += 1;
                if diff > 0.03 {
                    over += 1;
                    pair_fails = true;
                }
                if diff > worst.0 {
                    worst = (diff, n1, n2, w as f64);
                }
            }
            failing_pairs += usize::from(pair_fails);
        }
    }
    outcome(
        over == 0,
        format!(
            "{cases} cases over 66 size pairs; {over} cases in {failing_pairs} pairs exceed 0.03; worst {:.4} at sizes ({}, {}) rank sum {}",
            worst.0, worst.1, worst.2, worst.3
        ),
    )
}

/// Skipped unless `LCC_BREAST_CANCER_CSV` names a CSV with the label in the
/// last column (header row optional via `LCC_BREAST_CANCER_HEADER=1`).
fn breast_cancer() -> Option<Outcome> {
    let path = std::env::var("LCC_BREAST_CANCER_CSV").ok()?;
    let header = std::env::var("LCC_BREAST_CANCER_HEADER").is_ok_and(|v| v == "1");
    let start = Instant::now();
    let data = match load_csv(&path, LabelColumn::Last, header) {
        Ok(d) => d,
        Err(e) => return Some(outcome(false, format!("cannot load {path}: {e}"))),
    };
    let config = BenchmarkConfig {
        runs: 50,
        ..BenchmarkConfig::new(vec![Method::Lcc.default_config()])
    };
    let report = match run_benchmark(&data, &config) {
        Ok(r) => r,
        Err(e) => return Some(outcome(false, format!("benchmark failed: {e}"))),
    };
    let mean = report.summary("lcc").expect("lcc summarized").test_auc.0;
    let (fast, time) = within(Duration::from_secs(120), start);
    Some(outcome(
        (mean - 0.9558).abs() <= 0.03 && fast,
        format!("mean test AUC {mean:.4} (target 0.9558 ± 0.03), {time}"),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("lp solver matches vertex enumeration", lp_oracle),
        ("linearization lemma", linearization_lemma),
        ("lp shape", lp_shape),
        ("scale invariance", scale_invariance),
        ("two-gaussian example", gaussian_example),
        ("rbf kernel on shape datasets", kernel_shapes),
        ("fqcc equivalent to lcc", fqcc_equivalence),
        ("auc matches pairwise oracle", auc_oracle),
        (
            "rank-sum normal approximation on small samples",
            rank_sum_small_samples,
        ),
    ];
    let mut failed = vec![];
    for (name, run) in criteria {
        let o = run();
        println!(
            "{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(name);
        }
    }
    match breast_cancer() {
        Some(o) => {
            println!(
                "{} breast cancer benchmark: {}",
                if o.pass { "PASS" } else { "FAIL" },
                o.detail
            );
            if !o.pass {
                failed.push("breast cancer benchmark");
            }
        }
        None => println!("SKIP breast cancer benchmark: set LCC_BREAST_CANCER_CSV to run"),
    }
    if !failed.is_empty() {
        println!("{} criteria failed: {}", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
}
