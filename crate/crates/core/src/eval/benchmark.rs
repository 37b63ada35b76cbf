//! Benchmark procedures.
//!
//! Procedure 1 repeats a seeded 70/30 stratified split `R` times; each run
//! fits the preprocessing on the train side only and trains every method on
//! the same split. Procedure 2 tunes one hyperparameter per method by
//! stratified k-fold cross-validation and ranks the methods per dataset.

use std::fmt::Write as _;
use std::time::Instant;

use crate::data::{drop_zero_variance, Dataset, Preprocess};
use crate::error::{Error, Result};
use crate::methods::MethodConfig;

use super::roc::roc_auc;
use super::split::{stratified_kfold, stratified_split};
use super::stats::rank_sum_test;

pub const SIGNIFICANCE: f64 = 0.05;

#[derive(Clone, Debug)]
pub struct BenchmarkConfig {
    pub methods: Vec<MethodConfig>,
    /// Index into `methods` of the method every other one is tested against.
    pub reference: usize,
    pub runs: usize,
    pub train_fraction: f64,
    pub seed: u64,
}

impl BenchmarkConfig {
    pub fn new(methods: Vec<MethodConfig>) -> Self {
        BenchmarkConfig {
            methods,
            reference: 0,
            runs: 100,
            train_fraction: 0.7,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunMetrics {
    pub train_auc: f64,
    pub test_auc: f64,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub method: String,
    pub run: usize,
    pub train_size: usize,
    pub test_size: usize,
    /// Wall time of training alone, in milliseconds.
    pub time_ms: f64,
    pub outcome: std::result::Result<RunMetrics, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodSummary {
    pub method: String,
    pub completed: usize,
    pub failed: usize,
    pub train_auc: (f64, f64),
    pub test_auc: (f64, f64),
    pub time_ms: (f64, f64),
    /// Rank-sum p-values against the reference; `None` for the reference.
    pub p_train: Option<f64>,
    pub p_test: Option<f64>,
}

impl MethodSummary {
    /// `*` significantly worse than the reference, `+` significantly better,
    /// `-` no significant difference; blank for the reference itself.
    pub fn flag(p: Option<f64>, mean: f64, reference_mean: f64) -> &'static str {
        match p {
            None => " ",
            Some(p) if p < SIGNIFICANCE && mean < reference_mean => "*",
            Some(p) if p < SIGNIFICANCE && mean > reference_mean => "+",
            Some(_) => "-",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub methods: Vec<String>,
    pub reference: String,
    pub runs: usize,
    pub records: Vec<RunRecord>,
    pub summaries: Vec<MethodSummary>,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

fn labels_of(methods: &[MethodConfig]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(methods.len());
    for m in methods {
        let base = m.label();
        let mut name = base.clone();
        let mut k = 2;
        while out.contains(&name) {
            name = format!("{base}#{k}");
            k += 1;
        }
        out.push(name);
    }
    out
}

/// Splits, then fits the preprocessing on the train side only and applies
/// it to both sides.
pub fn split_and_preprocess(
    data: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset, Preprocess)> {
    let (train, test) = stratified_split(data, train_fraction, seed)?;
    let pre = Preprocess::fit(&train)?;
    Ok((pre.apply(&train)?, pre.apply(&test)?, pre))
}

fn evaluate(
    config: &MethodConfig,
    train: &Dataset,
    test: &Dataset,
    seed: u64,
) -> (f64, Result<RunMetrics>) {
    let start = Instant::now();
    let fitted = config.fit(train, seed);
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    let metrics = fitted.and_then(|model| {
        Ok(RunMetrics {
            train_auc: roc_auc(&model.scores(train)?, train.labels())?.auc,
            test_auc: roc_auc(&model.scores(test)?, test.labels())?.auc,
            train_accuracy: model.accuracy(train)?,
            test_accuracy: model.accuracy(test)?,
        })
    });
    (time_ms, metrics)
}

/// Procedure 1. Columns constant over the whole dataset are removed first;
/// method failures are recorded per run rather than aborting.
pub fn run_benchmark(data: &Dataset, config: &BenchmarkConfig) -> Result<EvalReport> {
    if config.methods.is_empty() {
        return Err(Error::InvalidParameter(
            "benchmark needs at least one method".into(),
        ));
    }
    if config.reference >= config.methods.len() {
        return Err(Error::InvalidParameter(
            "reference method index out of range".into(),
        ));
    }
    if config.runs == 0 {
        return Err(Error::InvalidParameter(
            "benchmark needs at least one run".into(),
        ));
    }
    let names = labels_of(&config.methods);
    let (data, _) = drop_zero_variance(data)?;
    let mut records = Vec::with_capacity(config.runs * names.len());
    for run in 0..config.runs {
        let seed = config.seed.wrapping_add(run as u64);
        let (train, test, _) = split_and_preprocess(&data, config.train_fraction, seed)?;
        for (method, name) in config.methods.iter().zip(&names) {
            let (time_ms, outcome) = evaluate(method, &train, &test, seed);
            records.push(RunRecord {
                method: name.clone(),
                run,
                train_size: train.m(),
                test_size: test.m(),
                time_ms,
                outcome: outcome.map_err(|e| e.to_string()),
            });
        }
    }
    let summaries = summarize(&names, config.reference, &records);
    Ok(EvalReport {
        reference: names[config.reference].clone(),
        methods: names,
        runs: config.runs,
        records,
        summaries,
    })
}

fn summarize(names: &[String], reference: usize, records: &[RunRecord]) -> Vec<MethodSummary> {
    let collect = |name: &str, f: fn(&RunMetrics) -> f64| -> Vec<f64> {
        records
            .iter()
            .filter(|r| r.method == name)
            .filter_map(|r| r.outcome.as_ref().ok().map(f))
            .collect()
    };
    let ref_train = collect(&names[reference], |m| m.train_auc);
    let ref_test = collect(&names[reference], |m| m.test_auc);
    names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let train = collect(name, |m| m.train_auc);
            let test = collect(name, |m| m.test_auc);
            let times: Vec<f64> = records
                .iter()
                .filter(|r| &r.method == name)
                .map(|r| r.time_ms)
                .collect();
            let failed = records
                .iter()
                .filter(|r| &r.method == name && r.outcome.is_err())
                .count();
            let compare = |a: &[f64], b: &[f64]| {
                (i != reference && !a.is_empty() && !b.is_empty()).then(|| rank_sum_test(a, b))
            };
            MethodSummary {
                method: name.clone(),
                completed: train.len(),
                failed,
                train_auc: mean_std(&train),
                test_auc: mean_std(&test),
                time_ms: mean_std(&times),
                p_train: compare(&train, &ref_train),
                p_test: compare(&test, &ref_test),
            }
        })
        .collect()
}

impl EvalReport {
    pub fn summary(&self, method: &str) -> Option<&MethodSummary> {
        self.summaries.iter().find(|s| s.method == method)
    }

    pub fn records_for<'a>(&'a self, method: &'a str) -> impl Iterator<Item = &'a RunRecord> + 'a {
        self.records.iter().filter(move |r| r.method == method)
    }

    /// One row per method and run. Timing is left out so that reruns with
    /// the same seed produce identical files; see [`Self::timing_csv`].
    pub fn records_csv(&self) -> String {
        let mut s = String::from("method,run,train_size,test_size,train_auc,test_auc,train_accuracy,test_accuracy,error\n");
        for r in &self.records {
            match &r.outcome {
                Ok(m) => writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},",
                    r.method,
                    r.run,
                    r.train_size,
                    r.test_size,
                    m.train_auc,
                    m.test_auc,
                    m.train_accuracy,
                    m.test_accuracy
                ),
                Err(e) => writeln!(
                    s,
                    "{},{},{},{},,,,,\"{}\"",
                    r.method,
                    r.run,
                    r.train_size,
                    r.test_size,
                    e.replace('"', "\"\"")
                ),
            }
            .expect("writing to a string");
        }
        s
    }

    pub fn timing_csv(&self) -> String {
        let mut s = String::from("method,run,time_ms\n");
        for r in &self.records {
            writeln!(s, "{},{},{:.3}", r.method, r.run, r.time_ms).expect("writing to a string");
        }
        s
    }

    /// Mean ± std per method with significance flags against the reference.
    pub fn summary_table(&self) -> String {
        let reference = self.summary(&self.reference).expect("reference summarized");
        let mut s = format!(
            "{} runs; flags against {}: * worse, - same, + better (rank-sum p < {SIGNIFICANCE})\n",
            self.runs, self.reference
        );
        writeln!(
            s,
            "{:<14} {:>22} {:>22} {:>18} {:>7}",
            "method", "train AUC", "test AUC", "time ms", "failed"
        )
        .expect("writing to a string");
        for m in &self.summaries {
            let ft = MethodSummary::flag(m.p_train, m.train_auc.0, reference.train_auc.0);
            let fs = MethodSummary::flag(m.p_test, m.test_auc.0, reference.test_auc.0);
            writeln!(
                s,
                "{:<14} {:>20} {} {:>20} {} {:>18} {:>7}",
                m.method,
                format!("{:.4} ± {:.4}", m.train_auc.0, m.train_auc.1),
                ft,
                format!("{:.4} ± {:.4}", m.test_auc.0, m.test_auc.1),
                fs,
                format!("{:.2} ± {:.2}", m.time_ms.0, m.time_ms.1),
                m.failed
            )
            .expect("writing to a string");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridResult {
    pub method: String,
    /// `(value, mean test-fold AUC)`; `None` when any fold failed.
    pub scores: Vec<(f64, Option<f64>)>,
    pub best_value: Option<f64>,
    pub best_auc: Option<f64>,
}

/// Preprocessed `(train, test)` pairs, one per fold.
fn fold_pairs(data: &Dataset, k: usize, seed: u64) -> Result<Vec<(Dataset, Dataset)>> {
    let (data, _) = drop_zero_variance(data)?;
    let folds = stratified_kfold(&data, k, seed)?;
    folds
        .iter()
        .enumerate()
        .map(|(i, test_idx)| {
            let train_idx: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .flat_map(|(_, f)| f.iter().copied())
                .collect();
            let mut train_idx = train_idx;
            train_idx.sort_unstable();
            let (train, test) = (data.subset(&train_idx), data.subset(test_idx));
            let pre = Preprocess::fit(&train)?;
            Ok((pre.apply(&train)?, pre.apply(&test)?))
        })
        .collect()
}

fn grid_on_folds(
    config: &MethodConfig,
    name: &str,
    folds: &[(Dataset, Dataset)],
    seed: u64,
) -> GridResult {
    let mut scores = vec![];
    for value in config.tuning_grid() {
        let candidate = config.with_tuned(value);
        let mut aucs = vec![];
        for (i, (train, test)) in folds.iter().enumerate() {
            match evaluate(&candidate, train, test, seed.wrapping_add(i as u64)).1 {
                Ok(m) => aucs.push(m.test_auc),
                Err(_) => break,
            }
        }
        let mean =
            (aucs.len() == folds.len()).then(|| aucs.iter().sum::<f64>() / aucs.len() as f64);
        scores.push((value, mean));
    }
    // The first value reaching the best score wins.
    let best = scores.iter().filter_map(|(v, s)| s.map(|s| (*v, s))).fold(
        None,
        |acc: Option<(f64, f64)>, (v, s)| match acc {
            Some((_, b)) if b >= s => acc,
            _ => Some((v, s)),
        },
    );
    GridResult {
        method: name.to_string(),
        scores,
        best_value: best.map(|b| b.0),
        best_auc: best.map(|b| b.1),
    }
}

/// Procedure 2 for one method on one dataset.
pub fn grid_search(
    data: &Dataset,
    config: &MethodConfig,
    k: usize,
    seed: u64,
) -> Result<GridResult> {
    let folds = fold_pairs(data, k, seed)?;
    Ok(grid_on_folds(config, &config.label(), &folds, seed))
}

/// Per-dataset ranks (0 = best, higher score is better, tied scores share
/// the mean of the ranks they span) and their average over datasets.
pub fn average_ranks(scores: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let ranks: Vec<Vec<f64>> = scores
        .iter()
        .map(|row| {
            let neg: Vec<f64> = row
                .iter()
                .map(|v| if v.is_nan() { f64::INFINITY } else { -v })
                .collect();
            super::stats::midranks(&neg)
                .into_iter()
                .map(|r| r - 1.0)
                .collect()
        })
        .collect();
    let k = scores.first().map_or(0, Vec::len);
    let avg = (0..k)
        .map(|j| ranks.iter().map(|r| r[j]).sum::<f64>() / ranks.len() as f64)
        .collect();
    (ranks, avg)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Procedure2Report {
    pub datasets: Vec<String>,
    pub methods: Vec<String>,
    /// `results[d][m]` for dataset `d`, method `m`.
    pub results: Vec<Vec<GridResult>>,
    pub ranks: Vec<Vec<f64>>,
    pub average_ranks: Vec<f64>,
}

/// Procedure 2 over several datasets; failed methods rank last.
pub fn run_procedure2(
    datasets: &[(String, Dataset)],
    methods: &[MethodConfig],
    k: usize,
    seed: u64,
) -> Result<Procedure2Report> {
    if methods.is_empty() || datasets.is_empty() {
        return Err(Error::InvalidParameter(
            "procedure 2 needs at least one dataset and one method".into(),
        ));
    }
    let names = labels_of(methods);
    let mut results = vec![];
    for (_, data) in datasets {
        let folds = fold_pairs(data, k, seed)?;
        results.push(
            methods
                .iter()
                .zip(&names)
                .map(|(m, n)| grid_on_folds(m, n, &folds, seed))
                .collect::<Vec<_>>(),
        );
    }
    let table: Vec<Vec<f64>> = results
        .iter()
        .map(|row: &Vec<GridResult>| row.iter().map(|g| g.best_auc.unwrap_or(f64::NAN)).collect())
        .collect();
    let (ranks, average) = average_ranks(&table);
    Ok(Procedure2Report {
        datasets: datasets.iter().map(|d| d.0.clone()).collect(),
        methods: names,
        results,
        ranks,
        average_ranks: average,
    })
}

impl Procedure2Report {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("dataset,method,best_value,best_auc,rank\n");
        for (d, name) in self.datasets.iter().enumerate() {
            for (m, g) in self.results[d].iter().enumerate() {
                let fmt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
                writeln!(
                    s,
                    "{name},{},{},{},{}",
                    g.method,
                    fmt(g.best_value),
                    fmt(g.best_auc),
                    self.ranks[d][m]
                )
                .expect("writing to a string");
            }
        }
        s
    }

    pub fn summary_table(&self) -> String {
        let mut s = String::from("average rank (0 = best)\n");
        for (m, r) in self.methods.iter().zip(&self.average_ranks) {
            writeln!(s, "{m:<14} {r:.3}").expect("writing to a string");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{gen_shape, Shape};
    use crate::methods::Method;

    #[test]
    fn ranks_share_ties() {
        let (ranks, avg) = average_ranks(&[vec![0.9, 0.8, 0.9], vec![0.5, 0.7, 0.6]]);
        assert_eq!(ranks[0], vec![0.5, 2.0, 0.5]);
        assert_eq!(ranks[1], vec![2.0, 0.0, 1.0]);
        assert_eq!(avg, vec![1.25, 1.0, 0.75]);
        let (ranks, _) = average_ranks(&[vec![f64::NAN, 0.1]]);
        assert_eq!(ranks[0], vec![1.0, 0.0]);
    }

    #[test]
    fn flags() {
        assert_eq!(MethodSummary::flag(Some(0.01), 0.8, 0.9), "*");
        assert_eq!(MethodSummary::flag(Some(0.01), 0.95, 0.9), "+");
        assert_eq!(MethodSummary::flag(Some(0.3), 0.8, 0.9), "-");
        assert_eq!(MethodSummary::flag(None, 0.8, 0.9), " ");
    }

    #[test]
    fn records_per_method_and_run_with_shared_splits() {
        let d = gen_shape(Shape::JainLike, 60, 0.1, 1).unwrap();
        let methods = vec![
            Method::Lcc.default_config(),
            Method::Lda.default_config(),
            Method::Svm.default_config(),
        ];
        let config = BenchmarkConfig {
            runs: 4,
            ..BenchmarkConfig::new(methods)
        };
        let report = run_benchmark(&d, &config).unwrap();
        assert_eq!(report.records.len(), 12);
        assert_eq!(report.methods, vec!["lcc", "lda", "svm"]);
        for m in &report.methods {
            assert_eq!(report.records_for(m).count(), 4);
        }
        assert!(report.summary("lcc").unwrap().p_test.is_none());
        assert!(report.summary("lda").unwrap().p_test.is_some());
        let again = run_benchmark(&d, &config).unwrap();
        assert_eq!(report.records_csv(), again.records_csv());
        assert!(report.summary_table().contains("lda"));
    }

    #[test]
    fn failures_are_recorded_not_fatal() {
        let d = gen_shape(Shape::Circles, 40, 0.05, 2).unwrap();
        let bad = MethodConfig::Lcc {
            lambda: 2.0,
            sigma: -1e6,
            discriminator: crate::discriminators::DiscriminatorKind::Dist,
        };
        let config = BenchmarkConfig {
            runs: 2,
            ..BenchmarkConfig::new(vec![Method::Lda.default_config(), bad])
        };
        let report = run_benchmark(&d, &config).unwrap();
        assert_eq!(report.summary("lcc").unwrap().failed, 2);
        assert!(report.records_csv().contains("infeasible"));
    }

    #[test]
    fn duplicate_methods_get_distinct_names() {
        let lcc = Method::Lcc.default_config();
        assert_eq!(labels_of(&[lcc, lcc]), vec!["lcc", "lcc#2"]);
    }

    #[test]
    fn normalizer_is_fit_on_train_only() {
        let d = gen_shape(Shape::FlameLike, 100, 0.1, 5).unwrap();
        let (train, test, _) = split_and_preprocess(&d, 0.7, 3).unwrap();
        for j in 0..train.n() {
            let col = train.column(j);
            let mean = col.iter().sum::<f64>() / col.len() as f64;
            assert!(mean.abs() < 1e-9);
            let tcol = test.column(j);
            let tmean = tcol.iter().sum::<f64>() / tcol.len() as f64;
            assert!(
                tmean.abs() > 1e-6,
                "test column {j} looks normalized on itself"
            );
        }
    }

    #[test]
    fn grid_search_reports_best_value() {
        let d = gen_shape(Shape::JainLike, 60, 0.1, 3).unwrap();
        let g = grid_search(&d, &Method::Lda.default_config(), 3, 1).unwrap();
        assert_eq!(g.scores.len(), 15);
        let best = g.best_auc.unwrap();
        assert!(g.scores.iter().all(|(_, s)| s.is_none_or(|s| s <= best)));
    }
}
