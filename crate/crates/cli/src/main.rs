use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lcc_core::data::{
    gen_gaussian_pair, gen_shape, load_csv, read_feature_rows, GaussianClass, LabelColumn,
    Preprocess, Shape,
};
use lcc_core::discriminators::DiscriminatorKind;
use lcc_core::eval::{roc_auc, run_benchmark, run_procedure2, BenchmarkConfig};
use lcc_core::kernel::{assemble_klcc_lp, RbfWidth};
use lcc_core::lcc::{assemble_lcc_lp, class_centers};
use lcc_core::methods::{KernelChoice, Method, MethodConfig, TrainedModel};
use lcc_core::model_io::ModelFile;
use lcc_core::{train_lcc, Dataset, Label, DEFAULT_LAMBDA, DEFAULT_SIGMA};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "lcc",
    version,
    about = "Linear centralization classifiers: train, predict, benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one method on a dataset and write a model file.
    Train(TrainArgs),
    /// Score the rows of a CSV file with a saved model.
    Predict(PredictArgs),
    /// Compare methods over repeated stratified splits or a grid search.
    Benchmark(BenchmarkArgs),
    /// Histograms of projected values before and after optimization on the
    /// two-Gaussian example.
    Demo(DemoArgs),
}

#[derive(Args)]
struct CsvArgs {
    /// Label column: a zero-based index or `last`.
    #[arg(long, default_value = "last")]
    label_column: LabelArg,
    /// The CSV file starts with a header row.
    #[arg(long)]
    has_header: bool,
}

#[derive(Args)]
struct Hyper {
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Margin parameter; must be negative.
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    /// RBF width: a positive number or `median`.
    #[arg(long)]
    rbf_width: Option<RbfWidth>,
    #[arg(long)]
    discriminator: Option<DiscriminatorKind>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    data: Option<PathBuf>,
    /// Generated dataset, e.g. `gaussian`, `circles:m=300,noise=0.05`.
    #[arg(long)]
    gen: Option<GenSpec>,
    #[command(flatten)]
    csv: CsvArgs,
    #[arg(long, default_value = "lcc")]
    method: Method,
    #[command(flatten)]
    hyper: Hyper,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Model file to write.
    #[arg(long)]
    out: PathBuf,
    /// Also write the assembled linear program as a text table (lcc, klcc).
    #[arg(long)]
    dump_lp: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// The file carries labels in this column (index or `last`); they are
    /// dropped before scoring and used to report accuracy.
    #[arg(long)]
    label_column: Option<LabelArg>,
    #[arg(long)]
    has_header: bool,
    /// Predictions CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// ROC curve CSV (needs --label-column).
    #[arg(long, requires = "label_column")]
    roc: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Procedure {
    /// Repeated stratified train/test splits.
    Holdout,
    /// Cross-validated grid search per dataset, ranked across datasets.
    Grid,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// CSV dataset; may repeat for the grid procedure.
    #[arg(long)]
    data: Vec<PathBuf>,
    /// Generated dataset; may repeat for the grid procedure.
    #[arg(long)]
    gen: Vec<GenSpec>,
    #[command(flatten)]
    csv: CsvArgs,
    /// Comma-separated methods; the first is the reference for significance flags.
    #[arg(long, value_delimiter = ',', default_value = "lcc,lda,svm")]
    method: Vec<Method>,
    #[command(flatten)]
    hyper: Hyper,
    #[arg(long, value_enum, default_value = "holdout")]
    procedure: Procedure,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, default_value_t = 0.7)]
    train_fraction: f64,
    /// Folds for the grid procedure.
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output directory for report files.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DemoArgs {
    /// Instances per class.
    #[arg(long, default_value_t = 100)]
    per_class: usize,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Histogram CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Linear,
    Rbf,
}

#[derive(Clone, Copy)]
struct LabelArg(LabelColumn);

impl FromStr for LabelArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "last" {
            return Ok(LabelArg(LabelColumn::Last));
        }
        s.parse()
            .map(|i| LabelArg(LabelColumn::Index(i)))
            .map_err(|_| format!("expected a column index or `last`, got {s:?}"))
    }
}

#[derive(Clone, Copy, Debug)]
enum GenKind {
    Gaussian,
    Shape(Shape),
}

/// `name[:m=<count>,noise=<sd>]`.
#[derive(Clone, Copy, Debug)]
struct GenSpec {
    kind: GenKind,
    m: usize,
    noise: f64,
}

impl FromStr for GenSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let kind = match name {
            "gaussian" => GenKind::Gaussian,
            other => GenKind::Shape(other.parse().map_err(|e| {
                format!("{e}; expected gaussian, circles, spiral, jain_like or flame_like")
            })?),
        };
        let mut spec = GenSpec {
            kind,
            m: 200,
            noise: 0.05,
        };
        for param in params.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = param
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {param:?}"))?;
            match key {
                "m" => spec.m = value.parse().map_err(|_| format!("bad m {value:?}"))?,
                "noise" => {
                    spec.noise = value.parse().map_err(|_| format!("bad noise {value:?}"))?
                }
                _ => {
                    return Err(format!(
                        "unknown generator parameter {key:?}; expected m or noise"
                    ))
                }
            }
        }
        Ok(spec)
    }
}

impl GenSpec {
    fn name(&self) -> String {
        match self.kind {
            GenKind::Gaussian => format!("gaussian_m{}", self.m),
            GenKind::Shape(s) => format!("{}_m{}_noise{}", s.name(), self.m, self.noise),
        }
    }

    fn generate(&self, seed: u64) -> lcc_core::Result<Dataset> {
        match self.kind {
            GenKind::Gaussian => {
                let (neg, pos) = GaussianClass::walkthrough_pair();
                gen_gaussian_pair(neg, pos, self.m / 2, seed)
            }
            GenKind::Shape(shape) => gen_shape(shape, self.m, self.noise, seed),
        }
    }
}

/// Errors from bad flag combinations; reported with exit code 1.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Train(args) => train(args),
        Command::Predict(args) => predict(args),
        Command::Benchmark(args) => benchmark(args),
        Command::Demo(args) => demo(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let numeric = e.chain().any(|c| {
                c.downcast_ref::<lcc_core::Error>()
                    .is_some_and(|e| e.is_numeric())
            });
            ExitCode::from(if numeric { 2 } else { 1 })
        }
    }
}

/// Default configuration for `method` with the given flags applied. With
/// `strict`, a flag the method does not take is an error; otherwise it is
/// ignored for that method.
fn configure(method: Method, h: &Hyper, strict: bool) -> anyhow::Result<MethodConfig> {
    let mut config = method.default_config();
    let mut unused = vec![];
    match &mut config {
        MethodConfig::Lcc {
            lambda,
            sigma,
            discriminator,
        } => {
            set(lambda, h.lambda);
            set(sigma, h.sigma);
            set(discriminator, h.discriminator);
            unused.extend(h.kernel.map(|_| "--kernel"));
            unused.extend(h.rbf_width.map(|_| "--rbf-width"));
        }
        MethodConfig::Fqcc { lambda, sigma, .. } => {
            set(lambda, h.lambda);
            set(sigma, h.sigma);
            unused.extend(h.kernel.map(|_| "--kernel"));
            unused.extend(h.rbf_width.map(|_| "--rbf-width"));
            unused.extend(h.discriminator.map(|_| "--discriminator"));
        }
        MethodConfig::Klcc {
            lambda,
            sigma,
            kernel,
            discriminator,
        } => {
            set(lambda, h.lambda);
            set(sigma, h.sigma);
            set(discriminator, h.discriminator);
            *kernel = match (h.kernel, h.rbf_width) {
                (Some(KernelArg::Linear), Some(_)) => {
                    return Err(usage("--rbf-width needs --kernel rbf"))
                }
                (Some(KernelArg::Linear), None) => KernelChoice::Linear,
                (_, width) => KernelChoice::Rbf(width.unwrap_or(RbfWidth::Median)),
            };
        }
        MethodConfig::Lda { lambda } | MethodConfig::Svm { lambda, .. } => {
            set(lambda, h.lambda);
            unused.extend(h.sigma.map(|_| "--sigma"));
            unused.extend(h.kernel.map(|_| "--kernel"));
            unused.extend(h.rbf_width.map(|_| "--rbf-width"));
            unused.extend(h.discriminator.map(|_| "--discriminator"));
        }
    }
    if strict && !unused.is_empty() {
        return Err(usage(format!(
            "{} does not apply to method {method}",
            unused.join(", ")
        )));
    }
    Ok(config)
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn load_source(
    data: Option<&Path>,
    gen: Option<&GenSpec>,
    csv: &CsvArgs,
    seed: u64,
) -> anyhow::Result<(String, Dataset)> {
    match (data, gen) {
        (Some(path), None) => {
            let d = load_csv(path, csv.label_column.0, csv.has_header)?;
            let name = path.file_stem().map_or_else(
                || path.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            );
            Ok((name, d))
        }
        (None, Some(spec)) => Ok((spec.name(), spec.generate(seed)?)),
        _ => Err(usage("give exactly one of --data or --gen")),
    }
}

fn stats(values: &[f64]) -> (f64, f64, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (min, values.iter().sum::<f64>() / values.len() as f64, max)
}

fn train(args: TrainArgs) -> anyhow::Result<()> {
    let config = configure(args.method, &args.hyper, true)?;
    let (name, raw) = load_source(
        args.data.as_deref(),
        args.gen.as_ref(),
        &args.csv,
        args.seed,
    )?;
    let pre = Preprocess::fit(&raw)?;
    let data = pre.apply(&raw)?;

    if let Some(path) = &args.dump_lp {
        let lp = match config {
            MethodConfig::Lcc { lambda, sigma, .. } => assemble_lcc_lp(&data, lambda, sigma)?,
            MethodConfig::Klcc {
                lambda,
                sigma,
                kernel,
                ..
            } => assemble_klcc_lp(&data, &kernel.resolve(&data)?, lambda, sigma)?,
            _ => return Err(usage("--dump-lp applies to lcc and klcc only")),
        };
        fs::write(path, lp.to_table()).with_context(|| format!("writing {}", path.display()))?;
    }

    let model = config.fit(&data, args.seed)?;
    let (neg, pos) = data.class_counts();
    println!("method {config}");
    println!(
        "dataset {name}: {} instances ({neg} negative, {pos} positive), {} features, {} after dropping constant columns",
        data.m(),
        raw.n(),
        data.n()
    );
    let (c_neg, c_pos) = class_centers(&data)?;
    let gap: f64 = c_neg.iter().zip(&c_pos).map(|(a, b)| (a - b).abs()).sum();
    println!("center gap ||C1 - C-1||_1 = {gap:.6}");
    let slack_report = |epsilons: &[f64], sigma: f64| {
        let (lo, mean, hi) = stats(epsilons);
        let above = epsilons.iter().filter(|&&e| e > sigma + 1e-9).count();
        println!("slacks min {lo:.6} mean {mean:.6} max {hi:.6}, {above} above sigma");
    };
    match &model {
        TrainedModel::Lcc(m, _) => {
            println!("objective {:.6}", m.objective);
            slack_report(&m.epsilons, m.sigma);
            println!(
                "projected centers c-1 = {:.6}, c1 = {:.6}",
                m.c_neg_hat, m.c_pos_hat
            );
        }
        TrainedModel::Klcc(m, _) => {
            println!("objective {:.6}", m.objective);
            slack_report(&m.epsilons, m.sigma);
            println!(
                "projected centers c-1 = {:.6}, c1 = {:.6}",
                m.c_neg_hat, m.c_pos_hat
            );
        }
        TrainedModel::Fqcc(m) => {
            println!("objective {:.6}", m.objective_achieved);
            println!(
                "projected centers c-1 = {:.6}, c1 = {:.6}",
                m.c_neg_hat, m.c_pos_hat
            );
        }
        TrainedModel::Svm(m) => println!("objective {:.6}", m.objective()),
        TrainedModel::Lda(_) => {}
    }
    let auc = roc_auc(&model.scores(&data)?, data.labels())?.auc;
    println!(
        "train accuracy {:.6}, train auc {auc:.6}",
        model.accuracy(&data)?
    );

    ModelFile::new(pre, model).save(&args.out)?;
    println!("model written to {}", args.out.display());
    Ok(())
}

fn predict(args: PredictArgs) -> anyhow::Result<()> {
    let model = ModelFile::load(&args.model)?;
    let (rows, labels) =
        read_feature_rows(&args.data, args.has_header, args.label_column.map(|l| l.0))?;
    let mut out = String::from("label,score\n");
    let mut scores = Vec::with_capacity(rows.len());
    let mut hits = 0;
    for (i, row) in rows.iter().enumerate() {
        let (label, score) = model.predict_row(row).with_context(|| format!("row {i}"))?;
        let _ = writeln!(out, "{},{score}", label.as_i8());
        scores.push(score);
        if labels.as_ref().is_some_and(|l| l[i] == label) {
            hits += 1;
        }
    }
    match &args.out {
        Some(path) => {
            fs::write(path, &out).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{out}"),
    }
    if let Some(labels) = &labels {
        if !labels.is_empty() {
            eprintln!(
                "accuracy {:.6} over {} rows",
                hits as f64 / labels.len() as f64,
                labels.len()
            );
        }
        if let Some(path) = &args.roc {
            let roc = roc_auc(&scores, labels)?;
            let mut csv = format!("# auc {}\nfpr,tpr\n", roc.auc);
            for (fpr, tpr) in &roc.curve {
                let _ = writeln!(csv, "{fpr},{tpr}");
            }
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

fn benchmark(args: BenchmarkArgs) -> anyhow::Result<()> {
    if args.method.is_empty() {
        return Err(usage("--method needs at least one method"));
    }
    let configs = args
        .method
        .iter()
        .map(|&m| configure(m, &args.hyper, false))
        .collect::<anyhow::Result<Vec<_>>>()?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let write = |file: &str, text: &str| {
        let path = args.out.join(file);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    };

    match args.procedure {
        Procedure::Holdout => {
            if args.data.len() + args.gen.len() != 1 {
                return Err(usage(
                    "the holdout procedure takes exactly one --data or --gen",
                ));
            }
            let (name, data) = load_source(
                args.data.first().map(PathBuf::as_path),
                args.gen.first(),
                &args.csv,
                args.seed,
            )?;
            let config = BenchmarkConfig {
                runs: args.runs,
                train_fraction: args.train_fraction,
                seed: args.seed,
                ..BenchmarkConfig::new(configs)
            };
            let report = run_benchmark(&data, &config)?;
            let summary = format!(
                "dataset {name}, {} runs\n{}",
                args.runs,
                report.summary_table()
            );
            write("report.csv", &report.records_csv())?;
            write("timing.csv", &report.timing_csv())?;
            write("summary.txt", &summary)?;
            print!("{summary}");
        }
        Procedure::Grid => {
            let mut datasets = vec![];
            for path in &args.data {
                datasets.push(load_source(Some(path), None, &args.csv, args.seed)?);
            }
            for spec in &args.gen {
                datasets.push(load_source(None, Some(spec), &args.csv, args.seed)?);
            }
            if datasets.is_empty() {
                return Err(usage(
                    "the grid procedure needs at least one --data or --gen",
                ));
            }
            let report = run_procedure2(&datasets, &configs, args.folds, args.seed)?;
            write("grid.csv", &report.to_csv())?;
            write("summary.txt", &report.summary_table())?;
            print!("{}", report.summary_table());
        }
    }
    println!("reports written to {}", args.out.display());
    Ok(())
}

fn histogram(values: &[(f64, Label)], bins: usize) -> Vec<(f64, f64, usize, usize)> {
    let lo = values.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
    let hi = values.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo {
        (hi - lo) / bins as f64
    } else {
        1.0
    };
    let mut counts = vec![(0, 0); bins];
    for &(v, label) in values {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        match label {
            Label::Neg => counts[b].0 += 1,
            Label::Pos => counts[b].1 += 1,
        }
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(b, (n, p))| (lo + b as f64 * width, lo + (b + 1) as f64 * width, n, p))
        .collect()
}

fn support(values: &[(f64, Label)], label: Label) -> (f64, f64) {
    let v: Vec<f64> = values
        .iter()
        .filter(|p| p.1 == label)
        .map(|p| p.0)
        .collect();
    let (lo, _, hi) = stats(&v);
    (lo, hi)
}

fn demo(args: DemoArgs) -> anyhow::Result<()> {
    if args.bins == 0 {
        return Err(usage("--bins must be positive"));
    }
    let (neg, pos) = GaussianClass::walkthrough_pair();
    let data = gen_gaussian_pair(neg, pos, args.per_class, args.seed)?;
    let (c_neg, c_pos) = class_centers(&data)?;
    let diff: Vec<f64> = c_pos.iter().zip(&c_neg).map(|(p, n)| p - n).collect();
    let scale = diff.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if scale == 0.0 {
        return Err(anyhow!("class centers coincide"));
    }
    let beta0: Vec<f64> = diff.iter().map(|d| d / scale).collect();
    let model = train_lcc(&data, DEFAULT_LAMBDA, DEFAULT_SIGMA)?;

    let project = |beta: &[f64]| -> Vec<(f64, Label)> {
        data.rows()
            .zip(data.labels())
            .map(|(x, y)| (x.iter().zip(beta).map(|(a, b)| a * b).sum(), *y))
            .collect()
    };
    let mut csv = String::new();
    let _ = writeln!(
        csv,
        "# before: beta0 = (C1 - C-1) / max|C1 - C-1| = {beta0:?}; after: lcc beta = {:?} (lambda {DEFAULT_LAMBDA}, sigma {DEFAULT_SIGMA}, seed {})",
        model.beta, args.seed
    );
    csv.push_str("stage,bin_low,bin_high,count_neg,count_pos\n");
    for (stage, beta) in [("before", &beta0), ("after", &model.beta)] {
        let values = project(beta);
        for (lo, hi, n, p) in histogram(&values, args.bins) {
            let _ = writeln!(csv, "{stage},{lo},{hi},{n},{p}");
        }
        let (nl, nh) = support(&values, Label::Neg);
        let (pl, ph) = support(&values, Label::Pos);
        let overlap = nh >= pl && ph >= nl;
        eprintln!(
            "{stage}: class -1 in [{nl:.4}, {nh:.4}], class +1 in [{pl:.4}, {ph:.4}], supports {}",
            if overlap { "overlap" } else { "disjoint" }
        );
    }
    match &args.out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{csv}"),
    }
    Ok(())
}
