//! Versioned plain-text model files.
//!
//! The first line is `lcc-model <version>`; every other line is
//! `key=value`, vectors are space separated. Floats are written in Rust's
//! shortest round-trip form, so loading a saved model reproduces it bit for
//! bit. A file also carries the preprocessing fitted with the model, so raw
//! rows can be scored directly.

use std::collections::BTreeMap;
use std::fmt::{Display, Write as _};
use std::path::Path;
use std::str::FromStr;

use crate::baselines::{LdaModel, SvmModel};
use crate::data::{Label, Normalizer, Preprocess};
use crate::discriminators::Discriminator;
use crate::error::{Error, Result};
use crate::kernel::{KernelLccModel, KernelSpec};
use crate::lcc::{FqccModel, LccModel};
use crate::methods::{Method, TrainedModel};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "lcc-model";

#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub preprocess: Preprocess,
    pub model: TrainedModel,
}

impl ModelFile {
    pub fn new(preprocess: Preprocess, model: TrainedModel) -> Self {
        ModelFile { preprocess, model }
    }

    /// Number of raw input columns expected by [`Self::predict_row`].
    pub fn n_input(&self) -> usize {
        self.preprocess.n_input
    }

    /// Label and score for one raw (unprocessed) row.
    pub fn predict_row(&self, row: &[f64]) -> Result<(Label, f64)> {
        let x = self.preprocess.apply_row(row)?;
        Ok((self.model.predict(&x)?, self.model.score(&x)?))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_text(&text)
    }

    pub fn to_text(&self) -> String {
        let mut w = Writer::default();
        w.line(MAGIC, FORMAT_VERSION);
        w.kv("method", self.model.method().name());
        w.kv("preprocess.n_input", self.preprocess.n_input);
        w.vec("preprocess.kept", &self.preprocess.kept);
        w.vec("preprocess.means", self.preprocess.normalizer.means());
        w.vec("preprocess.stds", self.preprocess.normalizer.stds());
        match &self.model {
            TrainedModel::Lcc(m, d) => {
                w.vec("beta", &m.beta);
                w.vec("center_neg", &m.center_neg);
                w.vec("center_pos", &m.center_pos);
                w.kv("c_neg_hat", m.c_neg_hat);
                w.kv("c_pos_hat", m.c_pos_hat);
                w.kv("l_hat", m.l_hat);
                w.kv("lambda", m.lambda);
                w.kv("sigma", m.sigma);
                w.vec("epsilons", &m.epsilons);
                w.kv("objective", m.objective);
                w.kv("lp_iterations", m.lp_iterations);
                w.discriminator(d);
            }
            TrainedModel::Fqcc(m) => {
                w.vec("beta", &m.beta);
                w.kv("c_neg_hat", m.c_neg_hat);
                w.kv("c_pos_hat", m.c_pos_hat);
                w.kv("lambda", m.lambda);
                w.kv("sigma", m.sigma);
                w.kv("objective", m.objective_achieved);
            }
            TrainedModel::Klcc(m, d) => {
                match m.kernel {
                    KernelSpec::Linear => w.kv("kernel", "linear"),
                    KernelSpec::Rbf { rbf_width } => {
                        w.kv("kernel", "rbf");
                        w.kv("rbf_width", rbf_width);
                    }
                }
                w.kv("n", m.n);
                w.vec("alphas", &m.alphas);
                w.vec("support", &m.support);
                w.kv("c_neg_hat", m.c_neg_hat);
                w.kv("c_pos_hat", m.c_pos_hat);
                w.kv("l_hat", m.l_hat);
                w.kv("lambda", m.lambda);
                w.kv("sigma", m.sigma);
                w.vec("epsilons", &m.epsilons);
                w.kv("objective", m.objective);
                w.discriminator(d);
            }
            TrainedModel::Lda(m) => {
                w.vec("weight", &m.weight);
                w.kv("threshold", m.threshold);
                w.kv("lambda", m.lambda_reg);
            }
            TrainedModel::Svm(m) => {
                w.vec("weight", &m.weight);
                w.kv("intercept", m.intercept);
                w.kv("lambda", m.lambda);
                w.vec("objective_trace", &m.objective_trace);
            }
        }
        w.0
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty file"))?;
        let version = header
            .strip_prefix(MAGIC)
            .map(str::trim)
            .ok_or_else(|| bad("missing lcc-model header"))?;
        if version != FORMAT_VERSION.to_string() {
            return Err(bad(format!("unsupported format version {version:?}")));
        }
        let mut fields = BTreeMap::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key=value", i + 2)))?;
            if fields.insert(k.to_string(), v.to_string()).is_some() {
                return Err(bad(format!("duplicate key {k:?}")));
            }
        }
        let f = Fields(fields);

        let preprocess = Preprocess {
            n_input: f.get("preprocess.n_input")?,
            kept: f.vec("preprocess.kept")?,
            normalizer: Normalizer::from_parts(
                f.vec("preprocess.means")?,
                f.vec("preprocess.stds")?,
            )?,
        };
        if preprocess.kept.len() != preprocess.normalizer.n()
            || preprocess.kept.iter().any(|&j| j >= preprocess.n_input)
        {
            return Err(bad("preprocess columns are inconsistent"));
        }

        let method: Method = f.get("method")?;
        let model = match method {
            Method::Lcc => TrainedModel::Lcc(
                LccModel {
                    beta: f.vec("beta")?,
                    center_neg: f.vec("center_neg")?,
                    center_pos: f.vec("center_pos")?,
                    c_neg_hat: f.get("c_neg_hat")?,
                    c_pos_hat: f.get("c_pos_hat")?,
                    l_hat: f.get("l_hat")?,
                    lambda: f.get("lambda")?,
                    sigma: f.get("sigma")?,
                    epsilons: f.vec("epsilons")?,
                    objective: f.get("objective")?,
                    lp_iterations: f.get("lp_iterations")?,
                },
                f.discriminator()?,
            ),
            Method::Fqcc => TrainedModel::Fqcc(FqccModel {
                beta: f.vec("beta")?,
                c_neg_hat: f.get("c_neg_hat")?,
                c_pos_hat: f.get("c_pos_hat")?,
                lambda: f.get("lambda")?,
                sigma: f.get("sigma")?,
                objective_achieved: f.get("objective")?,
            }),
            Method::Klcc => {
                let kernel = match f.raw("kernel")? {
                    "linear" => KernelSpec::Linear,
                    "rbf" => KernelSpec::rbf(f.get("rbf_width")?)?,
                    other => return Err(bad(format!("unknown kernel {other:?}"))),
                };
                let model = KernelLccModel {
                    alphas: f.vec("alphas")?,
                    support: f.vec("support")?,
                    n: f.get("n")?,
                    kernel,
                    c_neg_hat: f.get("c_neg_hat")?,
                    c_pos_hat: f.get("c_pos_hat")?,
                    l_hat: f.get("l_hat")?,
                    lambda: f.get("lambda")?,
                    sigma: f.get("sigma")?,
                    epsilons: f.vec("epsilons")?,
                    objective: f.get("objective")?,
                };
                if model.support.len() != model.alphas.len() * model.n {
                    return Err(bad("support rows do not match alphas"));
                }
                TrainedModel::Klcc(Box::new(model), f.discriminator()?)
            }
            Method::Lda => TrainedModel::Lda(LdaModel {
                weight: f.vec("weight")?,
                threshold: f.get("threshold")?,
                lambda_reg: f.get("lambda")?,
            }),
            Method::Svm => TrainedModel::Svm(SvmModel {
                weight: f.vec("weight")?,
                intercept: f.get("intercept")?,
                lambda: f.get("lambda")?,
                objective_trace: f.vec("objective_trace")?,
            }),
        };
        Ok(ModelFile { preprocess, model })
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::ModelFormat(msg.into())
}

#[derive(Default)]
struct Writer(String);

impl Writer {
    fn line(&mut self, a: &str, b: impl Display) {
        writeln!(self.0, "{a} {b}").expect("writing to a string");
    }

    fn kv(&mut self, key: &str, value: impl Display) {
        writeln!(self.0, "{key}={value}").expect("writing to a string");
    }

    fn vec<T: Display>(&mut self, key: &str, values: &[T]) {
        let joined: Vec<String> = values.iter().map(ToString::to_string).collect();
        self.kv(key, joined.join(" "));
    }

    fn discriminator(&mut self, d: &Discriminator) {
        self.kv("discriminator", d.kind().name());
        match d {
            Discriminator::Dist { threshold } => self.kv("discriminator.threshold", threshold),
            Discriminator::OneNn { points } => {
                let encoded: Vec<String> = points
                    .iter()
                    .map(|(v, l, i)| format!("{v}:{}:{i}", l.as_i8()))
                    .collect();
                self.kv("discriminator.points", encoded.join(" "));
            }
            Discriminator::OneSv {
                scale,
                weight,
                intercept,
                h,
            } => {
                self.kv("discriminator.scale", scale);
                self.kv("discriminator.weight", weight);
                self.kv("discriminator.intercept", intercept);
                self.kv("discriminator.h", h);
            }
        }
    }
}

struct Fields(BTreeMap<String, String>);

impl Fields {
    fn raw(&self, key: &str) -> Result<&str> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| bad(format!("missing key {key:?}")))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let v = self.raw(key)?;
        v.trim()
            .parse()
            .map_err(|_| bad(format!("cannot parse {key}={v:?}")))
    }

    fn vec<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        self.raw(key)?
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| bad(format!("cannot parse {t:?} in {key}")))
            })
            .collect()
    }

    fn discriminator(&self) -> Result<Discriminator> {
        Ok(match self.raw("discriminator")? {
            "dist" => Discriminator::Dist {
                threshold: self.get("discriminator.threshold")?,
            },
            "1nn" => {
                let points = self
                    .raw("discriminator.points")?
                    .split_whitespace()
                    .map(|t| {
                        let mut parts = t.split(':');
                        let (Some(v), Some(l), Some(i), None) =
                            (parts.next(), parts.next(), parts.next(), parts.next())
                        else {
                            return Err(bad(format!("malformed 1nn point {t:?}")));
                        };
                        let v: f64 = v
                            .parse()
                            .map_err(|_| bad(format!("malformed 1nn point {t:?}")))?;
                        let l = l
                            .parse::<f64>()
                            .ok()
                            .and_then(Label::from_value)
                            .ok_or_else(|| bad(format!("malformed 1nn label in {t:?}")))?;
                        let i: usize = i
                            .parse()
                            .map_err(|_| bad(format!("malformed 1nn point {t:?}")))?;
                        Ok((v, l, i))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if points.is_empty() {
                    return Err(bad("1nn discriminator has no points"));
                }
                Discriminator::OneNn { points }
            }
            "1sv" => Discriminator::OneSv {
                scale: self.get("discriminator.scale")?,
                weight: self.get("discriminator.weight")?,
                intercept: self.get("discriminator.intercept")?,
                h: self.get("discriminator.h")?,
            },
            other => return Err(bad(format!("unknown discriminator {other:?}"))),
        })
    }
}
