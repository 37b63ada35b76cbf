//! A uniform train/score interface over every classifier in the crate, used
//! by the benchmark harness and the command line.

use std::fmt;
use std::str::FromStr;

use crate::baselines::{
    train_lda, train_linear_svm, LdaModel, SvmModel, DEFAULT_LDA_LAMBDA, DEFAULT_SVM_EPOCHS,
    DEFAULT_SVM_LAMBDA,
};
use crate::data::{Dataset, Label};
use crate::discriminators::{fit_discriminator, Discriminator, DiscriminatorKind};
use crate::error::{Error, Result};
use crate::kernel::{train_klcc, KernelLccModel, KernelSpec, RbfWidth};
use crate::lcc::{
    train_fqcc_with, train_lcc, FqccModel, FqccOptions, LccModel, DEFAULT_LAMBDA, DEFAULT_SIGMA,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Lcc,
    Fqcc,
    Klcc,
    Lda,
    Svm,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Lcc,
        Method::Fqcc,
        Method::Klcc,
        Method::Lda,
        Method::Svm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Lcc => "lcc",
            Method::Fqcc => "fqcc",
            Method::Klcc => "klcc",
            Method::Lda => "lda",
            Method::Svm => "svm",
        }
    }

    /// The method with its published default hyperparameters.
    pub fn default_config(self) -> MethodConfig {
        match self {
            Method::Lcc => MethodConfig::Lcc {
                lambda: DEFAULT_LAMBDA,
                sigma: DEFAULT_SIGMA,
                discriminator: DiscriminatorKind::Dist,
            },
            Method::Fqcc => MethodConfig::Fqcc {
                lambda: DEFAULT_LAMBDA,
                sigma: DEFAULT_SIGMA,
                restarts: FqccOptions::default().restarts,
            },
            Method::Klcc => MethodConfig::Klcc {
                lambda: DEFAULT_LAMBDA,
                sigma: DEFAULT_SIGMA,
                kernel: KernelChoice::Rbf(RbfWidth::Median),
                discriminator: DiscriminatorKind::Dist,
            },
            Method::Lda => MethodConfig::Lda {
                lambda: DEFAULT_LDA_LAMBDA,
            },
            Method::Svm => MethodConfig::Svm {
                lambda: DEFAULT_SVM_LAMBDA,
                epochs: DEFAULT_SVM_EPOCHS,
            },
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown method {s:?}; expected one of lcc, fqcc, klcc, lda, svm"
                ))
            })
    }
}

/// Kernel as configured, before the RBF width is resolved on training data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelChoice {
    Linear,
    Rbf(RbfWidth),
}

impl KernelChoice {
    pub fn resolve(self, train: &Dataset) -> Result<KernelSpec> {
        match self {
            KernelChoice::Linear => Ok(KernelSpec::Linear),
            KernelChoice::Rbf(w) => KernelSpec::rbf(w.resolve(train)?),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MethodConfig {
    Lcc {
        lambda: f64,
        sigma: f64,
        discriminator: DiscriminatorKind,
    },
    Fqcc {
        lambda: f64,
        sigma: f64,
        restarts: usize,
    },
    Klcc {
        lambda: f64,
        sigma: f64,
        kernel: KernelChoice,
        discriminator: DiscriminatorKind,
    },
    Lda {
        lambda: f64,
    },
    Svm {
        lambda: f64,
        epochs: usize,
    },
}

impl MethodConfig {
    pub fn method(&self) -> Method {
        match self {
            MethodConfig::Lcc { .. } => Method::Lcc,
            MethodConfig::Fqcc { .. } => Method::Fqcc,
            MethodConfig::Klcc { .. } => Method::Klcc,
            MethodConfig::Lda { .. } => Method::Lda,
            MethodConfig::Svm { .. } => Method::Svm,
        }
    }

    /// Short report name: the method name, suffixed with the discriminator
    /// or kernel when they differ from the defaults.
    pub fn label(&self) -> String {
        let mut s = self.method().name().to_string();
        if let MethodConfig::Klcc {
            kernel: KernelChoice::Linear,
            ..
        } = self
        {
            s.push_str("-linear");
        }
        if let MethodConfig::Lcc { discriminator, .. } | MethodConfig::Klcc { discriminator, .. } =
            self
        {
            if *discriminator != DiscriminatorKind::Dist {
                s.push('-');
                s.push_str(discriminator.name());
            }
        }
        s
    }

    /// The same configuration with its tuned hyperparameter replaced: `σ`
    /// for the centralization methods, `λ` for LDA and SVM.
    pub fn with_tuned(&self, value: f64) -> MethodConfig {
        let mut c = *self;
        match &mut c {
            MethodConfig::Lcc { sigma, .. }
            | MethodConfig::Fqcc { sigma, .. }
            | MethodConfig::Klcc { sigma, .. } => *sigma = value,
            MethodConfig::Lda { lambda } | MethodConfig::Svm { lambda, .. } => *lambda = value,
        }
        c
    }

    /// Cross-validation grid for the tuned hyperparameter (15 values each).
    pub fn tuning_grid(&self) -> Vec<f64> {
        match self.method() {
            Method::Lcc | Method::Fqcc | Method::Klcc => {
                (-7..=7).map(|k| -(2f64.powi(k))).collect()
            }
            Method::Lda => (1..=15).map(|k| k as f64 / 15.0).collect(),
            Method::Svm => (0..15)
                .map(|i| 10f64.powf((-30 + 4 * i) as f64 / 15.0))
                .collect(),
        }
    }

    pub fn fit(&self, train: &Dataset, seed: u64) -> Result<TrainedModel> {
        Ok(match *self {
            MethodConfig::Lcc {
                lambda,
                sigma,
                discriminator,
            } => {
                let model = train_lcc(train, lambda, sigma)?;
                let projected = project(train, |x| model.transform(x))?;
                let d =
                    fit_discriminator(discriminator, &projected, model.c_neg_hat, model.c_pos_hat)?;
                TrainedModel::Lcc(model, d)
            }
            MethodConfig::Fqcc {
                lambda,
                sigma,
                restarts,
            } => {
                let options = FqccOptions {
                    restarts,
                    ..FqccOptions::default()
                };
                TrainedModel::Fqcc(train_fqcc_with(train, lambda, sigma, &options, seed)?)
            }
            MethodConfig::Klcc {
                lambda,
                sigma,
                kernel,
                discriminator,
            } => {
                let spec = kernel.resolve(train)?;
                let model = train_klcc(train, &spec, lambda, sigma)?;
                let projected = project(train, |x| model.transform(x))?;
                let d =
                    fit_discriminator(discriminator, &projected, model.c_neg_hat, model.c_pos_hat)?;
                TrainedModel::Klcc(Box::new(model), d)
            }
            MethodConfig::Lda { lambda } => TrainedModel::Lda(train_lda(train, lambda)?),
            MethodConfig::Svm { lambda, epochs } => {
                TrainedModel::Svm(train_linear_svm(train, lambda, epochs, seed)?)
            }
        })
    }
}

impl fmt::Display for MethodConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodConfig::Lcc {
                lambda,
                sigma,
                discriminator,
            } => write!(
                f,
                "lcc(lambda={lambda}, sigma={sigma}, discriminator={})",
                discriminator.name()
            ),
            MethodConfig::Fqcc {
                lambda,
                sigma,
                restarts,
            } => {
                write!(
                    f,
                    "fqcc(lambda={lambda}, sigma={sigma}, restarts={restarts})"
                )
            }
            MethodConfig::Klcc {
                lambda,
                sigma,
                kernel,
                discriminator,
            } => {
                let k = match kernel {
                    KernelChoice::Linear => "linear".to_string(),
                    KernelChoice::Rbf(RbfWidth::Median) => "rbf(median)".to_string(),
                    KernelChoice::Rbf(RbfWidth::Fixed(w)) => format!("rbf({w})"),
                };
                write!(
                    f,
                    "klcc(lambda={lambda}, sigma={sigma}, kernel={k}, discriminator={})",
                    discriminator.name()
                )
            }
            MethodConfig::Lda { lambda } => write!(f, "lda(lambda={lambda})"),
            MethodConfig::Svm { lambda, epochs } => {
                write!(f, "svm(lambda={lambda}, epochs={epochs})")
            }
        }
    }
}

fn project(train: &Dataset, f: impl Fn(&[f64]) -> Result<f64>) -> Result<Vec<(f64, Label)>> {
    train
        .rows()
        .zip(train.labels())
        .map(|(x, y)| Ok((f(x)?, *y)))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum TrainedModel {
    Lcc(LccModel, Discriminator),
    Fqcc(FqccModel),
    Klcc(Box<KernelLccModel>, Discriminator),
    Lda(LdaModel),
    Svm(SvmModel),
}

impl TrainedModel {
    pub fn method(&self) -> Method {
        match self {
            TrainedModel::Lcc(..) => Method::Lcc,
            TrainedModel::Fqcc(_) => Method::Fqcc,
            TrainedModel::Klcc(..) => Method::Klcc,
            TrainedModel::Lda(_) => Method::Lda,
            TrainedModel::Svm(_) => Method::Svm,
        }
    }

    /// Continuous score, larger meaning more +1-like.
    pub fn score(&self, instance: &[f64]) -> Result<f64> {
        match self {
            TrainedModel::Lcc(m, d) => d.score(m.transform(instance)?),
            TrainedModel::Fqcc(m) => m.score(instance),
            TrainedModel::Klcc(m, d) => d.score(m.transform(instance)?),
            TrainedModel::Lda(m) => m.score(instance),
            TrainedModel::Svm(m) => m.score(instance),
        }
    }

    pub fn predict(&self, instance: &[f64]) -> Result<Label> {
        match self {
            TrainedModel::Lcc(m, d) => d.discriminate(m.transform(instance)?),
            TrainedModel::Fqcc(m) => m.predict(instance),
            TrainedModel::Klcc(m, d) => d.discriminate(m.transform(instance)?),
            TrainedModel::Lda(m) => m.predict(instance),
            TrainedModel::Svm(m) => m.predict(instance),
        }
    }

    pub fn scores(&self, data: &Dataset) -> Result<Vec<f64>> {
        data.rows().map(|x| self.score(x)).collect()
    }

    pub fn accuracy(&self, data: &Dataset) -> Result<f64> {
        let mut hits = 0usize;
        for (x, y) in data.rows().zip(data.labels()) {
            hits += usize::from(self.predict(x)? == *y);
        }
        Ok(hits as f64 / data.m().max(1) as f64)
    }
}
