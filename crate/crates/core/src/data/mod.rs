//! Labeled datasets and the preprocessing applied before training.
//!
//! A [`Dataset`] is a dense row-major matrix of finite features plus one
//! binary [`Label`] per row. Datasets are immutable once built; every
//! transformation returns a new value.

mod csv;
mod generate;
mod normalize;

pub use self::csv::{load_csv, read_feature_rows, LabelColumn};
pub use generate::{gen_gaussian_pair, gen_shape, project_psd, GaussianClass, Shape};
pub use normalize::{drop_zero_variance, Normalizer, Preprocess, VARIANCE_TOLERANCE};

use crate::error::{Error, Result};

/// Binary class label, written −1 / +1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Neg => -1.0,
            Label::Pos => 1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Label::Neg => -1,
            Label::Pos => 1,
        }
    }

    pub fn flip(self) -> Label {
        match self {
            Label::Neg => Label::Pos,
            Label::Pos => Label::Neg,
        }
    }

    /// Accepts −1/+1 and remaps 0 to −1.
    pub fn from_value(v: f64) -> Option<Label> {
        if v == 1.0 {
            Some(Label::Pos)
        } else if v == -1.0 || v == 0.0 {
            Some(Label::Neg)
        } else {
            None
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    labels: Vec<Label>,
    n: usize,
}

impl Dataset {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        let mut features = Vec::with_capacity(rows.len() * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRow {
                    row: i,
                    found: row.len(),
                    expected: n,
                });
            }
            features.extend(row);
        }
        Self::from_flat(features, n, labels)
    }

    pub fn from_flat(features: Vec<f64>, n: usize, labels: Vec<Label>) -> Result<Self> {
        let m = labels.len();
        if features.len() != m * n {
            return Err(Error::InvalidParameter(format!(
                "{} feature values do not form {m} rows of {n}",
                features.len()
            )));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n.max(1),
                column: pos % n.max(1),
            });
        }
        Ok(Dataset {
            features,
            labels,
            n,
        })
    }

    /// Instance count.
    pub fn m(&self) -> usize {
        self.labels.len()
    }

    /// Feature count.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        (0..self.m()).map(move |i| self.row(i))
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn features_flat(&self) -> &[f64] {
        &self.features
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    /// `(negatives, positives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&l| l == Label::Pos).count();
        (self.m() - pos, pos)
    }

    pub fn class_indices(&self, label: Label) -> Vec<usize> {
        (0..self.m()).filter(|&i| self.labels[i] == label).collect()
    }

    pub fn require_both_classes(&self) -> Result<()> {
        match self.class_counts() {
            (0, _) => Err(Error::MissingClass(-1)),
            (_, 0) => Err(Error::MissingClass(1)),
            _ => Ok(()),
        }
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.n);
        for &i in indices {
            features.extend_from_slice(self.row(i));
        }
        Dataset {
            features,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            n: self.n,
        }
    }

    pub fn select_columns(&self, columns: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(self.m() * columns.len());
        for row in self.rows() {
            features.extend(columns.iter().map(|&j| row[j]));
        }
        Dataset {
            features,
            labels: self.labels.clone(),
            n: columns.len(),
        }
    }

    /// Applies `f` to every row, producing a dataset of the same labels.
    pub(crate) fn map_rows(
        &self,
        n_out: usize,
        mut f: impl FnMut(&[f64], &mut Vec<f64>),
    ) -> Dataset {
        let mut features = Vec::with_capacity(self.m() * n_out);
        for row in self.rows() {
            f(row, &mut features);
        }
        debug_assert_eq!(features.len(), self.m() * n_out);
        Dataset {
            features,
            labels: self.labels.clone(),
            n: n_out,
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
