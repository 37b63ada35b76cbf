use super::{check_dim, Dataset};
use crate::error::{Error, Result};

/// Columns whose variance is at or below this value are treated as constant.
pub const VARIANCE_TOLERANCE: f64 = 1e-12;

/// Per-column z-score mapping fitted on a training set and reused verbatim
/// for any data that must live in the same domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalizer {
    means: Vec<f64>,
    stds: Vec<f64>,
}

fn column_moments(data: &Dataset) -> (Vec<f64>, Vec<f64>) {
    let m = data.m() as f64;
    let n = data.n();
    let mut means = vec![0.0; n];
    for row in data.rows() {
        for (acc, v) in means.iter_mut().zip(row) {
            *acc += v;
        }
    }
    means.iter_mut().for_each(|v| *v /= m);
    let mut vars = vec![0.0; n];
    for row in data.rows() {
        for ((acc, v), mu) in vars.iter_mut().zip(row).zip(&means) {
            *acc += (v - mu) * (v - mu);
        }
    }
    vars.iter_mut().for_each(|v| *v /= m);
    (means, vars)
}

impl Normalizer {
    /// Fits means and population standard deviations on `train`.
    pub fn fit(train: &Dataset) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::InvalidParameter(
                "cannot fit a normalizer on an empty dataset".into(),
            ));
        }
        let (means, vars) = column_moments(train);
        if let Some(column) = vars.iter().position(|&v| v <= VARIANCE_TOLERANCE) {
            return Err(Error::ZeroStd { column });
        }
        Ok(Normalizer {
            means,
            stds: vars.into_iter().map(f64::sqrt).collect(),
        })
    }

    pub fn from_parts(means: Vec<f64>, stds: Vec<f64>) -> Result<Self> {
        if means.len() != stds.len() {
            return Err(Error::InvalidParameter(
                "normalizer means/stds length differ".into(),
            ));
        }
        if let Some(column) = stds.iter().position(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::ZeroStd { column });
        }
        Ok(Normalizer { means, stds })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn stds(&self) -> &[f64] {
        &self.stds
    }

    pub fn n(&self) -> usize {
        self.means.len()
    }

    pub fn apply_row(&self, row: &[f64], out: &mut Vec<f64>) {
        out.extend(
            row.iter()
                .zip(&self.means)
                .zip(&self.stds)
                .map(|((x, mu), sd)| (x - mu) / sd),
        );
    }

    pub fn apply(&self, data: &Dataset) -> Result<Dataset> {
        check_dim(self.n(), data.n())?;
        Ok(data.map_rows(self.n(), |row, out| self.apply_row(row, out)))
    }

    pub fn invert(&self, data: &Dataset) -> Result<Dataset> {
        check_dim(self.n(), data.n())?;
        Ok(data.map_rows(self.n(), |row, out| {
            out.extend(
                row.iter()
                    .zip(&self.means)
                    .zip(&self.stds)
                    .map(|((z, mu), sd)| z * sd + mu),
            )
        }))
    }
}

/// Removes columns whose variance over the whole dataset is at or below
/// [`VARIANCE_TOLERANCE`]. The returned indices map output columns to input
/// columns.
pub fn drop_zero_variance(data: &Dataset) -> Result<(Dataset, Vec<usize>)> {
    if data.is_empty() {
        return Ok((data.clone(), (0..data.n()).collect()));
    }
    let (_, vars) = column_moments(data);
    let kept: Vec<usize> = (0..data.n())
        .filter(|&j| vars[j] > VARIANCE_TOLERANCE)
        .collect();
    if kept.is_empty() {
        return Err(Error::AllColumnsConstant);
    }
    Ok((data.select_columns(&kept), kept))
}

/// Column pruning followed by z-scoring, as fitted on a training set.
#[derive(Clone, Debug, PartialEq)]
pub struct Preprocess {
    pub n_input: usize,
    pub kept: Vec<usize>,
    pub normalizer: Normalizer,
}

impl Preprocess {
    pub fn fit(train: &Dataset) -> Result<Self> {
        let (pruned, kept) = drop_zero_variance(train)?;
        Ok(Preprocess {
            n_input: train.n(),
            kept,
            normalizer: Normalizer::fit(&pruned)?,
        })
    }

    pub fn apply(&self, data: &Dataset) -> Result<Dataset> {
        check_dim(self.n_input, data.n())?;
        self.normalizer.apply(&data.select_columns(&self.kept))
    }

    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n_input, row.len())?;
        let picked: Vec<f64> = self.kept.iter().map(|&j| row[j]).collect();
        let mut out = Vec::with_capacity(picked.len());
        self.normalizer.apply_row(&picked, &mut out);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::Label;
    use super::*;
    use proptest::prelude::*;

    fn ds(rows: Vec<Vec<f64>>) -> Dataset {
        let labels = (0..rows.len())
            .map(|i| if i % 2 == 0 { Label::Neg } else { Label::Pos })
            .collect();
        Dataset::new(rows, labels).unwrap()
    }

    #[test]
    fn two_value_column() {
        let d = ds(vec![vec![2.0], vec![4.0]]);
        let norm = Normalizer::fit(&d).unwrap();
        assert_eq!(norm.means(), &[3.0]);
        assert_eq!(norm.stds(), &[1.0]);
        assert_eq!(norm.apply(&d).unwrap().column(0), vec![-1.0, 1.0]);
    }

    #[test]
    fn mean_vector_maps_to_zero() {
        let d = ds(vec![vec![1.0, 10.0], vec![3.0, -2.0], vec![8.0, 4.0]]);
        let norm = Normalizer::fit(&d).unwrap();
        let probe = ds(vec![norm.means().to_vec()]);
        assert!(norm.apply(&probe).unwrap().row(0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_std_rejected() {
        let d = ds(vec![vec![1.0, 5.0], vec![2.0, 5.0]]);
        assert!(matches!(
            Normalizer::fit(&d),
            Err(Error::ZeroStd { column: 1 })
        ));
    }

    #[test]
    fn constant_column_dropped() {
        let d = ds(vec![
            vec![1.0, 7.0, 2.0],
            vec![3.0, 7.0, 0.0],
            vec![4.0, 7.0, 1.0],
        ]);
        let (out, kept) = drop_zero_variance(&d).unwrap();
        assert_eq!(kept, vec![0, 2]);
        assert_eq!(out, d.select_columns(&[0, 2]));
    }

    #[test]
    fn no_constant_columns_is_identity() {
        let d = ds(vec![vec![1.0, 2.0], vec![3.0, 5.0]]);
        let (out, kept) = drop_zero_variance(&d).unwrap();
        assert_eq!(kept, vec![0, 1]);
        assert_eq!(out, d);
    }

    #[test]
    fn all_constant_is_error() {
        let d = ds(vec![vec![1.0, 2.0], vec![1.0, 2.0]]);
        assert!(matches!(
            drop_zero_variance(&d),
            Err(Error::AllColumnsConstant)
        ));
    }

    fn matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (2usize..5, 3usize..20).prop_flat_map(|(n, m)| {
            prop::collection::vec(prop::collection::vec(-1e3f64..1e3, n), m)
        })
    }

    proptest! {
        #[test]
        fn fitted_columns_are_standardized(rows in matrix()) {
            let d = ds(rows);
            prop_assume!(drop_zero_variance(&d).map(|(_, k)| k.len() == d.n()).unwrap_or(false));
            let norm = Normalizer::fit(&d).unwrap();
            let z = norm.apply(&d).unwrap();
            let back = norm.invert(&z).unwrap();
            for j in 0..z.n() {
                let col = z.column(j);
                let mean = col.iter().sum::<f64>() / col.len() as f64;
                let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / col.len() as f64;
                prop_assert!(mean.abs() < 1e-9);
                prop_assert!((var.sqrt() - 1.0).abs() < 1e-9);
            }
            for (a, b) in d.features_flat().iter().zip(back.features_flat()) {
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
            }
        }

        #[test]
        fn pruning_is_idempotent(rows in matrix(), constant in -5.0f64..5.0) {
            let rows: Vec<Vec<f64>> = rows.into_iter().map(|mut r| { r.push(constant); r }).collect();
            let d = ds(rows);
            if let Ok((once, _)) = drop_zero_variance(&d) {
                let (twice, kept) = drop_zero_variance(&once).unwrap();
                prop_assert_eq!(&twice, &once);
                prop_assert_eq!(kept, (0..once.n()).collect::<Vec<_>>());
            }
        }
    }
}
