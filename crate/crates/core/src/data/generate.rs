//! Seeded synthetic datasets: a pair of bivariate Gaussians and four 2-D
//! shape problems that are not linearly separable.

use std::f64::consts::PI;
use std::str::FromStr;

use nalgebra::{Matrix2, SymmetricEigen, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Dataset, Label};
use crate::error::{Error, Result};

/// Mean and covariance of one Gaussian class in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianClass {
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
}

impl GaussianClass {
    /// The two classes of the centralization walk-through example, class −1
    /// first. The published matrices are neither symmetric nor PSD; they are
    /// passed through [`project_psd`] at sampling time.
    pub fn walkthrough_pair() -> (GaussianClass, GaussianClass) {
        (
            GaussianClass {
                mean: [4.0, 5.0],
                cov: [[0.94, 0.34], [-0.34, 3.76]],
            },
            GaussianClass {
                mean: [-7.0, -1.0],
                cov: [[-2.57, -0.77], [0.767, -0.64]],
            },
        )
    }
}

/// Symmetrizes `(M + Mᵀ)/2` and clamps negative eigenvalues to zero.
pub fn project_psd(cov: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let m = Matrix2::new(cov[0][0], cov[0][1], cov[1][0], cov[1][1]);
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let clamped = eig.eigenvalues.map(|v| v.max(0.0));
    let p = eig.eigenvectors * Matrix2::from_diagonal(&clamped) * eig.eigenvectors.transpose();
    [[p[(0, 0)], p[(0, 1)]], [p[(1, 0)], p[(1, 1)]]]
}

/// Square-root factor `L` with `L Lᵀ` equal to the PSD projection of `cov`.
fn sampling_factor(cov: [[f64; 2]; 2]) -> Matrix2<f64> {
    let m = Matrix2::new(cov[0][0], cov[0][1], cov[1][0], cov[1][1]);
    let eig = SymmetricEigen::new((m + m.transpose()) * 0.5);
    let roots = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    eig.eigenvectors * Matrix2::from_diagonal(&roots)
}

/// Draws `m_per_class` instances from each Gaussian, class −1 (`neg`) first.
pub fn gen_gaussian_pair(
    neg: GaussianClass,
    pos: GaussianClass,
    m_per_class: usize,
    seed: u64,
) -> Result<Dataset> {
    if m_per_class == 0 {
        return Err(Error::InvalidParameter(
            "m_per_class must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(2 * m_per_class);
    let mut labels = Vec::with_capacity(2 * m_per_class);
    for (class, label) in [(neg, Label::Neg), (pos, Label::Pos)] {
        let factor = sampling_factor(class.cov);
        let mean = Vector2::new(class.mean[0], class.mean[1]);
        for _ in 0..m_per_class {
            let z = Vector2::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            let x = mean + factor * z;
            rows.push(vec![x[0], x[1]]);
            labels.push(label);
        }
    }
    Dataset::new(rows, labels)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Concentric rings, class −1 inside.
    Circles,
    /// Two interleaved Archimedean arms.
    Spiral,
    /// Two offset crescents.
    JainLike,
    /// A blob sitting above a wide arc.
    FlameLike,
}

impl Shape {
    pub const ALL: [Shape; 4] = [
        Shape::Circles,
        Shape::Spiral,
        Shape::JainLike,
        Shape::FlameLike,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Circles => "circles",
            Shape::Spiral => "spiral",
            Shape::JainLike => "jain_like",
            Shape::FlameLike => "flame_like",
        }
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circles" => Ok(Shape::Circles),
            "spiral" => Ok(Shape::Spiral),
            "jain_like" | "jain" => Ok(Shape::JainLike),
            "flame_like" | "flame" => Ok(Shape::FlameLike),
            other => Err(Error::InvalidParameter(format!("unknown shape {other:?}"))),
        }
    }
}

pub const CIRCLES_INNER_RADIUS: f64 = 0.5;
pub const CIRCLES_OUTER_RADIUS: f64 = 1.0;

/// Generates `m` instances of `shape` (class −1 gets `m / 2`, listed first)
/// with isotropic Gaussian jitter of standard deviation `noise`.
pub fn gen_shape(shape: Shape, m: usize, noise: f64, seed: u64) -> Result<Dataset> {
    if m < 4 {
        return Err(Error::InvalidParameter(format!(
            "shape datasets need m >= 4, got {m}"
        )));
    }
    if !(noise >= 0.0) || !noise.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "noise must be finite and >= 0, got {noise}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m_neg = m / 2;
    let mut rows = Vec::with_capacity(m);
    let mut labels = Vec::with_capacity(m);
    for i in 0..m {
        let label = if i < m_neg { Label::Neg } else { Label::Pos };
        let u: f64 = rng.random();
        let (x, y) = match (shape, label) {
            (Shape::Circles, l) => {
                let r = if l == Label::Neg {
                    CIRCLES_INNER_RADIUS
                } else {
                    CIRCLES_OUTER_RADIUS
                };
                let t = 2.0 * PI * u;
                (r * t.cos(), r * t.sin())
            }
            (Shape::Spiral, l) => {
                let angle = 3.5 * PI * u;
                let r = 0.1 + 0.9 * u;
                let phase = if l == Label::Neg { 0.0 } else { PI };
                (r * (angle + phase).cos(), r * (angle + phase).sin())
            }
            (Shape::JainLike, Label::Neg) => {
                let t = PI * u;
                (t.cos(), t.sin())
            }
            (Shape::JainLike, Label::Pos) => {
                let t = PI * u;
                (1.0 - t.cos(), 0.5 - t.sin())
            }
            (Shape::FlameLike, Label::Neg) => {
                let dx: f64 = rng.sample(StandardNormal);
                let dy: f64 = rng.sample(StandardNormal);
                (0.2 * dx, 0.1 + 0.2 * dy)
            }
            (Shape::FlameLike, Label::Pos) => {
                let t = PI * (0.85 + 1.3 * u);
                (t.cos(), t.sin())
            }
        };
        let (nx, ny): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
        rows.push(vec![x + noise * nx, y + noise * ny]);
        labels.push(label);
    }
    Dataset::new(rows, labels)
}
