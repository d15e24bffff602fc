//! Points of `C^d` and the realification `C^d -> R^{2d}`.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `C^d` with finite coordinates, `d >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct CPoint(Vec<Complex64>);

impl CPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("a point needs at least one coordinate"));
        }
        if let Some(k) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::invalid(format!(
                "coordinate {} is not finite",
                k + 1
            )));
        }
        Ok(CPoint(coords))
    }

    pub fn origin(d: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); d])
    }

    /// Point with the given real coordinates and zero imaginary parts.
    pub fn from_reals(re: &[f64]) -> Result<Self> {
        Self::new(re.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Inverse of [`CPoint::realify`]: `(x1, y1, ..., xd, yd) -> (x1 + i y1, ...)`.
    pub fn complexify(x: &[f64]) -> Result<Self> {
        if !x.len().is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "a real vector of odd length {} has no complex counterpart",
                x.len()
            )));
        }
        Self::new(
            x.chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    /// The isometry `C^d -> R^{2d}`, `(z_1, ..., z_d) -> (Re z_1, Im z_1, ..., Re z_d, Im z_d)`.
    pub fn realify(&self) -> Vec<f64> {
        self.0.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    /// Euclidean norm, identical to the norm of the realified vector.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &CPoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Copy of the point with coordinate `axis` replaced.
    pub fn with_coord(&self, axis: usize, value: Complex64) -> Result<Self> {
        let mut coords = self.0.clone();
        coords[axis] = value;
        Self::new(coords)
    }
}

impl Index<usize> for CPoint {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.0[k]
    }
}

impl TryFrom<Vec<[f64; 2]>> for CPoint {
    type Error = Error;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<CPoint> for Vec<[f64; 2]> {
    fn from(p: CPoint) -> Self {
        p.0.into_iter().map(|c| [c.re, c.im]).collect()
    }
}

impl fmt::Display for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{:+}i", c.re, c.im)?;
        }
        write!(f, ")")
    }
}
