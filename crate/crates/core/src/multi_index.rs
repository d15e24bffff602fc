//! Multi-indices `beta in N_0^d`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::CPoint;

/// Largest per-axis exponent whose factorial is computed exactly.
pub const MAX_FACTORIAL_ARG: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    /// Unit multi-index `e_j` (zero-based axis).
    pub fn unit(d: usize, axis: usize) -> Self {
        let mut e = vec![0; d];
        e[axis] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Total degree `|beta|`.
    pub fn order(&self) -> u64 {
        self.0.iter().map(|&b| u64::from(b)).sum()
    }

    /// `beta! = prod_j beta_j!` as an exact integer.
    pub fn factorial(&self) -> Result<u128> {
        self.0.iter().try_fold(1u128, |acc, &b| {
            if b > MAX_FACTORIAL_ARG {
                return Err(Error::invalid(format!(
                    "factorial of exponent {b} exceeds the exact range (max {MAX_FACTORIAL_ARG})"
                )));
            }
            acc.checked_mul(factorial_u64(b) as u128)
                .ok_or_else(|| Error::invalid(format!("{self}! overflows 128 bits")))
        })
    }

    pub fn factorial_f64(&self) -> Result<f64> {
        self.factorial().map(|f| f as f64)
    }

    /// `(z - zeta)^beta` with the convention `0^0 = 1`.
    pub fn monomial(&self, z: &CPoint, zeta: &CPoint) -> Complex64 {
        self.0
            .iter()
            .enumerate()
            .fold(Complex64::new(1.0, 0.0), |acc, (k, &b)| {
                acc * int_pow(z[k] - zeta[k], b)
            })
    }

    /// `t^beta` for real bases.
    pub fn real_power(&self, t: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(t)
            .map(|(&b, &x)| x.powi(b as i32))
            .product()
    }

    /// Componentwise sum `beta + gamma`.
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All multi-indices of dimension `d` with `|beta| <= max_order`, in graded
    /// lexicographic order: by increasing `|beta|`, then by decreasing first
    /// exponent, then decreasing second exponent, and so on.
    pub fn graded(d: usize, max_order: u32) -> Vec<MultiIndex> {
        (0..=max_order).flat_map(|k| Self::of_order(d, k)).collect()
    }

    /// Multi-indices with `|beta| == order`, in the graded-lex order of [`MultiIndex::graded`].
    pub fn of_order(d: usize, order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = vec![0u32; d];
        fill_level(&mut current, 0, order, &mut out);
        out
    }
}

fn fill_level(current: &mut Vec<u32>, axis: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    let d = current.len();
    if axis + 1 == d {
        current[axis] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for b in (0..=remaining).rev() {
        current[axis] = b;
        fill_level(current, axis + 1, remaining - b, out);
    }
}

fn factorial_u64(n: u32) -> u64 {
    (1..=u64::from(n)).product()
}

/// `base^n` by binary exponentiation; `base^0 = 1` for every base.
pub(crate) fn int_pow(base: Complex64, n: u32) -> Complex64 {
    let mut result = Complex64::new(1.0, 0.0);
    let mut b = base;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result *= b;
        }
        e >>= 1;
        if e > 0 {
            b *= b;
        }
    }
    result
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, b) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}
