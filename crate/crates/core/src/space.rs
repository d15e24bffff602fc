//! Finite-dimensional value spaces `E = C^m` or `C^{m x m}`, their seminorm
//! families, vector values and linear functionals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of the value space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "m", rename_all = "lowercase")]
pub enum Shape {
    /// Coordinate space `C^m`.
    Vector(usize),
    /// Square matrices `C^{m x m}`, stored row-major.
    Matrix(usize),
}

impl Shape {
    pub const SCALAR: Shape = Shape::Vector(1);

    /// Number of complex entries.
    pub fn len(&self) -> usize {
        match *self {
            Shape::Vector(m) => m,
            Shape::Matrix(m) => m * m,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn m(&self) -> usize {
        match *self {
            Shape::Vector(m) | Shape::Matrix(m) => m,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Vector(m) => write!(f, "vec:{m}"),
            Shape::Matrix(m) => write!(f, "mat:{m}"),
        }
    }
}

impl FromStr for Shape {
    type Err = Error;

    /// `scalar`, `vec:<m>` or `mat:<m>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "scalar" {
            return Ok(Shape::SCALAR);
        }
        let (kind, m) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("unknown space `{s}`")))?;
        let m: usize = m
            .parse()
            .map_err(|_| Error::invalid(format!("bad dimension in space `{s}`")))?;
        if m == 0 {
            return Err(Error::invalid("space dimension must be positive"));
        }
        match kind {
            "vec" => Ok(Shape::Vector(m)),
            "mat" => Ok(Shape::Matrix(m)),
            _ => Err(Error::invalid(format!("unknown space kind `{kind}`"))),
        }
    }
}

/// The seminorm catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Seminorm {
    /// Maximum entry modulus.
    Sup,
    /// Euclidean norm (Frobenius norm for matrices).
    Euclidean,
    /// Modulus of a single entry (zero-based, row-major for matrices).
    Coordinate(usize),
    /// Spectral norm; matrices only.
    Operator,
}

impl Seminorm {
    pub fn is_norm(&self) -> bool {
        !matches!(self, Seminorm::Coordinate(_))
    }

    pub fn eval(&self, v: &VectorValue) -> f64 {
        match *self {
            Seminorm::Sup => v.entries.iter().map(|c| c.norm()).fold(0.0, f64::max),
            Seminorm::Euclidean => v.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
            Seminorm::Coordinate(i) => v.entries.get(i).map_or(0.0, |c| c.norm()),
            Seminorm::Operator => {
                let m = v.shape.m();
                let a = DMatrix::from_row_slice(m, m, &v.entries);
                a.singular_values().max()
            }
        }
    }
}

impl fmt::Display for Seminorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seminorm::Sup => write!(f, "sup"),
            Seminorm::Euclidean => write!(f, "euclidean"),
            Seminorm::Coordinate(i) => write!(f, "coord:{i}"),
            Seminorm::Operator => write!(f, "operator"),
        }
    }
}

impl FromStr for Seminorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sup" => Ok(Seminorm::Sup),
            "euclidean" | "frobenius" => Ok(Seminorm::Euclidean),
            "operator" => Ok(Seminorm::Operator),
            other => match other.strip_prefix("coord:") {
                Some(i) => i
                    .parse()
                    .map(Seminorm::Coordinate)
                    .map_err(|_| Error::invalid(format!("bad coordinate seminorm `{other}`"))),
                None => Err(Error::invalid(format!("unknown seminorm `{other}`"))),
            },
        }
    }
}

impl Serialize for Seminorm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Seminorm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A value space together with a finite, separating seminorm family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct SpaceDescriptor {
    shape: Shape,
    seminorms: Vec<Seminorm>,
}

#[derive(Serialize, Deserialize)]
struct RawSpace {
    #[serde(flatten)]
    shape: Shape,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    seminorms: Vec<Seminorm>,
}

impl TryFrom<RawSpace> for SpaceDescriptor {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        if raw.seminorms.is_empty() {
            Ok(SpaceDescriptor::with_default_seminorms(raw.shape))
        } else {
            SpaceDescriptor::new(raw.shape, raw.seminorms)
        }
    }
}

impl From<SpaceDescriptor> for RawSpace {
    fn from(s: SpaceDescriptor) -> Self {
        RawSpace {
            shape: s.shape,
            seminorms: s.seminorms,
        }
    }
}

impl SpaceDescriptor {
    pub fn new(shape: Shape, seminorms: Vec<Seminorm>) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::invalid("value space must have positive dimension"));
        }
        if seminorms.is_empty() {
            return Err(Error::invalid("seminorm family must not be empty"));
        }
        for p in &seminorms {
            match *p {
                Seminorm::Operator if !matches!(shape, Shape::Matrix(_)) => {
                    return Err(Error::invalid("operator norm requires a matrix space"))
                }
                Seminorm::Coordinate(i) if i >= shape.len() => {
                    return Err(Error::invalid(format!(
                        "coordinate seminorm index {i} out of range for {shape}"
                    )))
                }
                _ => {}
            }
        }
        let separating = seminorms.iter().any(Seminorm::is_norm)
            || (0..shape.len()).all(|i| seminorms.contains(&Seminorm::Coordinate(i)));
        if !separating {
            return Err(Error::invalid(
                "seminorm family does not separate points; add a norm",
            ));
        }
        Ok(SpaceDescriptor { shape, seminorms })
    }

    /// Sup and Euclidean norms, plus the operator norm on matrix spaces.
    pub fn with_default_seminorms(shape: Shape) -> Self {
        let mut seminorms = vec![Seminorm::Sup, Seminorm::Euclidean];
        if matches!(shape, Shape::Matrix(_)) {
            seminorms.push(Seminorm::Operator);
        }
        SpaceDescriptor { shape, seminorms }
    }

    pub fn scalar() -> Self {
        Self::with_default_seminorms(Shape::SCALAR)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn seminorms(&self) -> &[Seminorm] {
        &self.seminorms
    }

    pub fn contains(&self, p: Seminorm) -> bool {
        self.seminorms.contains(&p)
    }

    /// Largest value over the seminorm family.
    pub fn max_seminorm(&self, v: &VectorValue) -> f64 {
        self.seminorms.iter().map(|p| p.eval(v)).fold(0.0, f64::max)
    }

    pub fn check(&self, v: &VectorValue) -> Result<()> {
        if v.shape != self.shape {
            return Err(Error::Shape(format!(
                "value of shape {} in space {}",
                v.shape, self.shape
            )));
        }
        Ok(())
    }
}

/// An element of the value space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorValue {
    shape: Shape,
    entries: Vec<Complex64>,
}

impl VectorValue {
    pub fn new(shape: Shape, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != shape.len() {
            return Err(Error::Shape(format!(
                "{} entries for space {shape}",
                entries.len()
            )));
        }
        Ok(VectorValue { shape, entries })
    }

    pub fn scalar(c: Complex64) -> Self {
        VectorValue {
            shape: Shape::SCALAR,
            entries: vec![c],
        }
    }

    pub fn zero(shape: Shape) -> Self {
        VectorValue {
            shape,
            entries: vec![Complex64::new(0.0, 0.0); shape.len()],
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    /// The single entry of a scalar value.
    pub fn as_scalar(&self) -> Option<Complex64> {
        (self.entries.len() == 1).then(|| self.entries[0])
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|c| c.is_finite())
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: Complex64, other: &VectorValue) {
        debug_assert_eq!(self.shape, other.shape);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += c * b;
        }
    }

    pub fn scale(&self, c: Complex64) -> VectorValue {
        VectorValue {
            shape: self.shape,
            entries: self.entries.iter().map(|x| c * x).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> VectorValue {
        VectorValue {
            shape: self.shape,
            entries: self.entries.iter().map(|&x| f(x)).collect(),
        }
    }
}

fn zip_with(
    a: &VectorValue,
    b: &VectorValue,
    op: impl Fn(Complex64, Complex64) -> Complex64,
) -> VectorValue {
    assert_eq!(a.shape, b.shape, "shape mismatch in vector arithmetic");
    VectorValue {
        shape: a.shape,
        entries: a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(&x, &y)| op(x, y))
            .collect(),
    }
}

impl Add for &VectorValue {
    type Output = VectorValue;

    fn add(self, rhs: &VectorValue) -> VectorValue {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &VectorValue {
    type Output = VectorValue;

    fn sub(self, rhs: &VectorValue) -> VectorValue {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &VectorValue {
    type Output = VectorValue;

    fn neg(self) -> VectorValue {
        self.map(|x| -x)
    }
}

impl Mul<&VectorValue> for Complex64 {
    type Output = VectorValue;

    fn mul(self, rhs: &VectorValue) -> VectorValue {
        rhs.scale(self)
    }
}

/// A linear functional `x -> sum_i w_i x_i` (bilinear pairing, no conjugation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    shape: Shape,
    weights: Vec<Complex64>,
}

impl Functional {
    pub fn new(shape: Shape, weights: Vec<Complex64>) -> Result<Self> {
        if weights.len() != shape.len() {
            return Err(Error::Shape(format!(
                "{} weights for space {shape}",
                weights.len()
            )));
        }
        Ok(Functional { shape, weights })
    }

    /// Unit-weight probe of entry `i`.
    pub fn coordinate(shape: Shape, i: usize) -> Self {
        let mut weights = vec![Complex64::new(0.0, 0.0); shape.len()];
        weights[i] = Complex64::new(1.0, 0.0);
        Functional { shape, weights }
    }

    /// All coordinate probes; they separate points of the space.
    pub fn coordinate_probes(shape: Shape) -> Vec<Functional> {
        (0..shape.len())
            .map(|i| Self::coordinate(shape, i))
            .collect()
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn apply(&self, x: &VectorValue) -> Complex64 {
        debug_assert_eq!(self.shape, x.shape);
        self.weights
            .iter()
            .zip(&x.entries)
            .map(|(w, e)| w * e)
            .sum()
    }
}

/// Whether `probes` span the dual of the space (equivalently, separate its points).
pub fn spans_dual(shape: Shape, probes: &[Functional]) -> bool {
    let n = shape.len();
    if probes.len() < n {
        return false;
    }
    let rows: Vec<Complex64> = probes
        .iter()
        .flat_map(|p| p.weights.iter().copied())
        .collect();
    let a = DMatrix::from_row_slice(probes.len(), n, &rows);
    let sv = a.singular_values();
    let scale = sv.max();
    scale > 0.0 && sv.iter().filter(|&&s| s > 1e-12 * scale).count() == n
}
