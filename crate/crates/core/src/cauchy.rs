//! Cauchy's integral formula on the distinguished boundary of a polydisc:
//! derivatives of any order, batch Taylor coefficients by a multidimensional
//! DFT, and Cauchy inequalities.
//!
//! Coefficient convention: with boundary samples
//! `f_j = f(w + rho e^{2 pi i j / N})`, the spectrum is
//! `c_k = (prod N)^{-1} sum_j f_j e^{-2 pi i k.j / N}` and the Taylor
//! coefficient is `a_beta = rho^{-beta} c_beta`.

use std::fmt;

use indexmap::IndexMap;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{Estimate, Warning};
use crate::multi_index::{int_pow, MultiIndex};
use crate::point::CPoint;
use crate::polydisc::{max_grid_points, unflatten, validate_nodes, BoundaryGrid, Polydisc};
use crate::quadrature::{eval_checked, Integrand};
use crate::series::TaylorSeries;
use crate::space::{Seminorm, Shape, SpaceDescriptor, VectorValue};

/// Relative distance from the centre beyond which derivative estimates carry
/// a [`Warning::NearBoundary`].
pub const DEFAULT_MARGIN: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    SampledFromFunction,
    LoadedFromFile,
}

/// Values of a function on the distinguished-boundary grid of a polydisc.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySamples {
    disc: Polydisc,
    nodes: Vec<usize>,
    space: SpaceDescriptor,
    values: Vec<VectorValue>,
    provenance: Provenance,
    boundary_max: Vec<f64>,
}

impl BoundarySamples {
    /// Samples `f` on `disc.boundary_grid(nodes)`.
    pub fn sample<F: Integrand + ?Sized>(
        f: &F,
        disc: &Polydisc,
        nodes: &[usize],
        space: &SpaceDescriptor,
    ) -> Result<Self> {
        if f.dim() != disc.dim() {
            return Err(Error::invalid(format!(
                "function on C^{} sampled on a polydisc in C^{}",
                f.dim(),
                disc.dim()
            )));
        }
        if f.shape() != space.shape() {
            return Err(Error::Shape(format!(
                "function values in {} for space {}",
                f.shape(),
                space.shape()
            )));
        }
        let grid = disc.boundary_grid(nodes)?;
        let values = grid
            .points()
            .map(|z| eval_checked(f, &z))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(
            disc.clone(),
            nodes.to_vec(),
            space.clone(),
            values,
            Provenance::SampledFromFunction,
        )
    }

    pub fn from_values(
        disc: Polydisc,
        nodes: Vec<usize>,
        space: SpaceDescriptor,
        values: Vec<VectorValue>,
        provenance: Provenance,
    ) -> Result<Self> {
        let total = validate_nodes(&nodes, disc.dim(), max_grid_points())?;
        if values.len() != total {
            return Err(Error::Shape(format!(
                "{} values for a grid of {total} points",
                values.len()
            )));
        }
        for v in &values {
            space.check(v)?;
            if !v.is_finite() {
                return Err(Error::invalid("boundary samples must be finite"));
            }
        }
        let boundary_max = space
            .seminorms()
            .iter()
            .map(|p| values.iter().map(|v| p.eval(v)).fold(0.0, f64::max))
            .collect();
        Ok(BoundarySamples {
            disc,
            nodes,
            space,
            values,
            provenance,
            boundary_max,
        })
    }

    pub fn disc(&self) -> &Polydisc {
        &self.disc
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn shape(&self) -> Shape {
        self.space.shape()
    }

    pub fn values(&self) -> &[VectorValue] {
        &self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn grid(&self) -> BoundaryGrid {
        self.disc
            .boundary_grid(&self.nodes)
            .expect("node tuple validated at construction")
    }

    /// `M_alpha = max_grid p_alpha(f)`.
    pub fn max_seminorm(&self, p: Seminorm) -> Result<f64> {
        self.space
            .seminorms()
            .iter()
            .position(|&q| q == p)
            .map(|i| self.boundary_max[i])
            .ok_or_else(|| Error::invalid(format!("seminorm {p} is not in the space's family")))
    }

    /// Boundary maxima keyed by seminorm name, in family order.
    pub fn boundary_max_map(&self) -> IndexMap<String, f64> {
        self.space
            .seminorms()
            .iter()
            .zip(&self.boundary_max)
            .map(|(p, &m)| (p.to_string(), m))
            .collect()
    }

    /// Applies `g` to every sample, producing samples in another space.
    pub fn map_values(
        &self,
        space: &SpaceDescriptor,
        g: impl Fn(&VectorValue) -> VectorValue,
    ) -> Result<BoundarySamples> {
        Self::from_values(
            self.disc.clone(),
            self.nodes.clone(),
            space.clone(),
            self.values.iter().map(g).collect(),
            self.provenance,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&SamplesFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SamplesFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

/// On-disk form of [`BoundarySamples`]; `values` is the grid flattened
/// row-major (last axis fastest).
#[derive(Serialize, Deserialize)]
struct SamplesFile {
    d: usize,
    center: CPoint,
    radii: Vec<f64>,
    nodes: Vec<usize>,
    space: SpaceDescriptor,
    values: Vec<Vec<Complex64>>,
}

impl From<&BoundarySamples> for SamplesFile {
    fn from(s: &BoundarySamples) -> Self {
        SamplesFile {
            d: s.disc.dim(),
            center: s.disc.center().clone(),
            radii: s.disc.radii().to_vec(),
            nodes: s.nodes.clone(),
            space: s.space.clone(),
            values: s.values.iter().map(|v| v.entries().to_vec()).collect(),
        }
    }
}

impl TryFrom<SamplesFile> for BoundarySamples {
    type Error = Error;

    fn try_from(file: SamplesFile) -> Result<Self> {
        if file.d != file.center.dim() {
            return Err(Error::invalid(format!(
                "d = {} but the centre has {} coordinates",
                file.d,
                file.center.dim()
            )));
        }
        let disc = Polydisc::new(file.center, file.radii)?;
        let shape = file.space.shape();
        let values = file
            .values
            .into_iter()
            .map(|e| VectorValue::new(shape, e))
            .collect::<Result<Vec<_>>>()?;
        BoundarySamples::from_values(
            disc,
            file.nodes,
            file.space,
            values,
            Provenance::LoadedFromFile,
        )
    }
}

/// Quadrature used for [`cauchy_derivative_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CauchyRule {
    /// Plain trapezoidal sum of the Cauchy integral.
    Trapezoidal,
    /// Trapezoidal sum multiplied by `prod_k (1 - u_k^{N_k})`, `u = (zeta - w) / rho`,
    /// which is the exact trapezoidal value for `f = 1` inverted; the product
    /// equals the tensor interpolant of the samples at the roots of unity and
    /// removes the `|u|^N` aliasing term. Derivatives follow by the Leibniz rule.
    #[default]
    Corrected,
}

impl fmt::Display for CauchyRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CauchyRule::Trapezoidal => write!(f, "trapezoidal"),
            CauchyRule::Corrected => write!(f, "corrected"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyOptions {
    pub rule: CauchyRule,
    /// Relative distance from the centre that triggers a near-boundary warning.
    pub margin: f64,
}

impl Default for CauchyOptions {
    fn default() -> Self {
        CauchyOptions {
            rule: CauchyRule::default(),
            margin: DEFAULT_MARGIN,
        }
    }
}

fn check_interior(disc: &Polydisc, zeta: &CPoint) -> Result<()> {
    if zeta.dim() != disc.dim() {
        return Err(Error::invalid(format!(
            "point in C^{} for a polydisc in C^{}",
            zeta.dim(),
            disc.dim()
        )));
    }
    if !disc.contains(zeta) {
        return Err(Error::domain(format!(
            "{zeta} is not strictly inside the sampled polydisc"
        )));
    }
    Ok(())
}

/// `(d/dz)^beta f(zeta) = beta! / (2 pi i)^d int f(z) / (z - zeta)^{beta + 1} dz`
/// over the sampled distinguished boundary, entrywise in `E`.
pub fn cauchy_derivative(
    samples: &BoundarySamples,
    zeta: &CPoint,
    beta: &MultiIndex,
) -> Result<Estimate<VectorValue>> {
    cauchy_derivative_with(samples, zeta, beta, &CauchyOptions::default())
}

pub fn cauchy_derivative_with(
    samples: &BoundarySamples,
    zeta: &CPoint,
    beta: &MultiIndex,
    options: &CauchyOptions,
) -> Result<Estimate<VectorValue>> {
    let disc = &samples.disc;
    check_interior(disc, zeta)?;
    if beta.dim() != disc.dim() {
        return Err(Error::invalid(format!(
            "multi-index {beta} for dimension {}",
            disc.dim()
        )));
    }
    beta.factorial()?;

    let grid = samples.grid();
    let kernels: Vec<Vec<Complex64>> = (0..disc.dim())
        .map(|k| {
            axis_kernel(
                grid.axis(k),
                disc.center()[k],
                disc.radii()[k],
                zeta[k],
                beta.exponents()[k],
                options.rule,
            )
        })
        .collect();
    let value = contract(samples, &kernels);

    let warnings = disc
        .relative_position(zeta)
        .into_iter()
        .enumerate()
        .filter(|&(_, t)| t > options.margin)
        .map(|(axis, t)| Warning::NearBoundary {
            axis,
            relative_position: t,
        })
        .collect();
    Ok(Estimate { value, warnings })
}

/// Per-axis weights whose tensor product, contracted with the samples, gives
/// the derivative of order `b` on this axis (factorial included).
fn axis_kernel(
    points: &[Complex64],
    center: Complex64,
    radius: f64,
    zeta: Complex64,
    b: u32,
    rule: CauchyRule,
) -> Vec<Complex64> {
    let n = points.len();
    // basic[a][j] = (z_j - w) / (N (z_j - zeta)^{a+1})
    let basic = |a: u32, z: Complex64| (z - center) / (n as f64 * int_pow(z - zeta, a + 1));
    let b_fact: f64 = (1..=b).map(f64::from).product();
    match rule {
        CauchyRule::Trapezoidal => points.iter().map(|&z| b_fact * basic(b, z)).collect(),
        CauchyRule::Corrected => {
            // q(zeta) = 1 - ((zeta - w) / rho)^N and its derivatives q^{(m)}
            let u = (zeta - center) / radius;
            let q: Vec<Complex64> = (0..=b)
                .map(|m| {
                    if m == 0 {
                        Complex64::new(1.0, 0.0) - int_pow(u, n as u32)
                    } else if m as usize > n {
                        Complex64::new(0.0, 0.0)
                    } else {
                        let falling: f64 = (0..m).map(|i| (n as u32 - i) as f64).product();
                        -falling * int_pow(u, n as u32 - m) / radius.powi(m as i32)
                    }
                })
                .collect();
            // b! / (b - a)! * q^{(b - a)} for a = 0..=b
            let coef: Vec<Complex64> = (0..=b)
                .map(|a| {
                    let ratio: f64 = ((b - a + 1)..=b).map(f64::from).product();
                    ratio * q[(b - a) as usize]
                })
                .collect();
            points
                .iter()
                .map(|&z| (0..=b).map(|a| coef[a as usize] * basic(a, z)).sum())
                .collect()
        }
    }
}

/// `sum_grid f(z_j) prod_k kernel_k[j_k]` in row-major order.
fn contract(samples: &BoundarySamples, kernels: &[Vec<Complex64>]) -> VectorValue {
    let mut acc = VectorValue::zero(samples.shape());
    for (flat, v) in samples.values.iter().enumerate() {
        let idx = unflatten(&samples.nodes, flat);
        let weight: Complex64 = idx
            .iter()
            .enumerate()
            .map(|(k, &j)| kernels[k][j])
            .product();
        acc.add_scaled(weight, v);
    }
    acc
}

/// Full multidimensional DFT of boundary samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    nodes: Vec<usize>,
    coefficients: Vec<VectorValue>,
}

impl Spectrum {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// Coefficients `c_k` indexed like the sample grid.
    pub fn coefficients(&self) -> &[VectorValue] {
        &self.coefficients
    }

    /// Frequency index of grid position `flat` (unsigned, `0 <= k_j < N_j`).
    pub fn index(&self, flat: usize) -> Vec<usize> {
        unflatten(&self.nodes, flat)
    }

    /// Signed frequency: indices `k >= N/2` map to `k - N`, so the Nyquist
    /// mode counts as negative.
    pub fn signed_frequency(&self, flat: usize) -> Vec<i64> {
        self.index(flat)
            .into_iter()
            .zip(&self.nodes)
            .map(|(k, &n)| {
                if 2 * k >= n {
                    k as i64 - n as i64
                } else {
                    k as i64
                }
            })
            .collect()
    }

    /// `c_k` for a nonnegative frequency `k` with `2 k_j < N_j`.
    pub fn at(&self, k: &[u32]) -> Option<&VectorValue> {
        if k.len() != self.nodes.len()
            || k.iter()
                .zip(&self.nodes)
                .any(|(&a, &n)| 2 * a as usize >= n)
        {
            return None;
        }
        let flat = k
            .iter()
            .zip(&self.nodes)
            .fold(0usize, |acc, (&a, &n)| acc * n + a as usize);
        self.coefficients.get(flat)
    }
}

/// Forward DFT with kernel `e^{-i k theta}` and normalisation `1 / prod N`.
pub fn spectrum(samples: &BoundarySamples) -> Spectrum {
    let nodes = samples.nodes.clone();
    let total = samples.values.len();
    let shape = samples.shape();
    let mut planner = FftPlanner::<f64>::new();
    let scale = 1.0 / total as f64;

    let mut coefficients = vec![VectorValue::zero(shape); total];
    let mut buffer = vec![Complex64::new(0.0, 0.0); total];
    for e in 0..shape.len() {
        for (b, v) in buffer.iter_mut().zip(&samples.values) {
            *b = v.entries()[e];
        }
        let mut stride = 1;
        for k in (0..nodes.len()).rev() {
            let n = nodes[k];
            let fft = planner.plan_fft_forward(n);
            let mut line = vec![Complex64::new(0.0, 0.0); n];
            let block = n * stride;
            for outer in (0..total).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    for (j, slot) in line.iter_mut().enumerate() {
                        *slot = buffer[base + j * stride];
                    }
                    fft.process(&mut line);
                    for (j, value) in line.iter().enumerate() {
                        buffer[base + j * stride] = *value;
                    }
                }
            }
            stride *= n;
        }
        for (c, b) in coefficients.iter_mut().zip(&buffer) {
            c.entries_mut()[e] = b * scale;
        }
    }
    Spectrum {
        nodes,
        coefficients,
    }
}

fn check_aliasing(nodes: &[usize], degree: u32) -> Result<()> {
    let required = 2 * (degree as usize + 1);
    match nodes.iter().position(|&n| n < required) {
        Some(axis) => Err(Error::Aliasing {
            axis: axis + 1,
            nodes: nodes[axis],
            required,
        }),
        None => Ok(()),
    }
}

/// All `a_beta = (d/dz)^beta f(w) / beta!` with `|beta| <= max_total_degree`
/// from one DFT of the samples. Requires `N_k >= 2 (n + 1)` on every axis.
pub fn taylor_coefficients(
    samples: &BoundarySamples,
    max_total_degree: u32,
) -> Result<TaylorSeries> {
    check_aliasing(&samples.nodes, max_total_degree)?;
    let spec = spectrum(samples);
    let radii = samples.disc.radii();
    let coefficients = MultiIndex::graded(samples.disc.dim(), max_total_degree)
        .iter()
        .map(|beta| {
            let c = spec.at(beta.exponents()).expect("aliasing margin checked");
            c.scale(Complex64::new(1.0 / beta.real_power(radii), 0.0))
        })
        .collect();
    TaylorSeries::new(
        samples.disc.center().clone(),
        radii.to_vec(),
        samples.shape(),
        max_total_degree,
        coefficients,
        samples.boundary_max_map(),
    )
}

/// One coefficient `a_beta` by a direct trapezoidal sum, for when only a few
/// coefficients are needed.
pub fn taylor_coefficient_direct(
    samples: &BoundarySamples,
    beta: &MultiIndex,
) -> Result<VectorValue> {
    if beta.dim() != samples.disc.dim() {
        return Err(Error::invalid(format!(
            "multi-index {beta} for dimension {}",
            samples.disc.dim()
        )));
    }
    check_aliasing(
        &samples.nodes,
        beta.exponents().iter().copied().max().unwrap_or(0),
    )?;
    let kernels: Vec<Vec<Complex64>> = samples
        .nodes
        .iter()
        .zip(beta.exponents())
        .zip(samples.disc.radii())
        .map(|((&n, &b), &rho)| {
            (0..n)
                .map(|j| {
                    let theta =
                        -2.0 * std::f64::consts::PI * (b as usize * j % n) as f64 / n as f64;
                    Complex64::from_polar(1.0 / (n as f64 * rho.powi(b as i32)), theta)
                })
                .collect()
        })
        .collect();
    Ok(contract(samples, &kernels))
}

/// Upper bound for `p(d^beta f(zeta))`:
/// `beta! M_p prod_j rho_j / delta_j^{beta_j + 1}` with `delta_j = rho_j - |zeta_j - w_j|`.
///
/// At the centre this is `beta! M_p / rho^beta`. Off centre the kernel
/// `|z - zeta|^{-beta-1}` on the boundary is only bounded by the distance to
/// it, so the denominator uses `delta` rather than `rho`.
pub fn cauchy_bound(
    samples: &BoundarySamples,
    beta: &MultiIndex,
    zeta: &CPoint,
    seminorm: Seminorm,
) -> Result<f64> {
    let disc = &samples.disc;
    check_interior(disc, zeta)?;
    let m = samples.max_seminorm(seminorm)?;
    let factorial = beta.factorial_f64()?;
    let kernel: f64 = (0..disc.dim())
        .map(|j| {
            let rho = disc.radii()[j];
            let delta = rho - (zeta[j] - disc.center()[j]).norm();
            rho / delta.powi(beta.exponents()[j] as i32 + 1)
        })
        .product();
    Ok(factorial * m * kernel)
}
