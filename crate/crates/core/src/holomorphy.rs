//! Finite-resolution holomorphy diagnostics: Cauchy–Riemann residuals,
//! negative-frequency spectra, slice-wise (separate) holomorphy, weak
//! holomorphy through functionals, and the real/complex derivative relation.
//!
//! A `pass` verdict only means no violation was found at the recorded
//! resolution; holomorphy can be falsified numerically, never proven.

use indexmap::IndexMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cauchy::{cauchy_derivative, spectrum, BoundarySamples};
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::point::CPoint;
use crate::polydisc::Polydisc;
use crate::quadrature::{eval_checked, Integrand};
use crate::space::{spans_dual, Functional, SpaceDescriptor, VectorValue};

/// Absolute floor for finite-difference residual thresholds.
pub const FD_FLOOR: f64 = 1e-6;
/// Default step for the Cauchy–Riemann residual.
pub const DEFAULT_CR_STEP: f64 = 1e-3;
/// Default step for the real/complex relation (stencils up to third order).
pub const DEFAULT_RELATION_STEP: f64 = 1e-2;
/// Default relative tolerance for spectral checks.
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-10;
/// Safety factor applied to the fitted `C h^2` threshold.
const FIT_SAFETY: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Fail dominates inconclusive, which dominates pass.
    fn merge(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

/// Where a check failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<CPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequency: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seminorm: Option<String>,
    pub magnitude: f64,
}

impl Witness {
    fn new(check: &str, magnitude: f64) -> Self {
        Witness {
            check: check.to_string(),
            point: None,
            axis: None,
            probe: None,
            frequency: None,
            seminorm: None,
            magnitude,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub verdict: Verdict,
    pub residuals: IndexMap<String, f64>,
    pub thresholds: IndexMap<String, f64>,
    pub resolution: IndexMap<String, Value>,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl DiagnosticReport {
    fn new(verdict: Verdict) -> Self {
        DiagnosticReport {
            verdict,
            residuals: IndexMap::new(),
            thresholds: IndexMap::new(),
            resolution: IndexMap::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Combines sub-reports; names are prefixed to keep keys distinct.
    pub fn merge(reports: Vec<(String, DiagnosticReport)>) -> DiagnosticReport {
        let mut out = DiagnosticReport::new(Verdict::Pass);
        for (name, r) in reports {
            out.verdict = out.verdict.merge(r.verdict);
            for (k, v) in r.residuals {
                out.residuals.insert(format!("{name}.{k}"), v);
            }
            for (k, v) in r.thresholds {
                out.thresholds.insert(format!("{name}.{k}"), v);
            }
            for (k, v) in r.resolution {
                out.resolution.insert(format!("{name}.{k}"), v);
            }
            out.witnesses.extend(r.witnesses);
            out.notes
                .extend(r.notes.into_iter().map(|n| format!("{name}: {n}")));
        }
        out
    }
}

/// Threshold and verdict for a finite-difference residual measured at steps
/// `h` and `h/2`: pass iff `r(h) <= max(floor, 1.5 C h^2)` with
/// `C = |r(h) - r(h/2)| / (3 h^2 / 4)`. A residual that grows as the step
/// shrinks is roundoff-dominated and reported inconclusive.
fn fd_verdict(r_h: f64, r_half: f64, h: f64) -> (Verdict, f64) {
    let c = (r_h - r_half).abs() / (0.75 * h * h);
    let threshold = FD_FLOOR.max(FIT_SAFETY * c * h * h);
    let verdict = if r_h <= threshold {
        Verdict::Pass
    } else if r_half > 1.5 * r_h {
        Verdict::Inconclusive
    } else {
        Verdict::Fail
    };
    (verdict, threshold)
}

/// Direction in `C^d` of real coordinate `k` of the realification
/// (`x_j` for even `k`, `y_j` for odd `k`).
fn real_direction(d: usize, k: usize) -> Vec<Complex64> {
    let mut dir = vec![Complex64::new(0.0, 0.0); d];
    dir[k / 2] = if k.is_multiple_of(2) {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    };
    dir
}

fn shifted(z: &CPoint, dir: &[Complex64], t: f64) -> Result<CPoint> {
    CPoint::new(
        z.coords()
            .iter()
            .zip(dir)
            .map(|(&a, &b)| a + t * b)
            .collect(),
    )
}

fn eval_defined<F: Integrand + ?Sized>(f: &F, z: &CPoint) -> Result<VectorValue> {
    if !f.is_defined(z) {
        return Err(Error::domain(format!(
            "finite-difference stencil leaves the domain at {z}"
        )));
    }
    eval_checked(f, z)
}

/// `dbar_j f(z) = (d_x + i d_y) f / 2` by central differences with step `h`.
pub fn dbar<F: Integrand + ?Sized>(f: &F, z: &CPoint, axis: usize, h: f64) -> Result<VectorValue> {
    let d = z.dim();
    let mut acc = VectorValue::zero(f.shape());
    for (k, weight) in [
        (2 * axis, Complex64::new(0.5, 0.0)),
        (2 * axis + 1, Complex64::new(0.0, 0.5)),
    ] {
        let dir = real_direction(d, k);
        let plus = eval_defined(f, &shifted(z, &dir, h)?)?;
        let minus = eval_defined(f, &shifted(z, &dir, -h)?)?;
        acc.add_scaled(weight / (2.0 * h), &(&plus - &minus));
    }
    Ok(acc)
}

fn check_step(h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::invalid(format!("step must be positive, got {h}")));
    }
    Ok(())
}

/// Cauchy–Riemann residual `max_{z, j, p} p(dbar_j f(z))` over the sample
/// points, at step `h` and `h/2`.
pub fn cr_residual<F: Integrand + ?Sized>(
    f: &F,
    space: &SpaceDescriptor,
    points: &[CPoint],
    h: f64,
) -> Result<DiagnosticReport> {
    check_step(h)?;
    if points.is_empty() {
        return Err(Error::invalid("no sample points"));
    }
    let d = f.dim();
    // every point needs its 2h neighbourhood inside the domain
    for z in points {
        if z.dim() != d {
            return Err(Error::invalid(format!("point {z} is not in C^{d}")));
        }
        for k in 0..2 * d {
            let dir = real_direction(d, k);
            for t in [-2.0 * h, 2.0 * h] {
                let p = shifted(z, &dir, t)?;
                if !f.is_defined(&p) {
                    return Err(Error::domain(format!(
                        "2h-neighbourhood of {z} leaves the domain"
                    )));
                }
            }
        }
    }

    let sweep = |step: f64| -> Result<(f64, Option<(usize, usize)>)> {
        let mut worst = (0.0, None);
        for (i, z) in points.iter().enumerate() {
            for j in 0..d {
                let r = space.max_seminorm(&dbar(f, z, j, step)?);
                if r > worst.0 || worst.1.is_none() {
                    worst = (r, Some((i, j)));
                }
            }
        }
        Ok(worst)
    };
    let (r_h, at) = sweep(h)?;
    let (r_half, _) = sweep(h / 2.0)?;
    let (verdict, threshold) = fd_verdict(r_h, r_half, h);

    let mut report = DiagnosticReport::new(verdict);
    report.residuals.insert("cr".into(), r_h);
    report.residuals.insert("cr_half_step".into(), r_half);
    report.thresholds.insert("cr".into(), threshold);
    report.resolution.insert("h".into(), json!(h));
    report
        .resolution
        .insert("points".into(), json!(points.len()));
    if verdict != Verdict::Pass {
        if let Some((i, j)) = at {
            let mut w = Witness::new("cr", r_h);
            w.point = Some(points[i].clone());
            w.axis = Some(j + 1);
            report.witnesses.push(w);
        }
    }
    Ok(report)
}

/// Fails if any DFT coefficient with a negative frequency index is above
/// `tol (1 + M_p)` in some seminorm `p` of the family, `M_p` the boundary
/// maximum. Polynomials have only nonnegative frequencies.
pub fn negative_spectrum_check(samples: &BoundarySamples, tol: f64) -> Result<DiagnosticReport> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let spec = spectrum(samples);
    let seminorms = samples.space().seminorms();
    let thresholds: Vec<f64> = seminorms
        .iter()
        .map(|&p| samples.max_seminorm(p).map(|m| tol * (1.0 + m)))
        .collect::<Result<_>>()?;

    let mut worst = vec![(0.0_f64, None::<usize>); seminorms.len()];
    for (flat, c) in spec.coefficients().iter().enumerate() {
        if spec.signed_frequency(flat).iter().all(|&k| k >= 0) {
            continue;
        }
        for (slot, p) in worst.iter_mut().zip(seminorms) {
            let m = p.eval(c);
            if m > slot.0 {
                *slot = (m, Some(flat));
            }
        }
    }

    let mut report = DiagnosticReport::new(Verdict::Pass);
    report
        .resolution
        .insert("nodes".into(), json!(samples.nodes()));
    report.resolution.insert("tol".into(), json!(tol));
    let mut violation: Option<(f64, Witness)> = None;
    for ((p, &(m, flat)), &thr) in seminorms.iter().zip(&worst).zip(&thresholds) {
        report
            .residuals
            .insert(format!("negative_spectrum[{p}]"), m);
        report
            .thresholds
            .insert(format!("negative_spectrum[{p}]"), thr);
        if m > thr && violation.as_ref().is_none_or(|(ratio, _)| m / thr > *ratio) {
            let mut w = Witness::new("negative_spectrum", m);
            w.frequency = flat.map(|i| spec.signed_frequency(i));
            w.seminorm = Some(p.to_string());
            violation = Some((m / thr, w));
        }
    }
    if let Some((_, w)) = violation {
        report.verdict = Verdict::Fail;
        report.witnesses.push(w);
    }
    Ok(report)
}

/// Settings for [`separate_holomorphy_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SliceOptions {
    pub nodes: usize,
    pub tol: f64,
    /// Slice radius as a fraction of the domain radius on that axis.
    pub slice_fraction: f64,
}

impl Default for SliceOptions {
    fn default() -> Self {
        SliceOptions {
            nodes: 64,
            tol: DEFAULT_SPECTRAL_TOL,
            slice_fraction: 0.5,
        }
    }
}

/// Number of default base points for slice checks.
pub const DEFAULT_BASE_POINTS: usize = 8;

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

const PRIMES: [usize; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Low-discrepancy (Halton) points with `|z_j - w_j| <= fraction * R_j`.
pub fn halton_points(disc: &Polydisc, count: usize, fraction: f64) -> Result<Vec<CPoint>> {
    let d = disc.dim();
    if 2 * d > PRIMES.len() {
        return Err(Error::invalid(format!(
            "Halton points supported up to d = {}",
            PRIMES.len() / 2
        )));
    }
    (1..=count)
        .map(|i| {
            let coords = (0..d)
                .map(|j| {
                    let r = fraction * disc.radii()[j] * radical_inverse(i, PRIMES[2 * j]).sqrt();
                    let theta = 2.0 * std::f64::consts::PI * radical_inverse(i, PRIMES[2 * j + 1]);
                    disc.center()[j] + Complex64::from_polar(r, theta)
                })
                .collect();
            CPoint::new(coords)
        })
        .collect()
}

/// One-variable restriction `zeta -> f(z_1, .., zeta, .., z_d)`.
struct Slice<'a, F: ?Sized> {
    f: &'a F,
    base: &'a CPoint,
    axis: usize,
}

impl<F: Integrand + ?Sized> Integrand for Slice<'_, F> {
    fn dim(&self) -> usize {
        1
    }

    fn shape(&self) -> crate::space::Shape {
        self.f.shape()
    }

    fn eval(&self, z: &CPoint) -> Result<VectorValue> {
        self.f.eval(&self.base.with_coord(self.axis, z[0])?)
    }

    fn is_defined(&self, z: &CPoint) -> bool {
        self.base
            .with_coord(self.axis, z[0])
            .is_ok_and(|p| self.f.is_defined(&p))
    }
}

/// Runs the one-variable negative-spectrum check on every slice through
/// every base point along every axis; passes iff all slices pass.
pub fn separate_holomorphy_check<F: Integrand + ?Sized>(
    f: &F,
    space: &SpaceDescriptor,
    domain: &Polydisc,
    base_points: &[CPoint],
    options: &SliceOptions,
) -> Result<DiagnosticReport> {
    if base_points.is_empty() {
        return Err(Error::invalid("no base points"));
    }
    let d = domain.dim();
    let mut report = DiagnosticReport::new(Verdict::Pass);
    report
        .resolution
        .insert("nodes".into(), json!(options.nodes));
    report.resolution.insert("tol".into(), json!(options.tol));
    report
        .resolution
        .insert("base_points".into(), json!(base_points.len()));
    report
        .resolution
        .insert("slice_fraction".into(), json!(options.slice_fraction));
    let mut axis_worst = vec![0.0_f64; d];
    for (i, z) in base_points.iter().enumerate() {
        if z.dim() != d {
            return Err(Error::invalid(format!("base point {z} is not in C^{d}")));
        }
        for j in 0..d {
            let s = options.slice_fraction * domain.radii()[j];
            if (z[j] - domain.center()[j]).norm() + s > domain.radii()[j] * (1.0 + 1e-12) {
                return Err(Error::domain(format!(
                    "slice disc of radius {s} through base point {} on axis {} escapes the domain",
                    i + 1,
                    j + 1
                )));
            }
            let slice = Slice {
                f,
                base: z,
                axis: j,
            };
            let disc = Polydisc::new(CPoint::new(vec![z[j]])?, vec![s])?;
            let samples = BoundarySamples::sample(&slice, &disc, &[options.nodes], space)?;
            let r = negative_spectrum_check(&samples, options.tol)?;
            let worst = r.residuals.values().copied().fold(0.0, f64::max);
            axis_worst[j] = axis_worst[j].max(worst);
            if r.verdict == Verdict::Fail {
                report.verdict = Verdict::Fail;
                for mut w in r.witnesses {
                    w.check = "separate".into();
                    w.point = Some(z.clone());
                    w.axis = Some(j + 1);
                    report.witnesses.push(w);
                }
            }
        }
    }
    for (j, r) in axis_worst.into_iter().enumerate() {
        report.residuals.insert(format!("axis{}", j + 1), r);
    }
    Ok(report)
}

/// Settings for [`weak_holomorphy_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOptions {
    pub nodes: usize,
    pub tol: f64,
    /// Radial levels (fractions of the radii) of the local-boundedness sweep.
    pub sweep_levels: Vec<f64>,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            nodes: 64,
            tol: DEFAULT_SPECTRAL_TOL,
            sweep_levels: vec![0.25, 0.5, 0.75],
        }
    }
}

/// Applies each probe to the boundary samples and checks the resulting
/// scalar spectra. With a spanning probe set this instantiates the
/// weak-holomorphy condition; otherwise the report says so.
pub fn weak_holomorphy_probe<F: Integrand + ?Sized>(
    f: &F,
    space: &SpaceDescriptor,
    probes: &[Functional],
    disc: &Polydisc,
    options: &ProbeOptions,
) -> Result<DiagnosticReport> {
    if probes.is_empty() {
        return Err(Error::invalid("probe list is empty"));
    }
    if let Some(p) = probes.iter().find(|p| p.shape() != space.shape()) {
        return Err(Error::Shape(format!(
            "probe on {} for space {}",
            p.shape(),
            space.shape()
        )));
    }
    let d = disc.dim();
    let nodes = vec![options.nodes; d];
    let samples = BoundarySamples::sample(f, disc, &nodes, space)?;
    let spanning = spans_dual(space.shape(), probes);

    let mut report = DiagnosticReport::new(Verdict::Pass);
    report.resolution.insert("nodes".into(), json!(nodes));
    report.resolution.insert("tol".into(), json!(options.tol));
    report
        .resolution
        .insert("probes".into(), json!(probes.len()));
    report.resolution.insert("spanning".into(), json!(spanning));
    report
        .resolution
        .insert("clause".into(), json!(if spanning { "e" } else { "none" }));
    if !spanning {
        report
            .notes
            .push("probe set not spanning; condition e) not instantiated".into());
    }

    let scalar = SpaceDescriptor::scalar();
    for (i, probe) in probes.iter().enumerate() {
        let projected = samples.map_values(&scalar, |v| VectorValue::scalar(probe.apply(v)))?;
        let r = negative_spectrum_check(&projected, options.tol)?;
        let residual = r.residuals.values().copied().fold(0.0, f64::max);
        report.residuals.insert(format!("probe{}", i + 1), residual);
        if let Some(t) = r.thresholds.values().copied().reduce(f64::min) {
            report.thresholds.insert(format!("probe{}", i + 1), t);
        }
        if r.verdict == Verdict::Fail {
            report.verdict = Verdict::Fail;
            for mut w in r.witnesses {
                w.check = "weak".into();
                w.probe = Some(i + 1);
                report.witnesses.push(w);
            }
        }
    }

    // local boundedness: finite values on interior tori at the sweep levels
    let mut bound = 0.0_f64;
    let mut sampled = 0usize;
    for &level in &options.sweep_levels {
        let grid = disc.scaled(level)?.boundary_grid(&vec![8; d])?;
        for z in grid.points() {
            sampled += 1;
            let value = f.eval(&z).ok().filter(VectorValue::is_finite);
            match value {
                Some(v) => bound = bound.max(space.max_seminorm(&v)),
                None => {
                    report.verdict = Verdict::Fail;
                    let mut w = Witness::new("local_bound", f64::INFINITY);
                    w.point = Some(z);
                    report.witnesses.push(w);
                    bound = f64::INFINITY;
                }
            }
        }
    }
    report.residuals.insert("local_bound".into(), bound);
    report
        .resolution
        .insert("sweep_points".into(), json!(sampled));
    Ok(report)
}

/// One-dimensional central stencil `(offset, weight * h^order)` for
/// derivatives of order 1 to 3.
fn stencil(order: u32) -> &'static [(i32, f64)] {
    match order {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        _ => unreachable!("orders above 3 are rejected"),
    }
}

/// Real partial derivative `d^beta (f o phi^{-1})` at `z` by a tensor product
/// of central stencils, `beta` indexed over `(x_1, y_1, .., x_d, y_d)`.
pub fn real_partial<F: Integrand + ?Sized>(
    f: &F,
    z: &CPoint,
    beta: &MultiIndex,
    h: f64,
    domain: &Polydisc,
) -> Result<VectorValue> {
    let d = z.dim();
    let active: Vec<(usize, &[(i32, f64)])> = beta
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b > 0)
        .map(|(k, &b)| (k, stencil(b)))
        .collect();
    let scale = h.powi(-(beta.order() as i32));
    let mut acc = VectorValue::zero(f.shape());
    let mut idx = vec![0usize; active.len()];
    loop {
        let mut p = z.coords().to_vec();
        let mut weight = scale;
        for (&(k, st), &i) in active.iter().zip(&idx) {
            let (offset, w) = st[i];
            p[k / 2] += real_direction(d, k)[k / 2] * (f64::from(offset) * h);
            weight *= w;
        }
        let p = CPoint::new(p)?;
        if !domain.contains(&p) {
            return Err(Error::domain(format!(
                "stencil point {p} escapes the domain"
            )));
        }
        acc.add_scaled(Complex64::new(weight, 0.0), &eval_defined(f, &p)?);

        // odometer over the stencil points
        let mut pos = 0;
        loop {
            if pos == active.len() {
                return Ok(acc);
            }
            idx[pos] += 1;
            if idx[pos] < active[pos].1.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Compares `d^beta_R (f o phi^{-1})(x)` with
/// `i^{sum beta_{2k}} d^{alpha}_C f(z)`, `alpha_j = beta_{2j-1} + beta_{2j}`,
/// the complex side from Cauchy's formula on `domain`.
pub fn real_complex_relation_check<F: Integrand + ?Sized>(
    f: &F,
    space: &SpaceDescriptor,
    z: &CPoint,
    beta: &MultiIndex,
    h: f64,
    domain: &Polydisc,
    nodes: usize,
) -> Result<DiagnosticReport> {
    check_step(h)?;
    let d = domain.dim();
    if z.dim() != d || beta.dim() != 2 * d {
        return Err(Error::invalid(format!(
            "need a point in C^{d} and a real multi-index of length {}",
            2 * d
        )));
    }
    if beta.order() > 3 {
        return Err(Error::invalid(format!(
            "real multi-index {beta} has order above 3"
        )));
    }
    let alpha = MultiIndex::new(beta.exponents().chunks(2).map(|c| c[0] + c[1]).collect());
    let imaginary: u32 = beta.exponents().iter().skip(1).step_by(2).sum();
    let phase = Complex64::new(0.0, 1.0).powu(imaginary);
    let samples = BoundarySamples::sample(f, domain, &vec![nodes; d], space)?;
    let complex_side = cauchy_derivative(&samples, z, &alpha)?.value.scale(phase);

    let residual = |step: f64| -> Result<f64> {
        let real_side = real_partial(f, z, beta, step, domain)?;
        Ok(space.max_seminorm(&(&real_side - &complex_side)))
    };
    let r_h = residual(h)?;
    let r_half = residual(h / 2.0)?;
    let (verdict, threshold) = fd_verdict(r_h, r_half, h);

    let mut report = DiagnosticReport::new(verdict);
    report.residuals.insert("relation".into(), r_h);
    report.residuals.insert("relation_half_step".into(), r_half);
    report.thresholds.insert("relation".into(), threshold);
    report.resolution.insert("h".into(), json!(h));
    report.resolution.insert("nodes".into(), json!(nodes));
    report
        .resolution
        .insert("complex_index".into(), json!(alpha));
    if verdict != Verdict::Pass {
        let mut w = Witness::new("relation", r_h);
        w.point = Some(z.clone());
        report.witnesses.push(w);
    }
    Ok(report)
}

/// The four holomorphy diagnostics on `disc`: CR residual and slice checks
/// at the base points, negative spectrum of the boundary samples, and
/// coordinate probes.
pub fn check_all<F: Integrand + ?Sized>(
    f: &F,
    space: &SpaceDescriptor,
    disc: &Polydisc,
    base: &[CPoint],
    nodes: usize,
    tol: f64,
) -> Result<DiagnosticReport> {
    let d = disc.dim();
    let cr = cr_residual(f, space, base, DEFAULT_CR_STEP)?;
    let samples = BoundarySamples::sample(f, disc, &vec![nodes; d], space)?;
    let spectral = negative_spectrum_check(&samples, tol)?;
    let slice_options = SliceOptions {
        nodes,
        tol,
        ..Default::default()
    };
    let separate = separate_holomorphy_check(f, space, disc, base, &slice_options)?;
    let probe_options = ProbeOptions {
        nodes,
        tol,
        ..Default::default()
    };
    let weak = weak_holomorphy_probe(
        f,
        space,
        &Functional::coordinate_probes(space.shape()),
        disc,
        &probe_options,
    )?;
    Ok(DiagnosticReport::merge(vec![
        ("cr".into(), cr),
        ("spectrum".into(), spectral),
        ("separate".into(), separate),
        ("weak".into(), weak),
    ]))
}
