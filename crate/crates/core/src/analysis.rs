//! Removable singularities across algebraic thin sets, coefficient-wise
//! identity certification, and polynomial approximation on closed polydiscs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cauchy::{cauchy_derivative, taylor_coefficients, BoundarySamples};
use crate::error::{Error, Result};
use crate::estimate::Warning;
use crate::expr::{CompiledExpr, Expr};
use crate::multi_index::MultiIndex;
use crate::point::CPoint;
use crate::polydisc::{max_grid_points, Polydisc};
use crate::quadrature::{eval_checked, Integrand};
use crate::series::TaylorSeries;
use crate::space::{Seminorm, Shape, SpaceDescriptor, VectorValue};

/// Relative part of the default exclusion tolerance.
pub const DEFAULT_TAU_FACTOR: f64 = 1e-8;

/// Zero set `A = {p = 0}` of a polynomial; `|p(z)| <= tau` counts as on `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinSetSpec {
    polynomial: CompiledExpr,
    tau: Option<f64>,
}

impl ThinSetSpec {
    /// `tau = None` selects `1e-8 (1 + max |p|)` over each grid examined.
    pub fn new(polynomial: Expr, d: usize, tau: Option<f64>) -> Result<Self> {
        if !polynomial.is_polynomial() {
            return Err(Error::invalid(format!(
                "thin set needs a polynomial, got {polynomial}"
            )));
        }
        if let Some(t) = tau {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::invalid(format!(
                    "tolerance must be nonnegative, got {t}"
                )));
            }
        }
        let polynomial = CompiledExpr::new(polynomial, d)?;
        // a nonzero polynomial vanishes on a null set, so random points detect it
        let mut rng = ChaCha8Rng::seed_from_u64(0x7a11);
        let nonzero = (0..32).any(|_| {
            let z = CPoint::new(
                (0..d)
                    .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                    .collect(),
            )
            .expect("finite coordinates");
            polynomial
                .eval(&z)
                .is_ok_and(|v| v.entries()[0] != Complex64::new(0.0, 0.0))
        });
        if !nonzero {
            return Err(Error::invalid("thin-set polynomial is identically zero"));
        }
        Ok(ThinSetSpec { polynomial, tau })
    }

    pub fn parse(src: &str, d: usize, tau: Option<f64>) -> Result<Self> {
        Self::new(crate::expr::parse(src, d)?, d, tau)
    }

    pub fn dim(&self) -> usize {
        self.polynomial.dim()
    }

    pub fn expr(&self) -> &Expr {
        self.polynomial.expr()
    }

    pub fn abs_p(&self, z: &CPoint) -> Result<f64> {
        Ok(self.polynomial.eval(z)?.entries()[0].norm())
    }

    fn tau_for(&self, scale: f64) -> f64 {
        self.tau.unwrap_or(DEFAULT_TAU_FACTOR * (1.0 + scale))
    }
}

/// Settings for [`riemann_extend`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendOptions {
    pub nodes: usize,
    /// Radius perturbation step; attempts use `±step, ±2 step, ..`.
    pub perturbation_step: f64,
    pub attempts: usize,
}

impl Default for ExtendOptions {
    fn default() -> Self {
        ExtendOptions {
            nodes: 64,
            perturbation_step: 0.0125,
            attempts: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extension {
    pub value: VectorValue,
    /// Disc actually integrated over (after any radius perturbation).
    pub disc: Polydisc,
    /// Index of the search disc used, 1-based.
    pub search_disc: usize,
    pub perturbation: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Warning>,
}

/// Radius factors for attempt `k`: `1 + s` on odd axes and `1 - s` on even
/// ones (1-based), `s` alternating in sign and growing every two attempts.
fn perturbation(k: usize, step: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        let magnitude = step * k.div_ceil(2) as f64;
        if k % 2 == 1 {
            magnitude
        } else {
            -magnitude
        }
    }
}

/// Why a candidate disc was rejected, or its samples.
fn try_disc<F: Integrand + ?Sized>(
    f: &F,
    thin: &ThinSetSpec,
    disc: &Polydisc,
    nodes: &[usize],
    space: &SpaceDescriptor,
) -> std::result::Result<BoundarySamples, String> {
    let grid = disc.boundary_grid(nodes).map_err(|e| e.to_string())?;
    let mut values = Vec::with_capacity(grid.len());
    let mut abs_p = Vec::with_capacity(grid.len());
    for z in grid.points() {
        abs_p.push(thin.abs_p(&z).map_err(|e| e.to_string())?);
    }
    let tau = thin.tau_for(abs_p.iter().copied().fold(0.0, f64::max));
    for (flat, z) in grid.points().enumerate() {
        if abs_p[flat] <= tau {
            return Err(format!("boundary point {z} lies on the thin set"));
        }
        values.push(eval_checked(f, &z).map_err(|e| e.to_string())?);
    }
    BoundarySamples::from_values(
        disc.clone(),
        nodes.to_vec(),
        space.clone(),
        values,
        crate::cauchy::Provenance::SampledFromFunction,
    )
    .map_err(|e| e.to_string())
}

/// Value at `target` of the holomorphic extension of `f` across `A`.
///
/// `f` must be holomorphic and bounded on each search disc minus `A`; the
/// extension is then Cauchy's integral over a distinguished boundary that
/// avoids `A`. Discs are tried in order, each with small radius
/// perturbations when its boundary grid meets `A`.
pub fn riemann_extend<F: Integrand + ?Sized>(
    f: &F,
    space: &SpaceDescriptor,
    thin: &ThinSetSpec,
    target: &CPoint,
    search_discs: &[Polydisc],
    options: &ExtendOptions,
) -> Result<Extension> {
    if thin.dim() != target.dim() || f.dim() != target.dim() {
        return Err(Error::invalid(
            "function, thin set and target dimensions differ",
        ));
    }
    let d = target.dim();
    let nodes = vec![options.nodes; d];
    let mut blocked = Vec::new();
    let mut any_contains = false;
    for (i, base) in search_discs.iter().enumerate() {
        if base.dim() != d {
            return Err(Error::invalid(format!(
                "search disc {} is not in C^{d}",
                i + 1
            )));
        }
        if !base.contains(target) {
            continue;
        }
        any_contains = true;
        let mut reasons = Vec::new();
        for k in 0..=options.attempts {
            let s = perturbation(k, options.perturbation_step);
            let radii = base
                .radii()
                .iter()
                .enumerate()
                .map(|(j, &r)| r * if j % 2 == 0 { 1.0 + s } else { 1.0 - s })
                .collect();
            let disc = Polydisc::new(base.center().clone(), radii)?;
            if !disc.contains(target) {
                reasons.push(format!("perturbation {s:+}: target outside"));
                continue;
            }
            match try_disc(f, thin, &disc, &nodes, space) {
                Ok(samples) => {
                    let est = cauchy_derivative(&samples, target, &MultiIndex::zero(d))?;
                    return Ok(Extension {
                        value: est.value,
                        disc,
                        search_disc: i + 1,
                        perturbation: s,
                        warnings: est.warnings,
                    });
                }
                Err(reason) => reasons.push(format!("perturbation {s:+}: {reason}")),
            }
        }
        blocked.push(format!(
            "disc {} (centre {}, radii {:?}): {}",
            i + 1,
            base.center(),
            base.radii(),
            reasons.last().cloned().unwrap_or_default()
        ));
    }
    if !any_contains {
        return Err(Error::domain(format!("no search disc contains {target}")));
    }
    Err(Error::ExtensionFailed { blocked })
}

/// `f` off `A`, extended across `A` by [`riemann_extend`] on a polydisc of
/// the given radii centred at the point.
pub struct RiemannExtension<'a, F: ?Sized> {
    f: &'a F,
    space: SpaceDescriptor,
    thin: &'a ThinSetSpec,
    local_radii: Vec<f64>,
    options: ExtendOptions,
}

impl<'a, F: Integrand + ?Sized> RiemannExtension<'a, F> {
    pub fn new(
        f: &'a F,
        space: SpaceDescriptor,
        thin: &'a ThinSetSpec,
        local_radii: Vec<f64>,
        options: ExtendOptions,
    ) -> Self {
        RiemannExtension {
            f,
            space,
            thin,
            local_radii,
            options,
        }
    }
}

impl<F: Integrand + ?Sized> Integrand for RiemannExtension<'_, F> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn shape(&self) -> Shape {
        self.f.shape()
    }

    fn eval(&self, z: &CPoint) -> Result<VectorValue> {
        let off_set = self.thin.abs_p(z)? > self.thin.tau_for(0.0);
        if off_set {
            if let Ok(v) = eval_checked(self.f, z) {
                return Ok(v);
            }
        }
        let disc = Polydisc::new(z.clone(), self.local_radii.clone())?;
        riemann_extend(self.f, &self.space, self.thin, z, &[disc], &self.options).map(|e| e.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCertificate {
    pub equal_on_disc: bool,
    pub max_coeff_gap: f64,
    /// First coefficient above tolerance in graded-lex order.
    pub witness: Option<MultiIndex>,
    pub degree: u32,
    pub tol: f64,
}

/// Compares the Taylor coefficients of `f` and `g` at the disc centre up to
/// total degree `n`. For `f`, `g` holomorphic on a connected domain
/// containing the disc, all derivatives agreeing at one point forces `f = g`
/// everywhere; the certificate checks this to degree `n` within `tol`.
pub fn identity_certify<F, G>(
    f: &F,
    g: &G,
    space: &SpaceDescriptor,
    disc: &Polydisc,
    n: u32,
    tol: f64,
    nodes: usize,
) -> Result<IdentityCertificate>
where
    F: Integrand + ?Sized,
    G: Integrand + ?Sized,
{
    if n < 1 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let d = disc.dim();
    let nodes = vec![nodes.max(2 * (n as usize + 1)); d];
    let a = BoundarySamples::sample(f, disc, &nodes, space)?;
    let b = BoundarySamples::sample(g, disc, &nodes, space)?;
    let diff: Vec<VectorValue> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x - y)
        .collect();
    let samples = BoundarySamples::from_values(
        disc.clone(),
        nodes,
        space.clone(),
        diff,
        crate::cauchy::Provenance::SampledFromFunction,
    )?;
    let series = taylor_coefficients(&samples, n)?;
    let mut gap = 0.0_f64;
    let mut witness = None;
    for (beta, c) in series.terms() {
        let m = space.max_seminorm(c);
        gap = gap.max(m);
        if m > tol && witness.is_none() {
            witness = Some(beta);
        }
    }
    Ok(IdentityCertificate {
        equal_on_disc: witness.is_none(),
        max_coeff_gap: gap,
        witness,
        degree: n,
        tol,
    })
}

/// Settings for [`approx_polynomial`].
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxOptions {
    pub degree_cap: u32,
    /// Extra degrees extracted beyond the cap to measure the truncation tail.
    pub guard: u32,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions {
            degree_cap: 64,
            guard: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Approximation {
    pub polynomial: TaylorSeries,
    pub certified_error: f64,
    pub r_used: f64,
    pub degree_used: u32,
    pub delta: f64,
    pub validation_points: usize,
}

/// One axis of the closed-disc sample set: centre plus rings at 1/3, 2/3
/// and 1 of the radius with 5, 10 and 16 angles (32 points).
fn closed_disc_axis(center: Complex64, radius: f64) -> Vec<Complex64> {
    let mut out = vec![center];
    for (frac, count) in [(1.0 / 3.0, 5), (2.0 / 3.0, 10), (1.0, 16)] {
        for k in 0..count {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            out.push(center + Complex64::from_polar(frac * radius, theta));
        }
    }
    out
}

/// One axis of the validation set: centre, 8 points at half radius and 24
/// on the circle (33 points).
fn validation_axis(center: Complex64, radius: f64) -> Vec<Complex64> {
    let mut out = vec![center];
    for (frac, count) in [(0.5, 8), (1.0, 24)] {
        for k in 0..count {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            out.push(center + Complex64::from_polar(frac * radius, theta));
        }
    }
    out
}

fn tensor(axes: &[Vec<Complex64>]) -> Vec<CPoint> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Complex64>| {
                axis.iter().map(move |&c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|c| CPoint::new(c).expect("finite coordinates"))
        .collect()
}

/// Largest step `s = diam / 2^k` such that every sampled displacement of
/// Euclidean length `s`, `s/2` or `s/4` inside the closed disc changes `f` by
/// less than `eps` in `seminorm`.
fn modulus_of_continuity<F: Integrand + ?Sized>(
    f: &F,
    disc: &Polydisc,
    eps: f64,
    seminorm: Seminorm,
) -> Result<f64> {
    let d = disc.dim();
    let axes: Vec<Vec<Complex64>> = (0..d)
        .map(|j| closed_disc_axis(disc.center()[j], disc.radii()[j]))
        .collect();
    let base = tensor(&axes);
    let base_values = base
        .iter()
        .map(|z| eval_checked(f, z))
        .collect::<Result<Vec<_>>>()?;
    let diam = 2.0 * disc.radii().iter().map(|r| r * r).sum::<f64>().sqrt();
    let mut directions: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..d {
        for u in [
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ] {
            let mut v = vec![Complex64::new(0.0, 0.0); d];
            v[j] = u;
            directions.push(v);
        }
    }
    let closed = |z: &CPoint| disc.contains_closed(z);
    // (pairs compared, all gaps below eps) at step s
    let sweep = |s: f64| -> Result<(usize, bool)> {
        let mut tested = 0;
        for (x, fx) in base.iter().zip(&base_values) {
            let mut targets: Vec<CPoint> = directions
                .iter()
                .map(|v| CPoint::new(x.coords().iter().zip(v).map(|(&a, &b)| a + s * b).collect()))
                .collect::<Result<_>>()?;
            // towards the centre, as in the dilation
            let offset = x.distance(disc.center());
            if offset > s {
                let t = 1.0 - s / offset;
                targets.push(CPoint::new(
                    x.coords()
                        .iter()
                        .zip(disc.center().coords())
                        .map(|(&a, &c)| c + t * (a - c))
                        .collect(),
                )?);
            }
            for y in targets.iter().filter(|y| closed(y)) {
                tested += 1;
                let fy = eval_checked(f, y)?;
                if seminorm.eval(&(&fy - fx)) >= eps {
                    return Ok((tested, false));
                }
            }
        }
        Ok((tested, true))
    };
    // a step is accepted when it and the next two halvings all pass
    let mut streak = 0;
    for k in 0..=42 {
        let s = diam / 2f64.powi(k);
        match sweep(s)? {
            (tested, true) if tested > 0 => streak += 1,
            (0, _) => continue,
            _ => streak = 0,
        }
        if streak == 3 {
            return Ok(4.0 * s);
        }
    }
    Err(Error::Resolution(format!(
        "no sampled step down to {:e} keeps oscillation below {eps:e}",
        diam / 2f64.powi(40)
    )))
}

/// `g(w) = f(z + r (w - z))`.
struct Dilated<'a, F: ?Sized> {
    f: &'a F,
    center: &'a CPoint,
    r: f64,
}

impl<F: Integrand + ?Sized> Integrand for Dilated<'_, F> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn shape(&self) -> Shape {
        self.f.shape()
    }

    fn eval(&self, w: &CPoint) -> Result<VectorValue> {
        let z = CPoint::new(
            w.coords()
                .iter()
                .zip(self.center.coords())
                .map(|(&a, &c)| c + self.r * (a - c))
                .collect(),
        )?;
        self.f.eval(&z)
    }
}

/// Polynomial within `2 eps` of `f` on the closed polydisc, for `f`
/// continuous there and holomorphic inside.
///
/// The dilation `g(w) = f(z + r (w - z))` is holomorphic on a neighbourhood
/// of the closed disc and within `eps` of `f` once `r` is close enough to 1
/// (chosen from a sampled modulus of continuity); a Taylor polynomial of `g`
/// truncated where its coefficient tail drops below `eps` does the rest.
/// The reported error is measured on a validation grid.
pub fn approx_polynomial<F: Integrand + ?Sized>(
    f: &F,
    space: &SpaceDescriptor,
    disc: &Polydisc,
    eps: f64,
    seminorm: Seminorm,
    options: &ApproxOptions,
) -> Result<Approximation> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    if !space.contains(seminorm) {
        return Err(Error::invalid(format!(
            "seminorm {seminorm} is not in the space's family"
        )));
    }
    let d = disc.dim();
    let center = disc.center();
    let delta = modulus_of_continuity(f, disc, eps, seminorm)?;
    let reach = (0..d)
        .map(|j| disc.radii()[j] + center[j].norm())
        .fold(0.0, f64::max);
    let lower = (1.0 - delta / ((d as f64).sqrt() * reach)).max(0.0);
    let r = 0.5 * (lower + 1.0);

    // extraction degree and a power-of-two grid with the aliasing margin
    let mut extract = options.degree_cap + options.guard;
    let mut nodes = (2 * (extract as usize + 1)).next_power_of_two();
    while nodes
        .checked_pow(d as u32)
        .is_none_or(|t| t > max_grid_points())
        && nodes > 8
    {
        nodes /= 2;
        extract = (nodes / 2 - 1) as u32;
    }
    let cap = options
        .degree_cap
        .min(extract.saturating_sub(options.guard));
    let g = Dilated { f, center, r };
    let samples = BoundarySamples::sample(&g, disc, &vec![nodes; d], space)?;
    let series = taylor_coefficients(&samples, extract)?;

    // tail_after[n] = sum_{n < |beta| <= extract} p(b_beta) R^beta
    let mut level = vec![0.0; extract as usize + 1];
    for (beta, b) in series.terms() {
        level[beta.order() as usize] += seminorm.eval(b) * beta.real_power(disc.radii());
    }
    let mut tail_after = vec![0.0; extract as usize + 1];
    for n in (0..extract as usize).rev() {
        tail_after[n] = tail_after[n + 1] + level[n + 1];
    }
    let degree = (0..=cap)
        .find(|&n| tail_after[n as usize] <= eps)
        .ok_or(Error::DegreeCap {
            cap: cap as usize,
            tail: tail_after[cap as usize],
        })?;
    let radii: Vec<f64> = disc.radii().iter().map(|&x| x / r).collect();
    let polynomial = series.truncate(degree)?.with_radii(radii)?;

    let axes: Vec<Vec<Complex64>> = (0..d)
        .map(|j| validation_axis(center[j], disc.radii()[j]))
        .collect();
    let points = tensor(&axes);
    let mut certified: f64 = 0.0;
    for w in &points {
        let fw = eval_checked(f, w)?;
        let tw = polynomial.evaluate_polynomial(w, degree)?;
        certified = certified.max(seminorm.eval(&(&fw - &tw)));
    }
    Ok(Approximation {
        polynomial,
        certified_error: certified,
        r_used: r,
        degree_used: degree,
        delta,
        validation_points: points.len(),
    })
}
