//! Curve integrals `int_gamma f(z) dz = int f(gamma(t)) prod_k gamma_k'(t_k) dt`
//! of value-space valued functions.
//!
//! Full circles use the periodic trapezoidal rule, every other axis composite
//! 16-point Gauss-Legendre panels. Sums run over the tensor grid in row-major
//! order (last axis fastest), so results do not depend on scheduling.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::curve::CurveC1;
use crate::error::{Error, Result};
use crate::estimate::{Estimate, Warning};
use crate::point::CPoint;
use crate::polydisc::max_grid_points;
use crate::space::{Shape, SpaceDescriptor, VectorValue};

/// Points per Gauss-Legendre panel.
pub const PANEL_POINTS: usize = 16;

/// Default nodes on a full circle.
pub const DEFAULT_CIRCLE_NODES: usize = 64;

/// Default nodes on a non-periodic axis (8 panels).
pub const DEFAULT_SEGMENT_NODES: usize = 8 * PANEL_POINTS;

/// Default step of the finite-difference fallback in parameter derivatives.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Smallest admissible finite-difference step.
pub const MIN_FD_STEP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Continuous,
    /// Analytic on an annulus around the integration cycle.
    AnalyticOnAnnulus,
}

/// A function `C^d -> E`.
pub trait Integrand {
    fn dim(&self) -> usize;

    fn shape(&self) -> Shape;

    fn eval(&self, z: &CPoint) -> Result<VectorValue>;

    /// Domain predicate; evaluation outside it is expected to fail.
    fn is_defined(&self, _z: &CPoint) -> bool {
        true
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Continuous
    }
}

impl<T: Integrand + ?Sized> Integrand for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn shape(&self) -> Shape {
        (**self).shape()
    }

    fn eval(&self, z: &CPoint) -> Result<VectorValue> {
        (**self).eval(z)
    }

    fn is_defined(&self, z: &CPoint) -> bool {
        (**self).is_defined(z)
    }

    fn smoothness(&self) -> Smoothness {
        (**self).smoothness()
    }
}

impl<T: Integrand + ?Sized> Integrand for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn shape(&self) -> Shape {
        (**self).shape()
    }

    fn eval(&self, z: &CPoint) -> Result<VectorValue> {
        (**self).eval(z)
    }

    fn is_defined(&self, z: &CPoint) -> bool {
        (**self).is_defined(z)
    }

    fn smoothness(&self) -> Smoothness {
        (**self).smoothness()
    }
}

/// [`Integrand`] backed by a closure.
pub struct FnIntegrand<F> {
    dim: usize,
    shape: Shape,
    smoothness: Smoothness,
    f: F,
}

impl<F> FnIntegrand<F>
where
    F: Fn(&CPoint) -> Result<VectorValue>,
{
    pub fn new(dim: usize, shape: Shape, f: F) -> Self {
        FnIntegrand {
            dim,
            shape,
            smoothness: Smoothness::Continuous,
            f,
        }
    }

    pub fn with_smoothness(mut self, smoothness: Smoothness) -> Self {
        self.smoothness = smoothness;
        self
    }
}

/// Scalar-valued integrand from a closure returning a complex number.
pub fn scalar_fn(
    dim: usize,
    f: impl Fn(&CPoint) -> Complex64,
) -> FnIntegrand<impl Fn(&CPoint) -> Result<VectorValue>> {
    FnIntegrand::new(dim, Shape::SCALAR, move |z| Ok(VectorValue::scalar(f(z))))
}

impl<F> Integrand for FnIntegrand<F>
where
    F: Fn(&CPoint) -> Result<VectorValue>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn shape(&self) -> Shape {
        self.shape
    }

    fn eval(&self, z: &CPoint) -> Result<VectorValue> {
        (self.f)(z)
    }

    fn smoothness(&self) -> Smoothness {
        self.smoothness
    }
}

/// Evaluates `f` and checks the result against its declared shape.
pub(crate) fn eval_checked<F: Integrand + ?Sized>(f: &F, z: &CPoint) -> Result<VectorValue> {
    let v = f.eval(z)?;
    if v.shape() != f.shape() {
        return Err(Error::Shape(format!(
            "integrand declared {} but returned {} at {z}",
            f.shape(),
            v.shape()
        )));
    }
    if !v.is_finite() {
        return Err(Error::Evaluation {
            point: z.to_string(),
            reason: "non-finite value".into(),
        });
    }
    Ok(v)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, t);
        dp = if d != 0.0 { d } else { dp };
        let weight = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    (x, w)
}

/// `(P_n(t), P_n'(t))` by the three-term recurrence.
fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let n = n as f64;
    (p1, n * (t * p1 - p0) / (t * t - 1.0))
}

/// Quadrature nodes and weights on one parameter axis.
#[derive(Debug, Clone)]
pub(crate) struct AxisRule {
    pub t: Vec<f64>,
    pub w: Vec<f64>,
}

impl AxisRule {
    /// `n` equispaced nodes with weight `(b - a) / n` on a periodic interval.
    pub fn trapezoidal(a: f64, b: f64, n: usize) -> Self {
        let h = (b - a) / n as f64;
        AxisRule {
            t: (0..n).map(|j| a + j as f64 * h).collect(),
            w: vec![h; n],
        }
    }

    /// `ceil(n / 16)` Gauss-Legendre panels of equal width on `[a, b]`.
    pub fn gauss_panels(a: f64, b: f64, n: usize) -> Self {
        let panels = n.div_ceil(PANEL_POINTS).max(1);
        let (x, w) = gauss_legendre(PANEL_POINTS);
        let h = (b - a) / panels as f64;
        let mut rule = AxisRule {
            t: Vec::with_capacity(panels * PANEL_POINTS),
            w: Vec::with_capacity(panels * PANEL_POINTS),
        };
        for p in 0..panels {
            let left = a + p as f64 * h;
            for (xi, wi) in x.iter().zip(&w) {
                rule.t.push(left + 0.5 * h * (xi + 1.0));
                rule.w.push(0.5 * h * wi);
            }
        }
        rule
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }
}

fn check_budget(rules: &[AxisRule]) -> Result<usize> {
    let cap = max_grid_points();
    rules
        .iter()
        .try_fold(1usize, |acc, r| acc.checked_mul(r.len()))
        .filter(|&n| n <= cap)
        .ok_or_else(|| Error::Resource(format!("quadrature grid exceeds the cap of {cap} nodes")))
}

fn wrap_node(node: Vec<usize>) -> impl FnOnce(Error) -> Error {
    move |e| Error::Integration {
        node,
        source: Box::new(e),
    }
}

/// Quadrature approximation of `int_gamma f(z) dz`, computed entrywise in `E`.
///
/// `nodes[k]` is the number of nodes on axis `k`: trapezoidal points on a
/// full circle, otherwise rounded up to whole 16-point Gauss-Legendre panels.
pub fn integrate_curve<F: Integrand + ?Sized>(
    f: &F,
    curve: &CurveC1,
    nodes: &[usize],
) -> Result<Estimate<VectorValue>> {
    let d = curve.dim();
    if f.dim() != d {
        return Err(Error::invalid(format!(
            "integrand on C^{} along a curve in C^{d}",
            f.dim()
        )));
    }
    if nodes.len() != d {
        return Err(Error::invalid(format!(
            "{} node counts for {d} axes",
            nodes.len()
        )));
    }
    if let Some(k) = nodes.iter().position(|&n| n < 4) {
        return Err(Error::invalid(format!(
            "axis {}: at least 4 nodes required",
            k + 1
        )));
    }
    if curve.length() == 0.0 {
        return Ok(Estimate {
            value: VectorValue::zero(f.shape()),
            warnings: vec![Warning::DegenerateCurve],
        });
    }

    let rules: Vec<AxisRule> = curve
        .components()
        .iter()
        .zip(nodes)
        .map(|(c, &n)| {
            let (a, b) = c.interval();
            if c.is_periodic() {
                AxisRule::trapezoidal(a, b, n)
            } else {
                AxisRule::gauss_panels(a, b, n)
            }
        })
        .collect();
    let total = check_budget(&rules)?;

    // per-axis points and weight * gamma_k'(t) factors
    let points: Vec<Vec<Complex64>> = rules
        .iter()
        .zip(curve.components())
        .map(|(r, c)| r.t.iter().map(|&t| c.eval(t)).collect())
        .collect();
    let factors: Vec<Vec<Complex64>> = rules
        .iter()
        .zip(curve.components())
        .map(|(r, c)| {
            r.t.iter()
                .zip(&r.w)
                .map(|(&t, &w)| w * c.derivative(t))
                .collect()
        })
        .collect();
    let counts: Vec<usize> = rules.iter().map(AxisRule::len).collect();

    let mut acc = VectorValue::zero(f.shape());
    for flat in 0..total {
        let idx = crate::polydisc::unflatten(&counts, flat);
        let z = CPoint::new(idx.iter().enumerate().map(|(k, &j)| points[k][j]).collect())
            .map_err(wrap_node(idx.clone()))?;
        let weight: Complex64 = idx
            .iter()
            .enumerate()
            .map(|(k, &j)| factors[k][j])
            .product();
        let v = eval_checked(f, &z).map_err(wrap_node(idx))?;
        acc.add_scaled(weight, &v);
    }
    Ok(Estimate::exact(acc))
}

/// Closed rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Rectangle {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        for (a, b) in [x, y] {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::invalid(format!("bad rectangle side [{a}, {b}]")));
            }
        }
        Ok(Rectangle { x, y })
    }

    pub fn area(&self) -> f64 {
        (self.x.1 - self.x.0) * (self.y.1 - self.y.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationOrder {
    /// One pass over the product grid.
    Tensor,
    /// Inner integral over `x`, outer over `y`.
    XThenY,
    /// Inner integral over `y`, outer over `x`.
    YThenX,
}

/// Integral of `f` over a rectangle; `nodes` are points per side (whole panels).
pub fn integrate_rectangle<F>(
    f: F,
    shape: Shape,
    rect: &Rectangle,
    order: IterationOrder,
    nodes: (usize, usize),
) -> Result<VectorValue>
where
    F: Fn(f64, f64) -> Result<VectorValue>,
{
    if nodes.0 < 4 || nodes.1 < 4 {
        return Err(Error::invalid("at least 4 nodes per side required"));
    }
    let rx = AxisRule::gauss_panels(rect.x.0, rect.x.1, nodes.0);
    let ry = AxisRule::gauss_panels(rect.y.0, rect.y.1, nodes.1);
    check_budget(&[rx.clone(), ry.clone()])?;
    let eval = |i: usize, j: usize| -> Result<VectorValue> {
        let v = f(rx.t[i], ry.t[j]).map_err(wrap_node(vec![i, j]))?;
        if v.shape() != shape {
            return Err(Error::Shape(format!(
                "integrand returned {} for {shape}",
                v.shape()
            )));
        }
        Ok(v)
    };

    let mut acc = VectorValue::zero(shape);
    match order {
        IterationOrder::Tensor => {
            for i in 0..rx.len() {
                for j in 0..ry.len() {
                    acc.add_scaled(Complex64::new(rx.w[i] * ry.w[j], 0.0), &eval(i, j)?);
                }
            }
        }
        IterationOrder::XThenY => {
            for j in 0..ry.len() {
                let mut inner = VectorValue::zero(shape);
                for i in 0..rx.len() {
                    inner.add_scaled(Complex64::new(rx.w[i], 0.0), &eval(i, j)?);
                }
                acc.add_scaled(Complex64::new(ry.w[j], 0.0), &inner);
            }
        }
        IterationOrder::YThenX => {
            for i in 0..rx.len() {
                let mut inner = VectorValue::zero(shape);
                for j in 0..ry.len() {
                    inner.add_scaled(Complex64::new(ry.w[j], 0.0), &eval(i, j)?);
                }
                acc.add_scaled(Complex64::new(rx.w[i], 0.0), &inner);
            }
        }
    }
    Ok(acc)
}

/// `max_alpha p_alpha(int_gamma f - (F(gamma(b)) - F(gamma(a))))` for a curve in `C`.
///
/// The caller asserts `F' = f` near the image of `gamma`.
pub fn ftc_check<F, G>(
    f: &F,
    primitive: &G,
    curve: &CurveC1,
    nodes: usize,
    space: &SpaceDescriptor,
) -> Result<f64>
where
    F: Integrand + ?Sized,
    G: Integrand + ?Sized,
{
    if curve.dim() != 1 {
        return Err(Error::invalid("the primitive check needs a curve in C"));
    }
    let integral = integrate_curve(f, curve, &[nodes])?.value;
    let a = eval_checked(primitive, &curve.start_point()?)?;
    let b = eval_checked(primitive, &curve.end_point()?)?;
    let gap = &integral - &(&b - &a);
    space.check(&gap)?;
    Ok(space.max_seminorm(&gap))
}

/// How `d f / d lambda_j` is obtained in [`differentiate_parametric_integral`].
pub enum LambdaDerivative<'a> {
    /// Closed-form derivative `(z, lambda) -> d_{lambda_j} f(z, lambda)`.
    Supplied(&'a dyn Fn(&CPoint, &CPoint) -> Result<VectorValue>),
    /// Central difference `(f(z, lambda + h e_j) - f(z, lambda - h e_j)) / 2h`.
    FiniteDifference { step: f64 },
}

impl Default for LambdaDerivative<'_> {
    fn default() -> Self {
        LambdaDerivative::FiniteDifference {
            step: DEFAULT_FD_STEP,
        }
    }
}

/// `d/d lambda_j int_gamma f(z, lambda) dz`, computed as `int_gamma d_{lambda_j} f(z, lambda) dz`.
///
/// Holomorphy of `f(z, .)` near `lambda` is a caller assertion.
pub fn differentiate_parametric_integral(
    shape: Shape,
    f: &dyn Fn(&CPoint, &CPoint) -> Result<VectorValue>,
    derivative: LambdaDerivative<'_>,
    curve: &CurveC1,
    lambda: &CPoint,
    axis: usize,
    nodes: &[usize],
) -> Result<Estimate<VectorValue>> {
    if axis >= lambda.dim() {
        return Err(Error::invalid(format!(
            "parameter axis {} out of range for C^{}",
            axis + 1,
            lambda.dim()
        )));
    }
    let d = curve.dim();
    match derivative {
        LambdaDerivative::Supplied(df) => {
            let g = FnIntegrand::new(d, shape, |z: &CPoint| df(z, lambda));
            integrate_curve(&g, curve, nodes)
        }
        LambdaDerivative::FiniteDifference { step } => {
            let lj = lambda[axis];
            if step.is_nan() || step < MIN_FD_STEP || step <= 4.0 * f64::EPSILON * lj.norm() {
                return Err(Error::invalid(format!(
                    "finite-difference step {step:e} underflows at |lambda_{}| = {}",
                    axis + 1,
                    lj.norm()
                )));
            }
            let plus = lambda.with_coord(axis, lj + step)?;
            let minus = lambda.with_coord(axis, lj - step)?;
            let g = FnIntegrand::new(d, shape, |z: &CPoint| {
                let a = f(z, &plus)?;
                let b = f(z, &minus)?;
                Ok((&a - &b).scale(Complex64::new(0.5 / step, 0.0)))
            });
            let mut est = integrate_curve(&g, curve, nodes)?;
            est.warnings.push(Warning::FiniteDifference { step });
            Ok(est)
        }
    }
}
