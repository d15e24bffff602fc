//! Truncated Taylor expansions `sum_beta a_beta (w - z)^beta` around a
//! polydisc centre, their evaluation, certified tail bounds and the
//! polynomial-growth (Liouville) test.

use indexmap::IndexMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cauchy::{taylor_coefficients, BoundarySamples};
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::point::CPoint;
use crate::polydisc::Polydisc;
use crate::quadrature::Integrand;
use crate::space::{Seminorm, Shape, SpaceDescriptor, VectorValue};

/// One stored coefficient `a_beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub beta: MultiIndex,
    pub value: Vec<Complex64>,
}

/// Taylor coefficients for all `|beta| <= degree`, stored in graded-lex order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesFile", into = "SeriesFile")]
pub struct TaylorSeries {
    center: CPoint,
    radii: Vec<f64>,
    shape: Shape,
    degree: u32,
    coefficients: Vec<VectorValue>,
    boundary_max: IndexMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
struct SeriesFile {
    center: CPoint,
    radii: Vec<f64>,
    space: Shape,
    degree: u32,
    coefficients: Vec<Coefficient>,
    boundary_max: IndexMap<String, f64>,
}

impl TryFrom<SeriesFile> for TaylorSeries {
    type Error = Error;

    fn try_from(file: SeriesFile) -> Result<Self> {
        let d = file.center.dim();
        let expected = MultiIndex::graded(d, file.degree);
        if expected.len() != file.coefficients.len() {
            return Err(Error::invalid(format!(
                "degree {} series in C^{d} needs {} coefficients, found {}",
                file.degree,
                expected.len(),
                file.coefficients.len()
            )));
        }
        let mut values = Vec::with_capacity(expected.len());
        for (beta, c) in expected.iter().zip(file.coefficients) {
            if &c.beta != beta {
                return Err(Error::invalid(format!(
                    "coefficient {} out of graded-lex order (expected {beta})",
                    c.beta
                )));
            }
            values.push(VectorValue::new(file.space, c.value)?);
        }
        TaylorSeries::new(
            file.center,
            file.radii,
            file.space,
            file.degree,
            values,
            file.boundary_max,
        )
    }
}

impl From<TaylorSeries> for SeriesFile {
    fn from(s: TaylorSeries) -> Self {
        let d = s.center.dim();
        SeriesFile {
            coefficients: MultiIndex::graded(d, s.degree)
                .into_iter()
                .zip(s.coefficients)
                .map(|(beta, v)| Coefficient {
                    beta,
                    value: v.into_entries(),
                })
                .collect(),
            center: s.center,
            radii: s.radii,
            space: s.shape,
            degree: s.degree,
            boundary_max: s.boundary_max,
        }
    }
}

impl TaylorSeries {
    /// `coefficients` must list every `|beta| <= degree` in the order of
    /// [`MultiIndex::graded`].
    pub fn new(
        center: CPoint,
        radii: Vec<f64>,
        shape: Shape,
        degree: u32,
        coefficients: Vec<VectorValue>,
        boundary_max: IndexMap<String, f64>,
    ) -> Result<Self> {
        // validates the radii
        Polydisc::new(center.clone(), radii.clone())?;
        let count = MultiIndex::graded(center.dim(), degree).len();
        if coefficients.len() != count {
            return Err(Error::invalid(format!(
                "expected {count} coefficients, got {}",
                coefficients.len()
            )));
        }
        if let Some(c) = coefficients.iter().find(|c| c.shape() != shape) {
            return Err(Error::Shape(format!(
                "coefficient of shape {} in {shape} series",
                c.shape()
            )));
        }
        for name in boundary_max.keys() {
            name.parse::<Seminorm>()?;
        }
        Ok(TaylorSeries {
            center,
            radii,
            shape,
            degree,
            coefficients,
            boundary_max,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn center(&self) -> &CPoint {
        &self.center
    }

    /// Radii of the polydisc on which the expansion was extracted.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Multi-indices paired with their coefficients, graded-lex.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &VectorValue)> {
        MultiIndex::graded(self.dim(), self.degree)
            .into_iter()
            .zip(&self.coefficients)
    }

    pub fn coefficient(&self, beta: &MultiIndex) -> Option<&VectorValue> {
        if beta.dim() != self.dim() || beta.order() > u64::from(self.degree) {
            return None;
        }
        self.terms().find(|(b, _)| b == beta).map(|(_, v)| v)
    }

    /// Boundary maxima `M_alpha` recorded at extraction, keyed by seminorm name.
    pub fn boundary_max(&self) -> &IndexMap<String, f64> {
        &self.boundary_max
    }

    pub fn boundary_max_for(&self, p: Seminorm) -> Option<f64> {
        self.boundary_max.get(&p.to_string()).copied()
    }

    /// Series restricted to `|beta| <= degree`.
    pub fn truncate(&self, degree: u32) -> Result<TaylorSeries> {
        if degree > self.degree {
            return Err(Error::invalid(format!(
                "cannot truncate a degree {} series to degree {degree}",
                self.degree
            )));
        }
        let count = MultiIndex::graded(self.dim(), degree).len();
        Ok(TaylorSeries {
            coefficients: self.coefficients[..count].to_vec(),
            degree,
            ..self.clone()
        })
    }

    /// Same coefficients, different validity radii.
    pub fn with_radii(&self, radii: Vec<f64>) -> Result<TaylorSeries> {
        Polydisc::new(self.center.clone(), radii.clone())?;
        Ok(TaylorSeries {
            radii,
            ..self.clone()
        })
    }

    /// Partial sum `sum_{|beta| <= n} a_beta (w - z)^beta` for `w` inside the
    /// open polydisc of validity.
    ///
    /// Terms are added in graded-lex order, so the result is bit-reproducible.
    pub fn evaluate(&self, w: &CPoint, n: u32) -> Result<VectorValue> {
        let disc = Polydisc::new(self.center.clone(), self.radii.clone())?;
        if w.dim() != self.dim() {
            return Err(Error::invalid(format!(
                "point in C^{} for a series in C^{}",
                w.dim(),
                self.dim()
            )));
        }
        if !disc.contains(w) {
            return Err(Error::domain(format!(
                "{w} lies outside the open polydisc of validity"
            )));
        }
        self.evaluate_polynomial(w, n)
    }

    /// The partial sum as a polynomial, without the domain restriction.
    pub fn evaluate_polynomial(&self, w: &CPoint, n: u32) -> Result<VectorValue> {
        if n > self.degree {
            return Err(Error::invalid(format!(
                "degree {n} exceeds the stored degree {}",
                self.degree
            )));
        }
        if w.dim() != self.dim() {
            return Err(Error::invalid(format!(
                "point in C^{} for a series in C^{}",
                w.dim(),
                self.dim()
            )));
        }
        let count = MultiIndex::graded(self.dim(), n).len();
        let mut acc = self.coefficients[0].clone();
        for (beta, a) in self.terms().take(count).skip(1) {
            acc.add_scaled(beta.monomial(w, &self.center), a);
        }
        Ok(acc)
    }

    /// `M_alpha (prod_j 1/(1 - t_j) - sum_{|beta| <= n} t^beta)` with
    /// `t_j = |w_j - z_j| / rho_j`: the tail of the dominating geometric series.
    pub fn tail_bound(&self, w: &CPoint, n: u32, seminorm: Seminorm) -> Result<f64> {
        let m = self.boundary_max_for(seminorm).ok_or_else(|| {
            Error::invalid(format!(
                "no boundary maximum recorded for seminorm {seminorm}"
            ))
        })?;
        let t: Vec<f64> = (0..self.dim())
            .map(|j| (w[j] - self.center[j]).norm() / self.radii[j])
            .collect();
        if let Some(j) = t.iter().position(|&x| x >= 1.0) {
            return Err(Error::domain(format!(
                "axis {}: relative distance {} is not below 1",
                j + 1,
                t[j]
            )));
        }
        Ok(m * geometric_tail(&t, n))
    }

    /// Coefficients violating `p(a_beta) <= M_alpha / rho^beta + slack`.
    pub fn cauchy_violations(&self, slack: f64) -> Vec<(MultiIndex, Seminorm)> {
        let mut out = Vec::new();
        for (name, &m) in &self.boundary_max {
            let p: Seminorm = name.parse().expect("validated at construction");
            for (beta, a) in self.terms() {
                let bound = m / beta.real_power(&self.radii);
                if p.eval(a) > bound + slack {
                    out.push((beta, p));
                }
            }
        }
        out
    }
}

/// `prod_j 1/(1 - t_j) - sum_{|beta| <= n} t^beta`, clamped at zero.
pub(crate) fn geometric_tail(t: &[f64], n: u32) -> f64 {
    let n = n as usize;
    // h[k]: complete homogeneous sum of degree k over the axes processed so far
    let mut h = vec![0.0; n + 1];
    h[0] = 1.0;
    for &tj in t {
        let mut next = vec![0.0; n + 1];
        for k in 0..=n {
            let mut power = 1.0;
            for i in 0..=k {
                next[k] += h[k - i] * power;
                power *= tj;
            }
        }
        h = next;
    }
    let full: f64 = t.iter().map(|&tj| 1.0 / (1.0 - tj)).product();
    (full - h.iter().sum::<f64>()).max(0.0)
}

/// Outcome of [`liouville_test`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiouvilleResult {
    pub is_poly_deg_k: bool,
    pub degree: u32,
    pub witness: Option<LiouvilleWitness>,
}

/// Largest coefficient above its threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiouvilleWitness {
    pub beta: MultiIndex,
    pub radius: f64,
    pub magnitude: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleOptions {
    pub radii: Vec<f64>,
    pub tol: f64,
    pub nodes: usize,
}

impl Default for LiouvilleOptions {
    fn default() -> Self {
        LiouvilleOptions {
            radii: vec![2.0, 8.0],
            tol: 1e-8,
            nodes: 64,
        }
    }
}

/// Decides whether an entire `f` is a polynomial of degree at most `k`.
///
/// Coefficients with `k < |beta| <= k + d` are extracted on origin-centred
/// polydiscs of every listed radius. Polynomial growth of order `k` forces
/// them to vanish; a coefficient above `tol (1 + M / rho^beta)` at any radius
/// rules it out.
pub fn liouville_test<F: Integrand + ?Sized>(
    f: &F,
    space: &SpaceDescriptor,
    k: u32,
    seminorm: Seminorm,
    options: &LiouvilleOptions,
) -> Result<LiouvilleResult> {
    let radii = &options.radii;
    if radii.len() < 2 {
        return Err(Error::invalid("at least two radii are required"));
    }
    if radii
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::invalid("radii must be strictly increasing"));
    }
    if radii[radii.len() - 1] / radii[0] < 4.0 {
        return Err(Error::invalid(
            "largest radius must be at least 4 times the smallest",
        ));
    }
    if !space.contains(seminorm) {
        return Err(Error::invalid(format!(
            "seminorm {seminorm} is not in the space's family"
        )));
    }
    let d = f.dim();
    let top = k + d as u32;
    let required = 2 * (top as usize + 1);
    let nodes = options.nodes.max(required + required % 2);

    let mut witness: Option<LiouvilleWitness> = None;
    for &rho in radii {
        let disc = Polydisc::centered(d, rho)?;
        let samples = BoundarySamples::sample(f, &disc, &vec![nodes; d], space)?;
        let series = taylor_coefficients(&samples, top)?;
        let m = samples.max_seminorm(seminorm)?;
        for (beta, a) in series.terms().filter(|(b, _)| b.order() > u64::from(k)) {
            let magnitude = seminorm.eval(a);
            let threshold = options.tol * (1.0 + m / beta.real_power(&vec![rho; d]));
            if magnitude > threshold && witness.as_ref().is_none_or(|w| magnitude > w.magnitude) {
                witness = Some(LiouvilleWitness {
                    beta,
                    radius: rho,
                    magnitude,
                    threshold,
                });
            }
        }
    }
    Ok(LiouvilleResult {
        is_poly_deg_k: witness.is_none(),
        degree: k,
        witness,
    })
}

/// Polynomial given by a truncated series, usable as an integrand anywhere.
pub struct SeriesPolynomial<'a> {
    series: &'a TaylorSeries,
}

impl<'a> SeriesPolynomial<'a> {
    pub fn new(series: &'a TaylorSeries) -> Self {
        SeriesPolynomial { series }
    }
}

impl Integrand for SeriesPolynomial<'_> {
    fn dim(&self) -> usize {
        self.series.dim()
    }

    fn shape(&self) -> Shape {
        self.series.shape()
    }

    fn eval(&self, z: &CPoint) -> Result<VectorValue> {
        self.series.evaluate_polynomial(z, self.series.degree())
    }
}
