//! Tensor-product C^1 curves `gamma = (gamma_1, ..., gamma_d)` with analytic
//! derivatives.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::polydisc::Polydisc;
use crate::quadrature::gauss_legendre;

/// One axis of a [`CurveC1`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveComponent {
    /// `t -> center + radius e^{it}` on `[start, end]`.
    Circle {
        center: Complex64,
        radius: f64,
        start: f64,
        end: f64,
    },
    /// `t -> from + (to - from) t` on `[0, 1]`.
    Segment { from: Complex64, to: Complex64 },
    /// Values and derivatives on a uniform grid of `[start, end]`, joined by
    /// cubic Hermite interpolation.
    Sampled {
        start: f64,
        end: f64,
        values: Vec<Complex64>,
        derivatives: Vec<Complex64>,
    },
}

impl CurveComponent {
    /// Full positively oriented circle on `[0, 2 pi]`.
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Self::arc(center, radius, 0.0, 2.0 * PI)
    }

    pub fn arc(center: Complex64, radius: f64, start: f64, end: f64) -> Result<Self> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::invalid(format!(
                "circle radius {radius} is not admissible"
            )));
        }
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(Error::invalid(
                "arc parameter interval must be finite and increasing",
            ));
        }
        Ok(CurveComponent::Circle {
            center,
            radius,
            start,
            end,
        })
    }

    pub fn segment(from: Complex64, to: Complex64) -> Self {
        CurveComponent::Segment { from, to }
    }

    pub fn sampled(
        start: f64,
        end: f64,
        values: Vec<Complex64>,
        derivatives: Vec<Complex64>,
    ) -> Result<Self> {
        if values.len() < 2 || values.len() != derivatives.len() {
            return Err(Error::invalid(
                "sampled curve needs at least two nodes and one derivative per node",
            ));
        }
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(Error::invalid(
                "sampled curve interval must be finite and increasing",
            ));
        }
        Ok(CurveComponent::Sampled {
            start,
            end,
            values,
            derivatives,
        })
    }

    pub fn interval(&self) -> (f64, f64) {
        match *self {
            CurveComponent::Circle { start, end, .. } => (start, end),
            CurveComponent::Segment { .. } => (0.0, 1.0),
            CurveComponent::Sampled { start, end, .. } => (start, end),
        }
    }

    /// True for circles traversed over a full period; such axes are
    /// integrated with the periodic trapezoidal rule.
    pub fn is_periodic(&self) -> bool {
        match *self {
            CurveComponent::Circle { start, end, .. } => {
                ((end - start) - 2.0 * PI).abs() <= 1e-14 * 2.0 * PI
            }
            _ => false,
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            CurveComponent::Circle { center, radius, .. } => {
                center + radius * Complex64::from_polar(1.0, t)
            }
            CurveComponent::Segment { from, to } => from + (to - from) * t,
            CurveComponent::Sampled { .. } => self.hermite(t).0,
        }
    }

    pub fn derivative(&self, t: f64) -> Complex64 {
        match self {
            CurveComponent::Circle { radius, .. } => {
                Complex64::i() * radius * Complex64::from_polar(1.0, t)
            }
            CurveComponent::Segment { from, to } => to - from,
            CurveComponent::Sampled { .. } => self.hermite(t).1,
        }
    }

    /// Arc length `int |gamma'|`.
    pub fn length(&self) -> f64 {
        match *self {
            CurveComponent::Circle {
                radius, start, end, ..
            } => radius * (end - start),
            CurveComponent::Segment { from, to } => (to - from).norm(),
            CurveComponent::Sampled {
                start,
                end,
                ref values,
                ..
            } => {
                let panels = values.len() - 1;
                let h = (end - start) / panels as f64;
                let (x, w) = gauss_legendre(16);
                (0..panels)
                    .map(|p| {
                        let a = start + p as f64 * h;
                        x.iter()
                            .zip(&w)
                            .map(|(xi, wi)| {
                                wi * 0.5 * h * self.derivative(a + 0.5 * h * (xi + 1.0)).norm()
                            })
                            .sum::<f64>()
                    })
                    .sum()
            }
        }
    }

    fn hermite(&self, t: f64) -> (Complex64, Complex64) {
        let CurveComponent::Sampled {
            start,
            end,
            values,
            derivatives,
        } = self
        else {
            unreachable!("hermite interpolation on a closed-form curve")
        };
        let panels = values.len() - 1;
        let h = (end - start) / panels as f64;
        let pos = ((t - start) / h).clamp(0.0, panels as f64);
        let k = (pos.floor() as usize).min(panels - 1);
        let s = pos - k as f64;
        let (p0, p1) = (values[k], values[k + 1]);
        let (m0, m1) = (derivatives[k] * h, derivatives[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let value = p0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + m0 * (s3 - 2.0 * s2 + s)
            + p1 * (-2.0 * s3 + 3.0 * s2)
            + m1 * (s3 - s2);
        let dvalue = p0 * (6.0 * s2 - 6.0 * s)
            + m0 * (3.0 * s2 - 4.0 * s + 1.0)
            + p1 * (-6.0 * s2 + 6.0 * s)
            + m1 * (3.0 * s2 - 2.0 * s);
        (value, dvalue / h)
    }
}

/// A curve in `C^d` given axis by axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveC1 {
    components: Vec<CurveComponent>,
}

impl CurveC1 {
    pub fn new(components: Vec<CurveComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("a curve needs at least one component"));
        }
        Ok(CurveC1 { components })
    }

    /// Parametrisation of the distinguished boundary of `disc`.
    pub fn distinguished_boundary(disc: &Polydisc) -> Self {
        CurveC1 {
            components: (0..disc.dim())
                .map(|k| CurveComponent::Circle {
                    center: disc.center()[k],
                    radius: disc.radii()[k],
                    start: 0.0,
                    end: 2.0 * PI,
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[CurveComponent] {
        &self.components
    }

    pub fn eval(&self, t: &[f64]) -> Result<CPoint> {
        CPoint::new(
            self.components
                .iter()
                .zip(t)
                .map(|(c, &s)| c.eval(s))
                .collect(),
        )
    }

    /// `prod_k gamma_k'(t_k)`.
    pub fn jacobian(&self, t: &[f64]) -> Complex64 {
        self.components
            .iter()
            .zip(t)
            .map(|(c, &s)| c.derivative(s))
            .product()
    }

    /// `l(gamma)`: the product of the component lengths.
    pub fn length(&self) -> f64 {
        self.components.iter().map(CurveComponent::length).product()
    }

    pub fn start_point(&self) -> Result<CPoint> {
        let t: Vec<f64> = self.components.iter().map(|c| c.interval().0).collect();
        self.eval(&t)
    }

    pub fn end_point(&self) -> Result<CPoint> {
        let t: Vec<f64> = self.components.iter().map(|c| c.interval().1).collect();
        self.eval(&t)
    }
}
