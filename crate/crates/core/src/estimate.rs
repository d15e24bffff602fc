use serde::{Deserialize, Serialize};

/// A computed value with any accuracy warnings raised while producing it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
}

impl<T> Estimate<T> {
    pub fn exact(value: T) -> Self {
        Estimate {
            value,
            warnings: Vec::new(),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Estimate<U> {
        Estimate {
            value: f(self.value),
            warnings: self.warnings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "warning", rename_all = "snake_case")]
pub enum Warning {
    /// The curve has zero length; the integral is the zero vector.
    DegenerateCurve,
    /// An evaluation point sits close to the sampled boundary, where the
    /// Cauchy kernel is steep and quadrature accuracy degrades.
    NearBoundary { axis: usize, relative_position: f64 },
    /// A parameter derivative was formed by central differences.
    FiniteDifference { step: f64 },
}
