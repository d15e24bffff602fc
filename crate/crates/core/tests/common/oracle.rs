//! Exact derivatives of separable test functions `prod_j g_j(z_j)`, each
//! factor a monomial, an exponential or a simple pole. Written against
//! closed-form rules only; shares no code with the quadrature engine.

use polydisc::{CPoint, Complex64, MultiIndex};

#[derive(Debug, Clone, Copy)]
pub enum Factor {
    /// `z^k`
    Monomial(u32),
    /// `e^z`
    Exp,
    /// `1 / (z - a)`
    Pole(f64),
}

fn falling(k: u32, n: u32) -> f64 {
    (0..n).map(|i| f64::from(k - i)).product()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl Factor {
    /// `g^{(n)}(z)`.
    pub fn derivative(self, n: u32, z: Complex64) -> Complex64 {
        match self {
            Factor::Monomial(k) if n > k => Complex64::new(0.0, 0.0),
            Factor::Monomial(k) => falling(k, n) * z.powu(k - n),
            Factor::Exp => z.exp(),
            Factor::Pole(a) => {
                let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * factorial(n) / (z - a).powu(n + 1)
            }
        }
    }
}

/// `prod_j factors[j](z_j)`.
#[derive(Debug, Clone)]
pub struct Separable {
    pub name: &'static str,
    pub factors: Vec<Factor>,
}

impl Separable {
    pub fn eval(&self, z: &CPoint) -> Complex64 {
        self.derivative(&MultiIndex::zero(self.factors.len()), z)
    }

    pub fn derivative(&self, beta: &MultiIndex, z: &CPoint) -> Complex64 {
        self.factors
            .iter()
            .zip(beta.exponents())
            .enumerate()
            .map(|(j, (g, &n))| g.derivative(n, z[j]))
            .product()
    }
}

/// `exp(z1 + z2)`, `z1^3 z2`, `1 / ((z1 - 2)(z2 + 3))`.
pub fn test_set() -> Vec<Separable> {
    vec![
        Separable {
            name: "exp(z1+z2)",
            factors: vec![Factor::Exp, Factor::Exp],
        },
        Separable {
            name: "z1^3*z2",
            factors: vec![Factor::Monomial(3), Factor::Monomial(1)],
        },
        Separable {
            name: "1/((z1-2)*(z2+3))",
            factors: vec![Factor::Pole(2.0), Factor::Pole(-3.0)],
        },
    ]
}
