//! Helpers shared by the integration tests.
#![allow(dead_code)]

pub mod oracle;

use polydisc::{CPoint, Complex64};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform random point with `|z_j - center_j| <= margin * radius_j`.
pub fn random_point(
    rng: &mut impl Rng,
    center: &[Complex64],
    radii: &[f64],
    margin: f64,
) -> CPoint {
    CPoint::new(
        center
            .iter()
            .zip(radii)
            .map(|(&w, &r)| {
                let rho = margin * r * rng.gen::<f64>().sqrt();
                let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
                w + Complex64::from_polar(rho, theta)
            })
            .collect(),
    )
    .unwrap()
}

pub fn random_origin_point(rng: &mut impl Rng, d: usize, margin: f64) -> CPoint {
    random_point(rng, &vec![c(0.0, 0.0); d], &vec![1.0; d], margin)
}

/// `|a - b| / max(1, |b|)`.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
