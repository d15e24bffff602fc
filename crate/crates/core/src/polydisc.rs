//! Polydiscs `D_rho(w)` and sampling grids on their distinguished boundary.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::CPoint;

/// Default cap on the number of points of a boundary grid.
pub const DEFAULT_MAX_GRID: usize = 1 << 24;

/// Environment variable overriding [`DEFAULT_MAX_GRID`].
pub const MAX_GRID_ENV: &str = "POLYDISC_MAX_GRID";

/// Relative tolerance of the distinguished-boundary predicate.
const BOUNDARY_RTOL: f64 = 1e-12;

/// Current grid cap, honouring `POLYDISC_MAX_GRID`.
pub fn max_grid_points() -> usize {
    std::env::var(MAX_GRID_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or(DEFAULT_MAX_GRID)
}

/// Product of open discs with centre `w` and finite positive radii `rho`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polydisc {
    center: CPoint,
    radii: Vec<f64>,
}

impl Polydisc {
    pub fn new(center: CPoint, radii: Vec<f64>) -> Result<Self> {
        if radii.len() != center.dim() {
            return Err(Error::invalid(format!(
                "{} radii for a centre in C^{}",
                radii.len(),
                center.dim()
            )));
        }
        if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::invalid(format!(
                "radii must be positive and finite, got {r}"
            )));
        }
        Ok(Polydisc { center, radii })
    }

    /// Polydisc centred at the origin with all radii equal to `radius`.
    pub fn centered(d: usize, radius: f64) -> Result<Self> {
        Self::new(CPoint::origin(d)?, vec![radius; d])
    }

    pub fn dim(&self) -> usize {
        self.radii.len()
    }

    pub fn center(&self) -> &CPoint {
        &self.center
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// `|zeta_j - w_j| < rho_j` for every axis.
    pub fn contains(&self, zeta: &CPoint) -> bool {
        zeta.dim() == self.dim()
            && (0..self.dim()).all(|j| (zeta[j] - self.center[j]).norm() < self.radii[j])
    }

    /// Closed polydisc membership.
    pub fn contains_closed(&self, zeta: &CPoint) -> bool {
        zeta.dim() == self.dim()
            && (0..self.dim())
                .all(|j| (zeta[j] - self.center[j]).norm() <= self.radii[j] * (1.0 + BOUNDARY_RTOL))
    }

    /// `|z_j - w_j| = rho_j` for every axis, up to a relative tolerance of `1e-12`.
    pub fn on_distinguished_boundary(&self, z: &CPoint) -> bool {
        z.dim() == self.dim()
            && (0..self.dim()).all(|j| {
                ((z[j] - self.center[j]).norm() - self.radii[j]).abs()
                    <= BOUNDARY_RTOL * self.radii[j]
            })
    }

    /// Componentwise `self.radii < other.radii` with equal centres.
    pub fn radii_less_than(&self, other: &Polydisc) -> bool {
        self.radii.iter().zip(&other.radii).all(|(a, b)| a < b)
    }

    /// Relative position `t_j = |zeta_j - w_j| / rho_j`.
    pub fn relative_position(&self, zeta: &CPoint) -> Vec<f64> {
        (0..self.dim())
            .map(|j| (zeta[j] - self.center[j]).norm() / self.radii[j])
            .collect()
    }

    /// Same centre, radii multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.center.clone(),
            self.radii.iter().map(|r| r * factor).collect(),
        )
    }

    /// Tensor grid `w_k + rho_k e^{2 pi i j_k / N_k}` on the distinguished boundary.
    pub fn boundary_grid(&self, nodes: &[usize]) -> Result<BoundaryGrid> {
        self.boundary_grid_with_cap(nodes, max_grid_points())
    }

    pub fn boundary_grid_with_cap(&self, nodes: &[usize], cap: usize) -> Result<BoundaryGrid> {
        let total = validate_nodes(nodes, self.dim(), cap)?;
        let axes = nodes
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                (0..n)
                    .map(|j| {
                        let theta = 2.0 * PI * j as f64 / n as f64;
                        self.center[k] + self.radii[k] * Complex64::from_polar(1.0, theta)
                    })
                    .collect()
            })
            .collect();
        Ok(BoundaryGrid {
            nodes: nodes.to_vec(),
            axes,
            weights: nodes.iter().map(|&n| 2.0 * PI / n as f64).collect(),
            total,
        })
    }
}

/// Checks a node tuple for a `d`-dimensional boundary grid and returns the grid size.
pub(crate) fn validate_nodes(nodes: &[usize], d: usize, cap: usize) -> Result<usize> {
    if nodes.len() != d {
        return Err(Error::invalid(format!(
            "{} node counts for dimension {d}",
            nodes.len()
        )));
    }
    for (k, &n) in nodes.iter().enumerate() {
        if n < 4 {
            return Err(Error::invalid(format!(
                "axis {}: {n} nodes, at least 4 required",
                k + 1
            )));
        }
        if n % 2 != 0 {
            return Err(Error::invalid(format!(
                "axis {}: node count {n} must be even",
                k + 1
            )));
        }
    }
    let total = nodes
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .filter(|&t| t <= cap)
        .ok_or_else(|| {
            Error::Resource(format!(
                "boundary grid {nodes:?} exceeds the cap of {cap} points"
            ))
        })?;
    Ok(total)
}

/// Sample points on a distinguished boundary, stored per axis.
///
/// Flat indices are row-major: the last axis varies fastest.
#[derive(Debug, Clone)]
pub struct BoundaryGrid {
    nodes: Vec<usize>,
    axes: Vec<Vec<Complex64>>,
    weights: Vec<f64>,
    total: usize,
}

impl BoundaryGrid {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Boundary points of axis `k`.
    pub fn axis(&self, k: usize) -> &[Complex64] {
        &self.axes[k]
    }

    /// Per-axis trapezoidal weights `2 pi / N_k`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Multi-index of flat position `flat`.
    pub fn unflatten(&self, flat: usize) -> Vec<usize> {
        unflatten(&self.nodes, flat)
    }

    pub fn point(&self, flat: usize) -> CPoint {
        let idx = self.unflatten(flat);
        CPoint::new(
            idx.iter()
                .enumerate()
                .map(|(k, &j)| self.axes[k][j])
                .collect(),
        )
        .expect("grid points are finite")
    }

    /// All points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = CPoint> + '_ {
        (0..self.total).map(move |i| self.point(i))
    }
}

pub(crate) fn unflatten(nodes: &[usize], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; nodes.len()];
    for k in (0..nodes.len()).rev() {
        idx[k] = flat % nodes[k];
        flat /= nodes[k];
    }
    idx
}
