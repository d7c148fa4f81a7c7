//! Inertial mass from the surface integral
//! m_I = −(1/16π) ∮ (x^i/r) ∂_j(g₁₁g₂₂g₃₃g^{ij}) r² dΩ
//! over coordinate spheres, with the outward normal taken in the flat
//! Cartesian sense. Only charts whose spatial metric block is diagonal are
//! supported.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Coframe, GeometryError};
use crate::jet::{Jet1, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MassError {
    #[error("spatial metric is not diagonal at {point:?} (|g_{i}{j}| = {value:e})")]
    UnsupportedChart { point: [f64; 4], i: usize, j: usize, value: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("need at least one radius, all positive and distinct")]
    BadRadii,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quadrature {
    /// Gauss-Legendre nodes in cos θ.
    pub polar: usize,
    /// Uniform nodes in φ.
    pub azimuth: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { polar: 32, azimuth: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassTable {
    pub time: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// Polynomial extrapolation in 1/r to 1/r = 0.
    pub extrapolated: f64,
}

/// Relative size of an off-diagonal spatial entry that is still treated as zero.
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Integrand (x^i/r)∂_j(g₁₁g₂₂g₃₃g^{ij}) at x.
fn integrand(coframe: &Coframe, x: [f64; 4]) -> Result<f64, MassError> {
    let fp = coframe.at(x)?;
    let g: [[Jet1; 4]; 4] = fp.metric();
    let diag_max = (1..4).fold(0.0f64, |m, i| m.max(g[i][i].value.abs()));
    for i in 1..4 {
        for j in (i + 1)..4 {
            if g[i][j].magnitude() > OFF_DIAGONAL_TOL * diag_max.max(1.0) {
                return Err(MassError::UnsupportedChart { point: x, i, j, value: g[i][j].value.abs() });
            }
        }
    }
    let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
    let mut s = 0.0;
    for i in 1..4 {
        // g₁₁g₂₂g₃₃ / g_ii = product of the other two diagonal entries
        let (j, k) = match i {
            1 => (2, 3),
            2 => (1, 3),
            _ => (1, 2),
        };
        let p = g[j][j] * g[k][k];
        s += x[i] / r * p.grad[i];
    }
    Ok(s)
}

/// ∮ at one coordinate radius.
pub fn surface_value(coframe: &Coframe, time: f64, radius: f64, quad: &Quadrature) -> Result<f64, MassError> {
    let rule = GaussLegendre::new(NonZeroUsize::new(quad.polar.max(1)).expect("nonzero"));
    let nodes = rule.as_node_weight_pairs();
    let nphi = quad.azimuth.max(1);
    let dphi = 2.0 * std::f64::consts::PI / nphi as f64;
    let rows: Vec<f64> = nodes
        .par_iter()
        .map(|&(u, w)| {
            let sin = (1.0 - u * u).sqrt();
            let mut row = 0.0;
            for k in 0..nphi {
                let phi = (k as f64 + 0.5) * dphi;
                let x = [time, radius * sin * phi.cos(), radius * sin * phi.sin(), radius * u];
                row += integrand(coframe, x)?;
            }
            Ok(w * row * dphi)
        })
        .collect::<Result<_, MassError>>()?;
    let total: f64 = rows.iter().sum();
    Ok(-total * radius * radius / (16.0 * std::f64::consts::PI) + 0.0)
}

/// Neville evaluation at h = 0 of the interpolant through (h_i, y_i).
pub fn extrapolate_to_zero(h: &[f64], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    let n = p.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (h[i + k] * p[i] - h[i] * p[i + 1]) / (h[i + k] - h[i]);
        }
    }
    p[0]
}

pub fn mass_integral(coframe: &Coframe, time: f64, radii: &[f64], quad: &Quadrature) -> Result<MassTable, MassError> {
    let mut sorted = radii.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    if radii.is_empty() || sorted.len() != radii.len() || radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(MassError::BadRadii);
    }
    let values =
        radii.iter().map(|&r| surface_value(coframe, time, r, quad)).collect::<Result<Vec<_>, _>>()?;
    let h: Vec<f64> = radii.iter().map(|r| 1.0 / r).collect();
    // + 0.0 turns a −0 into 0
    let extrapolated = extrapolate_to_zero(&h, &values) + 0.0;
    Ok(MassTable { time, radii: radii.to_vec(), values, extrapolated })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_recovers_polynomial() {
        let h = [0.1, 0.2, 0.5];
        let y: Vec<f64> = h.iter().map(|x| 3.0 - 2.0 * x + 5.0 * x * x).collect();
        assert!((extrapolate_to_zero(&h, &y) - 3.0).abs() < 1e-12);
    }
}
