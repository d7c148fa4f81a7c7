//! Orthonormal-frame geometry evaluated pointwise from a chart and coframe.
//!
//! Nothing here is symbolic: every object is evaluated at a sample point,
//! with exact derivatives carried by jets. The coframe coefficients are
//! `Jet2`, so first-derivative objects (dθ, c, ω, Θ) come out as `Jet1` and
//! second-derivative objects (dω, ℛ) as plain values.

mod connection;
mod frame;
mod sampling;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::{Blade, Multivector};
use crate::expr::{eval_jet, EvalError, Expr, Params};
use crate::jet::{Jet1, Jet2};

pub use connection::*;
pub use frame::{invert, Coframe, FramePoint, SINGULAR_DET};
pub use sampling::{sample_points, SampleError, Sampling};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("singular coframe at {point:?}: |det h| = {det:e}")]
    Singular { point: [f64; 4], det: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("exterior derivative of a {0}-form")]
    DegreeTooHigh(usize),
    #[error("form coefficient on {blade} does not have degree {degree}")]
    WrongDegree { blade: String, degree: usize },
}

/// Coordinate names, a domain box and loci to keep away from.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub coords: [String; 4],
    pub domain: [[f64; 2]; 4],
    /// Expressions whose zero sets are avoided when sampling.
    pub excluded: Vec<Expr>,
    pub margin: f64,
}

/// Default distance kept from excluded loci.
pub const DEFAULT_MARGIN: f64 = 1e-3;

/// Magnitudes below this are not used to normalise residuals.
pub const SCALE_FLOOR: f64 = 1e-3;

/// Running sup-norm of a residual together with the sup of the magnitudes
/// of the terms it was summed from.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Residual {
    pub abs: f64,
    pub scale: f64,
}

impl Residual {
    pub fn new(abs: f64, scale: f64) -> Self {
        Residual { abs, scale }
    }

    pub fn merge(self, o: Residual) -> Residual {
        Residual { abs: self.abs.max(o.abs), scale: self.scale.max(o.scale) }
    }

    /// abs / max(scale, SCALE_FLOOR): relative for sizeable terms, absolute
    /// (times 1/SCALE_FLOOR) for tiny ones.
    pub fn normalized(&self) -> f64 {
        if self.abs == 0.0 {
            return 0.0;
        }
        self.abs / self.scale.max(SCALE_FLOOR)
    }
}

impl std::iter::FromIterator<Residual> for Residual {
    fn from_iter<I: IntoIterator<Item = Residual>>(iter: I) -> Self {
        iter.into_iter().fold(Residual::default(), Residual::merge)
    }
}

/// A p-form given by expression coefficients on frame blades θ^{a1…ap}.
#[derive(Clone, Debug, PartialEq)]
pub struct FormField {
    degree: usize,
    coeffs: Vec<(Blade, Expr)>,
}

impl FormField {
    pub fn new(degree: usize, coeffs: Vec<(Blade, Expr)>) -> Result<Self, GeometryError> {
        if let Some((b, _)) = coeffs.iter().find(|(b, _)| b.grade() != degree) {
            return Err(GeometryError::WrongDegree { blade: b.to_string(), degree });
        }
        Ok(FormField { degree, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[(Blade, Expr)] {
        &self.coeffs
    }

    /// Frame coefficients at a point.
    pub fn at(&self, fp: &FramePoint, params: &Params) -> Result<Multivector<Jet2>, GeometryError> {
        let mut m = Multivector::zero();
        for (b, e) in &self.coeffs {
            m[*b] += eval_jet(e, &fp.x, params)?;
        }
        Ok(m)
    }

    pub fn exterior_derivative(&self, fp: &FramePoint, params: &Params) -> Result<Multivector<Jet1>, GeometryError> {
        if self.degree >= 4 {
            return Err(GeometryError::DegreeTooHigh(self.degree));
        }
        Ok(fp.d(&self.at(fp, params)?))
    }

    pub fn codifferential(&self, fp: &FramePoint, params: &Params) -> Result<Multivector<Jet1>, GeometryError> {
        if self.degree == 0 {
            return Ok(Multivector::zero());
        }
        Ok(fp.codifferential(&self.at(fp, params)?))
    }
}

/// Geometry summary at one sample point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometrySample {
    pub point: [f64; 4],
    /// h^a_μ
    pub theta: [[f64; 4]; 4],
    /// c^a_{mn}
    pub structure: [[[f64; 4]; 4]; 4],
    /// ω^a_b(e_c), indexed [a][b][c]
    pub omega: [[[f64; 4]; 4]; 4],
    /// Θ^a components T^a_{mn} of the chosen connection
    pub torsion: [[[f64; 4]; 4]; 4],
    /// ℛ^a_b components R^a_{bcd}
    pub curvature: [[[[f64; 4]; 4]; 4]; 4],
    pub ricci_scalar: f64,
}

impl GeometrySample {
    pub fn compute(fp: &FramePoint, mode: ConnectionMode) -> Self {
        let pg = PointGeometry::new(fp.clone(), mode);
        let (_, ricci_scalar) = ricci(&pg.curvature);
        let c = structure_coefficients(fp);
        let w = values_matrix(&pg.omega);
        GeometrySample {
            point: fp.x,
            theta: fp.h.map(|r| r.map(|x| x.value)),
            structure: c.map(|m| m.map(|r| r.map(|x| x.value))),
            omega: std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|k| w[a][b].get(Blade(1 << k))))),
            torsion: two_form_components(&values_forms(&pg.torsion)),
            curvature: riemann(&pg.curvature),
            ricci_scalar,
        }
    }
}
