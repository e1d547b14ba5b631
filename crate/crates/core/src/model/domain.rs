use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default geometry constant for an interval.
pub const DEFAULT_GEOMETRY_CONSTANT: f64 = 2.0;

/// One of the two boundary points of an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    /// Outward unit normal.
    pub fn normal(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }
}

/// The interval `]a, b[` with its outward normals and the geometry constant
/// that multiplies the total-variation coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain1D {
    pub a: f64,
    pub b: f64,
    pub geometry_constant: f64,
}

impl Domain1D {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Self::with_geometry_constant(a, b, DEFAULT_GEOMETRY_CONSTANT)
    }

    pub fn with_geometry_constant(a: f64, b: f64, geometry_constant: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::Invalid(format!("domain needs a < b, got [{a}, {b}]")));
        }
        if !(geometry_constant.is_finite() && geometry_constant > 0.0) {
            return Err(Error::Invalid(format!(
                "geometry constant must be positive, got {geometry_constant}"
            )));
        }
        Ok(Domain1D { a, b, geometry_constant })
    }

    pub fn unit() -> Self {
        Domain1D {
            a: 0.0,
            b: 1.0,
            geometry_constant: DEFAULT_GEOMETRY_CONSTANT,
        }
    }

    /// Lebesgue measure of the interval.
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Counting measure of the boundary.
    pub fn boundary_measure(&self) -> f64 {
        2.0
    }

    pub fn point(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.a,
            Side::Right => self.b,
        }
    }

    pub fn nu_left(&self) -> f64 {
        Side::Left.normal()
    }

    pub fn nu_right(&self) -> f64 {
        Side::Right.normal()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_intervals() {
        assert!(Domain1D::new(1.0, 1.0).is_err());
        assert!(Domain1D::new(2.0, 1.0).is_err());
        assert!(Domain1D::with_geometry_constant(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn normals_are_outward() {
        let d = Domain1D::unit();
        assert_eq!(d.nu_left(), -1.0);
        assert_eq!(d.nu_right(), 1.0);
        assert_eq!(d.point(Side::Right), 1.0);
        assert_eq!(d.geometry_constant, 2.0);
    }
}
