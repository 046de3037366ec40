//! Scalar abstraction for the numeric parts of the crate.
//!
//! The state-vector oracle and the Minkowski geometry are generic over the
//! floating-point type; the crate root pins concrete `f64` aliases that the
//! protocol engine uses.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Comparison tolerance for quantities that are exact up to rounding
    /// (amplitudes drawn from {0, ±1/2, ±1/√2} and light-cone arithmetic).
    fn tolerance() -> Self;

    fn from_f64_exact(v: f64) -> Self {
        Self::from_f64(v).expect("f64 conversion")
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-4
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_are_positive() {
        assert!(f64::tolerance() > 0.0);
        assert!(f32::tolerance() > 0.0);
    }
}
