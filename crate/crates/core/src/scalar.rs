//! Scalar abstraction shared by every numerical routine in the crate.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar type the operator algebra is generic over (`f32` or `f64`).
///
/// Tolerances throughout the crate are calibrated for double precision and
/// written as `f64` literals; [`Real::tol`] widens them for narrower types.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Ratio of this type's machine epsilon to that of `f64`.
    const EPS_RATIO: f64;

    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// A tolerance calibrated for `f64`, widened in proportion to the
    /// machine epsilon of `Self` (never looser than `1e-3` unless the input
    /// already is).
    fn tol(x: f64) -> Self {
        let widened = (x * Self::EPS_RATIO).min(1e-3).max(x);
        Self::lit(widened)
    }

    /// Lossy conversion used for error reporting and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const EPS_RATIO: f64 = 1.0;
}

impl Real for f32 {
    const EPS_RATIO: f64 = f32::EPSILON as f64 / f64::EPSILON;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_widen_for_single_precision() {
        assert_eq!(<f64 as Real>::tol(1e-12), 1e-12);
        let t = <f32 as Real>::tol(1e-12);
        assert!(t > 1e-6 && t <= 1e-3);
        assert_eq!(<f32 as Real>::tol(0.5), 0.5);
    }
}
