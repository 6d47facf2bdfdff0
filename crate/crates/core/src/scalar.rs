//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the densities, samplers, integrators and the grid
/// solver are generic over. Implemented for `f32` and `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts a count into the scalar type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `ln(n!)`, summed directly for small `n` and by Stirling's series above.
pub fn ln_factorial<T: Real>(n: u32) -> T {
    if n < 64 {
        let mut acc = T::zero();
        for k in 2..=n {
            acc = acc + T::from_u32(k).unwrap().ln();
        }
        acc
    } else {
        let x = T::from_u32(n).unwrap() + T::one();
        // Stirling series for ln Γ(x), x = n + 1 ≥ 65.
        let half = T::lit(0.5);
        let two_pi = T::lit(2.0) * T::PI();
        let inv = T::one() / x;
        let inv2 = inv * inv;
        (x - half) * x.ln() - x
            + half * two_pi.ln()
            + inv * (T::lit(1.0 / 12.0) - inv2 * (T::lit(1.0 / 360.0) - inv2 * T::lit(1.0 / 1260.0)))
    }
}

/// Pairwise (cascade) summation; the result depends only on the order of
/// `values`, never on how they were produced.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        let mut acc = T::zero();
        for &v in values {
            acc = acc + v;
        }
        acc
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}
