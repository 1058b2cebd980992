use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar accepted by the dense kernels.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Default + Debug + Display + Send + Sync + 'static
{
    fn from_u64_exact(v: u64) -> Self {
        Self::from_u64(v).expect("u64 converts to any float")
    }

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal converts to any float")
    }

    /// Smallest pivot magnitude treated as nonzero.
    fn pivot_floor() -> Self {
        let tiny = Self::lit(1e-300);
        if tiny.is_zero() {
            Self::min_positive_value()
        } else {
            tiny
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Integer square root, exact for all `u64`.
pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

/// Returns `r` when `n = r * r`.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}
