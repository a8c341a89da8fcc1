//! Floating-point scalar abstraction.
//!
//! Everything that is exact (matrices, path counts, residues) lives in
//! integers. Estimates, roots and bound formulas are generic over [`Real`],
//! implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// floating point: f32 or f64
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Default convergence tolerance for eigenvalue iteration.
    fn default_tol() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).unwrap_or_else(Self::infinity)
    }
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-12
    }
}

/// Natural logarithm of a big unsigned integer; `-inf` for zero.
///
/// Uses the top 64 significant bits, so the relative error is that of one
/// rounding in `F` plus `2^-63`.
pub fn big_ln<F: Real>(x: &BigUint) -> F {
    let bits = x.bits();
    if bits == 0 {
        return F::neg_infinity();
    }
    if bits <= 64 {
        let v = x.to_u64().expect("fits in 64 bits");
        return F::from_u64(v).expect("u64 to float").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 leading bits");
    F::from_u64(top).expect("u64 to float").ln() + F::from_u64(shift).unwrap() * F::lit(std::f64::consts::LN_2)
}

/// Lossy conversion, saturating at infinity.
pub fn big_to_real<F: Real>(x: &BigUint) -> F {
    if x.bits() <= 64 {
        return F::from_u64(x.to_u64().unwrap()).unwrap();
    }
    let ln = big_ln::<F>(x);
    ln.exp()
}
