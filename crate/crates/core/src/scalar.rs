//! Arithmetic backends.
//!
//! Tensor arithmetic is generic over [`Scalar`], implemented for `f64` and
//! for exact [`BigRational`]s. Exact mode is meant for small instances where
//! reconstruction identities should hold with zero residual.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub trait Scalar:
    Clone + Debug + PartialOrd + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Which backend a computation should run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arithmetic {
    #[default]
    Float,
    Rational,
}

impl Arithmetic {
    /// Exact mode is limited to `n ≤ 6`, `m ≤ 4`.
    pub fn supports(self, dim: usize, order: usize) -> bool {
        match self {
            Arithmetic::Float => true,
            Arithmetic::Rational => dim <= 4 && order <= 6,
        }
    }
}

/// Converts a finite `f64` to the exact rational it represents.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_f64(x)
}
