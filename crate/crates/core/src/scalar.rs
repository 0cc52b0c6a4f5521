//! Scalar fields the library computes over.
//!
//! Everything that decides a dimension or a subspace runs over exact
//! rationals. The float implementations exist for the equivariance checks,
//! where random unitary matrices leave the rationals.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{NumAssignRef, NumRef, Signed, ToPrimitive, Zero};

/// Relative tolerance used by float scalars when deciding that an entry is zero.
pub const FLOAT_ENTRY_TOLERANCE: f64 = 1e-10;

/// Singular values below this fraction of the largest one count as zero in
/// float rank decisions.
pub const FLOAT_RANK_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar {input:?}")]
pub struct ParseScalarError {
    pub input: String,
}

/// A field element usable by every routine in the crate.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Signed
    + NumRef
    + NumAssignRef
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact and zero tests are equality tests.
    const EXACT: bool;

    /// Name used in file headers.
    const MODE: &'static str;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Converts a float; exact for rationals (every finite double is a dyadic rational).
    fn from_f64(v: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Square root when it exists in the field (perfect squares for rationals).
    fn sqrt_exact(&self) -> Option<Self>;

    /// Zero test relative to a magnitude scale. Exact types ignore the scale.
    fn is_negligible(&self, scale: &Self) -> bool;

    /// Residue modulo the prime `p`, when the denominator is invertible.
    fn residue(&self, _p: u64) -> Option<u64> {
        None
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other
    }

    fn parse_scalar(s: &str) -> Result<Self, ParseScalarError>;

    fn format_scalar(&self) -> String {
        self.to_string()
    }

    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Arbitrary precision rational.
pub type Rational = BigRational;

impl Scalar for BigRational {
    const EXACT: bool = true;
    const MODE: &'static str = "rational";

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let num = self.numer().sqrt();
        let den = self.denom().sqrt();
        if &(&num * &num) == self.numer() && &(&den * &den) == self.denom() {
            Some(BigRational::new(num, den))
        } else {
            None
        }
    }

    fn is_negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }

    fn residue(&self, p: u64) -> Option<u64> {
        let modulus = BigInt::from(p);
        let num = self.numer().mod_floor(&modulus).to_u64()?;
        let den = self.denom().mod_floor(&modulus).to_u64()?;
        if den == 0 {
            return None;
        }
        Some(crate::linalg::modp::mul(num, crate::linalg::modp::inv(den, p), p))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn parse_scalar(s: &str) -> Result<Self, ParseScalarError> {
        let err = || ParseScalarError { input: s.to_string() };
        let t = s.trim();
        match t.split_once('/') {
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
                let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
                if q.is_zero() {
                    return Err(err());
                }
                Ok(BigRational::new(p, q))
            }
            None => BigInt::from_str(t).map(BigRational::from_integer).map_err(|_| err()),
        }
    }
}

macro_rules! float_scalar {
    ($t:ty, $mode:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;
            const MODE: &'static str = $mode;

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn from_f64(v: f64) -> Option<Self> {
                Some(v as $t)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn sqrt_exact(&self) -> Option<Self> {
                (*self >= 0.0).then(|| self.sqrt())
            }

            fn is_negligible(&self, scale: &Self) -> bool {
                (*self as f64).abs() <= FLOAT_ENTRY_TOLERANCE * (1.0 + (*scale as f64).abs())
            }

            fn mul_ref(&self, other: &Self) -> Self {
                self * other
            }

            fn parse_scalar(s: &str) -> Result<Self, ParseScalarError> {
                s.trim().parse::<$t>().map_err(|_| ParseScalarError { input: s.to_string() })
            }

            fn format_scalar(&self) -> String {
                format!("{:e}", self)
            }
        }
    };
}

float_scalar!(f64, "float");
float_scalar!(f32, "float32");

/// Largest absolute value in a slice (zero for an empty slice).
pub fn max_abs<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |m, v| {
        let a = v.abs();
        if a > m {
            a
        } else {
            m
        }
    })
}

/// Squared Euclidean norm.
pub fn norm_sq<T: Scalar>(values: &[T]) -> T {
    let mut acc = T::zero();
    for v in values {
        acc += v.mul_ref(v);
    }
    acc
}
