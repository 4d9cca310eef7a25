//! Scalar abstraction shared by the exact and the floating evaluation paths.
//!
//! Everything that only needs ring/field operations (power sums, form
//! evaluation, Jacobians, polynomial arithmetic) is written against
//! [`Scalar`]. Algorithms whose correctness depends on exact sign tests
//! (Sturm sequences, rank, exact division) additionally require
//! [`ExactScalar`], which is only implemented for [`Rational`](crate::Rational).

use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_rational(q: &BigRational) -> Self;

    fn from_i64(v: i64) -> Self;

    /// Lossy conversion used for reporting and for seeding numeric searches.
    fn to_f64(&self) -> f64;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn pow_u32(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// Marker for scalar types whose arithmetic is exact, so that a computed
/// zero really is zero.
pub trait ExactScalar: Scalar {}

macro_rules! impl_float_scalar {
    ($($t:ty),*) => {
        $(
            impl Scalar for $t {
                fn from_rational(q: &BigRational) -> Self {
                    rational_to_f64(q) as $t
                }
                fn from_i64(v: i64) -> Self {
                    v as $t
                }
                fn to_f64(&self) -> f64 {
                    *self as f64
                }
                fn pow_u32(&self, exp: u32) -> Self {
                    self.powi(exp as i32)
                }
            }
        )*
    };
}

impl_float_scalar!(f32, f64);

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn pow_u32(&self, exp: u32) -> Self {
        num_traits::Pow::pow(self, exp)
    }
}

impl ExactScalar for BigRational {}

fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Huge numerator or denominator: shift both down to a common scale.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as usize;
    let shift_d = (db - 900).max(0) as usize;
    let n = (q.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or a plain integer.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: `{t}`"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator in `{t}`")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(t).map_err(|_| bad())?,
        )),
    }
}

/// Canonical text for a rational: `p/q` in lowest terms, or `p` when integral.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Closest rational with denominator `2^bits` (used to turn float argmins
/// into exact candidate points).
pub fn rational_from_f64(x: f64, bits: u32) -> BigRational {
    let scale = 2f64.powi(bits as i32);
    let n = (x * scale).round();
    BigRational::new(
        BigInt::from(n as i128),
        BigInt::from(1u8) << bits as usize,
    )
}

/// `serialize_with` helpers writing rationals in their canonical text form.
pub mod serde_text {
    use num_rational::BigRational;
    use serde::Serializer;

    use super::format_rational;

    pub fn one<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn vec<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn opt_vec<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => vec(v, s),
            None => s.serialize_none(),
        }
    }
}

pub fn sign_of<T: Scalar>(x: &T) -> i32 {
    if *x > T::zero() {
        1
    } else if *x < T::zero() {
        -1
    } else {
        0
    }
}
