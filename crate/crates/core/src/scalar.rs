//! The commutative-ring contract shared by the master engine and the Laurent
//! evaluator: integers, rationals and complex floats.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_bigint(n: &BigInt) -> Self;
    fn is_zero(&self) -> bool;

    /// Division that must be exact in the ring.
    fn try_div(&self, other: &Self) -> Result<Self>;

    /// Equality up to a relative tolerance; exact types ignore `tol`.
    fn close(&self, other: &Self, tol: f64) -> bool;
}

fn div_by_zero() -> Error {
    Error::DivisionByZero("scalar division by zero".into())
}

macro_rules! int_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn zero() -> Self {
                0
            }
            fn one() -> Self {
                1
            }
            fn from_i64(n: i64) -> Self {
                n as $t
            }
            fn from_bigint(n: &BigInt) -> Self {
                <$t as num_traits::NumCast>::from(n.clone()).expect("integer overflow")
            }
            fn is_zero(&self) -> bool {
                *self == 0
            }
            fn try_div(&self, other: &Self) -> Result<Self> {
                if *other == 0 {
                    return Err(div_by_zero());
                }
                let (q, r) = self.div_rem(other);
                if r != 0 {
                    return Err(Error::InexactDivision(format!("{self} / {other}")));
                }
                Ok(q)
            }
            fn close(&self, other: &Self, _tol: f64) -> bool {
                self == other
            }
        }
    };
}

int_scalar!(i64);
int_scalar!(i128);

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
    fn from_bigint(n: &BigInt) -> Self {
        n.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn try_div(&self, other: &Self) -> Result<Self> {
        if Zero::is_zero(other) {
            return Err(div_by_zero());
        }
        let (q, r) = self.div_rem(other);
        if !Zero::is_zero(&r) {
            return Err(Error::InexactDivision(format!("{self} / {other}")));
        }
        Ok(q)
    }
    fn close(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn try_div(&self, other: &Self) -> Result<Self> {
        if Zero::is_zero(other) {
            return Err(div_by_zero());
        }
        Ok(self / other)
    }
    fn close(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_bigint(n: &BigInt) -> Self {
        Complex64::new(n.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn try_div(&self, other: &Self) -> Result<Self> {
        if Scalar::is_zero(other) {
            return Err(div_by_zero());
        }
        Ok(self / other)
    }
    fn close(&self, other: &Self, tol: f64) -> bool {
        let scale = 1.0_f64.max(self.norm()).max(other.norm());
        (self - other).norm() <= tol * scale
    }
}
