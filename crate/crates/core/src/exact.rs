//! Exact scalars: rationals, quadratic surds and Farey fractions.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Sign of `u + q·√d` for `d ≥ 0`, without floating point.
fn sign_plus_root(u: &BigInt, q: &BigInt, d: &BigInt) -> Ordering {
    let su = u.sign();
    let sq = if q.is_zero() || d.is_zero() {
        num_bigint::Sign::NoSign
    } else {
        q.sign()
    };
    use num_bigint::Sign::*;
    match (su, sq) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
        (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
        _ => {
            // opposite signs: compare u² with q²d
            let lhs = u * u;
            let rhs = q * q * d;
            let u_wins = lhs.cmp(&rhs);
            let s = if su == Plus { Ordering::Greater } else { Ordering::Less };
            match u_wins {
                Ordering::Greater => s,
                Ordering::Less => s.reverse(),
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

/// A Farey fraction `num/den` with the sign on the numerator; `1/0` is ∞.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Farey {
    num: BigInt,
    den: BigInt,
}

impl Farey {
    /// Builds `num/den` in lowest terms. Any `x/0` with `x ≠ 0` becomes ∞.
    ///
    /// # Panics
    /// On `0/0`.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let (mut num, mut den) = (num.into(), den.into());
        assert!(!(num.is_zero() && den.is_zero()), "0/0 is not a Farey fraction");
        if den.is_zero() {
            return Farey::infinity();
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        Farey {
            num: num / &g,
            den: den / g,
        }
    }

    pub fn infinity() -> Self {
        Farey {
            num: BigInt::one(),
            den: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        Farey {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn abs(&self) -> Farey {
        Farey {
            num: self.num.abs(),
            den: self.den.clone(),
        }
    }

    pub fn neg(&self) -> Farey {
        if self.is_infinite() {
            return self.clone();
        }
        Farey {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    /// `num·other.den − other.num·den`.
    pub fn det(&self, other: &Farey) -> BigInt {
        &self.num * &other.den - &other.num * &self.den
    }

    pub fn is_neighbor(&self, other: &Farey) -> bool {
        self.det(other).abs().is_one()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_infinite() {
            None
        } else {
            Some(BigRational::new(self.num.clone(), self.den.clone()))
        }
    }
}

impl Ord for Farey {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Farey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Farey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl std::str::FromStr for Farey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a fraction: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if n.is_zero() && d.is_zero() {
            return Err(bad());
        }
        Ok(Farey::new(n, d))
    }
}

/// Farey sum of two neighbors.
pub fn mediant(a: &Farey, b: &Farey) -> Result<Farey> {
    if !a.is_neighbor(b) {
        return Err(Error::NotNeighbors(a.to_string(), b.to_string()));
    }
    Ok(Farey::new(&a.num + &b.num, &a.den + &b.den))
}

/// Farey difference of two neighbors; inverts [`mediant`].
pub fn farey_sub(a: &Farey, b: &Farey) -> Result<Farey> {
    if !a.is_neighbor(b) {
        return Err(Error::NotNeighbors(a.to_string(), b.to_string()));
    }
    Ok(Farey::new(&a.num - &b.num, &a.den - &b.den))
}

/// The exact number `(p + q√d)/r`.
///
/// For `d < 0` this is a point of the complex plane, in the closed upper
/// half-plane iff `q ≥ 0`. For `d ≥ 0` it is real; perfect-square radicands are
/// folded into `p` so that rational values always have `q = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: BigInt,
}

impl Surd {
    /// # Panics
    /// If `r = 0`.
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        r: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Self {
        let (mut p, mut q, mut r, d) = (p.into(), q.into(), r.into(), d.into());
        assert!(!r.is_zero(), "surd denominator must be nonzero");
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        if let Some(s) = exact_sqrt(&d) {
            p += &q * s;
            q = BigInt::zero();
        }
        let g = p.gcd(&q).gcd(&r);
        Surd {
            p: p / &g,
            q: q / &g,
            r: r / g,
            d,
        }
    }

    pub fn from_rational(x: &BigRational) -> Self {
        Surd::new(x.numer().clone(), 0, x.denom().clone(), 0)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// True when the value lies on the real line.
    pub fn is_real(&self) -> bool {
        self.q.is_zero() || !self.d.is_negative()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// `p/r`, the real part of a complex surd (and the value of a rational one).
    pub fn re(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.r.clone())
    }

    /// `q²|d|/r²` when `d < 0`, else zero.
    pub fn im_sq(&self) -> BigRational {
        if self.d.is_negative() {
            BigRational::new(&self.q * &self.q * (-&self.d), &self.r * &self.r)
        } else {
            BigRational::zero()
        }
    }

    /// Sign of the value (real surds) or of the real part (complex surds).
    pub fn sign_re(&self) -> Ordering {
        if self.is_real() {
            sign_plus_root(&self.p, &self.q, &self.d)
        } else {
            self.p.cmp(&BigInt::zero())
        }
    }

    /// χ(z) = 1 iff the real part is negative.
    pub fn chi(&self) -> u8 {
        u8::from(self.sign_re() == Ordering::Less)
    }

    pub fn sgn(&self) -> i8 {
        match self.sign_re() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Reflection in the imaginary axis, `z ↦ −z̄`.
    pub fn reflect(&self) -> Surd {
        if self.is_real() {
            Surd::new(-&self.p, -&self.q, self.r.clone(), self.d.clone())
        } else {
            Surd::new(-&self.p, self.q.clone(), self.r.clone(), self.d.clone())
        }
    }

    /// Exact comparison of a real surd with a rational number.
    pub fn cmp_rational(&self, x: &BigRational) -> Ordering {
        debug_assert!(self.is_real());
        // sign of (p − x·r) + q√d, scaled by den(x) > 0
        let u = &self.p * x.denom() - x.numer() * &self.r;
        let q = &self.q * x.denom();
        sign_plus_root(&u, &q, &self.d)
    }

    /// Whether the value equals the finite Farey fraction `m`.
    pub fn equals_farey(&self, m: &Farey) -> bool {
        match m.to_rational() {
            Some(x) => self.is_rational() && self.re() == x,
            None => false,
        }
    }

    /// Floating-point approximation `(re, im)`, for display only.
    pub fn approx(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        if self.d.is_negative() {
            (p / r, q * (-d).sqrt() / r)
        } else {
            ((p + q * d.sqrt()) / r, 0.0)
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.q.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}√{}/{}", self.p, sign, self.q.abs(), self.d, self.r)
    }
}

/// Whether `z` lies strictly inside the semicircle over `[a, b]` (`b` may be ∞,
/// in which case the region is the half-plane `Re z > a`).
///
/// Real points count as inside when `a < z < b` strictly.
pub fn inside_semicircle(z: &Surd, a: &Farey, b: &Farey) -> bool {
    let a = a.to_rational().expect("left endpoint must be finite");
    let b = b.to_rational();
    if z.is_real() {
        if z.cmp_rational(&a) != Ordering::Greater {
            return false;
        }
        return match b {
            None => true,
            Some(b) => z.cmp_rational(&b) == Ordering::Less,
        };
    }
    let x = z.re();
    match b {
        None => x > a,
        Some(b) => (&x - &a) * (&x - &b) + z.im_sq() < BigRational::zero(),
    }
}
