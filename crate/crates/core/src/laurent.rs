//! Trivariate Laurent polynomials over ℤ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent vector of `x1^a x2^b x3^c`; exponents may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial3(pub [i32; 3]);

impl Monomial3 {
    pub const ONE: Monomial3 = Monomial3([0, 0, 0]);

    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Monomial3(e)
    }

    fn mul(self, o: Monomial3) -> Monomial3 {
        Monomial3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    fn div(self, o: Monomial3) -> Monomial3 {
        Monomial3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }

    fn divides(self, o: Monomial3) -> bool {
        (0..3).all(|k| self.0[k] <= o.0[k])
    }
}

/// A finite sum of monomials with nonzero integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial3, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(Monomial3::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The variable `x_{i+1}` (0-based index).
    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial3::var(i), 1)
    }

    pub fn monomial(m: Monomial3, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial3, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial3, c: BigInt) {
        if Zero::is_zero(&c) {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(<BigInt as Zero>::zero);
        *slot += c;
        if Zero::is_zero(slot) {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial3, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn as_monomial(&self) -> Option<(Monomial3, &BigInt)> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 => Some((*m, c)),
            _ => None,
        }
    }

    /// Componentwise minimum exponent; `x^min` clears all denominators.
    pub fn min_exponents(&self) -> Monomial3 {
        let mut lo = [i32::MAX; 3];
        for m in self.terms.keys() {
            for k in 0..3 {
                lo[k] = lo[k].min(m.0[k]);
            }
        }
        if self.is_zero() {
            Monomial3::ONE
        } else {
            Monomial3(lo)
        }
    }

    /// The monomial denominator: `x^d` with `d_k = max(0, −min_k)`.
    pub fn denominator(&self) -> Monomial3 {
        let lo = self.min_exponents();
        Monomial3(lo.0.map(|e| (-e).max(0)))
    }

    pub fn scale_monomial(&self, m: Monomial3) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `p / q` in the Laurent ring over ℤ.
    pub fn exact_div(&self, q: &LaurentPoly) -> Result<LaurentPoly> {
        exact_div(self, q)
    }

    /// Substitutes `point` for `(x1, x2, x3)`.
    pub fn eval<T: Scalar>(&self, point: &[T; 3]) -> Result<T> {
        eval(self, point)
    }
}

fn lift<T: Scalar>(c: &BigInt) -> T {
    T::from_bigint(c)
}

/// Evaluates `p` at `point`; the value must lie in the scalar ring (integer
/// scalars require the monomial denominator to divide the numerator value).
pub fn eval<T: Scalar>(p: &LaurentPoly, point: &[T; 3]) -> Result<T> {
    let den = p.denominator();
    for k in 0..3 {
        if den.0[k] > 0 && point[k].is_zero() {
            return Err(Error::EvalAtZero(k + 1));
        }
    }
    // power tables up to the largest shifted exponent of each variable
    let mut tables: [Vec<T>; 3] = [vec![T::one()], vec![T::one()], vec![T::one()]];
    for (k, table) in tables.iter_mut().enumerate() {
        let top = p
            .terms
            .keys()
            .map(|m| m.0[k] + den.0[k])
            .max()
            .unwrap_or(0)
            .max(den.0[k]);
        for _ in 0..top {
            let next = table.last().unwrap().clone() * point[k].clone();
            table.push(next);
        }
    }
    let mut numer = T::zero();
    for (m, c) in &p.terms {
        let mut t = lift::<T>(c);
        for k in 0..3 {
            t = t * tables[k][(m.0[k] + den.0[k]) as usize].clone();
        }
        numer = numer + t;
    }
    let d = (0..3).fold(T::one(), |acc, k| acc * tables[k][den.0[k] as usize].clone());
    numer.try_div(&d)
}

/// Exact division in `ℤ[x1^±1, x2^±1, x3^±1]`.
///
/// Both operands are shifted to ordinary polynomials not divisible by any
/// variable; a Laurent quotient exists iff the shifted polynomial quotient
/// does, which is found by division by the lex-leading term.
pub fn exact_div(p: &LaurentPoly, q: &LaurentPoly) -> Result<LaurentPoly> {
    if q.is_zero() {
        return Err(Error::DivisionByZero("Laurent division by the zero polynomial".into()));
    }
    if p.is_zero() {
        return Ok(LaurentPoly::zero());
    }
    let (lp, lq) = (p.min_exponents(), q.min_exponents());
    let mut rem = p.scale_monomial(Monomial3::ONE.div(lp));
    let qs = q.scale_monomial(Monomial3::ONE.div(lq));
    let (lead_m, lead_c) = qs
        .terms
        .iter()
        .next_back()
        .map(|(m, c)| (*m, c.clone()))
        .expect("nonzero divisor");
    let mut quot = LaurentPoly::zero();
    while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, c)| (*m, c.clone())) {
        if !lead_m.divides(m) {
            return Err(inexact(p, q));
        }
        let (k, r) = c.div_rem(&lead_c);
        if !Zero::is_zero(&r) {
            return Err(inexact(p, q));
        }
        let t = m.div(lead_m);
        for (qm, qc) in &qs.terms {
            rem.add_term(qm.mul(t), -(qc * &k));
        }
        quot.add_term(t, k);
    }
    Ok(quot.scale_monomial(lp.div(lq)))
}

fn inexact(p: &LaurentPoly, q: &LaurentPoly) -> Error {
    Error::InexactDivision(format!("({p}) / ({q})"))
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, -c);
        }
        r
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = LaurentPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(*m2), c1 * c2);
            }
        }
        r
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$f(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

fn fmt_monomial(m: &Monomial3) -> String {
    let mut parts = Vec::new();
    for k in 0..3 {
        match m.0[k] {
            0 => {}
            1 => parts.push(format!("x{}", k + 1)),
            e => parts.push(format!("x{}^{}", k + 1, e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono = fmt_monomial(m);
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{a}*{mono}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> LaurentPoly {
        LaurentPoly::var(i - 1)
    }

    fn mono(e: [i32; 3], c: i64) -> LaurentPoly {
        LaurentPoly::monomial(Monomial3(e), c)
    }

    fn inv(i: usize) -> LaurentPoly {
        let mut e = [0; 3];
        e[i - 1] = -1;
        mono(e, 1)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&x(1) * &inv(1), LaurentPoly::one());
        let s = &x(2).pow(2) + &x(3).pow(2);
        assert_eq!(s.eval(&[1i64, 1, 1]).unwrap(), 2);
        assert_eq!((&s * &inv(1)).eval(&[1i64, 1, 1]).unwrap(), 2);
    }

    #[test]
    fn eval_at_zero_is_reported() {
        let p = &x(2) * &inv(1);
        assert_eq!(p.eval(&[0i64, 1, 1]), Err(Error::EvalAtZero(1)));
        assert_eq!(x(1).eval(&[0i64, 1, 1]).unwrap(), 0);
    }

    #[test]
    fn division_examples() {
        let p = &(&x(1).pow(2) * &x(3)) + &(&x(1) * &x(2));
        assert_eq!(exact_div(&p, &x(1)).unwrap(), &(&x(1) * &x(3)) + &x(2));
        // every monomial is a unit, so this one is exact
        let p = &x(1) + &x(2);
        assert_eq!(exact_div(&p, &x(1)).unwrap(), &LaurentPoly::one() + &(&x(2) * &inv(1)));
        let q = &x(1) + &x(3);
        assert!(matches!(exact_div(&p, &q), Err(Error::InexactDivision(_))));

        let s = &x(2).pow(2) + &x(3).pow(2);
        let num = &s.pow(2) + &(&x(1).pow(2) * &x(3).pow(2));
        let den = &x(1).pow(2) * &x(2);
        let want = &(&(&mono([-2, 3, 0], 1) + &mono([-2, 1, 2], 2)) + &mono([-2, -1, 4], 1))
            + &mono([0, -1, 2], 1);
        assert_eq!(exact_div(&num, &den).unwrap(), want);
    }

    #[test]
    fn division_by_non_monomial() {
        let a = &(&x(1) + &x(2)) * &inv(3);
        let b = &(&x(1) * &x(1)) - &(&x(2) * &x(3));
        let prod = &a * &b;
        assert_eq!(exact_div(&prod, &b).unwrap(), a);
        assert!(exact_div(&(&prod + &LaurentPoly::one()), &b).is_err());
        let two = LaurentPoly::constant(2);
        assert!(exact_div(&x(1), &two).is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(mono([-2, 3, 0], 1).to_string(), "x1^-2*x2^3");
        let p = &(&mono([0, 0, 0], 5) - &mono([1, 0, 0], 3)) + &x(2);
        assert_eq!(p.to_string(), "-3*x1 + x2 + 5");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!((-&x(3)).to_string(), "-x3");
    }

    #[test]
    fn denominators() {
        let p = &mono([-2, 1, 0], 1) + &mono([0, -1, 3], 4);
        assert_eq!(p.denominator(), Monomial3([2, 1, 0]));
        assert_eq!(p.min_exponents(), Monomial3([-2, -1, 0]));
    }
}
