//! The master-equation engine.
//!
//! A cluster `(x1, x2, x3)` solves the master equation when
//! `I(x) + ζ = 0`, with
//!
//! ```text
//! I(w,n,e) = w² + n² + e² + δ1·ne + δ2·ew + δ3·wn + σ1·w + σ2·n + σ3·e − τ·wne
//! ```
//!
//! and mutation at slot `i` replaces `x_i` by `F_i(x_j, x_k)/x_i` where `(i,j,k)`
//! is cyclic and `F_i = x_j² + x_k² + δ_i x_j x_k + σ_j x_j + σ_k x_k + ζ`.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::Scalar;

/// A cluster slot, 1-based in all user-facing text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X1,
    X2,
    X3,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X1, Var::X2, Var::X3];

    /// From a 1-based index.
    pub fn from_index(i: usize) -> Option<Var> {
        match i {
            1 => Some(Var::X1),
            2 => Some(Var::X2),
            3 => Some(Var::X3),
            _ => None,
        }
    }

    /// 0-based position in the cluster array.
    pub fn slot(self) -> usize {
        self as usize
    }

    /// 1-based index.
    pub fn index(self) -> usize {
        self.slot() + 1
    }

    /// The cyclic successors `(j, k)` of `i`.
    pub fn others(self) -> (Var, Var) {
        match self {
            Var::X1 => (Var::X2, Var::X3),
            Var::X2 => (Var::X3, Var::X1),
            Var::X3 => (Var::X1, Var::X2),
        }
    }

    pub fn next(self) -> Var {
        self.others().0
    }

    pub fn prev(self) -> Var {
        self.others().1
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Parameters `(δ, σ, ζ, τ)` of the master cubic.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterParams<T> {
    pub delta: [T; 3],
    pub sigma: [T; 3],
    pub zeta: T,
    pub tau: T,
}

impl<T: Scalar> MasterParams<T> {
    pub fn new(delta: [T; 3], sigma: [T; 3], zeta: T, tau: T) -> Self {
        MasterParams {
            delta,
            sigma,
            zeta,
            tau,
        }
    }

    /// `x_i' = (x_j² + x_k²)/x_i`, invariant `x² + y² + z² − 3xyz`.
    pub fn markov() -> Self {
        Self::new(zeros(), zeros(), T::zero(), T::from_i64(3))
    }

    /// δ = −2, σ = 0, τ = 0 and ζ = 0: the invariant is the discriminant of the
    /// induced form, the exchange polynomials are `(x_j − x_k)²`.
    pub fn conway() -> Self {
        Self::discriminant(T::zero())
    }

    /// The Conway specialization on the level set `I = Δ`: ζ = −Δ, so that
    /// mutation reads `x_i' = ((x_j − x_k)² − Δ)/x_i`.
    pub fn discriminant(disc: T) -> Self {
        let m2 = T::from_i64(-2);
        Self::new([m2.clone(), m2.clone(), m2], zeros(), -disc, T::zero())
    }

    /// The PVI monodromy cubic: τ = −1, σ_i = −θ_i, ζ = θ₄, δ = 0.
    pub fn pvi(theta: &[T; 4]) -> Self {
        Self::new(
            zeros(),
            [-theta[0].clone(), -theta[1].clone(), -theta[2].clone()],
            theta[3].clone(),
            T::from_i64(-1),
        )
    }

    /// δ = 0, σ = (σ, σ, 1), ζ = 0, τ = 0: symmetric only in the first two slots.
    pub fn genericity(sigma: T) -> Self {
        Self::new(zeros(), [sigma.clone(), sigma, T::one()], T::zero(), T::zero())
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> MasterParams<U> {
        MasterParams {
            delta: [f(&self.delta[0]), f(&self.delta[1]), f(&self.delta[2])],
            sigma: [f(&self.sigma[0]), f(&self.sigma[1]), f(&self.sigma[2])],
            zeta: f(&self.zeta),
            tau: f(&self.tau),
        }
    }
}

fn zeros<T: Scalar>() -> [T; 3] {
    [T::zero(), T::zero(), T::zero()]
}

/// An ordered triple; `w = x1`, `n = x2`, `e = x3`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cluster<T>(pub [T; 3]);

impl<T: Clone> Cluster<T> {
    pub fn new(x1: T, x2: T, x3: T) -> Self {
        Cluster([x1, x2, x3])
    }

    pub fn get(&self, v: Var) -> &T {
        &self.0[v.slot()]
    }

    pub fn with(&self, v: Var, value: T) -> Self {
        let mut c = self.clone();
        c.0[v.slot()] = value;
        c
    }

    pub fn w(&self) -> &T {
        &self.0[0]
    }

    pub fn n(&self) -> &T {
        &self.0[1]
    }

    pub fn e(&self) -> &T {
        &self.0[2]
    }
}

impl<T: fmt::Display> fmt::Display for Cluster<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

impl<T> From<[T; 3]> for Cluster<T> {
    fn from(a: [T; 3]) -> Self {
        Cluster(a)
    }
}

/// `F_i` as a polynomial in the two other slots.
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangePoly<T> {
    pub i: Var,
    pub delta_i: T,
    pub sigma_j: T,
    pub sigma_k: T,
    pub zeta: T,
}

impl<T: Scalar> ExchangePoly<T> {
    pub fn eval(&self, xj: &T, xk: &T) -> T {
        xj.clone() * xj.clone()
            + xk.clone() * xk.clone()
            + self.delta_i.clone() * xj.clone() * xk.clone()
            + self.sigma_j.clone() * xj.clone()
            + self.sigma_k.clone() * xk.clone()
            + self.zeta.clone()
    }
}

impl ExchangePoly<BigInt> {
    pub fn eval_laurent(&self, xj: &LaurentPoly, xk: &LaurentPoly) -> LaurentPoly {
        let c = |v: &BigInt| LaurentPoly::constant(v.clone());
        let mut f = &(xj * xj) + &(xk * xk);
        f = &f + &(&c(&self.delta_i) * &(xj * xk));
        f = &f + &(&c(&self.sigma_j) * xj);
        f = &f + &(&c(&self.sigma_k) * xk);
        &f + &c(&self.zeta)
    }

    /// `F_i` over the variables `x_j, x_k` of the identity seed.
    pub fn to_laurent(&self) -> LaurentPoly {
        let (j, k) = self.i.others();
        self.eval_laurent(&LaurentPoly::var(j.slot()), &LaurentPoly::var(k.slot()))
    }
}

pub fn exchange_poly<T: Scalar>(params: &MasterParams<T>, i: Var) -> ExchangePoly<T> {
    let (j, k) = i.others();
    ExchangePoly {
        i,
        delta_i: params.delta[i.slot()].clone(),
        sigma_j: params.sigma[j.slot()].clone(),
        sigma_k: params.sigma[k.slot()].clone(),
        zeta: params.zeta.clone(),
    }
}

/// `F_i` evaluated on the cluster.
pub fn exchange_value<T: Scalar>(params: &MasterParams<T>, c: &Cluster<T>, i: Var) -> T {
    let (j, k) = i.others();
    exchange_poly(params, i).eval(c.get(j), c.get(k))
}

/// `I(w,n,e)`; the master equation is `invariant + ζ = 0`.
pub fn invariant<T: Scalar>(p: &MasterParams<T>, c: &Cluster<T>) -> T {
    let [w, n, e] = c.0.clone();
    w.clone() * w.clone() + n.clone() * n.clone() + e.clone() * e.clone()
        + p.delta[0].clone() * n.clone() * e.clone()
        + p.delta[1].clone() * e.clone() * w.clone()
        + p.delta[2].clone() * w.clone() * n.clone()
        + p.sigma[0].clone() * w.clone()
        + p.sigma[1].clone() * n.clone()
        + p.sigma[2].clone() * e.clone()
        - p.tau.clone() * w * n * e
}

/// Left-minus-right of the master equation, `I + ζ`.
pub fn residual<T: Scalar>(p: &MasterParams<T>, c: &Cluster<T>) -> T {
    invariant(p, c) + p.zeta.clone()
}

/// The polynomial rule `x_i ↦ τ x_j x_k − x_i − δ_j x_k − δ_k x_j − σ_i`.
///
/// It is the other root of the master equation viewed as a quadratic in `x_i`,
/// so it preserves `I` on every cluster and agrees with [`mutate`] on solutions.
pub fn local_rule<T: Scalar>(p: &MasterParams<T>, c: &Cluster<T>, i: Var) -> Cluster<T> {
    let (j, k) = i.others();
    let (xi, xj, xk) = (c.get(i).clone(), c.get(j).clone(), c.get(k).clone());
    let v = p.tau.clone() * xj.clone() * xk.clone()
        - xi
        - p.delta[j.slot()].clone() * xk
        - p.delta[k.slot()].clone() * xj
        - p.sigma[i.slot()].clone();
    c.with(i, v)
}

/// The LP mutation `x_i ↦ F_i/x_i`.
pub fn mutate<T: Scalar>(p: &MasterParams<T>, c: &Cluster<T>, i: Var) -> Result<Cluster<T>> {
    let xi = c.get(i);
    if xi.is_zero() {
        return Err(Error::DivisionByZero(format!("mutation at slot {i} with x{i} = 0")));
    }
    Ok(c.with(i, exchange_value(p, c, i).try_div(xi)?))
}

/// An element of 𝔖₃ acting on positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Perm {
    Id,
    /// `(a,b,c) ↦ (b,a,c)`
    T12,
    /// `(a,b,c) ↦ (a,c,b)`
    T23,
    /// `(a,b,c) ↦ (c,b,a)`
    T13,
    /// `(a,b,c) ↦ (c,a,b)`
    C123,
    /// `(a,b,c) ↦ (b,c,a)`
    C132,
}

impl Perm {
    pub const ALL: [Perm; 6] = [Perm::Id, Perm::T12, Perm::T23, Perm::T13, Perm::C123, Perm::C132];

    pub fn apply<T: Clone>(self, a: &[T; 3]) -> [T; 3] {
        let [x, y, z] = a.clone();
        match self {
            Perm::Id => [x, y, z],
            Perm::T12 => [y, x, z],
            Perm::T23 => [x, z, y],
            Perm::T13 => [z, y, x],
            Perm::C123 => [z, x, y],
            Perm::C132 => [y, z, x],
        }
    }

    /// The transposition swapping two distinct slots.
    pub fn swap(a: Var, b: Var) -> Perm {
        match (a.min(b), a.max(b)) {
            (Var::X1, Var::X2) => Perm::T12,
            (Var::X2, Var::X3) => Perm::T23,
            (Var::X1, Var::X3) => Perm::T13,
            _ => Perm::Id,
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Perm::T12 | Perm::T23 | Perm::T13)
    }
}

pub fn permute<T: Clone>(c: &Cluster<T>, perm: Perm) -> Cluster<T> {
    Cluster(perm.apply(&c.0))
}

/// Three Laurent polynomials in the initial variables together with integral
/// parameters. Exchange polynomials are always re-derived from `params`.
#[derive(Debug, Clone, PartialEq)]
pub struct Seed {
    pub cluster: [LaurentPoly; 3],
    pub params: MasterParams<BigInt>,
}

impl Seed {
    /// The seed `(x1, x2, x3)`.
    pub fn identity(params: MasterParams<BigInt>) -> Self {
        Seed {
            cluster: [LaurentPoly::var(0), LaurentPoly::var(1), LaurentPoly::var(2)],
            params,
        }
    }

    pub fn entry(&self, v: Var) -> &LaurentPoly {
        &self.cluster[v.slot()]
    }

    /// Reorders the entries but not the parameters.
    pub fn permute(&self, perm: Perm) -> Seed {
        Seed {
            cluster: perm.apply(&self.cluster),
            params: self.params.clone(),
        }
    }

    /// Evaluates every entry at an initial cluster.
    pub fn eval<T: Scalar>(&self, at: &Cluster<T>) -> Result<Cluster<T>> {
        Ok(Cluster([
            self.cluster[0].eval(&at.0)?,
            self.cluster[1].eval(&at.0)?,
            self.cluster[2].eval(&at.0)?,
        ]))
    }
}

/// Mutates a seed; an [`Error::InexactDivision`] certifies a non-Laurent entry.
pub fn mutate_seed(seed: &Seed, i: Var) -> Result<Seed> {
    let (j, k) = i.others();
    let f = exchange_poly(&seed.params, i).eval_laurent(seed.entry(j), seed.entry(k));
    let xi = seed.entry(i);
    if xi.is_zero() {
        return Err(Error::DivisionByZero(format!("seed entry {i} is zero")));
    }
    let mut out = seed.clone();
    out.cluster[i.slot()] = f.exact_div(xi)?;
    Ok(out)
}

/// Checks the absorbing-monomial computation behind the Laurent property of
/// the exchange polynomials after mutating slot `i`.
///
/// With `x' = F_i/x_i`, `A = F_i|_{x_j=0}` and `B = F_i|_{x_k=0}`, substituting
/// `x_i = A/x'` into `F_j` gives `G_j = A·H_j` with
/// `H_j = 1 + σ_i/x' + δ_j x_k/x' + A/x'²`, and `M·H_j` with `M = x'²` must be
/// `F_j` evaluated on the mutated cluster; likewise for `k` with `B`.
/// Exact for exact scalars, relative tolerance `tol` for complex floats.
pub fn verify_exchange_invariance<T: Scalar>(
    p: &MasterParams<T>,
    c: &Cluster<T>,
    i: Var,
    tol: f64,
) -> Result<bool> {
    let mutated = mutate(p, c, i)?;
    let xp = mutated.get(i).clone();
    if xp.is_zero() {
        return Err(Error::DivisionByZero(format!("mutated slot {i} vanishes")));
    }
    let (j, k) = i.others();
    let fi = exchange_poly(p, i);
    let m = xp.clone() * xp.clone();
    let sigma_i = p.sigma[i.slot()].clone();

    // (neighbor n whose exchange polynomial is checked, the slot that stays)
    let mut ok = true;
    for (nb, stay) in [(j, k), (k, j)] {
        // F_i with the neighbor's variable set to zero
        let a = if nb == j {
            fi.eval(&T::zero(), c.get(k))
        } else {
            fi.eval(c.get(j), &T::zero())
        };
        let xs = c.get(stay).clone();
        let y = a.try_div(&xp)?;
        let f_nb = exchange_poly(p, nb);
        // F_nb takes its own cyclic pair; slot i is one of them.
        let (u, v) = nb.others();
        let arg = |slot: Var, at_i: &T| -> T {
            if slot == i {
                at_i.clone()
            } else {
                xs.clone()
            }
        };
        let g = f_nb.eval(&arg(u, &y), &arg(v, &y));
        let h = T::one()
            + sigma_i.clone().try_div(&xp)?
            + (p.delta[nb.slot()].clone() * xs.clone()).try_div(&xp)?
            + a.clone().try_div(&m)?;
        let f_after = f_nb.eval(mutated.get(u), mutated.get(v));
        ok &= g.close(&(a * h.clone()), tol) && (m.clone() * h).close(&f_after, tol);
    }
    Ok(ok)
}

impl serde::Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.index() as u64)
    }
}
