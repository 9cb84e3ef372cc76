//! Binary integral quadratic forms as clusters of the discriminant equation:
//! roots, the geodesic triangle walk, cluster reduction, reduced-vertex
//! classification and (strict) equivalence.
//!
//! A cluster `(w, n, e)` induces `q(x, y) = w x² + δ xy + e y²` with
//! `δ = n − w − e`, so that `q(1,0) = w`, `q(1,1) = n`, `q(0,1) = e`.

use std::collections::{BTreeSet, BinaryHeap, VecDeque};
use std::cmp::{Ordering, Reverse};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_sqrt, Farey, Surd};
use crate::master::{self, Cluster, MasterParams, Var};
use crate::snake::{Letter, Word};

/// Machine integers for cluster entries.
pub type Int = i128;

/// A form stored by its cluster of values at `(1,0)`, `(1,1)`, `(0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub cluster: [Int; 3],
}

impl QuadForm {
    pub fn from_cluster(w: Int, n: Int, e: Int) -> Self {
        QuadForm { cluster: [w, n, e] }
    }

    /// `a x² + b xy + c y²`.
    pub fn from_coefficients(a: Int, b: Int, c: Int) -> Self {
        QuadForm {
            cluster: [a, a + b + c, c],
        }
    }

    /// `(a, b, c)` with `b = δ`.
    pub fn coefficients(&self) -> [Int; 3] {
        let [w, n, e] = self.cluster;
        [w, n - w - e, e]
    }

    pub fn delta(&self) -> Int {
        self.coefficients()[1]
    }

    pub fn discriminant(&self) -> Int {
        discriminant(&self.cluster)
    }

    pub fn eval(&self, x: Int, y: Int) -> Int {
        let [a, b, c] = self.coefficients();
        a * x * x + b * x * y + c * y * y
    }

    /// The Conway specialization on this form's level set.
    pub fn params(&self) -> MasterParams<Int> {
        MasterParams::discriminant(self.discriminant())
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [w, n, e] = self.cluster;
        write!(f, "({w},{n},{e})")
    }
}

/// `Δ = (n − w − e)² − 4we`.
pub fn discriminant(c: &[Int; 3]) -> Int {
    let [w, n, e] = *c;
    let d = n - w - e;
    d * d - 4 * w * e
}

fn isqrt(n: Int) -> Option<Int> {
    exact_sqrt(&BigInt::from(n)).and_then(|s| s.to_i128())
}

fn sgn(x: Int) -> i8 {
    x.signum() as i8
}

/// The root of `q(z, 1) = 0` in the closed upper half-plane, or ∞.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Root {
    Infinity,
    Finite(Surd),
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Infinity => f.write_str("1/0"),
            Root::Finite(s) => write!(f, "{s}"),
        }
    }
}

/// `(√Δ − δ)/(2a)` for `a ≠ 0`, taking the root with nonnegative imaginary part
/// when `Δ < 0`; `−c/δ` when `a = 0 < δ`; ∞ when `a = 0 ≥ δ`.
pub fn root(q: &QuadForm) -> Root {
    let [a, delta, c] = q.coefficients();
    let disc = q.discriminant();
    if a == 0 {
        return if delta > 0 {
            Root::Finite(Surd::new(-c, 0, delta, 0))
        } else {
            Root::Infinity
        };
    }
    if disc < 0 {
        // conjugate when a < 0 keeps Im z ≥ 0
        let s = a.signum();
        return Root::Finite(Surd::new(-delta * s, 1, 2 * a.abs(), disc));
    }
    Root::Finite(Surd::new(-delta, 1, 2 * a, disc))
}

/// A letter of a word: the optional leading `S` or a body letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    S,
    Body(Letter),
}

/// Integer arithmetic for the walk, checked for machine integers.
trait WalkNum: Clone + Ord + fmt::Debug {
    fn of(v: i64) -> Self;
    fn wide(v: i128) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn from_big(v: &BigInt) -> Option<Self>;
}

impl WalkNum for i128 {
    fn of(v: i64) -> Self {
        v as i128
    }
    fn wide(v: i128) -> Self {
        v
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
}

impl WalkNum for BigInt {
    fn of(v: i64) -> Self {
        BigInt::from(v)
    }
    fn wide(v: i128) -> Self {
        BigInt::from(v)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Start,
    Running,
    Done,
}

/// Overflow of machine arithmetic; the caller switches to big integers.
#[derive(Debug)]
struct Overflow;

/// The Stern–Brocot descent toward a root, yielding dualized letters.
#[derive(Debug, Clone)]
struct Walker<N> {
    // z = (p + q√d)/r, r > 0
    p: N,
    q: N,
    r: N,
    d: N,
    complex: bool,
    a: (N, N),
    b: (N, N),
    phase: Phase,
    has_s: bool,
    pos: usize,
    endpoint: Option<(N, N)>,
}

impl<N: WalkNum> Walker<N> {
    fn new(z: &Root) -> Option<Self> {
        let zero = N::of(0);
        let mut w = Walker {
            p: zero.clone(),
            q: zero.clone(),
            r: N::of(1),
            d: zero.clone(),
            complex: false,
            a: (zero.clone(), N::of(1)),
            b: (N::of(1), zero.clone()),
            phase: Phase::Start,
            has_s: false,
            pos: 0,
            endpoint: None,
        };
        match z {
            Root::Infinity => {
                w.phase = Phase::Done;
                w.endpoint = Some((N::of(1), zero));
            }
            Root::Finite(s) => {
                w.p = N::from_big(s.p())?;
                w.q = N::from_big(s.q())?;
                w.r = N::from_big(s.r())?;
                w.d = N::from_big(s.d())?;
                w.complex = !s.is_real();
                if s.is_rational() && s.p().is_zero() {
                    w.phase = Phase::Done;
                    w.endpoint = Some((zero, N::of(1)));
                }
            }
        }
        Some(w)
    }

    /// The walker for a form's root without building a normalized surd.
    /// `(p + q√Δ)/r` need not be reduced; the walk only uses signs.
    fn for_form(f: &QuadForm) -> Option<Self> {
        let [a, delta, _] = f.coefficients();
        if a == 0 {
            return None;
        }
        let disc = f.discriminant();
        let two_a = a.checked_mul(2)?;
        let (p, q, r) = if disc < 0 {
            (-delta * a.signum(), 1, two_a.abs())
        } else if a > 0 {
            (-delta, 1, two_a)
        } else {
            (delta, -1, -two_a)
        };
        let mut w = Walker {
            p: N::wide(p),
            q: N::wide(q),
            r: N::wide(r),
            d: N::wide(disc),
            complex: disc < 0,
            a: (N::of(0), N::of(1)),
            b: (N::of(1), N::of(0)),
            phase: Phase::Start,
            has_s: false,
            pos: 0,
            endpoint: None,
        };
        if !w.complex && w.sign_re().ok()? == Ordering::Equal {
            w.phase = Phase::Done;
            w.endpoint = Some((N::of(0), N::of(1)));
        }
        Some(w)
    }

    fn widen(&self) -> Walker<BigInt> {
        let big = |(x, y): &(N, N)| (x.to_big(), y.to_big());
        Walker {
            p: self.p.to_big(),
            q: self.q.to_big(),
            r: self.r.to_big(),
            d: self.d.to_big(),
            complex: self.complex,
            a: big(&self.a),
            b: big(&self.b),
            phase: self.phase,
            has_s: self.has_s,
            pos: self.pos,
            endpoint: self.endpoint.as_ref().map(big),
        }
    }

    /// Sign of `u + k√d` for real points.
    fn sign_plus_root(&self, u: &N, k: &N) -> std::result::Result<Ordering, Overflow> {
        let zero = N::of(0);
        let su = u.cmp(&zero);
        let sk = if *k == zero || self.d == zero {
            Ordering::Equal
        } else {
            k.cmp(&zero)
        };
        Ok(match (su, sk) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            _ => {
                let lhs = u.mul(u).ok_or(Overflow)?;
                let rhs = k.mul(k).and_then(|t| t.mul(&self.d)).ok_or(Overflow)?;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => su,
                    Ordering::Less => sk,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        })
    }

    fn sign_re(&self) -> std::result::Result<Ordering, Overflow> {
        if self.complex {
            Ok(self.p.cmp(&N::of(0)))
        } else {
            self.sign_plus_root(&self.p, &self.q)
        }
    }

    /// Sign of `z − x/y` (real part for complex points), `y > 0`.
    fn cmp_frac(&self, x: &(N, N)) -> std::result::Result<Ordering, Overflow> {
        let u = self.p.mul(&x.1).and_then(|t| x.0.mul(&self.r).and_then(|s| t.sub(&s)));
        let u = u.ok_or(Overflow)?;
        if self.complex {
            return Ok(u.cmp(&N::of(0)));
        }
        let k = self.q.mul(&x.1).ok_or(Overflow)?;
        self.sign_plus_root(&u, &k)
    }

    fn inside(&self, a: &(N, N), b: &(N, N)) -> std::result::Result<bool, Overflow> {
        let zero = N::of(0);
        if self.cmp_frac(a)? != Ordering::Greater {
            return Ok(false);
        }
        if b.1 == zero {
            return Ok(true);
        }
        if !self.complex {
            return Ok(self.cmp_frac(b)? == Ordering::Less);
        }
        // (x − a)(x − b) + y² < 0, scaled by r²·a.1·b.1
        let ua = self.p.mul(&a.1).and_then(|t| a.0.mul(&self.r).and_then(|s| t.sub(&s)));
        let ub = self.p.mul(&b.1).and_then(|t| b.0.mul(&self.r).and_then(|s| t.sub(&s)));
        let im = self
            .q
            .mul(&self.q)
            .and_then(|t| t.mul(&zero.sub(&self.d)?))
            .and_then(|t| t.mul(&a.1))
            .and_then(|t| t.mul(&b.1));
        let total = ua
            .zip(ub)
            .and_then(|(x, y)| x.mul(&y))
            .zip(im)
            .and_then(|(x, y)| x.add(&y))
            .ok_or(Overflow)?;
        Ok(total < zero)
    }

    fn step(&mut self) -> std::result::Result<Option<Symbol>, Overflow> {
        if self.phase == Phase::Start {
            self.phase = Phase::Running;
            if self.sign_re()? == Ordering::Less {
                self.p = N::of(0).sub(&self.p).ok_or(Overflow)?;
                if !self.complex {
                    self.q = N::of(0).sub(&self.q).ok_or(Overflow)?;
                }
                self.has_s = true;
                return Ok(Some(Symbol::S));
            }
        }
        if self.phase == Phase::Done {
            return Ok(None);
        }
        let m = (
            self.a.0.add(&self.b.0).ok_or(Overflow)?,
            self.a.1.add(&self.b.1).ok_or(Overflow)?,
        );
        // an irrational real point never equals a mediant
        if !self.complex && self.cmp_frac(&m)? == Ordering::Equal {
            self.finish(m)?;
            return Ok(None);
        }
        let raw = if self.inside(&self.a, &m)? {
            self.b = m;
            Letter::R
        } else if self.inside(&m, &self.b)? {
            self.a = m;
            Letter::L
        } else {
            self.finish(m)?;
            return Ok(None);
        };
        let letter = if self.pos % 2 == 0 { raw.flip() } else { raw };
        self.pos += 1;
        Ok(Some(Symbol::Body(letter)))
    }

    fn finish(&mut self, m: (N, N)) -> std::result::Result<(), Overflow> {
        self.phase = Phase::Done;
        let m = if self.has_s {
            (N::of(0).sub(&m.0).ok_or(Overflow)?, m.1)
        } else {
            m
        };
        self.endpoint = Some(m);
        Ok(())
    }

    /// Current mediant (signed), used when the walk is cut short.
    fn current(&self) -> (BigInt, BigInt) {
        let n = self.a.0.to_big() + self.b.0.to_big();
        let d = self.a.1.to_big() + self.b.1.to_big();
        if self.has_s {
            (-n, d)
        } else {
            (n, d)
        }
    }
}

/// Machine-integer walk that widens to big integers on overflow.
#[derive(Debug, Clone)]
pub struct CuttingSequence {
    small: Option<Walker<i128>>,
    big: Option<Walker<BigInt>>,
}

impl CuttingSequence {
    /// The walk toward the root of a form.
    pub fn for_form(q: &QuadForm) -> Self {
        match Walker::<i128>::for_form(q) {
            Some(w) => CuttingSequence {
                small: Some(w),
                big: None,
            },
            None => Self::new(&root(q)),
        }
    }

    pub fn new(z: &Root) -> Self {
        match Walker::<i128>::new(z) {
            Some(w) => CuttingSequence {
                small: Some(w),
                big: None,
            },
            None => CuttingSequence {
                small: None,
                big: Walker::<BigInt>::new(z),
            },
        }
    }

    /// The endpoint once the walk has stopped by itself.
    pub fn endpoint(&self) -> Option<Farey> {
        let e = match (&self.small, &self.big) {
            (Some(w), _) => w.endpoint.as_ref().map(|(x, y)| (x.to_big(), y.to_big())),
            (None, Some(w)) => w.endpoint.clone(),
            _ => None,
        };
        e.map(|(x, y)| Farey::new(x, y))
    }

    fn current(&self) -> Farey {
        let (n, d) = match (&self.small, &self.big) {
            (Some(w), _) => w.current(),
            (None, Some(w)) => w.current(),
            _ => unreachable!("walker state"),
        };
        Farey::new(n, d)
    }
}

impl Iterator for CuttingSequence {
    type Item = Symbol;

    fn next(&mut self) -> Option<Symbol> {
        if let Some(w) = &mut self.small {
            let snapshot = w.clone();
            match w.step() {
                Ok(s) => return s,
                Err(Overflow) => {
                    self.big = Some(snapshot.widen());
                    self.small = None;
                }
            }
        }
        let w = self.big.as_mut().expect("walker state");
        w.step().expect("big integers do not overflow")
    }
}

/// Result of walking toward a root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareyWalk {
    pub word: Word,
    pub endpoint: Farey,
    /// False when `max_steps` body letters were emitted before the walk stopped.
    pub terminated: bool,
}

/// Walks from the base triangle `{0, 1, ∞}` toward `z`, recording the word.
pub fn farey_walk(z: &Root, max_steps: usize) -> FareyWalk {
    let mut seq = CuttingSequence::new(z);
    let mut word = Word::default();
    loop {
        if word.body.len() >= max_steps {
            // one more probe tells whether the walk would have stopped here
            let mut probe = seq.clone();
            return match probe.next() {
                None => FareyWalk {
                    word,
                    endpoint: probe.endpoint().expect("stopped walk has an endpoint"),
                    terminated: true,
                },
                Some(_) => FareyWalk {
                    word,
                    endpoint: seq.current(),
                    terminated: false,
                },
            };
        }
        match seq.next() {
            Some(Symbol::S) => word.has_s = true,
            Some(Symbol::Body(l)) => word.body.push(l),
            None => {
                return FareyWalk {
                    word,
                    endpoint: seq.endpoint().expect("stopped walk has an endpoint"),
                    terminated: true,
                }
            }
        }
    }
}

/// The mutation index attached to each letter: start at 2, `S` repeats,
/// `L` steps back and `R` steps forward cyclically.
#[derive(Debug, Clone, Copy)]
pub struct MutationCursor(Var);

impl Default for MutationCursor {
    fn default() -> Self {
        MutationCursor(Var::X2)
    }
}

impl MutationCursor {
    pub fn step(&mut self, s: Symbol) -> Var {
        self.0 = match s {
            Symbol::S => self.0,
            Symbol::Body(Letter::L) => self.0.prev(),
            Symbol::Body(Letter::R) => self.0.next(),
        };
        self.0
    }
}

pub fn word_to_mutations(word: &Word) -> Vec<Var> {
    let mut cur = MutationCursor::default();
    let mut out = Vec::new();
    if word.has_s {
        out.push(cur.step(Symbol::S));
    }
    for l in &word.body {
        out.push(cur.step(Symbol::Body(*l)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Well,
    Lake,
    Mouth(Side),
    /// A river of length zero: two zero entries.
    Weir(Side),
    BendCandidate,
    Ordinary,
}

fn max_abs(c: &[Int; 3]) -> Int {
    c.iter().map(|x| x.abs()).max().unwrap()
}

/// Rotation of `c` putting its (first) zero in the middle.
fn zero_in_middle(c: &[Int; 3]) -> Option<[Int; 3]> {
    (0..3).map(|r| rotate(c, r)).find(|t| t[1] == 0)
}

fn rotate(c: &[Int; 3], r: usize) -> [Int; 3] {
    [c[r % 3], c[(r + 1) % 3], c[(r + 2) % 3]]
}

fn reversed(c: &[Int; 3]) -> [Int; 3] {
    [c[2], c[1], c[0]]
}

/// Mouth side read off the cyclic order: `(−, 0, +)` is left, `(+, 0, −)`
/// right. A weir is left when its nonzero entry is positive.
fn mouth_side(c: &[Int; 3]) -> Option<Side> {
    let zeros = c.iter().filter(|x| **x == 0).count();
    if zeros == 2 {
        let k = c.iter().copied().find(|x| *x != 0).unwrap();
        return Some(if k > 0 { Side::Left } else { Side::Right });
    }
    let t = zero_in_middle(c)?;
    match (sgn(t[0]), sgn(t[2])) {
        (-1, 1) => Some(Side::Left),
        (1, -1) => Some(Side::Right),
        _ => None,
    }
}

/// Classifies a cluster of the discriminant equation for `Δ`, reading the
/// cyclic order as given (no orientation correction).
pub fn classify_vertex(c: &[Int; 3], disc: Int) -> Result<VertexKind> {
    if *c == [0, 0, 0] || discriminant(c) != disc {
        return Err(Error::InconsistentDiscriminant(format!(
            "({},{},{}) is not a solution for discriminant {disc}",
            c[0], c[1], c[2]
        )));
    }
    let params = MasterParams::discriminant(disc);
    let has_zero = c.contains(&0);
    Ok(if disc < 0 {
        let m = max_abs(c);
        let well = Var::ALL
            .iter()
            .all(|&v| max_abs(&master::local_rule(&params, &Cluster(*c), v).0) >= m);
        if well {
            VertexKind::Well
        } else {
            VertexKind::Ordinary
        }
    } else if disc == 0 {
        if has_zero {
            VertexKind::Lake
        } else {
            VertexKind::Ordinary
        }
    } else if isqrt(disc).is_some() {
        let zeros = c.iter().filter(|x| **x == 0).count();
        match (zeros, mouth_side(c)) {
            (2, Some(s)) => VertexKind::Weir(s),
            (1, Some(s)) => VertexKind::Mouth(s),
            _ => VertexKind::Ordinary,
        }
    } else if c.iter().any(|x| *x < 0) && c.iter().any(|x| *x > 0) {
        VertexKind::BendCandidate
    } else {
        VertexKind::Ordinary
    })
}

/// A reduced cluster together with the parity of the number of
/// orientation-reversing moves that led to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ReducedVertex {
    pub cluster: [Int; 3],
    pub odd: bool,
}

impl ReducedVertex {
    /// The cluster read in the orientation of the start cluster.
    pub fn oriented(&self) -> [Int; 3] {
        if self.odd {
            reversed(&self.cluster)
        } else {
            self.cluster
        }
    }

    pub fn sorted(&self) -> [Int; 3] {
        let mut s = self.cluster;
        s.sort();
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Bend {
    pub before: [Int; 3],
    pub after: ReducedVertex,
    pub slot: Var,
}

impl Bend {
    /// The unordered pair of vertices joined by the bend's edge.
    pub fn vertex_pair(&self) -> BTreeSet<[Int; 3]> {
        let mut a = self.before;
        a.sort();
        [a, self.after.sorted()].into_iter().collect()
    }

    /// The edge read as `(−, z, +)`: an endpoint's oriented cluster rotated so
    /// that the mutated entry `z` is in the middle. The river edge supplies
    /// the two ends, and exactly one endpoint reads negative first, so the
    /// result does not depend on the direction the river was followed.
    pub fn canonical(&self) -> [Int; 3] {
        let t = self.after.oriented();
        let i = self.slot.slot();
        let i = if self.after.odd { 2 - i } else { i };
        let t = rotate(&t, (i + 2) % 3);
        if t[0] < 0 {
            t
        } else {
            [t[2], self.before[self.slot.slot()], t[0]]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "data", rename_all = "lowercase")]
pub enum ReducedTuple {
    Well(ReducedVertex),
    Lake(ReducedVertex),
    Mouths { left: ReducedVertex, right: ReducedVertex },
    Bends(Vec<Bend>),
}

fn canonical_well(v: &ReducedVertex) -> [Int; 3] {
    let t = v.oriented();
    let rot_max = |t: &[Int; 3]| -> [Int; 3] {
        let m = max_abs(t);
        (0..3)
            .map(|r| rotate(t, r))
            .filter(|x| x[1].abs() == m)
            .min()
            .unwrap()
    };
    let mut a = t.map(|x| x.abs());
    a.sort();
    let repeated = t[0] == t[1] || t[1] == t[2] || t[0] == t[2];
    if repeated || a[2] == a[0] + a[1] {
        // ambiguous forms: both orientations are equivalent
        rot_max(&t).min(rot_max(&reversed(&t)))
    } else {
        rot_max(&t)
    }
}

fn canonical_mouth(v: &ReducedVertex) -> [Int; 3] {
    let zeros = v.cluster.iter().filter(|x| **x == 0).count();
    if zeros >= 2 {
        let k = v.cluster.iter().copied().find(|x| *x != 0).unwrap_or(0);
        return [0, k, 0];
    }
    zero_in_middle(&v.oriented()).expect("mouths contain zero")
}

impl ReducedTuple {
    pub fn kind(&self) -> &'static str {
        match self {
            ReducedTuple::Well(_) => "well",
            ReducedTuple::Lake(_) => "lake",
            ReducedTuple::Mouths { .. } => "mouths",
            ReducedTuple::Bends(_) => "bends",
        }
    }

    /// The PGL₂(ℤ) class data: the reduced vertices as unordered triples.
    pub fn class_key(&self) -> ClassKey {
        match self {
            ReducedTuple::Well(v) => ClassKey::Well(v.sorted()),
            ReducedTuple::Lake(v) => ClassKey::Lake(v.sorted()),
            ReducedTuple::Mouths { left, right } => {
                let (a, b) = (left.sorted(), right.sorted());
                ClassKey::Mouths(a.min(b), a.max(b))
            }
            ReducedTuple::Bends(bs) => {
                ClassKey::Bends(bs.iter().map(|b| b.vertex_pair()).collect())
            }
        }
    }
}

/// Comparable data for PGL₂(ℤ)-equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKey {
    Well([Int; 3]),
    Lake([Int; 3]),
    Mouths([Int; 3], [Int; 3]),
    Bends(BTreeSet<BTreeSet<[Int; 3]>>),
}

/// Canonical reduced clusters: the well with its maximum in the middle (read
/// in the orientation of the start), the lake `(m, 0, m)`, the mouths
/// `(−, 0, +)` then `(+, 0, −)`, and one cluster per bend.
pub fn canonical_reduced_cluster(t: &ReducedTuple) -> Vec<[Int; 3]> {
    match t {
        ReducedTuple::Well(v) => vec![canonical_well(v)],
        ReducedTuple::Lake(v) => {
            let m = v.cluster.iter().copied().find(|x| *x != 0).unwrap_or(0);
            vec![[m, 0, m]]
        }
        ReducedTuple::Mouths { left, right } => {
            vec![canonical_mouth(left), canonical_mouth(right)]
        }
        ReducedTuple::Bends(bs) => {
            let set: BTreeSet<[Int; 3]> = bs.iter().map(|b| b.canonical()).collect();
            set.into_iter().collect()
        }
    }
}

/// One move of a reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Step {
    pub slot: Var,
    /// True when the polynomial rule replaced the (undefined) rational mutation.
    pub hop: bool,
    pub from: [Int; 3],
    pub to: [Int; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionLog {
    /// The letters consumed from the walk.
    pub word: Word,
    /// False when the reduction stopped before the walk did (lakes, rivers).
    pub word_complete: bool,
    pub steps: Vec<Step>,
}

impl ReductionLog {
    pub fn mutations(&self) -> Vec<Var> {
        self.steps.iter().map(|s| s.slot).collect()
    }

    /// Start cluster followed by the cluster after each step.
    pub fn clusters(&self) -> Vec<[Int; 3]> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        if let Some(s) = self.steps.first() {
            out.push(s.from);
        }
        out.extend(self.steps.iter().map(|s| s.to));
        out
    }

    /// Step indices that used the polynomial rule.
    pub fn hops(&self) -> Vec<usize> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, s)| s.hop)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Upper bound on walk letters and river steps in [`reduce`].
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

struct Reducer {
    params: MasterParams<Int>,
    c: [Int; 3],
    parity: bool,
    steps: Vec<Step>,
}

impl Reducer {
    fn mutate(&mut self, v: Var) {
        let next = master::mutate(&self.params, &Cluster(self.c), v)
            .expect("mutation at a nonzero entry of a solution is integral")
            .0;
        self.push(v, false, next);
    }

    fn hop(&mut self, v: Var) {
        let next = master::local_rule(&self.params, &Cluster(self.c), v).0;
        self.push(v, true, next);
    }

    fn push(&mut self, slot: Var, hop: bool, to: [Int; 3]) {
        self.steps.push(Step {
            slot,
            hop,
            from: self.c,
            to,
        });
        self.c = to;
        self.parity = !self.parity;
    }

    fn vertex(&self) -> ReducedVertex {
        ReducedVertex {
            cluster: self.c,
            odd: self.parity,
        }
    }

    /// Along a lakeshore (one zero entry) mutate the larger of two same-sign
    /// entries until they differ in sign: that vertex is a mouth.
    fn shore_descend(&mut self) {
        loop {
            let zeros: Vec<usize> = (0..3).filter(|&k| self.c[k] == 0).collect();
            if zeros.len() != 1 {
                return;
            }
            let o: Vec<usize> = (0..3).filter(|&k| k != zeros[0]).collect();
            let (x, y) = (self.c[o[0]], self.c[o[1]]);
            if sgn(x) != sgn(y) {
                return;
            }
            let k = if x.abs() > y.abs() { o[0] } else { o[1] };
            self.mutate(Var::ALL[k]);
        }
    }

    /// From one mouth, cross the lake by the polynomial rule and follow the
    /// river to the other mouth.
    fn cross_river(&mut self) {
        let zeros: Vec<usize> = (0..3).filter(|&k| self.c[k] == 0).collect();
        if zeros.len() == 2 {
            let k = (0..3).find(|&k| self.c[k] != 0).unwrap();
            self.mutate(Var::ALL[k]);
            return;
        }
        let z = zeros[0];
        self.hop(Var::ALL[z]);
        let mut last = z;
        while !self.c.contains(&0) {
            let next = river_successor(&self.c, last);
            self.mutate(Var::ALL[next]);
            last = next;
        }
    }
}

/// Having just mutated slot `last` on a river, the next slot to mutate keeps a
/// pair of opposite-sign entries (the river edge) fixed.
fn river_successor(c: &[Int; 3], last: usize) -> usize {
    let o: Vec<usize> = (0..3).filter(|&k| k != last).collect();
    let mut next = o[1];
    for &k in &o {
        if sgn(c[k]) != sgn(c[last]) {
            next = if k == o[0] { o[1] } else { o[0] };
        }
    }
    next
}

/// The walk's symbols turned into mutation slots, recording the word.
struct WordFeed {
    seq: CuttingSequence,
    cursor: MutationCursor,
    word: Word,
    consumed: usize,
    max_steps: usize,
    exhausted: bool,
}

impl WordFeed {
    fn new(q: &QuadForm, max_steps: usize) -> Self {
        WordFeed {
            seq: CuttingSequence::for_form(q),
            cursor: MutationCursor::default(),
            word: Word::default(),
            consumed: 0,
            max_steps,
            exhausted: false,
        }
    }

    fn next(&mut self) -> Option<Var> {
        if self.exhausted || self.consumed >= self.max_steps {
            return None;
        }
        let Some(s) = self.seq.next() else {
            self.exhausted = true;
            return None;
        };
        self.consumed += 1;
        match s {
            Symbol::S => self.word.has_s = true,
            Symbol::Body(l) => self.word.body.push(l),
        }
        Some(self.cursor.step(s))
    }

    fn log(&mut self, steps: Vec<Step>) -> ReductionLog {
        if !self.exhausted && self.consumed < self.max_steps {
            let mut probe = self.seq.clone();
            self.exhausted = probe.next().is_none();
        }
        ReductionLog {
            word: self.word.clone(),
            word_complete: self.exhausted,
            steps,
        }
    }
}

/// Reduces a form by mutations read off the word of its root.
pub fn reduce(q: &QuadForm) -> Result<(ReducedTuple, ReductionLog)> {
    reduce_with_limit(q, DEFAULT_MAX_STEPS)
}

pub fn reduce_with_limit(q: &QuadForm, max_steps: usize) -> Result<(ReducedTuple, ReductionLog)> {
    if q.cluster == [0, 0, 0] {
        return Err(Error::InconsistentDiscriminant(
            "the zero cluster carries no form".into(),
        ));
    }
    let disc = q.discriminant();
    let mut red = Reducer {
        params: q.params(),
        c: q.cluster,
        parity: false,
        steps: Vec::new(),
    };
    let mut feed = WordFeed::new(q, max_steps);

    if disc < 0 {
        while let Some(v) = feed.next() {
            red.mutate(v);
        }
        let log = feed.log(std::mem::take(&mut red.steps));
        return Ok((ReducedTuple::Well(red.vertex()), log));
    }

    if disc == 0 {
        while !red.c.contains(&0) {
            match feed.next() {
                Some(v) => red.mutate(v),
                None => break,
            }
        }
        // the walk always meets the lake; descend greedily if it did not
        while !red.c.contains(&0) {
            let m = max_abs(&red.c);
            let v = Var::ALL
                .into_iter()
                .find(|&v| max_abs(&master::local_rule(&red.params, &Cluster(red.c), v).0) < m)
                .expect("a lake is reachable by descent");
            red.hop(v);
        }
        let log = feed.log(std::mem::take(&mut red.steps));
        return Ok((ReducedTuple::Lake(red.vertex()), log));
    }

    if isqrt(disc).is_some() {
        let mut blocked: Option<ReducedVertex> = None;
        while let Some(v) = feed.next() {
            if red.c[v.slot()] == 0 {
                blocked.get_or_insert(red.vertex());
                red.hop(v);
            } else {
                red.mutate(v);
            }
        }
        red.shore_descend();
        let end = red.vertex();
        let other = match blocked {
            Some(b) => {
                let mut side = Reducer {
                    params: red.params.clone(),
                    c: b.cluster,
                    parity: b.odd,
                    steps: Vec::new(),
                };
                side.shore_descend();
                side.vertex()
            }
            None => {
                red.cross_river();
                red.vertex()
            }
        };
        let s_end = mouth_side(&end.oriented()).expect("reduction ends at a mouth");
        let s_other = mouth_side(&other.oriented()).expect("reduction ends at a mouth");
        assert_ne!(s_end, s_other, "the two mouths lie on opposite sides");
        let (left, right) = if s_end == Side::Left {
            (end, other)
        } else {
            (other, end)
        };
        let log = feed.log(std::mem::take(&mut red.steps));
        return Ok((ReducedTuple::Mouths { left, right }, log));
    }

    // Δ > 0 nonsquare: follow the word until the river is reached, then the river
    let mut last = None;
    while let Some(v) = feed.next() {
        red.mutate(v);
        let o: Vec<usize> = (0..3).filter(|&k| k != v.slot()).collect();
        last = Some(v.slot());
        if sgn(red.c[o[0]]) * sgn(red.c[o[1]]) < 0 {
            break;
        }
    }
    let mut last = last.ok_or_else(|| {
        Error::InconsistentDiscriminant("the walk did not reach the river".into())
    })?;
    let mut seen: HashMap<([Int; 3], usize, bool), usize> = HashMap::default();
    let mut river: Vec<usize> = Vec::new();
    loop {
        let next = river_successor(&red.c, last);
        let key = (red.c, next, red.parity);
        if let Some(&start) = seen.get(&key) {
            let bends = river[start..]
                .iter()
                .map(|&k| (k, red.steps[k]))
                .filter(|(_, s)| sgn(s.from[s.slot.slot()]) != sgn(s.to[s.slot.slot()]))
                .map(|(k, s)| Bend {
                    before: s.from,
                    after: ReducedVertex {
                        cluster: s.to,
                        // every step reverses orientation
                        odd: k % 2 == 0,
                    },
                    slot: s.slot,
                })
                .collect();
            let log = feed.log(std::mem::take(&mut red.steps));
            return Ok((ReducedTuple::Bends(bends), log));
        }
        if red.steps.len() > max_steps {
            return Err(Error::InconsistentDiscriminant(format!(
                "river period exceeds {max_steps} steps"
            )));
        }
        seen.insert(key, river.len());
        river.push(red.steps.len());
        red.mutate(Var::ALL[next]);
        last = next;
    }
}


fn local(params: &MasterParams<Int>, c: &[Int; 3], k: usize) -> [Int; 3] {
    master::local_rule(params, &Cluster(*c), Var::ALL[k]).0
}

/// Independent reduction by search over the polynomial rule: greedy descent
/// to a minimum, then a best-first search for mouths or a breadth-first search
/// for the river. Does not consult the word.
pub fn oracle_reduce(q: &QuadForm) -> Result<ReducedTuple> {
    if q.cluster == [0, 0, 0] {
        return Err(Error::InconsistentDiscriminant(
            "the zero cluster carries no form".into(),
        ));
    }
    let disc = q.discriminant();
    let params = q.params();
    let (mut c, mut odd) = (q.cluster, false);
    loop {
        let m = max_abs(&c);
        let best = (0..3)
            .map(|k| local(&params, &c, k))
            .filter(|y| max_abs(y) < m)
            .min_by_key(max_abs);
        match best {
            Some(y) => {
                c = y;
                odd = !odd;
            }
            None => break,
        }
    }
    let here = ReducedVertex { cluster: c, odd };
    if disc < 0 {
        return Ok(ReducedTuple::Well(here));
    }
    if disc == 0 {
        return Ok(ReducedTuple::Lake(here));
    }
    if isqrt(disc).is_some() {
        let mut seen: HashSet<([Int; 3], bool)> = [(c, odd)].into_iter().collect();
        let mut heap = BinaryHeap::from([Reverse((max_abs(&c), c, odd))]);
        let (mut left, mut right) = (None, None);
        while let Some(Reverse((_, x, px))) = heap.pop() {
            let v = ReducedVertex { cluster: x, odd: px };
            let nonzero: Vec<Int> = x.iter().copied().filter(|t| *t != 0).collect();
            let is_mouth = match nonzero.len() {
                1 => true,
                2 => sgn(nonzero[0]) != sgn(nonzero[1]),
                _ => false,
            };
            if is_mouth {
                match mouth_side(&v.oriented()) {
                    Some(Side::Left) => {
                        left.get_or_insert(v);
                    }
                    Some(Side::Right) => {
                        right.get_or_insert(v);
                    }
                    None => {}
                }
                if let (Some(l), Some(r)) = (left, right) {
                    return Ok(ReducedTuple::Mouths { left: l, right: r });
                }
            }
            for k in 0..3 {
                let y = local(&params, &x, k);
                if seen.insert((y, !px)) {
                    heap.push(Reverse((max_abs(&y), y, !px)));
                }
            }
        }
        unreachable!("both mouths are reachable");
    }
    // river: breadth-first search for a vertex with entries of both signs
    let mut queue = VecDeque::from([(c, odd)]);
    let mut seen: HashSet<[Int; 3]> = [c].into_iter().collect();
    let (mut c, mut odd) = loop {
        let (x, px) = queue.pop_front().expect("the river is reachable");
        if x.iter().any(|t| *t < 0) && x.iter().any(|t| *t > 0) {
            break (x, px);
        }
        for k in 0..3 {
            let y = local(&params, &x, k);
            if seen.insert(y) {
                queue.push_back((y, !px));
            }
        }
    };
    let (a, b) = (0..3)
        .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
        .find(|&(a, b)| sgn(c[a]) != sgn(c[b]))
        .unwrap();
    let mut last = 3 - a - b;
    c = local(&params, &c, last);
    odd = !odd;
    let mut visited: HashMap<([Int; 3], usize, bool), usize> = HashMap::default();
    let mut history: Vec<Bend> = Vec::new();
    loop {
        let o: Vec<usize> = (0..3).filter(|&k| k != last).collect();
        let mut next = o[1];
        for &k in &o {
            if sgn(c[k]) != sgn(c[last]) {
                next = o[0] + o[1] - k;
            }
        }
        if let Some(&start) = visited.get(&(c, next, odd)) {
            let bends = history[start..]
                .iter()
                .filter(|s| sgn(s.before[s.slot.slot()]) != sgn(s.after.cluster[s.slot.slot()]))
                .copied()
                .collect();
            return Ok(ReducedTuple::Bends(bends));
        }
        visited.insert((c, next, odd), history.len());
        let y = local(&params, &c, next);
        odd = !odd;
        history.push(Bend {
            before: c,
            after: ReducedVertex { cluster: y, odd },
            slot: Var::ALL[next],
        });
        c = y;
        last = next;
    }
}

/// PGL₂(ℤ)-equivalence: equal discriminants and equal reduced vertices as
/// unordered triples.
pub fn equivalent(q1: &QuadForm, q2: &QuadForm) -> Result<bool> {
    if q1.discriminant() != q2.discriminant() {
        return Ok(false);
    }
    let (t1, _) = reduce(q1)?;
    let (t2, _) = reduce(q2)?;
    Ok(t1.class_key() == t2.class_key())
}

/// SL₂(ℤ)-equivalence: additionally the orientation-aware canonical
/// clusters agree.
pub fn strict_equivalent(q1: &QuadForm, q2: &QuadForm) -> Result<bool> {
    if q1.discriminant() != q2.discriminant() {
        return Ok(false);
    }
    let (t1, _) = reduce(q1)?;
    let (t2, _) = reduce(q2)?;
    Ok(t1.class_key() == t2.class_key()
        && canonical_reduced_cluster(&t1) == canonical_reduced_cluster(&t2))
}
