//! The topograph as an exchange graph: PGL₂(ℤ) generators acting on clusters,
//! accumulated matrices, breadth-first enumeration and DOT export.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::ops::Mul;

use crate::error::Result;
use crate::master::{self, Cluster, MasterParams, Perm, Var};
use crate::scalar::Scalar;

/// An integral 2×2 matrix `[[r, t], [s, u]]` acting on forms by
/// `x ↦ r x + t y`, `y ↦ s x + u y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2(pub [[i128; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);

    pub fn neg(&self) -> Mat2 {
        Mat2(self.0.map(|row| row.map(|x| -x)))
    }

    /// Equality in PGL₂(ℤ), i.e. up to an overall sign.
    pub fn projectively_eq(&self, o: &Mat2) -> bool {
        self == o || *self == o.neg()
    }

    pub fn det(&self) -> i128 {
        let [[r, t], [s, u]] = self.0;
        r * u - t * s
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        let mut m = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupGenerator {
    S,
    T,
    U,
    E,
    V,
    V2,
    Mu1,
    Mu2,
    Mu3,
}

impl GroupGenerator {
    pub const ALL: [GroupGenerator; 9] = [
        GroupGenerator::S,
        GroupGenerator::T,
        GroupGenerator::U,
        GroupGenerator::E,
        GroupGenerator::V,
        GroupGenerator::V2,
        GroupGenerator::Mu1,
        GroupGenerator::Mu2,
        GroupGenerator::Mu3,
    ];

    pub fn matrix(self) -> Mat2 {
        use GroupGenerator::*;
        match self {
            S | Mu2 => Mat2([[-1, 0], [0, 1]]),
            T => Mat2([[-1, 1], [0, 1]]),
            U => Mat2([[0, 1], [1, 0]]),
            E => Mat2([[0, -1], [1, 0]]),
            V => Mat2([[0, 1], [-1, 1]]),
            V2 => Mat2([[0, 1], [-1, 1]]) * Mat2([[0, 1], [-1, 1]]),
            Mu1 => Mat2([[1, 0], [2, -1]]),
            Mu3 => Mat2([[-1, 2], [0, 1]]),
        }
    }

    pub fn mutation(v: Var) -> GroupGenerator {
        match v {
            Var::X1 => GroupGenerator::Mu1,
            Var::X2 => GroupGenerator::Mu2,
            Var::X3 => GroupGenerator::Mu3,
        }
    }
}

impl fmt::Display for GroupGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupGenerator::*;
        let s = match self {
            S => "S",
            T => "T",
            U => "U",
            E => "E",
            V => "V",
            V2 => "V2",
            Mu1 => "mu1",
            Mu2 => "mu2",
            Mu3 => "mu3",
        };
        f.write_str(s)
    }
}

/// The cluster action of a generator.
pub fn apply<T: Scalar>(
    params: &MasterParams<T>,
    c: &Cluster<T>,
    g: GroupGenerator,
) -> Result<Cluster<T>> {
    use GroupGenerator::*;
    Ok(match g {
        S | Mu2 => master::mutate(params, c, Var::X2)?,
        Mu1 => master::mutate(params, c, Var::X1)?,
        Mu3 => master::mutate(params, c, Var::X3)?,
        T => master::permute(c, Perm::T23),
        U => master::permute(c, Perm::T13),
        E => master::permute(&master::mutate(params, c, Var::X2)?, Perm::T13),
        V => master::permute(c, Perm::C123),
        V2 => master::permute(c, Perm::C132),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Walk<T> {
    pub start: Cluster<T>,
    pub generators: Vec<GroupGenerator>,
}

impl<T: Scalar> Walk<T> {
    pub fn new(start: Cluster<T>, generators: Vec<GroupGenerator>) -> Self {
        Walk { start, generators }
    }

    pub fn accumulated(&self) -> Mat2 {
        walk_matrix(&self.generators)
    }

    pub fn end(&self, params: &MasterParams<T>) -> Result<Cluster<T>> {
        let mut c = self.start.clone();
        for g in &self.generators {
            c = apply(params, &c, *g)?;
        }
        Ok(c)
    }
}

/// Ordered product of the generator matrices.
pub fn walk_matrix(gens: &[GroupGenerator]) -> Mat2 {
    gens.iter().fold(Mat2::IDENTITY, |m, g| m * g.matrix())
}

/// Coefficients `(a, b, c)` of `a x² + b xy + c y²` induced by a cluster.
pub fn form_of(c: &Cluster<i128>) -> [i128; 3] {
    let [w, n, e] = c.0;
    [w, n - w - e, e]
}

/// `q ∘ M` by coefficient substitution.
pub fn compose(q: [i128; 3], m: Mat2) -> [i128; 3] {
    let [a, b, c] = q;
    let [[r, t], [s, u]] = m.0;
    [
        a * r * r + b * r * s + c * s * s,
        2 * a * r * t + b * (r * u + s * t) + 2 * c * s * u,
        a * t * t + b * t * u + c * u * u,
    ]
}

/// Checks `q_start ∘ M = q_end` for a walk under a discriminant specialization.
pub fn verify_walk(params: &MasterParams<i128>, walk: &Walk<i128>) -> Result<bool> {
    let end = walk.end(params)?;
    Ok(compose(form_of(&walk.start), walk.accumulated()) == form_of(&end))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BfsResult<T: Ord> {
    pub start: Cluster<T>,
    pub depth: usize,
    /// Ordered clusters with their distance from the start.
    pub nodes: BTreeMap<Cluster<T>, usize>,
    /// Undirected edges `(smaller, larger, slot)`.
    pub edges: BTreeSet<(Cluster<T>, Cluster<T>, Var)>,
    /// Mutations skipped because the slot held zero.
    pub pruned: Vec<(Cluster<T>, Var)>,
}

impl<T: Scalar + Ord> BfsResult<T> {
    pub fn values(&self) -> BTreeSet<T> {
        self.nodes.keys().flat_map(|c| c.0.iter().cloned()).collect()
    }

    /// Unordered vertices: sorted value triples.
    pub fn vertices(&self) -> BTreeSet<[T; 3]> {
        self.nodes
            .keys()
            .map(|c| {
                let mut v = c.0.clone();
                v.sort();
                v
            })
            .collect()
    }
}

/// All clusters reachable from `start` by at most `depth` mutations.
pub fn bfs<T: Scalar + Ord>(
    params: &MasterParams<T>,
    start: &Cluster<T>,
    depth: usize,
) -> BfsResult<T> {
    let mut nodes = BTreeMap::new();
    let mut edges = BTreeSet::new();
    let mut pruned = Vec::new();
    nodes.insert(start.clone(), 0);
    let mut frontier = vec![start.clone()];
    for d in 1..=depth {
        let mut next = Vec::new();
        for c in &frontier {
            for v in Var::ALL {
                let m = match master::mutate(params, c, v) {
                    Ok(m) => m,
                    Err(_) => {
                        pruned.push((c.clone(), v));
                        continue;
                    }
                };
                let e = if *c < m {
                    (c.clone(), m.clone(), v)
                } else {
                    (m.clone(), c.clone(), v)
                };
                edges.insert(e);
                if !nodes.contains_key(&m) {
                    nodes.insert(m.clone(), d);
                    next.push(m);
                }
            }
        }
        frontier = next;
    }
    BfsResult {
        start: start.clone(),
        depth,
        nodes,
        edges,
        pruned,
    }
}

/// Graphviz text with lexicographically ordered nodes.
pub fn to_dot<T: Scalar + Ord + fmt::Display>(r: &BfsResult<T>) -> String {
    let ids: BTreeMap<&Cluster<T>, usize> = r.nodes.keys().enumerate().map(|(i, c)| (c, i)).collect();
    let mut out = String::from("graph topograph {\n");
    for (c, i) in &ids {
        let _ = writeln!(out, "  n{i} [label=\"{c}\"];");
    }
    for (a, b, v) in &r.edges {
        if let (Some(i), Some(j)) = (ids.get(a), ids.get(b)) {
            let _ = writeln!(out, "  n{i} -- n{j} [label=\"{v}\"];");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use GroupGenerator::*;

    fn c(a: i128, b: i128, d: i128) -> Cluster<i128> {
        Cluster([a, b, d])
    }

    #[test]
    fn generator_actions() {
        let p = MasterParams::discriminant(-31);
        assert_eq!(apply(&p, &c(16, 200, 103), S).unwrap(), c(16, 38, 103));
        assert_eq!(apply(&p, &c(1, 2, 3), T).unwrap(), c(1, 3, 2));
        let x = c(16, 200, 103);
        let e2 = apply(&p, &apply(&p, &x, E).unwrap(), E).unwrap();
        assert_eq!(e2, x);
    }

    #[test]
    fn mu_matrices_factor_through_v_and_s() {
        let v = V.matrix();
        let s = S.matrix();
        assert!((v * s * v * v).projectively_eq(&Mu1.matrix()));
        assert!((v * v * s * v).projectively_eq(&Mu3.matrix()));
        assert_eq!(V2.matrix(), v * v);
    }

    #[test]
    fn walks() {
        let p = MasterParams::discriminant(-31);
        let w = Walk::new(c(16, 200, 103), vec![]);
        assert_eq!(w.accumulated(), Mat2::IDENTITY);
        assert!(verify_walk(&p, &w).unwrap());
        let w = Walk::new(c(16, 200, 103), vec![S, S]);
        assert_eq!(w.accumulated(), Mat2::IDENTITY);
        assert!(verify_walk(&p, &w).unwrap());

        let w = Walk::new(c(16, 200, 103), vec![Mu2, Mu3, Mu2, Mu1]);
        assert_eq!(w.accumulated().det().abs(), 1);
        assert!(verify_walk(&p, &w).unwrap());
        let q = compose(form_of(&w.start), w.accumulated());
        let (a, b, cc) = (q[0], q[1], q[2]);
        let mut vals = [a, a + b + cc, cc];
        vals.sort();
        assert_eq!(vals, [2, 4, 5]);
    }

    #[test]
    fn markov_bfs() {
        let p = MasterParams::<i128>::markov();
        let r = bfs(&p, &c(1, 1, 1), 0);
        assert_eq!(r.nodes.len(), 1);
        let r = bfs(&p, &c(1, 1, 1), 2);
        assert_eq!(r.values().into_iter().collect::<Vec<_>>(), vec![1, 2, 5]);
        let r = bfs(&p, &c(1, 1, 1), 4);
        assert!(r.values().contains(&13) && r.values().contains(&29));
        assert!(r.pruned.is_empty());
    }

    #[test]
    fn dot_is_deterministic() {
        let p = MasterParams::<i128>::markov();
        let r = bfs(&p, &c(1, 1, 1), 1);
        let d = to_dot(&r);
        assert_eq!(d, to_dot(&bfs(&p, &c(1, 1, 1), 1)));
        assert!(d.starts_with("graph topograph {\n  n0 [label=\"(1,1,1)\"];"));
        assert_eq!(d.matches(" -- ").count(), 3);
    }
}
