//! Words over {L, R, S}, snake graphs, rattles and the rattlesnake ↔ ℚ ∪ {∞}
//! bijection.
//!
//! Tiles are unit squares. Each letter glues the next tile to the previous one:
//! `L` on its north side, `R` on its east side. Seen as diamonds (rotated by
//! 45°) the square's bottom edge is the south-east side and its left edge is
//! the south-west side of the first tile.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{mediant, Farey};

/// Brute-force matching enumeration refuses graphs with more tiles.
pub const MAX_BRUTE_FORCE_TILES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Letter {
    L,
    R,
}

impl Letter {
    pub fn flip(self) -> Letter {
        match self {
            Letter::L => Letter::R,
            Letter::R => Letter::L,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::L => 'L',
            Letter::R => 'R',
        }
    }
}

/// `S^χ w` with `w` over {L, R}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub has_s: bool,
    pub body: Vec<Letter>,
}

impl Word {
    pub fn new(has_s: bool, body: Vec<Letter>) -> Self {
        Word { has_s, body }
    }

    pub fn body_str(&self) -> String {
        self.body.iter().map(|l| l.as_char()).collect()
    }

    fn plain(&self) -> Result<&[Letter]> {
        if self.has_s {
            Err(Error::SInBody)
        } else {
            Ok(&self.body)
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.has_s {
            f.write_str("S")?;
        }
        f.write_str(&self.body_str())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (has_s, rest) = match s.strip_prefix('S') {
            Some(r) => (true, r),
            None => (false, s),
        };
        let body = rest
            .chars()
            .map(|c| match c {
                'L' => Ok(Letter::L),
                'R' => Ok(Letter::R),
                'S' => Err(Error::SInBody),
                other => Err(Error::Parse(format!("unexpected letter {other:?} in word"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { has_s, body })
    }
}

pub fn opposite_body(w: &[Letter]) -> Vec<Letter> {
    w.iter().map(|l| l.flip()).collect()
}

/// Flips the letters in positions 1, 3, 5, … (counting from one).
pub fn dual_body(w: &[Letter]) -> Vec<Letter> {
    w.iter()
        .enumerate()
        .map(|(i, l)| if i % 2 == 0 { l.flip() } else { *l })
        .collect()
}

pub fn opposite(w: &Word) -> Result<Word> {
    Ok(Word::new(false, opposite_body(w.plain()?)))
}

pub fn dual(w: &Word) -> Result<Word> {
    Ok(Word::new(false, dual_body(w.plain()?)))
}

pub fn codual(w: &Word) -> Result<Word> {
    Ok(Word::new(false, dual_body(&opposite_body(w.plain()?))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NorthSouth {
    Northern,
    Southern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EastWest {
    Eastern,
    Western,
}

/// The planar cell complex of a snake graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnakeGraph {
    /// Lower-left corners of the square tiles, in gluing order.
    pub tiles: Vec<(i32, i32)>,
    /// The letter gluing tile `k + 1` onto tile `k`.
    pub gluings: Vec<Letter>,
    pub vertices: Vec<(i32, i32)>,
    pub edges: Vec<(usize, usize)>,
}

impl SnakeGraph {
    /// A snake graph with `body.len() + 1` tiles.
    pub fn from_body(body: &[Letter]) -> SnakeGraph {
        let mut tiles = vec![(0, 0)];
        for l in body {
            let (x, y) = *tiles.last().unwrap();
            tiles.push(match l {
                Letter::L => (x, y + 1),
                Letter::R => (x + 1, y),
            });
        }
        let mut segs = Vec::new();
        for &(x, y) in &tiles {
            segs.push(((x, y), (x + 1, y)));
            segs.push(((x, y + 1), (x + 1, y + 1)));
            segs.push(((x, y), (x, y + 1)));
            segs.push(((x + 1, y), (x + 1, y + 1)));
        }
        Self::assemble(tiles, body.to_vec(), segs)
    }

    /// The degenerate graph of 0 and ∞: one edge, no tiles.
    pub fn single_edge() -> SnakeGraph {
        Self::assemble(vec![], vec![], vec![((0, 0), (0, 1))])
    }

    fn assemble(
        tiles: Vec<(i32, i32)>,
        gluings: Vec<Letter>,
        segs: Vec<((i32, i32), (i32, i32))>,
    ) -> SnakeGraph {
        let mut vertices: Vec<(i32, i32)> = segs.iter().flat_map(|(a, b)| [*a, *b]).collect();
        vertices.sort();
        vertices.dedup();
        let id = |p: &(i32, i32)| vertices.binary_search(p).unwrap();
        let mut edges: Vec<(usize, usize)> = segs.iter().map(|(a, b)| (id(a), id(b))).collect();
        edges.sort();
        edges.dedup();
        SnakeGraph {
            tiles,
            gluings,
            vertices,
            edges,
        }
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }

    pub fn edge_id(&self, a: (i32, i32), b: (i32, i32)) -> Option<usize> {
        let ia = self.vertices.binary_search(&a).ok()?;
        let ib = self.vertices.binary_search(&b).ok()?;
        let e = (ia.min(ib), ia.max(ib));
        self.edges.iter().position(|x| *x == e)
    }

    /// Whether edge `e = uv` satisfies `deg(u) = deg(v) ≤ 2`.
    pub fn is_rattle(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        let (du, dv) = (self.degree(u), self.degree(v));
        du == dv && du <= 2
    }

    /// All rattle edges.
    pub fn rattles(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.is_rattle(e)).collect()
    }

    /// Rattles on the south side (bottom or left edge) of the first tile, with
    /// their orientation: the bottom edge faces south-east, the left edge
    /// south-west.
    pub fn southern_rattles(&self) -> Vec<(usize, EastWest)> {
        if self.tiles.is_empty() {
            return vec![(0, EastWest::Western), (0, EastWest::Eastern)];
        }
        let (x, y) = self.tiles[0];
        let mut out = Vec::new();
        for (a, b, ew) in [
            ((x, y), (x + 1, y), EastWest::Eastern),
            ((x, y), (x, y + 1), EastWest::Western),
        ] {
            if let Some(e) = self.edge_id(a, b) {
                if self.is_rattle(e) {
                    out.push((e, ew));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rattlesnake {
    pub word: String,
    pub graph: SnakeGraph,
    pub rattle: usize,
    pub ns: NorthSouth,
    pub ew: EastWest,
}

/// The snake graph of a word with its marked rattle.
///
/// The rattle sits on the first tile. A graph with `has_s` is the vertical
/// mirror image of the one without, which exchanges south and north while
/// keeping the east/west side, so the same edge is marked as northern.
pub fn build_graph(word: &Word) -> Rattlesnake {
    let graph = SnakeGraph::from_body(&word.body);
    let candidates = graph.southern_rattles();
    // one tile: all four sides are rattles; the magnitude |q| = 1 picks west
    let (rattle, ew) = candidates
        .iter()
        .copied()
        .find(|(_, ew)| *ew == EastWest::Western)
        .unwrap_or(candidates[0]);
    Rattlesnake {
        word: word.to_string(),
        graph,
        rattle,
        ns: if word.has_s {
            NorthSouth::Northern
        } else {
            NorthSouth::Southern
        },
        ew,
    }
}

fn count_masked(adj: &[u64], rem: u64, memo: &mut HashMap<u64, BigInt>) -> BigInt {
    if rem == 0 {
        return BigInt::from(1);
    }
    if let Some(c) = memo.get(&rem) {
        return c.clone();
    }
    let v = rem.trailing_zeros() as usize;
    let mut nb = adj[v] & rem & !(1u64 << v);
    let mut total = BigInt::from(0);
    while nb != 0 {
        let u = nb.trailing_zeros() as usize;
        nb &= nb - 1;
        total += count_masked(adj, rem & !(1u64 << v) & !(1u64 << u), memo);
    }
    memo.insert(rem, total.clone());
    total
}

fn brute_force(g: &SnakeGraph, forced: Option<usize>) -> Result<BigInt> {
    if g.tile_count() > MAX_BRUTE_FORCE_TILES {
        return Err(Error::TooLarge(g.tile_count(), MAX_BRUTE_FORCE_TILES));
    }
    let n = g.vertices.len();
    debug_assert!(n <= 64);
    let mut adj = vec![0u64; n];
    for &(a, b) in &g.edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let mut rem: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if let Some(e) = forced {
        let (a, b) = g.edges[e];
        rem &= !(1u64 << a) & !(1u64 << b);
    }
    Ok(count_masked(&adj, rem, &mut HashMap::new()))
}

/// Number of perfect matchings, by exhaustive enumeration.
pub fn count_matchings(g: &SnakeGraph) -> Result<BigInt> {
    brute_force(g, None)
}

/// Number of perfect matchings that contain the rattle.
pub fn count_matchings_with_rattle(rs: &Rattlesnake) -> Result<BigInt> {
    brute_force(&rs.graph, Some(rs.rattle))
}

/// The Stern–Brocot descent driven by `dual(body)`: a raw `L` keeps the right
/// half of the interval, a raw `R` the left half. Returns the final mediant,
/// negated for words with a leading `S`.
pub fn word_to_fraction(word: &Word) -> Farey {
    let (mut a, mut b) = (Farey::zero(), Farey::infinity());
    for l in dual_body(&word.body) {
        let m = mediant(&a, &b).expect("Stern-Brocot intervals are Farey neighbors");
        match l {
            Letter::L => a = m,
            Letter::R => b = m,
        }
    }
    let m = mediant(&a, &b).expect("Stern-Brocot intervals are Farey neighbors");
    if word.has_s {
        m.neg()
    } else {
        m
    }
}

/// Raw Stern–Brocot letters locating a positive finite fraction.
fn stern_brocot_path(q: &Farey) -> Vec<Letter> {
    let (mut a, mut b) = (Farey::zero(), Farey::infinity());
    let mut out = Vec::new();
    loop {
        let m = mediant(&a, &b).expect("Stern-Brocot intervals are Farey neighbors");
        match q.cmp(&m) {
            std::cmp::Ordering::Equal => return out,
            std::cmp::Ordering::Less => {
                out.push(Letter::R);
                b = m;
            }
            std::cmp::Ordering::Greater => {
                out.push(Letter::L);
                a = m;
            }
        }
    }
}

/// The word whose snake graph realizes `q ≠ 0, ∞`.
pub fn fraction_to_word(q: &Farey) -> Word {
    let raw = stern_brocot_path(&q.abs());
    Word::new(q.is_negative(), dual_body(&raw))
}

pub fn fraction_to_rattlesnake(q: &Farey) -> Rattlesnake {
    if q.is_infinite() || q.num().sign() == num_bigint::Sign::NoSign {
        let ew = if q.is_infinite() {
            EastWest::Western
        } else {
            EastWest::Eastern
        };
        return Rattlesnake {
            word: String::new(),
            graph: SnakeGraph::single_edge(),
            rattle: 0,
            ns: NorthSouth::Southern,
            ew,
        };
    }
    build_graph(&fraction_to_word(q))
}

/// Recovers the fraction from matching counts: `M` perfect matchings, `m` of
/// them through the rattle, `|q| = m/(M−m)` on the west and `(M−m)/m` on the
/// east, negative when the rattle is northern.
pub fn rattlesnake_to_fraction(rs: &Rattlesnake) -> Result<Farey> {
    let total = count_matchings(&rs.graph)?;
    let with = count_matchings_with_rattle(rs)?;
    let rest = &total - &with;
    let q = match rs.ew {
        EastWest::Western => Farey::new(with, rest),
        EastWest::Eastern => Farey::new(rest, with),
    };
    Ok(match rs.ns {
        NorthSouth::Northern => q.neg(),
        NorthSouth::Southern => q,
    })
}

/// `(total, with rattle)` from the fraction: `r + s` and `max(r, s)`.
pub fn counts_fast(word: &Word) -> (BigInt, BigInt) {
    let q = word_to_fraction(word);
    let (r, s) = (q.num().magnitude().clone(), q.den().magnitude().clone());
    let total = BigInt::from(&r + &s);
    let max = BigInt::from(r.max(s));
    (total, max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn word_parsing() {
        assert_eq!(w("SRLL").to_string(), "SRLL");
        assert_eq!("LSR".parse::<Word>(), Err(Error::SInBody));
        assert!("LXR".parse::<Word>().is_err());
        assert_eq!(w(""), Word::default());
    }

    #[test]
    fn word_algebra_examples() {
        assert_eq!(dual(&w("RRR")).unwrap(), w("LRL"));
        assert_eq!(dual(&w("LLRL")).unwrap(), w("RLLL"));
        assert_eq!(opposite(&w("LR")).unwrap(), w("RL"));
        assert_eq!(dual(&dual(&w("LLRLR")).unwrap()).unwrap(), w("LLRLR"));
        assert_eq!(dual(&w("SRL")), Err(Error::SInBody));
    }

    #[test]
    fn graphs_of_the_worked_words() {
        let rs = build_graph(&w("SRLL"));
        assert_eq!(rs.graph.tile_count(), 4);
        assert_eq!(rs.ns, NorthSouth::Northern);
        assert_eq!(rs.ew, EastWest::Western);
        assert_eq!(count_matchings(&rs.graph).unwrap(), 7.into());
        assert_eq!(count_matchings_with_rattle(&rs).unwrap(), 5.into());

        let rs = build_graph(&w("LRL"));
        assert_eq!(rs.graph.tile_count(), 4);
        assert_eq!(rs.ns, NorthSouth::Southern);
        assert_eq!(rs.ew, EastWest::Eastern);
        assert_eq!(count_matchings(&rs.graph).unwrap(), 5.into());
        assert_eq!(count_matchings_with_rattle(&rs).unwrap(), 4.into());

        let one = build_graph(&w(""));
        assert_eq!(one.graph.tile_count(), 1);
        assert_eq!(one.graph.rattles().len(), 4);
        assert_eq!(one.ew, EastWest::Western);
    }

    #[test]
    fn straight_run_of_three() {
        let g = SnakeGraph::from_body(&w("LL").body);
        assert_eq!(count_matchings(&g).unwrap(), 5.into());
        assert_eq!(g.rattles().len(), 2);
    }

    #[test]
    fn fractions_of_words() {
        assert_eq!(word_to_fraction(&w("SRLL")), Farey::new(-5, 2));
        assert_eq!(word_to_fraction(&w("LRL")), Farey::new(1, 4));
        assert_eq!(word_to_fraction(&w("")), Farey::new(1, 1));
        assert_eq!(fraction_to_word(&Farey::new(-5, 2)), w("SRLL"));
        assert_eq!(fraction_to_word(&Farey::new(7, 9)), w("LLRLL"));
    }

    #[test]
    fn bijection_examples() {
        let rs = build_graph(&w("SRLL"));
        assert_eq!(rattlesnake_to_fraction(&rs).unwrap(), Farey::new(-5, 2));
        let rs = build_graph(&w("LRL"));
        assert_eq!(rattlesnake_to_fraction(&rs).unwrap(), Farey::new(1, 4));
        let inf = fraction_to_rattlesnake(&Farey::infinity());
        assert_eq!(inf.ew, EastWest::Western);
        assert_eq!(inf.graph.edges.len(), 1);
        assert_eq!(rattlesnake_to_fraction(&inf).unwrap(), Farey::infinity());
        let zero = fraction_to_rattlesnake(&Farey::zero());
        assert_eq!(rattlesnake_to_fraction(&zero).unwrap(), Farey::zero());
    }

    #[test]
    fn brute_force_cap() {
        let body = vec![Letter::L; MAX_BRUTE_FORCE_TILES];
        let g = SnakeGraph::from_body(&body);
        assert!(matches!(count_matchings(&g), Err(Error::TooLarge(25, 24))));
        let body = vec![Letter::L; MAX_BRUTE_FORCE_TILES - 1];
        let g = SnakeGraph::from_body(&body);
        // a straight run of n tiles has F(n+2) matchings
        assert_eq!(count_matchings(&g).unwrap(), 121393.into());
    }
}
