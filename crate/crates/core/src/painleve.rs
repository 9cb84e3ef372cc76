//! The PVI monodromy manifold
//! `x₁x₂x₃ + x₁² + x₂² + x₃² − θ₁x₁ − θ₂x₂ − θ₃x₃ + θ₄ = 0`
//! with the braid, squared-braid and mutation-pair actions, in complex
//! double precision.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::master::Var;

pub type C = Complex64;

/// Local monodromy data `(a₁, a₂, a₃, a_∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalData {
    pub a: [C; 4],
    pub kappa: Option<[C; 4]>,
}

impl LocalData {
    pub fn new(a: [C; 4]) -> Self {
        LocalData { a, kappa: None }
    }

    pub fn theta(&self) -> Theta {
        theta_from_a(&self.a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theta(pub [C; 4]);

impl Theta {
    pub fn get(&self, v: Var) -> C {
        self.0[v.slot()]
    }

    pub fn four(&self) -> C {
        self.0[3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyPoint(pub [C; 3]);

impl MonodromyPoint {
    pub fn get(&self, v: Var) -> C {
        self.0[v.slot()]
    }

    fn with(mut self, v: Var, z: C) -> Self {
        self.0[v.slot()] = z;
        self
    }

    /// Componentwise closeness relative to the larger magnitude.
    pub fn close(&self, o: &MonodromyPoint, tol: f64) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| {
            let scale = 1f64.max(a.norm()).max(b.norm());
            (a - b).norm() <= tol * scale
        })
    }
}

/// `a_i = 2 cos πκ_i`, `a_∞ = −2 cos πκ₄`.
pub fn a_from_kappa(kappa: &[C; 4]) -> LocalData {
    let pi = std::f64::consts::PI;
    let c = |k: C| (k * pi).cos() * 2.0;
    LocalData {
        a: [c(kappa[0]), c(kappa[1]), c(kappa[2]), -c(kappa[3])],
        kappa: Some(*kappa),
    }
}

/// `θ_i = a_i a_∞ + a_j a_k`, `θ₄ = a₁a₂a₃a_∞ + a₁² + a₂² + a₃² + a_∞² − 4`.
pub fn theta_from_a(a: &[C; 4]) -> Theta {
    let [a1, a2, a3, ai] = *a;
    Theta([
        a1 * ai + a2 * a3,
        a2 * ai + a3 * a1,
        a3 * ai + a1 * a2,
        a1 * a2 * a3 * ai + a1 * a1 + a2 * a2 + a3 * a3 + ai * ai - 4.0,
    ])
}

pub fn residual(x: &MonodromyPoint, th: &Theta) -> C {
    let [x1, x2, x3] = x.0;
    let [t1, t2, t3, t4] = th.0;
    x1 * x2 * x3 + x1 * x1 + x2 * x2 + x3 * x3 - t1 * x1 - t2 * x2 - t3 * x3 + t4
}

/// Largest magnitude among the terms of the residual, at least 1.
pub fn residual_scale(x: &MonodromyPoint, th: &Theta) -> f64 {
    let [x1, x2, x3] = x.0;
    let [t1, t2, t3, t4] = th.0;
    [
        x1 * x2 * x3,
        x1 * x1,
        x2 * x2,
        x3 * x3,
        t1 * x1,
        t2 * x2,
        t3 * x3,
        t4,
    ]
    .iter()
    .map(|z| z.norm())
    .fold(1.0, f64::max)
}

/// True when the point lies on the manifold to relative tolerance `tol`.
pub fn on_manifold(x: &MonodromyPoint, th: &Theta, tol: f64) -> bool {
    residual(x, th).norm() <= tol * residual_scale(x, th)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Completes `(x₁, x₂)` to a manifold point by solving the quadratic in `x₃`.
pub fn sample_point(th: &Theta, x1: C, x2: C, branch: Branch) -> MonodromyPoint {
    let [t1, t2, t3, t4] = th.0;
    let b = x1 * x2 - t3;
    let c = x1 * x1 + x2 * x2 - t1 * x1 - t2 * x2 + t4;
    let root = (b * b - c * 4.0).sqrt();
    // the larger root first avoids cancellation; the other by Vieta
    let big = if (-b + root).norm() >= (-b - root).norm() {
        (-b + root) / 2.0
    } else {
        (-b - root) / 2.0
    };
    let small = if big.norm() == 0.0 { big } else { c / big };
    let x3 = match branch {
        Branch::Plus => big,
        Branch::Minus => small,
    };
    MonodromyPoint([x1, x2, x3])
}

/// The slots `(i, j)` completing `k` to the cyclic triple `(i, j, k)`.
fn cyclic(k: Var) -> (Var, Var) {
    let i = k.next();
    (i, i.next())
}

/// The braid generator fixing slot `k`: `x_i' = θ_j(a) − x_j − x_k x_i`,
/// `x_j' = x_i`, and `a_i ↔ a_j`.
pub fn braid(k: Var, x: &MonodromyPoint, a: &LocalData) -> (MonodromyPoint, LocalData) {
    let (i, j) = cyclic(k);
    let th = a.theta();
    let xi = th.get(j) - x.get(j) - x.get(k) * x.get(i);
    let y = x.with(i, xi).with(j, x.get(i));
    let mut b = *a;
    b.a.swap(i.slot(), j.slot());
    b.kappa = a.kappa.map(|mut kp| {
        kp.swap(i.slot(), j.slot());
        kp
    });
    (y, b)
}

/// The square of [`braid`], which leaves the local data unchanged.
pub fn braid_squared(k: Var, x: &MonodromyPoint, a: &LocalData) -> MonodromyPoint {
    let (i, j) = cyclic(k);
    let th = a.theta();
    let (xi, xj, xk) = (x.get(i), x.get(j), x.get(k));
    let one = C::new(1.0, 0.0);
    let yi = th.get(i) - (one - xk * xk) * xi - (th.get(j) - xj) * xk;
    let yj = th.get(j) - xj - xk * xi;
    x.with(i, yi).with(j, yj)
}

/// `x_i' = θ_i − x_i − x_j x_k`.
pub fn mutate(i: Var, x: &MonodromyPoint, th: &Theta) -> MonodromyPoint {
    let (j, k) = i.others();
    x.with(i, th.get(i) - x.get(i) - x.get(j) * x.get(k))
}

/// `x_i' = (x_j² + x_k² − θ_j x_j − θ_k x_k + θ₄)/x_i`, equal to [`mutate`] on
/// the manifold.
pub fn mutate_rational(i: Var, x: &MonodromyPoint, th: &Theta) -> Result<MonodromyPoint> {
    let (j, k) = i.others();
    let (xj, xk) = (x.get(j), x.get(k));
    let num = xj * xj + xk * xk - th.get(j) * xj - th.get(k) * xk + th.four();
    if x.get(i).norm() == 0.0 {
        return Err(Error::DivisionByZero(format!("x{i} = 0")));
    }
    Ok(x.with(i, num / x.get(i)))
}

/// `μ_ij = μ_i ∘ μ_j`: mutate slot `j`, then slot `i`.
pub fn mu_pair(i: Var, j: Var, x: &MonodromyPoint, th: &Theta) -> MonodromyPoint {
    mutate(i, &mutate(j, x, th), th)
}

/// The coordinate transposition `(ij)`, acting on points and local data.
pub fn transpose(i: Var, j: Var, x: &MonodromyPoint, a: &LocalData) -> (MonodromyPoint, LocalData) {
    let mut y = *x;
    y.0.swap(i.slot(), j.slot());
    let mut b = *a;
    b.a.swap(i.slot(), j.slot());
    if let Some(kp) = &mut b.kappa {
        kp.swap(i.slot(), j.slot());
    }
    (y, b)
}

/// Whether `y` equals `x` up to a sign change on a pair of coordinates.
pub fn sign_flip_equivalent(x: &MonodromyPoint, y: &MonodromyPoint, tol: f64) -> bool {
    let flip = |p: usize, q: usize| {
        let mut z = *x;
        z.0[p] = -z.0[p];
        z.0[q] = -z.0[q];
        z
    };
    x.close(y, tol) || [(0, 1), (1, 2), (0, 2)].iter().any(|&(p, q)| flip(p, q).close(y, tol))
}

/// The six mutation pairs `μ_ij`, `i ≠ j`.
pub const MU_PAIRS: [(Var, Var); 6] = [
    (Var::X1, Var::X2),
    (Var::X2, Var::X1),
    (Var::X2, Var::X3),
    (Var::X3, Var::X2),
    (Var::X3, Var::X1),
    (Var::X1, Var::X3),
];

/// Breadth-first orbit of `x` under the mutation pairs, deduplicating points
/// within `dedup_tol`, stopping after `max_points` points or `max_depth`
/// generations.
pub fn orbit(
    x: &MonodromyPoint,
    th: &Theta,
    max_depth: usize,
    max_points: usize,
    dedup_tol: f64,
) -> Vec<(MonodromyPoint, usize)> {
    let mut out = vec![(*x, 0)];
    let mut frontier = vec![*x];
    for depth in 1..=max_depth {
        let mut next = Vec::new();
        for p in &frontier {
            for (i, j) in MU_PAIRS {
                let y = mu_pair(i, j, p, th);
                if out.iter().any(|(z, _)| z.close(&y, dedup_tol)) {
                    continue;
                }
                if out.len() >= max_points {
                    return out;
                }
                out.push((y, depth));
                next.push(y);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    out
}
