//! The braid and mutation actions on the PVI monodromy manifold.

use num_complex::Complex64 as C;
use topography::master::Var;
use topography::painleve::{self, Branch, LocalData};

fn main() {
    let a = LocalData::new([C::new(0.3, 0.1), C::new(-1.2, 0.4), C::new(0.7, -0.5), C::new(1.1, 0.2)]);
    let th = a.theta();
    let x = painleve::sample_point(&th, C::new(0.4, 1.0), C::new(-0.8, 0.3), Branch::Plus);
    println!("start {:?}, residual {:.2e}", x.0, painleve::residual(&x, &th).norm());

    let (y, b) = painleve::braid(Var::X1, &x, &a);
    println!("beta1: residual {:.2e}", painleve::residual(&y, &b.theta()).norm());

    let pure = painleve::braid_squared(
        Var::X3,
        &painleve::braid_squared(Var::X1, &painleve::braid_squared(Var::X2, &x, &a), &a),
        &a,
    );
    println!("beta3^2 beta1^2 beta2^2 returns: {}", pure.close(&x, 1e-9));

    let cycle = painleve::mu_pair(
        Var::X1,
        Var::X2,
        &painleve::mu_pair(Var::X2, Var::X3, &painleve::mu_pair(Var::X3, Var::X1, &x, &th), &th),
        &th,
    );
    println!("mu12 mu23 mu31 returns: {}", cycle.close(&x, 1e-9));

    let orbit = painleve::orbit(&x, &th, 4, 200, 1e-9);
    let worst = orbit
        .iter()
        .map(|(p, _)| painleve::residual(p, &th).norm() / painleve::residual_scale(p, &th))
        .fold(0.0, f64::max);
    println!("orbit of {} points, worst relative residual {worst:.2e}", orbit.len());
}
