use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topography::master::Var::{self, X1, X2, X3};
use topography::painleve::*;

const TOL: f64 = 1e-9;

fn disk(rng: &mut ChaCha8Rng) -> C {
    loop {
        let z = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm() < 1.0 {
            return z;
        }
    }
}

fn draw(rng: &mut ChaCha8Rng) -> (LocalData, MonodromyPoint) {
    let a = LocalData::new([0; 4].map(|_| disk(rng)));
    let branch = if rng.gen_bool(0.5) { Branch::Plus } else { Branch::Minus };
    let x = sample_point(&a.theta(), disk(rng), disk(rng), branch);
    (a, x)
}

#[test]
fn squared_braids_compose_to_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let (a, x) = draw(&mut rng);
        let y = braid_squared(X3, &braid_squared(X1, &braid_squared(X2, &x, &a), &a), &a);
        assert!(y.close(&x, TOL), "{x:?} {y:?}");
    }
}

#[test]
fn mutation_pairs_compose_to_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let (a, x) = draw(&mut rng);
        let th = a.theta();
        let y = mu_pair(X1, X2, &mu_pair(X2, X3, &mu_pair(X3, X1, &x, &th), &th), &th);
        assert!(y.close(&x, TOL));
        for (i, j) in MU_PAIRS {
            let z = mu_pair(i, j, &x, &th);
            let k = Var::ALL.into_iter().find(|v| *v != i && *v != j).unwrap();
            assert_eq!(z.get(k), x.get(k));
        }
    }
}

#[test]
fn mutation_is_transposed_braid() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let (a, x) = draw(&mut rng);
        for k in Var::ALL {
            let i = k.next();
            let j = i.next();
            let (b, ab) = braid(k, &x, &a);
            let (t, _) = transpose(i, j, &b, &ab);
            assert!(t.close(&mutate(j, &x, &a.theta()), TOL));
        }
    }
}

#[test]
fn actions_preserve_the_manifold() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let (a, x) = draw(&mut rng);
        let th = a.theta();
        assert!(on_manifold(&x, &th, TOL));
        for k in Var::ALL {
            let (y, b) = braid(k, &x, &a);
            assert!(on_manifold(&y, &b.theta(), TOL));
            assert!(on_manifold(&braid_squared(k, &x, &a), &th, TOL));
            let m = mutate(k, &x, &th);
            assert!(on_manifold(&m, &th, TOL));
            assert!(mutate(k, &m, &th).close(&x, TOL));
            if x.get(k).norm() > 1e-6 {
                assert!(mutate_rational(k, &x, &th).unwrap().close(&m, 1e-7));
            }
        }
        for (i, j) in MU_PAIRS {
            assert!(on_manifold(&mu_pair(i, j, &x, &th), &th, TOL));
        }
    }
}
