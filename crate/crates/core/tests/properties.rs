use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use topography::exact::{exact_sqrt, inside_semicircle, mediant, Farey, Surd};
use topography::forms::{self, classify_vertex, QuadForm, ReducedTuple, Side, VertexKind};
use topography::laurent::{LaurentPoly, Monomial3};
use topography::master::{self, Cluster, MasterParams, Seed, Var};
use topography::snake::{self, Letter, Word};
use topography::topograph::{self, GroupGenerator, Mat2};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn var() -> impl Strategy<Value = Var> {
    prop::sample::select(Var::ALL.to_vec())
}

fn letters(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(prop::sample::select(vec![Letter::L, Letter::R]), 0..=max)
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(([-3i32..=3, -3..=3, -3..=3], -5i64..=5), 1..=6).prop_map(|ts| {
        LaurentPoly::from_terms(ts.into_iter().map(|(e, c)| (Monomial3(e), BigInt::from(c))))
    })
}

fn nonzero_point() -> impl Strategy<Value = [BigRational; 3]> {
    [(-6i64..=6), (-6i64..=6), (-6i64..=6)]
        .prop_filter("nonzero coordinates", |p| p.iter().all(|x| *x != 0))
        .prop_map(|p| p.map(rat))
}

fn nondegenerate_cluster(r: i128) -> impl Strategy<Value = [i128; 3]> {
    [-r..=r, -r..=r, -r..=r].prop_filter("not all zero", |c| *c != [0, 0, 0])
}

/// The Conway progression seen from the mutated slot: x_i + x_i' = 2(x_j + x_k).
fn progression_holds(from: &[i128; 3], to: &[i128; 3], v: Var) -> bool {
    let i = v.slot();
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    from[j] == to[j] && from[k] == to[k] && from[i] + to[i] == 2 * (from[j] + from[k])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mediant_is_a_neighbor_of_both(n in -50i64..=50, d in 1i64..=50, k in -3i64..=3) {
        let g = num_integer::Integer::extended_gcd(&n, &d);
        prop_assume!(g.gcd == 1);
        // n x + d y = 1, so (k n − y)/(k d + x) is a neighbor of n/d
        let (bn, bd) = (k * n - g.y, k * d + g.x);
        prop_assume!(bn.abs() <= 50 && bd.abs() <= 50);
        let (a, b) = (Farey::new(n, d), Farey::new(bn, bd));
        prop_assert!(a.is_neighbor(&b));
        let m = mediant(&a, &b).unwrap();
        prop_assert!(m.is_neighbor(&a) && m.is_neighbor(&b));
    }

    #[test]
    fn surd_normalization_is_idempotent(
        p in -40i64..=40, q in -40i64..=40, r in (-40i64..=40).prop_filter("r ≠ 0", |r| *r != 0),
        d in -40i64..=40, k in (-5i64..=5).prop_filter("k ≠ 0", |k| *k != 0),
    ) {
        let s = Surd::new(p, q, r, d);
        let again = Surd::new(s.p().clone(), s.q().clone(), s.r().clone(), s.d().clone());
        prop_assert_eq!(&again, &s);
        let scaled = Surd::new(k * p, k * q, k * r, d);
        prop_assert_eq!(scaled.re(), s.re());
        prop_assert_eq!(scaled.im_sq(), s.im_sq());
        let raw_re = BigRational::new(p.into(), r.into());
        prop_assert_eq!(s.re(), if d >= 0 && num_integer::Roots::sqrt(&d).pow(2) == d {
            raw_re + BigRational::new((q * num_integer::Roots::sqrt(&d)).into(), r.into())
        } else {
            raw_re
        });
    }

    #[test]
    fn semicircle_test_commutes_with_reflection(
        p in -30i64..=30, q in 0i64..=10, r in 1i64..=20, d in -30i64..=30,
        an in -10i64..=10, ad in 1i64..=5, bn in -10i64..=10, bd in 1i64..=5,
    ) {
        let z = Surd::new(p, q, r, d);
        let (a, b) = (Farey::new(an, ad), Farey::new(bn, bd));
        prop_assume!(a < b);
        prop_assert_eq!(
            inside_semicircle(&z, &a, &b),
            inside_semicircle(&z.reflect(), &b.neg(), &a.neg())
        );
    }

    #[test]
    fn division_undoes_multiplication(p in laurent(), q in laurent()) {
        prop_assume!(!q.is_zero());
        let prod = &p * &q;
        prop_assert_eq!(prod.exact_div(&q).unwrap(), p);
    }

    #[test]
    fn eval_is_a_ring_homomorphism(p in laurent(), q in laurent(), at in nonzero_point()) {
        let (ep, eq) = (p.eval(&at).unwrap(), q.eval(&at).unwrap());
        prop_assert_eq!((&p + &q).eval(&at).unwrap(), &ep + &eq);
        prop_assert_eq!((&p - &q).eval(&at).unwrap(), &ep - &eq);
        prop_assert_eq!((&p * &q).eval(&at).unwrap(), ep * eq);
        prop_assert_eq!(LaurentPoly::one().eval(&at).unwrap(), BigRational::one());
    }

    #[test]
    fn monomial_division_never_fails(p in laurent(), e in [-4i32..=4, -4..=4, -4..=4], c in prop::sample::select(vec![-1i64, 1])) {
        let m = LaurentPoly::monomial(Monomial3(e), c);
        let q = p.exact_div(&m).unwrap();
        prop_assert_eq!(&q * &m, p);
    }

    #[test]
    fn mutation_is_an_involution(
        params in prop::array::uniform8(-3i64..=3), c in prop::array::uniform3(-5i64..=5), v in var(),
    ) {
        let p = MasterParams::new(
            [rat(params[0]), rat(params[1]), rat(params[2])],
            [rat(params[3]), rat(params[4]), rat(params[5])],
            rat(params[6]),
            rat(params[7]),
        );
        let c = Cluster(c.map(rat));
        prop_assume!(!c.get(v).is_zero());
        let m = master::mutate(&p, &c, v).unwrap();
        prop_assume!(!m.get(v).is_zero());
        prop_assert_eq!(master::mutate(&p, &m, v).unwrap(), c.clone());
        // residual scaling by F_i / x_i², on or off the solution set
        let f = master::exchange_value(&p, &c, v);
        let xi = c.get(v).clone();
        prop_assert_eq!(master::residual(&p, &m), master::residual(&p, &c) * f / (xi.clone() * xi));
    }

    #[test]
    fn local_rule_preserves_the_invariant(params in prop::array::uniform8(-3i64..=3), c in prop::array::uniform3(-5i64..=5), v in var()) {
        let p = MasterParams::new(
            [params[0] as i128, params[1] as i128, params[2] as i128],
            [params[3] as i128, params[4] as i128, params[5] as i128],
            params[6] as i128,
            params[7] as i128,
        );
        let c = Cluster(c.map(|x| x as i128));
        let m = master::local_rule(&p, &c, v);
        prop_assert_eq!(master::invariant(&p, &m), master::invariant(&p, &c));
    }

    #[test]
    fn rules_agree_on_solutions(params in prop::array::uniform8(-3i64..=3), c in prop::array::uniform3(-5i64..=5), v in var()) {
        let mut p = MasterParams::new(
            [rat(params[0]), rat(params[1]), rat(params[2])],
            [rat(params[3]), rat(params[4]), rat(params[5])],
            rat(params[6]),
            rat(params[7]),
        );
        let c = Cluster(c.map(rat));
        prop_assume!(!c.get(v).is_zero());
        // move ζ so that c solves the master equation
        p.zeta = -master::invariant(&p, &c);
        prop_assert!(master::residual(&p, &c).is_zero());
        let m = master::mutate(&p, &c, v).unwrap();
        prop_assert_eq!(&m, &master::local_rule(&p, &c, v));
        prop_assert_eq!(master::invariant(&p, &m), master::invariant(&p, &c));
    }

    #[test]
    fn walk_matrix_is_multiplicative(
        a in prop::collection::vec(prop::sample::select(GroupGenerator::ALL.to_vec()), 0..8),
        b in prop::collection::vec(prop::sample::select(GroupGenerator::ALL.to_vec()), 0..8),
    ) {
        let joined: Vec<_> = a.iter().chain(&b).copied().collect();
        let m = topograph::walk_matrix(&joined);
        prop_assert_eq!(m, topograph::walk_matrix(&a) * topograph::walk_matrix(&b));
        prop_assert_eq!(m.det().abs(), 1);
    }

    #[test]
    fn presentation_relations_hold_on_clusters(c in [1i128..=30, 1..=30, 1..=30]) {
        use GroupGenerator::*;
        let p = MasterParams::<i128>::discriminant(forms::discriminant(&c));
        let c = Cluster(c);
        let run = |gens: &[GroupGenerator]| -> Option<Cluster<i128>> {
            let mut x = c.clone();
            for g in gens {
                x = topograph::apply(&p, &x, *g).ok()?;
            }
            Some(x)
        };
        let relations: [&[GroupGenerator]; 8] = [
            &[S, S], &[T, T], &[U, U], &[S, U, S, U], &[U, T, U, T, U, T],
            &[E, E], &[V, V, V], &[U, V, U, V],
        ];
        for r in relations {
            if let Some(x) = run(r) {
                prop_assert_eq!(&x, &c, "relation {:?}", r);
            }
        }
        if let Some(x) = run(&[E, U, E, U]) {
            prop_assert_eq!(x, c.clone());
        }
    }

    #[test]
    fn word_symmetries_are_involutions(body in letters(12)) {
        let w = Word::new(false, body);
        let o = snake::opposite(&w).unwrap();
        let d = snake::dual(&w).unwrap();
        prop_assert_eq!(snake::opposite(&o).unwrap(), w.clone());
        prop_assert_eq!(snake::dual(&d).unwrap(), w.clone());
        let c = snake::codual(&w).unwrap();
        prop_assert_eq!(snake::codual(&c).unwrap(), w.clone());
        prop_assert_eq!(&c, &snake::dual(&o).unwrap());
        prop_assert_eq!(&c, &snake::opposite(&d).unwrap());
    }

    #[test]
    fn fast_counts_match_brute_force(body in letters(10), has_s in any::<bool>()) {
        let w = Word::new(has_s, body);
        let rs = snake::build_graph(&w);
        let (total, rattle) = snake::counts_fast(&w);
        prop_assert_eq!(snake::count_matchings(&rs.graph).unwrap(), total);
        prop_assert_eq!(snake::count_matchings_with_rattle(&rs).unwrap(), rattle);
    }

    #[test]
    fn opposite_word_reciprocates_the_fraction(body in letters(12)) {
        let w = Word::new(false, body.clone());
        let o = Word::new(false, snake::opposite_body(&body));
        let (f, g) = (snake::word_to_fraction(&w), snake::word_to_fraction(&o));
        prop_assert_eq!(f.num(), g.den());
        prop_assert_eq!(f.den(), g.num());
    }

    #[test]
    fn reduction_logs_follow_the_conway_rule(c in nondegenerate_cluster(60)) {
        let q = QuadForm::from_cluster(c[0], c[1], c[2]);
        let disc = q.discriminant();
        let (tuple, log) = forms::reduce(&q).unwrap();
        for s in &log.steps {
            prop_assert!(progression_holds(&s.from, &s.to, s.slot), "{:?}", s);
            prop_assert_eq!(forms::discriminant(&s.to), disc);
        }
        for w in log.steps.windows(2) {
            prop_assert_eq!(w[0].to, w[1].from);
        }
        // every reduced vertex is of the kind its discriminant allows
        let expected = match disc {
            d if d < 0 => "well",
            0 => "lake",
            d if exact_sqrt(&BigInt::from(d)).is_some() => "mouths",
            _ => "bends",
        };
        prop_assert_eq!(tuple.kind(), expected);
    }

    #[test]
    fn mouths_carry_their_sign_pattern(f in prop::array::uniform4(-6i128..=6)) {
        // (p x + q y)(r x + s y) has discriminant (p s − q r)²
        let [p, q, r, s] = f;
        prop_assume!(p * s != q * r);
        let form = QuadForm::from_coefficients(p * r, p * s + q * r, q * s);
        let disc = form.discriminant();
        let (tuple, _) = forms::reduce(&form).unwrap();
        let ReducedTuple::Mouths { left, right } = &tuple else {
            return Err(TestCaseError::fail(format!("{form}: no mouths")));
        };
        let sign = |t: [i128; 3]| t.map(i128::signum);
        let weir = |t: [i128; 3]| t.iter().filter(|x| **x == 0).count() == 2;
        for (m, side, pattern) in [(left, Side::Left, [-1, 0, 1]), (right, Side::Right, [1, 0, -1])] {
            let t = m.oriented();
            if weir(t) {
                prop_assert!(matches!(classify_vertex(&t, disc).unwrap(), VertexKind::Weir(_)));
                continue;
            }
            prop_assert_eq!(classify_vertex(&t, disc).unwrap(), VertexKind::Mouth(side), "{}: {:?}", form, t);
            let rot = [t, [t[1], t[2], t[0]], [t[2], t[0], t[1]]];
            prop_assert!(rot.iter().any(|r| sign(*r) == pattern), "{}: {:?}", form, t);
        }
    }

    #[test]
    fn definite_reductions_are_laurent_certificates(c in [1i128..=40, 1..=40, 1..=40]) {
        let q = QuadForm::from_cluster(c[0], c[1], c[2]);
        prop_assume!(q.discriminant() < 0);
        let (_, log) = forms::reduce(&q).unwrap();
        let at = Cluster(c.map(|x| BigRational::from_integer(x.into())));
        let mut seed = Seed::identity(MasterParams::discriminant(BigInt::from(q.discriminant())));
        for (s, v) in log.steps.iter().zip(log.mutations()) {
            seed = master::mutate_seed(&seed, v).unwrap();
            let value = seed.eval(&at).unwrap();
            prop_assert_eq!(value.0.to_vec(), s.to.map(|x| BigRational::from_integer(x.into())).to_vec());
        }
    }
}

#[test]
fn markov_bfs_stays_on_the_markov_surface() {
    let p = MasterParams::<i128>::markov();
    let r = topograph::bfs(&p, &Cluster::new(1, 1, 1), 6);
    assert!(r.nodes.keys().all(|c| master::residual(&p, c) == 0));
}

#[test]
fn mu_matrices_factor_projectively() {
    use GroupGenerator::*;
    let prod = |g: &[GroupGenerator]| topograph::walk_matrix(g);
    assert!(Mu1.matrix().projectively_eq(&prod(&[V, S, V2])));
    assert!(Mu3.matrix().projectively_eq(&prod(&[V2, S, V])));
    assert_eq!(Mu2.matrix(), S.matrix());
    assert_eq!(prod(&[]), Mat2::IDENTITY);
}
