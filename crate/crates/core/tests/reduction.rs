use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topography::forms::{
    canonical_reduced_cluster, equivalent, oracle_reduce, reduce, strict_equivalent, QuadForm,
};
use topography::topograph::{compose, Mat2};

fn random_form(rng: &mut ChaCha8Rng, r: i128) -> QuadForm {
    loop {
        let c = [0; 3].map(|_| rng.gen_range(-r..=r));
        if c != [0, 0, 0] {
            return QuadForm::from_cluster(c[0], c[1], c[2]);
        }
    }
}

/// Product of random elementary matrices with the requested determinant sign.
fn random_matrix(rng: &mut ChaCha8Rng, det_negative: bool) -> Mat2 {
    let mut m = Mat2::IDENTITY;
    for _ in 0..rng.gen_range(1..6) {
        let k = rng.gen_range(-2..=2);
        let e = if rng.gen_bool(0.5) {
            Mat2([[1, k], [0, 1]])
        } else {
            Mat2([[1, 0], [k, 1]])
        };
        m = m * e;
    }
    if det_negative {
        m = m * Mat2([[0, 1], [1, 0]]);
    }
    m
}

fn transform(q: &QuadForm, m: Mat2) -> QuadForm {
    let [a, b, c] = compose(q.coefficients(), m);
    QuadForm::from_coefficients(a, b, c)
}

#[test]
fn reduction_matches_search_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..4000 {
        let q = random_form(&mut rng, 60);
        let (a, _) = reduce(&q).unwrap();
        let b = oracle_reduce(&q).unwrap();
        assert_eq!(a.class_key(), b.class_key(), "{q}");
        assert_eq!(
            canonical_reduced_cluster(&a),
            canonical_reduced_cluster(&b),
            "{q}"
        );
    }
}

#[test]
fn equivalence_is_invariant_under_the_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1500 {
        let q = random_form(&mut rng, 30);
        let proper = transform(&q, random_matrix(&mut rng, false));
        assert!(strict_equivalent(&q, &proper).unwrap(), "{q} ~ {proper}");
        let improper = transform(&q, random_matrix(&mut rng, true));
        assert!(equivalent(&q, &improper).unwrap(), "{q} ~ {improper}");
    }
}

/// Classical reduction of a definite form: `|b| ≤ a ≤ c`, with `b ≥ 0` when
/// `|b| = a` or `a = c`.
fn gauss_reduced(q: &QuadForm) -> [i128; 3] {
    let [mut a, mut b, mut c] = q.coefficients();
    let sign = a.signum();
    a *= sign;
    b *= sign;
    c *= sign;
    loop {
        if c < a {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if b.abs() > a {
            let k = (b + a).div_euclid(2 * a);
            c = c - b * k + a * k * k;
            b -= 2 * a * k;
            continue;
        }
        if b < 0 && (b == -a || a == c) {
            b = -b;
        }
        return [sign * a, sign * b, sign * c];
    }
}

#[test]
fn strict_equivalence_matches_gauss_for_definite_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut forms = Vec::new();
    while forms.len() < 400 {
        let q = random_form(&mut rng, 12);
        if q.discriminant() < 0 && q.discriminant() > -80 {
            forms.push(q);
        }
    }
    let mut distinct = 0;
    for (i, p) in forms.iter().enumerate() {
        for q in &forms[i + 1..] {
            if p.discriminant() != q.discriminant() {
                continue;
            }
            let expect = gauss_reduced(p) == gauss_reduced(q);
            assert_eq!(strict_equivalent(p, q).unwrap(), expect, "{p} {q}");
            distinct += usize::from(!expect);
        }
    }
    assert!(distinct > 0);
}

#[test]
fn orientation_reversal_is_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut separated = 0;
    for _ in 0..500 {
        let q = random_form(&mut rng, 30);
        let r = transform(&q, Mat2([[1, 0], [0, -1]]));
        assert!(equivalent(&q, &r).unwrap());
        separated += usize::from(!strict_equivalent(&q, &r).unwrap());
    }
    assert!(separated > 50, "{separated}");
}

/// Searches the topograph of `p` (by the polynomial rule, values bounded)
/// for a cyclic rotation of `q`'s cluster read in `p`'s orientation.
fn brute_strict(p: &QuadForm, q: &QuadForm, bound: i128) -> bool {
    use std::collections::HashSet;
    use topography::master::{local_rule, Cluster, Var};
    let params = p.params();
    let target: HashSet<[i128; 3]> = (0..3)
        .map(|r| {
            let c = q.cluster;
            [c[r], c[(r + 1) % 3], c[(r + 2) % 3]]
        })
        .collect();
    let mut seen = HashSet::from([(p.cluster, false)]);
    let mut stack = vec![(p.cluster, false)];
    while let Some((c, odd)) = stack.pop() {
        let read = if odd { [c[2], c[1], c[0]] } else { c };
        if target.contains(&read) {
            return true;
        }
        for v in Var::ALL {
            let y = local_rule(&params, &Cluster(c), v).0;
            if y.iter().all(|x| x.abs() <= bound) && seen.insert((y, !odd)) {
                stack.push((y, !odd));
            }
        }
    }
    false
}

#[test]
fn strict_equivalence_matches_topograph_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut forms = Vec::new();
    while forms.len() < 300 {
        let q = random_form(&mut rng, 8);
        if q.discriminant().abs() <= 60 {
            forms.push(q);
        }
    }
    let (mut same, mut differ) = (0, 0);
    for (i, p) in forms.iter().enumerate() {
        for q in &forms[i + 1..] {
            if p.discriminant() != q.discriminant() {
                continue;
            }
            let bound = [p.cluster, q.cluster]
                .iter()
                .flatten()
                .map(|x| x.abs())
                .max()
                .unwrap()
                .max(p.discriminant().abs())
                + 2;
            let expect = brute_strict(p, q, bound);
            assert_eq!(strict_equivalent(p, q).unwrap(), expect, "{p} {q}");
            if expect {
                same += 1;
            } else {
                differ += 1;
            }
        }
    }
    assert!(same > 0 && differ > 0);
}
