//! Replay a reduction symbolically: every entry along the mutation chain is
//! a Laurent polynomial in the starting cluster, and evaluating it recovers
//! the integer chain.

use num_bigint::BigInt;
use num_rational::BigRational;
use topography::forms::{self, QuadForm};
use topography::master::{self, Cluster, MasterParams, Perm, Seed, Var};

fn main() -> topography::Result<()> {
    let q = QuadForm::from_cluster(16, 200, 103);
    let (_, log) = forms::reduce(&q)?;
    let at = Cluster(q.cluster.map(|x| BigRational::from_integer(x.into())));
    let mut seed = Seed::identity(MasterParams::discriminant(BigInt::from(q.discriminant())));
    for (step, v) in log.mutations().into_iter().enumerate() {
        seed = master::mutate_seed(&seed, v)?;
        let e = seed.entry(v);
        println!(
            "step {step}: x{} = {} ({} terms, denominator exponents {:?})",
            v.index(),
            seed.eval(&at)?.get(v),
            e.len(),
            e.denominator().0
        );
    }

    // the non-Laurent sequence: mutate, relabel without touching params, mutate
    let s = Seed::identity(MasterParams::genericity(BigInt::from(2)));
    let s = master::mutate_seed(&s, Var::X2)?.permute(Perm::T23);
    match master::mutate_seed(&s, Var::X3) {
        Err(e) => println!("generic parameters: {e}"),
        Ok(_) => println!("generic parameters stayed Laurent"),
    }
    Ok(())
}
