//! Reduce a few binary quadratic forms and print the walk, the mutation
//! chain and the reduced tuple.
//!
//! ```bash
//! cargo run --example reduce_form
//! ```

use topography::forms::{self, QuadForm};

fn main() -> topography::Result<()> {
    let forms = [
        QuadForm::from_coefficients(16, 81, 103),
        QuadForm::from_cluster(18, 2, 7),
        QuadForm::from_coefficients(1, 2, 1),
        QuadForm::from_coefficients(2, 1, -3),
    ];
    for q in forms {
        let (tuple, log) = forms::reduce(&q)?;
        println!("{q}  disc {}  root {}", q.discriminant(), forms::root(&q));
        println!("  word {}  complete {}", log.word, log.word_complete);
        for s in &log.steps {
            let how = if s.hop { "hop" } else { "mu" };
            println!("  {how}{} {:?} -> {:?}", s.slot, s.from, s.to);
        }
        println!("  {} {:?}", tuple.kind(), forms::canonical_reduced_cluster(&tuple));
    }
    Ok(())
}
