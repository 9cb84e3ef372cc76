//! Compare forms under GL2(Z) and SL2(Z).

use topography::forms::{equivalent, strict_equivalent, QuadForm};

fn main() -> topography::Result<()> {
    let pairs = [
        ((2, 1, 4), (2, -1, 4)),
        ((2, 3, 4), (4, 3, 2)),
        ((1, 1, 8), (2, 1, 4)),
        ((1, 0, -2), (-1, 0, 2)),
        ((3, 1, -2), (-2, 1, 3)),
    ];
    for (a, b) in pairs {
        let p = QuadForm::from_coefficients(a.0, a.1, a.2);
        let q = QuadForm::from_coefficients(b.0, b.1, b.2);
        println!(
            "{a:?} ~ {b:?}: GL2 {}, SL2 {}",
            equivalent(&p, &q)?,
            strict_equivalent(&p, &q)?
        );
    }
    Ok(())
}
