//! Cutting sequences of form roots through the Farey tessellation.

use topography::forms::{self, QuadForm};

fn main() {
    for (a, b, c) in [(16, 81, 103), (2, 1, -3), (1, 0, -2), (0, 3, 1)] {
        let q = QuadForm::from_coefficients(a, b, c);
        let z = forms::root(&q);
        let walk = forms::farey_walk(&z, 24);
        println!("{q}: root {z}");
        if walk.terminated {
            println!("  {} ends at {}", walk.word, walk.endpoint);
        } else {
            println!("  {}... still heading for {}", walk.word, walk.endpoint);
        }
    }
}
