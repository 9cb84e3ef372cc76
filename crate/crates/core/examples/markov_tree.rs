//! Markov numbers from a breadth-first walk of the topograph, plus the DOT
//! rendering of a small neighbourhood of a positive definite form.

use topography::master::{Cluster, MasterParams};
use topography::topograph;

fn main() {
    let markov = topograph::bfs(&MasterParams::<i128>::markov(), &Cluster::new(1, 1, 1), 7);
    let values: Vec<_> = markov.values().into_iter().collect();
    println!("Markov numbers within 7 mutations: {values:?}");

    let conway = MasterParams::<i128>::discriminant(-31);
    let near = topograph::bfs(&conway, &Cluster::new(2, 4, 5), 2);
    print!("{}", topograph::to_dot(&near));
}
