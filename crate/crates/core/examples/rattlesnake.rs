//! Words, rattlesnakes and the fractions they count.

use topography::exact::Farey;
use topography::snake::{self, Word};

fn main() -> topography::Result<()> {
    for w in ["LRL", "SRLL", "RRRR", "SLRLR"] {
        let word: Word = w.parse()?;
        let rs = snake::build_graph(&word);
        let total = snake::count_matchings(&rs.graph)?;
        let rattle = snake::count_matchings_with_rattle(&rs)?;
        println!(
            "{w}: {} tiles, {total} matchings, {rattle} through the rattle, fraction {}",
            rs.graph.tile_count(),
            snake::word_to_fraction(&word)
        );
    }
    for f in [Farey::new(-5, 2), Farey::new(13, 8)] {
        let rs = snake::fraction_to_rattlesnake(&f);
        println!("{f} -> {} -> {}", rs.word, snake::rattlesnake_to_fraction(&rs)?);
    }
    Ok(())
}
