//! The smooth cutoff pair behind every dyadic block.
//!
//! ```text
//! cargo run --release --example cutoffs
//! ```

use zerofilter::build_cutoffs;

fn main() {
    let c = build_cutoffs();
    println!(
        "theta = 1 on |xi| <= {}, 0 on |xi| >= {}",
        c.inner(),
        c.outer()
    );
    println!(
        "{:>8} {:>10} {:>10} {:>12} {:>10}",
        "xi", "chi", "phi", "chi+sum phi", "squares"
    );
    for i in 0..=24 {
        let xi = 0.25 * i as f64;
        println!(
            "{xi:>8.2} {:>10.6} {:>10.6} {:>12.3e} {:>10.6}",
            c.chi(xi),
            c.phi(xi),
            c.partition_sum(xi) - 1.0,
            c.square_sum(xi)
        );
    }

    // frequencies seen by each block on [0, 64]
    for j in -1..=4 {
        let hits: Vec<f64> = (0..=640)
            .map(|i| 0.1 * i as f64)
            .filter(|&xi| c.block_symbol(j, xi) > 0.0)
            .collect();
        println!(
            "block {j:>2}: ({:.1}, {:.1})",
            hits.first().unwrap(),
            hits.last().unwrap()
        );
    }
}
