//! Builds the lacunary packet datum on the default grid and prints its
//! diagnostics: Besov norm, pointwise floor near the origin, block identity
//! and the product-block floor.

use zerofilter::counterexample::{make_u0, packet_frequency};
use zerofilter::experiments::{u0_info, ExperimentConfig};

fn main() -> zerofilter::Result<()> {
    let cfg = ExperimentConfig::default();
    println!("{}", u0_info(&cfg)?);

    let datum = make_u0(&cfg.grid()?, cfg.s, cfg.n_terms)?;
    for n in 0..=cfg.n_terms {
        let term = datum.term(n)?;
        println!(
            "packet {n}: lambda = {:>8.3}, amplitude {:.3e}",
            packet_frequency(n),
            term.max_abs()
        );
    }
    Ok(())
}
