//! Commutator and Helmholtz multiplier estimates on random fields.

use std::f64::consts::PI;

use zerofilter::filter::multiplier_bound_check;
use zerofilter::littlewood_paley::{besov_norm, commutator_block, j_max};
use zerofilter::{build_cutoffs, FilterParam, Grid, RealField, SumIndex};

fn field(grid: &Grid, phase: f64) -> zerofilter::Result<RealField> {
    RealField::from_fn(grid, |x| {
        (1..60)
            .map(|k| {
                let k = k as f64;
                (k * x + phase * k * k).cos() / (k * k)
            })
            .sum()
    })
}

fn main() -> zerofilter::Result<()> {
    let grid = Grid::new(1024, 2.0 * PI)?;
    let c = build_cutoffs();
    let f = field(&grid, 0.3)?;
    let g = field(&grid, 1.7)?;

    // ||[Delta_j, f] g_x|| against 2^-j ||f_x||_inf ||g||_{B^1}
    let fx = f.derivative(1)?.max_abs();
    let g_norm = besov_norm(&c, &g, 1.0, SumIndex::Infinity)?;
    for j in 0..=j_max(&grid) {
        let comm = commutator_block(&c, &f, &g, j)?.l2_norm();
        println!(
            "j = {j}: {:.4}",
            comm / (fx * g_norm * (-(j as f64)).exp2())
        );
    }

    for alpha in [1.0, 0.1, 0.01] {
        let r = multiplier_bound_check(&c, FilterParam::new(alpha)?, 1.5, &f)?;
        println!(
            "alpha = {alpha}: second order {:.4}, first order {:.4}, smoothing {:.4}",
            r.second_order, r.first_order, r.smoothing
        );
    }
    Ok(())
}
