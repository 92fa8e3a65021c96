//! Burgers `u_t + 3 u u_x = 0` from a sine wave, run toward breaking.
//!
//! The gradient guard stops the run once `max |u_x|` has grown tenfold. The
//! tail guard is for localized data and is off here.

use std::f64::consts::PI;

use zerofilter::solver::{integrate, shock_time_estimate, SolverConfig};
use zerofilter::{Error, FilterParam, Grid, RealField};

fn main() -> zerofilter::Result<()> {
    let grid = Grid::new(2048, 2.0 * PI)?;
    let u0 = RealField::from_fn(&grid, |x| 0.5 * x.sin())?;
    let t_star = shock_time_estimate(&u0)?;
    println!("predicted breaking time {t_star:.4}");

    for frac in [0.25, 0.5, 0.75, 0.9] {
        let t = frac * t_star;
        let cfg = SolverConfig::new(FilterParam::ZERO, 1e-3, t).with_tail_tol(None);
        let traj = integrate(&u0, &cfg)?;
        let grad = traj.final_field().derivative(1)?.max_abs();
        println!(
            "t = {t:.3}: max|u_x| = {grad:.3}, exact {:.3}",
            0.5 / (1.0 - frac)
        );
    }

    match integrate(
        &u0,
        &SolverConfig::new(FilterParam::ZERO, 1e-3, 0.97 * t_star).with_tail_tol(None),
    ) {
        Err(e @ Error::ShockProximity { .. }) => println!("near breaking: {e}"),
        other => println!("unexpected: {:?}", other.map(|t| t.len())),
    }
    Ok(())
}
