//! Transforms, derivatives and the 2/3 rule on a periodic grid.

use std::f64::consts::PI;

use zerofilter::{Grid, RealField};

fn main() -> zerofilter::Result<()> {
    let grid = Grid::new(256, 2.0 * PI)?;
    println!(
        "N = {}, dx = {:.4}, nyquist = {}, kept |k| <= {}",
        grid.n_points(),
        grid.dx(),
        grid.nyquist(),
        grid.dealias_index()
    );

    let u = RealField::from_fn(&grid, |x| (3.0 * x).sin() + 0.5 * (7.0 * x).cos())?;
    let spec = u.transform()?;
    // c_k / N picks out the amplitudes
    for k in [3, 7] {
        println!("mode {k}: {:.6}", spec.mode(k) / grid.n_points() as f64);
    }

    let ux = u.derivative(1)?;
    let exact = RealField::from_fn(&grid, |x| 3.0 * (3.0 * x).cos() - 3.5 * (7.0 * x).sin())?;
    println!("derivative error {:.3e}", ux.sub(&exact)?.max_abs());

    // modes 60 and 40 sum past N/3; the truncated product keeps only the difference
    let a = RealField::from_fn(&grid, |x| (60.0 * x).cos())?;
    let b = RealField::from_fn(&grid, |x| (40.0 * x).cos())?;
    let p = a.dealiased_product(&b)?;
    println!(
        "|p_20| = {:.3}, |p_100| = {:.3}",
        p.mode(20).norm() / grid.n_points() as f64,
        p.mode(100).norm()
    );
    Ok(())
}
