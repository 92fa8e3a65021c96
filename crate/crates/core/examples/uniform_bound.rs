//! Sup-in-time Besov norm of the filtered flow for a ladder of alphas.
//! A shorter horizon than the default keeps this quick.

use zerofilter::experiments::{run_uniform, ExperimentConfig};
use zerofilter::FilterParam;

fn main() -> zerofilter::Result<()> {
    let cfg = ExperimentConfig::default();
    let alphas = [1.0, 0.25, 1.0 / 16.0, 1.0 / 256.0]
        .into_iter()
        .map(FilterParam::new)
        .collect::<zerofilter::Result<Vec<_>>>()?;
    let out = run_uniform(&cfg, &alphas, 0.2)?;
    for row in out.report.rows() {
        println!("alpha = {:<10} sup = {:.6e}", row[0], row[1]);
    }
    for c in &out.checks {
        println!("{c}");
    }
    Ok(())
}
