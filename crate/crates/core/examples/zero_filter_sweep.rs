//! The non-convergence sweep: along `alpha_n = 2^-n`, `t_n = eps 2^-n` the
//! gap between filtered and unfiltered solutions stays put. The single
//! smooth packet at fixed time is the contrast, where the gap is `O(alpha^2)`.
//!
//! Writes both tables as CSV to stdout.

use zerofilter::experiments::{run_contrast, run_sweep, ExperimentConfig};

fn main() -> zerofilter::Result<()> {
    let cfg = ExperimentConfig::default();
    let sweep = run_sweep(&cfg)?;
    print!("{}", sweep.report.to_csv(&cfg.echo()));

    let contrast = run_contrast(&cfg)?;
    print!("{}", contrast.report.to_csv(&cfg.echo()));

    for c in sweep.checks.iter().chain(&contrast.checks) {
        eprintln!("{c}");
    }
    sweep.status()?;
    contrast.status()
}
