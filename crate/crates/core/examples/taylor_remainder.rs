//! `||S_t u0 - u0 - t E0||` in `B^{s-2}_{2,inf}` over a dyadic time ladder.
//! The fitted slope should be close to 2.
//!
//! ```text
//! cargo run --release --example taylor_remainder [alpha]
//! ```

use zerofilter::experiments::{run_taylor, ExperimentConfig};
use zerofilter::FilterParam;

fn main() -> zerofilter::Result<()> {
    let alpha: f64 = std::env::args()
        .nth(1)
        .map_or(0.5, |a| a.parse().expect("alpha"));
    let cfg = ExperimentConfig::default();
    let out = run_taylor(&cfg, FilterParam::new(alpha)?)?;
    for row in out.report.rows() {
        println!(
            "t = {:.3e}  remainder = {:.6e}  r/t^2 = {:.6}",
            row[1],
            row[2],
            row[2] / (row[1] * row[1])
        );
    }
    for note in out.report.notes() {
        println!("{note}");
    }
    out.status()
}
