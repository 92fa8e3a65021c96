//! Pseudospectral tools for the zero-filter limit of the Camassa-Holm
//! equation on a periodic box.
//!
//! - [`grid`]: periodic grid, transforms, Fourier multipliers, dealiasing.
//! - [`littlewood_paley`]: dyadic blocks and `B^s_{2,q}` norms.
//! - [`filter`]: Helmholtz filter and the CH / Burgers right-hand sides.
//! - [`counterexample`]: the lacunary wave-packet datum and its diagnostics.
//! - [`solver`]: RK4 time integration with guards.
//! - [`experiments`]: configuration, CSV reports and the experiment drivers.
//!
//! Runnable walkthroughs live in `examples/`.

pub mod counterexample;
pub mod error;
pub mod experiments;
pub mod filter;
pub mod grid;
pub mod littlewood_paley;
pub mod solver;

pub use error::{Error, Result};
pub use filter::FilterParam;
pub use grid::{Grid, RealField, Spectrum};
pub use littlewood_paley::{build_cutoffs, CutoffPair, SumIndex};
