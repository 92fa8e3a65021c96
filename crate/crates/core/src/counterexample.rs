//! The lacunary wave-packet datum
//!
//! ```text
//! u0(x) = sum_{n=0}^{N} 2^{-ns} phi(x) cos(17/12 2^n x)
//! ```
//!
//! where `phi` is the inverse Fourier transform of a smooth even bump equal
//! to 1 on `|xi| <= 1/4` and vanishing for `|xi| >= 1/2`. Packet `n` has its
//! spectrum in `17/12 2^n +- 1/2`, which for `n >= 3` sits inside the plateau
//! of `phi(2^-n .)`, so `Delta_n u0` is exactly packet `n`.
//!
//! Packets are synthesized in frequency space: the grid spectrum is the
//! shifted bump sampled on the frequency axis, which is the periodization of
//! `phi(x) cos(lambda x)` over the box.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::filter::FilterParam;
use crate::grid::{Grid, RealField, Spectrum};
use crate::littlewood_paley::{block_spectrum, j_max, smoothstep, CutoffPair};

/// Base frequency of the packets, `17/12`.
pub const PACKET_FREQUENCY: f64 = 17.0 / 12.0;

/// Smallest packet index for which the block identity is exact with the
/// standard cutoffs.
pub const FIRST_EXACT_PACKET: u32 = 3;

/// Frequency of packet `n`.
pub fn packet_frequency(n: u32) -> f64 {
    PACKET_FREQUENCY * (n as f64).exp2()
}

/// Even bump: 1 on `|xi| <= 1/4`, 0 on `|xi| >= 1/2`, smooth in between.
pub fn bump_hat(xi: f64) -> f64 {
    let a = xi.abs();
    if a <= 0.25 {
        1.0
    } else if a >= 0.5 {
        0.0
    } else {
        smoothstep((0.5 - a) * 4.0)
    }
}

/// The bump in frequency space together with `phi` on a grid.
#[derive(Clone, Debug)]
pub struct BumpProfile {
    phi_field: RealField,
}

impl BumpProfile {
    pub fn new(grid: &Grid) -> Result<Self> {
        Ok(Self {
            phi_field: phi_profile(grid)?,
        })
    }

    pub fn hat_phi(&self, xi: f64) -> f64 {
        bump_hat(xi)
    }

    pub fn phi_field(&self) -> &RealField {
        &self.phi_field
    }
}

fn check_frequency_resolution(grid: &Grid) -> Result<()> {
    if grid.dxi() > 1.0 / 16.0 + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "frequency spacing {:.4} exceeds 1/16; enlarge the box",
            grid.dxi()
        )));
    }
    Ok(())
}

/// Spectrum of `amplitude * phi(x) cos(lambda x)`.
pub fn packet_spectrum(grid: &Grid, lambda: f64, amplitude: f64) -> Spectrum {
    let n = grid.n_points();
    let scale = amplitude * n as f64 / grid.box_length();
    let coeffs = grid
        .wavenumbers()
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            // x_0 = -L/2 shifts every mode by (-1)^k.
            let sign = if grid.mode_index(i) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            let v = 0.5 * (bump_hat(xi - lambda) + bump_hat(xi + lambda));
            Complex64::new(scale * sign * v, 0.0)
        })
        .collect();
    Spectrum::new(grid, coeffs).expect("finite packet coefficients")
}

/// `phi = F^-1(bump_hat)` sampled on the grid.
pub fn phi_profile(grid: &Grid) -> Result<RealField> {
    check_frequency_resolution(grid)?;
    Ok(packet_spectrum(grid, 0.0, 1.0).inverse_unchecked())
}

/// `amplitude * phi(x) cos(17/12 2^n x)`.
pub fn packet(grid: &Grid, n: u32, amplitude: f64) -> Result<RealField> {
    check_frequency_resolution(grid)?;
    Ok(packet_spectrum(grid, packet_frequency(n), amplitude).inverse_unchecked())
}

/// Largest packet index the grid carries alias-free and inside a
/// refusable block range.
pub fn max_admissible_terms(grid: &Grid) -> i32 {
    let mut n = -1;
    while n < 62 {
        let next = (n + 1) as u32;
        let top = packet_frequency(next) + 0.5;
        if top > grid.dealias_frequency() || (next as i32) > j_max(grid) {
            break;
        }
        n += 1;
    }
    n
}

/// `sum_{n=0}^{N} 2^{-ns}`.
pub fn geometric_weight(s: f64, n_terms: u32) -> f64 {
    (1.0 - (-s * (n_terms as f64 + 1.0)).exp2()) / (1.0 - (-s).exp2())
}

/// Bound on `||u0||_{B^s_{2,inf}}` for `s = 2` on the default grid,
/// any `n_terms <= 8`. Calibrated once (measured 0.2366), then frozen.
pub const C_DATA: f64 = 0.3;

/// Truncated counterexample datum.
#[derive(Clone, Debug)]
pub struct CounterexampleDatum {
    s: f64,
    n_terms: u32,
    field: RealField,
    phi: RealField,
}

impl CounterexampleDatum {
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn n_terms(&self) -> u32 {
        self.n_terms
    }

    pub fn field(&self) -> &RealField {
        &self.field
    }

    pub fn phi(&self) -> &RealField {
        &self.phi
    }

    pub fn grid(&self) -> &Grid {
        self.field.grid()
    }

    /// Packet `n` of the sum, `2^{-ns} phi(x) cos(17/12 2^n x)`.
    pub fn term(&self, n: u32) -> Result<RealField> {
        packet(self.grid(), n, (-(n as f64) * self.s).exp2())
    }

    /// `u0(0) / phi(0)`.
    pub fn center_ratio(&self) -> f64 {
        let mid = self.grid().n_points() / 2;
        self.field.samples()[mid] / self.phi.samples()[mid]
    }

    /// Same datum scaled by `a`.
    pub fn scaled(&self, a: f64) -> Self {
        Self {
            s: self.s,
            n_terms: self.n_terms,
            field: self.field.scale(a),
            phi: self.phi.clone(),
        }
    }

    fn check_packet_index(&self, n: u32) -> Result<()> {
        if n < FIRST_EXACT_PACKET || n > self.n_terms {
            return Err(Error::InvalidParameter(format!(
                "packet index {n} outside [{FIRST_EXACT_PACKET}, {}]",
                self.n_terms
            )));
        }
        Ok(())
    }
}

/// Builds the datum with packets `0 ..= n_terms`.
pub fn make_u0(grid: &Grid, s: f64, n_terms: u32) -> Result<CounterexampleDatum> {
    if !(s.is_finite() && s > 1.5) {
        return Err(Error::InvalidParameter(format!(
            "s must exceed 3/2, got {s}"
        )));
    }
    let max_terms = max_admissible_terms(grid);
    if n_terms as i32 > max_terms {
        return Err(Error::InsufficientResolution {
            requested: n_terms,
            max_admissible: max_terms,
        });
    }
    let mut spec = packet_spectrum(grid, 0.0, 0.0);
    for n in 0..=n_terms {
        let amp = (-(n as f64) * s).exp2();
        spec = spec.add(&packet_spectrum(grid, packet_frequency(n), amp))?;
    }
    let datum = CounterexampleDatum {
        s,
        n_terms,
        field: spec.inverse()?,
        phi: phi_profile(grid)?,
    };
    let want = geometric_weight(s, n_terms);
    let got = datum.center_ratio();
    if (got - want).abs() > 1e-6 * want {
        return Err(Error::Invariant(format!(
            "u0(0)/phi(0) = {got}, expected the geometric sum {want}"
        )));
    }
    Ok(datum)
}

/// Relative L2 distance between `Delta_n u0` and packet `n`.
pub fn block_identity_error(
    cutoffs: &CutoffPair,
    datum: &CounterexampleDatum,
    n: u32,
) -> Result<f64> {
    datum.check_packet_index(n)?;
    let spec = datum.field.transform()?;
    let block = block_spectrum(cutoffs, &spec, n as i32)?;
    let reference = packet_spectrum(
        datum.grid(),
        packet_frequency(n),
        (-(n as f64) * datum.s).exp2(),
    );
    Ok(block.sub(&reference)?.l2_norm() / reference.l2_norm())
}

/// `E0(alpha, v0) = -3 v0 v0' - alpha^2 d^3 (1 - alpha^2 d^2)^-1 v0^2
///  - alpha^2/2 d (1 - alpha^2 d^2)^-1 (v0')^2`, the time derivative of the
/// filtered flow at `t = 0`.
pub fn e0_approximant(v0: &RealField, alpha: FilterParam) -> Result<RealField> {
    let spec = e0_spectrum(v0, alpha)?;
    let out = spec.inverse_unchecked();
    if !out.is_finite() {
        return Err(Error::NonFinite("e0 output"));
    }
    Ok(out)
}

pub(crate) fn e0_spectrum(v0: &RealField, alpha: FilterParam) -> Result<Spectrum> {
    let v_hat = v0.transform()?;
    let vx = v_hat.derivative(1).inverse_unchecked();
    let transport = v0.dealiased_product(&vx)?.scale(-3.0);
    if alpha.is_zero() {
        return Ok(transport);
    }
    let a2 = alpha.value() * alpha.value();
    let square = v0
        .dealiased_product(v0)?
        .scale_even(|xi| alpha.helmholtz_symbol(xi))
        .derivative(3)
        .scale(-a2);
    let slope = vx
        .dealiased_product(&vx)?
        .scale_even(|xi| alpha.helmholtz_symbol(xi))
        .derivative(1)
        .scale(-0.5 * a2);
    transport.add(&square)?.add(&slope)
}

/// `2^{n(s-1)} ||Delta_n (u0 u0')||_{L2}`.
pub fn block_product_lower_bound(
    cutoffs: &CutoffPair,
    datum: &CounterexampleDatum,
    n: u32,
) -> Result<f64> {
    datum.check_packet_index(n)?;
    let ux = datum.field.derivative(1)?;
    let product = datum.field.dealiased_product(&ux)?;
    let block = block_spectrum(cutoffs, &product, n as i32)?;
    Ok((n as f64 * (datum.s - 1.0)).exp2() * block.l2_norm())
}

/// Result of the pointwise-floor search around `x = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointwiseFloor {
    pub center_value: f64,
    /// Largest `delta` with `|u0(x)| >= |u0(0)|/2` for every grid `|x| <= delta`.
    pub delta: f64,
    pub min_in_ball: f64,
}

pub fn pointwise_floor(datum: &CounterexampleDatum) -> PointwiseFloor {
    let grid = datum.grid();
    let u = datum.field.samples();
    let mid = grid.n_points() / 2;
    let center = u[mid];
    let floor = 0.5 * center.abs();
    let mut radius = 0;
    let mut min_seen = center.abs();
    while radius + 1 < mid {
        let r = radius + 1;
        let lo = u[mid - r].abs();
        let hi = u[mid + r].abs();
        if lo < floor || hi < floor {
            break;
        }
        min_seen = min_seen.min(lo).min(hi);
        radius = r;
    }
    PointwiseFloor {
        center_value: center,
        delta: radius as f64 * grid.dx(),
        min_in_ball: min_seen,
    }
}
