//! Littlewood-Paley cutoffs, dyadic blocks and nonhomogeneous Besov norms
//! `B^s_{2,q}`.
//!
//! The cutoffs come from one smooth plateau function `theta`, equal to 1 on
//! `|xi| <= 3/4` and 0 on `|xi| >= 4/3`. Then `chi = theta` and
//! `phi(xi) = theta(xi/2) - theta(xi)`, so the partial sums telescope:
//! `chi + sum_{j<=J} phi(2^-j xi) = theta(2^-(J+1) xi)`.

use crate::error::{Error, Result};
use crate::grid::{Grid, RealField, Spectrum};

/// `exp(-1/t)` for `t > 0`, zero otherwise.
pub fn smooth_ramp(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth step from 0 (`t <= 0`) to 1 (`t >= 1`), with `S(1/2) = 1/2`.
pub fn smoothstep(t: f64) -> f64 {
    let a = smooth_ramp(t);
    let b = smooth_ramp(1.0 - t);
    a / (a + b)
}

/// The radial pair `(chi, phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffPair {
    inner: f64,
    outer: f64,
}

impl Default for CutoffPair {
    fn default() -> Self {
        Self {
            inner: 0.75,
            outer: 4.0 / 3.0,
        }
    }
}

/// Standard cutoffs with plateau radius 3/4 and support radius 4/3.
pub fn build_cutoffs() -> CutoffPair {
    CutoffPair::default()
}

impl CutoffPair {
    /// Radius of the plateau where `chi = 1`.
    pub fn inner(&self) -> f64 {
        self.inner
    }

    /// Radius outside which `chi = 0`.
    pub fn outer(&self) -> f64 {
        self.outer
    }

    /// Plateau function: 1 on `|xi| <= 3/4`, 0 on `|xi| >= 4/3`.
    pub fn theta(&self, xi: f64) -> f64 {
        smoothstep((self.outer - xi.abs()) / (self.outer - self.inner))
    }

    pub fn chi(&self, xi: f64) -> f64 {
        self.theta(xi)
    }

    pub fn phi(&self, xi: f64) -> f64 {
        self.theta(0.5 * xi) - self.theta(xi)
    }

    /// Symbol of `Delta_j`. Zero for `j <= -2`.
    pub fn block_symbol(&self, j: i32, xi: f64) -> f64 {
        match j {
            j if j < -1 => 0.0,
            -1 => self.chi(xi),
            j => self.phi(xi * (-(j as f64)).exp2()),
        }
    }

    /// Number of dyadic annuli needed to cover `|xi|`: the first `J` such
    /// that `phi(2^-j xi) = 0` for every `j > J`.
    fn last_active_block(&self, xi: f64) -> i32 {
        let a = xi.abs();
        if a <= self.inner {
            return -1;
        }
        (a / self.inner).log2().ceil() as i32
    }

    /// `chi(xi) + sum_{j>=0} phi(2^-j xi)`, summed term by term.
    pub fn partition_sum(&self, xi: f64) -> f64 {
        (-1..=self.last_active_block(xi))
            .map(|j| self.block_symbol(j, xi))
            .sum()
    }

    /// `chi(xi)^2 + sum_{j>=0} phi(2^-j xi)^2`.
    pub fn square_sum(&self, xi: f64) -> f64 {
        (-1..=self.last_active_block(xi))
            .map(|j| self.block_symbol(j, xi).powi(2))
            .sum()
    }

    /// `sum_{j>=0} phi(2^-j xi)`.
    pub fn phi_sum(&self, xi: f64) -> f64 {
        (0..=self.last_active_block(xi))
            .map(|j| self.block_symbol(j, xi))
            .sum()
    }
}

/// Largest block index whose annulus `|xi| <= 2^j 8/3` lies below the grid
/// Nyquist frequency. Returns -1 when only the low-frequency block fits.
pub fn j_max(grid: &Grid) -> i32 {
    let ratio = grid.nyquist() * 3.0 / 8.0;
    if ratio < 1.0 {
        -1
    } else {
        ratio.log2().floor() as i32
    }
}

fn check_block(grid: &Grid, j: i32) -> Result<()> {
    let top = j_max(grid);
    if j < -1 || j > top {
        return Err(Error::BlockOutOfRange { j, j_max: top });
    }
    Ok(())
}

/// `Delta_j` applied to a spectrum.
pub fn block_spectrum(cutoffs: &CutoffPair, spectrum: &Spectrum, j: i32) -> Result<Spectrum> {
    check_block(spectrum.grid(), j)?;
    Ok(spectrum.scale_even(|xi| cutoffs.block_symbol(j, xi)))
}

/// `Delta_j f` for `-1 <= j <= j_max`.
pub fn dyadic_block(cutoffs: &CutoffPair, field: &RealField, j: i32) -> Result<RealField> {
    check_block(field.grid(), j)?;
    let spec = field.transform()?;
    Ok(block_spectrum(cutoffs, &spec, j)?.inverse_unchecked())
}

/// The family `Delta_j f`, `j = -1 ..= j_max`.
#[derive(Clone, Debug)]
pub struct DyadicDecomposition {
    blocks: Vec<RealField>,
    j_max: i32,
}

impl DyadicDecomposition {
    pub fn new(cutoffs: &CutoffPair, field: &RealField) -> Result<Self> {
        let top = j_max(field.grid());
        let spec = field.transform()?;
        let blocks = (-1..=top)
            .map(|j| {
                spec.scale_even(|xi| cutoffs.block_symbol(j, xi))
                    .inverse_unchecked()
            })
            .collect();
        Ok(Self { blocks, j_max: top })
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn block(&self, j: i32) -> Option<&RealField> {
        if j < -1 {
            return None;
        }
        self.blocks.get((j + 1) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &RealField)> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (i as i32 - 1, b))
    }

    /// `sum_j Delta_j f`.
    pub fn reconstruct(&self) -> RealField {
        let grid = self.blocks[0].grid();
        let mut acc = vec![0.0; grid.n_points()];
        for b in &self.blocks {
            for (a, v) in acc.iter_mut().zip(b.samples()) {
                *a += v;
            }
        }
        RealField::from_vec_unchecked(grid, acc)
    }
}

/// `||Delta_j f||_{L2}` for `j = -1 ..= j_max`, computed by Parseval from a
/// single spectrum. Index `i` of the result is block `j = i - 1`.
pub fn block_norms(cutoffs: &CutoffPair, spectrum: &Spectrum) -> Vec<f64> {
    let top = j_max(spectrum.grid());
    (-1..=top)
        .map(|j| spectrum.weighted_l2_norm(|xi| cutoffs.block_symbol(j, xi)))
        .collect()
}

/// Summability index of a Besov norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SumIndex {
    Finite(f64),
    Infinity,
}

impl SumIndex {
    pub fn from_f64(q: f64) -> Result<Self> {
        if q.is_nan() || q < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "q must lie in [1, inf], got {q}"
            )));
        }
        Ok(if q.is_infinite() {
            SumIndex::Infinity
        } else {
            SumIndex::Finite(q)
        })
    }
}

/// Combines block norms into the `B^s_{2,q}` norm.
pub fn besov_from_blocks(norms: &[f64], s: f64, q: SumIndex) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "s must be finite, got {s}"
        )));
    }
    let weighted = norms
        .iter()
        .enumerate()
        .map(|(i, n)| (s * (i as f64 - 1.0)).exp2() * n);
    let value = match q {
        SumIndex::Infinity => weighted.fold(0.0, f64::max),
        SumIndex::Finite(q) => {
            if !(q.is_finite() && q >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "q must lie in [1, inf], got {q}"
                )));
            }
            weighted.map(|w| w.powf(q)).sum::<f64>().powf(1.0 / q)
        }
    };
    if !value.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Besov norm overflowed for s = {s}"
        )));
    }
    Ok(value)
}

/// `||f||_{B^s_{2,q}}` over the blocks `-1 ..= j_max` of the grid.
pub fn besov_norm(cutoffs: &CutoffPair, field: &RealField, s: f64, q: SumIndex) -> Result<f64> {
    let spec = field.transform()?;
    besov_from_blocks(&block_norms(cutoffs, &spec), s, q)
}

/// `B^s_{2,inf}` norm of a field given in frequency space.
pub fn besov_sup_norm_spectrum(cutoffs: &CutoffPair, spectrum: &Spectrum, s: f64) -> Result<f64> {
    besov_from_blocks(&block_norms(cutoffs, spectrum), s, SumIndex::Infinity)
}

/// The commutator `[Delta_j, f] d_x g = Delta_j(f g_x) - f Delta_j(g_x)`,
/// with both products truncated by the 2/3 rule.
pub fn commutator_block(
    cutoffs: &CutoffPair,
    f: &RealField,
    g: &RealField,
    j: i32,
) -> Result<RealField> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    check_block(f.grid(), j)?;
    let gx_spec = g.transform()?.derivative(1);
    let gx = gx_spec.inverse_unchecked();
    let outer = f.dealiased_product(&gx)?;
    let outer = block_spectrum(cutoffs, &outer, j)?;
    let inner_block = block_spectrum(cutoffs, &gx_spec, j)?.inverse_unchecked();
    let inner = f.dealiased_product(&inner_block)?;
    Ok(outer.sub(&inner)?.inverse_unchecked())
}
