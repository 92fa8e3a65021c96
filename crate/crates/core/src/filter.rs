//! The Helmholtz filter `(1 - alpha^2 d_x^2)^-1` and the right-hand sides of
//! the filtered Camassa-Holm equation
//!
//! ```text
//! u_t = -u u_x - d_x (1 - alpha^2 d_x^2)^-1 (u^2 + alpha^2/2 u_x^2)
//! ```
//!
//! and of its `alpha = 0` limit, the Burgers equation `u_t = -3 u u_x`.
//! Quadratic terms are formed pointwise, transformed, truncated by the 2/3
//! rule and only then hit by multipliers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{RealField, Spectrum};
use crate::littlewood_paley::{besov_sup_norm_spectrum, CutoffPair};

/// The filter parameter `alpha`, restricted to `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct FilterParam(f64);

impl FilterParam {
    pub const ZERO: FilterParam = FilterParam(0.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    /// Symbol of `(1 - alpha^2 d_x^2)^-1`.
    pub fn helmholtz_symbol(self, xi: f64) -> f64 {
        1.0 / (1.0 + self.0 * self.0 * xi * xi)
    }
}

/// `(1 - alpha^2 d_x^2)^-1 u`.
pub fn helmholtz_inv(field: &RealField, alpha: FilterParam) -> Result<RealField> {
    if alpha.is_zero() {
        return Ok(field.clone());
    }
    let spec = field.transform()?;
    Ok(spec
        .scale_even(|xi| alpha.helmholtz_symbol(xi))
        .inverse_unchecked())
}

/// `(1 - alpha^2 d_x^2) u`, the forward operator.
pub fn helmholtz(field: &RealField, alpha: FilterParam) -> Result<RealField> {
    let a2 = alpha.value() * alpha.value();
    let spec = field.transform()?;
    Ok(spec.scale_even(|xi| 1.0 + a2 * xi * xi).inverse_unchecked())
}

fn finite_or_err(field: RealField, what: &'static str) -> Result<RealField> {
    if field.is_finite() {
        Ok(field)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Right-hand side of the filtered Camassa-Holm equation, in frequency space.
pub fn ch_rhs_spectrum(u: &RealField, alpha: FilterParam) -> Result<Spectrum> {
    ch_rhs_spectrum_with(u, alpha, true)
}

fn truncate(spec: Spectrum, dealias: bool) -> Spectrum {
    if dealias {
        spec.dealias()
    } else {
        spec
    }
}

pub(crate) fn ch_rhs_spectrum_with(
    u: &RealField,
    alpha: FilterParam,
    dealias: bool,
) -> Result<Spectrum> {
    let a2 = alpha.value() * alpha.value();
    let u_hat = u.transform()?;
    let ux = u_hat.derivative(1).inverse_unchecked();
    let grid = u.grid();

    let uux: Vec<f64> = u
        .samples()
        .iter()
        .zip(ux.samples())
        .map(|(a, b)| a * b)
        .collect();
    let transport = truncate(
        RealField::from_vec_unchecked(grid, uux).transform_unchecked(),
        dealias,
    );

    let source: Vec<f64> = u
        .samples()
        .iter()
        .zip(ux.samples())
        .map(|(a, b)| a * a + 0.5 * a2 * b * b)
        .collect();
    let source = truncate(
        RealField::from_vec_unchecked(grid, source).transform_unchecked(),
        dealias,
    );
    let flux = source
        .scale_even(|xi| alpha.helmholtz_symbol(xi))
        .derivative(1);

    Ok(transport.add(&flux)?.scale(-1.0))
}

/// `-u u_x - d_x (1 - alpha^2 d_x^2)^-1 (u^2 + alpha^2/2 u_x^2)`.
pub fn ch_rhs(u: &RealField, alpha: FilterParam) -> Result<RealField> {
    finite_or_err(
        ch_rhs_spectrum(u, alpha)?.inverse_unchecked(),
        "ch_rhs output",
    )
}

/// Right-hand side of Burgers in conservative form, in frequency space.
pub fn burgers_rhs_spectrum(u: &RealField) -> Result<Spectrum> {
    burgers_rhs_spectrum_with(u, true)
}

pub(crate) fn burgers_rhs_spectrum_with(u: &RealField, dealias: bool) -> Result<Spectrum> {
    let sq = truncate(u.mul(u)?.transform()?, dealias);
    Ok(sq.derivative(1).scale(-1.5))
}

/// `-(3/2) d_x (u^2)`.
pub fn burgers_rhs(u: &RealField) -> Result<RealField> {
    finite_or_err(
        burgers_rhs_spectrum(u)?.inverse_unchecked(),
        "burgers_rhs output",
    )
}

/// Ratios from the filter-multiplier bounds, each an operator output norm
/// over the matching input norm (all in `B^._{2,inf}`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiplierRatios {
    /// `||alpha^2 d^2 (1 - alpha^2 d^2)^-1 u||_{B^sigma} / ||u||_{B^sigma}`
    pub second_order: f64,
    /// `||alpha d (1 - alpha^2 d^2)^-1 u||_{B^sigma} / ||u||_{B^sigma}`
    pub first_order: f64,
    /// `||alpha^2 d (1 - alpha^2 d^2)^-1 u||_{B^sigma} / ||u||_{B^{sigma-1}}`
    pub smoothing: f64,
}

pub fn multiplier_bound_check(
    cutoffs: &CutoffPair,
    alpha: FilterParam,
    sigma: f64,
    field: &RealField,
) -> Result<MultiplierRatios> {
    if alpha.is_zero() {
        return Err(Error::InvalidParameter("alpha must lie in (0, 1]".into()));
    }
    let a = alpha.value();
    let spec = field.transform()?;
    let base = besov_sup_norm_spectrum(cutoffs, &spec, sigma)?;
    let base_lower = besov_sup_norm_spectrum(cutoffs, &spec, sigma - 1.0)?;
    if base == 0.0 || base_lower == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let filtered = spec.scale_even(|xi| alpha.helmholtz_symbol(xi));
    let second = filtered.scale_even(|xi| a * a * xi * xi);
    let first = filtered.apply_multiplier(|xi| Complex64::new(0.0, a * xi))?;
    let smooth = filtered.apply_multiplier(|xi| Complex64::new(0.0, a * a * xi))?;
    Ok(MultiplierRatios {
        second_order: besov_sup_norm_spectrum(cutoffs, &second, sigma)? / base,
        first_order: besov_sup_norm_spectrum(cutoffs, &first, sigma)? / base,
        smoothing: besov_sup_norm_spectrum(cutoffs, &smooth, sigma)? / base_lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::new(64, 2.0 * PI).unwrap()
    }

    #[test]
    fn alpha_range() {
        assert!(FilterParam::new(-0.1).is_err());
        assert!(FilterParam::new(1.1).is_err());
        assert!(FilterParam::new(f64::NAN).is_err());
        assert_eq!(FilterParam::new(0.0).unwrap(), FilterParam::ZERO);
    }

    #[test]
    fn helmholtz_examples() {
        let g = grid();
        let f = RealField::from_fn(&g, |x| x.cos() + 0.2 * (5.0 * x).sin()).unwrap();
        assert_eq!(helmholtz_inv(&f, FilterParam::ZERO).unwrap(), f);
        let c = RealField::from_fn(&g, |x| x.cos()).unwrap();
        let h = helmholtz_inv(&c, FilterParam::new(1.0).unwrap()).unwrap();
        assert!(h.sub(&c.scale(0.5)).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn rhs_of_zero_and_constant() {
        let g = grid();
        let a = FilterParam::new(0.7).unwrap();
        for field in [
            RealField::zeros(&g),
            RealField::from_fn(&g, |_| 2.5).unwrap(),
        ] {
            assert!(ch_rhs(&field, a).unwrap().max_abs() < 1e-13);
            assert!(burgers_rhs(&field).unwrap().max_abs() < 1e-13);
        }
    }

    #[test]
    fn ch_rhs_cosine_alpha_one() {
        // -u u_x = sin(2x)/2; u^2 + u_x^2/2 = 3/4 + cos(2x)/4, filtered
        // mode 2 divided by 5, differentiated: -sin(2x)/10. Total 3/5 sin 2x.
        let g = grid();
        let u = RealField::from_fn(&g, |x| x.cos()).unwrap();
        let rhs = ch_rhs(&u, FilterParam::new(1.0).unwrap()).unwrap();
        let want = RealField::from_fn(&g, |x| 0.6 * (2.0 * x).sin()).unwrap();
        assert!(rhs.sub(&want).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn burgers_rhs_cosine() {
        let g = grid();
        let u = RealField::from_fn(&g, |x| x.cos()).unwrap();
        let rhs = burgers_rhs(&u).unwrap();
        let want = RealField::from_fn(&g, |x| 1.5 * (2.0 * x).sin()).unwrap();
        assert!(rhs.sub(&want).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn multiplier_check_rejects_degenerate_input() {
        let c = crate::littlewood_paley::build_cutoffs();
        let g = grid();
        let z = RealField::zeros(&g);
        let a = FilterParam::new(0.5).unwrap();
        assert_eq!(
            multiplier_bound_check(&c, a, 1.0, &z).unwrap_err(),
            Error::ZeroNorm
        );
        let u = RealField::from_fn(&g, |x| x.cos()).unwrap();
        assert!(multiplier_bound_check(&c, FilterParam::ZERO, 1.0, &u).is_err());
    }

    fn seeded(g: &Grid, seed: u64, kmax: usize) -> RealField {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let modes: Vec<(f64, f64, f64)> = (0..=kmax)
            .map(|k| (k as f64, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let l = g.box_length();
        RealField::from_fn(g, |x| {
            modes
                .iter()
                .map(|&(k, a, b)| {
                    let w = 2.0 * PI * k * x / l;
                    a * w.cos() + b * w.sin()
                })
                .sum()
        })
        .unwrap()
    }

    #[test]
    fn helmholtz_round_trip_and_contraction() {
        let g = Grid::new(128, 10.0).unwrap();
        for seed in 0..4 {
            let f = seeded(&g, seed, 30);
            for a in [0.0, 0.1, 0.5, 1.0] {
                let a = FilterParam::new(a).unwrap();
                let h = helmholtz_inv(&f, a).unwrap();
                let back = helmholtz(&h, a).unwrap();
                assert!(back.sub(&f).unwrap().max_abs() < 1e-10 * f.max_abs());
                assert!(h.l2_norm() <= f.l2_norm() * (1.0 + 1e-14));
            }
        }
    }

    #[test]
    fn helmholtz_commutes_with_derivative_and_blocks() {
        let g = Grid::new(256, 20.0).unwrap();
        let c = crate::littlewood_paley::build_cutoffs();
        let a = FilterParam::new(0.3).unwrap();
        let f = seeded(&g, 11, 60);
        let lhs = helmholtz_inv(&f.derivative(1).unwrap(), a).unwrap();
        let rhs = helmholtz_inv(&f, a).unwrap().derivative(1).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-12 * lhs.max_abs());
        for j in -1..=crate::littlewood_paley::j_max(&g) {
            let block = |u: &RealField| crate::littlewood_paley::dyadic_block(&c, u, j).unwrap();
            let lhs = helmholtz_inv(&block(&f), a).unwrap();
            let rhs = block(&helmholtz_inv(&f, a).unwrap());
            assert!(
                lhs.sub(&rhs).unwrap().max_abs() <= 1e-12 * f.max_abs(),
                "j = {j}"
            );
        }
    }

    #[test]
    fn ch_at_zero_alpha_is_burgers() {
        let g = Grid::new(128, 10.0).unwrap();
        for seed in 0..4 {
            let u = seeded(&g, seed, 20);
            let ch = ch_rhs(&u, FilterParam::ZERO).unwrap();
            let b = burgers_rhs(&u).unwrap();
            assert!(ch.sub(&b).unwrap().max_abs() <= 1e-10 * b.max_abs());
        }
    }

    #[test]
    fn right_hand_sides_have_zero_mean() {
        let g = Grid::new(128, 10.0).unwrap();
        for seed in 0..4 {
            let u = seeded(&g, 100 + seed, 20);
            for a in [0.0, 0.4, 1.0] {
                let r = ch_rhs(&u, FilterParam::new(a).unwrap()).unwrap();
                assert!(r.mean().abs() < 1e-12 * r.max_abs().max(1.0));
            }
            assert!(burgers_rhs(&u).unwrap().mean().abs() < 1e-12);
        }
    }

    /// The three ratios for a single mode at `xi`, from cutoff values alone:
    /// `|m(xi)| sup_j 2^{j sigma} phi_j(xi) / sup_k 2^{k (sigma - d)} phi_k(xi)`
    /// with `d = 0` for the first two and `d = 1` for the smoothing ratio.
    fn single_mode_ratios(c: &CutoffPair, alpha: f64, sigma: f64, xi: f64, top: i32) -> [f64; 3] {
        let weighted = |s: f64| {
            (-1..=top)
                .map(|j| (j as f64 * s).exp2() * c.block_symbol(j, xi))
                .fold(0.0, f64::max)
        };
        let h = 1.0 / (1.0 + alpha * alpha * xi * xi);
        [
            alpha * alpha * xi * xi * h,
            alpha * xi.abs() * h,
            alpha * alpha * xi.abs() * h * weighted(sigma) / weighted(sigma - 1.0),
        ]
    }

    #[test]
    fn single_modes_match_the_oracle() {
        let c = crate::littlewood_paley::build_cutoffs();
        // xi_k = k/8, Nyquist 64, j_max 4; modes up to 24 see every block.
        let g = Grid::new(1024, 16.0 * PI).unwrap();
        let top = crate::littlewood_paley::j_max(&g);
        for k in [3usize, 7, 8, 11, 29, 64, 100, 150, 191] {
            let xi = k as f64 / 8.0;
            let u = RealField::from_fn(&g, |x| (xi * x).cos()).unwrap();
            for alpha in [0.1, 0.5, 1.0] {
                for sigma in [-1.0, 0.0, 1.5, 3.0] {
                    let got =
                        multiplier_bound_check(&c, FilterParam::new(alpha).unwrap(), sigma, &u)
                            .unwrap();
                    let want = single_mode_ratios(&c, alpha, sigma, xi, top);
                    let got = [got.second_order, got.first_order, got.smoothing];
                    for i in 0..3 {
                        assert!(
                            (got[i] - want[i]).abs() < 1e-10 * want[i].max(1.0),
                            "k {k}, alpha {alpha}, sigma {sigma}, ratio {i}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn dense_sampling_bounds() {
        let c = crate::littlewood_paley::build_cutoffs();
        for alpha in [0.01, 0.1, 0.5, 1.0] {
            for sigma in [-1.0, 0.0, 1.0, 1.5, 2.0, 3.0] {
                let mut sup = [0.0f64; 3];
                for i in 1..=200_000 {
                    let xi = i as f64 * 0.01;
                    let r = single_mode_ratios(&c, alpha, sigma, xi, 20);
                    for k in 0..3 {
                        sup[k] = sup[k].max(r[k]);
                    }
                }
                assert!(sup[0] < 1.0);
                assert!(sup[1] <= 0.5 + 1e-12);
                assert!(sup[2] < 4.0 / 3.0);
                if sigma <= 1.5 {
                    assert!(sup[2] <= 1.0, "alpha {alpha}, sigma {sigma}: {}", sup[2]);
                }
            }
        }
        // The smoothing ratio exceeds 1 once sigma is large.
        let worst = (1..=40_000)
            .map(|i| single_mode_ratios(&c, 1.0, 3.0, 0.5 + i as f64 * 0.025, 20)[2])
            .fold(0.0, f64::max);
        assert!(worst > 1.05 && worst < 1.06, "{worst}");
    }

    #[test]
    fn random_field_ratios() {
        let c = crate::littlewood_paley::build_cutoffs();
        let g = Grid::new(1024, 16.0 * PI).unwrap();
        for seed in 0..4 {
            let u = seeded(&g, seed, 190);
            for alpha in [0.05, 0.3, 1.0] {
                for sigma in [-1.0, 0.0, 1.0, 1.5, 3.0] {
                    let r = multiplier_bound_check(&c, FilterParam::new(alpha).unwrap(), sigma, &u)
                        .unwrap();
                    assert!(r.second_order <= 1.0);
                    assert!(r.first_order <= 0.5 + 1e-12);
                    assert!(r.smoothing < 4.0 / 3.0);
                    if sigma <= 1.5 {
                        assert!(
                            r.smoothing <= 1.0,
                            "seed {seed}, alpha {alpha}, sigma {sigma}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn nan_input_is_an_error() {
        let g = grid();
        let mut v = vec![0.0; 64];
        v[3] = f64::NAN;
        let u = RealField::from_vec_unchecked(&g, v);
        assert!(ch_rhs(&u, FilterParam::new(0.5).unwrap()).is_err());
        assert!(burgers_rhs(&u).is_err());
    }
}
