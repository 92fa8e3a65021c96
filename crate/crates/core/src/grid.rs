//! Periodic-box discretization and the Fourier-multiplier substrate.
//!
//! A [`Grid`] of `n` points covers the box `[-L/2, L/2)` with sample
//! positions `x_j = (j - n/2) dx`. Spectra are stored in FFT order
//! (`k = 0, 1, .., n/2 - 1, -n/2, .., -1`) with wavenumber
//! `xi_k = 2 pi k / L`.
//!
//! Normalization: the forward transform is unnormalized,
//! `c_k = sum_j u_j exp(-i xi_k j dx)`, and the inverse carries `1/n`.
//! Parseval therefore reads `sum_j |u_j|^2 dx = (L / n^2) sum_k |c_k|^2`.
//! Every module relies on this single convention.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Relative tolerance for the Hermitian-symmetry check on multipliers.
const HERMITIAN_TOL: f64 = 1e-12;

struct GridInner {
    n_points: usize,
    box_length: f64,
    dx: f64,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    backward: Arc<dyn Fft<f64>>,
}

/// Uniform periodic grid with cached FFT plans. Cloning is cheap.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n_points", &self.inner.n_points)
            .field("box_length", &self.inner.box_length)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n_points == other.inner.n_points
                && self.inner.box_length.to_bits() == other.inner.box_length.to_bits())
    }
}

impl Grid {
    pub fn new(n_points: usize, box_length: f64) -> Result<Self> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n_points));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::BadBoxLength(box_length));
        }
        let dx = box_length / n_points as f64;
        let dxi = 2.0 * PI / box_length;
        let half = n_points as i64 / 2;
        let wavenumbers = (0..n_points as i64)
            .map(|i| {
                let k = if i < half { i } else { i - n_points as i64 };
                k as f64 * dxi
            })
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n_points);
        let backward = planner.plan_fft_inverse(n_points);
        Ok(Self {
            inner: Arc::new(GridInner {
                n_points,
                box_length,
                dx,
                wavenumbers,
                forward,
                backward,
            }),
        })
    }

    pub fn n_points(&self) -> usize {
        self.inner.n_points
    }

    pub fn box_length(&self) -> f64 {
        self.inner.box_length
    }

    pub fn dx(&self) -> f64 {
        self.inner.dx
    }

    /// Spacing of the frequency axis, `2 pi / L`.
    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.inner.box_length
    }

    /// Position of sample `j`.
    pub fn x(&self, j: usize) -> f64 {
        (j as f64 - (self.inner.n_points / 2) as f64) * self.inner.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_points()).map(|j| self.x(j)).collect()
    }

    /// Wavenumbers in FFT storage order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.inner.wavenumbers
    }

    /// Integer mode index of storage slot `i`.
    pub fn mode_index(&self, i: usize) -> i64 {
        let n = self.inner.n_points as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Frequencies `2 pi k / L` for `k = -n/2 .. n/2 - 1`, ascending.
    pub fn frequency_axis(&self) -> Vec<f64> {
        let half = (self.n_points() / 2) as i64;
        (-half..half).map(|k| k as f64 * self.dxi()).collect()
    }

    /// `|xi|` of the Nyquist mode.
    pub fn nyquist(&self) -> f64 {
        (self.n_points() / 2) as f64 * self.dxi()
    }

    /// Largest retained mode index under the 2/3 rule.
    pub fn dealias_index(&self) -> usize {
        self.n_points() / 3
    }

    /// Largest retained frequency under the 2/3 rule.
    pub fn dealias_frequency(&self) -> f64 {
        self.dealias_index() as f64 * self.dxi()
    }

    pub(crate) fn fft_forward(&self, buf: &mut [Complex64]) {
        self.inner.forward.process(buf);
    }

    pub(crate) fn fft_backward(&self, buf: &mut [Complex64]) {
        self.inner.backward.process(buf);
    }
}

/// Real samples of a function on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct RealField {
    grid: Grid,
    samples: Vec<f64>,
}

impl RealField {
    pub fn new(grid: &Grid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples, got {}",
                grid.n_points(),
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field samples"));
        }
        Ok(Self {
            grid: grid.clone(),
            samples,
        })
    }

    pub(crate) fn from_vec_unchecked(grid: &Grid, samples: Vec<f64>) -> Self {
        debug_assert_eq!(samples.len(), grid.n_points());
        Self {
            grid: grid.clone(),
            samples,
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_vec_unchecked(grid, vec![0.0; grid.n_points()])
    }

    /// Samples `f(x_j)`.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, (0..grid.n_points()).map(|j| f(grid.x(j))).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|v| v.is_finite())
    }

    pub fn transform(&self) -> Result<Spectrum> {
        if !self.is_finite() {
            return Err(Error::NonFinite("transform input"));
        }
        Ok(self.transform_unchecked())
    }

    pub(crate) fn transform_unchecked(&self) -> Spectrum {
        let mut buf: Vec<Complex64> = self
            .samples
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        self.grid.fft_forward(&mut buf);
        Spectrum {
            grid: self.grid.clone(),
            coeffs: buf,
        }
    }

    /// `sqrt(sum_j u_j^2 dx)`.
    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|v| v * v).sum::<f64>() * self.grid.dx()).sqrt()
    }

    /// Grid sup norm, `max_j |u_j|`.
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    fn check_grid(&self, other: &RealField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    fn zip_with(&self, other: &RealField, f: impl Fn(f64, f64) -> f64) -> Result<RealField> {
        self.check_grid(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self::from_vec_unchecked(&self.grid, samples))
    }

    pub fn add(&self, other: &RealField) -> Result<RealField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RealField) -> Result<RealField> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product without dealiasing.
    pub fn mul(&self, other: &RealField) -> Result<RealField> {
        self.zip_with(other, |a, b| a * b)
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &RealField) -> Result<RealField> {
        self.zip_with(other, |x, y| x + a * y)
    }

    pub fn scale(&self, a: f64) -> RealField {
        Self::from_vec_unchecked(&self.grid, self.samples.iter().map(|v| a * v).collect())
    }

    /// Spectral derivative of the given order.
    pub fn derivative(&self, order: u32) -> Result<RealField> {
        let spec = self.transform()?;
        Ok(spec.derivative(order).inverse_unchecked())
    }

    /// Product of two fields, transformed and truncated by the 2/3 rule.
    pub fn dealiased_product(&self, other: &RealField) -> Result<Spectrum> {
        let p = self.mul(other)?;
        Ok(p.transform()?.dealias())
    }

    /// Maximum of `|u|` over `|x| >= 0.4 L` (the outer 10% of each side).
    pub fn tail_max(&self) -> f64 {
        let edge = 0.4 * self.grid.box_length();
        (0..self.grid.n_points())
            .filter(|&j| self.grid.x(j).abs() >= edge)
            .fold(0.0, |m, j| m.max(self.samples[j].abs()))
    }
}

/// Fourier coefficients of a real field, FFT storage order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n_points() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                grid.n_points(),
                coeffs.len()
            )));
        }
        if coeffs
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFinite("spectrum coefficients"));
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of integer mode `k` (`-n/2 <= k < n/2`).
    pub fn mode(&self, k: i64) -> Complex64 {
        let n = self.grid.n_points() as i64;
        self.coeffs[k.rem_euclid(n) as usize]
    }

    /// Largest `|c(-xi) - conj(c(xi))|` relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n_points();
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = self.coeffs[0].im.abs().max(self.coeffs[n / 2].im.abs());
        for i in 1..n / 2 {
            worst = worst.max((self.coeffs[n - i] - self.coeffs[i].conj()).norm());
        }
        worst / scale
    }

    pub fn inverse(&self) -> Result<RealField> {
        Ok(self.inverse_with_residue()?.0)
    }

    /// Inverse transform plus the largest imaginary residue relative to the
    /// largest real sample.
    pub fn inverse_with_residue(&self) -> Result<(RealField, f64)> {
        let buf = self.backward_buffer();
        let max_re = buf.iter().fold(0.0f64, |m, c| m.max(c.re.abs()));
        let max_im = buf.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
        let samples: Vec<f64> = buf.into_iter().map(|c| c.re).collect();
        let field = RealField::new(&self.grid, samples)?;
        let residue = if max_re > 0.0 {
            max_im / max_re
        } else {
            max_im
        };
        Ok((field, residue))
    }

    pub(crate) fn inverse_unchecked(&self) -> RealField {
        let samples = self.backward_buffer().into_iter().map(|c| c.re).collect();
        RealField::from_vec_unchecked(&self.grid, samples)
    }

    fn backward_buffer(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        self.grid.fft_backward(&mut buf);
        let inv_n = 1.0 / self.grid.n_points() as f64;
        for c in &mut buf {
            *c *= inv_n;
        }
        buf
    }

    /// Multiplies by a symbol `m(xi)`, which must satisfy
    /// `m(-xi) = conj(m(xi))`. The Nyquist mode has no partner on the axis
    /// and is scaled by `Re m(xi_nyq)`, so odd symbols such as `i xi` zero it.
    pub fn apply_multiplier(&self, m: impl Fn(f64) -> Complex64) -> Result<Spectrum> {
        let n = self.grid.n_points();
        let xis = self.grid.wavenumbers();
        let mut factors = vec![Complex64::new(0.0, 0.0); n];
        let m0 = m(0.0);
        if m0.im.abs() > HERMITIAN_TOL * m0.norm().max(1.0) {
            return Err(Error::NonHermitian { xi: 0.0 });
        }
        factors[0] = Complex64::new(m0.re, 0.0);
        for i in 1..n / 2 {
            let xi = xis[i];
            let plus = m(xi);
            let minus = m(-xi);
            if (minus - plus.conj()).norm() > HERMITIAN_TOL * plus.norm().max(1.0) {
                return Err(Error::NonHermitian { xi });
            }
            if !(plus.re.is_finite() && plus.im.is_finite()) {
                return Err(Error::NonFinite("multiplier value"));
            }
            factors[i] = plus;
            factors[n - i] = plus.conj();
        }
        factors[n / 2] = Complex64::new(m(xis[n / 2]).re, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&factors)
            .map(|(c, f)| c * f)
            .collect();
        Ok(Spectrum {
            grid: self.grid.clone(),
            coeffs,
        })
    }

    /// Multiplies by an even real symbol without the symmetry check.
    pub(crate) fn scale_even(&self, m: impl Fn(f64) -> f64) -> Spectrum {
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.grid.wavenumbers())
            .map(|(c, &xi)| c * m(xi.abs()))
            .collect();
        Spectrum {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// `(i xi)^order`, with the Nyquist mode zeroed for odd orders.
    pub fn derivative(&self, order: u32) -> Spectrum {
        let n = self.grid.n_points();
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.grid.wavenumbers())
            .enumerate()
            .map(|(i, (c, &xi))| {
                if order % 2 == 1 && i == n / 2 {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * Complex64::new(0.0, xi).powu(order)
                }
            })
            .collect();
        Spectrum {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// Zeroes every mode with `|k| > n/3`.
    pub fn dealias(&self) -> Spectrum {
        let cut = self.grid.dealias_index() as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if self.grid.mode_index(i).abs() > cut {
                    Complex64::new(0.0, 0.0)
                } else {
                    c
                }
            })
            .collect();
        Spectrum {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    pub fn add(&self, other: &Spectrum) -> Result<Spectrum> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Spectrum) -> Result<Spectrum> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, a: f64) -> Spectrum {
        Spectrum {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &Spectrum,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Spectrum> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Spectrum {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// L2 norm of the represented field via Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.weighted_l2_norm(|_| 1.0)
    }

    /// `|| m(D) u ||_{L2}` for an even real weight `m`, without leaving
    /// frequency space.
    pub fn weighted_l2_norm(&self, m: impl Fn(f64) -> f64) -> f64 {
        let n = self.grid.n_points() as f64;
        let sum: f64 = self
            .coeffs
            .iter()
            .zip(self.grid.wavenumbers())
            .map(|(c, &xi)| {
                let w = m(xi.abs());
                c.norm_sqr() * w * w
            })
            .sum();
        (sum * self.grid.box_length() / (n * n)).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn grid_of_eight_on_two_pi() {
        let g = Grid::new(8, 2.0 * PI).unwrap();
        assert!((g.dx() - PI / 4.0).abs() < 1e-15);
        let axis = g.frequency_axis();
        let expected: Vec<f64> = (-4..4).map(|k| k as f64).collect();
        for (a, b) in axis.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((g.dx() * 8.0 - g.box_length()).abs() <= f64::EPSILON * g.box_length());
    }

    #[test]
    fn frequency_spacing_on_large_box() {
        let g = Grid::new(16, 32.0 * PI).unwrap();
        assert!((g.dxi() - 1.0 / 16.0).abs() < 1e-15);
        assert!((g.wavenumbers()[1] - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_grids() {
        assert_eq!(Grid::new(7, 1.0).unwrap_err(), Error::NotPowerOfTwo(7));
        assert!(Grid::new(4, 1.0).is_err());
        assert!(matches!(Grid::new(8, 0.0), Err(Error::BadBoxLength(_))));
        assert!(matches!(Grid::new(8, -1.0), Err(Error::BadBoxLength(_))));
    }

    #[test]
    fn cosine_has_two_modes_of_half_n() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let f = RealField::from_fn(&g, |x| (3.0 * x).cos()).unwrap();
        let s = f.transform().unwrap();
        for k in -32..32i64 {
            let c = s.mode(k);
            if k.abs() == 3 {
                assert!((c.norm() - 32.0).abs() < 1e-10);
            } else {
                assert!(c.norm() < 1e-10, "k = {k}: {c}");
            }
        }
    }

    #[test]
    fn zero_transforms_to_zero() {
        let g = Grid::new(16, 1.0).unwrap();
        let s = RealField::zeros(&g).transform().unwrap();
        assert!(s.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn nan_rejected() {
        let g = Grid::new(8, 1.0).unwrap();
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        assert!(matches!(RealField::new(&g, v), Err(Error::NonFinite(_))));
    }

    #[test]
    fn multiplier_examples() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let f = RealField::from_fn(&g, |x| (3.0 * x).cos()).unwrap();
        let s = f.transform().unwrap();
        let d = s
            .apply_multiplier(|xi| Complex64::new(0.0, xi))
            .unwrap()
            .inverse()
            .unwrap();
        let want = RealField::from_fn(&g, |x| -3.0 * (3.0 * x).sin()).unwrap();
        assert!(d.sub(&want).unwrap().max_abs() < 1e-12);

        let id = s
            .apply_multiplier(|_| Complex64::new(1.0, 0.0))
            .unwrap()
            .inverse()
            .unwrap();
        assert!(id.sub(&f).unwrap().max_abs() < 1e-14);

        let c2 = RealField::from_fn(&g, |x| (2.0 * x).cos()).unwrap();
        let h = c2
            .transform()
            .unwrap()
            .apply_multiplier(|xi| Complex64::new(1.0 / (1.0 + xi * xi), 0.0))
            .unwrap()
            .inverse()
            .unwrap();
        assert!(h.sub(&c2.scale(0.2)).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_multiplier_rejected() {
        let g = Grid::new(16, 2.0 * PI).unwrap();
        let s = RealField::from_fn(&g, |x| x.cos())
            .unwrap()
            .transform()
            .unwrap();
        let err = s
            .apply_multiplier(|xi| Complex64::new(xi, 0.0))
            .unwrap_err();
        assert!(matches!(err, Error::NonHermitian { .. }));
        assert!(s.apply_multiplier(|_| Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn l2_norm_examples() {
        let l = 5.0;
        let g = Grid::new(32, l).unwrap();
        let c = RealField::from_fn(&g, |_| -2.0).unwrap();
        assert!(rel(c.l2_norm(), 2.0 * l.sqrt()) < 1e-14);
        let kappa = 2.0 * PI * 3.0 / l;
        let f = RealField::from_fn(&g, |x| (kappa * x).cos()).unwrap();
        assert!(rel(f.l2_norm(), (l / 2.0).sqrt()) < 1e-13);
        assert!(rel(f.transform().unwrap().l2_norm(), f.l2_norm()) < 1e-12);
    }

    #[test]
    fn dealias_examples() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let f = RealField::from_fn(&g, |x| (10.0 * x).cos() + (3.0 * x).sin()).unwrap();
        let s = f.transform().unwrap();
        let kept = s.dealias();
        assert!(kept
            .sub(&s)
            .unwrap()
            .coeffs()
            .iter()
            .all(|c| c.norm() < 1e-12));
        assert_eq!(kept.mode(10), s.mode(10));
        let top = RealField::from_fn(&g, |x| (15.0 * x).cos()).unwrap();
        let d = top.transform().unwrap().dealias();
        assert!(d.coeffs().iter().all(|c| c.norm() < 1e-12));
        assert_eq!(d.mode(15).norm(), 0.0);
    }

    #[test]
    fn odd_derivative_kills_nyquist() {
        let g = Grid::new(8, 2.0 * PI).unwrap();
        let f = RealField::from_fn(&g, |x| (4.0 * x).cos()).unwrap();
        let d = f.derivative(1).unwrap();
        assert!(d.max_abs() < 1e-14);
    }

    #[test]
    fn tail_max_sees_only_outer_band() {
        let g = Grid::new(64, 10.0).unwrap();
        let f = RealField::from_fn(&g, |x| if x.abs() >= 4.0 { 1.0 } else { 7.0 }).unwrap();
        assert_eq!(f.tail_max(), 1.0);
    }

    fn dft(samples: &[f64]) -> Vec<Complex64> {
        let n = samples.len();
        (0..n)
            .map(|k| {
                samples
                    .iter()
                    .enumerate()
                    .map(|(j, &u)| {
                        let arg = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                        u * Complex64::from_polar(1.0, arg)
                    })
                    .sum()
            })
            .collect()
    }

    /// Random real trigonometric polynomial with modes `|k| <= kmax`.
    fn band_limited(g: &Grid, kmax: usize, seed: u64) -> RealField {
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
    fn fft_matches_direct_dft() {
        let g = Grid::new(128, 10.0).unwrap();
        for seed in 0..5 {
            let u = band_limited(&g, 40, seed);
            let want = dft(u.samples());
            let got = u.transform().unwrap();
            let err = got
                .coeffs()
                .iter()
                .zip(&want)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err / 128.0 < 1e-12, "seed {seed}: {err}");
        }
    }

    #[test]
    fn dealiased_product_matches_truncated_convolution() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let n = 64i64;
        let u = band_limited(&g, 12, 7);
        let v = band_limited(&g, 12, 8);
        let (cu, cv) = (u.transform().unwrap(), v.transform().unwrap());
        let got = u.dealiased_product(&v).unwrap();
        let cut = g.dealias_index() as i64;
        for k in -n / 2..n / 2 {
            let mut want = Complex64::new(0.0, 0.0);
            if k.abs() <= cut {
                for p in -12i64..=12 {
                    let q = k - p;
                    if q.abs() <= 12 {
                        want += cu.mode(p) * cv.mode(q) / n as f64;
                    }
                }
            }
            assert!((got.mode(k) - want).norm() < 1e-11, "k = {k}");
        }
    }

    #[test]
    fn derivative_of_band_limited_field_is_exact() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let u = RealField::from_fn(&g, |x| (3.0 * x).sin() + 0.5 * (7.0 * x).cos()).unwrap();
        let du = u.derivative(1).unwrap();
        let want =
            RealField::from_fn(&g, |x| 3.0 * (3.0 * x).cos() - 3.5 * (7.0 * x).sin()).unwrap();
        assert!(du.sub(&want).unwrap().max_abs() < 1e-12);
        let d2 = u.derivative(2).unwrap();
        let want =
            RealField::from_fn(&g, |x| -9.0 * (3.0 * x).sin() - 24.5 * (7.0 * x).cos()).unwrap();
        assert!(d2.sub(&want).unwrap().max_abs() < 1e-11);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn field_strategy() -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(-10.0f64..10.0, 64)
        }

        proptest! {
            #[test]
            fn round_trip(samples in field_strategy()) {
                let g = Grid::new(64, 7.0).unwrap();
                let u = RealField::new(&g, samples).unwrap();
                let back = u.transform().unwrap().inverse().unwrap();
                prop_assert!(back.sub(&u).unwrap().max_abs() < 1e-12 * u.max_abs().max(1.0));
            }

            #[test]
            fn parseval(samples in field_strategy()) {
                let g = Grid::new(64, 7.0).unwrap();
                let u = RealField::new(&g, samples).unwrap();
                let a = u.l2_norm();
                let b = u.transform().unwrap().l2_norm();
                prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
            }

            #[test]
            fn multiplier_is_linear(
                f in field_strategy(),
                h in field_strategy(),
                a in -3.0f64..3.0,
                b in -3.0f64..3.0,
            ) {
                let g = Grid::new(64, 7.0).unwrap();
                let f = RealField::new(&g, f).unwrap();
                let h = RealField::new(&g, h).unwrap();
                let m = |xi: f64| Complex64::new(1.0 / (1.0 + xi * xi), xi.sin());
                let apply = |u: &RealField| {
                    u.transform().unwrap().apply_multiplier(m).unwrap().inverse().unwrap()
                };
                let lhs = apply(&f.scale(a).add(&h.scale(b)).unwrap());
                let rhs = apply(&f).scale(a).add(&apply(&h).scale(b)).unwrap();
                prop_assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-11);
            }

            #[test]
            fn dealias_is_idempotent(samples in field_strategy()) {
                let g = Grid::new(64, 7.0).unwrap();
                let s = RealField::new(&g, samples).unwrap().transform().unwrap().dealias();
                prop_assert_eq!(s.dealias(), s);
            }
        }
    }
}
