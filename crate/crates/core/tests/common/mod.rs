#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zerofilter::{Grid, RealField};

/// `sum_k a_k cos(xi_k x) + b_k sin(xi_k x)` over grid modes `k <= kmax`.
pub struct Trig {
    pub modes: Vec<(f64, f64, f64)>,
}

impl Trig {
    pub fn seeded(grid: &Grid, kmax: usize, amp: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dxi = 2.0 * PI / grid.box_length();
        let modes = (0..=kmax)
            .map(|k| {
                (
                    k as f64 * dxi,
                    amp * rng.gen_range(-1.0..1.0),
                    amp * rng.gen_range(-1.0..1.0),
                )
            })
            .collect();
        Self { modes }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.modes
            .iter()
            .map(|&(w, a, b)| a * (w * x).cos() + b * (w * x).sin())
            .sum()
    }

    pub fn deriv(&self, x: f64) -> f64 {
        self.modes
            .iter()
            .map(|&(w, a, b)| w * (b * (w * x).cos() - a * (w * x).sin()))
            .sum()
    }

    pub fn field(&self, grid: &Grid) -> RealField {
        RealField::from_fn(grid, |x| self.eval(x)).unwrap()
    }
}

/// Brute-force `c_k = sum_j u_j exp(-2 pi i j k / n)`.
pub fn dft(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    (0..n)
        .map(|k| {
            samples
                .iter()
                .enumerate()
                .map(|(j, &u)| {
                    u * Complex64::from_polar(1.0, -2.0 * PI * ((j * k) % n) as f64 / n as f64)
                })
                .sum()
        })
        .collect()
}

/// Burgers `u_t + 3 u u_x = 0` by characteristics: `u(x, t) = u0(X)` with
/// `X + 3 u0(X) t = x`, solved by safeguarded Newton. Valid before breaking.
pub fn characteristics(u0: &Trig, x: f64, t: f64, umax: f64) -> f64 {
    let f = |y: f64| y + 3.0 * u0.eval(y) * t - x;
    let (mut lo, mut hi) = (x - 3.0 * umax * t - 1e-12, x + 3.0 * umax * t + 1e-12);
    let mut y = x;
    for _ in 0..100 {
        let fy = f(y);
        if fy.abs() < 1e-15 {
            break;
        }
        if fy > 0.0 {
            hi = y;
        } else {
            lo = y;
        }
        let step = y - fy / (1.0 + 3.0 * u0.deriv(y) * t);
        y = if step > lo && step < hi {
            step
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-15 {
            break;
        }
    }
    u0.eval(y)
}

/// Sup norm of the gap between the grid solution at `t` and the oracle.
pub fn characteristics_error(u0: &Trig, grid: &Grid, t: f64, u: &RealField) -> f64 {
    let umax = u0.field(grid).max_abs();
    (0..grid.n_points())
        .map(|j| (u.samples()[j] - characteristics(u0, grid.x(j), t, umax)).abs())
        .fold(0.0, f64::max)
}
