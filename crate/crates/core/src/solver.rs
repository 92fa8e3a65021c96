//! Fixed-step RK4 integration of the filtered Camassa-Holm flow (`alpha > 0`)
//! and the Burgers flow (`alpha = 0`), with blowup, boundary and shock guards.

use crate::error::{Error, Result};
use crate::filter::{burgers_rhs_spectrum_with, ch_rhs_spectrum_with, FilterParam};
use crate::grid::RealField;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub alpha: FilterParam,
    /// Upper bound on the time step; the actual step is `t_end / ceil(t_end / dt)`.
    pub dt: f64,
    pub t_end: f64,
    pub dealias_on: bool,
    /// Allowed growth of `max |u|` on the outer 10% of the box over its
    /// initial value, relative to `max |u0|`. `None` disables the guard
    /// (genuinely periodic data).
    pub tail_tol: Option<f64>,
    pub guard_every: usize,
    pub cfl_factor: f64,
    /// Keep every `snapshot_stride`-th step (first and last are always kept).
    pub snapshot_stride: usize,
    /// Abort once `max |u_x|` exceeds this multiple of its initial value.
    pub shock_growth: f64,
}

impl SolverConfig {
    pub fn new(alpha: FilterParam, dt: f64, t_end: f64) -> Self {
        Self {
            alpha,
            dt,
            t_end,
            dealias_on: true,
            tail_tol: Some(1e-4),
            guard_every: 16,
            cfl_factor: 0.5,
            snapshot_stride: 1,
            shock_growth: 10.0,
        }
    }

    pub fn with_tail_tol(mut self, tol: Option<f64>) -> Self {
        self.tail_tol = tol;
        self
    }

    pub fn with_snapshot_stride(mut self, stride: usize) -> Self {
        self.snapshot_stride = stride;
        self
    }

    /// Largest admissible step for `u0`: `cfl_factor dx / max(1, max|u0|)`.
    pub fn max_dt(&self, u0: &RealField) -> f64 {
        self.cfl_factor * u0.grid().dx() / u0.max_abs().max(1.0)
    }

    fn validate(&self, u0: &RealField) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.guard_every == 0 || self.snapshot_stride == 0 {
            return Err(Error::InvalidParameter(
                "guard_every and snapshot_stride must be positive".into(),
            ));
        }
        let limit = self.max_dt(u0);
        if self.dt > limit {
            return Err(Error::InvalidParameter(format!(
                "dt = {} violates the CFL bound {limit}",
                self.dt
            )));
        }
        if self.alpha.is_zero() {
            let shock = shock_time_estimate(u0)?;
            if self.t_end >= shock {
                return Err(Error::InvalidParameter(format!(
                    "t_end = {} is not below the Burgers shock time {shock}",
                    self.t_end
                )));
            }
        }
        Ok(())
    }
}

/// Snapshots of one integration.
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    fields: Vec<RealField>,
    dt: f64,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn fields(&self) -> &[RealField] {
        &self.fields
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// The step actually used.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn last(&self) -> Option<(f64, &RealField)> {
        self.times.last().copied().zip(self.fields.last())
    }

    pub fn final_field(&self) -> &RealField {
        self.fields
            .last()
            .expect("trajectory holds the initial datum")
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &RealField)> {
        self.times.iter().copied().zip(&self.fields)
    }
}

fn rhs(u: &RealField, alpha: FilterParam, dealias: bool) -> Result<RealField> {
    let spec = if alpha.is_zero() {
        burgers_rhs_spectrum_with(u, dealias)?
    } else {
        ch_rhs_spectrum_with(u, alpha, dealias)?
    };
    Ok(spec.inverse_unchecked())
}

fn max_slope(u: &RealField) -> Result<f64> {
    Ok(u.derivative(1)?.max_abs())
}

fn rk4_step(u: &RealField, dt: f64, alpha: FilterParam, dealias: bool) -> Result<RealField> {
    let k1 = rhs(u, alpha, dealias)?;
    let k2 = rhs(&u.axpy(0.5 * dt, &k1)?, alpha, dealias)?;
    let k3 = rhs(&u.axpy(0.5 * dt, &k2)?, alpha, dealias)?;
    let k4 = rhs(&u.axpy(dt, &k3)?, alpha, dealias)?;
    let w = dt / 6.0;
    let samples = u
        .samples()
        .iter()
        .zip(k1.samples())
        .zip(k2.samples())
        .zip(k3.samples())
        .zip(k4.samples())
        .map(|((((u, a), b), c), d)| u + w * (a + 2.0 * b + 2.0 * c + d))
        .collect();
    Ok(RealField::from_vec_unchecked(u.grid(), samples))
}

/// Advances `u0` to `config.t_end` with classical RK4.
pub fn integrate(u0: &RealField, config: &SolverConfig) -> Result<Trajectory> {
    if !u0.is_finite() {
        return Err(Error::NonFinite("initial datum"));
    }
    config.validate(u0)?;
    let steps = (config.t_end / config.dt - 1e-9).ceil().max(1.0) as usize;
    let dt = config.t_end / steps as f64;

    let tail0 = u0.tail_max();
    let scale0 = u0.max_abs();
    let slope0 = max_slope(u0)?;
    let mut times = vec![0.0];
    let mut fields = vec![u0.clone()];
    let mut u = u0.clone();
    let mut t = 0.0;

    for step in 1..=steps {
        let next = match rk4_step(&u, dt, config.alpha, config.dealias_on) {
            Ok(v) if v.is_finite() => v,
            _ => return Err(Error::Blowup { last_good_time: t }),
        };
        u = next;
        t = if step == steps {
            config.t_end
        } else {
            step as f64 * dt
        };

        if step % config.guard_every == 0 || step == steps {
            if let Some(tol) = config.tail_tol {
                let tail = u.tail_max();
                if tail - tail0 > tol * scale0 {
                    return Err(Error::BoundaryContamination { time: t, tail });
                }
            }
            if slope0 > 0.0 {
                let growth = max_slope(&u)? / slope0;
                if growth > config.shock_growth {
                    return Err(Error::ShockProximity { time: t, growth });
                }
            }
        }
        if step % config.snapshot_stride == 0 || step == steps {
            times.push(t);
            fields.push(u.clone());
        }
    }
    Ok(Trajectory { times, fields, dt })
}

/// Burgers breaking time `1 / (3 max(-u0'))`, infinite when `u0` has no
/// decreasing part.
pub fn shock_time_estimate(u0: &RealField) -> Result<f64> {
    let ux = u0.derivative(1)?;
    let steepest = ux.samples().iter().fold(0.0f64, |m, v| m.max(-v));
    let noise = 1e-12 * u0.max_abs().max(1.0);
    Ok(if steepest > noise {
        1.0 / (3.0 * steepest)
    } else {
        f64::INFINITY
    })
}

/// `int u^2 + alpha^2 u_x^2 dx`.
pub fn energy(u: &RealField, alpha: FilterParam) -> Result<f64> {
    let a2 = alpha.value() * alpha.value();
    let spec = u.transform()?;
    Ok(spec
        .weighted_l2_norm(|xi| (1.0 + a2 * xi * xi).sqrt())
        .powi(2))
}

/// Largest relative drift of [`energy`] along a trajectory.
pub fn energy_check(trajectory: &Trajectory, alpha: FilterParam) -> Result<f64> {
    let (_, first) = trajectory.iter().next().ok_or(Error::EmptyTrajectory)?;
    let e0 = energy(first, alpha)?;
    let mut worst = 0.0f64;
    for (_, u) in trajectory.iter() {
        let drift = (energy(u, alpha)? - e0).abs();
        worst = worst.max(if e0 > 0.0 { drift / e0 } else { drift });
    }
    Ok(worst)
}

/// `x -> -x, u -> -u`, the reflection both flows are equivariant under.
pub fn reflect(u: &RealField) -> RealField {
    let n = u.grid().n_points();
    let s = u.samples();
    let samples = (0..n).map(|j| -s[(n - j) % n]).collect();
    RealField::from_vec_unchecked(u.grid(), samples)
}
