//! `key = value` experiment configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::counterexample::{make_u0, max_admissible_terms, FIRST_EXACT_PACKET};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::solver::shock_time_estimate;

/// Which datum the sweep integrates at row `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepDatum {
    /// Packets `0..=n`: the sweep row sees the datum truncated at its own
    /// frequency.
    PerRow,
    /// Packets `0..=n_terms` for every row.
    Fixed,
}

impl SweepDatum {
    fn name(self) -> &'static str {
        match self {
            SweepDatum::PerRow => "per_row",
            SweepDatum::Fixed => "fixed",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub s: f64,
    pub n_min: u32,
    pub n_max: u32,
    pub eps: f64,
    pub grid_n_points: usize,
    pub box_length: f64,
    pub dt_divisor: u32,
    pub output_path: Option<PathBuf>,
    /// Packets in the datum used by `taylor`, `uniform`, `u0-info` and the
    /// fixed sweep.
    pub n_terms: u32,
    /// `alpha_n = alpha_base 2^-n`.
    pub alpha_base: f64,
    pub sweep_datum: SweepDatum,
    pub taylor_alphas: Vec<f64>,
    /// Time ladder `t = 2^-k` for `k` from `taylor_t_max_exp` to `taylor_t_min_exp`.
    pub taylor_t_min_exp: u32,
    pub taylor_t_max_exp: u32,
    /// `alpha = 2^-k` for `k = 0..=uniform_levels`.
    pub uniform_levels: u32,
    pub uniform_t_end: f64,
    pub lp_samples: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            s: 2.0,
            n_min: 3,
            n_max: 8,
            eps: 0.01,
            grid_n_points: 1 << 15,
            box_length: 32.0 * std::f64::consts::PI,
            dt_divisor: 64,
            output_path: None,
            n_terms: 8,
            alpha_base: 1.0,
            sweep_datum: SweepDatum::PerRow,
            taylor_alphas: vec![0.0, 0.5, 1.0],
            taylor_t_min_exp: 12,
            taylor_t_max_exp: 6,
            uniform_levels: 8,
            uniform_t_end: 0.5,
            lp_samples: 100_000,
        }
    }
}

const KEYS: &[&str] = &[
    "s",
    "n_min",
    "n_max",
    "eps",
    "grid_n_points",
    "box_length",
    "dt_divisor",
    "output_path",
    "n_terms",
    "alpha_base",
    "sweep_datum",
    "taylor_alphas",
    "taylor_t_min_exp",
    "taylor_t_max_exp",
    "uniform_levels",
    "uniform_t_end",
    "lp_samples",
];

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::ConfigSyntax {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| syntax(line, format!("cannot parse {key} = {v:?}")))
}

/// Accepts plain reals and multiples of pi such as `32pi` or `32*pi`.
fn parse_length(line: usize, v: &str) -> Result<f64> {
    let lower = v.to_ascii_lowercase();
    if let Some(head) = lower.strip_suffix("pi") {
        let head = head.trim_end_matches('*').trim();
        let k: f64 = if head.is_empty() {
            1.0
        } else {
            parse_num(line, "box_length", head)?
        };
        return Ok(k * std::f64::consts::PI);
    }
    parse_num(line, "box_length", v)
}

impl ExperimentConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid_n_points, self.box_length)
    }

    /// `alpha_n` for sweep row `n`.
    pub fn alpha_n(&self, n: u32) -> f64 {
        self.alpha_base * (-(n as f64)).exp2()
    }

    /// `t_n = eps 2^-n`.
    pub fn t_n(&self, n: u32) -> f64 {
        self.eps * (-(n as f64)).exp2()
    }

    pub fn taylor_times(&self) -> Vec<f64> {
        (self.taylor_t_max_exp..=self.taylor_t_min_exp)
            .rev()
            .map(|k| (-(k as f64)).exp2())
            .collect()
    }

    pub fn uniform_alphas(&self) -> Vec<f64> {
        (0..=self.uniform_levels)
            .map(|k| (-(k as f64)).exp2())
            .collect()
    }

    fn set(&mut self, line: usize, key: &str, v: &str) -> Result<()> {
        match key {
            "s" => self.s = parse_num(line, key, v)?,
            "n_min" => self.n_min = parse_num(line, key, v)?,
            "n_max" => self.n_max = parse_num(line, key, v)?,
            "eps" => self.eps = parse_num(line, key, v)?,
            "grid_n_points" => self.grid_n_points = parse_num(line, key, v)?,
            "box_length" => self.box_length = parse_length(line, v)?,
            "dt_divisor" => self.dt_divisor = parse_num(line, key, v)?,
            "output_path" => {
                self.output_path = if v.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(v))
                }
            }
            "n_terms" => self.n_terms = parse_num(line, key, v)?,
            "alpha_base" => self.alpha_base = parse_num(line, key, v)?,
            "sweep_datum" => {
                self.sweep_datum = match v {
                    "per_row" => SweepDatum::PerRow,
                    "fixed" => SweepDatum::Fixed,
                    _ => return Err(syntax(line, "sweep_datum must be per_row or fixed")),
                }
            }
            "taylor_alphas" => {
                self.taylor_alphas = v
                    .split(',')
                    .map(|a| parse_num(line, key, a.trim()))
                    .collect::<Result<_>>()?
            }
            "taylor_t_min_exp" => self.taylor_t_min_exp = parse_num(line, key, v)?,
            "taylor_t_max_exp" => self.taylor_t_max_exp = parse_num(line, key, v)?,
            "uniform_levels" => self.uniform_levels = parse_num(line, key, v)?,
            "uniform_t_end" => self.uniform_t_end = parse_num(line, key, v)?,
            "lp_samples" => self.lp_samples = parse_num(line, key, v)?,
            _ => return Err(syntax(line, format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Range checks, including the resolution and shock-time invariants.
    pub fn validate(&self) -> Result<()> {
        let range = |m: String| Err(Error::ConfigRange(m));
        if !(self.s.is_finite() && self.s > 1.5) {
            return range(format!("s must exceed 3/2 (got {})", self.s));
        }
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return range(format!("eps must be positive (got {})", self.eps));
        }
        if self.n_min < FIRST_EXACT_PACKET {
            return range(format!("n_min must be at least {FIRST_EXACT_PACKET}"));
        }
        if self.n_min > self.n_max {
            return range("n_min must not exceed n_max".into());
        }
        let grid = self.grid().map_err(|e| Error::ConfigRange(e.to_string()))?;
        let top = max_admissible_terms(&grid);
        if self.n_max as i32 > top {
            return range(format!(
                "n_max = {} exceeds the max resolvable packet index {top} on this grid",
                self.n_max
            ));
        }
        if self.n_terms < self.n_max || self.n_terms as i32 > top {
            return range(format!(
                "n_terms must lie in [n_max, {top}] (got {})",
                self.n_terms
            ));
        }
        if self.dt_divisor == 0 {
            return range("dt_divisor must be positive".into());
        }
        if !(self.alpha_base > 0.0 && self.alpha_base <= 1.0) {
            return range(format!(
                "alpha_base must lie in (0, 1] (got {})",
                self.alpha_base
            ));
        }
        if self.taylor_alphas.is_empty()
            || self.taylor_alphas.iter().any(|a| !(0.0..=1.0).contains(a))
        {
            return range("taylor_alphas must be a non-empty list in [0, 1]".into());
        }
        if self.taylor_t_max_exp >= self.taylor_t_min_exp {
            return range("taylor_t_max_exp must be below taylor_t_min_exp".into());
        }
        if self.lp_samples < 2 {
            return range("lp_samples must be at least 2".into());
        }
        let datum =
            make_u0(&grid, self.s, self.n_terms).map_err(|e| Error::ConfigRange(e.to_string()))?;
        let shock = shock_time_estimate(datum.field())?;
        let t0 = self.t_n(self.n_min);
        if t0 >= shock {
            return range(format!(
                "eps 2^-n_min = {t0} is not below the shock time {shock}"
            ));
        }
        if !(self.uniform_t_end > 0.0 && self.uniform_t_end < shock) {
            return range(format!(
                "uniform_t_end must lie in (0, {shock}) (got {})",
                self.uniform_t_end
            ));
        }
        Ok(())
    }

    /// `# key = value` lines, one per key, in a fixed order.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let value = match *key {
                "s" => self.s.to_string(),
                "n_min" => self.n_min.to_string(),
                "n_max" => self.n_max.to_string(),
                "eps" => self.eps.to_string(),
                "grid_n_points" => self.grid_n_points.to_string(),
                "box_length" => self.box_length.to_string(),
                "dt_divisor" => self.dt_divisor.to_string(),
                "output_path" => self
                    .output_path
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default(),
                "n_terms" => self.n_terms.to_string(),
                "alpha_base" => self.alpha_base.to_string(),
                "sweep_datum" => self.sweep_datum.name().to_string(),
                "taylor_alphas" => self
                    .taylor_alphas
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
                "taylor_t_min_exp" => self.taylor_t_min_exp.to_string(),
                "taylor_t_max_exp" => self.taylor_t_max_exp.to_string(),
                "uniform_levels" => self.uniform_levels.to_string(),
                "uniform_t_end" => self.uniform_t_end.to_string(),
                "lp_samples" => self.lp_samples.to_string(),
                _ => unreachable!(),
            };
            let _ = writeln!(out, "# {key} = {value}");
        }
        out
    }
}

/// Parses config text. Blank lines and `#` comments are skipped; keys not
/// present keep their defaults.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut seen = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected key=value, got {content:?}")))?;
        let key = key.trim();
        if seen.contains(&key) {
            return Err(syntax(line, format!("duplicate key {key:?}")));
        }
        cfg.set(line, key, value.trim())?;
        seen.push(key);
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config_str(&text)
}
