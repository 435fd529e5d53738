use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh::{DEFAULT_NODES, MIN_NODES};
use crate::params::Parameters;
use crate::reference::DEFAULT_TOL;
use crate::series::MAX_ORDER;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Reference,
    Series,
    Extraordinary,
    Direct,
    Sweep,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Reference => "reference",
            Mode::Series => "series",
            Mode::Extraordinary => "extraordinary",
            Mode::Direct => "direct",
            Mode::Sweep => "sweep",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "reference" => Mode::Reference,
            "series" => Mode::Series,
            "extraordinary" => Mode::Extraordinary,
            "direct" => Mode::Direct,
            "sweep" => Mode::Sweep,
            other => return Err(Error::Validation(format!("unknown mode '{other}'"))),
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Sigma,
    Tau,
    Nu,
    Mu,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Sigma => "sigma",
            SweepParam::Tau => "tau",
            SweepParam::Nu => "nu",
            SweepParam::Mu => "mu",
        }
    }

    pub fn apply(self, base: Parameters, value: f64) -> Parameters {
        let mut p = base;
        match self {
            SweepParam::Sigma => p.sigma = value,
            SweepParam::Tau => p.tau = value,
            SweepParam::Nu => p.nu = value,
            SweepParam::Mu => p.mu = value,
        }
        p
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "sigma" => SweepParam::Sigma,
            "tau" => SweepParam::Tau,
            "nu" => SweepParam::Nu,
            "mu" => SweepParam::Mu,
            other => return Err(Error::Validation(format!("unknown sweep parameter '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self { param: SweepParam::Mu, from: -2.0, to: 2.0, step: 0.1 }
    }
}

impl SweepSpec {
    fn intervals(&self) -> Result<usize> {
        let span = self.to - self.from;
        if !(self.step > 0.0) || !span.is_finite() || span < 0.0 {
            return Err(Error::Validation(format!(
                "sweep needs from <= to and step > 0, got {}..{} step {}",
                self.from, self.to, self.step
            )));
        }
        let m = (span / self.step).round();
        if (m * self.step - span).abs() > 1e-9 * span.abs().max(1.0) || m > 100_000.0 {
            return Err(Error::Validation(format!(
                "sweep step {} does not divide [{}, {}]",
                self.step, self.from, self.to
            )));
        }
        Ok(m as usize)
    }

    /// Sweep values, interpolated between the endpoints so that exact
    /// midpoints such as 0 come out exact.
    pub fn points(&self) -> Result<Vec<f64>> {
        let m = self.intervals()?;
        if m == 0 {
            return Ok(vec![self.from]);
        }
        let mf = m as f64;
        Ok((0..=m)
            .map(|k| {
                let t = k as f64;
                (self.from * (mf - t) + self.to * t) / mf
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: Parameters,
    pub grid_size: usize,
    pub n_max: usize,
    pub tol: f64,
    pub mode: Mode,
    pub sweep: SweepSpec,
    pub out_dir: PathBuf,
    /// Sweep worker count; `None` uses the available parallelism.
    pub workers: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            params: Parameters::CASE_ONE,
            grid_size: DEFAULT_NODES,
            n_max: 60,
            tol: DEFAULT_TOL,
            mode: Mode::Reference,
            sweep: SweepSpec::default(),
            out_dir: PathBuf::from("."),
            workers: None,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Validation(format!("{key}: cannot parse '{}'", value.trim())))
}

impl ExperimentConfig {
    /// Sets one `key = value` entry.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "sigma" => self.params.sigma = parse_num(key, value)?,
            "tau" => self.params.tau = parse_num(key, value)?,
            "nu" => self.params.nu = parse_num(key, value)?,
            "mu" => self.params.mu = parse_num(key, value)?,
            "grid" | "grid_size" => self.grid_size = parse_num(key, value)?,
            "n_max" => self.n_max = parse_num(key, value)?,
            "tol" => self.tol = parse_num(key, value)?,
            "mode" => self.mode = value.parse()?,
            "out" | "out_dir" => self.out_dir = PathBuf::from(value.trim()),
            "workers" => self.workers = Some(parse_num(key, value)?),
            "sweep_param" => self.sweep.param = value.parse()?,
            "sweep_from" => self.sweep.from = parse_num(key, value)?,
            "sweep_to" => self.sweep.to = parse_num(key, value)?,
            "sweep_step" => self.sweep.step = parse_num(key, value)?,
            other => return Err(Error::Validation(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Validation(format!("line {}: expected key = value", lineno + 1)))?;
            self.set(key, value)
                .map_err(|e| Error::Validation(format!("line {}: {}", lineno + 1, strip_prefix(&e))))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.grid_size < MIN_NODES || self.grid_size % 2 == 0 {
            return Err(Error::Validation(format!(
                "grid must be odd and >= {MIN_NODES}, got {}",
                self.grid_size
            )));
        }
        if self.n_max == 0 || self.n_max > MAX_ORDER {
            return Err(Error::Validation(format!("n_max must be in 1..={MAX_ORDER}, got {}", self.n_max)));
        }
        if !(self.tol >= DEFAULT_TOL) || !self.tol.is_finite() {
            return Err(Error::Validation(format!("tol must be >= {DEFAULT_TOL:e}, got {}", self.tol)));
        }
        if self.workers == Some(0) {
            return Err(Error::Validation("workers must be positive".into()));
        }
        if self.mode == Mode::Sweep {
            for v in self.sweep.points()? {
                self.sweep.param.apply(self.params, v).validate()?;
            }
        }
        Ok(())
    }

    /// Soft warnings for points outside the studied range `0 < nu <= 10`, `|mu| < 2`.
    pub fn warnings(&self) -> Vec<String> {
        let outside = |p: &Parameters| !p.in_studied_range();
        let mut out = Vec::new();
        if self.mode == Mode::Sweep {
            if let Ok(points) = self.sweep.points() {
                let n = points.iter().filter(|&&v| outside(&self.sweep.param.apply(self.params, v))).count();
                if n > 0 {
                    out.push(format!("{n} sweep point(s) outside 0 < nu <= 10, |mu| < 2"));
                }
            }
        } else if outside(&self.params) {
            out.push("parameters outside 0 < nu <= 10, |mu| < 2".into());
        }
        out
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Validation(m) => m.clone(),
        other => other.to_string(),
    }
}
