//! Experiment runner behind the `painleve` binary: one mode per run, CSV
//! files as output.

mod config;
pub mod output;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

pub use config::{ExperimentConfig, Mode, SweepParam, SweepSpec};
use output::SweepRow;

use crate::direct::{direct_partial_sums, DirectSeriesState};
use crate::error::Error;
use crate::extraordinary::{approximant, convert, convert_profile};
use crate::mesh::Grid;
use crate::params::Parameters;
use crate::reference::{solve_reference, ReferenceSolution};
use crate::series::SeriesState;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_PARTIAL: i32 = 4;

#[derive(Debug)]
pub enum Failure {
    Solver(Error),
    Io(io::Error),
}

/// A failed run with the stage and parameter point it failed at.
#[derive(Debug)]
pub struct RunError {
    pub stage: &'static str,
    pub params: Option<Parameters>,
    pub failure: Failure,
}

impl RunError {
    fn solver(stage: &'static str, params: Option<Parameters>, e: Error) -> Self {
        Self { stage, params, failure: Failure::Solver(e) }
    }

    pub fn config(e: Error) -> Self {
        Self::solver("config", None, e)
    }

    pub fn io(path: &Path, e: io::Error) -> Self {
        let e = io::Error::new(e.kind(), format!("{}: {e}", path.display()));
        Self { stage: "output", params: None, failure: Failure::Io(e) }
    }

    pub fn exit_code(&self) -> i32 {
        match (&self.failure, self.stage) {
            (_, "config") => EXIT_CONFIG,
            (Failure::Solver(Error::Validation(_)), _) => EXIT_CONFIG,
            _ => EXIT_SOLVER,
        }
    }

    pub fn message(&self) -> String {
        match &self.failure {
            Failure::Solver(e) => e.to_string(),
            Failure::Io(e) => e.to_string(),
        }
    }

    /// JSON record for stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let kind = match &self.failure {
            Failure::Solver(e) => e.kind(),
            Failure::Io(_) => "io",
        };
        json!({
            "error": kind,
            "stage": self.stage,
            "message": self.message(),
            "params": self.params.map(|p| json!({
                "sigma": p.sigma, "tau": p.tau, "nu": p.nu, "mu": p.mu,
            })),
            "exit_code": self.exit_code(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub mode: Mode,
    pub files: Vec<PathBuf>,
    /// Sweep points that did not converge.
    pub failed_points: usize,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        if self.failed_points > 0 {
            EXIT_PARTIAL
        } else {
            EXIT_OK
        }
    }
}

struct Files {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Files {
    fn write(&mut self, name: &str, body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> Result<(), RunError> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(|e| RunError::io(&path, e))?;
        let mut w = BufWriter::new(file);
        body(&mut w).and_then(|_| w.flush()).map_err(|e| RunError::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }
}

pub fn run(config: &ExperimentConfig) -> Result<RunSummary, RunError> {
    config.validate().map_err(RunError::config)?;
    fs::create_dir_all(&config.out_dir).map_err(|e| RunError::io(&config.out_dir, e))?;
    let grid = Grid::shared(config.grid_size).map_err(RunError::config)?;
    let mut files = Files { dir: config.out_dir.clone(), written: Vec::new() };
    let p = config.params;
    let mut failed_points = 0;

    match config.mode {
        Mode::Reference => {
            let sol = reference(&p, &grid, config.tol)?;
            files.write("reference.csv", |w| output::write_reference(w, &sol))?;
        }
        Mode::Series => {
            let sol = reference(&p, &grid, config.tol)?;
            let state = series(&p, &grid, config.n_max)?;
            let deltas = state.delta_sequence(&sol).map_err(|e| RunError::solver("series", Some(p), e))?;
            files.write("series.csv", |w| output::write_series(w, &deltas))?;
            files.write("term_profiles.csv", |w| output::write_term_profiles(w, &state))?;
        }
        Mode::Extraordinary => {
            let sol = reference(&p, &grid, config.tol)?;
            let inst = convert(sol.e0, sol.e1, &p).map_err(|e| RunError::solver("conversion", Some(p), e))?;
            let exact = convert_profile(&sol.profile, &inst);
            let state = series(&p, &grid, config.n_max)?;
            let approximants = (1..=config.n_max)
                .map(|n| approximant(&state, n))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| RunError::solver("conversion", Some(p), e))?;
            files.write("abc_sequence.csv", |w| {
                output::write_abc_header(w)?;
                for ap in &approximants {
                    output::write_abc_row(w, ap.order, ap.instance.as_ref())?;
                }
                Ok(())
            })?;
            files.write("y_profiles.csv", |w| {
                output::write_y_header(w)?;
                output::write_y_group(w, 0, Some(&exact), grid.len())?;
                for ap in &approximants {
                    output::write_y_group(w, ap.order, ap.profile.as_ref(), grid.len())?;
                }
                Ok(())
            })?;
        }
        Mode::Direct => {
            let sol = reference(&p, &grid, config.tol)?;
            let inst = convert(sol.e0, sol.e1, &p).map_err(|e| RunError::solver("conversion", Some(p), e))?;
            let exact = convert_profile(&sol.profile, &inst);
            let mut state = DirectSeriesState::new(inst, &grid).map_err(|e| RunError::solver("direct", Some(p), e))?;
            let report = direct_partial_sums(&mut state, &exact, config.n_max)
                .map_err(|e| RunError::solver("direct", Some(p), e))?;
            files.write("direct.csv", |w| output::write_direct(w, &report))?;
        }
        Mode::Sweep => {
            let rows = sweep(config).map_err(RunError::config)?;
            failed_points = rows.iter().filter(|r| r.result.is_none()).count();
            files.write("sweep.csv", |w| output::write_sweep(w, config.sweep.param.as_str(), &rows))?;
        }
    }
    Ok(RunSummary { mode: config.mode, files: files.written, failed_points })
}

fn reference(p: &Parameters, grid: &Arc<Grid>, tol: f64) -> Result<ReferenceSolution, RunError> {
    solve_reference(p, grid, tol).map_err(|e| RunError::solver("reference", Some(*p), e))
}

fn series(p: &Parameters, grid: &Arc<Grid>, n_max: usize) -> Result<SeriesState, RunError> {
    let mut state = SeriesState::new(p, grid).map_err(|e| RunError::solver("series", Some(*p), e))?;
    state.extend(n_max).map_err(|e| RunError::solver("series", Some(*p), e))?;
    Ok(state)
}

/// Solves and converts every sweep point on a worker pool. Points that fail
/// come back with `result: None`; rows keep the sweep order.
pub fn sweep(config: &ExperimentConfig) -> Result<Vec<SweepRow>, Error> {
    let points = config.sweep.points()?;
    let grid = Grid::shared(config.grid_size)?;
    let one = |value: f64| {
        let p = config.sweep.param.apply(config.params, value);
        let result = solve_reference(&p, &grid, config.tol)
            .and_then(|s| convert(s.e0, s.e1, &p).map(|inst| (s.e0, s.e1, inst)))
            .ok();
        SweepRow { value, result }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Validation(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| points.par_iter().map(|&v| one(v)).collect()))
}
