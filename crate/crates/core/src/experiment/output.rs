//! CSV writers. Every number is written with 17 significant digits so the
//! files round-trip exactly.

use std::io::{self, Write};

use crate::direct::DirectReport;
use crate::extraordinary::{PiiInstance, PiiProfile};
use crate::reference::ReferenceSolution;
use crate::series::SeriesState;

pub fn num(x: f64) -> String {
    // no "-0" in the files
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn write_reference<W: Write>(w: &mut W, sol: &ReferenceSolution) -> io::Result<()> {
    let p = &sol.params;
    writeln!(w, "# sigma={} tau={} nu={} mu={}", num(p.sigma), num(p.tau), num(p.nu), num(p.mu))?;
    writeln!(w, "# e0={}", num(sol.e0))?;
    writeln!(w, "# e1={}", num(sol.e1))?;
    writeln!(w, "# type={}", sol.solution_type)?;
    writeln!(w, "# residual={}", num(sol.residual_norm))?;
    writeln!(w, "x,E,Eprime")?;
    let prof = &sol.profile;
    for ((x, e), d) in prof.grid().nodes().iter().zip(prof.values()).zip(prof.derivs()) {
        writeln!(w, "{},{},{}", num(*x), num(*e), num(*d))?;
    }
    Ok(())
}

pub fn write_series<W: Write>(w: &mut W, deltas: &[f64]) -> io::Result<()> {
    writeln!(w, "n,log10_delta")?;
    for (k, d) in deltas.iter().enumerate() {
        writeln!(w, "{},{}", k + 1, num(d.log10()))?;
    }
    Ok(())
}

pub fn write_term_profiles<W: Write>(w: &mut W, state: &SeriesState) -> io::Result<()> {
    writeln!(w, "n,x,En,Enprime")?;
    let x = state.grid().nodes();
    for t in state.terms() {
        for ((xi, e), d) in x.iter().zip(t.profile.values()).zip(t.profile.derivs()) {
            writeln!(w, "{},{},{},{}", t.order, num(*xi), num(*e), num(*d))?;
        }
    }
    Ok(())
}

pub fn write_abc_header<W: Write>(w: &mut W) -> io::Result<()> {
    writeln!(w, "n,a_n,b_n,C_n,beta_n,gamma_n,valid")
}

pub fn write_abc_row<W: Write>(w: &mut W, n: usize, inst: Option<&PiiInstance>) -> io::Result<()> {
    match inst {
        Some(i) => writeln!(
            w,
            "{n},{},{},{},{},{},1",
            num(i.a),
            num(i.b),
            num(i.c),
            num(i.beta),
            num(i.gamma)
        ),
        None => writeln!(w, "{n},NaN,NaN,NaN,NaN,NaN,0"),
    }
}

pub fn write_y_header<W: Write>(w: &mut W) -> io::Result<()> {
    writeln!(w, "n,z,y")
}

/// One row group; `None` (an invalid approximant) writes NaN rows so every
/// group has one row per grid node.
pub fn write_y_group<W: Write>(w: &mut W, n: usize, profile: Option<&PiiProfile>, len: usize) -> io::Result<()> {
    match profile {
        Some(p) => {
            for (z, y) in p.z.iter().zip(&p.y) {
                writeln!(w, "{n},{},{}", num(*z), num(*y))?;
            }
        }
        None => {
            for _ in 0..len {
                writeln!(w, "{n},NaN,NaN")?;
            }
        }
    }
    Ok(())
}

pub fn write_direct<W: Write>(w: &mut W, report: &DirectReport) -> io::Result<()> {
    writeln!(w, "n,sup_discrepancy,verdict")?;
    for (k, (d, v)) in report.discrepancies.iter().zip(&report.verdicts).enumerate() {
        writeln!(w, "{},{},{}", k + 1, num(*d), v)?;
    }
    Ok(())
}

/// One sweep point: the swept value and, when it converged, the endpoint
/// values and Painlevé II data.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub result: Option<(f64, f64, PiiInstance)>,
}

pub fn write_sweep<W: Write>(w: &mut W, param: &str, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(w, "{param},a,b,C,e0,e1,converged")?;
    for r in rows {
        match &r.result {
            Some((e0, e1, i)) => writeln!(
                w,
                "{},{},{},{},{},{},1",
                num(r.value),
                num(i.a),
                num(i.b),
                num(i.c),
                num(*e0),
                num(*e1)
            )?,
            None => writeln!(w, "{},NaN,NaN,NaN,NaN,NaN,0", num(r.value))?,
        }
    }
    Ok(())
}
