//! Parameter sweeps over `(D, J, T)` grids.

mod analysis;
mod csv;
mod presets;

pub use analysis::{check_single_valued, match_mixedness, matched_spread, SpreadReport, MATCH_TOL};
pub use csv::{emit_csv, format_g17, record_fields, write_csv, CSV_HEADER};
pub use presets::{figure_preset, Preset, PRESET_NAMES};

use std::str::FromStr;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::dm_model::{thermal_state, ModelParams, J_MIN, T_MIN};
use crate::error::{Error, Result};
use crate::relations::{qc_vur, qm_eur, MeasurementSetup};
use crate::state::{concurrence_two_qubit, mixedness, STATE_TOL};

/// Slack allowed on the record inequalities.
pub const INEQUALITY_TOL: f64 = 1e-9;

/// Linearly spaced axis `start, ..., stop` with `steps` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self> {
        let r = AxisRange { start, stop, steps };
        r.validate("axis")?;
        Ok(r)
    }

    pub fn fixed(value: f64) -> Self {
        AxisRange {
            start: value,
            stop: value,
            steps: 1,
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Usage(format!("{name} range has a non-finite end")));
        }
        if self.steps == 0 {
            return Err(Error::Usage(format!(
                "{name} range needs at least one step"
            )));
        }
        if self.start > self.stop {
            return Err(Error::Usage(format!(
                "{name} range start {} exceeds stop {}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.steps == 1 {
            return self.start;
        }
        if i + 1 == self.steps {
            return self.stop;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }
}

impl FromStr for AxisRange {
    type Err = Error;

    /// Parses `start:stop:steps`, or a bare value for a single point.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let number = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("cannot parse {p:?} as a number in range {s:?}")))
        };
        match parts.as_slice() {
            [v] => Ok(AxisRange::fixed(number(v)?)),
            [a, b, n] => {
                let steps = n.trim().parse::<usize>().map_err(|_| {
                    Error::Usage(format!("cannot parse {n:?} as a step count in range {s:?}"))
                })?;
                AxisRange::new(number(a)?, number(b)?, steps)
            }
            _ => Err(Error::Usage(format!(
                "expected start:stop:steps, got {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepGrid {
    pub d: AxisRange,
    pub j: AxisRange,
    pub t: AxisRange,
    pub theta: f64,
}

impl SweepGrid {
    pub fn new(d: AxisRange, j: AxisRange, t: AxisRange, theta: f64) -> Result<Self> {
        let grid = SweepGrid { d, j, t, theta };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        self.d.validate("D")?;
        self.j.validate("J")?;
        self.t.validate("T")?;
        if self.d.start < 0.0 {
            return Err(Error::Usage(format!(
                "D must be nonnegative, got {}",
                self.d.start
            )));
        }
        if self.t.start < T_MIN {
            return Err(Error::Usage(format!(
                "T must be at least {T_MIN}, got {}",
                self.t.start
            )));
        }
        if !self.theta.is_finite() {
            return Err(Error::Usage(format!(
                "theta = {} is not finite",
                self.theta
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.d.steps * self.j.steps * self.t.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(d, j, t)` at flat index `i` in row-major order.
    pub fn point(&self, i: usize) -> (f64, f64, f64) {
        let it = i % self.t.steps;
        let ij = (i / self.t.steps) % self.j.steps;
        let id = i / (self.t.steps * self.j.steps);
        (self.d.value(id), self.j.value(ij), self.t.value(it))
    }
}

/// Quantities evaluated at one grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointValues {
    pub gamma: f64,
    pub concurrence: f64,
    pub l_tra: f64,
    pub lhs: f64,
    pub w: f64,
    pub u: Option<f64>,
    pub h_rb: f64,
    pub h_sb: f64,
    pub h_ab: f64,
    pub eur_rhs: f64,
    pub u_eur: Option<f64>,
}

impl PointValues {
    /// Descriptions of every violated record invariant.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(-STATE_TOL..=0.75 + STATE_TOL).contains(&self.gamma) {
            out.push(format!("gamma = {} outside [0, 0.75]", self.gamma));
        }
        if !(-STATE_TOL..=1.0 + STATE_TOL).contains(&self.concurrence) {
            out.push(format!("concurrence = {} outside [0, 1]", self.concurrence));
        }
        if self.lhs < self.w - INEQUALITY_TOL {
            out.push(format!("lhs = {} below w = {}", self.lhs, self.w));
        }
        if self.h_rb + self.h_sb < self.eur_rhs - INEQUALITY_TOL {
            out.push(format!(
                "entropic sum {} below bound {}",
                self.h_rb + self.h_sb,
                self.eur_rhs
            ));
        }
        out
    }
}

/// Why a grid point carries no values.
#[derive(Clone, Debug, PartialEq)]
pub enum PointIssue {
    /// Outside the model domain, e.g. `|J| < J_MIN`.
    Rejected(String),
    /// Evaluation failed or produced a record that breaks an invariant.
    Failed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub d: f64,
    pub j: f64,
    pub t: f64,
    pub theta: f64,
    pub values: Option<PointValues>,
    pub issue: Option<PointIssue>,
}

impl SweepRecord {
    pub fn is_failure(&self) -> bool {
        matches!(self.issue, Some(PointIssue::Failed(_)))
    }
}

/// Evaluates every quantity at one parameter point.
///
/// The entropic relation measures the first two `Q_k` of `setup`.
pub fn evaluate_point(d: f64, j: f64, t: f64, setup: &MeasurementSetup) -> Result<PointValues> {
    let p = ModelParams::new(d, j, t)?;
    let rho = thermal_state(&p)?;
    let vur = qc_vur(&rho, setup)?;
    let eur = qm_eur(&rho, &setup.pairs[0].q, &setup.pairs[1].q)?;
    Ok(PointValues {
        gamma: mixedness(&rho),
        concurrence: concurrence_two_qubit(&rho)?,
        l_tra: vur.l_tra,
        lhs: vur.lhs,
        w: vur.w,
        u: vur.u,
        h_rb: eur.h_rb,
        h_sb: eur.h_sb,
        h_ab: eur.h_ab,
        eur_rhs: eur.rhs,
        u_eur: eur.u_eur,
    })
}

/// Evaluates one point and checks the record invariants; never fails.
pub fn evaluate_record(d: f64, j: f64, t: f64, setup: &MeasurementSetup) -> SweepRecord {
    let mut record = SweepRecord {
        d,
        j,
        t,
        theta: setup.theta,
        values: None,
        issue: None,
    };
    if j.abs() < J_MIN {
        record.issue = Some(PointIssue::Rejected(format!(
            "|J| = {} below {J_MIN:e}",
            j.abs()
        )));
        return record;
    }
    match evaluate_point(d, j, t, setup) {
        Ok(values) => {
            let violations = values.violations();
            if !violations.is_empty() {
                record.issue = Some(PointIssue::Failed(violations.join("; ")));
            }
            record.values = Some(values);
        }
        Err(e) => record.issue = Some(PointIssue::Failed(e.to_string())),
    }
    record
}

/// One record per grid point, in row-major `(d, j, t)` order.
pub fn run_sweep(grid: &SweepGrid, setup: &MeasurementSetup) -> Result<Vec<SweepRecord>> {
    grid.validate()?;
    let setup = setup.with_theta(grid.theta);
    setup.measured_subsystem()?;
    let eval = |i: usize| {
        let (d, j, t) = grid.point(i);
        evaluate_record(d, j, t, &setup)
    };
    #[cfg(feature = "parallel")]
    let records = (0..grid.len()).into_par_iter().map(eval).collect();
    #[cfg(not(feature = "parallel"))]
    let records = (0..grid.len()).map(eval).collect();
    Ok(records)
}
