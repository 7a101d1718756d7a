//! Matched-mixedness comparison of `W` and `U` across coupling strengths.

use super::evaluate_point;
use crate::dm_model::{closed_form_mixedness, ModelParams, J_MIN, T_MIN};
use crate::error::{Error, Result};
use crate::relations::MeasurementSetup;

/// Required agreement `|gamma(t) - target|` for a matched temperature.
pub const MATCH_TOL: f64 = 1e-10;
const T_SCAN_MAX: f64 = 1e4;
const T_SCAN_POINTS: usize = 400;
const BISECTION_LIMIT: usize = 200;

fn gamma_at(d: f64, j: f64, t: f64) -> Result<f64> {
    closed_form_mixedness(&ModelParams::new(d, j, t)?)
}

/// Smallest temperature with `gamma(d, j, t) = target`.
///
/// Brackets the first sign change of `gamma - target` on a log-spaced scan
/// of `[T_MIN, 1e4]`, then bisects in `log t`.
pub fn match_mixedness(d: f64, j: f64, target: f64) -> Result<f64> {
    if !target.is_finite() {
        return Err(Error::Usage(format!(
            "target mixedness {target} is not finite"
        )));
    }
    let ratio = (T_SCAN_MAX / T_MIN).powf(1.0 / (T_SCAN_POINTS - 1) as f64);
    let mut ts = Vec::with_capacity(T_SCAN_POINTS);
    let mut fs = Vec::with_capacity(T_SCAN_POINTS);
    for i in 0..T_SCAN_POINTS {
        let t = if i + 1 == T_SCAN_POINTS {
            T_SCAN_MAX
        } else {
            T_MIN * ratio.powi(i as i32)
        };
        ts.push(t);
        fs.push(gamma_at(d, j, t)? - target);
    }
    for i in 0..T_SCAN_POINTS {
        if fs[i] == 0.0 {
            return Ok(ts[i]);
        }
        if i + 1 < T_SCAN_POINTS && fs[i].signum() != fs[i + 1].signum() && fs[i + 1] != 0.0 {
            return bisect(d, j, target, (ts[i], fs[i]), (ts[i + 1], fs[i + 1]));
        }
    }
    let lo = fs.iter().cloned().fold(f64::INFINITY, f64::min) + target;
    let hi = fs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + target;
    Err(Error::Range(format!(
        "target mixedness {target} not reached at D = {d}, J = {j}; achieved range [{lo}, {hi}] over T in [{T_MIN}, {T_SCAN_MAX}]"
    )))
}

fn bisect(d: f64, j: f64, target: f64, mut lo: (f64, f64), mut hi: (f64, f64)) -> Result<f64> {
    for _ in 0..BISECTION_LIMIT {
        let mid = (lo.0 * hi.0).sqrt();
        if mid <= lo.0 || mid >= hi.0 {
            break;
        }
        let f = gamma_at(d, j, mid)? - target;
        if f == 0.0 {
            return Ok(mid);
        }
        if f.signum() == lo.1.signum() {
            lo = (mid, f);
        } else {
            hi = (mid, f);
        }
    }
    let best = if lo.1.abs() <= hi.1.abs() { lo } else { hi };
    if best.1.abs() > MATCH_TOL {
        return Err(Error::Range(format!(
            "bisection for mixedness {target} stalled at T = {} with residual {}",
            best.0, best.1
        )));
    }
    Ok(best.0)
}

/// Largest disagreement of `W` and `U` between matched-mixedness points.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpreadReport {
    pub w_spread: f64,
    pub u_spread: f64,
    /// Number of (target, coupling) pairs compared.
    pub matched: usize,
    /// Targets the other coupling could not reach.
    pub skipped: usize,
}

/// Reference temperatures `|j| * 10^s` for `s` evenly spaced in `[-1, 1]`.
fn reference_temperatures(j: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![j.abs()];
    }
    (0..n)
        .map(|k| j.abs() * 10f64.powf(-1.0 + 2.0 * k as f64 / (n - 1) as f64))
        .collect()
}

/// Compares `W` and `U` at equal mixedness between `reference_j` and each
/// of `others`, without any sign guard.
pub fn matched_spread(
    d: f64,
    reference_j: f64,
    others: &[f64],
    setup: &MeasurementSetup,
    n_targets: usize,
) -> Result<SpreadReport> {
    let mut report = SpreadReport::default();
    for t in reference_temperatures(reference_j, n_targets) {
        let target = gamma_at(d, reference_j, t)?;
        let reference = evaluate_point(d, reference_j, t, setup)?;
        for &j in others {
            let t_match = match match_mixedness(d, j, target) {
                Ok(t) => t,
                Err(Error::Range(_)) => {
                    report.skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let other = evaluate_point(d, j, t_match, setup)?;
            report.matched += 1;
            report.w_spread = report.w_spread.max((other.w - reference.w).abs());
            if let (Some(a), Some(b)) = (reference.u, other.u) {
                report.u_spread = report.u_spread.max((a - b).abs());
            }
        }
    }
    Ok(report)
}

/// Single-valuedness check: `W` and `U` at matched mixedness for couplings
/// of one sign. Targets come from the first sample.
pub fn check_single_valued(
    d: f64,
    j_samples: &[f64],
    setup: &MeasurementSetup,
    n_targets: usize,
) -> Result<SpreadReport> {
    let Some(&first) = j_samples.first() else {
        return Err(Error::Usage("at least one J sample is required".into()));
    };
    if let Some(j) = j_samples.iter().find(|j| !j.is_finite() || j.abs() < J_MIN) {
        return Err(Error::Usage(format!("J sample {j} is zero or not finite")));
    }
    if j_samples.iter().any(|j| j.signum() != first.signum()) {
        return Err(Error::Usage(format!(
            "J samples must share one sign, got {j_samples:?}"
        )));
    }
    if n_targets == 0 {
        return Err(Error::Usage("need at least one mixedness target".into()));
    }
    matched_spread(d, first, &j_samples[1..], setup, n_targets)
}
