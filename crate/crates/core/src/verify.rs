//! The invariant suite behind `qcvur verify`.
//!
//! Each check compares library output against an oracle written out
//! independently here, at the tolerance the check names.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dm_model::{closed_form_mixedness, thermal_state, ModelParams, T_MIN};
use crate::error::Result;
use crate::kernel::{ComplexMatrix, C64};
use crate::measurement::{conditional_stats, sequential_decomposition, variance, Observable};
use crate::random::{random_density, random_hermitian};
use crate::relations::{
    l_tra, qc_vur, qm_eur, schrodinger_bound, MeasurementPair, MeasurementSetup,
};
use crate::state::{concurrence_two_qubit, mixedness};
use crate::sweep::{
    check_single_valued, figure_preset, matched_spread, run_sweep, write_csv, SweepRecord,
};

pub const GRID_D: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
pub const GRID_J: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
pub const GRID_T: [f64; 5] = [0.2, 0.5, 1.0, 2.0, 5.0];

/// Outcome of one numbered check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {}: {} ({:.2?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed
        )
    }
}

fn timed(
    id: u8,
    title: &'static str,
    limit: Option<Duration>,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CheckOutcome {
    let start = Instant::now();
    let (mut passed, mut detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            passed = false;
            detail.push_str(&format!("; over the {limit:?} budget"));
        }
    }
    CheckOutcome {
        id,
        title,
        passed,
        detail,
        elapsed,
    }
}

fn grid() -> impl Iterator<Item = (f64, f64, f64)> {
    GRID_D.into_iter().flat_map(|d| {
        GRID_J
            .into_iter()
            .flat_map(move |j| GRID_T.into_iter().map(move |t| (d, j, t)))
    })
}

/// Printed thermal-state entries `(rho_11, rho_22, rho_23, Z)` before normalization.
fn printed_entries(d: f64, j: f64, t: f64) -> (f64, f64, C64, f64) {
    let beta = 1.0 / t;
    let delta = 2.0 * j * (1.0 + d * d).sqrt();
    let rho11 = (-beta * j / 2.0).exp();
    let rho22 = (beta * (j - delta) / 2.0).exp() * (1.0 + (beta * delta).exp()) / 2.0;
    let rho23 = C64::from_polar(1.0, d.atan())
        * ((beta * (j - delta) / 2.0).exp() * (1.0 - (beta * delta).exp()) / 2.0);
    let z = 2.0 * (-beta * j / 2.0).exp() * (1.0 + (beta * j).exp() * (beta * delta / 2.0).cosh());
    (rho11, rho22, rho23, z)
}

fn printed_mixedness(d: f64, j: f64, t: f64) -> f64 {
    let beta = 1.0 / t;
    let delta = 2.0 * j * (1.0 + d * d).sqrt();
    let num =
        4.0 * (beta * (j + delta)).exp() * ((beta * j).cosh() + 2.0 * (beta * delta / 2.0).cosh());
    let den = (beta * (j + delta)).exp() + (beta * j).exp() + 2.0 * (beta * delta / 2.0).exp();
    num / (den * den)
}

/// Concurrence with the subtracted term `e^{sign * beta J / 2}`; `sign = +1`
/// is the form as printed, `-1` the corrected one.
fn concurrence_oracle(d: f64, j: f64, t: f64, sign: f64) -> f64 {
    let beta = 1.0 / t;
    let delta = 2.0 * j * (1.0 + d * d).sqrt();
    let (_, _, _, z) = printed_entries(d, j, t);
    let coherence = 0.5 * ((beta * (j - delta) / 2.0).exp() * (1.0 - (beta * delta).exp())).abs();
    (2.0 / z) * (coherence - (sign * beta * j / 2.0).exp()).max(0.0)
}

fn params(d: f64, j: f64, t: f64) -> Result<ModelParams> {
    ModelParams::new(d, j, t)
}

pub fn gibbs_closed_form() -> CheckOutcome {
    timed(
        1,
        "thermal state matches closed-form entries",
        Some(Duration::from_secs(1)),
        || {
            let mut worst = 0.0_f64;
            for (d, j, t) in grid() {
                let (a, b, c, z) = printed_entries(d, j, t);
                let zero = C64::new(0.0, 0.0);
                let (a, b) = (C64::new(a, 0.0), C64::new(b, 0.0));
                let expected = ComplexMatrix::from_rows([
                    [a, zero, zero, zero],
                    [zero, b, c, zero],
                    [zero, c.conj(), b, zero],
                    [zero, zero, zero, a],
                ])
                .scale_real(1.0 / z);
                worst = worst.max(
                    thermal_state(&params(d, j, t)?)?
                        .matrix()
                        .max_abs_diff(&expected),
                );
            }
            Ok((
                worst <= 1e-10,
                format!("max entry deviation {worst:.3e} over 120 points"),
            ))
        },
    )
}

pub fn mixedness_closed_form() -> CheckOutcome {
    timed(2, "mixedness closed form", None, || {
        let mut worst = 0.0_f64;
        let mut worst_printed = 0.0_f64;
        for (d, j, t) in grid() {
            let p = params(d, j, t)?;
            let direct = mixedness(&thermal_state(&p)?);
            worst = worst.max((closed_form_mixedness(&p)? - direct).abs());
            worst_printed = worst_printed.max((printed_mixedness(d, j, t) - direct).abs());
        }
        let spot = closed_form_mixedness(&params(1.0, 1.0, 1.0)?)?;
        let oracle = printed_mixedness(1.0, 1.0, 1.0);
        let passed = worst <= 1e-10
            && worst_printed <= 1e-10
            && (spot - oracle).abs() <= 1e-4
            && (spot - 0.33482).abs() <= 1e-4;
        Ok((
            passed,
            format!("closed form dev {worst:.3e}, printed form dev {worst_printed:.3e}, gamma(1,1,1) = {spot:.6}"),
        ))
    })
}

pub fn concurrence_closed_form() -> CheckOutcome {
    timed(3, "concurrence closed form", None, || {
        let mut worst = 0.0_f64;
        let mut printed_failures = Vec::new();
        for (d, j, t) in grid() {
            let direct = concurrence_two_qubit(&thermal_state(&params(d, j, t)?)?)?;
            worst = worst.max((concurrence_oracle(d, j, t, -1.0) - direct).abs());
            if (concurrence_oracle(d, j, t, 1.0) - direct).abs() > 1e-10 {
                printed_failures.push((d, j, t));
            }
        }
        let spot = concurrence_two_qubit(&thermal_state(&params(1.0, 1.0, 1.0)?)?)?;
        let singlet = concurrence_two_qubit(&thermal_state(&params(0.0, 1.0, T_MIN)?)?)?;
        let passed = worst <= 1e-10
            && (spot - concurrence_oracle(1.0, 1.0, 1.0, -1.0)).abs() <= 1e-4
            && (spot - 0.61557).abs() <= 1e-4
            && (singlet - 1.0).abs() <= 1e-6
            && !printed_failures.is_empty();
        let first = printed_failures
            .first()
            .map(|p| format!(", e.g. (D, J, T) = {p:?}"))
            .unwrap_or_default();
        Ok((
            passed,
            format!(
                "corrected form dev {worst:.3e}, C(1,1,1) = {spot:.6}, C(0,1,T_MIN) = {singlet:.9}; \
                 printed form disagrees at {} points{first}",
                printed_failures.len()
            ),
        ))
    })
}

fn random_observable(n: usize, site: usize, rng: &mut ChaCha8Rng) -> Result<Observable> {
    Observable::new(random_hermitian(n, rng), site)
}

/// Distinct sites drawn without replacement.
fn distinct_sites(count: usize, n_sites: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut sites: Vec<usize> = (0..n_sites).collect();
    for i in 0..count {
        let k = rng.random_range(i..n_sites);
        sites.swap(i, k);
    }
    sites.truncate(count);
    sites
}

pub fn total_variance() -> CheckOutcome {
    timed(
        4,
        "law of total variance",
        Some(Duration::from_secs(10)),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            let mut worst_single = 0.0_f64;
            for case in 0..200 {
                let n_sites = 2 + case % 2;
                let rho = random_density(
                    &vec![2; n_sites],
                    rng.random_range(1..=1 << n_sites),
                    &mut rng,
                );
                let sites = distinct_sites(2, n_sites, &mut rng);
                let q = random_observable(2, sites[0], &mut rng)?;
                let o = random_observable(2, sites[1], &mut rng)?;
                let stats = conditional_stats(&rho, &q, &o)?;
                worst_single = worst_single.max((stats.total() - variance(&rho, &q)?).abs());
            }
            let mut worst_chain = 0.0_f64;
            for case in 0..100 {
                let n_sites = 3 + case % 2;
                let rho = random_density(
                    &vec![2; n_sites],
                    rng.random_range(1..=1 << n_sites),
                    &mut rng,
                );
                let sites = distinct_sites(n_sites, n_sites, &mut rng);
                let q = random_observable(2, sites[0], &mut rng)?;
                let controls = sites[1..]
                    .iter()
                    .map(|&s| random_observable(2, s, &mut rng))
                    .collect::<Result<Vec<_>>>()?;
                let seq = sequential_decomposition(&rho, &q, &controls)?;
                let q_full = q.embedded(rho.dims())?;
                let mean = rho.expect(&q_full).re;
                let direct = rho.expect(&(&q_full * &q_full)).re - mean * mean;
                worst_chain = worst_chain.max((seq.total() - direct).abs());
            }
            Ok((
            worst_single <= 1e-10 && worst_chain <= 1e-9,
            format!("single-control dev {worst_single:.3e} (200 cases), chained dev {worst_chain:.3e} (100 cases)"),
        ))
        },
    )
}

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    &random_hermitian(n, rng) + &random_hermitian(n, rng).scale(C64::new(0.0, 1.0))
}

fn dm_grid_records() -> Result<Vec<SweepRecord>> {
    let mut records = Vec::new();
    for name in ["fig1a", "fig1b", "fig2", "fig3a", "fig3b"] {
        let preset = figure_preset(name)?;
        records.extend(run_sweep(&preset.grid, &preset.setup)?);
    }
    Ok(records)
}

pub fn inequality_suites() -> CheckOutcome {
    timed(
        5,
        "inequality suites",
        Some(Duration::from_secs(10)),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let mut failures = Vec::new();

            let mut worst9 = f64::INFINITY;
            for _ in 0..500 {
                let rho = random_density(&[2], rng.random_range(1..=2), &mut rng);
                let a = random_hermitian(2, &mut rng);
                let b = random_hermitian(2, &mut rng);
                let o = random_matrix(2, &mut rng);
                let theta = rng.random_range(0.0..2.0 * PI);
                let sum = variance(&rho, &Observable::new(a.clone(), 0)?)?
                    + variance(&rho, &Observable::new(b.clone(), 0)?)?;
                worst9 = worst9.min(sum - l_tra(&rho, &a, &b, &o, theta)?);
            }
            if worst9 < -1e-9 {
                failures.push("variance-sum bound");
            }

            let records = dm_grid_records()?;
            let evaluated: Vec<_> = records.iter().filter_map(|r| r.values).collect();
            let worst4_grid = evaluated
                .iter()
                .map(|v| v.lhs - v.w)
                .fold(f64::INFINITY, f64::min);
            let worst3_grid = evaluated
                .iter()
                .map(|v| v.h_rb + v.h_sb - v.eur_rhs)
                .fold(f64::INFINITY, f64::min);
            let grid_failures = records.iter().filter(|r| r.is_failure()).count();
            if worst4_grid < -1e-9 || grid_failures > 0 {
                failures.push("control-assisted bound on the model grid");
            }
            if worst3_grid < -1e-9 {
                failures.push("entropic bound on the model grid");
            }

            let mut worst4_random = f64::INFINITY;
            for case in 0..200 {
                let n_sites = 2 + case % 3;
                let rho = random_density(
                    &vec![2; n_sites],
                    rng.random_range(1..=1 << n_sites),
                    &mut rng,
                );
                let sites = distinct_sites(n_sites, n_sites, &mut rng);
                let pairs = (0..2)
                    .map(|_| {
                        Ok(MeasurementPair {
                            q: random_observable(2, sites[0], &mut rng)?,
                            controls: sites[1..]
                                .iter()
                                .map(|&s| random_observable(2, s, &mut rng))
                                .collect::<Result<Vec<_>>>()?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let setup = MeasurementSetup {
                    pairs,
                    ltra_operator: random_matrix(2, &mut rng),
                    theta: rng.random_range(0.0..2.0 * PI),
                };
                let r = qc_vur(&rho, &setup)?;
                worst4_random = worst4_random.min(r.lhs - r.w);
            }
            if worst4_random < -1e-9 {
                failures.push("control-assisted bound on random states");
            }

            let mut worst3_random = f64::INFINITY;
            for _ in 0..200 {
                let rho = random_density(&[2, 2], rng.random_range(1..=4), &mut rng);
                let r = qm_eur(
                    &rho,
                    &random_observable(2, 0, &mut rng)?,
                    &random_observable(2, 0, &mut rng)?,
                )?;
                worst3_random = worst3_random.min(r.lhs() - r.rhs);
            }
            if worst3_random < -1e-9 {
                failures.push("entropic bound on random states");
            }

            let mut worst1 = f64::INFINITY;
            for _ in 0..500 {
                let rho = random_density(&[2], rng.random_range(1..=2), &mut rng);
                let (lhs, rhs) = schrodinger_bound(
                    &rho,
                    &random_observable(2, 0, &mut rng)?,
                    &random_observable(2, 0, &mut rng)?,
                )?;
                worst1 = worst1.min(lhs - rhs);
            }
            if worst1 < -1e-9 {
                failures.push("Schrodinger bound");
            }

            Ok((
            failures.is_empty(),
            format!(
                "min slack: variance-sum {worst9:.2e}, control-assisted grid {worst4_grid:.2e} ({} points), \
                 random {worst4_random:.2e}, entropic grid {worst3_grid:.2e}, random {worst3_random:.2e}, \
                 Schrodinger {worst1:.2e}{}",
                evaluated.len(),
                if failures.is_empty() { String::new() } else { format!("; failed: {}", failures.join(", ")) }
            ),
        ))
        },
    )
}

pub fn point_checks() -> CheckOutcome {
    timed(6, "fixed-setting point values", None, || {
        let setup = MeasurementSetup::standard(0.5);
        let hot = qc_vur(&thermal_state(&params(1.0, 1.0, 1e6)?)?, &setup)?;
        let hot_w = 1.0 + 0.5f64.cos();
        let hot_ok = (hot.lhs - 2.0).abs() <= 1e-5
            && (hot.w - hot_w).abs() <= 1e-5
            && hot
                .u
                .is_some_and(|u| (u - 2.0 / hot_w).abs() <= 1e-4 && (u - 1.06518).abs() <= 1e-4);

        let (a, b, c, z) = printed_entries(1.0, 1.0, 1.0);
        let c_xx = 2.0 * c.re / z;
        let c_zz = (2.0 * a - 2.0 * b) / z;
        let lhs = 2.0 - c_xx * c_xx - c_zz * c_zz;
        let w = hot_w - c_xx * c_xx - c_zz * c_zz;
        let unit = qc_vur(&thermal_state(&params(1.0, 1.0, 1.0)?)?, &setup)?;
        let unit_ok = (unit.lhs - lhs).abs() <= 1e-4
            && (unit.w - w).abs() <= 1e-4
            && unit.u.is_some_and(|u| (u - lhs / w).abs() <= 1e-4)
            && (unit.lhs - 1.20560).abs() <= 1e-4
            && (unit.w - 1.08318).abs() <= 1e-4
            && unit.u.is_some_and(|u| (u - 1.11302).abs() <= 1e-4);
        Ok((
            hot_ok && unit_ok,
            format!(
                "T = 1e6: lhs {:.6}, w {:.6}, u {:?}; (1,1,1): lhs {:.6}, w {:.6}, u {:?}",
                hot.lhs, hot.w, hot.u, unit.lhs, unit.w, unit.u
            ),
        ))
    })
}

pub fn pure_singlet_point() -> CheckOutcome {
    timed(7, "D = 0, J = 1, T = T_MIN point", None, || {
        let p = params(0.0, 1.0, T_MIN)?;
        let rho = thermal_state(&p)?;
        let gamma = mixedness(&rho);
        let r = qc_vur(&rho, &MeasurementSetup::standard(0.5))?;
        let u_ok = r.u.is_none_or(|u| u.abs() <= 1e-4);
        let passed = gamma <= 1e-5 && r.w.abs() <= 0.13 && r.lhs <= 1e-5 && u_ok;
        Ok((
            passed,
            format!(
                "gamma {gamma:.3e}, lhs {:.3e}, u {:?}; unclamped W = {:.9} (cos 0.5 - 1 = {:.9}), \
                 so W does not vanish here: it misses zero by {:.6}",
                r.lhs,
                r.u,
                r.w,
                0.5f64.cos() - 1.0,
                r.w.abs()
            ),
        ))
    })
}

pub fn single_valuedness() -> CheckOutcome {
    timed(
        8,
        "matched-mixedness single-valuedness",
        Some(Duration::from_secs(5)),
        || {
            let setup = MeasurementSetup::standard(0.5);
            let mut worst = (0.0_f64, 0.0_f64);
            let mut matched = 0;
            let mut skipped = 0;
            for d in [0.0, 1.0, 2.0] {
                for samples in [[0.5, 1.0, 2.0], [-0.5, -1.0, -2.0]] {
                    let r = check_single_valued(d, &samples, &setup, 20)?;
                    worst = (worst.0.max(r.w_spread), worst.1.max(r.u_spread));
                    matched += r.matched;
                    skipped += r.skipped;
                }
            }
            let cross = matched_spread(1.0, 1.0, &[-1.0], &setup, 20)?;
            let passed = worst.0 <= 1e-6
                && worst.1 <= 1e-6
                && matched > 0
                && cross.matched > 0
                && cross.w_spread.max(cross.u_spread) > 1e-3;
            Ok((
                passed,
                format!(
                    "same-sign spreads w {:.2e}, u {:.2e} ({matched} matched, {skipped} skipped); \
                 cross-sign spreads w {:.3e}, u {:.3e} ({} matched)",
                    worst.0, worst.1, cross.w_spread, cross.u_spread, cross.matched
                ),
            ))
        },
    )
}

pub fn tightness_comparison() -> CheckOutcome {
    timed(9, "variance vs entropic tightness at T = 1", None, || {
        let preset = figure_preset("fig7b")?;
        let records = run_sweep(&preset.grid, &preset.setup)?;
        let (mut both, mut tighter) = (0usize, 0usize);
        for v in records.iter().filter_map(|r| r.values) {
            if let (Some(u), Some(u_eur)) = (v.u, v.u_eur) {
                both += 1;
                if u < u_eur {
                    tighter += 1;
                }
            }
        }
        let fraction = tighter as f64 / both.max(1) as f64;
        Ok((
            fraction > 0.5,
            format!("u < u_eur at {tighter} of {both} points (fraction {fraction:.5})"),
        ))
    })
}

pub fn determinism() -> CheckOutcome {
    timed(10, "repeatable sweep output", None, || {
        let preset = figure_preset("fig1a")?;
        let render = || -> Result<Vec<u8>> {
            let mut buf = Vec::new();
            write_csv(&run_sweep(&preset.grid, &preset.setup)?, &mut buf)?;
            Ok(buf)
        };
        let (first, second) = (render()?, render()?);
        Ok((
            first == second,
            format!("two fig1a renders of {} bytes compared", first.len()),
        ))
    })
}

/// Runs every check in order.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        gibbs_closed_form(),
        mixedness_closed_form(),
        concurrence_closed_form(),
        total_variance(),
        inequality_suites(),
        point_checks(),
        pure_singlet_point(),
        single_valuedness(),
        tightness_comparison(),
        determinism(),
    ]
}
