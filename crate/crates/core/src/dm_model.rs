//! Two-qubit Heisenberg model with a Dzyaloshinski-Moriya term along z.
//!
//! `H = (J/2) [xx + yy + zz + D (xy - yx)]` in units with `k_B = 1`. The
//! thermal state is an X-state:
//!
//! ```text
//!          | a  0  0  0 |
//! rho(T) = | 0  b  z  0 | / Z      a = e^{-bJ/2}
//!          | 0  z* b  0 |          b = e^{bJ/2} cosh(b delta/2)
//!          | 0  0  0  a |          z = -e^{i theta_dm} e^{bJ/2} sinh(b delta/2)
//! ```
//!
//! with `delta = 2 J sqrt(1 + D^2)` and `theta_dm = arctan D`. Every closed
//! form below is written with the largest exponent factored out so that
//! `beta |J|` up to `1 / T_MIN` never overflows.

use crate::error::{Error, Result};
use crate::kernel::exp_hermitian_shifted;
use crate::kernel::pauli::{sigma_x, sigma_y, sigma_z};
use crate::kernel::{kron, ComplexMatrix, C64};
use crate::state::DensityOperator;

/// Lowest admissible temperature.
pub const T_MIN: f64 = 1e-3;
/// Couplings with smaller magnitude are treated as zero and rejected.
pub const J_MIN: f64 = 1e-9;

/// Model parameters `(D, J, T)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    d: f64,
    j: f64,
    t: f64,
}

impl ModelParams {
    pub fn new(d: f64, j: f64, t: f64) -> Result<Self> {
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::Range(format!(
                "DM strength D = {d} must be finite and >= 0"
            )));
        }
        if !j.is_finite() || j.abs() < J_MIN {
            return Err(Error::Range(format!(
                "coupling J = {j} must be finite and nonzero"
            )));
        }
        if !(t.is_finite() && t >= T_MIN) {
            return Err(Error::Range(format!(
                "temperature T = {t} must be finite and >= {T_MIN}"
            )));
        }
        Ok(ModelParams { d, j, t })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.t
    }

    /// `delta = 2 J sqrt(1 + D^2)`; carries the sign of `J`.
    pub fn delta(&self) -> f64 {
        2.0 * self.j * (1.0 + self.d * self.d).sqrt()
    }

    /// Phase of `1 + iD`.
    pub fn theta_dm(&self) -> f64 {
        self.d.atan()
    }
}

/// Builds the Hamiltonian matrix for arbitrary `(D, J)`, including `J = 0`.
pub fn dm_hamiltonian(d: f64, j: f64) -> ComplexMatrix {
    let (x, y, z) = (sigma_x(), sigma_y(), sigma_z());
    let heisenberg = &(&kron(&x, &x) + &kron(&y, &y)) + &kron(&z, &z);
    let dm = &kron(&x, &y) - &kron(&y, &x);
    (&heisenberg + &dm.scale_real(d)).scale_real(j / 2.0)
}

pub fn hamiltonian(p: &ModelParams) -> ComplexMatrix {
    dm_hamiltonian(p.d, p.j)
}

/// Gibbs state `e^{-beta H} / Tr e^{-beta H}` from the spectral exponential.
pub fn thermal_state(p: &ModelParams) -> Result<DensityOperator> {
    let (unnormalized, _shift) = exp_hermitian_shifted(&hamiltonian(p), -p.beta())?;
    let z = unnormalized.trace().re;
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Range(format!(
            "partition function underflow at {p:?}"
        )));
    }
    DensityOperator::new(
        unnormalized.scale_real(1.0 / z).hermitian_part(),
        vec![2, 2],
    )
}

/// Normalized X-state entries `(a, b, z)` of the thermal state, each
/// divided by the partition function.
#[derive(Clone, Copy, Debug)]
pub struct XStateEntries {
    /// `rho_11 = rho_44`.
    pub corner: f64,
    /// `rho_22 = rho_33`.
    pub center: f64,
    /// `rho_23`.
    pub coherence: C64,
}

impl XStateEntries {
    pub fn to_matrix(&self) -> ComplexMatrix {
        let zero = C64::new(0.0, 0.0);
        let a = C64::new(self.corner, 0.0);
        let b = C64::new(self.center, 0.0);
        ComplexMatrix::from_rows([
            [a, zero, zero, zero],
            [zero, b, self.coherence, zero],
            [zero, self.coherence.conj(), b, zero],
            [zero, zero, zero, a],
        ])
    }
}

/// Closed-form thermal entries, rescaled by `e^{-m}` with
/// `m = max(-bJ/2, bJ/2 + b|delta|/2)` before normalizing.
pub fn closed_form_entries(p: &ModelParams) -> XStateEntries {
    let x = p.beta() * p.j / 2.0;
    let y = p.beta() * p.delta() / 2.0;
    let y_abs = y.abs();
    let m = (-x).max(x + y_abs);
    let corner = (-x - m).exp();
    // cosh(y) e^{x} and sinh(y) e^{x}, both scaled by e^{-m}
    let grow = (x + y_abs - m).exp();
    let shrink = (x - y_abs - m).exp();
    let center = 0.5 * (grow + shrink);
    let sinh_part = 0.5 * (grow - shrink) * y.signum();
    let z = 2.0 * corner + 2.0 * center;
    XStateEntries {
        corner: corner / z,
        center: center / z,
        coherence: C64::from_polar(-sinh_part / z, p.theta_dm()),
    }
}

/// Closed-form mixedness
/// `4 e^{b(J+delta)} [cosh bJ + 2 cosh(b delta/2)] / [e^{b(J+delta)} + e^{bJ} + 2 e^{b delta/2}]^2`.
pub fn closed_form_mixedness(p: &ModelParams) -> Result<f64> {
    let beta = p.beta();
    let a = beta * (p.j + p.delta());
    let b = beta * p.j;
    let c = beta * p.delta() / 2.0;
    let m = a.max(b).max(c);
    // every numerator exponent is <= 2m
    let numerator = 2.0 * (a + b - 2.0 * m).exp()
        + 2.0 * (a - b - 2.0 * m).exp()
        + 4.0 * (a + c - 2.0 * m).exp()
        + 4.0 * (a - c - 2.0 * m).exp();
    let root = (a - m).exp() + (b - m).exp() + 2.0 * (c - m).exp();
    let gamma = numerator / (root * root);
    if !gamma.is_finite() {
        return Err(Error::Range(format!(
            "mixedness closed form not finite at {p:?}"
        )));
    }
    Ok(gamma)
}

/// Closed-form concurrence `(2/Z) max(e^{bJ/2} |sinh(b delta/2)| - e^{-bJ/2}, 0)`.
///
/// The subtracted term is `sqrt(rho_11 rho_44)`, which is what Wootters'
/// formula gives for this X-state.
pub fn closed_form_concurrence(p: &ModelParams) -> Result<f64> {
    let x = p.beta() * p.j / 2.0;
    let y = (p.beta() * p.delta() / 2.0).abs();
    let m = (x + y).max(-x);
    let grow = (x + y - m).exp();
    let shrink = (x - y - m).exp();
    let corner = (-x - m).exp();
    let coherence = 0.5 * (grow - shrink);
    let partition_half = corner + 0.5 * (grow + shrink);
    let c = (coherence - corner).max(0.0) / partition_half;
    if !c.is_finite() {
        return Err(Error::Range(format!(
            "concurrence closed form not finite at {p:?}"
        )));
    }
    Ok(c)
}
