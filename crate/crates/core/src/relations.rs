//! Evaluators for the variance-based and entropic uncertainty relations.
//!
//! * Schrodinger: `dA^2 dB^2 >= |<[A,B]>|^2/4 + |<{A', B'}>|^2/4`.
//! * Overlap bound: `log2(1/c)` with `c` the largest squared overlap of the
//!   two eigenbases.
//! * Memory-assisted entropic: `H(R|B) + H(S|B) >= log2(1/c) + H(A|B)`.
//! * Variance sum: `dA^2 + dB^2 >= L_tra`, with an auxiliary operator `O`
//!   and a phase `theta`.
//! * Control-assisted variance: the variance-sum bound minus the variance
//!   explained by measurements on control subsystems.

use crate::error::{Error, Result};
use crate::kernel::pauli::{sigma_x, sigma_z};
use crate::kernel::{embed_operator, ComplexMatrix, C64};
use crate::measurement::{
    projective_decomposition, real_part, sequential_decomposition, variance, Observable,
};
use crate::state::{von_neumann_entropy, DensityOperator};

/// Ratios with a denominator smaller than this in magnitude are undefined.
pub const RATIO_DENOMINATOR_MIN: f64 = 1e-9;
/// Smallest admissible `<O^dagger O>`.
pub const OPERATOR_NORM_MIN: f64 = 1e-12;

fn ratio(numerator: f64, denominator: f64) -> Option<f64> {
    (denominator.abs() >= RATIO_DENOMINATOR_MIN).then(|| numerator / denominator)
}

fn centred(rho: &DensityOperator, op: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mean = real_part(rho.expect(op), "observable mean")?;
    Ok(op - &ComplexMatrix::identity(op.dim()).scale_real(mean))
}

/// Both sides of the Schrodinger relation, `(lhs, rhs)`.
pub fn schrodinger_bound(
    rho: &DensityOperator,
    a: &Observable,
    b: &Observable,
) -> Result<(f64, f64)> {
    let a_full = a.embedded(rho.dims())?;
    let b_full = b.embedded(rho.dims())?;
    let lhs = variance(rho, a)? * variance(rho, b)?;
    let commutator = &(&a_full * &b_full) - &(&b_full * &a_full);
    let (ca, cb) = (centred(rho, &a_full)?, centred(rho, &b_full)?);
    let anticommutator = &(&ca * &cb) + &(&cb * &ca);
    let rhs =
        0.25 * rho.expect(&commutator).norm_sqr() + 0.25 * rho.expect(&anticommutator).norm_sqr();
    Ok((lhs, rhs))
}

/// `max_{r,s} |<phi_r|phi_s>|^2` over the eigenbases of `r` and `s`.
///
/// Requires nondegenerate spectra; with rank-1 projectors the squared
/// overlap is `Tr(P_r P_s)`, which is phase independent.
pub fn maximal_overlap_c(r: &Observable, s: &Observable) -> Result<f64> {
    if r.subsystem() != s.subsystem() {
        return Err(Error::Subsystem(format!(
            "overlap needs both observables on one subsystem, got {} and {}",
            r.subsystem(),
            s.subsystem()
        )));
    }
    if r.matrix().dim() != s.matrix().dim() {
        return Err(Error::Dimension(
            "observables act on spaces of different size".into(),
        ));
    }
    let rank_one = |o: &Observable| -> Result<Vec<ComplexMatrix>> {
        let d = projective_decomposition(o)?;
        if d.len() != o.matrix().dim() {
            return Err(Error::Degeneracy(format!(
                "observable on subsystem {} has a degenerate eigenspace",
                o.subsystem()
            )));
        }
        Ok(d.outcomes.into_iter().map(|o| o.projector).collect())
    };
    let (pr, ps) = (rank_one(r)?, rank_one(s)?);
    let mut c = 0.0_f64;
    for a in &pr {
        for b in &ps {
            c = c.max(a.trace_product(b).re);
        }
    }
    Ok(c.min(1.0))
}

/// Memory-assisted entropic uncertainty evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct QmEurResult {
    pub h_rb: f64,
    pub h_sb: f64,
    pub h_ab: f64,
    /// `log2(1/c)`.
    pub overlap_bound: f64,
    pub rhs: f64,
    /// `(h_rb + h_sb) / rhs`; `None` when the denominator vanishes.
    pub u_eur: Option<f64>,
}

impl QmEurResult {
    pub fn lhs(&self) -> f64 {
        self.h_rb + self.h_sb
    }
}

/// `sum_r (P_r x I) rho (P_r x I)` for an observable on the measured qubit.
fn dephased(rho: &DensityOperator, obs: &Observable) -> Result<DensityOperator> {
    let d = projective_decomposition(obs)?;
    let mut out = ComplexMatrix::zeros(rho.dim());
    for outcome in &d.outcomes {
        let p = embed_operator(&outcome.projector, rho.dims(), obs.subsystem())?;
        out = &out + &(&(&p * rho.matrix()) * &p);
    }
    DensityOperator::new(out.hermitian_part(), rho.dims().to_vec())
}

/// Entropic relation with measured qubit A = subsystem 0 and memory B = subsystem 1.
pub fn qm_eur(rho: &DensityOperator, r: &Observable, s: &Observable) -> Result<QmEurResult> {
    if rho.dims() != [2, 2] {
        return Err(Error::Dimension(format!(
            "entropic relation needs a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    if r.subsystem() != 0 || s.subsystem() != 0 {
        return Err(Error::Subsystem(
            "both measured observables must act on qubit 0".into(),
        ));
    }
    let c = maximal_overlap_c(r, s)?;
    let h_b = von_neumann_entropy(&rho.reduce(&[1])?)?;
    let h_rb = von_neumann_entropy(&dephased(rho, r)?)? - h_b;
    let h_sb = von_neumann_entropy(&dephased(rho, s)?)? - h_b;
    let h_ab = von_neumann_entropy(rho)? - h_b;
    let overlap_bound = -c.log2();
    let rhs = overlap_bound + h_ab;
    Ok(QmEurResult {
        h_rb,
        h_sb,
        h_ab,
        overlap_bound,
        rhs,
        u_eur: ratio(h_rb + h_sb, rhs),
    })
}

/// Variance-sum lower bound
/// `|<O^dagger (A' + e^{i theta} B')>|^2 / <O^dagger O> - <A'^dagger e^{i theta} B' + e^{-i theta} B'^dagger A'>`
/// with `A' = A - <A>`, `B' = B - <B>`, all expectations in `rho`.
pub fn l_tra(
    rho: &DensityOperator,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    o: &ComplexMatrix,
    theta: f64,
) -> Result<f64> {
    for m in [a, b, o] {
        if m.dim() != rho.dim() {
            return Err(Error::Dimension(format!(
                "operator side {} does not match state side {}",
                m.dim(),
                rho.dim()
            )));
        }
    }
    a.ensure_hermitian()?;
    b.ensure_hermitian()?;
    let o_dag = o.adjoint();
    let norm = real_part(rho.expect(&(&o_dag * o)), "<O^dagger O>")?;
    if norm < OPERATOR_NORM_MIN {
        return Err(Error::DegenerateOperator { value: norm });
    }
    let phase = C64::from_polar(1.0, theta);
    let (ca, cb) = (centred(rho, a)?, centred(rho, b)?);
    let shifted_b = cb.scale(phase);
    let combined = &ca + &shifted_b;
    let overlap = rho.expect(&(&o_dag * &combined)).norm_sqr();
    let cross = &(&ca.adjoint() * &shifted_b) + &(&shifted_b.adjoint() * &ca);
    let cross = real_part(rho.expect(&cross), "phase-weighted anticommutator")?;
    Ok(overlap / norm - cross)
}

/// One term of the control-assisted sum: `Q_k` on the measured subsystem and
/// its ordered controls `O_k` on `C_1..C_N`.
#[derive(Clone, Debug)]
pub struct MeasurementPair {
    pub q: Observable,
    pub controls: Vec<Observable>,
}

#[derive(Clone, Debug)]
pub struct MeasurementSetup {
    pub pairs: Vec<MeasurementPair>,
    /// Auxiliary operator `O` of the variance-sum bound, acting on the measured subsystem.
    pub ltra_operator: ComplexMatrix,
    pub theta: f64,
}

impl MeasurementSetup {
    /// Two qubits, A = 0 and C = 1, `Q_1 = O_1 = sigma_x`, `Q_2 = O_2 = sigma_z`,
    /// `O = sigma_x + sigma_z`.
    pub fn standard(theta: f64) -> Self {
        let pair = |m: ComplexMatrix| MeasurementPair {
            q: Observable::new(m.clone(), 0).expect("Pauli matrices are Hermitian"),
            controls: vec![Observable::new(m, 1).expect("Pauli matrices are Hermitian")],
        };
        MeasurementSetup {
            pairs: vec![pair(sigma_x()), pair(sigma_z())],
            ltra_operator: &sigma_x() + &sigma_z(),
            theta,
        }
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        MeasurementSetup {
            theta,
            ..self.clone()
        }
    }

    /// Index of the measured subsystem shared by every `Q_k`.
    pub fn measured_subsystem(&self) -> Result<usize> {
        if self.pairs.len() < 2 {
            return Err(Error::Usage(format!(
                "the variance-sum bound needs at least two observables, got {}",
                self.pairs.len()
            )));
        }
        let a = self.pairs[0].q.subsystem();
        if self.pairs.iter().any(|p| p.q.subsystem() != a) {
            return Err(Error::Subsystem(
                "all Q_k must act on the same subsystem".into(),
            ));
        }
        if !self.theta.is_finite() {
            return Err(Error::Range(format!(
                "theta = {} is not finite",
                self.theta
            )));
        }
        Ok(a)
    }
}

/// Control-assisted variance relation evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct QcVurResult {
    /// `sum_k E[V(Q_k | c_1..c_N)]`.
    pub lhs: f64,
    pub l_tra: f64,
    /// `sum_k` of the variance explained by the controls.
    pub subtracted: f64,
    /// Lower bound `l_tra - subtracted`.
    pub w: f64,
    /// Tightness `lhs / w`; `None` when `|w|` is below [`RATIO_DENOMINATOR_MIN`].
    pub u: Option<f64>,
}

/// Evaluates the control-assisted relation.
///
/// The variance-sum bound uses the first two `Q_k` and is evaluated on the
/// reduced state of the measured subsystem; extra pairs only add to the
/// left side, so the bound stays valid for `K > 2`.
pub fn qc_vur(rho: &DensityOperator, setup: &MeasurementSetup) -> Result<QcVurResult> {
    let a = setup.measured_subsystem()?;
    let (mut lhs, mut subtracted) = (0.0, 0.0);
    for pair in &setup.pairs {
        let seq = sequential_decomposition(rho, &pair.q, &pair.controls)?;
        lhs += seq.residual;
        subtracted += seq.explained();
    }
    let rho_a = rho.reduce(&[a])?;
    let bound = l_tra(
        &rho_a,
        setup.pairs[0].q.matrix(),
        setup.pairs[1].q.matrix(),
        &setup.ltra_operator,
        setup.theta,
    )?;
    let w = bound - subtracted;
    Ok(QcVurResult {
        lhs,
        l_tra: bound,
        subtracted,
        w,
        u: ratio(lhs, w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dm_model::{closed_form_entries, thermal_state, ModelParams, T_MIN};
    use crate::kernel::pauli::sigma_y;
    use crate::random::{random_density, random_hermitian};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn obs(m: ComplexMatrix, site: usize) -> Observable {
        Observable::new(m, site).unwrap()
    }

    fn up() -> DensityOperator {
        DensityOperator::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], vec![2]).unwrap()
    }

    fn half() -> DensityOperator {
        DensityOperator::maximally_mixed(vec![2]).unwrap()
    }

    #[test]
    fn schrodinger_examples() {
        let (lhs, rhs) = schrodinger_bound(&up(), &obs(sigma_z(), 0), &obs(sigma_z(), 0)).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));
        let (lhs, rhs) = schrodinger_bound(&up(), &obs(sigma_x(), 0), &obs(sigma_y(), 0)).unwrap();
        assert!((lhs - 1.0).abs() < 1e-15 && (rhs - 1.0).abs() < 1e-15);
        let (lhs, rhs) =
            schrodinger_bound(&half(), &obs(sigma_x(), 0), &obs(sigma_y(), 0)).unwrap();
        assert!((lhs - 1.0).abs() < 1e-15 && rhs.abs() < 1e-15);
    }

    #[test]
    fn overlap_examples() {
        let c = maximal_overlap_c(&obs(sigma_x(), 0), &obs(sigma_z(), 0)).unwrap();
        assert!((c - 0.5).abs() < 1e-14);
        let c = maximal_overlap_c(&obs(sigma_z(), 0), &obs(sigma_z(), 0)).unwrap();
        assert!((c - 1.0).abs() < 1e-14);
        for phi in [0.1, 0.7, 1.3, 2.0, 2.9] {
            let s = &sigma_z().scale_real(f64::cos(phi)) + &sigma_x().scale_real(f64::sin(phi));
            let c = maximal_overlap_c(&obs(sigma_z(), 0), &obs(s, 0)).unwrap();
            let expected = f64::max((phi / 2.0).cos().powi(2), (phi / 2.0).sin().powi(2));
            assert!((c - expected).abs() < 1e-12, "phi = {phi}");
        }
    }

    #[test]
    fn overlap_rejects_degenerate_and_mismatched() {
        let id = obs(ComplexMatrix::identity(2), 0);
        assert!(matches!(
            maximal_overlap_c(&id, &obs(sigma_z(), 0)),
            Err(Error::Degeneracy(_))
        ));
        assert!(matches!(
            maximal_overlap_c(&obs(sigma_x(), 0), &obs(sigma_z(), 1)),
            Err(Error::Subsystem(_))
        ));
    }

    #[test]
    fn entropic_relation_on_maximally_mixed_state() {
        let rho = DensityOperator::maximally_mixed(vec![2, 2]).unwrap();
        let r = qm_eur(&rho, &obs(sigma_x(), 0), &obs(sigma_z(), 0)).unwrap();
        assert!((r.h_rb - 1.0).abs() < 1e-12);
        assert!((r.h_sb - 1.0).abs() < 1e-12);
        assert!((r.h_ab - 1.0).abs() < 1e-12);
        assert!((r.rhs - 2.0).abs() < 1e-12);
        assert!((r.u_eur.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropic_relation_on_bell_state_has_no_ratio() {
        let h = FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let bell =
            DensityOperator::pure(&[C64::new(h, 0.0), z, z, C64::new(h, 0.0)], vec![2, 2]).unwrap();
        let r = qm_eur(&bell, &obs(sigma_x(), 0), &obs(sigma_z(), 0)).unwrap();
        assert!((r.h_ab + 1.0).abs() < 1e-12);
        assert!(r.rhs.abs() < 1e-12);
        assert!(r.u_eur.is_none());
    }

    #[test]
    fn entropic_relation_on_thermal_state() {
        let rho = thermal_state(&ModelParams::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        let r = qm_eur(&rho, &obs(sigma_x(), 0), &obs(sigma_z(), 0)).unwrap();
        // frozen from an independent dense evaluation of the dephased states
        assert!((r.h_rb - 0.529327590978998).abs() < 1e-9);
        assert!((r.h_sb - 0.595876785213648).abs() < 1e-9);
        assert!((r.h_ab - 0.006063249014958).abs() < 1e-9);
        assert!(r.lhs() >= r.rhs - 1e-9);
        assert_eq!(r.rhs, r.overlap_bound + r.h_ab);
    }

    #[test]
    fn entropic_relation_rejects_bad_inputs() {
        let rho = DensityOperator::maximally_mixed(vec![2, 2]).unwrap();
        assert!(qm_eur(&rho, &obs(sigma_x(), 1), &obs(sigma_z(), 0)).is_err());
        assert!(matches!(
            qm_eur(
                &rho,
                &obs(ComplexMatrix::identity(2), 0),
                &obs(sigma_z(), 0)
            ),
            Err(Error::Degeneracy(_))
        ));
        let three = DensityOperator::maximally_mixed(vec![2, 2, 2]).unwrap();
        assert!(matches!(
            qm_eur(&three, &obs(sigma_x(), 0), &obs(sigma_z(), 0)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn variance_sum_bound_examples() {
        let o = &sigma_x() + &sigma_z();
        let v = l_tra(&up(), &sigma_z(), &sigma_z(), &o, 0.5).unwrap();
        assert!(v.abs() < 1e-15);
        let v = l_tra(&half(), &sigma_x(), &sigma_z(), &o, 0.5).unwrap();
        assert!((v - (1.0 + 0.5f64.cos())).abs() < 1e-14);
        let v = l_tra(&half(), &sigma_x(), &sigma_z(), &o, std::f64::consts::PI).unwrap();
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn variance_sum_bound_rejects_null_operator() {
        let annihilates_up = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert!(matches!(
            l_tra(&up(), &sigma_x(), &sigma_z(), &annihilates_up, 0.5),
            Err(Error::DegenerateOperator { .. })
        ));
    }

    #[test]
    fn variance_sum_bound_holds_for_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let rho = random_density(&[2], 2, &mut rng);
            let a = random_hermitian(2, &mut rng);
            let b = random_hermitian(2, &mut rng);
            let o =
                crate::random::random_unitary(2, &mut rng).scale_real(rng.random_range(0.5..2.0));
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let bound = l_tra(&rho, &a, &b, &o, theta).unwrap();
            let sum = variance(&rho, &obs(a, 0)).unwrap() + variance(&rho, &obs(b, 0)).unwrap();
            assert!(sum >= bound - 1e-9, "{sum} < {bound}");
        }
    }

    #[test]
    fn control_assisted_relation_at_unit_point() {
        let p = ModelParams::new(1.0, 1.0, 1.0).unwrap();
        let rho = thermal_state(&p).unwrap();
        let r = qc_vur(&rho, &MeasurementSetup::standard(0.5)).unwrap();
        let x = closed_form_entries(&p);
        let c_xx = 2.0 * x.coherence.re;
        let c_zz = 2.0 * (x.corner - x.center);
        let lhs = 2.0 - c_xx * c_xx - c_zz * c_zz;
        let w = 1.0 + 0.5f64.cos() - c_xx * c_xx - c_zz * c_zz;
        assert!((r.lhs - lhs).abs() < 1e-10);
        assert!((r.w - w).abs() < 1e-10);
        assert!((r.u.unwrap() - lhs / w).abs() < 1e-10);
        assert_eq!(r.w, r.l_tra - r.subtracted);
        assert!((r.lhs + r.subtracted - 2.0).abs() < 1e-10);
    }

    #[test]
    fn control_assisted_relation_limits() {
        let hot = thermal_state(&ModelParams::new(1.0, 1.0, 1e6).unwrap()).unwrap();
        let r = qc_vur(&hot, &MeasurementSetup::standard(0.5)).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-5);
        assert!((r.w - (1.0 + 0.5f64.cos())).abs() < 1e-5);

        let cold = thermal_state(&ModelParams::new(0.0, 1.0, T_MIN).unwrap()).unwrap();
        let r = qc_vur(&cold, &MeasurementSetup::standard(0.5)).unwrap();
        assert!(r.lhs.abs() < 1e-10);
        assert!((r.w - (0.5f64.cos() - 1.0)).abs() < 1e-10);
        assert!(r.u.unwrap().abs() < 1e-9);
    }

    #[test]
    fn setup_validation() {
        let mut setup = MeasurementSetup::standard(0.5);
        setup.pairs.truncate(1);
        let rho = DensityOperator::maximally_mixed(vec![2, 2]).unwrap();
        assert!(matches!(qc_vur(&rho, &setup), Err(Error::Usage(_))));
        let mut setup = MeasurementSetup::standard(0.5);
        setup.pairs[1].q = obs(sigma_z(), 1);
        setup.pairs[1].controls = vec![obs(sigma_z(), 0)];
        assert!(matches!(qc_vur(&rho, &setup), Err(Error::Subsystem(_))));
    }
}
