//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use std::cmp::Ordering;

use super::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Eigenvalues closer than this are treated as a tie when ordering.
const TIE_TOL: f64 = 1e-10;

/// Spectral decomposition `m = V diag(values) V^dagger`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(values)) V^dagger`.
    pub fn map_spectrum(&self, mut f: impl FnMut(f64) -> C64) -> ComplexMatrix {
        let n = self.values.len();
        let weights: Vec<C64> = self.values.iter().map(|&v| f(v)).collect();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += v[(i, k)] * weights[k] * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
                if i != j {
                    let mut acc_t = ZERO;
                    for k in 0..n {
                        acc_t += v[(j, k)] * weights[k] * v[(i, k)].conj();
                    }
                    out[(j, i)] = acc_t;
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|v| C64::new(v, 0.0))
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues come back ascending. Each eigenvector is phase-fixed so its
/// first non-negligible component is real and positive; within a cluster of
/// tied eigenvalues, vectors are ordered by the first component whose real
/// part differs (larger first).
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    m.ensure_hermitian()?;
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let tol = OFF_DIAGONAL_TOL * a.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        let off_norm = off_diagonal_norm(&a);
        if off_norm >= tol {
            return Err(Error::Convergence {
                sweeps: MAX_SWEEPS,
                off_norm,
            });
        }
    }

    let values: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let columns: Vec<Vec<C64>> = (0..n).map(|k| canonical_phase(v.column(k))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| values[x].total_cmp(&values[y]));

    // Reorder each run of tied eigenvalues by eigenvector components.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[order[end]] - values[order[end - 1]]).abs() <= TIE_TOL {
            end += 1;
        }
        order[start..end].sort_by(|&x, &y| compare_vectors(&columns[x], &columns[y]));
        start = end;
    }

    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = columns[src][i];
        }
    }
    Ok(HermitianEigen {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors,
    })
}

/// One Jacobi rotation annihilating `a[p][q]`.
///
/// With `a_pq = |a_pq| e^{i phi}`, the rotation is the real Jacobi rotation
/// applied after the phase change `diag(1, e^{-i phi})` on the `(p, q)` plane.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let z = a[(p, q)];
    let abs_z = z.norm();
    if abs_z == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = z / abs_z;

    let theta = (aqq - app) / (2.0 * abs_z);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(app - t * abs_z, 0.0);
    a[(q, q)] = C64::new(aqq + t * abs_z, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

fn canonical_phase(mut column: Vec<C64>) -> Vec<C64> {
    let scale = column.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(lead) = column.iter().find(|z| z.norm() > 1e-10 * scale.max(1e-300)) {
        let fix = lead.conj() / lead.norm();
        for z in column.iter_mut() {
            *z *= fix;
        }
    }
    column
}

fn compare_vectors(x: &[C64], y: &[C64]) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        match b.re.total_cmp(&a.re) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// `exp(s * m)` for Hermitian `m` via its spectrum.
///
/// The largest exponent is shifted out before exponentiating and restored at
/// the end, so intermediate values never overflow; only a final result that
/// is itself unrepresentable raises [`Error::Range`].
pub fn exp_hermitian_scaled(m: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    let (shifted, shift) = exp_hermitian_shifted(m, s)?;
    let restore = shift.exp();
    if !restore.is_finite() {
        return Err(Error::Range(format!(
            "exp(s*m) overflows: largest exponent {shift:.3e}"
        )));
    }
    Ok(shifted.scale_real(restore))
}

/// `exp(s * m - shift)` together with `shift = max_k s * lambda_k`.
pub(crate) fn exp_hermitian_shifted(m: &ComplexMatrix, s: f64) -> Result<(ComplexMatrix, f64)> {
    let eig = eig_hermitian(m)?;
    let shift = eig
        .values
        .iter()
        .map(|&l| s * l)
        .fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Err(Error::Range(format!("non-finite exponent scale {s}")));
    }
    Ok((
        eig.map_spectrum(|l| C64::new((s * l - shift).exp(), 0.0)),
        shift,
    ))
}

#[cfg(test)]
mod tests {
    use super::super::pauli::{sigma_x, sigma_z};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(rng.random_range(-2.0..2.0), 0.0);
            for j in (i + 1)..n {
                let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    fn unitarity_defect(v: &ComplexMatrix) -> f64 {
        (&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(v.dim()))
    }

    #[test]
    fn pauli_x_spectrum() {
        let eig = eig_hermitian(&sigma_x()).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // phase-canonical: first component real positive
        let minus = eig.vectors.column(0);
        assert!((minus[0] - C64::new(h, 0.0)).norm() < 1e-14);
        assert!((minus[1] - C64::new(-h, 0.0)).norm() < 1e-14);
        let plus = eig.vectors.column(1);
        assert!((plus[1] - C64::new(h, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let eig = eig_hermitian(&ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(eig.vectors.column(0), vec![ZERO, C64::new(1.0, 0.0), ZERO]);
        assert_eq!(eig.vectors.column(2), vec![C64::new(1.0, 0.0), ZERO, ZERO]);
    }

    #[test]
    fn ties_are_ordered_by_vector_components() {
        let eig = eig_hermitian(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(eig.vectors, ComplexMatrix::identity(3));
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for n in [2, 3, 4, 8, 16] {
            for _ in 0..10 {
                let m = random_hermitian(n, &mut rng);
                let eig = eig_hermitian(&m).unwrap();
                assert!(eig.reconstruct().max_abs_diff(&m) <= 1e-10);
                assert!(unitarity_defect(&eig.vectors) <= 1e-10);
                let mv = &m * &eig.vectors;
                let vl = &eig.vectors * &ComplexMatrix::from_real_diagonal(&eig.values);
                assert!(mv.max_abs_diff(&vl) <= 1e-10);
                assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
                let trace: f64 = eig.values.iter().sum();
                assert!((trace - m.trace().re).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = sigma_x();
        m[(0, 1)] = C64::new(2.0, 0.0);
        assert!(matches!(eig_hermitian(&m), Err(Error::Hermiticity { .. })));
        assert!(matches!(
            exp_hermitian_scaled(&m, 1.0),
            Err(Error::Hermiticity { .. })
        ));
    }

    #[test]
    fn exp_of_zero_scale_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_hermitian(4, &mut rng);
        let e = exp_hermitian_scaled(&m, 0.0).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn exp_of_sigma_z() {
        let e = exp_hermitian_scaled(&sigma_z(), -1.0).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[(-1.0f64).exp(), 1.0f64.exp()]);
        assert!(e.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn exp_inverse_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let m = random_hermitian(4, &mut rng);
            let s = rng.random_range(-3.0..3.0);
            let (up, down) = (
                exp_hermitian_scaled(&m, s).unwrap(),
                exp_hermitian_scaled(&m, -s).unwrap(),
            );
            let scale = up.frobenius_norm() * down.frobenius_norm();
            let prod = &up * &down;
            assert!(prod.max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-13 * scale);
        }
    }

    #[test]
    fn exp_large_exponent_stays_finite_when_shifted() {
        let (shifted, shift) = exp_hermitian_shifted(&sigma_z(), 700.0).unwrap();
        assert_eq!(shift, 700.0);
        assert!((shifted[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(exp_hermitian_scaled(&sigma_z(), 700.0).unwrap()[(0, 0)]
            .re
            .is_finite());
        assert!(matches!(
            exp_hermitian_scaled(&sigma_z(), 800.0),
            Err(Error::Range(_))
        ));
    }
}
