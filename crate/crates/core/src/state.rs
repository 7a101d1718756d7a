//! Validated density operators and the state functionals built on them.

use crate::error::{Error, Result};
use crate::kernel::pauli::sigma_y;
use crate::kernel::{eig_hermitian, kron, ComplexMatrix, C64, HERMITIAN_TOL};

/// Tolerance on `|Tr(rho) - 1|` and on the most negative eigenvalue.
pub const STATE_TOL: f64 = 1e-10;
/// Eigenvalues below this contribute nothing to the entropy.
const ENTROPY_FLOOR: f64 = 1e-14;

/// A quantum state over a register of subsystems.
///
/// Construction checks Hermiticity, unit trace and positivity up to
/// [`STATE_TOL`]; a value of this type is always a physical state.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::Validation(format!(
                "subsystem dims {dims:?} must be a nonempty list of entries >= 2"
            )));
        }
        let product: usize = dims.iter().product();
        if product != matrix.dim() {
            return Err(Error::Validation(format!(
                "dims {dims:?} imply side {product}, matrix side is {}",
                matrix.dim()
            )));
        }
        let deviation = matrix.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::Validation(format!(
                "not Hermitian (deviation {deviation:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::Validation(format!("trace is {trace}, expected 1")));
        }
        let min_eig = eig_hermitian(&matrix)?.values[0];
        if min_eig < -STATE_TOL {
            return Err(Error::Validation(format!(
                "not positive semidefinite (min eigenvalue {min_eig:e})"
            )));
        }
        Ok(DensityOperator { matrix, dims })
    }

    /// Builds `M / Tr(M)` from a positive unnormalized operator.
    pub fn normalized(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let trace = matrix.trace().re;
        if !trace.is_finite() || trace <= 0.0 {
            return Err(Error::Validation(format!(
                "cannot normalize operator with trace {trace}"
            )));
        }
        Self::new(matrix.scale_real(1.0 / trace), dims)
    }

    /// Pure state `|psi><psi|` from a (not necessarily normalized) vector.
    pub fn pure(psi: &[C64], dims: Vec<usize>) -> Result<Self> {
        Self::normalized(ComplexMatrix::outer(psi), dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        Self::new(ComplexMatrix::identity(n).scale_real(1.0 / n as f64), dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenvalues (ascending) with numerical negatives clamped to zero.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(eig_hermitian(&self.matrix)?
            .values
            .into_iter()
            .map(|l| l.max(0.0))
            .collect())
    }

    /// `Tr(rho * op)`.
    pub fn expect(&self, op: &ComplexMatrix) -> C64 {
        self.matrix.trace_product(op)
    }

    /// Reduced state on the listed subsystems.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityOperator> {
        let matrix = crate::kernel::partial_trace(&self.matrix, &self.dims, keep)?;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let dims = kept.iter().map(|&k| self.dims[k]).collect();
        DensityOperator::new(matrix, dims)
    }

    #[cfg(test)]
    pub(crate) fn unchecked(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        DensityOperator { matrix, dims }
    }
}

/// Linear-entropy mixedness `1 - Tr(rho^2)`.
pub fn mixedness(rho: &DensityOperator) -> f64 {
    let purity: f64 = rho.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum();
    1.0 - purity
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    Ok(rho
        .spectrum()?
        .into_iter()
        .filter(|&l| l >= ENTROPY_FLOOR)
        .map(|l| -l * l.log2())
        .sum::<f64>()
        .max(0.0))
}

/// Wootters concurrence of a two-qubit state.
///
/// The values `sqrt(mu_k)`, with `mu_k` the eigenvalues of
/// `rho (Y x Y) conj(rho) (Y x Y)`, are the singular values of the
/// complex-symmetric matrix `W^T (Y x Y) W` for any factor `rho = W W^dagger`.
/// Those singular values are read off the Hermitian dilation
/// `[[0, T], [T^dagger, 0]]`, which keeps them accurate to machine epsilon
/// instead of squaring them first.
pub fn concurrence_two_qubit(rho: &DensityOperator) -> Result<f64> {
    if rho.dims != [2, 2] {
        return Err(Error::Dimension(format!(
            "concurrence needs a two-qubit state, got dims {:?}",
            rho.dims
        )));
    }
    let roots = spin_flip_singular_values(rho)?;
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// `sqrt(mu_k)` in descending order.
pub(crate) fn spin_flip_singular_values(rho: &DensityOperator) -> Result<Vec<f64>> {
    let eig = eig_hermitian(&rho.matrix)?;
    let n = rho.dim();
    let mut factor = eig.vectors.clone();
    for (k, &l) in eig.values.iter().enumerate() {
        let root = l.max(0.0).sqrt();
        for i in 0..n {
            factor[(i, k)] *= root;
        }
    }
    let yy = kron(&sigma_y(), &sigma_y());
    let tau = &(&factor.transpose() * &yy) * &factor;

    let mut dilation = ComplexMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            dilation[(i, n + j)] = tau[(i, j)];
            dilation[(n + j, i)] = tau[(i, j)].conj();
        }
    }
    let mut values = eig_hermitian(&dilation)?.values;
    values.reverse();
    Ok(values.into_iter().take(n).map(|s| s.max(0.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, random_qubit_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn bell() -> DensityOperator {
        DensityOperator::pure(&[c(H), c(0.0), c(0.0), c(H)], vec![2, 2]).unwrap()
    }

    fn swap_qubits(m: &ComplexMatrix) -> ComplexMatrix {
        let perm = [0, 2, 1, 3];
        let mut out = ComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                out[(perm[i], perm[j])] = m[(i, j)];
            }
        }
        out
    }

    #[test]
    fn validation_rejects_unphysical_matrices() {
        let not_unit = ComplexMatrix::identity(2);
        assert!(matches!(
            DensityOperator::new(not_unit, vec![2]),
            Err(Error::Validation(_))
        ));
        let negative = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(
            DensityOperator::new(negative, vec![2]),
            Err(Error::Validation(_))
        ));
        let mut skew = ComplexMatrix::identity(2).scale_real(0.5);
        skew[(0, 1)] = c(0.1);
        assert!(DensityOperator::new(skew, vec![2]).is_err());
        let half = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(DensityOperator::new(half.clone(), vec![2, 3]).is_err());
        assert!(DensityOperator::new(half, vec![4, 1]).is_err());
    }

    #[test]
    fn mixedness_examples() {
        let pure = DensityOperator::pure(&[c(0.6), C64::new(0.0, 0.8)], vec![2]).unwrap();
        assert!(mixedness(&pure).abs() < 1e-12);
        let mm = DensityOperator::maximally_mixed(vec![2, 2]).unwrap();
        assert!((mixedness(&mm) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&bell()).unwrap().abs() < 1e-12);
        let mm = DensityOperator::maximally_mixed(vec![2, 2]).unwrap();
        assert!((von_neumann_entropy(&mm).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence_two_qubit(&bell()).unwrap() - 1.0).abs() < 1e-12);
        let a = [c(0.6), c(0.8)];
        let b = [c(H), C64::new(0.0, H)];
        let psi: Vec<C64> = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| x * y))
            .collect();
        let product = DensityOperator::pure(&psi, vec![2, 2]).unwrap();
        assert!(concurrence_two_qubit(&product).unwrap().abs() < 1e-12);
        let mm = DensityOperator::maximally_mixed(vec![2, 2]).unwrap();
        assert_eq!(concurrence_two_qubit(&mm).unwrap(), 0.0);
    }

    #[test]
    fn concurrence_requires_two_qubits() {
        let q = DensityOperator::maximally_mixed(vec![2]).unwrap();
        assert!(matches!(
            concurrence_two_qubit(&q),
            Err(Error::Dimension(_))
        ));
        let q3 = DensityOperator::maximally_mixed(vec![4]).unwrap();
        assert!(matches!(
            concurrence_two_qubit(&q3),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn werner_state_concurrence() {
        // p |Bell><Bell| + (1 - p) I/4 has C = max(0, (3p - 1)/2)
        for p in [0.2, 1.0 / 3.0, 0.5, 0.9] {
            let m = &bell().matrix().scale_real(p)
                + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
            let rho = DensityOperator::new(m, vec![2, 2]).unwrap();
            let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((concurrence_two_qubit(&rho).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn spin_flip_roots_square_to_trace_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let yy = kron(&sigma_y(), &sigma_y());
        for _ in 0..50 {
            let rho = random_density(&[2, 2], 4, &mut rng);
            let roots = spin_flip_singular_values(&rho).unwrap();
            let r = &(&(&rho.matrix * &yy) * &rho.matrix.conj()) * &yy;
            let sum_mu: f64 = roots.iter().map(|s| s * s).sum();
            assert!((sum_mu - r.trace().re).abs() < 1e-12);
            assert!(roots.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn functionals_are_unitarily_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let rho = random_density(&[2, 2], 3, &mut rng);
            let u = kron(
                &random_qubit_unitary(&mut rng),
                &random_qubit_unitary(&mut rng),
            );
            let v = random_qubit_unitary(&mut rng);
            let global = kron(&v, &ComplexMatrix::identity(2));
            for w in [&u, &global] {
                let rotated = DensityOperator::new(
                    (&(w * rho.matrix()) * &w.adjoint()).hermitian_part(),
                    vec![2, 2],
                )
                .unwrap();
                assert!((mixedness(&rotated) - mixedness(&rho)).abs() < 1e-12);
                assert!(
                    (von_neumann_entropy(&rotated).unwrap() - von_neumann_entropy(&rho).unwrap())
                        .abs()
                        < 1e-10
                );
            }
            // local unitaries leave concurrence unchanged
            let local = DensityOperator::new(
                (&(&u * rho.matrix()) * &u.adjoint()).hermitian_part(),
                vec![2, 2],
            )
            .unwrap();
            assert!(
                (concurrence_two_qubit(&local).unwrap() - concurrence_two_qubit(&rho).unwrap())
                    .abs()
                    < 1e-10
            );
        }
    }

    #[test]
    fn concurrence_is_swap_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let rho = random_density(&[2, 2], 2, &mut rng);
            let swapped = DensityOperator::new(swap_qubits(rho.matrix()), vec![2, 2]).unwrap();
            assert!(
                (concurrence_two_qubit(&rho).unwrap() - concurrence_two_qubit(&swapped).unwrap())
                    .abs()
                    < 1e-10
            );
        }
    }

    #[test]
    fn clamped_spectrum_has_no_negatives() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0 + 5e-11, -5e-11]);
        let rho = DensityOperator::unchecked(m, vec![2]);
        assert!(rho.spectrum().unwrap().iter().all(|&l| l >= 0.0));
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-9);
    }
}
