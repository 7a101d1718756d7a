//! Seeded random states and operators for invariant checks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::kernel::{eig_hermitian, ComplexMatrix, C64};
use crate::state::DensityOperator;

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `G G^dagger / Tr` with `G` a `dim x rank` complex Ginibre matrix.
pub fn random_density(dims: &[usize], rank: usize, rng: &mut impl Rng) -> DensityOperator {
    let n: usize = dims.iter().product();
    let rank = rank.clamp(1, n);
    let g: Vec<Vec<C64>> = (0..n)
        .map(|_| (0..rank).map(|_| gaussian(rng)).collect())
        .collect();
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = (0..rank).map(|k| g[i][k] * g[j][k].conj()).sum();
        }
    }
    DensityOperator::normalized(m.hermitian_part(), dims.to_vec())
        .expect("Ginibre product is positive with nonzero trace")
}

/// Hermitian matrix with independent Gaussian entries.
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = C64::new(rng.sample(StandardNormal), 0.0);
        for j in (i + 1)..n {
            let z = gaussian(rng) * std::f64::consts::FRAC_1_SQRT_2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random single-qubit unitary `e^{i g} Rz(a) Ry(b) Rz(c)` from composed
/// Pauli rotations.
pub fn random_qubit_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    let tau = std::f64::consts::TAU;
    let (a, b, c, g): (f64, f64, f64, f64) = (
        rng.random_range(0.0..tau),
        rng.random_range(0.0..tau),
        rng.random_range(0.0..tau),
        rng.random_range(0.0..tau),
    );
    let rz = |t: f64| {
        ComplexMatrix::from_rows([
            [C64::from_polar(1.0, -t / 2.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::from_polar(1.0, t / 2.0)],
        ])
    };
    let (s, co) = (b / 2.0).sin_cos();
    let ry = ComplexMatrix::from_rows([
        [C64::new(co, 0.0), C64::new(-s, 0.0)],
        [C64::new(s, 0.0), C64::new(co, 0.0)],
    ]);
    (&(&rz(a) * &ry) * &rz(c)).scale(C64::from_polar(1.0, g))
}

/// `exp(i H)` for a random Hermitian `H`.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let h = random_hermitian(n, rng);
    eig_hermitian(&h)
        .expect("random Hermitian matrices diagonalize")
        .map_spectrum(|l| C64::from_polar(1.0, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            for u in [random_qubit_unitary(&mut rng), random_unitary(4, &mut rng)] {
                let id = ComplexMatrix::identity(u.dim());
                assert!((&u.adjoint() * &u).max_abs_diff(&id) < 1e-12);
            }
        }
    }

    #[test]
    fn rank_one_density_is_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(&[2, 2, 2], 1, &mut rng);
        assert!(crate::state::mixedness(&rho).abs() < 1e-12);
    }
}
