//! Projective measurement statistics and conditional variances.
//!
//! Conditioning on a control outcome `c` with projector `P_c` gives the
//! branch `(P_c rho P_c) / p(c)`. The conditional moments of an observable
//! `Q` on the measured subsystem then obey the classical law of total
//! variance, and with several controls measured in sequence the chained form
//!
//! ```text
//! V(Q) = E[V(Q | c_1..c_N)] + V(E[Q | c_1])
//!        + sum_{n=2..N} E[ V( E[Q | c_1..c_n] | c_1..c_{n-1} ) ]
//! ```
//!
//! Here `E[Q | c_n]` is read as conditioning on every outcome up to `c_n`;
//! that is the reading under which the terms telescope to `V(Q)`.

use crate::error::{Error, Result};
use crate::kernel::{eig_hermitian, embed_operator, partial_trace, ComplexMatrix, C64};
use crate::state::DensityOperator;

/// Branches with probability below this are skipped and carry zero weight.
pub const P_MIN: f64 = 1e-12;
/// Eigenvalues closer than this share one eigenspace.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Largest imaginary part tolerated in an expectation that must be real.
pub const IMAG_TOL: f64 = 1e-12;

pub(crate) fn real_part(z: C64, what: &'static str) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * z.norm().max(1.0) {
        return Err(Error::ImaginaryResidue { what, imag: z.im });
    }
    Ok(z.re)
}

/// A Hermitian operator acting on one subsystem of a register.
#[derive(Clone, Debug)]
pub struct Observable {
    matrix: ComplexMatrix,
    subsystem: usize,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix, subsystem: usize) -> Result<Self> {
        matrix.ensure_hermitian()?;
        Ok(Observable { matrix, subsystem })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn subsystem(&self) -> usize {
        self.subsystem
    }

    /// Same operator, relocated to another subsystem index.
    pub fn on(&self, subsystem: usize) -> Observable {
        Observable {
            matrix: self.matrix.clone(),
            subsystem,
        }
    }

    /// The operator padded with identities to act on the full register.
    pub fn embedded(&self, dims: &[usize]) -> Result<ComplexMatrix> {
        embed_operator(&self.matrix, dims, self.subsystem)
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub value: f64,
    pub projector: ComplexMatrix,
}

/// Spectral projectors of an observable, eigenvalues strictly increasing.
#[derive(Clone, Debug)]
pub struct ProjectiveDecomposition {
    pub outcomes: Vec<Outcome>,
}

impl ProjectiveDecomposition {
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }
}

pub fn projective_decomposition(obs: &Observable) -> Result<ProjectiveDecomposition> {
    let eig = eig_hermitian(&obs.matrix)?;
    let n = eig.values.len();
    let mut outcomes = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig.values[end] - eig.values[end - 1] < DEGENERACY_TOL {
            end += 1;
        }
        let mut projector = ComplexMatrix::zeros(n);
        for k in start..end {
            let v = eig.vectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    projector[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        let value = eig.values[start..end].iter().sum::<f64>() / (end - start) as f64;
        outcomes.push(Outcome { value, projector });
        start = end;
    }
    Ok(ProjectiveDecomposition { outcomes })
}

/// Probability and post-measurement state of one control outcome.
#[derive(Clone, Debug)]
pub struct Branch {
    pub prob: f64,
    /// State of the remaining subsystems, the measured one traced out.
    pub state: DensityOperator,
}

/// Projects subsystem `site` onto `projector` and traces it out.
pub fn condition_on_outcome(
    rho: &DensityOperator,
    projector: &ComplexMatrix,
    site: usize,
) -> Result<Branch> {
    let dims = rho.dims();
    if dims.len() < 2 {
        return Err(Error::Subsystem(
            "conditioning needs at least one subsystem besides the measured one".into(),
        ));
    }
    let full = embed_operator(projector, dims, site)?;
    let projected = &(&full * rho.matrix()) * &full;
    let prob = real_part(projected.trace(), "outcome probability")?;
    if prob < P_MIN {
        return Err(Error::NullBranch { prob });
    }
    let keep: Vec<usize> = (0..dims.len()).filter(|&s| s != site).collect();
    let reduced = partial_trace(&projected, dims, &keep)?.scale_real(1.0 / prob);
    let state = DensityOperator::new(
        reduced.hermitian_part(),
        keep.iter().map(|&s| dims[s]).collect(),
    )?;
    Ok(Branch { prob, state })
}

fn moments(rho: &DensityOperator, q: &Observable) -> Result<(f64, f64)> {
    let op = q.embedded(rho.dims())?;
    let first = real_part(rho.expect(&op), "first moment")?;
    let second = real_part(rho.expect(&(&op * &op)), "second moment")?;
    Ok((first, second))
}

pub fn expectation(rho: &DensityOperator, q: &Observable) -> Result<f64> {
    Ok(moments(rho, q)?.0)
}

/// `<Q^2> - <Q>^2` with `Q` padded by identities on the other subsystems.
pub fn variance(rho: &DensityOperator, q: &Observable) -> Result<f64> {
    let (first, second) = moments(rho, q)?;
    Ok((second - first * first).max(0.0))
}

/// `E[V(Q|O)]` and `V[E(Q|O)]` for one control measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalStats {
    pub e_of_v: f64,
    pub v_of_e: f64,
}

impl ConditionalStats {
    pub fn total(&self) -> f64 {
        self.e_of_v + self.v_of_e
    }
}

pub fn conditional_stats(
    rho: &DensityOperator,
    q: &Observable,
    o: &Observable,
) -> Result<ConditionalStats> {
    if q.subsystem == o.subsystem {
        return Err(Error::Subsystem(format!(
            "observable and control both act on subsystem {}",
            q.subsystem
        )));
    }
    // Q's index in the register once the control is traced out.
    let shifted = if q.subsystem > o.subsystem {
        q.on(q.subsystem - 1)
    } else {
        q.clone()
    };
    let decomposition = projective_decomposition(o)?;

    let (mut e_of_v, mut mean, mut mean_sq) = (0.0, 0.0, 0.0);
    for outcome in &decomposition.outcomes {
        let branch = match condition_on_outcome(rho, &outcome.projector, o.subsystem) {
            Ok(branch) => branch,
            Err(Error::NullBranch { .. }) => continue,
            Err(e) => return Err(e),
        };
        let (first, second) = moments(&branch.state, &shifted)?;
        e_of_v += branch.prob * (second - first * first).max(0.0);
        mean += branch.prob * first;
        mean_sq += branch.prob * first * first;
    }
    Ok(ConditionalStats {
        e_of_v,
        v_of_e: (mean_sq - mean * mean).max(0.0),
    })
}

/// Terms of the chained law of total variance for controls `C_1..C_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SequentialDecomposition {
    /// `E[V(Q | c_1..c_N)]`.
    pub residual: f64,
    /// `V(E[Q | c_1])`.
    pub first_term: f64,
    /// `E[V(E[Q | c_1..c_n] | c_1..c_{n-1})]` for `n = 2..N`.
    pub nested: Vec<f64>,
}

impl SequentialDecomposition {
    /// Everything except the residual: the part of `V(Q)` explained by the controls.
    pub fn explained(&self) -> f64 {
        self.first_term + self.nested.iter().sum::<f64>()
    }

    pub fn total(&self) -> f64 {
        self.residual + self.explained()
    }
}

/// Node statistics of the outcome tree: probability mass and the
/// unnormalized first and second moments of `Q` over that mass.
#[derive(Clone, Copy, Default)]
struct Mass {
    prob: f64,
    first: f64,
    second: f64,
}

impl Mass {
    fn add(&mut self, other: &Mass) {
        self.prob += other.prob;
        self.first += other.first;
        self.second += other.second;
    }

    fn mean(&self) -> f64 {
        self.first / self.prob
    }
}

pub fn sequential_decomposition(
    rho: &DensityOperator,
    q: &Observable,
    controls: &[Observable],
) -> Result<SequentialDecomposition> {
    if controls.is_empty() {
        return Err(Error::Subsystem("at least one control is required".into()));
    }
    let mut seen = vec![q.subsystem];
    for c in controls {
        if seen.contains(&c.subsystem) {
            return Err(Error::Subsystem(format!(
                "subsystem {} is used twice among the measured system and controls",
                c.subsystem
            )));
        }
        seen.push(c.subsystem);
    }

    let dims = rho.dims();
    let q_full = q.embedded(dims)?;
    let q_sq = &q_full * &q_full;
    let mut projectors: Vec<Vec<ComplexMatrix>> = Vec::with_capacity(controls.len());
    for c in controls {
        let decomposition = projective_decomposition(c)?;
        let embedded = decomposition
            .outcomes
            .iter()
            .map(|o| embed_operator(&o.projector, dims, c.subsystem))
            .collect::<Result<Vec<_>>>()?;
        projectors.push(embedded);
    }

    // Leaves in lexicographic order of (c_1, ..., c_N), ascending eigenvalues.
    let radix: Vec<usize> = projectors.iter().map(Vec::len).collect();
    let leaf_count: usize = radix.iter().product();
    let mut leaves = vec![Mass::default(); leaf_count];
    let mut digits = vec![0usize; controls.len()];
    for (index, leaf) in leaves.iter_mut().enumerate() {
        let mut rest = index;
        for (slot, &r) in digits.iter_mut().zip(&radix).rev() {
            *slot = rest % r;
            rest /= r;
        }
        let mut joint = projectors[0][digits[0]].clone();
        for (level, &d) in digits.iter().enumerate().skip(1) {
            joint = &joint * &projectors[level][d];
        }
        let branch = &(&joint * rho.matrix()) * &joint;
        let prob = real_part(branch.trace(), "joint outcome probability")?;
        if prob < P_MIN {
            continue;
        }
        *leaf = Mass {
            prob,
            first: real_part(branch.trace_product(&q_full), "conditional first moment")?,
            second: real_part(branch.trace_product(&q_sq), "conditional second moment")?,
        };
    }

    // levels[n] holds the nodes after conditioning on c_1..c_n.
    let mut levels: Vec<Vec<Mass>> = vec![leaves];
    for &r in radix.iter().rev() {
        let child = levels.last().expect("at least the leaf level");
        let parent: Vec<Mass> = child
            .chunks(r)
            .map(|group| {
                let mut m = Mass::default();
                group.iter().for_each(|g| m.add(g));
                m
            })
            .collect();
        levels.push(parent);
    }
    levels.reverse();

    let residual: f64 = levels[controls.len()]
        .iter()
        .filter(|m| m.prob > 0.0)
        .map(|m| (m.second - m.first * m.first / m.prob).max(0.0))
        .sum();

    // Spread of the child means around their parent's mean, weighted.
    let spread = |n: usize| -> f64 {
        let r = radix[n - 1];
        levels[n - 1]
            .iter()
            .zip(levels[n].chunks(r))
            .filter(|(parent, _)| parent.prob > 0.0)
            .map(|(parent, children)| {
                let centre = parent.mean();
                children
                    .iter()
                    .filter(|c| c.prob > 0.0)
                    .map(|c| c.prob * (c.mean() - centre).powi(2))
                    .sum::<f64>()
            })
            .sum()
    };

    Ok(SequentialDecomposition {
        residual,
        first_term: spread(1),
        nested: (2..=controls.len()).map(spread).collect(),
    })
}
