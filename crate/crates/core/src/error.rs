use thiserror::Error;

/// Errors raised anywhere in the numerical pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max |m_ij - conj(m_ji)| = {deviation:e})")]
    Hermiticity { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    Convergence { sweeps: usize, off_norm: f64 },

    #[error("invalid density operator: {0}")]
    Validation(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("measurement branch has negligible probability {prob:e}")]
    NullBranch { prob: f64 },

    #[error("subsystem error: {0}")]
    Subsystem(String),

    #[error("degenerate eigenspace: {0}")]
    Degeneracy(String),

    #[error("<O^dagger O> = {value:e} is too small to divide by")]
    DegenerateOperator { value: f64 },

    #[error("imaginary residue {imag:e} in {what} exceeds tolerance")]
    ImaginaryResidue { what: &'static str, imag: f64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code for this error class: 1 usage, 2 numerical, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Io(_) => 3,
            _ => 2,
        }
    }
}
