//! Single-qubit Pauli operators in the `{|0>, |1>}` basis, `sigma_z|0> = |0>`.

use super::{ComplexMatrix, C64, ONE, ZERO};

const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, ONE], [ONE, ZERO]])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, -I], [I, ZERO]])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ONE, ZERO], [ZERO, -ONE]])
}

/// `sigma_+ = |0><1|`, flips `|1>` up to `|0>`.
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, ONE], [ZERO, ZERO]])
}

/// `sigma_- = |1><0|`.
pub fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, ZERO], [ONE, ZERO]])
}
