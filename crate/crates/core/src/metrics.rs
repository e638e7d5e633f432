//! p-norm distances between states and, more generally, Hermitian operators.

use crate::error::{Error, Result};
use crate::linalg::{schatten_p_norm, HermitianOperator, NormOrder};
use crate::matrix::ComplexMatrix;
use crate::states::DensityOperator;

/// Anything backed by a Hermitian matrix.
pub trait Operand {
    fn hermitian_matrix(&self) -> &ComplexMatrix;
}

impl Operand for DensityOperator {
    fn hermitian_matrix(&self) -> &ComplexMatrix {
        self.matrix()
    }
}

impl Operand for HermitianOperator {
    fn hermitian_matrix(&self) -> &ComplexMatrix {
        self.matrix()
    }
}

/// `‖a − b‖_p`.
pub fn p_distance<A: Operand + ?Sized, B: Operand + ?Sized>(a: &A, b: &B, p: NormOrder) -> Result<f64> {
    let (a, b) = (a.hermitian_matrix(), b.hermitian_matrix());
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "distance between operators of dimension {} and {}",
            a.rows(),
            b.rows()
        )));
    }
    let diff = HermitianOperator::symmetrized(&(a - b))?;
    schatten_p_norm(diff.matrix(), p)
}

/// `Tr|a − b|`. No factor ½.
pub fn trace_distance<A: Operand + ?Sized, B: Operand + ?Sized>(a: &A, b: &B) -> Result<f64> {
    p_distance(a, b, NormOrder::TRACE)
}

pub fn hs_distance<A: Operand + ?Sized, B: Operand + ?Sized>(a: &A, b: &B) -> Result<f64> {
    p_distance(a, b, NormOrder::HILBERT_SCHMIDT)
}
