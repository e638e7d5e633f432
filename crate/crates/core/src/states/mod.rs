//! Density operators and the named states used throughout the crate.

mod bloch;
mod random;
mod schmidt;

pub use bloch::{from_bloch, gellmann_basis, to_bloch, BlochVector, GeneratorBasis};
pub use random::{
    random_local_unitary, random_mixed, random_product_pure, random_pure, random_pure_with,
    random_separable, random_separable_with, random_state_vector, random_unitary,
};
pub(crate) use random::random_isometry;
pub use schmidt::{schmidt_decompose, SchmidtDecomposition, SCHMIDT_CUTOFF};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_hermitian, HermitianOperator};
use crate::matrix::{vec_norm, ComplexMatrix, C64, ONE, ZERO};

/// Tolerance on `Tr ρ = 1`.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted as nonnegative.
pub const PSD_TOL: f64 = 1e-10;
/// Largest GHZ register.
pub const MAX_GHZ_QUBITS: usize = 12;

/// Unit-trace positive semidefinite Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    op: HermitianOperator,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let op = HermitianOperator::new(matrix)?;
        Self::from_hermitian(op)
    }

    pub fn from_hermitian(op: HermitianOperator) -> Result<Self> {
        let tr = op.matrix().trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = eigenvalues_hermitian(&op)?.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { op })
    }

    /// Skips the spectral check. Used for outputs that are states by
    /// construction (channel images, tensor products, convex mixtures),
    /// which keeps large registers cheap. Hermiticity is still enforced.
    pub(crate) fn trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.hermiticity_deviation() < 1e-9);
        debug_assert!((matrix.trace().re - 1.0).abs() < 1e-9);
        Self { op: HermitianOperator::symmetrized(&matrix).expect("square by construction") }
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = vec_norm(psi);
        if psi.is_empty() || (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("state vector has norm {norm}")));
        }
        Ok(Self::trusted(ComplexMatrix::outer(psi, psi)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::trusted(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// `|index⟩⟨index|`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        Ok(Self::trusted(ComplexMatrix::unit(dim, index, index)))
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn as_hermitian(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.op.into_matrix()
    }

    pub fn purity(&self) -> f64 {
        let m = self.matrix();
        m.trace_product(m).re
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self::trusted(self.matrix().kron(other.matrix())?))
    }

    pub fn tensor_all(states: &[Self]) -> Result<Self> {
        let (first, rest) = states
            .split_first()
            .ok_or_else(|| Error::InvalidParameter("empty tensor product".into()))?;
        rest.iter().try_fold(first.clone(), |acc, s| acc.tensor(s))
    }

    /// Reduced state on the subsystems in `keep`.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        Ok(Self::trusted(crate::linalg::partial_trace(self.matrix(), dims, keep)?))
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> Result<Self> {
        Ok(Self::trusted(unitary.sandwich(self.matrix())?))
    }

    /// `Σ wᵢ ρᵢ` for nonnegative weights summing to one.
    pub fn mixture(weights: &[f64], states: &[Self]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::InvalidParameter("weights and states must pair up".into()));
        }
        if weights.iter().any(|&w| w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("mixture weights must form a distribution".into()));
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch("mixture of states with different dimensions".into()));
        }
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (w, s) in weights.iter().zip(states) {
            acc = &acc + &s.matrix().scale_real(*w);
        }
        Ok(Self::trusted(acc))
    }
}

/// The singlet `(|01⟩ − |10⟩)/√2`.
pub fn singlet_vector() -> Vec<C64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![ZERO, C64::new(h, 0.0), C64::new(-h, 0.0), ZERO]
}

/// Projector onto the singlet.
pub fn bell_state() -> DensityOperator {
    DensityOperator::pure(&singlet_vector()).expect("unit vector")
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
pub fn ghz_vector(n: usize) -> Result<Vec<C64>> {
    if !(1..=MAX_GHZ_QUBITS).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "GHZ register size {n} outside 1..={MAX_GHZ_QUBITS}"
        )));
    }
    let dim = 1usize << n;
    let mut psi = vec![ZERO; dim];
    psi[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    psi[dim - 1] = psi[0];
    Ok(psi)
}

pub fn ghz_state(n: usize) -> Result<DensityOperator> {
    DensityOperator::pure(&ghz_vector(n)?)
}

/// `w·|Ψ⁻⟩⟨Ψ⁻| + (1−w)·I/4` for `w ∈ [0, 1]`.
pub fn werner_state(w: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::InvalidParameter(format!("Werner weight {w} outside [0, 1]")));
    }
    let singlet = bell_state().into_matrix().scale_real(w);
    let noise = ComplexMatrix::identity(4).scale_real((1.0 - w) / 4.0);
    Ok(DensityOperator::trusted(&singlet + &noise))
}

/// Computational basis vector `|index⟩`.
pub fn basis_vector(dim: usize, index: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[index] = ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_hermitian, partial_trace};

    #[test]
    fn validation_rejects_bad_states() {
        let not_unit = ComplexMatrix::identity(2);
        assert!(matches!(DensityOperator::new(not_unit), Err(Error::InvalidState(_))));
        let negative = ComplexMatrix::from_real(2, 2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(matches!(DensityOperator::new(negative), Err(Error::InvalidState(_))));
        assert!(DensityOperator::pure(&[ONE, ONE]).is_err());
    }

    #[test]
    fn singlet_is_pure_with_maximally_mixed_marginal() {
        let rho = bell_state();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        let reduced = partial_trace(rho.matrix(), &[2, 2], &[0]).unwrap();
        assert!(reduced.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
        let reduced = partial_trace(rho.matrix(), &[2, 2], &[1]).unwrap();
        assert!(reduced.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn ghz_three_has_four_half_entries() {
        let rho = ghz_state(3).unwrap();
        let nonzero: Vec<C64> = rho.matrix().as_slice().iter().copied().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 4);
        assert!(nonzero.iter().all(|z| (z - C64::new(0.5, 0.0)).norm() < 1e-15));
        for n in 1..=MAX_GHZ_QUBITS.min(8) {
            assert!((ghz_state(n).unwrap().purity() - 1.0).abs() < 1e-12);
        }
        assert!(ghz_state(0).is_err());
        assert!(ghz_state(13).is_err());
    }

    #[test]
    fn ghz_two_has_maximally_mixed_marginal() {
        let rho = ghz_state(2).unwrap();
        let reduced = partial_trace(rho.matrix(), &[2, 2], &[0]).unwrap();
        assert!(reduced.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn ghz_three_traced_over_last_qubit() {
        // Keeping qubits 0 and 1 leaves (|00⟩⟨00| + |11⟩⟨11|)/2.
        let reduced = partial_trace(ghz_state(3).unwrap().matrix(), &[2, 2, 2], &[0, 1]).unwrap();
        let expected = ComplexMatrix::from_real(4, 4, &[
            0.5, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 0.5,
        ])
        .unwrap();
        assert!(reduced.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn werner_endpoints_and_spectrum() {
        assert!(werner_state(1.0).unwrap().matrix().max_abs_diff(bell_state().matrix()) < 1e-15);
        assert!(werner_state(0.0)
            .unwrap()
            .matrix()
            .max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25))
            < 1e-15);
        let e = eig_hermitian(werner_state(0.5).unwrap().as_hermitian()).unwrap();
        for (got, want) in e.values.iter().zip([0.625, 0.125, 0.125, 0.125]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(werner_state(-0.1).is_err());
        assert!(werner_state(1.1).is_err());
    }

    #[test]
    fn constructors_pass_full_validation() {
        for rho in [bell_state(), ghz_state(3).unwrap(), werner_state(0.3).unwrap()] {
            DensityOperator::new(rho.into_matrix()).unwrap();
        }
    }
}
