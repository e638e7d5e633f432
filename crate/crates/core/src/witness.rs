//! Two-qubit entanglement detection through a non-physical linear map.
//!
//! Coefficients here use the standard Paulis (`Tr σ² = 2`):
//! `ρ = ¼[𝟙 + Σαⱼ σⱼ⊗𝟙 + Σβₖ 𝟙⊗σₖ + Σγⱼₖ σⱼ⊗σₖ]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, eigenvalues_hermitian, psd_sqrt, singular_values, HermitianOperator};
use crate::matrix::{ComplexMatrix, C64, I, ONE, ZERO};
use crate::states::DensityOperator;

/// `σ₀ = 𝟙, σ₁ = σₓ, σ₂ = σ_y, σ₃ = σ_z`.
pub fn pauli(index: usize) -> ComplexMatrix {
    let entries = match index {
        0 => [ONE, ZERO, ZERO, ONE],
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, -I, I, ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("Pauli index {index} outside 0..4"),
    };
    ComplexMatrix::from_vec(2, 2, entries.to_vec()).expect("2x2")
}

/// `σⱼ ⊗ σₖ` with index 0 standing for the identity.
pub fn pauli_product(j: usize, k: usize) -> ComplexMatrix {
    pauli(j).kron(&pauli(k)).expect("4x4")
}

fn require_two_qubits(m: &ComplexMatrix) -> Result<()> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit operator expected, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliCoefficients {
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
    pub gamma: [[f64; 3]; 3],
}

impl PauliCoefficients {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(4);
        for j in 0..3 {
            m = &m + &pauli_product(j + 1, 0).scale_real(self.alpha[j]);
            m = &m + &pauli_product(0, j + 1).scale_real(self.beta[j]);
            for k in 0..3 {
                m = &m + &pauli_product(j + 1, k + 1).scale_real(self.gamma[j][k]);
            }
        }
        m.scale_real(0.25)
    }

    /// `Σγⱼₖ σⱼ⊗σₖ`.
    pub fn correlation_operator(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        for j in 0..3 {
            for k in 0..3 {
                m = &m + &pauli_product(j + 1, k + 1).scale_real(self.gamma[j][k]);
            }
        }
        m
    }
}

fn coefficients_of(m: &ComplexMatrix) -> PauliCoefficients {
    let mut c = PauliCoefficients { alpha: [0.0; 3], beta: [0.0; 3], gamma: [[0.0; 3]; 3] };
    for j in 0..3 {
        c.alpha[j] = m.trace_product(&pauli_product(j + 1, 0)).re;
        c.beta[j] = m.trace_product(&pauli_product(0, j + 1)).re;
        for k in 0..3 {
            c.gamma[j][k] = m.trace_product(&pauli_product(j + 1, k + 1)).re;
        }
    }
    c
}

/// `αⱼ = Tr ρ σⱼ⊗𝟙`, `βₖ = Tr ρ 𝟙⊗σₖ`, `γⱼₖ = Tr ρ σⱼ⊗σₖ`.
pub fn pauli_coefficients(rho: &DensityOperator) -> Result<PauliCoefficients> {
    require_two_qubits(rho.matrix())?;
    Ok(coefficients_of(rho.matrix()))
}

/// The map `X ↦ X + (ε/4)(−Tr(X)·𝟙 + Σ Tr(X σⱼ⊗σₖ) σⱼ⊗σₖ)`.
///
/// Linear and Hermiticity preserving, but neither positive nor trace
/// preserving: a state comes out with trace `1 − ε`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessMap {
    pub epsilon: f64,
}

impl WitnessMap {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!("witness epsilon {epsilon} must be positive")));
        }
        Ok(Self { epsilon })
    }

    pub fn apply(&self, x: &HermitianOperator) -> Result<HermitianOperator> {
        let m = x.matrix();
        require_two_qubits(m)?;
        let c = coefficients_of(m);
        let shift = &c.correlation_operator() - &ComplexMatrix::identity(4).scale(m.trace());
        HermitianOperator::symmetrized(&(m + &shift.scale_real(self.epsilon / 4.0)))
    }
}

pub fn apply_witness_map(rho: &DensityOperator, epsilon: f64) -> Result<HermitianOperator> {
    WitnessMap::new(epsilon)?.apply(rho.as_hermitian())
}

fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    let values = eigenvalues_hermitian(&HermitianOperator::symmetrized(m)?)?;
    Ok(values.into_iter().map(f64::abs).sum())
}

/// `F = ¼ Tr|−𝟙 + Σγⱼₖ σⱼ⊗σₖ| − 1`. The map strength cancels, so no ε
/// is needed.
pub fn witness_value(rho: &DensityOperator) -> Result<f64> {
    let c = pauli_coefficients(rho)?;
    let op = &c.correlation_operator() - &ComplexMatrix::identity(4);
    Ok(trace_norm(&op)? / 4.0 - 1.0)
}

/// `F = (1/ε) Tr|Λ₁₂[ρ] − ρ| − 1` computed through the map itself.
pub fn witness_value_explicit(rho: &DensityOperator, epsilon: f64) -> Result<f64> {
    let image = apply_witness_map(rho, epsilon)?;
    Ok(trace_norm(&(image.matrix() - rho.matrix()))? / epsilon - 1.0)
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
///
/// The `λᵢ` are the singular values of `√ρ (σ_y⊗σ_y) √ρ*`, which equal the
/// square roots of the eigenvalues of `√ρ ρ̃ √ρ` without squaring small
/// values into the noise floor.
pub fn concurrence(rho: &DensityOperator) -> Result<f64> {
    require_two_qubits(rho.matrix())?;
    let yy = pauli_product(2, 2);
    let root = psd_sqrt(rho.as_hermitian())?;
    let a = root.matrix().matmul(&yy)?.matmul(&root.matrix().conj())?;
    let lambda = singular_values(&a)?;
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0))
}

/// Largest eigenvalue of the correlation operator; `F > 0` exactly when it
/// exceeds 1.
pub fn correlation_spectral_radius(rho: &DensityOperator) -> Result<f64> {
    let c = pauli_coefficients(rho)?;
    let eig = eig_hermitian(&HermitianOperator::symmetrized(&c.correlation_operator())?)?;
    Ok(eig.values[0])
}

/// `(|k⟩ ⊗ |l⟩)` basis helper for tests and examples.
pub fn two_qubit_basis(k: usize, l: usize) -> Vec<C64> {
    let mut v = vec![ZERO; 4];
    v[2 * k + l] = ONE;
    v
}
