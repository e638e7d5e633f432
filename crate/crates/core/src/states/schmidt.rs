use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::svd;
use crate::matrix::{vec_kron, vec_norm, ComplexMatrix, C64, ZERO};

/// Singular values at or below this count as zero when computing the
/// Schmidt rank.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

/// `|ψ⟩ = Σₖ βₖ |uₖ⟩ ⊗ |vₖ⟩` with `β` descending.
#[derive(Clone, Debug, Serialize)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    /// Columns are the `|uₖ⟩`, one per coefficient.
    #[serde(skip)]
    pub left_vectors: ComplexMatrix,
    /// Columns are the `|vₖ⟩`, one per coefficient.
    #[serde(skip)]
    pub right_vectors: ComplexMatrix,
}

impl SchmidtDecomposition {
    /// Number of coefficients above [`SCHMIDT_CUTOFF`].
    pub fn rank(&self) -> usize {
        self.coefficients.iter().filter(|&&b| b > SCHMIDT_CUTOFF).count()
    }

    pub fn reconstruct(&self) -> Vec<C64> {
        let d1 = self.left_vectors.rows();
        let d2 = self.right_vectors.rows();
        let mut psi = vec![ZERO; d1 * d2];
        for (k, &beta) in self.coefficients.iter().enumerate() {
            let u: Vec<C64> = (0..d1).map(|i| self.left_vectors[(i, k)]).collect();
            let v: Vec<C64> = (0..d2).map(|j| self.right_vectors[(j, k)]).collect();
            for (acc, term) in psi.iter_mut().zip(vec_kron(&u, &v)) {
                *acc += term * beta;
            }
        }
        psi
    }
}

/// Schmidt decomposition of a unit vector in `C^{d1} ⊗ C^{d2}` via the SVD of
/// its `d1 × d2` coefficient matrix.
pub fn schmidt_decompose(psi: &[C64], d1: usize, d2: usize) -> Result<SchmidtDecomposition> {
    if d1 == 0 || d2 == 0 || psi.len() != d1 * d2 {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} is not in {d1} x {d2}",
            psi.len()
        )));
    }
    let norm = vec_norm(psi);
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("state vector has norm {norm}")));
    }
    let coeff = ComplexMatrix::from_vec(d1, d2, psi.to_vec())?;
    let (u, s, v) = svd(&coeff)?;
    // C = U S V†, so ψ_ij = Σ s_k U_ik conj(V_jk).
    Ok(SchmidtDecomposition { coefficients: s, left_vectors: u, right_vectors: v.conj() })
}
