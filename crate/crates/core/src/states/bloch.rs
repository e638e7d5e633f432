//! Orthonormal traceless generator bases and generalized Bloch coordinates.
//!
//! [`gellmann_basis`] returns the `d² − 1` generalized Gell-Mann matrices
//! normalized so that `Tr(σ_α σ_β) = δ_αβ`, in a fixed order:
//!
//! 1. symmetric pairs `(E_jk + E_kj)/√2` for `j < k`, lexicographic in `(j, k)`;
//! 2. antisymmetric pairs `(−i E_jk + i E_kj)/√2` for `j < k`, same order;
//! 3. diagonal `(Σ_{j<l} E_jj − l E_ll)/√(l(l+1))` for `l = 1, …, d−1`.
//!
//! For `d = 2` this is `(σ_x, σ_y, σ_z)/√2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::HermitianOperator;
use crate::matrix::{ComplexMatrix, C64, I};
use crate::states::DensityOperator;

#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<HermitianOperator>,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[HermitianOperator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Matrix of `Tr(σ_α σ_β)`.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        self.generators
            .iter()
            .map(|a| self.generators.iter().map(|b| a.matrix().trace_product(b.matrix()).re).collect())
            .collect()
    }
}

pub fn gellmann_basis(d: usize) -> Result<GeneratorBasis> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("generator basis needs d >= 2, got {d}")));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut generators = Vec::with_capacity(d * d - 1);
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = C64::new(h, 0.0);
        m[(k, j)] = C64::new(h, 0.0);
        generators.push(HermitianOperator::new(m)?);
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = -I * h;
        m[(k, j)] = I * h;
        generators.push(HermitianOperator::new(m)?);
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = ComplexMatrix::zeros(d, d);
        for j in 0..l {
            m[(j, j)] = C64::new(norm, 0.0);
        }
        m[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        generators.push(HermitianOperator::new(m)?);
    }
    Ok(GeneratorBasis { dim: d, generators })
}

/// Real coordinates of the traceless part of a state in an orthonormal
/// generator basis: `ρ = I/d + Σ c_α σ_α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    dim: usize,
    coeffs: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, coeffs: Vec<f64>) -> Result<Self> {
        if dim < 2 || coeffs.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch(format!(
                "Bloch vector of length {} for dimension {dim}",
                coeffs.len()
            )));
        }
        let v = Self { dim, coeffs };
        let ceiling = 1.0 - 1.0 / dim as f64;
        if v.norm_sqr() > ceiling + 1e-10 {
            return Err(Error::InvalidState(format!(
                "Bloch vector norm² {} above the ceiling {ceiling}",
                v.norm_sqr()
            )));
        }
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

pub fn to_bloch(rho: &DensityOperator, basis: &GeneratorBasis) -> Result<BlochVector> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} against a basis of dimension {}",
            rho.dim(),
            basis.dim()
        )));
    }
    let coeffs = basis.generators().iter().map(|g| rho.matrix().trace_product(g.matrix()).re).collect();
    BlochVector::new(basis.dim(), coeffs)
}

pub fn from_bloch(bloch: &BlochVector, basis: &GeneratorBasis) -> Result<DensityOperator> {
    if bloch.dim() != basis.dim() {
        return Err(Error::DimensionMismatch("Bloch vector and basis dimensions differ".into()));
    }
    let d = basis.dim();
    let mut m = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    for (c, g) in bloch.coeffs().iter().zip(basis.generators()) {
        m = &m + &g.matrix().scale_real(*c);
    }
    DensityOperator::new(m)
}
