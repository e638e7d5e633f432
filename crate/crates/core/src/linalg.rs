//! Hermitian operators, spectral decompositions, Schatten norms and
//! partial traces.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, MAX_TOTAL_DIM, ZERO};

/// Absolute entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

fn iteration_cap(dim: usize) -> usize {
    1000 + 200 * dim
}

/// A square matrix equal to its conjugate transpose.
///
/// Construction through [`HermitianOperator::new`] checks the deviation
/// against [`HERMITIAN_TOL`] and then symmetrizes, so downstream solvers
/// always receive exactly Hermitian input.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.require_square()?;
        let deviation = matrix.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix: matrix.hermitian_part() })
    }

    /// Takes `(m + m†)/2` unconditionally. For inputs that are Hermitian by
    /// construction up to rounding.
    pub fn symmetrized(matrix: &ComplexMatrix) -> Result<Self> {
        matrix.require_square()?;
        Ok(Self { matrix: matrix.hermitian_part() })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// Eigenvalues (descending) and the unitary whose columns are the
/// corresponding eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// Column `i` of the eigenvector matrix.
    pub fn vector(&self, i: usize) -> Vec<C64> {
        (0..self.vectors.rows()).map(|r| self.vectors[(r, i)]).collect()
    }

    /// `U f(Λ) U†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let u = &self.vectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = u[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += a * u[(j, k)].conj();
                }
            }
        }
        out
    }
}

pub fn eig_hermitian(h: &HermitianOperator) -> Result<Eigen> {
    let n = h.dim();
    let cap = iteration_cap(n);
    let decomposition = nalgebra::SymmetricEigen::try_new(h.matrix.to_nalgebra(), 1e-15, cap)
        .ok_or(Error::NoConvergence { iterations: cap })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| decomposition.eigenvalues[b].total_cmp(&decomposition.eigenvalues[a]));
    let values = order.iter().map(|&k| decomposition.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = decomposition.eigenvectors[(row, k)];
        }
    }
    Ok(Eigen { values, vectors })
}

pub fn eigenvalues_hermitian(h: &HermitianOperator) -> Result<Vec<f64>> {
    let n = h.dim();
    let cap = iteration_cap(n);
    let mut values: Vec<f64> =
        nalgebra::SymmetricEigen::try_new(h.matrix.to_nalgebra(), 1e-15, cap)
            .ok_or(Error::NoConvergence { iterations: cap })?
            .eigenvalues
            .iter()
            .copied()
            .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let cap = iteration_cap(m.rows().max(m.cols()));
    let svd = nalgebra::SVD::try_new(m.to_nalgebra(), false, false, 1e-15, cap)
        .ok_or(Error::NoConvergence { iterations: cap })?;
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Full SVD `m = U diag(s) V†` with singular values descending.
pub(crate) fn svd(m: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let cap = iteration_cap(m.rows().max(m.cols()));
    let svd = nalgebra::SVD::try_new(m.to_nalgebra(), true, true, 1e-15, cap)
        .ok_or(Error::NoConvergence { iterations: cap })?;
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let r = svd.singular_values.len();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut left = ComplexMatrix::zeros(m.rows(), r);
    let mut right = ComplexMatrix::zeros(m.cols(), r);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..m.rows() {
            left[(i, col)] = u[(i, k)];
        }
        for j in 0..m.cols() {
            // v_t holds V†, so V[j, k] = conj(v_t[k, j]).
            right[(j, col)] = v_t[(k, j)].conj();
        }
    }
    let values = order.iter().map(|&k| svd.singular_values[k]).collect();
    Ok((left, values, right))
}

/// Order `p` of a Schatten norm: a positive integer or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormOrder {
    Finite(u32),
    Infinity,
}

impl NormOrder {
    pub const TRACE: NormOrder = NormOrder::Finite(1);
    pub const HILBERT_SCHMIDT: NormOrder = NormOrder::Finite(2);

    pub fn new(p: u32) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParameter("norm order must be at least 1".into()));
        }
        Ok(NormOrder::Finite(p))
    }

    pub fn is_hilbert_schmidt(self) -> bool {
        self == NormOrder::HILBERT_SCHMIDT
    }

    /// `(Σ xᵢᵖ)^(1/p)` over nonnegative values, or their maximum for `p = ∞`.
    pub fn combine(self, values: impl IntoIterator<Item = f64>) -> f64 {
        match self {
            NormOrder::Infinity => values.into_iter().fold(0.0, f64::max),
            NormOrder::Finite(1) => values.into_iter().sum(),
            NormOrder::Finite(2) => values.into_iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormOrder::Finite(p) => {
                let p = f64::from(p);
                values.into_iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p)
            }
        }
    }

    /// `1/p`, zero for `p = ∞`.
    pub fn reciprocal(self) -> f64 {
        match self {
            NormOrder::Finite(p) => 1.0 / f64::from(p),
            NormOrder::Infinity => 0.0,
        }
    }
}

impl Default for NormOrder {
    fn default() -> Self {
        NormOrder::HILBERT_SCHMIDT
    }
}

impl fmt::Display for NormOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormOrder::Finite(p) => write!(f, "{p}"),
            NormOrder::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for NormOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" => Ok(NormOrder::Infinity),
            other => other
                .parse::<u32>()
                .map_err(|_| Error::InvalidParameter(format!("bad norm order {s:?}")))
                .and_then(NormOrder::new),
        }
    }
}

impl Serialize for NormOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NormOrder::Finite(p) => serializer.serialize_u32(*p),
            NormOrder::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for NormOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(p) => NormOrder::new(p).map_err(serde::de::Error::custom),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Schatten p-norm of a square matrix.
///
/// Hermitian input is detected and handled through its eigenvalues; other
/// matrices go through the SVD.
pub fn schatten_p_norm(m: &ComplexMatrix, p: NormOrder) -> Result<f64> {
    m.require_square()?;
    if p == NormOrder::HILBERT_SCHMIDT {
        return Ok(m.frobenius_norm());
    }
    let values = if m.hermiticity_deviation() <= HERMITIAN_TOL {
        eigenvalues_hermitian(&HermitianOperator::symmetrized(m)?)?
            .into_iter()
            .map(f64::abs)
            .collect()
    } else {
        singular_values(m)?
    };
    Ok(p.combine(values))
}

/// `|h| = √(h†h)`, which for Hermitian `h` is `U|Λ|U†`.
pub fn operator_abs(h: &HermitianOperator) -> Result<HermitianOperator> {
    let eig = eig_hermitian(h)?;
    HermitianOperator::symmetrized(&eig.reconstruct_with(f64::abs))
}

/// Square root of a positive semidefinite operator; eigenvalues below zero
/// are clipped.
pub fn psd_sqrt(h: &HermitianOperator) -> Result<HermitianOperator> {
    let eig = eig_hermitian(h)?;
    HermitianOperator::symmetrized(&eig.reconstruct_with(|x| x.max(0.0).sqrt()))
}

pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.kron(b)
}

/// Kronecker product of several factors, left to right.
pub fn tensor_all(factors: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("empty tensor product".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| acc.kron(f))
}

pub(crate) fn check_dims(dims: &[usize], total: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch("subsystem dimensions must be positive".into()));
    }
    let mut product: usize = 1;
    for &d in dims {
        product = product.checked_mul(d).filter(|&p| p <= MAX_TOTAL_DIM).ok_or(
            Error::DimensionOverflow { dim: usize::MAX, max: MAX_TOTAL_DIM },
        )?;
    }
    if product != total {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {dims:?} multiply to {product}, operator has dimension {total}"
        )));
    }
    Ok(())
}

/// Traces out every subsystem not listed in `keep`. The kept subsystems
/// appear in ascending index order in the result.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    check_dims(dims, n)?;
    if keep.is_empty() {
        return Err(Error::InvalidParameter("keep set must be nonempty".into()));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::IndexOutOfRange { index: bad, dim: dims.len() });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();

    // stride of each subsystem in the flat index
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let offsets = |subsystems: &[usize]| -> Vec<usize> {
        let size: usize = subsystems.iter().map(|&s| dims[s]).product();
        (0..size)
            .map(|mut flat| {
                let mut offset = 0;
                for &s in subsystems.iter().rev() {
                    offset += (flat % dims[s]) * strides[s];
                    flat /= dims[s];
                }
                offset
            })
            .collect()
    };
    let kept_offsets = offsets(&kept);
    let traced_offsets = offsets(&traced);

    let k = kept_offsets.len();
    let mut out = ComplexMatrix::zeros(k, k);
    for (a, &ra) in kept_offsets.iter().enumerate() {
        for (b, &rb) in kept_offsets.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_offsets {
                acc += m[(ra + t, rb + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}
