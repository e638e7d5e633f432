//! Local channels acting on one factor of a multipartite operator, applied
//! without materializing `Λ ⊗ 𝟙 ⊗ …`.

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::check_dims;
use crate::matrix::{ComplexMatrix, ZERO};
use crate::states::DensityOperator;

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// `(K ⊗ 𝟙) X` with `K` acting on subsystem `index`.
fn left_local(k: &ComplexMatrix, x: &ComplexMatrix, dim: usize, stride: usize) -> ComplexMatrix {
    let n = x.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for row in 0..n {
        let digit = (row / stride) % dim;
        let base = row - digit * stride;
        for a in 0..dim {
            let coeff = k[(digit, a)];
            if coeff == ZERO {
                continue;
            }
            let src = base + a * stride;
            for col in 0..n {
                out[(row, col)] += coeff * x[(src, col)];
            }
        }
    }
    out
}

/// `X (K ⊗ 𝟙)†` with `K` acting on subsystem `index`.
fn right_local_adjoint(k: &ComplexMatrix, x: &ComplexMatrix, dim: usize, stride: usize) -> ComplexMatrix {
    let n = x.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for col in 0..n {
        let digit = (col / stride) % dim;
        let base = col - digit * stride;
        for b in 0..dim {
            let coeff = k[(digit, b)].conj();
            if coeff == ZERO {
                continue;
            }
            let src = base + b * stride;
            for row in 0..n {
                out[(row, col)] += x[(row, src)] * coeff;
            }
        }
    }
    out
}

/// Applies `ch` to subsystem `index` of the operator `x` whose tensor
/// factors have dimensions `dims`.
pub fn apply_on_subsystem(
    ch: &QuantumChannel,
    x: &ComplexMatrix,
    dims: &[usize],
    index: usize,
) -> Result<ComplexMatrix> {
    let n = x.require_square()?;
    check_dims(dims, n)?;
    if index >= dims.len() {
        return Err(Error::IndexOutOfRange { index, dim: dims.len() });
    }
    if dims[index] != ch.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel of dimension {} on subsystem of dimension {}",
            ch.dim(),
            dims[index]
        )));
    }
    let stride = strides(dims)[index];
    let mut out = ComplexMatrix::zeros(n, n);
    for k in ch.kraus() {
        let half = left_local(k, x, dims[index], stride);
        out = &out + &right_local_adjoint(k, &half, dims[index], stride);
    }
    Ok(out)
}

/// Applies each `(subsystem, channel)` pair in turn; untouched subsystems
/// see the identity.
pub fn apply_local(
    rho: &DensityOperator,
    dims: &[usize],
    ops: &[(usize, &QuantumChannel)],
) -> Result<DensityOperator> {
    check_dims(dims, rho.dim())?;
    let mut m = rho.matrix().clone();
    for &(index, ch) in ops {
        m = apply_on_subsystem(ch, &m, dims, index)?;
    }
    Ok(DensityOperator::trusted(m))
}

/// `Λ₁ ⊗ … ⊗ Λ_N` applied factor by factor; subsystem dimensions are taken
/// from the channels.
pub fn apply_product(channels: &[QuantumChannel], rho: &DensityOperator) -> Result<DensityOperator> {
    if channels.is_empty() {
        return Err(Error::InvalidParameter("empty channel list".into()));
    }
    let dims: Vec<usize> = channels.iter().map(QuantumChannel::dim).collect();
    let ops: Vec<(usize, &QuantumChannel)> = channels.iter().enumerate().collect();
    apply_local(rho, &dims, &ops)
}
