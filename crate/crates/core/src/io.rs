//! JSON interchange for matrices, states and channels.
//!
//! ```text
//! matrix:  {"rows": n, "cols": m, "entries": [[re, im], ...]}   row-major
//! state:   matrix fields plus "dims": [d1, d2, ...]
//! channel: {"dim": d, "kraus": [matrix, ...]}
//! ```

use serde::{Deserialize, Serialize};

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::check_dims;
use crate::matrix::{ComplexMatrix, C64};
use crate::states::DensityOperator;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self { rows: m.rows(), cols: m.cols(), entries: m.as_slice().iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.rows == 0 || j.cols == 0 {
            return Err(Error::Format("matrix dimensions must be positive".into()));
        }
        ComplexMatrix::from_vec(j.rows, j.cols, j.entries.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelJson {
    pub dim: usize,
    pub kraus: Vec<MatrixJson>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("plain data")
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    parse::<MatrixJson>(text)?.try_into()
}

/// Serializes a state with its subsystem dimensions.
pub fn state_to_json(rho: &DensityOperator, dims: &[usize]) -> Result<String> {
    check_dims(dims, rho.dim())?;
    let m = MatrixJson::from(rho.matrix());
    let j = StateJson { rows: m.rows, cols: m.cols, entries: m.entries, dims: Some(dims.to_vec()) };
    Ok(serde_json::to_string(&j).expect("plain data"))
}

/// Parses and validates a state. Missing `dims` means a single system.
pub fn state_from_json(text: &str) -> Result<(DensityOperator, Vec<usize>)> {
    let j: StateJson = parse(text)?;
    let dims = j.dims.unwrap_or_else(|| vec![j.rows]);
    let m = ComplexMatrix::try_from(MatrixJson { rows: j.rows, cols: j.cols, entries: j.entries })?;
    m.require_square()?;
    check_dims(&dims, m.rows())?;
    Ok((DensityOperator::new(m)?, dims))
}

pub fn channel_to_json(ch: &QuantumChannel) -> String {
    let j = ChannelJson { dim: ch.dim(), kraus: ch.kraus().iter().map(MatrixJson::from).collect() };
    serde_json::to_string(&j).expect("plain data")
}

pub fn channel_from_json(text: &str) -> Result<QuantumChannel> {
    let j: ChannelJson = parse(text)?;
    let kraus = j.kraus.into_iter().map(ComplexMatrix::try_from).collect::<Result<Vec<_>>>()?;
    let ch = QuantumChannel::new(kraus)?;
    if ch.dim() != j.dim {
        return Err(Error::Format(format!("declared dim {} but Kraus operators are {}x{0}", j.dim, ch.dim())));
    }
    Ok(ch)
}
