//! Numerics for products of local quantum channels.
//!
//! Dense complex matrices, density operators and Kraus channels, p-norm
//! distances, closed-form bounds on how far `Λ₁ ⊗ Λ₂` can move a
//! bipartite state when each `Λᵢ` moves local states by at most `ε`, a
//! two-qubit witness built on those bounds, and randomized experiments
//! that check all of it.
//!
//! ```
//! use localchan::explorer::bell_example;
//!
//! let b = bell_example(0.01).unwrap();
//! assert!(b.report.violates_separable);
//! assert!((b.report.measured_distance - b.closed_form).abs() < 1e-12);
//! ```

pub mod bounds;
pub mod channels;
pub mod error;
pub mod explorer;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod metrics;
pub mod rng;
pub mod states;
pub mod witness;

pub use bounds::{classify, BoundReport, StateClass};
pub use channels::{EpsilonCertificate, QuantumChannel};
pub use error::{Error, Result};
pub use linalg::{HermitianOperator, NormOrder};
pub use matrix::{ComplexMatrix, C64};
pub use states::{BlochVector, DensityOperator, GeneratorBasis, SchmidtDecomposition};
