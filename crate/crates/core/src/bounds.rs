//! Closed-form bounds on `D(Λ₁ ⊗ Λ₂[ρ], ρ)` for ε-bounded local channels,
//! and classification of measured distances against them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::NormOrder;

/// Absolute slack before a measured distance counts as a violation.
pub const VIOLATION_SLACK: f64 = 1e-9;

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("subsystem dimension {d} below 2")));
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must be finite and nonnegative")));
    }
    Ok(())
}

/// HS bound for separable inputs: `√(2 + 2√((1−1/d₁)(1−1/d₂)))·ε`.
pub fn separable_bound_hs(d1: usize, d2: usize, epsilon: f64) -> Result<f64> {
    check_dim(d1)?;
    check_dim(d2)?;
    check_epsilon(epsilon)?;
    let a1 = 1.0 - 1.0 / d1 as f64;
    let a2 = 1.0 - 1.0 / d2 as f64;
    Ok((2.0 + 2.0 * (a1 * a2).sqrt()).sqrt() * epsilon)
}

/// HS bound for arbitrary inputs: `2√(2 − 1/d)·ε`, `d` the smaller
/// subsystem dimension.
pub fn entangled_bound_hs(d: usize, epsilon: f64) -> Result<f64> {
    check_dim(d)?;
    check_epsilon(epsilon)?;
    Ok(2.0 * (2.0 - 1.0 / d as f64).sqrt() * epsilon)
}

/// `2ε`, valid for separable inputs under every p-norm distance.
pub fn separable_bound_generic(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(2.0 * epsilon)
}

/// `N√(2 − 1/d)·ε` for `N` ε-bounded channels on `d`-dimensional factors.
pub fn multi_channel_bound(n: usize, d: usize, epsilon: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one channel".into()));
    }
    check_dim(d)?;
    check_epsilon(epsilon)?;
    Ok(n as f64 * (2.0 - 1.0 / d as f64).sqrt() * epsilon)
}

/// `Nε`, the separable-input companion of [`multi_channel_bound`].
pub fn multi_channel_separable_bound(n: usize, epsilon: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one channel".into()));
    }
    check_epsilon(epsilon)?;
    Ok(n as f64 * epsilon)
}

/// Contraction strength `k` for which `ρ ↦ (1−k)ρ + k·I/d` moves no state
/// further than `ε` in the p-norm.
pub fn contraction_strength(d: usize, p: NormOrder, epsilon: f64) -> Result<f64> {
    check_dim(d)?;
    check_epsilon(epsilon)?;
    let per_unit = crate::channels::contraction_epsilon(d, 1.0, p);
    Ok(epsilon / per_unit)
}

/// First-order distance between `|00⟩⟨00|` and its image under the two
/// calibrated contractions.
pub fn saturation_first_order(d1: usize, d2: usize, p: NormOrder, epsilon: f64) -> Result<f64> {
    let k1 = contraction_strength(d1, p, epsilon)?;
    let k2 = contraction_strength(d2, p, epsilon)?;
    let (f1, f2) = (d1 as f64, d2 as f64);
    let head = k1 * (1.0 - 1.0 / f1) + k2 * (1.0 - 1.0 / f2);
    Ok(match p {
        NormOrder::Infinity => head.max(k1 / f1).max(k2 / f2),
        NormOrder::Finite(q) => {
            let q = f64::from(q);
            (head.powf(q) + (k1 / f1).powf(q) * (f1 - 1.0) + (k2 / f2).powf(q) * (f2 - 1.0)).powf(1.0 / q)
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateClass {
    Product,
    Separable,
    Entangled,
    Unknown,
}

impl StateClass {
    /// Whether the separable bounds are proven for this class.
    pub fn is_separable(self) -> bool {
        matches!(self, StateClass::Product | StateClass::Separable)
    }
}

impl std::fmt::Display for StateClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StateClass::Product => "product",
            StateClass::Separable => "separable",
            StateClass::Entangled => "entangled",
            StateClass::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub state_class: StateClass,
    pub p: NormOrder,
    pub epsilon: f64,
    pub measured_distance: f64,
    pub separable_bound: f64,
    pub entangled_bound: f64,
    pub violates_separable: bool,
    pub violates_entangled: bool,
}

/// Bounds for a `d₁ ⊗ d₂` system in the p-norm.
///
/// The separable bound is the dimension-dependent one for p = 2 and `2ε`
/// otherwise. The bound for arbitrary states is only known for p = 2;
/// for other orders the diameter `2^(1/p)` of the state space is used.
pub fn bounds_for(d1: usize, d2: usize, p: NormOrder, epsilon: f64) -> Result<(f64, f64)> {
    if p.is_hilbert_schmidt() {
        Ok((separable_bound_hs(d1, d2, epsilon)?, entangled_bound_hs(d1.min(d2), epsilon)?))
    } else {
        check_dim(d1)?;
        check_dim(d2)?;
        Ok((separable_bound_generic(epsilon)?, 2f64.powf(p.reciprocal())))
    }
}

pub fn classify(
    measured: f64,
    d1: usize,
    d2: usize,
    p: NormOrder,
    epsilon: f64,
    state_class: StateClass,
) -> Result<BoundReport> {
    if !(measured.is_finite() && measured >= 0.0) {
        return Err(Error::InvalidParameter(format!("measured distance {measured} is not a distance")));
    }
    let (separable_bound, entangled_bound) = bounds_for(d1, d2, p, epsilon)?;
    Ok(BoundReport {
        state_class,
        p,
        epsilon,
        measured_distance: measured,
        separable_bound,
        entangled_bound,
        violates_separable: measured > separable_bound + VIOLATION_SLACK,
        violates_entangled: measured > entangled_bound + VIOLATION_SLACK,
    })
}
