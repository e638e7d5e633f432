use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{channel_pairs, CertifiedChannel, ExperimentConfig};
use crate::bounds::{classify, BoundReport, StateClass};
use crate::channels::apply_local;
use crate::error::Result;
use crate::metrics::p_distance;
use crate::rng::trial_rng;
use crate::states::{random_mixed, random_separable_with, random_state_vector, schmidt_decompose, DensityOperator};
use crate::witness::concurrence;

/// Terms in a sampled separable mixture cycle through `1..=MAX_TERMS`.
const MAX_TERMS: usize = 4;

fn measure(
    cfg: &ExperimentConfig,
    pair: &(CertifiedChannel, CertifiedChannel),
    rho: &DensityOperator,
    class: StateClass,
) -> Result<BoundReport> {
    let out = apply_local(rho, &[cfg.d1, cfg.d2], &[(0, &pair.0.channel), (1, &pair.1.channel)])?;
    let distance = p_distance(&out, rho, cfg.p)?;
    classify(distance, cfg.d1, cfg.d2, cfg.p, cfg.epsilon, class)
}

/// Random separable states through the configured channel pair.
pub fn separable_sweep(cfg: &ExperimentConfig) -> Result<Vec<BoundReport>> {
    let pairs = channel_pairs(cfg)?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i as u64);
            let terms = 1 + i % MAX_TERMS;
            let rho = random_separable_with(cfg.d1, cfg.d2, terms, &mut rng)?;
            let class = if terms == 1 { StateClass::Product } else { StateClass::Separable };
            measure(cfg, &pairs[i % pairs.len()], &rho, class)
        })
        .collect()
}

/// Arbitrary states: even trials are Haar-pure, odd trials are Ginibre
/// mixed states of random rank.
pub fn universal_sweep(cfg: &ExperimentConfig) -> Result<Vec<BoundReport>> {
    let pairs = channel_pairs(cfg)?;
    let dim = cfg.d1 * cfg.d2;
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i as u64);
            let (rho, class) = if i % 2 == 0 {
                let psi = random_state_vector(dim, &mut rng);
                let rank = schmidt_decompose(&psi, cfg.d1, cfg.d2)?.rank();
                let class = if rank > 1 { StateClass::Entangled } else { StateClass::Product };
                (DensityOperator::pure(&psi)?, class)
            } else {
                let rank = rng.random_range(1..=dim);
                let rho = random_mixed(dim, rank, &mut rng)?;
                let class = if dim == 4 {
                    if concurrence(&rho)? > 1e-12 { StateClass::Entangled } else { StateClass::Separable }
                } else {
                    StateClass::Unknown
                };
                (rho, class)
            };
            measure(cfg, &pairs[i % pairs.len()], &rho, class)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub trials: usize,
    pub max_distance: f64,
    /// Largest `measured / separable_bound` over separable inputs.
    pub max_separable_ratio: f64,
    /// Largest `measured / entangled_bound` over all inputs.
    pub max_entangled_ratio: f64,
    /// Separable-bound violations by inputs known to be separable.
    pub separable_violations: usize,
    /// Separable-bound violations by other inputs (expected for some
    /// entangled states).
    pub entangled_exceedances: usize,
    pub entangled_violations: usize,
}

pub fn summarize(reports: &[BoundReport]) -> SweepSummary {
    let ratio = |m: f64, b: f64| if b > 0.0 { m / b } else if m > 0.0 { f64::INFINITY } else { 0.0 };
    let mut s = SweepSummary {
        trials: reports.len(),
        max_distance: 0.0,
        max_separable_ratio: 0.0,
        max_entangled_ratio: 0.0,
        separable_violations: 0,
        entangled_exceedances: 0,
        entangled_violations: 0,
    };
    for r in reports {
        s.max_distance = s.max_distance.max(r.measured_distance);
        s.max_entangled_ratio = s.max_entangled_ratio.max(ratio(r.measured_distance, r.entangled_bound));
        if r.state_class.is_separable() {
            s.max_separable_ratio = s.max_separable_ratio.max(ratio(r.measured_distance, r.separable_bound));
            s.separable_violations += usize::from(r.violates_separable);
        } else {
            s.entangled_exceedances += usize::from(r.violates_separable);
        }
        s.entangled_violations += usize::from(r.violates_entangled);
    }
    s
}
