//! Randomized and structured experiments over local channel pairs.
//!
//! Every trial draws its randomness from a generator seeded by
//! `(cfg.seed, trial index)`, and results are collected in trial order, so
//! a configuration always produces the same reports however the work is
//! scheduled.

mod examples;
mod search;
mod sweeps;

pub use examples::{
    bell_example, bell_pairs, ghz_decay, saturation_experiment, undetected_entangled_search, BellExample,
    BellPairs, GhzDecay, UndetectedEntangled,
};
pub use search::{violation_search, violation_search_in, SearchResult, SearchSpace, MAX_SEARCH_RESTARTS};
pub use sweeps::{separable_sweep, summarize, universal_sweep, SweepSummary};

use serde::{Deserialize, Serialize};

use crate::bounds::contraction_strength;
use crate::channels::{
    dephasing, depolarizing_contraction, epsilon_of_channel, epsilon_of_channel_with, random_channel,
    EpsilonCertificate, EpsilonSearch, QuantumChannel,
};
use crate::error::{Error, Result};
use crate::linalg::NormOrder;
use crate::rng::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ChannelSpec {
    /// `ρ ↦ (1−k)ρ + k·I/d` with `k` calibrated to ε.
    #[default]
    Contraction,
    /// Qubit dephasing calibrated to ε.
    Dephasing,
    /// `(1−t)·id + t·R` for a random Stinespring channel `R`, with `t`
    /// chosen so the certified ε of the mixture is the requested one.
    Random { env_dim: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub d1: usize,
    pub d2: usize,
    pub p: NormOrder,
    pub epsilon: f64,
    pub channel: ChannelSpec,
    /// Number of distinct random channel pairs; trials cycle through them.
    pub channel_pool: usize,
    /// Random restarts used to certify each random channel.
    pub certificate_restarts: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 10_000,
            d1: 2,
            d2: 2,
            p: NormOrder::HILBERT_SCHMIDT,
            epsilon: 0.01,
            channel: ChannelSpec::Contraction,
            channel_pool: 16,
            certificate_restarts: 16,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!("epsilon {} must be positive", self.epsilon)));
        }
        if self.d1 < 2 || self.d2 < 2 {
            return Err(Error::InvalidParameter("subsystem dimensions must be at least 2".into()));
        }
        if self.channel_pool == 0 {
            return Err(Error::InvalidParameter("channel pool must be nonempty".into()));
        }
        if self.channel == ChannelSpec::Dephasing && (self.d1 != 2 || self.d2 != 2) {
            return Err(Error::InvalidParameter("dephasing channels act on qubits only".into()));
        }
        if let ChannelSpec::Random { env_dim: 0 } = self.channel {
            return Err(Error::InvalidParameter("environment dimension must be at least 1".into()));
        }
        Ok(())
    }
}

/// A channel together with its ε-certificate.
#[derive(Clone, Debug)]
pub struct CertifiedChannel {
    pub channel: QuantumChannel,
    pub certificate: EpsilonCertificate,
}

/// Builds a channel on dimension `d` whose certified ε is `epsilon`.
pub fn certified_channel(
    spec: ChannelSpec,
    d: usize,
    p: NormOrder,
    epsilon: f64,
    seed: u64,
    restarts: usize,
) -> Result<CertifiedChannel> {
    let search = EpsilonSearch { restarts, seed: derive_seed(seed, u64::MAX), ..EpsilonSearch::default() };
    match spec {
        ChannelSpec::Contraction => {
            let k = contraction_strength(d, p, epsilon)?;
            if k > 1.0 {
                return Err(Error::InvalidParameter(format!("epsilon {epsilon} needs contraction strength {k} > 1")));
            }
            let channel = depolarizing_contraction(d, k)?;
            let certificate = epsilon_of_channel(&channel, p, restarts)?;
            Ok(CertifiedChannel { channel, certificate })
        }
        ChannelSpec::Dephasing => {
            if d != 2 {
                return Err(Error::InvalidParameter("dephasing channels act on qubits only".into()));
            }
            // dephasing(t) acts as (1−t)·id + t·dephasing(1)
            let base = epsilon_of_channel_with(&dephasing(1.0)?, p, &search)?;
            let t = epsilon / base.epsilon;
            if t > 1.0 {
                return Err(Error::InvalidParameter(format!("epsilon {epsilon} exceeds full dephasing")));
            }
            let channel = dephasing(t)?;
            let certificate = base.scaled_for_mixture(&channel, t);
            Ok(CertifiedChannel { channel, certificate })
        }
        ChannelSpec::Random { env_dim } => {
            let base = random_channel(d, env_dim, seed)?;
            let cert = epsilon_of_channel_with(&base, p, &search)?;
            let t = epsilon / cert.epsilon;
            if t.is_nan() || t > 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "random channel moves states by at most {}, below epsilon {epsilon}",
                    cert.epsilon
                )));
            }
            let channel = base.mix_with_identity(t)?;
            let certificate = cert.scaled_for_mixture(&channel, t);
            Ok(CertifiedChannel { channel, certificate })
        }
    }
}

/// Channel pairs used by a configuration, in pool order.
pub fn channel_pairs(cfg: &ExperimentConfig) -> Result<Vec<(CertifiedChannel, CertifiedChannel)>> {
    use rayon::prelude::*;
    cfg.validate()?;
    let size = match cfg.channel {
        ChannelSpec::Random { .. } => cfg.channel_pool.min(cfg.trials),
        _ => 1,
    };
    (0..size as u64)
        .into_par_iter()
        .map(|i| {
            let a = certified_channel(cfg.channel, cfg.d1, cfg.p, cfg.epsilon, derive_seed(cfg.seed, 2 * i), cfg.certificate_restarts)?;
            let b = certified_channel(cfg.channel, cfg.d2, cfg.p, cfg.epsilon, derive_seed(cfg.seed, 2 * i + 1), cfg.certificate_restarts)?;
            Ok((a, b))
        })
        .collect()
}
