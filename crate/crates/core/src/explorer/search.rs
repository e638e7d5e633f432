use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{channel_pairs, CertifiedChannel, ExperimentConfig};
use crate::bounds::{classify, BoundReport, StateClass};
use crate::channels::apply_local;
use crate::error::Result;
use crate::linalg::{eig_hermitian, HermitianOperator};
use crate::matrix::{vec_kron, ComplexMatrix, C64, ZERO};
use crate::metrics::p_distance;
use crate::rng::trial_rng;
use crate::states::{schmidt_decompose, DensityOperator};
use crate::witness::concurrence;

/// Upper limit on restarts; larger `trials` values are clamped.
pub const MAX_SEARCH_RESTARTS: usize = 64;
const SWEEPS: usize = 400;
const INITIAL_STEP: f64 = 0.2;
const MIN_STEP: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSpace {
    /// All pure states.
    Entangled,
    /// Pure product states only.
    Product,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub report: BoundReport,
    pub schmidt_coefficients: Vec<f64>,
    /// Two-qubit concurrence of the best state, when defined.
    pub concurrence: Option<f64>,
    /// Best state, as `[re, im]` pairs.
    pub state: Vec<[f64; 2]>,
    pub restarts: usize,
    /// False if some restart ran out of sweeps before its step size
    /// settled.
    pub converged: bool,
}

/// Hermitian matrix from `d²` reals: diagonal, then real and imaginary
/// parts of the upper triangle.
fn hermitian_from(params: &[f64], d: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(d, d);
    let mut it = params.iter().copied();
    for i in 0..d {
        h[(i, i)] = C64::new(it.next().unwrap_or(0.0), 0.0);
    }
    for i in 0..d {
        for j in i + 1..d {
            let z = C64::new(it.next().unwrap_or(0.0), it.next().unwrap_or(0.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// `exp(iH)`.
fn unitary_from(params: &[f64], d: usize) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(&HermitianOperator::symmetrized(&hermitian_from(params, d))?)?;
    let mut u = ComplexMatrix::zeros(d, d);
    for (k, &lambda) in eig.values.iter().enumerate() {
        let v = eig.vector(k);
        let phase = C64::from_polar(1.0, lambda);
        for i in 0..d {
            for j in 0..d {
                u[(i, j)] += phase * v[i] * v[j].conj();
            }
        }
    }
    Ok(u)
}

struct Parameterization {
    d1: usize,
    d2: usize,
    schmidt: usize,
}

impl Parameterization {
    fn len(&self) -> usize {
        self.schmidt + self.d1 * self.d1 + self.d2 * self.d2
    }

    /// `Σₖ βₖ U₁|k⟩ ⊗ U₂|k⟩` with `β ∝ |x|`.
    fn state(&self, x: &[f64]) -> Result<Vec<C64>> {
        let (raw, rest) = x.split_at(self.schmidt);
        let (h1, h2) = rest.split_at(self.d1 * self.d1);
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let u1 = unitary_from(h1, self.d1)?;
        let u2 = unitary_from(h2, self.d2)?;
        let mut psi = vec![ZERO; self.d1 * self.d2];
        for (k, b) in raw.iter().enumerate() {
            let beta = if norm > 0.0 { b.abs() / norm } else if k == 0 { 1.0 } else { 0.0 };
            let a: Vec<C64> = (0..self.d1).map(|i| u1[(i, k)]).collect();
            let c: Vec<C64> = (0..self.d2).map(|i| u2[(i, k)]).collect();
            for (z, t) in psi.iter_mut().zip(vec_kron(&a, &c)) {
                *z += t * beta;
            }
        }
        Ok(psi)
    }
}

fn objective(cfg: &ExperimentConfig, pair: &(CertifiedChannel, CertifiedChannel), psi: &[C64]) -> Result<f64> {
    let rho = DensityOperator::pure(psi)?;
    let out = apply_local(&rho, &[cfg.d1, cfg.d2], &[(0, &pair.0.channel), (1, &pair.1.channel)])?;
    p_distance(&out, &rho, cfg.p)
}

struct Local {
    value: f64,
    x: Vec<f64>,
    converged: bool,
}

fn pattern_search(
    cfg: &ExperimentConfig,
    pair: &(CertifiedChannel, CertifiedChannel),
    shape: &Parameterization,
    mut x: Vec<f64>,
) -> Result<Local> {
    let mut value = objective(cfg, pair, &shape.state(&x)?)?;
    let mut step = INITIAL_STEP;
    for _ in 0..SWEEPS {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut trial = x.clone();
                trial[i] += dir * step;
                let v = objective(cfg, pair, &shape.state(&trial)?)?;
                if v > value {
                    value = v;
                    x = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < MIN_STEP {
                return Ok(Local { value, x, converged: true });
            }
        }
    }
    Ok(Local { value, x, converged: false })
}

pub fn violation_search(cfg: &ExperimentConfig) -> Result<SearchResult> {
    violation_search_in(cfg, SearchSpace::Entangled)
}

/// Multi-start maximization of the measured distance over pure states for
/// the first channel pair of `cfg`.
pub fn violation_search_in(cfg: &ExperimentConfig, space: SearchSpace) -> Result<SearchResult> {
    let pairs = channel_pairs(cfg)?;
    let pair = &pairs[0];
    let shape = Parameterization {
        d1: cfg.d1,
        d2: cfg.d2,
        schmidt: match space {
            SearchSpace::Entangled => cfg.d1.min(cfg.d2),
            SearchSpace::Product => 1,
        },
    };
    let restarts = cfg.trials.min(MAX_SEARCH_RESTARTS);
    let locals: Vec<Local> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i as u64);
            let x: Vec<f64> = (0..shape.len())
                .map(|j| if j < shape.schmidt { rng.random_range(0.05..1.0) } else { StandardNormal.sample(&mut rng) })
                .collect();
            pattern_search(cfg, pair, &shape, x)
        })
        .collect::<Result<_>>()?;
    let converged = locals.iter().all(|l| l.converged);
    let best = locals
        .into_iter()
        .reduce(|best, l| if l.value > best.value { l } else { best })
        .expect("at least one restart");

    let psi = shape.state(&best.x)?;
    let schmidt = schmidt_decompose(&psi, cfg.d1, cfg.d2)?;
    let class = if schmidt.rank() > 1 { StateClass::Entangled } else { StateClass::Product };
    let rho = DensityOperator::pure(&psi)?;
    let conc = if cfg.d1 == 2 && cfg.d2 == 2 { Some(concurrence(&rho)?) } else { None };
    Ok(SearchResult {
        report: classify(best.value, cfg.d1, cfg.d2, cfg.p, cfg.epsilon, class)?,
        schmidt_coefficients: schmidt.coefficients.clone(),
        concurrence: conc,
        state: psi.iter().map(|z| [z.re, z.im]).collect(),
        restarts,
        converged,
    })
}
