//! ε-certificates: the largest p-distance a channel moves any state.
//!
//! The objective `ρ ↦ ‖Λ[ρ] − ρ‖_p` is convex, so its maximum over states
//! is attained on pure states. White-noise contractions have a closed
//! form; every other channel goes through a multi-start search over pure
//! states. Each start is improved by linearization ascent (move to the
//! top eigenvector of the objective's gradient, which never decreases a
//! convex objective) and then polished by coordinate pattern search on the
//! real and imaginary parts of the state vector.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, eigenvalues_hermitian, HermitianOperator, NormOrder};
use crate::matrix::{vec_norm, ComplexMatrix, C64, ONE, ZERO};
use crate::rng::trial_rng;
use crate::states::random_state_vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMethod {
    ClosedForm,
    Optimized,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonCertificate {
    /// [`QuantumChannel::fingerprint`] of the certified channel.
    pub channel_id: u64,
    pub p: NormOrder,
    pub epsilon: f64,
    pub method: CertificateMethod,
    /// A pure state attaining `epsilon`.
    pub state: Vec<C64>,
    /// False when the search ran out of budget before its local
    /// refinements settled; `epsilon` is then only the best value found.
    pub converged: bool,
}

impl EpsilonCertificate {
    /// Certificate for `(1−t)·id + t·Λ`, whose deviation map is `t` times
    /// that of `Λ`.
    pub fn scaled_for_mixture(&self, mixed: &QuantumChannel, t: f64) -> Self {
        Self { channel_id: mixed.fingerprint(), epsilon: self.epsilon * t, ..self.clone() }
    }
}

/// Search budget for optimized certificates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSearch {
    pub restarts: usize,
    /// Pattern-search sweeps per restart.
    pub steps: usize,
    pub seed: u64,
    /// Also start from basis states and the superpositions
    /// `(|k⟩ ± |l⟩)/√2`, `(|k⟩ ± i|l⟩)/√2`.
    pub structured_starts: bool,
}

impl Default for EpsilonSearch {
    fn default() -> Self {
        Self { restarts: 64, steps: 200, seed: 0x5eed, structured_starts: true }
    }
}

const ASCENT_ITERATIONS: usize = 100;
const PATTERN_INITIAL_STEP: f64 = 0.05;
const PATTERN_MIN_STEP: f64 = 1e-9;

/// ε of `ρ ↦ (1−k)ρ + k·I/d` in the p-norm: `k‖ψψ† − I/d‖_p`, i.e.
/// `k[(1−1/d)ᵖ + (d−1)/dᵖ]^(1/p)`.
pub fn contraction_epsilon(d: usize, k: f64, p: NormOrder) -> f64 {
    let d = d as f64;
    match p {
        NormOrder::Infinity => k * (1.0 - 1.0 / d).max(1.0 / d),
        NormOrder::Finite(q) => {
            let q = f64::from(q);
            k * ((1.0 - 1.0 / d).powf(q) + (d - 1.0) / d.powf(q)).powf(1.0 / q)
        }
    }
}

/// Returns `k` when the channel acts as `ρ ↦ (1−k)ρ + k·I/d` on every matrix
/// unit, to within 1e-12.
pub fn recognize_contraction(ch: &QuantumChannel) -> Option<f64> {
    let d = ch.dim();
    if d < 2 {
        return None;
    }
    let k = 1.0 - ch.apply_matrix(&ComplexMatrix::unit(d, 0, 1)).ok()?[(0, 1)].re;
    if !(-1e-12..=1.0 + 1e-12).contains(&k) {
        return None;
    }
    let k = k.clamp(0.0, 1.0);
    for i in 0..d {
        for j in 0..d {
            let unit = ComplexMatrix::unit(d, i, j);
            let mut want = unit.scale_real(1.0 - k);
            if i == j {
                want = &want + &ComplexMatrix::identity(d).scale_real(k / d as f64);
            }
            if ch.apply_matrix(&unit).ok()?.max_abs_diff(&want) > 1e-12 {
                return None;
            }
        }
    }
    Some(k)
}

/// `Λ[ψψ†] − ψψ†` for a unit vector, via `Σ (Kψ)(Kψ)†`.
fn pure_deviation(ch: &QuantumChannel, psi: &[C64]) -> ComplexMatrix {
    let d = psi.len();
    let mut out = ComplexMatrix::outer(psi, psi).scale_real(-1.0);
    for k in ch.kraus() {
        let phi = k.matvec(psi).expect("dimension checked by caller");
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] += phi[i] * phi[j].conj();
            }
        }
    }
    out
}

fn deviation_norm(delta: &ComplexMatrix, p: NormOrder) -> f64 {
    if p == NormOrder::HILBERT_SCHMIDT {
        return delta.frobenius_norm();
    }
    let h = HermitianOperator::symmetrized(delta).expect("square");
    eigenvalues_hermitian(&h).map(|v| p.combine(v.into_iter().map(f64::abs))).unwrap_or(0.0)
}

/// `‖Λ[ψψ†] − ψψ†‖_p` for a unit vector `ψ`.
pub fn epsilon_objective(ch: &QuantumChannel, psi: &[C64], p: NormOrder) -> Result<f64> {
    if psi.len() != ch.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of length {} for a channel of dimension {}",
            psi.len(),
            ch.dim()
        )));
    }
    let n = vec_norm(psi);
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("state vector has norm {n}")));
    }
    Ok(deviation_norm(&pure_deviation(ch, psi), p))
}

/// Gradient direction of `Tr|Δ|ᵖ` with respect to `Δ` (up to a positive
/// factor): `Σ sign(λ)|λ|^(p−1) vv†`.
fn norm_gradient(delta: &ComplexMatrix, p: NormOrder) -> ComplexMatrix {
    if p == NormOrder::HILBERT_SCHMIDT {
        return delta.clone();
    }
    let h = HermitianOperator::symmetrized(delta).expect("square");
    let Ok(eig) = eig_hermitian(&h) else {
        return delta.clone();
    };
    match p {
        NormOrder::Infinity => {
            let idx = if eig.values[0].abs() >= eig.values[eig.values.len() - 1].abs() {
                0
            } else {
                eig.values.len() - 1
            };
            let sign = eig.values[idx].signum();
            let v = eig.vector(idx);
            ComplexMatrix::outer(&v, &v).scale_real(sign)
        }
        NormOrder::Finite(q) => {
            let q = f64::from(q);
            eig.reconstruct_with(|x| if x == 0.0 { 0.0 } else { x.signum() * x.abs().powf(q - 1.0) })
        }
    }
}

fn normalize(v: Vec<C64>) -> Option<Vec<C64>> {
    let n = vec_norm(&v);
    (n > 1e-300).then(|| v.into_iter().map(|z| z / n).collect())
}

struct LocalResult {
    value: f64,
    state: Vec<C64>,
    converged: bool,
}

fn refine(ch: &QuantumChannel, start: Vec<C64>, p: NormOrder, steps: usize) -> LocalResult {
    let mut psi = start;
    let mut value = deviation_norm(&pure_deviation(ch, &psi), p);

    // linearization ascent
    let mut ascent_settled = false;
    for _ in 0..ASCENT_ITERATIONS {
        let delta = pure_deviation(ch, &psi);
        let w = norm_gradient(&delta, p);
        let g = match ch.apply_adjoint(&w) {
            Ok(adj) => &adj - &w,
            Err(_) => break,
        };
        let Ok(eig) = eig_hermitian(&HermitianOperator::symmetrized(&g).expect("square")) else {
            break;
        };
        let candidate = eig.vector(0);
        let candidate_value = deviation_norm(&pure_deviation(ch, &candidate), p);
        if candidate_value <= value * (1.0 + 1e-14) + 1e-300 {
            ascent_settled = true;
            break;
        }
        psi = candidate;
        value = candidate_value;
    }

    // coordinate pattern search on (Re ψ, Im ψ)
    let d = psi.len();
    let mut params: Vec<f64> = psi.iter().flat_map(|z| [z.re, z.im]).collect();
    let to_state = |x: &[f64]| normalize(x.chunks(2).map(|c| C64::new(c[0], c[1])).collect());
    let mut step = PATTERN_INITIAL_STEP;
    let mut pattern_settled = false;
    for _ in 0..steps {
        let mut improved = false;
        for coord in 0..2 * d {
            for dir in [1.0, -1.0] {
                let mut trial = params.clone();
                trial[coord] += dir * step;
                let Some(state) = to_state(&trial) else { continue };
                let v = deviation_norm(&pure_deviation(ch, &state), p);
                if v > value {
                    value = v;
                    params = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < PATTERN_MIN_STEP {
                pattern_settled = true;
                break;
            }
        }
    }
    let state = to_state(&params).expect("nonzero parameters");
    LocalResult { value, state, converged: ascent_settled || pattern_settled }
}

fn structured_starts(d: usize) -> Vec<Vec<C64>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut starts = Vec::new();
    for k in 0..d {
        let mut v = vec![ZERO; d];
        v[k] = ONE;
        starts.push(v);
    }
    for k in 0..d {
        for l in k + 1..d {
            for phase in [ONE, -ONE, C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
                let mut v = vec![ZERO; d];
                v[k] = C64::new(h, 0.0);
                v[l] = phase * h;
                starts.push(v);
            }
        }
    }
    starts
}

/// Certificate with the default search budget and `budget` random restarts.
pub fn epsilon_of_channel(ch: &QuantumChannel, p: NormOrder, budget: usize) -> Result<EpsilonCertificate> {
    epsilon_of_channel_with(ch, p, &EpsilonSearch { restarts: budget, ..EpsilonSearch::default() })
}

pub fn epsilon_of_channel_with(
    ch: &QuantumChannel,
    p: NormOrder,
    search: &EpsilonSearch,
) -> Result<EpsilonCertificate> {
    if search.restarts == 0 && !search.structured_starts {
        return Err(Error::InvalidParameter("search budget must allow at least one start".into()));
    }
    let d = ch.dim();
    let channel_id = ch.fingerprint();
    if let Some(k) = recognize_contraction(ch) {
        let mut state = vec![ZERO; d];
        state[0] = ONE;
        return Ok(EpsilonCertificate {
            channel_id,
            p,
            epsilon: contraction_epsilon(d, k, p),
            method: CertificateMethod::ClosedForm,
            state,
            converged: true,
        });
    }
    let mut starts = if search.structured_starts { structured_starts(d) } else { Vec::new() };
    starts.extend((0..search.restarts).map(|i| random_state_vector(d, &mut trial_rng(search.seed, i as u64))));

    let results: Vec<LocalResult> =
        starts.into_par_iter().map(|s| refine(ch, s, p, search.steps)).collect();
    // first maximum in start order, independent of scheduling
    let best = results
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .expect("at least one start");
    Ok(EpsilonCertificate {
        channel_id,
        p,
        epsilon: best.value,
        method: CertificateMethod::Optimized,
        state: best.state,
        converged: best.converged,
    })
}
