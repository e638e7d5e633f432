use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    classify, contraction_strength, multi_channel_bound, multi_channel_separable_bound, BoundReport, StateClass,
};
use crate::channels::{apply_local, dephasing, depolarizing_contraction, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::NormOrder;
use crate::matrix::vec_kron;
use crate::metrics::{hs_distance, p_distance};
use crate::rng::trial_rng;
use crate::states::{
    basis_vector, bell_state, ghz_state, random_local_unitary, random_state_vector, singlet_vector, DensityOperator,
    MAX_GHZ_QUBITS,
};
use crate::witness::{concurrence, witness_value};

fn qubit_contraction_strength(epsilon: f64) -> Result<f64> {
    let k = 2f64.sqrt() * epsilon;
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} gives k = √2ε outside [0, 1]")));
    }
    Ok(k)
}

/// Applies `ch` to every qubit of an `n`-qubit state.
fn on_every_qubit(rho: &DensityOperator, n: usize, ch: &QuantumChannel) -> Result<DensityOperator> {
    let dims = vec![2; n];
    let ops: Vec<(usize, &QuantumChannel)> = (0..n).map(|i| (i, ch)).collect();
    apply_local(rho, &dims, &ops)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellExample {
    pub k: f64,
    pub report: BoundReport,
    /// `(k + k′ − kk′)·√3/2` with `k = k′`.
    pub closed_form: f64,
    /// `√6·ε`.
    pub first_order: f64,
}

/// Two qubit contractions with `k = √2ε` acting on the singlet.
pub fn bell_example(epsilon: f64) -> Result<BellExample> {
    if !(0.0..=0.1).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside [0, 0.1]")));
    }
    let k = qubit_contraction_strength(epsilon)?;
    let ch = depolarizing_contraction(2, k)?;
    let rho = bell_state();
    let out = apply_local(&rho, &[2, 2], &[(0, &ch), (1, &ch)])?;
    let measured = hs_distance(&out, &rho)?;
    Ok(BellExample {
        k,
        report: classify(measured, 2, 2, NormOrder::HILBERT_SCHMIDT, epsilon, StateClass::Entangled)?,
        closed_form: (2.0 * k - k * k) * 3f64.sqrt() / 2.0,
        first_order: 6f64.sqrt() * epsilon,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhzDecay {
    pub n: usize,
    pub epsilon: f64,
    pub k: f64,
    pub exact: f64,
    /// `√(½[1 + (1−k)^{2N} − 2(1−k)^N])`.
    pub closed_form: f64,
    /// `N·ε`.
    pub first_order: f64,
    pub multi_channel_bound: f64,
}

/// Dephasing with `k = √2ε` on every qubit of GHZ(n).
pub fn ghz_decay(n: usize, epsilon: f64) -> Result<GhzDecay> {
    if !(1..=MAX_GHZ_QUBITS).contains(&n) {
        return Err(Error::InvalidParameter(format!("GHZ register size {n} outside 1..={MAX_GHZ_QUBITS}")));
    }
    let k = qubit_contraction_strength(epsilon)?;
    let rho = ghz_state(n)?;
    let out = on_every_qubit(&rho, n, &dephasing(k)?)?;
    let q = (1.0 - k).powi(n as i32);
    Ok(GhzDecay {
        n,
        epsilon,
        k,
        exact: hs_distance(&out, &rho)?,
        closed_form: (0.5 * (1.0 + q * q - 2.0 * q)).max(0.0).sqrt(),
        first_order: n as f64 * epsilon,
        multi_channel_bound: multi_channel_bound(n, 2, epsilon)?,
    })
}

/// Calibrated contractions on `|00⟩⟨00|`.
pub fn saturation_experiment(d1: usize, d2: usize, p: NormOrder, epsilon: f64) -> Result<BoundReport> {
    if !(0.0..=0.01).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside [0, 0.01]")));
    }
    let a = depolarizing_contraction(d1, contraction_strength(d1, p, epsilon)?)?;
    let b = depolarizing_contraction(d2, contraction_strength(d2, p, epsilon)?)?;
    let rho = DensityOperator::basis(d1 * d2, 0)?;
    let out = apply_local(&rho, &[d1, d2], &[(0, &a), (1, &b)])?;
    classify(p_distance(&out, &rho, p)?, d1, d2, p, epsilon, StateClass::Product)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellPairs {
    pub pairs: usize,
    pub qubits: usize,
    pub epsilon: f64,
    pub k: f64,
    pub measured: f64,
    /// `N·ε`, the bound for separable inputs.
    pub separable_companion: f64,
    pub multi_channel_bound: f64,
    pub exceeds_separable_companion: bool,
    pub violates_multi_channel_bound: bool,
}

/// Singlet pairs with a `k = √2ε` contraction on every qubit.
pub fn bell_pairs(pairs: usize, epsilon: f64) -> Result<BellPairs> {
    let qubits = 2 * pairs;
    if pairs == 0 || qubits > MAX_GHZ_QUBITS {
        return Err(Error::InvalidParameter(format!("pair count {pairs} outside 1..={}", MAX_GHZ_QUBITS / 2)));
    }
    let k = qubit_contraction_strength(epsilon)?;
    let rho = DensityOperator::tensor_all(&vec![bell_state(); pairs])?;
    let out = on_every_qubit(&rho, qubits, &depolarizing_contraction(2, k)?)?;
    let measured = hs_distance(&out, &rho)?;
    let separable_companion = multi_channel_separable_bound(qubits, epsilon)?;
    let bound = multi_channel_bound(qubits, 2, epsilon)?;
    Ok(BellPairs {
        pairs,
        qubits,
        epsilon,
        k,
        measured,
        separable_companion,
        multi_channel_bound: bound,
        exceeds_separable_companion: measured > separable_companion + crate::bounds::VIOLATION_SLACK,
        violates_multi_channel_bound: measured > bound + crate::bounds::VIOLATION_SLACK,
    })
}

#[derive(Clone, Debug)]
pub struct UndetectedEntangled {
    pub trial: usize,
    pub state: DensityOperator,
    pub witness: f64,
    pub concurrence: f64,
}

/// Looks for a two-qubit state with positive concurrence but vanishing
/// witness value among mixtures `q·ψψ† + (1−q)·φφ†` of an entangled `ψ`
/// and a product `φ`. Even trials use a locally rotated singlet and
/// `|00⟩`, odd trials fully random pairs.
pub fn undetected_entangled_search(seed: u64, trials: usize) -> Result<Option<UndetectedEntangled>> {
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let q: f64 = rng.random_range(0.0..1.0);
        let (psi, phi) = if trial % 2 == 0 {
            let u = random_local_unitary(2, 2, &mut rng);
            (u.matvec(&singlet_vector())?, u.matvec(&basis_vector(4, 0))?)
        } else {
            let psi = random_state_vector(4, &mut rng);
            let a = random_state_vector(2, &mut rng);
            let b = random_state_vector(2, &mut rng);
            (psi, vec_kron(&a, &b))
        };
        let rho = DensityOperator::mixture(&[q, 1.0 - q], &[DensityOperator::pure(&psi)?, DensityOperator::pure(&phi)?])?;
        let c = concurrence(&rho)?;
        let f = witness_value(&rho)?;
        if c > 1e-6 && f.abs() <= 1e-9 {
            return Ok(Some(UndetectedEntangled { trial, state: rho, witness: f, concurrence: c }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{saturation_first_order, separable_bound_hs};

    #[test]
    fn bell_example_values() {
        let eps = 0.01;
        let b = bell_example(eps).unwrap();
        // (2k − k²)·√3/2 with k = √2·0.01
        let k = 2f64.sqrt() * eps;
        assert!((b.closed_form - (2.0 * k - k * k) * 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((b.report.measured_distance - b.closed_form).abs() < 1e-12);
        assert!((b.first_order - 0.024_494_897_427_831_78).abs() < 1e-12);
        assert!(b.report.violates_separable && !b.report.violates_entangled);
        let tiny = bell_example(1e-6).unwrap();
        assert!((tiny.report.measured_distance / tiny.first_order - 1.0).abs() < 1e-5);
        assert!(bell_example(0.2).is_err());
    }

    #[test]
    fn ghz_decay_matches_closed_form() {
        for n in 1..=6 {
            let g = ghz_decay(n, 0.01).unwrap();
            assert!((g.exact - g.closed_form).abs() < 1e-12, "n = {n}");
        }
        assert_eq!(ghz_decay(3, 0.0).unwrap().exact, 0.0);
        let g = ghz_decay(10, 0.001).unwrap();
        assert!((g.exact / g.first_order - 1.0).abs() < 0.02);
        assert!(ghz_decay(0, 0.01).is_err());
        assert!(ghz_decay(2, 1.0).is_err());
    }

    #[test]
    fn saturation_reaches_the_first_order_values() {
        let eps = 0.001;
        for (d1, d2) in [(2, 2), (2, 3), (3, 3)] {
            for p in [NormOrder::TRACE, NormOrder::HILBERT_SCHMIDT, NormOrder::Finite(3)] {
                let r = saturation_experiment(d1, d2, p, eps).unwrap();
                let want = saturation_first_order(d1, d2, p, eps).unwrap();
                assert!((r.measured_distance - want).abs() < 10.0 * eps * eps, "{d1}x{d2} p={p}");
            }
        }
        let r = saturation_experiment(2, 2, NormOrder::HILBERT_SCHMIDT, eps).unwrap();
        assert!((r.separable_bound - separable_bound_hs(2, 2, eps).unwrap()).abs() < 1e-15);
        assert_eq!(saturation_experiment(2, 2, NormOrder::TRACE, 0.0).unwrap().measured_distance, 0.0);
    }

    #[test]
    fn one_bell_pair_reproduces_the_bell_example() {
        let eps = 0.01;
        let one = bell_pairs(1, eps).unwrap();
        assert!((one.measured - bell_example(eps).unwrap().report.measured_distance).abs() < 1e-14);
        assert!(one.exceeds_separable_companion && !one.violates_multi_channel_bound);
        let two = bell_pairs(2, eps).unwrap();
        assert!(!two.violates_multi_channel_bound);
    }

    #[test]
    fn finds_an_undetected_entangled_state() {
        let found = undetected_entangled_search(3, 200).unwrap().expect("search budget");
        assert!(found.concurrence > 1e-6);
        assert!(found.witness.abs() <= 1e-9);
    }
}
