//! Completely positive trace-preserving maps in Kraus form.
//!
//! The Kraus list is the only stored representation. Affine Bloch
//! matrices, dyad deviations and ε-certificates are derived on demand.

mod epsilon;
mod local;

pub use epsilon::{
    contraction_epsilon, epsilon_objective, epsilon_of_channel, epsilon_of_channel_with,
    recognize_contraction, CertificateMethod, EpsilonCertificate, EpsilonSearch,
};
pub use local::{apply_local, apply_product, apply_on_subsystem};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::HermitianOperator;
use crate::matrix::{ComplexMatrix, C64, I, MAX_TOTAL_DIM, ONE};
use crate::rng::rng_from_seed;
use crate::states::{random_unitary, DensityOperator, GeneratorBasis};

/// Tolerance on `Σ K†K = I`.
pub const TRACE_PRESERVATION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidParameter("channel needs at least one Kraus operator".into()))?;
        let dim = first.require_square()?;
        if let Some(bad) = kraus.iter().find(|k| k.rows() != dim || k.cols() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator {}x{} in a channel of dimension {dim}",
                bad.rows(),
                bad.cols()
            )));
        }
        let ch = Self { dim, kraus };
        let deviation = ch.trace_preservation_error();
        if deviation > TRACE_PRESERVATION_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(ch)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Max entrywise deviation of `Σ K†K` from the identity.
    pub fn trace_preservation_error(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc = &acc + &k.adjoint().matmul(k).expect("square Kraus");
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, kraus: vec![ComplexMatrix::identity(dim)] }
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    fn check_operand(&self, x: &ComplexMatrix) -> Result<()> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operand for a channel of dimension {}",
                x.rows(),
                x.cols(),
                self.dim
            )));
        }
        Ok(())
    }

    /// `Σ K X K†` for an arbitrary square operand: the linear extension of
    /// the channel.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_operand(x)?;
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out = &out + &k.sandwich(x)?;
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        Ok(DensityOperator::trusted(self.apply_matrix(rho.matrix())?))
    }

    pub fn apply_hermitian(&self, h: &HermitianOperator) -> Result<HermitianOperator> {
        HermitianOperator::symmetrized(&self.apply_matrix(h.matrix())?)
    }

    /// Heisenberg-picture map `Σ K† X K`.
    pub fn apply_adjoint(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_operand(x)?;
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out = &out + &k.adjoint().matmul(x)?.matmul(k)?;
        }
        Ok(out)
    }

    /// Affine action on Bloch coordinates, `c ↦ T c + t`, in `basis`.
    pub fn bloch_affine(&self, basis: &GeneratorBasis) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
        if basis.dim() != self.dim {
            return Err(Error::DimensionMismatch("basis and channel dimensions differ".into()));
        }
        let mixed = ComplexMatrix::identity(self.dim).scale_real(1.0 / self.dim as f64);
        let image_of_mixed = self.apply_matrix(&mixed)?;
        let shift = basis.generators().iter().map(|g| g.matrix().trace_product(&image_of_mixed).re).collect();
        let images: Vec<ComplexMatrix> =
            basis.generators().iter().map(|g| self.apply_matrix(g.matrix())).collect::<Result<_>>()?;
        let linear = basis
            .generators()
            .iter()
            .map(|row| images.iter().map(|img| row.matrix().trace_product(img).re).collect())
            .collect();
        Ok((linear, shift))
    }

    /// `Λ = (1−t)·id + t·self`, realized with Kraus set `{√(1−t) I, √t Kᵢ}`.
    pub fn mix_with_identity(&self, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!("mixing weight {t} outside [0, 1]")));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() + 1);
        if t < 1.0 {
            kraus.push(ComplexMatrix::identity(self.dim).scale_real((1.0 - t).sqrt()));
        }
        if t > 0.0 {
            kraus.extend(self.kraus.iter().map(|k| k.scale_real(t.sqrt())));
        }
        Ok(Self { dim: self.dim, kraus })
    }

    /// Stable fingerprint of the Kraus data, used to tie certificates to
    /// channels.
    pub fn fingerprint(&self) -> u64 {
        // FNV-1a over the raw bits
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        feed(self.dim as u64);
        for k in &self.kraus {
            for z in k.as_slice() {
                feed(z.re.to_bits());
                feed(z.im.to_bits());
            }
        }
        h
    }
}

/// Tensor product channel: every product of component Kraus operators.
pub fn tensor_channels(chs: &[QuantumChannel]) -> Result<QuantumChannel> {
    let (first, rest) =
        chs.split_first().ok_or_else(|| Error::InvalidParameter("empty channel list".into()))?;
    let total: usize = chs.iter().try_fold(1usize, |acc, c| {
        acc.checked_mul(c.dim).filter(|&d| d <= MAX_TOTAL_DIM)
    })
    .ok_or(Error::DimensionOverflow { dim: usize::MAX, max: MAX_TOTAL_DIM })?;
    let mut kraus = first.kraus.clone();
    for ch in rest {
        let mut next = Vec::with_capacity(kraus.len() * ch.kraus.len());
        for a in &kraus {
            for b in &ch.kraus {
                next.push(a.kron(b)?);
            }
        }
        kraus = next;
    }
    Ok(QuantumChannel { dim: total, kraus })
}

/// Generalized Pauli (Weyl) operator `X^a Z^b`.
fn weyl(d: usize, a: usize, b: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        let phase = 2.0 * std::f64::consts::PI * (b * j) as f64 / d as f64;
        m[((j + a) % d, j)] = C64::from_polar(1.0, phase);
    }
    m
}

/// `ρ ↦ (1−k)ρ + k·I/d`, the white-noise contraction of the Bloch ball.
///
/// Kraus set: the `d²` Weyl operators, identity weighted by
/// `√(1 − k(d²−1)/d²)` and the rest by `√k/d`.
pub fn depolarizing_contraction(d: usize, k: f64) -> Result<QuantumChannel> {
    if d < 1 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::InvalidParameter(format!("contraction parameter {k} outside [0, 1]")));
    }
    let d2 = (d * d) as f64;
    let mut kraus = Vec::with_capacity(d * d);
    kraus.push(ComplexMatrix::identity(d).scale_real((1.0 - k * (d2 - 1.0) / d2).sqrt()));
    if k > 0.0 {
        let w = k.sqrt() / d as f64;
        for a in 0..d {
            for b in 0..d {
                if a == 0 && b == 0 {
                    continue;
                }
                kraus.push(weyl(d, a, b).scale_real(w));
            }
        }
    }
    QuantumChannel::new(kraus)
}

/// Qubit dephasing: `σ_z` component kept, `σ_x, σ_y` components scaled by
/// `1−k`.
pub fn dephasing(k: f64) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::InvalidParameter(format!("dephasing parameter {k} outside [0, 1]")));
    }
    let z = ComplexMatrix::from_diagonal(&[ONE, -ONE]);
    QuantumChannel::new(vec![
        ComplexMatrix::identity(2).scale_real((1.0 - k / 2.0).sqrt()),
        z.scale_real((k / 2.0).sqrt()),
    ])
}

/// Random channel from a Haar isometry `C^d → C^d ⊗ C^env` followed by a
/// partial trace over the environment.
pub fn random_channel_with<R: Rng + ?Sized>(d: usize, env_dim: usize, rng: &mut R) -> Result<QuantumChannel> {
    if d == 0 || env_dim == 0 {
        return Err(Error::InvalidParameter("dimensions must be positive".into()));
    }
    if d * env_dim > MAX_TOTAL_DIM {
        return Err(Error::DimensionOverflow { dim: d * env_dim, max: MAX_TOTAL_DIM });
    }
    let v = if env_dim == 1 {
        random_unitary(d, rng)
    } else {
        crate::states::random_isometry(d * env_dim, d, rng)
    };
    let kraus = (0..env_dim)
        .map(|e| {
            let mut k = ComplexMatrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    k[(i, j)] = v[(i * env_dim + e, j)];
                }
            }
            k
        })
        .collect();
    QuantumChannel::new(kraus)
}

pub fn random_channel(d: usize, env_dim: usize, seed: u64) -> Result<QuantumChannel> {
    random_channel_with(d, env_dim, &mut rng_from_seed(seed))
}

/// `V_kl = Λ[|k⟩⟨l|] − |k⟩⟨l|`.
///
/// The dyad is split as `|k⟩⟨l| = ½(X₊ + i·Y)` with Hermitian
/// `X₊ = |k⟩⟨l| + |l⟩⟨k|` and `Y = −i(|k⟩⟨l| − |l⟩⟨k|)`, and the channel is
/// only ever applied to Hermitian operators.
pub fn channel_deviation_on_dyad(ch: &QuantumChannel, k: usize, l: usize) -> Result<ComplexMatrix> {
    let d = ch.dim();
    for idx in [k, l] {
        if idx >= d {
            return Err(Error::IndexOutOfRange { index: idx, dim: d });
        }
    }
    let dyad = ComplexMatrix::unit(d, k, l);
    let image = if k == l {
        ch.apply_hermitian(&HermitianOperator::new(dyad.clone())?)?.into_matrix()
    } else {
        let flipped = ComplexMatrix::unit(d, l, k);
        let x_plus = HermitianOperator::new(&dyad + &flipped)?;
        let y = HermitianOperator::new((&dyad - &flipped).scale(-I))?;
        let a = ch.apply_hermitian(&x_plus)?.into_matrix();
        let b = ch.apply_hermitian(&y)?.into_matrix();
        (&a + &b.scale(I)).scale_real(0.5)
    };
    Ok(&image - &dyad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::schatten_p_norm;
    use crate::linalg::NormOrder;
    use crate::rng::rng_from_seed;
    use crate::states::{bell_state, gellmann_basis, random_pure, random_pure_with, to_bloch};
    use crate::witness::pauli_coefficients;

    #[test]
    fn identity_channel_is_identity() {
        let rho = random_pure(3, 1).unwrap();
        let out = QuantumChannel::identity(3).apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        for k in 0..3 {
            for l in 0..3 {
                let v = channel_deviation_on_dyad(&QuantumChannel::identity(3), k, l).unwrap();
                assert!(v.max_abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_non_trace_preserving() {
        let k = ComplexMatrix::identity(2).scale_real(0.9);
        assert!(matches!(QuantumChannel::new(vec![k]), Err(Error::NotTracePreserving { .. })));
        assert!(QuantumChannel::new(vec![]).is_err());
        assert!(QuantumChannel::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]).is_err());
    }

    #[test]
    fn contraction_parameters() {
        assert!(depolarizing_contraction(2, -0.1).is_err());
        assert!(depolarizing_contraction(2, 1.1).is_err());
        assert!(dephasing(1.5).is_err());
        // k = 0 is the identity map
        let rho = random_pure(4, 3).unwrap();
        let out = depolarizing_contraction(4, 0.0).unwrap().apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-14);
    }

    #[test]
    fn full_contraction_and_fixed_point() {
        for d in 2..=4 {
            let full = depolarizing_contraction(d, 1.0).unwrap();
            let mixed = DensityOperator::maximally_mixed(d);
            for seed in 0..5 {
                let out = full.apply(&random_pure(d, seed).unwrap()).unwrap();
                assert!(out.matrix().max_abs_diff(mixed.matrix()) < 1e-14);
            }
            let partial = depolarizing_contraction(d, 0.37).unwrap();
            assert!(partial.apply(&mixed).unwrap().matrix().max_abs_diff(mixed.matrix()) < 1e-15);
        }
    }

    #[test]
    fn contraction_scales_bloch_vector() {
        let k = 0.2;
        let ch = depolarizing_contraction(2, k).unwrap();
        let basis = gellmann_basis(2).unwrap();
        let mut rng = rng_from_seed(4);
        for _ in 0..10 {
            let rho = random_pure_with(2, &mut rng).unwrap();
            let before = to_bloch(&rho, &basis).unwrap();
            let after = to_bloch(&ch.apply(&rho).unwrap(), &basis).unwrap();
            for (a, b) in before.coeffs().iter().zip(after.coeffs()) {
                assert!((b - (1.0 - k) * a).abs() < 1e-14);
            }
        }
        let (t, shift) = ch.bloch_affine(&basis).unwrap();
        for (i, row) in t.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 1.0 - k } else { 0.0 };
                assert!((v - want).abs() < 1e-14);
            }
        }
        assert!(shift.iter().all(|s| s.abs() < 1e-15));
    }

    #[test]
    fn dephasing_keeps_diagonal_and_damps_coherences() {
        let k = 0.3;
        let ch = dephasing(k).unwrap();
        let diag = DensityOperator::new(ComplexMatrix::from_real(2, 2, &[0.8, 0.0, 0.0, 0.2]).unwrap()).unwrap();
        assert!(ch.apply(&diag).unwrap().matrix().max_abs_diff(diag.matrix()) < 1e-15);
        let plus = DensityOperator::new(ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap()).unwrap();
        let out = ch.apply(&plus).unwrap();
        assert!((out.matrix()[(0, 1)].re - 0.5 * (1.0 - k)).abs() < 1e-15);
        assert!((out.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tensor_channels_factorize() {
        let id = tensor_channels(&[QuantumChannel::identity(2), QuantumChannel::identity(3)]).unwrap();
        let rho = random_pure(6, 8).unwrap();
        assert!(id.apply(&rho).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-15);

        let a = random_channel(2, 2, 1).unwrap();
        let b = random_channel(3, 3, 2).unwrap();
        let ab = tensor_channels(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(ab.kraus().len(), 6);
        assert!(ab.trace_preservation_error() < 1e-12);
        let r1 = random_pure(2, 3).unwrap();
        let r2 = random_pure(3, 4).unwrap();
        let lhs = ab.apply(&r1.tensor(&r2).unwrap()).unwrap();
        let rhs = a.apply(&r1).unwrap().tensor(&b.apply(&r2).unwrap()).unwrap();
        assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-12);
    }

    #[test]
    fn contraction_pair_scales_bell_correlations() {
        let (k1, k2) = (0.1, 0.25);
        let pair = tensor_channels(&[
            depolarizing_contraction(2, k1).unwrap(),
            depolarizing_contraction(2, k2).unwrap(),
        ])
        .unwrap();
        let out = pauli_coefficients(&pair.apply(&bell_state()).unwrap()).unwrap();
        for j in 0..3 {
            for l in 0..3 {
                let want = if j == l { -(1.0 - k1) * (1.0 - k2) } else { 0.0 };
                assert!((out.gamma[j][l] - want).abs() < 1e-14);
            }
            assert!(out.alpha[j].abs() < 1e-15 && out.beta[j].abs() < 1e-15);
        }
    }

    #[test]
    fn random_channels_are_valid_and_reproducible() {
        for env in 1..=4 {
            let ch = random_channel(3, env, 77).unwrap();
            assert_eq!(ch.kraus().len(), env);
            assert!(ch.trace_preservation_error() < 1e-10);
            assert_eq!(ch, random_channel(3, env, 77).unwrap());
        }
        let u = random_channel(3, 1, 5).unwrap();
        let k = &u.kraus()[0];
        assert!(k.matmul(&k.adjoint()).unwrap().max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn dyad_deviation_matches_direct_kraus_action() {
        let ch = random_channel(3, 2, 12).unwrap();
        for k in 0..3 {
            for l in 0..3 {
                let v = channel_deviation_on_dyad(&ch, k, l).unwrap();
                let dyad = ComplexMatrix::unit(3, k, l);
                let direct = &ch.apply_matrix(&dyad).unwrap() - &dyad;
                assert!(v.max_abs_diff(&direct) < 1e-14);
                let v_lk = channel_deviation_on_dyad(&ch, l, k).unwrap();
                assert!(v_lk.max_abs_diff(&v.adjoint()) < 1e-14);
            }
        }
        assert!(channel_deviation_on_dyad(&ch, 3, 0).is_err());
    }

    #[test]
    fn contraction_dyad_deviation() {
        let k = 0.3;
        let v = channel_deviation_on_dyad(&depolarizing_contraction(2, k).unwrap(), 0, 0).unwrap();
        // linearity: Λ[|0⟩⟨0|] − |0⟩⟨0| = −k(|0⟩⟨0| − I/2)
        let want = ComplexMatrix::from_real(2, 2, &[-k * 0.5, 0.0, 0.0, k * 0.5]).unwrap();
        assert!(v.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn mixing_with_identity_scales_deviation() {
        let r = random_channel(2, 3, 4).unwrap();
        let t = 0.2;
        let m = r.mix_with_identity(t).unwrap();
        assert!(m.trace_preservation_error() < 1e-12);
        let rho = random_pure(2, 6).unwrap();
        let full = schatten_p_norm(&(r.apply(&rho).unwrap().matrix() - rho.matrix()), NormOrder::TRACE).unwrap();
        let part = schatten_p_norm(&(m.apply(&rho).unwrap().matrix() - rho.matrix()), NormOrder::TRACE).unwrap();
        assert!((part - t * full).abs() < 1e-13);
    }
}
