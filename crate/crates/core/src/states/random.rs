//! Random states and unitaries.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{vec_norm, ComplexMatrix, C64};
use crate::rng::rng_from_seed;
use crate::states::DensityOperator;

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re * h, im * h)
}

/// Haar-random unit vector: a normalized standard complex Gaussian vector.
pub fn random_state_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let n = vec_norm(&v);
        if n > 1e-300 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn random_pure_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityOperator> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("random state needs d >= 2, got {dim}")));
    }
    DensityOperator::pure(&random_state_vector(dim, rng))
}

/// Haar-random pure state, deterministic in `seed`.
pub fn random_pure(dim: usize, seed: u64) -> Result<DensityOperator> {
    random_pure_with(dim, &mut rng_from_seed(seed))
}

/// Haar-random unitary: Gram–Schmidt on the columns of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    random_isometry(dim, dim, rng)
}

/// `rows × cols` matrix with orthonormal columns (`cols ≤ rows`), Haar
/// distributed.
pub(crate) fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(cols <= rows);
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(cols);
    while columns.len() < cols {
        let mut v: Vec<C64> = (0..rows).map(|_| complex_gaussian(rng)).collect();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for q in &columns {
                let overlap: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= overlap * a;
                }
            }
        }
        let n = vec_norm(&v);
        if n > 1e-8 {
            columns.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let mut m = ComplexMatrix::zeros(rows, cols);
    for (j, col) in columns.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            m[(i, j)] = *z;
        }
    }
    m
}

/// `U₁ ⊗ U₂` with both factors Haar-random.
pub fn random_local_unitary<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> ComplexMatrix {
    let u1 = random_unitary(d1, rng);
    let u2 = random_unitary(d2, rng);
    u1.kron(&u2).expect("local dimensions within cap")
}

/// `ρ = GG†/Tr(GG†)` for a `dim × rank` Ginibre matrix `G`.
pub fn random_mixed<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Result<DensityOperator> {
    if dim < 2 || rank == 0 {
        return Err(Error::InvalidParameter("random mixed state needs d >= 2 and rank >= 1".into()));
    }
    let g = ComplexMatrix::from_vec(dim, rank, (0..dim * rank).map(|_| complex_gaussian(rng)).collect())?;
    let gg = g.matmul(&g.adjoint())?;
    let tr = gg.trace().re;
    Ok(DensityOperator::trusted(gg.scale_real(1.0 / tr)))
}

/// Product of two independent Haar-random pure states.
pub fn random_product_pure<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> Result<DensityOperator> {
    random_pure_with(d1, rng)?.tensor(&random_pure_with(d2, rng)?)
}

pub fn random_separable_with<R: Rng + ?Sized>(
    d1: usize,
    d2: usize,
    terms: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    if terms == 0 {
        return Err(Error::InvalidParameter("separable mixture needs at least one term".into()));
    }
    // Dirichlet(1, …, 1) weights from normalized exponentials.
    let raw: Vec<f64> = (0..terms).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    let dim = d1 * d2;
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for w in raw {
        let term = random_product_pure(d1, d2, rng)?;
        acc = &acc + &term.matrix().scale_real(w / total);
    }
    Ok(DensityOperator::trusted(acc))
}

/// Convex mixture of `terms` random pure product states with
/// Dirichlet-uniform weights.
pub fn random_separable(d1: usize, d2: usize, terms: usize, seed: u64) -> Result<DensityOperator> {
    random_separable_with(d1, d2, terms, &mut rng_from_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues_hermitian, partial_trace};

    #[test]
    fn pure_samples_are_projectors_and_reproducible() {
        for seed in 0..20 {
            let a = random_pure(3, seed).unwrap();
            assert!((a.purity() - 1.0).abs() < 1e-12);
            let b = random_pure(3, seed).unwrap();
            assert_eq!(a.matrix().as_slice(), b.matrix().as_slice());
        }
        assert!(random_pure(1, 0).is_err());
    }

    #[test]
    fn haar_mean_of_z_coordinate_vanishes() {
        // ⟨Tr(ρ σ_z/√2)⟩ over Haar pure qubits is zero; per-sample standard
        // deviation is 1/√6, so 0.007 is more than 5σ over 10⁵ samples.
        let mut rng = rng_from_seed(2024);
        let n = 100_000;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mean: f64 = (0..n)
            .map(|_| {
                let psi = random_state_vector(2, &mut rng);
                (psi[0].norm_sqr() - psi[1].norm_sqr()) * h
            })
            .sum::<f64>()
            / n as f64;
        assert!(mean.abs() < 0.007, "mean {mean}");
    }

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = rng_from_seed(9);
        for d in 1..6 {
            let u = random_unitary(d, &mut rng);
            let err = u.adjoint().matmul(&u).unwrap().max_abs_diff(&ComplexMatrix::identity(d));
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn separable_and_mixed_samples_are_states() {
        let mut rng = rng_from_seed(3);
        for terms in 1..5 {
            let rho = random_separable_with(2, 3, terms, &mut rng).unwrap();
            DensityOperator::new(rho.matrix().clone()).unwrap();
        }
        let one_term = random_separable(2, 2, 1, 11).unwrap();
        assert!((one_term.purity() - 1.0).abs() < 1e-12);
        let reduced = partial_trace(one_term.matrix(), &[2, 2], &[0]).unwrap();
        assert!((reduced.trace_product(&reduced).re - 1.0).abs() < 1e-12);

        let mixed = random_mixed(4, 2, &mut rng).unwrap();
        let eig = eigenvalues_hermitian(mixed.as_hermitian()).unwrap();
        assert!(eig[3].abs() < 1e-12 && eig[2].abs() < 1e-12 && eig[1] > 1e-6);
    }
}
