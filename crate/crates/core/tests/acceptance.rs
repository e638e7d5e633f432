//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails, including on its wall-clock limit.
//!
//! Expected values are computed here from their closed forms rather than
//! taken from the library.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use localchan::bounds::StateClass;
use localchan::channels::{
    apply_on_subsystem, channel_deviation_on_dyad, epsilon_of_channel, random_channel, random_channel_with,
    QuantumChannel,
};
use localchan::explorer::{
    bell_example, certified_channel, ghz_decay, saturation_experiment, separable_sweep, summarize,
    undetected_entangled_search, universal_sweep, ChannelSpec, ExperimentConfig,
};
use localchan::linalg::NormOrder;
use localchan::matrix::{ComplexMatrix, C64};
use localchan::metrics::p_distance;
use localchan::rng::{rng_from_seed, trial_rng};
use localchan::states::{
    random_local_unitary, random_mixed, random_separable_with, random_state_vector, schmidt_decompose, werner_state,
    DensityOperator,
};
use localchan::witness::{concurrence, witness_value};
use rand::Rng as _;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn sqrt(x: f64) -> f64 {
    x.sqrt()
}

fn criterion_1() -> Outcome {
    let eps = 0.01;
    let k = sqrt(2.0) * eps;
    let closed = (k + k - k * k) * sqrt(3.0) / 2.0;
    let b = bell_example(eps).unwrap();
    let d = b.report.measured_distance;
    let err_exact = (d - closed).abs();
    let err_first = (d - sqrt(6.0) * eps).abs();
    check(
        err_exact < 1e-12 && err_first < 10.0 * eps * eps && b.report.violates_separable && !b.report.violates_entangled,
        format!("distance {d:.12}, |d - exact| = {err_exact:.1e}, |d - sqrt(6) eps| = {err_first:.1e}"),
    )
}

const GRID: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 3), (4, 4)];

fn criterion_2() -> Outcome {
    let eps = 0.001;
    let mut worst: f64 = 0.0;
    for (d1, d2) in GRID {
        let r = saturation_experiment(d1, d2, NormOrder::TRACE, eps).unwrap();
        worst = worst.max((r.measured_distance - 2.0 * eps).abs());
    }
    check(worst <= 10.0 * eps * eps, format!("max |d - 2 eps| = {worst:.3e} (tolerance {:.0e})", 10.0 * eps * eps))
}

fn criterion_3() -> Outcome {
    let eps = 0.001;
    let mut worst: f64 = 0.0;
    for (d1, d2) in GRID {
        let a = (1.0 - 1.0 / d1 as f64) * (1.0 - 1.0 / d2 as f64);
        let want = sqrt(2.0 + 2.0 * sqrt(a)) * eps;
        let r = saturation_experiment(d1, d2, NormOrder::HILBERT_SCHMIDT, eps).unwrap();
        worst = worst.max((r.measured_distance - want).abs());
    }
    check(worst <= 10.0 * eps * eps, format!("max deviation from first order {worst:.3e}"))
}

fn criterion_4() -> Outcome {
    let cfg = ExperimentConfig { trials: 10_000, seed: 4, ..ExperimentConfig::default() };
    let bound = sqrt(3.0) * cfg.epsilon;
    let cert_a = certified_channel(ChannelSpec::Contraction, 2, cfg.p, cfg.epsilon, 0, 64).unwrap();
    let certified = (cert_a.certificate.epsilon - cfg.epsilon).abs() < 1e-15;
    let reports = separable_sweep(&cfg).unwrap();
    let violations = reports.iter().filter(|r| r.measured_distance > bound + 1e-9).count();
    let flagged = summarize(&reports).separable_violations;
    let all_separable = reports.iter().all(|r| r.state_class.is_separable());
    let max = reports.iter().map(|r| r.measured_distance).fold(0.0, f64::max);
    check(
        certified && violations == 0 && flagged == 0 && all_separable && reports.len() == 10_000,
        format!("{} states, {violations} violations, max distance / bound = {:.4}", reports.len(), max / bound),
    )
}

fn criterion_5() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for d in [2usize, 3] {
        let cfg = ExperimentConfig {
            trials: 10_000,
            d1: d,
            d2: d,
            seed: 5,
            channel: ChannelSpec::Random { env_dim: d },
            channel_pool: 16,
            certificate_restarts: 64,
            ..ExperimentConfig::default()
        };
        let bound = 2.0 * sqrt(2.0 - 1.0 / d as f64) * cfg.epsilon;
        let reports = universal_sweep(&cfg).unwrap();
        let violations = reports.iter().filter(|r| r.measured_distance > bound + 1e-9).count();
        let entangled = reports.iter().filter(|r| r.state_class == StateClass::Entangled).count();
        let max = reports.iter().map(|r| r.measured_distance).fold(0.0, f64::max);
        ok &= violations == 0 && summarize(&reports).entangled_violations == 0 && reports.len() == 10_000;
        details.push(format!("d={d}: {violations} violations, {entangled} entangled inputs, max/bound {:.4}", max / bound));
    }
    check(ok, details.join("; "))
}

fn criterion_6() -> Outcome {
    let mut worst_exact: f64 = 0.0;
    for n in 1..=10 {
        let eps = 0.01;
        let k = sqrt(2.0) * eps;
        let q = (1.0 - k).powi(n as i32);
        let closed = sqrt(0.5 * (1.0 + q * q - 2.0 * q));
        worst_exact = worst_exact.max((ghz_decay(n, eps).unwrap().exact - closed).abs());
    }
    let mut worst_rel: f64 = 0.0;
    for n in 1..=10 {
        let eps = 0.001;
        let g = ghz_decay(n, eps).unwrap();
        worst_rel = worst_rel.max((g.exact / (n as f64 * eps) - 1.0).abs());
    }
    check(
        worst_exact < 1e-12 && worst_rel < 0.02,
        format!("max |exact - closed form| = {worst_exact:.1e}, max relative gap to N eps = {:.3}%", worst_rel * 100.0),
    )
}

/// Concurrence of `a|00⟩ + b|01⟩ + c|10⟩ + d|11⟩` is `2|ad − bc|`.
fn pure_concurrence(psi: &[C64]) -> f64 {
    2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm()
}

fn criterion_7() -> Outcome {
    let mut rng = rng_from_seed(7);
    let mut notes = Vec::new();
    let mut ok = true;

    let sep_worst = (0..1000)
        .map(|i| {
            let rho = random_separable_with(2, 2, 1 + i % 4, &mut rng).unwrap();
            witness_value(&rho).unwrap().abs()
        })
        .fold(0.0, f64::max);
    ok &= sep_worst <= 1e-9;
    notes.push(format!("separable max |F| {sep_worst:.1e}"));

    let mut pure_worst: f64 = 0.0;
    for _ in 0..1000 {
        let psi = random_state_vector(4, &mut rng);
        let rho = DensityOperator::pure(&psi).unwrap();
        let f = witness_value(&rho).unwrap();
        let c = pure_concurrence(&psi);
        pure_worst = pure_worst.max((f - c).abs()).max((concurrence(&rho).unwrap() - c).abs());
    }
    ok &= pure_worst <= 1e-9;
    notes.push(format!("pure max |F - C| {pure_worst:.1e}"));

    let mut werner_worst: f64 = 0.0;
    for i in 0..=100 {
        let w = f64::from(i) / 100.0;
        let rho = werner_state(w).unwrap();
        let want = (0.5 * (3.0 * w - 1.0)).max(0.0);
        let f = witness_value(&rho).unwrap();
        werner_worst = werner_worst.max((f - want).abs()).max((f - concurrence(&rho).unwrap()).abs());
    }
    ok &= werner_worst <= 1e-9;
    notes.push(format!("Werner max dev {werner_worst:.1e}"));

    let mut convexity_excess: f64 = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let n = rng.random_range(2..=4);
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let states: Vec<DensityOperator> = (0..n)
            .map(|_| {
                let rank = rng.random_range(1..=4);
                random_mixed(4, rank, &mut rng).unwrap()
            })
            .collect();
        let lhs = witness_value(&DensityOperator::mixture(&weights, &states).unwrap()).unwrap();
        let rhs: f64 = weights.iter().zip(&states).map(|(w, s)| w * witness_value(s).unwrap()).sum();
        convexity_excess = convexity_excess.max(lhs - rhs);
    }
    ok &= convexity_excess <= 1e-9;
    notes.push(format!("convexity max excess {convexity_excess:.1e}"));

    let mut lu_worst: f64 = 0.0;
    for _ in 0..1000 {
        let rank = rng.random_range(1..=4);
        let rho = random_mixed(4, rank, &mut rng).unwrap();
        let u = random_local_unitary(2, 2, &mut rng);
        let rotated = rho.conjugate_by(&u).unwrap();
        lu_worst = lu_worst.max((witness_value(&rotated).unwrap() - witness_value(&rho).unwrap()).abs());
    }
    ok &= lu_worst <= 1e-10;
    notes.push(format!("local-unitary max dev {lu_worst:.1e}"));

    let min_f = (0..10_000)
        .map(|i| {
            let mut r = trial_rng(77, i);
            let rank = r.random_range(1..=4);
            witness_value(&random_mixed(4, rank, &mut r).unwrap()).unwrap()
        })
        .fold(f64::INFINITY, f64::min);
    ok &= min_f >= -1e-10;
    notes.push(format!("min F {min_f:.1e}"));

    match undetected_entangled_search(7, 1000).unwrap() {
        Some(found) => {
            let c = concurrence(&found.state).unwrap();
            ok &= c > 1e-6 && witness_value(&found.state).unwrap().abs() <= 1e-9;
            notes.push(format!("entangled state with F = 0 found (C = {c:.3})"));
        }
        None => {
            ok = false;
            notes.push("no entangled state with F = 0 found".into());
        }
    }
    check(ok, notes.join("; "))
}

fn frob_sqr(m: &ComplexMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// `Σ K X K†` straight from the Kraus list.
fn kraus_action(ch: &QuantumChannel, x: &ComplexMatrix) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(x.rows(), x.cols());
    for k in ch.kraus() {
        acc = &acc + &k.matmul(x).unwrap().matmul(&k.adjoint()).unwrap();
    }
    acc
}

fn criterion_8() -> Outcome {
    let mut ape1: f64 = 0.0;
    let mut ape23_excess: f64 = f64::NEG_INFINITY;
    let mut v_excess: f64 = f64::NEG_INFINITY;
    for i in 0..1000u64 {
        let d = 2 + (i % 3) as usize;
        let env = 1 + ((i / 3) % 3) as usize;
        let ch = random_channel(d, env, 8_000 + i).unwrap();
        let eps = epsilon_of_channel(&ch, NormOrder::HILBERT_SCHMIDT, 64).unwrap().epsilon;
        for k in 0..d {
            for l in 0..d {
                let dyad = ComplexMatrix::unit(d, k, l);
                let v = &kraus_action(&ch, &dyad) - &dyad;
                let v_lib = channel_deviation_on_dyad(&ch, k, l).unwrap();
                ape1 = ape1.max(v.max_abs_diff(&v_lib));
                if k == l {
                    v_excess = v_excess.max(frob_sqr(&v) - eps * eps);
                    continue;
                }
                let flip = ComplexMatrix::unit(d, l, k);
                let xp = &dyad + &flip;
                let xm = &dyad - &flip;
                let dp = &kraus_action(&ch, &xp) - &xp;
                let dm = &kraus_action(&ch, &xm) - &xm;
                ape1 = ape1.max((frob_sqr(&v) - 0.25 * (frob_sqr(&dp) + frob_sqr(&dm))).abs());
                ape23_excess = ape23_excess.max(frob_sqr(&dp).sqrt() - 2.0 * eps).max(frob_sqr(&dm).sqrt() - 2.0 * eps);
                v_excess = v_excess.max(frob_sqr(&v) - 2.0 * eps * eps);
            }
        }
    }

    let mut exp7: f64 = 0.0;
    let mut rng = rng_from_seed(88);
    for _ in 0..1000 {
        let d1 = rng.random_range(2..=4);
        let d2 = rng.random_range(2..=4);
        let ch = random_channel_with(d1, rng.random_range(1..=3), &mut rng).unwrap();
        let psi = random_state_vector(d1 * d2, &mut rng);
        let rho = ComplexMatrix::outer(&psi, &psi);
        let out = apply_on_subsystem(&ch, &rho, &[d1, d2], 0).unwrap();
        let lhs = frob_sqr(&(&out - &rho));
        let s = schmidt_decompose(&psi, d1, d2).unwrap();
        let col = |k: usize| -> Vec<C64> { (0..d1).map(|r| s.left_vectors[(r, k)]).collect() };
        let mut rhs = 0.0;
        for (k, bk) in s.coefficients.iter().enumerate() {
            for (l, bl) in s.coefficients.iter().enumerate() {
                let dyad = ComplexMatrix::outer(&col(k), &col(l));
                let v = &kraus_action(&ch, &dyad) - &dyad;
                rhs += bk * bk * bl * bl * v.trace_product(&v.adjoint()).re;
            }
        }
        exp7 = exp7.max((lhs - rhs).abs());
    }
    check(
        ape1 <= 1e-10 && ape23_excess <= 1e-9 && v_excess <= 1e-9 && exp7 <= 1e-9,
        format!(
            "dyad identity max err {ape1:.1e}; max (|Λ[X±]−X±| − 2ε) {ape23_excess:.2e}; \
             max (Tr VV† − bound) {v_excess:.2e}; Schmidt identity max err {exp7:.1e}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = rng_from_seed(9);
    let mut failures = Vec::new();
    for p in [NormOrder::TRACE, NormOrder::HILBERT_SCHMIDT, NormOrder::Finite(3)] {
        let mut worst = [f64::NEG_INFINITY; 6];
        for _ in 0..1000 {
            let (d1, d2) = (2, rng.random_range(2..=3));
            let dim = d1 * d2;
            let draw = |rng: &mut localchan::rng::Rng| {
                let rank = rng.random_range(1..=dim);
                random_mixed(dim, rank, rng).unwrap()
            };
            let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
            let dist = |x: &DensityOperator, y: &DensityOperator| p_distance(x, y, p).unwrap();
            let ab = dist(&a, &b);
            // symmetry, nonnegativity, identity, triangle
            worst[0] = worst[0].max((ab - dist(&b, &a)).abs()).max(-ab).max(dist(&a, &a));
            worst[1] = worst[1].max(dist(&a, &c) - ab - dist(&b, &c));

            // joint convexity
            let lam = rng.random_range(0.0..1.0);
            let w = [lam, 1.0 - lam];
            let c2 = draw(&mut rng);
            let lhs2 = dist(
                &DensityOperator::mixture(&w, &[a.clone(), b.clone()]).unwrap(),
                &DensityOperator::mixture(&w, &[c.clone(), c2.clone()]).unwrap(),
            );
            let rhs2 = lam * dist(&a, &c) + (1.0 - lam) * dist(&b, &c2);
            worst[2] = worst[2].max(lhs2 - rhs2);

            // product inputs: D(Λ[ρ₁]⊗ρ₂, ρ₁⊗ρ₂) ≤ D(Λ[ρ₁], ρ₁)
            let l1 = random_channel_with(d1, 2, &mut rng).unwrap();
            let l2 = random_channel_with(d2, 2, &mut rng).unwrap();
            let r1 = random_mixed(d1, rng.random_range(1..=d1), &mut rng).unwrap();
            let r2 = random_mixed(d2, rng.random_range(1..=d2), &mut rng).unwrap();
            let moved = l1.apply(&r1).unwrap();
            let lhs = dist(&moved.tensor(&r2).unwrap(), &r1.tensor(&r2).unwrap());
            worst[3] = worst[3].max(lhs - dist(&moved, &r1));

            // D(Λ₁⊗Λ₂ρ, ρ) ≤ D(Λ₁⊗Λ₂ρ, Λ₁⊗𝟙ρ) + D(Λ₁⊗𝟙ρ, ρ)
            let both = DensityOperator::new(
                apply_on_subsystem(&l2, &apply_on_subsystem(&l1, a.matrix(), &[d1, d2], 0).unwrap(), &[d1, d2], 1)
                    .unwrap(),
            )
            .unwrap();
            let first = DensityOperator::new(apply_on_subsystem(&l1, a.matrix(), &[d1, d2], 0).unwrap()).unwrap();
            worst[4] = worst[4].max(dist(&both, &a) - dist(&both, &first) - dist(&first, &a));

            // unitary invariance
            let u = localchan::states::random_unitary(dim, &mut rng);
            worst[5] = worst[5].max((dist(&a.conjugate_by(&u).unwrap(), &b.conjugate_by(&u).unwrap()) - ab).abs());
        }
        let limits = [1e-12, 1e-10, 1e-10, 1e-10, 1e-10, 1e-12];
        let names = ["axioms", "triangle", "joint convexity", "product rule", "triangle split", "unitary invariance"];
        for ((w, lim), name) in worst.iter().zip(limits).zip(names) {
            if *w > lim {
                failures.push(format!("p={p} {name}: {w:.2e}"));
            }
        }
    }
    let ok = failures.is_empty();
    check(ok, if ok { "all properties hold for p = 1, 2, 3".to_string() } else { failures.join("; ") })
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Bell example", criterion_1, 1),
        ("trace-distance saturation", criterion_2, 5),
        ("Hilbert-Schmidt saturation", criterion_3, 5),
        ("separable sweep", criterion_4, 60),
        ("universal bound", criterion_5, 300),
        ("GHZ decay", criterion_6, 30),
        ("witness properties", criterion_7, 120),
        ("dyad identities", criterion_8, 120),
        ("metric properties", criterion_9, 60),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let label = format!("{} {name}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let ok = outcome.ok && in_time;
        failed += usize::from(!ok);
        println!(
            "{} [{label}] {} ({:.2} s, limit {limit} s{})",
            if ok { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time" }
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
