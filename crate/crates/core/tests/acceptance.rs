//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use qrelax::channels::{
    amplitude_damping, apply_channel, completeness_defect, compose, phase_damping, tensor_channel, unitary_channel,
};
use qrelax::kron;
use qrelax::plate::{
    analytic_chi, linearize, monte_carlo_chi, plate_purity, plate_unitary, purity_vs_thickness, DeltaMode,
    MonteCarloOptions, PlateParams, SpectralDistribution, SpectrumKind,
};
use qrelax::process::{negativity_dynamics, noisy_gate_chi, sqisw, NoisyGateSpec, SliceOrder};
use qrelax::random::{random_density, random_pure_state, random_unitary};
use qrelax::state::{density_from_pure, max_entangled, negativity, purity, DensityMatrix};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn channel_law() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut completeness, mut trace, mut min_eig) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let amp = amplitude_damping(rng.random()).unwrap();
        let phase = phase_damping(rng.random()).unwrap();
        let u = unitary_channel(&random_unitary(&mut rng, 2)).unwrap();
        let single = compose(&compose(&amp, &phase).unwrap(), &u).unwrap();
        let pair = tensor_channel(&single, &compose(&phase, &amp).unwrap());
        for ch in [&amp, &phase, &single, &pair] {
            completeness = completeness.max(completeness_defect(ch.operators()));
            let dim = ch.dim_in();
            let rank = rng.random_range(1..=dim);
            let out = apply_channel(ch, &random_density(&mut rng, dim, rank)).unwrap();
            trace = trace.max((out.matrix().trace() - 1.0).norm());
            min_eig = min_eig.min(out.eigenvalues()[0]);
        }
    }
    let t = start.elapsed();
    ensure(
        completeness <= 1e-12 && trace <= 1e-12 && min_eig >= -1e-12 && within(t, 5.0),
        format!("completeness {completeness:.1e}, trace {trace:.1e}, min eigenvalue {min_eig:.1e}, {t:.2?}"),
    )
}

fn negativity_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for s in 2..=4 {
        let rho = density_from_pure(&max_entangled(s).unwrap()).with_subsystems(vec![s, s]).unwrap();
        let expected = (s as f64 - 1.0) / 2.0;
        let oracle = common::brute_force_negativity(rho.matrix(), s, s);
        worst = worst.max((oracle - expected).abs()).max((negativity(&rho).unwrap() - expected).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut product = 0.0f64;
    for (da, db) in [(2, 2), (2, 3), (3, 4)] {
        for _ in 0..20 {
            let a = density_from_pure(&random_pure_state(&mut rng, da));
            let rank = rng.random_range(1..=db);
            let b = random_density(&mut rng, db, rank);
            let m = kron(a.matrix(), b.matrix());
            let rho = DensityMatrix::new(m.clone(), Some(vec![da, db])).unwrap();
            product = product.max(common::brute_force_negativity(&m, da, db)).max(negativity(&rho).unwrap());
        }
    }
    ensure(worst <= 1e-9 && product <= 1e-10, format!("max entangled error {worst:.1e}, product states {product:.1e}"))
}

fn sqisw_negativity_dynamics() -> Outcome {
    let start = Instant::now();
    let spec = NoisyGateSpec::new(sqisw(), 1.0, 200, 20.0, 15.0).unwrap();
    let pts = negativity_dynamics(&spec).unwrap();
    let t = start.elapsed();
    let ideal = pts.iter().map(|p| (p.ideal - 1.5).abs()).fold(0.0, f64::max);
    let decreasing = pts.windows(2).all(|w| w[1].noisy < w[0].noisy);
    let last = pts.last().unwrap().noisy;
    ensure(
        ideal <= 1e-9 && decreasing && last < 1.5 && within(t, 10.0),
        format!("ideal deviation {ideal:.1e}, noisy strictly decreasing {decreasing}, final {last:.6}, {t:.2?}"),
    )
}

fn slicing_convergence() -> Outcome {
    let base = NoisyGateSpec::new(sqisw(), 1.0, 200, 20.0, 15.0).unwrap();
    let coarse = noisy_gate_chi(&base).unwrap();
    let fine = noisy_gate_chi(&base.with_slices(400)).unwrap();
    let td = coarse.trace_distance(&fine).unwrap();
    let gaps: Vec<f64> = [50, 100, 200, 400]
        .iter()
        .map(|&n| {
            let s = base.with_slices(n);
            let a = noisy_gate_chi(&s).unwrap();
            let b = noisy_gate_chi(&s.with_order(SliceOrder::NoiseThenGate)).unwrap();
            a.trace_distance(&b).unwrap()
        })
        .collect();
    let ratios: Vec<f64> = gaps.windows(2).map(|w| w[0] / w[1]).collect();
    let halving = ratios.iter().all(|r| (r - 2.0).abs() <= 0.4);
    let shown: Vec<String> = gaps.iter().map(|g| format!("{g:.2e}")).collect();
    ensure(
        td <= 1e-4 && halving,
        format!("TD(200, 400) = {td:.2e}; ordering gaps [{}], successive ratios {ratios:.3?}", shown.join(", ")),
    )
}

fn plate_grid() -> Vec<(PlateParams, SpectralDistribution)> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    (0..100)
        .map(|_| {
            let kind = SpectrumKind::BROADBAND[rng.random_range(0..4)];
            let lambda0 = rng.random_range(0.4..1.6);
            let spec = SpectralDistribution::new(kind, lambda0, lambda0 * rng.random_range(1e-3..0.05)).unwrap();
            let p = PlateParams::new(
                rng.random_range(1.0..30_000.0),
                rng.random_range(1e-3..0.2),
                rng.random_range(-3.2..3.2),
                lambda0,
            )
            .unwrap();
            (p, spec)
        })
        .collect()
}

fn plate_rank() -> Outcome {
    let mut worst = 0.0f64;
    for (p, spec) in plate_grid() {
        let ev = common::jacobi_hermitian_eigenvalues(analytic_chi(&p, &spec).matrix());
        worst = worst.max(ev[0].abs()).max(ev[1].abs());
    }
    ensure(worst <= 1e-10, format!("largest third/fourth eigenvalue {worst:.1e} over 100 points"))
}

fn plate_purity_consistency() -> Outcome {
    let mut worst = 0.0f64;
    for (p, spec) in plate_grid() {
        let fc = spec.fourier_coeffs(linearize(&p).b);
        let chi = analytic_chi(&p, &spec);
        let normalized = DensityMatrix::new(chi.matrix().scale_real(0.5), None).unwrap();
        worst = worst.max((plate_purity(fc) - purity(&normalized)).abs());
    }
    ensure(worst <= 1e-10, format!("max |P − Tr(χ/2)²| = {worst:.1e} over 100 points"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut linear = 0.0f64;
    for (k, kind) in SpectrumKind::BROADBAND.into_iter().enumerate() {
        let spec = SpectralDistribution::new(kind, 0.8, 0.01).unwrap();
        for (j, h) in [2000.0, 7000.0, 15000.0].into_iter().enumerate() {
            let p = PlateParams::new(h, 0.009, 0.3, 0.8).unwrap();
            let mc = monte_carlo_chi(&p, &spec, MonteCarloOptions::new(100_000, (10 * k + j) as u64)).unwrap();
            linear = linear.max(analytic_chi(&p, &spec).trace_distance(&mc).unwrap());
        }
    }
    let sigma = 1e-3 * 0.8;
    let fwhm = sigma * 2.0 * (2.0 * std::f64::consts::LN_2).sqrt();
    let gauss = SpectralDistribution::new(SpectrumKind::Gaussian, 0.8, fwhm).unwrap();
    let mut exact = 0.0f64;
    for (j, h) in [2000.0, 7000.0, 15000.0].into_iter().enumerate() {
        let p = PlateParams::new(h, 0.009, 0.3, 0.8).unwrap();
        let opts = MonteCarloOptions::new(100_000, 100 + j as u64).delta_mode(DeltaMode::Exact);
        exact =
            exact.max(analytic_chi(&p, &gauss).trace_distance(&monte_carlo_chi(&p, &gauss, opts).unwrap()).unwrap());
    }
    let t = start.elapsed();
    ensure(
        linear <= 0.01 && exact <= 2e-3 && within(t, 30.0),
        format!("linearized max TD {linear:.2e} (12 cases), exact-δ max TD {exact:.2e} (σ/λ0 = 1e-3), {t:.2?}"),
    )
}

fn purity_curves() -> Outcome {
    let (lambda0, dn, fwhm) = (0.8, 0.009, 0.01);
    let p = PlateParams::new(1.0, dn, 0.3, lambda0).unwrap();
    let spec = |k| SpectralDistribution::new(k, lambda0, fwhm).unwrap();

    let near_zero = SpectrumKind::BROADBAND
        .into_iter()
        .map(|k| (1.0 - purity_vs_thickness(&p, &spec(k), &[1e-9]).unwrap()[0].purity).abs())
        .fold(0.0, f64::max);

    let hs: Vec<f64> = (1..=400).map(|k| 50.0 * k as f64).collect();
    let gauss = purity_vs_thickness(&p, &spec(SpectrumKind::Gaussian), &hs).unwrap();
    let monotone = gauss.windows(2).all(|w| w[1].purity <= w[0].purity);

    // First sinc zero of the uniform spectrum: |b|·w/2 = π, b = −2πΔn h/λ0².
    let h_zero = lambda0 * lambda0 / (fwhm * dn);
    let rect = spec(SpectrumKind::Uniform);
    let at_zero = purity_vs_thickness(&p, &rect, &[h_zero]).unwrap()[0].purity;
    let after: Vec<f64> = (1..=200).map(|k| h_zero * (1.0 + k as f64 / 200.0)).collect();
    let revival = purity_vs_thickness(&p, &rect, &after).unwrap().iter().map(|pt| pt.purity).fold(0.0, f64::max);

    let mut quad = 0.0f64;
    for kind in [SpectrumKind::Gaussian, SpectrumKind::Uniform, SpectrumKind::Triangular] {
        let s = spec(kind);
        for k in -30..=30 {
            let b = 60.0 * k as f64;
            quad = quad.max((s.fourier_coeffs(b).ic - s.fourier_coeffs_quadrature(b, 1e-10).unwrap().ic).abs());
        }
    }
    ensure(
        near_zero <= 1e-12 && monotone && (at_zero - 0.5).abs() <= 1e-12 && revival > 0.52 && quad <= 1e-8,
        format!(
            "|1 − P(h→0)| {near_zero:.1e}, gaussian monotone {monotone}, rect P at first zero {at_zero:.12}, \
             revival peak {revival:.4}, closed form vs quadrature {quad:.1e}"
        ),
    )
}

fn monochromatic() -> Outcome {
    let mut worst = 0.0f64;
    let mut purity_err = 0.0f64;
    for (p, _) in plate_grid() {
        let mono = SpectralDistribution::monochromatic(p.lambda0()).unwrap();
        let chi = analytic_chi(&p, &mono);
        let u = plate_unitary(linearize(&p).a, p.alpha());
        worst = worst.max(chi.matrix().max_abs_diff(&common::chi_from_kraus(&[u])));
        let fc = mono.fourier_coeffs(linearize(&p).b);
        purity_err = purity_err.max((plate_purity(fc) - 1.0).abs()).max((purity(&chi.choi_state()) - 1.0).abs());
    }
    ensure(worst <= 1e-10 && purity_err <= 1e-12, format!("χ vs unitary χ {worst:.1e}, |P − 1| {purity_err:.1e}"))
}

fn cli_determinism() -> Outcome {
    let dir = TempDir::new().unwrap();
    let runs: &[(&str, &[&str])] = &[
        ("chi.csv", &["chi", "--n", "50"]),
        ("chi.json", &["chi", "--n", "50", "--format", "json"]),
        ("negativity.csv", &["negativity", "--n", "50"]),
        ("negativity.json", &["negativity", "--n", "20", "--format", "json"]),
        ("purity.csv", &["plate-purity", "--steps", "100"]),
        ("purity.json", &["plate-purity", "--steps", "20", "--format", "json"]),
        ("plate-chi.csv", &["plate-chi", "--oracle", "20000", "--seed", "9"]),
        (
            "plate-chi-exact.json",
            &["plate-chi", "--oracle", "20000", "--seed", "9", "--exact-delta", "--format", "json"],
        ),
    ];
    let bin = env!("CARGO_BIN_EXE_qrelax");
    let mut mismatched = Vec::new();
    for (name, args) in runs {
        let mut outputs = Vec::new();
        for round in 0..2 {
            let path = dir.path().join(format!("{round}-{name}"));
            let status = Command::new(bin).args(*args).arg("--output").arg(&path).output().unwrap().status;
            if !status.success() {
                return Err(format!("{args:?} exited with {status}"));
            }
            outputs.push(std::fs::read(&path).unwrap());
        }
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            mismatched.push(*name);
        }
    }
    let validate: Vec<Vec<u8>> = (0..2).map(|_| Command::new(bin).arg("validate").output().unwrap().stdout).collect();
    if validate[0] != validate[1] {
        mismatched.push("validate");
    }
    ensure(mismatched.is_empty(), format!("{} outputs compared, mismatched: {mismatched:?}", runs.len() + 1))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("channel law", channel_law),
        ("negativity oracle", negativity_oracle),
        ("SQiSW negativity dynamics", sqisw_negativity_dynamics),
        ("slicing convergence", slicing_convergence),
        ("plate χ rank", plate_rank),
        ("plate purity consistency", plate_purity_consistency),
        ("Monte Carlo oracle equivalence", oracle_equivalence),
        ("purity vs thickness curves", purity_curves),
        ("monochromatic degeneracy", monochromatic),
        ("CLI determinism", cli_determinism),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (tag, msg) = match std::panic::catch_unwind(f) {
            Ok(Ok(m)) => ("PASS", m),
            Ok(Err(m)) => ("FAIL", m),
            Err(_) => ("FAIL", "panicked".to_string()),
        };
        if tag == "FAIL" {
            failures += 1;
        }
        println!("criterion {:>2} {tag}: {name}: {msg}", i + 1);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
