//! The invariant suite behind `qrelax validate`.

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{
    amplitude_damping, apply_channel, completeness_defect, compose, phase_damping, tensor_channel, unitary_channel,
    RelaxationParams,
};
use crate::matrix::{kron, ComplexMatrix};
use crate::plate::{
    analytic_chi, linearize, monte_carlo_chi, plate_purity, plate_unitary, unitary_chi, MonteCarloOptions, PlateParams,
    SpectralDistribution, SpectrumKind,
};
use crate::process::{chi_from_channel, gate_fraction, negativity_dynamics, sqisw, NoisyGateSpec};
use crate::random::{random_density, random_unitary};
use crate::state::{density_from_pure, max_entangled, negativity, purity, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Amplitude relaxation with `1 − γ` where `√(1 − γ)` belongs.
    AmplitudeSqrt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: f64, tol: f64) -> CheckResult {
    CheckResult { name, passed: worst <= tol, detail: format!("worst {worst:.3e} (tolerance {tol:.0e})") }
}

fn failed(name: &'static str, e: crate::Error) -> CheckResult {
    CheckResult { name, passed: false, detail: e.to_string() }
}

/// Returns `(worst deviation, tolerance)`.
type Check = fn(&mut ChaCha8Rng, Option<Fault>) -> crate::Result<(f64, f64)>;

/// Runs every check; never panics on a failed property, only reports it.
pub fn run_suite(seed: u64, fault: Option<Fault>) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks: [(&'static str, Check); 12] = [
        ("kraus completeness", completeness),
        ("channel trace and positivity", trace_and_positivity),
        ("local-unitary negativity", local_unitary_negativity),
        ("maximally entangled negativity", max_entangled_negativity),
        ("gate fraction power", gate_fraction_power),
        ("chi trace and unitary rank", chi_trace_and_rank),
        ("ideal sqisw negativity", ideal_sqisw_negativity),
        ("closed-form vs quadrature I_c", closed_form_vs_quadrature),
        ("plate chi rank", plate_rank),
        ("plate purity consistency", plate_purity_consistency),
        ("monochromatic plate", monochromatic_plate),
        ("monte carlo oracle", oracle_equivalence),
    ];
    checks
        .iter()
        .map(|(name, f)| match f(&mut rng, fault) {
            Ok((worst, tol)) => check(name, worst, tol),
            Err(e) => failed(name, e),
        })
        .collect()
}

fn amplitude_ops(gamma: f64, fault: Option<Fault>) -> crate::Result<Vec<ComplexMatrix>> {
    Ok(match fault {
        Some(Fault::AmplitudeSqrt) => vec![
            ComplexMatrix::real_diagonal(&[1.0, 1.0 - gamma]),
            ComplexMatrix::from_real_rows(&[[0.0, gamma.sqrt()], [0.0, 0.0]]),
        ],
        None => amplitude_damping(gamma)?.operators().to_vec(),
    })
}

fn completeness(rng: &mut ChaCha8Rng, fault: Option<Fault>) -> crate::Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let amp = amplitude_ops(rng.random(), fault)?;
        let phase = phase_damping(rng.random())?.operators().to_vec();
        let composed: Vec<_> = phase.iter().flat_map(|f| amp.iter().map(move |e| f * e)).collect();
        let tensored: Vec<_> = amp.iter().flat_map(|e| phase.iter().map(move |f| kron(e, f))).collect();
        for ops in [&amp, &phase, &composed, &tensored] {
            worst = worst.max(completeness_defect(ops));
        }
    }
    Ok((worst, 1e-12))
}

fn random_relaxation(rng: &mut ChaCha8Rng) -> crate::Result<crate::channels::KrausChannel> {
    let t1 = rng.random_range(0.5..50.0);
    let t2 = rng.random_range(0.1..2.0 * t1);
    Ok(RelaxationParams::new(rng.random_range(0.0..5.0), t1, t2)?.channel())
}

fn trace_and_positivity(rng: &mut ChaCha8Rng, _: Option<Fault>) -> crate::Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let one = compose(&random_relaxation(rng)?, &unitary_channel(&random_unitary(rng, 2))?)?;
        let two = tensor_channel(&one, &random_relaxation(rng)?);
        for (ch, dim) in [(&one, 2), (&two, 4)] {
            let rank = rng.random_range(1..=dim);
            let out = apply_channel(ch, &random_density(rng, dim, rank))?;
            let min_eig = out.eigenvalues()[0];
            worst = worst.max((out.matrix().trace().re - 1.0).abs()).max(-min_eig);
        }
    }
    Ok((worst, 1e-12))
}

fn local_unitary_negativity(rng: &mut ChaCha8Rng, _: Option<Fault>) -> crate::Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    for (da, db) in [(2, 2), (2, 3), (3, 3)] {
        for _ in 0..20 {
            let rank = rng.random_range(1..=da * db);
            let rho = random_density(rng, da * db, rank);
            let local = kron(&random_unitary(rng, da), &random_unitary(rng, db));
            let before = negativity(&rho.clone().with_subsystems(vec![da, db])?)?;
            let rotated = DensityMatrix::new(local.sandwich(rho.matrix()).hermitian_part(), Some(vec![da, db]))?;
            worst = worst.max((negativity(&rotated)? - before).abs());
        }
    }
    Ok((worst, 1e-10))
}

fn max_entangled_negativity(_: &mut ChaCha8Rng, _: Option<Fault>) -> crate::Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    for s in 2..=4 {
        let rho = density_from_pure(&max_entangled(s)?).with_subsystems(vec![s, s])?;
        worst = worst.max((negativity(&rho)? - (s as f64 - 1.0) / 2.0).abs());
    }
    Ok((worst, 1e-9))
}

fn gate_fraction_power(rng: &mut ChaCha8Rng, _: Option<Fault>) -> crate::Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let u = random_unitary(rng, 4);
        let n = rng.random_range(1..=10u32);
        let v = gate_fraction(&u, n as usize)?;
        worst = worst.max(v.pow(n).max_abs_diff(&u)).max(v.unitarity_defect());
    }
    Ok((worst, 1e-9))
}

fn chi_trace_and_rank(rng: &mut ChaCha8Rng, _: Option<Fault>) -> crate::Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    for s in [2, 4] {
        let chi = chi_from_channel(&unitary_channel(&random_unitary(rng, s))?)?;
        worst = worst.max((chi.matrix().trace().re - s as f64).abs());
        if chi.rank() != 1 {
            worst = f64::INFINITY;
        }
        let noisy = chi_from_channel(&compose(&unitary_channel(&random_unitary(rng, 2))?, &random_relaxation(rng)?)?)?;
        worst = worst.max((noisy.matrix().trace().re - 2.0).abs());
    }
    Ok((worst, 1e-12))
}

fn ideal_sqisw_negativity(_: &mut ChaCha8Rng, _: Option<Fault>) -> crate::Result<(f64, f64)> {
    let spec = NoisyGateSpec::new(sqisw(), 1.0, 40, 20.0, 15.0)?;
    let pts = negativity_dynamics(&spec)?;
    let mut worst = pts.iter().map(|p| (p.ideal - 1.5).abs()).fold(0.0, f64::max);
    if !pts.windows(2).all(|w| w[1].noisy < w[0].noisy) {
        worst = f64::INFINITY;
    }
    Ok((worst, 1e-9))
}

fn closed_form_vs_quadrature(_: &mut ChaCha8Rng, _: Option<Fault>) -> crate::Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    for kind in SpectrumKind::BROADBAND {
        let spec = SpectralDistribution::new(kind, 0.8, 0.01)?;
        for k in -20..=20 {
            let b = 40.0 * k as f64;
            let closed = spec.fourier_coeffs(b);
            let quad = spec.fourier_coeffs_quadrature(b, 1e-10)?;
            worst = worst.max((closed.ic - quad.ic).abs()).max((closed.is - quad.is).abs());
        }
    }
    Ok((worst, 1e-8))
}

fn random_plate(rng: &mut ChaCha8Rng) -> crate::Result<(PlateParams, SpectralDistribution)> {
    let kind = SpectrumKind::BROADBAND[rng.random_range(0..4)];
    let lambda0 = rng.random_range(0.4..1.6);
    let spec = SpectralDistribution::new(kind, lambda0, lambda0 * rng.random_range(1e-3..0.05))?;
    let plate = PlateParams::new(
        rng.random_range(1.0..30_000.0),
        rng.random_range(1e-3..0.2),
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
        lambda0,
    )?;
    Ok((plate, spec))
}

fn plate_rank(rng: &mut ChaCha8Rng, _: Option<Fault>) -> crate::Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (p, spec) = random_plate(rng)?;
        let ev = analytic_chi(&p, &spec).eigenvalues();
        worst = worst.max(ev[0].abs()).max(ev[1].abs());
    }
    Ok((worst, 1e-10))
}

fn plate_purity_consistency(rng: &mut ChaCha8Rng, _: Option<Fault>) -> crate::Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (p, spec) = random_plate(rng)?;
        let chi = analytic_chi(&p, &spec);
        let fc = spec.fourier_coeffs(linearize(&p).b);
        worst = worst.max((plate_purity(fc) - purity(&chi.choi_state())).abs());
    }
    Ok((worst, 1e-10))
}

fn monochromatic_plate(rng: &mut ChaCha8Rng, _: Option<Fault>) -> crate::Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (p, _) = random_plate(rng)?;
        let mono = SpectralDistribution::monochromatic(p.lambda0())?;
        let chi = analytic_chi(&p, &mono);
        let reference = unitary_chi(&plate_unitary(linearize(&p).a, p.alpha()));
        worst = worst.max(chi.matrix().max_abs_diff(reference.matrix())).max((purity(&chi.choi_state()) - 1.0).abs());
    }
    Ok((worst, 1e-10))
}

fn oracle_equivalence(_: &mut ChaCha8Rng, _: Option<Fault>) -> crate::Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    let p = PlateParams::new(5000.0, 0.009, 0.3, 0.8)?;
    for (k, kind) in SpectrumKind::BROADBAND.into_iter().enumerate() {
        let spec = SpectralDistribution::new(kind, 0.8, 0.01)?;
        let mc = monte_carlo_chi(&p, &spec, MonteCarloOptions::new(100_000, k as u64))?;
        worst = worst.max(analytic_chi(&p, &spec).trace_distance(&mc)?);
    }
    Ok((worst, 1e-2))
}
