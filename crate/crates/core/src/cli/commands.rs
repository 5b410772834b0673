use std::fs;

use serde::{Deserialize, Serialize};

use super::args::{Command, Format, GateArgs, Order, PlateChiArgs, PlatePurityArgs, SpectrumArgs, ValidateArgs};
use super::output::{emit, json, matrix_csv, note_metadata, num, table_csv, Grids};
use super::validate::run_suite;
use super::CliError;
use crate::matrix::ComplexMatrix;
use crate::plate::{
    analytic_chi, fourier_coeffs, linearize, monte_carlo_chi, plate_purity, purity_vs_thickness, DeltaMode,
    MonteCarloOptions, PlateParams, SpectralDistribution, SpectrumKind,
};
use crate::process::{iswap, negativity_dynamics, noisy_gate_chi, sqisw, ChiMatrix, NoisyGateSpec, SliceOrder};

pub fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Chi(a) => chi(&a),
        Command::Negativity(a) => negativity(&a),
        Command::PlatePurity(a) => plate_purity_sweep(&a),
        Command::PlateChi(a) => plate_chi(&a),
        Command::Validate(a) => validate(&a),
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

/// Gate matrix file: `{"re": [[...]], "im": [[...]]}`, row-major.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateFile {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

const MAX_GATE_DIM: usize = 8;

fn load_gate(name: &str) -> Result<ComplexMatrix, CliError> {
    if let Some(path) = name.strip_prefix("file:") {
        let text = fs::read_to_string(path).map_err(|e| invalid(format!("--gate: cannot read {path}: {e}")))?;
        let file: GateFile = serde_json::from_str(&text).map_err(|e| invalid(format!("--gate: {path}: {e}")))?;
        let n = file.re.len();
        let rectangular = |g: &Vec<Vec<f64>>| g.len() == n && g.iter().all(|r| r.len() == n);
        if !(rectangular(&file.re) && rectangular(&file.im)) {
            return Err(invalid(format!("--gate: {path}: `re` and `im` must both be {n}x{n}")));
        }
        if n < 2 || !n.is_power_of_two() || n > MAX_GATE_DIM {
            return Err(invalid(format!("--gate: {path}: dimension must be 2, 4 or 8, got {n}")));
        }
        let entries: Vec<_> =
            file.re.iter().flatten().zip(file.im.iter().flatten()).map(|(&r, &i)| crate::matrix::c(r, i)).collect();
        let u = ComplexMatrix::from_row_major(n, n, &entries).map_err(|e| invalid(format!("--gate: {path}: {e}")))?;
        let defect = u.unitarity_defect();
        if !(defect <= 1e-10) {
            return Err(invalid(format!("--gate: {path}: matrix is not unitary (‖U†U − I‖_max = {defect:.3e})")));
        }
        return Ok(u);
    }
    match name {
        "sqisw" => Ok(sqisw()),
        "iswap" => Ok(iswap()),
        "identity" => Ok(ComplexMatrix::identity(4)),
        _ => {
            let qubits = name
                .strip_prefix("identity:")
                .and_then(|k| k.parse::<u32>().ok())
                .filter(|k| (1..=3).contains(k))
                .ok_or_else(|| {
                    invalid(format!(
                        "--gate: unknown gate `{name}` (expected sqisw, iswap, identity, identity:<1..3> or file:<path>)"
                    ))
                })?;
            Ok(ComplexMatrix::identity(1 << qubits))
        }
    }
}

fn gate_spec(a: &GateArgs) -> Result<NoisyGateSpec, CliError> {
    if a.t1.is_finite() && a.t2 > 2.0 * a.t1 {
        return Err(invalid(format!(
            "--t2 = {} exceeds 2·--t1 = {}: the pure dephasing time would be negative",
            a.t2,
            2.0 * a.t1
        )));
    }
    let gate = load_gate(&a.gate)?;
    let order = match a.order {
        Order::GateNoise => SliceOrder::GateThenNoise,
        Order::NoiseGate => SliceOrder::NoiseThenGate,
    };
    Ok(NoisyGateSpec::new(gate, a.tgate, a.n as usize, a.t1, a.t2)?.with_order(order))
}

fn order_name(o: Order) -> &'static str {
    match o {
        Order::GateNoise => "gate-noise",
        Order::NoiseGate => "noise-gate",
    }
}

#[derive(Serialize)]
struct GateMeta {
    gate: String,
    s: usize,
    t1: f64,
    t2: f64,
    t_gate: f64,
    slices: usize,
    order: &'static str,
}

impl GateMeta {
    fn new(a: &GateArgs, spec: &NoisyGateSpec) -> Self {
        Self {
            gate: a.gate.clone(),
            s: spec.s(),
            t1: a.t1,
            t2: a.t2,
            t_gate: a.tgate,
            slices: spec.slices,
            order: order_name(a.order),
        }
    }
}

#[derive(Serialize)]
struct Convergence {
    slices_refined: usize,
    trace_distance: f64,
}

#[derive(Serialize)]
struct ChiMeta {
    #[serde(flatten)]
    gate: GateMeta,
    trace: f64,
    rank: usize,
    eigenvalues: Vec<f64>,
    convergence: Convergence,
}

#[derive(Serialize)]
struct ChiArtifact<'a> {
    #[serde(flatten)]
    meta: &'a ChiMeta,
    chi: Grids,
}

fn chi(a: &GateArgs) -> Result<(), CliError> {
    let spec = gate_spec(a)?;
    let chi = noisy_gate_chi(&spec)?;
    let refined = spec.with_slices(2 * spec.slices);
    let fine = noisy_gate_chi(&refined)?;
    let meta = ChiMeta {
        gate: GateMeta::new(a, &spec),
        trace: chi.matrix().trace().re,
        rank: chi.rank(),
        eigenvalues: chi.eigenvalues(),
        convergence: Convergence { slices_refined: refined.slices, trace_distance: chi.trace_distance(&fine)? },
    };
    let bytes = match a.out.format {
        Format::Csv => matrix_csv(&[""], &[chi.matrix()])?,
        Format::Json => json(&ChiArtifact { meta: &meta, chi: Grids::of(chi.matrix()) })?,
    };
    emit(&a.out, &bytes)?;
    note_metadata(a.out.format, &meta)
}

#[derive(Serialize)]
struct NegativityRow {
    slice_index: usize,
    time: f64,
    negativity_ideal: f64,
    negativity_noisy: f64,
}

#[derive(Serialize)]
struct NegativityArtifact {
    #[serde(flatten)]
    gate: GateMeta,
    points: Vec<NegativityRow>,
}

const NEGATIVITY_HEADER: [&str; 4] = ["slice_index", "time", "negativity_ideal", "negativity_noisy"];

fn negativity(a: &GateArgs) -> Result<(), CliError> {
    let spec = gate_spec(a)?;
    let points: Vec<NegativityRow> = negativity_dynamics(&spec)?
        .into_iter()
        .map(|p| NegativityRow {
            slice_index: p.slice,
            time: p.time,
            negativity_ideal: p.ideal,
            negativity_noisy: p.noisy,
        })
        .collect();
    let bytes = match a.out.format {
        Format::Csv => table_csv(
            &NEGATIVITY_HEADER,
            points.iter().map(|p| {
                vec![p.slice_index.to_string(), num(p.time), num(p.negativity_ideal), num(p.negativity_noisy)]
            }),
        )?,
        Format::Json => json(&NegativityArtifact { gate: GateMeta::new(a, &spec), points })?,
    };
    emit(&a.out, &bytes)
}

fn parse_spectrum(name: &str) -> Result<SpectrumKind, CliError> {
    name.parse().map_err(|_| {
        invalid(format!("--spectrum: unknown spectrum `{name}` (expected gauss, sinc, tri, rect or mono)"))
    })
}

fn plate(s: &SpectrumArgs, h: f64) -> Result<PlateParams, CliError> {
    Ok(PlateParams::new(h, s.delta_n, s.alpha, s.lambda0)?)
}

#[derive(Serialize)]
struct SpectralMeta {
    lambda0: f64,
    fwhm: f64,
    delta_n: f64,
    alpha: f64,
}

impl From<&SpectrumArgs> for SpectralMeta {
    fn from(s: &SpectrumArgs) -> Self {
        Self { lambda0: s.lambda0, fwhm: s.fwhm, delta_n: s.delta_n, alpha: s.alpha }
    }
}

#[derive(Serialize)]
struct PurityRow {
    spectrum: &'static str,
    h: f64,
    a: f64,
    b: f64,
    #[serde(rename = "I_c")]
    ic: f64,
    #[serde(rename = "I_s")]
    is: f64,
    purity: f64,
}

#[derive(Serialize)]
struct PurityArtifact {
    #[serde(flatten)]
    spectral: SpectralMeta,
    points: Vec<PurityRow>,
}

fn thickness_grid(a: &PlatePurityArgs) -> Result<Vec<f64>, CliError> {
    let steps = a.steps as usize;
    if steps == 1 {
        return Ok(vec![a.h_min]);
    }
    if !(a.h_max > a.h_min) {
        return Err(invalid(format!("--h-max = {} must exceed --h-min = {} when --steps > 1", a.h_max, a.h_min)));
    }
    let dh = (a.h_max - a.h_min) / (steps - 1) as f64;
    Ok((0..steps).map(|k| if k + 1 == steps { a.h_max } else { a.h_min + k as f64 * dh }).collect())
}

fn plate_purity_sweep(a: &PlatePurityArgs) -> Result<(), CliError> {
    let all = a.spectrum == "all";
    let kinds: Vec<SpectrumKind> =
        if all { SpectrumKind::BROADBAND.to_vec() } else { vec![parse_spectrum(&a.spectrum)?] };
    let hs = thickness_grid(a)?;
    let p = plate(&a.spectral, hs[0])?;
    let mut rows = Vec::new();
    for kind in kinds {
        let spec = SpectralDistribution::new(kind, a.spectral.lambda0, a.spectral.fwhm)?;
        for pt in purity_vs_thickness(&p, &spec, &hs)? {
            rows.push(PurityRow {
                spectrum: kind.short_name(),
                h: pt.h,
                a: pt.a,
                b: pt.b,
                ic: pt.ic,
                is: pt.is,
                purity: pt.purity,
            });
        }
    }
    let bytes = match a.out.format {
        Format::Csv => {
            let mut header = vec!["h", "a", "b", "I_c", "I_s", "purity"];
            if all {
                header.insert(0, "spectrum");
            }
            table_csv(
                &header,
                rows.iter().map(|r| {
                    let mut rec = vec![num(r.h), num(r.a), num(r.b), num(r.ic), num(r.is), num(r.purity)];
                    if all {
                        rec.insert(0, r.spectrum.to_string());
                    }
                    rec
                }),
            )?
        }
        Format::Json => json(&PurityArtifact { spectral: (&a.spectral).into(), points: rows })?,
    };
    emit(&a.out, &bytes)
}

#[derive(Serialize)]
struct OracleMeta {
    n_samples: u64,
    seed: u64,
    delta_mode: &'static str,
    trace_distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pass: Option<bool>,
}

#[derive(Serialize)]
struct PlateChiMeta {
    spectrum: &'static str,
    #[serde(flatten)]
    spectral: SpectralMeta,
    h: f64,
    a: f64,
    b: f64,
    #[serde(rename = "I_c")]
    ic: f64,
    #[serde(rename = "I_s")]
    is: f64,
    purity: f64,
    rank: usize,
    eigenvalues: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleMeta>,
}

#[derive(Serialize)]
struct PlateChiArtifact<'a> {
    #[serde(flatten)]
    meta: &'a PlateChiMeta,
    chi: Grids,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_chi: Option<Grids>,
}

fn plate_chi(a: &PlateChiArgs) -> Result<(), CliError> {
    let kind = parse_spectrum(&a.spectrum)?;
    let spec = SpectralDistribution::new(kind, a.spectral.lambda0, a.spectral.fwhm)?;
    let p = plate(&a.spectral, a.h)?;
    let lin = linearize(&p);
    let fc = fourier_coeffs(&spec, lin.b);
    let chi = analytic_chi(&p, &spec);

    let mut oracle_chi: Option<ChiMatrix> = None;
    let mut oracle = None;
    if let Some(n) = a.oracle {
        let mode = if a.exact_delta { DeltaMode::Exact } else { DeltaMode::Linearized };
        let mc = monte_carlo_chi(&p, &spec, MonteCarloOptions::new(n as usize, a.seed).delta_mode(mode))?;
        let td = chi.trace_distance(&mc)?;
        oracle = Some(OracleMeta {
            n_samples: n,
            seed: a.seed,
            delta_mode: if a.exact_delta { "exact" } else { "linearized" },
            trace_distance: td,
            tolerance: a.tolerance,
            pass: a.tolerance.map(|tol| td <= tol),
        });
        oracle_chi = Some(mc);
    }
    let meta = PlateChiMeta {
        spectrum: kind.short_name(),
        spectral: (&a.spectral).into(),
        h: a.h,
        a: lin.a,
        b: lin.b,
        ic: fc.ic,
        is: fc.is,
        purity: plate_purity(fc),
        rank: chi.rank(),
        eigenvalues: chi.eigenvalues(),
        oracle,
    };
    let bytes = match (a.out.format, &oracle_chi) {
        (Format::Csv, None) => matrix_csv(&[""], &[chi.matrix()])?,
        (Format::Csv, Some(mc)) => matrix_csv(&["", "oracle"], &[chi.matrix(), mc.matrix()])?,
        (Format::Json, _) => json(&PlateChiArtifact {
            meta: &meta,
            chi: Grids::of(chi.matrix()),
            oracle_chi: oracle_chi.as_ref().map(|m| Grids::of(m.matrix())),
        })?,
    };
    emit(&a.out, &bytes)?;
    note_metadata(a.out.format, &meta)?;
    match &meta.oracle {
        Some(OracleMeta { pass: Some(false), trace_distance, tolerance: Some(tol), .. }) => Err(CliError::Tolerance(
            format!("oracle trace distance {trace_distance:.3e} exceeds --tolerance {tol:.3e}"),
        )),
        _ => Ok(()),
    }
}

fn validate(a: &ValidateArgs) -> Result<(), CliError> {
    let results = run_suite(a.seed, a.inject_fault);
    for r in &results {
        println!("{} {:<34} {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} checks passed", results.len() - failed, results.len());
    if failed > 0 {
        return Err(CliError::Tolerance(format!("{failed} check(s) failed")));
    }
    Ok(())
}
