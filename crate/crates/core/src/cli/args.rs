use std::f64::consts::FRAC_PI_8;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::validate::Fault;

#[derive(Debug, Parser)]
#[command(name = "qrelax", version, about = "Relaxation of quantum gates and phase-plate decoherence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// χ-matrix of a gate under amplitude and phase relaxation.
    Chi(GateArgs),
    /// Choi-state negativity after each gate slice, ideal and noisy.
    Negativity(GateArgs),
    /// Plate purity as a function of thickness.
    PlatePurity(PlatePurityArgs),
    /// Analytic χ of a phase plate, optionally checked against Monte Carlo.
    PlateChi(PlateChiArgs),
    /// Run the built-in invariant suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    /// Slice unitary, then relaxation.
    GateNoise,
    /// Relaxation, then slice unitary.
    NoiseGate,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GateArgs {
    /// `sqisw`, `iswap`, `identity`, `identity:<qubits>` or `file:<path>` (JSON `re`/`im` grids).
    #[arg(long, default_value = "sqisw")]
    pub gate: String,
    /// Amplitude relaxation time T1 (`inf` disables).
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true, value_parser = positive_or_inf)]
    pub t1: f64,
    /// Coherence time T2, at most 2·T1 (`inf` disables).
    #[arg(long, default_value_t = 15.0, allow_negative_numbers = true, value_parser = positive_or_inf)]
    pub t2: f64,
    /// Gate duration, same unit as T1 and T2.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true, value_parser = positive)]
    pub tgate: f64,
    /// Number of time slices.
    #[arg(long, short, default_value_t = 100, allow_negative_numbers = true, value_parser = clap::value_parser!(u32).range(1..=100_000))]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = Order::GateNoise)]
    pub order: Order,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    /// Full width at half maximum of the spectrum, µm.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true, value_parser = positive)]
    pub fwhm: f64,
    /// Central wavelength, µm.
    #[arg(long, default_value_t = 0.8, allow_negative_numbers = true, value_parser = positive)]
    pub lambda0: f64,
    /// Birefringence Δn.
    #[arg(long, default_value_t = 0.009, allow_negative_numbers = true, value_parser = positive)]
    pub delta_n: f64,
    /// Optical axis angle, radians.
    #[arg(long, default_value_t = FRAC_PI_8, allow_negative_numbers = true, value_parser = finite)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PlatePurityArgs {
    /// `gauss`, `sinc`, `tri`, `rect`, `mono` or `all` (the four broadband kinds).
    #[arg(long, default_value = "all")]
    pub spectrum: String,
    #[command(flatten)]
    pub spectral: SpectrumArgs,
    /// Smallest plate thickness, µm.
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true, value_parser = positive)]
    pub h_min: f64,
    /// Largest plate thickness, µm.
    #[arg(long, default_value_t = 20_000.0, allow_negative_numbers = true, value_parser = positive)]
    pub h_max: f64,
    /// Number of thickness points, endpoints included.
    #[arg(long, default_value_t = 200, allow_negative_numbers = true, value_parser = clap::value_parser!(u32).range(1..=1_000_000))]
    pub steps: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PlateChiArgs {
    /// `gauss`, `sinc`, `tri`, `rect` or `mono`.
    #[arg(long, default_value = "gauss")]
    pub spectrum: String,
    #[command(flatten)]
    pub spectral: SpectrumArgs,
    /// Plate thickness, µm.
    #[arg(long, default_value_t = 2000.0, allow_negative_numbers = true, value_parser = positive)]
    pub h: f64,
    /// Also estimate χ by Monte Carlo with this many spectral samples.
    #[arg(long, allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(1..=100_000_000))]
    pub oracle: Option<u64>,
    /// Seed for the Monte Carlo oracle.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Oracle uses the exact retardance 2πΔn h/λ instead of its linearization.
    #[arg(long, requires = "oracle")]
    pub exact_delta: bool,
    /// Fail with exit code 2 when the oracle trace distance exceeds this.
    #[arg(long, requires = "oracle", allow_negative_numbers = true, value_parser = positive)]
    pub tolerance: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Deliberately break one ingredient to confirm the suite notices.
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("`{s}` is not a number"))
}

fn positive(s: &str) -> Result<f64, String> {
    let x = parse_f64(s)?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err("must be finite and > 0".into())
    }
}

fn positive_or_inf(s: &str) -> Result<f64, String> {
    let x = parse_f64(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err("must be > 0 (or inf)".into())
    }
}

fn finite(s: &str) -> Result<f64, String> {
    let x = parse_f64(s)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err("must be finite".into())
    }
}
