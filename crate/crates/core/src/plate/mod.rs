//! Decoherence of a polarization qubit in a dispersive birefringent phase plate.
//!
//! A plate of thickness `h` with birefringence `Δn` and optical axis at angle
//! `α` applies, at wavelength `λ`, the unitary
//! `cos(δ/2)·I − i·sin(δ/2)·(cos2α·σ_z + sin2α·σ_x)` in the `{|V⟩, |H⟩}` basis,
//! with retardance `δ(λ) = 2πΔn(λ)h/λ`. Averaging the Choi state over a
//! spectral line turns the process non-unitary. Linearizing
//! `δ(λ) ≈ a + b(λ − λ0)` gives a closed-form χ of rank at most two, built
//! from the line's Fourier coefficients `I_c`, `I_s` at frequency `b`.

mod special;
pub mod spectrum;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, validation, Result};
use crate::matrix::{c, ComplexMatrix};
use crate::process::ChiMatrix;

pub use spectrum::{FourierCoeffs, SpectralDistribution, SpectrumKind};

/// Relative step for the central difference of a dispersive retardance.
const DISPERSION_FD_STEP: f64 = 1e-6;

/// Phase-plate unitary for retardance `delta` and axis angle `alpha` (radians).
pub fn plate_unitary(delta: f64, alpha: f64) -> ComplexMatrix {
    let (sd, cd) = (0.5 * delta).sin_cos();
    let (s2a, c2a) = (2.0 * alpha).sin_cos();
    ComplexMatrix::from_rows(&[[c(cd, -sd * c2a), c(0.0, -sd * s2a)], [c(0.0, -sd * s2a), c(cd, sd * c2a)]])
}

/// Δn as a function of wavelength.
#[derive(Clone)]
pub enum Birefringence {
    Constant(f64),
    Dispersive(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Birefringence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Birefringence::Constant(dn) => f.debug_tuple("Constant").field(dn).finish(),
            Birefringence::Dispersive(_) => f.write_str("Dispersive(..)"),
        }
    }
}

/// Retardance linearized about the line centre: `δ(λ) ≈ a + b(λ − λ0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Linearization {
    /// `δ(λ0)`, radians.
    pub a: f64,
    /// `dδ/dλ` at `λ0`, radians per µm.
    pub b: f64,
}

/// Plate geometry and material. Lengths in µm, angles in radians.
#[derive(Debug, Clone)]
pub struct PlateParams {
    h: f64,
    alpha: f64,
    lambda0: f64,
    birefringence: Birefringence,
}

impl PlateParams {
    pub fn new(h: f64, delta_n: f64, alpha: f64, lambda0: f64) -> Result<Self> {
        if !(delta_n > 0.0) || !delta_n.is_finite() {
            return Err(domain(format!("birefringence Δn must be > 0, got {delta_n}")));
        }
        Self::with_birefringence(h, Birefringence::Constant(delta_n), alpha, lambda0)
    }

    /// A plate whose Δn depends on wavelength; `b` then comes from a central
    /// difference of `δ(λ)` with step `λ0·1e-6`.
    pub fn with_birefringence(h: f64, birefringence: Birefringence, alpha: f64, lambda0: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(domain(format!("plate thickness h must be > 0, got {h}")));
        }
        if !(lambda0 > 0.0) || !lambda0.is_finite() {
            return Err(domain(format!("central wavelength λ0 must be > 0, got {lambda0}")));
        }
        if !alpha.is_finite() {
            return Err(domain("axis angle α must be finite"));
        }
        Ok(Self { h, alpha, lambda0, birefringence })
    }

    pub fn with_thickness(&self, h: f64) -> Result<Self> {
        Self::with_birefringence(h, self.birefringence.clone(), self.alpha, self.lambda0)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn birefringence(&self) -> &Birefringence {
        &self.birefringence
    }

    pub fn delta_n(&self, lambda: f64) -> f64 {
        match &self.birefringence {
            Birefringence::Constant(dn) => *dn,
            Birefringence::Dispersive(f) => f(lambda),
        }
    }

    /// `cos 2α`
    pub fn n_z(&self) -> f64 {
        (2.0 * self.alpha).cos()
    }

    /// `sin 2α`
    pub fn n_x(&self) -> f64 {
        (2.0 * self.alpha).sin()
    }

    fn retardance(&self, lambda: f64) -> f64 {
        2.0 * PI * self.delta_n(lambda) * self.h / lambda
    }
}

/// Retardance `δ(λ) = 2πΔn(λ)h/λ`.
pub fn optical_length(lambda: f64, p: &PlateParams) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(domain(format!("wavelength must be > 0, got {lambda}")));
    }
    Ok(p.retardance(lambda))
}

pub fn linearize(p: &PlateParams) -> Linearization {
    let l0 = p.lambda0;
    match &p.birefringence {
        Birefringence::Constant(dn) => {
            let a = 2.0 * PI * dn * p.h / l0;
            Linearization { a, b: -a / l0 }
        }
        Birefringence::Dispersive(_) => {
            let step = l0 * DISPERSION_FD_STEP;
            let b = (p.retardance(l0 + step) - p.retardance(l0 - step)) / (2.0 * step);
            Linearization { a: p.retardance(l0), b }
        }
    }
}

/// `I_c`, `I_s` of the line at the plate's dispersion frequency `b`.
pub fn fourier_coeffs(spec: &SpectralDistribution, b: f64) -> FourierCoeffs {
    spec.fourier_coeffs(b)
}

/// `P = (1 + I_c² + I_s²)/2`
pub fn plate_purity(fc: FourierCoeffs) -> f64 {
    0.5 * (1.0 + fc.ic * fc.ic + fc.is * fc.is)
}

/// Closed-form χ for central retardance `a`, axis angle `alpha` and line
/// coefficients `fc`:
/// `χ = 2 Σ_{jk} ρ_jk |φ_j⟩⟨φ_k|` with `|φ1⟩ = (1,0,0,1)/√2`,
/// `|φ2⟩ = (n_z, n_x, n_x, −n_z)/√2`.
pub fn analytic_chi_from_coeffs(a: f64, alpha: f64, fc: FourierCoeffs) -> ChiMatrix {
    let (sa, ca) = a.sin_cos();
    let (nx, nz) = (2.0 * alpha).sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let phi1 = [c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)];
    let phi2 = [c(r * nz, 0.0), c(r * nx, 0.0), c(r * nx, 0.0), c(-r * nz, 0.0)];

    let rho11 = c(0.5 * (1.0 + fc.ic * ca - fc.is * sa), 0.0);
    let rho22 = c(0.5 * (1.0 - fc.ic * ca + fc.is * sa), 0.0);
    let rho12 = c(0.0, 0.5 * (fc.is * ca + fc.ic * sa));
    let rho21 = rho12.conj();

    let terms = [
        ComplexMatrix::outer(&phi1, &phi1).scale(rho11),
        ComplexMatrix::outer(&phi2, &phi2).scale(rho22),
        ComplexMatrix::outer(&phi1, &phi2).scale(rho12),
        ComplexMatrix::outer(&phi2, &phi1).scale(rho21),
    ];
    let sum = terms.iter().fold(ComplexMatrix::zeros(4, 4), |acc, t| &acc + t);
    ChiMatrix::from_choi_matrix(2, &sum)
}

pub fn analytic_chi(p: &PlateParams, spec: &SpectralDistribution) -> ChiMatrix {
    let lin = linearize(p);
    analytic_chi_from_coeffs(lin.a, p.alpha, fourier_coeffs(spec, lin.b))
}

/// Which retardance each Monte-Carlo wavelength sample sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaMode {
    /// `a + b(λ − λ0)`: isolates sampling noise from linearization error.
    #[default]
    Linearized,
    /// `2πΔn(λ)h/λ`. Samples at `λ ≤ 0` are redrawn.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloOptions {
    pub n_samples: usize,
    pub seed: u64,
    pub delta_mode: DeltaMode,
}

impl MonteCarloOptions {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        Self { n_samples, seed, delta_mode: DeltaMode::default() }
    }

    pub fn delta_mode(self, delta_mode: DeltaMode) -> Self {
        Self { delta_mode, ..self }
    }
}

/// χ of a unitary process, `|vec U⟩⟨vec U|` with row-major vectorization.
/// Equal to `chi_from_channel(unitary_channel(u))`, without the channel machinery.
pub fn unitary_chi(u: &ComplexMatrix) -> ChiMatrix {
    let v = u.to_row_major();
    let s = u.rows();
    ChiMatrix::from_choi_matrix(s, &ComplexMatrix::outer(&v, &v).scale_real(1.0 / s as f64))
}

/// Spectral average of per-wavelength unitary χ-matrices.
pub fn monte_carlo_chi(p: &PlateParams, spec: &SpectralDistribution, opts: MonteCarloOptions) -> Result<ChiMatrix> {
    if opts.n_samples == 0 {
        return Err(validation("Monte-Carlo sample count must be >= 1"));
    }
    let lin = linearize(p);
    let retardance = |x: f64| -> Option<f64> {
        match opts.delta_mode {
            DeltaMode::Linearized => Some(lin.a + lin.b * x),
            DeltaMode::Exact => {
                let lambda = spec.lambda0() + x;
                (lambda > 0.0).then(|| p.retardance(lambda))
            }
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut acc = [Complex64::new(0.0, 0.0); 16];
    for _ in 0..opts.n_samples {
        let delta = loop {
            if let Some(d) = retardance(spec.sample_offset(&mut rng)) {
                break d;
            }
        };
        let v = plate_unitary(delta, p.alpha).to_row_major();
        for i in 0..4 {
            for j in 0..4 {
                acc[4 * i + j] += v[i] * v[j].conj();
            }
        }
    }
    // Σ|vec U⟩⟨vec U| / n is already χ (each term has trace s = 2).
    let mean: Vec<Complex64> = acc.iter().map(|z| z / opts.n_samples as f64).collect();
    let chi = ComplexMatrix::from_row_major(4, 4, &mean)?;
    Ok(ChiMatrix::from_choi_matrix(2, &chi.scale_real(0.5)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PurityPoint {
    pub h: f64,
    pub a: f64,
    pub b: f64,
    pub ic: f64,
    pub is: f64,
    pub purity: f64,
}

/// Plate purity along a thickness sweep.
pub fn purity_vs_thickness(
    plate: &PlateParams,
    spec: &SpectralDistribution,
    h_values: &[f64],
) -> Result<Vec<PurityPoint>> {
    if h_values.is_empty() {
        return Err(domain("thickness range is empty"));
    }
    if h_values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(domain("thickness range must be strictly ascending"));
    }
    h_values
        .iter()
        .map(|&h| {
            let lin = linearize(&plate.with_thickness(h)?);
            let fc = fourier_coeffs(spec, lin.b);
            Ok(PurityPoint { h, a: lin.a, b: lin.b, ic: fc.ic, is: fc.is, purity: plate_purity(fc) })
        })
        .collect()
}
