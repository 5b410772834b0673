//! Symmetric spectral line shapes and their Fourier coefficients.
//!
//! Every shape is parameterized by its full width at half maximum so that
//! different line shapes can be compared at equal FWHM:
//!
//! | kind          | density in `x = λ − λ0`                 | width parameter            |
//! |---------------|------------------------------------------|----------------------------|
//! | gaussian      | `exp(−x²/2σ²)/(σ√2π)`                    | `σ = FWHM / (2√(2 ln 2))`  |
//! | uniform       | `1/w` on `|x| ≤ w/2`                     | full width `w = FWHM`      |
//! | triangular    | `(w − |x|)/w²` on `|x| ≤ w`              | half-width `w = FWHM`      |
//! | sinc²         | `sinc²(x/L)/(πL)`, `sinc u = sin u / u`  | `L = FWHM / (2 u½)`        |
//! | monochromatic | `δ(x)`                                   | none                       |
//!
//! where `u½ ≈ 1.39156` solves `sinc² u = ½`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use super::special::cos_over_square_tail;
use crate::error::{domain, validation, Error, Result};
use crate::quadrature::{integrate, QuadOptions};

/// Root of `sin²u / u² = 1/2` on `(0, π)`.
pub const SINC2_HALF_MAX: f64 = 1.391_557_378_251_510_3;

/// First zeros of the sinc² envelope covered by direct quadrature; the rest
/// of the line is integrated analytically.
const SINC2_QUADRATURE_ZEROS: f64 = 20.0;

/// Standard deviations covered by gaussian quadrature.
const GAUSSIAN_QUADRATURE_SIGMAS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Gaussian,
    Sinc2,
    Triangular,
    Uniform,
    Monochromatic,
}

impl SpectrumKind {
    /// The four broadband shapes, in plotting order.
    pub const BROADBAND: [SpectrumKind; 4] =
        [SpectrumKind::Gaussian, SpectrumKind::Sinc2, SpectrumKind::Triangular, SpectrumKind::Uniform];

    /// Short name used on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            SpectrumKind::Gaussian => "gauss",
            SpectrumKind::Sinc2 => "sinc",
            SpectrumKind::Triangular => "tri",
            SpectrumKind::Uniform => "rect",
            SpectrumKind::Monochromatic => "mono",
        }
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for SpectrumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gauss" | "gaussian" => Ok(SpectrumKind::Gaussian),
            "sinc" | "sinc2" => Ok(SpectrumKind::Sinc2),
            "tri" | "triangular" => Ok(SpectrumKind::Triangular),
            "rect" | "uniform" => Ok(SpectrumKind::Uniform),
            "mono" | "monochromatic" => Ok(SpectrumKind::Monochromatic),
            other => Err(validation(format!("unknown spectrum '{other}' (expected gauss, sinc, tri, rect or mono)"))),
        }
    }
}

/// Real and imaginary parts of `∫ e^{i b (λ−λ0)} p(λ) dλ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierCoeffs {
    pub ic: f64,
    pub is: f64,
}

impl FourierCoeffs {
    pub const MONOCHROMATIC: FourierCoeffs = FourierCoeffs { ic: 1.0, is: 0.0 };
}

/// Normalized wavelength density centred on `lambda0` (µm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDistribution {
    kind: SpectrumKind,
    lambda0: f64,
    fwhm: f64,
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

impl SpectralDistribution {
    pub fn new(kind: SpectrumKind, lambda0: f64, fwhm: f64) -> Result<Self> {
        if !(lambda0 > 0.0) || !lambda0.is_finite() {
            return Err(domain(format!("central wavelength must be > 0, got {lambda0}")));
        }
        let fwhm = if kind == SpectrumKind::Monochromatic { 0.0 } else { fwhm };
        if kind != SpectrumKind::Monochromatic && (!(fwhm > 0.0) || !fwhm.is_finite()) {
            return Err(domain(format!("FWHM must be > 0, got {fwhm}")));
        }
        Ok(Self { kind, lambda0, fwhm })
    }

    pub fn monochromatic(lambda0: f64) -> Result<Self> {
        Self::new(SpectrumKind::Monochromatic, lambda0, 0.0)
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn fwhm(&self) -> f64 {
        self.fwhm
    }

    /// Kind-specific width: σ, full width, half-width or `L` (see module docs).
    pub fn width_parameter(&self) -> f64 {
        match self.kind {
            SpectrumKind::Gaussian => self.fwhm / (2.0 * (2.0 * 2f64.ln()).sqrt()),
            SpectrumKind::Uniform | SpectrumKind::Triangular => self.fwhm,
            SpectrumKind::Sinc2 => self.fwhm / (2.0 * SINC2_HALF_MAX),
            SpectrumKind::Monochromatic => 0.0,
        }
    }

    /// Density at offset `x = λ − λ0`. Zero everywhere for the monochromatic line.
    pub fn pdf_offset(&self, x: f64) -> f64 {
        let w = self.width_parameter();
        match self.kind {
            SpectrumKind::Gaussian => (-0.5 * (x / w).powi(2)).exp() / (w * (2.0 * PI).sqrt()),
            SpectrumKind::Uniform => {
                if x.abs() <= 0.5 * w {
                    1.0 / w
                } else {
                    0.0
                }
            }
            SpectrumKind::Triangular => ((w - x.abs()) / (w * w)).max(0.0),
            SpectrumKind::Sinc2 => sinc(x / w).powi(2) / (PI * w),
            SpectrumKind::Monochromatic => 0.0,
        }
    }

    pub fn pdf(&self, lambda: f64) -> f64 {
        self.pdf_offset(lambda - self.lambda0)
    }

    /// Closed-form Fourier coefficients at conjugate frequency `b` (rad/µm).
    pub fn fourier_coeffs(&self, b: f64) -> FourierCoeffs {
        let w = self.width_parameter();
        let ic = match self.kind {
            SpectrumKind::Gaussian => (-0.5 * (b * w).powi(2)).exp(),
            SpectrumKind::Uniform => sinc(0.5 * b * w),
            SpectrumKind::Triangular => sinc(0.5 * b * w).powi(2),
            SpectrumKind::Sinc2 => (1.0 - 0.5 * b.abs() * w).max(0.0),
            SpectrumKind::Monochromatic => 1.0,
        };
        FourierCoeffs { ic, is: 0.0 }
    }

    /// Fourier coefficients by adaptive quadrature over the line's support.
    pub fn fourier_coeffs_quadrature(&self, b: f64, abs_tol: f64) -> Result<FourierCoeffs> {
        Ok(FourierCoeffs {
            ic: self.quadrature(|x| (b * x).cos(), abs_tol, Some(b))?,
            is: self.quadrature(|x| (b * x).sin(), abs_tol, None)?,
        })
    }

    /// `∫ p(λ) dλ` by the same quadrature.
    pub fn total_mass(&self, abs_tol: f64) -> Result<f64> {
        self.quadrature(|_| 1.0, abs_tol, Some(0.0))
    }

    /// `∫ g(x) p(λ0 + x) dx`. `cos_freq` marks `g(x) = cos(b x)`, which lets the
    /// sinc² tails beyond the quadrature window be added analytically; any
    /// other `g` is assumed odd there and its tails cancel.
    fn quadrature<G: Fn(f64) -> f64>(&self, g: G, abs_tol: f64, cos_freq: Option<f64>) -> Result<f64> {
        let w = self.width_parameter();
        let opts = QuadOptions { abs_tol, ..QuadOptions::default() };
        let f = |x: f64| g(x) * self.pdf_offset(x);
        let panels = |lo: f64, hi: f64, o: QuadOptions| integrate(&f, lo, hi, o).map(|r| r.value);
        match self.kind {
            SpectrumKind::Monochromatic => Ok(g(0.0)),
            SpectrumKind::Gaussian => {
                let r = GAUSSIAN_QUADRATURE_SIGMAS * w;
                panels(-r, r, opts)
            }
            SpectrumKind::Uniform => panels(-0.5 * w, 0.5 * w, opts),
            SpectrumKind::Triangular => {
                let half = QuadOptions { abs_tol: 0.5 * abs_tol, ..opts };
                Ok(panels(-w, 0.0, half)? + panels(0.0, w, half)?)
            }
            SpectrumKind::Sinc2 => {
                let r = SINC2_QUADRATURE_ZEROS * PI * w;
                let bulk_opts = QuadOptions { initial_panels: 4 * SINC2_QUADRATURE_ZEROS as usize, ..opts };
                let bulk = panels(-r, r, bulk_opts)?;
                let tails = match cos_freq {
                    Some(b) => {
                        // sin²u cos βu = ½cos βu − ¼cos (2+β)u − ¼cos (2−β)u, in u = x/L.
                        let beta = b * w;
                        let u0 = SINC2_QUADRATURE_ZEROS * PI;
                        let one_side = 0.5 * cos_over_square_tail(beta, u0)
                            - 0.25 * cos_over_square_tail(2.0 + beta, u0)
                            - 0.25 * cos_over_square_tail(2.0 - beta, u0);
                        2.0 * one_side / PI
                    }
                    None => 0.0,
                };
                Ok(bulk + tails)
            }
        }
    }

    /// Draws an offset `x = λ − λ0`.
    pub fn sample_offset<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let w = self.width_parameter();
        match self.kind {
            SpectrumKind::Monochromatic => 0.0,
            SpectrumKind::Gaussian => w * rng.sample::<f64, _>(StandardNormal),
            SpectrumKind::Uniform => w * (rng.sample::<f64, _>(Open01) - 0.5),
            SpectrumKind::Triangular => {
                let v: f64 = rng.sample(Open01);
                if v < 0.5 {
                    w * ((2.0 * v).sqrt() - 1.0)
                } else {
                    w * (1.0 - (2.0 * (1.0 - v)).sqrt())
                }
            }
            SpectrumKind::Sinc2 => loop {
                // Cauchy envelope: sinc²(u) ≤ 2/(1 + u²).
                let u = (PI * (rng.sample::<f64, _>(Open01) - 0.5)).tan();
                let accept = sinc(u).powi(2) * (1.0 + u * u) / 2.0;
                if rng.sample::<f64, _>(Open01) < accept {
                    break w * u;
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all(fwhm: f64) -> Vec<SpectralDistribution> {
        SpectrumKind::BROADBAND.iter().map(|&k| SpectralDistribution::new(k, 0.8, fwhm).unwrap()).collect()
    }

    #[test]
    fn half_max_root() {
        let u = SINC2_HALF_MAX;
        assert_abs_diff_eq!(sinc(u).powi(2), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn fwhm_is_honoured() {
        for d in all(0.02).into_iter().filter(|d| d.kind() != SpectrumKind::Uniform) {
            let peak = d.pdf(0.8);
            let half = d.pdf(0.8 + 0.01);
            assert_abs_diff_eq!(half / peak, 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(d.pdf(0.8 - 0.01) / peak, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn uniform_support_is_fwhm() {
        let d = SpectralDistribution::new(SpectrumKind::Uniform, 0.8, 0.02).unwrap();
        assert_abs_diff_eq!(d.pdf(0.8 + 0.0099), 50.0, epsilon = 1e-9);
        assert_eq!(d.pdf(0.8 + 0.0101), 0.0);
    }

    #[test]
    fn densities_normalized() {
        for d in all(0.02) {
            let mass = d.total_mass(1e-12).unwrap();
            assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for d in all(0.03) {
            for b in [-50.0, -17.3, -3.0, 0.0, 0.7, 12.0, 33.3, 50.0] {
                let closed = d.fourier_coeffs(b);
                let quad = d.fourier_coeffs_quadrature(b, 1e-11).unwrap();
                assert_abs_diff_eq!(closed.ic, quad.ic, epsilon = 1e-8);
                assert_abs_diff_eq!(quad.is, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("gauss".parse::<SpectrumKind>().unwrap(), SpectrumKind::Gaussian);
        assert_eq!("Rect".parse::<SpectrumKind>().unwrap(), SpectrumKind::Uniform);
        assert!("lorentz".parse::<SpectrumKind>().is_err());
        for k in SpectrumKind::BROADBAND {
            assert_eq!(k.short_name().parse::<SpectrumKind>().unwrap(), k);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(SpectralDistribution::new(SpectrumKind::Gaussian, 0.8, 0.0).is_err());
        assert!(SpectralDistribution::new(SpectrumKind::Gaussian, -0.8, 0.1).is_err());
        assert!(SpectralDistribution::new(SpectrumKind::Monochromatic, 0.8, 0.0).is_ok());
    }

    #[test]
    fn sample_moments() {
        // Sample means of cos(b x) approach the closed-form I_c.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in all(0.05) {
            let b = 20.0;
            let n = 200_000;
            let mean: f64 = (0..n).map(|_| (b * d.sample_offset(&mut rng)).cos()).sum::<f64>() / n as f64;
            assert_abs_diff_eq!(mean, d.fourier_coeffs(b).ic, epsilon = 5e-3);
        }
    }
}
