//! Pure and mixed states, partial transposition and negativity.
//!
//! Bipartite conventions: a density matrix with `subsystem_dims = [d_a, d_b]`
//! lives on `H_A ⊗ H_B`, basis index `i = a * d_b + b`. Subsystem A is the
//! left (most significant) tensor factor, as in `|j⟩ ⊗ |j⟩`.

use num_complex::Complex64;

use crate::error::{domain, structural, validation, Result};
use crate::matrix::{hermitian_eigenvalues, ComplexMatrix};

/// Eigenvalues with modulus below this are treated as zero in negativity
/// and rank counts.
pub const EIGEN_FLOOR: f64 = 1e-12;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(validation("state vector is empty"));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(validation(format!("state vector is not normalized (‖ψ‖ = {norm})")));
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis vector `|k⟩` of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(domain(format!("basis index {k} out of range for dimension {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: amps })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// `(1/√s) Σ_j |j⟩ ⊗ |j⟩` on an `s²`-dimensional space.
pub fn max_entangled(s: usize) -> Result<PureState> {
    if s < 2 {
        return Err(domain(format!("maximally entangled state needs s >= 2, got {s}")));
    }
    let amp = 1.0 / (s as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); s * s];
    for j in 0..s {
        amps[j * s + j] = Complex64::new(amp, 0.0);
    }
    Ok(PureState { amplitudes: amps })
}

/// Hermitian, unit-trace, positive semidefinite matrix with an optional
/// tensor factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    subsystem_dims: Option<Vec<usize>>,
}

impl DensityMatrix {
    /// Validates every density-matrix invariant.
    pub fn new(matrix: ComplexMatrix, subsystem_dims: Option<Vec<usize>>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(structural(format!("density matrix must be square, got {}x{}", matrix.rows(), matrix.cols())));
        }
        if !matrix.is_finite() {
            return Err(validation("density matrix has non-finite entries"));
        }
        check_dims(matrix.rows(), subsystem_dims.as_deref())?;
        let herm = matrix.hermiticity_defect();
        if herm > HERMITIAN_TOL {
            return Err(validation(format!("density matrix is not Hermitian (defect {herm:.3e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(validation(format!("density matrix trace is {tr}, expected 1")));
        }
        let matrix = matrix.hermitian_part();
        let min_eig = hermitian_eigenvalues(&matrix)?[0];
        if min_eig < -PSD_TOL {
            return Err(validation(format!("density matrix is not positive semidefinite (λ_min = {min_eig:.3e})")));
        }
        Ok(Self { matrix, subsystem_dims })
    }

    /// For matrices that are density matrices by construction (outputs of
    /// trace-preserving maps on valid inputs). Only the Hermitian part is kept.
    pub(crate) fn from_trusted(matrix: ComplexMatrix, subsystem_dims: Option<Vec<usize>>) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix: matrix.hermitian_part(), subsystem_dims }
    }

    /// Maximally mixed state `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64), None)
    }

    pub fn with_subsystems(self, dims: Vec<usize>) -> Result<Self> {
        check_dims(self.dim(), Some(&dims))?;
        Ok(Self { subsystem_dims: Some(dims), ..self })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn subsystem_dims(&self) -> Option<&[usize]> {
        self.subsystem_dims.as_deref()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix).expect("density matrix is Hermitian")
    }

    /// Number of eigenvalues above `floor`.
    pub fn rank(&self, floor: f64) -> usize {
        self.eigenvalues().iter().filter(|&&l| l > floor).count()
    }
}

fn check_dims(dim: usize, dims: Option<&[usize]>) -> Result<()> {
    if let Some(dims) = dims {
        if dims.is_empty() || dims.contains(&0) {
            return Err(structural("subsystem dimensions must be non-empty and positive"));
        }
        let product: usize = dims.iter().product();
        if product != dim {
            return Err(structural(format!("subsystem dimensions {dims:?} do not multiply to {dim}")));
        }
    }
    Ok(())
}

/// `|ψ⟩⟨ψ|`
pub fn density_from_pure(state: &PureState) -> DensityMatrix {
    let a = state.amplitudes();
    DensityMatrix::from_trusted(ComplexMatrix::outer(a, a), None)
}

/// Which tensor factor of a bipartite state to transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial transpose of a raw matrix on `H_A ⊗ H_B` with dimensions `(d_a, d_b)`.
pub fn partial_transpose_matrix(
    m: &ComplexMatrix,
    dims: (usize, usize),
    subsystem: Subsystem,
) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if !m.is_square() || m.rows() != da * db {
        return Err(structural(format!(
            "cannot partially transpose a {}x{} matrix over factors {da}x{db}",
            m.rows(),
            m.cols()
        )));
    }
    let n = da * db;
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    let (src_row, src_col) = match subsystem {
                        Subsystem::A => (a2 * db + b, a * db + b2),
                        Subsystem::B => (a * db + b2, a2 * db + b),
                    };
                    out[(a * db + b) * n + a2 * db + b2] = m.get(src_row, src_col);
                }
            }
        }
    }
    ComplexMatrix::from_row_major(n, n, &out)
}

fn bipartition(rho: &DensityMatrix) -> Result<(usize, usize)> {
    match rho.subsystem_dims() {
        Some(&[da, db]) => Ok((da, db)),
        Some(other) => Err(structural(format!("partial transpose needs exactly two factors, got {other:?}"))),
        None => Err(structural("partial transpose needs a bipartite factorization")),
    }
}

pub fn partial_transpose(rho: &DensityMatrix, subsystem: Subsystem) -> Result<ComplexMatrix> {
    partial_transpose_matrix(rho.matrix(), bipartition(rho)?, subsystem)
}

/// Sum of the magnitudes of the negative eigenvalues of `ρ^{T_B}`.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let pt = partial_transpose(rho, Subsystem::B)?;
    let eig = hermitian_eigenvalues(&pt)?;
    let abs_sum: f64 = eig.iter().filter(|l| l.abs() >= EIGEN_FLOOR).map(|l| l.abs()).sum();
    let sum: f64 = eig.iter().filter(|l| l.abs() >= EIGEN_FLOOR).sum();
    Ok((0.5 * (abs_sum - sum)).max(0.0))
}

/// `Tr ρ²`
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().as_dmatrix().iter().map(|z| z.norm_sqr()).sum()
}

/// `½ ‖ρ − σ‖₁`
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(structural(format!("dimension mismatch: {} vs {}", rho.dim(), sigma.dim())));
    }
    let diff = rho.matrix() - sigma.matrix();
    Ok(0.5 * hermitian_eigenvalues(&diff)?.iter().map(|l| l.abs()).sum::<f64>())
}
