//! Process (χ) matrices through the Choi–Jamiołkowski construction, and
//! noisy gates built by interleaving gate slices with relaxation.
//!
//! The Choi state of a channel `E` on an `s`-dimensional system is
//! `(E ⊗ id)(|Φ⟩⟨Φ|)` with `|Φ⟩ = s^{-1/2} Σ_j |j⟩|j⟩`; the system copy A is the
//! left tensor factor and the reference copy B the right one. `χ = s ·` Choi state,
//! so `Tr χ = s`.

use nalgebra::linalg::Schur;
use num_complex::Complex64;

use crate::channels::{independent_relaxation, tensor_channel, unitary_channel, KrausChannel, RelaxationParams};
use crate::error::{domain, structural, validation, Error, Result};
use crate::matrix::{c, hermitian_eigenvalues, hermitian_eigh, ComplexMatrix, ONE, ZERO};
use crate::state::{density_from_pure, max_entangled, negativity, trace_distance, DensityMatrix};

/// Eigenvalue floor used for χ rank counts.
pub const CHI_RANK_FLOOR: f64 = 1e-10;

/// Default number of gate slices.
pub const DEFAULT_SLICES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    s: usize,
    matrix: ComplexMatrix,
}

impl ChiMatrix {
    /// Validates Hermiticity, `Tr χ = s` and positivity.
    pub fn new(s: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != s * s || !matrix.is_square() {
            return Err(structural(format!("χ for s = {s} must be {0}x{0}", s * s)));
        }
        if matrix.hermiticity_defect() > 1e-10 {
            return Err(validation("χ matrix is not Hermitian"));
        }
        let tr = matrix.trace();
        if (tr.re - s as f64).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(validation(format!("Tr χ = {tr}, expected {s}")));
        }
        let chi = Self { s, matrix: matrix.hermitian_part() };
        if chi.eigenvalues()[0] < -1e-10 * s as f64 {
            return Err(validation("χ matrix is not positive semidefinite"));
        }
        Ok(chi)
    }

    pub(crate) fn from_choi_matrix(s: usize, choi: &ComplexMatrix) -> Self {
        Self { s, matrix: choi.hermitian_part().scale_real(s as f64) }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `χ / s` as a bipartite density matrix with factors `[s, s]`.
    pub fn choi_state(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(self.matrix.scale_real(1.0 / self.s as f64), Some(vec![self.s, self.s]))
    }

    /// Eigenvalues of χ, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix).expect("χ is Hermitian")
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues().iter().filter(|&&l| l > CHI_RANK_FLOOR).count()
    }

    /// Trace distance between the normalized Choi states `χ/s`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.s != other.s {
            return Err(structural(format!("χ dimension mismatch: s = {} vs {}", self.s, other.s)));
        }
        trace_distance(&self.choi_state(), &other.choi_state())
    }
}

fn choi_input(s: usize) -> Result<DensityMatrix> {
    Ok(density_from_pure(&max_entangled(s)?))
}

/// χ of a square channel via its action on half of a maximally entangled pair.
pub fn chi_from_channel(ch: &KrausChannel) -> Result<ChiMatrix> {
    if !ch.is_square() {
        return Err(structural(format!("χ needs a square channel, got {} -> {}", ch.dim_in(), ch.dim_out())));
    }
    let s = ch.dim_in();
    let extended = tensor_channel(ch, &KrausChannel::identity(s));
    let choi = extended.apply_matrix(choi_input(s)?.matrix())?;
    Ok(ChiMatrix::from_choi_matrix(s, &choi))
}

/// Canonical Kraus set from the spectral decomposition of χ. Operators are
/// `√λ_k` times the row-major reshaping of each eigenvector with `λ_k > 0`.
pub fn kraus_from_chi(chi: &ChiMatrix) -> Result<KrausChannel> {
    let s = chi.s;
    let (values, vectors) = hermitian_eigh(&chi.matrix)?;
    let mut operators = Vec::new();
    for (k, &lambda) in values.iter().enumerate().rev() {
        if lambda <= 0.0 {
            continue;
        }
        let scale = lambda.sqrt();
        let entries: Vec<Complex64> = (0..s * s).map(|i| vectors.get(i, k) * scale).collect();
        operators.push(ComplexMatrix::from_row_major(s, s, &entries)?);
    }
    KrausChannel::new(operators)
}

/// Principal `n`-th root of a unitary: eigenphases taken in `(−π, π]` and divided by `n`.
pub fn gate_fraction(u: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(domain("gate fraction needs n >= 1"));
    }
    unitary_channel(u)?;
    if n == 1 {
        return Ok(u.clone());
    }
    let schur = Schur::try_new(u.as_dmatrix().clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("Schur decomposition of the gate did not converge".into()))?;
    let (q, t) = schur.unpack();
    let dim = u.rows();
    let roots: Vec<Complex64> = (0..dim)
        .map(|k| {
            let z = t[(k, k)];
            let mut phase = z.arg();
            if phase <= -std::f64::consts::PI + 1e-12 {
                phase = std::f64::consts::PI;
            }
            Complex64::from_polar(1.0, phase / n as f64)
        })
        .collect();
    let q = ComplexMatrix::from_dmatrix(q);
    Ok(q.sandwich(&ComplexMatrix::diagonal(&roots)))
}

/// √iSWAP: identity on `|00⟩, |11⟩`, `[[1, i], [i, 1]]/√2` on `{|01⟩, |10⟩}`.
pub fn sqisw() -> ComplexMatrix {
    let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ih = c(0.0, std::f64::consts::FRAC_1_SQRT_2);
    ComplexMatrix::from_rows(&[
        [ONE, ZERO, ZERO, ZERO],
        [ZERO, h, ih, ZERO],
        [ZERO, ih, h, ZERO],
        [ZERO, ZERO, ZERO, ONE],
    ])
}

pub fn iswap() -> ComplexMatrix {
    let i = c(0.0, 1.0);
    ComplexMatrix::from_rows(&[
        [ONE, ZERO, ZERO, ZERO],
        [ZERO, ZERO, i, ZERO],
        [ZERO, i, ZERO, ZERO],
        [ZERO, ZERO, ZERO, ONE],
    ])
}

/// Where relaxation sits relative to each gate slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SliceOrder {
    /// Slice unitary, then relaxation for `Δt`.
    #[default]
    GateThenNoise,
    NoiseThenGate,
}

/// A gate of duration `t_gate` on `log2(s)` qubits with identical independent
/// T1/T2 relaxation, simulated in `slices` equal steps.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyGateSpec {
    pub gate: ComplexMatrix,
    pub t_gate: f64,
    pub slices: usize,
    pub t1: f64,
    pub t2: f64,
    pub order: SliceOrder,
}

impl NoisyGateSpec {
    pub fn new(gate: ComplexMatrix, t_gate: f64, slices: usize, t1: f64, t2: f64) -> Result<Self> {
        let spec = Self { gate, t_gate, slices, t1, t2, order: SliceOrder::default() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_slices(&self, slices: usize) -> Self {
        Self { slices, ..self.clone() }
    }

    pub fn with_order(&self, order: SliceOrder) -> Self {
        Self { order, ..self.clone() }
    }

    pub fn dt(&self) -> f64 {
        self.t_gate / self.slices as f64
    }

    pub fn s(&self) -> usize {
        self.gate.rows()
    }

    pub fn n_qubits(&self) -> usize {
        self.s().trailing_zeros() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.slices == 0 {
            return Err(domain("slice count N must be >= 1"));
        }
        if !(self.t_gate >= 0.0) || self.t_gate.is_infinite() {
            return Err(domain(format!("gate time must be finite and >= 0, got {}", self.t_gate)));
        }
        let s = self.gate.rows();
        if !self.gate.is_square() || s < 2 || !s.is_power_of_two() {
            return Err(structural(format!(
                "gate must be a square 2^n x 2^n matrix, got {}x{}",
                self.gate.rows(),
                self.gate.cols()
            )));
        }
        unitary_channel(&self.gate)?;
        RelaxationParams::new(self.dt(), self.t1, self.t2)?;
        Ok(())
    }

    fn step_channels(&self) -> Result<(KrausChannel, KrausChannel)> {
        let s = self.s();
        let slice = unitary_channel(&gate_fraction(&self.gate, self.slices)?)?;
        let noise = independent_relaxation(&RelaxationParams::new(self.dt(), self.t1, self.t2)?, self.n_qubits());
        let reference = KrausChannel::identity(s);
        Ok((tensor_channel(&slice, &reference), tensor_channel(&noise, &reference)))
    }
}

/// Choi-state trajectory: entry `k` is the Choi matrix after `k` slices.
fn choi_trajectory(spec: &NoisyGateSpec, noisy: bool) -> Result<Vec<ComplexMatrix>> {
    spec.validate()?;
    let (slice, noise) = spec.step_channels()?;
    let mut state = choi_input(spec.s())?.into_matrix();
    let mut out = Vec::with_capacity(spec.slices + 1);
    out.push(state.clone());
    for _ in 0..spec.slices {
        state = match (noisy, spec.order) {
            (false, _) => slice.apply_matrix(&state)?,
            (true, SliceOrder::GateThenNoise) => noise.apply_matrix(&slice.apply_matrix(&state)?)?,
            (true, SliceOrder::NoiseThenGate) => slice.apply_matrix(&noise.apply_matrix(&state)?)?,
        };
        out.push(state.clone());
    }
    Ok(out)
}

/// χ of the sliced noisy gate.
pub fn noisy_gate_chi(spec: &NoisyGateSpec) -> Result<ChiMatrix> {
    let traj = choi_trajectory(spec, true)?;
    Ok(ChiMatrix::from_choi_matrix(spec.s(), traj.last().expect("non-empty trajectory")))
}

/// The sliced noisy gate as a (canonical, at most `s²`-element) Kraus channel,
/// action-equal to `[noise(Δt) ∘ slice]^N`.
pub fn noisy_gate_channel(spec: &NoisyGateSpec) -> Result<KrausChannel> {
    kraus_from_chi(&noisy_gate_chi(spec)?)
}

/// Trace distance between the χ-matrices at `N` and `2N` slices.
pub fn slicing_convergence(spec: &NoisyGateSpec) -> Result<f64> {
    let coarse = noisy_gate_chi(spec)?;
    let fine = noisy_gate_chi(&spec.with_slices(2 * spec.slices))?;
    coarse.trace_distance(&fine)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityPoint {
    pub slice: usize,
    pub time: f64,
    pub ideal: f64,
    pub noisy: f64,
}

/// Negativity of the Choi state (system A vs reference B) after each of
/// `k = 0..=N` slices, with and without relaxation.
pub fn negativity_dynamics(spec: &NoisyGateSpec) -> Result<Vec<NegativityPoint>> {
    let s = spec.s();
    let ideal = choi_trajectory(spec, false)?;
    let noisy = choi_trajectory(spec, true)?;
    let neg = |m: &ComplexMatrix| negativity(&DensityMatrix::from_trusted(m.clone(), Some(vec![s, s])));
    ideal
        .iter()
        .zip(&noisy)
        .enumerate()
        .map(|(k, (i, n))| Ok(NegativityPoint { slice: k, time: k as f64 * spec.dt(), ideal: neg(i)?, noisy: neg(n)? }))
        .collect()
}
