//! Kraus-operator quantum operations and the T1/T2 relaxation model.

use crate::error::{domain, structural, validation, Result};
use crate::matrix::{kron, ComplexMatrix};
use crate::state::DensityMatrix;

/// Maximum tolerated `‖Σ E_k†E_k − I‖_max`.
pub const COMPLETENESS_TOL: f64 = 1e-12;

/// Ordered Kraus set `{E_k}` mapping `dim_in`- to `dim_out`-dimensional states.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    operators: Vec<ComplexMatrix>,
}

/// `‖Σ_k E_k†E_k − I‖_max`, or infinity when the set is empty or ragged.
pub fn completeness_defect(operators: &[ComplexMatrix]) -> f64 {
    let Some(first) = operators.first() else {
        return f64::INFINITY;
    };
    let (rows, cols) = (first.rows(), first.cols());
    if operators.iter().any(|e| e.rows() != rows || e.cols() != cols) {
        return f64::INFINITY;
    }
    let sum = operators.iter().fold(ComplexMatrix::zeros(cols, cols), |acc, e| &acc + &(&e.adjoint() * e));
    sum.max_abs_diff(&ComplexMatrix::identity(cols))
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators.first().ok_or_else(|| validation("a channel needs at least one Kraus operator"))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if let Some(bad) = operators.iter().find(|e| e.rows() != dim_out || e.cols() != dim_in) {
            return Err(structural(format!(
                "Kraus operators must share a shape: {dim_out}x{dim_in} vs {}x{}",
                bad.rows(),
                bad.cols()
            )));
        }
        if operators.iter().any(|e| !e.is_finite()) {
            return Err(validation("Kraus operators have non-finite entries"));
        }
        let defect = completeness_defect(&operators);
        if !(defect <= COMPLETENESS_TOL) {
            return Err(validation(format!("Kraus set is not complete (‖ΣE†E − I‖ = {defect:.3e})")));
        }
        Ok(Self { dim_in, dim_out, operators })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim_in: dim, dim_out: dim, operators: vec![ComplexMatrix::identity(dim)] }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn is_square(&self) -> bool {
        self.dim_in == self.dim_out
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn completeness_defect(&self) -> f64 {
        completeness_defect(&self.operators)
    }

    /// `Σ_k E_k M E_k†` on an arbitrary matrix.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.rows() != self.dim_in || m.cols() != self.dim_in {
            return Err(structural(format!(
                "channel expects {0}x{0} input, got {1}x{2}",
                self.dim_in,
                m.rows(),
                m.cols()
            )));
        }
        Ok(self.operators.iter().fold(ComplexMatrix::zeros(self.dim_out, self.dim_out), |acc, e| &acc + &e.sandwich(m)))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_matrix(rho.matrix())?;
        let dims = if self.is_square() { rho.subsystem_dims().map(<[usize]>::to_vec) } else { None };
        Ok(DensityMatrix::from_trusted(out, dims))
    }

    /// `self` followed by `second`.
    pub fn then(&self, second: &Self) -> Result<Self> {
        compose(self, second)
    }
}

/// `ρ → Σ_k E_k ρ E_k†`
pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply(rho)
}

fn check_probability(name: &str, gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(domain(format!("{name} must lie in [0, 1], got {gamma}")));
    }
    Ok(())
}

/// Amplitude relaxation: `E0 = diag(1, √(1−γ))`, `E1 = √γ |0⟩⟨1|`.
pub fn amplitude_damping(gamma_a: f64) -> Result<KrausChannel> {
    check_probability("gamma_a", gamma_a)?;
    let e0 = ComplexMatrix::real_diagonal(&[1.0, (1.0 - gamma_a).sqrt()]);
    let e1 = ComplexMatrix::from_real_rows(&[[0.0, gamma_a.sqrt()], [0.0, 0.0]]);
    KrausChannel::new(vec![e0, e1])
}

/// Phase relaxation: `E0 = diag(1, √(1−γ))`, `E1 = diag(0, √γ)`.
pub fn phase_damping(gamma_p: f64) -> Result<KrausChannel> {
    check_probability("gamma_p", gamma_p)?;
    let e0 = ComplexMatrix::real_diagonal(&[1.0, (1.0 - gamma_p).sqrt()]);
    let e1 = ComplexMatrix::real_diagonal(&[0.0, gamma_p.sqrt()]);
    KrausChannel::new(vec![e0, e1])
}

pub fn unitary_channel(u: &ComplexMatrix) -> Result<KrausChannel> {
    if !u.is_square() {
        return Err(structural(format!("unitary must be square, got {}x{}", u.rows(), u.cols())));
    }
    let defect = u.unitarity_defect();
    if !(defect <= 1e-10) {
        return Err(validation(format!("matrix is not unitary (‖U†U − I‖ = {defect:.3e})")));
    }
    Ok(KrausChannel { dim_in: u.rows(), dim_out: u.rows(), operators: vec![u.clone()] })
}

/// Sequential composition: `first` acts, then `second`. Operators are
/// `F_j E_k` for every pair, zero products included.
pub fn compose(first: &KrausChannel, second: &KrausChannel) -> Result<KrausChannel> {
    if first.dim_out != second.dim_in {
        return Err(structural(format!(
            "cannot compose a channel with output dim {} into one with input dim {}",
            first.dim_out, second.dim_in
        )));
    }
    let operators = second.operators.iter().flat_map(|f| first.operators.iter().map(move |e| f * e)).collect();
    Ok(KrausChannel { dim_in: first.dim_in, dim_out: second.dim_out, operators })
}

/// Independent action on two tensor factors: operators `E_j ⊗ F_k`.
pub fn tensor_channel(a: &KrausChannel, b: &KrausChannel) -> KrausChannel {
    let operators = a.operators.iter().flat_map(|e| b.operators.iter().map(move |f| kron(e, f))).collect();
    KrausChannel { dim_in: a.dim_in * b.dim_in, dim_out: a.dim_out * b.dim_out, operators }
}

/// Time parameters of a relaxing qubit, all in the same time unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationParams {
    pub t: f64,
    pub t1: f64,
    pub t2: f64,
    /// `2 T1 T2 / (2 T1 − T2)`; infinite when `T2 = 2 T1`.
    pub t2_pure: f64,
    pub gamma_a: f64,
    pub gamma_p: f64,
}

impl RelaxationParams {
    /// Infinite `t1`/`t2` are accepted and mean "no relaxation of that kind".
    pub fn new(t: f64, t1: f64, t2: f64) -> Result<Self> {
        if !(t >= 0.0) || t.is_infinite() {
            return Err(domain(format!("duration t must be finite and >= 0, got {t}")));
        }
        if !(t1 > 0.0) {
            return Err(domain(format!("T1 must be > 0, got {t1}")));
        }
        if !(t2 > 0.0) {
            return Err(domain(format!("T2 must be > 0, got {t2}")));
        }
        if t1.is_finite() && t2 > 2.0 * t1 {
            return Err(domain(format!("unphysical: pure dephasing time negative (T2 = {t2} > 2·T1 = {})", 2.0 * t1)));
        }
        let t2_pure = if t1.is_infinite() {
            t2
        } else if t2 == 2.0 * t1 {
            f64::INFINITY
        } else {
            2.0 * t1 * t2 / (2.0 * t1 - t2)
        };
        let gamma_a = -(-t / t1).exp_m1();
        let gamma_p = -(-t / t2_pure).exp_m1();
        Ok(Self { t, t1, t2, t2_pure, gamma_a, gamma_p })
    }

    /// Amplitude relaxation followed by phase relaxation over `t`.
    pub fn channel(&self) -> KrausChannel {
        let amp = amplitude_damping(self.gamma_a).expect("gamma_a in [0, 1]");
        let phase = phase_damping(self.gamma_p).expect("gamma_p in [0, 1]");
        compose(&amp, &phase).expect("qubit channels compose")
    }
}

/// The same relaxation channel acting independently on each of `n_qubits`.
pub fn independent_relaxation(params: &RelaxationParams, n_qubits: usize) -> KrausChannel {
    let single = params.channel();
    (1..n_qubits).fold(single.clone(), |acc, _| tensor_channel(&acc, &single))
}
