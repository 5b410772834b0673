//! Seeded random matrices and states for property checks and sweeps.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::ComplexMatrix;
use crate::state::{DensityMatrix, PureState};

fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Haar-distributed `n x n` unitary (QR of a Ginibre matrix, phases fixed by `diag(R)`).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let qr = ginibre(rng, n, n).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_dmatrix(q)
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    let v = ginibre(rng, dim, 1);
    let norm = v.norm();
    PureState::new(v.iter().map(|z| z / norm).collect()).expect("normalized by construction")
}

/// `G G† / Tr(G G†)` with `G` of shape `dim x rank`: a random mixed state of rank `rank`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, rank.max(1));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_trusted(ComplexMatrix::from_dmatrix(m / Complex64::new(tr, 0.0)), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_and_state_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..6 {
            assert!(random_unitary(&mut rng, n).unitarity_defect() < 1e-12);
        }
        let rho = random_density(&mut rng, 6, 3);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        assert_eq!(rho.rank(1e-10), 3);
        assert_eq!(random_pure_state(&mut rng, 5).dim(), 5);
    }
}
