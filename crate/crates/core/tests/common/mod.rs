//! Independent reference computations shared by the integration tests.
//! Nothing here calls the crate's own eigen or χ routines.

#![allow(dead_code)]

use num_complex::Complex64;
use qrelax::ComplexMatrix;

/// Eigenvalues of a Hermitian `H = A + iB` from cyclic Jacobi on the real
/// symmetric embedding `[[A, −B], [B, A]]`, whose spectrum is that of `H`
/// with every eigenvalue doubled. Ascending.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_hermitian_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.rows();
    let m = 2 * n;
    let mut a = vec![vec![0.0f64; m]; m];
    for i in 0..n {
        for j in 0..n {
            let z = h.get(i, j);
            a[i][j] = z.re;
            a[i + n][j + n] = z.re;
            a[i][j + n] = -z.im;
            a[i + n][j] = z.im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut diag: Vec<f64> = (0..m).map(|i| a[i][i]).collect();
    diag.sort_by(f64::total_cmp);
    diag.into_iter().step_by(2).collect()
}

/// `ρ^{T_B}` for `ρ` on `C^da ⊗ C^db`, written out index by index.
pub fn partial_transpose_b(rho: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    let mut out = vec![Complex64::new(0.0, 0.0); (da * db) * (da * db)];
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    out[(a * db + b2) * da * db + (a2 * db + b)] = rho.get(a * db + b, a2 * db + b2);
                }
            }
        }
    }
    ComplexMatrix::from_row_major(da * db, da * db, &out).unwrap()
}

pub fn brute_force_negativity(rho: &ComplexMatrix, da: usize, db: usize) -> f64 {
    jacobi_hermitian_eigenvalues(&partial_transpose_b(rho, da, db)).iter().filter(|&&x| x < 0.0).map(|x| -x).sum()
}

/// `χ = Σ_k vec(E_k) vec(E_k)†` with row-major `vec`: the Choi construction
/// with the system as the left factor, scaled by the dimension.
pub fn chi_from_kraus(ops: &[ComplexMatrix]) -> ComplexMatrix {
    let s = ops[0].rows();
    let mut chi = vec![Complex64::new(0.0, 0.0); s.pow(4)];
    for e in ops {
        let v = e.to_row_major();
        for i in 0..s * s {
            for j in 0..s * s {
                chi[i * s * s + j] += v[i] * v[j].conj();
            }
        }
    }
    ComplexMatrix::from_row_major(s * s, s * s, &chi).unwrap()
}

/// Trace distance `½ Σ|λ|` of the Hermitian difference, via Jacobi.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    0.5 * jacobi_hermitian_eigenvalues(&(a - b).hermitian_part()).iter().map(|x| x.abs()).sum::<f64>()
}
