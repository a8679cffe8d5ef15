//! Rayleigh–Ritz upper bounds from diagonalizing truncated Hamiltonians.

use rayon::prelude::*;

use crate::basis::OscillatorParams;
use crate::matel::{build_hamiltonian, MatrixElementTable};
use crate::{Error, Result};

/// Dimensions used when the caller gives none.
pub const DEFAULT_LADDER: [usize; 5] = [4, 8, 16, 32, 64];

/// Relative change in the ground value below which a sweep counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

/// Eigenpairs with eigenvalues ascending; `vectors[k]` belongs to `values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// max_k ‖Hv_k − λ_kv_k‖₂ for unit v_k.
    pub residual_norm: f64,
}

/// Full eigendecomposition of a dense symmetric matrix (row-major `dim×dim`)
/// by cyclic Jacobi rotations.
///
/// Each eigenvector's largest-magnitude component is made positive.
pub fn eigensolve_symmetric(h: &[f64], dim: usize) -> Result<SymmetricEigen> {
    if h.len() != dim * dim {
        return Err(Error::Misuse(format!("expected {} entries for a {dim}x{dim} matrix, got {}", dim * dim, h.len())));
    }
    if h.iter().any(|v| !v.is_finite()) {
        return Err(crate::error::domain!("matrix has non-finite entries"));
    }
    for i in 0..dim {
        for j in 0..i {
            let (x, y) = (h[i * dim + j], h[j * dim + i]);
            if (x - y).abs() > 1e-12 * x.abs().max(y.abs()) {
                return Err(crate::error::domain!("matrix is not symmetric at ({i},{j})"));
            }
        }
    }
    let mut a = h.to_vec();
    let mut v = vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }
    let frob = h.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut converged = dim < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..dim)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * dim + j] * a[i * dim + j])
            .sum();
        if off.sqrt() <= f64::EPSILON * 1e-3 * frob || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
                a[p * dim + q] = 0.0;
                a[q * dim + p] = 0.0;
                for k in 0..dim {
                    let vkp = v[k * dim + p];
                    let vkq = v[k * dim + q];
                    v[k * dim + p] = c * vkp - s * vkq;
                    v[k * dim + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!("Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")));
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| a[i * dim + i].total_cmp(&a[j * dim + j]));
    let mut values = Vec::with_capacity(dim);
    let mut vectors = Vec::with_capacity(dim);
    let mut residual_norm: f64 = 0.0;
    for &k in &order {
        let lam = a[k * dim + k];
        let mut col: Vec<f64> = (0..dim).map(|i| v[i * dim + k]).collect();
        let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        let lead = col.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        let scale = lead.signum() / norm;
        col.iter_mut().for_each(|x| *x *= scale);
        let r = (0..dim)
            .map(|i| {
                let hv: f64 = (0..dim).map(|j| h[i * dim + j] * col[j]).sum();
                (hv - lam * col[i]).powi(2)
            })
            .sum::<f64>()
            .sqrt();
        residual_norm = residual_norm.max(r);
        values.push(lam);
        vectors.push(col);
    }
    if residual_norm > 1e-10 * frob.max(f64::MIN_POSITIVE) {
        return Err(Error::NonConvergence(format!(
            "eigenpair residual {residual_norm:e} exceeds 1e-10 times the Frobenius norm {frob:e}"
        )));
    }
    Ok(SymmetricEigen {
        values,
        vectors,
        residual_norm,
    })
}

/// Variational spectrum at one basis dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub dim: usize,
    pub eigenvalues: Vec<f64>,
    pub residual_norm: f64,
    pub params: OscillatorParams,
}

fn solve_table(table: &MatrixElementTable) -> Result<SpectrumResult> {
    let eig = eigensolve_symmetric(table.values(), table.dim())?;
    Ok(SpectrumResult {
        dim: table.dim(),
        eigenvalues: eig.values,
        residual_norm: eig.residual_norm,
        params: table.params,
    })
}

/// Eigenvalues of the dim×dim truncated Hamiltonian.
pub fn spectrum(params: &OscillatorParams, dim: usize) -> Result<SpectrumResult> {
    solve_table(&build_hamiltonian(params, dim)?)
}

/// Spectra over a ladder of dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalSweep {
    pub results: Vec<SpectrumResult>,
    /// The last two ground values agree to [`CONVERGENCE_TOL`] relative.
    pub converged: bool,
    /// Every eigenvalue index is non-increasing in the dimension (up to roundoff).
    pub monotone: bool,
}

/// Diagonalizes the leading blocks of one table built at the largest dimension.
pub fn variational_sweep(params: &OscillatorParams, dims: &[usize]) -> Result<VariationalSweep> {
    if dims.is_empty() {
        return Err(Error::Misuse("dimension list is empty".into()));
    }
    if dims.windows(2).any(|w| w[0] >= w[1]) || dims[0] == 0 {
        return Err(Error::Misuse(format!("dimension list must be positive and strictly ascending, got {dims:?}")));
    }
    let full = build_hamiltonian(params, *dims.last().unwrap())?;
    let results: Vec<SpectrumResult> = dims
        .par_iter()
        .map(|&d| solve_table(&full.leading_block(d)))
        .collect::<Result<_>>()?;

    let monotone = results.windows(2).all(|w| {
        w[0].eigenvalues
            .iter()
            .zip(&w[1].eigenvalues)
            .all(|(&small, &big)| big <= small + 1e-12 * small.abs().max(1.0))
    });
    let converged = match results.as_slice() {
        [.., prev, last] => {
            let (e0, e1) = (prev.eigenvalues[0], last.eigenvalues[0]);
            (e0 - e1).abs() < CONVERGENCE_TOL * e1.abs()
        }
        _ => false,
    };
    Ok(VariationalSweep {
        results,
        converged,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_matrices() {
        let e = eigensolve_symmetric(&[2.5], 1).unwrap();
        assert_eq!(e.values, vec![2.5]);
        assert_eq!(e.vectors, vec![vec![1.0]]);

        let e = eigensolve_symmetric(&[3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0], 3).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);

        let (a, b, d) = (1.3, -0.7, 4.1);
        let e = eigensolve_symmetric(&[a, b, b, d], 2).unwrap();
        let mid = 0.5 * (a + d);
        let rad = ((0.5 * (a - d)).powi(2) + b * b).sqrt();
        assert_relative_eq!(e.values[0], mid - rad, max_relative = 1e-15);
        assert_relative_eq!(e.values[1], mid + rad, max_relative = 1e-15);
    }

    #[test]
    fn phase_and_residual() {
        let dim = 12;
        let h: Vec<f64> = (0..dim * dim)
            .map(|k| {
                let (i, j) = (k / dim, k % dim);
                1.0 / (1.0 + i as f64 + j as f64) + if i == j { i as f64 } else { 0.0 }
            })
            .collect();
        let e = eigensolve_symmetric(&h, dim).unwrap();
        assert!(e.residual_norm < 1e-12);
        for v in &e.vectors {
            let lead = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            assert!(lead > 0.0);
        }
        for w in e.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(eigensolve_symmetric(&[1.0, 2.0, 3.0], 2), Err(Error::Misuse(_))));
        assert!(matches!(eigensolve_symmetric(&[1.0, 2.0, 3.0, 1.0], 2), Err(Error::Domain(_))));
        assert!(eigensolve_symmetric(&[f64::NAN], 1).is_err());
    }

    #[test]
    fn unperturbed_sweep_is_exact() {
        let p = OscillatorParams::new(0.4, 2.0, 1.0, 0.0).unwrap();
        let s = variational_sweep(&p, &[1, 3, 6]).unwrap();
        for r in &s.results {
            for (k, &e) in r.eigenvalues.iter().enumerate() {
                assert_eq!(e, crate::basis::energy_n(&p, k));
            }
        }
        assert!(s.monotone && s.converged);
    }

    #[test]
    fn alpha2_family_bounds_from_above() {
        let p = OscillatorParams::new(0.0, 1.0, 2.0, 0.5).unwrap();
        let exact = crate::perturb::energy_exact_alpha2(&p).unwrap();
        assert_relative_eq!(exact, 2.0 + 3f64.sqrt(), max_relative = 1e-15);
        let dims: Vec<usize> = (1..=24).collect();
        let s = variational_sweep(&p, &dims).unwrap();
        assert!(s.monotone);
        let mut last = f64::INFINITY;
        for r in &s.results {
            let e = r.eigenvalues[0];
            assert!(e >= exact - 1e-12 && e <= last + 1e-12);
            last = e;
        }
    }

    #[test]
    fn small_coupling_continuity() {
        for &alpha in &[0.5, 1.0, 2.0] {
            let p = OscillatorParams::new(1.0, 1.0, alpha, 1e-8).unwrap();
            let r = spectrum(&p, 10).unwrap();
            for (k, &e) in r.eigenvalues.iter().enumerate() {
                assert!((e - crate::basis::energy_n(&p, k)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn sweep_argument_checks() {
        let p = OscillatorParams::new(0.0, 1.0, 1.0, 1.0).unwrap();
        assert!(variational_sweep(&p, &[]).is_err());
        assert!(variational_sweep(&p, &[4, 4]).is_err());
        assert!(variational_sweep(&p, &[8, 4]).is_err());
    }
}
