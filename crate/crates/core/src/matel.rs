//! Matrix elements of x^{−α} between oscillator eigenstates and the
//! Hamiltonian matrix built from them.

use rayon::prelude::*;

use crate::basis::{energy_n, ln_norm_coeff, OscillatorParams};
use crate::specfun::dd::Dd;
use crate::specfun::{lgamma_pos, ln_factorial, ln_pochhammer, terminating_sum_dd};
use crate::{Error, Result};

fn parity(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Dense symmetric table indexed by basis labels, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixElementTable {
    pub params: OscillatorParams,
    dim: usize,
    values: Vec<f64>,
}

impl MatrixElementTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.values[m * self.dim + n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, m: usize) -> &[f64] {
        &self.values[m * self.dim..(m + 1) * self.dim]
    }

    /// Leading k×k block.
    pub fn leading_block(&self, k: usize) -> MatrixElementTable {
        assert!(k <= self.dim, "block {k} exceeds table dimension {}", self.dim);
        let mut values = Vec::with_capacity(k * k);
        for m in 0..k {
            values.extend_from_slice(&self.row(m)[..k]);
        }
        MatrixElementTable {
            params: self.params,
            dim: k,
            values,
        }
    }

    /// Rows as nested vectors.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|m| self.row(m).to_vec()).collect()
    }

    /// Fills the upper triangle in parallel and mirrors it.
    fn symmetric_from<F>(params: OscillatorParams, dim: usize, entry: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<f64> + Sync,
    {
        let pairs: Vec<(usize, usize)> = (0..dim)
            .flat_map(|m| (m..dim).map(move |n| (m, n)))
            .collect();
        let upper: Vec<f64> = pairs
            .par_iter()
            .map(|&(m, n)| entry(m, n))
            .collect::<Result<_>>()?;
        let mut values = vec![0.0; dim * dim];
        for (&(m, n), &v) in pairs.iter().zip(&upper) {
            values[m * dim + n] = v;
            values[n * dim + m] = v;
        }
        Ok(MatrixElementTable {
            params,
            dim,
            values,
        })
    }
}

/// ⟨m|x^{−α}|n⟩ from the terminating ₃F₂ at unit argument:
///
/// (−1)^{m+n} B^{α/4} √((γ)_n(γ)_m/(n!m!)) Γ(γ−α/2)(α/2)_n/((γ)_nΓ(γ))
///   · ₃F₂(−m, γ−α/2, 1−α/2; γ, 1−α/2−n; 1)
///
/// The formula is not manifestly symmetric in m and n. When the lower
/// parameter 1−α/2−n hits zero within the sum (α/2 an integer, m > n) the
/// singularity is removable and the entry is taken from the limit at α = 2
/// or from the finite double sum.
pub fn matrix_element(params: &OscillatorParams, m: usize, n: usize) -> Result<f64> {
    params.require_regular()?;
    let g = params.gamma();
    let a = 0.5 * params.alpha();
    let lower = Dd::sum(1.0, -a) - Dd::new(n as f64);
    if (0..m).any(|i| (lower + Dd::new(i as f64)).is_zero()) {
        return if params.alpha() == 2.0 {
            matrix_element_alpha2(params, m, n)
        } else {
            double_sum_element(params, m, n)
        };
    }
    let upper = [Dd::sum(g, -a), Dd::sum(1.0, -a)];
    let f = terminating_sum_dd(m, &upper, &[Dd::new(g), lower], 1.0)?.to_f64();
    if f == 0.0 {
        return Ok(0.0);
    }
    let (ln_gn, _) = ln_pochhammer(g, n);
    let (ln_gm, _) = ln_pochhammer(g, m);
    let (ln_an, _) = ln_pochhammer(a, n);
    let ln = 0.25 * params.alpha() * params.b().ln()
        + 0.5 * (ln_gn + ln_gm - ln_factorial(n) - ln_factorial(m))
        + lgamma_pos(g - a)
        + ln_an
        - ln_gn
        - lgamma_pos(g)
        + f.abs().ln();
    Ok(parity(m + n) * f.signum() * ln.exp())
}

/// ⟨m|x^{−2}|n⟩ in closed form:
/// (−1)^{m+n} (√B/(γ−1)) √(M!/μ!) √((γ)_μ/(γ)_M) with μ = min, M = max.
pub fn matrix_element_alpha2(params: &OscillatorParams, m: usize, n: usize) -> Result<f64> {
    let g = params.gamma();
    if g == 1.0 {
        return Err(Error::Pole("x^-2 elements have a pole at gamma = 1".into()));
    }
    if !(g > 1.0) {
        return Err(crate::error::domain!("x^-2 elements need gamma > 1, got {g}"));
    }
    let (lo, hi) = (m.min(n), m.max(n));
    let ln = 0.5
        * (ln_factorial(hi) - ln_factorial(lo) + ln_pochhammer(g, lo).0 - ln_pochhammer(g, hi).0);
    Ok(parity(m + n) * params.b().sqrt() / (g - 1.0) * ln.exp())
}

/// ⟨m|x^{−α}|n⟩ from the finite double sum
///
/// ½ T_n T_m B^{α/4−γ/2} Σ_k Σ_l (−m)_k (−n)_l Γ(γ−α/2+k+l) / ((γ)_k (γ)_l k! l!)
///
/// summed in double-double. It has no removable singularities but cancels
/// heavily once m and n grow, so it serves as the fallback and as a check.
pub fn double_sum_element(params: &OscillatorParams, m: usize, n: usize) -> Result<f64> {
    params.require_regular()?;
    let g = params.gamma();
    let a = 0.5 * params.alpha();
    let shift = Dd::sum(g, -a);
    let gd = Dd::new(g);
    let coeffs = |top: usize| {
        let mut c = Vec::with_capacity(top + 1);
        let mut t = Dd::ONE;
        c.push(t);
        for k in 0..top {
            let kd = Dd::new(k as f64);
            t = t * Dd::new(k as f64 - top as f64) / ((gd + kd) * Dd::new(k as f64 + 1.0));
            c.push(t);
        }
        c
    };
    let ck = coeffs(m);
    let cl = coeffs(n);
    // Γ(γ−α/2+j)/Γ(γ−α/2) = (γ−α/2)_j
    let mut poch = Vec::with_capacity(m + n + 1);
    let mut p = Dd::ONE;
    poch.push(p);
    for j in 0..m + n {
        p = p * (shift + Dd::new(j as f64));
        poch.push(p);
    }
    let mut sum = Dd::ZERO;
    for (k, &c) in ck.iter().enumerate() {
        let mut inner = Dd::ZERO;
        for (l, &d) in cl.iter().enumerate() {
            inner = inner + d * poch[k + l];
        }
        sum = sum + c * inner;
    }
    let s = sum.to_f64();
    if s == 0.0 {
        return Ok(0.0);
    }
    let (ln_tn, sn) = ln_norm_coeff(params, n);
    let (ln_tm, sm) = ln_norm_coeff(params, m);
    let ln = -std::f64::consts::LN_2
        + ln_tn
        + ln_tm
        + (0.25 * params.alpha() - 0.5 * g) * params.b().ln()
        + lgamma_pos(g - a)
        + s.abs().ln();
    Ok(sn * sm * s.signum() * ln.exp())
}

/// Table of ⟨m|x^{−α}|n⟩ for m, n < dim.
pub fn potential_table(params: &OscillatorParams, dim: usize) -> Result<MatrixElementTable> {
    params.require_regular()?;
    MatrixElementTable::symmetric_from(*params, dim, |m, n| matrix_element(params, m, n))
}

/// H_mn = 2√B(2n+γ)δ_mn + λ⟨m|x^{−α}|n⟩.
pub fn hamiltonian_element(params: &OscillatorParams, m: usize, n: usize) -> Result<f64> {
    let diag = if m == n { energy_n(params, n) } else { 0.0 };
    if params.lambda() == 0.0 {
        return Ok(diag);
    }
    Ok(diag + params.lambda() * matrix_element(params, m, n)?)
}

/// The dim×dim Hamiltonian matrix in the oscillator basis.
pub fn build_hamiltonian(params: &OscillatorParams, dim: usize) -> Result<MatrixElementTable> {
    if dim == 0 {
        return Err(Error::Misuse("basis dimension must be at least 1".into()));
    }
    if params.lambda() != 0.0 {
        params.require_regular()?;
    }
    MatrixElementTable::symmetric_from(*params, dim, |m, n| hamiltonian_element(params, m, n))
}

/// A path in parameter space along which γ − α/2 = λ^p → 0 with α fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VestigePath {
    /// γ − α/2 = λ.
    Linear,
    /// γ − α/2 = λ^p.
    Power(f64),
}

impl VestigePath {
    pub fn exponent(self) -> f64 {
        match self {
            VestigePath::Linear => 1.0,
            VestigePath::Power(p) => p,
        }
    }

    /// Parameters at a point λ > 0 of the path. Needs α ≥ 3 so that A ≥ 0
    /// near the endpoint.
    pub fn params_at(self, b: f64, alpha: f64, lambda: f64) -> Result<OscillatorParams> {
        if !(lambda > 0.0) {
            return Err(crate::error::domain!("path parameter must be positive, got {lambda}"));
        }
        OscillatorParams::from_gamma(0.5 * alpha + lambda.powf(self.exponent()), b, alpha, lambda)
    }
}

/// Limit of H_mn as λ → 0 along `path`, with γ → α/2.
///
/// On the linear path λΓ(γ−α/2) → 1 and a finite remnant of the spike
/// survives; on λ^p paths with p < 1 it vanishes.
pub fn vestige_element(path: VestigePath, b: f64, alpha: f64, m: usize, n: usize) -> Result<f64> {
    let g = 0.5 * alpha;
    if !(b > 0.0) || !(g > 0.0) {
        return Err(crate::error::domain!("vestige limit needs B > 0 and alpha > 0"));
    }
    let diag = if m == n {
        2.0 * b.sqrt() * (2.0 * n as f64 + g)
    } else {
        0.0
    };
    let p = path.exponent();
    if p < 1.0 {
        return Ok(diag);
    }
    if p > 1.0 {
        return Err(Error::Divergence(format!(
            "lambda Gamma(lambda^{p}) diverges as lambda -> 0"
        )));
    }
    let ln = 0.5 * g * b.ln() - lgamma_pos(g)
        + 0.5 * (ln_pochhammer(g, n).0 + ln_pochhammer(g, m).0 - ln_factorial(n) - ln_factorial(m));
    Ok(diag + parity(m + n) * ln.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(a: f64, b: f64, alpha: f64, lambda: f64) -> OscillatorParams {
        OscillatorParams::new(a, b, alpha, lambda).unwrap()
    }

    #[test]
    fn ground_state_examples() {
        assert_relative_eq!(matrix_element(&p(0.0, 1.0, 2.0, 1.0), 0, 0).unwrap(), 2.0, max_relative = 1e-14);
        let pi = std::f64::consts::PI;
        assert_relative_eq!(
            matrix_element(&p(0.0, 1.0, 1.0, 1.0), 0, 0).unwrap(),
            2.0 / pi.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn alpha2_closed_form_matches_general_form() {
        for &a in &[0.0, 0.7, 3.0] {
            let q = p(a, 1.7, 2.0, 1.0);
            for m in 0..8 {
                for n in 0..8 {
                    let want = matrix_element_alpha2(&q, m, n).unwrap();
                    assert_relative_eq!(matrix_element(&q, m, n).unwrap(), want, max_relative = 1e-12);
                }
            }
        }
        // m = 1, n = 0 at γ = 3/2: −2·√(3/2)
        let v = matrix_element_alpha2(&p(0.0, 1.0, 2.0, 1.0), 1, 0).unwrap();
        assert_relative_eq!(v, -2.0 / 1.5f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn continuity_in_alpha_near_two() {
        let q = p(0.5, 1.0, 2.0, 1.0);
        for &da in &[1e-6, -1e-6] {
            let qa = q.with_alpha(2.0 + da).unwrap();
            for m in 0..6 {
                for n in 0..6 {
                    let lim = matrix_element_alpha2(&q, m, n).unwrap();
                    let v = matrix_element(&qa, m, n).unwrap();
                    assert!(((v - lim) / lim).abs() < 1e-5, "m={m} n={n}: {v} vs {lim}");
                }
            }
        }
    }

    #[test]
    fn symmetric_to_1e10_up_to_30() {
        for &alpha in &[0.5, 1.0, 1.5, 2.5] {
            for &g in &[1.5, 2.5, 4.0] {
                let q = OscillatorParams::from_gamma(g, 1.0, alpha, 1.0).unwrap();
                for m in 0..=30 {
                    for n in 0..m {
                        let x = matrix_element(&q, m, n).unwrap();
                        let y = matrix_element(&q, n, m).unwrap();
                        let rel = (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
                        assert!(rel <= 1e-10, "alpha={alpha} gamma={g} ({m},{n}): {x} vs {y}");
                    }
                }
            }
        }
    }

    #[test]
    fn double_sum_agrees_up_to_12() {
        for &alpha in &[0.5, 1.0, 2.0, 2.5, 4.0] {
            for &g in &[1.5, 2.5, 4.0] {
                let q = OscillatorParams::from_gamma(g, 1.3, alpha, 1.0).unwrap();
                if q.require_regular().is_err() {
                    continue;
                }
                for m in 0..=12 {
                    for n in m..=12 {
                        let x = matrix_element(&q, m, n).unwrap();
                        let y = double_sum_element(&q, m, n).unwrap();
                        assert_relative_eq!(x, y, max_relative = 1e-10, epsilon = 1e-300);
                    }
                }
            }
        }
    }

    #[test]
    fn removable_singularity_fallback() {
        // α = 4: lower parameter −1−n vanishes inside the sum when m > n+1
        let q = OscillatorParams::from_gamma(3.5, 1.0, 4.0, 1.0).unwrap();
        for m in 0..10 {
            for n in 0..m {
                let x = matrix_element(&q, m, n).unwrap();
                let y = matrix_element(&q, n, m).unwrap();
                assert_relative_eq!(x, y, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn domain_and_pole_errors() {
        let q = p(0.0, 1.0, 3.0, 1.0);
        assert!(matches!(matrix_element(&q, 0, 0), Err(Error::Domain(_))));
        let q = OscillatorParams::from_gamma(1.5, 1.0, 1.0, 1.0).unwrap();
        assert!(matrix_element_alpha2(&q, 0, 0).is_ok());
    }

    #[test]
    fn hamiltonian_examples() {
        let q = p(0.0, 1.0, 1.0, 0.3);
        let h = build_hamiltonian(&q, 1).unwrap();
        let pi = std::f64::consts::PI;
        assert_relative_eq!(h.get(0, 0), 3.0 + 0.3 * 2.0 / pi.sqrt(), max_relative = 1e-14);

        let h = build_hamiltonian(&p(1.0, 2.0, 1.0, 0.0), 5).unwrap();
        for m in 0..5 {
            for n in 0..5 {
                let want = if m == n { energy_n(&h.params, n) } else { 0.0 };
                assert_eq!(h.get(m, n), want);
            }
        }

        let h = build_hamiltonian(&p(0.5, 1.3, 1.5, 0.8), 12).unwrap();
        for m in 0..12 {
            assert!(h.get(m, m) > 0.0);
            for n in 0..12 {
                assert_eq!(h.get(m, n).to_bits(), h.get(n, m).to_bits());
            }
        }
        let blk = h.leading_block(4);
        assert_eq!(blk.get(3, 2), h.get(3, 2));
        assert!(build_hamiltonian(&q, 0).is_err());
    }

    #[test]
    fn vestige_examples() {
        assert_relative_eq!(vestige_element(VestigePath::Linear, 1.0, 4.0, 0, 0).unwrap(), 5.0, max_relative = 1e-15);
        assert_eq!(vestige_element(VestigePath::Power(0.5), 1.0, 4.0, 0, 0).unwrap(), 4.0);
        assert_eq!(vestige_element(VestigePath::Power(0.5), 1.0, 4.0, 1, 0).unwrap(), 0.0);
        assert!(matches!(
            vestige_element(VestigePath::Power(2.0), 1.0, 4.0, 0, 0),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn path_approaches_vestige_limit() {
        for (m, n) in [(0, 0), (1, 0), (2, 3)] {
            let lim = vestige_element(VestigePath::Linear, 1.2, 4.0, m, n).unwrap();
            let q = VestigePath::Linear.params_at(1.2, 4.0, 1e-9).unwrap();
            let h = hamiltonian_element(&q, m, n).unwrap();
            assert_relative_eq!(h, lim, max_relative = 1e-7);

            let lim = vestige_element(VestigePath::Power(0.5), 1.2, 4.0, m, n).unwrap();
            let q = VestigePath::Power(0.5).params_at(1.2, 4.0, 1e-12).unwrap();
            let h = hamiltonian_element(&q, m, n).unwrap();
            assert!((h - lim).abs() < 1e-5, "{h} vs {lim}");
        }
    }
}
