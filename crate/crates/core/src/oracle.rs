//! Brute-force references: inner products by quadrature and the unreduced
//! double sum for matrix elements.

use crate::basis::{eval_psi, BasisState, OscillatorParams};
use crate::quad::{gauss_kronrod, tanh_sinh, Integral};
use crate::specfun::{digamma_pos, lgamma_pos};
use crate::Result;

/// Tolerances and interval layout for the reference integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Boundary between the endpoint rule and the adaptive rule. `None`
    /// means the classical turning point √(2γ/√B) of the ground state.
    pub split: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_subdivisions: 400,
            split: None,
        }
    }
}

impl QuadratureSpec {
    pub fn split_for(&self, params: &OscillatorParams) -> f64 {
        self.split
            .unwrap_or_else(|| (2.0 * params.gamma() / params.b().sqrt()).sqrt())
    }
}

/// ∫₀^∞ ψ_m x^{power} ψ_n dx, where ψ_mψ_n x^{power} ~ C x^{2γ−1+power} at the origin.
fn integrate(params: &OscillatorParams, m: usize, n: usize, power: f64, spec: &QuadratureSpec) -> Result<Integral> {
    let sm = BasisState::new(*params, m);
    let sn = BasisState::new(*params, n);
    let f = |x: f64| {
        let v = eval_psi(&sm, x) * eval_psi(&sn, x);
        if power == 0.0 {
            v
        } else {
            v * x.powf(power)
        }
    };
    let sb = params.b().sqrt();
    let split = spec.split_for(params);
    let top = m.max(n) as f64;
    let x_max = ((4.0 * top + 2.0 * params.gamma()) / sb).sqrt().max(split) + (40.0 / sb).sqrt();

    // below x0 the leading power law is exact to O(x0²)
    let rate = 2.0 * params.gamma() - 1.0 + power;
    let x0 = 1e-6 * split;
    let head = f(x0) * x0 / (rate + 1.0);

    let inner = tanh_sinh(f, x0, split, 0.5 * spec.abs_tol, spec.rel_tol, 12)?;
    let outer = gauss_kronrod(f, split, x_max, 0.5 * spec.abs_tol, spec.rel_tol, spec.max_subdivisions)?;
    Ok(Integral {
        value: head + inner.value + outer.value,
        error: inner.error + outer.error + 1e-12 * head.abs(),
        evaluations: inner.evaluations + outer.evaluations + 1,
    })
}

/// ⟨m|n⟩ by quadrature.
pub fn overlap(params: &OscillatorParams, m: usize, n: usize, spec: &QuadratureSpec) -> Result<Integral> {
    integrate(params, m, n, 0.0, spec)
}

/// ⟨m|x^{−α}|n⟩ by quadrature.
pub fn matel_quadrature(params: &OscillatorParams, m: usize, n: usize, spec: &QuadratureSpec) -> Result<Integral> {
    params.require_regular()?;
    integrate(params, m, n, -params.alpha(), spec)
}

/// ⟨m|x^{−α}|n⟩ from the (m+1)×(n+1) double sum.
pub fn double_sum_matel(params: &OscillatorParams, m: usize, n: usize) -> Result<f64> {
    crate::matel::double_sum_element(params, m, n)
}

/// The sum multiplying the ψ₁ prefactor, by the termwise series
///
/// ψ(1) − ψ(1−a) + Γ(γ) Σ_{j≥1} z^j/(jΓ(γ+j)) − Γ(γ) Σ_{j≥0} z^{j+1−a}/((j+1−a)Γ(γ+j+1−a))
///
/// with a = α/2 < 1 and z = √B x². It follows from integrating the contour
/// representation term by term and converges like the exponential series.
pub fn psi1_termwise_sum(params: &OscillatorParams, x: f64) -> Result<f64> {
    let a = 0.5 * params.alpha();
    if !(a < 1.0) {
        return Err(crate::error::domain!("termwise sum needs alpha < 2, got {}", params.alpha()));
    }
    let g = params.gamma();
    let z = params.b().sqrt() * x * x;
    let lz = z.ln();
    let lg = lgamma_pos(g);
    let mut s = digamma_pos(1.0) - digamma_pos(1.0 - a);
    for j in 0..2000 {
        let jf = j as f64;
        let nu = jf + 1.0 - a;
        let mut t = -(lg + nu * lz - lgamma_pos(g + nu)).exp() / nu;
        if j > 0 {
            t += (lg + jf * lz - lgamma_pos(g + jf)).exp() / jf;
        }
        s += t;
        if jf > z && t.abs() <= 1e-17 * s.abs() {
            break;
        }
    }
    Ok(s)
}
