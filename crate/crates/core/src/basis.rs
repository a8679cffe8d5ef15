//! Eigenbasis of H₀ = −d²/dx² + Bx² + A/x² on the half-line.
//!
//! ψ_n(x) = T_n x^{γ−1/2} e^{−√B x²/2} ₁F₁(−n; γ; √B x²), E_n = 2√B(2n+γ),
//! with the alternating sign (−1)^n carried by the normalization constant T_n.

use crate::error::{domain, Result};
use crate::specfun::hyper_kummer_terminating as kummer;
use crate::specfun::{lgamma_pos, ln_factorial};

/// The tuple (A, B, α, λ) together with the derived γ = 1 + ½√(1+4A).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    a: f64,
    b: f64,
    alpha: f64,
    lambda: f64,
    gamma: f64,
}

/// γ = 1 + ½√(1+4A).
pub fn gamma_of_a(a: f64) -> Result<f64> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(domain!("A must be a finite non-negative number, got {a}"));
    }
    Ok(1.0 + 0.5 * (1.0 + 4.0 * a).sqrt())
}

impl OscillatorParams {
    pub fn new(a: f64, b: f64, alpha: f64, lambda: f64) -> Result<Self> {
        let gamma = gamma_of_a(a)?;
        Self::checked(a, b, alpha, lambda, gamma)
    }

    /// Parameters specified through γ ≥ 3/2 instead of A; A = (γ−1)² − ¼.
    pub fn from_gamma(gamma: f64, b: f64, alpha: f64, lambda: f64) -> Result<Self> {
        if !(gamma >= 1.5) || !gamma.is_finite() {
            return Err(domain!("gamma must be at least 3/2, got {gamma}"));
        }
        let a = ((gamma - 1.0).powi(2) - 0.25).max(0.0);
        Self::checked(a, b, alpha, lambda, gamma)
    }

    fn checked(a: f64, b: f64, alpha: f64, lambda: f64, gamma: f64) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(domain!("B must be positive, got {b}"));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(domain!("alpha must be positive, got {alpha}"));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(domain!("lambda must be non-negative, got {lambda}"));
        }
        Ok(OscillatorParams {
            a,
            b,
            alpha,
            lambda,
            gamma,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self::checked(self.a, self.b, self.alpha, lambda, self.gamma)
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::checked(self.a, self.b, alpha, self.lambda, self.gamma)
    }

    /// Matrix elements of x^{−α} exist only for α < 2γ.
    pub fn require_regular(&self) -> Result<()> {
        if self.alpha < 2.0 * self.gamma {
            Ok(())
        } else {
            Err(domain!(
                "matrix elements of x^-alpha require alpha < 2 gamma (alpha = {}, 2 gamma = {})",
                self.alpha,
                2.0 * self.gamma
            ))
        }
    }
}

/// One eigenstate |n⟩ of H₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisState {
    pub n: usize,
    pub params: OscillatorParams,
}

impl BasisState {
    pub fn new(params: OscillatorParams, n: usize) -> Self {
        BasisState { n, params }
    }

    pub fn energy(&self) -> f64 {
        energy_n(&self.params, self.n)
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval_psi(self, x)
    }
}

/// E_n = 2√B(2n+γ).
pub fn energy_n(params: &OscillatorParams, n: usize) -> f64 {
    2.0 * params.b.sqrt() * (2.0 * n as f64 + params.gamma)
}

/// `(ln |T_s|, sign T_s)`.
pub(crate) fn ln_norm_coeff(params: &OscillatorParams, s: usize) -> (f64, f64) {
    let g = params.gamma;
    let ln = 0.5
        * (std::f64::consts::LN_2 + 0.5 * g * params.b.ln() + lgamma_pos(s as f64 + g)
            - ln_factorial(s)
            - 2.0 * lgamma_pos(g));
    (ln, if s.is_multiple_of(2) { 1.0 } else { -1.0 })
}

/// T_s = (−1)^s √(2 B^{γ/2} Γ(s+γ) / (s! Γ²(γ))).
pub fn norm_coeff(params: &OscillatorParams, s: usize) -> f64 {
    let (ln, sign) = ln_norm_coeff(params, s);
    sign * ln.exp()
}

/// ψ_n(x); zero at and left of the origin.
pub fn eval_psi(state: &BasisState, x: f64) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    let p = &state.params;
    let sb = p.b.sqrt();
    let (ln_t, sign) = ln_norm_coeff(p, state.n);
    let f = kummer(state.n, p.gamma, sb * x * x).to_f64();
    if f == 0.0 {
        return 0.0;
    }
    let ln = ln_t + (p.gamma - 0.5) * x.ln() - 0.5 * sb * x * x + f.abs().ln();
    sign * f.signum() * ln.exp()
}
