//! Weak-coupling expansions in λ: ground energy to second order and the
//! first-order correction to the ground-state wavefunction.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::OscillatorParams;
use crate::quad::gauss_kronrod;
use crate::specfun::{digamma_pos, hyp_pfq_unit, lgamma_pos, PFqParams};
use crate::{Error, Result};

/// E(λ) ≈ e0 + c1 λ + c2 λ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySeries {
    pub e0: f64,
    pub c1: f64,
    pub c2: f64,
    /// Error estimate of `c2` carried over from the ₄F₃ summation.
    pub c2_error: f64,
}

impl EnergySeries {
    pub fn value(&self, lambda: f64) -> f64 {
        self.e0 + lambda * (self.c1 + lambda * self.c2)
    }
}

/// Coefficients of the ground-state energy through second order.
///
/// The second-order term carries ₄F₃(1,1,α/2+1,α/2+1; γ+1,2,2; 1), which
/// converges only for α < γ+1.
pub fn energy_series(params: &OscillatorParams) -> Result<EnergySeries> {
    let (g, b, alpha) = (params.gamma(), params.b(), params.alpha());
    if g + 1.0 - alpha <= 0.0 {
        return Err(Error::Divergence(format!(
            "second-order coefficient needs alpha < gamma + 1 (alpha = {alpha}, gamma + 1 = {}): \
             the 4F3 at unit argument diverges",
            g + 1.0
        )));
    }
    params.require_regular()?;
    let a = 0.5 * alpha;
    let ratio = (lgamma_pos(g - a) - lgamma_pos(g)).exp();
    let c1 = b.powf(0.25 * alpha) * ratio;
    let f = hyp_pfq_unit(&PFqParams::new(vec![1.0, 1.0, a + 1.0, a + 1.0], vec![g + 1.0, 2.0, 2.0], 1.0)?)?;
    let k = -b.powf(0.5 * (alpha - 1.0)) * alpha * alpha / (16.0 * g) * ratio * ratio;
    Ok(EnergySeries {
        e0: 2.0 * b.sqrt() * g,
        c1,
        c2: k * f.value,
        c2_error: (k * f.error).abs(),
    })
}

/// √B(2 + √(1 + 4(A+λ))): for α = 2 the spike only shifts A.
pub fn energy_exact_alpha2(params: &OscillatorParams) -> Result<f64> {
    if params.alpha() != 2.0 {
        return Err(Error::Misuse(format!("exact energy needs alpha = 2, got {}", params.alpha())));
    }
    Ok(params.b().sqrt() * (2.0 + (1.0 + 4.0 * (params.a() + params.lambda())).sqrt()))
}

/// The factor multiplying Σ_{n≥1} (α/2)_n/(n·n!) ₁F₁(−n; γ; √B x²) in ψ₁:
///
/// −B^{(α+γ)/4−1/2}/(2√2) · Γ(γ−α/2)/Γ(γ)^{3/2} · x^{γ−1/2} e^{−√B x²/2}
pub fn psi1_prefactor(params: &OscillatorParams, x: f64) -> f64 {
    let (g, b, alpha) = (params.gamma(), params.b(), params.alpha());
    let ln = (0.25 * (alpha + g) - 0.5) * b.ln() - 1.5 * std::f64::consts::LN_2 + lgamma_pos(g - 0.5 * alpha)
        - 1.5 * lgamma_pos(g)
        + (g - 0.5) * x.ln()
        - 0.5 * b.sqrt() * x * x;
    -ln.exp()
}

fn check_abscissa(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(crate::error::domain!("wavefunction abscissa must be positive and finite, got {x}"))
    }
}

/// Controls for [`psi1_series`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub max_terms: usize,
    /// Permit 2 < α < γ+1, where convergence of the series is not established.
    pub allow_unproven: bool,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            max_terms: 100_000,
            allow_unproven: false,
        }
    }
}

/// A series evaluation of ψ₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
    /// The term cap was reached before the terms fell below 1e-12 relative.
    pub capped: bool,
}

/// Smooth step: 1 on [0, ½], 0 at 1, C^∞ in between.
fn taper(t: f64) -> f64 {
    if t <= 0.5 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let s = 2.0 * (t - 0.5);
    let h = |u: f64| if u > 0.0 { (-1.0 / u).exp() } else { 0.0 };
    let (p, q) = (h(1.0 - s), h(s));
    p / (p + q)
}

/// First-order ground-state correction ψ₁(x) from its expansion in basis states.
///
/// For α near 2 the terms decay like n^{α/2−2} times an oscillating Laguerre
/// factor, so the sum is taken with a smooth taper over the second half of
/// the term budget; plain partial sums there stall near 1e-5.
pub fn psi1_series(params: &OscillatorParams, x: f64, opts: &SeriesOptions) -> Result<SeriesValue> {
    check_abscissa(x)?;
    let (g, alpha) = (params.gamma(), params.alpha());
    if alpha >= g + 1.0 {
        return Err(Error::Divergence(format!(
            "perturbation series needs alpha < gamma + 1 (alpha = {alpha}, gamma = {g})"
        )));
    }
    if alpha > 2.0 && !opts.allow_unproven {
        return Err(crate::error::domain!(
            "series convergence is established only for alpha <= 2 (alpha = {alpha}); pass the unproven flag to evaluate anyway"
        ));
    }
    if opts.max_terms == 0 {
        return Err(Error::Misuse("term cap must be at least 1".into()));
    }
    let a = 0.5 * alpha;
    let z = params.b().sqrt() * x * x;
    let cap = opts.max_terms;
    let nf = cap as f64;

    let (mut f_prev, mut f) = (1.0, 1.0 - z / g);
    let mut coef = a;
    let mut sum = coef * f;
    let mut comp = 0.0;
    let mut quiet = 0usize;
    let mut n = 1usize;
    while n < cap {
        let nn = n as f64;
        let f_next = ((2.0 * nn + g - z) * f - nn * f_prev) / (nn + g);
        f_prev = f;
        f = f_next;
        coef *= (a + nn) / (nn + 1.0) * nn / (nn + 1.0);
        n += 1;
        let term = coef * f * taper(n as f64 / nf);
        // Neumaier summation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if term.abs() < 1e-12 * (sum + comp).abs() {
            quiet += 1;
            if quiet >= 50 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    Ok(SeriesValue {
        value: psi1_prefactor(params, x) * (sum + comp),
        terms: n,
        capped: quiet < 50,
    })
}

/// ψ₁ for α = 2:
/// B^{γ/4}/(2√2) · Γ(γ−1)/Γ(γ)^{3/2} · x^{γ−1/2} [ln(√B x²) − ψ(γ)] e^{−√B x²/2}
pub fn psi1_alpha2_closed(params: &OscillatorParams, x: f64) -> Result<f64> {
    if params.alpha() != 2.0 {
        return Err(Error::Misuse(format!("closed form needs alpha = 2, got {}", params.alpha())));
    }
    check_abscissa(x)?;
    let z = params.b().sqrt() * x * x;
    Ok(psi1_prefactor(params, x) * (digamma_pos(params.gamma()) - z.ln()))
}

/// ₃F₂(1, 1, 1+a; 2, 2; w) for |w| < 1.
///
/// Sums either the defining series (ratio → w) or, when that is slower and
/// a < 1, the expansion about w = 1 (ratio → 1−w).
pub fn hyp3f2_unit_disc(a: f64, w: Complex64) -> Result<Complex64> {
    if !(w.norm() < 1.0) {
        return Err(crate::error::domain!("3F2 series needs |w| < 1, got |w| = {}", w.norm()));
    }
    if w.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if a == 1.0 {
        return Ok(-(Complex64::new(1.0, 0.0) - w).ln() / w);
    }
    let eps = Complex64::new(1.0, 0.0) - w;
    if a > 0.0 && a <= 1.0 - 1e-3 && eps.norm() < w.norm() {
        let s = near_one_remainder(a, eps, 0) + near_one_constant(a);
        return Ok(s / (a * w));
    }
    direct_3f2(a, w)
}

fn direct_3f2(a: f64, w: Complex64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..2_000_000usize {
        let kf = k as f64;
        term *= w * ((1.0 + a + kf) / (kf + 1.0) * ((kf + 1.0) / (kf + 2.0)).powi(2));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!("3F2 series at |w| = {} did not settle", w.norm())))
}

/// ψ(1) − ψ(1−a): the constant term of a·w·₃F₂ at w = 1.
fn near_one_constant(a: f64) -> f64 {
    digamma_pos(1.0) - digamma_pos(1.0 - a)
}

/// Σ_{j>J} ε^j/j − Σ_{j≥J} ε^{j+1−a}/(j+1−a), the part of
/// a·w·₃F₂(1,1,1+a;2,2;1−ε) beyond the first J orders of its expansion in ε.
fn near_one_remainder(a: f64, eps: Complex64, order: usize) -> Complex64 {
    let frac = eps.powf(1.0 - a);
    let mut p = eps.powi(order as i32);
    let mut sum = Complex64::new(0.0, 0.0);
    for j in order..order + 20_000 {
        let jf = j as f64;
        let mut t = -(p * frac) / (jf + 1.0 - a);
        if j > order {
            t += p / jf;
        }
        sum += t;
        p *= eps;
        if j > order + 2 && t.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// Controls for [`psi1_contour`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourOptions {
    /// Abscissa of the vertical line; defaults to 2x² + 1. Must exceed x².
    pub c: Option<f64>,
    /// Truncation of the folded y-integral; defaults to the value that bounds
    /// the neglected tail below `tail_tol`.
    pub y_max: Option<f64>,
    pub tail_tol: f64,
    pub rel_tol: f64,
}

impl Default for ContourOptions {
    fn default() -> Self {
        ContourOptions {
            c: None,
            y_max: None,
            tail_tol: 1e-10,
            rel_tol: 1e-12,
        }
    }
}

/// A contour evaluation of ψ₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourValue {
    pub value: f64,
    pub error: f64,
    pub c: f64,
    pub y_max: f64,
    /// Orders of the w → 1 expansion integrated in closed form.
    pub subtracted: usize,
}

/// ψ₁(x) from the line integral over t = c + iy of
/// e^{√B t} t^{−γ} (α/2)(1 − x²/t) ₃F₂(1,1,1+α/2; 2,2; 1 − x²/t).
///
/// The integrand decays only like |t|^{−γ}. The leading orders of its
/// expansion in x²/t are integrated exactly, since
/// (1/2π)∫ e^{√B t} t^{−ν} dy = B^{(ν−1)/2}/Γ(ν). What remains decays fast
/// enough for a short folded quadrature with an explicit tail bound.
pub fn psi1_contour(params: &OscillatorParams, x: f64, opts: &ContourOptions) -> Result<ContourValue> {
    check_abscissa(x)?;
    let (g, b, alpha) = (params.gamma(), params.b(), params.alpha());
    if !(alpha < 2.0) {
        return Err(crate::error::domain!("contour representation needs alpha < 2, got {alpha}"));
    }
    if g < 1.5 {
        return Err(crate::error::domain!("contour representation needs gamma >= 3/2, got {g}"));
    }
    let x2 = x * x;
    let c = opts.c.unwrap_or(2.0 * x2 + 1.0);
    if !(c > x2) {
        return Err(crate::error::domain!("contour abscissa c = {c} must exceed x^2 = {x2}"));
    }
    let a = 0.5 * alpha;
    let sb = b.sqrt();
    let z = sb * x2;
    let scale = (0.5 * (1.0 - g) * b.ln() + lgamma_pos(g)).exp();

    // tail of ∫_Y^∞ after subtracting `order` terms, remainder ~ |x²/t|^q, q = order + 1 − a
    let tail = |order: usize, y: f64| -> f64 {
        let q = order as f64 + 1.0 - a;
        let ratio = x2 / y;
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        scale / std::f64::consts::PI * (sb * c).exp() * ratio.powf(q) * y.powf(1.0 - g)
            / (q * (g + q - 1.0) * (1.0 - ratio))
    };
    let y_floor = 4.0 * c;
    let y_for = |order: usize| -> f64 {
        let mut y = y_floor;
        while tail(order, y) > opts.tail_tol {
            y *= 1.25;
            if y > 1e7 {
                return f64::INFINITY;
            }
        }
        y
    };
    let (order, y_max) = match opts.y_max {
        Some(y) => {
            let best = (1..=30).min_by(|&i, &j| tail(i, y).total_cmp(&tail(j, y))).unwrap();
            (best, y)
        }
        None => (1..=30)
            .map(|j| (j, y_for(j)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap(),
    };
    if !y_max.is_finite() {
        return Err(Error::NonConvergence(format!("no truncation certifies the contour tail at x = {x}")));
    }

    // closed-form part: K + Σ_{j=1}^{J} Γ(γ)z^j/(jΓ(γ+j)) − Σ_{j<J} Γ(γ)z^{j+1−a}/((j+1−a)Γ(γ+j+1−a))
    let lg = lgamma_pos(g);
    let mut exact = near_one_constant(a);
    for j in 0..order {
        let jf = j as f64;
        if j > 0 {
            exact += (lg + jf * z.ln() - lgamma_pos(g + jf)).exp() / jf;
        }
        let nu = jf + 1.0 - a;
        exact -= (lg + nu * z.ln() - lgamma_pos(g + nu)).exp() / nu;
    }
    let jf = order as f64;
    exact += (lg + jf * z.ln() - lgamma_pos(g + jf)).exp() / jf;

    let x2c = Complex64::new(x2, 0.0);
    let integrand = |y: f64| -> f64 {
        let t = Complex64::new(c, y);
        let eps = x2c / t;
        let w = Complex64::new(1.0, 0.0) - eps;
        let rem = if a <= 1.0 - 1e-3 && eps.norm() <= w.norm() {
            near_one_remainder(a, eps, order)
        } else {
            let s = match direct_3f2(a, w) {
                Ok(f) => f * a * w,
                Err(_) => return f64::NAN,
            };
            s - near_one_constant(a) - near_one_partial(a, eps, order)
        };
        ((sb * t).exp() * t.powf(-g) * rem).re
    };
    let integral = gauss_kronrod(integrand, 0.0, y_max, 1e-3 * opts.tail_tol / scale, opts.rel_tol, 20_000)?;
    let numeric = scale / std::f64::consts::PI * integral.value;
    let sum = exact + numeric;
    let pref = psi1_prefactor(params, x);
    Ok(ContourValue {
        value: pref * sum,
        error: pref.abs() * (scale / std::f64::consts::PI * integral.error + tail(order, y_max)),
        c,
        y_max,
        subtracted: order,
    })
}

/// Σ_{j=1}^{J} ε^j/j − Σ_{j<J} ε^{j+1−a}/(j+1−a), the first J orders past the constant.
fn near_one_partial(a: f64, eps: Complex64, order: usize) -> Complex64 {
    let frac = eps.powf(1.0 - a);
    let mut p = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..order {
        let jf = j as f64;
        sum -= p * frac / (jf + 1.0 - a);
        p *= eps;
        sum += p / (jf + 1.0);
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Series,
    ClosedFormAlpha2,
    Contour,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::ClosedFormAlpha2 => "closed-form-alpha2",
            Method::Contour => "contour",
        }
    }
}

/// ψ₁ on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunSamples {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub method: Method,
}

/// Evaluates ψ₁ at every abscissa with the chosen method, in parallel.
pub fn sample_psi1(
    params: &OscillatorParams,
    xs: &[f64],
    method: Method,
    series: &SeriesOptions,
    contour: &ContourOptions,
) -> Result<WavefunSamples> {
    let values = xs
        .par_iter()
        .map(|&x| match method {
            Method::Series => psi1_series(params, x, series).map(|v| v.value),
            Method::ClosedFormAlpha2 => psi1_alpha2_closed(params, x),
            Method::Contour => psi1_contour(params, x, contour).map(|v| v.value),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WavefunSamples {
        xs: xs.to_vec(),
        values,
        method,
    })
}
