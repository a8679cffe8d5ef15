//! Log-gamma, digamma and Pochhammer symbols for real arguments.

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

// Godfrey's coefficients for g = 607/128, n = 15.
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_78;

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain!("ln_gamma requires x > 0, got {x}"));
    }
    Ok(lgamma_pos(x))
}

/// Unchecked log-gamma; callers guarantee `x > 0`.
pub(crate) fn lgamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return lgamma_pos(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Γ(x) for x > 0, via `exp(ln Γ(x))`.
pub fn gamma(x: f64) -> Result<f64> {
    ln_gamma(x).map(f64::exp)
}

// B_{2k} / (2k), k = 1..7
const DIGAMMA_ASYMP: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// ψ(x) = d/dx ln Γ(x) for x > 0.
///
/// Shifts upward with ψ(x) = ψ(x+1) − 1/x until x ≥ 10, then applies the
/// Bernoulli asymptotic series.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain!("digamma requires x > 0, got {x}"));
    }
    Ok(digamma_pos(x))
}

pub(crate) fn digamma_pos(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 10.0 {
        shift += 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut tail = 0.0;
    for c in DIGAMMA_ASYMP {
        tail += c * pow;
        pow *= inv2;
    }
    x.ln() - 0.5 / x - tail - shift
}

/// Rising factorial (a)_k = a(a+1)…(a+k−1) by direct product.
///
/// A non-positive integer `a` with `k > −a` yields an exact zero.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    let mut p = 1.0;
    for i in 0..k {
        p *= a + i as f64;
    }
    p
}

/// `(ln |(a)_k|, sign((a)_k))`. A vanishing symbol gives `(-inf, 0.0)`.
pub fn ln_pochhammer(a: f64, k: usize) -> (f64, f64) {
    if a > 0.0 && k > 256 {
        return (lgamma_pos(a + k as f64) - lgamma_pos(a), 1.0);
    }
    let mut ln = 0.0;
    let mut sign = 1.0;
    for i in 0..k {
        let f = a + i as f64;
        if f == 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        if f < 0.0 {
            sign = -sign;
        }
        ln += f.abs().ln();
    }
    (ln, sign)
}

/// ln k! for small and large k.
pub(crate) fn ln_factorial(k: usize) -> f64 {
    lgamma_pos(k as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // values from a 30-digit reference evaluation
    const LNG_REF: [(f64, f64); 8] = [
        (0.1, 2.252_712_651_734_205_96),
        (0.5, 0.572_364_942_924_700_087_07),
        (1.5, -0.120_782_237_635_245_222_35),
        (3.7, 1.428_072_326_665_387_921_9),
        (10.25, 13.368_023_671_476_046_295),
        (50.0, 144.565_743_946_344_886_01),
        (123.4, 469.336_097_442_190_558_44),
        (1e-3, 6.907_178_885_383_853_682_5),
    ];

    const PSI_REF: [(f64, f64); 8] = [
        (0.1, -10.423_754_940_411_076_795),
        (0.5, -1.963_510_026_021_423_479_4),
        (1.0, -0.577_215_664_901_532_860_61),
        (1.5, 0.036_489_973_978_576_520_559),
        (2.0, 0.422_784_335_098_467_139_39),
        (3.3, 1.034_822_489_059_621_749_1),
        (10.0, 2.251_752_589_066_721_107_6),
        (25.0, 3.198_742_512_851_974_008_5),
    ];

    #[test]
    fn ln_gamma_trivial_points() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-15);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-15);
        assert_relative_eq!(
            ln_gamma(0.5).unwrap(),
            std::f64::consts::PI.sqrt().ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn ln_gamma_matches_reference() {
        for (x, want) in LNG_REF {
            assert_relative_eq!(ln_gamma(x).unwrap(), want, max_relative = 1e-13);
        }
    }

    #[test]
    fn ln_gamma_rejects_nonpositive() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn digamma_matches_reference() {
        for (x, want) in PSI_REF {
            assert!((digamma(x).unwrap() - want).abs() < 1e-12, "x = {x}");
        }
        // recurrence from ψ(1/2) = −γ_E − 2 ln 2
        let euler = 0.577_215_664_901_532_860_6;
        let want = 2.0 - euler - 2.0 * 2f64.ln();
        assert!((digamma(1.5).unwrap() - want).abs() < 1e-12);
        assert!((digamma(2.0).unwrap() - (1.0 - euler)).abs() < 1e-12);
    }

    #[test]
    fn digamma_root() {
        assert!(digamma(1.461_632_144_968_362_3).unwrap().abs() < 1e-14);
        assert!(digamma(-0.5).is_err());
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
        assert_eq!(pochhammer(0.5, 3), 1.875);
        let (ln, s) = ln_pochhammer(-2.5, 3);
        assert_eq!(s, -1.0);
        assert_relative_eq!(ln.exp(), 2.5 * 1.5 * 0.5, max_relative = 1e-15);
        assert_eq!(ln_pochhammer(-2.0, 3).1, 0.0);
    }

    #[test]
    fn ln_pochhammer_large_k_branch_is_continuous() {
        let (a, b) = (ln_pochhammer(1.5, 256).0, ln_pochhammer(1.5, 257).0);
        assert_relative_eq!(b - a, (1.5f64 + 256.0).ln(), max_relative = 1e-10);
    }
}
