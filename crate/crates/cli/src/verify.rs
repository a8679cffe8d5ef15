//! The self-check run by the `verify` subcommand.

use spiked_osc::basis::OscillatorParams;
use spiked_osc::matel::matrix_element;
use spiked_osc::oracle::{double_sum_matel, matel_quadrature, overlap, QuadratureSpec};
use spiked_osc::perturb::energy_exact_alpha2;
use spiked_osc::spectrum::variational_sweep;
use spiked_osc::Result;

pub struct Check {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn check(name: &'static str, worst: f64, tolerance: f64) -> Check {
    Check {
        name,
        worst,
        tolerance,
        passed: worst <= tolerance,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Runs every check for `params`; `dim` bounds the symmetry scan.
pub fn run(params: &OscillatorParams, dim: usize) -> Result<Vec<Check>> {
    params.require_regular()?;
    let spec = QuadratureSpec::default();
    let mut out = Vec::new();

    let mut worst: f64 = 0.0;
    for m in 0..dim {
        for n in 0..m {
            worst = worst.max(rel(matrix_element(params, m, n)?, matrix_element(params, n, m)?));
        }
    }
    out.push(check("symmetry", worst, 1e-10));

    let mut worst: f64 = 0.0;
    for m in 0..6 {
        for n in m..6 {
            let want = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((overlap(params, m, n, &spec)?.value - want).abs());
        }
    }
    out.push(check("orthonormality", worst, 1e-9));

    let (mut quad, mut dsum): (f64, f64) = (0.0, 0.0);
    for m in 0..8 {
        for n in m..8 {
            let c = matrix_element(params, m, n)?;
            quad = quad.max(rel(c, matel_quadrature(params, m, n, &spec)?.value));
            dsum = dsum.max(rel(c, double_sum_matel(params, m, n)?));
        }
    }
    out.push(check("quadrature-oracle", quad, 1e-8));
    out.push(check("double-sum-oracle", dsum, 1e-10));

    // the same A, B and λ with α = 2, where the ground energy is known exactly
    let p2 = params.with_alpha(2.0)?;
    let exact = energy_exact_alpha2(&p2)?;
    let sweep = variational_sweep(&p2, &[4, 8, 16, 32])?;
    let below = sweep
        .results
        .iter()
        .map(|r| exact - r.eigenvalues[0])
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    out.push(check("alpha2-upper-bound", below, 1e-12));
    out.push(Check {
        name: "alpha2-monotone",
        worst: if sweep.monotone { 0.0 } else { 1.0 },
        tolerance: 0.0,
        passed: sweep.monotone,
    });
    Ok(out)
}
