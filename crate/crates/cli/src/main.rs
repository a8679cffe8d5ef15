//! Command-line front end: matrix elements, variational spectra,
//! perturbation coefficients and first-order wavefunctions.

mod emit;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use spiked_osc::basis::OscillatorParams;
use spiked_osc::matel::potential_table;
use spiked_osc::perturb::{energy_series, sample_psi1, ContourOptions, Method, SeriesOptions};
use spiked_osc::spectrum::{variational_sweep, DEFAULT_LADDER};
use spiked_osc::Error;

use emit::{fmt_f64, json_text, num, nums, object, params_json, Csv};

#[derive(Parser)]
#[command(name = "spiked-osc", version, about = "Generalized spiked harmonic oscillator H = -d²/dx² + Bx² + A/x² + λ/x^α")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Table of ⟨m|x^-α|n⟩ for m, n < N.
    Matelem {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "N", default_value_t = 4)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Variational eigenvalues over a ladder of basis dimensions.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        /// Single basis dimension.
        #[arg(long = "N", conflicts_with = "n_list")]
        n: Option<usize>,
        /// Comma-separated ascending dimensions (default 4,8,16,32,64).
        #[arg(long = "N-list", value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Ground-energy expansion E0 + c1 λ + c2 λ².
    Perturb {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// First-order correction to the ground-state wavefunction on a grid.
    Wavefun {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "x-start", default_value_t = 0.1)]
        x_start: f64,
        #[arg(long = "x-stop", default_value_t = 3.0)]
        x_stop: f64,
        #[arg(long = "x-count", default_value_t = 30)]
        x_count: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Series)]
        method: MethodArg,
        /// Contour abscissa (default 2x² + 1 per point).
        #[arg(short = 'c', long = "contour-c")]
        c: Option<f64>,
        /// Term cap for the series method.
        #[arg(long, default_value_t = 100_000)]
        terms: usize,
        /// Allow the series for 2 < α < γ+1, where its convergence is unproven.
        #[arg(long)]
        allow_unproven: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Oracle self-checks for the given parameters; exit 0 iff all pass.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        /// Symmetry scan covers m, n < N.
        #[arg(long = "N", default_value_t = 16)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long = "A", default_value_t = 0.0, allow_negative_numbers = true)]
    a: f64,
    #[arg(long = "B", default_value_t = 1.0, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda: f64,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Series,
    #[value(name = "closed-form-alpha2")]
    ClosedFormAlpha2,
    Contour,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Series => Method::Series,
            MethodArg::ClosedFormAlpha2 => Method::ClosedFormAlpha2,
            MethodArg::Contour => Method::Contour,
        }
    }
}

enum Failure {
    Compute(Error),
    Usage(String),
    Io(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Compute(e) => e.exit_code() as u8,
            Failure::Usage(_) => 2,
            Failure::Io(_) | Failure::Verification => 1,
        }
    }

    fn report(&self) -> Value {
        let (kind, message) = match self {
            Failure::Compute(e) => (
                match e {
                    Error::Domain(_) => "domain",
                    Error::Pole(_) => "pole",
                    Error::Divergence(_) => "divergence",
                    Error::NonConvergence(_) => "non-convergence",
                    Error::Misuse(_) => "misuse",
                },
                e.to_string(),
            ),
            Failure::Usage(m) => ("usage", m.clone()),
            Failure::Io(m) => ("io", m.clone()),
            Failure::Verification => ("verification", "one or more checks failed".to_string()),
        };
        object([
            ("error", Value::String(kind.into())),
            ("exit_code", Value::from(self.code())),
            ("message", Value::String(message)),
        ])
    }
}

type Outcome = Result<(String, Option<PathBuf>, bool), Failure>;

fn params_of(p: &ParamArgs) -> Result<OscillatorParams, Failure> {
    Ok(OscillatorParams::new(p.a, p.b, p.alpha, p.lambda)?)
}

fn matelem(params: &ParamArgs, dim: usize, out: &OutArgs) -> Outcome {
    let p = params_of(params)?;
    if dim == 0 {
        return Err(Failure::Usage("--N must be at least 1".into()));
    }
    let table = potential_table(&p, dim)?;
    let text = match out.format {
        Format::Json => json_text(&object([
            ("params", params_json(&p)),
            ("N", Value::from(dim)),
            ("values", Value::Array((0..dim).map(|m| nums(table.row(m))).collect())),
        ])),
        Format::Csv => {
            let mut csv = Csv::new(&["m", "n", "value"]);
            for m in 0..dim {
                for n in 0..dim {
                    csv.row(&[m.to_string(), n.to_string(), fmt_f64(table.get(m, n))]);
                }
            }
            csv.finish()
        }
    };
    Ok((text, out.output.clone(), true))
}

fn spectrum(params: &ParamArgs, n: Option<usize>, n_list: Option<&[usize]>, out: &OutArgs) -> Outcome {
    let p = params_of(params)?;
    let dims: Vec<usize> = match (n, n_list) {
        (Some(n), _) => vec![n],
        (None, Some(list)) => list.to_vec(),
        (None, None) => DEFAULT_LADDER.to_vec(),
    };
    if dims.is_empty() || dims.contains(&0) || dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::Usage(format!("basis dimensions must be positive and strictly ascending, got {dims:?}")));
    }
    let sweep = variational_sweep(&p, &dims)?;
    let text = match out.format {
        Format::Json => {
            let results = sweep
                .results
                .iter()
                .map(|r| {
                    object([
                        ("N", Value::from(r.dim)),
                        ("eigenvalues", nums(&r.eigenvalues)),
                        ("residual_norm", num(r.residual_norm)),
                    ])
                })
                .collect();
            json_text(&object([
                ("params", params_json(&p)),
                ("results", Value::Array(results)),
                ("monotone", Value::Bool(sweep.monotone)),
                ("converged", Value::Bool(sweep.converged)),
            ]))
        }
        Format::Csv => {
            let mut csv = Csv::new(&["N", "k", "eigenvalue", "residual_norm"]);
            for r in &sweep.results {
                for (k, &e) in r.eigenvalues.iter().enumerate() {
                    csv.row(&[r.dim.to_string(), k.to_string(), fmt_f64(e), fmt_f64(r.residual_norm)]);
                }
            }
            csv.finish()
        }
    };
    Ok((text, out.output.clone(), true))
}

fn perturb(params: &ParamArgs, out: &OutArgs) -> Outcome {
    let p = params_of(params)?;
    let mut rows: Vec<(&str, f64)> = Vec::new();
    if p.lambda() == 0.0 {
        let e0 = spiked_osc::basis::energy_n(&p, 0);
        rows.push(("E0", e0));
        rows.push(("energy", e0));
    } else {
        let s = energy_series(&p)?;
        rows.extend([
            ("E0", s.e0),
            ("c1", s.c1),
            ("c2", s.c2),
            ("c2_error", s.c2_error),
            ("energy", s.value(p.lambda())),
        ]);
    }
    let text = match out.format {
        Format::Json => {
            let mut m = serde_json::Map::new();
            m.insert("params".into(), params_json(&p));
            for (k, v) in &rows {
                m.insert((*k).into(), num(*v));
            }
            json_text(&Value::Object(m))
        }
        Format::Csv => {
            let mut csv = Csv::new(&["quantity", "value"]);
            for (k, v) in &rows {
                csv.row(&[(*k).to_string(), fmt_f64(*v)]);
            }
            csv.finish()
        }
    };
    Ok((text, out.output.clone(), true))
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
fn grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let h = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { stop } else { start + h * i as f64 })
                .collect()
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn wavefun(
    params: &ParamArgs,
    x_start: f64,
    x_stop: f64,
    x_count: usize,
    method: MethodArg,
    c: Option<f64>,
    terms: usize,
    allow_unproven: bool,
    out: &OutArgs,
) -> Outcome {
    let p = params_of(params)?;
    if x_count > 0 && !(x_start > 0.0 && x_stop > 0.0 && x_start.is_finite() && x_stop.is_finite()) {
        return Err(Failure::Usage(format!("grid must lie in x > 0, got [{x_start}, {x_stop}]")));
    }
    if terms == 0 {
        return Err(Failure::Usage("--terms must be at least 1".into()));
    }
    let xs = grid(x_start, x_stop, x_count);
    let series = SeriesOptions {
        max_terms: terms,
        allow_unproven,
    };
    let contour = ContourOptions {
        c,
        ..ContourOptions::default()
    };
    let samples = sample_psi1(&p, &xs, method.into(), &series, &contour)?;
    let name = samples.method.name();
    let text = match out.format {
        Format::Json => json_text(&object([
            ("params", params_json(&p)),
            ("method", Value::String(name.into())),
            ("xs", nums(&samples.xs)),
            ("values", nums(&samples.values)),
        ])),
        Format::Csv => {
            let mut csv = Csv::new(&["x", "value", "method"]);
            for (&x, &v) in samples.xs.iter().zip(&samples.values) {
                csv.row(&[fmt_f64(x), fmt_f64(v), name.to_string()]);
            }
            csv.finish()
        }
    };
    Ok((text, out.output.clone(), true))
}

fn verify(params: &ParamArgs, dim: usize, out: &OutArgs) -> Outcome {
    let p = params_of(params)?;
    let checks = verify::run(&p, dim)?;
    let passed = checks.iter().all(|c| c.passed);
    let text = match out.format {
        Format::Json => {
            let list = checks
                .iter()
                .map(|c| {
                    object([
                        ("name", Value::String(c.name.into())),
                        ("passed", Value::Bool(c.passed)),
                        ("worst", num(c.worst)),
                        ("tolerance", num(c.tolerance)),
                    ])
                })
                .collect();
            json_text(&object([
                ("params", params_json(&p)),
                ("checks", Value::Array(list)),
                ("passed", Value::Bool(passed)),
            ]))
        }
        Format::Csv => {
            let mut csv = Csv::new(&["check", "passed", "worst", "tolerance"]);
            for c in &checks {
                csv.row(&[c.name.into(), c.passed.to_string(), fmt_f64(c.worst), fmt_f64(c.tolerance)]);
            }
            csv.finish()
        }
    };
    Ok((text, out.output.clone(), passed))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SPIKED_OSC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("SPIKED_OSC_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot size thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let (text, path, passed) = match &cli.command {
        Command::Matelem { params, n, out } => matelem(params, *n, out),
        Command::Spectrum { params, n, n_list, out } => spectrum(params, *n, n_list.as_deref(), out),
        Command::Perturb { params, out } => perturb(params, out),
        Command::Wavefun {
            params,
            x_start,
            x_stop,
            x_count,
            method,
            c,
            terms,
            allow_unproven,
            out,
        } => wavefun(params, *x_start, *x_stop, *x_count, *method, *c, *terms, *allow_unproven, out),
        Command::Verify { params, n, out } => verify(params, *n, out),
    }?;
    match path {
        Some(p) => std::fs::write(&p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string()))?,
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprint!("{}", json_text(&f.report()));
            ExitCode::from(f.code())
        }
    }
}
