//! Batch front end: convert parameterizations, evaluate log densities,
//! sample, and run diagnostics, all over JSON documents (stdin or --input,
//! results on stdout). Validation and solver failures come out as an error
//! document with a stable machine-readable code and a nonzero exit status.

mod doc;
mod emit;

use clap::{Args, Parser, Subcommand};
use doc::{CliError, ParamSet};
use niw::{mean_from_natural, natural_from_mean, sample_niw, NaturalParams, RandomSource};
use serde_json::{json, Value};
use std::io::{Read, Write};
use std::path::PathBuf;

/// Round-trip residual threshold for `check`.
const CHECK_TOLERANCE: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "niw",
    version,
    about = "Normal-inverse-Wishart parameter conversions, log densities, sampling, and checks over JSON"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert the input document to another parameterization
    Convert {
        /// Target parameterization
        #[arg(long, value_parser = ["standard", "natural", "mean"])]
        to: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate the log density at a point
    Logpdf {
        /// JSON file holding {"mu": [...], "sigma": [...]} (sigma row-major)
        #[arg(long)]
        at: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Draw newline-delimited {"mu", "sigma"} samples
    Sample {
        /// Number of draws
        #[arg(short = 'n', long = "count")]
        count: u64,
        /// Seed for the deterministic sample stream
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run round-trip and invariant diagnostics on the input parameters
    Check {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Input document; stdin when omitted
    #[arg(long)]
    input: Option<PathBuf>,
    /// Override the solver tolerance on |f(nu)|
    #[arg(long)]
    epsilon: Option<f64>,
    /// Override the solver's initial guess for nu
    #[arg(long)]
    nu0: Option<f64>,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            println!("{}", emit::to_string_pretty(&err.to_document()));
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Convert { to, common } => cmd_convert(&to, &common),
        Command::Logpdf { at, common } => cmd_logpdf(&at, &common),
        Command::Sample {
            count,
            seed,
            common,
        } => cmd_sample(count, seed, &common),
        Command::Check { common } => cmd_check(&common),
    }
}

fn load(common: &CommonArgs) -> Result<(ParamSet, niw::NuSolverConfig), CliError> {
    let text = match &common.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    let (set, mut cfg) = doc::parse_document(&text)?;
    if let Some(eps) = common.epsilon {
        cfg.epsilon = eps;
    }
    if let Some(nu0) = common.nu0 {
        cfg.nu0 = Some(nu0);
    }
    Ok((set, cfg))
}

fn cmd_convert(target: &str, common: &CommonArgs) -> Result<i32, CliError> {
    let (set, cfg) = load(common)?;
    let (out, report) = doc::convert(set, target, &cfg)?;
    println!(
        "{}",
        emit::to_string_pretty(&doc::output_document(&out, report.as_ref()))
    );
    Ok(0)
}

fn cmd_logpdf(at: &PathBuf, common: &CommonArgs) -> Result<i32, CliError> {
    let (set, cfg) = load(common)?;
    let dim = set.dim();
    let (eta, _) = doc::to_natural(set, &cfg)?;
    let text = std::fs::read_to_string(at)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", at.display())))?;
    let point: doc::PointDoc = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("cannot parse point document: {e}")))?;
    if point.mu.len() != dim {
        return Err(CliError::Lib(niw::Error::DimMismatch {
            expected: dim,
            got: point.mu.len(),
        }));
    }
    let sigma = niw::SymmetricMatrix::unvec_checked(&point.sigma, dim)?;
    let value = niw::log_pdf(&point.mu, &sigma, &eta)?;
    println!("{}", emit::format_f64(value));
    Ok(0)
}

fn cmd_sample(count: u64, seed: u64, common: &CommonArgs) -> Result<i32, CliError> {
    let (set, cfg) = load(common)?;
    let (params, _) = doc::to_standard(set, &cfg)?;
    let mut rng = RandomSource::from_seed(seed);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for _ in 0..count {
        let (mu, sigma) = sample_niw(&params, &mut rng)?;
        let line = json!({
            "mu": mu,
            "sigma": sigma.vec(),
        });
        writeln!(out, "{}", emit::to_string_compact(&line))
            .map_err(|e| CliError::Io(format!("cannot write sample: {e}")))?;
    }
    Ok(0)
}

fn natural_components(e: &NaturalParams) -> Vec<f64> {
    let mut v = e.eta1().vec();
    v.extend_from_slice(e.eta2());
    v.push(e.eta3());
    v.push(e.eta4());
    v
}

fn mean_components(m: &niw::MeanParams) -> Vec<f64> {
    let mut v = m.m1().vec();
    v.extend_from_slice(m.m2());
    v.push(m.m3());
    v.push(m.m4());
    v
}

fn max_rel_residual(got: &[f64], want: &[f64]) -> f64 {
    got.iter()
        .zip(want)
        .map(|(g, w)| (g - w).abs() / (1.0 + w.abs()))
        .fold(0.0, f64::max)
}

fn cmd_check(common: &CommonArgs) -> Result<i32, CliError> {
    let (set, cfg) = load(common)?;
    let dim = set.dim();
    let (eta, _) = doc::to_natural(set, &cfg)?;

    // forward to means, back to naturals, forward again
    let mean = mean_from_natural(&eta)?;
    let (eta_back, report) = natural_from_mean(&mean, &cfg)?;
    let mean_back = mean_from_natural(&eta_back)?;

    let eta_residual = max_rel_residual(&natural_components(&eta_back), &natural_components(&eta));
    let mean_residual = max_rel_residual(&mean_components(&mean_back), &mean_components(&mean));

    let standard = eta_back.to_standard()?;
    let lambda_ok = standard.lambda() > 0.0;
    let psi_ok = standard.psi().cholesky().is_ok();
    let nu_ok = standard.nu() > dim as f64 - 1.0;
    let f_ok = report.final_abs_f <= cfg.epsilon;
    let eta_ok = eta_residual < CHECK_TOLERANCE;
    let mean_ok = mean_residual < CHECK_TOLERANCE;

    let checks = vec![
        json!({"name": "natural_round_trip_max_rel_residual", "value": eta_residual,
               "tolerance": CHECK_TOLERANCE, "pass": eta_ok}),
        json!({"name": "mean_round_trip_max_rel_residual", "value": mean_residual,
               "tolerance": CHECK_TOLERANCE, "pass": mean_ok}),
        json!({"name": "nu_root_abs_f", "value": report.final_abs_f,
               "tolerance": cfg.epsilon, "pass": f_ok}),
        json!({"name": "lambda_positive", "pass": lambda_ok}),
        json!({"name": "psi_positive_definite", "pass": psi_ok}),
        json!({"name": "nu_above_dim_minus_one", "pass": nu_ok}),
    ];
    let pass = eta_ok && mean_ok && f_ok && lambda_ok && psi_ok && nu_ok;

    let mut out = json!({
        "dim": dim,
        "pass": pass,
        "checks": Value::Array(checks),
        "diagnostics": doc::report_value(&report),
    });
    if !pass {
        out["error"] = json!({
            "code": "INVALID_PARAMS",
            "message": "one or more checks failed; see the checks array",
        });
    }
    println!("{}", emit::to_string_pretty(&out));
    Ok(if pass { 0 } else { 1 })
}
