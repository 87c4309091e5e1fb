//! The JSON document schema: a parameter set is `{dim, parameterization,
//! params, solver?}` where matrices travel as row-major flat arrays of
//! length `dim * dim`. Incoming matrices are symmetrized, but asymmetry
//! beyond relative 1e-6 is rejected as corrupted data.

use niw::{
    mean_from_natural, natural_from_mean, standard_from_mean, MeanParams, NaturalParams,
    NuSolveReport, NuSolverConfig, StandardParams, SymmetricMatrix,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug)]
pub enum CliError {
    Lib(niw::Error),
    Parse(String),
    Io(String),
}

impl From<niw::Error> for CliError {
    fn from(e: niw::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Lib(e) => match e {
                niw::Error::DimMismatch { .. } => "DIM_MISMATCH",
                niw::Error::NotPositiveDefinite { .. } => "NOT_PD",
                niw::Error::NoRoot(_) => "NO_ROOT",
                niw::Error::BracketingFailed { .. } | niw::Error::NewtonStalled { .. } => {
                    "SOLVER_STALLED"
                }
                _ => "INVALID_PARAMS",
            },
            CliError::Parse(_) => "INVALID_PARAMS",
            CliError::Io(_) => "IO_ERROR",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Parse(m) | CliError::Io(m) => m.clone(),
        }
    }

    pub fn to_document(&self) -> Value {
        json!({"error": {"code": self.code(), "message": self.message()}})
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub dim: usize,
    pub parameterization: String,
    pub params: Value,
    #[serde(default)]
    pub solver: Option<SolverDoc>,
    /// Present when a previous run's output is piped back in; ignored.
    #[serde(default)]
    #[allow(dead_code)]
    pub diagnostics: Option<Value>,
}

#[derive(Debug, Default, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SolverDoc {
    #[serde(default)]
    pub nu0: Option<f64>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub max_newton_iters: Option<u32>,
    #[serde(default)]
    pub max_bracket_halvings: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StandardDoc {
    mu0: Vec<f64>,
    lambda: f64,
    psi: Vec<f64>,
    nu: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NaturalDoc {
    eta1: Vec<f64>,
    eta2: Vec<f64>,
    eta3: f64,
    eta4: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeanDoc {
    m1: Vec<f64>,
    m2: Vec<f64>,
    m3: f64,
    m4: f64,
}

/// The evaluation point for `logpdf`: `{mu, sigma}` with `sigma` flattened
/// row-major.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
}

#[derive(Debug)]
pub enum ParamSet {
    Standard(StandardParams),
    Natural(NaturalParams),
    Mean(MeanParams),
}

impl ParamSet {
    pub fn tag(&self) -> &'static str {
        match self {
            ParamSet::Standard(_) => "standard",
            ParamSet::Natural(_) => "natural",
            ParamSet::Mean(_) => "mean",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ParamSet::Standard(p) => p.dim(),
            ParamSet::Natural(e) => e.dim(),
            ParamSet::Mean(m) => m.dim(),
        }
    }
}

fn float_array(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| json!(x)).collect())
}

pub fn parse_document(text: &str) -> Result<(ParamSet, NuSolverConfig), CliError> {
    let doc: InputDocument = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("cannot parse input document: {e}")))?;
    if doc.dim == 0 {
        return Err(CliError::Parse("dim must be a positive integer".into()));
    }
    let d = doc.dim;

    let set = match doc.parameterization.as_str() {
        "standard" => {
            let p: StandardDoc = payload(doc.params)?;
            check_len(p.mu0.len(), d)?;
            let psi = SymmetricMatrix::unvec_checked(&p.psi, d)?;
            ParamSet::Standard(StandardParams::new(p.mu0, p.lambda, psi, p.nu)?)
        }
        "natural" => {
            let p: NaturalDoc = payload(doc.params)?;
            check_len(p.eta2.len(), d)?;
            let eta1 = SymmetricMatrix::unvec_checked(&p.eta1, d)?;
            ParamSet::Natural(NaturalParams::new(eta1, p.eta2, p.eta3, p.eta4)?)
        }
        "mean" => {
            let p: MeanDoc = payload(doc.params)?;
            check_len(p.m2.len(), d)?;
            let m1 = SymmetricMatrix::unvec_checked(&p.m1, d)?;
            ParamSet::Mean(MeanParams::new(m1, p.m2, p.m3, p.m4)?)
        }
        other => {
            return Err(CliError::Parse(format!(
                "unknown parameterization {other:?}; expected \"standard\", \"natural\", or \"mean\""
            )))
        }
    };

    let solver = doc.solver.unwrap_or_default();
    let defaults = NuSolverConfig::default();
    let cfg = NuSolverConfig {
        nu0: solver.nu0,
        epsilon: solver.epsilon.unwrap_or(defaults.epsilon),
        max_newton_iters: solver.max_newton_iters.unwrap_or(defaults.max_newton_iters),
        max_bracket_halvings: solver
            .max_bracket_halvings
            .unwrap_or(defaults.max_bracket_halvings),
    };
    Ok((set, cfg))
}

fn payload<T: serde::de::DeserializeOwned>(params: Value) -> Result<T, CliError> {
    serde_json::from_value(params)
        .map_err(|e| CliError::Parse(format!("cannot parse params payload: {e}")))
}

fn check_len(got: usize, want: usize) -> Result<(), CliError> {
    if got != want {
        return Err(CliError::Lib(niw::Error::DimMismatch {
            expected: want,
            got,
        }));
    }
    Ok(())
}

pub fn params_value(set: &ParamSet) -> Value {
    match set {
        ParamSet::Standard(p) => json!({
            "mu0": float_array(p.mu0()),
            "lambda": p.lambda(),
            "psi": float_array(&p.psi().vec()),
            "nu": p.nu(),
        }),
        ParamSet::Natural(e) => json!({
            "eta1": float_array(&e.eta1().vec()),
            "eta2": float_array(e.eta2()),
            "eta3": e.eta3(),
            "eta4": e.eta4(),
        }),
        ParamSet::Mean(m) => json!({
            "m1": float_array(&m.m1().vec()),
            "m2": float_array(m.m2()),
            "m3": m.m3(),
            "m4": m.m4(),
        }),
    }
}

pub fn report_value(rep: &NuSolveReport) -> Value {
    json!({
        "nu": rep.nu,
        "bracket_halvings": rep.bracket_halvings,
        "newton_iters": rep.newton_iters,
        "final_abs_f": rep.final_abs_f,
    })
}

pub fn output_document(set: &ParamSet, report: Option<&NuSolveReport>) -> Value {
    let mut doc = json!({
        "dim": set.dim(),
        "parameterization": set.tag(),
        "params": params_value(set),
    });
    if let Some(rep) = report {
        doc["diagnostics"] = report_value(rep);
    }
    doc
}

/// Routes a parameter set to the target parameterization, reporting solver
/// diagnostics whenever the nu root-find ran (i.e. the source was mean).
pub fn convert(
    set: ParamSet,
    target: &str,
    cfg: &NuSolverConfig,
) -> Result<(ParamSet, Option<NuSolveReport>), CliError> {
    let out = match (set, target) {
        (set @ ParamSet::Standard(_), "standard") => (set, None),
        (ParamSet::Standard(p), "natural") => (ParamSet::Natural(p.to_natural()), None),
        (ParamSet::Standard(p), "mean") => (
            ParamSet::Mean(mean_from_natural(&p.to_natural())?),
            None,
        ),
        (ParamSet::Natural(e), "standard") => (ParamSet::Standard(e.to_standard()?), None),
        (set @ ParamSet::Natural(_), "natural") => (set, None),
        (ParamSet::Natural(e), "mean") => (ParamSet::Mean(mean_from_natural(&e)?), None),
        (ParamSet::Mean(m), "standard") => {
            let (p, rep) = standard_from_mean(&m, cfg)?;
            (ParamSet::Standard(p), Some(rep))
        }
        (ParamSet::Mean(m), "natural") => {
            let (e, rep) = natural_from_mean(&m, cfg)?;
            (ParamSet::Natural(e), Some(rep))
        }
        (set @ ParamSet::Mean(_), "mean") => (set, None),
        (_, other) => {
            return Err(CliError::Parse(format!(
                "unknown target parameterization {other:?}"
            )))
        }
    };
    Ok(out)
}

/// The standard-form view of any parameter set (solves for nu when the
/// source is mean).
pub fn to_standard(
    set: ParamSet,
    cfg: &NuSolverConfig,
) -> Result<(StandardParams, Option<NuSolveReport>), CliError> {
    match set {
        ParamSet::Standard(p) => Ok((p, None)),
        ParamSet::Natural(e) => Ok((e.to_standard()?, None)),
        ParamSet::Mean(m) => {
            let (p, rep) = standard_from_mean(&m, cfg)?;
            Ok((p, Some(rep)))
        }
    }
}

/// The natural-form view of any parameter set.
pub fn to_natural(
    set: ParamSet,
    cfg: &NuSolverConfig,
) -> Result<(NaturalParams, Option<NuSolveReport>), CliError> {
    match set {
        ParamSet::Standard(p) => Ok((p.to_natural(), None)),
        ParamSet::Natural(e) => Ok((e, None)),
        ParamSet::Mean(m) => {
            let (e, rep) = natural_from_mean(&m, cfg)?;
            Ok((e, Some(rep)))
        }
    }
}
