use std::f64::consts::PI;
use std::process::ExitCode;

use hyperpf::ensembles::{partition_function, EnsembleSpec, ZnResult};
use hyperpf::measures::MeasureKind;
use hyperpf::oracle::{
    direct_partition_function, dyson_value, mehta_value, selberg_value, uniform_selberg_value, DirectMethod,
    MAX_MONTE_CARLO_N, MAX_TENSOR_N,
};
use hyperpf::Error;

use crate::params::{OracleMode, Params};
use crate::{EXIT_DISAGREE, EXIT_SPEC};

const MONTE_CARLO_SAMPLES: usize = 200_000;
/// Auto mode adds direct quadrature as a second opinion up to this `N`.
const AUTO_QUADRATURE_MAX_N: usize = 3;
/// Monte Carlo agreement is judged in standard errors.
const MONTE_CARLO_SIGMAS: f64 = 4.0;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ImaginaryResidue { .. } => EXIT_DISAGREE,
        _ => EXIT_SPEC,
    }
}

/// The gamma-product value for the measure, if there is one.
pub fn closed_form(spec: &EnsembleSpec) -> Result<Option<(&'static str, f64)>, Error> {
    let m = spec.measure();
    if !m.atoms().is_empty() {
        return Ok(None);
    }
    let (n, beta) = (spec.n(), spec.beta());
    let gamma = beta as f64 / 2.0;
    let s = m.scale().powi(n as i32);
    Ok(Some(match m.kind() {
        MeasureKind::Gaussian => ("mehta", s * mehta_value(gamma, n)?),
        MeasureKind::Jacobi { a, b } => ("selberg", s * selberg_value(gamma, *a, *b, n)?),
        MeasureKind::Uniform { lo, hi } => ("selberg", s * uniform_selberg_value(beta, *lo, *hi, n)?),
        MeasureKind::Circular { .. } => ("dyson", s * dyson_value(beta, n) * (2.0 * PI).powi(n as i32)),
        MeasureKind::Custom(_) => return Ok(None),
    }))
}

pub struct Evaluation {
    pub result: ZnResult,
    /// Oracles that disagree beyond tolerance.
    pub disagreements: Vec<String>,
    /// Seed used if Monte Carlo ran.
    pub monte_carlo_seed: Option<u64>,
}

pub fn evaluate(params: &Params, n: usize) -> Result<Evaluation, Error> {
    let spec = params.spec(n)?;
    let mut result = partition_function(&spec)?;
    let mut disagreements = Vec::new();
    let mut monte_carlo_seed = None;
    if params.oracle == OracleMode::None {
        return Ok(Evaluation { result, disagreements, monte_carlo_seed });
    }
    let all = params.oracle == OracleMode::All;
    let exact = closed_form(&spec)?;
    if let Some((name, value)) = exact {
        if result.add_oracle(name, value, None) > params.tol {
            disagreements.push(name.to_string());
        }
    }
    let atoms = !spec.measure().atoms().is_empty();
    let want_quadrature = !atoms && n <= MAX_TENSOR_N && (all || exact.is_none() || n <= AUTO_QUADRATURE_MAX_N);
    if want_quadrature {
        let d = direct_partition_function(&spec, DirectMethod::TensorQuadrature { order: None })?;
        result.add_oracle("quadrature", d.value, Some(d.error));
        let diff = (result.value.re - d.value).abs();
        if diff > (params.tol * d.value.abs()).max(MONTE_CARLO_SIGMAS * d.error) {
            disagreements.push("quadrature".into());
        }
    }
    if all && !atoms && n <= MAX_MONTE_CARLO_N {
        let method = DirectMethod::MonteCarlo { samples: MONTE_CARLO_SAMPLES, seed: params.seed };
        let d = direct_partition_function(&spec, method)?;
        result.add_oracle("monte_carlo", d.value, Some(d.error));
        monte_carlo_seed = Some(params.seed);
        if (result.value.re - d.value).abs() > MONTE_CARLO_SIGMAS * d.error {
            disagreements.push("monte_carlo".into());
        }
    }
    Ok(Evaluation { result, disagreements, monte_carlo_seed })
}

pub fn run(params: &Params) -> ExitCode {
    let Some(n) = params.n else {
        eprintln!("error: --n is required");
        return ExitCode::from(EXIT_SPEC);
    };
    let eval = match evaluate(params, n) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let mut doc = eval.result.to_json();
    doc["family"] = params.family.name().into();
    doc["weight"] = params.measure.kind.clone().into();
    if let Some(seed) = eval.monte_carlo_seed {
        doc["seed"] = seed.into();
    }
    println!("{}", serde_json::to_string_pretty(&doc).expect("result serializes"));
    if !eval.disagreements.is_empty() {
        eprintln!("error: oracle disagreement beyond tolerance {}: {}", params.tol, eval.disagreements.join(", "));
        return ExitCode::from(EXIT_DISAGREE);
    }
    ExitCode::SUCCESS
}
