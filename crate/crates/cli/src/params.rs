//! Flags merged over an optional JSON config.

use std::fmt;
use std::str::FromStr;

use hyperpf::ensembles::{level_for_beta, EnsembleSpec, Geometry};
use hyperpf::measures::{AtomDescriptor, MeasureDescriptor};
use hyperpf::polyfam::FamilyKind;
use serde::Deserialize;

use crate::SpecArgs;

pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug)]
pub enum ParamsError {
    Config(String),
    Invalid(String),
    Spec(hyperpf::Error),
}

impl fmt::Display for ParamsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamsError::Config(m) => write!(f, "config: {m}"),
            ParamsError::Invalid(m) => f.write_str(m),
            ParamsError::Spec(e) => write!(f, "{e}"),
        }
    }
}

impl From<hyperpf::Error> for ParamsError {
    fn from(e: hyperpf::Error) -> Self {
        ParamsError::Spec(e)
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Config {
    beta: Option<u32>,
    n: Option<usize>,
    geometry: Option<String>,
    weight: Option<String>,
    a: Option<f64>,
    b: Option<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
    family: Option<String>,
    seed: Option<u64>,
    quad_order: Option<usize>,
    oracle: Option<String>,
    tol: Option<f64>,
    threads: Option<usize>,
    #[serde(default)]
    atoms: Vec<AtomDescriptor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    Auto,
    None,
    All,
}

impl FromStr for OracleMode {
    type Err = ParamsError;

    fn from_str(s: &str) -> Result<Self, ParamsError> {
        match s {
            "auto" => Ok(OracleMode::Auto),
            "none" => Ok(OracleMode::None),
            "all" => Ok(OracleMode::All),
            _ => Err(ParamsError::Invalid(format!("--oracle must be auto, none or all (got {s})"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Params {
    pub beta: u32,
    pub n: Option<usize>,
    pub measure: MeasureDescriptor,
    pub family: FamilyKind,
    pub seed: u64,
    pub oracle: OracleMode,
    pub tol: f64,
    pub threads: Option<usize>,
}

impl Params {
    pub fn resolve(args: &SpecArgs, n: Option<usize>) -> Result<Self, ParamsError> {
        let cfg = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| ParamsError::Config(format!("{}: {e}", path.display())))?;
                serde_json::from_str::<Config>(&text).map_err(|e| ParamsError::Config(e.to_string()))?
            }
            None => Config::default(),
        };
        let beta = args.beta.or(cfg.beta).ok_or_else(|| ParamsError::Invalid("--beta is required".into()))?;
        let geometry = args
            .geometry
            .clone()
            .or(cfg.geometry)
            .map(|g| g.parse::<Geometry>())
            .transpose()?;
        let weight = args.weight.clone().or(cfg.weight).unwrap_or_else(|| match geometry {
            Some(Geometry::Circle) => "circular".into(),
            _ => "gaussian".into(),
        });
        let weight = weight.to_ascii_lowercase();
        let implied = if weight == "circular" { Geometry::Circle } else { Geometry::Line };
        if let Some(g) = geometry {
            if g != implied {
                return Err(ParamsError::Invalid(format!("weight {weight} lives on the {implied}, not the {g}")));
            }
        }
        let seed = args.seed.or(cfg.seed).unwrap_or(0);
        let family = match args.family.clone().or(cfg.family) {
            None => FamilyKind::Monomial,
            Some(f) => match f.parse::<FamilyKind>()? {
                // a bare "random" takes --seed
                FamilyKind::RandomMonic { .. } if !f.contains(':') => FamilyKind::RandomMonic { seed },
                k => k,
            },
        };
        let measure = MeasureDescriptor {
            kind: weight,
            a: args.a.or(cfg.a),
            b: args.b.or(cfg.b),
            lo: args.lo.or(cfg.lo),
            hi: args.hi.or(cfg.hi),
            atoms: cfg.atoms,
            quad_order: args.quad_order.or(cfg.quad_order),
        };
        let oracle = args.oracle.clone().or(cfg.oracle).map(|o| o.parse()).transpose()?.unwrap_or(OracleMode::Auto);
        let tol = args.tol.or(cfg.tol).unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0) {
            return Err(ParamsError::Invalid(format!("--tol must be positive (got {tol})")));
        }
        Ok(Self { beta, n: n.or(cfg.n), measure, family, seed, oracle, tol, threads: cfg.threads })
    }

    pub fn spec(&self, n: usize) -> Result<EnsembleSpec, hyperpf::Error> {
        level_for_beta(self.beta)?;
        let measure = self.measure.build(n, self.beta)?;
        EnsembleSpec::with_family_kind(self.beta, n, measure, self.family)
    }
}
