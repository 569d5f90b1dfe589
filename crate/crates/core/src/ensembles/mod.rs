//! Ensemble parameters, the forms whose hyperpfaffians are partition
//! functions, the classical Pfaffian matrices for small `L`, and
//! correlation functions.
//!
//! With `omega(x) = sum_t Wr(p_t; x) eps_t` the partition function is
//!
//! * `L` even, `beta = L^2`: `PF(int omega dnu)`;
//! * `L` odd, `N` even, `beta = L^2`: `PF(1/2 int int omega(x) ^ omega(y) sgn(y-x))`;
//! * `L` odd, `N` odd, `beta = L^2`: the same plus the bordering term
//!   `int omega ^ eps'` in dimension `(N+1)L`;
//! * `beta = L^2 + 1`, `N = 2M`: the `sgn` kernel replaced by
//!   `(y^M - x^M)^2 / (y - x)`.
//!
//! On the circle `omega` is evaluated at `e^{i theta}` against the complex
//! weight of [`crate::measures::circular_weight`].

mod assembly;
mod correlation;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exterior::MAX_DIM;
use crate::measures::{Measure, MeasureKind};
use crate::polyfam::{binomial, standard_family, CompleteFamily, FamilyKind};

pub use assembly::{
    border_term, build_omega, classical_matrices, double_integral_form, integrated_omega, partition_function,
    Kernel,
};
pub use correlation::{correlation, MAX_CORRELATION_POINTS};

/// Largest number of form keys an ensemble may need.
pub const MAX_FORM_KEYS: u128 = 5_000_000;

/// Relative tolerance on the imaginary part of a real-line partition function.
pub const LINE_IMAG_TOLERANCE: f64 = 1e-9;
/// Same, on the circle.
pub const CIRCLE_IMAG_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Line,
    Circle,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::Line => "line",
            Geometry::Circle => "circle",
        })
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "line" | "real-line" | "real" => Ok(Geometry::Line),
            "circle" => Ok(Geometry::Circle),
            _ => Err(Error::UnknownKind { what: "geometry", name: s.to_string() }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// `L` even, `beta = L^2`.
    Case1,
    /// `L` odd, `N` even, `beta = L^2`.
    Case2,
    /// `L` odd, `N` odd, `beta = L^2`.
    Case3,
    /// `beta = L^2 + 1`, `L` odd, `N` even.
    Case4,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Case1 => "case1",
            Case::Case2 => "case2",
            Case::Case3 => "case3",
            Case::Case4 => "case4",
        })
    }
}

/// Splits `beta` into `(L, plus_one)` with `beta = L^2 + plus_one`.
pub fn level_for_beta(beta: u32) -> Result<(usize, bool)> {
    let root = (beta as f64).sqrt().round() as u32;
    if root >= 1 && root * root == beta {
        return Ok((root as usize, false));
    }
    let below = ((beta.saturating_sub(1)) as f64).sqrt().round() as u32;
    if beta >= 2 && below >= 1 && below * below + 1 == beta {
        return Ok((below as usize, true));
    }
    Err(Error::InvalidBeta(beta))
}

/// Case selection from the parities of `L` and `N`.
pub fn select_case(l: usize, n: usize, plus_one: bool) -> Result<Case> {
    if plus_one {
        if l % 2 == 0 {
            return Err(Error::InvalidEnsemble(format!("beta = L^2 + 1 needs L odd (L = {l})")));
        }
        if n % 2 == 1 {
            return Err(Error::InvalidEnsemble(format!("beta = L^2 + 1 needs N even (N = {n})")));
        }
        return Ok(Case::Case4);
    }
    Ok(match (l % 2 == 0, n % 2 == 0) {
        (true, _) => Case::Case1,
        (false, true) => Case::Case2,
        (false, false) => Case::Case3,
    })
}

#[derive(Clone, Debug)]
pub struct EnsembleSpec {
    l: usize,
    n: usize,
    beta: u32,
    case: Case,
    geometry: Geometry,
    measure: Measure,
    family: CompleteFamily,
}

impl EnsembleSpec {
    pub fn new(beta: u32, n: usize, measure: Measure, family: CompleteFamily) -> Result<Self> {
        let (l, plus_one) = level_for_beta(beta)?;
        if n == 0 {
            return Err(Error::InvalidEnsemble("N must be at least 1".into()));
        }
        let case = select_case(l, n, plus_one)?;
        let geometry = if measure.is_circular() { Geometry::Circle } else { Geometry::Line };
        if let MeasureKind::Circular { n: mn, beta: mb } = measure.kind() {
            if *mn != n || *mb != beta {
                return Err(Error::InvalidEnsemble(format!(
                    "circular measure built for (N={mn}, beta={mb}) used with (N={n}, beta={beta})"
                )));
            }
        }
        if family.size() != n * l {
            return Err(Error::InvalidEnsemble(format!("family has {} members, need N*L = {}", family.size(), n * l)));
        }
        let spec = Self { l, n, beta, case, geometry, measure, family };
        spec.check_size()?;
        Ok(spec)
    }

    pub fn with_family_kind(beta: u32, n: usize, measure: Measure, kind: FamilyKind) -> Result<Self> {
        let (l, _) = level_for_beta(beta)?;
        if n == 0 {
            return Err(Error::InvalidEnsemble("N must be at least 1".into()));
        }
        let family = standard_family(kind, n * l)?;
        Self::new(beta, n, measure, family)
    }

    /// Refuses specs whose forms would not fit at desk scale.
    fn check_size(&self) -> Result<()> {
        let d = self.form_dimension();
        if d > MAX_DIM {
            return Err(Error::DimensionTooLarge(d));
        }
        let span = (self.n * self.l).max(self.form_dimension());
        let keys = binomial(span, 2 * self.l) as u128;
        if keys > MAX_FORM_KEYS {
            return Err(Error::SizeGuard { keys, limit: MAX_FORM_KEYS });
        }
        // intermediate wedge powers in the hyperpfaffian
        let k = self.form_degree();
        let steps = d / k;
        let widest = (1..steps).map(|s| binomial(d, s * k) as u128).max().unwrap_or(0);
        if widest > MAX_FORM_KEYS {
            return Err(Error::SizeGuard { keys: widest, limit: MAX_FORM_KEYS });
        }
        Ok(())
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn family(&self) -> &CompleteFamily {
        &self.family
    }

    /// Same ensemble against a different measure of the same geometry.
    pub fn with_measure(&self, measure: Measure) -> Result<Self> {
        Self::new(self.beta, self.n, measure, self.family.clone())
    }

    /// Dimension of the form whose hyperpfaffian is taken.
    pub fn form_dimension(&self) -> usize {
        match self.case {
            Case::Case3 => (self.n + 1) * self.l,
            _ => self.n * self.l,
        }
    }

    pub fn form_degree(&self) -> usize {
        match self.case {
            Case::Case1 => self.l,
            _ => 2 * self.l,
        }
    }
}

/// One oracle comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleEntry {
    pub value: f64,
    pub rel_err: f64,
    /// Quadrature refinement delta or Monte Carlo standard error.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_estimate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZnResult {
    pub beta: u32,
    pub l: usize,
    pub n: usize,
    pub geometry: Geometry,
    pub case: Case,
    pub value: C64,
    pub form_dimension: usize,
    pub form_degree: usize,
    pub oracles: BTreeMap<String, OracleEntry>,
    /// Wall-clock time of form assembly and hyperpfaffian.
    pub seconds: f64,
}

impl ZnResult {
    /// Records an oracle value and its relative discrepancy from `value`.
    pub fn add_oracle(&mut self, name: &str, value: f64, error_estimate: Option<f64>) -> f64 {
        let rel_err = (self.value - value).norm() / value.abs().max(f64::MIN_POSITIVE);
        self.oracles.insert(name.to_string(), OracleEntry { value, rel_err, error_estimate });
        rel_err
    }

    pub fn to_json(&self) -> serde_json::Value {
        let oracles: serde_json::Map<String, serde_json::Value> = self
            .oracles
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::to_value(v).expect("oracle entry serializes")))
            .collect();
        json!({
            "beta": self.beta,
            "L": self.l,
            "N": self.n,
            "geometry": self.geometry,
            "case": self.case,
            "value": {"re": self.value.re, "im": self.value.im},
            "form_dimension": self.form_dimension,
            "form_degree": self.form_degree,
            "oracles": oracles,
            "seconds": self.seconds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_levels() {
        assert_eq!(level_for_beta(1).unwrap(), (1, false));
        assert_eq!(level_for_beta(2).unwrap(), (1, true));
        assert_eq!(level_for_beta(4).unwrap(), (2, false));
        assert_eq!(level_for_beta(5).unwrap(), (2, true));
        assert_eq!(level_for_beta(9).unwrap(), (3, false));
        assert_eq!(level_for_beta(10).unwrap(), (3, true));
        for bad in [0, 3, 6, 7, 8, 11] {
            let err = level_for_beta(bad).unwrap_err();
            assert!(err.to_string().contains("beta must be L^2 or L^2+1"));
        }
    }

    #[test]
    fn case_selection() {
        assert_eq!(select_case(2, 3, false).unwrap(), Case::Case1);
        assert_eq!(select_case(1, 2, false).unwrap(), Case::Case2);
        assert_eq!(select_case(3, 3, false).unwrap(), Case::Case3);
        assert_eq!(select_case(1, 4, true).unwrap(), Case::Case4);
        assert!(select_case(1, 3, true).is_err());
        assert!(select_case(2, 2, true).is_err());
    }

    #[test]
    fn spec_validation() {
        let g = Measure::gaussian();
        assert!(EnsembleSpec::with_family_kind(5, 2, g.clone(), FamilyKind::Monomial).is_err());
        assert!(EnsembleSpec::with_family_kind(2, 3, g.clone(), FamilyKind::Monomial).is_err());
        let fam = standard_family(FamilyKind::Monomial, 3).unwrap();
        assert!(EnsembleSpec::new(1, 2, g.clone(), fam).is_err());
        let circ = Measure::circular(3, 1).unwrap();
        assert!(EnsembleSpec::with_family_kind(1, 2, circ, FamilyKind::Monomial).is_err());
        let s = EnsembleSpec::with_family_kind(9, 3, g.clone(), FamilyKind::Monomial).unwrap();
        assert_eq!((s.case(), s.form_dimension(), s.form_degree()), (Case::Case3, 12, 6));
        assert!(matches!(
            EnsembleSpec::with_family_kind(16, 8, g, FamilyKind::Monomial),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let mut r = ZnResult {
            beta: 4,
            l: 2,
            n: 2,
            geometry: Geometry::Line,
            case: Case::Case1,
            value: C64::new(6.0, 0.0),
            form_dimension: 4,
            form_degree: 2,
            oracles: BTreeMap::new(),
            seconds: 0.0,
        };
        r.add_oracle("mehta", 6.0, None);
        let v = r.to_json();
        assert_eq!(v["case"], "case1");
        assert_eq!(v["geometry"], "line");
        assert_eq!(v["value"]["re"], 6.0);
        assert_eq!(v["oracles"]["mehta"]["rel_err"], 0.0);
        assert_eq!(v["L"], 2);
    }
}
