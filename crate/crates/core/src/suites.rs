//! Verification suites: each check compares a computed quantity with an
//! independent value and reports one CSV row.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ensembles::{partition_function, EnsembleSpec};
use crate::error::{Error, Result};
use crate::exterior::{form_from_matrix, hyperpfaffian, pfaffian, ExtForm, MultiIndex, SquareMatrix};
use crate::measures::Measure;
use crate::oracle::{
    dyson_value, hyperpfaffian_sum_oracle, mehta_value, selberg_value, sign_matrix_pfaffian_check,
    uniform_selberg_value, vandermonde_identity_check,
};
use crate::polyfam::{standard_family, FamilyKind};

pub const CSV_HEADER: &str = "suite,check,lhs,rhs,rel_err,pass";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Exterior,
    Identities,
    Mehta,
    Selberg,
    Dyson,
    Invariance,
    All,
}

impl Suite {
    const EACH: [Suite; 6] =
        [Suite::Exterior, Suite::Identities, Suite::Mehta, Suite::Selberg, Suite::Dyson, Suite::Invariance];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Exterior => "exterior",
            Suite::Identities => "identities",
            Suite::Mehta => "mehta",
            Suite::Selberg => "selberg",
            Suite::Dyson => "dyson",
            Suite::Invariance => "invariance",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|k| k.name() == s.trim().to_ascii_lowercase())
            .copied()
            .ok_or_else(|| Error::UnknownKind { what: "suite", name: s.to_string() })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub suite: &'static str,
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub pass: bool,
}

impl CheckRow {
    fn compare(suite: Suite, check: String, lhs: f64, rhs: f64, tol: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        let rel_err = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
        Self { suite: suite.name(), check, lhs, rhs, rel_err, pass: rel_err <= tol }
    }

    /// A row for a computation that errored.
    fn failed(suite: Suite, check: String, err: &Error) -> Self {
        Self {
            suite: suite.name(),
            check: format!("{check} [{err}]"),
            lhs: f64::NAN,
            rhs: f64::NAN,
            rel_err: f64::INFINITY,
            pass: false,
        }
    }

    pub fn to_csv(&self) -> String {
        let check = if self.check.contains([',', '"']) {
            format!("\"{}\"", self.check.replace('"', "\"\""))
        } else {
            self.check.clone()
        };
        format!("{},{},{:e},{:e},{:e},{}", self.suite, check, self.lhs, self.rhs, self.rel_err, self.pass)
    }
}

/// Runs a suite (`All` runs every suite in order). Individual failures
/// become failing rows rather than errors.
pub fn run_suite(suite: Suite, tol: f64) -> Vec<CheckRow> {
    match suite {
        Suite::All => Suite::EACH.iter().flat_map(|s| run_suite(*s, tol)).collect(),
        Suite::Exterior => exterior(tol),
        Suite::Identities => identities(tol),
        Suite::Mehta => mehta(tol),
        Suite::Selberg => selberg(tol),
        Suite::Dyson => dyson(tol),
        Suite::Invariance => invariance(tol),
    }
}

fn row_or_fail(suite: Suite, check: String, tol: f64, f: impl FnOnce() -> Result<(f64, f64)>) -> CheckRow {
    match f() {
        Ok((lhs, rhs)) => CheckRow::compare(suite, check, lhs, rhs, tol),
        Err(e) => CheckRow::failed(suite, check, &e),
    }
}

pub fn random_antisymmetric(order: usize, rng: &mut ChaCha8Rng) -> SquareMatrix {
    let mut a = SquareMatrix::zeros(order, order);
    for i in 0..order {
        for j in i + 1..order {
            let v = C64::new(rng.random_range(-1.0..1.0), 0.0);
            a[(i, j)] = v;
            a[(j, i)] = -v;
        }
    }
    a
}

pub fn random_form(dim: usize, degree: usize, rng: &mut ChaCha8Rng) -> Result<ExtForm> {
    let keys = MultiIndex::all_of_degree(dim, degree)?;
    ExtForm::from_terms(dim, degree, keys.into_iter().map(|k| (k, C64::new(rng.random_range(-1.0..1.0), 0.0))))
}

/// `n` uniform points in `[-r, r]` at mutual distance at least `r / 4`.
/// `det V` scales like the gaps to the power `L^2`, so near-coincident
/// draws measure conditioning rather than the identity.
pub fn separated_points(n: usize, r: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let pts: Vec<f64> = (0..n).map(|_| rng.random_range(-r..r)).collect();
        let ok = pts.iter().enumerate().all(|(i, a)| pts[..i].iter().all(|b| (a - b).abs() >= r / 4.0));
        if ok {
            return pts;
        }
    }
}

fn exterior(tol: f64) -> Vec<CheckRow> {
    let s = Suite::Exterior;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut rows = Vec::new();
    for order in (2..=12).step_by(2) {
        for rep in 0..3 {
            let a = random_antisymmetric(order, &mut rng);
            rows.push(row_or_fail(s, format!("PF(form) vs Pf(matrix) order {order} #{rep}"), tol, || {
                Ok((hyperpfaffian(&form_from_matrix(&a)?)?.re, pfaffian(&a)?.re))
            }));
        }
    }
    for (dim, degree) in [(6, 2), (8, 2), (10, 2), (8, 4), (12, 4), (12, 6)] {
        let form = random_form(dim, degree, &mut rng);
        rows.push(row_or_fail(s, format!("PF vs set-partition sum D={dim} k={degree}"), tol, || {
            let form = form?;
            Ok((hyperpfaffian(&form)?.re, hyperpfaffian_sum_oracle(&form)?.re))
        }));
    }
    rows
}

fn identities(tol: f64) -> Vec<CheckRow> {
    let s = Suite::Identities;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut rows = Vec::new();
    for kind in FamilyKind::ALL_DEFAULT {
        for draw in 0..12 {
            let l = 1 + draw % 3;
            let n = 1 + (draw / 3) % 3;
            let lambdas = separated_points(n, 2.0, &mut rng);
            rows.push(row_or_fail(s, format!("confluent Vandermonde {} L={l} N={n} #{draw}", kind.name()), tol, || {
                let c = vandermonde_identity_check(&standard_family(kind, n * l)?, l, &lambdas)?;
                Ok((c.lhs.re, c.rhs.re))
            }));
        }
    }
    for n in [2usize, 4, 6] {
        for draw in 0..3 {
            let lambdas: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            match sign_matrix_pfaffian_check(&lambdas) {
                Ok(c) => {
                    rows.push(CheckRow::compare(s, format!("Pf T n={n} #{draw}"), c.pf_t.re, c.sign_product, tol));
                    rows.push(CheckRow::compare(s, format!("Pf S n={n} #{draw}"), c.pf_s.re, c.product, tol));
                }
                Err(e) => rows.push(CheckRow::failed(s, format!("Pf T/S n={n} #{draw}"), &e)),
            }
        }
    }
    rows
}

fn hyperpfaffian_value(beta: u32, n: usize, measure: Measure) -> Result<C64> {
    let spec = EnsembleSpec::with_family_kind(beta, n, measure, FamilyKind::Monomial)?;
    Ok(partition_function(&spec)?.value)
}

fn mehta(tol: f64) -> Vec<CheckRow> {
    let configs = [(1u32, 2usize), (1, 3), (1, 4), (1, 5), (4, 2), (4, 3), (4, 4), (9, 2), (9, 3), (9, 5)];
    configs
        .iter()
        .map(|&(beta, n)| {
            row_or_fail(Suite::Mehta, format!("gaussian beta={beta} N={n}"), tol, || {
                Ok((hyperpfaffian_value(beta, n, Measure::gaussian())?.re, mehta_value(beta as f64 / 2.0, n)?))
            })
        })
        .collect()
}

fn selberg(tol: f64) -> Vec<CheckRow> {
    let s = Suite::Selberg;
    let mut rows = Vec::new();
    for (beta, n) in [(1u32, 2usize), (1, 3), (4, 2), (4, 3), (9, 2)] {
        rows.push(row_or_fail(s, format!("jacobi(1,1) beta={beta} N={n}"), tol, || {
            let z = hyperpfaffian_value(beta, n, Measure::jacobi(1.0, 1.0)?)?;
            Ok((z.re, selberg_value(beta as f64 / 2.0, 1.0, 1.0, n)?))
        }));
    }
    for (beta, n, a, b) in [(1u32, 3usize, 2.0, 3.5), (4, 2, 0.5, 1.5)] {
        rows.push(row_or_fail(s, format!("jacobi({a},{b}) beta={beta} N={n}"), tol, || {
            let z = hyperpfaffian_value(beta, n, Measure::jacobi(a, b)?)?;
            Ok((z.re, selberg_value(beta as f64 / 2.0, a, b, n)?))
        }));
    }
    rows.push(row_or_fail(s, "uniform(-1,2) beta=4 N=3".into(), tol, || {
        let z = hyperpfaffian_value(4, 3, Measure::uniform(-1.0, 2.0)?)?;
        Ok((z.re, uniform_selberg_value(4, -1.0, 2.0, 3)?))
    }));
    rows
}

fn dyson(tol: f64) -> Vec<CheckRow> {
    let s = Suite::Dyson;
    let mut rows = Vec::new();
    for (beta, n) in [(1u32, 2usize), (1, 3), (4, 2), (4, 3), (9, 2), (2, 2), (2, 4)] {
        let check = format!("circular beta={beta} N={n}");
        match Measure::circular(n, beta).and_then(|m| hyperpfaffian_value(beta, n, m)) {
            Ok(c) => {
                let expected = dyson_value(beta, n) * (2.0 * std::f64::consts::PI).powi(n as i32);
                rows.push(CheckRow::compare(s, check.clone(), c.re, expected, tol));
                let imag = c.im.abs() / c.norm();
                rows.push(CheckRow {
                    suite: s.name(),
                    check: format!("{check} imaginary part"),
                    lhs: c.im,
                    rhs: 0.0,
                    rel_err: imag,
                    pass: imag <= 1e-8,
                });
            }
            Err(e) => rows.push(CheckRow::failed(s, check, &e)),
        }
    }
    rows
}

/// Largest relative spread of `Z_N` across the default families, over all
/// valid Gaussian ensembles with `L <= 3`, `N <= 4`.
fn invariance(tol: f64) -> Vec<CheckRow> {
    let s = Suite::Invariance;
    let mut rows = Vec::new();
    for beta in [1u32, 2, 4, 9, 10] {
        for n in 1..=4usize {
            let check = format!("gaussian beta={beta} N={n}");
            let mut values = Vec::new();
            let mut failure = None;
            for kind in FamilyKind::ALL_DEFAULT {
                match EnsembleSpec::with_family_kind(beta, n, Measure::gaussian(), kind) {
                    Ok(spec) => match partition_function(&spec) {
                        Ok(r) => values.push(r.value.re),
                        Err(e) => failure = Some(e),
                    },
                    // e.g. beta = L^2 + 1 with N odd: not an ensemble
                    Err(Error::InvalidEnsemble(_)) => break,
                    Err(e) => failure = Some(e),
                }
            }
            if let Some(e) = failure {
                rows.push(CheckRow::failed(s, check, &e));
            } else if !values.is_empty() {
                let hi = values.iter().cloned().fold(f64::MIN, f64::max);
                let lo = values.iter().cloned().fold(f64::MAX, f64::min);
                rows.push(CheckRow::compare(s, format!("{check} spread over 4 families"), hi, lo, tol));
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::EACH.iter().chain([Suite::All].iter()) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn csv_quoting() {
        let r = CheckRow::compare(Suite::Dyson, "a,b".into(), 1.0, 1.0, 1e-9);
        assert_eq!(r.to_csv(), "dyson,\"a,b\",1e0,1e0,0e0,true");
    }

    #[test]
    fn exterior_and_identities_pass() {
        for suite in [Suite::Exterior, Suite::Identities] {
            let rows = run_suite(suite, 1e-9);
            assert!(!rows.is_empty());
            for r in rows {
                assert!(r.pass, "{}", r.to_csv());
            }
        }
    }
}
