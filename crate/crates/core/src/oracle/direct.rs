//! Brute-force evaluation of
//! `Z_N = 1/N! int prod_{m<n} |lambda_n - lambda_m|^beta dnu^N`
//! (and of `C_N` with `dtheta` on the circle).
//!
//! The integrand is symmetric, so tensor quadrature integrates one ordered
//! chamber, where `|.|^beta` has no kink:
//!
//! * Gaussian: coordinates `lambda_1` and the gaps `u_k > 0`; the centre of
//!   mass integrates out in closed form and the gaps use a Gauss–Legendre
//!   box large enough for the Gaussian tail;
//! * finite support: nested Gauss–Legendre over `lo < l_1 < ... < l_N < hi`;
//! * circle: rotation invariance fixes `theta_1 = 0`, leaving the chamber
//!   `0 < theta_2 < ... < theta_N < 2 pi` with `C_N = (2 pi / N) chamber`.
//!
//! The error estimate is the change under a coarser rule.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use rayon::prelude::*;

use crate::ensembles::EnsembleSpec;
use crate::error::{Error, Result};
use crate::measures::quadrature::gauss_legendre;
use crate::measures::{Measure, MeasureKind};
use crate::special::{beta_fn, factorial};

pub const MAX_TENSOR_N: usize = 4;
pub const MAX_MONTE_CARLO_N: usize = 6;
const MC_CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectMethod {
    /// Nested Gauss–Legendre; `None` picks an order from `N`.
    TensorQuadrature { order: Option<usize> },
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectEstimate {
    pub value: f64,
    /// Order-refinement delta, or the Monte Carlo standard error.
    pub error: f64,
}

pub fn direct_partition_function(spec: &EnsembleSpec, method: DirectMethod) -> Result<DirectEstimate> {
    let measure = spec.measure();
    if !measure.atoms().is_empty() {
        return Err(Error::Unsupported("direct integration of measures with atoms".into()));
    }
    let n = spec.n();
    let beta = spec.beta();
    match method {
        DirectMethod::TensorQuadrature { order } => {
            if n > MAX_TENSOR_N {
                return Err(Error::Unsupported(format!("tensor quadrature needs N <= {MAX_TENSOR_N} (N = {n})")));
            }
            let q = order.unwrap_or(default_order(n));
            let coarse = (q * 3 / 4).max(2);
            let fine_value = tensor(measure, n, beta, q)?;
            let coarse_value = tensor(measure, n, beta, coarse)?;
            Ok(DirectEstimate { value: fine_value, error: (fine_value - coarse_value).abs() })
        }
        DirectMethod::MonteCarlo { samples, seed } => {
            if n > MAX_MONTE_CARLO_N {
                return Err(Error::Unsupported(format!("Monte Carlo needs N <= {MAX_MONTE_CARLO_N} (N = {n})")));
            }
            monte_carlo(measure, n, beta, samples, seed)
        }
    }
}

fn default_order(n: usize) -> usize {
    match n {
        0..=2 => 96,
        3 => 64,
        _ => 40,
    }
}

fn abs_vandermonde(points: &[f64], beta: u32) -> f64 {
    let mut p = 1.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            p *= (points[j] - points[i]).abs();
        }
    }
    p.powi(beta as i32)
}

fn chord_vandermonde(angles: &[f64], beta: u32) -> f64 {
    let mut p = 1.0;
    for i in 0..angles.len() {
        for j in i + 1..angles.len() {
            p *= (2.0 * ((angles[j] - angles[i]) / 2.0).sin()).abs();
        }
    }
    p.powi(beta as i32)
}

fn tensor(measure: &Measure, n: usize, beta: u32, q: usize) -> Result<f64> {
    let scale = measure.scale().powi(n as i32);
    let value = match measure.kind() {
        MeasureKind::Gaussian => gaussian_gaps(n, beta, q)?,
        MeasureKind::Circular { .. } => {
            if n == 1 {
                2.0 * PI
            } else {
                let chamber = nested_chamber(n - 1, 0.0, 2.0 * PI, q, &|pts: &[f64]| {
                    let mut all = Vec::with_capacity(pts.len() + 1);
                    all.push(0.0);
                    all.extend_from_slice(pts);
                    chord_vandermonde(&all, beta)
                })?;
                2.0 * PI / n as f64 * chamber
            }
        }
        _ => {
            let (lo, hi) = measure.support();
            let unscaled = |x: f64| measure.density(x).re / measure.scale();
            return Ok(scale
                * nested_chamber(n, lo, hi, q, &|pts: &[f64]| {
                    abs_vandermonde(pts, beta) * pts.iter().map(|&x| unscaled(x)).product::<f64>()
                })?);
        }
    };
    Ok(scale * value)
}

/// `int_{lo < x_1 < ... < x_d < hi} f(x) dx` by nested Gauss–Legendre.
fn nested_chamber(d: usize, lo: f64, hi: f64, q: usize, f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> Result<f64> {
    let unit = gauss_legendre(q, 0.0, 1.0)?;
    let nodes: Vec<(f64, f64)> = unit.nodes.iter().zip(&unit.weights).map(|(&x, w)| (x, w.re)).collect();
    // parallel over the outermost coordinate, summed in node order
    let parts: Vec<f64> = nodes
        .par_iter()
        .map(|&(u, w)| {
            let x = lo + (hi - lo) * u;
            let mut pts = vec![x];
            w * (hi - lo) * nested_rest(d - 1, x, hi, &nodes, &mut pts, f)
        })
        .collect();
    Ok(parts.iter().sum())
}

fn nested_rest(
    remaining: usize,
    lo: f64,
    hi: f64,
    nodes: &[(f64, f64)],
    pts: &mut Vec<f64>,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
) -> f64 {
    if remaining == 0 {
        return f(pts);
    }
    let mut s = 0.0;
    for &(u, w) in nodes {
        let x = lo + (hi - lo) * u;
        pts.push(x);
        s += w * (hi - lo) * nested_rest(remaining - 1, x, hi, nodes, pts, f);
        pts.pop();
    }
    s
}

/// Gaussian chamber in gap coordinates with the centre of mass integrated out.
fn gaussian_gaps(n: usize, beta: u32, q: usize) -> Result<f64> {
    if n == 1 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let cutoff = 2.0 * (2.0 * beta as f64 * (nf - 1.0)).sqrt() + 10.0;
    let rule = gauss_legendre(q, 0.0, cutoff)?;
    let nodes: Vec<(f64, f64)> = rule.nodes.iter().zip(&rule.weights).map(|(&x, w)| (x, w.re)).collect();
    let prefactor = (2.0 * PI).powf(-(nf - 1.0) / 2.0) / nf.sqrt();
    let integrand = |gaps: &[f64]| {
        let mut c = Vec::with_capacity(n);
        c.push(0.0);
        for g in gaps {
            c.push(c.last().unwrap() + g);
        }
        let sum: f64 = c.iter().sum();
        let sq: f64 = c.iter().map(|x| x * x).sum();
        let quad = sq - sum * sum / nf;
        abs_vandermonde(&c, beta) * (-0.5 * quad).exp()
    };
    let d = n - 1;
    let parts: Vec<f64> = nodes
        .par_iter()
        .map(|&(x, w)| {
            let mut gaps = vec![x];
            w * box_rest(d - 1, &nodes, &mut gaps, &integrand)
        })
        .collect();
    Ok(prefactor * parts.iter().sum::<f64>())
}

fn box_rest(remaining: usize, nodes: &[(f64, f64)], pts: &mut Vec<f64>, f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> f64 {
    if remaining == 0 {
        return f(pts);
    }
    let mut s = 0.0;
    for &(x, w) in nodes {
        pts.push(x);
        s += w * box_rest(remaining - 1, nodes, pts, f);
        pts.pop();
    }
    s
}

/// Draws from the normalised continuous part; returns `(point, weight)`
/// with `E[weight] = 1`.
enum Sampler {
    Normal,
    Beta(Beta<f64>),
    Uniform { lo: f64, hi: f64 },
    Circle,
    Custom { lo: f64, hi: f64, weight: std::sync::Arc<dyn Fn(f64) -> f64 + Send + Sync>, mass: f64 },
}

impl Sampler {
    fn draw(&self, rng: &mut ChaCha8Rng) -> (f64, f64) {
        match self {
            Sampler::Normal => (rng.sample(StandardNormal), 1.0),
            Sampler::Beta(b) => (b.sample(rng), 1.0),
            Sampler::Uniform { lo, hi } => (rng.random_range(*lo..*hi), 1.0),
            Sampler::Circle => (rng.random_range(-PI..PI), 1.0),
            Sampler::Custom { lo, hi, weight, mass } => {
                let x = rng.random_range(*lo..*hi);
                (x, weight(x) * (hi - lo) / mass)
            }
        }
    }
}

fn monte_carlo(measure: &Measure, n: usize, beta: u32, samples: usize, seed: u64) -> Result<DirectEstimate> {
    if samples < 2 {
        return Err(Error::InvalidParameter("Monte Carlo needs at least 2 samples".into()));
    }
    let (sampler, mass) = match measure.kind() {
        MeasureKind::Gaussian => (Sampler::Normal, 1.0),
        MeasureKind::Jacobi { a, b } => (
            Sampler::Beta(Beta::new(*a, *b).map_err(|e| Error::InvalidParameter(e.to_string()))?),
            beta_fn(*a, *b),
        ),
        MeasureKind::Uniform { lo, hi } => (Sampler::Uniform { lo: *lo, hi: *hi }, 1.0),
        MeasureKind::Circular { .. } => (Sampler::Circle, 2.0 * PI),
        MeasureKind::Custom(c) => {
            let mass = measure.continuous_moment(0)?.re / measure.scale();
            (Sampler::Custom { lo: c.lo, hi: c.hi, weight: c.weight.clone(), mass }, mass)
        }
    };
    let circle = measure.is_circular();
    let chunks = samples.div_ceil(MC_CHUNK);
    let partials: Vec<(f64, f64, usize)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let count = MC_CHUNK.min(samples - chunk * MC_CHUNK);
            let (mut s, mut s2) = (0.0, 0.0);
            let mut pts = vec![0.0; n];
            for _ in 0..count {
                let mut w = 1.0;
                for p in pts.iter_mut() {
                    let (x, wx) = sampler.draw(&mut rng);
                    *p = x;
                    w *= wx;
                }
                let v = w * if circle { chord_vandermonde(&pts, beta) } else { abs_vandermonde(&pts, beta) };
                s += v;
                s2 += v * v;
            }
            (s, s2, count)
        })
        .collect();
    let (mut s, mut s2, mut count) = (0.0, 0.0, 0usize);
    for (a, b, c) in partials {
        s += a;
        s2 += b;
        count += c;
    }
    let mean = s / count as f64;
    let var = ((s2 / count as f64 - mean * mean) * count as f64 / (count as f64 - 1.0)).max(0.0);
    let factor = (mass * measure.scale()).powi(n as i32) / factorial(n);
    Ok(DirectEstimate { value: factor * mean, error: factor * (var / count as f64).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{dyson_value, mehta_value, selberg_value};
    use crate::polyfam::FamilyKind;

    fn spec(beta: u32, n: usize, m: Measure) -> EnsembleSpec {
        EnsembleSpec::with_family_kind(beta, n, m, FamilyKind::Monomial).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    const TQ: DirectMethod = DirectMethod::TensorQuadrature { order: None };

    #[test]
    fn gaussian_examples() {
        let g = Measure::gaussian();
        let r = direct_partition_function(&spec(1, 2, g.clone()), TQ).unwrap();
        assert!((r.value - 1.0 / PI.sqrt()).abs() < 1e-8, "{r:?}");
        let r = direct_partition_function(&spec(4, 2, g.clone()), TQ).unwrap();
        assert!((r.value - 6.0).abs() < 1e-8);
        for (beta, n) in [(1u32, 3usize), (4, 3), (9, 3), (9, 2)] {
            let r = direct_partition_function(&spec(beta, n, g.clone()), TQ).unwrap();
            let m = mehta_value(beta as f64 / 2.0, n).unwrap();
            assert!(rel(r.value, m) < 1e-7, "beta={beta} n={n}: {} vs {m}", r.value);
        }
    }

    #[test]
    fn finite_support_examples() {
        let u = Measure::uniform(0.0, 1.0).unwrap();
        let r = direct_partition_function(&spec(2, 2, u), TQ).unwrap();
        assert!((r.value - 1.0 / 12.0).abs() < 1e-12);
        let j = Measure::jacobi(1.0, 1.0).unwrap();
        let r = direct_partition_function(&spec(4, 2, j.clone()), TQ).unwrap();
        assert!(rel(r.value, selberg_value(2.0, 1.0, 1.0, 2).unwrap()) < 1e-8);
        let r = direct_partition_function(&spec(1, 3, j), TQ).unwrap();
        assert!(rel(r.value, selberg_value(0.5, 1.0, 1.0, 3).unwrap()) < 1e-7);
    }

    #[test]
    fn circle_examples() {
        for (beta, n) in [(1u32, 2usize), (4, 2), (1, 3), (4, 3), (2, 2)] {
            let c = Measure::circular(n, beta).unwrap();
            let r = direct_partition_function(&spec(beta, n, c), TQ).unwrap();
            let d = dyson_value(beta, n) * (2.0 * PI).powi(n as i32);
            assert!(rel(r.value, d) < 1e-7, "beta={beta} n={n}: {} vs {d}", r.value);
        }
    }

    #[test]
    fn monte_carlo_within_four_standard_errors() {
        let method = DirectMethod::MonteCarlo { samples: 200_000, seed: 11 };
        let r = direct_partition_function(&spec(1, 3, Measure::gaussian()), method).unwrap();
        let m = mehta_value(0.5, 3).unwrap();
        assert!((r.value - m).abs() < 4.0 * r.error, "{r:?} vs {m}");
        let again = direct_partition_function(&spec(1, 3, Measure::gaussian()), method).unwrap();
        assert_eq!(r, again);
        let r = direct_partition_function(&spec(4, 2, Measure::jacobi(2.0, 1.5).unwrap()), method).unwrap();
        let s = selberg_value(2.0, 2.0, 1.5, 2).unwrap();
        assert!((r.value - s).abs() < 4.0 * r.error);
    }

    #[test]
    fn caps() {
        let g = Measure::gaussian();
        assert!(direct_partition_function(&spec(1, 5, g.clone()), TQ).is_err());
        let mc = DirectMethod::MonteCarlo { samples: 100, seed: 0 };
        assert!(direct_partition_function(&spec(1, 7, g.clone()), mc).is_err());
        let atoms = g.with_atoms(&[(0.1, num_complex::Complex64::new(1.0, 0.0))]).unwrap();
        assert!(direct_partition_function(&spec(1, 2, atoms), TQ).is_err());
    }
}
