//! Gauss rules from three-term recurrences (Golub–Welsch followed by Newton
//! polishing) and the periodic trapezoid rule.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::special::beta_fn;

/// Nodes and weights with `sum_i w_i f(x_i) ~ int f dnu`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<C64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> C64) -> C64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn total_weight(&self) -> C64 {
        self.weights.iter().sum()
    }

    fn from_real(nodes: Vec<f64>, weights: Vec<f64>) -> Self {
        Self { nodes, weights: weights.into_iter().map(|w| C64::new(w, 0.0)).collect() }
    }
}

/// Monic three-term recurrence `p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}`
/// with `mu0 = int dnu`.
struct Recurrence {
    alpha: Vec<f64>,
    /// `beta[k]` for `k = 0..=n`; `beta[0]` is unused.
    beta: Vec<f64>,
    mu0: f64,
}

fn gauss_from_recurrence(rec: &Recurrence, n: usize) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            rec.alpha[i]
        } else if i + 1 == j || j + 1 == i {
            rec.beta[i.max(j)].sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let (p, dp, _) = orthonormal_eval(rec, n, *x);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, _, sum_sq) = orthonormal_eval(rec, n, *x);
        weights.push(1.0 / sum_sq);
    }
    (nodes, weights)
}

/// `(p_n(x), p_n'(x), sum_{k<n} p_k(x)^2)` for the orthonormal polynomials.
fn orthonormal_eval(rec: &Recurrence, n: usize, x: f64) -> (f64, f64, f64) {
    let mut p_prev = 0.0;
    let mut d_prev = 0.0;
    let mut p = 1.0 / rec.mu0.sqrt();
    let mut d = 0.0;
    let mut sum_sq = 0.0;
    for k in 0..n {
        sum_sq += p * p;
        let b_next = rec.beta[k + 1].sqrt();
        let b_here = if k == 0 { 0.0 } else { rec.beta[k].sqrt() };
        let p_next = ((x - rec.alpha[k]) * p - b_here * p_prev) / b_next;
        let d_next = (p + (x - rec.alpha[k]) * d - b_here * d_prev) / b_next;
        p_prev = p;
        d_prev = d;
        p = p_next;
        d = d_next;
    }
    (p, d, sum_sq)
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidParameter("quadrature order must be at least 1".into()));
    }
    Ok(())
}

/// Gauss–Hermite rule for the standard normal density.
pub fn gauss_hermite(order: usize) -> Result<QuadratureRule> {
    check_order(order)?;
    let rec = Recurrence {
        alpha: vec![0.0; order],
        beta: (0..=order).map(|k| k as f64).collect(),
        mu0: 1.0,
    };
    let (mut nodes, mut weights) = gauss_from_recurrence(&rec, order);
    symmetrize(&mut nodes, &mut weights);
    Ok(QuadratureRule::from_real(nodes, weights))
}

/// Gauss–Legendre rule for `dx` on `[lo, hi]`.
pub fn gauss_legendre(order: usize, lo: f64, hi: f64) -> Result<QuadratureRule> {
    check_order(order)?;
    let (nodes, weights) = legendre_reference(order);
    let half = 0.5 * (hi - lo);
    Ok(QuadratureRule::from_real(
        nodes.iter().map(|&x| lo + half * (x + 1.0)).collect(),
        weights.iter().map(|&w| w * half).collect(),
    ))
}

fn legendre_reference(order: usize) -> (Vec<f64>, Vec<f64>) {
    let rec = Recurrence {
        alpha: vec![0.0; order],
        beta: (0..=order)
            .map(|k| {
                let k = k as f64;
                k * k / (4.0 * k * k - 1.0)
            })
            .collect(),
        mu0: 2.0,
    };
    let (mut nodes, mut weights) = gauss_from_recurrence(&rec, order);
    symmetrize(&mut nodes, &mut weights);
    (nodes, weights)
}

/// Gauss–Jacobi rule for `x^{a-1} (1-x)^{b-1} dx` on `[0, 1]`.
pub fn gauss_jacobi01(order: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    check_order(order)?;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!("jacobi exponents must be positive (a={a}, b={b})")));
    }
    // reference weight (1-x)^al (1+x)^be on [-1, 1]
    let al = b - 1.0;
    let be = a - 1.0;
    let s = al + be;
    let alpha_ref = |k: usize| -> f64 {
        if k == 0 {
            (be - al) / (s + 2.0)
        } else {
            let k = k as f64;
            (be * be - al * al) / ((2.0 * k + s) * (2.0 * k + s + 2.0))
        }
    };
    let beta_ref = |k: usize| -> f64 {
        if k == 1 {
            4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s).powi(2) * (3.0 + s))
        } else {
            let k = k as f64;
            4.0 * k * (k + al) * (k + be) * (k + s)
                / ((2.0 * k + s).powi(2) * (2.0 * k + s + 1.0) * (2.0 * k + s - 1.0))
        }
    };
    // shift to [0, 1] via x = 2 lambda - 1
    let rec = Recurrence {
        alpha: (0..order).map(|k| 0.5 * (1.0 + alpha_ref(k))).collect(),
        beta: (0..=order).map(|k| if k == 0 { 0.0 } else { 0.25 * beta_ref(k) }).collect(),
        mu0: beta_fn(a, b),
    };
    let (nodes, weights) = gauss_from_recurrence(&rec, order);
    Ok(QuadratureRule::from_real(nodes, weights))
}

/// Periodic trapezoid rule for `dtheta` on `[-pi, pi)`.
pub fn trapezoid_circle(order: usize) -> Result<QuadratureRule> {
    check_order(order)?;
    let h = 2.0 * std::f64::consts::PI / order as f64;
    Ok(QuadratureRule::from_real(
        (0..order).map(|i| -std::f64::consts::PI + h * i as f64).collect(),
        vec![h; order],
    ))
}

fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[n - 1 - i]);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}
