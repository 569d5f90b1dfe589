//! Moments `M(k)`, incomplete moments and skew moments
//! `M(j,k) = 1/2 int int x^j y^k sgn(y - x) dnu(x) dnu(y)`.
//!
//! Skew moments reduce to one-dimensional integrals
//! `M(j,k) = 1/2 int x^j [M(k) - 2 I_k(x)] dnu(x)` where `I_k` is the
//! incomplete moment. Gaussian and circular measures use exact closed
//! forms; the others use the outer Gauss rule of the measure.
//! Entries are computed for `j > k` and mirrored, which keeps the table
//! exactly antisymmetric and avoids the cancellation-prone orientation of
//! the Gaussian formula.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::quadrature::{gauss_hermite, gauss_jacobi01, gauss_legendre, trapezoid_circle, QuadratureRule};
use super::{circular_exponent, Measure, MeasureKind};
use crate::error::{Error, Result};
use crate::special::{cos_pi, factorial, gaussian_moment, normal_cdf, normal_pdf, sin_pi};

const ZERO: C64 = C64::new(0.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `Gamma(m/2)` for a positive integer `m`.
fn gamma_half(m: usize) -> f64 {
    if m % 2 == 0 {
        factorial(m / 2 - 1)
    } else {
        let mut r = PI.sqrt();
        let mut s = 0.5;
        while s < m as f64 / 2.0 - 0.25 {
            r *= s;
            s += 1.0;
        }
        r
    }
}

/// `P_k` in `int_{-inf}^x y^k phi = P_k(x) phi(x) + c_k Phi(x)`, ascending.
fn gaussian_tail_poly(k: usize) -> Vec<f64> {
    // P_0 = 0, P_1 = -1, P_k = -x^{k-1} + (k-1) P_{k-2}
    let (mut p, start) = if k % 2 == 0 { (Vec::new(), 2) } else { (vec![-1.0], 3) };
    for kk in (start..=k).step_by(2) {
        let mut next = vec![0.0; kk];
        next[kk - 1] = -1.0;
        for (i, c) in p.iter().enumerate() {
            next[i] += (kk - 1) as f64 * c;
        }
        p = next;
    }
    p
}

fn eval_real(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn gaussian_incomplete(k: usize, x: f64) -> f64 {
    if x == f64::INFINITY {
        return gaussian_moment(k);
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    eval_real(&gaussian_tail_poly(k), x) * normal_pdf(x) + gaussian_moment(k) * normal_cdf(x)
}

/// Gaussian skew moment, accurate for `j >= k`.
fn gaussian_skew(j: usize, k: usize) -> f64 {
    if (j + k) % 2 == 0 {
        return 0.0;
    }
    // int x^j P_k(x) phi(x)^2 dx
    let p = gaussian_tail_poly(k);
    let mut s = 0.0;
    for (i, &c) in p.iter().enumerate() {
        if c != 0.0 && (j + i) % 2 == 0 {
            s += c * gamma_half(j + i + 1);
        }
    }
    s /= 2.0 * PI;
    // int x^j erf(x / sqrt 2) phi(x) dx
    let mut erf_moment = 0.0;
    if j % 2 == 1 {
        for jj in (1..=j).step_by(2) {
            erf_moment = gamma_half(jj) / PI + (jj - 1) as f64 * erf_moment;
        }
    }
    -0.5 * gaussian_moment(k) * erf_moment - s
}

/// `int_{-pi}^{pi} e^{i s theta} dtheta`
fn circ_f(s: f64) -> f64 {
    if s == 0.0 {
        2.0 * PI
    } else {
        2.0 * sin_pi(s) / s
    }
}

/// `int int e^{i a theta} e^{i b psi} sgn(psi - theta)`
fn circ_h(a: f64, b: f64) -> C64 {
    if b != 0.0 {
        (re(2.0 * cos_pi(b) * circ_f(a) - 2.0 * circ_f(a + b))) / (I * b)
    } else if a == 0.0 {
        ZERO
    } else {
        -2.0 * re(2.0 * PI * cos_pi(a) - circ_f(a)) / (I * a)
    }
}

fn circ_phase(c: f64) -> C64 {
    C64::new(cos_pi(c / 2.0), -sin_pi(c / 2.0))
}

impl Measure {
    /// Gauss-type rule for the continuous part, weights including the density.
    pub fn quadrature(&self, order: usize) -> Result<QuadratureRule> {
        let mut rule = match &self.kind {
            MeasureKind::Gaussian => gauss_hermite(order)?,
            MeasureKind::Jacobi { a, b } => gauss_jacobi01(order, *a, *b)?,
            MeasureKind::Uniform { lo, hi } => {
                let mut r = gauss_legendre(order, *lo, *hi)?;
                r.weights.iter_mut().for_each(|w| *w /= hi - lo);
                r
            }
            MeasureKind::Circular { .. } => {
                let mut r = trapezoid_circle(order)?;
                for (w, &t) in r.weights.iter_mut().zip(&r.nodes) {
                    *w *= self.density(t) / self.scale;
                }
                r
            }
            MeasureKind::Custom(c) => {
                let mut r = gauss_legendre(order, c.lo, c.hi)?;
                for (w, &x) in r.weights.iter_mut().zip(&r.nodes) {
                    *w *= (c.weight)(x);
                }
                r
            }
        };
        rule.weights.iter_mut().for_each(|w| *w *= self.scale);
        Ok(rule)
    }

    /// `int x^k dnu` over the continuous part.
    pub fn continuous_moment(&self, k: usize) -> Result<C64> {
        let v = match &self.kind {
            MeasureKind::Gaussian => re(gaussian_moment(k)),
            MeasureKind::Jacobi { a, b } => {
                let mut m = crate::special::beta_fn(*a, *b);
                for i in 1..=k {
                    let i = i as f64;
                    m *= (a + i - 1.0) / (a + b + i - 1.0);
                }
                re(m)
            }
            MeasureKind::Uniform { lo, hi } => {
                let kp = (k + 1) as i32;
                re((hi.powi(kp) - lo.powi(kp)) / (kp as f64 * (hi - lo)))
            }
            MeasureKind::Circular { n, beta } => {
                let c = circular_exponent(*n, *beta);
                circ_phase(c) * circ_f(k as f64 - c)
            }
            MeasureKind::Custom(_) => {
                return Ok(self.quadrature(self.quad_order)?.integrate(|x| re(x.powi(k as i32))));
            }
        };
        Ok(v * self.scale)
    }

    /// `M(k)`, atoms included.
    pub fn moment(&self, k: usize) -> Result<C64> {
        let mut m = self.continuous_moment(k)?;
        for atom in &self.atoms {
            m += self.atom_mass(atom) * self.variable(atom.x).powu(k as u32);
        }
        Ok(m)
    }

    /// `int_{-inf}^x y^k dnu(y)` over the continuous part (`y = e^{i theta}`
    /// and the lower limit `-pi` on the circle).
    pub fn incomplete_moment(&self, k: usize, x: f64) -> Result<C64> {
        Ok(self.incomplete_all(k, x, self.inner_rule()?.as_ref())?[k])
    }

    /// Reference rule reused by every incomplete-moment evaluation: the
    /// `u^{a-1} du` rule on `[0, 1]` for Jacobi, Gauss–Legendre on `[0, 1]`
    /// for custom weights.
    fn inner_rule(&self) -> Result<Option<QuadratureRule>> {
        match &self.kind {
            MeasureKind::Jacobi { a, .. } => Ok(Some(gauss_jacobi01(self.quad_order, *a, 1.0)?)),
            MeasureKind::Custom(_) => Ok(Some(gauss_legendre(self.quad_order, 0.0, 1.0)?)),
            _ => Ok(None),
        }
    }

    /// Incomplete moments of orders `0..=max_order` at one point.
    fn incomplete_all(&self, max_order: usize, x: f64, inner: Option<&QuadratureRule>) -> Result<Vec<C64>> {
        let missing = || Error::Unsupported("missing inner quadrature rule".into());
        let (lo, hi) = self.support();
        let out: Vec<C64> = match &self.kind {
            MeasureKind::Gaussian => (0..=max_order).map(|k| re(gaussian_incomplete(k, x))).collect(),
            MeasureKind::Circular { n, beta } => {
                let c = circular_exponent(*n, *beta);
                let x = x.clamp(-PI, PI);
                (0..=max_order)
                    .map(|k| {
                        let s = k as f64 - c;
                        let v = if s == 0.0 {
                            re(x + PI)
                        } else {
                            let upper = C64::new((s * x).cos(), (s * x).sin());
                            let lower = C64::new(cos_pi(s), -sin_pi(s));
                            (upper - lower) / (I * s)
                        };
                        circ_phase(c) * v
                    })
                    .collect()
            }
            _ if x <= lo => vec![ZERO; max_order + 1],
            _ if x >= hi => {
                return (0..=max_order).map(|k| self.continuous_moment(k)).collect();
            }
            MeasureKind::Uniform { lo, hi } => (0..=max_order)
                .map(|k| {
                    let kp = (k + 1) as i32;
                    re((x.powi(kp) - lo.powi(kp)) / (kp as f64 * (hi - lo)))
                })
                .collect(),
            MeasureKind::Jacobi { a, b } => {
                // y = x u: x^{a+k} int_0^1 u^{a-1} u^k (1 - x u)^{b-1} du
                let inner = inner.ok_or_else(missing)?;
                let base: Vec<f64> =
                    inner.nodes.iter().zip(&inner.weights).map(|(&u, w)| w.re * (1.0 - x * u).powf(b - 1.0)).collect();
                let mut powers: Vec<f64> = vec![1.0; inner.len()];
                let xa = x.powf(*a);
                let mut xk = 1.0;
                let mut out = Vec::with_capacity(max_order + 1);
                for _ in 0..=max_order {
                    let s: f64 = base.iter().zip(&powers).map(|(b, p)| b * p).sum();
                    out.push(re(xa * xk * s));
                    for (p, &u) in powers.iter_mut().zip(&inner.nodes) {
                        *p *= u;
                    }
                    xk *= x;
                }
                out
            }
            MeasureKind::Custom(c) => {
                let inner = inner.ok_or_else(missing)?;
                let len = x - c.lo;
                let ys: Vec<f64> = inner.nodes.iter().map(|&u| c.lo + len * u).collect();
                let vals: Vec<f64> =
                    ys.iter().zip(&inner.weights).map(|(&y, w)| w.re * len * (c.weight)(y)).collect();
                (0..=max_order)
                    .map(|k| re(ys.iter().zip(&vals).map(|(&y, v)| v * y.powi(k as i32)).sum()))
                    .collect()
            }
        };
        Ok(out.into_iter().map(|v| v * self.scale).collect())
    }

    /// `M(j,k)`, atoms included.
    pub fn skew_moment(&self, j: usize, k: usize) -> Result<C64> {
        Ok(MomentTable::build(self, j.max(k))?.skew(j, k))
    }

    /// Continuous-part skew moments for `j > k`, stored at `[j][k]`.
    fn continuous_skew_lower(&self, max_order: usize) -> Result<Vec<Vec<C64>>> {
        let n = max_order + 1;
        let mut table = vec![vec![ZERO; n]; n];
        match &self.kind {
            MeasureKind::Gaussian => {
                let s2 = self.scale * self.scale;
                for (j, row) in table.iter_mut().enumerate() {
                    for (k, v) in row.iter_mut().enumerate().take(j) {
                        *v = re(gaussian_skew(j, k) * s2);
                    }
                }
            }
            MeasureKind::Circular { n: big_n, beta } => {
                let c = circular_exponent(*big_n, *beta);
                let pre = 0.5 * circ_phase(c) * circ_phase(c) * self.scale * self.scale;
                for (j, row) in table.iter_mut().enumerate() {
                    for (k, v) in row.iter_mut().enumerate().take(j) {
                        *v = pre * circ_h(j as f64 - c, k as f64 - c);
                    }
                }
            }
            _ => {
                let rule = self.quadrature(self.quad_order)?;
                let full: Vec<C64> = (0..n).map(|k| self.continuous_moment(k)).collect::<Result<_>>()?;
                let inner = self.inner_rule()?;
                // g[i][k] = M(k) - 2 I_k(x_i)
                let g: Vec<Vec<C64>> = rule
                    .nodes
                    .iter()
                    .map(|&x| {
                        let inc = self.incomplete_all(max_order, x, inner.as_ref())?;
                        Ok(full.iter().zip(&inc).map(|(m, i)| m - 2.0 * i).collect())
                    })
                    .collect::<Result<_>>()?;
                for (i, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
                    let mut xj = w * 0.5;
                    for row in table.iter_mut() {
                        for (k, v) in row.iter_mut().enumerate() {
                            *v += xj * g[i][k];
                        }
                        xj *= x;
                    }
                }
                for (j, row) in table.iter_mut().enumerate() {
                    for v in row.iter_mut().skip(j) {
                        *v = ZERO;
                    }
                }
            }
        }
        Ok(table)
    }
}

/// Moments and skew moments up to a fixed order, computed once and then
/// shared read-only.
#[derive(Clone, Debug)]
pub struct MomentTable {
    max_order: usize,
    moments: Vec<C64>,
    skew: Vec<C64>,
}

impl MomentTable {
    pub fn build(measure: &Measure, max_order: usize) -> Result<Self> {
        let n = max_order + 1;
        let continuous: Vec<C64> = (0..n).map(|k| measure.continuous_moment(k)).collect::<Result<_>>()?;
        let mut lower = measure.continuous_skew_lower(max_order)?;

        let points: Vec<(C64, C64, f64)> =
            measure.atoms.iter().map(|a| (measure.atom_mass(a), measure.variable(a.x), a.x)).collect();
        let powers: Vec<Vec<C64>> = points
            .iter()
            .map(|&(_, z, _)| (0..n).scan(C64::new(1.0, 0.0), |p, _| {
                let cur = *p;
                *p *= z;
                Some(cur)
            }).collect())
            .collect();
        let mut moments = continuous.clone();
        for ((mass, _, _), pw) in points.iter().zip(&powers) {
            for (m, p) in moments.iter_mut().zip(pw) {
                *m += mass * p;
            }
        }
        if !points.is_empty() {
            let inner = measure.inner_rule()?;
            // g[n][k] = M_c(k) - 2 I_k(x_n)
            let g: Vec<Vec<C64>> = points
                .iter()
                .map(|&(_, _, x)| {
                    let inc = measure.incomplete_all(max_order, x, inner.as_ref())?;
                    Ok(continuous.iter().zip(&inc).map(|(m, i)| m - 2.0 * i).collect::<Vec<C64>>())
                })
                .collect::<Result<_>>()?;
            for (j, row) in lower.iter_mut().enumerate() {
                for (k, v) in row.iter_mut().enumerate().take(j) {
                    for (a, &(mass, _, _)) in points.iter().enumerate() {
                        *v += 0.5 * mass * (powers[a][j] * g[a][k] - powers[a][k] * g[a][j]);
                    }
                    for (a, &(ma, _, xa)) in points.iter().enumerate() {
                        for (b, &(mb, _, xb)) in points.iter().enumerate() {
                            let s = if xb > xa {
                                1.0
                            } else if xb < xa {
                                -1.0
                            } else {
                                0.0
                            };
                            if s != 0.0 {
                                *v += 0.5 * s * ma * mb * powers[a][j] * powers[b][k];
                            }
                        }
                    }
                }
            }
        }
        let mut skew = vec![ZERO; n * n];
        for j in 0..n {
            for k in 0..j {
                skew[j * n + k] = lower[j][k];
                skew[k * n + j] = -lower[j][k];
            }
        }
        if moments.iter().chain(&skew).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Unsupported(format!("non-finite moments for {} up to order {max_order}", measure.kind.name())));
        }
        Ok(Self { max_order, moments, skew })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn moment(&self, k: usize) -> C64 {
        self.moments[k]
    }

    pub fn skew(&self, j: usize, k: usize) -> C64 {
        self.skew[j * (self.max_order + 1) + k]
    }
}

/// `int x^j erf(x/sqrt 2) phi(x) dx` by direct quadrature; test helper only.
#[cfg(test)]
fn erf_moment_quadrature(j: usize) -> f64 {
    let rule = gauss_legendre(400, -40.0, 40.0).unwrap();
    rule.integrate(|x| re(x.powi(j as i32) * crate::special::erf(x / std::f64::consts::SQRT_2) * normal_pdf(x))).re
}
