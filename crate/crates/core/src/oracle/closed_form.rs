//! Mehta, Selberg and Dyson products.

use crate::error::{Error, Result};
use crate::special::{factorial, ln_gamma_pos};

/// `F_N(gamma) / N!` with `F_N(gamma) = prod_{n=1}^N Gamma(1 + n gamma) / Gamma(1 + gamma)`:
/// the Gaussian partition function at `beta = 2 gamma`.
pub fn mehta_value(gamma: f64, n: usize) -> Result<f64> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!("mehta needs gamma >= 0 (got {gamma})")));
    }
    let log: f64 = (1..=n).map(|k| ln_gamma_pos(1.0 + k as f64 * gamma) - ln_gamma_pos(1.0 + gamma)).sum();
    Ok(log.exp() / factorial(n))
}

/// `S_N(gamma, a, b) / N!`: the partition function for the weight
/// `x^{a-1} (1-x)^{b-1}` on `[0, 1]` at `beta = 2 gamma`.
pub fn selberg_value(gamma: f64, a: f64, b: f64, n: usize) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && gamma >= 0.0) || !(a.is_finite() && b.is_finite() && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "selberg needs a, b > 0 and gamma >= 0 (got a={a}, b={b}, gamma={gamma})"
        )));
    }
    let nf = n as f64;
    // the integral diverges unless a + b + (N + j - 1) gamma stays positive;
    // with a, b > 0 and gamma >= 0 it always does
    let mut log = 0.0;
    for j in 0..n {
        let jf = j as f64;
        log += ln_gamma_pos(a + jf * gamma) + ln_gamma_pos(b + jf * gamma) + ln_gamma_pos(1.0 + (jf + 1.0) * gamma)
            - ln_gamma_pos(a + b + (nf + jf - 1.0) * gamma)
            - ln_gamma_pos(1.0 + gamma);
    }
    Ok(log.exp() / factorial(n))
}

/// Partition function for the uniform probability measure on `[lo, hi]`.
pub fn uniform_selberg_value(beta: u32, lo: f64, hi: f64, n: usize) -> Result<f64> {
    if !(hi > lo) {
        return Err(Error::InvalidParameter(format!("need lo < hi (got [{lo}, {hi}])")));
    }
    let pairs = (n * n.saturating_sub(1) / 2) as f64;
    Ok(selberg_value(beta as f64 / 2.0, 1.0, 1.0, n)? * (hi - lo).powf(beta as f64 * pairs))
}

/// `Gamma(1 + beta N/2) / Gamma(1 + beta/2)^N / N!`: the circular partition
/// function for `dtheta / 2 pi`. Multiply by `(2 pi)^N` for `dtheta`.
pub fn dyson_value(beta: u32, n: usize) -> f64 {
    let b = beta as f64;
    let nf = n as f64;
    (ln_gamma_pos(1.0 + b * nf / 2.0) - nf * ln_gamma_pos(1.0 + b / 2.0)).exp() / factorial(n)
}
