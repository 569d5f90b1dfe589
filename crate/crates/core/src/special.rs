//! Gamma-type special functions and small combinatorial helpers.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("log_gamma needs x > 0 (got {x})")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    let t = z + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// `Γ(x)` for `x > 0`; exact for small integers.
pub fn gamma(x: f64) -> f64 {
    if x.fract() == 0.0 && (1.0..=21.0).contains(&x) {
        return factorial(x as usize - 1);
    }
    ln_gamma_pos(x).exp()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// `(k-1)!!` for even `k`, which is `E x^k` for a standard normal; 0 for odd `k`.
pub fn gaussian_moment(k: usize) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let mut r = 1.0;
    let mut i = k as i64 - 1;
    while i > 1 {
        r *= i as f64;
        i -= 2;
    }
    r
}

/// `B(a, b)`
pub fn beta_fn(a: f64, b: f64) -> f64 {
    (ln_gamma_pos(a) + ln_gamma_pos(b) - ln_gamma_pos(a + b)).exp()
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `sin(pi s)`, exact at integers and half-integers.
pub fn sin_pi(s: f64) -> f64 {
    let twice = 2.0 * s;
    if twice.fract() == 0.0 {
        return match (twice as i64).rem_euclid(4) {
            0 | 2 => 0.0,
            1 => 1.0,
            _ => -1.0,
        };
    }
    (std::f64::consts::PI * s).sin()
}

/// `cos(pi s)`, exact at integers and half-integers.
pub fn cos_pi(s: f64) -> f64 {
    let twice = 2.0 * s;
    if twice.fract() == 0.0 {
        return match (twice as i64).rem_euclid(4) {
            0 => 1.0,
            2 => -1.0,
            _ => 0.0,
        };
    }
    (std::f64::consts::PI * s).cos()
}
