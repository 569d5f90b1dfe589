//! Correlation functions as multilinear coefficients of the partition
//! function in the weights of added point masses.

use num_complex::Complex64 as C64;

use super::{partition_function, EnsembleSpec};
use crate::error::{Error, Result};

/// Largest number of points supported.
pub const MAX_CORRELATION_POINTS: usize = 3;

/// `R_n(x_1, ..., x_n)`: the coefficient of `c_1 ... c_n` in
/// `Z_N(mu + sum_i c_i w(x_i) delta_{x_i}) / Z_N(mu)`.
///
/// `Z_N` is multilinear in the `c_i` (two eigenvalues at one atom give a
/// vanishing Vandermonde factor), so the coefficient is the inclusion–
/// exclusion sum over the `2^n` subsets with `c = 1` on the subset.
pub fn correlation(spec: &EnsembleSpec, points: &[f64]) -> Result<f64> {
    let n = points.len();
    if n == 0 {
        return Ok(1.0);
    }
    if n > MAX_CORRELATION_POINTS {
        return Err(Error::Unsupported(format!("correlation functions of order {n} (max {MAX_CORRELATION_POINTS})")));
    }
    if n > spec.n() {
        return Err(Error::InvalidParameter(format!("R_{n} needs n <= N = {}", spec.n())));
    }
    for (i, &a) in points.iter().enumerate() {
        if points[..i].contains(&a) {
            return Err(Error::CoincidentPoints(a));
        }
    }
    let base = spec.measure();
    let z0 = partition_function(spec)?.value;
    let mut total = C64::new(0.0, 0.0);
    for mask in 0u32..(1 << n) {
        let atoms: Vec<(f64, C64)> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| (points[i], C64::new(1.0, 0.0)))
            .collect();
        let z = if atoms.is_empty() {
            z0
        } else {
            partition_function(&spec.with_measure(base.with_atoms(&atoms)?)?)?.value
        };
        let sign = if (n - atoms.len()) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * z;
    }
    Ok((total / z0).re)
}
