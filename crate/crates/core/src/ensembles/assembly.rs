//! Form assembly and the partition function.

use std::time::Instant;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{Case, EnsembleSpec, Geometry, ZnResult, CIRCLE_IMAG_TOLERANCE, LINE_IMAG_TOLERANCE};
use crate::error::{Error, Result};
use crate::exterior::{hyperpfaffian, matrix_from_form, sign_of_concatenation, wedge, ExtForm, MultiIndex, SquareMatrix};
use crate::measures::MomentTable;
use crate::polyfam::{derivative_table, wronskian, wronskian_polynomial};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Two-point kernel of the double integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    /// `sgn(y - x)`
    Sgn,
    /// `(y^M - x^M)^2 / (y - x)`
    Case4 { m: usize },
}

/// Wronskian coefficient vectors for every increasing `t` of degree `L`.
struct Wronskians {
    entries: Vec<(MultiIndex, Vec<C64>)>,
    max_degree: usize,
}

fn wronskians(spec: &EnsembleSpec) -> Result<Wronskians> {
    let (l, d) = (spec.l, spec.n * spec.l);
    let table = derivative_table(&spec.family, l);
    let indices = MultiIndex::all_of_degree(d, l)?;
    let entries: Vec<(MultiIndex, Vec<C64>)> = indices
        .par_iter()
        .map(|t| Ok((*t, wronskian_polynomial(&table, t)?.coeffs().to_vec())))
        .collect::<Result<_>>()?;
    let max_degree = entries.iter().map(|(_, c)| c.len().saturating_sub(1)).max().unwrap_or(0);
    Ok(Wronskians { entries, max_degree })
}

/// `omega(x) = sum_t Wr(p_t; x) eps_t`, with `x` the point itself on the
/// line and `e^{i x}` on the circle.
pub fn build_omega(spec: &EnsembleSpec, x: C64) -> Result<ExtForm> {
    let d = spec.n * spec.l;
    let point = match spec.geometry {
        Geometry::Line => x,
        Geometry::Circle => (C64::new(0.0, 1.0) * x).exp(),
    };
    let terms = MultiIndex::all_of_degree(d, spec.l)?
        .into_iter()
        .map(|t| Ok((t, wronskian(&spec.family, &t, point)?)))
        .collect::<Result<Vec<_>>>()?;
    ExtForm::from_terms(d, spec.l, terms)
}

fn contract(coeffs: &[C64], moments: &MomentTable) -> C64 {
    coeffs.iter().enumerate().map(|(a, &c)| c * moments.moment(a)).sum()
}

fn integrated_from(w: &Wronskians, moments: &MomentTable, d: usize, l: usize) -> Result<ExtForm> {
    let terms: Vec<(MultiIndex, C64)> = w.entries.iter().map(|(t, c)| (*t, contract(c, moments))).collect();
    ExtForm::from_terms(d, l, terms)
}

/// `int omega dnu`, integrated coefficient-wise against the moments.
pub fn integrated_omega(spec: &EnsembleSpec) -> Result<ExtForm> {
    let w = wronskians(spec)?;
    let moments = MomentTable::build(&spec.measure, w.max_degree)?;
    integrated_from(&w, &moments, spec.n * spec.l, spec.l)
}

/// Antisymmetric pair matrix `P` with the form coefficient of the ordered
/// pair `(t, u)` equal to `f_t^T P g_u`.
fn pair_matrix(kernel: Kernel, moments: &MomentTable, size: usize) -> Vec<Vec<C64>> {
    let mut p = vec![vec![ZERO; size]; size];
    for a in 0..size {
        for b in 0..a {
            let v = match kernel {
                Kernel::Sgn => moments.skew(a, b),
                Kernel::Case4 { m } => {
                    // (y^M - x^M) sum_j x^j y^{M-1-j}
                    let mut k = ZERO;
                    for j in 0..m {
                        k += moments.moment(a + j) * moments.moment(b + 2 * m - 1 - j)
                            - moments.moment(a + m + j) * moments.moment(b + m - 1 - j);
                    }
                    0.5 * k
                }
            };
            p[a][b] = v;
            p[b][a] = -v;
        }
    }
    p
}

fn check_kernel(spec: &EnsembleSpec, kernel: Kernel) -> Result<()> {
    match (kernel, spec.case) {
        (Kernel::Sgn, Case::Case2 | Case::Case3) => Ok(()),
        (Kernel::Case4 { m }, Case::Case4) if 2 * m == spec.n => Ok(()),
        _ => Err(Error::CaseMismatch(format!("kernel {kernel:?} does not apply to {}", spec.case))),
    }
}

fn double_from(w: &Wronskians, moments: &MomentTable, kernel: Kernel, d: usize, l: usize) -> Result<ExtForm> {
    let size = w.max_degree + 1;
    let p = pair_matrix(kernel, moments, size);
    // v_u = P g_u
    let projected: Vec<Vec<C64>> = w
        .entries
        .par_iter()
        .map(|(_, g)| (0..size).map(|a| g.iter().enumerate().map(|(b, &gb)| p[a][b] * gb).sum()).collect())
        .collect();
    // (t, u) and (u, t) contribute equally when L is odd and cancel when L is even
    let factor = if l % 2 == 1 { 2.0 } else { 0.0 };
    let rows: Vec<Vec<(MultiIndex, C64)>> = (0..w.entries.len())
        .into_par_iter()
        .map(|i| {
            let (t, f) = &w.entries[i];
            let mut out = Vec::new();
            for (j, (u, _)) in w.entries.iter().enumerate().skip(i + 1) {
                if t.overlaps(u) {
                    continue;
                }
                let val: C64 = f.iter().zip(&projected[j]).map(|(a, b)| a * b).sum();
                let sign = sign_of_concatenation(&[*t, *u]).expect("disjoint indices of equal dimension");
                let union = MultiIndex::from_bits(t.bits() | u.bits(), d).expect("valid union");
                out.push((union, val * (factor * sign as f64)));
            }
            out
        })
        .collect();
    ExtForm::from_terms(d, 2 * l, rows.into_iter().flatten())
}

/// `1/2 int int omega(x) ^ omega(y) K(x, y) dnu(x) dnu(y)` in dimension `NL`.
pub fn double_integral_form(spec: &EnsembleSpec, kernel: Kernel) -> Result<ExtForm> {
    check_kernel(spec, kernel)?;
    let w = wronskians(spec)?;
    let order = moment_order(&w, kernel);
    let moments = MomentTable::build(&spec.measure, order)?;
    double_from(&w, &moments, kernel, spec.n * spec.l, spec.l)
}

fn moment_order(w: &Wronskians, kernel: Kernel) -> usize {
    match kernel {
        Kernel::Sgn => w.max_degree,
        Kernel::Case4 { m } => w.max_degree + 2 * m - 1,
    }
}

fn epsilon_prime(spec: &EnsembleSpec) -> Result<ExtForm> {
    let dim = (spec.n + 1) * spec.l;
    let block = MultiIndex::block(spec.n * spec.l + 1, spec.l, dim)?;
    Ok(ExtForm::basis(block, C64::new(1.0, 0.0)))
}

/// `int omega ^ eps' dnu` in dimension `(N+1)L`.
pub fn border_term(spec: &EnsembleSpec) -> Result<ExtForm> {
    if spec.case != Case::Case3 {
        return Err(Error::CaseMismatch(format!("bordering applies to case3, not {}", spec.case)));
    }
    let omega = integrated_omega(spec)?.embed((spec.n + 1) * spec.l)?;
    wedge(&omega, &epsilon_prime(spec)?)
}

/// The form whose hyperpfaffian is the partition function.
fn partition_form(spec: &EnsembleSpec) -> Result<ExtForm> {
    let w = wronskians(spec)?;
    let (d, l) = (spec.n * spec.l, spec.l);
    match spec.case {
        Case::Case1 => {
            let moments = MomentTable::build(&spec.measure, w.max_degree)?;
            integrated_from(&w, &moments, d, l)
        }
        Case::Case2 => {
            let moments = MomentTable::build(&spec.measure, w.max_degree)?;
            double_from(&w, &moments, Kernel::Sgn, d, l)
        }
        Case::Case3 => {
            let moments = MomentTable::build(&spec.measure, w.max_degree)?;
            let dim = (spec.n + 1) * l;
            let border = wedge(&integrated_from(&w, &moments, d, l)?.embed(dim)?, &epsilon_prime(spec)?)?;
            if spec.n == 1 {
                // no room for a 2L-form in dimension L
                return Ok(border);
            }
            double_from(&w, &moments, Kernel::Sgn, d, l)?.embed(dim)?.add(&border)
        }
        Case::Case4 => {
            let kernel = Kernel::Case4 { m: spec.n / 2 };
            let moments = MomentTable::build(&spec.measure, moment_order(&w, kernel))?;
            double_from(&w, &moments, kernel, d, l)
        }
    }
}

/// `Z_N` (or `C_N` on the circle) as a hyperpfaffian.
pub fn partition_function(spec: &EnsembleSpec) -> Result<ZnResult> {
    let start = Instant::now();
    let form = partition_form(spec)?;
    let value = hyperpfaffian(&form)?;
    let seconds = start.elapsed().as_secs_f64();
    let real_atoms = spec.measure.atoms().iter().all(|a| a.c.im == 0.0);
    let tol = match spec.geometry {
        Geometry::Line => LINE_IMAG_TOLERANCE,
        Geometry::Circle => CIRCLE_IMAG_TOLERANCE,
    };
    if real_atoms && spec.measure.scale().is_finite() && value.im.abs() > tol * (1.0 + value.re.abs()) {
        return Err(Error::ImaginaryResidue { real: value.re, imag: value.im });
    }
    Ok(ZnResult {
        beta: spec.beta,
        l: spec.l,
        n: spec.n,
        geometry: spec.geometry,
        case: spec.case,
        value,
        form_dimension: form.dim(),
        form_degree: form.degree(),
        oracles: Default::default(),
        seconds,
    })
}

/// The classical antisymmetric matrix whose Pfaffian is the partition
/// function for `L <= 2`: `W` (`beta = 4`), `U` or the bordered `U'`
/// (`beta = 1`), `Y` (`beta = 2`). Entries are the collected coefficients
/// of the corresponding 2-form, so `Pf = Z_N` without extra factors.
pub fn classical_matrices(spec: &EnsembleSpec) -> Result<SquareMatrix> {
    if spec.l > 2 {
        return Err(Error::InvalidParameter(format!("classical matrices need L <= 2 (L = {})", spec.l)));
    }
    matrix_from_form(&partition_form(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Measure;
    use crate::polyfam::FamilyKind;
    use std::f64::consts::PI;

    fn spec(beta: u32, n: usize) -> EnsembleSpec {
        EnsembleSpec::with_family_kind(beta, n, Measure::gaussian(), FamilyKind::Monomial).unwrap()
    }

    fn close(a: C64, b: f64, tol: f64) -> bool {
        (a - C64::new(b, 0.0)).norm() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn single_eigenvalue_odd_l() {
        for beta in [1, 9] {
            let z = partition_function(&spec(beta, 1)).unwrap().value;
            assert!(close(z, 1.0, 1e-14), "beta={beta}: {z}");
        }
    }

    #[test]
    fn omega_examples() {
        let s = spec(1, 3);
        let om = build_omega(&s, C64::new(0.5, 0.0)).unwrap();
        for n in 1..=3 {
            let idx = MultiIndex::from_elements(&[n], 3).unwrap();
            assert_eq!(om.coeff(&idx), C64::new(0.5f64.powi(n as i32 - 1), 0.0));
        }
        let s = spec(4, 1);
        let om = build_omega(&s, C64::new(1.7, 0.0)).unwrap();
        assert_eq!(om.len(), 1);
        assert!(close(om.coeff(&MultiIndex::volume(2).unwrap()), 1.0, 1e-15));
        let s = spec(9, 2);
        assert_eq!(build_omega(&s, C64::new(0.3, 0.0)).unwrap().len(), 20);
    }

    #[test]
    fn integrated_examples() {
        let s = spec(4, 1);
        let f = integrated_omega(&s).unwrap();
        assert!(close(f.coeff(&MultiIndex::volume(2).unwrap()), 1.0, 1e-15));
        let s = spec(1, 3);
        let f = integrated_omega(&s).unwrap();
        for (n, m) in [(1, 1.0), (2, 0.0), (3, 1.0)] {
            assert!(close(f.coeff(&MultiIndex::from_elements(&[n], 3).unwrap()), m, 1e-15));
        }
    }

    #[test]
    fn double_integral_examples() {
        let s = spec(1, 2);
        let f = double_integral_form(&s, Kernel::Sgn).unwrap();
        assert!(close(f.coeff(&MultiIndex::volume(2).unwrap()), 1.0 / PI.sqrt(), 1e-14));
        let s = spec(2, 2);
        let f = double_integral_form(&s, Kernel::Case4 { m: 1 }).unwrap();
        assert!(close(f.coeff(&MultiIndex::volume(2).unwrap()), 1.0, 1e-14));
        assert!(matches!(double_integral_form(&s, Kernel::Sgn), Err(Error::CaseMismatch(_))));
        assert!(matches!(double_integral_form(&spec(4, 2), Kernel::Sgn), Err(Error::CaseMismatch(_))));
    }

    #[test]
    fn border_examples() {
        let s = spec(1, 1);
        let b = border_term(&s).unwrap();
        assert!(close(b.coeff(&MultiIndex::volume(2).unwrap()), 1.0, 1e-15));
        let s = spec(1, 3);
        let b = border_term(&s).unwrap();
        for (n, m) in [(1, 1.0), (2, 0.0), (3, 1.0)] {
            assert!(close(b.coeff(&MultiIndex::from_elements(&[n, 4], 4).unwrap()), m, 1e-15));
        }
        let eps = epsilon_prime(&s).unwrap();
        assert!(wedge(&eps, &eps).is_err() || wedge(&eps, &eps).unwrap().is_zero());
        assert!(border_term(&spec(1, 2)).is_err());
    }

    #[test]
    fn partition_examples() {
        assert!(close(partition_function(&spec(1, 2)).unwrap().value, 1.0 / PI.sqrt(), 1e-13));
        assert!(close(partition_function(&spec(4, 2)).unwrap().value, 6.0, 1e-13));
        let expected = crate::special::gamma(10.0) / crate::special::gamma(5.5) / 2.0;
        assert!(close(partition_function(&spec(9, 2)).unwrap().value, expected, 1e-12));
        let y = classical_matrices(&spec(2, 2)).unwrap();
        assert!(close(y[(0, 1)], 1.0, 1e-14));
    }
}
