use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::form::ExtForm;
use super::multi_index::MultiIndex;
use crate::error::{Error, Result};

/// Dense complex square matrix.
pub type SquareMatrix = DMatrix<C64>;

/// Relative antisymmetry defect tolerated by [`check_antisymmetric`].
pub const ANTISYMMETRY_TOLERANCE: f64 = 1e-10;

/// Largest order handled by the memoised first-row expansion in [`pfaffian`].
pub const MAX_EXPANSION_ORDER: usize = 24;

/// Checks `A = -A^T` with zero diagonal, relative to the largest entry.
pub fn check_antisymmetric(a: &SquareMatrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    let n = a.nrows();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut defect: f64 = 0.0;
    for i in 0..n {
        defect = defect.max(a[(i, i)].norm());
        for j in i + 1..n {
            defect = defect.max((a[(i, j)] + a[(j, i)]).norm());
        }
    }
    if defect > ANTISYMMETRY_TOLERANCE * scale.max(1e-300) && defect > 0.0 {
        return Err(Error::NotAntisymmetric(defect));
    }
    Ok(())
}

/// `sum_{m<n} a_{mn} e_m ^ e_n`.
pub fn form_from_matrix(a: &SquareMatrix) -> Result<ExtForm> {
    check_antisymmetric(a)?;
    let d = a.nrows();
    let mut terms = Vec::new();
    for m in 0..d {
        for n in m + 1..d {
            let idx = MultiIndex::from_elements(&[m + 1, n + 1], d)?;
            terms.push((idx, a[(m, n)]));
        }
    }
    ExtForm::from_terms(d, 2, terms)
}

/// Inverse of [`form_from_matrix`]: `A[m][n] = coeff(e_m ^ e_n)` for `m < n`.
pub fn matrix_from_form(form: &ExtForm) -> Result<SquareMatrix> {
    if form.degree() != 2 {
        return Err(Error::WrongDegree { expected: 2, found: form.degree() });
    }
    let d = form.dim();
    let mut a = SquareMatrix::zeros(d, d);
    for (idx, c) in form.terms() {
        let mut it = idx.elements();
        let (m, n) = (it.next().unwrap() - 1, it.next().unwrap() - 1);
        a[(m, n)] = c;
        a[(n, m)] = -c;
    }
    Ok(a)
}

/// Pfaffian of an antisymmetric matrix of even order.
///
/// Orders up to [`MAX_EXPANSION_ORDER`] use the memoised first-row
/// expansion; larger orders fall back to skew Gaussian elimination.
pub fn pfaffian(a: &SquareMatrix) -> Result<C64> {
    if a.nrows() <= MAX_EXPANSION_ORDER {
        pfaffian_expansion(a)
    } else {
        pfaffian_elimination(a)
    }
}

/// `Pf A = sum_j (-1)^j a_{1j} Pf(A without rows/cols 1, j)`, memoised over
/// the remaining index set.
pub fn pfaffian_expansion(a: &SquareMatrix) -> Result<C64> {
    check_antisymmetric(a)?;
    let n = a.nrows();
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    if n > 64 {
        return Err(Error::DimensionTooLarge(n));
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = HashMap::new();
    Ok(expand(a, full, &mut memo))
}

fn expand(a: &SquareMatrix, mask: u64, memo: &mut HashMap<u64, C64>) -> C64 {
    if mask == 0 {
        return C64::new(1.0, 0.0);
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1u64 << i);
    let mut sum = C64::new(0.0, 0.0);
    let mut others = rest;
    // position of j among the remaining indices after i: 0, 1, 2, ...
    let mut pos = 0;
    while others != 0 {
        let j = others.trailing_zeros() as usize;
        others &= others - 1;
        let aij = a[(i, j)];
        if aij != C64::new(0.0, 0.0) {
            let sub = expand(a, rest & !(1u64 << j), memo);
            let term = aij * sub;
            sum += if pos % 2 == 0 { term } else { -term };
        }
        pos += 1;
    }
    memo.insert(mask, sum);
    sum
}

/// Pfaffian by skew-symmetric Gaussian elimination with partial pivoting
/// (Parlett-Reid), `O(n^3)`.
pub fn pfaffian_elimination(a: &SquareMatrix) -> Result<C64> {
    check_antisymmetric(a)?;
    let n = a.nrows();
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    let mut m = a.clone();
    let mut pf = C64::new(1.0, 0.0);
    let mut k = 0;
    while k + 1 < n {
        let (mut p, mut best) = (k + 1, m[(k + 1, k)].norm());
        for i in k + 2..n {
            let v = m[(i, k)].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        if p != k + 1 {
            m.swap_rows(p, k + 1);
            m.swap_columns(p, k + 1);
            pf = -pf;
        }
        let pivot = m[(k + 1, k)];
        pf *= m[(k, k + 1)];
        let taus: Vec<C64> = (k + 2..n).map(|i| m[(i, k)] / pivot).collect();
        for (ii, i) in (k + 2..n).enumerate() {
            for (jj, j) in (k + 2..n).enumerate() {
                let update = taus[ii] * m[(k + 1, j)] + taus[jj] * m[(i, k + 1)];
                m[(i, j)] -= update;
            }
        }
        k += 2;
    }
    Ok(pf)
}
