use std::collections::HashMap;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::multi_index::{concat_sign_bits, full_mask, MultiIndex, MAX_DIM};
use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped (underflow guard only).
pub const DROP_TOLERANCE: f64 = 1e-300;

/// Left-operand terms per work unit in [`wedge`]. Fixed so that the
/// summation order, and therefore the result, does not depend on the
/// number of worker threads.
const WEDGE_CHUNK: usize = 64;

/// A homogeneous `degree`-form on `C^dim` with sparse complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtForm {
    dim: usize,
    degree: usize,
    /// Sorted by bit pattern, no duplicates, no zero coefficients.
    terms: Vec<(u64, C64)>,
}

impl ExtForm {
    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim));
        }
        if degree > dim {
            return Err(Error::DegreeOverflow { degree, dim });
        }
        Ok(Self { dim, degree, terms: Vec::new() })
    }

    /// The 0-form `value`.
    pub fn scalar(dim: usize, value: C64) -> Result<Self> {
        let mut f = Self::zero(dim, 0)?;
        if value.norm() >= DROP_TOLERANCE {
            f.terms.push((0, value));
        }
        Ok(f)
    }

    /// `value * e_index`.
    pub fn basis(index: MultiIndex, value: C64) -> Self {
        let mut terms = Vec::new();
        if value.norm() >= DROP_TOLERANCE {
            terms.push((index.bits(), value));
        }
        Self { dim: index.dim(), degree: index.degree(), terms }
    }

    /// Sums the given terms; repeated indices accumulate in iteration order.
    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, C64)>,
    {
        let mut f = Self::zero(dim, degree)?;
        let mut acc: HashMap<u64, C64> = HashMap::new();
        for (idx, c) in terms {
            if idx.dim() != dim {
                return Err(Error::DimensionMismatch(dim, idx.dim()));
            }
            if idx.degree() != degree {
                return Err(Error::WrongDegree { expected: degree, found: idx.degree() });
            }
            *acc.entry(idx.bits()).or_insert(C64::new(0.0, 0.0)) += c;
        }
        f.terms = acc.into_iter().filter(|(_, c)| c.norm() >= DROP_TOLERANCE).collect();
        f.terms.sort_unstable_by_key(|(b, _)| *b);
        Ok(f)
    }

    pub(crate) fn from_sorted_unchecked(dim: usize, degree: usize, terms: Vec<(u64, C64)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        Self { dim, degree, terms }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of stored (nonzero) coefficients.
    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, index: &MultiIndex) -> C64 {
        if index.dim() != self.dim || index.degree() != self.degree {
            return C64::new(0.0, 0.0);
        }
        self.coeff_bits(index.bits())
    }

    #[inline]
    pub(crate) fn coeff_bits(&self, bits: u64) -> C64 {
        match self.terms.binary_search_by_key(&bits, |(b, _)| *b) {
            Ok(i) => self.terms[i].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, C64)> + '_ {
        self.terms.iter().map(move |&(b, c)| (MultiIndex::raw(b, self.dim), c))
    }

    pub(crate) fn raw_terms(&self) -> &[(u64, C64)] {
        &self.terms
    }

    pub fn scale(&self, factor: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|&(b, c)| (b, c * factor))
            .filter(|(_, c)| c.norm() >= DROP_TOLERANCE)
            .collect();
        Self { dim: self.dim, degree: self.degree, terms }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.degree != other.degree {
            return Err(Error::WrongDegree { expected: self.degree, found: other.degree });
        }
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let next = match (self.terms.get(i), other.terms.get(j)) {
                (Some(&(a, x)), Some(&(b, y))) if a == b => {
                    i += 1;
                    j += 1;
                    (a, x + y)
                }
                (Some(&(a, x)), Some(&(b, _))) if a < b => {
                    i += 1;
                    (a, x)
                }
                (Some(_), Some(&(b, y))) => {
                    j += 1;
                    (b, y)
                }
                (Some(&(a, x)), None) => {
                    i += 1;
                    (a, x)
                }
                (None, Some(&(b, y))) => {
                    j += 1;
                    (b, y)
                }
                (None, None) => unreachable!(),
            };
            if next.1.norm() >= DROP_TOLERANCE {
                terms.push(next);
            }
        }
        Ok(Self { dim: self.dim, degree: self.degree, terms })
    }

    /// The same form regarded in a larger ambient space.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::DimensionMismatch(self.dim, dim));
        }
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim));
        }
        Ok(Self { dim, degree: self.degree, terms: self.terms.clone() })
    }

    /// Largest coefficient magnitude (0 for the zero form).
    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }
}

/// Exterior product `a ^ b`.
pub fn wedge(a: &ExtForm, b: &ExtForm) -> Result<ExtForm> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    let degree = a.degree + b.degree;
    if degree > a.dim {
        return Err(Error::DegreeOverflow { degree, dim: a.dim });
    }
    if a.is_zero() || b.is_zero() {
        return ExtForm::zero(a.dim, degree);
    }
    let partials: Vec<HashMap<u64, C64>> = a
        .terms
        .par_chunks(WEDGE_CHUNK)
        .map(|chunk| {
            let mut acc: HashMap<u64, C64> = HashMap::new();
            for &(sa, ca) in chunk {
                for &(sb, cb) in &b.terms {
                    let sign = concat_sign_bits(sa, sb);
                    if sign == 0 {
                        continue;
                    }
                    let v = if sign > 0 { ca * cb } else { -(ca * cb) };
                    *acc.entry(sa | sb).or_insert(C64::new(0.0, 0.0)) += v;
                }
            }
            acc
        })
        .collect();
    let mut total: HashMap<u64, C64> = HashMap::new();
    for part in partials {
        for (k, v) in part {
            *total.entry(k).or_insert(C64::new(0.0, 0.0)) += v;
        }
    }
    let mut terms: Vec<(u64, C64)> =
        total.into_iter().filter(|(_, c)| c.norm() >= DROP_TOLERANCE).collect();
    terms.sort_unstable_by_key(|(b, _)| *b);
    Ok(ExtForm::from_sorted_unchecked(a.dim, degree, terms))
}

/// `a ^ a ^ ... ^ a` (`n` factors); the scalar 1 when `n == 0`.
pub fn wedge_power(a: &ExtForm, n: usize) -> Result<ExtForm> {
    let degree = n * a.degree;
    if degree > a.dim {
        return Err(Error::DegreeOverflow { degree, dim: a.dim });
    }
    if n == 0 {
        return ExtForm::scalar(a.dim, C64::new(1.0, 0.0));
    }
    let mut acc = a.clone();
    for _ in 1..n {
        acc = wedge(&acc, a)?;
    }
    Ok(acc)
}

/// Hyperpfaffian: the coefficient of the volume form in `a^{^n} / n!`,
/// `n = dim / degree`.
pub fn hyperpfaffian(a: &ExtForm) -> Result<C64> {
    let (dim, k) = (a.dim, a.degree);
    if k == 0 {
        if dim == 0 {
            return Ok(a.coeff_bits(0));
        }
        return Err(Error::DegreeDoesNotDivide { degree: k, dim });
    }
    if dim % k != 0 {
        return Err(Error::DegreeDoesNotDivide { degree: k, dim });
    }
    let n = dim / k;
    let head = wedge_power(a, n - 1)?;
    // last factor: only the volume coefficient is needed
    let vol = full_mask(dim);
    let mut sum = C64::new(0.0, 0.0);
    for &(s, c) in head.raw_terms() {
        let rest = vol & !s;
        let other = a.coeff_bits(rest);
        if other == C64::new(0.0, 0.0) {
            continue;
        }
        let sign = concat_sign_bits(s, rest);
        let v = c * other;
        sum += if sign > 0 { v } else { -v };
    }
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    Ok(sum / factorial)
}
