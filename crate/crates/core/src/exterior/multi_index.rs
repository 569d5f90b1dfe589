use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 64;

/// An increasing multi-index into `1..=dim`, stored as a bit set.
///
/// Element `e` occupies bit `e - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    bits: u64,
    dim: u8,
}

impl MultiIndex {
    pub fn from_bits(bits: u64, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if dim < 64 && bits >> dim != 0 {
            let index = 64 - bits.leading_zeros() as usize;
            return Err(Error::IndexOutOfRange { index, dim });
        }
        Ok(Self { bits, dim: dim as u8 })
    }

    /// Builds the index set from 1-based elements. Order is irrelevant but
    /// repeats are rejected.
    pub fn from_elements(elements: &[usize], dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > dim {
                return Err(Error::IndexOutOfRange { index: e, dim });
            }
            let bit = 1u64 << (e - 1);
            if bits & bit != 0 {
                return Err(Error::InvalidParameter(format!("repeated element {e}")));
            }
            bits |= bit;
        }
        Ok(Self { bits, dim: dim as u8 })
    }

    /// The contiguous block `{first, first+1, ..., first+len-1}`.
    pub fn block(first: usize, len: usize, dim: usize) -> Result<Self> {
        let elements: Vec<usize> = (first..first + len).collect();
        Self::from_elements(&elements, dim)
    }

    /// The full set `{1, ..., dim}` (the volume form's index).
    pub fn volume(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { bits: full_mask(dim), dim: dim as u8 })
    }

    pub(crate) const fn raw(bits: u64, dim: usize) -> Self {
        Self { bits, dim: dim as u8 }
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn overlaps(&self, other: &Self) -> bool {
        self.bits & other.bits != 0
    }

    #[inline]
    pub fn contains(&self, element: usize) -> bool {
        element >= 1 && element <= 64 && self.bits & (1u64 << (element - 1)) != 0
    }

    /// Complement within `1..=dim`.
    pub fn complement(&self) -> Self {
        Self { bits: full_mask(self.dim()) & !self.bits, dim: self.dim }
    }

    /// Same set, viewed inside a larger ambient dimension.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), dim));
        }
        check_dim(dim)?;
        Ok(Self { bits: self.bits, dim: dim as u8 })
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(&self) -> impl Iterator<Item = usize> {
        BitIter(self.bits).map(|b| b + 1)
    }

    /// All `k`-element multi-indices of `1..=dim` in increasing bit order.
    pub fn all_of_degree(dim: usize, k: usize) -> Result<Vec<MultiIndex>> {
        check_dim(dim)?;
        if k > dim {
            return Err(Error::DegreeOverflow { degree: k, dim });
        }
        let mut out = Vec::new();
        if k == 0 || k == dim {
            out.push(Self { bits: full_mask(k), dim: dim as u8 });
            return Ok(out);
        }
        // Gosper's hack
        let mut x: u64 = (1u64 << k) - 1;
        let limit = full_mask(dim);
        loop {
            out.push(Self { bits: x, dim: dim as u8 });
            let c = x & x.wrapping_neg();
            let r = x.wrapping_add(c);
            if r == 0 {
                break;
            }
            x = (((r ^ x) >> 2) / c) | r;
            if x & !limit != 0 {
                break;
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

#[inline]
pub(crate) fn full_mask(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        Err(Error::DimensionTooLarge(dim))
    } else {
        Ok(())
    }
}

/// Number of pairs `(s, t)` with `s` in `left`, `t` in `right` and `s > t`.
#[inline]
pub(crate) fn cross_inversions(left: u64, right: u64) -> u32 {
    let mut count = 0;
    let mut rest = right;
    while rest != 0 {
        let t = rest.trailing_zeros();
        rest &= rest - 1;
        // elements of `left` strictly above t
        let above = if t >= 63 { 0 } else { left >> (t + 1) };
        count += above.count_ones();
    }
    count
}

/// Sign relating `e_{S1} ^ e_{S2} ^ ... ` to the basis form of the union.
#[inline]
pub(crate) fn concat_sign_bits(left: u64, right: u64) -> i8 {
    if left & right != 0 {
        0
    } else if cross_inversions(left, right) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of the permutation sorting the concatenation of `parts`; zero when
/// two parts share an element.
pub fn sign_of_concatenation(parts: &[MultiIndex]) -> Result<i8> {
    let Some(first) = parts.first() else {
        return Ok(1);
    };
    let dim = first.dim();
    let mut seen = 0u64;
    let mut parity = 0u32;
    let mut total = 0usize;
    for p in parts {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch(dim, p.dim()));
        }
        total += p.degree();
        if seen & p.bits != 0 {
            // still validate the remaining dimensions before returning
            continue;
        }
        parity += cross_inversions(seen, p.bits);
        seen |= p.bits;
    }
    if total > dim {
        return Err(Error::DegreeOverflow { degree: total, dim });
    }
    if seen.count_ones() as usize != total {
        return Ok(0);
    }
    Ok(if parity % 2 == 0 { 1 } else { -1 })
}
