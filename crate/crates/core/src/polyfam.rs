//! Polynomials, complete monic families, modified derivatives and
//! Wronskians.
//!
//! The modified derivative is `D^l f = f^{(l)} / l!`, so on coefficients it
//! maps `c_j x^j` to `C(j, l) c_j x^{j-l}`. Wronskians are built from these
//! scaled derivatives:
//! `Wr(p_t; x) = det[ D^{l-1} p_{t(n)}(x) ]_{n,l=1..L}`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exterior::MultiIndex;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Tolerance on the leading coefficient of a monic polynomial.
pub const MONIC_TOLERANCE: f64 = 1e-12;

/// Dense polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `x^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = ONE;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(ZERO)
                    + other.coeffs.get(i).copied().unwrap_or(ZERO)
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    /// `D^l p = p^{(l)} / l!`.
    pub fn modified_derivative(&self, l: usize) -> Self {
        if l == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= l {
            return Self::zero();
        }
        let coeffs = (l..self.coeffs.len())
            .map(|j| self.coeffs[j] * binomial(j, l))
            .collect();
        Self::new(coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({c})")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// `C(n, k)` as a float; exact for the sizes used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r.round()
}

/// Named polynomial families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Monomial,
    /// Monic probabilists' Hermite: `He_{n+1} = x He_n - n He_{n-1}`.
    HermiteMonic,
    /// Monic Legendre on `[-1, 1]`.
    LegendreMonic,
    /// Monic with sub-leading coefficients uniform on `[-1, 1]`.
    RandomMonic { seed: u64 },
}

impl FamilyKind {
    pub const ALL_DEFAULT: [FamilyKind; 4] = [
        FamilyKind::Monomial,
        FamilyKind::HermiteMonic,
        FamilyKind::LegendreMonic,
        FamilyKind::RandomMonic { seed: 7 },
    ];

    pub fn name(&self) -> String {
        match self {
            FamilyKind::Monomial => "monomial".into(),
            FamilyKind::HermiteMonic => "hermite".into(),
            FamilyKind::LegendreMonic => "legendre".into(),
            FamilyKind::RandomMonic { seed } => format!("random({seed})"),
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    /// Accepts `monomial`, `hermite`, `legendre`, `random` (seed 0) and
    /// `random:<seed>`, plus the `*_monic` spellings.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, seed) = match lower.split_once(':') {
            Some((n, seed)) => {
                let seed = seed.parse::<u64>().map_err(|_| Error::UnknownKind {
                    what: "polynomial family",
                    name: s.to_string(),
                })?;
                (n.to_string(), Some(seed))
            }
            None => (lower.clone(), None),
        };
        match (name.as_str(), seed) {
            ("monomial" | "monomials", None) => Ok(FamilyKind::Monomial),
            ("hermite" | "hermite_monic", None) => Ok(FamilyKind::HermiteMonic),
            ("legendre" | "legendre_monic", None) => Ok(FamilyKind::LegendreMonic),
            ("random" | "random_monic", seed) => Ok(FamilyKind::RandomMonic { seed: seed.unwrap_or(0) }),
            _ => Err(Error::UnknownKind { what: "polynomial family", name: s.to_string() }),
        }
    }
}

/// `size` monic polynomials with `deg polys[i] == i` (0-based).
#[derive(Clone, Debug, PartialEq)]
pub struct CompleteFamily {
    polys: Vec<Polynomial>,
}

impl CompleteFamily {
    pub fn new(polys: Vec<Polynomial>) -> Result<Self> {
        for (i, p) in polys.iter().enumerate() {
            if p.degree() != Some(i) {
                return Err(Error::InvalidParameter(format!(
                    "family member {} has degree {:?}, expected {i}",
                    i + 1,
                    p.degree()
                )));
            }
            if (p.leading() - ONE).norm() > MONIC_TOLERANCE {
                return Err(Error::InvalidParameter(format!("family member {} is not monic", i + 1)));
            }
        }
        Ok(Self { polys })
    }

    pub fn size(&self) -> usize {
        self.polys.len()
    }

    /// 1-based, matching the multi-index convention.
    pub fn poly(&self, n: usize) -> &Polynomial {
        &self.polys[n - 1]
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }
}

/// Builds a family of the given kind with `size` members.
pub fn standard_family(kind: FamilyKind, size: usize) -> Result<CompleteFamily> {
    if size == 0 {
        return Err(Error::InvalidParameter("family size must be at least 1".into()));
    }
    let polys = match kind {
        FamilyKind::Monomial => (0..size).map(Polynomial::monomial).collect(),
        FamilyKind::HermiteMonic => three_term(size, |n| n as f64),
        FamilyKind::LegendreMonic => three_term(size, |n| {
            let n = n as f64;
            n * n / (4.0 * n * n - 1.0)
        }),
        FamilyKind::RandomMonic { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..size)
                .map(|deg| {
                    let mut c: Vec<C64> =
                        (0..deg).map(|_| C64::new(rng.random_range(-1.0..=1.0), 0.0)).collect();
                    c.push(ONE);
                    Polynomial::new(c)
                })
                .collect()
        }
    };
    CompleteFamily::new(polys)
}

/// Monic recurrence `p_{n+1} = x p_n - b(n) p_{n-1}`.
fn three_term(size: usize, b: impl Fn(usize) -> f64) -> Vec<Polynomial> {
    let x = Polynomial::monomial(1);
    let mut out = vec![Polynomial::monomial(0)];
    if size > 1 {
        out.push(x.clone());
    }
    while out.len() < size {
        let n = out.len() - 1;
        let next = x.mul(&out[n]).add(&out[n - 1].scale(C64::new(-b(n), 0.0)));
        out.push(next);
    }
    out
}

/// `[D^l p_n]` for `n = 1..=size`, `l = 0..levels`, indexed `[n-1][l]`.
pub fn derivative_table(fam: &CompleteFamily, levels: usize) -> Vec<Vec<Polynomial>> {
    fam.polys
        .iter()
        .map(|p| (0..levels).map(|l| p.modified_derivative(l)).collect())
        .collect()
}

/// Numeric Wronskian for an arbitrary tuple of 1-based family indices
/// (the rows need not be increasing).
pub fn wronskian_rows(fam: &CompleteFamily, rows: &[usize], x: C64) -> Result<C64> {
    let l = rows.len();
    for &r in rows {
        if r == 0 || r > fam.size() {
            return Err(Error::IndexOutOfRange { index: r, dim: fam.size() });
        }
    }
    if l == 0 {
        return Ok(ONE);
    }
    let m = DMatrix::from_fn(l, l, |n, col| fam.poly(rows[n]).modified_derivative(col).eval(x));
    Ok(m.determinant())
}

/// `Wr(p_t; x)` by LU on the `L x L` matrix of modified derivatives.
pub fn wronskian(fam: &CompleteFamily, t: &MultiIndex, x: C64) -> Result<C64> {
    let rows: Vec<usize> = t.elements().collect();
    wronskian_rows(fam, &rows, x)
}

/// `Wr(p_t; x)` as a polynomial in `x`, expanded column by column over
/// row subsets.
pub fn wronskian_polynomial(table: &[Vec<Polynomial>], t: &MultiIndex) -> Result<Polynomial> {
    let rows: Vec<usize> = t.elements().collect();
    let l = rows.len();
    for &r in &rows {
        if r > table.len() {
            return Err(Error::IndexOutOfRange { index: r, dim: table.len() });
        }
        if table[r - 1].len() < l {
            return Err(Error::InvalidParameter(format!(
                "derivative table has {} levels, need {l}",
                table[r - 1].len()
            )));
        }
    }
    if l == 0 {
        return Ok(Polynomial::monomial(0));
    }
    // dp[mask]: signed sum over assignments of the rows in `mask` to the
    // first popcount(mask) columns.
    let mut dp: Vec<Option<Polynomial>> = vec![None; 1 << l];
    dp[0] = Some(Polynomial::monomial(0));
    for mask in 1usize..(1 << l) {
        let col = mask.count_ones() as usize - 1;
        let mut acc = Polynomial::zero();
        for r in 0..l {
            if mask & (1 << r) == 0 {
                continue;
            }
            let prev = mask & !(1 << r);
            let Some(sub) = &dp[prev] else { continue };
            let entry = &table[rows[r] - 1][col];
            if sub.is_zero() || entry.is_zero() {
                continue;
            }
            // new inversions: rows already placed that sit below r
            let above = (prev >> (r + 1)).count_ones();
            let term = sub.mul(entry);
            acc = if above % 2 == 0 { acc.add(&term) } else { acc.add(&term.scale(-ONE)) };
        }
        dp[mask] = Some(acc);
    }
    Ok(dp[(1 << l) - 1].take().unwrap())
}

/// Closed form of the monomial Wronskian: `Wr = constant * x^exponent` with
/// `constant = prod_{j<k}(t_k - t_j) / prod_{l=1..L} (l-1)!` and
/// `exponent = sum t - L(L+1)/2`.
///
/// The constant is the determinant of the binomial matrix `C(t_n - 1, l)`.
pub fn monomial_wronskian_closed_form(t: &MultiIndex) -> (Ratio<i128>, usize) {
    let elems: Vec<i128> = t.elements().map(|e| e as i128).collect();
    let l = elems.len();
    let mut constant = Ratio::from_integer(1i128);
    for k in 0..l {
        for j in 0..k {
            // pair the difference with a factor of (k - j) from the factorials
            constant *= Ratio::new(elems[k] - elems[j], (k - j) as i128);
        }
    }
    let sum: usize = t.elements().sum();
    (constant, sum - l * (l + 1) / 2)
}

/// The `NL x L` slab `[D^{l-1} p_n(x)]`.
pub fn vandermonde_block(fam: &CompleteFamily, x: C64, l: usize) -> DMatrix<C64> {
    DMatrix::from_fn(fam.size(), l, |n, col| fam.polys[n].modified_derivative(col).eval(x))
}
