//! The confluent Vandermonde identity, the sign-matrix Pfaffians, and the
//! set-partition definition of the hyperpfaffian.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::exterior::{pfaffian, ExtForm, MultiIndex, SquareMatrix};
use crate::polyfam::{vandermonde_block, CompleteFamily};

/// Largest dimension accepted by [`hyperpfaffian_sum_oracle`].
pub const MAX_SUM_ORACLE_DIM: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityCheck {
    pub lhs: C64,
    pub rhs: C64,
    pub rel_err: f64,
    /// Both sides vanish (coincident points).
    pub degenerate: bool,
}

impl IdentityCheck {
    fn new(lhs: C64, rhs: C64) -> Self {
        let scale = lhs.norm().max(rhs.norm());
        let degenerate = scale < 1e-300 || rhs == C64::new(0.0, 0.0);
        let rel_err = if scale < 1e-300 { 0.0 } else { (lhs - rhs).norm() / scale };
        Self { lhs, rhs, rel_err, degenerate }
    }
}

/// `det V(lambda)` against `prod_{m<n} (lambda_n - lambda_m)^{L^2}`, where
/// `V` stacks the `NL x L` slabs `[D^{l-1} p_k(lambda_n)]` side by side.
pub fn vandermonde_identity_check(fam: &CompleteFamily, l: usize, lambdas: &[f64]) -> Result<IdentityCheck> {
    let n = lambdas.len();
    if fam.size() != n * l {
        return Err(Error::DimensionMismatch(n * l, fam.size()));
    }
    let mut v = DMatrix::<C64>::zeros(n * l, n * l);
    for (i, &x) in lambdas.iter().enumerate() {
        let block = vandermonde_block(fam, C64::new(x, 0.0), l);
        v.view_mut((0, i * l), (n * l, l)).copy_from(&block);
    }
    let lhs = v.determinant();
    let mut rhs = C64::new(1.0, 0.0);
    for j in 0..n {
        for k in j + 1..n {
            rhs *= (lambdas[k] - lambdas[j]).powi((l * l) as i32);
        }
    }
    Ok(IdentityCheck::new(lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignMatrixCheck {
    /// `Pf [sgn(lambda_n - lambda_m)]`
    pub pf_t: C64,
    /// `prod_{m<n} sgn(lambda_n - lambda_m)`
    pub sign_product: f64,
    /// `Pf [(lambda_n^M - lambda_m^M)^2 / (lambda_n - lambda_m)]`
    pub pf_s: C64,
    /// `prod_{m<n} (lambda_n - lambda_m)`
    pub product: f64,
}

/// Both sign-matrix identities for an even number of distinct points.
pub fn sign_matrix_pfaffian_check(lambdas: &[f64]) -> Result<SignMatrixCheck> {
    let n = lambdas.len();
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    for (i, &a) in lambdas.iter().enumerate() {
        if lambdas[..i].contains(&a) {
            return Err(Error::CoincidentPoints(a));
        }
    }
    let m = (n / 2) as i32;
    let t = SquareMatrix::from_fn(n, n, |a, b| C64::new((lambdas[b] - lambdas[a]).signum() * (a != b) as u8 as f64, 0.0));
    let s = SquareMatrix::from_fn(n, n, |a, b| {
        if a == b {
            return C64::new(0.0, 0.0);
        }
        let (x, y) = (lambdas[a], lambdas[b]);
        C64::new((y.powi(m) - x.powi(m)).powi(2) / (y - x), 0.0)
    });
    let mut sign_product = 1.0;
    let mut product = 1.0;
    for a in 0..n {
        for b in a + 1..n {
            sign_product *= (lambdas[b] - lambdas[a]).signum();
            product *= lambdas[b] - lambdas[a];
        }
    }
    Ok(SignMatrixCheck { pf_t: pfaffian(&t)?, sign_product, pf_s: pfaffian(&s)?, product })
}

/// Sign of the permutation listing `seq` (distinct values), by counting
/// inversions.
fn permutation_sign(seq: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `PF(a)` from its definition as a signed sum over ordered partitions of
/// `{1..D}` into blocks of size `k`, divided by `(D/k)!`.
pub fn hyperpfaffian_sum_oracle(a: &ExtForm) -> Result<C64> {
    let (d, k) = (a.dim(), a.degree());
    if d > MAX_SUM_ORACLE_DIM {
        return Err(Error::SizeGuard { keys: d as u128, limit: MAX_SUM_ORACLE_DIM as u128 });
    }
    if k == 0 || d % k != 0 {
        if d == 0 && k == 0 {
            return Ok(a.coeff(&MultiIndex::volume(0)?));
        }
        return Err(Error::DegreeDoesNotDivide { degree: k, dim: d });
    }
    let blocks = MultiIndex::all_of_degree(d, k)?;
    let mut total = C64::new(0.0, 0.0);
    let mut sequence = Vec::with_capacity(d);
    recurse(a, &blocks, 0u64, C64::new(1.0, 0.0), &mut sequence, d, &mut total);
    let n = d / k;
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    Ok(total / factorial)
}

fn recurse(
    a: &ExtForm,
    blocks: &[MultiIndex],
    used: u64,
    product: C64,
    sequence: &mut Vec<usize>,
    d: usize,
    total: &mut C64,
) {
    if sequence.len() == d {
        *total += product * permutation_sign(sequence);
        return;
    }
    for b in blocks {
        if b.bits() & used != 0 {
            continue;
        }
        let c = a.coeff(b);
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        let before = sequence.len();
        sequence.extend(b.elements());
        recurse(a, blocks, used | b.bits(), product * c, sequence, d, total);
        sequence.truncate(before);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{form_from_matrix, hyperpfaffian};
    use crate::polyfam::{standard_family, FamilyKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn vandermonde_examples() {
        let fam = standard_family(FamilyKind::Monomial, 3).unwrap();
        let one = vandermonde_identity_check(&fam, 3, &[0.7]).unwrap();
        assert!((one.lhs - C64::new(1.0, 0.0)).norm() < 1e-15);
        let c = vandermonde_identity_check(&fam, 1, &[0.0, 1.0, 2.0]).unwrap();
        assert!((c.lhs - C64::new(2.0, 0.0)).norm() < 1e-14 && c.rel_err < 1e-14);
        let fam4 = standard_family(FamilyKind::Monomial, 4).unwrap();
        let c = vandermonde_identity_check(&fam4, 2, &[0.0, 1.0]).unwrap();
        assert!((c.lhs - C64::new(1.0, 0.0)).norm() < 1e-14);
        let deg = vandermonde_identity_check(&fam4, 2, &[0.5, 0.5]).unwrap();
        assert!(deg.degenerate && deg.rel_err < 1e-12);
        assert!(vandermonde_identity_check(&fam4, 3, &[0.5, 0.6]).is_err());
    }

    #[test]
    fn sign_matrix_examples() {
        let c = sign_matrix_pfaffian_check(&[-1.0, 0.2, 0.9, 3.0]).unwrap();
        assert_eq!(c.pf_t, C64::new(1.0, 0.0));
        let c = sign_matrix_pfaffian_check(&[0.2, -1.0, 0.9, 3.0]).unwrap();
        assert_eq!(c.pf_t, C64::new(-1.0, 0.0));
        assert_eq!(c.sign_product, -1.0);
        let c = sign_matrix_pfaffian_check(&[0.0, 2.0]).unwrap();
        assert_eq!(c.pf_s, C64::new(2.0, 0.0));
        assert_eq!(c.product, 2.0);
        assert!(sign_matrix_pfaffian_check(&[1.0, 1.0]).is_err());
        assert!(sign_matrix_pfaffian_check(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn sum_oracle_examples() {
        let a = SquareMatrix::from_fn(4, 4, |i, j| C64::new((j as f64 - i as f64) * (1.0 + (i * j) as f64), 0.0));
        let form = form_from_matrix(&a).unwrap();
        let classical = a[(0, 1)] * a[(2, 3)] - a[(0, 2)] * a[(1, 3)] + a[(0, 3)] * a[(1, 2)];
        assert!((hyperpfaffian_sum_oracle(&form).unwrap() - classical).norm() < 1e-12);
        let vol = ExtForm::basis(MultiIndex::volume(5).unwrap(), C64::new(3.5, 0.0));
        assert_eq!(hyperpfaffian_sum_oracle(&vol).unwrap(), C64::new(3.5, 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (d, k) in [(9usize, 3usize), (8, 4), (12, 4), (6, 2)] {
            let terms: Vec<(MultiIndex, C64)> = MultiIndex::all_of_degree(d, k)
                .unwrap()
                .into_iter()
                .map(|t| (t, C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
                .collect();
            let form = ExtForm::from_terms(d, k, terms).unwrap();
            let a = hyperpfaffian_sum_oracle(&form).unwrap();
            let b = hyperpfaffian(&form).unwrap();
            assert!((a - b).norm() <= 1e-10 * (1.0 + b.norm()), "d={d} k={k}: {a} vs {b}");
        }
        let big = ExtForm::zero(14, 2).unwrap();
        assert!(matches!(hyperpfaffian_sum_oracle(&big), Err(Error::SizeGuard { .. })));
    }
}
