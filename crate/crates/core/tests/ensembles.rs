use std::f64::consts::PI;

use hyperpf::ensembles::{classical_matrices, correlation, partition_function, EnsembleSpec, MAX_CORRELATION_POINTS};
use hyperpf::exterior::pfaffian;
use hyperpf::measures::Measure;
use hyperpf::polyfam::FamilyKind;
use hyperpf::special::{normal_cdf, normal_pdf};
use hyperpf::Error;

fn gaussian(beta: u32, n: usize) -> EnsembleSpec {
    EnsembleSpec::with_family_kind(beta, n, Measure::gaussian(), FamilyKind::Monomial).unwrap()
}

/// `E|x - Y|` for standard normal `Y`.
fn mean_distance(x: f64) -> f64 {
    x * (2.0 * normal_cdf(x) - 1.0) + 2.0 * normal_pdf(x)
}

#[test]
fn empty_correlation_is_one() {
    assert_eq!(correlation(&gaussian(1, 2), &[]).unwrap(), 1.0);
}

#[test]
fn one_point_marginal_at_beta_one() {
    // Z_2 = 1/2 E|x - y|; one atom adds c w(x) E|x - Y|
    let s = gaussian(1, 2);
    let z2 = 1.0 / PI.sqrt();
    for x in [-1.3, 0.0, 0.4, 2.2] {
        let expected = normal_pdf(x) * mean_distance(x) / z2;
        let r1 = correlation(&s, &[x]).unwrap();
        assert!((r1 - expected).abs() < 1e-12 * expected.max(1e-3), "x={x}: {r1} vs {expected}");
    }
}

#[test]
fn two_point_function_at_beta_one() {
    let s = gaussian(1, 2);
    let z2 = 1.0 / PI.sqrt();
    let (x, y) = (-0.7, 0.9);
    let expected = normal_pdf(x) * normal_pdf(y) * (y - x) / z2;
    let r2 = correlation(&s, &[x, y]).unwrap();
    assert!((r2 - expected).abs() < 1e-12 * expected);
}

#[test]
fn correlations_symmetric_and_nonnegative() {
    for beta in [1u32, 2, 4] {
        let s = gaussian(beta, 4);
        for (x, y) in [(-1.1, 0.2), (0.5, 1.9), (-0.3, -0.2)] {
            let a = correlation(&s, &[x, y]).unwrap();
            let b = correlation(&s, &[y, x]).unwrap();
            assert!((a - b).abs() <= 1e-8 * a.abs(), "beta={beta}");
            assert!(a >= 0.0);
            assert!(correlation(&s, &[x]).unwrap() >= 0.0);
        }
        let three = correlation(&s, &[-1.0, 0.1, 1.2]).unwrap();
        assert!(three >= 0.0, "beta={beta}: {three}");
    }
}

#[test]
fn correlation_errors() {
    let s = gaussian(1, 2);
    assert!(matches!(correlation(&s, &[0.3, 0.3]), Err(Error::CoincidentPoints(_))));
    assert!(correlation(&s, &[0.1, 0.2, 0.3]).is_err());
    let big = gaussian(4, 4);
    let points: Vec<f64> = (0..=MAX_CORRELATION_POINTS).map(|i| i as f64).collect();
    assert!(correlation(&big, &points).is_err());
    let u = EnsembleSpec::with_family_kind(1, 2, Measure::uniform(0.0, 1.0).unwrap(), FamilyKind::Monomial).unwrap();
    assert!(correlation(&u, &[1.5]).is_err());
}

#[test]
fn independent_of_thread_count() {
    for (beta, n) in [(1u32, 5usize), (9, 3), (4, 6)] {
        let s = gaussian(beta, n);
        let values: Vec<_> = [1, 3]
            .iter()
            .map(|&t| {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
                pool.install(|| partition_function(&s).unwrap().value)
            })
            .collect();
        assert_eq!(values[0], values[1], "beta={beta} N={n}");
    }
}

#[test]
fn classical_pfaffians_match() {
    for (beta, n) in [(4u32, 2usize), (4, 3), (1, 4), (1, 3), (2, 4)] {
        let s = gaussian(beta, n);
        let m = classical_matrices(&s).unwrap();
        let z = partition_function(&s).unwrap().value;
        let pf = pfaffian(&m).unwrap();
        assert!((pf - z).norm() <= 1e-10 * z.norm(), "beta={beta} N={n}");
    }
    assert!(classical_matrices(&gaussian(9, 2)).is_err());
}

#[test]
fn circle_values_are_real() {
    for (beta, n) in [(1u32, 4usize), (9, 3), (2, 4)] {
        let s = EnsembleSpec::with_family_kind(beta, n, Measure::circular(n, beta).unwrap(), FamilyKind::HermiteMonic)
            .unwrap();
        let c = partition_function(&s).unwrap().value;
        assert!(c.im.abs() <= 1e-8 * c.re.abs(), "beta={beta} N={n}: {c}");
    }
}
