use hyperpf::ensembles::{partition_function, EnsembleSpec};
use hyperpf::exterior::{
    form_from_matrix, hyperpfaffian, matrix_from_form, pfaffian, sign_of_concatenation, wedge, ExtForm, MultiIndex,
};
use hyperpf::measures::Measure;
use hyperpf::oracle::{
    hyperpfaffian_sum_oracle, mehta_value, uniform_selberg_value, vandermonde_identity_check,
};
use hyperpf::polyfam::{standard_family, FamilyKind};
use hyperpf::suites::{random_antisymmetric, random_form, separated_points};
use hyperpf::C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn diff(a: &ExtForm, b: &ExtForm) -> f64 {
    a.add(&b.scale(C64::new(-1.0, 0.0))).unwrap().max_abs()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn valid_beta() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![1u32, 2, 4, 9, 10])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), dim in 2usize..=8, p in 1usize..=3, q in 1usize..=3) {
        prop_assume!(p + q <= dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(dim, p, &mut rng).unwrap();
        let b = random_form(dim, q, &mut rng).unwrap();
        let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
        let ab = wedge(&a, &b).unwrap();
        let ba = wedge(&b, &a).unwrap().scale(C64::new(sign, 0.0));
        prop_assert!(diff(&ab, &ba) <= 1e-12 * ab.max_abs().max(1.0));
    }

    #[test]
    fn wedge_is_associative(seed in any::<u64>(), dim in 3usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(dim, 1, &mut rng).unwrap();
        let b = random_form(dim, 2, &mut rng).unwrap();
        let c = random_form(dim, dim - 3, &mut rng).unwrap();
        let left = wedge(&wedge(&a, &b).unwrap(), &c).unwrap();
        let right = wedge(&a, &wedge(&b, &c).unwrap()).unwrap();
        prop_assert!(diff(&left, &right) <= 1e-10 * left.max_abs().max(1.0));
    }

    #[test]
    fn pfaffian_squares_to_determinant(seed in any::<u64>(), half in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_antisymmetric(2 * half, &mut rng);
        let pf = pfaffian(&a).unwrap();
        let det = a.clone().determinant();
        prop_assert!((pf * pf - det).norm() <= 1e-10 * det.norm().max(1e-6));
        prop_assert!(rel(hyperpfaffian(&form_from_matrix(&a).unwrap()).unwrap(), pf) <= 1e-10);
        prop_assert_eq!(matrix_from_form(&form_from_matrix(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn set_partition_sum_matches(seed in any::<u64>(), shape in prop::sample::select(vec![(4usize, 2usize), (6, 2), (8, 2), (8, 4), (6, 3), (6, 6)])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (dim, degree) = shape;
        let f = random_form(dim, degree, &mut rng).unwrap();
        let scale = f.max_abs().powi((dim / degree) as i32).max(1.0);
        let a = hyperpfaffian(&f).unwrap();
        let b = hyperpfaffian_sum_oracle(&f).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * scale);
    }

    #[test]
    fn concatenation_sign_swaps_with_degrees(bits in 1u64..(1 << 10), split in 1u64..(1 << 10)) {
        let a = MultiIndex::from_bits(bits & split, 10).unwrap();
        let b = MultiIndex::from_bits(bits & !split, 10).unwrap();
        let ab = sign_of_concatenation(&[a, b]).unwrap();
        let ba = sign_of_concatenation(&[b, a]).unwrap();
        let expected = if (a.degree() * b.degree()) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(ab * ba, expected);
    }

    #[test]
    fn vandermonde_identity(seed in any::<u64>(), l in 1usize..=3, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambdas = separated_points(n, 2.0, &mut rng);
        let fam = standard_family(FamilyKind::RandomMonic { seed }, n * l).unwrap();
        let c = vandermonde_identity_check(&fam, l, &lambdas).unwrap();
        prop_assert!(c.rel_err <= 1e-9, "{:?}", c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn partition_function_ignores_the_family(seed in any::<u64>(), beta in valid_beta(), n in 1usize..=4) {
        let Ok(mono) = EnsembleSpec::with_family_kind(beta, n, Measure::gaussian(), FamilyKind::Monomial) else {
            return Ok(());
        };
        let random = EnsembleSpec::with_family_kind(beta, n, Measure::gaussian(), FamilyKind::RandomMonic { seed }).unwrap();
        let a = partition_function(&mono).unwrap().value;
        let b = partition_function(&random).unwrap().value;
        prop_assert!(rel(b, a) <= 1e-8, "{} vs {}", b, a);
    }

    #[test]
    fn scaling_the_measure_scales_z(t in 0.1f64..5.0, beta in valid_beta(), n in 1usize..=4) {
        let Ok(base) = EnsembleSpec::with_family_kind(beta, n, Measure::gaussian(), FamilyKind::Monomial) else {
            return Ok(());
        };
        let scaled = base.with_measure(Measure::gaussian().scaled(t)).unwrap();
        let a = partition_function(&base).unwrap().value * t.powi(n as i32);
        let b = partition_function(&scaled).unwrap().value;
        prop_assert!(rel(b, a) <= 1e-12);
    }

    #[test]
    fn uniform_matches_selberg(centre in -0.5f64..0.5, width in 1.0f64..3.0, beta in prop::sample::select(vec![1u32, 4]), n in 1usize..=4) {
        // monomial moments of short intervals far from 0 cancel badly
        let lo = centre - width / 2.0;
        let m = Measure::uniform(lo, lo + width).unwrap();
        let z = partition_function(&EnsembleSpec::with_family_kind(beta, n, m, FamilyKind::Monomial).unwrap()).unwrap().value;
        let s = uniform_selberg_value(beta, lo, lo + width, n).unwrap();
        prop_assert!(rel(z, C64::new(s, 0.0)) <= 1e-8, "{} vs {}", z, s);
    }

    #[test]
    fn gaussian_width_follows_mehta(t in 0.3f64..3.0, beta in prop::sample::select(vec![1u32, 4]), n in 2usize..=4) {
        // the density of N(0, t^2) is the standard one pushed forward by x -> t x
        let w = move |x: f64| (-(x / t).powi(2) / 2.0).exp() / (t * (2.0 * std::f64::consts::PI).sqrt());
        let m = Measure::custom("wide normal", -12.0 * t, 12.0 * t, w).unwrap().with_quad_order(120).unwrap();
        let z = partition_function(&EnsembleSpec::with_family_kind(beta, n, m, FamilyKind::Monomial).unwrap()).unwrap().value;
        let pairs = (n * (n - 1) / 2) as i32;
        let expected = mehta_value(beta as f64 / 2.0, n).unwrap() * t.powi(beta as i32 * pairs);
        prop_assert!(rel(z, C64::new(expected, 0.0)) <= 1e-7, "{} vs {}", z, expected);
    }
}
