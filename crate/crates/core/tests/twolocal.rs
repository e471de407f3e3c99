use deltader_core::dersolve::{derivation_space, is_trivial_space, OperatorSpace};
use deltader_core::locder::random_vector;
use deltader_core::twolocal::{
    certify_with_defaults, evaluation_injective, find_separating_tuple, solve_from_tuple, synthetic_two_local_defects,
    TwoLocalStatus,
};
use deltader_core::{build, q, qi, Family, FamilySpec, LieAlgebra, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup(spec: &FamilySpec) -> (LieAlgebra, OperatorSpace) {
    let a = build(spec).unwrap();
    let d = derivation_space(&a, &q(1, 2));
    (a, d)
}

fn element(a: &LieAlgebra, names: &[&str]) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); a.dim()];
    for n in names {
        v[a.index_of(n).unwrap()] = qi(1);
    }
    v
}

#[test]
fn suggested_elements_separate() {
    let (a, d) = setup(&FamilySpec::new(Family::AbelianSolv, 3));
    assert!(evaluation_injective(&d, &[element(&a, &["x_1", "x_2", "x_3"])]).injective);

    let (a, d) = setup(&FamilySpec::new(Family::Oscillator, 2));
    assert!(evaluation_injective(&d, &[element(&a, &["e_-1"])]).injective);

    let (a, d) = setup(&FamilySpec::sl2_module(2));
    assert!(evaluation_injective(&d, &[element(&a, &["e"])]).injective);

    let (a, d) = setup(&FamilySpec::new(Family::S1, 5).with_beta(qi(2)));
    assert!(evaluation_injective(&d, &[element(&a, &["x"]), element(&a, &["e_1"])]).injective);
}

#[test]
fn heisenberg_needs_two_elements() {
    let (a, d) = setup(&FamilySpec::new(Family::HeisSolv, 2));
    let (cert, _) = find_separating_tuple(&a, &d, 2, 500, 1);
    let cert = cert.expect("a separating tuple");
    assert!(cert.verify(&d));
}

#[test]
fn every_solvable_instance_is_rigid() {
    let mut specs = Vec::new();
    for n in 4..=6 {
        for f in [Family::S2, Family::S3, Family::S4, Family::SN2, Family::Tau2, Family::Tau3, Family::Tau2N2] {
            specs.push(FamilySpec::new(f, n));
        }
        specs.push(FamilySpec::new(Family::S1, n).with_beta(q(5, 3)));
        specs.push(FamilySpec::new(Family::Tau1, n));
    }
    specs.push(FamilySpec::new(Family::Schrodinger, 2));
    specs.push(FamilySpec::new(Family::AbelianSolv, 4));
    for spec in specs {
        let (a, d) = setup(&spec);
        let r = certify_with_defaults(&a, &d);
        assert_eq!(r.status, TwoLocalStatus::Pass, "{}", spec.label());
        assert!(r.certificate.unwrap().verify(&d), "{}", spec.label());
    }
}

#[test]
fn abelian_sum_is_a_single_element_tuple() {
    let (a, d) = setup(&FamilySpec::new(Family::AbelianSolv, 4));
    let (cert, _) = find_separating_tuple(&a, &d, 1, 100, 3);
    let cert = cert.unwrap();
    assert_eq!(cert.labels, ["x_1+x_2+x_3+x_4"]);
}

#[test]
fn trivial_spaces_are_separated_by_any_vector() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for spec in [FamilySpec::new(Family::Schrodinger, 3), FamilySpec::sl2_module(3), FamilySpec::sl2_module(4)] {
        let (a, d) = setup(&spec);
        assert!(is_trivial_space(&d));
        for _ in 0..5 {
            assert!(evaluation_injective(&d, &[random_vector(a.dim(), &mut rng)]).injective);
        }
    }
}

#[test]
fn synthetic_maps_agree_with_the_tuple_solution() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for spec in [
        FamilySpec::new(Family::S3, 5),
        FamilySpec::new(Family::Oscillator, 2),
        FamilySpec::new(Family::HeisSolv, 2),
        FamilySpec::sl2_module(2),
    ] {
        let (a, d) = setup(&spec);
        let cert = certify_with_defaults(&a, &d).certificate.unwrap();
        assert_eq!(synthetic_two_local_defects(&d, &cert.tuple, 50, &mut rng), 0, "{}", spec.label());
    }
    // a single x does not separate on s1(2)
    let (a, d) = setup(&FamilySpec::new(Family::S1, 5).with_beta(qi(2)));
    assert!(synthetic_two_local_defects(&d, &[element(&a, &["x"])], 50, &mut rng) > 0);
}

#[test]
fn tuple_values_determine_the_operator() {
    let (a, d) = setup(&FamilySpec::new(Family::Tau2, 4));
    let cert = certify_with_defaults(&a, &d).certificate.unwrap();
    let target = d.combination(&(1..=d.dim() as i64).map(qi).collect::<Vec<_>>());
    let values: Vec<_> = cert.tuple.iter().map(|t| target.mul_vec(t)).collect();
    assert_eq!(solve_from_tuple(&d, &cert.tuple, &values), Some(target));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn extending_a_certified_tuple_keeps_it_certified(seed in any::<u64>(), idx in 0usize..4) {
        let spec = [
            FamilySpec::new(Family::AbelianSolv, 3),
            FamilySpec::new(Family::Oscillator, 2),
            FamilySpec::sl2_module(2),
            FamilySpec::new(Family::Schrodinger, 2),
        ][idx].clone();
        let (a, d) = setup(&spec);
        let (cert, _) = find_separating_tuple(&a, &d, 1, 100, seed);
        let mut tuple = cert.unwrap().tuple;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        tuple.push(random_vector(a.dim(), &mut rng));
        prop_assert!(evaluation_injective(&d, &tuple).injective);
    }
}
