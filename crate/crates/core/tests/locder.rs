use deltader_core::dersolve::{derivation_space, OperatorSpace};
use deltader_core::forms::{compare, expected_locder_form};
use deltader_core::locder::{
    evaluation_space, local_membership, random_vector, sampled_locder_space, stratified_certify, Certification,
    SamplingPlan,
};
use deltader_core::{build, q, qi, Family, FamilySpec, LieAlgebra, Mat, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup(spec: &FamilySpec) -> (LieAlgebra, OperatorSpace) {
    let a = build(spec).unwrap();
    let d = derivation_space(&a, &q(1, 2));
    (a, d)
}

fn dims(spec: &FamilySpec) -> (usize, usize) {
    let (a, d) = setup(spec);
    let r = sampled_locder_space(&a, &d, &SamplingPlan::default_for(a.dim())).unwrap();
    assert!(r.stabilized, "{}", spec.label());
    (d.dim(), r.dim())
}

#[test]
fn reference_local_dimensions() {
    assert_eq!(dims(&FamilySpec::new(Family::S1, 5).with_beta(qi(2))).1, 10);
    assert_eq!(dims(&FamilySpec::new(Family::Oscillator, 2)).1, 12);
    assert_eq!(dims(&FamilySpec::new(Family::HeisSolv, 2)).1, 2);
    assert_eq!(dims(&FamilySpec::new(Family::AbelianSolv, 3)).1, 9);
}

#[test]
fn evaluation_at_a_torus_element() {
    let (a, d) = setup(&FamilySpec::new(Family::SN2, 5));
    let x1 = a.basis_vector(a.index_of("x_1").unwrap());
    let s = evaluation_space(&d, &x1);
    assert_eq!(s.dim(), 2);
    assert!(s.contains(&x1));
    assert!(s.contains(&a.basis_vector(a.dim() - 1)));
}

#[test]
fn candidate_contains_der_and_shrinks_monotonically() {
    for spec in [
        FamilySpec::new(Family::S2, 5),
        FamilySpec::new(Family::Tau2, 4),
        FamilySpec::new(Family::Schrodinger, 2),
        FamilySpec::sl2_module(3),
    ] {
        let (a, d) = setup(&spec);
        let r = sampled_locder_space(&a, &d, &SamplingPlan::default_for(a.dim())).unwrap();
        assert!(r.dim_history.windows(2).all(|w| w[0] >= w[1]), "{}", spec.label());
        for b in d.basis() {
            assert!(r.space.contains(b), "{}", spec.label());
        }
        assert!(r.dim() >= d.dim());
    }
}

#[test]
fn candidate_operators_are_local_at_fresh_points() {
    let spec = FamilySpec::new(Family::S1, 5).with_beta(qi(2));
    let (a, d) = setup(&spec);
    let r = sampled_locder_space(&a, &d, &SamplingPlan::default_for(a.dim())).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for b in r.space.basis() {
        for _ in 0..10 {
            let x = random_vector(a.dim(), &mut rng);
            let dx = local_membership(&d, b, &x).expect("local at a fresh point");
            assert_eq!(dx.mul_vec(&x), b.mul_vec(&x));
        }
    }
}

#[test]
fn certification_finds_a_counterexample_off_the_candidate() {
    let spec = FamilySpec::new(Family::S1, 5).with_beta(qi(2));
    let (a, d) = setup(&spec);
    let plan = SamplingPlan::default_for(a.dim());
    let e1 = a.index_of("e_1").unwrap();
    let mut delta = Mat::zeros(a.dim(), a.dim());
    delta[(e1, e1)] = qi(1);
    match stratified_certify(&a, &d, &delta, &plan).unwrap() {
        Certification::Counterexample { x, .. } => assert!(local_membership(&d, &delta, &x).is_none()),
        Certification::Pass { .. } => panic!("Δ(e_1) = e_1 alone is not local"),
    }
    let mut diag = Mat::zeros(a.dim(), a.dim());
    for i in 2..=5 {
        let e = a.index_of(&format!("e_{i}")).unwrap();
        diag[(e, e)] = qi(1);
    }
    assert!(!d.contains(&diag));
    assert!(stratified_certify(&a, &d, &diag, &plan).unwrap().passed());
}

#[test]
fn tau1_parameter_grid() {
    for n in 3..=4usize {
        for k in -16..=16i64 {
            let alpha = q(k, 2);
            let expected = if alpha == &q(5, 2) - &qi(n as i64) {
                (2 * n + 1, 6 * n - 3)
            } else if alpha == qi(2 * n as i64 - 3) {
                (4, 5)
            } else {
                (3, 4)
            };
            let spec = FamilySpec::new(Family::Tau1, n).with_beta(alpha.clone());
            assert_eq!(dims(&spec), expected, "n = {n}, alpha = {alpha}");
        }
    }
}

#[test]
fn printed_local_forms_of_the_s_family_are_too_large() {
    // the computed local space couples the coefficient of e_1 with that of x
    let spec = FamilySpec::new(Family::S2, 5);
    let (a, d) = setup(&spec);
    let r = sampled_locder_space(&a, &d, &SamplingPlan::default_for(a.dim())).unwrap();
    let printed = expected_locder_form(&spec).unwrap();
    let cmp = compare(printed.primary(), &r.space);
    assert!(!cmp.agrees());
    let plan = SamplingPlan::default_for(a.dim());
    let witness = printed
        .primary()
        .space(&q(1, 2))
        .basis()
        .iter()
        .find(|m| !r.space.contains(m))
        .cloned()
        .expect("a printed operator outside the computed space");
    assert!(!stratified_certify(&a, &d, &witness, &plan).unwrap().passed());
}

#[test]
fn zero_vector_has_trivial_evaluation() {
    let (a, d) = setup(&FamilySpec::new(Family::Tau3, 4));
    let zero = vec![Rational::zero(); a.dim()];
    assert_eq!(evaluation_space(&d, &zero).dim(), 0);
}
