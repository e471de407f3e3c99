//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! A criterion may only FAIL with exactly its documented failure set: rows
//! where the computed value provably differs from the published one. Any
//! other outcome makes the run exit nonzero.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use clap::Parser;
use deltader_cli::reports::{exit, locder_report, Loaded};
use deltader_cli::table::{compute_rows, table_specs, Selector};
use deltader_cli::{run, Cli};
use deltader_core::dersolve::{commutator_degrades, derivation_space, is_delta_derivation, is_trivial_space, OperatorSpace};
use deltader_core::forms::{compare, expected_locder_form};
use deltader_core::locder::{
    all_pencil_points, local_membership, random_nonzero, random_vector, sampled_locder_space, stratified_certify,
    SamplingPlan, DEFAULT_SEED,
};
use deltader_core::twolocal::{certify_with_defaults, evaluation_injective, TwoLocalStatus};
use deltader_core::{build, q, Family, FamilySpec, LieAlgebra, Mat, Rational};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TIME_LIMIT: Duration = Duration::from_secs(60);

/// Short key used in failure sets, e.g. `s1(2)@4`, `s3@7`.
fn key(spec: &FamilySpec) -> String {
    let s = spec.resolved();
    let size = if s.family == Family::Sl2Module { s.m.unwrap_or(0) } else { s.n };
    match (&s.family, &s.beta) {
        (Family::S1, Some(b)) => format!("s1({b})@{size}"),
        _ => format!("{}@{size}", s.family.id()),
    }
}

fn keys(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|n| format!("{prefix}@{n}")).collect()
}

/// Rows where the computed LocDer (and for s1(2) at n = 4 also Der) differs
/// from the published dimension table.
fn documented_table_failures() -> BTreeSet<String> {
    let mut out = BTreeSet::from(["s1(2)@4".to_string()]);
    for p in ["s1(5/3)", "s2", "s3", "s4"] {
        out.extend(keys(p, 4..=8));
    }
    out
}

/// The pair `(x, e_1)` cannot separate s1(2) at n = 4: the extra
/// ½-derivation `e_2 ↦ e_4` vanishes on both. Another tuple is certified.
fn documented_two_local_failures() -> BTreeSet<String> {
    BTreeSet::from(["s1(2)@4 suggested tuple".to_string()])
}

/// Families whose printed local form is strictly larger than the computed
/// space (the `d` coefficient is tied to `b_1`), plus s1(2) at n = 4.
fn documented_form_failures() -> BTreeSet<String> {
    documented_table_failures()
}

struct Line {
    passed: bool,
    detail: String,
    undocumented: bool,
}

impl Line {
    fn check(failures: BTreeSet<String>, documented: &BTreeSet<String>, extra: String) -> Line {
        let passed = failures.is_empty();
        let undocumented = &failures != documented;
        let detail = if passed {
            extra
        } else {
            let list: Vec<&str> = failures.iter().map(String::as_str).collect();
            format!(
                "{extra}; failing: {}{}",
                list.join(", "),
                if undocumented { " (DIFFERS FROM DOCUMENTED SET)" } else { " (documented)" }
            )
        };
        Line {
            passed,
            detail,
            undocumented,
        }
    }

    fn strict(failures: Vec<String>, extra: String) -> Line {
        Line::check(failures.into_iter().collect(), &BTreeSet::new(), extra)
    }
}

fn filiform_specs(seed: u64) -> Vec<FamilySpec> {
    let selectors = [
        Selector::S1(q(2, 1)),
        Selector::S1Generic,
        Selector::Plain(Family::S2),
        Selector::Plain(Family::S3),
        Selector::Plain(Family::S4),
        Selector::Plain(Family::SN2),
        Selector::Plain(Family::Tau1),
        Selector::Plain(Family::Tau2),
        Selector::Plain(Family::Tau3),
        Selector::Plain(Family::Tau2N2),
    ];
    table_specs(&selectors, Some(4..=8), None, seed).expect("valid table")
}

fn other_specs() -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push(FamilySpec::new(Family::HeisSolv, n));
        out.push(FamilySpec::new(Family::Oscillator, n).resolved());
        out.push(FamilySpec::new(Family::Schrodinger, n));
    }
    for n in 2..=4 {
        out.push(FamilySpec::new(Family::AbelianSolv, n));
    }
    for m in 2..=5 {
        out.push(FamilySpec::sl2_module(m));
    }
    out
}

/// Everything the catalog builds at desk scale.
fn catalog_specs(seed: u64) -> Vec<FamilySpec> {
    let mut out = filiform_specs(seed);
    out.extend(other_specs());
    for n in 3..=8 {
        out.push(FamilySpec::new(Family::NFiliform, n));
    }
    for n in 2..=5 {
        out.push(FamilySpec::new(Family::QFiliform, n));
    }
    out
}

fn setup(spec: &FamilySpec) -> (LieAlgebra, OperatorSpace) {
    let a = build(spec).expect("catalog builds");
    let d = derivation_space(&a, &q(1, 2));
    (a, d)
}

fn criterion_table(specs: &[FamilySpec], documented: &BTreeSet<String>, require_note: bool) -> Line {
    let start = Instant::now();
    let rows = compute_rows(specs, DEFAULT_SEED).expect("rows compute");
    let elapsed = start.elapsed();
    let mut failures: BTreeSet<String> = specs
        .iter()
        .zip(&rows)
        .filter(|(_, r)| !r.matches)
        .map(|(s, _)| key(s))
        .collect();
    let mut extra = format!("{} rows in {:.1}s", rows.len(), elapsed.as_secs_f64());
    if elapsed > TIME_LIMIT {
        failures.insert(format!("runtime {:.1}s", elapsed.as_secs_f64()));
    }
    for (s, r) in specs.iter().zip(&rows) {
        if !r.stabilized {
            failures.insert(format!("{} not stabilized", key(s)));
        }
    }
    if require_note {
        let tau_ok = specs.iter().zip(&rows).filter(|(s, _)| s.family == Family::Tau2N2).all(|(_, r)| {
            r.locder_dim_computed == 2 && r.form_notes.iter().any(|n| n.code == "tau_2n2_local_display")
        });
        if !tau_ok {
            failures.insert("tau-2n2 discrepancy note".into());
        }
        extra.push_str("; tau-2n2 discrepancy note present");
    }
    Line::check(failures, documented, extra)
}

fn criterion_trivial(specs: &[FamilySpec]) -> Line {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut trivial = Vec::new();
    for s in specs {
        let (a, d) = setup(s);
        if !is_trivial_space(&d) {
            continue;
        }
        trivial.push(key(s));
        let res = sampled_locder_space(&a, &d, &SamplingPlan::default_for(a.dim())).expect("plan valid");
        let scalars = OperatorSpace::scalars(a.dim(), q(1, 2));
        if !(res.stabilized && res.space.same_span(&scalars)) {
            failures.push(format!("{} LocDer", key(s)));
        }
        if !evaluation_injective(&d, &[random_vector(a.dim(), &mut rng)]).injective {
            failures.push(format!("{} single vector", key(s)));
        }
    }
    for must in ["sl2module@3", "sl2module@4", "sl2module@5", "schrodinger@1", "schrodinger@3"] {
        if !trivial.iter().any(|k| k == must) {
            failures.push(format!("{must} not trivial"));
        }
    }
    Line::strict(failures, format!("{} trivial instances: {}", trivial.len(), trivial.join(" ")))
}

fn expects_two_local_rigidity(s: &FamilySpec) -> bool {
    match s.family {
        Family::Sl2Module => s.m == Some(2),
        Family::Schrodinger => s.n == 2,
        Family::NFiliform | Family::QFiliform => false,
        _ => true,
    }
}

fn named(a: &LieAlgebra, labels: &[&str]) -> Vec<Vec<Rational>> {
    labels
        .iter()
        .map(|l| a.basis_vector(a.index_of(l).expect("basis name")))
        .collect()
}

fn criterion_two_local(specs: &[FamilySpec], documented: &BTreeSet<String>) -> Line {
    let mut failures = Vec::new();
    let mut count = 0;
    for s in specs.iter().filter(|s| expects_two_local_rigidity(s)) {
        count += 1;
        let (a, d) = setup(s);
        let r = certify_with_defaults(&a, &d);
        let ok = r.status == TwoLocalStatus::Pass && r.certificate.as_ref().is_some_and(|c| c.verify(&d));
        if !ok {
            failures.push(key(s));
        }
        // the classical separating elements
        let suggested: Option<Vec<Vec<Rational>>> = match s.family {
            Family::S1 if s.resolved().beta == Some(q(2, 1)) => Some(named(&a, &["x", "e_1"])),
            Family::AbelianSolv => {
                let mut sum = vec![Rational::zero(); a.dim()];
                for (c, name) in sum.iter_mut().zip(a.basis_names()) {
                    if name.starts_with("x_") {
                        *c = Rational::one();
                    }
                }
                Some(vec![sum])
            }
            Family::Oscillator => Some(named(&a, &["e_-1"])),
            Family::Sl2Module => Some(named(&a, &["e"])),
            _ => None,
        };
        if let Some(t) = suggested {
            if !evaluation_injective(&d, &t).injective {
                failures.push(format!("{} suggested tuple", key(s)));
            }
        }
    }
    Line::check(
        failures.into_iter().collect(),
        documented,
        format!("{count} instances certified; (x,e_1), Σx_i, e_-1, e checked"),
    )
}

fn witness_json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut argv = vec!["deltader", "--format", "json", "witness"];
    argv.extend_from_slice(args);
    let out = run(&Cli::parse_from(argv));
    let v = if out.error {
        serde_json::Value::Null
    } else {
        serde_json::from_str(&out.text).expect("json report")
    };
    (out.code, v)
}

fn spec_from_args(args: &[&str]) -> FamilySpec {
    let mut argv = vec!["deltader", "witness"];
    argv.extend_from_slice(args);
    match Cli::parse_from(argv).command {
        deltader_cli::app::Command::Witness { family, .. } => family.spec().expect("valid").resolved(),
        _ => unreachable!(),
    }
}

fn criterion_witness() -> Line {
    let mut failures = Vec::new();
    let producing: &[&[&str]] = &[
        &["--family", "s1", "--n", "5", "--beta", "2"],
        &["--family", "s1", "--n", "6"],
        &["--family", "s2", "--n", "5"],
        &["--family", "s3", "--n", "5"],
        &["--family", "s4", "--n", "6"],
        &["--family", "tau1", "--n", "3"],
        &["--family", "tau2", "--n", "4"],
        &["--family", "abelian-solv", "--n", "2"],
        &["--family", "abelian-solv", "--n", "3"],
        &["--family", "oscillator", "--n", "2"],
    ];
    for args in producing {
        let label = args.join(" ");
        let (code, v) = witness_json(args);
        if code != exit::OK || v["outcome"] != "witness" {
            failures.push(label);
            continue;
        }
        let delta: Mat = serde_json::from_value(v["delta"].clone()).expect("matrix");
        let (a, d) = setup(&spec_from_args(args));
        let plan = SamplingPlan::default_for(a.dim()).with_seed(DEFAULT_SEED);
        let certified = stratified_certify(&a, &d, &delta, &plan).expect("plan valid").passed();
        if !certified || d.contains(&delta) {
            failures.push(format!("{label} re-check"));
        }
    }
    let refusing: &[&[&str]] = &[
        &["--family", "s-n2", "--n", "5"],
        &["--family", "tau3", "--n", "4"],
        &["--family", "tau-2n2", "--n", "3"],
        &["--family", "heis-solv", "--n", "2"],
    ];
    for args in refusing {
        let (code, v) = witness_json(args);
        if code != exit::NEGATIVE || v["outcome"] != "refused" {
            failures.push(format!("{} not refused", args.join(" ")));
        }
    }
    Line::strict(
        failures,
        format!("{} witnesses certified, {} refusals", producing.len(), refusing.len()),
    )
}

fn runner() -> TestRunner {
    let seed = [7u8; 32];
    TestRunner::new_with_rng(
        Config {
            cases: 100,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &seed),
    )
}

fn criterion_algebraic(specs: &[FamilySpec]) -> Line {
    use proptest::prelude::*;
    let mut failures = Vec::new();
    let algebras: Vec<LieAlgebra> = specs.iter().map(|s| build(s).expect("builds")).collect();

    let bracket = runner().run(&(0..algebras.len(), any::<u64>()), |(i, seed)| {
        let a = &algebras[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_vector(a.dim(), &mut rng);
        let v = random_vector(a.dim(), &mut rng);
        let w = random_vector(a.dim(), &mut rng);
        let (s, t) = (random_nonzero(&mut rng), random_nonzero(&mut rng));
        let uv = a.bracket(&u, &v).unwrap();
        let vu = a.bracket(&v, &u).unwrap();
        prop_assert!(uv.iter().zip(&vu).all(|(x, y)| (x + y).is_zero()));
        let comb: Vec<Rational> = u.iter().zip(&v).map(|(x, y)| &(&s * x) + &(&t * y)).collect();
        let lhs = a.bracket(&comb, &w).unwrap();
        let (uw, vw) = (a.bracket(&u, &w).unwrap(), a.bracket(&v, &w).unwrap());
        for ((l, x), y) in lhs.iter().zip(&uw).zip(&vw) {
            prop_assert!((l - &(&(&s * x) + &(&t * y))).is_zero());
        }
        Ok(())
    });
    if bracket.is_err() {
        failures.push("bracket antisymmetry/bilinearity".to_string());
    }

    let mut identity_fail = Vec::new();
    let mut commutator_fail = Vec::new();
    let mut membership_fail = Vec::new();
    for (s, a) in specs.iter().zip(&algebras) {
        let d = derivation_space(a, &q(1, 2));
        if !is_delta_derivation(a, &Mat::identity(a.dim()), &q(1, 2)) || !d.contains(&Mat::identity(a.dim())) {
            identity_fail.push(key(s));
        }
        if !commutator_degrades(a, &d, &d).holds() {
            commutator_fail.push(key(s));
        }
        let plan = SamplingPlan::default_for(a.dim());
        let mut points: Vec<Vec<Rational>> = plan.all_points(a.dim()).into_iter().map(|(_, x)| x).collect();
        points.extend(all_pencil_points(&d, plan.seed).points);
        let res = sampled_locder_space(a, &d, &plan).expect("plan valid");
        let ok = d.is_subspace_of(&res.space)
            && points
                .iter()
                .all(|x| d.basis().iter().all(|b| local_membership(&d, b, x).is_some()));
        if !ok {
            membership_fail.push(key(s));
        }
    }
    for (name, list) in [
        ("identity", identity_fail),
        ("1/4 commutator", commutator_fail),
        ("Der in LocDer", membership_fail),
    ] {
        if !list.is_empty() {
            failures.push(format!("{name}: {}", list.join(" ")));
        }
    }
    Line::strict(
        failures,
        format!("100 bracket cases; identity, commutator, membership on {} algebras", specs.len()),
    )
}

fn criterion_forms(specs: &[FamilySpec], documented: &BTreeSet<String>) -> Line {
    let mut failures = BTreeSet::new();
    let mut compared = 0;
    for s in specs {
        let Ok(printed) = expected_locder_form(s) else { continue };
        let l = Loaded::from_spec(s.clone()).expect("builds");
        if s.family == Family::Tau2N2 {
            let r = locder_report(&l, &q(1, 2), &SamplingPlan::default_for(l.algebra.dim())).expect("plan valid");
            let json = serde_json::to_value(&r).expect("serializes");
            let noted = json["form_notes"]
                .as_array()
                .is_some_and(|a| a.iter().any(|n| n["code"] == "tau_2n2_local_display"));
            if !noted || json["locder_dim"] != 2 {
                failures.insert(format!("{} note", key(s)));
            }
            continue;
        }
        compared += 1;
        let (a, d) = setup(s);
        let res = sampled_locder_space(&a, &d, &SamplingPlan::default_for(a.dim())).expect("plan valid");
        if !compare(printed.primary(), &res.space).agrees() {
            failures.insert(key(s));
        }
    }
    Line::check(failures, documented, format!("{compared} printed forms compared"))
}

fn main() {
    let seed = DEFAULT_SEED;
    let filiform = filiform_specs(seed);
    let others = other_specs();
    let catalog = catalog_specs(seed);
    let mut proven: Vec<FamilySpec> = filiform.clone();
    proven.extend(others.iter().cloned());

    let table_doc = documented_table_failures();
    let forms_doc = documented_form_failures();
    let lines = [
        ("1 dimension table (filiform extensions)", criterion_table(&filiform, &table_doc, true)),
        ("2 dimension table (other families)", criterion_table(&others, &BTreeSet::new(), false)),
        ("3 trivial-space instances", criterion_trivial(&catalog)),
        ("4 2-local rigidity", criterion_two_local(&proven, &documented_two_local_failures())),
        ("5 witnesses", criterion_witness()),
        ("6 algebraic properties", criterion_algebraic(&catalog)),
        ("7 printed local forms", criterion_forms(&proven, &forms_doc)),
    ];
    let mut bad = Vec::new();
    for (name, line) in &lines {
        println!(
            "criterion {name}: {} ({})",
            if line.passed { "PASS" } else { "FAIL" },
            line.detail
        );
        if line.undocumented {
            bad.push(*name);
        }
    }
    if !bad.is_empty() {
        eprintln!("undocumented outcome in: {}", bad.join(", "));
        std::process::exit(1);
    }
}
