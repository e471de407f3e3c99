//! Report types for each command and the functions computing them.

use deltader_core::dersolve::{derivation_space, is_trivial_space, OperatorSpace};
use deltader_core::forms::{compare, expected_locder_form, printed_der_form, FormComparison, FormNote};
use deltader_core::liealg::AlgebraFile;
use deltader_core::locder::{sampled_locder_space, LocalSpaceResult, SamplingPlan, StratumCheck};
use deltader_core::twolocal::{certify_two_local_rigidity, TwoLocalReport, TwoLocalStatus};
use deltader_core::{build, Error, FamilySpec, LieAlgebra, Mat, Rational, Result};
use serde::Serialize;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID_INPUT: i32 = 1;
    pub const JACOBI: i32 = 2;
    pub const INCONCLUSIVE: i32 = 3;
    /// Table mismatch or witness refusal.
    pub const NEGATIVE: i32 = 4;
}

/// An algebra together with the family it came from, if any.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub algebra: LieAlgebra,
    pub spec: Option<FamilySpec>,
}

impl Loaded {
    pub fn from_spec(spec: FamilySpec) -> Result<Loaded> {
        let spec = spec.resolved();
        Ok(Loaded {
            algebra: build(&spec)?,
            spec: Some(spec),
        })
    }

    /// Parses and structurally validates a file. Jacobi is not checked here.
    pub fn from_json_unchecked(text: &str) -> Result<Loaded> {
        Ok(Loaded {
            algebra: AlgebraFile::parse(text)?.into_algebra()?,
            spec: None,
        })
    }

    pub fn label(&self) -> String {
        self.spec
            .as_ref()
            .map_or_else(|| self.algebra.name().to_string(), FamilySpec::label)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobiReport {
    pub algebra: String,
    pub dim: usize,
    pub holds: bool,
    pub violation: Option<ViolationInfo>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationInfo {
    pub triple: [usize; 3],
    pub names: [String; 3],
    pub residual: Vec<Rational>,
}

pub fn jacobi_report(l: &Loaded) -> JacobiReport {
    let a = &l.algebra;
    let violation = a.check_jacobi().err().map(|v| {
        let name = |i: usize| a.basis_names()[i].clone();
        ViolationInfo {
            triple: [v.i, v.j, v.k],
            names: [name(v.i), name(v.j), name(v.k)],
            residual: v.residual,
        }
    });
    JacobiReport {
        algebra: l.label(),
        dim: a.dim(),
        holds: violation.is_none(),
        violation,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DerReport {
    pub algebra: String,
    pub delta: Rational,
    pub dim: usize,
    pub trivial: bool,
    pub basis: Vec<Mat>,
    /// Printed forms against the computed space, one per reading.
    pub printed_form: Vec<(String, FormComparison)>,
    pub form_notes: Vec<FormNote>,
}

pub fn der_report(l: &Loaded, delta: &Rational) -> DerReport {
    let space = derivation_space(&l.algebra, delta);
    let (printed_form, form_notes) = match (&l.spec, delta == &deltader_core::q(1, 2)) {
        (Some(spec), true) => match printed_der_form(spec) {
            Ok(p) => (
                p.encodings
                    .iter()
                    .map(|(name, f)| (name.clone(), compare(f, &space)))
                    .collect(),
                p.notes,
            ),
            Err(_) => (Vec::new(), Vec::new()),
        },
        _ => (Vec::new(), Vec::new()),
    };
    DerReport {
        algebra: l.label(),
        delta: delta.clone(),
        dim: space.dim(),
        trivial: is_trivial_space(&space),
        basis: space.basis().to_vec(),
        printed_form,
        form_notes,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocderReport {
    pub family: String,
    pub delta: Rational,
    pub der_dim: usize,
    pub locder_dim: usize,
    pub stabilized: bool,
    pub samples: usize,
    pub pencil_points: usize,
    pub skipped_pencils: Vec<(usize, usize)>,
    pub dim_history: Vec<usize>,
    pub strata: Vec<StratumCheck>,
    pub basis: Vec<Mat>,
    /// An element of the sampled space outside `Der_δ`, when there is one.
    pub witness: Option<Mat>,
    pub printed_form: Vec<(String, FormComparison)>,
    pub form_notes: Vec<FormNote>,
}

pub fn locder_report(l: &Loaded, delta: &Rational, plan: &SamplingPlan) -> Result<LocderReport> {
    let der = derivation_space(&l.algebra, delta);
    let res = sampled_locder_space(&l.algebra, &der, plan)?;
    Ok(locder_from_result(l, &der, res))
}

fn locder_from_result(l: &Loaded, der: &OperatorSpace, res: LocalSpaceResult) -> LocderReport {
    let witness = res
        .space
        .basis()
        .iter()
        .find(|m| !der.contains(m))
        .cloned();
    let half = deltader_core::q(1, 2);
    let (printed_form, form_notes) = match (&l.spec, der.delta == half) {
        (Some(spec), true) => match expected_locder_form(spec) {
            Ok(p) => (
                p.encodings
                    .iter()
                    .map(|(name, f)| (name.clone(), compare(f, &res.space)))
                    .collect(),
                p.notes,
            ),
            Err(_) => (Vec::new(), Vec::new()),
        },
        _ => (Vec::new(), Vec::new()),
    };
    LocderReport {
        family: l.label(),
        delta: der.delta.clone(),
        der_dim: der.dim(),
        locder_dim: res.dim(),
        stabilized: res.stabilized,
        samples: res.samples_used,
        pencil_points: res.pencil_points,
        skipped_pencils: res.skipped_pencils,
        dim_history: res.dim_history,
        strata: res.per_stratum_certified,
        basis: res.space.basis().to_vec(),
        witness,
        printed_form,
        form_notes,
    }
}

/// 2-local report in the shape `{algebra, tuple, der_dim, status, ..}`.
#[derive(Clone, Debug, Serialize)]
pub struct TwoLocalSummary {
    pub algebra: String,
    pub tuple: Vec<Vec<Rational>>,
    pub tuple_labels: Vec<String>,
    pub der_dim: usize,
    pub status: TwoLocalStatus,
    pub detail: TwoLocalReport,
}

pub fn twolocal_report(l: &Loaded, budget: usize, seed: u64) -> TwoLocalSummary {
    let der = derivation_space(&l.algebra, &deltader_core::q(1, 2));
    let mut detail = certify_two_local_rigidity(&l.algebra, &der, budget, seed);
    detail.algebra = l.label();
    let (tuple, tuple_labels) = detail
        .certificate
        .as_ref()
        .map(|c| (c.tuple.clone(), c.labels.clone()))
        .unwrap_or_default();
    TwoLocalSummary {
        algebra: l.label(),
        tuple,
        tuple_labels,
        der_dim: der.dim(),
        status: detail.status,
        detail,
    }
}

/// Sections in the order Jacobi, Der, LocDer, 2-local. Later sections are
/// absent when the Jacobi check fails.
#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub algebra: String,
    pub seed: u64,
    pub jacobi: JacobiReport,
    pub der: Option<DerReport>,
    pub locder: Option<LocderReport>,
    pub twolocal: Option<TwoLocalSummary>,
    pub exit_code: i32,
}

pub fn analyze(l: &Loaded, delta: &Rational, plan: &SamplingPlan, budget: usize) -> Result<AnalyzeReport> {
    let jacobi = jacobi_report(l);
    let mut report = AnalyzeReport {
        algebra: l.label(),
        seed: plan.seed,
        jacobi,
        der: None,
        locder: None,
        twolocal: None,
        exit_code: exit::OK,
    };
    if !report.jacobi.holds {
        report.exit_code = exit::JACOBI;
        return Ok(report);
    }
    let der = derivation_space(&l.algebra, delta);
    report.der = Some(der_report(l, delta));
    let res = sampled_locder_space(&l.algebra, &der, plan)?;
    let loc = locder_from_result(l, &der, res);
    let two = twolocal_report(l, budget, plan.seed);
    if !loc.stabilized || two.status != TwoLocalStatus::Pass {
        report.exit_code = exit::INCONCLUSIVE;
    }
    report.locder = Some(loc);
    report.twolocal = Some(two);
    Ok(report)
}

/// Exit code for an error raised while handling input.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Jacobi { .. } => exit::JACOBI,
        _ => exit::INVALID_INPUT,
    }
}
