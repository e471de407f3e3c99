//! Local ½-derivations that are not ½-derivations.

use deltader_core::dersolve::{derivation_space, OperatorSpace};
use deltader_core::locder::{sampled_locder_space, stratified_certify, Certification, SamplingPlan};
use deltader_core::{build, q, qi, Family, FamilySpec, LieAlgebra, Mat, Result};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub family: String,
    pub delta: Mat,
    pub certification: Certification,
    /// Re-checked membership of `delta` in `Der_½`; always false.
    pub der_member: bool,
    pub der_dim: usize,
    pub locder_dim: usize,
    /// `preferred` for the hand-picked operator, `locder_basis` otherwise.
    pub source: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct Refusal {
    pub family: String,
    pub der_dim: usize,
    pub locder_dim: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Witness(Witness),
    Refused(Refusal),
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            WitnessOutcome::Witness(w) => Some(w),
            WitnessOutcome::Refused(_) => None,
        }
    }
}

/// Simple operators tried before the computed basis.
fn preferred(spec: &FamilySpec, alg: &LieAlgebra) -> Vec<Mat> {
    let d = alg.dim();
    let mut out = Vec::new();
    match spec.family {
        Family::S1 if spec.resolved().beta == Some(q(2, 1)) => {
            // Δ(e_i) = e_i for i ≥ 2, Δ(x) = Δ(e_1) = 0
            let mut m = Mat::zeros(d, d);
            for i in 2..d {
                m[(i, i)] = qi(1);
            }
            out.push(m);
        }
        Family::AbelianSolv => {
            let mut m = Mat::zeros(d, d);
            m[(0, 0)] = qi(1);
            out.push(m);
        }
        _ => {}
    }
    out
}

fn support(m: &Mat) -> usize {
    m.as_flat().iter().filter(|a| !a.is_zero()).count()
}

/// Picks an operator of the sampled local space outside `Der_½` and
/// certifies it with the plan. Refuses when the sampled space equals `Der_½`.
pub fn find_witness(spec: &FamilySpec, plan: Option<SamplingPlan>) -> Result<WitnessOutcome> {
    let alg = build(spec)?;
    let der = derivation_space(&alg, &q(1, 2));
    let plan = plan.unwrap_or_else(|| SamplingPlan::default_for(alg.dim()));
    let loc = sampled_locder_space(&alg, &der, &plan)?;
    let family = spec.label();
    if !loc.strictly_larger_than_der() {
        return Ok(WitnessOutcome::Refused(Refusal {
            family,
            der_dim: der.dim(),
            locder_dim: loc.dim(),
            reason: "every sampled local 1/2-derivation is a 1/2-derivation".into(),
        }));
    }
    let mut basis: Vec<Mat> = loc.space.basis().to_vec();
    basis.sort_by_key(support);
    let candidates = preferred(spec, &alg)
        .into_iter()
        .filter(|m| loc.space.contains(m))
        .map(|m| (m, "preferred"))
        .chain(basis.into_iter().map(|m| (m, "locder_basis")));
    for (delta, source) in candidates {
        if der.contains(&delta) {
            continue;
        }
        let cert = stratified_certify(&alg, &der, &delta, &plan)?;
        if cert.passed() {
            return Ok(WitnessOutcome::Witness(Witness {
                family,
                der_member: der.contains(&delta),
                delta,
                certification: cert,
                der_dim: der.dim(),
                locder_dim: loc.dim(),
                source,
            }));
        }
    }
    Ok(WitnessOutcome::Refused(Refusal {
        family,
        der_dim: der.dim(),
        locder_dim: loc.dim(),
        reason: "no candidate outside Der_1/2 passed stratified certification".into(),
    }))
}

/// Re-check of a witness from scratch.
pub fn verify_witness(spec: &FamilySpec, w: &Witness, plan: &SamplingPlan) -> Result<bool> {
    let alg = build(spec)?;
    let der: OperatorSpace = derivation_space(&alg, &q(1, 2));
    Ok(!der.contains(&w.delta) && stratified_certify(&alg, &der, &w.delta, plan)?.passed())
}
