//! Dimension table: expected `(dim Der_½, dim LocDer_½)` per family and the
//! computed values next to them.

use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use deltader_core::catalog::MAX_PARAMETER;
use deltader_core::dersolve::derivation_space;
use deltader_core::forms::{expected_locder_form, FormNote};
use deltader_core::locder::{random_nonzero, sampled_locder_space, SamplingPlan};
use deltader_core::twolocal::{certify_two_local_rigidity, TwoLocalStatus, DEFAULT_BUDGET};
use deltader_core::{build, q, Error, Family, FamilySpec, Rational, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// A family as it appears in the table. `s1` carries its own `β` so the
/// special value `β = 2` and a generic value can be listed side by side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    /// `s1` at the given `β` (2 unless overridden).
    S1(Rational),
    /// `s1-generic`: `s1` at `β = 5/3`.
    S1Generic,
    Plain(Family),
}

impl Selector {
    pub fn parse(s: &str, beta: Option<&Rational>) -> Result<Selector> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s1" => Ok(Selector::S1(beta.cloned().unwrap_or_else(|| q(2, 1)))),
            "s1-generic" => Ok(Selector::S1Generic),
            other => {
                let fam: Family = other.parse()?;
                if expected_dims_family(fam).is_none() {
                    return Err(Error::Parameter(format!(
                        "family `{other}` has no dimension-table row"
                    )));
                }
                Ok(Selector::Plain(fam))
            }
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Selector::S1(_) | Selector::S1Generic => Family::S1,
            Selector::Plain(f) => *f,
        }
    }

    /// Size range used when the caller gives none.
    pub fn default_range(&self) -> RangeInclusive<usize> {
        match self.family() {
            Family::HeisSolv | Family::Oscillator | Family::Schrodinger => 1..=3,
            Family::AbelianSolv => 2..=4,
            Family::Sl2Module => 2..=5,
            _ => 4..=8,
        }
    }
}

/// Every selector of the full table, in display order.
pub fn default_selectors() -> Vec<Selector> {
    let mut out = vec![Selector::S1(q(2, 1)), Selector::S1Generic];
    out.extend(
        [
            Family::S2,
            Family::S3,
            Family::S4,
            Family::SN2,
            Family::Tau1,
            Family::Tau2,
            Family::Tau3,
            Family::Tau2N2,
            Family::HeisSolv,
            Family::AbelianSolv,
            Family::Oscillator,
            Family::Sl2Module,
            Family::Schrodinger,
        ]
        .map(Selector::Plain),
    );
    out
}

fn expected_dims_family(f: Family) -> Option<()> {
    match f {
        Family::NFiliform | Family::QFiliform => None,
        _ => Some(()),
    }
}

/// Table values `(dim Der_½, dim LocDer_½)` for a family instance.
pub fn expected_dims(spec: &FamilySpec) -> Option<(usize, usize)> {
    let n = spec.n;
    let two = q(2, 1);
    Some(match spec.family {
        Family::S1 if spec.resolved().beta.as_ref() == Some(&two) => (n + 1, 2 * n),
        Family::S1 | Family::S2 | Family::S4 => (n, 2 * n - 1),
        Family::S3 => (n, 2 * n - 2),
        Family::SN2 | Family::Tau2N2 | Family::HeisSolv => (2, 2),
        Family::Tau1 | Family::Tau2 => (3, 4),
        Family::Tau3 => (3, 3),
        Family::AbelianSolv => (2 * n, 3 * n),
        Family::Oscillator => (2 * n + 2, 4 * n + 4),
        Family::Sl2Module if spec.m == Some(2) => (2, 2),
        Family::Schrodinger if n == 2 => (2, 2),
        Family::Sl2Module | Family::Schrodinger => (1, 1),
        Family::NFiliform | Family::QFiliform => return None,
    })
}

/// Seeded random parameter list for `s4` / `τ³`; other families unchanged.
pub fn with_random_alphas(spec: FamilySpec, seed: u64) -> FamilySpec {
    let k = spec.alpha_count();
    if k == 0 || spec.alphas.is_some() {
        return spec;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((spec.n as u64) << 32));
    let alphas = (0..k).map(|_| random_nonzero(&mut rng)).collect();
    spec.with_alphas(alphas)
}

/// Family instances of one table run.
pub fn table_specs(
    selectors: &[Selector],
    n_range: Option<RangeInclusive<usize>>,
    m_range: Option<RangeInclusive<usize>>,
    seed: u64,
) -> Result<Vec<FamilySpec>> {
    let mut out = Vec::new();
    for sel in selectors {
        let range = match sel.family() {
            Family::Sl2Module => m_range.clone(),
            _ => n_range.clone(),
        }
        .unwrap_or_else(|| sel.default_range());
        if *range.end() > MAX_PARAMETER {
            return Err(Error::Parameter(format!(
                "table sizes must be <= {MAX_PARAMETER}, got {}",
                range.end()
            )));
        }
        for k in range {
            let spec = match sel {
                Selector::S1(beta) => FamilySpec::new(Family::S1, k).with_beta(beta.clone()),
                Selector::S1Generic => FamilySpec::new(Family::S1, k).with_beta(q(5, 3)),
                Selector::Plain(Family::Sl2Module) => FamilySpec::sl2_module(k),
                Selector::Plain(f) => with_random_alphas(FamilySpec::new(*f, k), seed),
            };
            spec.validate()?;
            out.push(spec.resolved());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub family: String,
    pub params: FamilySpec,
    pub der_dim_expected: usize,
    pub der_dim_computed: usize,
    pub locder_dim_expected: usize,
    pub locder_dim_computed: usize,
    #[serde(rename = "match")]
    pub matches: bool,
    pub stabilized: bool,
    pub twolocal_status: TwoLocalStatus,
    /// Remarks on the printed local form of this family.
    pub form_notes: Vec<FormNote>,
}

/// Computes one row with the default sampling plan.
pub fn compute_row(spec: &FamilySpec, seed: u64) -> Result<TableRow> {
    let (der_e, loc_e) = expected_dims(spec).ok_or_else(|| {
        Error::Unsupported(format!("no table row for family {}", spec.family.id()))
    })?;
    let alg = build(spec)?;
    let der = derivation_space(&alg, &q(1, 2));
    let plan = SamplingPlan::default_for(alg.dim()).with_seed(seed);
    let loc = sampled_locder_space(&alg, &der, &plan)?;
    let two = certify_two_local_rigidity(&alg, &der, DEFAULT_BUDGET, seed);
    let form_notes = expected_locder_form(spec).map(|f| f.notes).unwrap_or_default();
    Ok(TableRow {
        family: spec.label(),
        params: spec.clone(),
        der_dim_expected: der_e,
        der_dim_computed: der.dim(),
        locder_dim_expected: loc_e,
        locder_dim_computed: loc.dim(),
        matches: der_e == der.dim() && loc_e == loc.dim(),
        stabilized: loc.stabilized,
        twolocal_status: two.status,
        form_notes,
    })
}

/// Computes all rows, spreading them over the available cores. Row order
/// follows `specs`.
pub fn compute_rows(specs: &[FamilySpec], seed: u64) -> Result<Vec<TableRow>> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<TableRow>>>> =
        Mutex::new((0..specs.len()).map(|_| None).collect());
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(specs.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(spec) = specs.get(i) else { break };
                let row = compute_row(spec, seed);
                slots.lock().expect("no worker panicked")[i] = Some(row);
            });
        }
    });
    slots
        .into_inner()
        .expect("no worker panicked")
        .into_iter()
        .map(|r| r.expect("every row computed"))
        .collect()
}
