//! Argument parsing and command dispatch.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use deltader_core::locder::{SamplingPlan, DEFAULT_DEPTH, DEFAULT_SEED, DEFAULT_TRIALS, DEFAULT_WINDOW};
use deltader_core::twolocal::DEFAULT_BUDGET;
use deltader_core::{build, list_families, Error, Family, FamilySpec, Rational, Result};

use crate::render::{render, AlgebraView, FamilyList, Format, Named, Table};
use crate::reports::{
    analyze, der_report, error_exit_code, exit, jacobi_report, locder_report, twolocal_report, Loaded,
};
use crate::table::{compute_rows, default_selectors, table_specs, Selector};
use crate::witness::{find_witness, verify_witness, WitnessOutcome};

#[derive(Debug, Parser)]
#[command(name = "deltader", version, about = "Exact δ-derivations and local/2-local ½-derivations of Lie algebras")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    pub format: Format,
    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the algebra families of the catalog.
    List,
    /// Build a catalog algebra and print it (JSON gives the algebra file).
    Build(FamilyArgs),
    /// Exhaustive Jacobi check.
    Jacobi(InputArgs),
    /// Basis of the δ-derivation space.
    Der {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "1/2")]
        delta: Rational,
    },
    /// Sampled space of local δ-derivations.
    Locder {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "1/2")]
        delta: Rational,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Separating-tuple certificate for 2-local ½-derivations.
    Twolocal {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Jacobi, Der, LocDer and 2-local sections in one report.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "1/2")]
        delta: Rational,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Dimension table with expected and computed values.
    Table(TableArgs),
    /// A local ½-derivation that is not a ½-derivation.
    Witness {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        plan: PlanArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Family id (see `list`).
    #[arg(long)]
    pub family: Option<Family>,
    /// Size parameter.
    #[arg(long)]
    pub n: Option<usize>,
    /// Highest weight for `sl2module`.
    #[arg(long)]
    pub m: Option<usize>,
    /// `β` for s1, `α` for tau1.
    #[arg(long)]
    pub beta: Option<Rational>,
    /// Comma-separated α list for s4 / tau3.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<Rational>>,
    /// Comma-separated λ list for the oscillator algebra.
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<Rational>>,
}

impl FamilyArgs {
    pub fn spec(&self) -> Result<FamilySpec> {
        let family = self
            .family
            .ok_or_else(|| Error::Parameter("an algebra file or --family is required".into()))?;
        let mut spec = if family == Family::Sl2Module {
            if self.n.is_some() {
                return Err(Error::Parameter("sl2module takes --m, not --n".into()));
            }
            FamilySpec {
                m: Some(self.m.ok_or_else(|| Error::Parameter("sl2module requires --m".into()))?),
                ..FamilySpec::sl2_module(0)
            }
        } else {
            let n = self
                .n
                .ok_or_else(|| Error::Parameter(format!("{family} requires --n")))?;
            FamilySpec {
                m: self.m,
                ..FamilySpec::new(family, n)
            }
        };
        spec.beta = self.beta.clone();
        spec.alphas = self.alphas.clone();
        spec.lambdas = self.lambdas.clone();
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Algebra JSON file; omit to use --family.
    pub file: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
}

impl InputArgs {
    /// Loads the algebra. Files are not Jacobi-checked here.
    pub fn load(&self) -> Result<Loaded> {
        match (&self.file, self.family.family) {
            (Some(_), Some(_)) => Err(Error::Parameter("give either a file or --family, not both".into())),
            (Some(path), None) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
                    context: path.display().to_string(),
                    message: e.to_string(),
                })?;
                Loaded::from_json_unchecked(&text)
            }
            (None, _) => Loaded::from_spec(self.family.spec()?),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PlanArgs {
    /// Sweeps (sample points per stratum).
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// Leading coordinates whose zero patterns form strata.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub strata_depth: usize,
    /// Unchanged sweeps needed to call the space stabilized.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    /// Skip the coordinate-pencil rank-drop points.
    #[arg(long)]
    pub no_pencil: bool,
}

impl PlanArgs {
    pub fn plan(&self, dim: usize, seed: u64) -> SamplingPlan {
        let p = SamplingPlan::with_depth(dim, self.strata_depth)
            .with_seed(seed)
            .with_trials(self.trials)
            .with_window(self.window);
        if self.no_pencil {
            p.without_pencil_points()
        } else {
            p
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// Comma-separated families; `s1` is s1 at β = 2 (or --beta), `s1-generic` at β = 5/3.
    #[arg(long, value_delimiter = ',')]
    pub families: Option<Vec<String>>,
    /// Size range `a:b` (or a single value) for every family except sl2module.
    #[arg(long, value_parser = parse_range)]
    pub n: Option<RangeInclusive<usize>>,
    /// Highest-weight range for sl2module.
    #[arg(long, value_parser = parse_range)]
    pub m: Option<RangeInclusive<usize>>,
    /// `β` for the `s1` rows (default 2).
    #[arg(long)]
    pub beta: Option<Rational>,
}

pub fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let (a, b) = match s.split_once(':') {
        Some((a, b)) => (num(a)?, num(b)?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok(a..=b)
}

/// Rendered report plus exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
    /// `text` is an error message rather than a report.
    pub error: bool,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome {
            text,
            code: exit::OK,
            error: false,
        }
    }
}

/// Runs one command. Input errors are folded into the outcome (exit 1, or
/// 2 for a Jacobi violation).
pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome {
            text: format!("error: {e}\n"),
            code: error_exit_code(&e),
            error: true,
        },
    }
}

fn names_of(l: &Loaded) -> Vec<String> {
    l.algebra.basis_names().to_vec()
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    let seed = cli.seed;
    match &cli.command {
        Command::List => Ok(Outcome::ok(render(&FamilyList(list_families()), fmt))),
        Command::Build(f) => {
            let alg = build(&f.spec()?)?;
            Ok(Outcome::ok(render(&AlgebraView(&alg), fmt)))
        }
        Command::Jacobi(input) => {
            let l = input.load()?;
            let r = jacobi_report(&l);
            let code = if r.holds { exit::OK } else { exit::JACOBI };
            Ok(Outcome {
                text: render(&r, fmt),
                code,
                error: false,
            })
        }
        Command::Der { input, delta } => {
            let l = checked(input)?;
            let r = der_report(&l, delta);
            let names = names_of(&l);
            Ok(Outcome::ok(render(&Named { report: &r, names: Some(&names) }, fmt)))
        }
        Command::Locder { input, delta, plan } => {
            let l = checked(input)?;
            let plan = plan.plan(l.algebra.dim(), seed);
            let r = locder_report(&l, delta, &plan)?;
            let names = names_of(&l);
            Ok(Outcome {
                text: render(&Named { report: &r, names: Some(&names) }, fmt),
                code: if r.stabilized { exit::OK } else { exit::INCONCLUSIVE },
                error: false,
            })
        }
        Command::Twolocal { input, budget } => {
            let l = checked(input)?;
            let r = twolocal_report(&l, *budget, seed);
            let code = match r.status {
                deltader_core::twolocal::TwoLocalStatus::Pass => exit::OK,
                deltader_core::twolocal::TwoLocalStatus::Inconclusive => exit::INCONCLUSIVE,
            };
            Ok(Outcome {
                text: render(&r, fmt),
                code,
                error: false,
            })
        }
        Command::Analyze {
            input,
            delta,
            plan,
            budget,
        } => {
            let l = input.load()?;
            let plan = plan.plan(l.algebra.dim(), seed);
            let r = analyze(&l, delta, &plan, *budget)?;
            let names = names_of(&l);
            Ok(Outcome {
                text: render(&Named { report: &r, names: Some(&names) }, fmt),
                code: r.exit_code,
                error: false,
            })
        }
        Command::Table(t) => {
            let (table, code) = run_table(t, seed)?;
            Ok(Outcome {
                text: render(&table, fmt),
                code,
                error: false,
            })
        }
        Command::Witness { family, plan } => {
            let spec = family.spec()?.resolved();
            let l = Loaded::from_spec(spec.clone())?;
            let plan = plan.plan(l.algebra.dim(), seed);
            let outcome = find_witness(&spec, Some(plan.clone()))?;
            let code = match &outcome {
                WitnessOutcome::Witness(w) => {
                    // re-checked from scratch before it is emitted
                    if !verify_witness(&spec, w, &plan)? {
                        return Err(Error::Invalid("witness failed its re-check".into()));
                    }
                    exit::OK
                }
                WitnessOutcome::Refused(_) => exit::NEGATIVE,
            };
            let names = names_of(&l);
            Ok(Outcome {
                text: render(&Named { report: &outcome, names: Some(&names) }, fmt),
                code,
                error: false,
            })
        }
    }
}

/// Loads and rejects algebras violating Jacobi.
fn checked(input: &InputArgs) -> Result<Loaded> {
    let l = input.load()?;
    l.algebra.check_jacobi()?;
    Ok(l)
}

/// Builds and computes the table. Exit 0 iff every row matches.
pub fn run_table(t: &TableArgs, seed: u64) -> Result<(Table, i32)> {
    let selectors = match &t.families {
        None => default_selectors(),
        Some(list) => list
            .iter()
            .map(|s| Selector::parse(s, t.beta.as_ref()))
            .collect::<Result<Vec<_>>>()?,
    };
    if t.beta.is_some() && !selectors.iter().any(|s| matches!(s, Selector::S1(_))) {
        return Err(Error::Parameter("--beta only applies to the s1 rows".into()));
    }
    let specs = table_specs(&selectors, t.n.clone(), t.m.clone(), seed)?;
    let rows = compute_rows(&specs, seed)?;
    let all_match = rows.iter().all(|r| r.matches);
    let code = if all_match { exit::OK } else { exit::NEGATIVE };
    Ok((
        Table {
            seed,
            rows,
            all_match,
        },
        code,
    ))
}

