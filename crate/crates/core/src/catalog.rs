//! Constructors for every algebra family the toolkit knows about.
//!
//! Basis orders are fixed per family so coordinates in reports line up with
//! the usual way these algebras are written down:
//!
//! | family | basis |
//! |---|---|
//! | `n_{n,1}`, `Q_{2n}` | `e_1 .. e_N` |
//! | `s^1 .. s^4` | `x, e_1 .. e_n` |
//! | `s_{n,2}` | `x_1, x_2, e_1 .. e_n` |
//! | `τ^1 .. τ^3` | `x, e_1 .. e_{2n}` |
//! | `τ_{2n,2}` | `x_1, x_2, e_1 .. e_{2n}` |
//! | `L_{n,n+1}` | `e_1 .. e_{2n+1}, x_1 .. x_{n+1}` |
//! | `L_n` | `e_1 .. e_n, x_1 .. x_n` |
//! | oscillator `L_λ` | `e_-1, e_0, e_1 .. e_n, ě_1 .. ě_n` |
//! | `L^m = sl_2 ⋉ V_m` | `e, f, h, x_0 .. x_m` |
//! | Schrödinger `S_n` | `e, f, h, z, x_1, y_1, .., x_n, y_n, s_jk (j<k)` |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{q, qi, Rational};
use crate::liealg::LieAlgebra;

/// Largest `n` (or `m`) accepted by the constructors.
pub const MAX_PARAMETER: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    NFiliform,
    QFiliform,
    S1,
    S2,
    S3,
    S4,
    SN2,
    Tau1,
    Tau2,
    Tau3,
    Tau2N2,
    HeisSolv,
    AbelianSolv,
    Oscillator,
    Sl2Module,
    Schrodinger,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    /// Size parameter `n`.
    N,
    /// Single rational (`β` for s¹, `α` for τ¹).
    Beta,
    /// List of rationals (`α_3..α_{n-1}` for s⁴, `α_4, α_6, .., α_{2n-2}` for τ³).
    Alphas,
    /// Positive nondecreasing rationals `λ_1 ≤ .. ≤ λ_n`.
    Lambdas,
    /// Highest weight `m ≥ 2`.
    M,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyInfo {
    pub family: Family,
    pub id: &'static str,
    pub params: &'static [ParamKind],
    pub display_name: &'static str,
    pub description: &'static str,
}

use ParamKind as P;

const FAMILIES: [FamilyInfo; 16] = [
    FamilyInfo {
        family: Family::NFiliform,
        id: "n-filiform",
        params: &[P::N],
        display_name: "n_{n,1}",
        description: "naturally graded filiform algebra, [e_i, e_1] = e_{i+1}",
    },
    FamilyInfo {
        family: Family::QFiliform,
        id: "q-filiform",
        params: &[P::N],
        display_name: "Q_{2n}",
        description: "naturally graded filiform algebra of even dimension 2n",
    },
    FamilyInfo {
        family: Family::S1,
        id: "s1",
        params: &[P::N, P::Beta],
        display_name: "s^1_{n,1}(β)",
        description: "solvable extension of n_{n,1}, [e_i, x] = (i-2+β) e_i",
    },
    FamilyInfo {
        family: Family::S2,
        id: "s2",
        params: &[P::N],
        display_name: "s^2_{n,1}",
        description: "solvable extension of n_{n,1}, [e_i, x] = e_i for i >= 2",
    },
    FamilyInfo {
        family: Family::S3,
        id: "s3",
        params: &[P::N],
        display_name: "s^3_{n,1}",
        description: "solvable extension of n_{n,1}, [e_1, x] = e_1 + e_2",
    },
    FamilyInfo {
        family: Family::S4,
        id: "s4",
        params: &[P::N, P::Alphas],
        display_name: "s^4_{n,1}(α_3, .., α_{n-1})",
        description: "solvable extension of n_{n,1} with nilpotent tail in ad x",
    },
    FamilyInfo {
        family: Family::SN2,
        id: "s-n2",
        params: &[P::N],
        display_name: "s_{n,2}",
        description: "two-dimensional torus extension of n_{n,1}",
    },
    FamilyInfo {
        family: Family::Tau1,
        id: "tau1",
        params: &[P::N, P::Beta],
        display_name: "τ^1_{2n,1}(α)",
        description: "solvable extension of Q_{2n}, [e_i, x] = (i-2+α) e_i",
    },
    FamilyInfo {
        family: Family::Tau2,
        id: "tau2",
        params: &[P::N],
        display_name: "τ^2_{2n,1}",
        description: "solvable extension of Q_{2n}, [e_1, x] = e_1 + e_{2n}",
    },
    FamilyInfo {
        family: Family::Tau3,
        id: "tau3",
        params: &[P::N, P::Alphas],
        display_name: "τ^3_{2n,1}(α_4, α_6, .., α_{2n-2})",
        description: "solvable extension of Q_{2n} with nilpotent tail in ad x",
    },
    FamilyInfo {
        family: Family::Tau2N2,
        id: "tau-2n2",
        params: &[P::N],
        display_name: "τ_{2n,2}",
        description: "two-dimensional torus extension of Q_{2n}",
    },
    FamilyInfo {
        family: Family::HeisSolv,
        id: "heis-solv",
        params: &[P::N],
        display_name: "L_{n,n+1}",
        description: "solvable algebra with Heisenberg nilradical h_n",
    },
    FamilyInfo {
        family: Family::AbelianSolv,
        id: "abelian-solv",
        params: &[P::N],
        display_name: "L_n",
        description: "solvable algebra with abelian nilradical, [e_i, x_i] = e_i",
    },
    FamilyInfo {
        family: Family::Oscillator,
        id: "oscillator",
        params: &[P::N, P::Lambdas],
        display_name: "L_λ",
        description: "oscillator algebra, [e_-1, e_j] = λ_j ě_j",
    },
    FamilyInfo {
        family: Family::Sl2Module,
        id: "sl2module",
        params: &[P::M],
        display_name: "L^m",
        description: "sl_2 ⋉ V_m with V_m the irreducible (m+1)-dimensional module",
    },
    FamilyInfo {
        family: Family::Schrodinger,
        id: "schrodinger",
        params: &[P::N],
        display_name: "S_n",
        description: "Schrödinger algebra (sl_2 ⊕ so_n) ⋉ h_n",
    },
];

/// Stable listing of all constructors.
pub fn list_families() -> &'static [FamilyInfo] {
    &FAMILIES
}

impl Family {
    pub fn info(self) -> &'static FamilyInfo {
        FAMILIES
            .iter()
            .find(|f| f.family == self)
            .expect("every family is listed")
    }

    pub fn id(self) -> &'static str {
        self.info().id
    }

    pub fn all() -> impl Iterator<Item = Family> {
        FAMILIES.iter().map(|f| f.family)
    }

    fn takes(self, p: ParamKind) -> bool {
        self.info().params.contains(&p)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        FAMILIES
            .iter()
            .find(|f| f.id == norm)
            .map(|f| f.family)
            .ok_or_else(|| Error::Parameter(format!("unknown family `{s}`")))
    }
}

/// A family plus its parameters. Unset optional parameters fall back to
/// generic defaults when built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize) -> FamilySpec {
        FamilySpec {
            family,
            n,
            beta: None,
            alphas: None,
            lambdas: None,
            m: None,
        }
    }

    /// `L^m`; `n` is unused for this family.
    pub fn sl2_module(m: usize) -> FamilySpec {
        FamilySpec {
            m: Some(m),
            ..FamilySpec::new(Family::Sl2Module, 0)
        }
    }

    pub fn with_beta(mut self, beta: Rational) -> FamilySpec {
        self.beta = Some(beta);
        self
    }

    pub fn with_alphas(mut self, alphas: Vec<Rational>) -> FamilySpec {
        self.alphas = Some(alphas);
        self
    }

    pub fn with_lambdas(mut self, lambdas: Vec<Rational>) -> FamilySpec {
        self.lambdas = Some(lambdas);
        self
    }

    /// Number of entries the alpha list must have.
    pub fn alpha_count(&self) -> usize {
        match self.family {
            Family::S4 => self.n.saturating_sub(3),
            Family::Tau3 => self.n.saturating_sub(2),
            _ => 0,
        }
    }

    /// Minimal size parameter for the family.
    fn min_n(&self) -> usize {
        match self.family {
            Family::NFiliform | Family::S1 | Family::S2 | Family::S3 | Family::S4 | Family::SN2 => 3,
            Family::QFiliform | Family::Tau1 | Family::Tau2 | Family::Tau3 | Family::Tau2N2 => 2,
            _ => 1,
        }
    }

    /// Checks parameter presence and constraints.
    pub fn validate(&self) -> Result<()> {
        let fam = self.family;
        let perr = |msg: String| Err(Error::Parameter(format!("{}: {msg}", fam.id())));
        if fam == Family::Sl2Module {
            match self.m {
                None => return perr("requires m".into()),
                Some(m) if m < 2 => return perr(format!("m >= 2 required, got {m}")),
                Some(m) if m > MAX_PARAMETER => {
                    return perr(format!("m <= {MAX_PARAMETER} required, got {m}"))
                }
                _ => {}
            }
        } else {
            if self.m.is_some() {
                return perr("does not take m".into());
            }
            if self.n < self.min_n() {
                return perr(format!("n >= {} required, got {}", self.min_n(), self.n));
            }
            if self.n > MAX_PARAMETER {
                return perr(format!("n <= {MAX_PARAMETER} required, got {}", self.n));
            }
        }
        if self.beta.is_some() && !fam.takes(ParamKind::Beta) {
            return perr("does not take beta".into());
        }
        match &self.alphas {
            Some(_) if !fam.takes(ParamKind::Alphas) => return perr("does not take alphas".into()),
            Some(a) if a.len() != self.alpha_count() => {
                return perr(format!(
                    "expected {} alphas, got {}",
                    self.alpha_count(),
                    a.len()
                ))
            }
            _ => {}
        }
        match &self.lambdas {
            Some(_) if !fam.takes(ParamKind::Lambdas) => {
                return perr("does not take lambdas".into())
            }
            Some(l) => {
                if l.len() != self.n {
                    return perr(format!("expected {} lambdas, got {}", self.n, l.len()));
                }
                if !l[0].is_positive() {
                    return perr("0 < λ_1 required".into());
                }
                if l.windows(2).any(|w| w[0] > w[1]) {
                    return perr("λ_1 <= .. <= λ_n required".into());
                }
            }
            None => {}
        }
        Ok(())
    }

    /// Copy with every optional parameter the family takes filled in.
    pub fn resolved(&self) -> FamilySpec {
        let mut s = self.clone();
        match s.family {
            Family::S1 | Family::Tau1 => {
                s.beta.get_or_insert_with(|| q(5, 3));
            }
            Family::S4 | Family::Tau3 => {
                let k = s.alpha_count();
                s.alphas.get_or_insert_with(|| default_alphas(k));
            }
            Family::Oscillator => {
                let n = s.n;
                s.lambdas
                    .get_or_insert_with(|| (1..=n).map(|j| qi(j as i64)).collect());
            }
            _ => {}
        }
        s
    }

    /// Total dimension of the algebra this spec builds.
    pub fn dim(&self) -> usize {
        let n = self.n;
        match self.family {
            Family::NFiliform => n,
            Family::QFiliform => 2 * n,
            Family::S1 | Family::S2 | Family::S3 | Family::S4 => n + 1,
            Family::SN2 => n + 2,
            Family::Tau1 | Family::Tau2 | Family::Tau3 => 2 * n + 1,
            Family::Tau2N2 | Family::Oscillator => 2 * n + 2,
            Family::HeisSolv => 3 * n + 2,
            Family::AbelianSolv => 2 * n,
            Family::Sl2Module => self.m.unwrap_or(0) + 4,
            Family::Schrodinger => 4 + 2 * n + n * n.saturating_sub(1) / 2,
        }
    }

    /// Human-readable instance label, e.g. `s1_{5,1}(2)`.
    pub fn label(&self) -> String {
        let s = self.resolved();
        let n = s.n;
        let list = |v: &Option<Vec<Rational>>| {
            v.as_ref()
                .map(|v| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
                .unwrap_or_default()
        };
        let beta = s.beta.as_ref().map(|b| b.to_string()).unwrap_or_default();
        match s.family {
            Family::NFiliform => format!("n_{{{n},1}}"),
            Family::QFiliform => format!("Q_{{{}}}", 2 * n),
            Family::S1 => format!("s1_{{{n},1}}({beta})"),
            Family::S2 => format!("s2_{{{n},1}}"),
            Family::S3 => format!("s3_{{{n},1}}"),
            Family::S4 => format!("s4_{{{n},1}}({})", list(&s.alphas)),
            Family::SN2 => format!("s_{{{n},2}}"),
            Family::Tau1 => format!("tau1_{{{},1}}({beta})", 2 * n),
            Family::Tau2 => format!("tau2_{{{},1}}", 2 * n),
            Family::Tau3 => format!("tau3_{{{},1}}({})", 2 * n, list(&s.alphas)),
            Family::Tau2N2 => format!("tau_{{{},2}}", 2 * n),
            Family::HeisSolv => format!("L_{{{n},{}}}", n + 1),
            Family::AbelianSolv => format!("L_{n}"),
            Family::Oscillator => format!("L_lambda({})", list(&s.lambdas)),
            Family::Sl2Module => format!("L^{}", s.m.unwrap_or(0)),
            Family::Schrodinger => format!("S_{n}"),
        }
    }
}

fn default_alphas(k: usize) -> Vec<Rational> {
    // nonzero and pairwise distinct
    (0..k).map(|i| q(i as i64 + 1, 2)).collect()
}

fn names(prefix: &str, range: impl Iterator<Item = i64>) -> Vec<String> {
    range.map(|i| format!("{prefix}_{i}")).collect()
}

/// Build the algebra for a family instance. The result always passes the
/// exhaustive Jacobi check.
pub fn build(spec: &FamilySpec) -> Result<LieAlgebra> {
    spec.validate()?;
    let s = spec.resolved();
    let alg = match s.family {
        Family::NFiliform => filiform_n(&s),
        Family::QFiliform => filiform_q(&s),
        Family::S1 | Family::S2 | Family::S3 | Family::S4 => s_family(&s),
        Family::SN2 => s_n2(&s),
        Family::Tau1 | Family::Tau2 | Family::Tau3 => tau_family(&s),
        Family::Tau2N2 => tau_2n2(&s),
        Family::HeisSolv => heis_solv(&s),
        Family::AbelianSolv => abelian_solv(&s),
        Family::Oscillator => oscillator(&s),
        Family::Sl2Module => sl2_module(&s),
        Family::Schrodinger => schrodinger(&s),
    }?;
    debug_assert_eq!(alg.dim(), s.dim());
    alg.check_jacobi()?;
    Ok(alg)
}

/// `[e_i, e_1] = e_{i+1}` for `2 <= i <= top`, with `e_i` at index `off + i - 1`.
fn add_filiform_chain(b: &mut crate::liealg::LieAlgebraBuilder, off: usize, top: usize) {
    for i in 2..=top {
        b.term(off + i - 1, off, off + i, qi(1));
    }
}

/// `[e_i, e_{2n+1-i}] = (-1)^i e_{2n}` for `2 <= i <= n`.
fn add_q_pairing(b: &mut crate::liealg::LieAlgebraBuilder, off: usize, n: usize) {
    let e = |i: usize| off + i - 1;
    for i in 2..=n {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        b.term(e(i), e(2 * n + 1 - i), e(2 * n), qi(sign));
    }
}

fn filiform_n(s: &FamilySpec) -> Result<LieAlgebra> {
    let n = s.n;
    let mut b = LieAlgebra::builder(s.label(), names("e", 1..=n as i64));
    add_filiform_chain(&mut b, 0, n - 1);
    b.build()
}

fn filiform_q(s: &FamilySpec) -> Result<LieAlgebra> {
    let n = s.n;
    let mut b = LieAlgebra::builder(s.label(), names("e", 1..=2 * n as i64));
    add_filiform_chain(&mut b, 0, 2 * n - 2);
    add_q_pairing(&mut b, 0, n);
    b.build()
}

fn s_family(s: &FamilySpec) -> Result<LieAlgebra> {
    let n = s.n;
    let mut basis = vec!["x".to_string()];
    basis.extend(names("e", 1..=n as i64));
    let mut b = LieAlgebra::builder(s.label(), basis);
    let x = 0;
    let e = |i: usize| i;
    add_filiform_chain(&mut b, 1, n - 1);
    match s.family {
        Family::S1 => {
            let beta = s.beta.clone().expect("resolved");
            for i in 2..=n {
                b.term(e(i), x, e(i), qi(i as i64 - 2) + &beta);
            }
            b.term(e(1), x, e(1), qi(1));
        }
        Family::S2 => {
            for i in 2..=n {
                b.term(e(i), x, e(i), qi(1));
            }
        }
        Family::S3 => {
            for i in 2..=n {
                b.term(e(i), x, e(i), qi(i as i64 - 1));
            }
            b.add(e(1), x, &[(e(1), qi(1)), (e(2), qi(1))]);
        }
        Family::S4 => {
            // alphas[0] is α_3
            let alphas = s.alphas.as_ref().expect("resolved");
            let alpha = |t: usize| &alphas[t - 3];
            for i in 2..=n {
                b.term(e(i), x, e(i), qi(1));
                for l in i + 2..=n {
                    b.term(e(i), x, e(l), alpha(l + 1 - i).clone());
                }
            }
        }
        _ => unreachable!(),
    }
    b.build()
}

fn s_n2(s: &FamilySpec) -> Result<LieAlgebra> {
    let n = s.n;
    let mut basis = vec!["x_1".to_string(), "x_2".to_string()];
    basis.extend(names("e", 1..=n as i64));
    let mut b = LieAlgebra::builder(s.label(), basis);
    let (x1, x2) = (0, 1);
    let e = |i: usize| i + 1;
    add_filiform_chain(&mut b, 2, n - 1);
    for i in 3..=n {
        b.term(e(i), x1, e(i), qi(i as i64 - 2));
    }
    b.term(e(1), x1, e(1), qi(1));
    for i in 2..=n {
        b.term(e(i), x2, e(i), qi(1));
    }
    b.build()
}

fn tau_family(s: &FamilySpec) -> Result<LieAlgebra> {
    let n = s.n;
    let top = 2 * n;
    let mut basis = vec!["x".to_string()];
    basis.extend(names("e", 1..=top as i64));
    let mut b = LieAlgebra::builder(s.label(), basis);
    let x = 0;
    let e = |i: usize| i;
    add_filiform_chain(&mut b, 1, top - 2);
    add_q_pairing(&mut b, 1, n);
    match s.family {
        Family::Tau1 => {
            let alpha = s.beta.clone().expect("resolved");
            b.term(e(1), x, e(1), qi(1));
            for i in 2..top {
                b.term(e(i), x, e(i), qi(i as i64 - 2) + &alpha);
            }
            b.term(e(top), x, e(top), qi(top as i64 - 3) + qi(2) * &alpha);
        }
        Family::Tau2 => {
            b.add(e(1), x, &[(e(1), qi(1)), (e(top), qi(1))]);
            for i in 2..top {
                b.term(e(i), x, e(i), qi(i as i64 - n as i64));
            }
            b.term(e(top), x, e(top), qi(1));
        }
        Family::Tau3 => {
            // alphas[k-2] is α_{2k}
            let alphas = s.alphas.as_ref().expect("resolved");
            for i in 0..=top - 3 {
                b.term(e(i + 2), x, e(i + 2), qi(1));
                // the tail runs up to e_{2n-1}; stopping one short breaks
                // Jacobi on (x, e_1, e_{i+2}) for even i
                let upper = (top - 2 - i) / 2;
                for k in 2..=upper {
                    b.term(e(i + 2), x, e(2 * k + 1 + i), alphas[k - 2].clone());
                }
            }
            b.term(e(top), x, e(top), qi(2));
        }
        _ => unreachable!(),
    }
    b.build()
}

fn tau_2n2(s: &FamilySpec) -> Result<LieAlgebra> {
    let n = s.n;
    let top = 2 * n;
    let mut basis = vec!["x_1".to_string(), "x_2".to_string()];
    basis.extend(names("e", 1..=top as i64));
    let mut b = LieAlgebra::builder(s.label(), basis);
    let (x1, x2) = (0, 1);
    let e = |i: usize| i + 1;
    add_filiform_chain(&mut b, 2, top - 2);
    add_q_pairing(&mut b, 2, n);
    for i in 1..top {
        b.term(e(i), x1, e(i), qi(i as i64));
    }
    b.term(e(top), x1, e(top), qi(top as i64 + 1));
    // e_1 has weight zero under x_2; giving it weight one breaks Jacobi on
    // (e_i, e_1, x_2).
    for i in 2..top {
        b.term(e(i), x2, e(i), qi(1));
    }
    b.term(e(top), x2, e(top), qi(2));
    b.build()
}

fn heis_solv(s: &FamilySpec) -> Result<LieAlgebra> {
    let n = s.n;
    let mut basis = names("e", 1..=(2 * n + 1) as i64);
    basis.extend(names("x", 1..=(n + 1) as i64));
    let mut b = LieAlgebra::builder(s.label(), basis);
    let e = |i: usize| i - 1;
    let x = |i: usize| 2 * n + i;
    for i in 1..=n {
        b.term(e(n + i), e(i), e(2 * n + 1), qi(1));
        b.term(e(i), x(i), e(i), qi(1));
        b.term(e(n + i), x(i), e(n + i), qi(-1));
        b.term(e(i), x(n + 1), e(i), qi(1));
    }
    b.term(e(2 * n + 1), x(n + 1), e(2 * n + 1), qi(1));
    b.build()
}

fn abelian_solv(s: &FamilySpec) -> Result<LieAlgebra> {
    let n = s.n;
    let mut basis = names("e", 1..=n as i64);
    basis.extend(names("x", 1..=n as i64));
    let mut b = LieAlgebra::builder(s.label(), basis);
    for i in 0..n {
        b.term(i, n + i, i, qi(1));
    }
    b.build()
}

fn oscillator(s: &FamilySpec) -> Result<LieAlgebra> {
    let n = s.n;
    let mut basis = vec!["e_-1".to_string(), "e_0".to_string()];
    basis.extend(names("e", 1..=n as i64));
    basis.extend(names("ě", 1..=n as i64));
    let mut b = LieAlgebra::builder(s.label(), basis);
    let lambdas = s.lambdas.as_ref().expect("resolved");
    let (em1, e0) = (0, 1);
    for j in 1..=n {
        let (ej, cj) = (1 + j, 1 + n + j);
        let l = &lambdas[j - 1];
        b.term(em1, ej, cj, l.clone());
        b.term(em1, cj, ej, -l);
        b.term(ej, cj, e0, qi(1));
    }
    b.build()
}

fn sl2_module(s: &FamilySpec) -> Result<LieAlgebra> {
    let m = s.m.expect("validated");
    let mut basis = vec!["e".to_string(), "f".to_string(), "h".to_string()];
    basis.extend(names("x", 0..=m as i64));
    let mut b = LieAlgebra::builder(s.label(), basis);
    let (e, f, h) = (0, 1, 2);
    let x = |k: usize| 3 + k;
    b.term(e, f, h, qi(1));
    b.term(h, e, e, qi(2));
    b.term(f, h, f, qi(2));
    let mi = m as i64;
    for k in 0..=m {
        let ki = k as i64;
        b.term(x(k), h, x(k), qi(2 * ki - mi));
        if k < m {
            b.term(x(k), f, x(k + 1), qi(1));
        }
        if k >= 1 {
            b.term(x(k), e, x(k - 1), qi(ki * (mi + 1 - ki)));
        }
    }
    b.build()
}

/// Basis names of the Schrödinger algebra in their fixed order.
fn schrodinger_basis(n: usize) -> (Vec<String>, Vec<(usize, usize)>) {
    let mut basis: Vec<String> = ["e", "f", "h", "z"].iter().map(|s| s.to_string()).collect();
    for i in 1..=n {
        basis.push(format!("x_{i}"));
        basis.push(format!("y_{i}"));
    }
    let mut pairs = Vec::new();
    for j in 1..=n {
        for k in j + 1..=n {
            basis.push(if n < 10 {
                format!("s_{j}{k}")
            } else {
                format!("s_{j}_{k}")
            });
            pairs.push((j, k));
        }
    }
    (basis, pairs)
}

fn schrodinger(s: &FamilySpec) -> Result<LieAlgebra> {
    let n = s.n;
    let (basis, pairs) = schrodinger_basis(n);
    let mut b = LieAlgebra::builder(s.label(), basis);
    let (e, f, h, z) = (0, 1, 2, 3);
    let x = |i: usize| 4 + 2 * (i - 1);
    let y = |i: usize| 5 + 2 * (i - 1);
    let so_base = 4 + 2 * n;
    // s_{jk} as (index, sign) with s_kj = −s_jk and s_jj = 0
    let s_idx = |j: usize, k: usize| -> Option<(usize, i64)> {
        if j == k {
            return None;
        }
        let (a, c, sign) = if j < k { (j, k, 1) } else { (k, j, -1) };
        let p = pairs.iter().position(|&pr| pr == (a, c)).expect("pair exists");
        Some((so_base + p, sign))
    };
    let kd = |a: usize, c: usize| i64::from(a == c);

    b.term(e, f, h, qi(1));
    b.term(h, e, e, qi(2));
    b.term(f, h, f, qi(2));
    for i in 1..=n {
        b.term(x(i), y(i), z, qi(1));
        b.term(h, x(i), x(i), qi(1));
        b.term(h, y(i), y(i), qi(-1));
        b.term(e, y(i), x(i), qi(1));
        b.term(f, x(i), y(i), qi(1));
    }
    for (p, &(j, k)) in pairs.iter().enumerate() {
        let sjk = so_base + p;
        for i in 1..=n {
            // [s_jk, x_i] = δ_ki x_j − δ_ji x_k
            let tx = [(x(j), qi(kd(k, i))), (x(k), qi(-kd(j, i)))];
            let ty = [(y(j), qi(kd(k, i))), (y(k), qi(-kd(j, i)))];
            b.add(sjk, x(i), &tx);
            b.add(sjk, y(i), &ty);
        }
        for (p2, &(l, mm)) in pairs.iter().enumerate() {
            if p2 <= p {
                continue;
            }
            // [s_jk, s_lm] = δ_lk s_jm + δ_jm s_kl + δ_mk s_lj + δ_lj s_mk
            let mut terms = Vec::new();
            for (coef, a, c) in [
                (kd(l, k), j, mm),
                (kd(j, mm), k, l),
                (kd(mm, k), l, j),
                (kd(l, j), mm, k),
            ] {
                if coef == 0 {
                    continue;
                }
                if let Some((idx, sign)) = s_idx(a, c) {
                    terms.push((idx, qi(coef * sign)));
                }
            }
            b.add(sjk, so_base + p2, &terms);
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_families() {
        let all = list_families();
        assert_eq!(all.len(), 16);
        let ids: std::collections::HashSet<_> = all.iter().map(|f| f.id).collect();
        assert_eq!(ids.len(), 16);
        assert!(!Family::Tau2.takes(ParamKind::Beta));
        assert!(!Family::Tau2.takes(ParamKind::Alphas));
        assert!(Family::Oscillator.takes(ParamKind::Lambdas));
    }

    #[test]
    fn family_ids_parse() {
        for f in Family::all() {
            assert_eq!(f.id().parse::<Family>().unwrap(), f);
        }
        assert!("s9".parse::<Family>().is_err());
    }

    #[test]
    fn parameter_errors_name_the_constraint() {
        let bad = FamilySpec::new(Family::Oscillator, 2).with_lambdas(vec![qi(2), qi(1)]);
        let msg = build(&bad).unwrap_err().to_string();
        assert!(msg.contains("λ_1 <= .. <= λ_n"), "{msg}");
        let bad = FamilySpec::new(Family::Oscillator, 2).with_lambdas(vec![qi(0), qi(1)]);
        assert!(build(&bad).unwrap_err().to_string().contains("0 < λ_1"));
        assert!(build(&FamilySpec::sl2_module(1)).unwrap_err().to_string().contains("m >= 2"));
        let bad = FamilySpec::new(Family::S2, 5).with_beta(qi(1));
        assert!(build(&bad).unwrap_err().to_string().contains("does not take beta"));
        let bad = FamilySpec::new(Family::S4, 6).with_alphas(vec![qi(1)]);
        assert!(build(&bad).unwrap_err().to_string().contains("expected 3 alphas"));
        assert!(build(&FamilySpec::new(Family::S1, 13)).is_err());
    }

    #[test]
    fn s_n2_brackets() {
        let a = build(&FamilySpec::new(Family::SN2, 5)).unwrap();
        assert_eq!(a.dim(), 7);
        let x1 = a.index_of("x_1").unwrap();
        let x2 = a.index_of("x_2").unwrap();
        let e = |i: usize| a.index_of(&format!("e_{i}")).unwrap();
        assert_eq!(a.structure(e(1), x1), a.basis_vector(e(1)).as_slice());
        for i in 2..=5 {
            assert_eq!(a.structure(e(i), x2), a.basis_vector(e(i)).as_slice());
        }
    }

    #[test]
    fn sl2_module_brackets() {
        let a = build(&FamilySpec::sl2_module(2)).unwrap();
        assert_eq!(a.dim(), 6);
        let (e, x0, x1) = (0, 3, 4);
        let mut expect = vec![Rational::zero(); 6];
        expect[x0] = qi(2);
        assert_eq!(a.structure(x1, e), expect.as_slice());
    }

    #[test]
    fn schrodinger_2_basis_and_so_action() {
        let a = build(&FamilySpec::new(Family::Schrodinger, 2)).unwrap();
        assert_eq!(
            a.basis_names(),
            &["e", "f", "h", "z", "x_1", "y_1", "x_2", "y_2", "s_12"]
        );
        let s12 = a.index_of("s_12").unwrap();
        let x1 = a.index_of("x_1").unwrap();
        let x2 = a.index_of("x_2").unwrap();
        let mut expect = vec![Rational::zero(); 9];
        expect[x2] = qi(-1);
        assert_eq!(a.structure(s12, x1), expect.as_slice());
    }

    #[test]
    fn dimensions_match_formulas() {
        for f in Family::all() {
            let specs: Vec<FamilySpec> = if f == Family::Sl2Module {
                (2..=5).map(FamilySpec::sl2_module).collect()
            } else {
                (3..=5).map(|n| FamilySpec::new(f, n)).collect()
            };
            for s in specs {
                let a = build(&s).unwrap();
                assert_eq!(a.dim(), s.dim(), "{}", s.label());
            }
        }
    }
}
