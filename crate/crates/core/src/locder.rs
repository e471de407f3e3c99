//! Local δ-derivations: maps `Δ` with `Δx ∈ S_x = {D(x) : D ∈ Der_δ}` for
//! every `x`.
//!
//! For a fixed `x` the condition is linear in `Δ`, so the candidate space is
//! the intersection of these linear conditions over sampled points. Sampling
//! gives an upper bound for the true space; points are drawn from zero
//! patterns ("strata") because special points such as basis vectors carry
//! constraints that generic points miss.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dersolve::OperatorSpace;
use crate::error::{Error, Result};
use crate::exactlin::{dot, Echelon, Mat, Poly, Rational};
use crate::liealg::LieAlgebra;

pub const DEFAULT_SEED: u64 = 2024;
pub const DEFAULT_TRIALS: usize = 8;
pub const DEFAULT_WINDOW: usize = 3;
pub const DEFAULT_DEPTH: usize = 3;

/// Coordinates forced to zero; every other coordinate is a random nonzero
/// rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Stratum {
    pub zeros: Vec<usize>,
}

impl Stratum {
    pub fn new(mut zeros: Vec<usize>) -> Stratum {
        zeros.sort_unstable();
        zeros.dedup();
        Stratum { zeros }
    }

    pub fn all_free() -> Stratum {
        Stratum { zeros: Vec::new() }
    }

    /// Points supported exactly on `support`.
    pub fn supported_on(dim: usize, support: &[usize]) -> Stratum {
        Stratum::new((0..dim).filter(|c| !support.contains(c)).collect())
    }

    pub fn free_count(&self, dim: usize) -> usize {
        dim - self.zeros.len()
    }

    pub fn sample(&self, dim: usize, rng: &mut impl Rng) -> Vec<Rational> {
        (0..dim)
            .map(|c| {
                if self.zeros.binary_search(&c).is_ok() {
                    Rational::zero()
                } else {
                    random_nonzero(rng)
                }
            })
            .collect()
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z: Vec<String> = self.zeros.iter().map(|c| c.to_string()).collect();
        write!(f, "zeros{{{}}}", z.join(","))
    }
}

/// Random rational with numerator in `[-9, 9] \ {0}` and denominator in
/// `[1, 4]`.
pub fn random_nonzero(rng: &mut impl Rng) -> Rational {
    let mut num = rng.random_range(-9i64..=8);
    if num >= 0 {
        num += 1;
    }
    Rational::new(num, rng.random_range(1i64..=4))
}

/// Random vector with every coordinate nonzero.
pub fn random_vector(dim: usize, rng: &mut impl Rng) -> Vec<Rational> {
    Stratum::all_free().sample(dim, rng)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub strata: Vec<Stratum>,
    pub trials_per_stratum: usize,
    pub seed: u64,
    pub stabilization_window: usize,
    /// Also sample the rank-drop points of every coordinate pencil
    /// `e_a + λ e_b` (see [`pencil_drop_points`]).
    #[serde(default = "yes")]
    pub pencil_points: bool,
}

fn yes() -> bool {
    true
}

impl SamplingPlan {
    /// Default plan for a `dim`-dimensional algebra.
    pub fn default_for(dim: usize) -> SamplingPlan {
        SamplingPlan::with_depth(dim, DEFAULT_DEPTH)
    }

    /// Zero patterns on the first `min(dim, depth)` coordinates, the all-free
    /// pattern, and every pattern supported on one or two coordinates.
    /// Strata are ordered by increasing number of free coordinates.
    pub fn with_depth(dim: usize, depth: usize) -> SamplingPlan {
        let mut strata = SamplingPlan::leading_patterns(dim, depth);
        for i in 0..dim {
            strata.push(Stratum::supported_on(dim, &[i]));
            for j in i + 1..dim {
                strata.push(Stratum::supported_on(dim, &[i, j]));
            }
        }
        SamplingPlan::from_strata(dim, strata)
    }

    /// Only the zero patterns on leading coordinates plus the all-free one.
    pub fn leading_only(dim: usize, depth: usize) -> SamplingPlan {
        SamplingPlan::from_strata(dim, SamplingPlan::leading_patterns(dim, depth))
    }

    fn leading_patterns(dim: usize, depth: usize) -> Vec<Stratum> {
        let k = depth.min(dim);
        (0..1usize << k)
            .map(|mask| Stratum::new((0..k).filter(|b| mask >> b & 1 == 1).collect()))
            .filter(|s| s.free_count(dim) > 0)
            .collect()
    }

    fn from_strata(dim: usize, mut strata: Vec<Stratum>) -> SamplingPlan {
        strata.push(Stratum::all_free());
        strata.sort_by(|a, b| a.free_count(dim).cmp(&b.free_count(dim)).then(a.cmp(b)));
        strata.dedup();
        SamplingPlan {
            strata,
            trials_per_stratum: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            stabilization_window: DEFAULT_WINDOW,
            pencil_points: true,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> SamplingPlan {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> SamplingPlan {
        self.trials_per_stratum = trials;
        self
    }

    pub fn with_window(mut self, window: usize) -> SamplingPlan {
        self.stabilization_window = window;
        self
    }

    pub fn without_pencil_points(mut self) -> SamplingPlan {
        self.pencil_points = false;
        self
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.trials_per_stratum < 1 {
            return Err(Error::Parameter("trials_per_stratum >= 1 required".into()));
        }
        if self.stabilization_window < 2 {
            return Err(Error::Parameter("stabilization_window >= 2 required".into()));
        }
        if !self.strata.contains(&Stratum::all_free()) {
            return Err(Error::Parameter("the all-free stratum must be included".into()));
        }
        if let Some(c) = self.strata.iter().flat_map(|s| &s.zeros).find(|&&c| c >= dim) {
            return Err(Error::Parameter(format!("stratum coordinate {c} >= dim {dim}")));
        }
        Ok(())
    }

    /// Sample points of one sweep (one point per stratum), in stratum order.
    /// Sweep `s` of a plan is the same on every call.
    pub fn sweep(&self, dim: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
        self.strata.iter().map(|s| s.sample(dim, rng)).collect()
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Independent generator for holdout checks.
    pub fn holdout_rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(1);
        rng
    }

    /// Every point the plan draws when run to its full budget, paired with
    /// its stratum index.
    pub fn all_points(&self, dim: usize) -> Vec<(usize, Vec<Rational>)> {
        let mut rng = self.rng();
        (0..self.trials_per_stratum)
            .flat_map(|_| self.sweep(dim, &mut rng).into_iter().enumerate())
            .collect()
    }
}

/// The evaluation matrix whose rows are `B·x` for the basis `B` of `space`.
fn evaluation_rows(space: &OperatorSpace, x: &[Rational]) -> Vec<Vec<Rational>> {
    space.basis.iter().map(|b| b.mul_vec(x)).collect()
}

/// `S_x = span{B·x : B ∈ basis}`.
pub fn evaluation_space(space: &OperatorSpace, x: &[Rational]) -> crate::exactlin::Subspace {
    assert_eq!(x.len(), space.ambient_dim, "point dimension");
    crate::exactlin::Subspace::span(space.ambient_dim, evaluation_rows(space, x))
}

/// Vectors `w` with `w · v = 0` for every `v ∈ S_x`.
fn annihilator(space: &OperatorSpace, x: &[Rational]) -> Vec<Vec<Rational>> {
    let mut ech = Echelon::new(space.ambient_dim);
    for r in evaluation_rows(space, x) {
        ech.insert(r);
    }
    ech.kernel()
}

/// Largest coefficient the rational-root search will factor.
const ROOT_SEARCH_LIMIT: u64 = 1_000_000_000_000;

/// Points on coordinate planes where `dim S_x` drops.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PencilPoints {
    pub points: Vec<Vec<Rational>>,
    /// Pencils whose rank-drop polynomial was too large to factor.
    pub skipped: Vec<(usize, usize)>,
}

/// Nonzero rational `λ` at which `dim S_x` for `x = e_a + λ e_b` is smaller
/// than for generic `λ`, returned as the points `x`.
///
/// `dim S_x` is the rank of the pencil `E_a + λ E_b` with rows `B·e_a` and
/// `B·e_b`. It drops exactly at the common roots of the maximal minors, so
/// the roots of the gcd of two generically nonsingular minors are a superset;
/// each candidate is checked exactly. `None` when the root search
/// exceeds its coefficient bound.
pub fn pencil_drop_points(
    space: &OperatorSpace,
    a: usize,
    b: usize,
    rng: &mut impl Rng,
) -> Option<Vec<Vec<Rational>>> {
    let d = space.ambient_dim;
    let k = space.dim();
    let ea: Vec<Vec<Rational>> = space.basis.iter().map(|m| m.column(a)).collect();
    let eb: Vec<Vec<Rational>> = space.basis.iter().map(|m| m.column(b)).collect();
    let pencil = |lambda: &Rational| -> Mat {
        Mat::from_fn(k, d, |r, c| &ea[r][c] + &(lambda * &eb[r][c]))
    };
    let mut g: Option<Poly> = None;
    let mut r = 0;
    for _ in 0..2 {
        let generic = pencil(&random_nonzero(rng));
        let (rows, cols) = nonsingular_minor(&generic);
        if rows.len() < r {
            continue;
        }
        if rows.len() > r {
            r = rows.len();
            g = None;
        }
        if r == 0 {
            return Some(Vec::new());
        }
        let xs: Vec<Rational> = (1..=r as i64 + 1).map(Rational::from).collect();
        let ys: Vec<Rational> = xs
            .iter()
            .map(|x| {
                let m = pencil(x);
                Mat::from_fn(r, r, |i, j| m.row(rows[i])[cols[j]].clone()).det()
            })
            .collect();
        let f = Poly::interpolate(&xs, &ys);
        g = Some(match g {
            None => f,
            Some(prev) => prev.gcd(&f),
        });
    }
    let g = g.expect("a minor was found");
    let roots = g.rational_roots(ROOT_SEARCH_LIMIT)?;
    Some(
        roots
            .into_iter()
            .filter(|l| !l.is_zero() && pencil(l).rank() < r)
            .map(|l| {
                let mut x = vec![Rational::zero(); d];
                x[a] = Rational::one();
                x[b] = l;
                x
            })
            .collect(),
    )
}

/// Row and column indices of a nonsingular maximal minor.
fn nonsingular_minor(m: &Mat) -> (Vec<usize>, Vec<usize>) {
    let (_, rows) = m.transpose().rref();
    let sub = Mat::from_rows_with_cols(m.cols(), rows.iter().map(|&r| m.row(r).to_vec()).collect());
    let (_, cols) = sub.rref();
    (rows, cols)
}

/// Rank-drop points of every coordinate pencil. Deterministic in `seed`.
pub fn all_pencil_points(space: &OperatorSpace, seed: u64) -> PencilPoints {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    let d = space.ambient_dim;
    let mut out = PencilPoints::default();
    for a in 0..d {
        for b in a + 1..d {
            match pencil_drop_points(space, a, b, &mut rng) {
                Some(pts) => out.points.extend(pts),
                None => out.skipped.push((a, b)),
            }
        }
    }
    out
}

/// When `Δx ∈ S_x`, returns `D = Σ c_k B_k ∈ space` with `D·x = Δ·x`.
pub fn local_membership(space: &OperatorSpace, delta_map: &Mat, x: &[Rational]) -> Option<Mat> {
    let rows = evaluation_rows(space, x);
    let target = delta_map.mul_vec(x);
    if space.dim() == 0 {
        return target.iter().all(Rational::is_zero).then(|| {
            Mat::zeros(space.ambient_dim, space.ambient_dim)
        });
    }
    // columns are B_k x
    let a = Mat::from_rows_with_cols(space.ambient_dim, rows).transpose();
    let c = a.solve(&target)?;
    Some(space.combination(&c))
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumCheck {
    pub stratum: Stratum,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalSpaceResult {
    /// Upper bound for the space of local δ-derivations.
    pub space: OperatorSpace,
    pub der_dim: usize,
    pub samples_used: usize,
    /// Rank-drop points among the samples.
    pub pencil_points: usize,
    /// Coordinate pencils whose drop points could not be searched.
    pub skipped_pencils: Vec<(usize, usize)>,
    pub stabilized: bool,
    /// Candidate dimension after each sweep.
    pub dim_history: Vec<usize>,
    /// Holdout check: one fresh point per stratum, outside the samples used.
    pub per_stratum_certified: Vec<StratumCheck>,
}

impl LocalSpaceResult {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn strictly_larger_than_der(&self) -> bool {
        self.space.dim() > self.der_dim
    }
}

/// Candidate space stored as flat `d²` vectors.
struct Candidate {
    d: usize,
    vecs: Vec<Vec<Rational>>,
}

impl Candidate {
    fn full(d: usize) -> Candidate {
        let d2 = d * d;
        Candidate {
            d,
            vecs: (0..d2).map(|i| crate::exactlin::unit_vector(d2, i)).collect(),
        }
    }

    fn apply(&self, v: &[Rational], x: &[Rational]) -> Vec<Rational> {
        let d = self.d;
        (0..d)
            .map(|k| {
                let mut acc = Rational::zero();
                for (m, xm) in x.iter().enumerate() {
                    let a = &v[k * d + m];
                    if !a.is_zero() && !xm.is_zero() {
                        acc.add_mul(a, xm);
                    }
                }
                acc
            })
            .collect()
    }

    /// Restrict to `{Δ : w·Δx = 0 for all w}`. Returns whether it shrank.
    fn restrict(&mut self, w: &[Vec<Rational>], x: &[Rational]) -> bool {
        if w.is_empty() || self.vecs.is_empty() {
            return false;
        }
        let images: Vec<Vec<Rational>> = self.vecs.iter().map(|v| self.apply(v, x)).collect();
        // constraint matrix: rows w_r, columns candidate vectors
        let mut ech = Echelon::new(self.vecs.len());
        for wr in w {
            let row: Vec<Rational> = images.iter().map(|y| dot(wr, y)).collect();
            ech.insert(row);
        }
        if ech.rank() == 0 {
            return false;
        }
        let d2 = self.d * self.d;
        let kernel = ech.kernel();
        let next: Vec<Vec<Rational>> = kernel
            .iter()
            .map(|c| {
                let mut out = vec![Rational::zero(); d2];
                for (cj, vj) in c.iter().zip(&self.vecs) {
                    if cj.is_zero() {
                        continue;
                    }
                    for (o, a) in out.iter_mut().zip(vj) {
                        if !a.is_zero() {
                            o.add_mul(cj, a);
                        }
                    }
                }
                out
            })
            .collect();
        self.vecs = next;
        true
    }

    fn canonicalize(&mut self) {
        let mut ech = Echelon::new(self.d * self.d);
        for v in self.vecs.drain(..) {
            ech.insert(v);
        }
        self.vecs = ech.sorted_rows();
    }
}

/// Intersects the conditions `Δx ∈ S_x` over the plan's sample points.
///
/// Sweeps draw one point per stratum. Sampling stops once the last
/// `stabilization_window` sweeps left the space unchanged, once the candidate
/// has shrunk to `Der_δ` itself, or when `trials_per_stratum` sweeps are
/// used up; only the first two count as stabilized.
pub fn sampled_locder_space(
    alg: &LieAlgebra,
    der: &OperatorSpace,
    plan: &SamplingPlan,
) -> Result<LocalSpaceResult> {
    let d = alg.dim();
    if der.ambient_dim != d {
        return Err(Error::Dimension {
            expected: d,
            found: der.ambient_dim,
        });
    }
    plan.validate(d)?;
    let mut cand = Candidate::full(d);
    let pencil = if plan.pencil_points {
        all_pencil_points(der, plan.seed)
    } else {
        PencilPoints::default()
    };
    for x in &pencil.points {
        cand.restrict(&annihilator(der, x), x);
    }
    let mut rng = plan.rng();
    let mut history = Vec::new();
    let mut unchanged = 0usize;
    let mut samples_used = pencil.points.len();
    let mut stabilized = false;
    for _ in 0..plan.trials_per_stratum {
        let mut changed = false;
        for x in plan.sweep(d, &mut rng) {
            samples_used += 1;
            let w = annihilator(der, &x);
            changed |= cand.restrict(&w, &x);
        }
        cand.canonicalize();
        history.push(cand.vecs.len());
        unchanged = if changed { 0 } else { unchanged + 1 };
        if cand.vecs.len() == der.dim() || unchanged >= plan.stabilization_window {
            stabilized = true;
            break;
        }
    }
    let space = OperatorSpace::from_span(
        d,
        der.delta.clone(),
        cand.vecs.into_iter().map(|v| Mat::from_flat(d, d, v)),
    );
    debug_assert!(der.is_subspace_of(&space));

    let mut hold = plan.holdout_rng();
    let per_stratum_certified = plan
        .strata
        .iter()
        .map(|s| {
            let x = s.sample(d, &mut hold);
            let certified = space
                .basis
                .iter()
                .all(|b| local_membership(der, b, &x).is_some());
            StratumCheck {
                stratum: s.clone(),
                certified,
            }
        })
        .collect();

    Ok(LocalSpaceResult {
        der_dim: der.dim(),
        space,
        samples_used,
        pencil_points: pencil.points.len(),
        skipped_pencils: pencil.skipped,
        stabilized,
        dim_history: history,
        per_stratum_certified,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Certification {
    /// Membership held at every sampled point. Evidence, not proof.
    Pass { samples: usize, probabilistic: bool },
    /// A point where `Δx ∉ S_x`: proof that `Δ` is not local.
    Counterexample { stratum: Stratum, x: Vec<Rational> },
}

impl Certification {
    pub fn passed(&self) -> bool {
        matches!(self, Certification::Pass { .. })
    }
}

/// Checks `Δx ∈ S_x` at `trials_per_stratum` random points of every stratum.
pub fn stratified_certify(
    alg: &LieAlgebra,
    der: &OperatorSpace,
    delta_map: &Mat,
    plan: &SamplingPlan,
) -> Result<Certification> {
    let d = alg.dim();
    if delta_map.rows() != d || delta_map.cols() != d {
        return Err(Error::Dimension {
            expected: d,
            found: delta_map.rows(),
        });
    }
    plan.validate(d)?;
    let mut samples = 0;
    if plan.pencil_points {
        for x in all_pencil_points(der, plan.seed).points {
            samples += 1;
            if local_membership(der, delta_map, &x).is_none() {
                return Ok(Certification::Counterexample {
                    stratum: Stratum::new(
                        (0..d).filter(|&c| x[c].is_zero()).collect(),
                    ),
                    x,
                });
            }
        }
    }
    for (si, x) in plan.all_points(d) {
        samples += 1;
        if local_membership(der, delta_map, &x).is_none() {
            return Ok(Certification::Counterexample {
                stratum: plan.strata[si].clone(),
                x,
            });
        }
    }
    Ok(Certification::Pass {
        samples,
        probabilistic: true,
    })
}
