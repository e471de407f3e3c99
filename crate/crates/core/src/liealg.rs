//! Finite-dimensional Lie algebras given by structure constants.
//!
//! Brackets are stored sparsely on ordered pairs `i < j`; `[e_j, e_i]` is
//! always the negative of `[e_i, e_j]`, so antisymmetry holds by
//! construction. A dense `d × d × d` table is kept alongside for fast
//! evaluation.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{unit_vector, Rational};

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    name: String,
    basis: Vec<String>,
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
    table: Vec<Rational>,
}

/// First triple on which the Jacobi identity fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub residual: Vec<Rational>,
}

impl From<JacobiViolation> for Error {
    fn from(v: JacobiViolation) -> Self {
        Error::Jacobi {
            i: v.i,
            j: v.j,
            k: v.k,
            residual: v.residual,
        }
    }
}

pub struct LieAlgebraBuilder {
    name: String,
    basis: Vec<String>,
    entries: BTreeMap<(usize, usize), BTreeMap<usize, Rational>>,
    error: Option<Error>,
}

impl LieAlgebraBuilder {
    /// Adds `Σ coef · e_k` to `[e_i, e_j]`. Pairs with `i > j` are stored as
    /// the negated `[e_j, e_i]`; `i == j` is rejected.
    pub fn add(&mut self, i: usize, j: usize, terms: &[(usize, Rational)]) -> &mut Self {
        let d = self.basis.len();
        if i >= d || j >= d || terms.iter().any(|(k, _)| *k >= d) {
            self.error.get_or_insert(Error::Invalid(format!(
                "bracket [{i}, {j}] refers to an index outside 0..{d}"
            )));
            return self;
        }
        if i == j {
            self.error.get_or_insert(Error::Invalid(format!(
                "bracket [e_{i}, e_{i}] must vanish"
            )));
            return self;
        }
        let (a, b, sign) = if i < j { (i, j, false) } else { (j, i, true) };
        let slot = self.entries.entry((a, b)).or_default();
        for (k, c) in terms {
            let c = if sign { -c } else { c.clone() };
            let e = slot.entry(*k).or_insert_with(Rational::zero);
            *e += c;
        }
        self
    }

    /// `[e_i, e_j] += coef · e_k`.
    pub fn term(&mut self, i: usize, j: usize, k: usize, coef: Rational) -> &mut Self {
        self.add(i, j, &[(k, coef)])
    }

    pub fn build(&mut self) -> Result<LieAlgebra> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        let mut seen = HashSet::new();
        for b in &self.basis {
            if !seen.insert(b.as_str()) {
                return Err(Error::Invalid(format!("duplicate basis name `{b}`")));
            }
        }
        let brackets = std::mem::take(&mut self.entries)
            .into_iter()
            .filter_map(|(pair, terms)| {
                let terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                (!terms.is_empty()).then_some((pair, terms))
            })
            .collect();
        Ok(LieAlgebra::from_parts(
            std::mem::take(&mut self.name),
            std::mem::take(&mut self.basis),
            brackets,
        ))
    }
}

impl LieAlgebra {
    pub fn builder(name: impl Into<String>, basis: Vec<String>) -> LieAlgebraBuilder {
        LieAlgebraBuilder {
            name: name.into(),
            basis,
            entries: BTreeMap::new(),
            error: None,
        }
    }

    fn from_parts(
        name: String,
        basis: Vec<String>,
        brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
    ) -> LieAlgebra {
        let d = basis.len();
        let mut table = vec![Rational::zero(); d * d * d];
        for (&(i, j), terms) in &brackets {
            for (k, c) in terms {
                table[(i * d + j) * d + k] = c.clone();
                table[(j * d + i) * d + k] = -c;
            }
        }
        LieAlgebra {
            name,
            basis,
            brackets,
            table,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    /// Nonzero brackets `[e_i, e_j]`, `i < j`, with their sparse expansions.
    pub fn brackets(&self) -> impl Iterator<Item = (usize, usize, &[(usize, Rational)])> {
        self.brackets.iter().map(|(&(i, j), t)| (i, j, t.as_slice()))
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn structure(&self, i: usize, j: usize) -> &[Rational] {
        let d = self.dim();
        let start = (i * d + j) * d;
        &self.table[start..start + d]
    }

    /// Structure constant `c_{ij}^k`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        let d = self.dim();
        &self.table[(i * d + j) * d + k]
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        unit_vector(self.dim(), i)
    }

    /// Element from `(index, coefficient)` pairs.
    pub fn element(&self, terms: &[(usize, Rational)]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        for (i, c) in terms {
            v[*i] += c;
        }
        v
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
        let d = self.dim();
        for w in [u, v] {
            if w.len() != d {
                return Err(Error::Dimension {
                    expected: d,
                    found: w.len(),
                });
            }
        }
        Ok(self.bracket_unchecked(u, v))
    }

    pub(crate) fn bracket_unchecked(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let d = self.dim();
        let mut out = vec![Rational::zero(); d];
        for (&(i, j), terms) in &self.brackets {
            // [u,v] picks up (u_i v_j − u_j v_i) [e_i, e_j]
            let mut w = &u[i] * &v[j];
            w.sub_mul(&u[j], &v[i]);
            if w.is_zero() {
                continue;
            }
            for (k, c) in terms {
                out[*k].add_mul(&w, c);
            }
        }
        out
    }

    /// `[e_i, v]` for a basis vector and an arbitrary element.
    pub(crate) fn bracket_basis_left(&self, i: usize, v: &[Rational]) -> Vec<Rational> {
        let d = self.dim();
        let mut out = vec![Rational::zero(); d];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, c) in self.structure(i, j).iter().enumerate() {
                out[k].add_mul(x, c);
            }
        }
        out
    }

    /// Exhaustive Jacobi check over all triples `i < j < k`.
    pub fn check_jacobi(&self) -> std::result::Result<(), JacobiViolation> {
        let d = self.dim();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let mut r = self.bracket_basis_left(k, self.structure(i, j));
                    negate(&mut r);
                    // [[e_i,e_j],e_k] = −[e_k,[e_i,e_j]], same for the others
                    let t2 = self.bracket_basis_left(i, self.structure(j, k));
                    let t3 = self.bracket_basis_left(j, self.structure(k, i));
                    for ((a, b), c) in r.iter_mut().zip(&t2).zip(&t3) {
                        *a -= b;
                        *a -= c;
                    }
                    if r.iter().any(|x| !x.is_zero()) {
                        return Err(JacobiViolation { i, j, k, residual: r });
                    }
                }
            }
        }
        Ok(())
    }

    /// Copy with a new name.
    pub fn renamed(&self, name: impl Into<String>) -> LieAlgebra {
        let mut a = self.clone();
        a.name = name.into();
        a
    }

    /// Same algebra written in a permuted basis: new basis vector `p` is old
    /// basis vector `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> LieAlgebra {
        let d = self.dim();
        assert_eq!(perm.len(), d);
        let mut inv = vec![0; d];
        for (p, &o) in perm.iter().enumerate() {
            inv[o] = p;
        }
        let basis = perm.iter().map(|&o| self.basis[o].clone()).collect();
        let mut b = LieAlgebra::builder(self.name.clone(), basis);
        for (&(i, j), terms) in &self.brackets {
            let t: Vec<_> = terms.iter().map(|(k, c)| (inv[*k], c.clone())).collect();
            b.add(inv[i], inv[j], &t);
        }
        b.build().expect("permutation preserves validity")
    }

    pub fn to_file(&self) -> AlgebraFile {
        AlgebraFile {
            name: self.name.clone(),
            dim: self.dim(),
            basis: self.basis.clone(),
            brackets: self
                .brackets
                .iter()
                .map(|(&(i, j), terms)| BracketEntry {
                    i,
                    j,
                    terms: terms
                        .iter()
                        .map(|(k, c)| (k.to_string(), c.clone()))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("algebra serializes")
    }

    /// Parse, validate and Jacobi-check an algebra file.
    pub fn from_json(text: &str) -> Result<LieAlgebra> {
        let a = AlgebraFile::parse(text)?.into_algebra()?;
        a.check_jacobi()?;
        Ok(a)
    }
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.basis == other.basis && self.brackets == other.brackets
    }
}

impl Eq for LieAlgebra {}

fn negate(v: &mut [Rational]) {
    for x in v {
        *x = -&*x;
    }
}

/// On-disk JSON form of an algebra, indices 0-based with `i < j`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraFile {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub terms: BTreeMap<String, Rational>,
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<AlgebraFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            context: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    /// Structural validation only; Jacobi is left to the caller.
    pub fn into_algebra(self) -> Result<LieAlgebra> {
        let d = self.dim;
        if self.basis.len() != d {
            return Err(Error::Parse {
                context: "basis".into(),
                message: format!("{} names listed but dim is {d}", self.basis.len()),
            });
        }
        let mut b = LieAlgebra::builder(self.name, self.basis);
        let mut seen = HashSet::new();
        for (idx, entry) in self.brackets.iter().enumerate() {
            let ctx = |field: &str| format!("brackets[{idx}].{field}");
            if entry.i >= d || entry.j >= d {
                return Err(Error::Parse {
                    context: ctx("i/j"),
                    message: format!("index out of range for dim {d}"),
                });
            }
            if entry.i >= entry.j {
                return Err(Error::Parse {
                    context: ctx("i/j"),
                    message: format!("i < j required, got i = {}, j = {}", entry.i, entry.j),
                });
            }
            if !seen.insert((entry.i, entry.j)) {
                return Err(Error::Parse {
                    context: ctx("i/j"),
                    message: format!("pair ({}, {}) listed twice", entry.i, entry.j),
                });
            }
            let mut terms = Vec::new();
            for (k, c) in &entry.terms {
                let kk: usize = k.parse().map_err(|_| Error::Parse {
                    context: ctx(&format!("terms[\"{k}\"]")),
                    message: "key is not a basis index".into(),
                })?;
                if kk >= d {
                    return Err(Error::Parse {
                        context: ctx(&format!("terms[\"{k}\"]")),
                        message: format!("index {kk} out of range for dim {d}"),
                    });
                }
                terms.push((kk, c.clone()));
            }
            b.add(entry.i, entry.j, &terms);
        }
        b.build()
    }
}
