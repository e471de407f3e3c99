//! δ-derivations as the kernel of a linear system in the `d²` entries of `D`.
//!
//! A matrix `D` acts on coordinate columns, so `D[k][m]` is the coefficient
//! of `e_k` in `D(e_m)` and the flat coordinate of that entry is `k·d + m`.

use serde::{Deserialize, Serialize};

use crate::exactlin::{Echelon, Mat, Rational, SparseEchelon, Subspace};
use crate::liealg::LieAlgebra;

/// A linear space of `d × d` matrices with an RREF basis in flat
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorSpace {
    pub delta: Rational,
    pub ambient_dim: usize,
    pub dim: usize,
    pub basis: Vec<Mat>,
}

impl OperatorSpace {
    /// Span of the given matrices, canonicalized.
    pub fn from_span(ambient_dim: usize, delta: Rational, mats: impl IntoIterator<Item = Mat>) -> Self {
        let d2 = ambient_dim * ambient_dim;
        let mut ech = Echelon::new(d2);
        for m in mats {
            assert_eq!((m.rows(), m.cols()), (ambient_dim, ambient_dim), "operator shape");
            ech.insert(m.into_flat());
        }
        Self::from_echelon(ambient_dim, delta, &ech)
    }

    fn from_echelon(ambient_dim: usize, delta: Rational, ech: &Echelon) -> Self {
        let basis: Vec<Mat> = ech
            .sorted_rows()
            .into_iter()
            .map(|v| Mat::from_flat(ambient_dim, ambient_dim, v))
            .collect();
        OperatorSpace {
            delta,
            ambient_dim,
            dim: basis.len(),
            basis,
        }
    }

    /// Span of the identity.
    pub fn scalars(ambient_dim: usize, delta: Rational) -> Self {
        Self::from_span(ambient_dim, delta, [Mat::identity(ambient_dim)])
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    /// The space as a subspace of `Q^{d²}`.
    pub fn flat(&self) -> Subspace {
        Subspace::span(
            self.ambient_dim * self.ambient_dim,
            self.basis.iter().map(|m| m.as_flat().to_vec()),
        )
    }

    pub fn echelon(&self) -> Echelon {
        let mut ech = Echelon::new(self.ambient_dim * self.ambient_dim);
        for m in &self.basis {
            ech.insert(m.as_flat().to_vec());
        }
        ech
    }

    pub fn contains(&self, m: &Mat) -> bool {
        self.echelon().contains(m.as_flat())
    }

    /// Coordinates of `m` on the basis, when `m` is in the space.
    pub fn coordinates(&self, m: &Mat) -> Option<Vec<Rational>> {
        self.flat().member(m.as_flat())
    }

    /// `Σ coeffs[i] · basis[i]`.
    pub fn combination(&self, coeffs: &[Rational]) -> Mat {
        assert_eq!(coeffs.len(), self.dim(), "coefficient count");
        let mut out = Mat::zeros(self.ambient_dim, self.ambient_dim);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                out.add_scaled(c, b);
            }
        }
        out
    }

    /// `self ⊆ other` as spans.
    pub fn is_subspace_of(&self, other: &OperatorSpace) -> bool {
        let ech = other.echelon();
        self.basis.iter().all(|m| ech.contains(m.as_flat()))
    }

    /// Same span (the basis is canonical, so this is basis equality).
    pub fn same_span(&self, other: &OperatorSpace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis == other.basis
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("operator spaces serialize")
    }
}

/// Residual `D[e_i,e_j] − δ([De_i,e_j] + [e_i,De_j])` on the first basis pair
/// where it is nonzero.
pub fn identity_residual(alg: &LieAlgebra, d: &Mat, delta: &Rational) -> Option<(usize, usize, Vec<Rational>)> {
    let n = alg.dim();
    assert_eq!((d.rows(), d.cols()), (n, n), "operator shape");
    let cols: Vec<Vec<Rational>> = (0..n).map(|m| d.column(m)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = d.mul_vec(alg.structure(i, j));
            let mut rhs = alg.bracket_unchecked(&cols[i], &alg.basis_vector(j));
            let right = alg.bracket_unchecked(&alg.basis_vector(i), &cols[j]);
            for (r, x) in rhs.iter_mut().zip(&right) {
                *r += x;
            }
            let res: Vec<Rational> = lhs
                .iter()
                .zip(&rhs)
                .map(|(l, r)| l - &(delta * r))
                .collect();
            if res.iter().any(|x| !x.is_zero()) {
                return Some((i, j, res));
            }
        }
    }
    None
}

/// Whether `d` satisfies the δ-derivation identity on every basis pair.
pub fn is_delta_derivation(alg: &LieAlgebra, d: &Mat, delta: &Rational) -> bool {
    identity_residual(alg, d, delta).is_none()
}

/// Basis of `Der_δ(alg)`.
pub fn derivation_space(alg: &LieAlgebra, delta: &Rational) -> OperatorSpace {
    let n = alg.dim();
    let idx = |k: usize, m: usize| k * n + m;
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut row: Vec<(usize, Rational)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let cij = alg.structure(i, j);
            for k in 0..n {
                row.clear();
                for (m, c) in cij.iter().enumerate() {
                    if !c.is_zero() {
                        row.push((idx(k, m), c.clone()));
                    }
                }
                for m in 0..n {
                    let a = alg.constant(m, j, k);
                    if !a.is_zero() {
                        row.push((idx(m, i), -(delta * a)));
                    }
                    let b = alg.constant(i, m, k);
                    if !b.is_zero() {
                        row.push((idx(m, j), -(delta * b)));
                    }
                }
                if !row.is_empty() {
                    rows.push(std::mem::take(&mut row));
                }
            }
        }
    }
    // short equations first keeps fill-in and coefficient growth down
    rows.sort_by_key(Vec::len);
    let mut ech = SparseEchelon::new(n * n);
    for r in &rows {
        ech.insert(r);
    }
    let mats = ech.kernel().into_iter().map(|v| Mat::from_flat(n, n, v));
    OperatorSpace::from_span(n, delta.clone(), mats)
}

/// Whether the space is exactly the scalar multiples of the identity.
pub fn is_trivial_space(space: &OperatorSpace) -> bool {
    space.dim() == 1 && space.contains(&Mat::identity(space.ambient_dim))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutatorReport {
    pub delta1: Rational,
    pub delta2: Rational,
    pub product: Rational,
    pub pairs_checked: usize,
    /// Basis index pairs whose commutator fails the product identity.
    pub failures: Vec<(usize, usize)>,
}

impl CommutatorReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For `D1 ∈ s1` (a δ1-derivation) and `D2 ∈ s2` (a δ2-derivation), checks
/// that every basis commutator `[D1, D2]` is a δ1δ2-derivation.
pub fn commutator_degrades(alg: &LieAlgebra, s1: &OperatorSpace, s2: &OperatorSpace) -> CommutatorReport {
    let product = &s1.delta * &s2.delta;
    let mut failures = Vec::new();
    let mut pairs_checked = 0;
    for (a, d1) in s1.basis.iter().enumerate() {
        for (b, d2) in s2.basis.iter().enumerate() {
            pairs_checked += 1;
            if !is_delta_derivation(alg, &d1.commutator(d2), &product) {
                failures.push((a, b));
            }
        }
    }
    CommutatorReport {
        delta1: s1.delta.clone(),
        delta2: s2.delta.clone(),
        product,
        pairs_checked,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, Family, FamilySpec};
    use crate::exactlin::{q, qi};

    fn half() -> Rational {
        q(1, 2)
    }

    fn der_dim(spec: FamilySpec) -> usize {
        derivation_space(&build(&spec).unwrap(), &half()).dim()
    }

    #[test]
    fn small_examples() {
        assert_eq!(der_dim(FamilySpec::new(Family::SN2, 5)), 2);
        assert_eq!(der_dim(FamilySpec::new(Family::AbelianSolv, 3)), 6);
        assert_eq!(der_dim(FamilySpec::sl2_module(3)), 1);
        assert_eq!(der_dim(FamilySpec::new(Family::Oscillator, 2)), 6);
    }

    #[test]
    fn basis_elements_satisfy_identity() {
        let alg = build(&FamilySpec::new(Family::S3, 5)).unwrap();
        for delta in [half(), qi(1), q(1, 4)] {
            let s = derivation_space(&alg, &delta);
            assert!(s.basis.iter().all(|b| is_delta_derivation(&alg, b, &delta)));
        }
    }

    #[test]
    fn trivial_spaces() {
        let s3 = build(&FamilySpec::new(Family::Schrodinger, 3)).unwrap();
        assert!(is_trivial_space(&derivation_space(&s3, &half())));
        let s2 = build(&FamilySpec::new(Family::Schrodinger, 2)).unwrap();
        let d = derivation_space(&s2, &half());
        assert!(!is_trivial_space(&d));
        assert_eq!(d.dim(), 2);
        let l2 = build(&FamilySpec::sl2_module(2)).unwrap();
        assert_eq!(derivation_space(&l2, &half()).dim(), 2);
    }

    #[test]
    fn commutators_of_half_derivations() {
        let alg = build(&FamilySpec::new(Family::S2, 4)).unwrap();
        let s = derivation_space(&alg, &half());
        let r = commutator_degrades(&alg, &s, &s);
        assert!(r.holds());
        assert_eq!(r.product, q(1, 4));
        assert_eq!(r.pairs_checked, s.dim() * s.dim());
        let sc = OperatorSpace::scalars(alg.dim(), half());
        assert!(commutator_degrades(&alg, &sc, &sc).holds());
    }

    #[test]
    fn derivation_and_half_derivation_commute_into_half() {
        let alg = build(&FamilySpec::new(Family::AbelianSolv, 2)).unwrap();
        let d1 = derivation_space(&alg, &qi(1));
        let dh = derivation_space(&alg, &half());
        let r = commutator_degrades(&alg, &d1, &dh);
        assert!(r.holds());
        for a in &d1.basis {
            for b in &dh.basis {
                assert!(dh.contains(&a.commutator(b)));
            }
        }
    }

    #[test]
    fn json_shape() {
        let alg = build(&FamilySpec::new(Family::SN2, 3)).unwrap();
        let s = derivation_space(&alg, &half());
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["delta"], "1/2");
        assert_eq!(v["dim"], 2);
        assert_eq!(v["basis"].as_array().unwrap().len(), 2);
        let back: OperatorSpace = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }
}
