use super::{Echelon, Mat, Rational};

/// A linear subspace of `Q^ambient_dim` given by linearly independent basis
/// vectors.
///
/// The basis is kept in the order it was supplied so that [`Subspace::member`]
/// can report coordinates on it. [`Subspace::canonical`] gives the RREF basis;
/// equality (`==`) compares spans through that canonical form.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Subspace {
        let basis = (0..ambient_dim)
            .map(|i| unit_vector(ambient_dim, i))
            .collect();
        Subspace { ambient_dim, basis }
    }

    /// Span of arbitrary vectors. Dependent vectors are dropped greedily, so
    /// the kept basis is the earliest independent subsequence.
    pub fn span(ambient_dim: usize, vectors: impl IntoIterator<Item = Vec<Rational>>) -> Subspace {
        let mut ech = Echelon::new(ambient_dim);
        let mut basis = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), ambient_dim, "vector length differs from ambient dimension");
            if ech.is_full() {
                break;
            }
            if ech.insert(v.clone()) {
                basis.push(v);
            }
        }
        Subspace { ambient_dim, basis }
    }

    /// Caller guarantees independence; checked in debug builds.
    pub(crate) fn from_independent(ambient_dim: usize, basis: Vec<Vec<Rational>>) -> Subspace {
        debug_assert!(basis.iter().all(|v| v.len() == ambient_dim));
        debug_assert_eq!(
            Mat::from_rows_with_cols(ambient_dim, basis.clone()).rank(),
            basis.len()
        );
        Subspace { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vec<Rational>> {
        self.basis
    }

    /// Basis vectors stacked as rows.
    pub fn to_mat(&self) -> Mat {
        Mat::from_rows_with_cols(self.ambient_dim, self.basis.clone())
    }

    pub fn echelon(&self) -> Echelon {
        let mut ech = Echelon::new(self.ambient_dim);
        for v in &self.basis {
            ech.insert(v.clone());
        }
        ech
    }

    /// Same span, RREF basis.
    pub fn canonical(&self) -> Subspace {
        Subspace {
            ambient_dim: self.ambient_dim,
            basis: self.echelon().sorted_rows(),
        }
    }

    /// Coordinates of `v` on the basis when `v` lies in the span.
    pub fn member(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient_dim, "vector length differs from ambient dimension");
        let k = self.basis.len();
        if v.iter().all(Rational::is_zero) {
            return Some(vec![Rational::zero(); k]);
        }
        if k == 0 {
            return None;
        }
        // Augmented system [b_1 ... b_k | v]; independence makes the first k
        // columns pivots, so the solution is read off the last column.
        let aug = Mat::from_fn(self.ambient_dim, k + 1, |r, c| {
            if c < k {
                self.basis[c][r].clone()
            } else {
                v[r].clone()
            }
        });
        let ech = aug.echelon();
        if ech.pivot_row(k).is_some() {
            return None;
        }
        Some(
            (0..k)
                .map(|c| ech.pivot_row(c).expect("basis columns are pivots")[k].clone())
                .collect(),
        )
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let ech = self.echelon();
        ech.contains(v)
    }

    pub fn contains_all(&self, vs: &[Vec<Rational>]) -> bool {
        let ech = self.echelon();
        vs.iter().all(|v| ech.contains(v))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        other.contains_all(&self.basis)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        Subspace::span(
            self.ambient_dim,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    /// Basis of `self ∩ other`, built from the kernel of `[A | −B]` where the
    /// columns of `A` and `B` are the two bases.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient dimensions differ");
        let ka = self.basis.len();
        let kb = other.basis.len();
        if ka == 0 || kb == 0 {
            return Subspace::zero(self.ambient_dim);
        }
        let m = Mat::from_fn(self.ambient_dim, ka + kb, |r, c| {
            if c < ka {
                self.basis[c][r].clone()
            } else {
                -&other.basis[c - ka][r]
            }
        });
        let vectors = m.kernel_basis().into_basis().into_iter().map(|coef| {
            let mut v = vec![Rational::zero(); self.ambient_dim];
            for (s, b) in coef[..ka].iter().zip(&self.basis) {
                if s.is_zero() {
                    continue;
                }
                for (o, x) in v.iter_mut().zip(b) {
                    o.add_mul(s, x);
                }
            }
            v
        });
        Subspace::span(self.ambient_dim, vectors)
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && self.canonical().basis == other.canonical().basis
    }
}

impl Eq for Subspace {}

pub fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}
