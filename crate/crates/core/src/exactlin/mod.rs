//! Exact rational scalars, dense matrices and subspaces.
//!
//! Every dimension reported by this crate is a rank computed here, so all
//! arithmetic is exact: no floating point anywhere.

mod echelon;
mod mat;
mod poly;
mod rational;
mod sparse;
mod subspace;

pub use echelon::Echelon;
pub use mat::Mat;
pub use poly::Poly;
pub use rational::{q, qi, ParseRationalError, Rational};
pub use sparse::{SparseEchelon, SparseRow};
pub use subspace::{unit_vector, Subspace};

/// Dot product of two equal-length vectors.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        acc.add_mul(x, y);
    }
    acc
}

/// `Σ coeffs[i] · vectors[i]`.
pub fn linear_combination(len: usize, coeffs: &[Rational], vectors: &[Vec<Rational>]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            o.add_mul(c, x);
        }
    }
    out
}
