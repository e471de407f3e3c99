use deltader_core::exactlin::{Poly, SparseEchelon, Subspace};
use deltader_core::{q, qi, Mat, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    // small integers with many zeros so ranks vary
    proptest::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], rows * cols)
        .prop_map(move |v| Mat::from_flat(rows, cols, v.into_iter().map(qi).collect()))
}

fn sized_matrix() -> impl Strategy<Value = Mat> {
    (1usize..=5, 1usize..=6).prop_flat_map(|(r, c)| matrix(r, c))
}

proptest! {
    #[test]
    fn field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Rational::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.recip(), Rational::one());
        }
    }

    #[test]
    fn display_parse_roundtrip(a in rational()) {
        let back: Rational = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn rref_is_idempotent_and_preserves_rank(m in sized_matrix()) {
        let (r, pivots) = m.rref();
        prop_assert_eq!(pivots.len(), m.rank());
        let (r2, pivots2) = r.rref();
        prop_assert_eq!(&r2, &r);
        prop_assert_eq!(pivots2, pivots);
    }

    #[test]
    fn rank_nullity(m in sized_matrix()) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.dim(), m.cols());
        for v in k.basis() {
            prop_assert!(m.mul_vec(v).iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn sparse_and_dense_kernels_agree(m in sized_matrix()) {
        let mut s = SparseEchelon::new(m.cols());
        for r in 0..m.rows() {
            let row: Vec<(usize, Rational)> = m.row(r).iter().cloned().enumerate().filter(|(_, a)| !a.is_zero()).collect();
            s.insert(&row);
        }
        prop_assert_eq!(s.rank(), m.rank());
        let sparse = Subspace::span(m.cols(), s.kernel());
        prop_assert_eq!(sparse, m.kernel_basis());
    }

    #[test]
    fn solve_finds_a_solution(m in sized_matrix(), x in proptest::collection::vec(rational(), 6)) {
        let x = &x[..m.cols()];
        let b = m.mul_vec(x);
        let y = m.solve(&b).expect("consistent by construction");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(3, 3), b in matrix(3, 3)) {
        prop_assert_eq!(a.mul(&b).det(), &a.det() * &b.det());
        prop_assert_eq!(a.det().is_zero(), a.rank() < 3);
    }

    #[test]
    fn dimension_formula(a in matrix(3, 5), b in matrix(3, 5)) {
        let u = Subspace::span(5, a.row_vecs());
        let w = Subspace::span(5, b.row_vecs());
        prop_assert_eq!(u.sum(&w).dim() + u.intersect(&w).dim(), u.dim() + w.dim());
        prop_assert!(u.intersect(&w).is_subspace_of(&u));
    }

    #[test]
    fn interpolation_roundtrip(cs in proptest::collection::vec(rational(), 1..6)) {
        let p = Poly::new(cs.clone());
        let xs: Vec<Rational> = (0..cs.len() as i64).map(qi).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| p.eval(x)).collect();
        prop_assert_eq!(Poly::interpolate(&xs, &ys), p);
    }
}

#[test]
fn rational_roots_of_products() {
    // (x - 2/3)(x + 4)(x^2 + 1)
    let lin = |r: Rational| Poly::new(vec![-r, qi(1)]);
    let quad = Poly::new(vec![qi(1), qi(0), qi(1)]);
    let mut coeffs = vec![Rational::zero(); 5];
    let a = lin(q(2, 3));
    let b = lin(qi(-4));
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            for (k, z) in quad.coeffs().iter().enumerate() {
                coeffs[i + j + k] += &(&(x * y) * z);
            }
        }
    }
    let mut roots = Poly::new(coeffs).rational_roots(1_000_000).unwrap();
    roots.sort();
    assert_eq!(roots, vec![qi(-4), q(2, 3)]);
}

#[test]
fn kernel_of_the_zero_map_is_everything() {
    let k = Mat::zeros(2, 4).kernel_basis();
    assert_eq!(k, Subspace::full(4));
}
