use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Echelon, Rational, Subspace};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix with an explicit column count, so that zero-row matrices keep
    /// their width.
    pub fn from_rows_with_cols(cols: usize, rows: Vec<Vec<Rational>>) -> Mat {
        assert!(rows.iter().all(|row| row.len() == cols), "ragged rows");
        Mat {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer convenience constructor, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&a| Rational::from_integer(a)).collect())
                .collect(),
        )
    }

    /// Reinterpret a flat row-major vector.
    pub fn from_flat(rows: usize, cols: usize, data: Vec<Rational>) -> Mat {
        assert_eq!(data.len(), rows * cols, "flat data has wrong length");
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    /// Row-major entries.
    pub fn as_flat(&self) -> &[Rational] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<Rational> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|a| !a.is_zero()).count()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j].add_mul(a, &other[(k, j)]);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        let mut out = vec![Rational::zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                o.add_mul(&self.data[r * self.cols + c], x);
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: &Rational, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            a.add_mul(s, b);
        }
    }

    /// Commutator `self·other − other·self`.
    pub fn commutator(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    /// Reduced row echelon form and its pivot columns. The result has the
    /// same shape as `self`, zero rows last.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let ech = self.echelon();
        let mut rows = ech.sorted_rows();
        let pivots = ech.pivot_columns();
        rows.resize_with(self.rows, || vec![Rational::zero(); self.cols]);
        (Mat::from_rows_with_cols(self.cols, rows), pivots)
    }

    pub fn echelon(&self) -> Echelon {
        let mut ech = Echelon::new(self.cols);
        for r in 0..self.rows {
            if ech.is_full() {
                break;
            }
            ech.insert(self.row(r).to_vec());
        }
        ech
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Determinant by fraction-exact elimination.
    pub fn det(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r * n + c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                for k in 0..n {
                    a.swap(p * n + k, c * n + k);
                }
                det = -det;
            }
            let piv = a[c * n + c].clone();
            det *= &piv;
            let inv = piv.recip();
            for r in c + 1..n {
                if a[r * n + c].is_zero() {
                    continue;
                }
                let f = &a[r * n + c] * &inv;
                for k in c..n {
                    let sub = &f * &a[c * n + k];
                    a[r * n + k] -= &sub;
                }
            }
        }
        det
    }

    /// A solution of `self · v = b` with free variables set to zero.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let n = self.cols;
        let mut ech = Echelon::new(n + 1);
        for (r, rhs) in b.iter().enumerate() {
            let mut row = self.row(r).to_vec();
            row.push(rhs.clone());
            ech.insert(row);
        }
        if ech.pivot_row(n).is_some() {
            return None;
        }
        let mut v = vec![Rational::zero(); n];
        for (c, x) in v.iter_mut().enumerate() {
            if let Some(row) = ech.pivot_row(c) {
                *x = row[n].clone();
            }
        }
        Some(v)
    }

    /// Basis of `{v : self · v = 0}`.
    pub fn kernel_basis(&self) -> Subspace {
        Subspace::from_independent(self.cols, self.echelon().kernel())
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|a| a.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

// Serialized as nested arrays of "p/q" strings.
impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[Rational]> = (0..self.rows).map(|r| self.row(r)).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(deserializer)?;
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(Mat::from_rows_with_cols(c, rows))
    }
}
