use super::Rational;

/// Incrementally maintained reduced row echelon form.
///
/// Rows are kept fully reduced: every pivot column is zero in every other
/// row and the pivot entry is one. Rows are stored in insertion order;
/// [`Echelon::sorted_rows`] returns them ordered by pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    // column -> row index, usize::MAX when the column is free
    pivot_of_col: Vec<usize>,
}

impl Echelon {
    pub fn new(cols: usize) -> Echelon {
        Echelon {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of_col: vec![usize::MAX; cols],
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn pivot_row(&self, col: usize) -> Option<&[Rational]> {
        match self.pivot_of_col[col] {
            usize::MAX => None,
            r => Some(&self.rows[r]),
        }
    }

    /// Reduce `v` in place against the stored pivots. Afterwards `v` is zero
    /// in every pivot column.
    pub fn reduce(&self, v: &mut [Rational]) {
        debug_assert_eq!(v.len(), self.cols);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (c, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    v[c].sub_mul(&f, a);
                }
            }
        }
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Rational::is_zero)
    }

    /// Insert a row. Returns `true` when it was independent of the rows
    /// already present (the rank grew).
    pub fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        if self.is_full() {
            return false;
        }
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|a| !a.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for a in v.iter_mut().skip(p) {
            if !a.is_zero() {
                *a *= &inv;
            }
        }
        let nz: Vec<usize> = (p..self.cols).filter(|&c| !v[c].is_zero()).collect();
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for &c in &nz {
                row[c].sub_mul(&f, &v[c]);
            }
        }
        self.pivot_of_col[p] = self.rows.len();
        self.pivots.push(p);
        self.rows.push(v);
        true
    }

    /// Pivot columns in increasing order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut p = self.pivots.clone();
        p.sort_unstable();
        p
    }

    /// Nonzero rows of the reduced form, ordered by pivot column.
    pub fn sorted_rows(&self) -> Vec<Vec<Rational>> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_unstable_by_key(|&i| self.pivots[i]);
        idx.into_iter().map(|i| self.rows[i].clone()).collect()
    }

    /// Basis of the null space `{v : row · v = 0 for every row}`: one vector
    /// per free column, with a one in that column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        for f in 0..self.cols {
            if self.pivot_of_col[f] != usize::MAX {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !row[f].is_zero() {
                    v[p] = -&row[f];
                }
            }
            out.push(v);
        }
        out
    }
}
