use std::collections::BTreeMap;

use super::Rational;

/// Sparse row as `(column, value)` pairs with strictly increasing columns
/// and no stored zeros.
pub type SparseRow = Vec<(usize, Rational)>;

/// Reduced row echelon form over sparse rows.
///
/// Rows are fully reduced, so subtracting a pivot row from a vector never
/// reintroduces another pivot column and a single pass reduces any vector.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    cols: usize,
    rows: Vec<SparseRow>,
    pivots: Vec<usize>,
    pivot_of_col: Vec<Option<usize>>,
}

impl SparseEchelon {
    pub fn new(cols: usize) -> SparseEchelon {
        SparseEchelon {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of_col: vec![None; cols],
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_map(&self, v: &mut BTreeMap<usize, Rational>) {
        let hits: Vec<(usize, Rational)> = v
            .iter()
            .filter_map(|(&c, a)| self.pivot_of_col[c].map(|r| (r, a.clone())))
            .collect();
        for (r, f) in hits {
            for (c, a) in &self.rows[r] {
                let e = v.entry(*c).or_insert_with(Rational::zero);
                e.sub_mul(&f, a);
                if e.is_zero() {
                    v.remove(c);
                }
            }
        }
    }

    /// Insert a row; returns `true` when the rank grew.
    pub fn insert(&mut self, row: &[(usize, Rational)]) -> bool {
        let mut v: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, a) in row {
            assert!(*c < self.cols, "column {c} out of range");
            if a.is_zero() {
                continue;
            }
            let e = v.entry(*c).or_insert_with(Rational::zero);
            *e += a;
            if e.is_zero() {
                v.remove(c);
            }
        }
        self.reduce_map(&mut v);
        let Some((&p, lead)) = v.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        let new_row: SparseRow = v.into_iter().map(|(c, a)| (c, a * &inv)).collect();
        for old in &mut self.rows {
            let Ok(pos) = old.binary_search_by_key(&p, |(c, _)| *c) else {
                continue;
            };
            let f = old[pos].1.clone();
            let mut merged: BTreeMap<usize, Rational> = old.drain(..).collect();
            for (c, a) in &new_row {
                let e = merged.entry(*c).or_insert_with(Rational::zero);
                e.sub_mul(&f, a);
                if e.is_zero() {
                    merged.remove(c);
                }
            }
            *old = merged.into_iter().collect();
        }
        self.pivot_of_col[p] = Some(self.rows.len());
        self.pivots.push(p);
        self.rows.push(new_row);
        true
    }

    /// Null space basis, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        for f in 0..self.cols {
            if self.pivot_of_col[f].is_some() {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if let Ok(pos) = row.binary_search_by_key(&f, |(c, _)| *c) {
                    v[p] = -&row[pos].1;
                }
            }
            out.push(v);
        }
        out
    }
}
