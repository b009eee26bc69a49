use super::field::Field;

/// Sparse vector: strictly increasing column indices, no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// `x + c·y` for sorted sparse vectors.
pub fn axpy<F: Field>(f: &F, x: &[(usize, F::Elem)], c: &F::Elem, y: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            let v = f.mul(c, &y[j].1);
            if !f.is_zero(&v) {
                out.push((y[j].0, v));
            }
            j += 1;
        } else {
            let v = f.add(&x[i].1, &f.mul(c, &y[j].1));
            if !f.is_zero(&v) {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Normalize a list of (column, value) pairs: sort, merge duplicates, drop zeros.
pub fn normalize<F: Field>(f: &F, mut v: Vec<(usize, F::Elem)>) -> SparseVec<F::Elem> {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = f.add(&last.1, &x),
            _ => out.push((c, x)),
        }
    }
    out.retain(|e| !f.is_zero(&e.1));
    out
}

fn scale<F: Field>(f: &F, c: &F::Elem, v: &mut SparseVec<F::Elem>) {
    for e in v.iter_mut() {
        e.1 = f.mul(c, &e.1);
    }
}

/// Online row echelon form. Rows are inserted one at a time; each stored row is
/// monic with a distinct leading column. Pivot choice is the first nonzero
/// entry of the reduced incoming row, so results depend only on insertion order.
#[derive(Clone, Debug)]
pub struct RowReducer<F: Field> {
    field: F,
    ncols: usize,
    pivot_of_col: Vec<Option<usize>>,
    rows: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> RowReducer<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        RowReducer {
            field,
            ncols,
            pivot_of_col: vec![None; ncols],
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Eliminate leading entries against the stored pivots until the leading
    /// column is new (or the row vanishes).
    pub fn reduce(&self, mut row: SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut start = 0;
        loop {
            let Some(pos) = (start..row.len()).find(|&k| self.pivot_of_col[row[k].0].is_some()) else {
                return row;
            };
            let (col, ref val) = row[pos];
            let p = self.pivot_of_col[col].unwrap();
            let c = f.neg(val);
            row = axpy(f, &row, &c, &self.rows[p]);
            start = pos;
        }
    }

    /// Insert a row; returns true when it was independent of the earlier ones.
    pub fn insert(&mut self, row: SparseVec<F::Elem>) -> bool {
        let mut r = self.reduce(row);
        if r.is_empty() {
            return false;
        }
        let inv = self.field.inv(&r[0].1);
        scale(&self.field, &inv, &mut r);
        self.pivot_of_col[r[0].0] = Some(self.rows.len());
        self.rows.push(r);
        true
    }

    /// Basis of the right null space of the inserted rows, one vector per
    /// non-pivot column `j` (in increasing order): entry 1 at `j`, zero at the
    /// other free columns, and the values forced at pivot columns.
    pub fn kernel_basis(&self) -> Vec<SparseVec<F::Elem>> {
        let f = &self.field;
        let rref = self.reduced_rows();
        let pivot_cols: Vec<usize> = rref.iter().map(|r| r[0].0).collect();
        let mut is_pivot = vec![false; self.ncols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for j in (0..self.ncols).filter(|&j| !is_pivot[j]) {
            let mut v: SparseVec<F::Elem> = vec![(j, f.one())];
            for r in &rref {
                if let Ok(k) = r.binary_search_by_key(&j, |e| e.0) {
                    v.push((r[0].0, f.neg(&r[k].1)));
                }
            }
            v.sort_by_key(|e| e.0);
            basis.push(v);
        }
        basis
    }

    /// Fully reduced rows (RREF), sorted by pivot column.
    pub fn reduced_rows(&self) -> Vec<SparseVec<F::Elem>> {
        let f = &self.field;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.rows[i][0].0);
        let mut rref: Vec<SparseVec<F::Elem>> = order.iter().map(|&i| self.rows[i].clone()).collect();
        // Back-substitute from the last pivot upward.
        for i in (0..rref.len()).rev() {
            let (pc, pivot) = (rref[i][0].0, rref[i].clone());
            for row in rref.iter_mut().take(i) {
                if let Ok(k) = row.binary_search_by_key(&pc, |e| e.0) {
                    let c = f.neg(&row[k].1);
                    *row = axpy(f, row, &c, &pivot);
                }
            }
        }
        rref
    }
}

/// Rank of a list of sparse rows.
pub fn rank_of_rows<F: Field>(field: &F, ncols: usize, rows: impl IntoIterator<Item = SparseVec<F::Elem>>) -> usize {
    let mut red = RowReducer::new(field.clone(), ncols);
    for r in rows {
        red.insert(r);
    }
    red.rank()
}

/// Expresses vectors as linear combinations of a fixed spanning list.
/// Every stored echelon row remembers which combination of the inserted
/// vectors produced it.
#[derive(Clone, Debug)]
pub struct SpanSolver<F: Field> {
    field: F,
    pivot_of_col: std::collections::HashMap<usize, usize>,
    rows: Vec<(SparseVec<F::Elem>, SparseVec<F::Elem>)>,
    inserted: usize,
}

impl<F: Field> SpanSolver<F> {
    pub fn new(field: F) -> Self {
        SpanSolver {
            field,
            pivot_of_col: Default::default(),
            rows: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_tracked(&self, mut v: SparseVec<F::Elem>, mut combo: SparseVec<F::Elem>) -> (SparseVec<F::Elem>, SparseVec<F::Elem>) {
        let f = &self.field;
        let mut start = 0;
        loop {
            let Some(pos) = (start..v.len()).find(|&k| self.pivot_of_col.contains_key(&v[k].0)) else {
                return (v, combo);
            };
            let p = self.pivot_of_col[&v[pos].0];
            let c = f.neg(&v[pos].1);
            v = axpy(f, &v, &c, &self.rows[p].0);
            combo = axpy(f, &combo, &c, &self.rows[p].1);
            start = pos;
        }
    }

    /// Add the next spanning vector (its index is the insertion count).
    /// Returns whether it was independent of the previous ones.
    pub fn push(&mut self, v: SparseVec<F::Elem>) -> bool {
        let f = &self.field;
        let idx = self.inserted;
        self.inserted += 1;
        let (mut r, mut combo) = self.reduce_tracked(v, vec![(idx, f.one())]);
        if r.is_empty() {
            return false;
        }
        let inv = f.inv(&r[0].1);
        scale(f, &inv, &mut r);
        scale(f, &inv, &mut combo);
        self.pivot_of_col.insert(r[0].0, self.rows.len());
        self.rows.push((r, combo));
        true
    }

    /// Coefficients `x` with `Σ x_i v_i = target`, or `None` if `target` is not
    /// in the span. When the spanning list is independent the answer is unique.
    pub fn express(&self, target: SparseVec<F::Elem>) -> Option<SparseVec<F::Elem>> {
        let f = &self.field;
        let (rest, combo) = self.reduce_tracked(target, Vec::new());
        if !rest.is_empty() {
            return None;
        }
        let mut out = combo;
        for e in out.iter_mut() {
            e.1 = f.neg(&e.1);
        }
        Some(out)
    }
}
