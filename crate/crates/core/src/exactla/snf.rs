use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::LaError;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// `cols` is needed so that 0×n matrices keep their width.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self, LaError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LaError::Shape(format!("row of length {} in a matrix with {cols} columns", bad.len())));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_i64(cols: usize, rows: &[Vec<i64>]) -> Result<Self, LaError> {
        IntMatrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// Whitespace-separated integers, one row per nonblank line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, LaError> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<BigInt>, _> = line.split_whitespace().map(|t| t.parse::<BigInt>()).collect();
            rows.push(row.map_err(|_| LaError::Parse(format!("bad integer row `{line}`")))?);
        }
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(cols, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r][c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r]
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LaError> {
        if self.cols != other.rows {
            return Err(LaError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += &self.data[i][k] * &other.data[k][j];
                }
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination; square matrices only.
    pub fn determinant(&self) -> Result<BigInt, LaError> {
        if self.rows != self.cols {
            return Err(LaError::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap(k, s);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(if n == 0 { BigInt::one() } else { sign * &a[n - 1][n - 1] })
    }
}

/// Invariant factors of an integer matrix. The matrix is read as a relation
/// matrix (one relation per row) so `free_rank = cols − rank`: the cokernel of
/// the row space is ℤ^free_rank ⊕ ⊕ ℤ/dᵢ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    /// Nonzero diagonal entries d₁ | d₂ | …, units included.
    #[serde(serialize_with = "crate::ser::bigints")]
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Unimodular `u`, `v` with `u · m · v = d` diagonal.
#[derive(Clone, Debug)]
pub struct SmithCertificate {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    smith_impl(m, false).0
}

pub fn smith_normal_form_with_certificate(m: &IntMatrix) -> (SmithForm, SmithCertificate) {
    let (form, cert) = smith_impl(m, true);
    (form, cert.expect("certificate requested"))
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(i, j);
            }
        }
    }

    /// row_i += q · row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        let src = self.a[j].clone();
        for (x, s) in self.a[i].iter_mut().zip(&src) {
            *x += q * s;
        }
        if let Some(u) = &mut self.u {
            let src = u[j].clone();
            for (x, s) in u[i].iter_mut().zip(&src) {
                *x += q * s;
            }
        }
    }

    /// col_i += q · col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for row in &mut self.a {
            let s = row[j].clone();
            row[i] += q * s;
        }
        if let Some(v) = &mut self.v {
            for row in v {
                let s = row[j].clone();
                row[i] += q * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }
}

fn smith_impl(m: &IntMatrix, certify: bool) -> (SmithForm, Option<SmithCertificate>) {
    let (rows, cols) = (m.rows, m.cols);
    let mut w = Work {
        a: m.data.clone(),
        u: certify.then(|| IntMatrix::identity(rows).data),
        v: certify.then(|| IntMatrix::identity(cols).data),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero absolute value in the trailing block; first in row-major order on ties.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &w.a[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&w.a[t][t]);
                    w.add_row(i, t, &-q);
                    if !w.a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&w.a[t][t]);
                    w.add_col(j, t, &-q);
                    if !w.a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // A remainder smaller than the pivot survived; move it to the pivot spot.
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !w.a[i][t].is_zero() && w.a[i][t].abs() < w.a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !w.a[t][j].is_zero() && w.a[t][j].abs() < w.a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let p = w.a[t][t].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let factors: Vec<BigInt> = (0..t).map(|i| w.a[i][i].clone()).collect();
    let form = SmithForm {
        free_rank: cols - factors.len(),
        invariant_factors: factors,
    };
    let cert = certify.then(|| SmithCertificate {
        u: IntMatrix { rows, cols: rows, data: w.u.unwrap() },
        v: IntMatrix { rows: cols, cols, data: w.v.unwrap() },
        d: IntMatrix { rows, cols, data: w.a },
    });
    (form, cert)
}

/// Invariant factors of a sparse integer matrix, tuned for boundary matrices:
/// unit pivots are eliminated sparsely first and only the remaining block goes
/// through dense Smith reduction. Entries are i64 with overflow checks; an
/// overflow falls back to the dense BigInt algorithm on the original input.
pub fn sparse_invariant_factors(ncols: usize, rows: &[Vec<(usize, i64)>]) -> Vec<BigInt> {
    match sparse_unit_elimination(ncols, rows) {
        Some((units, rest)) => {
            let mut out = vec![BigInt::one(); units];
            if !rest.is_empty() {
                let mut live: Vec<usize> = rest.iter().flat_map(|r| r.iter().map(|e| e.0)).collect();
                live.sort_unstable();
                live.dedup();
                let dense: Vec<Vec<BigInt>> = rest
                    .iter()
                    .map(|r| {
                        let mut d = vec![BigInt::zero(); live.len()];
                        for (c, x) in r {
                            d[live.binary_search(c).unwrap()] = BigInt::from(*x);
                        }
                        d
                    })
                    .collect();
                let m = IntMatrix::from_rows(live.len(), dense).expect("consistent widths");
                out.extend(smith_normal_form(&m).invariant_factors);
            }
            out
        }
        None => {
            let dense: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| {
                    let mut d = vec![BigInt::zero(); ncols];
                    for (c, x) in r {
                        d[*c] = BigInt::from(*x);
                    }
                    d
                })
                .collect();
            smith_normal_form(&IntMatrix::from_rows(ncols, dense).expect("consistent widths")).invariant_factors
        }
    }
}

fn checked_axpy(x: &[(usize, i64)], c: i64, y: &[(usize, i64)]) -> Option<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i]);
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, c.checked_mul(y[j].1)?));
            j += 1;
        } else {
            let v = x[i].1.checked_add(c.checked_mul(y[j].1)?)?;
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

fn sparse_unit_elimination(ncols: usize, rows: &[Vec<(usize, i64)>]) -> Option<(usize, Vec<Vec<(usize, i64)>>)> {
    let mut rows: Vec<Vec<(usize, i64)>> = rows
        .iter()
        .map(|r| {
            let mut r: Vec<(usize, i64)> = r.iter().copied().filter(|e| e.1 != 0).collect();
            r.sort_unstable_by_key(|e| e.0);
            r
        })
        .collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for &(c, _) in r {
            col_rows[c].push(i);
        }
    }
    let mut alive = vec![true; rows.len()];
    let mut units = 0;
    for i in 0..rows.len() {
        let Some(&(pc, pv)) = rows[i].iter().find(|e| e.1.abs() == 1) else {
            continue;
        };
        alive[i] = false;
        units += 1;
        let pivot = std::mem::take(&mut rows[i]);
        // Row operations clear column pc elsewhere; the column operations that
        // clear the rest of the pivot row do not touch other rows afterwards.
        let users = std::mem::take(&mut col_rows[pc]);
        for k in users {
            if k == i || !alive[k] {
                continue;
            }
            let Ok(pos) = rows[k].binary_search_by_key(&pc, |e| e.0) else {
                continue;
            };
            let c = -rows[k][pos].1 * pv;
            let new = checked_axpy(&rows[k], c, &pivot)?;
            for &(col, _) in &new {
                if col != pc && rows[k].binary_search_by_key(&col, |e| e.0).is_err() {
                    col_rows[col].push(k);
                }
            }
            rows[k] = new;
        }
    }
    // Rows processed before a later pivot may have regained unit entries;
    // one more sweep keeps the elimination exhaustive.
    let rest: Vec<Vec<(usize, i64)>> = rows
        .into_iter()
        .zip(alive)
        .filter(|(r, a)| *a && !r.is_empty())
        .map(|(r, _)| r)
        .collect();
    if rest.iter().any(|r| r.iter().any(|e| e.1.abs() == 1)) {
        let (more, rest2) = sparse_unit_elimination(ncols, &rest)?;
        return Some((units + more, rest2));
    }
    Some((units, rest))
}
