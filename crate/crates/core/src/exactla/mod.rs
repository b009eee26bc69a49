//! Exact linear algebra over ℚ and 𝔽ℓ, and Smith normal form over ℤ.

mod field;
mod snf;
mod sparse;

pub use field::{fmt_rational, is_prime, parse_rational, scalar_from_rational, Field, FieldKind, PrimeField, Rationals, Scalar};
pub use snf::{
    smith_normal_form, smith_normal_form_with_certificate, sparse_invariant_factors, IntMatrix, SmithCertificate, SmithForm,
};
pub use sparse::{axpy, normalize, rank_of_rows, RowReducer, SpanSolver, SparseVec};

use num_rational::BigRational;

/// Dispatch a block over the concrete field named by a [`FieldKind`].
macro_rules! with_field {
    ($kind:expr, $f:ident => $body:expr) => {
        match $kind {
            $crate::exactla::FieldKind::Rational => {
                let $f = $crate::exactla::Rationals;
                $body
            }
            $crate::exactla::FieldKind::Prime(p) => {
                let $f = $crate::exactla::PrimeField::new(p).expect("FieldKind holds a prime");
                $body
            }
        }
    };
}
pub(crate) use with_field;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaError {
    #[error("matrix mixes coefficient domains: expected {expected}, found {found}")]
    MixedDomain { expected: FieldKind, found: FieldKind },
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("denominator of {value} vanishes modulo {prime}")]
    DenominatorVanishes { value: String, prime: u64 },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A matrix over a single field, stored as sparse rows of tagged scalars.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldKind,
    data: Vec<SparseVec<Scalar>>,
}

impl Matrix {
    pub fn zeros(field: FieldKind, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(field: FieldKind, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i].push((i, Scalar::from_int(field, 1)));
        }
        m
    }

    /// Build from dense rows. Every entry must belong to `field`.
    pub fn from_dense(field: FieldKind, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self, LaError> {
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LaError::Shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for (j, s) in row.into_iter().enumerate() {
                m.set(i, j, s)?;
            }
        }
        Ok(m)
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: FieldKind, cols: usize, rows: &[Vec<i64>]) -> Result<Self, LaError> {
        Matrix::from_dense(
            field,
            cols,
            rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(field, x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.data[r].binary_search_by_key(&c, |e| e.0) {
            Ok(k) => self.data[r][k].1.clone(),
            Err(_) => Scalar::from_int(self.field, 0),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, s: Scalar) -> Result<(), LaError> {
        if r >= self.rows || c >= self.cols {
            return Err(LaError::Shape(format!("index ({r},{c}) outside {}x{}", self.rows, self.cols)));
        }
        if s.kind() != self.field {
            return Err(LaError::MixedDomain {
                expected: self.field,
                found: s.kind(),
            });
        }
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(k) if s.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = s,
            Err(_) if s.is_zero() => {}
            Err(k) => row.insert(k, (c, s)),
        }
        Ok(())
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    /// `self · v` for a dense vector.
    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LaError> {
        if v.len() != self.cols {
            return Err(LaError::Shape(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        with_field!(self.field, f => {
            let x: Vec<_> = v.iter().map(|s| f.from_scalar(s)).collect::<Result<_, _>>()?;
            Ok(self
                .data
                .iter()
                .map(|row| {
                    let mut acc = f.zero();
                    for (c, s) in row {
                        acc = f.add(&acc, &f.mul(&f.from_scalar(s).expect("checked on insert"), &x[*c]));
                    }
                    f.to_scalar(&acc)
                })
                .collect())
        })
    }

    fn typed_rows<F: Field>(&self, f: &F) -> Vec<SparseVec<F::Elem>> {
        self.data
            .iter()
            .map(|r| r.iter().map(|(c, s)| (*c, f.from_scalar(s).expect("checked on insert"))).collect())
            .collect()
    }
}


pub fn rank(m: &Matrix) -> usize {
    with_field!(m.field, f => rank_of_rows(&f, m.cols, m.typed_rows(&f)))
}

/// Basis of the right null space. One vector per non-pivot column `j` of the
/// reduced row echelon form, in increasing `j`: it has a 1 at `j`, zeros at the
/// other non-pivot columns, and the forced values at pivot columns.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
    with_field!(m.field, f => {
        let mut red = RowReducer::new(f, m.cols);
        for r in m.typed_rows(&f) {
            red.insert(r);
        }
        red.kernel_basis()
            .into_iter()
            .map(|v| {
                let mut dense = vec![f.to_scalar(&f.zero()); m.cols];
                for (c, x) in v {
                    dense[c] = f.to_scalar(&x);
                }
                dense
            })
            .collect()
    })
}

/// Reduced row echelon form with the same pivot convention as [`kernel_basis`].
pub fn rref(m: &Matrix) -> Matrix {
    with_field!(m.field, f => {
        let mut red = RowReducer::new(f, m.cols);
        for r in m.typed_rows(&f) {
            red.insert(r);
        }
        let rows = red.reduced_rows();
        let mut out = Matrix::zeros(m.field, rows.len(), m.cols);
        for (i, r) in rows.into_iter().enumerate() {
            out.data[i] = r.into_iter().map(|(c, x)| (c, f.to_scalar(&x))).collect();
        }
        out
    })
}

/// Some solution `x` of `m · x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LaError> {
    if b.len() != m.rows {
        return Err(LaError::Shape(format!("right-hand side of length {} for {} rows", b.len(), m.rows)));
    }
    with_field!(m.field, f => {
        // Columns of m are the spanning vectors.
        let mut cols: Vec<SparseVec<_>> = vec![Vec::new(); m.cols];
        for (i, row) in m.typed_rows(&f).into_iter().enumerate() {
            for (c, x) in row {
                cols[c].push((i, x));
            }
        }
        let mut solver = SpanSolver::new(f);
        for c in cols {
            solver.push(c);
        }
        let target: SparseVec<_> = b
            .iter()
            .enumerate()
            .map(|(i, s)| f.from_scalar(s).map(|x| (i, x)))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|e| !f.is_zero(&e.1))
            .collect();
        Ok(solver.express(target).map(|x| {
            let mut dense = vec![f.to_scalar(&f.zero()); m.cols];
            for (c, v) in x {
                dense[c] = f.to_scalar(&v);
            }
            dense
        }))
    })
}

/// Convert an exact rational to the element type of a concrete field.
pub fn convert<F: Field>(f: &F, q: &BigRational) -> Result<F::Elem, LaError> {
    f.from_rational(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Scalar {
        Scalar::from_int(FieldKind::Rational, n)
    }

    #[test]
    fn identity_rank() {
        assert_eq!(rank(&Matrix::identity(FieldKind::Rational, 3)), 3);
    }

    #[test]
    fn two_vanishes_mod_two() {
        let m = Matrix::from_i64(FieldKind::Prime(2), 1, &[vec![2]]).unwrap();
        assert_eq!(rank(&m), 0);
    }

    #[test]
    fn zero_matrix_kernel_is_standard_basis() {
        let m = Matrix::zeros(FieldKind::Rational, 2, 3);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]]);
    }

    #[test]
    fn kernel_of_row_of_ones() {
        let m = Matrix::from_i64(FieldKind::Rational, 2, &[vec![1, 1]]).unwrap();
        assert_eq!(kernel_basis(&m), vec![vec![q(-1), q(1)]]);
    }

    #[test]
    fn mixed_domain_is_rejected() {
        let mut m = Matrix::zeros(FieldKind::Rational, 1, 1);
        let err = m.set(0, 0, Scalar::from_int(FieldKind::Prime(3), 1)).unwrap_err();
        assert!(matches!(err, LaError::MixedDomain { .. }));
    }

    #[test]
    fn snf_small_cases() {
        let f = smith_normal_form(&IntMatrix::from_i64(1, &[vec![10]]).unwrap());
        assert_eq!(f.invariant_factors, vec![BigInt::from(10)]);
        assert_eq!(f.free_rank, 0);
        let f = smith_normal_form(&IntMatrix::from_i64(2, &[vec![2, 0], vec![0, 3]]).unwrap());
        assert_eq!(f.invariant_factors, vec![BigInt::from(1), BigInt::from(6)]);
        let f = smith_normal_form(&IntMatrix::from_i64(1, &[vec![0]]).unwrap());
        assert!(f.invariant_factors.is_empty());
        assert_eq!(f.free_rank, 1);
    }

    #[test]
    fn solve_finds_preimage() {
        let m = Matrix::from_i64(FieldKind::Rational, 2, &[vec![1, 2], vec![3, 4]]).unwrap();
        let x = solve(&m, &[q(5), q(6)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![q(5), q(6)]);
        let singular = Matrix::from_i64(FieldKind::Rational, 2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(solve(&singular, &[q(1), q(2)]).unwrap(), None);
    }

    #[test]
    fn field_parsing() {
        assert_eq!("Q".parse::<FieldKind>().unwrap(), FieldKind::Rational);
        assert_eq!("F5".parse::<FieldKind>().unwrap(), FieldKind::Prime(5));
        assert!("F4".parse::<FieldKind>().is_err());
    }
}
