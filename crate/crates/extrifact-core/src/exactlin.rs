//! Dense exact linear algebra over a prime field F_p.
//!
//! Everything downstream (hom spaces, cones, homology, searches) reduces to
//! rank / solve / kernel computations done here. Elimination is fully
//! deterministic: pivots are chosen leftmost column first, topmost row first,
//! and pivots are normalized to 1. No floating point anywhere.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Prime field F_p. Copyable context object; all element arithmetic goes
/// through it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    p: u64,
}

/// Residue in 0..p. The owning `Field` is passed explicitly to arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElem(pub u64);

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Characteristic must be prime and small enough that products fit u64.
    pub fn new(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::input(format!(
                "field characteristic {p} is not prime"
            )));
        }
        if p >= 1 << 31 {
            return Err(Error::input(format!("field characteristic {p} too large")));
        }
        Ok(Field { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: i64) -> FieldElem {
        let p = self.p as i64;
        FieldElem(v.rem_euclid(p) as u64)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1 % self.p)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem((a.0 + b.0) % self.p)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem((a.0 + self.p - b.0) % self.p)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem((self.p - a.0) % self.p)
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 * b.0 % self.p)
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero (callers pivot on nonzero).
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(a.0 != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }
}

/// Dense row-major matrix over a fixed field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    field: Field,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds from signed integer rows; entries are reduced mod p.
    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = Matrix::zero(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.elem(v));
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        debug_assert!(r < self.rows && c < self.cols);
        FieldElem(self.data[r * self.cols + c])
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v.0;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = (*a + b) % self.field.p;
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = (*a + self.field.p - b) % self.field.p;
        }
        out
    }

    pub fn neg(&self) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = (self.field.p - *a) % self.field.p;
        }
        out
    }

    pub fn scale(&self, s: FieldElem) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = *a * s.0 % self.field.p;
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let p = self.field.p;
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cell = &mut out.data[i * other.cols + j];
                    *cell = (*cell + a * other.data[k * other.cols + j]) % p;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zero(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut out = Matrix::zero(self.field, self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                out.set(self.rows + i, j, other.get(i, j));
            }
        }
        out
    }

    /// Submatrix given by the kept row and column index lists (in order).
    pub fn select(&self, keep_rows: &[usize], keep_cols: &[usize]) -> Matrix {
        let mut out = Matrix::zero(self.field, keep_rows.len(), keep_cols.len());
        for (i, &r) in keep_rows.iter().enumerate() {
            for (j, &c) in keep_cols.iter().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Matrix {
        self.select(&(0..self.rows).collect::<Vec<_>>(), &[c])
    }

    /// Flattens to a single column (row-major order of entries).
    pub fn vectorize(&self) -> Vec<FieldElem> {
        self.data.iter().map(|&v| FieldElem(v)).collect()
    }

    /// Reduced row echelon form plus pivot column indices.
    ///
    /// Deterministic: columns scanned left to right, pivot row is the topmost
    /// unused row with a nonzero entry, pivots normalized to 1, entries above
    /// and below cleared.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..m.cols {
            if next_row >= m.rows {
                break;
            }
            let pivot_row = (next_row..m.rows).find(|&r| m.get(r, col).0 != 0);
            let Some(pr) = pivot_row else { continue };
            // swap into place
            if pr != next_row {
                for j in 0..m.cols {
                    let a = m.get(next_row, j);
                    let b = m.get(pr, j);
                    m.set(next_row, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = f.inv(m.get(next_row, col));
            for j in 0..m.cols {
                m.set(next_row, j, f.mul(m.get(next_row, j), inv));
            }
            for r in 0..m.rows {
                if r == next_row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.0 == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(next_row, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            next_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Kernel basis as matrix columns, one per free column of the RREF.
    ///
    /// Convention: for free column j the basis vector has 1 at j, the negated
    /// RREF coefficients at the pivot positions, 0 elsewhere. Columns appear
    /// in increasing j, so the result is itself in a fixed echelon shape.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let (r, pivots) = self.rref_with_pivots();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|c| pivot_set[*c].is_none()).collect();
        let mut out = Matrix::zero(f, self.cols, free.len());
        for (k, &j) in free.iter().enumerate() {
            out.set(j, k, f.one());
            for (row, &pc) in pivots.iter().enumerate() {
                let coef = r.get(row, j);
                if coef.0 != 0 {
                    out.set(pc, k, f.neg(coef));
                }
            }
        }
        out
    }

    /// Solves self * x = b (b a column matrix). Returns the deterministic
    /// particular solution with all free variables set to 0, or None.
    pub fn solve(&self, b: &Matrix) -> Option<Vec<FieldElem>> {
        assert_eq!(b.rows, self.rows);
        assert_eq!(b.cols, 1);
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref_with_pivots();
        // inconsistent iff a pivot lands in the rhs column
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![FieldElem(0); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = r.get(row, self.cols);
        }
        Some(x)
    }

    /// Solves self * X = B columnwise; None if any column is inconsistent.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(b.rows, self.rows);
        let mut out = Matrix::zero(self.field, self.cols, b.cols);
        for j in 0..b.cols {
            let x = self.solve(&b.column(j))?;
            for (i, v) in x.iter().enumerate() {
                out.set(i, j, *v);
            }
        }
        Some(out)
    }

    /// Inverse of a square matrix, None if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let aug = self.hstack(&Matrix::identity(self.field, self.rows));
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.len() != self.rows || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        let cols: Vec<usize> = (self.cols..2 * self.cols).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        Some(r.select(&rows, &cols))
    }

    /// Builds a column matrix from a coefficient vector.
    pub fn column_from(field: Field, v: &[FieldElem]) -> Matrix {
        let mut m = Matrix::zero(field, v.len(), 1);
        for (i, e) in v.iter().enumerate() {
            m.set(i, 0, *e);
        }
        m
    }
}

/// Indices of columns of `cand` that extend the column space of `base` to a
/// basis of span(base) + span(cand), i.e. a basis of the quotient.
///
/// Deterministic: RREF pivots of [base | cand], keeping pivots that land in
/// the cand block, in increasing column order.
pub fn quotient_basis_cols(base: &Matrix, cand: &Matrix) -> Vec<usize> {
    assert_eq!(base.rows, cand.rows);
    let aug = base.hstack(cand);
    let (_, pivots) = aug.rref_with_pivots();
    pivots
        .into_iter()
        .filter(|&c| c >= base.cols)
        .map(|c| c - base.cols)
        .collect()
}

/// Coordinates of `v` modulo span(base) with respect to the columns of
/// `comp`, which must be independent modulo span(base). None when `v` lies
/// outside span(base) + span(comp).
///
/// The answer is well defined: any two solutions of [base | comp] x = v have
/// equal comp-components because comp is independent modulo base.
pub fn coords_mod_subspace(base: &Matrix, comp: &Matrix, v: &Matrix) -> Option<Vec<FieldElem>> {
    assert_eq!(base.rows, comp.rows);
    assert_eq!(v.rows, base.rows);
    assert_eq!(v.cols, 1);
    let aug = base.hstack(comp);
    let x = aug.solve(v)?;
    Some(x[base.cols..].to_vec())
}
