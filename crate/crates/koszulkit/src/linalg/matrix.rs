use std::fmt;

use super::scalar::{Field, Scalar};
use super::subspace::Subspace;
use crate::error::{Error, Result};

pub type Vector = Vec<Scalar>;

/// Dense row-major matrix, shaped target x source: it acts on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vector]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_cols(field: Field, rows: usize, cols: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vector> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.int(x)).collect())
            .collect();
        Matrix::from_rows(field, cols, &rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Matrix product; zero entries of either factor are skipped.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "product shape mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "apply shape mismatch");
        let mut out = vec![self.field.zero(); self.rows];
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = &self.data[i * self.cols + k];
                if !a.is_zero() {
                    *o = &*o + &(a * x);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix { data, ..*self }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix { data, ..*self }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix { data, ..*self }
    }

    /// Kronecker product; index (i, k) of the result is `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let rows: Vec<Vector> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend_from_slice(other.row(i));
                r
            })
            .collect();
        Matrix::from_rows(self.field, self.cols + other.cols, &rows)
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row-echelon form with the zero rows kept at the bottom.
    pub fn rref(&self) -> Matrix {
        let mut rows = self.row_vecs();
        let piv = rref_rows(&mut rows, self.cols);
        let rank = piv.len();
        let mut out = Matrix::zeros(self.field, self.rows, self.cols);
        for (i, r) in rows.into_iter().take(rank).enumerate() {
            out.data[i * self.cols..(i + 1) * self.cols].clone_from_slice(&r);
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.row_vecs();
        rref_rows(&mut rows, self.cols).len()
    }

    /// Null space inside the source space.
    pub fn kernel(&self) -> Subspace {
        let mut rows = self.row_vecs();
        let piv = rref_rows(&mut rows, self.cols);
        let mut is_piv = vec![None; self.cols];
        for (i, &p) in piv.iter().enumerate() {
            is_piv[p] = Some(i);
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_piv[f].is_some() {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -&rows[i][f];
            }
            basis.push(v);
        }
        Subspace::span(self.field, self.cols, basis)
    }

    /// Column space, as a subspace of the target.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.field, self.rows, self.col_vecs())
    }

    /// Some solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        let bm = Matrix::from_cols(self.field, self.rows, &[b.to_vec()]);
        self.solve_matrix(&bm).map(|x| x.col(0))
    }

    /// Some `X` with `self * X = b`, or `None` when inconsistent.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "solve shape mismatch");
        let mut rows = self.hstack(b).row_vecs();
        let piv = rref_rows(&mut rows, self.cols + b.cols);
        if piv.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (i, &p) in piv.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, rows[i][self.cols + j].clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        if self.rank() != self.rows {
            return None;
        }
        self.solve_matrix(&Matrix::identity(self.field, self.rows))
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Restricts to selected rows.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let rows: Vec<Vector> = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Matrix::from_rows(self.field, self.cols, &rows)
    }

    pub fn check_shape(&self, rows: usize, cols: usize) -> Result<()> {
        if self.rows != rows || self.cols != cols {
            return Err(Error::Dimension(format!(
                "expected {rows}x{cols} matrix, found {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// Gauss-Jordan elimination in place. Returns pivot columns; the first
/// `pivots.len()` rows form the reduced basis and the rest are dropped.
pub fn rref_rows(rows: &mut Vec<Vector>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        let nz: Vec<usize> = (c..ncols).filter(|&j| !rows[r][j].is_zero()).collect();
        if !inv.is_one() {
            for &j in &nz {
                rows[r][j] = &rows[r][j] * &inv;
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (prow, tail) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(tail.iter_mut()) {
            let f = other[c].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                let t = &f * &prow[j];
                other[j] = &other[j] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Vector helpers.
pub mod vecops {
    use super::{Field, Scalar, Vector};

    pub fn zero(field: Field, n: usize) -> Vector {
        vec![field.zero(); n]
    }

    pub fn unit(field: Field, n: usize, i: usize) -> Vector {
        let mut v = zero(field, n);
        v[i] = field.one();
        v
    }

    pub fn is_zero(v: &[Scalar]) -> bool {
        v.iter().all(Scalar::is_zero)
    }

    /// `dst += c * src`.
    pub fn axpy(dst: &mut [Scalar], c: &Scalar, src: &[Scalar]) {
        if c.is_zero() {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.is_zero() {
                *d = &*d + &(c * s);
            }
        }
    }

    pub fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(c: &Scalar, a: &[Scalar]) -> Vector {
        a.iter().map(|x| c * x).collect()
    }

    pub fn neg(a: &[Scalar]) -> Vector {
        a.iter().map(|x| -x).collect()
    }

    /// Kronecker product of vectors: index `i * b.len() + j`.
    pub fn kron(field: Field, a: &[Scalar], b: &[Scalar]) -> Vector {
        let mut out = zero(field, a.len() * b.len());
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i * b.len() + j] = x * y;
                }
            }
        }
        out
    }

    pub fn dot(field: Field, a: &[Scalar], b: &[Scalar]) -> Scalar {
        let mut s = field.zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                s = &s + &(x * y);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rref_examples() {
        let q = Field::Rationals;
        let m = Matrix::from_ints(q, &[&[2, 4], &[1, 2]]);
        assert_eq!(m.rref(), Matrix::from_ints(q, &[&[1, 2], &[0, 0]]));
        assert_eq!(m.rank(), 1);
        let f2 = Field::prime(2).unwrap();
        let m = Matrix::from_ints(f2, &[&[1, 1], &[1, 1]]);
        assert_eq!(m.rank(), 1);
        let m = Matrix::from_ints(f2, &[&[1, 1], &[1, -1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_and_solve() {
        let q = Field::Rationals;
        let m = Matrix::from_ints(q, &[&[1, 2]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[q.int(-2), q.int(1)]));
        let a = Matrix::from_ints(q, &[&[1, 1], &[1, -1]]);
        let x = a.solve(&[q.int(3), q.int(1)]).unwrap();
        assert_eq!(x, vec![q.int(2), q.int(1)]);
        assert!(Matrix::from_ints(q, &[&[1, 1], &[2, 2]])
            .solve(&[q.int(1), q.int(0)])
            .is_none());
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(q, 2));
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-3i64..4, cols), rows)
    }

    fn build(field: Field, data: &[Vec<i64>]) -> Matrix {
        let refs: Vec<&[i64]> = data.iter().map(|r| r.as_slice()).collect();
        Matrix::from_ints(field, &refs)
    }

    proptest! {
        #[test]
        fn rank_nullity(data in small_matrix(4, 6), p in prop_oneof![Just(0u32), Just(2), Just(3), Just(101)]) {
            let field = if p == 0 { Field::Rationals } else { Field::Prime(p) };
            let m = build(field, &data);
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.dim(), 6);
            for v in k.basis() {
                prop_assert!(vecops::is_zero(&m.apply(v)));
            }
            prop_assert_eq!(m.rref().rref(), m.rref());
            prop_assert_eq!(m.transpose().rank(), m.rank());
        }

        #[test]
        fn product_is_associative(a in small_matrix(3, 4), b in small_matrix(4, 2), c in small_matrix(2, 3)) {
            let q = Field::Rationals;
            let (a, b, c) = (build(q, &a), build(q, &b), build(q, &c));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn kron_mixed_product(a in small_matrix(2, 2), b in small_matrix(3, 3), c in small_matrix(2, 2), d in small_matrix(3, 3)) {
            let q = Field::Rationals;
            let (a, b, c, d) = (build(q, &a), build(q, &b), build(q, &c), build(q, &d));
            prop_assert_eq!(a.kron(&b).mul(&c.kron(&d)), a.mul(&c).kron(&b.mul(&d)));
        }
    }
}
