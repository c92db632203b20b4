use super::matrix::{rref_rows, vecops, Matrix, Vector};
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// A subspace stored by its reduced echelon basis, so equality is exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span<I: IntoIterator<Item = Vector>>(field: Field, ambient: usize, vectors: I) -> Subspace {
        let mut rows: Vec<Vector> = vectors
            .into_iter()
            .inspect(|v| assert_eq!(v.len(), ambient, "vector outside ambient space"))
            .filter(|v| !vecops::is_zero(v))
            .collect();
        let pivots = rref_rows(&mut rows, ambient);
        Subspace {
            field,
            ambient,
            rows,
            pivots,
        }
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace {
            field,
            ambient,
            rows: (0..ambient).map(|i| vecops::unit(field, ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis rows as a matrix (dim x ambient).
    pub fn matrix(&self) -> Matrix {
        Matrix::from_rows(self.field, self.ambient, &self.rows)
    }

    /// Residual of `v` after eliminating the pivot coordinates.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = r[p].clone();
            if !c.is_zero() {
                vecops::axpy(&mut r, &-&c, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        vecops::is_zero(&self.reduce(v))
    }

    /// Coordinates in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Vector with the given coordinates in the echelon basis.
    pub fn combine(&self, c: &[Scalar]) -> Vector {
        let mut v = vecops::zero(self.field, self.ambient);
        for (x, row) in c.iter().zip(&self.rows) {
            vecops::axpy(&mut v, x, row);
        }
        v
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(Subspace::span(
            self.field,
            self.ambient,
            self.rows.iter().chain(&other.rows).cloned(),
        ))
    }

    /// Intersection by the Zassenhaus trick.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.field, self.ambient));
        }
        if self.dim() == self.ambient {
            return Ok(other.clone());
        }
        if other.dim() == self.ambient {
            return Ok(self.clone());
        }
        let n = self.ambient;
        let mut rows: Vec<Vector> = Vec::with_capacity(self.dim() + other.dim());
        for r in &self.rows {
            let mut v = r.clone();
            v.extend(r.iter().cloned());
            rows.push(v);
        }
        for r in &other.rows {
            let mut v = r.clone();
            v.extend(vecops::zero(self.field, n));
            rows.push(v);
        }
        let piv = rref_rows(&mut rows, 2 * n);
        let found = piv
            .iter()
            .zip(&rows)
            .filter(|(&p, _)| p >= n)
            .map(|(_, r)| r[n..].to_vec());
        Ok(Subspace::span(self.field, n, found))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    /// Image under a linear map (target x ambient).
    pub fn map(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        Subspace::span(self.field, m.rows(), self.rows.iter().map(|r| m.apply(r)))
    }

    /// Preimage under a linear map of a subspace of its target.
    pub fn preimage(m: &Matrix, target: &Subspace) -> Subspace {
        let q = Quotient::new(target.clone());
        q.proj_matrix().mul(m).kernel()
    }
}

/// True iff `(X + Y) ∩ Z = X ∩ Z + Y ∩ Z`.
pub fn is_triple_distributive(x: &Subspace, y: &Subspace, z: &Subspace) -> Result<bool> {
    let lhs = x.sum(y)?.intersect(z)?;
    let rhs = x.intersect(z)?.sum(&y.intersect(z)?)?;
    Ok(lhs == rhs)
}

/// Canonical quotient `W / U`: coordinates are the non-pivot columns of `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    sub: Subspace,
    free: Vec<usize>,
    /// Entries of each basis row of `sub` at the free columns.
    tails: Vec<Vector>,
}

impl Quotient {
    pub fn new(sub: Subspace) -> Quotient {
        let mut is_piv = vec![false; sub.ambient];
        for &p in &sub.pivots {
            is_piv[p] = true;
        }
        let free: Vec<usize> = (0..sub.ambient).filter(|&i| !is_piv[i]).collect();
        let tails = sub
            .rows
            .iter()
            .map(|r| free.iter().map(|&f| r[f].clone()).collect())
            .collect();
        Quotient { sub, free, tails }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ambient(&self) -> usize {
        self.sub.ambient
    }

    pub fn kernel(&self) -> &Subspace {
        &self.sub
    }

    pub fn free_columns(&self) -> &[usize] {
        &self.free
    }

    pub fn project(&self, v: &[Scalar]) -> Vector {
        let mut out: Vector = self.free.iter().map(|&f| v[f].clone()).collect();
        for (tail, &p) in self.tails.iter().zip(&self.sub.pivots) {
            let c = &v[p];
            if !c.is_zero() {
                vecops::axpy(&mut out, &-c, tail);
            }
        }
        out
    }

    pub fn lift(&self, c: &[Scalar]) -> Vector {
        let mut v = vecops::zero(self.sub.field, self.sub.ambient);
        for (x, &f) in c.iter().zip(&self.free) {
            v[f] = x.clone();
        }
        v
    }

    pub fn proj_matrix(&self) -> Matrix {
        let f = self.sub.field;
        let cols: Vec<Vector> = (0..self.sub.ambient)
            .map(|j| self.project(&vecops::unit(f, self.sub.ambient, j)))
            .collect();
        Matrix::from_cols(f, self.dim(), &cols)
    }

    pub fn section_matrix(&self) -> Matrix {
        let f = self.sub.field;
        let cols: Vec<Vector> = (0..self.dim())
            .map(|j| self.lift(&vecops::unit(f, self.dim(), j)))
            .collect();
        Matrix::from_cols(f, self.sub.ambient, &cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn sp(vs: &[&[i64]]) -> Subspace {
        let n = vs.first().map_or(0, |v| v.len());
        Subspace::span(q(), n, vs.iter().map(|v| v.iter().map(|&x| q().int(x)).collect()))
    }

    #[test]
    fn three_lines_in_plane_are_not_distributive() {
        let x = sp(&[&[1, 0]]);
        let y = sp(&[&[0, 1]]);
        let z = sp(&[&[1, 1]]);
        assert!(!is_triple_distributive(&x, &y, &z).unwrap());
        let w = sp(&[&[1, 0], &[0, 1]]);
        assert!(is_triple_distributive(&x, &y, &w).unwrap());
    }

    #[test]
    fn quotient_round_trip() {
        let u = sp(&[&[1, 1, 0]]);
        let qt = Quotient::new(u.clone());
        assert_eq!(qt.dim(), 2);
        let v: Vector = [3, 5, 7].iter().map(|&x| q().int(x)).collect();
        let back = qt.lift(&qt.project(&v));
        assert!(u.contains(&vecops::sub(&v, &back)));
        assert!(vecops::is_zero(&qt.project(&u.basis()[0])));
        assert_eq!(qt.proj_matrix().mul(&qt.section_matrix()), Matrix::identity(q(), 2));
    }

    fn subspace(n: usize) -> impl Strategy<Value = Subspace> {
        proptest::collection::vec(proptest::collection::vec(-2i64..3, n), 0..n + 1).prop_map(move |rows| {
            Subspace::span(Field::Rationals, n, rows.into_iter().map(|r| r.into_iter().map(|x| Field::Rationals.int(x)).collect()))
        })
    }

    proptest! {
        #[test]
        fn dimension_formula(a in subspace(5), b in subspace(5)) {
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
            prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
            prop_assert_eq!(a.intersect(&b).unwrap(), b.intersect(&a).unwrap());
        }

        #[test]
        fn distributivity_is_symmetric_in_first_two(x in subspace(4), y in subspace(4), z in subspace(4)) {
            prop_assert_eq!(
                is_triple_distributive(&x, &y, &z).unwrap(),
                is_triple_distributive(&y, &x, &z).unwrap()
            );
            // One inclusion always holds.
            let lhs = x.sum(&y).unwrap().intersect(&z).unwrap();
            let rhs = x.intersect(&z).unwrap().sum(&y.intersect(&z).unwrap()).unwrap();
            prop_assert!(rhs.is_subspace_of(&lhs));
        }

        #[test]
        fn nested_triples_are_distributive(x in subspace(4), y in subspace(4)) {
            let big = x.sum(&y).unwrap();
            prop_assert!(is_triple_distributive(&x, &big, &y).unwrap());
        }
    }
}
