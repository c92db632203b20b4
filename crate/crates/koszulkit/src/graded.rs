//! Truncated graded algebras given by multiplication tables, and finite complexes.

use std::sync::Arc;

use crate::bimodule::{BaseAlgebra, Bimodule};
use crate::error::{Error, Result};
use crate::linalg::{vecops, Field, Matrix, Scalar, Subspace, Vector};

/// A bilinear map `k^left × k^right → k^out` stored by images of basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulTable {
    pub out: usize,
    pub left: usize,
    pub right: usize,
    /// `cols[x * right + y]` is the product of basis elements `x` and `y`.
    pub cols: Vec<Vector>,
}

impl MulTable {
    pub fn zero(field: Field, out: usize, left: usize, right: usize) -> MulTable {
        MulTable {
            out,
            left,
            right,
            cols: vec![vecops::zero(field, out); left * right],
        }
    }

    pub fn from_matrix(m: &Matrix, left: usize, right: usize) -> MulTable {
        assert_eq!(m.cols(), left * right);
        MulTable {
            out: m.rows(),
            left,
            right,
            cols: m.col_vecs(),
        }
    }

    pub fn to_matrix(&self, field: Field) -> Matrix {
        Matrix::from_cols(field, self.out, &self.cols)
    }

    pub fn basis(&self, x: usize, y: usize) -> &Vector {
        &self.cols[x * self.right + y]
    }

    pub fn apply(&self, field: Field, a: &[Scalar], b: &[Scalar]) -> Vector {
        let mut out = vecops::zero(field, self.out);
        for (x, ax) in a.iter().enumerate() {
            if ax.is_zero() {
                continue;
            }
            for (y, by) in b.iter().enumerate() {
                if by.is_zero() {
                    continue;
                }
                vecops::axpy(&mut out, &(ax * by), &self.cols[x * self.right + y]);
            }
        }
        out
    }

    /// Applies the bilinear map to a vector of `k^left ⊗ k^right`.
    pub fn apply_tensor(&self, field: Field, t: &[Scalar]) -> Vector {
        let mut out = vecops::zero(field, self.out);
        for (i, c) in t.iter().enumerate() {
            if !c.is_zero() {
                vecops::axpy(&mut out, c, &self.cols[i]);
            }
        }
        out
    }
}

/// Components `A_0 .. A_N` of a graded algebra over `A_0 = R`, with all
/// products landing in degrees `≤ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSlice {
    base: Arc<BaseAlgebra>,
    components: Vec<Bimodule>,
    mult: Vec<Vec<MulTable>>,
}

impl GradedSlice {
    /// Builds the slice from `mult[i][j]` for `i + j ≤ N`; `mult[0][n]` and
    /// `mult[n][0]` must be the base actions on `A_n`.
    pub fn from_tables(base: Arc<BaseAlgebra>, mult: Vec<Vec<MulTable>>) -> Result<GradedSlice> {
        let top = mult.len().checked_sub(1).ok_or_else(|| Error::Dimension("empty slice".into()))?;
        let f = base.field();
        let rd = base.dim();
        for (i, row) in mult.iter().enumerate() {
            if row.len() != top - i + 1 {
                return Err(Error::Dimension(format!("mult[{i}] must have {} entries", top - i + 1)));
            }
        }
        let dims: Vec<usize> = (0..=top).map(|n| mult[0][n].out).collect();
        if dims[0] != rd {
            return Err(Error::Dimension("degree 0 must be the base algebra".into()));
        }
        for (i, row) in mult.iter().enumerate() {
            for (j, t) in row.iter().enumerate() {
                if t.out != dims[i + j] || t.left != dims[i] || t.right != dims[j] {
                    return Err(Error::Dimension(format!("mult[{i}][{j}] has the wrong shape")));
                }
                if t.cols.iter().any(|c| c.len() != t.out) {
                    return Err(Error::Dimension(format!("mult[{i}][{j}] has ragged columns")));
                }
            }
        }
        let mut components = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let d = dims[n];
            let lact = (0..rd)
                .map(|r| {
                    let cols: Vec<Vector> = (0..d).map(|b| mult[0][n].basis(r, b).clone()).collect();
                    Matrix::from_cols(f, d, &cols)
                })
                .collect();
            let ract = (0..rd)
                .map(|s| {
                    let cols: Vec<Vector> = (0..d).map(|a| mult[n][0].basis(a, s).clone()).collect();
                    Matrix::from_cols(f, d, &cols)
                })
                .collect();
            components.push(Bimodule::new(base.clone(), base.clone(), lact, ract)?);
        }
        Ok(GradedSlice {
            base,
            components,
            mult,
        })
    }

    /// The opposite slice over `R^op`; with `signs`, products pick up `(-1)^{ij}`.
    pub fn opposite(&self, signs: bool) -> Result<GradedSlice> {
        let f = self.field();
        let top = self.top();
        let mult = (0..=top)
            .map(|i| {
                (0..=top - i)
                    .map(|j| {
                        let src = &self.mult[j][i];
                        let neg = signs && (i * j) % 2 == 1;
                        let mut t = MulTable::zero(f, src.out, src.right, src.left);
                        for x in 0..src.right {
                            for y in 0..src.left {
                                let v = src.basis(y, x);
                                t.cols[x * src.left + y] = if neg { vecops::neg(v) } else { v.clone() };
                            }
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        GradedSlice::from_tables(self.base.opposite(), mult)
    }

    pub(crate) fn from_parts(base: Arc<BaseAlgebra>, components: Vec<Bimodule>, mult: Vec<Vec<MulTable>>) -> GradedSlice {
        GradedSlice {
            base,
            components,
            mult,
        }
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn base(&self) -> &Arc<BaseAlgebra> {
        &self.base
    }

    /// Highest degree present.
    pub fn top(&self) -> usize {
        self.components.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.components.get(n).map_or(0, |c| c.dim())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim()).collect()
    }

    pub fn component(&self, n: usize) -> &Bimodule {
        &self.components[n]
    }

    pub fn table(&self, i: usize, j: usize) -> &MulTable {
        &self.mult[i][j]
    }

    pub fn mul(&self, i: usize, j: usize, a: &[Scalar], b: &[Scalar]) -> Vector {
        if i + j > self.top() {
            return Vec::new();
        }
        self.mult[i][j].apply(self.field(), a, b)
    }

    pub fn unit(&self) -> Vector {
        self.base.unit().clone()
    }

    /// The slice restricted to degrees `≤ n`.
    pub fn truncate(&self, n: usize) -> GradedSlice {
        let n = n.min(self.top());
        GradedSlice {
            base: self.base.clone(),
            components: self.components[..=n].to_vec(),
            mult: (0..=n).map(|i| self.mult[i][..=n - i].to_vec()).collect(),
        }
    }

    /// Checks associativity on all basis triples in range and the unit law.
    pub fn validate(&self) -> Result<()> {
        let f = self.field();
        let top = self.top();
        let u = self.unit();
        for n in 0..=top {
            for b in 0..self.dim(n) {
                let e = vecops::unit(f, self.dim(n), b);
                if self.mul(0, n, &u, &e) != e || self.mul(n, 0, &e, &u) != e {
                    return Err(Error::Invalid(format!("unit fails on basis element {b} of degree {n}")));
                }
            }
        }
        for i in 0..=top {
            for j in 0..=top - i {
                for l in 0..=top - i - j {
                    for x in 0..self.dim(i) {
                        for y in 0..self.dim(j) {
                            let xy = self.mult[i][j].basis(x, y);
                            for z in 0..self.dim(l) {
                                let lhs = self.mult[i + j][l].apply(f, xy, &vecops::unit(f, self.dim(l), z));
                                let yz = self.mult[j][l].basis(y, z);
                                let rhs = self.mult[i][j + l].apply(f, &vecops::unit(f, self.dim(i), x), yz);
                                if lhs != rhs {
                                    return Err(Error::Invalid(format!(
                                        "associativity fails in degrees ({i},{j},{l}) on basis ({x},{y},{z})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// For each basis element of `A_n`, a preimage in `A_{n-1} ⊗_k A_1` under
    /// multiplication.
    pub fn degree_one_section(&self, n: usize) -> Result<Vec<Vector>> {
        let f = self.field();
        let m = self.mult[n - 1][1].to_matrix(f);
        let sol = m
            .solve_matrix(&Matrix::identity(f, self.dim(n)))
            .ok_or_else(|| Error::Precondition(format!("degree {n} is not generated by degree 1")))?;
        Ok(sol.col_vecs())
    }
}

/// A finite complex `C_0 → C_1 → ... → C_L` of vector spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub field: Field,
    pub dims: Vec<usize>,
    /// `maps[p] : C_p → C_{p+1}`.
    pub maps: Vec<Matrix>,
}

impl Complex {
    pub fn new(field: Field, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Complex> {
        if dims.len() != maps.len() + 1 && !(dims.is_empty() && maps.is_empty()) {
            return Err(Error::Dimension("a complex needs one map between consecutive spaces".into()));
        }
        for (p, m) in maps.iter().enumerate() {
            m.check_shape(dims[p + 1], dims[p])?;
        }
        Ok(Complex { field, dims, maps })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// First position `p` where `d_{p+1} d_p ≠ 0`.
    pub fn square_zero_failure(&self) -> Option<usize> {
        (0..self.maps.len().saturating_sub(1)).find(|&p| !self.maps[p + 1].mul(&self.maps[p]).is_zero())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.maps.iter().map(|m| m.rank()).collect()
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        let r = self.ranks();
        (0..self.dims.len())
            .map(|p| {
                let out = if p < r.len() { r[p] } else { 0 };
                let inc = if p > 0 { r[p - 1] } else { 0 };
                self.dims[p] - out - inc
            })
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.homology_dims().iter().all(|&h| h == 0)
    }

    /// Cycles and boundaries at position `p`.
    pub fn cycles_and_boundaries(&self, p: usize) -> (Subspace, Subspace) {
        let z = match self.maps.get(p) {
            Some(m) => m.kernel(),
            None => Subspace::full(self.field, self.dims[p]),
        };
        let b = if p > 0 {
            self.maps[p - 1].image()
        } else {
            Subspace::zero(self.field, self.dims[p])
        };
        (z, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homology_of_short_complexes() {
        let q = Field::Rationals;
        let c = Complex::new(
            q,
            vec![1, 2, 1],
            vec![Matrix::from_ints(q, &[&[1], &[1]]), Matrix::from_ints(q, &[&[1, -1]])],
        )
        .unwrap();
        assert_eq!(c.square_zero_failure(), None);
        assert_eq!(c.homology_dims(), vec![0, 0, 0]);
        let c = Complex::new(q, vec![2, 1], vec![Matrix::from_ints(q, &[&[0, 0]])]).unwrap();
        assert_eq!(c.homology_dims(), vec![2, 1]);
        assert!(Complex::new(q, vec![2, 1], vec![]).is_err());
    }

    #[test]
    fn polynomial_ring_slice() {
        let q = Field::Rationals;
        let k = BaseAlgebra::ground(q);
        let top = 3;
        let mult = (0..=top)
            .map(|i| (0..=top - i).map(|_| MulTable { out: 1, left: 1, right: 1, cols: vec![vec![q.one()]] }).collect())
            .collect();
        let s = GradedSlice::from_tables(k, mult).unwrap();
        s.validate().unwrap();
        assert_eq!(s.dims(), vec![1, 1, 1, 1]);
        assert_eq!(s.truncate(1).dims(), vec![1, 1]);
        assert_eq!(s.degree_one_section(3).unwrap(), vec![vec![q.one()]]);
    }
}
