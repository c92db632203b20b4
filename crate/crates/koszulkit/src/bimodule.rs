//! Finite-dimensional algebras, bimodules, tensor products over the base,
//! one-sided duals and their evaluation pairings.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{vecops, Field, Matrix, Quotient, Scalar, Subspace, Vector};

/// A finite-dimensional associative unital algebra given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseAlgebra {
    field: Field,
    dim: usize,
    /// `structure[i][j]` holds the coordinates of `e_i e_j`.
    structure: Vec<Vec<Vector>>,
    unit: Vector,
    left_mul: Vec<Matrix>,
    right_mul: Vec<Matrix>,
}

impl BaseAlgebra {
    pub fn new(field: Field, structure: Vec<Vec<Vector>>, unit: Vector) -> Result<Arc<BaseAlgebra>> {
        let dim = unit.len();
        if structure.len() != dim || structure.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension(format!("structure tensor must be {dim}x{dim}x{dim}")));
        }
        for (i, row) in structure.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.len() != dim {
                    return Err(Error::Dimension(format!(
                        "structure[{i}][{j}] has length {}, expected {dim}",
                        v.len()
                    )));
                }
            }
        }
        let mut left_mul = Vec::with_capacity(dim);
        let mut right_mul = Vec::with_capacity(dim);
        for i in 0..dim {
            let cols: Vec<Vector> = (0..dim).map(|j| structure[i][j].clone()).collect();
            left_mul.push(Matrix::from_cols(field, dim, &cols));
            let cols: Vec<Vector> = (0..dim).map(|j| structure[j][i].clone()).collect();
            right_mul.push(Matrix::from_cols(field, dim, &cols));
        }
        let alg = BaseAlgebra {
            field,
            dim,
            structure,
            unit,
            left_mul,
            right_mul,
        };
        alg.validate()?;
        Ok(Arc::new(alg))
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let e = |k| vecops::unit(self.field, n, k);
                    let lhs = self.mul(&self.mul(&e(i), &e(j)), &e(l));
                    let rhs = self.mul(&e(i), &self.mul(&e(j), &e(l)));
                    if lhs != rhs {
                        return Err(Error::Invalid(format!(
                            "structure tensor is not associative at basis triple ({i},{j},{l})"
                        )));
                    }
                }
            }
            let e = vecops::unit(self.field, n, i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::Invalid(format!("unit does not act as identity on e_{i}")));
            }
        }
        Ok(())
    }

    /// The ground field itself.
    pub fn ground(field: Field) -> Arc<BaseAlgebra> {
        BaseAlgebra::new(field, vec![vec![vec![field.one()]]], vec![field.one()]).unwrap()
    }

    /// The product algebra `k^n` with orthogonal idempotents.
    pub fn product(field: Field, n: usize) -> Arc<BaseAlgebra> {
        let mut s = vec![vec![vecops::zero(field, n); n]; n];
        for (i, row) in s.iter_mut().enumerate() {
            row[i][i] = field.one();
        }
        BaseAlgebra::new(field, s, vec![field.one(); n]).unwrap()
    }

    /// Matrix units `E_ij` (index `i * n + j`) spanning `M_n(k)`.
    pub fn matrix_algebra(field: Field, n: usize) -> Arc<BaseAlgebra> {
        let d = n * n;
        let mut s = vec![vec![vecops::zero(field, d); d]; d];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    s[i * n + j][j * n + l][i * n + l] = field.one();
                }
            }
        }
        let mut unit = vecops::zero(field, d);
        for i in 0..n {
            unit[i * n + i] = field.one();
        }
        BaseAlgebra::new(field, s, unit).unwrap()
    }

    /// `k[ε]/(ε²)` with basis `1, ε`.
    pub fn dual_numbers(field: Field) -> Arc<BaseAlgebra> {
        let (z, o) = (field.zero(), field.one());
        let s = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
        ];
        BaseAlgebra::new(field, s, vec![o, z]).unwrap()
    }

    pub fn opposite(&self) -> Arc<BaseAlgebra> {
        let n = self.dim;
        let s = (0..n)
            .map(|i| (0..n).map(|j| self.structure[j][i].clone()).collect())
            .collect();
        BaseAlgebra::new(self.field, s, self.unit.clone()).unwrap()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn structure(&self) -> &Vec<Vec<Vector>> {
        &self.structure
    }

    pub fn zero_elem(&self) -> Vector {
        vecops::zero(self.field, self.dim)
    }

    pub fn basis_elem(&self, i: usize) -> Vector {
        vecops::unit(self.field, self.dim, i)
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let mut out = self.zero_elem();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                vecops::axpy(&mut out, &(x * y), &self.structure[i][j]);
            }
        }
        out
    }

    /// Matrix of `x ↦ e_i x`.
    pub fn left_mul(&self, i: usize) -> &Matrix {
        &self.left_mul[i]
    }

    /// Matrix of `x ↦ x e_i`.
    pub fn right_mul(&self, i: usize) -> &Matrix {
        &self.right_mul[i]
    }

    pub fn left_mul_by(&self, r: &[Scalar]) -> Matrix {
        combine(self.field, self.dim, &self.left_mul, r)
    }

    pub fn right_mul_by(&self, r: &[Scalar]) -> Matrix {
        combine(self.field, self.dim, &self.right_mul, r)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.structure[i][j] == self.structure[j][i]))
    }

    /// Inverse of `r`, if it is a unit.
    pub fn inverse(&self, r: &[Scalar]) -> Option<Vector> {
        let x = self.left_mul_by(r).solve(&self.unit)?;
        (self.mul(&x, r) == self.unit).then_some(x)
    }
}

fn combine(field: Field, n: usize, mats: &[Matrix], coeffs: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(field, n, n);
    for (c, a) in coeffs.iter().zip(mats) {
        if !c.is_zero() {
            m = m.add(&a.scale(c));
        }
    }
    m
}

pub fn same_algebra(a: &Arc<BaseAlgebra>, b: &Arc<BaseAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Which side a module or duality lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A finite-dimensional `R`-`S`-bimodule with explicit action matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    left: Arc<BaseAlgebra>,
    right: Arc<BaseAlgebra>,
    dim: usize,
    lact: Vec<Matrix>,
    ract: Vec<Matrix>,
}

impl Bimodule {
    pub fn new(
        left: Arc<BaseAlgebra>,
        right: Arc<BaseAlgebra>,
        lact: Vec<Matrix>,
        ract: Vec<Matrix>,
    ) -> Result<Bimodule> {
        let m = Bimodule::new_unchecked(left, right, lact, ract)?;
        m.validate()?;
        Ok(m)
    }

    fn new_unchecked(
        left: Arc<BaseAlgebra>,
        right: Arc<BaseAlgebra>,
        lact: Vec<Matrix>,
        ract: Vec<Matrix>,
    ) -> Result<Bimodule> {
        if lact.len() != left.dim() || ract.len() != right.dim() {
            return Err(Error::Dimension("one action matrix per algebra basis element".into()));
        }
        let dim = lact
            .first()
            .map(|m| m.rows())
            .or_else(|| ract.first().map(|m| m.rows()))
            .unwrap_or(0);
        for m in lact.iter().chain(&ract) {
            m.check_shape(dim, dim)?;
        }
        Ok(Bimodule {
            left,
            right,
            dim,
            lact,
            ract,
        })
    }

    /// Checks associativity, unitality and that the two actions commute.
    pub fn validate(&self) -> Result<()> {
        let f = self.field();
        let id = Matrix::identity(f, self.dim);
        let (r, s) = (&self.left, &self.right);
        if self.left_action(r.unit()) != id {
            return Err(Error::Invalid("left unit does not act as identity".into()));
        }
        if self.right_action(s.unit()) != id {
            return Err(Error::Invalid("right unit does not act as identity".into()));
        }
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                let lhs = self.lact[i].mul(&self.lact[j]);
                let rhs = self.left_action(&r.structure()[i][j]);
                if lhs != rhs {
                    return Err(Error::Invalid(format!(
                        "left action not associative at basis pair ({i},{j})"
                    )));
                }
            }
        }
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let lhs = self.ract[j].mul(&self.ract[i]);
                let rhs = self.right_action(&s.structure()[i][j]);
                if lhs != rhs {
                    return Err(Error::Invalid(format!(
                        "right action not associative at basis pair ({i},{j})"
                    )));
                }
            }
        }
        for i in 0..r.dim() {
            for j in 0..s.dim() {
                if self.lact[i].mul(&self.ract[j]) != self.ract[j].mul(&self.lact[i]) {
                    return Err(Error::Invalid(format!(
                        "left action of e_{i} and right action of e_{j} do not commute"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `R` as a bimodule over itself.
    pub fn regular(r: &Arc<BaseAlgebra>) -> Bimodule {
        let lact = (0..r.dim()).map(|i| r.left_mul(i).clone()).collect();
        let ract = (0..r.dim()).map(|i| r.right_mul(i).clone()).collect();
        Bimodule::new_unchecked(r.clone(), r.clone(), lact, ract).unwrap()
    }

    /// The zero bimodule.
    pub fn zero(left: &Arc<BaseAlgebra>, right: &Arc<BaseAlgebra>) -> Bimodule {
        let f = left.field();
        Bimodule {
            left: left.clone(),
            right: right.clone(),
            dim: 0,
            lact: vec![Matrix::zeros(f, 0, 0); left.dim()],
            ract: vec![Matrix::zeros(f, 0, 0); right.dim()],
        }
    }

    /// Over `R = S = k`: the vector space `k^n`.
    pub fn vector_space(r: &Arc<BaseAlgebra>, n: usize) -> Bimodule {
        let f = r.field();
        let id = Matrix::identity(f, n);
        let lact = r.unit().iter().map(|c| id.scale(&c.inv().unwrap_or_else(|| f.zero()))).collect();
        let ract = r.unit().iter().map(|c| id.scale(&c.inv().unwrap_or_else(|| f.zero()))).collect();
        Bimodule::new(r.clone(), r.clone(), lact, ract).expect("vector space needs R = k")
    }

    pub fn field(&self) -> Field {
        self.left.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_algebra(&self) -> &Arc<BaseAlgebra> {
        &self.left
    }

    pub fn right_algebra(&self) -> &Arc<BaseAlgebra> {
        &self.right
    }

    pub fn lact(&self, i: usize) -> &Matrix {
        &self.lact[i]
    }

    pub fn ract(&self, i: usize) -> &Matrix {
        &self.ract[i]
    }

    pub fn lacts(&self) -> &[Matrix] {
        &self.lact
    }

    pub fn racts(&self) -> &[Matrix] {
        &self.ract
    }

    pub fn left_action(&self, r: &[Scalar]) -> Matrix {
        combine(self.field(), self.dim, &self.lact, r)
    }

    pub fn right_action(&self, s: &[Scalar]) -> Matrix {
        combine(self.field(), self.dim, &self.ract, s)
    }

    pub fn act_left(&self, r: &[Scalar], v: &[Scalar]) -> Vector {
        let mut out = vecops::zero(self.field(), self.dim);
        for (c, m) in r.iter().zip(&self.lact) {
            if !c.is_zero() {
                vecops::axpy(&mut out, c, &m.apply(v));
            }
        }
        out
    }

    pub fn act_right(&self, v: &[Scalar], s: &[Scalar]) -> Vector {
        let mut out = vecops::zero(self.field(), self.dim);
        for (c, m) in s.iter().zip(&self.ract) {
            if !c.is_zero() {
                vecops::axpy(&mut out, c, &m.apply(v));
            }
        }
        out
    }

    pub fn zero_vec(&self) -> Vector {
        vecops::zero(self.field(), self.dim)
    }

    pub fn basis_vec(&self, i: usize) -> Vector {
        vecops::unit(self.field(), self.dim, i)
    }

    pub fn is_sub_bimodule(&self, sub: &Subspace) -> bool {
        sub.basis().iter().all(|v| {
            self.lact.iter().all(|m| sub.contains(&m.apply(v)))
                && self.ract.iter().all(|m| sub.contains(&m.apply(v)))
        })
    }

    /// The subspace with restricted actions, in its echelon basis.
    pub fn sub_bimodule(&self, sub: &Subspace) -> Result<Bimodule> {
        if sub.ambient() != self.dim {
            return Err(Error::Dimension("subspace outside the bimodule".into()));
        }
        let restrict = |m: &Matrix| -> Result<Matrix> {
            let cols = sub
                .basis()
                .iter()
                .map(|v| {
                    sub.coords(&m.apply(v))
                        .ok_or_else(|| Error::Invalid("subspace is not a subbimodule".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_cols(self.field(), sub.dim(), &cols))
        };
        let lact = self.lact.iter().map(restrict).collect::<Result<_>>()?;
        let ract = self.ract.iter().map(restrict).collect::<Result<_>>()?;
        Bimodule::new_unchecked(self.left.clone(), self.right.clone(), lact, ract)
    }

    /// Quotient by a subbimodule, with the canonical projection.
    pub fn quotient(&self, sub: &Subspace) -> Result<(Bimodule, Quotient)> {
        if !self.is_sub_bimodule(sub) {
            return Err(Error::Invalid("quotient by a subspace that is not a subbimodule".into()));
        }
        let q = Quotient::new(sub.clone());
        let induce = |m: &Matrix| {
            let cols: Vec<Vector> = (0..q.dim())
                .map(|j| q.project(&m.apply(&q.lift(&vecops::unit(self.field(), q.dim(), j)))))
                .collect();
            Matrix::from_cols(self.field(), q.dim(), &cols)
        };
        let lact = self.lact.iter().map(induce).collect();
        let ract = self.ract.iter().map(induce).collect();
        Ok((
            Bimodule::new_unchecked(self.left.clone(), self.right.clone(), lact, ract)?,
            q,
        ))
    }

    pub fn direct_sum(&self, other: &Bimodule) -> Result<Bimodule> {
        if !same_algebra(&self.left, &other.left) || !same_algebra(&self.right, &other.right) {
            return Err(Error::AlgebraMismatch("direct sum of bimodules over different algebras".into()));
        }
        let f = self.field();
        let blockdiag = |a: &Matrix, b: &Matrix| {
            let n = a.rows() + b.rows();
            let mut m = Matrix::zeros(f, n, n);
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    m.set(i, j, a.get(i, j).clone());
                }
            }
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
                }
            }
            m
        };
        let lact = self.lact.iter().zip(&other.lact).map(|(a, b)| blockdiag(a, b)).collect();
        let ract = self.ract.iter().zip(&other.ract).map(|(a, b)| blockdiag(a, b)).collect();
        Bimodule::new_unchecked(self.left.clone(), self.right.clone(), lact, ract)
    }

    /// The same space as an `S^op`-`R^op`-bimodule.
    pub fn opposite(&self, left_op: &Arc<BaseAlgebra>, right_op: &Arc<BaseAlgebra>) -> Bimodule {
        Bimodule {
            left: right_op.clone(),
            right: left_op.clone(),
            dim: self.dim,
            lact: self.ract.clone(),
            ract: self.lact.clone(),
        }
    }

    /// Whether a linear map into `target` intertwines both actions.
    pub fn is_bimodule_map(&self, target: &Bimodule, m: &Matrix) -> bool {
        m.rows() == target.dim
            && m.cols() == self.dim
            && self.lact.iter().zip(&target.lact).all(|(a, b)| m.mul(a) == b.mul(m))
            && self.ract.iter().zip(&target.ract).all(|(a, b)| m.mul(a) == b.mul(m))
    }
}

/// A bimodule map stored as a matrix (target x source).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleMap {
    pub source: Bimodule,
    pub target: Bimodule,
    pub matrix: Matrix,
}

impl BimoduleMap {
    pub fn new(source: Bimodule, target: Bimodule, matrix: Matrix) -> Result<BimoduleMap> {
        matrix.check_shape(target.dim(), source.dim())?;
        if !source.is_bimodule_map(&target, &matrix) {
            return Err(Error::Invalid("matrix does not intertwine the actions".into()));
        }
        Ok(BimoduleMap {
            source,
            target,
            matrix,
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.matrix.is_invertible()
    }
}

/// Applies `m` to the left tensor factor of `v ∈ k^a ⊗ k^b`.
pub fn apply_left_factor(v: &[Scalar], a: usize, b: usize, m: &Matrix) -> Vector {
    assert_eq!(v.len(), a * b);
    assert_eq!(m.cols(), a);
    let f = m.field();
    let out_a = m.rows();
    let mut out = vecops::zero(f, out_a * b);
    for i in 0..a {
        for j in 0..b {
            let x = &v[i * b + j];
            if x.is_zero() {
                continue;
            }
            for k in 0..out_a {
                let c = m.get(k, i);
                if !c.is_zero() {
                    out[k * b + j] = &out[k * b + j] + &(c * x);
                }
            }
        }
    }
    out
}

/// Applies `m` to the right tensor factor of `v ∈ k^a ⊗ k^b`.
pub fn apply_right_factor(v: &[Scalar], a: usize, b: usize, m: &Matrix) -> Vector {
    assert_eq!(v.len(), a * b);
    assert_eq!(m.cols(), b);
    let f = m.field();
    let out_b = m.rows();
    let mut out = vecops::zero(f, a * out_b);
    for i in 0..a {
        for j in 0..b {
            let x = &v[i * b + j];
            if x.is_zero() {
                continue;
            }
            for k in 0..out_b {
                let c = m.get(k, j);
                if !c.is_zero() {
                    out[i * out_b + k] = &out[i * out_b + k] + &(c * x);
                }
            }
        }
    }
    out
}

/// Applies a linear map (as a closure) to the left factor of `v ∈ k^a ⊗ k^b`.
pub fn map_left_factor<F: Fn(&[Scalar]) -> Vector>(
    field: Field,
    v: &[Scalar],
    a: usize,
    b: usize,
    out_a: usize,
    f: F,
) -> Vector {
    let mut out = vecops::zero(field, out_a * b);
    for j in 0..b {
        let slice: Vector = (0..a).map(|i| v[i * b + j].clone()).collect();
        if vecops::is_zero(&slice) {
            continue;
        }
        let img = f(&slice);
        for (k, x) in img.into_iter().enumerate() {
            out[k * b + j] = x;
        }
    }
    out
}

/// Applies a linear map (as a closure) to the right factor of `v ∈ k^a ⊗ k^b`.
pub fn map_right_factor<F: Fn(&[Scalar]) -> Vector>(
    field: Field,
    v: &[Scalar],
    a: usize,
    b: usize,
    out_b: usize,
    f: F,
) -> Vector {
    let mut out = vecops::zero(field, a * out_b);
    for i in 0..a {
        let slice = &v[i * b..(i + 1) * b];
        if vecops::is_zero(slice) {
            continue;
        }
        let img = f(slice);
        out[i * out_b..(i + 1) * out_b].clone_from_slice(&img);
    }
    out
}

/// `U ⊗_S V` as a quotient of `U ⊗_k V` (Kronecker index `i * dim V + j`).
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: Bimodule,
    quotient: Quotient,
    du: usize,
    dv: usize,
}

impl TensorProduct {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn factor_dims(&self) -> (usize, usize) {
        (self.du, self.dv)
    }

    /// From `U ⊗_k V` coordinates.
    pub fn project(&self, v: &[Scalar]) -> Vector {
        self.quotient.project(v)
    }

    /// A representative in `U ⊗_k V`.
    pub fn lift(&self, c: &[Scalar]) -> Vector {
        self.quotient.lift(c)
    }

    /// Image of the pure tensor `u ⊗ v`.
    pub fn pure(&self, u: &[Scalar], v: &[Scalar]) -> Vector {
        self.project(&vecops::kron(self.module.field(), u, v))
    }

    /// The balancing relations `us ⊗ v - u ⊗ sv`.
    pub fn relations(&self) -> &Subspace {
        self.quotient.kernel()
    }

    pub fn proj_matrix(&self) -> Matrix {
        self.quotient.proj_matrix()
    }

    pub fn section_matrix(&self) -> Matrix {
        self.quotient.section_matrix()
    }

    /// Matrix of the induced map `f ⊗ g` into another tensor product.
    pub fn map_to(&self, target: &TensorProduct, f: &Matrix, g: &Matrix) -> Matrix {
        let fld = self.module.field();
        let cols: Vec<Vector> = (0..self.dim())
            .map(|j| {
                let v = self.lift(&vecops::unit(fld, self.dim(), j));
                let v = apply_left_factor(&v, self.du, self.dv, f);
                let v = apply_right_factor(&v, f.rows(), self.dv, g);
                target.project(&v)
            })
            .collect();
        Matrix::from_cols(fld, target.dim(), &cols)
    }
}

/// `U ⊗_S V` for an `R`-`S`-bimodule `U` and an `S`-`T`-bimodule `V`.
pub fn tensor_over(u: &Bimodule, v: &Bimodule) -> Result<TensorProduct> {
    if !same_algebra(u.right_algebra(), v.left_algebra()) {
        return Err(Error::AlgebraMismatch(
            "right algebra of the first factor differs from left algebra of the second".into(),
        ));
    }
    let f = u.field();
    let (du, dv) = (u.dim(), v.dim());
    let s = u.right_algebra();
    let mut gens = Vec::new();
    if s.dim() > 1 {
        for si in 0..s.dim() {
            let us = u.ract(si);
            let sv = v.lact(si);
            for i in 0..du {
                let ui = us.col(i);
                for j in 0..dv {
                    let mut g = vecops::kron(f, &ui, &vecops::unit(f, dv, j));
                    let rhs = vecops::kron(f, &vecops::unit(f, du, i), &sv.col(j));
                    for (a, b) in g.iter_mut().zip(&rhs) {
                        if !b.is_zero() {
                            *a = &*a - b;
                        }
                    }
                    gens.push(g);
                }
            }
        }
    }
    let rel = Subspace::span(f, du * dv, gens);
    let quotient = Quotient::new(rel);
    let induce = |apply: &dyn Fn(&[Scalar]) -> Vector| {
        let cols: Vec<Vector> = (0..quotient.dim())
            .map(|j| quotient.project(&apply(&quotient.lift(&vecops::unit(f, quotient.dim(), j)))))
            .collect();
        Matrix::from_cols(f, quotient.dim(), &cols)
    };
    let lact = u
        .lacts()
        .iter()
        .map(|m| induce(&|x: &[Scalar]| apply_left_factor(x, du, dv, m)))
        .collect();
    let ract = v
        .racts()
        .iter()
        .map(|m| induce(&|x: &[Scalar]| apply_right_factor(x, du, dv, m)))
        .collect();
    let module = Bimodule::new_unchecked(u.left_algebra().clone(), v.right_algebra().clone(), lact, ract)?;
    Ok(TensorProduct {
        module,
        quotient,
        du,
        dv,
    })
}

/// Iterated tensor products `F_1 ⊗_R ... ⊗_R F_n`, bracketed to the left,
/// with projections from the `k`-tensor product.
#[derive(Clone, Debug)]
pub struct TensorChain {
    factors: Vec<Bimodule>,
    steps: Vec<TensorProduct>,
}

impl TensorChain {
    pub fn new(first: Bimodule) -> TensorChain {
        TensorChain {
            factors: vec![first],
            steps: Vec::new(),
        }
    }

    pub fn from_factors(factors: &[Bimodule]) -> Result<TensorChain> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::Dimension("empty tensor chain".into()))?;
        let mut c = TensorChain::new(first.clone());
        for f in rest {
            c.push(f.clone())?;
        }
        Ok(c)
    }

    pub fn push(&mut self, f: Bimodule) -> Result<()> {
        let step = tensor_over(&self.module(self.len()), &f)?;
        self.factors.push(f);
        self.steps.push(step);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factor(&self, i: usize) -> &Bimodule {
        &self.factors[i]
    }

    /// Dimension of the first `n` factors tensored over the base.
    pub fn dim(&self, n: usize) -> usize {
        if n == 1 {
            self.factors[0].dim()
        } else {
            self.steps[n - 2].dim()
        }
    }

    /// Dimension of the first `n` factors tensored over `k`.
    pub fn kdim(&self, n: usize) -> usize {
        self.factors[..n].iter().map(|f| f.dim()).product()
    }

    pub fn module(&self, n: usize) -> Bimodule {
        if n == 1 {
            self.factors[0].clone()
        } else {
            self.steps[n - 2].module.clone()
        }
    }

    pub fn project(&self, n: usize, v: &[Scalar]) -> Vector {
        if n <= 1 {
            return v.to_vec();
        }
        let d = self.factors[n - 1].dim();
        let f = self.factors[0].field();
        let w = map_left_factor(f, v, self.kdim(n - 1), d, self.dim(n - 1), |x| self.project(n - 1, x));
        self.steps[n - 2].project(&w)
    }

    pub fn lift(&self, n: usize, c: &[Scalar]) -> Vector {
        if n <= 1 {
            return c.to_vec();
        }
        let d = self.factors[n - 1].dim();
        let w = self.steps[n - 2].lift(c);
        let f = self.factors[0].field();
        map_left_factor(f, &w, self.dim(n - 1), d, self.kdim(n - 1), |x| self.lift(n - 1, x))
    }

    /// Projection of a pure tensor of vectors, one per factor.
    pub fn pure(&self, parts: &[Vector]) -> Vector {
        let f = self.factors[0].field();
        let mut v = vec![f.one()];
        for p in parts {
            v = vecops::kron(f, &v, p);
        }
        self.project(parts.len(), &v)
    }

    /// Lifted basis element as a list of basis indices, one per factor.
    /// Quotient lifts are unit vectors, so every basis element is a pure tensor.
    pub fn basis_word(&self, n: usize, idx: usize) -> Vec<usize> {
        let f = self.factors[0].field();
        let v = self.lift(n, &vecops::unit(f, self.dim(n), idx));
        let pos = v.iter().position(|x| !x.is_zero()).expect("nonzero lift");
        let mut word = vec![0; n];
        let mut rest = pos;
        for i in (0..n).rev() {
            let d = self.factors[i].dim();
            word[i] = rest % d;
            rest /= d;
        }
        word
    }
}

/// Tensor powers `V^{⊗_R n}` built on demand.
#[derive(Clone, Debug)]
pub struct TensorPowers {
    chain: TensorChain,
}

impl TensorPowers {
    pub fn new(v: &Bimodule) -> TensorPowers {
        TensorPowers {
            chain: TensorChain::new(v.clone()),
        }
    }

    /// Extends the tower through degree `n`.
    pub fn ensure(&mut self, n: usize) -> Result<()> {
        while self.chain.len() < n {
            let v = self.chain.factor(0).clone();
            self.chain.push(v)?;
        }
        Ok(())
    }

    pub fn generator(&self) -> &Bimodule {
        self.chain.factor(0)
    }

    pub fn dim(&self, n: usize) -> usize {
        match n {
            0 => self.generator().left_algebra().dim(),
            _ => self.chain.dim(n),
        }
    }

    pub fn module(&self, n: usize) -> Bimodule {
        match n {
            0 => Bimodule::regular(self.generator().left_algebra()),
            _ => self.chain.module(n),
        }
    }

    /// `V^{⊗_k n} → V^{⊗_R n}`.
    pub fn project(&self, n: usize, v: &[Scalar]) -> Vector {
        self.chain.project(n, v)
    }

    /// A representative in `V^{⊗_k n}`.
    pub fn lift(&self, n: usize, c: &[Scalar]) -> Vector {
        self.chain.lift(n, c)
    }

    /// Whether the projections are identities (the base algebra is `k`).
    pub fn is_trivial(&self) -> bool {
        self.generator().left_algebra().dim() == 1
    }
}

/// `Hom` spaces between bimodules that are linear for one action.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub side: Side,
    basis: Vec<Matrix>,
    space: Subspace,
    rows: usize,
    cols: usize,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn map_of(&self, c: &[Scalar]) -> Matrix {
        let f = self.space.field();
        let mut m = Matrix::zeros(f, self.rows, self.cols);
        for (x, b) in c.iter().zip(&self.basis) {
            if !x.is_zero() {
                m = m.add(&b.scale(x));
            }
        }
        m
    }

    pub fn coords(&self, m: &Matrix) -> Option<Vector> {
        self.space.coords(&flatten(m))
    }
}

/// Maps `src → tgt` commuting with the left (`Side::Left`) or right action.
pub fn hom_space(src: &Bimodule, tgt: &Bimodule, side: Side) -> Result<HomSpace> {
    let f = src.field();
    let (p, q) = (tgt.dim(), src.dim());
    let (a, b) = match side {
        Side::Left => (src.lacts(), tgt.lacts()),
        Side::Right => (src.racts(), tgt.racts()),
    };
    let alg = match side {
        Side::Left => (src.left_algebra(), tgt.left_algebra()),
        Side::Right => (src.right_algebra(), tgt.right_algebra()),
    };
    if !same_algebra(alg.0, alg.1) {
        return Err(Error::AlgebraMismatch("hom between modules over different algebras".into()));
    }
    let space = if alg.0.dim() == 1 {
        Subspace::full(f, p * q)
    } else {
        let mut sys = MatrixSystem::new(f, p, q);
        let id_p = Matrix::identity(f, p);
        let id_q = Matrix::identity(f, q);
        let zero = Matrix::zeros(f, p, q);
        for (x, y) in a.iter().zip(b) {
            let ny = y.scale(&-f.one());
            sys.add(&[(&id_p, x), (&ny, &id_q)], &zero);
        }
        sys.kernel()
    };
    let basis = space.basis().iter().map(|x| unflatten(f, p, q, x)).collect();
    Ok(HomSpace {
        side,
        basis,
        space,
        rows: p,
        cols: q,
    })
}

/// Solves matrix equations `Σ_t A_t X B_t = C` for `X` (p x q), stacked.
pub struct MatrixSystem {
    field: Field,
    p: usize,
    q: usize,
    rows: Vec<Vector>,
    rhs: Vector,
}

impl MatrixSystem {
    pub fn new(field: Field, p: usize, q: usize) -> MatrixSystem {
        MatrixSystem {
            field,
            p,
            q,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    /// Adds the block of equations `Σ_t a_t X b_t = c`.
    pub fn add(&mut self, terms: &[(&Matrix, &Matrix)], c: &Matrix) {
        let (m, n) = (c.rows(), c.cols());
        let base = self.rows.len();
        for _ in 0..m * n {
            self.rows.push(vecops::zero(self.field, self.p * self.q));
        }
        for (a, b) in terms {
            assert_eq!((a.rows(), a.cols(), b.rows(), b.cols()), (m, self.p, self.q, n));
            for i in 0..m {
                for x in 0..self.p {
                    let ax = a.get(i, x);
                    if ax.is_zero() {
                        continue;
                    }
                    for y in 0..self.q {
                        for j in 0..n {
                            let by = b.get(y, j);
                            if by.is_zero() {
                                continue;
                            }
                            let row = &mut self.rows[base + i * n + j];
                            row[x * self.q + y] = &row[x * self.q + y] + &(ax * by);
                        }
                    }
                }
            }
        }
        for i in 0..m {
            for j in 0..n {
                self.rhs.push(c.get(i, j).clone());
            }
        }
    }

    fn coefficient_matrix(&self) -> Matrix {
        Matrix::from_rows(self.field, self.p * self.q, &self.rows)
    }

    /// Solution space of the homogeneous system, as flattened `X`.
    pub fn kernel(&self) -> Subspace {
        if self.rows.is_empty() {
            return Subspace::full(self.field, self.p * self.q);
        }
        self.coefficient_matrix().kernel()
    }

    /// A particular solution.
    pub fn solve(&self) -> Option<Matrix> {
        if self.rows.is_empty() {
            return Some(Matrix::zeros(self.field, self.p, self.q));
        }
        let x = self.coefficient_matrix().solve(&self.rhs)?;
        Some(unflatten(self.field, self.p, self.q, &x))
    }
}

pub fn unflatten(field: Field, p: usize, q: usize, x: &[Scalar]) -> Matrix {
    let rows: Vec<Vector> = (0..p).map(|i| x[i * q..(i + 1) * q].to_vec()).collect();
    Matrix::from_rows(field, q, &rows)
}

pub fn flatten(m: &Matrix) -> Vector {
    m.row_vecs().concat()
}

/// A dual bimodule together with its basis of functionals (`dim R` x `dim U`).
#[derive(Clone, Debug)]
pub struct DualModule {
    pub module: Bimodule,
    pub side: Side,
    functionals: Vec<Matrix>,
    space: Subspace,
    source_dim: usize,
}

impl DualModule {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn functional(&self, i: usize) -> &Matrix {
        &self.functionals[i]
    }

    pub fn functionals(&self) -> &[Matrix] {
        &self.functionals
    }

    /// The functional with coordinates `c`.
    pub fn functional_of(&self, c: &[Scalar]) -> Matrix {
        let f = self.module.field();
        let r = self.module.left_algebra().dim().max(self.module.right_algebra().dim());
        let rows = self.functionals.first().map_or(r, |m| m.rows());
        let mut out = Matrix::zeros(f, rows, self.source_dim);
        for (x, m) in c.iter().zip(&self.functionals) {
            if !x.is_zero() {
                out = out.add(&m.scale(x));
            }
        }
        out
    }

    /// Coordinates of a functional given as a matrix.
    pub fn coords(&self, m: &Matrix) -> Option<Vector> {
        self.space.coords(&flatten(m))
    }

    /// `⟨u, f⟩ = f(u)` as an element of the base.
    pub fn eval(&self, u: &[Scalar], f: &[Scalar]) -> Vector {
        self.functional_of(f).apply(u)
    }
}

fn dual_from_space(
    space: Subspace,
    rdim: usize,
    n: usize,
    left: Arc<BaseAlgebra>,
    right: Arc<BaseAlgebra>,
    lmaps: &dyn Fn(usize, &Matrix) -> Matrix,
    rmaps: &dyn Fn(usize, &Matrix) -> Matrix,
    side: Side,
) -> Result<DualModule> {
    let f = left.field();
    let functionals: Vec<Matrix> = space.basis().iter().map(|x| unflatten(f, rdim, n, x)).collect();
    let induce = |op: &dyn Fn(&Matrix) -> Matrix| -> Result<Matrix> {
        let cols = functionals
            .iter()
            .map(|g| {
                space
                    .coords(&flatten(&op(g)))
                    .ok_or_else(|| Error::Internal("dual action leaves the dual".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_cols(f, functionals.len(), &cols))
    };
    let lact = (0..left.dim()).map(|i| induce(&|g| lmaps(i, g))).collect::<Result<_>>()?;
    let ract = (0..right.dim()).map(|i| induce(&|g| rmaps(i, g))).collect::<Result<_>>()?;
    let module = Bimodule::new_unchecked(left, right, lact, ract)?;
    Ok(DualModule {
        module,
        side,
        functionals,
        space,
        source_dim: n,
    })
}

/// `Hom_R(U, R)` for an `R`-`S`-bimodule `U`; an `S`-`R`-bimodule with
/// `(s f)(u) = f(u s)` and `(f r)(u) = f(u) r`.
pub fn left_dual(u: &Bimodule) -> Result<DualModule> {
    let r = u.left_algebra().clone();
    let s = u.right_algebra().clone();
    let (rd, n) = (r.dim(), u.dim());
    let f = u.field();
    let mut sys = MatrixSystem::new(f, rd, n);
    let id_r = Matrix::identity(f, rd);
    let id_n = Matrix::identity(f, n);
    let zero = Matrix::zeros(f, rd, n);
    let neg = |m: &Matrix| m.scale(&-f.one());
    for i in 0..rd {
        let nl = neg(r.left_mul(i));
        sys.add(&[(&id_r, u.lact(i)), (&nl, &id_n)], &zero);
    }
    let space = if rd == 1 { Subspace::full(f, n) } else { sys.kernel() };
    let rr = r.clone();
    dual_from_space(
        space,
        rd,
        n,
        s,
        r,
        &|i, g| g.mul(u.ract(i)),
        &|i, g| rr.right_mul(i).mul(g),
        Side::Left,
    )
}

/// `Hom_{R^op}(M, R)` for an `S`-`R`-bimodule `M`; an `R`-`S`-bimodule with
/// `(r f)(m) = r f(m)` and `(f s)(m) = f(s m)`.
pub fn right_dual(m: &Bimodule) -> Result<DualModule> {
    let r = m.right_algebra().clone();
    let s = m.left_algebra().clone();
    let (rd, n) = (r.dim(), m.dim());
    let f = m.field();
    let mut sys = MatrixSystem::new(f, rd, n);
    let id_r = Matrix::identity(f, rd);
    let id_n = Matrix::identity(f, n);
    let zero = Matrix::zeros(f, rd, n);
    for i in 0..rd {
        let nr = r.right_mul(i).scale(&-f.one());
        sys.add(&[(&id_r, m.ract(i)), (&nr, &id_n)], &zero);
    }
    let space = if rd == 1 { Subspace::full(f, n) } else { sys.kernel() };
    let rr = r.clone();
    dual_from_space(
        space,
        rd,
        n,
        r,
        s,
        &|i, g| rr.left_mul(i).mul(g),
        &|i, g| g.mul(m.lact(i)),
        Side::Right,
    )
}

/// The dual on the given side: `Hom_R(-, R)` for `Left`, `Hom_{R^op}(-, R)` for `Right`.
pub fn dual(u: &Bimodule, side: Side) -> Result<DualModule> {
    match side {
        Side::Left => left_dual(u),
        Side::Right => right_dual(u),
    }
}

/// `⟨u, f⟩` for `f` in the left dual of `U`.
pub fn eval_pairing(dual: &DualModule, u: &[Scalar], f: &[Scalar]) -> Result<Vector> {
    if u.len() != dual.source_dim || f.len() != dual.dim() {
        return Err(Error::Dimension("pairing arguments have the wrong size".into()));
    }
    Ok(dual.eval(u, f))
}

/// Dual-basis functionals `f_k` with `u = Σ_k f_k(u) e_k` for the standard basis,
/// if `U` is projective as a left module.
pub fn projective_basis_left(u: &Bimodule) -> Option<Vec<Matrix>> {
    let r = u.left_algebra();
    let (rd, n) = (r.dim(), u.dim());
    let f = u.field();
    if rd == 1 {
        let c = r.unit()[0].clone();
        return Some(
            (0..n)
                .map(|k| {
                    let mut m = Matrix::zeros(f, 1, n);
                    m.set(0, k, c.clone());
                    m
                })
                .collect(),
        );
    }
    // phi: R^n -> U, index k * rd + i ↦ e_i u_k.
    let mut phi = Matrix::zeros(f, n, n * rd);
    for k in 0..n {
        for i in 0..rd {
            let col = u.lact(i).col(k);
            for (a, x) in col.into_iter().enumerate() {
                phi.set(a, k * rd + i, x);
            }
        }
    }
    let id_n = Matrix::identity(f, n);
    let id_big = Matrix::identity(f, n * rd);
    let mut sys = MatrixSystem::new(f, n * rd, n);
    sys.add(&[(&phi, &id_n)], &id_n);
    let zero = Matrix::zeros(f, n * rd, n);
    for i in 0..rd {
        let block = Matrix::identity(f, n).kron(r.left_mul(i)).scale(&-f.one());
        sys.add(&[(&id_big, u.lact(i)), (&block, &id_n)], &zero);
    }
    let s = sys.solve()?;
    Some(
        (0..n)
            .map(|k| s.select_rows(&(k * rd..(k + 1) * rd).collect::<Vec<_>>()))
            .collect(),
    )
}

/// Mirror of [`projective_basis_left`]: `m = Σ_k e_k f_k(m)`.
pub fn projective_basis_right(m: &Bimodule) -> Option<Vec<Matrix>> {
    let r = m.right_algebra();
    let op = r.opposite();
    let l = m.left_algebra().opposite();
    projective_basis_left(&m.opposite(&l, &op))
}

pub fn is_projective_left(u: &Bimodule) -> bool {
    projective_basis_left(u).is_some()
}

pub fn is_projective_right(m: &Bimodule) -> bool {
    projective_basis_right(m).is_some()
}

pub fn is_projective(u: &Bimodule, side: Side) -> bool {
    match side {
        Side::Left => is_projective_left(u),
        Side::Right => is_projective_right(u),
    }
}

/// `U → Hom_{R^op}(Hom_R(U, R), R)`, `u ↦ (f ↦ f(u))`.
pub fn double_dual_eval(u: &Bimodule) -> Result<(DualModule, DualModule, BimoduleMap)> {
    let d = left_dual(u)?;
    let dd = right_dual(&d.module)?;
    let m = eval_into(u, &d, &dd)?;
    let map = BimoduleMap {
        source: u.clone(),
        target: dd.module.clone(),
        matrix: m,
    };
    Ok((d, dd, map))
}

/// `M → Hom_R(Hom_{R^op}(M, R), R)`, `m ↦ (f ↦ f(m))`.
pub fn double_dual_eval_right(m: &Bimodule) -> Result<(DualModule, DualModule, BimoduleMap)> {
    let d = right_dual(m)?;
    let dd = left_dual(&d.module)?;
    let mat = eval_into(m, &d, &dd)?;
    let map = BimoduleMap {
        source: m.clone(),
        target: dd.module.clone(),
        matrix: mat,
    };
    Ok((d, dd, map))
}

fn eval_into(u: &Bimodule, d: &DualModule, dd: &DualModule) -> Result<Matrix> {
    let f = u.field();
    let cols = (0..u.dim())
        .map(|j| {
            let e = u.basis_vec(j);
            let vals: Vec<Vector> = (0..d.dim()).map(|k| d.functional(k).apply(&e)).collect();
            let rd = vals.first().map_or(1, |v| v.len());
            let m = Matrix::from_cols(f, rd, &vals);
            dd.coords(&m)
                .ok_or_else(|| Error::Internal("evaluation is not a dual functional".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_cols(f, dd.dim(), &cols))
}

/// Functionals on `U ⊗_S V` (as `dim R` x `dim(U⊗_S V)` matrices) given by
/// `g ⊗ f ↦ (u ⊗ v ↦ f(u·g(v)))`, one per basis element of
/// `Hom_S(V,S) ⊗_S Hom_R(U,R)`.
pub struct LeftPairing {
    pub dual_v: DualModule,
    pub dual_u: DualModule,
    pub source: TensorProduct,
    pub target_tensor: TensorProduct,
    pub functionals: Vec<Matrix>,
}

pub fn left_pairing(u: &Bimodule, v: &Bimodule) -> Result<LeftPairing> {
    let f = u.field();
    let dual_v = left_dual(v)?;
    let dual_u = left_dual(u)?;
    let source = tensor_over(&dual_v.module, &dual_u.module)?;
    let uv = tensor_over(u, v)?;
    let sec = uv.section_matrix();
    let (du, dv) = (u.dim(), v.dim());
    let rd = u.left_algebra().dim();
    let mut pure: Vec<Vec<Matrix>> = Vec::with_capacity(dual_v.dim());
    for a in 0..dual_v.dim() {
        let g = dual_v.functional(a);
        let mut row = Vec::with_capacity(dual_u.dim());
        // u_i · g(v_j) for every pair.
        let mut prods = Vec::with_capacity(du * dv);
        for i in 0..du {
            let ui = u.basis_vec(i);
            for j in 0..dv {
                let s = g.apply(&v.basis_vec(j));
                prods.push(u.act_right(&ui, &s));
            }
        }
        for b in 0..dual_u.dim() {
            let fu = dual_u.functional(b);
            let cols: Vec<Vector> = prods.iter().map(|x| fu.apply(x)).collect();
            row.push(Matrix::from_cols(f, rd, &cols).mul(&sec));
        }
        pure.push(row);
    }
    let functionals = (0..source.dim())
        .map(|q| {
            let x = source.lift(&vecops::unit(f, source.dim(), q));
            let mut m = Matrix::zeros(f, rd, uv.dim());
            for a in 0..dual_v.dim() {
                for b in 0..dual_u.dim() {
                    let c = &x[a * dual_u.dim() + b];
                    if !c.is_zero() {
                        m = m.add(&pure[a][b].scale(c));
                    }
                }
            }
            m
        })
        .collect();
    Ok(LeftPairing {
        dual_v,
        dual_u,
        source,
        target_tensor: uv,
        functionals,
    })
}

/// Mirror pairing for right duals: `g ⊗ f ↦ (m ⊗ n ↦ g(f(m)·n))`, with
/// `g ∈ Hom_{R^op}(N,R)`, `f ∈ Hom_{S^op}(M,S)`.
pub fn right_pairing(m: &Bimodule, n: &Bimodule) -> Result<LeftPairing> {
    let fld = m.field();
    let dual_n = right_dual(n)?;
    let dual_m = right_dual(m)?;
    let source = tensor_over(&dual_n.module, &dual_m.module)?;
    let mn = tensor_over(m, n)?;
    let sec = mn.section_matrix();
    let (dm, dn) = (m.dim(), n.dim());
    let rd = n.right_algebra().dim();
    let mut pure: Vec<Vec<Matrix>> = Vec::with_capacity(dual_n.dim());
    for a in 0..dual_n.dim() {
        let g = dual_n.functional(a);
        let mut row = Vec::with_capacity(dual_m.dim());
        for b in 0..dual_m.dim() {
            let fm = dual_m.functional(b);
            let mut cols = Vec::with_capacity(dm * dn);
            for i in 0..dm {
                let s = fm.apply(&m.basis_vec(i));
                for j in 0..dn {
                    cols.push(g.apply(&n.act_left(&s, &n.basis_vec(j))));
                }
            }
            row.push(Matrix::from_cols(fld, rd, &cols).mul(&sec));
        }
        pure.push(row);
    }
    let functionals = (0..source.dim())
        .map(|q| {
            let x = source.lift(&vecops::unit(fld, source.dim(), q));
            let mut acc = Matrix::zeros(fld, rd, mn.dim());
            for a in 0..dual_n.dim() {
                for b in 0..dual_m.dim() {
                    let c = &x[a * dual_m.dim() + b];
                    if !c.is_zero() {
                        acc = acc.add(&pure[a][b].scale(c));
                    }
                }
            }
            acc
        })
        .collect();
    Ok(LeftPairing {
        dual_v: dual_n,
        dual_u: dual_m,
        source,
        target_tensor: mn,
        functionals,
    })
}

/// Result of [`tensor_dual_iso`].
pub struct TensorDualIso {
    pub map: BimoduleMap,
    pub is_isomorphism: bool,
}

/// `Hom_S(V,S) ⊗_S Hom_R(U,R) → Hom_R(U ⊗_S V, R)`.
pub fn tensor_dual_iso(u: &Bimodule, v: &Bimodule) -> Result<TensorDualIso> {
    let p = left_pairing(u, v)?;
    let target = left_dual(&p.target_tensor.module)?;
    let cols = p
        .functionals
        .iter()
        .map(|m| {
            target
                .coords(m)
                .ok_or_else(|| Error::Internal("paired functional is not left linear".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let matrix = Matrix::from_cols(u.field(), target.dim(), &cols);
    let is_isomorphism = is_projective_left(v) && matrix.is_invertible();
    Ok(TensorDualIso {
        map: BimoduleMap {
            source: p.source.module,
            target: target.module,
            matrix,
        },
        is_isomorphism,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn unit_law_for_tensor() {
        let r = BaseAlgebra::dual_numbers(q());
        let reg = Bimodule::regular(&r);
        let t = tensor_over(&reg, &reg).unwrap();
        assert_eq!(t.dim(), 2);
        let k = BaseAlgebra::ground(q());
        let v = Bimodule::vector_space(&k, 2);
        assert_eq!(tensor_over(&v, &v).unwrap().dim(), 4);
    }

    fn quiver_modules() -> (Bimodule, Bimodule) {
        // Over k×k: V = e1 V e2 (dim 2), W = e2 W e1 (dim 3).
        let f = q();
        let r = BaseAlgebra::product(f, 2);
        let mk = |dim: usize, l: usize, rr: usize| {
            let id = Matrix::identity(f, dim);
            let z = Matrix::zeros(f, dim, dim);
            let lact = (0..2).map(|i| if i == l { id.clone() } else { z.clone() }).collect();
            let ract = (0..2).map(|i| if i == rr { id.clone() } else { z.clone() }).collect();
            Bimodule::new(r.clone(), r.clone(), lact, ract).unwrap()
        };
        (mk(2, 0, 1), mk(3, 1, 0))
    }

    #[test]
    fn quiver_composition() {
        let (v, w) = quiver_modules();
        assert_eq!(tensor_over(&v, &w).unwrap().dim(), 6);
        assert_eq!(tensor_over(&v, &v).unwrap().dim(), 0);
        let iso = tensor_dual_iso(&v, &w).unwrap();
        assert!(iso.is_isomorphism);
    }

    #[test]
    fn duals_of_regular_and_free() {
        let r = BaseAlgebra::dual_numbers(q());
        let reg = Bimodule::regular(&r);
        assert_eq!(left_dual(&reg).unwrap().dim(), 2);
        let free = reg.direct_sum(&reg).unwrap().direct_sum(&reg).unwrap();
        assert_eq!(left_dual(&free).unwrap().dim(), 6);
    }

    #[test]
    fn matrix_column_module() {
        let f = q();
        let r = BaseAlgebra::matrix_algebra(f, 2);
        let k = BaseAlgebra::ground(f);
        // Column vectors: E_ij e_l = δ_jl e_i.
        let lact = (0..4)
            .map(|idx| {
                let (i, j) = (idx / 2, idx % 2);
                let mut m = Matrix::zeros(f, 2, 2);
                m.set(i, j, f.one());
                m
            })
            .collect();
        let col = Bimodule::new(r.clone(), k.clone(), lact, vec![Matrix::identity(f, 2)]).unwrap();
        assert!(is_projective_left(&col));
        let d = left_dual(&col).unwrap();
        assert_eq!(d.dim(), 2);
        let (_, dd, ev) = double_dual_eval(&col).unwrap();
        assert_eq!(dd.dim(), 2);
        assert!(ev.is_isomorphism());
    }

    #[test]
    fn residue_field_is_not_projective() {
        let f = q();
        let r = BaseAlgebra::dual_numbers(f);
        let k = BaseAlgebra::ground(f);
        let one = Matrix::identity(f, 1);
        let zero = Matrix::zeros(f, 1, 1);
        let u = Bimodule::new(r, k, vec![one.clone(), zero], vec![one]).unwrap();
        assert!(!is_projective_left(&u));
        let reg = Bimodule::regular(&BaseAlgebra::dual_numbers(f));
        assert!(is_projective_left(&reg));
    }

    #[test]
    fn dual_basis_pairing() {
        let f = q();
        let k = BaseAlgebra::ground(f);
        let v = Bimodule::vector_space(&k, 2);
        let d = left_dual(&v).unwrap();
        let e0 = v.basis_vec(0);
        let xi = vecops::unit(f, 2, 0);
        assert_eq!(eval_pairing(&d, &e0, &xi).unwrap(), vec![f.one()]);
        assert_eq!(eval_pairing(&d, &v.basis_vec(1), &xi).unwrap(), vec![f.zero()]);
        assert_eq!(eval_pairing(&d, &e0, &vecops::zero(f, 2)).unwrap(), vec![f.zero()]);
    }
}
