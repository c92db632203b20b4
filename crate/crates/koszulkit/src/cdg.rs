//! Curved DG-ring slices, their morphisms, and quasi-differential rings `B[δ]`.

use std::sync::Arc;

use crate::bimodule::BaseAlgebra;
use crate::checks::{Check, Checker};
use crate::error::{Error, Result};
use crate::graded::{GradedSlice, MulTable};
use crate::linalg::{vecops, Field, Matrix, Scalar, Subspace, Vector};

pub(crate) fn sign(f: Field, n: usize) -> Scalar {
    if n % 2 == 0 {
        f.one()
    } else {
        -f.one()
    }
}

/// `(B, d, h)` through degree `N`: `d_n : B^n → B^{n+1}` for `n < N` and `h ∈ B^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdgRingSlice {
    slice: GradedSlice,
    d: Vec<Matrix>,
    h: Vector,
}

impl CdgRingSlice {
    /// Only shapes are checked here; see [`CdgRingSlice::check_axioms`].
    pub fn new(slice: GradedSlice, d: Vec<Matrix>, h: Vector) -> Result<CdgRingSlice> {
        let top = slice.top();
        if top < 2 {
            return Err(Error::Window("a CDG slice needs degrees up to 2".into()));
        }
        if d.len() != top {
            return Err(Error::Dimension(format!("expected {top} differential components, got {}", d.len())));
        }
        for (n, m) in d.iter().enumerate() {
            m.check_shape(slice.dim(n + 1), slice.dim(n))?;
        }
        if h.len() != slice.dim(2) {
            return Err(Error::Dimension("curvature must lie in degree 2".into()));
        }
        Ok(CdgRingSlice { slice, d, h })
    }

    pub fn slice(&self) -> &GradedSlice {
        &self.slice
    }

    pub fn field(&self) -> Field {
        self.slice.field()
    }

    pub fn base(&self) -> &Arc<BaseAlgebra> {
        self.slice.base()
    }

    pub fn top(&self) -> usize {
        self.slice.top()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.slice.dim(n)
    }

    pub fn d(&self, n: usize) -> &Matrix {
        &self.d[n]
    }

    pub fn differentials(&self) -> &[Matrix] {
        &self.d
    }

    pub fn h(&self) -> &Vector {
        &self.h
    }

    /// `(B^op, d, -h)` with `x·y = (-1)^{|x||y|} yx`.
    pub fn opposite(&self) -> Result<CdgRingSlice> {
        CdgRingSlice::new(self.slice.opposite(true)?, self.d.clone(), vecops::neg(&self.h))
    }

    /// Whether `xy = (-1)^{|x||y|} yx` throughout the slice.
    pub fn is_graded_commutative(&self) -> bool {
        self.slice.opposite(true).map_or(false, |op| {
            let top = self.top();
            (0..=top).all(|i| (0..=top - i).all(|j| op.table(i, j) == self.slice.table(i, j)))
        })
    }

    pub fn apply_d(&self, n: usize, x: &[Scalar]) -> Vector {
        self.d[n].apply(x)
    }

    pub fn mul(&self, i: usize, j: usize, a: &[Scalar], b: &[Scalar]) -> Vector {
        self.slice.mul(i, j, a, b)
    }

    /// `[a, b] = ab - (-1)^{ij} ba`.
    pub fn commutator(&self, i: usize, a: &[Scalar], j: usize, b: &[Scalar]) -> Vector {
        let ab = self.mul(i, j, a, b);
        let ba = self.mul(j, i, b, a);
        vecops::sub(&ab, &vecops::scale(&sign(self.field(), i * j), &ba))
    }

    pub fn truncate(&self, n: usize) -> Result<CdgRingSlice> {
        let n = n.min(self.top());
        CdgRingSlice::new(self.slice.truncate(n), self.d[..n].to_vec(), self.h.clone())
    }

    /// Leibniz rule, `d² = [h, -]` and `d(h) = 0` on basis elements in range.
    pub fn check_axioms(&self) -> Vec<Check> {
        let f = self.field();
        let top = self.top();
        let mut leibniz = Checker::new("leibniz");
        'outer: for i in 0..top {
            for j in 0..top - i {
                for x in 0..self.dim(i) {
                    let ex = vecops::unit(f, self.dim(i), x);
                    for y in 0..self.dim(j) {
                        let ey = vecops::unit(f, self.dim(j), y);
                        let lhs = self.apply_d(i + j, &self.mul(i, j, &ex, &ey));
                        let r1 = self.mul(i + 1, j, &self.apply_d(i, &ex), &ey);
                        let r2 = self.mul(i, j + 1, &ex, &self.apply_d(j, &ey));
                        let rhs = vecops::add(&r1, &vecops::scale(&sign(f, i), &r2));
                        leibniz.expect_eq(&lhs, &rhs, &ex, || format!("d(xy) in degrees ({i},{j}), basis ({x},{y})"));
                        if leibniz.failed() {
                            break 'outer;
                        }
                    }
                }
            }
        }
        let mut curv = Checker::new("curvature");
        for n in 0..top.saturating_sub(1) {
            for b in 0..self.dim(n) {
                let e = vecops::unit(f, self.dim(n), b);
                let dd = self.apply_d(n + 1, &self.apply_d(n, &e));
                let hb = self.mul(2, n, &self.h, &e);
                let bh = self.mul(n, 2, &e, &self.h);
                curv.expect_eq(&dd, &vecops::sub(&hb, &bh), &e, || format!("d²(b) = [h,b] in degree {n}, basis {b}"));
            }
        }
        let mut closed = Checker::new("closed curvature");
        if top >= 3 {
            let dh = self.apply_d(2, &self.h);
            closed.expect_eq(&dh, &vecops::zero(f, self.dim(3)), &self.h, || "d(h) = 0".into());
        }
        vec![leibniz.finish(), curv.finish(), closed.finish()]
    }

    /// `d' = d + [a, -]`, `h' = h + d(a) + a²` for `a ∈ B^1`.
    pub fn connection_change(&self, a: &[Scalar]) -> Result<CdgRingSlice> {
        if a.len() != self.dim(1) {
            return Err(Error::Dimension("connection element must lie in degree 1".into()));
        }
        let f = self.field();
        let d = (0..self.top())
            .map(|n| {
                let cols: Vec<Vector> = (0..self.dim(n))
                    .map(|b| {
                        let e = vecops::unit(f, self.dim(n), b);
                        vecops::add(&self.apply_d(n, &e), &self.commutator(1, a, n, &e))
                    })
                    .collect();
                Matrix::from_cols(f, self.dim(n + 1), &cols)
            })
            .collect();
        let h = vecops::add(&vecops::add(&self.h, &self.apply_d(1, a)), &self.mul(1, 1, a, a));
        CdgRingSlice::new(self.slice.clone(), d, h)
    }
}

fn check_ring_map(src: &CdgRingSlice, tgt: &CdgRingSlice, f: &[Matrix]) -> Result<Check> {
    let fld = src.field();
    let top = src.top();
    if tgt.top() < top || f.len() != top + 1 {
        return Err(Error::Dimension("graded map must have one component per degree".into()));
    }
    for (n, m) in f.iter().enumerate() {
        m.check_shape(tgt.dim(n), src.dim(n))?;
    }
    let mut c = Checker::new("graded ring map");
    let one = src.slice.unit();
    c.expect_eq(&f[0].apply(&one), &tgt.slice.unit(), &one, || "unit is not preserved".into());
    for i in 0..=top {
        for j in 0..=top - i {
            for x in 0..src.dim(i) {
                let ex = vecops::unit(fld, src.dim(i), x);
                for y in 0..src.dim(j) {
                    let ey = vecops::unit(fld, src.dim(j), y);
                    let lhs = f[i + j].apply(&src.mul(i, j, &ex, &ey));
                    let rhs = tgt.mul(i, j, &f[i].apply(&ex), &f[j].apply(&ey));
                    c.expect_eq(&lhs, &rhs, &ex, || format!("f(xy) in degrees ({i},{j}), basis ({x},{y})"));
                }
            }
        }
    }
    Ok(c.finish())
}

/// True when the degree-zero component of `f` is the identity of `R`.
pub fn is_over_base(f: &[Matrix]) -> bool {
    f.first().is_some_and(|m| m.rows() == m.cols() && *m == Matrix::identity(m.field(), m.rows()))
}

/// Checks that `(f, a) : B'' → B'` is a morphism of CDG-rings.
pub fn verify_cdg_morphism(source: &CdgRingSlice, target: &CdgRingSlice, f: &[Matrix], a: &[Scalar]) -> Result<Vec<Check>> {
    let ring = check_ring_map(source, target, f)?;
    if a.len() != target.dim(1) {
        return Err(Error::Dimension("change-of-connection element must lie in degree 1".into()));
    }
    let fld = source.field();
    let mut iv = Checker::new("(iv) f(d''b) = d'(fb) + [a, fb]");
    for n in 0..source.top() {
        for b in 0..source.dim(n) {
            let e = vecops::unit(fld, source.dim(n), b);
            let fb = f[n].apply(&e);
            let lhs = f[n + 1].apply(&source.apply_d(n, &e));
            let rhs = vecops::add(&target.apply_d(n, &fb), &target.commutator(1, a, n, &fb));
            iv.expect_eq(&lhs, &rhs, &e, || format!("degree {n}, basis {b}"));
        }
    }
    let mut v = Checker::new("(v) f(h'') = h' + d'(a) + a²");
    let lhs = f[2].apply(source.h());
    let rhs = vecops::add(&vecops::add(target.h(), &target.apply_d(1, a)), &target.mul(1, 1, a, a));
    v.expect_eq(&lhs, &rhs, source.h(), || "curvature".into());
    Ok(vec![ring, iv.finish(), v.finish()])
}

/// Checks that the invertible `z ∈ R` is a 2-morphism `(f, a) ⇒ (g, b)`.
pub fn verify_two_morphism(
    source: &CdgRingSlice,
    target: &CdgRingSlice,
    fa: (&[Matrix], &[Scalar]),
    gb: (&[Matrix], &[Scalar]),
    z: &[Scalar],
) -> Result<Vec<Check>> {
    let fld = source.field();
    let r = target.base();
    if z.len() != r.dim() {
        return Err(Error::Dimension("gauge element must lie in degree 0".into()));
    }
    let zi = r
        .inverse(z)
        .ok_or_else(|| Error::Precondition("gauge element is not invertible".into()))?;
    let (f, a) = fa;
    let (g, b) = gb;
    if f.len() != source.top() + 1 || g.len() != source.top() + 1 {
        return Err(Error::Dimension("graded map must have one component per degree".into()));
    }
    let mut vi = Checker::new("(vi) g(c) = z f(c) z⁻¹");
    for n in 0..=source.top() {
        for c in 0..source.dim(n) {
            let e = vecops::unit(fld, source.dim(n), c);
            let conj = target.mul(n, 0, &target.mul(0, n, z, &f[n].apply(&e)), &zi);
            vi.expect_eq(&g[n].apply(&e), &conj, &e, || format!("degree {n}, basis {c}"));
        }
    }
    let mut vii = Checker::new("(vii) b = z a z⁻¹ - d'(z) z⁻¹");
    let zaz = target.mul(1, 0, &target.mul(0, 1, z, a), &zi);
    let dz = target.mul(1, 0, &target.apply_d(0, z), &zi);
    vii.expect_eq(&b.to_vec(), &vecops::sub(&zaz, &dz), &z.to_vec(), || "connection element".into());
    Ok(vec![vi.finish(), vii.finish()])
}

/// `B̂ = B[δ]` with `B̂^n = B^n ⊕ B^{n-1} δ` and the derivation `∂ = ∂/∂δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiDiffSlice {
    pub hat: GradedSlice,
    /// `del[n] : B̂^n → B̂^{n-1}` (`del[0]` is the zero map to the zero space).
    pub del: Vec<Matrix>,
    /// `embed[n] : B^n → B̂^n`, `b ↦ b + 0δ`.
    pub embed: Vec<Matrix>,
    pub delta: Vector,
    underlying: GradedSlice,
}

fn split(x: &[Scalar], db: usize) -> (&[Scalar], &[Scalar]) {
    x.split_at(db)
}

fn hat_mul(b: &CdgRingSlice, i: usize, x: &[Scalar], j: usize, y: &[Scalar]) -> Vector {
    let f = b.field();
    let n = i + j;
    let (b1, c1) = split(x, b.dim(i));
    let (b2, c2) = split(y, b.dim(j));
    let mut out_b = b.mul(i, j, b1, b2);
    if i >= 1 {
        let t = b.mul(i - 1, j + 1, c1, &b.apply_d(j, b2));
        vecops::axpy(&mut out_b, &f.one(), &t);
        if j >= 1 {
            let cc = b.mul(i - 1, j - 1, c1, c2);
            let cch = b.mul(n - 2, 2, &cc, b.h());
            vecops::axpy(&mut out_b, &sign(f, j - 1), &cch);
        }
    }
    if n == 0 {
        return out_b;
    }
    let mut out_c = vecops::zero(f, b.dim(n - 1));
    if j >= 1 {
        vecops::axpy(&mut out_c, &f.one(), &b.mul(i, j - 1, b1, c2));
    }
    if i >= 1 {
        vecops::axpy(&mut out_c, &sign(f, j), &b.mul(i - 1, j, c1, b2));
        if j >= 1 {
            let t = b.mul(i - 1, j, c1, &b.apply_d(j - 1, c2));
            vecops::axpy(&mut out_c, &f.one(), &t);
        }
    }
    out_b.extend(out_c);
    out_b
}

/// The quasi-differential graded ring of a CDG-ring slice, through the same degree.
pub fn quasi_differential_ring(b: &CdgRingSlice) -> Result<QuasiDiffSlice> {
    let f = b.field();
    let top = b.top();
    let hd = |n: usize| b.dim(n) + if n >= 1 { b.dim(n - 1) } else { 0 };
    let mut mult = Vec::with_capacity(top + 1);
    for i in 0..=top {
        let mut row = Vec::with_capacity(top - i + 1);
        for j in 0..=top - i {
            let mut cols = Vec::with_capacity(hd(i) * hd(j));
            for x in 0..hd(i) {
                let ex = vecops::unit(f, hd(i), x);
                for y in 0..hd(j) {
                    cols.push(hat_mul(b, i, &ex, j, &vecops::unit(f, hd(j), y)));
                }
            }
            row.push(MulTable {
                out: hd(i + j),
                left: hd(i),
                right: hd(j),
                cols,
            });
        }
        mult.push(row);
    }
    let hat = GradedSlice::from_tables(b.base().clone(), mult)?;
    let del = (0..=top)
        .map(|n| {
            if n == 0 {
                return Matrix::zeros(f, 0, hd(0));
            }
            let mut m = Matrix::zeros(f, hd(n - 1), hd(n));
            let s = sign(f, n - 1);
            for c in 0..b.dim(n - 1) {
                m.set(c, b.dim(n) + c, s.clone());
            }
            m
        })
        .collect();
    let embed = (0..=top)
        .map(|n| {
            let mut m = Matrix::zeros(f, hd(n), b.dim(n));
            for x in 0..b.dim(n) {
                m.set(x, x, f.one());
            }
            m
        })
        .collect();
    let mut delta = vecops::zero(f, hd(1));
    for (k, u) in b.base().unit().iter().enumerate() {
        delta[b.dim(1) + k] = u.clone();
    }
    Ok(QuasiDiffSlice {
        hat,
        del,
        embed,
        delta,
        underlying: b.slice().clone(),
    })
}

impl QuasiDiffSlice {
    pub fn top(&self) -> usize {
        self.hat.top()
    }

    pub fn apply_del(&self, n: usize, x: &[Scalar]) -> Vector {
        self.del[n].apply(x)
    }

    /// Odd derivation, `∂² = 0`, acyclicity and `ker ∂ = B`.
    pub fn check(&self) -> Vec<Check> {
        let f = self.hat.field();
        let top = self.top();
        let mut der = Checker::new("odd derivation");
        for i in 0..=top {
            for j in 0..=top - i {
                if i + j == 0 {
                    continue;
                }
                for x in 0..self.hat.dim(i) {
                    let ex = vecops::unit(f, self.hat.dim(i), x);
                    for y in 0..self.hat.dim(j) {
                        let ey = vecops::unit(f, self.hat.dim(j), y);
                        let lhs = self.apply_del(i + j, &self.hat.mul(i, j, &ex, &ey));
                        let mut rhs = vecops::zero(f, self.hat.dim(i + j - 1));
                        if i >= 1 {
                            rhs = self.hat.mul(i - 1, j, &self.apply_del(i, &ex), &ey);
                        }
                        if j >= 1 {
                            let t = self.hat.mul(i, j - 1, &ex, &self.apply_del(j, &ey));
                            vecops::axpy(&mut rhs, &sign(f, i), &t);
                        }
                        der.expect_eq(&lhs, &rhs, &ex, || format!("∂(xy) in degrees ({i},{j}), basis ({x},{y})"));
                    }
                }
            }
        }
        let mut sq = Checker::new("square zero");
        for n in 2..=top {
            let m = self.del[n - 1].mul(&self.del[n]);
            if !m.is_zero() {
                sq.record(&Vec::new(), flatten_nonzero(&m), || format!("∂∂ ≠ 0 on degree {n}"));
            }
        }
        let mut acyc = Checker::new("acyclic");
        let one = self.hat.unit();
        if top == 0 || self.del[1].solve(&one).is_none() {
            acyc.record(&one, one.clone(), || "1 is not a boundary".into());
        }
        for n in 0..top {
            let kernel = if n == 0 { self.hat.dim(0) } else { self.del[n].kernel().dim() };
            let image = self.del[n + 1].rank();
            if kernel != image {
                acyc.record(&Vec::new(), Vec::new(), || format!("homology in degree {n} has dimension {}", kernel - image));
            }
        }
        let mut ker = Checker::new("kernel is B");
        for n in 0..=top {
            let k = if n == 0 { Subspace::full(f, self.hat.dim(0)) } else { self.del[n].kernel() };
            if k != self.embed[n].image() {
                ker.record(&Vec::new(), Vec::new(), || format!("ker ∂ differs from B in degree {n}"));
            }
        }
        vec![der.finish(), sq.finish(), acyc.finish(), ker.finish()]
    }

    /// Recovers `d(b) = [δ', b]` and `h = δ'²` from any `δ'` with `∂δ' = 1`.
    pub fn recover(&self, delta: &[Scalar]) -> Result<CdgRingSlice> {
        let f = self.hat.field();
        let top = self.top();
        if top < 2 {
            return Err(Error::Window("recovery needs degrees up to 2".into()));
        }
        if self.apply_del(1, delta) != self.hat.unit() {
            return Err(Error::Precondition("∂δ must equal 1".into()));
        }
        let b = &self.underlying;
        let back = |n: usize, x: &Vector| -> Result<Vector> {
            let (bp, cp) = x.split_at(b.dim(n));
            if !vecops::is_zero(cp) {
                return Err(Error::Internal(format!("element of degree {n} leaves ker ∂")));
            }
            Ok(bp.to_vec())
        };
        let mut d = Vec::with_capacity(top);
        for n in 0..top {
            let cols = (0..b.dim(n))
                .map(|x| {
                    let e = self.embed[n].apply(&vecops::unit(f, b.dim(n), x));
                    let db = vecops::sub(&self.hat.mul(1, n, delta, &e), &vecops::scale(&sign(f, n), &self.hat.mul(n, 1, &e, delta)));
                    back(n + 1, &db)
                })
                .collect::<Result<Vec<_>>>()?;
            d.push(Matrix::from_cols(f, b.dim(n + 1), &cols));
        }
        let h = back(2, &self.hat.mul(1, 1, delta, delta))?;
        CdgRingSlice::new(b.clone(), d, h)
    }
}

fn flatten_nonzero(m: &Matrix) -> Vector {
    m.row_vecs().into_iter().flatten().collect()
}
