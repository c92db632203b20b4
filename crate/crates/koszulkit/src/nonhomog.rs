//! Nonhomogeneous quadratic data `(q, p, h)` in split coordinates `R ⊕ V`,
//! the self-consistency equations, change of strict generators and the dual
//! CDG-ring.

use std::sync::Arc;

use crate::bimodule::{apply_left_factor, apply_right_factor, left_dual, left_pairing, map_left_factor, map_right_factor, BaseAlgebra, Bimodule, DualModule, Side};
use crate::cdg::{sign, CdgRingSlice};
use crate::checks::{all_hold, Check, Checker};
use crate::error::{Error, Result};
use crate::graded::GradedSlice;
use crate::linalg::{vecops, Field, Matrix, Scalar, Subspace, Vector};
use crate::quadratic::{build_quadratic_slice_with_words, quadratic_dual, QuadraticPresentation};

/// A weak nonhomogeneous quadratic ring given by its quadratic part and the
/// maps `q : V × R → R`, `p : Î → V`, `h : Î → R` in the chosen splitting.
#[derive(Clone, Debug)]
pub struct NonhomogPresentation {
    quadratic: QuadraticPresentation,
    /// `dim R × (dim V · dim R)`; column `v * dim R + r` is `q(e_v, e_r)`.
    q: Matrix,
    lifts: Vec<Vector>,
    p_values: Vec<Vector>,
    h_values: Vec<Vector>,
    /// Rows `[w | p(w) | h(w)]` spanning the graph of `(p, h)` on `Î`.
    graph: Subspace,
}

impl PartialEq for NonhomogPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.quadratic == other.quadratic && self.q == other.q && self.graph == other.graph
    }
}

impl NonhomogPresentation {
    /// `lifts` are vectors of `V ⊗_k V` projecting onto a basis of `I`, with
    /// `p` and `h` given on them. Values on `ker(V ⊗_k V → V ⊗_R V)` are forced.
    pub fn new(
        quadratic: QuadraticPresentation,
        q: Matrix,
        lifts: Vec<Vector>,
        p_values: Vec<Vector>,
        h_values: Vec<Vector>,
    ) -> Result<NonhomogPresentation> {
        if quadratic.side() != Side::Left {
            return Err(Error::Precondition("nonhomogeneous data needs a left-sided quadratic part".into()));
        }
        let f = quadratic.field();
        let v = quadratic.generators();
        let (dv, dr) = (v.dim(), quadratic.base().dim());
        q.check_shape(dr, dv * dr)?;
        if lifts.len() != p_values.len() || lifts.len() != h_values.len() {
            return Err(Error::Dimension("lifts, p-values and h-values must have equal length".into()));
        }
        for (i, ((l, p), h)) in lifts.iter().zip(&p_values).zip(&h_values).enumerate() {
            if l.len() != dv * dv || p.len() != dv || h.len() != dr {
                return Err(Error::Dimension(format!("lift {i} or its values have the wrong length")));
            }
        }
        let projected = Subspace::span(f, quadratic.square().dim(), lifts.iter().map(|l| quadratic.square().project(l)));
        if projected.dim() != lifts.len() || projected != *quadratic.relations() {
            return Err(Error::Invalid(format!(
                "lifts must project onto a basis of I (dim {}), got rank {} from {} lifts",
                quadratic.relations().dim(),
                projected.dim(),
                lifts.len()
            )));
        }
        let mut rows: Vec<Vector> = Vec::new();
        for ((l, p), h) in lifts.iter().zip(&p_values).zip(&h_values) {
            let mut row = l.clone();
            row.extend(p.iter().cloned());
            row.extend(h.iter().cloned());
            rows.push(row);
        }
        let mut np = NonhomogPresentation {
            quadratic,
            q,
            lifts,
            p_values,
            h_values,
            graph: Subspace::zero(f, 0),
        };
        for (w, pv) in np.kernel_generators() {
            let mut row = w;
            row.extend(pv);
            row.extend(vecops::zero(f, dr));
            rows.push(row);
        }
        let graph = Subspace::span(f, dv * dv + dv + dr, rows);
        if let Some((k, &piv)) = graph.pivots().iter().enumerate().find(|(_, &p)| p >= dv * dv) {
            let row = graph.basis()[k].clone();
            return Err(Error::Invalid(format!(
                "p and h are not well defined on Î: the zero tensor is forced to take a nonzero value (coordinate {})",
                piv - dv * dv
            ))
            .with_vector(&row));
        }
        np.graph = graph;
        Ok(np)
    }

    /// `q = 0`, `p = 0`, `h = 0`.
    pub fn homogeneous(quadratic: QuadraticPresentation) -> Result<NonhomogPresentation> {
        let f = quadratic.field();
        let (dv, dr) = (quadratic.generators().dim(), quadratic.base().dim());
        let lifts: Vec<Vector> = quadratic.relations().basis().iter().map(|w| quadratic.square().lift(w)).collect();
        let n = lifts.len();
        NonhomogPresentation::new(
            quadratic,
            Matrix::zeros(f, dr, dv * dr),
            lifts,
            vec![vecops::zero(f, dv); n],
            vec![vecops::zero(f, dr); n],
        )
    }

    pub fn quadratic(&self) -> &QuadraticPresentation {
        &self.quadratic
    }

    pub fn field(&self) -> Field {
        self.quadratic.field()
    }

    pub fn base(&self) -> &Arc<BaseAlgebra> {
        self.quadratic.base()
    }

    pub fn generators(&self) -> &Bimodule {
        self.quadratic.generators()
    }

    pub fn q_matrix(&self) -> &Matrix {
        &self.q
    }

    pub fn lifts(&self) -> &[Vector] {
        &self.lifts
    }

    pub fn p_values(&self) -> &[Vector] {
        &self.p_values
    }

    pub fn h_values(&self) -> &[Vector] {
        &self.h_values
    }

    fn dv(&self) -> usize {
        self.generators().dim()
    }

    fn dr(&self) -> usize {
        self.base().dim()
    }

    /// `q(v, r)`.
    pub fn q_value(&self, v: &[Scalar], r: &[Scalar]) -> Vector {
        let f = self.field();
        let dr = self.dr();
        let mut out = vecops::zero(f, dr);
        for (a, va) in v.iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            for (i, ri) in r.iter().enumerate() {
                if ri.is_zero() {
                    continue;
                }
                vecops::axpy(&mut out, &(va * ri), &self.q.col(a * dr + i));
            }
        }
        out
    }

    /// `Σ c_ab q(e_a, g(e_b))` for `w = Σ c_ab e_a ⊗ e_b`, with `g : V → R`.
    fn q_first<G: Fn(&[Scalar]) -> Vector>(&self, w: &[Scalar], g: G) -> Vector {
        let f = self.field();
        let dv = self.dv();
        let mut out = vecops::zero(f, self.dr());
        for a in 0..dv {
            let slice = &w[a * dv..(a + 1) * dv];
            if vecops::is_zero(slice) {
                continue;
            }
            let s = g(slice);
            let qa = self.q_value(&vecops::unit(f, dv, a), &s);
            vecops::axpy(&mut out, &f.one(), &qa);
        }
        out
    }

    /// `Σ c_ab e_a · g(e_b)` with `g : V → R`.
    fn act_first<G: Fn(&[Scalar]) -> Vector>(&self, w: &[Scalar], g: G) -> Vector {
        let f = self.field();
        let dv = self.dv();
        let v = self.generators();
        let mut out = vecops::zero(f, dv);
        for a in 0..dv {
            let slice = &w[a * dv..(a + 1) * dv];
            if vecops::is_zero(slice) {
                continue;
            }
            let s = g(slice);
            vecops::axpy(&mut out, &f.one(), &v.act_right(&vecops::unit(f, dv, a), &s));
        }
        out
    }

    /// `Σ c_ab g(e_a) · e_b` with `g : V → R`.
    fn act_second<G: Fn(&[Scalar]) -> Vector>(&self, w: &[Scalar], g: G) -> Vector {
        let f = self.field();
        let dv = self.dv();
        let v = self.generators();
        let mut out = vecops::zero(f, dv);
        for b in 0..dv {
            let slice: Vector = (0..dv).map(|a| w[a * dv + b].clone()).collect();
            if vecops::is_zero(&slice) {
                continue;
            }
            let s = g(&slice);
            vecops::axpy(&mut out, &f.one(), &v.act_left(&s, &vecops::unit(f, dv, b)));
        }
        out
    }

    /// `(u ⊗ rv - ur ⊗ v, q(u,r) v)` for basis `u, r, v`.
    fn kernel_generators(&self) -> Vec<(Vector, Vector)> {
        let f = self.field();
        let (dv, dr) = (self.dv(), self.dr());
        let v = self.generators();
        if dr == 1 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for a in 0..dv {
            let u = vecops::unit(f, dv, a);
            for i in 0..dr {
                let r = vecops::unit(f, dr, i);
                let ur = v.act_right(&u, &r);
                let qur = self.q_value(&u, &r);
                for b in 0..dv {
                    let w = vecops::unit(f, dv, b);
                    let t = vecops::sub(&vecops::kron(f, &u, &v.act_left(&r, &w)), &vecops::kron(f, &ur, &w));
                    if vecops::is_zero(&t) {
                        continue;
                    }
                    out.push((t, v.act_left(&qur, &w)));
                }
            }
        }
        out
    }

    /// `Î ⊂ V ⊗_k V`.
    pub fn hat_relations(&self) -> Subspace {
        let n = self.dv() * self.dv();
        Subspace::span(self.field(), n, self.graph.basis().iter().map(|r| r[..n].to_vec()))
    }

    /// `(p(w), h(w))` for `w ∈ Î`.
    pub fn eval(&self, w: &[Scalar]) -> Option<(Vector, Vector)> {
        let (dv, dr) = (self.dv(), self.dr());
        let mut x = w.to_vec();
        x.extend(vecops::zero(self.field(), dv + dr));
        let red = self.graph.reduce(&x);
        if !vecops::is_zero(&red[..dv * dv]) {
            return None;
        }
        let p = vecops::neg(&red[dv * dv..dv * dv + dv]);
        let h = vecops::neg(&red[dv * dv + dv..]);
        Some((p, h))
    }

    /// `(w, p(w), h(w))` over a basis of `Î`.
    pub fn hat_basis_values(&self) -> Vec<(Vector, Vector, Vector)> {
        self.hat_relations()
            .basis()
            .iter()
            .map(|w| {
                let (p, h) = self.eval(w).expect("basis of Î");
                (w.clone(), p, h)
            })
            .collect()
    }

    /// Spanning set of `Î`: the lifts and the kernel generators.
    fn hat_spanning(&self) -> Vec<Vector> {
        let mut s = self.lifts.clone();
        s.extend(self.kernel_generators().into_iter().map(|(w, _)| w));
        s
    }

    /// `q''(v,r) = q(v,r) + a(v)r - a(vr)`, `p'' = p + î₁a(î₂) + a(î₁)î₂`,
    /// `h'' = h + a(p) + a(î₁a(î₂)) - q(î₁, a(î₂))` for the strict generators `v + a(v)`.
    /// `a` is a `dim R × dim V` matrix of a left `R`-linear map.
    pub fn change_of_generators(&self, a: &Matrix) -> Result<NonhomogPresentation> {
        let f = self.field();
        let (dv, dr) = (self.dv(), self.dr());
        let r = self.base();
        let v = self.generators();
        a.check_shape(dr, dv)?;
        for i in 0..dr {
            if a.mul(v.lact(i)) != r.left_mul(i).mul(a) {
                return Err(Error::Precondition("the map a : V → R is not left R-linear".into()));
            }
        }
        let mut qcols = Vec::with_capacity(dv * dr);
        for x in 0..dv {
            let e = vecops::unit(f, dv, x);
            let ae = a.apply(&e);
            for i in 0..dr {
                let ri = vecops::unit(f, dr, i);
                let mut c = self.q_value(&e, &ri);
                vecops::axpy(&mut c, &f.one(), &r.mul(&ae, &ri));
                vecops::axpy(&mut c, &-f.one(), &a.apply(&v.act_right(&e, &ri)));
                qcols.push(c);
            }
        }
        let q2 = Matrix::from_cols(f, dr, &qcols);
        let mut p2 = Vec::with_capacity(self.lifts.len());
        let mut h2 = Vec::with_capacity(self.lifts.len());
        for ((w, p), h) in self.lifts.iter().zip(&self.p_values).zip(&self.h_values) {
            let ga = |x: &[Scalar]| a.apply(x);
            let mut pn = p.clone();
            vecops::axpy(&mut pn, &f.one(), &self.act_first(w, ga));
            vecops::axpy(&mut pn, &f.one(), &self.act_second(w, ga));
            let mut hn = h.clone();
            vecops::axpy(&mut hn, &f.one(), &a.apply(p));
            vecops::axpy(&mut hn, &f.one(), &a.apply(&self.act_first(w, ga)));
            vecops::axpy(&mut hn, &-f.one(), &self.q_first(w, ga));
            p2.push(pn);
            h2.push(hn);
        }
        NonhomogPresentation::new(self.quadratic.clone(), q2, self.lifts.clone(), p2, h2)
    }
}

trait WithVector {
    fn with_vector(self, v: &[Scalar]) -> Self;
}

impl WithVector for Error {
    fn with_vector(self, v: &[Scalar]) -> Error {
        match self {
            Error::Invalid(s) => {
                let txt: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                Error::Invalid(format!("{s}; witness row [{}]", txt.join(", ")))
            }
            e => e,
        }
    }
}

/// Equations (a)–(k) on spanning sets; `Î^{(3)} = (Î ⊗ V) ∩ (V ⊗ Î)` inside `V^{⊗_k 3}`.
pub fn verify_self_consistency(p: &NonhomogPresentation) -> Vec<Check> {
    let f = p.field();
    let (dv, dr) = (p.dv(), p.dr());
    let r = p.base();
    let v = p.generators();
    let ev = |i: usize| vecops::unit(f, dv, i);
    let er = |i: usize| vecops::unit(f, dr, i);

    let mut a = Checker::new("(a) q(rv,s) = r q(v,s)");
    let mut b = Checker::new("(b) q(v,rs) = q(vr,s) + q(v,r)s");
    for x in 0..dv {
        for i in 0..dr {
            for j in 0..dr {
                let (ri, sj) = (er(i), er(j));
                let lhs = p.q_value(&v.act_left(&ri, &ev(x)), &sj);
                a.expect_eq(&lhs, &r.mul(&ri, &p.q_value(&ev(x), &sj)), &ev(x), || format!("v = e{x}, r = e{i}, s = e{j}"));
                let lhs = p.q_value(&ev(x), &r.mul(&ri, &sj));
                let rhs = vecops::add(&p.q_value(&v.act_right(&ev(x), &ri), &sj), &r.mul(&p.q_value(&ev(x), &ri), &sj));
                b.expect_eq(&lhs, &rhs, &ev(x), || format!("v = e{x}, r = e{i}, s = e{j}"));
            }
        }
    }

    let span = p.hat_spanning();
    let mut c = Checker::new("(c) p(rî) = r p(î)");
    let mut d = Checker::new("(d) h(rî) = r h(î)");
    let mut g = Checker::new("(g) p(î r) = p(î) r - î₁ q(î₂, r)");
    let mut hh = Checker::new("(h) h(î r) = h(î) r - q(p(î), r) + q(î₁, q(î₂, r))");
    for w in &span {
        let (pw, hw) = p.eval(w).expect("spanning vectors lie in Î");
        for i in 0..dr {
            let ri = er(i);
            let rw = apply_left_factor(w, dv, dv, &v.left_action(&ri));
            match p.eval(&rw) {
                None => {
                    c.record(w, rw.clone(), || format!("r î leaves Î for r = e{i}"));
                    d.record(w, rw.clone(), || format!("r î leaves Î for r = e{i}"));
                }
                Some((prw, hrw)) => {
                    c.expect_eq(&prw, &v.act_left(&ri, &pw), w, || format!("r = e{i}"));
                    d.expect_eq(&hrw, &r.mul(&ri, &hw), w, || format!("r = e{i}"));
                }
            }
            let wr = apply_right_factor(w, dv, dv, &v.right_action(&ri));
            match p.eval(&wr) {
                None => {
                    g.record(w, wr.clone(), || format!("î r leaves Î for r = e{i}"));
                    hh.record(w, wr.clone(), || format!("î r leaves Î for r = e{i}"));
                }
                Some((pwr, hwr)) => {
                    let qr = |x: &[Scalar]| p.q_value(x, &ri);
                    let rhs = vecops::sub(&v.act_right(&pw, &ri), &p.act_first(w, qr));
                    g.expect_eq(&pwr, &rhs, w, || format!("r = e{i}"));
                    let qq = p.q_first(w, |x: &[Scalar]| p.q_value(x, &ri));
                    let rhs = vecops::add(&vecops::sub(&r.mul(&hw, &ri), &p.q_value(&pw, &ri)), &qq);
                    hh.expect_eq(&hwr, &rhs, w, || format!("r = e{i}"));
                }
            }
        }
    }

    let mut e = Checker::new("(e) p(u⊗rv - ur⊗v) = q(u,r)v");
    let mut ff = Checker::new("(f) h(u⊗rv - ur⊗v) = 0");
    for (w, expected) in p.kernel_generators() {
        match p.eval(&w) {
            None => e.record(&w, w.clone(), || "kernel generator outside Î".into()),
            Some((pw, hw)) => {
                e.expect_eq(&pw, &expected, &w, || "kernel generator".into());
                ff.expect_eq(&hw, &vecops::zero(f, dr), &w, || "kernel generator".into());
            }
        }
    }

    let mut i3 = Checker::new("(i) p(ĵ₁ĵ₂)ĵ₃ - ĵ₁p(ĵ₂ĵ₃) ∈ Î");
    let mut j3 = Checker::new("(j) p(X) = h(ĵ₁ĵ₂)ĵ₃ - ĵ₁h(ĵ₂ĵ₃)");
    let mut k3 = Checker::new("(k) h(X) = q(ĵ₁, h(ĵ₂ĵ₃))");
    for jhat in hat_triple(p).basis() {
        let pl = |x: &[Scalar]| p.eval(x).expect("slices of Î⊗V lie in Î").0;
        let hl = |x: &[Scalar]| p.eval(x).expect("slices of Î⊗V lie in Î").1;
        let p1 = map_left_factor(f, jhat, dv * dv, dv, dv, pl);
        let p2 = map_right_factor(f, jhat, dv, dv * dv, dv, pl);
        let x = vecops::sub(&p1, &p2);
        let Some((px, hx)) = p.eval(&x) else {
            i3.record(jhat, x.clone(), || "X is not in Î".into());
            continue;
        };
        let h1 = map_left_factor(f, jhat, dv * dv, dv, dr, hl);
        let h2 = map_right_factor(f, jhat, dv, dv * dv, dr, hl);
        let mut rhs = vecops::zero(f, dv);
        let mut qk = vecops::zero(f, dr);
        for s in 0..dr {
            for y in 0..dv {
                let c1 = &h1[s * dv + y];
                if !c1.is_zero() {
                    vecops::axpy(&mut rhs, c1, &v.act_left(&er(s), &ev(y)));
                }
                let c2 = &h2[y * dr + s];
                if !c2.is_zero() {
                    vecops::axpy(&mut rhs, &-c2, &v.act_right(&ev(y), &er(s)));
                    vecops::axpy(&mut qk, c2, &p.q_value(&ev(y), &er(s)));
                }
            }
        }
        j3.expect_eq(&px, &rhs, jhat, || "element of Î^(3)".into());
        k3.expect_eq(&hx, &qk, jhat, || "element of Î^(3)".into());
    }
    vec![
        a.finish(),
        b.finish(),
        c.finish(),
        d.finish(),
        e.finish(),
        ff.finish(),
        g.finish(),
        hh.finish(),
        i3.finish(),
        j3.finish(),
        k3.finish(),
    ]
}

/// `(Î ⊗_k V) ∩ (V ⊗_k Î)` inside `V^{⊗_k 3}`.
pub fn hat_triple(p: &NonhomogPresentation) -> Subspace {
    let f = p.field();
    let dv = p.dv();
    let ih = p.hat_relations();
    let left = Subspace::span(
        f,
        dv * dv * dv,
        ih.basis().iter().flat_map(|w| (0..dv).map(move |c| vecops::kron(f, w, &vecops::unit(f, dv, c)))),
    );
    let right = Subspace::span(
        f,
        dv * dv * dv,
        ih.basis().iter().flat_map(|w| (0..dv).map(move |a| vecops::kron(f, &vecops::unit(f, dv, a), w))),
    );
    left.intersect(&right).expect("same ambient")
}

/// The pieces of the dual quadratic ring used to build and read the CDG structure.
#[derive(Clone, Debug)]
pub struct DualData {
    pub presentation: QuadraticPresentation,
    pub slice: GradedSlice,
    pub words: Vec<Vec<(usize, usize)>>,
    /// `B^1 = Hom_R(V, R)`.
    pub generators: DualModule,
    /// `B^2 → ⊕_{I basis} R`, `β ↦ (⟨i_k, β⟩)_k`; injective.
    pub pairing_two: Matrix,
}

impl DualData {
    pub fn new(a: &QuadraticPresentation, top: usize) -> Result<DualData> {
        let f = a.field();
        let presentation = quadratic_dual(a)?;
        let qs = build_quadratic_slice_with_words(&presentation, top.max(2))?;
        let v = a.generators();
        let generators = left_dual(v)?;
        let pairing = left_pairing(v, v)?;
        let rel = a.relations().basis();
        let dr = a.base().dim();
        let d1 = generators.dim();
        let cols: Vec<Vector> = (0..qs.slice.dim(2))
            .map(|c| {
                let (x, y) = qs.words[2][c];
                let beta = pairing.source.project(&vecops::unit(f, d1 * d1, x * d1 + y));
                let mut fm = Matrix::zeros(f, dr, pairing.target_tensor.dim());
                for (s, coef) in beta.iter().enumerate() {
                    if !coef.is_zero() {
                        fm = fm.add(&pairing.functionals[s].scale(coef));
                    }
                }
                rel.iter().flat_map(|w| fm.apply(w)).collect()
            })
            .collect();
        let pairing_two = Matrix::from_cols(f, rel.len() * dr, &cols);
        Ok(DualData {
            presentation,
            slice: qs.slice,
            words: qs.words,
            generators,
            pairing_two,
        })
    }

    /// The element of `B^2` pairing with the basis of `I` as `values`.
    pub fn from_values(&self, values: &[Vector]) -> Option<Vector> {
        let tau: Vector = values.iter().flat_map(|x| x.iter().cloned()).collect();
        self.pairing_two.solve(&tau)
    }

    /// `⟨v, b⟩` for `v ∈ V` and `b ∈ B^1`.
    pub fn pair_one(&self, v: &[Scalar], b: &[Scalar]) -> Vector {
        self.generators.eval(v, b)
    }
}

/// Degree-0 and degree-1 components of `d` and the curvature, read off from `(q, p, h)`.
fn cdg_components(p: &NonhomogPresentation, dd: &DualData) -> Result<(Matrix, Matrix, Vector)> {
    let f = p.field();
    let (dv, dr) = (p.dv(), p.dr());
    let d1 = dd.generators.dim();
    let mut d0cols = Vec::with_capacity(dr);
    for i in 0..dr {
        let ri = vecops::unit(f, dr, i);
        let cols: Vec<Vector> = (0..dv).map(|x| p.q_value(&vecops::unit(f, dv, x), &ri)).collect();
        let m = Matrix::from_cols(f, dr, &cols);
        let c = dd
            .generators
            .coords(&m)
            .ok_or_else(|| Error::Precondition(format!("q(-, e{i}) is not left R-linear")))?;
        d0cols.push(c);
    }
    let d0 = Matrix::from_cols(f, d1, &d0cols);
    let rel: Vec<Vector> = p.quadratic.relations().basis().iter().map(|w| p.quadratic.square().lift(w)).collect();
    let ph: Vec<(Vector, Vector)> = rel
        .iter()
        .map(|w| p.eval(w).ok_or_else(|| Error::Internal("lift of a relation is outside Î".into())))
        .collect::<Result<_>>()?;
    let mut d1cols = Vec::with_capacity(d1);
    for bi in 0..d1 {
        let b = vecops::unit(f, d1, bi);
        let vals: Vec<Vector> = rel
            .iter()
            .zip(&ph)
            .map(|(w, (pw, _))| {
                let first = dd.pair_one(pw, &b);
                let second = p.q_first(w, |x: &[Scalar]| dd.pair_one(x, &b));
                vecops::sub(&first, &second)
            })
            .collect();
        let c = dd
            .from_values(&vals)
            .ok_or_else(|| Error::Precondition(format!("d_1 of basis element {bi} is not a left R-linear functional on I")))?;
        d1cols.push(c);
    }
    let d1m = Matrix::from_cols(f, dd.slice.dim(2), &d1cols);
    let hvals: Vec<Vector> = ph.iter().map(|(_, h)| h.clone()).collect();
    let h = dd
        .from_values(&hvals)
        .ok_or_else(|| Error::Precondition("h is not a left R-linear functional on I".into()))?;
    Ok((d0, d1m, h))
}

/// Extends `d_0, d_1` to `B^n` through `d(xy) = d(x)y + (-1)^{|x|} x d(y)` on the word basis.
fn extend_derivation(slice: &GradedSlice, words: &[Vec<(usize, usize)>], d0: Matrix, d1: Matrix) -> Vec<Matrix> {
    let f = slice.field();
    let top = slice.top();
    let mut d = vec![d0, d1];
    for n in 2..top {
        let cols: Vec<Vector> = (0..slice.dim(n))
            .map(|c| {
                let (x, y) = words[n][c];
                let ex = vecops::unit(f, slice.dim(n - 1), x);
                let ey = vecops::unit(f, slice.dim(1), y);
                let a = slice.mul(n, 1, &d[n - 1].apply(&ex), &ey);
                let b = slice.mul(n - 1, 2, &ex, &d[1].apply(&ey));
                vecops::add(&a, &vecops::scale(&sign(f, n - 1), &b))
            })
            .collect();
        d.push(Matrix::from_cols(f, slice.dim(n + 1), &cols));
    }
    d.truncate(top);
    d
}

/// The dual CDG-ring through degree `N ≥ 2`, without checking self-consistency
/// or the CDG axioms.
pub fn build_cdg_dual_unchecked(p: &NonhomogPresentation, top: usize) -> Result<CdgRingSlice> {
    let top = top.max(2);
    let dd = DualData::new(&p.quadratic, top)?;
    let (d0, d1, h) = cdg_components(p, &dd)?;
    let d = extend_derivation(&dd.slice, &dd.words, d0, d1);
    CdgRingSlice::new(dd.slice, d, h)
}

/// The dual CDG-ring `(B, d, h)` through degree `N ≥ 2`. Refuses data that
/// fails self-consistency; the CDG axioms are verified on the result.
pub fn build_cdg_dual(p: &NonhomogPresentation, top: usize) -> Result<CdgRingSlice> {
    let sc = verify_self_consistency(p);
    if let Some(c) = sc.iter().find(|c| !c.holds) {
        return Err(Error::Precondition(format!("self-consistency fails: {}", c.name)));
    }
    let b = build_cdg_dual_unchecked(p, top)?;
    let ax = b.check_axioms();
    if let Some(c) = ax.iter().find(|c| !c.holds) {
        return Err(Error::Internal(format!("dual CDG-ring violates {}", c.name)));
    }
    Ok(b)
}

/// The element of `B^1 = Hom_R(V, R)` given by a left `R`-linear `a : V → R`.
pub fn connection_element(p: &NonhomogPresentation, a: &Matrix) -> Result<Vector> {
    left_dual(p.generators())?
        .coords(a)
        .ok_or_else(|| Error::Precondition("the map a : V → R is not left R-linear".into()))
}

/// Outcome of the search for strict generators with `h = 0`.
#[derive(Clone, Debug)]
pub struct AugmentationSearch {
    /// `a : V → R` with `h + d(a) + a² = 0`, if found.
    pub connection: Option<Matrix>,
    /// The DG-ring `(B, d + [a,-], 0)` when found.
    pub dg: Option<CdgRingSlice>,
    /// The strict generators `{v + a(v)}` spanning the augmentation ideal in
    /// filtration 1, as `dim V` columns of `R ⊕ V` coordinates.
    pub augmentation_generators: Option<Matrix>,
}

impl AugmentationSearch {
    pub fn found(&self) -> bool {
        self.connection.is_some()
    }
}

/// Solves the affine part `h + d(a) = 0` and keeps the solution only if `a² = 0`
/// too; a negative answer means "not found by this search".
pub fn build_augmented_dg(p: &NonhomogPresentation, top: usize) -> Result<AugmentationSearch> {
    let b = build_cdg_dual(p, top)?;
    let f = p.field();
    let not_found = AugmentationSearch {
        connection: None,
        dg: None,
        augmentation_generators: None,
    };
    let alpha = if vecops::is_zero(b.h()) {
        vecops::zero(f, b.dim(1))
    } else {
        match b.d(1).solve(&vecops::neg(b.h())) {
            Some(x) => x,
            None => return Ok(not_found),
        }
    };
    let changed = b.connection_change(&alpha)?;
    if !vecops::is_zero(changed.h()) {
        return Ok(not_found);
    }
    let dual = left_dual(p.generators())?;
    let a = dual.functional_of(&alpha);
    let (dv, dr) = (p.dv(), p.dr());
    let mut gens = Matrix::zeros(f, dr + dv, dv);
    for x in 0..dv {
        let ax = a.col(x);
        for (i, c) in ax.into_iter().enumerate() {
            gens.set(i, x, c);
        }
        gens.set(dr + x, x, f.one());
    }
    Ok(AugmentationSearch {
        connection: Some(a),
        dg: Some(changed),
        augmentation_generators: Some(gens),
    })
}

/// True when every equation (a)–(k) holds.
pub fn is_self_consistent(p: &NonhomogPresentation) -> bool {
    all_hold(&verify_self_consistency(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::first_failure;
    use crate::corpus;

    const Q: Field = Field::Rationals;

    fn assert_consistent(p: &NonhomogPresentation) {
        let checks = verify_self_consistency(p);
        assert!(all_hold(&checks), "{:?}", first_failure(&checks));
    }

    #[test]
    fn corpus_entries_are_self_consistent() {
        assert_consistent(&corpus::weyl1(Q));
        assert_consistent(&corpus::heisenberg(Q, 2));
        assert_consistent(&corpus::sl2(Q));
        assert_consistent(&corpus::nonabelian2(Q));
        assert_consistent(&corpus::twisted_sl2(Q));
        assert_consistent(&corpus::clifford(Q, &[vec![1, 2], vec![2, -3]]).unwrap());
        assert_consistent(&corpus::fat_point());
        assert_consistent(&corpus::matrix_weyl(Q));
    }

    #[test]
    fn fake_jacobi_fails_only_the_cubic_equation() {
        let checks = verify_self_consistency(&corpus::fake_jacobi(Q));
        let failed: Vec<&str> = checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
        assert_eq!(failed.len(), 1, "{failed:?}");
        assert!(failed[0].starts_with("(j)"));
        let w = checks.iter().find(|c| !c.holds).unwrap().witness.as_ref().unwrap();
        assert!(!vecops::is_zero(&w.residual));
        assert!(matches!(build_cdg_dual(&corpus::fake_jacobi(Q), 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn fake_jacobi_forced_build_has_d_squared_defect() {
        let b = build_cdg_dual_unchecked(&corpus::fake_jacobi(Q), 3).unwrap();
        let ax = b.check_axioms();
        assert!(ax.iter().any(|c| !c.holds && c.name.contains("curvature")), "{ax:?}");
    }

    #[test]
    fn weyl_dual_is_exterior_with_zero_differential() {
        let b = build_cdg_dual(&corpus::weyl1(Q), 4).unwrap();
        assert_eq!(b.slice().dims(), vec![1, 2, 1, 0, 0]);
        assert!(b.differentials().iter().all(|d| d.is_zero()));
        assert!(!vecops::is_zero(b.h()));
        let s = build_augmented_dg(&corpus::weyl1(Q), 3).unwrap();
        assert!(!s.found());
    }

    #[test]
    fn sl2_dual_is_chevalley_eilenberg() {
        let b = build_cdg_dual(&corpus::sl2(Q), 4).unwrap();
        assert_eq!(b.slice().dims(), vec![1, 3, 3, 1, 0]);
        assert!(vecops::is_zero(b.h()));
        assert!(b.d(0).is_zero());
        assert_eq!(b.d(1).rank(), 3);
        assert_eq!(b.d(2).rank(), 0);
        assert!(build_augmented_dg(&corpus::sl2(Q), 3).unwrap().found());
    }

    #[test]
    fn fat_point_dual_has_nonzero_d0() {
        let b = build_cdg_dual(&corpus::fat_point(), 2).unwrap();
        assert_eq!(b.slice().dims(), vec![2, 2, 0]);
        assert!(!b.d(0).is_zero());
    }

    #[test]
    fn twisted_coboundary_is_untwisted_by_a_connection() {
        let s = build_augmented_dg(&corpus::twisted_sl2(Q), 3).unwrap();
        assert!(s.found());
        let a = s.connection.unwrap();
        let p = corpus::twisted_sl2(Q).change_of_generators(&a).unwrap();
        assert_consistent(&p);
        assert!(p.h_values().iter().all(|h| vecops::is_zero(h)));
    }

    #[test]
    fn change_of_generators_matches_connection_change() {
        for p in [corpus::sl2(Q), corpus::weyl1(Q), corpus::fat_point(), corpus::matrix_weyl(Q)] {
            let f = p.field();
            let dual = left_dual(p.generators()).unwrap();
            let c: Vector = (0..dual.dim()).map(|i| f.int(i as i64 * 2 - 1)).collect();
            let a = dual.functional_of(&c);
            let changed = p.change_of_generators(&a).unwrap();
            assert_consistent(&changed);
            let b = build_cdg_dual(&p, 3).unwrap();
            let b2 = build_cdg_dual(&changed, 3).unwrap();
            let alpha = connection_element(&p, &a).unwrap();
            let moved = b.connection_change(&alpha).unwrap();
            assert_eq!(moved.differentials(), b2.differentials());
            assert_eq!(moved.h(), b2.h());
        }
    }

    #[test]
    fn inconsistent_graph_is_rejected() {
        let q = corpus::symmetric(Q, 2);
        let w = q.square().lift(&q.relations().basis()[0]);
        let two = vecops::scale(&Q.int(2), &w);
        let r = NonhomogPresentation::new(
            q,
            Matrix::zeros(Q, 1, 2),
            vec![w, two],
            vec![vecops::zero(Q, 2); 2],
            vec![vec![Q.int(1)], vec![Q.int(1)]],
        );
        assert!(matches!(r, Err(Error::Invalid(_))));
    }

    #[test]
    fn homogeneous_data_gives_zero_structure() {
        let p = NonhomogPresentation::homogeneous(corpus::quiver_relations(Q)).unwrap();
        assert_consistent(&p);
        let b = build_cdg_dual(&p, 3).unwrap();
        assert!(b.differentials().iter().all(|d| d.is_zero()));
        assert!(vecops::is_zero(b.h()));
    }
}
