//! Complexes attached to a Koszul CDG-ring `B` and its filtered ring `Ã`:
//! CDG-modules, twisted tensor products, the two-sided resolution of `Ã`,
//! Frobenius pairings and the conversion bimodule.
//!
//! Filtered objects are stored through `Â`. The part of filtration `≤ j` is the
//! degree `j` component, and `t` is the inclusion `F_j → F_{j+1}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bimodule::{
    hom_space, is_projective_left, is_projective_right, projective_basis_left, projective_basis_right, right_dual,
    BaseAlgebra, Bimodule, DualModule, HomSpace, Side, TensorChain,
};
use crate::cdg::{sign, CdgRingSlice};
use crate::checks::{all_hold, Check, Checker};
use crate::error::{Error, Result};
use crate::graded::{Complex, GradedSlice, MulTable};
use crate::linalg::{vecops, Field, Matrix, Quotient, Scalar, Subspace, Vector};
use crate::nonhomog::{build_augmented_dg, build_cdg_dual, NonhomogPresentation};
use crate::pbw::{pbw_reconstruct, FilteredRingSlice, Pbw};

pub type CochainComplex = Complex;

/// `(degree, filtration)`.
pub type Key = (isize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub dim: usize,
    /// Cycles whose classes form a basis.
    pub basis: Vec<Vector>,
}

pub fn homology(c: &Complex, p: usize) -> Result<Homology> {
    if p >= c.len() {
        return Err(Error::Dimension(format!("position {p} outside a complex of length {}", c.len())));
    }
    if let Some(q) = c.square_zero_failure() {
        return Err(Error::Invalid(format!("d² ≠ 0 at position {q}")));
    }
    let (z, b) = c.cycles_and_boundaries(p);
    let mut acc = b;
    let mut basis = Vec::new();
    for v in z.basis() {
        if !acc.contains(v) {
            acc = acc.sum(&Subspace::span(c.field, c.dims[p], [v.clone()]))?;
            basis.push(v.clone());
        }
    }
    Ok(Homology { dim: basis.len(), basis })
}

fn sgn_i(f: Field, g: isize) -> Scalar {
    sign(f, g.rem_euclid(2) as usize)
}

fn add_into(dst: &mut [Scalar], src: &[Scalar]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = &*d + s;
        }
    }
}

/// A tensor product of several bimodules over `R` whose basis lifts to pure words.
#[derive(Clone, Debug)]
struct Tens {
    chain: TensorChain,
    dims: Vec<usize>,
}

impl Tens {
    fn new(factors: &[Bimodule]) -> Result<Tens> {
        Ok(Tens {
            chain: TensorChain::from_factors(factors)?,
            dims: factors.iter().map(|f| f.dim()).collect(),
        })
    }

    fn n(&self) -> usize {
        self.dims.len()
    }

    fn dim(&self) -> usize {
        self.chain.dim(self.n())
    }

    fn kdim(&self) -> usize {
        self.dims.iter().product()
    }

    fn module(&self) -> Bimodule {
        self.chain.module(self.n())
    }

    fn word(&self, q: usize) -> Vec<usize> {
        self.chain.basis_word(self.n(), q)
    }

    fn k_word(&self, mut pos: usize) -> Vec<usize> {
        let mut w = vec![0; self.n()];
        for i in (0..self.n()).rev() {
            w[i] = pos % self.dims[i];
            pos /= self.dims[i];
        }
        w
    }

    fn pure(&self, parts: &[Vector]) -> Vector {
        self.chain.pure(parts)
    }

    fn project(&self, v: &[Scalar]) -> Vector {
        self.chain.project(self.n(), v)
    }

    fn lift(&self, c: &[Scalar]) -> Vector {
        self.chain.lift(self.n(), c)
    }

    /// Matrix of a map given on pure words of the tensor over `k`; records
    /// whether it vanishes on the balancing relations.
    fn induced(&self, f: Field, tgt: usize, image: &dyn Fn(&[usize]) -> Vector, bal: &mut Checker) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|q| image(&self.word(q))).collect();
        let kdim = self.kdim();
        if kdim != self.dim() && !bal.failed() {
            let proj: Vec<Vector> = (0..kdim).map(|p| self.project(&vecops::unit(f, kdim, p))).collect();
            let rel = Matrix::from_cols(f, self.dim(), &proj).kernel();
            let mut cache: Vec<Option<Vector>> = vec![None; kdim];
            for v in rel.basis() {
                let mut acc = vecops::zero(f, tgt);
                for (p, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        let img = cache[p].get_or_insert_with(|| image(&self.k_word(p)));
                        vecops::axpy(&mut acc, c, img);
                    }
                }
                if !vecops::is_zero(&acc) {
                    bal.record(v, acc, || "map is not balanced over the base".into());
                    break;
                }
            }
        }
        Matrix::from_cols(f, tgt, &cols)
    }
}

/// `M ⊗_R C_n ≅ Hom_{R^op}(B^n, M)` through `m ⊗ χ ↦ (β ↦ m χ(β))`.
#[derive(Clone, Debug)]
struct HomModel {
    tens: Tens,
    hom: HomSpace,
    to_hom: Matrix,
    from_hom: Matrix,
}

impl HomModel {
    fn new(m: &Bimodule, bn: &Bimodule, c: &DualModule) -> Result<HomModel> {
        let f = m.field();
        let tens = Tens::new(&[m.clone(), c.module.clone()])?;
        let hom = hom_space(bn, m, Side::Right)?;
        let cols = (0..tens.dim())
            .map(|q| {
                let w = tens.word(q);
                let e = vecops::unit(f, m.dim(), w[0]);
                let chi = c.functional(w[1]);
                let vals: Vec<Vector> = (0..bn.dim()).map(|b| m.act_right(&e, &chi.col(b))).collect();
                hom.coords(&Matrix::from_cols(f, m.dim(), &vals))
                    .ok_or_else(|| Error::Internal("m ⊗ χ is not right linear".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let to_hom = Matrix::from_cols(f, hom.dim(), &cols);
        let from_hom = to_hom
            .inverse()
            .ok_or_else(|| Error::Precondition("B^n is not finitely projective as a right module".into()))?;
        Ok(HomModel {
            tens,
            hom,
            to_hom,
            from_hom,
        })
    }

    fn dim(&self) -> usize {
        self.tens.dim()
    }

    fn map_of(&self, x: &[Scalar]) -> Matrix {
        self.hom.map_of(&self.to_hom.apply(x))
    }

    fn elem_of(&self, m: &Matrix) -> Option<Vector> {
        self.hom.coords(m).map(|c| self.from_hom.apply(&c))
    }
}

/// `B`, `Ã` and the twisting elements that tie them together.
#[derive(Clone, Debug)]
pub struct TwoSidedData {
    pub pbw: Pbw,
    /// `C_n = Hom_{R^op}(B^n, R)`.
    pub duals: Vec<DualModule>,
    /// `(c_k, ι(g_k))` with `b = Σ c_k g_k(b)` on `B^1`; this is `e′ ∈ B^1 ⊗_R F_1Ã`.
    pub e_prime: Vec<(Vector, Vector)>,
    /// `(ι(e_k), b_k)` with `a = Σ a(b_k) e_k` on `A_1`, an element of `F_1Ã ⊗_R B^1`.
    pub e_second: Vec<(Vector, Vector)>,
}

impl TwoSidedData {
    /// Reconstructs `Ã` through filtration `top` from a CDG-ring slice.
    pub fn new(b: &CdgRingSlice, top: usize) -> Result<TwoSidedData> {
        TwoSidedData::from_pbw(pbw_reconstruct(b, top)?)
    }

    /// `B` and `Ã` through degree and filtration `top`.
    pub fn from_presentation(p: &NonhomogPresentation, top: usize) -> Result<TwoSidedData> {
        let b = build_cdg_dual(p, top.max(2))?;
        TwoSidedData::new(&b, top)
    }

    pub fn from_pbw(pbw: Pbw) -> Result<TwoSidedData> {
        let b = &pbw.cdg;
        let f = b.field();
        let duals = (0..=b.top())
            .map(|n| right_dual(b.slice().component(n)))
            .collect::<Result<Vec<_>>>()?;
        let b1 = b.slice().component(1);
        let a1 = right_dual(b1)?;
        let basis_r =
            projective_basis_right(b1).ok_or_else(|| Error::Precondition("B^1 is not right projective".into()))?;
        let e_prime = basis_r
            .iter()
            .enumerate()
            .map(|(k, fk)| {
                let g = a1
                    .coords(fk)
                    .ok_or_else(|| Error::Internal("dual basis functional outside Hom(B^1, R)".into()))?;
                Ok((vecops::unit(f, b1.dim(), k), pbw.iota.apply(&g)))
            })
            .collect::<Result<Vec<_>>>()?;
        let basis_l = projective_basis_left(&a1.module)
            .ok_or_else(|| Error::Precondition("A_1 is not left projective".into()))?;
        let mut e_second = Vec::with_capacity(basis_l.len());
        if a1.dim() > 0 {
            let stacked = (1..a1.dim()).fold(a1.functional(0).clone(), |acc, q| acc.vstack(a1.functional(q)));
            for (k, fk) in basis_l.iter().enumerate() {
                let rhs: Vector = (0..a1.dim()).flat_map(|q| fk.col(q)).collect();
                let bk = stacked
                    .solve(&rhs)
                    .ok_or_else(|| Error::Precondition("B^1 is not reflexive".into()))?;
                e_second.push((pbw.iota.col(k), bk));
            }
        }
        Ok(TwoSidedData {
            pbw,
            duals,
            e_prime,
            e_second,
        })
    }

    pub fn ring(&self) -> &CdgRingSlice {
        &self.pbw.cdg
    }

    pub fn filtered(&self) -> &FilteredRingSlice {
        &self.pbw.filtered
    }

    fn hat(&self) -> &GradedSlice {
        &self.pbw.filtered.hat
    }

    pub fn field(&self) -> Field {
        self.ring().field()
    }

    pub fn base(&self) -> &Arc<BaseAlgebra> {
        self.ring().base()
    }

    /// Highest `B`-degree available.
    pub fn b_top(&self) -> usize {
        self.ring().top()
    }

    /// Highest filtration available.
    pub fn a_top(&self) -> usize {
        self.filtered().top()
    }

    /// `e′r = re′ + d(r) ⊗ 1` in `B^1 ⊗_R F_1Ã`, and its mirror
    /// `re″ = e″r + 1 ⊗ d(r)` in `F_1Ã ⊗_R B^1`.
    pub fn check(&self) -> Result<Vec<Check>> {
        let f = self.field();
        let r = self.base();
        let b1 = self.ring().slice().component(1);
        let a1 = self.hat().component(1);
        let t = &self.filtered().t;
        let left = Tens::new(&[b1.clone(), a1.clone()])?;
        let right = Tens::new(&[a1.clone(), b1.clone()])?;
        let mut c1 = Checker::new("e′r = re′ + d(r)⊗1");
        let mut c2 = Checker::new("re″ = e″r + 1⊗d(r)");
        for s in 0..r.dim() {
            let rs = vecops::unit(f, r.dim(), s);
            let dr = self.ring().apply_d(0, &rs);
            let mut lhs = vecops::zero(f, left.dim());
            for (c, i) in &self.e_prime {
                add_into(&mut lhs, &left.pure(&[c.clone(), a1.act_right(i, &rs)]));
                add_into(&mut lhs, &vecops::neg(&left.pure(&[b1.act_left(&rs, c), i.clone()])));
            }
            c1.expect_eq(&lhs, &left.pure(&[dr.clone(), t.clone()]), &rs, || format!("r = e{s}"));
            let mut lhs = vecops::zero(f, right.dim());
            for (i, b) in &self.e_second {
                add_into(&mut lhs, &right.pure(&[a1.act_left(&rs, i), b.clone()]));
                add_into(&mut lhs, &vecops::neg(&right.pure(&[i.clone(), b1.act_right(b, &rs)])));
            }
            c2.expect_eq(&lhs, &right.pure(&[t.clone(), dr]), &rs, || format!("r = e{s}"));
        }
        Ok(vec![c1.finish(), c2.finish()])
    }
}

/// What a module check could and could not state inside its window.
#[derive(Clone, Debug)]
pub struct ModuleReport {
    pub checks: Vec<Check>,
    /// Curvature instances checked.
    pub stated: usize,
    /// Components with a differential whose curvature instance leaves the window.
    pub unstated: usize,
}

impl ModuleReport {
    pub fn ok(&self) -> bool {
        all_hold(&self.checks)
    }
}

fn strand_of(field: Field, comps: &BTreeMap<Key, usize>, diff: &BTreeMap<Key, Matrix>, s: isize) -> Result<Complex> {
    let mut gs: Vec<isize> = comps
        .keys()
        .filter(|&&(g, j)| j as isize - g == s)
        .map(|&(g, _)| g)
        .collect();
    gs.sort_unstable();
    let mut dims = Vec::new();
    let mut maps = Vec::new();
    for (idx, &g) in gs.iter().enumerate() {
        let key = (g, (g + s) as usize);
        if idx > 0 {
            let prev = (gs[idx - 1], (gs[idx - 1] + s) as usize);
            match diff.get(&prev) {
                Some(m) if gs[idx - 1] + 1 == g => maps.push(m.clone()),
                _ => break,
            }
        }
        dims.push(comps[&key]);
    }
    Complex::new(field, dims, maps)
}

/// A CDG-module over `B` through its homogenization: `d : (g, j) → (g+1, j+1)`,
/// `t : (g, j) → (g, j+1)` and `B^a` acting `(g, j) → (g+a, j)` for `a ≤ 2`.
#[derive(Clone, Debug)]
pub struct CdgModuleSlice {
    pub side: Side,
    pub ring: CdgRingSlice,
    pub comps: BTreeMap<Key, Bimodule>,
    pub diff: BTreeMap<Key, Matrix>,
    pub t: BTreeMap<Key, Matrix>,
    /// Left modules: `B^a × M → M`; right modules: `M × B^a → M`. Keyed by `(a, g, j)`.
    pub action: BTreeMap<(usize, isize, usize), MulTable>,
}

impl CdgModuleSlice {
    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn dim(&self, g: isize, j: usize) -> usize {
        self.comps.get(&(g, j)).map_or(0, |m| m.dim())
    }

    pub fn dims(&self) -> BTreeMap<Key, usize> {
        self.comps.iter().map(|(k, m)| (*k, m.dim())).collect()
    }

    /// Components `(g, g+s)` in increasing `g`, cut at the first missing differential.
    pub fn strand(&self, s: isize) -> Result<Complex> {
        strand_of(self.field(), &self.dims(), &self.diff, s)
    }

    fn act(&self, a: usize, g: isize, j: usize, beta: &[Scalar], x: &[Scalar]) -> Option<Vector> {
        let t = self.action.get(&(a, g, j))?;
        Some(match self.side {
            Side::Left => t.apply(self.field(), beta, x),
            Side::Right => t.apply(self.field(), x, beta),
        })
    }

    /// Curvature, the odd derivation rule over `d`, and `t` commuting with `d`.
    pub fn check_axioms(&self) -> ModuleReport {
        let f = self.field();
        let h = self.ring.h().clone();
        let mut curv = Checker::new(match self.side {
            Side::Left => "d² = h·",
            Side::Right => "d² = -·h",
        });
        let mut der = Checker::new("odd derivation over d");
        let mut tc = Checker::new("t commutes with d");
        let (mut stated, mut unstated) = (0, 0);
        for (&(g, j), m) in &self.comps {
            let Some(d0) = self.diff.get(&(g, j)) else { continue };
            let basis: Vec<Vector> = (0..m.dim()).map(|x| vecops::unit(f, m.dim(), x)).collect();
            let pieces = (
                self.diff.get(&(g + 1, j + 1)),
                self.t.get(&(g, j)),
                self.t.get(&(g, j + 1)),
                self.action.contains_key(&(2, g, j + 2)),
            );
            if let (Some(d1), Some(t0), Some(t1), true) = pieces {
                stated += 1;
                for x in &basis {
                    let lhs = d1.apply(&d0.apply(x));
                    let t2x = t1.apply(&t0.apply(x));
                    let hx = self.act(2, g, j + 2, &h, &t2x).expect("action present");
                    let rhs = match self.side {
                        Side::Left => hx,
                        Side::Right => vecops::neg(&hx),
                    };
                    curv.expect_eq(&lhs, &rhs, x, || format!("component ({g}, {j})"));
                }
            } else {
                unstated += 1;
            }
            if let (Some(t0), Some(dt)) = (self.t.get(&(g, j)), self.diff.get(&(g, j + 1))) {
                if let Some(t1) = self.t.get(&(g + 1, j + 1)) {
                    for x in &basis {
                        tc.expect_eq(&dt.apply(&t0.apply(x)), &t1.apply(&d0.apply(x)), x, || format!("component ({g}, {j})"));
                    }
                }
            }
            let Some(t0) = self.t.get(&(g, j)) else { continue };
            for a in 0..=1usize {
                let da = self.ring.d(a);
                let Some(dga) = self.diff.get(&(g + a as isize, j)) else { continue };
                if !self.action.contains_key(&(a, g, j))
                    || !self.action.contains_key(&(a, g + 1, j + 1))
                    || !self.action.contains_key(&(a + 1, g, j + 1))
                {
                    continue;
                }
                for bi in 0..self.ring.dim(a) {
                    let beta = vecops::unit(f, self.ring.dim(a), bi);
                    let dbeta = da.apply(&beta);
                    for x in &basis {
                        let bx = self.act(a, g, j, &beta, x).expect("action present");
                        let lhs = dga.apply(&bx);
                        let tx = t0.apply(x);
                        let dx = d0.apply(x);
                        let rhs = match self.side {
                            Side::Left => {
                                let mut r = self.act(a + 1, g, j + 1, &dbeta, &tx).expect("action present");
                                let s = sign(f, a);
                                vecops::axpy(&mut r, &s, &self.act(a, g + 1, j + 1, &beta, &dx).expect("action present"));
                                r
                            }
                            Side::Right => {
                                let mut r = self.act(a, g + 1, j + 1, &beta, &dx).expect("action present");
                                let s = sgn_i(f, g);
                                vecops::axpy(&mut r, &s, &self.act(a + 1, g, j + 1, &dbeta, &tx).expect("action present"));
                                r
                            }
                        };
                        der.expect_eq(&lhs, &rhs, x, || format!("B^{a} basis {bi} on component ({g}, {j})"));
                    }
                }
            }
        }
        ModuleReport {
            checks: vec![curv.finish(), der.finish(), tc.finish()],
            stated,
            unstated,
        }
    }
}

/// A CDG-module over `B` with no filtration: `d : N^g → N^{g+1}`.
#[derive(Clone, Debug)]
pub struct PlainCdgModule {
    pub side: Side,
    pub ring: CdgRingSlice,
    /// Degree of `comps[0]`.
    pub low: isize,
    pub comps: Vec<Bimodule>,
    /// `diff[i] : comps[i] → comps[i+1]`.
    pub diff: Vec<Matrix>,
    /// Keyed by `(a, g)`: `B^a × N^g → N^{g+a}` or `N^g × B^a → N^{g+a}`.
    pub action: BTreeMap<(usize, isize), MulTable>,
}

impl PlainCdgModule {
    /// `R` in degree 0 with `B^{>0}` acting by zero, as a right module.
    pub fn base(ring: &CdgRingSlice) -> PlainCdgModule {
        let r = ring.base().clone();
        let f = r.field();
        let dr = r.dim();
        let cols: Vec<Vector> = (0..dr)
            .flat_map(|x| (0..dr).map(move |y| (x, y)))
            .map(|(x, y)| r.mul(&vecops::unit(f, dr, x), &vecops::unit(f, dr, y)))
            .collect();
        let mut action = BTreeMap::new();
        action.insert((0, 0), MulTable::from_matrix(&Matrix::from_cols(f, dr, &cols), dr, dr));
        PlainCdgModule {
            side: Side::Right,
            ring: ring.clone(),
            low: 0,
            comps: vec![Bimodule::regular(&r)],
            diff: Vec::new(),
            action,
        }
    }

    /// `B` over itself on the given side, with `d_B` as differential.
    pub fn regular(ring: &CdgRingSlice, side: Side) -> PlainCdgModule {
        let s = ring.slice();
        let top = ring.top();
        let mut action = BTreeMap::new();
        for a in 0..=2.min(top) {
            for g in 0..=top - a {
                let t = match side {
                    Side::Left => s.table(a, g).clone(),
                    Side::Right => s.table(g, a).clone(),
                };
                action.insert((a, g as isize), t);
            }
        }
        PlainCdgModule {
            side,
            ring: ring.clone(),
            low: 0,
            comps: (0..=top).map(|n| s.component(n).clone()).collect(),
            diff: ring.differentials().to_vec(),
            action,
        }
    }

    pub fn degrees(&self) -> std::ops::Range<isize> {
        self.low..self.low + self.comps.len() as isize
    }

    pub fn comp(&self, g: isize) -> Option<&Bimodule> {
        usize::try_from(g - self.low).ok().and_then(|i| self.comps.get(i))
    }

    pub fn d(&self, g: isize) -> Option<&Matrix> {
        usize::try_from(g - self.low).ok().and_then(|i| self.diff.get(i))
    }

    /// The same module with every filtration `0..=m` present and `t` the identity.
    pub fn filtered(&self, m: usize) -> CdgModuleSlice {
        let f = self.ring.field();
        let mut out = CdgModuleSlice {
            side: self.side,
            ring: self.ring.clone(),
            comps: BTreeMap::new(),
            diff: BTreeMap::new(),
            t: BTreeMap::new(),
            action: BTreeMap::new(),
        };
        for g in self.degrees() {
            let c = self.comp(g).expect("degree in range");
            for j in 0..=m {
                out.comps.insert((g, j), c.clone());
                if j < m {
                    out.t.insert((g, j), Matrix::identity(f, c.dim()));
                    if let Some(d) = self.d(g) {
                        out.diff.insert((g, j), d.clone());
                    }
                }
                for (&(a, h), tab) in &self.action {
                    if h == g {
                        out.action.insert((a, g, j), tab.clone());
                    }
                }
            }
        }
        out
    }

    pub fn check_axioms(&self) -> ModuleReport {
        self.filtered(2).check_axioms()
    }
}

/// A complex of right `Ã`-modules through its homogenization: `d : (g, j) → (g+1, j+1)`
/// and `F_1Ã = Â_1` acting on the right from `(g, j)` to `(g, j+1)`.
#[derive(Clone, Debug)]
pub struct FilteredComplexWindow {
    pub comps: BTreeMap<Key, Bimodule>,
    pub diff: BTreeMap<Key, Matrix>,
    pub act: BTreeMap<Key, MulTable>,
}

impl FilteredComplexWindow {
    /// `Ã` itself in degree 0, through filtration `m`.
    pub fn free(d: &TwoSidedData, m: usize) -> FilteredComplexWindow {
        let hat = d.hat();
        let m = m.min(d.a_top());
        let mut out = FilteredComplexWindow {
            comps: BTreeMap::new(),
            diff: BTreeMap::new(),
            act: BTreeMap::new(),
        };
        for j in 0..=m {
            out.comps.insert((0, j), hat.component(j).clone());
            if j < m {
                out.act.insert((0, j), hat.table(j, 1).clone());
            }
        }
        out
    }

    pub fn field(&self) -> Field {
        self.comps.values().next().map_or(Field::Rationals, |m| m.field())
    }

    pub fn dims(&self) -> BTreeMap<Key, usize> {
        self.comps.iter().map(|(k, m)| (*k, m.dim())).collect()
    }

    pub fn strand(&self, s: isize) -> Result<Complex> {
        strand_of(self.field(), &self.dims(), &self.diff, s)
    }

    /// `d² = 0` and `d(xa) = d(x)a` for `a ∈ F_1Ã`.
    pub fn check(&self) -> Vec<Check> {
        let f = self.field();
        let mut sq = Checker::new("d² = 0");
        let mut lin = Checker::new("d right linear");
        for (&(g, j), m) in &self.comps {
            let Some(d0) = self.diff.get(&(g, j)) else { continue };
            if let Some(d1) = self.diff.get(&(g + 1, j + 1)) {
                let p = d1.mul(d0);
                if !p.is_zero() {
                    let x = (0..m.dim()).find(|&x| !vecops::is_zero(&p.col(x))).unwrap_or(0);
                    sq.record(&vecops::unit(f, m.dim(), x), p.col(x), || format!("component ({g}, {j})"));
                }
            }
            let (Some(a0), Some(a1), Some(dj)) =
                (self.act.get(&(g, j)), self.act.get(&(g + 1, j + 1)), self.diff.get(&(g, j + 1)))
            else {
                continue;
            };
            for x in 0..m.dim() {
                let ex = vecops::unit(f, m.dim(), x);
                for y in 0..a0.right {
                    let ey = vecops::unit(f, a0.right, y);
                    let lhs = dj.apply(&a0.apply(f, &ex, &ey));
                    let rhs = a1.apply(f, &d0.apply(&ex), &ey);
                    lin.expect_eq(&lhs, &rhs, &ex, || format!("component ({g}, {j}), Â_1 basis {y}"));
                }
            }
        }
        vec![sq.finish(), lin.finish()]
    }
}

/// `N ⊗_R Â` with `d(n⊗a) = d_N(n)⊗ta + (-1)^g Σ_k n c_k ⊗ ι(g_k) a`, for `N` given by
/// components, differentials and the right action of `B^1`.
struct RightTwist {
    tens: BTreeMap<Key, Tens>,
    diff: BTreeMap<Key, Matrix>,
    balanced: Check,
}

fn right_twist(
    d: &TwoSidedData,
    comps: &BTreeMap<isize, Bimodule>,
    dn: &dyn Fn(isize) -> Option<Matrix>,
    mul1: &dyn Fn(isize, &[Scalar], &[Scalar]) -> Option<Vector>,
    m: usize,
) -> Result<RightTwist> {
    let f = d.field();
    let hat = d.hat();
    let t = &d.filtered().t;
    let mut tens = BTreeMap::new();
    for (&g, c) in comps {
        for j in 0..=m {
            tens.insert((g, j), Tens::new(&[c.clone(), hat.component(j).clone()])?);
        }
    }
    let mut bal = Checker::new("twisted differential balanced over R");
    let mut diff = BTreeMap::new();
    for (&(g, j), src) in &tens {
        let Some(tgt) = tens.get(&(g + 1, j + 1)) else { continue };
        let Some(dmat) = dn(g) else { continue };
        let s = sgn_i(f, g);
        let image = |w: &[usize]| -> Vector {
            let ex = vecops::unit(f, comps[&g].dim(), w[0]);
            let ey = vecops::unit(f, hat.dim(j), w[1]);
            let mut out = tgt.pure(&[dmat.apply(&ex), hat.mul(1, j, t, &ey)]);
            for (c, i) in &d.e_prime {
                if let Some(xc) = mul1(g, &ex, c) {
                    vecops::axpy(&mut out, &s, &tgt.pure(&[xc, hat.mul(1, j, i, &ey)]));
                }
            }
            out
        };
        diff.insert((g, j), src.induced(f, tgt.dim(), &image, &mut bal));
    }
    Ok(RightTwist {
        tens,
        diff,
        balanced: bal.finish(),
    })
}

/// `K∨(B, Ã) = B ⊗_R Ã` with `d(b⊗c) = d(b)⊗c + (-1)^{|b|} b e′ c`, a left
/// CDG-module over `B`, for `B`-degrees `≤ n` and filtrations `≤ m`.
pub fn dual_nonhomog_koszul_module(d: &TwoSidedData, n: usize, m: usize) -> Result<CdgModuleSlice> {
    if n < 2 || m < 2 {
        return Err(Error::Window("the curvature axiom needs B-degree and filtration windows of at least 2".into()));
    }
    if n > d.b_top() || m > d.a_top() {
        return Err(Error::Window(format!(
            "requested ({n}, {m}) but only ({}, {}) is available",
            d.b_top(),
            d.a_top()
        )));
    }
    let f = d.field();
    let ring = d.ring();
    let s = ring.slice();
    let hat = d.hat();
    let comps: BTreeMap<isize, Bimodule> = (0..=n).map(|i| (i as isize, s.component(i).clone())).collect();
    let dn = |g: isize| (g < n as isize).then(|| ring.d(g as usize).clone());
    let mul1 = |g: isize, x: &[Scalar], c: &[Scalar]| (g < n as isize).then(|| s.mul(g as usize, 1, x, c));
    let tw = right_twist(d, &comps, &dn, &mul1, m)?;
    if !tw.balanced.holds {
        return Err(Error::Internal("twisted differential is not balanced over R".into()));
    }
    let mut out = CdgModuleSlice {
        side: Side::Left,
        ring: ring.clone(),
        comps: tw.tens.iter().map(|(k, t)| (*k, t.module())).collect(),
        diff: tw.diff,
        t: BTreeMap::new(),
        action: BTreeMap::new(),
    };
    let mut bal = Checker::new("balanced");
    for (&(g, j), src) in &tw.tens {
        let i = g as usize;
        if let Some(tgt) = tw.tens.get(&(g, j + 1)) {
            let image = |w: &[usize]| {
                tgt.pure(&[
                    vecops::unit(f, s.dim(i), w[0]),
                    hat.mul(1, j, &d.filtered().t, &vecops::unit(f, hat.dim(j), w[1])),
                ])
            };
            out.t.insert((g, j), src.induced(f, tgt.dim(), &image, &mut bal));
        }
        for a in 0..=2usize {
            let Some(tgt) = tw.tens.get(&(g + a as isize, j)) else { continue };
            let mut cols = Vec::with_capacity(s.dim(a) * src.dim());
            for bi in 0..s.dim(a) {
                let beta = vecops::unit(f, s.dim(a), bi);
                for q in 0..src.dim() {
                    let w = src.word(q);
                    cols.push(tgt.pure(&[
                        s.mul(a, i, &beta, &vecops::unit(f, s.dim(i), w[0])),
                        vecops::unit(f, hat.dim(j), w[1]),
                    ]));
                }
            }
            let mat = Matrix::from_cols(f, tgt.dim(), &cols);
            out.action.insert((a, g, j), MulTable::from_matrix(&mat, s.dim(a), src.dim()));
        }
    }
    Ok(out)
}

/// `N ⊗_R^{τ′} Ã` for a right CDG-module `N` over `B`, through filtration `m`.
pub fn twisted_tensor_right(nmod: &PlainCdgModule, d: &TwoSidedData, m: usize) -> Result<FilteredComplexWindow> {
    if nmod.side != Side::Right {
        return Err(Error::Precondition("twisted_tensor_right needs a right CDG-module".into()));
    }
    if &nmod.ring != d.ring() {
        return Err(Error::AlgebraMismatch("module and data use different CDG-rings".into()));
    }
    if m > d.a_top() {
        return Err(Error::Window(format!("filtration {m} beyond the available {}", d.a_top())));
    }
    let f = d.field();
    let hat = d.hat();
    let comps: BTreeMap<isize, Bimodule> = nmod.degrees().map(|g| (g, nmod.comp(g).unwrap().clone())).collect();
    let dn = |g: isize| -> Option<Matrix> {
        let src = nmod.comp(g)?.dim();
        match (nmod.d(g), nmod.comp(g + 1)) {
            (Some(m), _) => Some(m.clone()),
            (None, Some(c)) => Some(Matrix::zeros(f, c.dim(), src)),
            (None, None) => None,
        }
    };
    let mul1 = |g: isize, x: &[Scalar], c: &[Scalar]| nmod.action.get(&(1, g)).map(|t| t.apply(f, x, c));
    let tw = right_twist(d, &comps, &dn, &mul1, m)?;
    if !tw.balanced.holds {
        return Err(Error::Invalid("twisted differential is not balanced over R".into()));
    }
    let mut out = FilteredComplexWindow {
        comps: tw.tens.iter().map(|(k, t)| (*k, t.module())).collect(),
        diff: tw.diff,
        act: BTreeMap::new(),
    };
    let mut bal = Checker::new("balanced");
    for (&(g, j), src) in &tw.tens {
        let Some(tgt) = tw.tens.get(&(g, j + 1)) else { continue };
        let d1 = hat.dim(1);
        let mut cols = Vec::with_capacity(src.dim() * d1);
        for q in 0..src.dim() {
            let w = src.word(q);
            for y in 0..d1 {
                let prod = hat.mul(j, 1, &vecops::unit(f, hat.dim(j), w[1]), &vecops::unit(f, d1, y));
                cols.push(tgt.pure(&[vecops::unit(f, comps[&g].dim(), w[0]), prod]));
            }
        }
        let mat = Matrix::from_cols(f, tgt.dim(), &cols);
        out.act.insert((g, j), MulTable::from_matrix(&mat, src.dim(), d1));
        let _ = &mut bal;
    }
    Ok(out)
}

/// One summand `Hom_{R^op}(B^n, W^{i,j})` of a component of `M ⊗^{σ′} C`.
#[derive(Clone, Debug)]
struct Block {
    i: isize,
    n: usize,
    offset: usize,
    model: HomModel,
}

fn block_vec(f: Field, total: usize, b: &Block, x: &[Scalar]) -> Vector {
    let mut out = vecops::zero(f, total);
    out[b.offset..b.offset + x.len()].clone_from_slice(x);
    out
}

/// `M^• ⊗_R^{σ′} Hom_{R^op}(B, R)` for a complex of right `Ã`-modules, as a right
/// CDG-module over `B` with components `⊕_{i-n=g} Hom_{R^op}(B^n, M^{i,j})`.
pub fn twisted_tensor_left(w: &FilteredComplexWindow, d: &TwoSidedData) -> Result<CdgModuleSlice> {
    let f = d.field();
    let ring = d.ring();
    let s = ring.slice();
    let ntop = d.b_top();
    let r = d.base().clone();
    let t = &d.filtered().t;
    let mut blocks: BTreeMap<Key, Vec<Block>> = BTreeMap::new();
    for (&(i, j), wm) in &w.comps {
        for n in 0..=ntop {
            let model = HomModel::new(wm, s.component(n), &d.duals[n])?;
            let key = (i - n as isize, j);
            let list = blocks.entry(key).or_default();
            let offset = list.iter().map(|b| b.model.dim()).sum();
            list.push(Block { i, n, offset, model });
        }
    }
    let total = |key: &Key| -> usize { blocks.get(key).map_or(0, |l| l.iter().map(|b| b.model.dim()).sum()) };
    let find = |key: &Key, i: isize, n: usize| -> Option<&Block> {
        blocks.get(key).and_then(|l| l.iter().find(|b| b.i == i && b.n == n))
    };
    let mut comps = BTreeMap::new();
    for (key, list) in &blocks {
        let mut m = Bimodule::zero(&r, &r);
        for b in list {
            m = m.direct_sum(&b.model.tens.module())?;
        }
        comps.insert(*key, m);
    }
    let lost = || Error::Internal("a Hom-valued map left Hom_{R^op}(B^n, M)".into());
    let mut diff = BTreeMap::new();
    let mut tmap = BTreeMap::new();
    let mut action = BTreeMap::new();
    for (&(g, j), list) in &blocks {
        let src_dim = total(&(g, j));
        let up = (g + 1, j + 1);
        let has_up = blocks.contains_key(&up);
        let mut dcols = vec![vecops::zero(f, total(&up)); src_dim];
        let mut tcols = vec![vecops::zero(f, total(&(g, j + 1))); src_dim];
        let has_t = blocks.contains_key(&(g, j + 1));
        let mut dvalid = has_up;
        for b in list {
            let wm = &w.comps[&(b.i, j)];
            let act = w.act.get(&(b.i, j));
            for q in 0..b.model.dim() {
                let x = vecops::unit(f, b.model.dim(), q);
                let phi = b.model.map_of(&x);
                let col = b.offset + q;
                if has_t {
                    if let (Some(act), Some(tb)) = (act, find(&(g, j + 1), b.i, b.n)) {
                        let vals: Vec<Vector> =
                            (0..s.dim(b.n)).map(|y| act.apply(f, &phi.col(y), t)).collect();
                        let m1 = Matrix::from_cols(f, act.out, &vals);
                        let e = tb.model.elem_of(&m1).ok_or_else(lost)?;
                        tcols[col] = block_vec(f, total(&(g, j + 1)), tb, &e);
                    }
                }
                if !has_up {
                    continue;
                }
                let mut out = vecops::zero(f, total(&up));
                if let Some(dw) = w.diff.get(&(b.i, j)) {
                    let tb = find(&up, b.i + 1, b.n).ok_or_else(lost)?;
                    let e = tb.model.elem_of(&dw.mul(&phi)).ok_or_else(lost)?;
                    add_into(&mut out, &block_vec(f, total(&up), tb, &e));
                }
                if b.n >= 1 {
                    match (act, find(&up, b.i, b.n - 1)) {
                        (Some(act), Some(tb)) => {
                            let sg = sgn_i(f, b.i);
                            let sd = sign(f, b.n - 1);
                            let dmat = ring.d(b.n - 1);
                            let vals: Vec<Vector> = (0..s.dim(b.n - 1))
                                .map(|y| {
                                    let ey = vecops::unit(f, s.dim(b.n - 1), y);
                                    let mut v = vecops::zero(f, act.out);
                                    for (c, iota) in &d.e_prime {
                                        let bc = s.mul(b.n - 1, 1, &ey, c);
                                        add_into(&mut v, &act.apply(f, &phi.apply(&bc), iota));
                                    }
                                    let dy = phi.apply(&dmat.apply(&ey));
                                    vecops::axpy(&mut v, &sd, &act.apply(f, &dy, t));
                                    vecops::scale(&sg, &v)
                                })
                                .collect();
                            let m1 = Matrix::from_cols(f, act.out, &vals);
                            let e = tb.model.elem_of(&m1).ok_or_else(lost)?;
                            add_into(&mut out, &block_vec(f, total(&up), tb, &e));
                        }
                        _ => dvalid = false,
                    }
                }
                dcols[col] = out;
                let _ = wm;
            }
        }
        if dvalid {
            diff.insert((g, j), Matrix::from_cols(f, total(&up), &dcols));
        }
        if has_t {
            tmap.insert((g, j), Matrix::from_cols(f, total(&(g, j + 1)), &tcols));
        }
        for a in 0..=2usize.min(ntop) {
            let key = (g + a as isize, j);
            if !blocks.contains_key(&key) {
                continue;
            }
            let tot = total(&key);
            let mut cols = Vec::with_capacity(src_dim * s.dim(a));
            let mut ok = true;
            for b in list {
                for q in 0..b.model.dim() {
                    let phi = b.model.map_of(&vecops::unit(f, b.model.dim(), q));
                    for bi in 0..s.dim(a) {
                        if b.n < a {
                            cols.push(vecops::zero(f, tot));
                            continue;
                        }
                        let Some(tb) = find(&key, b.i, b.n - a) else {
                            ok = false;
                            cols.push(vecops::zero(f, tot));
                            continue;
                        };
                        let beta = vecops::unit(f, s.dim(a), bi);
                        let vals: Vec<Vector> = (0..s.dim(b.n - a))
                            .map(|y| phi.apply(&s.mul(a, b.n - a, &beta, &vecops::unit(f, s.dim(b.n - a), y))))
                            .collect();
                        let m1 = Matrix::from_cols(f, phi.rows(), &vals);
                        let e = tb.model.elem_of(&m1).ok_or_else(lost)?;
                        cols.push(block_vec(f, tot, tb, &e));
                    }
                }
            }
            if ok {
                let mat = Matrix::from_cols(f, tot, &cols);
                action.insert((a, g, j), MulTable::from_matrix(&mat, src_dim, s.dim(a)));
            }
        }
    }
    Ok(CdgModuleSlice {
        side: Side::Right,
        ring: ring.clone(),
        comps,
        diff,
        t: tmap,
        action,
    })
}

/// Verdict on `Ã ⊗^{σ′} C → R` in filtration `≤ M`.
#[derive(Clone, Debug)]
pub struct KoszulResolutionReport {
    /// `Hom_{R^op}(B^M, F_0) → ... → Hom_{R^op}(B^0, F_M)`.
    pub complex: Complex,
    pub homology: Vec<usize>,
    pub d_squared: Check,
    /// Homology vanishes except `dim R` at the end.
    pub exact: bool,
}

/// The nonhomogeneous Koszul complex of an augmented presentation through filtration `m`.
pub fn nonhomog_koszul_complex(p: &NonhomogPresentation, m: usize) -> Result<KoszulResolutionReport> {
    let search = build_augmented_dg(p, m.max(2))?;
    let dg = search
        .dg
        .ok_or_else(|| Error::Precondition("no augmentation found: the curvature cannot be removed".into()))?;
    let d = TwoSidedData::new(&dg, m)?;
    koszul_resolution(&d, m)
}

/// Same, from data whose curvature already vanishes.
pub fn koszul_resolution(d: &TwoSidedData, m: usize) -> Result<KoszulResolutionReport> {
    if !vecops::is_zero(d.ring().h()) {
        return Err(Error::Precondition("the curvature is nonzero; the data are not augmented".into()));
    }
    if m > d.a_top() || m > d.b_top() {
        return Err(Error::Window(format!("filtration {m} needs B and Ã through degree {m}")));
    }
    let w = FilteredComplexWindow::free(d, m);
    let k = twisted_tensor_left(&w, d)?;
    let complex = k.strand(m as isize)?;
    let d_squared = match complex.square_zero_failure() {
        None => Check::pass("d² = 0"),
        Some(pos) => Check::fail("d² = 0", format!("position {pos}"), Vec::new(), Vec::new()),
    };
    let homology = complex.homology_dims();
    let dr = d.base().dim();
    let last = homology.len().saturating_sub(1);
    let exact = d_squared.holds
        && homology
            .iter()
            .enumerate()
            .all(|(i, &h)| if i == last { h == dr } else { h == 0 });
    Ok(KoszulResolutionReport {
        complex,
        homology,
        d_squared,
        exact,
    })
}

/// Cohomology of a DG-ring slice `(B, d)` in degrees `0..top`.
#[derive(Clone, Debug)]
pub struct DgCohomology {
    pub d_squared: Check,
    pub dims: Vec<usize>,
}

pub fn dg_cohomology(b: &CdgRingSlice) -> Result<DgCohomology> {
    if !vecops::is_zero(b.h()) {
        return Err(Error::Precondition("curvature is nonzero".into()));
    }
    let f = b.field();
    let dims: Vec<usize> = (0..=b.top()).map(|n| b.dim(n)).collect();
    let maps = b.differentials()[..b.top()].to_vec();
    let c = Complex::new(f, dims, maps)?;
    let d_squared = match c.square_zero_failure() {
        None => Check::pass("d² = 0"),
        Some(pos) => Check::fail("d² = 0", format!("degree {pos}"), Vec::new(), Vec::new()),
    };
    let mut h = c.homology_dims();
    h.pop();
    Ok(DgCohomology { d_squared, dims: h })
}

/// A quotient complex `S / K` with its ambient differentials.
struct QuotientChain {
    spaces: Vec<Quotient>,
    /// `maps[p] : S_p → S_{p+1}` on the ambient spaces.
    maps: Vec<Matrix>,
}

impl QuotientChain {
    fn check_subcomplex(&self, name: &str) -> Check {
        let mut c = Checker::new(name);
        for (p, m) in self.maps.iter().enumerate() {
            for v in self.spaces[p].kernel().basis() {
                let img = m.apply(v);
                if !self.spaces[p + 1].kernel().contains(&img) {
                    c.record(v, img, || format!("position {p}"));
                    break;
                }
            }
        }
        c.finish()
    }

    fn check_square_zero(&self) -> Check {
        let mut c = Checker::new("d² = 0");
        for p in 0..self.maps.len().saturating_sub(1) {
            let sq = self.maps[p + 1].mul(&self.maps[p]);
            let k = self.spaces[p + 2].kernel();
            if let Some(x) = (0..sq.cols()).find(|&x| !k.contains(&sq.col(x))) {
                let f = self.spaces[p].kernel().field();
                c.record(&vecops::unit(f, sq.cols(), x), sq.col(x), || format!("position {p}"));
            }
        }
        c.finish()
    }

    fn complex(&self, f: Field) -> Result<Complex> {
        let dims = self.spaces.iter().map(|q| q.dim()).collect();
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(p, m)| self.spaces[p + 1].proj_matrix().mul(m).mul(&self.spaces[p].section_matrix()))
            .collect();
        Complex::new(f, dims, maps)
    }
}

/// Direct sum of tensor blocks with offsets.
struct Summands {
    blocks: Vec<(usize, usize, Tens)>,
}

impl Summands {
    fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.2.dim()).sum()
    }

    fn offset(&self, i: usize) -> usize {
        self.blocks.iter().take_while(|b| b.0 != i).map(|b| b.2.dim()).sum()
    }

    fn block(&self, i: usize) -> Option<&Tens> {
        self.blocks.iter().find(|b| b.0 == i).map(|b| &b.2)
    }

    fn embed(&self, f: Field, i: usize, x: &[Scalar]) -> Vector {
        let mut out = vecops::zero(f, self.dim());
        let o = self.offset(i);
        out[o..o + x.len()].clone_from_slice(x);
        out
    }
}

fn stack_blocks(f: Field, rows: usize, parts: Vec<Matrix>) -> Matrix {
    let cols: Vec<Vector> = parts.iter().flat_map(|m| m.col_vecs()).collect();
    Matrix::from_cols(f, rows, &cols)
}

/// Verdict on `Ã ⊗_R C_• ⊗_R Ã → Ã` in total filtration `≤ M`.
#[derive(Clone, Debug)]
pub struct ResolutionReport {
    /// Positions `C_top, ..., C_0`, then `F_MÃ`.
    pub complex: Complex,
    pub homology: Vec<usize>,
    pub exact: bool,
    /// `d² = 0`, balanced, the filtration is a subcomplex, augmentation, gr dimensions.
    pub checks: Vec<Check>,
}

impl ResolutionReport {
    pub fn ok(&self) -> bool {
        self.exact && all_hold(&self.checks)
    }
}

/// Two-sided data for one `n`: summands `(Â_i ⊗ C_n) ⊗ Â_j` with `i + j = L`.
fn two_sided_summands(d: &TwoSidedData, n: usize, l: usize) -> Result<Summands> {
    let hat = d.hat();
    let blocks = (0..=l)
        .map(|i| {
            Ok((
                i,
                l - i,
                Tens::new(&[hat.component(i).clone(), d.duals[n].module.clone(), hat.component(l - i).clone()])?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Summands { blocks })
}

/// `S_n → Â_L ⊗ C_n ⊗ Â_L` through powers of `t`.
fn two_sided_embedding(d: &TwoSidedData, n: usize, l: usize, s: &Summands, bal: &mut Checker) -> Result<Matrix> {
    let f = d.field();
    let hat = d.hat();
    let y = Tens::new(&[hat.component(l).clone(), d.duals[n].module.clone(), hat.component(l).clone()])?;
    let fr = d.filtered();
    let parts = s
        .blocks
        .iter()
        .map(|(i, j, tens)| {
            let (ti, tj) = (fr.t_power(l - i), fr.t_power(l - j));
            let image = |w: &[usize]| {
                y.pure(&[
                    hat.mul(l - i, *i, &ti, &vecops::unit(f, hat.dim(*i), w[0])),
                    vecops::unit(f, d.duals[n].dim(), w[1]),
                    hat.mul(l - j, *j, &tj, &vecops::unit(f, hat.dim(*j), w[2])),
                ])
            };
            tens.induced(f, y.dim(), &image, bal)
        })
        .collect();
    Ok(stack_blocks(f, y.dim(), parts))
}

/// The two-sided Koszul resolution of `Ã` restricted to total filtration `≤ m`.
pub fn bimodule_resolution(d: &TwoSidedData, m: usize) -> Result<ResolutionReport> {
    if m > d.a_top() || m > d.b_top() {
        return Err(Error::Window(format!(
            "budget {m} needs B and Ã through degree {m}; have {} and {}",
            d.b_top(),
            d.a_top()
        )));
    }
    let f = d.field();
    let ring = d.ring();
    let s = ring.slice();
    let hat = d.hat();
    let t = &d.filtered().t;
    let r = d.base();
    let mut bal = Checker::new("balanced over R");
    let summ: Vec<Summands> = (0..=m).map(|n| two_sided_summands(d, n, m - n)).collect::<Result<_>>()?;
    let mut models: BTreeMap<(usize, usize), HomModel> = BTreeMap::new();
    for n in 0..=m {
        for i in 0..=m - n {
            models.insert((i, n), HomModel::new(hat.component(i), s.component(n), &d.duals[n])?);
        }
    }
    let lost = || Error::Internal("∂φ left Hom_{R^op}(B^n, Â)".into());
    // dn[n] : S_n → S_{n-1}
    let mut dn: Vec<Option<Matrix>> = vec![None];
    for n in 1..=m {
        let src = &summ[n];
        let tgt = &summ[n - 1];
        let chi_dual = &d.duals[n];
        let low = &d.duals[n - 1];
        let mut parts = Vec::new();
        for (i, j, tens) in &src.blocks {
            let (i, j) = (*i, *j);
            let model_up = &models[&(i + 1, n - 1)];
            let tgt_l = tgt.block(i + 1).expect("summand present");
            let tgt_r = tgt.block(i).expect("summand present");
            let mut err = None;
            let image = |w: &[usize]| -> Vector {
                let ea = vecops::unit(f, hat.dim(i), w[0]);
                let chi = chi_dual.functional(w[1]);
                let ex = vecops::unit(f, hat.dim(j), w[2]);
                let phi = |v: &[Scalar]| hat.component(i).act_right(&ea, &chi.apply(v));
                let dmat = ring.d(n - 1);
                let sd = sign(f, n - 1);
                let vals: Vec<Vector> = (0..s.dim(n - 1))
                    .map(|y| {
                        let ey = vecops::unit(f, s.dim(n - 1), y);
                        let mut v = vecops::zero(f, hat.dim(i + 1));
                        for (c, iota) in &d.e_prime {
                            add_into(&mut v, &hat.mul(i, 1, &phi(&s.mul(n - 1, 1, &ey, c)), iota));
                        }
                        vecops::axpy(&mut v, &sd, &hat.mul(i, 1, &phi(&dmat.apply(&ey)), t));
                        v
                    })
                    .collect();
                let mut out = vecops::zero(f, tgt.dim());
                match model_up.elem_of(&Matrix::from_cols(f, hat.dim(i + 1), &vals)) {
                    Some(y2) => {
                        let k2 = model_up.tens.lift(&y2);
                        let v3 = tgt_l.project(&vecops::kron(f, &k2, &ex));
                        add_into(&mut out, &tgt.embed(f, i + 1, &v3));
                    }
                    None => {
                        let _ = &err;
                    }
                }
                let sr = sign(f, n);
                for (iota, bk) in &d.e_second {
                    let cols: Vec<Vector> = (0..s.dim(n - 1))
                        .map(|y| chi.apply(&s.mul(1, n - 1, bk, &vecops::unit(f, s.dim(n - 1), y))))
                        .collect();
                    let chik = low
                        .coords(&Matrix::from_cols(f, r.dim(), &cols))
                        .expect("contraction stays right linear");
                    let v3 = tgt_r.pure(&[ea.clone(), chik, hat.mul(1, j, iota, &ex)]);
                    vecops::axpy(&mut out, &sr, &tgt.embed(f, i, &v3));
                }
                out
            };
            parts.push(tens.induced(f, tgt.dim(), &image, &mut bal));
            err.take().map_or(Ok(()), Err::<(), Error>)?;
            let _ = lost;
        }
        dn.push(Some(stack_blocks(f, tgt.dim(), parts)));
    }
    let emb: Vec<Matrix> = (0..=m)
        .map(|n| two_sided_embedding(d, n, m - n, &summ[n], &mut bal))
        .collect::<Result<_>>()?;
    // Ascending positions: S_m, ..., S_0.
    let spaces: Vec<Quotient> = (0..=m).rev().map(|n| Quotient::new(emb[n].kernel())).collect();
    let maps: Vec<Matrix> = (1..=m).rev().map(|n| dn[n].clone().expect("differential")).collect();
    let chain = QuotientChain { spaces, maps };
    let sq = chain.check_square_zero();
    let sub = chain.check_subcomplex("filtration is a subcomplex");
    let xc = chain.complex(f)?;
    // Augmentation S_0 → Â_m.
    let unit = r.unit().clone();
    let s0 = &summ[0];
    let mu_parts = s0
        .blocks
        .iter()
        .map(|(i, j, tens)| {
            let (i, j) = (*i, *j);
            let image = |w: &[usize]| {
                let c = d.duals[0].functional(w[1]).apply(&unit);
                let a = hat.component(i).act_right(&vecops::unit(f, hat.dim(i), w[0]), &c);
                hat.mul(i, j, &a, &vecops::unit(f, hat.dim(j), w[2]))
            };
            tens.induced(f, hat.dim(m), &image, &mut bal)
        })
        .collect();
    let mu = stack_blocks(f, hat.dim(m), mu_parts);
    let mut aug = Checker::new("augmentation");
    let k0 = chain.spaces[m].kernel();
    for v in k0.basis() {
        let img = mu.apply(v);
        if !vecops::is_zero(&img) {
            aug.record(v, img, || "multiplication does not vanish on the t-balancing relations".into());
            break;
        }
    }
    if m >= 1 {
        let comp = mu.mul(dn[1].as_ref().expect("differential"));
        if !comp.is_zero() {
            aug.record(&Vec::new(), Vec::new(), || "μ ∘ d ≠ 0".into());
        }
    }
    let mu_x = mu.mul(&chain.spaces[m].section_matrix());
    let mut dims = xc.dims.clone();
    dims.push(hat.dim(m));
    let mut maps = xc.maps.clone();
    maps.push(mu_x);
    let complex = Complex::new(f, dims, maps)?;
    let homology = complex.homology_dims();
    let exact = complex.square_zero_failure().is_none() && homology.iter().all(|&h| h == 0);

    let mut gr = Checker::new("gr matches the homogeneous two-sided complex");
    if m >= 1 {
        let lower: Vec<usize> = (0..m)
            .map(|n| {
                let l = m - 1 - n;
                let s = two_sided_summands(d, n, l)?;
                let mut scratch = Checker::new("scratch");
                Ok(two_sided_embedding(d, n, l, &s, &mut scratch)?.rank())
            })
            .collect::<Result<_>>()?;
        let g = &d.pbw.graded;
        for n in 0..=m {
            let here = chain.spaces[m - n].dim();
            let below = lower.get(n).copied().unwrap_or(0);
            let mut expected = 0;
            for a in 0..=m - n {
                let b = m - n - a;
                if a > g.top() || b > g.top() {
                    continue;
                }
                expected += Tens::new(&[g.component(a).clone(), d.duals[n].module.clone(), g.component(b).clone()])?.dim();
            }
            if here - below != expected {
                gr.record(&Vec::new(), Vec::new(), || {
                    format!("C_{n}: layer {} but the homogeneous complex has {expected}", here - below)
                });
            }
        }
    }
    Ok(ResolutionReport {
        complex,
        homology,
        exact,
        checks: vec![sq, bal.finish(), sub, aug.finish(), gr.finish()],
    })
}

#[derive(Clone, Debug)]
pub struct FrobeniusReport {
    pub top: usize,
    /// Vanishing above `m`, `T = B^m` invertible, and perfect pairings.
    pub checks: Vec<Check>,
}

impl FrobeniusReport {
    pub fn holds(&self) -> bool {
        all_hold(&self.checks)
    }
}

fn invertible_action(t: &Bimodule) -> Result<bool> {
    let f = t.field();
    let rd = t.left_algebra().dim();
    let sd = t.right_algebra().dim();
    if !is_projective_left(t) || !is_projective_right(t) {
        return Ok(false);
    }
    let end_r = hom_space(t, t, Side::Right)?;
    let end_l = hom_space(t, t, Side::Left)?;
    let lcols = (0..rd).map(|i| end_r.coords(t.lact(i))).collect::<Option<Vec<_>>>();
    let rcols = (0..sd).map(|i| end_l.coords(t.ract(i))).collect::<Option<Vec<_>>>();
    let (Some(lcols), Some(rcols)) = (lcols, rcols) else { return Ok(false) };
    let l = Matrix::from_cols(f, end_r.dim(), &lcols);
    let r = Matrix::from_cols(f, end_l.dim(), &rcols);
    Ok(l.rows() == l.cols() && l.is_invertible() && r.rows() == r.cols() && r.is_invertible())
}

/// Whether `B^n × B^{m-n} → B^m` is a perfect pairing for all `n` and `B^m` is invertible.
pub fn frobenius_check(b: &GradedSlice, m: usize) -> Result<FrobeniusReport> {
    if b.top() < m {
        return Err(Error::Window(format!("slice stops at degree {} below {m}", b.top())));
    }
    let f = b.field();
    let mut vanish = Checker::new("B vanishes above m");
    for n in m + 1..=b.top() {
        if b.dim(n) != 0 {
            vanish.record(&Vec::new(), Vec::new(), || format!("dim B^{n} = {}", b.dim(n)));
        }
    }
    let t = b.component(m);
    let mut inv = Checker::new("T = B^m invertible");
    if !invertible_action(t)? {
        inv.record(&Vec::new(), Vec::new(), || format!("dim T = {}", t.dim()));
    }
    let mut pair = Checker::new("perfect pairings");
    for n in 0..=m {
        let (p, q) = (b.dim(n), b.dim(m - n));
        let hl = hom_space(b.component(n), t, Side::Left)?;
        let cols: Option<Vec<Vector>> = (0..q)
            .map(|y| {
                let ey = vecops::unit(f, q, y);
                let vals: Vec<Vector> = (0..p).map(|x| b.mul(n, m - n, &vecops::unit(f, p, x), &ey)).collect();
                hl.coords(&Matrix::from_cols(f, t.dim(), &vals))
            })
            .collect();
        let ok_l = cols.map_or(false, |c| hl.dim() == q && Matrix::from_cols(f, hl.dim(), &c).rank() == q);
        let hr = hom_space(b.component(m - n), t, Side::Right)?;
        let cols: Option<Vec<Vector>> = (0..p)
            .map(|x| {
                let ex = vecops::unit(f, p, x);
                let vals: Vec<Vector> = (0..q).map(|y| b.mul(n, m - n, &ex, &vecops::unit(f, q, y))).collect();
                hr.coords(&Matrix::from_cols(f, t.dim(), &vals))
            })
            .collect();
        let ok_r = cols.map_or(false, |c| hr.dim() == p && Matrix::from_cols(f, hr.dim(), &c).rank() == p);
        if !(ok_l && ok_r) {
            pair.record(&Vec::new(), Vec::new(), || format!("B^{n} × B^{}", m - n));
        }
    }
    Ok(FrobeniusReport {
        top: m,
        checks: vec![vanish.finish(), inv.finish(), pair.finish()],
    })
}

/// Highest nonzero degree of a slice.
pub fn top_degree(b: &GradedSlice) -> usize {
    (0..=b.top()).rev().find(|&n| b.dim(n) > 0).unwrap_or(0)
}

#[derive(Clone, Debug)]
pub struct ConversionReport {
    /// `m` with `T = B^m`.
    pub top: usize,
    pub budget: usize,
    /// `dim F_M E`.
    pub e_dim: usize,
    /// `d² = 0`, balanced, subcomplex, `E ≅ Ã#⊗T`, `E ≅ T⊗Ã`, coherence.
    pub checks: Vec<Check>,
    /// `Ã# ≅ Ã^op`, asserted only for graded-commutative `B` with `h = 0`.
    pub opposite: Option<Check>,
}

impl ConversionReport {
    pub fn ok(&self) -> bool {
        all_hold(&self.checks) && self.opposite.as_ref().map_or(true, |c| c.holds)
    }
}

/// `E`, the top homology of `Ã# ⊗^{ρ′} B ⊗^{τ′} Ã` in filtration `≤ budget`,
/// compared with `Ã# ⊗_R T` and `T ⊗_R Ã`.
pub fn conversion_bimodule(d: &TwoSidedData, budget: usize) -> Result<ConversionReport> {
    let f = d.field();
    let ring = d.ring();
    let s = ring.slice();
    let m = top_degree(s);
    if ring.top() <= m {
        return Err(Error::Window(format!("B must be known above degree {m} to see it vanish")));
    }
    let frob = frobenius_check(s, m)?;
    if let Some(c) = frob.checks.iter().find(|c| !c.holds) {
        return Err(Error::Precondition(format!("B is not Frobenius: {} fails", c.name)));
    }
    let top = budget + m;
    if d.a_top() < top {
        return Err(Error::Window(format!("Ã is known through {} but {top} is needed", d.a_top())));
    }
    let hat = d.hat();
    let fr = d.filtered();
    let t = &fr.t;
    let bop = ring.opposite()?;
    let pbw_op = pbw_reconstruct(&bop, top)?;
    let sharp = pbw_op.filtered.hat.opposite(false)?;
    let t_sharp = pbw_op.filtered.t.clone();
    let t_sharp_pow = |k: usize| {
        let mut x = sharp.unit();
        for i in 0..k {
            x = sharp.mul(i, 1, &x, &t_sharp);
        }
        x
    };
    let op1 = bop.slice().component(1);
    let a1op = right_dual(op1)?;
    let basis = projective_basis_right(op1).ok_or_else(|| Error::Precondition("B^1 is not left projective".into()))?;
    let e_sharp = basis
        .iter()
        .enumerate()
        .map(|(k, fk)| {
            let g = a1op.coords(fk).ok_or_else(|| Error::Internal("functional outside the dual".into()))?;
            Ok((pbw_op.iota.apply(&g), vecops::unit(f, op1.dim(), k)))
        })
        .collect::<Result<Vec<_>>>()?;

    let summands = |n: usize| -> Result<Summands> {
        let l = budget + n;
        let blocks = (0..=l)
            .map(|i| {
                Ok((
                    i,
                    l - i,
                    Tens::new(&[sharp.component(i).clone(), s.component(n).clone(), hat.component(l - i).clone()])?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Summands { blocks })
    };
    let summ: Vec<Summands> = (0..=m).map(summands).collect::<Result<_>>()?;
    let mut bal = Checker::new("balanced over R");
    let mut maps = Vec::with_capacity(m);
    for n in 0..m {
        let src = &summ[n];
        let tgt = &summ[n + 1];
        let sb = sign(f, n);
        let parts = src
            .blocks
            .iter()
            .map(|(i, j, tens)| {
                let (i, j) = (*i, *j);
                let right = tgt.block(i).expect("summand present");
                let left = tgt.block(i + 1).expect("summand present");
                let image = |w: &[usize]| {
                    let ea = vecops::unit(f, sharp.dim(i), w[0]);
                    let eb = vecops::unit(f, s.dim(n), w[1]);
                    let ec = vecops::unit(f, hat.dim(j), w[2]);
                    let mut r = right.pure(&[ea.clone(), ring.apply_d(n, &eb), hat.mul(1, j, t, &ec)]);
                    for (c, iota) in &d.e_prime {
                        vecops::axpy(&mut r, &sb, &right.pure(&[ea.clone(), s.mul(n, 1, &eb, c), hat.mul(1, j, iota, &ec)]));
                    }
                    let mut l = vecops::zero(f, left.dim());
                    for (iota, c) in &e_sharp {
                        add_into(&mut l, &left.pure(&[sharp.mul(i, 1, &ea, iota), s.mul(1, n, c, &eb), ec.clone()]));
                    }
                    let mut out = tgt.embed(f, i, &r);
                    add_into(&mut out, &tgt.embed(f, i + 1, &l));
                    out
                };
                tens.induced(f, tgt.dim(), &image, &mut bal)
            })
            .collect();
        maps.push(stack_blocks(f, tgt.dim(), parts));
    }
    let mut spaces = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let l = budget + n;
        let y = Tens::new(&[sharp.component(l).clone(), s.component(n).clone(), hat.component(l).clone()])?;
        let parts = summ[n]
            .blocks
            .iter()
            .map(|(i, j, tens)| {
                let (ti, tj) = (t_sharp_pow(l - i), fr.t_power(l - j));
                let image = |w: &[usize]| {
                    y.pure(&[
                        sharp.mul(l - i, *i, &ti, &vecops::unit(f, sharp.dim(*i), w[0])),
                        vecops::unit(f, s.dim(n), w[1]),
                        hat.mul(l - j, *j, &tj, &vecops::unit(f, hat.dim(*j), w[2])),
                    ])
                };
                tens.induced(f, y.dim(), &image, &mut bal)
            })
            .collect();
        spaces.push(Quotient::new(stack_blocks(f, y.dim(), parts).kernel()));
    }
    let chain = QuotientChain { spaces, maps };
    let sq = chain.check_square_zero();
    let sub = chain.check_subcomplex("filtration is a subcomplex");
    let xc = chain.complex(f)?;
    let xm = &chain.spaces[m];
    let boundaries = if m == 0 { Subspace::zero(f, xm.dim()) } else { xc.maps[m - 1].image() };
    let e_quot = Quotient::new(boundaries);
    let e_dim = e_quot.dim();
    let class = |v: &[Scalar]| e_quot.project(&xm.project(v));

    let tm = s.component(m);
    let lsrc = Tens::new(&[sharp.component(top).clone(), tm.clone()])?;
    let rsrc = Tens::new(&[tm.clone(), hat.component(top).clone()])?;
    let sm = &summ[m];
    let lblock = sm.block(top).expect("summand present");
    let rblock = sm.block(0).expect("summand present");
    let alpha_img = |w: &[usize]| {
        class(&sm.embed(
            f,
            top,
            &lblock.pure(&[vecops::unit(f, sharp.dim(top), w[0]), vecops::unit(f, tm.dim(), w[1]), hat.unit()]),
        ))
    };
    let beta_img = |w: &[usize]| {
        class(&sm.embed(
            f,
            0,
            &rblock.pure(&[sharp.unit(), vecops::unit(f, tm.dim(), w[0]), vecops::unit(f, hat.dim(top), w[1])]),
        ))
    };
    let alpha = lsrc.induced(f, e_dim, &alpha_img, &mut bal);
    let beta = rsrc.induced(f, e_dim, &beta_img, &mut bal);
    let iso = |name: &str, mat: &Matrix| {
        if mat.rows() == mat.cols() && mat.is_invertible() {
            Check::pass(name)
        } else {
            Check::fail(
                name,
                format!("{} × {} of rank {}", mat.rows(), mat.cols(), mat.rank()),
                Vec::new(),
                Vec::new(),
            )
        }
    };
    let left_iso = iso("E ≅ Ã#⊗T", &alpha);
    let right_iso = iso("E ≅ T⊗Ã", &beta);
    let mut coh = Checker::new("identifications agree on T");
    let ts = t_sharp_pow(top);
    let tt = fr.t_power(top);
    for x in 0..tm.dim() {
        let ex = vecops::unit(f, tm.dim(), x);
        let a = alpha.apply(&lsrc.pure(&[ts.clone(), ex.clone()]));
        let b = beta.apply(&rsrc.pure(&[ex.clone(), tt.clone()]));
        coh.expect_eq(&a, &b, &ex, || format!("T basis {x}"));
    }
    let opposite = if vecops::is_zero(ring.h()) && ring.is_graded_commutative() {
        let aop = hat.opposite(false)?;
        let mut c = Checker::new("Ã# ≅ Ã^op");
        if t_sharp != *t {
            c.record(&t_sharp, t.clone(), || "t differs".into());
        }
        for i in 0..=top {
            for j in 0..=top - i {
                if sharp.table(i, j) != aop.table(i, j) {
                    c.record(&Vec::new(), Vec::new(), || format!("products Â_{i} × Â_{j} differ"));
                }
            }
        }
        Some(c.finish())
    } else {
        None
    };
    Ok(ConversionReport {
        top: m,
        budget,
        e_dim,
        checks: vec![sq, bal.finish(), sub, left_iso, right_iso, coh.finish()],
        opposite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::first_failure;
    use crate::corpus;

    const Q: Field = Field::Rationals;

    fn fail_msg(checks: &[Check]) -> String {
        first_failure(checks).map_or(String::new(), |c| format!("{c:?}"))
    }

    #[test]
    fn twisting_elements_commute_up_to_differential() {
        for p in [corpus::weyl1(Q), corpus::nonabelian2(Q), corpus::sl2(Q)] {
            let d = TwoSidedData::from_presentation(&p, 2).unwrap();
            let checks = d.check().unwrap();
            assert!(all_hold(&checks), "{}", fail_msg(&checks));
        }
    }

    #[test]
    fn dual_module_is_curved_for_weyl() {
        let d = TwoSidedData::from_presentation(&corpus::weyl1(Q), 3).unwrap();
        let k = dual_nonhomog_koszul_module(&d, 2, 3).unwrap();
        let rep = k.check_axioms();
        assert!(rep.ok(), "{}", fail_msg(&rep.checks));
        assert!(rep.stated > 0);
        assert!(vecops::is_zero(d.ring().h()) == false);
    }

    #[test]
    fn dual_module_window_too_small() {
        let d = TwoSidedData::from_presentation(&corpus::weyl1(Q), 3).unwrap();
        assert!(matches!(dual_nonhomog_koszul_module(&d, 1, 3), Err(Error::Window(_))));
        assert!(matches!(dual_nonhomog_koszul_module(&d, 2, 1), Err(Error::Window(_))));
    }

    #[test]
    fn homology_basis_matches_dims() {
        let c = Complex::new(Q, vec![1, 2, 1], vec![Matrix::from_ints(Q, &[&[1], &[0]]), Matrix::zeros(Q, 1, 2)]).unwrap();
        assert_eq!(homology(&c, 1).unwrap().dim, 1);
        assert_eq!(homology(&c, 2).unwrap().dim, 1);
        assert_eq!(homology(&c, 0).unwrap().dim, 0);
    }

    #[test]
    fn sl2_koszul_complex_is_exact() {
        let rep = nonhomog_koszul_complex(&corpus::sl2(Q), 4).unwrap();
        assert!(rep.d_squared.holds);
        assert!(rep.exact, "{:?}", rep.homology);
    }

    #[test]
    fn sl2_lie_cohomology() {
        let search = build_augmented_dg(&corpus::sl2(Q), 4).unwrap();
        let c = dg_cohomology(search.dg.as_ref().unwrap()).unwrap();
        assert!(c.d_squared.holds);
        assert_eq!(c.dims, vec![1, 0, 0, 1]);
    }

    #[test]
    fn free_window_twist_is_a_cdg_module() {
        let search = build_augmented_dg(&corpus::nonabelian2(Q), 3).unwrap();
        let d = TwoSidedData::new(search.dg.as_ref().unwrap(), 3).unwrap();
        let w = FilteredComplexWindow::free(&d, 3);
        assert!(all_hold(&w.check()));
        let k = twisted_tensor_left(&w, &d).unwrap();
        let rep = k.check_axioms();
        assert!(rep.ok(), "{}", fail_msg(&rep.checks));
    }

    #[test]
    fn twisted_right_of_base_is_a_complex() {
        let search = build_augmented_dg(&corpus::sl2(Q), 3).unwrap();
        let dg = search.dg.unwrap();
        let d = TwoSidedData::new(&dg, 3).unwrap();
        let n = PlainCdgModule::base(&dg);
        assert!(n.check_axioms().ok());
        let w = twisted_tensor_right(&n, &d, 3).unwrap();
        let checks = w.check();
        assert!(all_hold(&checks), "{}", fail_msg(&checks));
    }

    #[test]
    fn bimodule_resolutions_are_exact() {
        for p in [corpus::weyl1(Q), corpus::nonabelian2(Q)] {
            let d = TwoSidedData::from_presentation(&p, 4).unwrap();
            let rep = bimodule_resolution(&d, 4).unwrap();
            assert!(all_hold(&rep.checks), "{}", fail_msg(&rep.checks));
            assert!(rep.exact, "{:?}", rep.homology);
        }
        let p = NonhomogPresentation::homogeneous(corpus::symmetric(Q, 2)).unwrap();
        let d = TwoSidedData::from_presentation(&p, 3).unwrap();
        let rep = bimodule_resolution(&d, 3).unwrap();
        assert!(rep.ok(), "{:?} {}", rep.homology, fail_msg(&rep.checks));
    }

    #[test]
    fn frobenius_examples() {
        let ext = build_cdg_dual(&NonhomogPresentation::homogeneous(corpus::symmetric(Q, 3)).unwrap(), 4).unwrap();
        assert!(frobenius_check(ext.slice(), 3).unwrap().holds());
        assert!(frobenius_check(&ext.slice().truncate(0), 0).unwrap().holds());
        let free = build_cdg_dual(&NonhomogPresentation::homogeneous(corpus::tensor_ring(Q, 2)).unwrap(), 3).unwrap();
        assert_eq!(free.slice().dims(), vec![1, 2, 0, 0]);
        assert!(!frobenius_check(free.slice(), 1).unwrap().holds());
    }

    #[test]
    fn conversion_for_nonabelian_lie_algebra() {
        let search = build_augmented_dg(&corpus::nonabelian2(Q), 5).unwrap();
        let d = TwoSidedData::new(search.dg.as_ref().unwrap(), 5).unwrap();
        let rep = conversion_bimodule(&d, 3).unwrap();
        assert_eq!(rep.top, 2);
        assert!(rep.ok(), "{} {:?}", fail_msg(&rep.checks), rep.opposite);
    }

    #[test]
    fn conversion_for_weyl() {
        let d = TwoSidedData::from_presentation(&corpus::weyl1(Q), 5).unwrap();
        let rep = conversion_bimodule(&d, 3).unwrap();
        assert!(rep.opposite.is_none());
        assert!(rep.ok(), "{}", fail_msg(&rep.checks));
    }

    /// Pads and sums homogeneous strands so they line up with a Rees strand.
    fn summed(parts: &[Vec<usize>], len: usize) -> Vec<usize> {
        let mut out = vec![0; len];
        for p in parts {
            let off = len - p.len();
            for (k, v) in p.iter().enumerate() {
                out[off + k] += v;
            }
        }
        out
    }

    #[test]
    fn homogeneous_degeneration_matches_first_complex() {
        for q in [corpus::symmetric(Q, 2), corpus::quiver_relations(Q)] {
            let pair = crate::quadratic::koszul_pair(&q, 3).unwrap();
            let d = TwoSidedData::from_presentation(&NonhomogPresentation::homogeneous(q).unwrap(), 3).unwrap();
            let k = twisted_tensor_left(&FilteredComplexWindow::free(&d, 3), &d).unwrap();
            let c = k.strand(3).unwrap();
            let firsts: Vec<Complex> = (0..=3).map(|n| pair.first_koszul_complex(n).unwrap()).collect();
            let dims: Vec<Vec<usize>> = firsts.iter().map(|c| c.dims.clone()).collect();
            let hom: Vec<Vec<usize>> = firsts.iter().map(|c| c.homology_dims()).collect();
            assert_eq!(c.dims, summed(&dims, c.len()));
            assert_eq!(c.homology_dims(), summed(&hom, c.len()));
        }
    }

    #[test]
    fn homogeneous_degeneration_matches_dual_complex() {
        let q = corpus::symmetric(Q, 2);
        let pair = crate::quadratic::koszul_pair(&q, 4).unwrap();
        let d = TwoSidedData::from_presentation(&NonhomogPresentation::homogeneous(q).unwrap(), 3).unwrap();
        let k = dual_nonhomog_koszul_module(&d, 2, 3).unwrap();
        assert!(k.check_axioms().ok());
        let c = k.strand(0).unwrap();
        assert_eq!(c.len(), 3);
        let parts: Vec<Vec<usize>> = (-2..=0isize)
            .map(|s| {
                let h = pair.dual_koszul_complex(s, 2).unwrap().homology_dims();
                let mut v = vec![0; (-s) as usize];
                v.extend(h);
                v.truncate(3);
                v
            })
            .collect();
        let expect: Vec<usize> = (0..3).map(|i| parts.iter().map(|p| p[i]).sum()).collect();
        assert_eq!(c.homology_dims()[..2], expect[..2]);
    }
}
