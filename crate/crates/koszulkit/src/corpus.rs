//! Built-in example presentations.

use std::sync::Arc;

use crate::bimodule::{same_algebra, BaseAlgebra, Bimodule, Side};
use crate::error::{Error, Result};
use crate::linalg::{vecops, Field, Matrix, Scalar, Vector};
use crate::nonhomog::NonhomogPresentation;
use crate::quadratic::QuadraticPresentation;

fn tensor(field: Field, n: usize, terms: &[(i64, usize, usize)]) -> Vector {
    let mut v = vecops::zero(field, n * n);
    for &(c, a, b) in terms {
        v[a * n + b] = &v[a * n + b] + &field.int(c);
    }
    v
}

fn free(field: Field, n: usize) -> Bimodule {
    Bimodule::vector_space(&BaseAlgebra::ground(field), n)
}

fn check_symmetric_input(v: &Bimodule) -> Result<()> {
    if !v.left_algebra().is_commutative() {
        return Err(Error::Precondition("symmetric and exterior rings need a commutative base".into()));
    }
    if !same_algebra(v.left_algebra(), v.right_algebra()) || v.lacts() != v.racts() {
        return Err(Error::Invalid("left and right actions on V differ".into()));
    }
    Ok(())
}

/// `Sym_R(V)`: relations `v⊗w - w⊗v`.
pub fn make_symmetric(v: &Bimodule) -> Result<QuadraticPresentation> {
    check_symmetric_input(v)?;
    let (f, n) = (v.field(), v.dim());
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            rels.push(tensor(f, n, &[(1, i, j), (-1, j, i)]));
        }
    }
    QuadraticPresentation::from_tensor_relations(v.clone(), &rels, Side::Left)
}

/// `Λ_R(V)`: relations `v⊗v`, which in characteristic 2 is more than antisymmetry.
pub fn make_exterior(v: &Bimodule) -> Result<QuadraticPresentation> {
    check_symmetric_input(v)?;
    let (f, n) = (v.field(), v.dim());
    let mut rels = Vec::new();
    for i in 0..n {
        rels.push(tensor(f, n, &[(1, i, i)]));
        for j in i + 1..n {
            rels.push(tensor(f, n, &[(1, i, j), (1, j, i)]));
        }
    }
    QuadraticPresentation::from_tensor_relations(v.clone(), &rels, Side::Left)
}

/// `Sym(k^n)`.
pub fn symmetric(field: Field, n: usize) -> QuadraticPresentation {
    make_symmetric(&free(field, n)).unwrap()
}

/// `Λ(k^n)`.
pub fn exterior(field: Field, n: usize) -> QuadraticPresentation {
    make_exterior(&free(field, n)).unwrap()
}

/// The free algebra on `n` generators.
pub fn tensor_ring(field: Field, n: usize) -> QuadraticPresentation {
    QuadraticPresentation::from_tensor_relations(free(field, n), &[], Side::Left).unwrap()
}

/// `k<x,y> / (x^2, yx + y^2)`: quadratic but not Koszul, first failing in degree 4.
pub fn non_koszul_example(field: Field) -> QuadraticPresentation {
    let rels = vec![tensor(field, 2, &[(1, 0, 0)]), tensor(field, 2, &[(1, 1, 0), (1, 1, 1)])];
    QuadraticPresentation::from_tensor_relations(free(field, 2), &rels, Side::Left).unwrap()
}

/// Bimodule over `k^m` (product of `m` copies of `k`) where basis element `b`
/// lies in `e_{src[b]} V e_{tgt[b]}`.
pub fn quiver_bimodule(r: &Arc<BaseAlgebra>, ends: &[(usize, usize)]) -> Bimodule {
    let f = r.field();
    let d = ends.len();
    let diag = |pick: &dyn Fn(usize) -> bool| {
        let mut m = Matrix::zeros(f, d, d);
        for b in 0..d {
            if pick(b) {
                m.set(b, b, f.one());
            }
        }
        m
    };
    let lact = (0..r.dim()).map(|i| diag(&|b| ends[b].0 == i)).collect();
    let ract = (0..r.dim()).map(|i| diag(&|b| ends[b].1 == i)).collect();
    Bimodule::new(r.clone(), r.clone(), lact, ract).unwrap()
}

/// Quadratic ring over `k^n` on the given arrows `(source, target)`; relations are
/// vectors of `V ⊗_k V` and must be combinations of composable paths with common ends.
pub fn make_quiver(field: Field, n: usize, arrows: &[(usize, usize)], rels: &[Vector]) -> Result<QuadraticPresentation> {
    if let Some((i, a)) = arrows.iter().enumerate().find(|(_, a)| a.0 >= n || a.1 >= n) {
        return Err(Error::Invalid(format!("arrow {i} = {a:?} leaves the {n} vertices")));
    }
    let r = BaseAlgebra::product(field, n);
    let v = quiver_bimodule(&r, arrows);
    QuadraticPresentation::from_tensor_relations(v, rels, Side::Left)
}

/// Two vertices, arrows `x_1, x_2 : 1 → 2` and `y_1, y_2 : 2 → 1`, commutativity
/// relations `x_1 y_1 - x_2 y_2` and `y_1 x_1 - y_2 x_2`.
pub fn quiver_relations(field: Field) -> QuadraticPresentation {
    let rels = vec![tensor(field, 4, &[(1, 0, 2), (-1, 1, 3)]), tensor(field, 4, &[(1, 2, 0), (-1, 3, 1)])];
    make_quiver(field, 2, &[(0, 1), (0, 1), (1, 0), (1, 0)], &rels).unwrap()
}

/// Same quiver with relations `x_1 y_1 - x_2 y_2` and `y_1 x_2`: not Koszul, failing in degree 4.
pub fn quiver_non_koszul(field: Field) -> QuadraticPresentation {
    let rels = vec![tensor(field, 4, &[(1, 0, 2), (-1, 1, 3)]), tensor(field, 4, &[(1, 2, 1)])];
    make_quiver(field, 2, &[(0, 1), (0, 1), (1, 0), (1, 0)], &rels).unwrap()
}

/// Two vertices with one arrow each way and no relations.
pub fn path_algebra(field: Field) -> QuadraticPresentation {
    make_quiver(field, 2, &[(0, 1), (1, 0)], &[]).unwrap()
}

/// A random quadratic presentation with `dim V ≤ 3` over `k` or `k × k`.
/// Relations are a random subbimodule, chosen blockwise by idempotents.
pub fn random_presentation<G: rand::Rng>(rng: &mut G, field: Field, two_vertices: bool) -> QuadraticPresentation {
    let (r, v) = if two_vertices {
        let r = BaseAlgebra::product(field, 2);
        let d = rng.gen_range(1..=3);
        let ends: Vec<(usize, usize)> = (0..d).map(|_| (rng.gen_range(0..2), rng.gen_range(0..2))).collect();
        let v = quiver_bimodule(&r, &ends);
        (r, v)
    } else {
        let d = rng.gen_range(1..=3);
        (BaseAlgebra::ground(field), free(field, d))
    };
    let sq = crate::bimodule::tensor_over(&v, &v).unwrap();
    let n = sq.dim();
    let p = field.characteristic().max(7) as i64;
    let mut gens = Vec::new();
    for i in 0..r.dim() {
        for j in 0..r.dim() {
            let proj = sq.module.lact(i).mul(sq.module.ract(j));
            let block = proj.rank();
            if block == 0 {
                continue;
            }
            let k = rng.gen_range(0..=block);
            for _ in 0..k {
                let w: Vector = (0..n).map(|_| field.int(rng.gen_range(0..p))).collect();
                gens.push(proj.apply(&w));
            }
        }
    }
    let rel = crate::linalg::Subspace::span(field, n, gens);
    QuadraticPresentation::new(v, rel, Side::Left).unwrap()
}

/// `R ⊗ k^m` with central generators `y_a`; basis element `a * dim R + c` is `e_c y_a`.
pub fn free_bimodule(r: &Arc<BaseAlgebra>, m: usize) -> Bimodule {
    let f = r.field();
    let dr = r.dim();
    let block = |g: &Matrix| {
        let mut out = Matrix::zeros(f, m * dr, m * dr);
        for a in 0..m {
            for i in 0..dr {
                for j in 0..dr {
                    out.set(a * dr + i, a * dr + j, g.get(i, j).clone());
                }
            }
        }
        out
    };
    let lact = (0..dr).map(|i| block(r.left_mul(i))).collect();
    let ract = (0..dr).map(|i| block(r.right_mul(i))).collect();
    Bimodule::new(r.clone(), r.clone(), lact, ract).unwrap()
}

/// Structure data `y_a y_b - y_b y_a = [y_a, y_b] + ω(y_a, y_b)` and
/// `y_a r - r y_a = D_a(r)` over a base `R`. Relations are read as
/// `î₁ î₂ = p(î) - h(î)` and `v r = v·r + q(v, r)`.
#[derive(Clone, Debug)]
pub struct LieData {
    pub base: Arc<BaseAlgebra>,
    /// `anchors[a]` is `D_a` as a `dim R × dim R` matrix.
    pub anchors: Vec<Matrix>,
    /// `brackets[a][b]` holds the `k`-coordinates of `[y_a, y_b]` in the `y` basis.
    pub brackets: Vec<Vec<Vector>>,
    /// `cocycle[a][b] ∈ R`.
    pub cocycle: Vec<Vec<Vector>>,
}

impl LieData {
    pub fn over_field(field: Field, m: usize) -> LieData {
        let base = BaseAlgebra::ground(field);
        LieData {
            anchors: vec![Matrix::zeros(field, 1, 1); m],
            brackets: vec![vec![vecops::zero(field, m); m]; m],
            cocycle: vec![vec![vec![field.zero()]; m]; m],
            base,
        }
    }

    pub fn rank(&self) -> usize {
        self.anchors.len()
    }

    pub fn set_bracket(&mut self, a: usize, b: usize, terms: &[(i64, usize)]) {
        let f = self.base.field();
        let mut v = vecops::zero(f, self.rank());
        for &(c, k) in terms {
            v[k] = &v[k] + &f.int(c);
        }
        self.brackets[b][a] = vecops::neg(&v);
        self.brackets[a][b] = v;
    }

    pub fn set_cocycle(&mut self, a: usize, b: usize, value: Vector) {
        self.cocycle[b][a] = vecops::neg(&value);
        self.cocycle[a][b] = value;
    }
}

/// The nonhomogeneous presentation of the universal enveloping ring of `data`:
/// `V = R ⊗ k^m`, quadratic part `Sym_R(V)`, `q(r y_a, s) = r D_a(s)`,
/// `p = [-,-]` and `h = -ω` on `r(y_a ⊗ y_b - y_b ⊗ y_a)`. Not validated.
pub fn lie_rinehart(data: &LieData) -> Result<NonhomogPresentation> {
    let r = &data.base;
    let f = r.field();
    let (dr, m) = (r.dim(), data.rank());
    let v = free_bimodule(r, m);
    let dv = v.dim();
    let elem = |a: usize, coef: &[Scalar]| {
        let mut x = vecops::zero(f, dv);
        x[a * dr..(a + 1) * dr].clone_from_slice(coef);
        x
    };
    let one = r.unit().clone();
    let mut lifts = Vec::new();
    let mut ps = Vec::new();
    let mut hs = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            for c in 0..dr {
                let ec = vecops::unit(f, dr, c);
                let t = vecops::sub(
                    &vecops::kron(f, &elem(a, &ec), &elem(b, &one)),
                    &vecops::kron(f, &elem(b, &ec), &elem(a, &one)),
                );
                lifts.push(t);
                let mut p = vecops::zero(f, dv);
                for (k, x) in data.brackets[a][b].iter().enumerate() {
                    if !x.is_zero() {
                        vecops::axpy(&mut p, x, &elem(k, &ec));
                    }
                }
                ps.push(p);
                hs.push(vecops::neg(&r.mul(&ec, &data.cocycle[a][b])));
            }
        }
    }
    let rels: Vec<Vector> = lifts.clone();
    let quadratic = QuadraticPresentation::from_tensor_relations(v, &rels, Side::Left)?;
    let mut qcols = Vec::with_capacity(dv * dr);
    for a in 0..m {
        for c in 0..dr {
            let ec = vecops::unit(f, dr, c);
            for s in 0..dr {
                qcols.push(r.mul(&ec, &data.anchors[a].col(s)));
            }
        }
    }
    let q = Matrix::from_cols(f, dr, &qcols);
    NonhomogPresentation::new(quadratic, q, lifts, ps, hs)
}

/// `A_1` on generators `x, ∂` with `∂x - x∂ = 1`, i.e. `h(∂⊗x - x⊗∂) = -1`.
pub fn weyl1(field: Field) -> NonhomogPresentation {
    heisenberg(field, 1)
}

/// Heisenberg/Weyl ring on `x_1..x_n, ∂_1..∂_n` (generator `i` is `x_i`,
/// `n + i` is `∂_i`) with `∂_i x_i - x_i ∂_i = 1`.
pub fn heisenberg(field: Field, n: usize) -> NonhomogPresentation {
    let mut d = LieData::over_field(field, 2 * n);
    for i in 0..n {
        d.set_cocycle(n + i, i, vec![field.int(1)]);
    }
    lie_rinehart(&d).unwrap()
}

/// `U(sl_2)` with basis `e, f, h`.
pub fn sl2(field: Field) -> NonhomogPresentation {
    lie_rinehart(&sl2_data(field)).unwrap()
}

pub fn sl2_data(field: Field) -> LieData {
    let mut d = LieData::over_field(field, 3);
    d.set_bracket(0, 1, &[(1, 2)]);
    d.set_bracket(2, 0, &[(2, 0)]);
    d.set_bracket(2, 1, &[(-2, 1)]);
    d
}

/// `U` of the two-dimensional nonabelian Lie algebra `[x, y] = y`.
pub fn nonabelian2(field: Field) -> NonhomogPresentation {
    let mut d = LieData::over_field(field, 2);
    d.set_bracket(0, 1, &[(1, 1)]);
    lie_rinehart(&d).unwrap()
}

/// `[x,y] = z`, `[y,z] = x`, `[z,x] = x`: antisymmetric but violates Jacobi.
pub fn fake_jacobi(field: Field) -> NonhomogPresentation {
    let mut d = LieData::over_field(field, 3);
    d.set_bracket(0, 1, &[(1, 2)]);
    d.set_bracket(1, 2, &[(1, 0)]);
    d.set_bracket(2, 0, &[(1, 0)]);
    lie_rinehart(&d).unwrap()
}

/// `U(sl_2)` twisted by the coboundary cocycle `ω(u, v) = φ([u, v])` with `φ = h^*`.
pub fn twisted_sl2(field: Field) -> NonhomogPresentation {
    let mut d = sl2_data(field);
    for a in 0..3 {
        for b in 0..3 {
            let phi = d.brackets[a][b][2].clone();
            d.cocycle[a][b] = vec![phi];
        }
    }
    lie_rinehart(&d).unwrap()
}

/// Clifford ring of a symmetric form `q0`: `v v = q0(v, v)`, i.e. `h(v⊗v) = -q0(v, v)`.
pub fn make_clifford(q0: &Matrix) -> Result<NonhomogPresentation> {
    let f = q0.field();
    let n = q0.rows();
    if q0.cols() != n {
        return Err(Error::Dimension("form must be square".into()));
    }
    if q0 != &q0.transpose() {
        return Err(Error::Invalid("form is not symmetric".into()));
    }
    let q = exterior(f, n);
    let mut lifts = Vec::new();
    let mut hs = Vec::new();
    for i in 0..n {
        lifts.push(tensor(f, n, &[(1, i, i)]));
        hs.push(vec![-q0.get(i, i)]);
        for j in i + 1..n {
            lifts.push(tensor(f, n, &[(1, i, j), (1, j, i)]));
            hs.push(vec![-&(q0.get(i, j) + q0.get(i, j))]);
        }
    }
    let ps = vec![vecops::zero(f, n); lifts.len()];
    NonhomogPresentation::new(q, Matrix::zeros(f, 1, n), lifts, ps, hs)
}

/// Clifford ring of an integer form `b`: `e_i e_j + e_j e_i = 2 b_ij`.
pub fn clifford(field: Field, b: &[Vec<i64>]) -> Result<NonhomogPresentation> {
    let n = b.len();
    if b.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension("form must be square".into()));
    }
    let rows: Vec<&[i64]> = b.iter().map(|r| r.as_slice()).collect();
    let m = if n == 0 { Matrix::zeros(field, 0, 0) } else { Matrix::from_ints(field, &rows) };
    make_clifford(&m)
}

/// Differential operators on `k[ε]/ε²` over `F_2`: `V = R∂`, `∂ε - ε∂ = 1`, no relations.
pub fn fat_point() -> NonhomogPresentation {
    let f = Field::Prime(2);
    let mut d = LieData::over_field(f, 1);
    d.base = BaseAlgebra::dual_numbers(f);
    d.cocycle = vec![vec![vec![f.zero(), f.zero()]]];
    let mut anchor = Matrix::zeros(f, 2, 2);
    anchor.set(0, 1, f.one());
    d.anchors = vec![anchor];
    lie_rinehart(&d).unwrap()
}

/// `M_2(k) ⊗ A_1`: central `x, ∂` over `M_2(k)` with `∂x - x∂ = 1`.
pub fn matrix_weyl(field: Field) -> NonhomogPresentation {
    let r = BaseAlgebra::matrix_algebra(field, 2);
    let mut d = LieData::over_field(field, 2);
    d.anchors = vec![Matrix::zeros(field, 4, 4); 2];
    d.cocycle = vec![vec![vecops::zero(field, 4); 2]; 2];
    d.base = r.clone();
    d.set_cocycle(0, 1, r.unit().clone());
    lie_rinehart(&d).unwrap()
}

fn bracket_of(d: &LieData, x: &[Scalar], y: &[Scalar]) -> Vector {
    let f = d.base.field();
    let m = d.rank();
    let mut out = vecops::zero(f, m);
    for a in 0..m {
        for b in 0..m {
            let c = &x[a] * &y[b];
            if !c.is_zero() {
                vecops::axpy(&mut out, &c, &d.brackets[a][b]);
            }
        }
    }
    out
}

fn anchor_of(d: &LieData, x: &[Scalar]) -> Matrix {
    let f = d.base.field();
    let dr = d.base.dim();
    let mut out = Matrix::zeros(f, dr, dr);
    for (a, c) in x.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&d.anchors[a].scale(c));
        }
    }
    out
}

fn cocycle_of(d: &LieData, x: &[Scalar], y: &[Scalar]) -> Vector {
    let f = d.base.field();
    let mut out = vecops::zero(f, d.base.dim());
    for (a, xa) in x.iter().enumerate() {
        for (b, yb) in y.iter().enumerate() {
            let c = xa * yb;
            if !c.is_zero() {
                vecops::axpy(&mut out, &c, &d.cocycle[a][b]);
            }
        }
    }
    out
}

/// Antisymmetry, Jacobi, anchors acting by derivations compatibly with the
/// bracket, and closedness of the cocycle.
pub fn validate_lie_data(d: &LieData) -> Result<()> {
    let f = d.base.field();
    let m = d.rank();
    let dr = d.base.dim();
    if d.brackets.len() != m || d.brackets.iter().any(|r| r.len() != m || r.iter().any(|v| v.len() != m)) {
        return Err(Error::Dimension(format!("brackets must be {m} × {m} vectors of length {m}")));
    }
    if d.cocycle.len() != m || d.cocycle.iter().any(|r| r.len() != m || r.iter().any(|v| v.len() != dr)) {
        return Err(Error::Dimension(format!("cocycle must be {m} × {m} elements of R")));
    }
    if d.anchors.iter().any(|a| a.rows() != dr || a.cols() != dr) {
        return Err(Error::Dimension(format!("anchors must be {dr} × {dr}")));
    }
    let e = |a: usize| vecops::unit(f, m, a);
    for a in 0..m {
        for b in 0..m {
            if d.brackets[a][b] != vecops::neg(&d.brackets[b][a]) {
                return Err(Error::Invalid(format!("bracket is not antisymmetric at ({a}, {b})")));
            }
            if d.cocycle[a][b] != vecops::neg(&d.cocycle[b][a]) {
                return Err(Error::Invalid(format!("cocycle is not antisymmetric at ({a}, {b})")));
            }
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let (x, y, z) = (e(a), e(b), e(c));
                let mut j = bracket_of(d, &bracket_of(d, &x, &y), &z);
                j = vecops::add(&j, &bracket_of(d, &bracket_of(d, &y, &z), &x));
                j = vecops::add(&j, &bracket_of(d, &bracket_of(d, &z, &x), &y));
                if !vecops::is_zero(&j) {
                    return Err(Error::Invalid(format!("Jacobi identity fails on generators ({a}, {b}, {c})")));
                }
                let mut w = vecops::zero(f, dr);
                for (p, q, r) in [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)] {
                    w = vecops::add(&w, &anchor_of(d, p).apply(&cocycle_of(d, q, r)));
                    w = vecops::sub(&w, &cocycle_of(d, &bracket_of(d, p, q), r));
                }
                if !vecops::is_zero(&w) {
                    return Err(Error::Invalid(format!("cocycle is not closed on generators ({a}, {b}, {c})")));
                }
            }
        }
    }
    for (a, da) in d.anchors.iter().enumerate() {
        for i in 0..dr {
            for k in 0..dr {
                let (x, y) = (d.base.basis_elem(i), d.base.basis_elem(k));
                let lhs = da.apply(&d.base.mul(&x, &y));
                let rhs = vecops::add(&d.base.mul(&da.apply(&x), &y), &d.base.mul(&x, &da.apply(&y)));
                if lhs != rhs {
                    return Err(Error::Invalid(format!("anchor {a} is not a derivation on ({i}, {k})")));
                }
            }
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let comm = d.anchors[a].mul(&d.anchors[b]).sub(&d.anchors[b].mul(&d.anchors[a]));
            if comm != anchor_of(d, &d.brackets[a][b]) {
                return Err(Error::Invalid(format!("anchor does not respect the bracket of ({a}, {b})")));
            }
        }
    }
    Ok(())
}

fn checked(p: NonhomogPresentation) -> Result<NonhomogPresentation> {
    match crate::checks::first_failure(&crate::nonhomog::verify_self_consistency(&p)) {
        None => Ok(p),
        Some(c) => Err(Error::Invalid(format!("self-consistency fails: {}", c.name))),
    }
}

/// Enveloping ring of a Lie algebra or Lie algebroid with `h = 0`; refuses invalid data.
pub fn make_enveloping(data: &LieData) -> Result<NonhomogPresentation> {
    if data.cocycle.iter().flatten().any(|v| !vecops::is_zero(v)) {
        return Err(Error::Invalid("enveloping data must have zero cocycle; use make_twisted".into()));
    }
    validate_lie_data(data)?;
    checked(lie_rinehart(data)?)
}

/// Lie algebroid on `R ⊗ k^m` with constant brackets (`brackets[a][b]` in the `y` basis).
pub fn make_algebroid(base: &Arc<BaseAlgebra>, anchors: Vec<Matrix>, brackets: Vec<Vec<Vector>>) -> Result<NonhomogPresentation> {
    let f = base.field();
    let m = anchors.len();
    let data = LieData {
        base: base.clone(),
        anchors,
        brackets,
        cocycle: vec![vec![vecops::zero(f, base.dim()); m]; m],
    };
    make_enveloping(&data)
}

/// Twist of `data` by `ω`: `v w - w v = [v, w] + ω(v, w)`; `ω` must be closed.
pub fn make_twisted(data: &LieData, omega: Vec<Vec<Vector>>) -> Result<NonhomogPresentation> {
    let mut d = data.clone();
    d.cocycle = omega;
    validate_lie_data(&d)?;
    checked(lie_rinehart(&d)?)
}

/// Weyl ring of an alternating form on `k^m`: `p = 0`, `h(v⊗w - w⊗v) = -ω(v, w)`.
/// A degenerate `ω` is allowed; `ω = 0` gives `Sym(k^m)`.
pub fn make_heisenberg_weyl(omega: &Matrix) -> Result<NonhomogPresentation> {
    let f = omega.field();
    let m = omega.rows();
    if omega.cols() != m {
        return Err(Error::Dimension("form must be square".into()));
    }
    if (0..m).any(|i| !omega.get(i, i).is_zero()) || omega != &omega.transpose().scale(&f.int(-1)) {
        return Err(Error::Invalid("form is not alternating".into()));
    }
    let mut d = LieData::over_field(f, m);
    for a in 0..m {
        for b in 0..m {
            d.cocycle[a][b] = vec![omega.get(a, b).clone()];
        }
    }
    make_twisted(&d, d.cocycle.clone())
}

/// `[x, y] = y` with `z` central, twisted by `ω(y, z) = 1`, which is not closed.
/// Intentionally fails self-consistency.
pub fn non_closed_twist(field: Field) -> NonhomogPresentation {
    let mut d = LieData::over_field(field, 3);
    d.set_bracket(0, 1, &[(1, 1)]);
    d.set_cocycle(1, 2, vec![field.one()]);
    lie_rinehart(&d).unwrap()
}

/// A corpus presentation.
#[derive(Clone, Debug)]
pub enum CorpusPresentation {
    Quadratic(QuadraticPresentation),
    Nonhomogeneous(NonhomogPresentation),
}

impl CorpusPresentation {
    pub fn field(&self) -> Field {
        match self {
            CorpusPresentation::Quadratic(q) => q.field(),
            CorpusPresentation::Nonhomogeneous(p) => p.field(),
        }
    }

    /// The quadratic part.
    pub fn quadratic(&self) -> &QuadraticPresentation {
        match self {
            CorpusPresentation::Quadratic(q) => q,
            CorpusPresentation::Nonhomogeneous(p) => p.quadratic(),
        }
    }
}

/// Expected verdicts; each is re-derived by the tests, never trusted.
#[derive(Clone, Debug, Default)]
pub struct Expected {
    /// Koszulity of the quadratic part up to `koszul_degree`.
    pub koszul: Option<bool>,
    pub koszul_degree: usize,
    /// Dimensions of the dual ring `B^0, B^1, ...`.
    pub dual_dims: Option<Vec<usize>>,
    /// `dim F_n Ã` for `n = 0, 1, ...`.
    pub pbw_dims: Option<Vec<usize>>,
    /// `(m, verdict)` for the dual ring.
    pub frobenius: Option<(usize, bool)>,
    /// Whether the augmentation search succeeds.
    pub augmented: Option<bool>,
    /// `false` marks an intentionally failing fixture.
    pub self_consistent: bool,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub presentation: CorpusPresentation,
    pub expected: Expected,
    /// Where the expected values come from.
    pub provenance: &'static str,
}

fn quad(name: &'static str, q: QuadraticPresentation, expected: Expected, provenance: &'static str) -> CorpusEntry {
    CorpusEntry {
        name,
        presentation: CorpusPresentation::Quadratic(q),
        expected: Expected {
            self_consistent: true,
            ..expected
        },
        provenance,
    }
}

fn nonhomog(name: &'static str, p: NonhomogPresentation, expected: Expected, provenance: &'static str) -> CorpusEntry {
    CorpusEntry {
        name,
        presentation: CorpusPresentation::Nonhomogeneous(p),
        expected,
        provenance,
    }
}

/// The entry as a `.kz` document, with its name and provenance as metadata.
pub fn document(e: &CorpusEntry) -> crate::io::Document {
    let doc = match &e.presentation {
        CorpusPresentation::Quadratic(q) => crate::io::Document::from_quadratic(q),
        CorpusPresentation::Nonhomogeneous(p) => crate::io::Document::from_nonhomog(p),
    };
    doc.with_metadata("name", e.name.into())
        .with_metadata("provenance", e.provenance.into())
}

/// The full example corpus with expected verdicts.
pub fn entries() -> Vec<CorpusEntry> {
    let q = Field::Rationals;
    let f2 = Field::Prime(2);
    let ok = |koszul_degree| Expected {
        koszul: Some(true),
        koszul_degree,
        self_consistent: true,
        ..Expected::default()
    };
    vec![
        quad(
            "sym2",
            symmetric(q, 2),
            Expected { dual_dims: Some(vec![1, 2, 1, 0, 0]), frobenius: Some((2, true)), ..ok(6) },
            "dual is the exterior ring: binomial dimensions",
        ),
        quad(
            "sym3",
            symmetric(q, 3),
            Expected { dual_dims: Some(vec![1, 3, 3, 1, 0]), frobenius: Some((3, true)), ..ok(6) },
            "dual is the exterior ring: binomial dimensions",
        ),
        quad(
            "ext3_f2",
            exterior(f2, 3),
            Expected { dual_dims: Some(vec![1, 3, 6, 10, 15]), ..ok(5) },
            "v⊗v relations in characteristic 2; dual is the symmetric ring",
        ),
        quad(
            "tensor2",
            tensor_ring(q, 2),
            Expected { dual_dims: Some(vec![1, 2, 0, 0, 0]), frobenius: Some((1, false)), ..ok(5) },
            "no relations: dual has B^n = 0 for n ≥ 2; the truncation is not Frobenius",
        ),
        quad(
            "non_koszul",
            non_koszul_example(q),
            Expected { koszul: Some(false), ..ok(4) },
            "nondiagonal Tor in degree 4 found by direct bar computation",
        ),
        quad(
            "quiver",
            quiver_relations(q),
            Expected { dual_dims: Some(vec![2, 4, 2, 0, 0]), ..ok(5) },
            "both Koszul checkers agree",
        ),
        quad(
            "quiver_non_koszul",
            quiver_non_koszul(q),
            Expected { koszul: Some(false), ..ok(5) },
            "both Koszul checkers first fail in degree 4",
        ),
        quad(
            "path2",
            path_algebra(q),
            Expected { dual_dims: Some(vec![2, 2, 0, 0, 0]), ..ok(5) },
            "path algebra with no relations: dual vanishes from degree 2",
        ),
        nonhomog(
            "weyl1",
            weyl1(q),
            Expected {
                dual_dims: Some(vec![1, 2, 1, 0]),
                pbw_dims: Some(vec![1, 3, 6, 10, 15, 21, 28]),
                augmented: Some(false),
                ..ok(4)
            },
            "normal forms x^a ∂^b",
        ),
        nonhomog(
            "heisenberg2",
            heisenberg(q, 2),
            Expected {
                dual_dims: Some(vec![1, 4, 6, 4, 1]),
                pbw_dims: Some(vec![1, 5, 15, 35]),
                augmented: Some(false),
                ..ok(4)
            },
            "monomials in four variables",
        ),
        nonhomog(
            "sl2",
            sl2(q),
            Expected {
                dual_dims: Some(vec![1, 3, 3, 1, 0]),
                pbw_dims: Some(vec![1, 4, 10, 20, 35, 56]),
                augmented: Some(true),
                frobenius: Some((3, true)),
                ..ok(4)
            },
            "ordered monomials in e, f, h",
        ),
        nonhomog(
            "nonabelian2",
            nonabelian2(q),
            Expected {
                dual_dims: Some(vec![1, 2, 1, 0]),
                pbw_dims: Some(vec![1, 3, 6, 10, 15]),
                augmented: Some(true),
                frobenius: Some((2, true)),
                ..ok(4)
            },
            "ordered monomials in x, y",
        ),
        nonhomog(
            "twisted_sl2",
            twisted_sl2(q),
            Expected { pbw_dims: Some(vec![1, 4, 10, 20]), augmented: Some(true), ..ok(4) },
            "coboundary twist is removed by a change of connection",
        ),
        nonhomog(
            "clifford2",
            clifford(q, &[vec![1, 0], vec![0, 1]]).unwrap(),
            Expected {
                dual_dims: Some(vec![1, 2, 3, 4]),
                pbw_dims: Some(vec![1, 3, 4, 4, 4]),
                augmented: Some(false),
                ..ok(4)
            },
            "Clifford ring of rank 2 has dimension 4",
        ),
        nonhomog(
            "clifford1",
            clifford(q, &[vec![1]]).unwrap(),
            Expected {
                dual_dims: Some(vec![1, 1, 1, 1]),
                pbw_dims: Some(vec![1, 2, 2, 2]),
                augmented: Some(false),
                ..ok(4)
            },
            "Clifford ring of rank 1 has dimension 2",
        ),
        nonhomog(
            "fat_point",
            fat_point(),
            Expected {
                dual_dims: Some(vec![2, 2, 0, 0]),
                pbw_dims: Some(vec![2, 4, 6, 8]),
                augmented: Some(true),
                ..ok(4)
            },
            "normal forms ε^a ∂^b over F_2",
        ),
        nonhomog(
            "matrix_weyl",
            matrix_weyl(q),
            Expected {
                dual_dims: Some(vec![4, 8, 4, 0]),
                pbw_dims: Some(vec![4, 12, 24, 40]),
                augmented: Some(false),
                ..ok(3)
            },
            "2 × 2 matrices over the Weyl ring",
        ),
        nonhomog(
            "fake_jacobi",
            fake_jacobi(q),
            Expected { self_consistent: false, ..Expected::default() },
            "bracket violates Jacobi: intentional failure",
        ),
        nonhomog(
            "non_closed_twist",
            non_closed_twist(q),
            Expected { self_consistent: false, ..Expected::default() },
            "twist is not closed: intentional failure",
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::frobenius_check;
    use crate::nonhomog::{build_augmented_dg, build_cdg_dual, is_self_consistent};
    use crate::pbw::pbw_reconstruct;
    use crate::quadratic::{build_quadratic_slice, check_koszul_distributive, check_koszul_tor, quadratic_dual};

    const Q: Field = Field::Rationals;

    #[test]
    fn expected_verdicts_are_rederived() {
        for e in entries() {
            let x = &e.expected;
            if let CorpusPresentation::Nonhomogeneous(p) = &e.presentation {
                assert_eq!(is_self_consistent(p), x.self_consistent, "{}", e.name);
            }
            if !x.self_consistent {
                continue;
            }
            let q = e.presentation.quadratic();
            if let Some(k) = x.koszul {
                let dist = check_koszul_distributive(q, x.koszul_degree).unwrap();
                let tor = check_koszul_tor(q, x.koszul_degree).unwrap();
                assert_eq!(dist.koszul, k, "{}", e.name);
                assert_eq!(tor.koszul, k, "{}", e.name);
            }
            let dual = quadratic_dual(q).unwrap();
            if let Some(dims) = &x.dual_dims {
                let b = build_quadratic_slice(&dual, dims.len() - 1).unwrap();
                assert_eq!(&b.dims(), dims, "{}", e.name);
            }
            if let Some((m, verdict)) = x.frobenius {
                let b = build_quadratic_slice(&dual, m + 1).unwrap();
                assert_eq!(frobenius_check(&b, m).unwrap().holds(), verdict, "{}", e.name);
            }
            if let CorpusPresentation::Nonhomogeneous(p) = &e.presentation {
                if let Some(dims) = &x.pbw_dims {
                    let top = dims.len() - 1;
                    let b = build_cdg_dual(p, top.max(2)).unwrap();
                    let pbw = pbw_reconstruct(&b, top).unwrap();
                    assert_eq!(&pbw.filtered.dims(), dims, "{}", e.name);
                    assert!(pbw.report.ok(), "{}", e.name);
                }
                if let Some(a) = x.augmented {
                    assert_eq!(build_augmented_dg(p, 3).unwrap().found(), a, "{}", e.name);
                }
            }
        }
    }

    #[test]
    fn constructors_validate_their_input() {
        let m2 = BaseAlgebra::matrix_algebra(Q, 2);
        assert!(matches!(make_symmetric(&Bimodule::regular(&m2)), Err(Error::Precondition(_))));
        let empty = make_symmetric(&free(Q, 0)).unwrap();
        assert_eq!(build_quadratic_slice(&empty, 3).unwrap().dims(), vec![1, 0, 0, 0]);
        assert_eq!(build_quadratic_slice(&make_exterior(&free(Q, 0)).unwrap(), 2).unwrap().dims(), vec![1, 0, 0]);
        let mut fake = sl2_data(Q);
        fake.set_bracket(1, 2, &[(1, 0)]);
        assert!(make_enveloping(&fake).is_err());
        assert!(make_enveloping(&sl2_data(Q)).is_ok());
        let mut d = LieData::over_field(Q, 3);
        d.set_bracket(0, 1, &[(1, 1)]);
        let mut omega = vec![vec![vec![Q.zero()]; 3]; 3];
        omega[1][2] = vec![Q.one()];
        omega[2][1] = vec![Q.int(-1)];
        assert!(make_twisted(&d, omega).is_err());
        assert!(make_heisenberg_weyl(&Matrix::from_ints(Q, &[&[0, 1], &[1, 0]])).is_err());
        assert!(make_quiver(Q, 2, &[(0, 2)], &[]).is_err());
    }

    #[test]
    fn heisenberg_weyl_from_forms() {
        let w = make_heisenberg_weyl(&Matrix::from_ints(Q, &[&[0, -1], &[1, 0]])).unwrap();
        assert_eq!(w, weyl1(Q));
        let zero = make_heisenberg_weyl(&Matrix::zeros(Q, 2, 2)).unwrap();
        assert_eq!(zero.quadratic(), &symmetric(Q, 2));
        assert!(zero.h_values().iter().all(|h| vecops::is_zero(h)));
        let cl = make_clifford(&Matrix::zeros(Q, 2, 2)).unwrap();
        assert_eq!(cl.quadratic(), &exterior(Q, 2));
    }

    #[test]
    fn fat_point_algebroid_validates() {
        let f = Field::Prime(2);
        let r = BaseAlgebra::dual_numbers(f);
        let mut anchor = Matrix::zeros(f, 2, 2);
        anchor.set(0, 1, f.one());
        let p = make_algebroid(&r, vec![anchor.clone()], vec![vec![vec![f.zero()]]]).unwrap();
        assert_eq!(p, fat_point());
        let g = BaseAlgebra::dual_numbers(Q);
        let mut a = Matrix::zeros(Q, 2, 2);
        a.set(0, 1, Q.one());
        assert!(make_algebroid(&g, vec![a], vec![vec![vec![Q.zero()]]]).is_err());
    }
}
