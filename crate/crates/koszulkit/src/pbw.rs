//! Reconstruction of the filtered ring from a Koszul CDG-ring through the
//! homogenized ring `Â` with its central element `t`, and the translation
//! between central elements and odd derivations of degree `-1`.

use crate::bimodule::{double_dual_eval, double_dual_eval_right, left_dual, right_dual, DualModule};
use crate::cdg::{quasi_differential_ring, CdgRingSlice, QuasiDiffSlice};
use crate::checks::{all_hold, Check, Checker};
use crate::error::{Error, Result};
use crate::graded::GradedSlice;
use crate::linalg::{vecops, Field, Matrix, Scalar, Subspace, Vector};
use crate::nonhomog::{build_cdg_dual, NonhomogPresentation};
use crate::quadratic::{
    build_quadratic_slice, build_quadratic_slice_with_words, check_koszul_distributive, quadratic_dual, quadratic_part,
    KoszulVerdict, QuadraticPresentation,
};
use crate::bimodule::Side;

/// `F_n Ã = Â_n` for `n ≤ N`, with `F_{n-1} → F_n` given by multiplication by `t`.
#[derive(Clone, Debug)]
pub struct FilteredRingSlice {
    pub hat: GradedSlice,
    /// `t ∈ Â_1`.
    pub t: Vector,
}

impl FilteredRingSlice {
    pub fn field(&self) -> Field {
        self.hat.field()
    }

    pub fn top(&self) -> usize {
        self.hat.top()
    }

    /// `dim F_n`.
    pub fn dim(&self, n: usize) -> usize {
        self.hat.dim(n)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.hat.dims()
    }

    /// The inclusion `F_n → F_{n+1}`.
    pub fn raise(&self, n: usize, x: &[Scalar]) -> Vector {
        self.hat.mul(1, n, &self.t, x)
    }

    /// Matrix of `F_n → F_{n+1}`.
    pub fn raise_matrix(&self, n: usize) -> Matrix {
        let f = self.field();
        let cols: Vec<Vector> = (0..self.dim(n)).map(|x| self.raise(n, &vecops::unit(f, self.dim(n), x))).collect();
        Matrix::from_cols(f, self.dim(n + 1), &cols)
    }

    /// `F_i × F_j → F_{i+j}`.
    pub fn mul(&self, i: usize, j: usize, a: &[Scalar], b: &[Scalar]) -> Vector {
        self.hat.mul(i, j, a, b)
    }

    /// `t^n ∈ F_n`, the image of `1 ∈ F_0`.
    pub fn t_power(&self, n: usize) -> Vector {
        let mut x = self.hat.unit();
        for k in 0..n {
            x = self.raise(k, &x);
        }
        x
    }
}

#[derive(Clone, Debug)]
pub struct PbwReport {
    pub degree: usize,
    pub axioms: Vec<Check>,
    pub koszul: KoszulVerdict,
    /// Lowest degree `n` where `t : Â_{n-1} → Â_n` fails to be injective.
    pub zero_divisor_degree: Option<usize>,
    pub dims_filtered: Vec<usize>,
    pub dims_graded: Vec<usize>,
    /// `t` injective, `t` central, the gr comparison and the dimension law.
    pub checks: Vec<Check>,
}

impl PbwReport {
    pub fn ok(&self) -> bool {
        all_hold(&self.axioms) && self.koszul.koszul && self.zero_divisor_degree.is_none() && all_hold(&self.checks)
    }
}

/// Everything built along the way.
#[derive(Clone, Debug)]
pub struct Pbw {
    pub cdg: CdgRingSlice,
    pub quasi: QuasiDiffSlice,
    /// Presentation of `Â` (left side), dual to the quadratic part of `B̂`.
    pub hat_presentation: QuadraticPresentation,
    pub filtered: FilteredRingSlice,
    /// `A`, the quadratic dual of `B`.
    pub graded_presentation: QuadraticPresentation,
    pub graded: GradedSlice,
    /// `ι : A_1 → Â_1`.
    pub iota: Matrix,
    /// `Ψ_n : A_n → Â_n` on word representatives.
    pub psi: Vec<Matrix>,
    pub report: PbwReport,
}

/// Runs every stage and records what holds; never refuses.
pub fn pbw_analyze(b: &CdgRingSlice, top: usize) -> Result<Pbw> {
    let f = b.field();
    let r = b.base().clone();
    let dr = r.dim();
    let axioms = b.check_axioms();
    let bq = quadratic_part(b.slice())?.with_side(Side::Right);
    let koszul = check_koszul_distributive(&bq, top)?;
    let quasi = quasi_differential_ring(&b.truncate(2)?)?;
    let bhat_q = quadratic_part(&quasi.hat)?.with_side(Side::Right);
    let hat_presentation = quadratic_dual(&bhat_q)?;
    let hat = build_quadratic_slice(&hat_presentation, top)?;
    let graded_presentation = quadratic_dual(&bq)?;
    let gs = build_quadratic_slice_with_words(&graded_presentation, top)?;
    let graded = gs.slice;

    let b1 = b.dim(1);
    let hat_dual = right_dual(quasi.hat.component(1))?;
    let a_dual = right_dual(b.slice().component(1))?;
    let to_hat = |m: &Matrix| -> Result<Vector> {
        hat_dual
            .coords(m)
            .ok_or_else(|| Error::Internal("functional outside Hom(B̂^1, R)".into()))
    };
    let mut tm = Matrix::zeros(f, dr, b1 + dr);
    for i in 0..dr {
        tm.set(i, b1 + i, -f.one());
    }
    let t = to_hat(&tm)?;
    let mut pi = Matrix::zeros(f, b1, b1 + dr);
    for x in 0..b1 {
        pi.set(x, x, f.one());
    }
    let d0 = b.d(0);
    for x in 0..b1 {
        for c in 0..dr {
            pi.set(x, b1 + c, -d0.get(x, c).clone());
        }
    }
    let iota_cols = (0..a_dual.dim())
        .map(|k| to_hat(&a_dual.functional(k).mul(&pi)))
        .collect::<Result<Vec<_>>>()?;
    let iota = Matrix::from_cols(f, hat.dim(1), &iota_cols);
    let filtered = FilteredRingSlice { hat, t };
    let hat = &filtered.hat;

    let mut inj = Checker::new("t injective");
    let mut zero_divisor_degree = None;
    let raise: Vec<Matrix> = (0..top).map(|n| filtered.raise_matrix(n)).collect();
    for n in 1..=top {
        if raise[n - 1].rank() != hat.dim(n - 1) {
            let k = raise[n - 1].kernel().basis()[0].clone();
            inj.record(&k, filtered.raise(n - 1, &k), || format!("t kills an element of Â_{}", n - 1));
            zero_divisor_degree.get_or_insert(n);
        }
    }
    let mut central = Checker::new("t central");
    for n in 0..top {
        for x in 0..hat.dim(n) {
            let e = vecops::unit(f, hat.dim(n), x);
            let lhs = hat.mul(1, n, &filtered.t, &e);
            let rhs = hat.mul(n, 1, &e, &filtered.t);
            central.expect_eq(&lhs, &rhs, &e, || format!("t x ≠ x t for basis {x} of Â_{n}"));
        }
    }

    let mut psi = vec![Matrix::identity(f, dr)];
    if top >= 1 {
        psi.push(iota.clone());
    }
    for n in 2..=top {
        let cols: Vec<Vector> = gs.words[n]
            .iter()
            .map(|&(x, y)| {
                let px = psi[n - 1].col(x);
                hat.mul(n - 1, 1, &px, &iota.col(y))
            })
            .collect();
        psi.push(Matrix::from_cols(f, hat.dim(n), &cols));
    }
    let mut mult = Checker::new("gr multiplicative");
    let mut bimod = Checker::new("gr bimodule map");
    let mut bij = Checker::new("gr bijective");
    for n in 1..=top {
        let low = raise[n - 1].image();
        let stacked = psi[n].hstack(&raise[n - 1]);
        if stacked.rank() != hat.dim(n) || graded.dim(n) + hat.dim(n - 1) != hat.dim(n) {
            bij.record(&Vec::new(), Vec::new(), || {
                format!("A_{n} → Â_{n}/tÂ_{} is not bijective", n - 1)
            });
        }
        for c in 0..graded.dim(n) {
            let e = vecops::unit(f, graded.dim(n), c);
            let pc = psi[n].apply(&e);
            for s in 0..dr {
                let rs = vecops::unit(f, dr, s);
                let l = vecops::sub(&psi[n].apply(&graded.mul(0, n, &rs, &e)), &hat.mul(0, n, &rs, &pc));
                if !low.contains(&l) {
                    bimod.record(&e, l, || format!("left action of e{s} on A_{n}"));
                }
                let rr = vecops::sub(&psi[n].apply(&graded.mul(n, 0, &e, &rs)), &hat.mul(n, 0, &pc, &rs));
                if !low.contains(&rr) {
                    bimod.record(&e, rr, || format!("right action of e{s} on A_{n}"));
                }
            }
        }
        if n >= 2 {
            for a in 0..graded.dim(n - 1) {
                let ea = vecops::unit(f, graded.dim(n - 1), a);
                let pa = psi[n - 1].apply(&ea);
                for v in 0..graded.dim(1) {
                    let ev = vecops::unit(f, graded.dim(1), v);
                    let lhs = psi[n].apply(&graded.mul(n - 1, 1, &ea, &ev));
                    let rhs = hat.mul(n - 1, 1, &pa, &iota.col(v));
                    let diff = vecops::sub(&lhs, &rhs);
                    if !low.contains(&diff) {
                        mult.record(&ea, diff, || format!("Ψ(a v) ≢ Ψ(a) ι(v) mod t for a = e{a} ∈ A_{}, v = e{v}", n - 1));
                    }
                }
            }
        }
    }
    let dims_filtered = hat.dims();
    let dims_graded = graded.dims();
    let mut law = Checker::new("dimension law");
    let mut acc = 0;
    for n in 0..=top {
        acc += dims_graded[n];
        if dims_filtered[n] != acc {
            law.record(&Vec::new(), Vec::new(), || format!("dim F_{n} = {} but Σ dim A_j = {acc}", dims_filtered[n]));
        }
    }
    let report = PbwReport {
        degree: top,
        axioms,
        koszul,
        zero_divisor_degree,
        dims_filtered,
        dims_graded,
        checks: vec![
            inj.finish(),
            central.finish(),
            mult.finish(),
            bimod.finish(),
            bij.finish(),
            law.finish(),
        ],
    };
    Ok(Pbw {
        cdg: b.clone(),
        quasi,
        hat_presentation,
        filtered,
        graded_presentation,
        graded,
        iota,
        psi,
        report,
    })
}

/// The filtered ring of a Koszul CDG-ring through degree `N`. Refuses CDG
/// axiom failures, non-Koszulity within the budget and zero divisors `t`.
pub fn pbw_reconstruct(b: &CdgRingSlice, top: usize) -> Result<Pbw> {
    if let Some(c) = b.check_axioms().iter().find(|c| !c.holds) {
        return Err(Error::Precondition(format!("CDG axiom fails: {}", c.name)));
    }
    let pbw = pbw_analyze(b, top)?;
    let rep = &pbw.report;
    if !rep.koszul.koszul {
        let (n, k) = rep.koszul.first_failure.unwrap_or((top, 0));
        return Err(Error::Precondition(format!(
            "B is not Koszul within degree {top}: distributivity fails in degree {n} at position {k}"
        )));
    }
    if let Some(n) = rep.zero_divisor_degree {
        return Err(Error::Invalid(format!("t is a zero divisor: multiplication Â_{} → Â_{n} is not injective", n - 1)));
    }
    Ok(pbw)
}

/// Round trip `P → (B, d, h) → Ã` and the `(q, p, h)` read back from `F_2 Ã`.
#[derive(Clone, Debug)]
pub struct RoundTripReport {
    pub pbw: PbwReport,
    /// `κ(v) r - κ(vr) = q(v,r) t`, `Σ κ(î₁)κ(î₂) = κ(p)t - h t²`, recovery, gr dims.
    pub checks: Vec<Check>,
    pub recovered: Option<NonhomogPresentation>,
}

impl RoundTripReport {
    pub fn ok(&self) -> bool {
        self.pbw.ok() && all_hold(&self.checks)
    }
}

/// `κ : V → Â_1`, the double-dual evaluation followed by `ι`.
pub fn kappa(p: &NonhomogPresentation, pbw: &Pbw) -> Result<Matrix> {
    let (_, _, ev) = double_dual_eval(p.generators())?;
    if ev.matrix.rows() != pbw.iota.cols() {
        return Err(Error::AlgebraMismatch("generators do not match the reconstructed ring".into()));
    }
    Ok(pbw.iota.mul(&ev.matrix))
}

pub fn roundtrip_duality(p: &NonhomogPresentation, top: usize) -> Result<RoundTripReport> {
    let top = top.max(2);
    let f = p.field();
    let b = build_cdg_dual(p, 3)?;
    let pbw = pbw_reconstruct(&b, top)?;
    let k = kappa(p, &pbw)?;
    let fr = &pbw.filtered;
    let r = p.base();
    let v = p.generators();
    let (dv, dr) = (v.dim(), r.dim());
    let t = fr.t.clone();
    let t2 = fr.t_power(2);
    let rt: Vec<Vector> = (0..dr).map(|s| fr.mul(0, 1, &vecops::unit(f, dr, s), &t)).collect();
    let rt_mat = Matrix::from_cols(f, fr.dim(1), &rt);

    let mut qc = Checker::new("κ(v)r - κ(vr) = q(v,r)t");
    let mut qcols = Vec::with_capacity(dv * dr);
    for a in 0..dv {
        let e = vecops::unit(f, dv, a);
        for s in 0..dr {
            let rs = vecops::unit(f, dr, s);
            let lhs = vecops::sub(&fr.mul(1, 0, &k.apply(&e), &rs), &k.apply(&v.act_right(&e, &rs)));
            let expected = fr.mul(0, 1, &p.q_value(&e, &rs), &t);
            qc.expect_eq(&lhs, &expected, &e, || format!("v = e{a}, r = e{s}"));
            qcols.push(rt_mat.solve(&lhs).unwrap_or_else(|| vecops::zero(f, dr)));
        }
    }
    let q_rec = Matrix::from_cols(f, dr, &qcols);

    // Columns κ(e_a) t, then e_s t².
    let mut sys_cols: Vec<Vector> = (0..dv).map(|a| fr.mul(1, 1, &k.col(a), &t)).collect();
    sys_cols.extend((0..dr).map(|s| fr.mul(0, 2, &vecops::unit(f, dr, s), &t2)));
    let sys = Matrix::from_cols(f, fr.dim(2), &sys_cols);
    let kk = |w: &[Scalar]| -> Vector {
        let mut out = vecops::zero(f, fr.dim(2));
        for a in 0..dv {
            for c in 0..dv {
                let x = &w[a * dv + c];
                if !x.is_zero() {
                    vecops::axpy(&mut out, x, &fr.mul(1, 1, &k.col(a), &k.col(c)));
                }
            }
        }
        out
    };
    let mut rel = Checker::new("κ(î₁)κ(î₂) = κ(p)t - h t²");
    let mut p_rec = Vec::new();
    let mut h_rec = Vec::new();
    for ((w, pw), hw) in p.lifts().iter().zip(p.p_values()).zip(p.h_values()) {
        let lhs = kk(w);
        let mut expected = fr.mul(1, 1, &k.apply(pw), &t);
        vecops::axpy(&mut expected, &-f.one(), &fr.mul(0, 2, hw, &t2));
        rel.expect_eq(&lhs, &expected, w, || "lift of a relation".into());
        match sys.solve(&lhs) {
            Some(sol) => {
                p_rec.push(sol[..dv].to_vec());
                h_rec.push(vecops::neg(&sol[dv..]));
            }
            None => {
                p_rec.push(vecops::zero(f, dv));
                h_rec.push(vecops::zero(f, dr));
            }
        }
    }
    let recovered = NonhomogPresentation::new(p.quadratic().clone(), q_rec, p.lifts().to_vec(), p_rec, h_rec).ok();
    let mut same = Checker::new("recovered (q, p, h) equals input");
    if recovered.as_ref() != Some(p) {
        same.record(&Vec::new(), Vec::new(), || "read-back data differs".into());
    }
    let mut gr = Checker::new("gr matches the quadratic part");
    let direct = build_quadratic_slice(p.quadratic(), top)?;
    if direct.dims() != pbw.report.dims_graded {
        gr.record(&Vec::new(), Vec::new(), || {
            format!("dims {:?} vs {:?}", direct.dims(), pbw.report.dims_graded)
        });
    }
    Ok(RoundTripReport {
        pbw: pbw.report.clone(),
        checks: vec![qc.finish(), rel.finish(), same.finish(), gr.finish()],
        recovered,
    })
}

/// The odd derivation `∂` of `B̂ = Â^!` with `∂₁(b) = -⟨t, b⟩`.
#[derive(Clone, Debug)]
pub struct DerivationReport {
    /// `∂₁ : B̂^1 → R` as a `dim R × dim B̂^1` matrix.
    pub del1: Matrix,
    /// `∂₂ : B̂^2 → B̂^1` when `∂₁` extends.
    pub del2: Option<Matrix>,
    pub dual: QuadraticPresentation,
    /// Bimodule property, extension over the relations, and direct centrality of `t`.
    pub checks: Vec<Check>,
}

impl DerivationReport {
    pub fn extends(&self) -> bool {
        self.checks[0].holds && self.checks[1].holds
    }
}

fn t_commutes(ahat: &GradedSlice, t: &[Scalar]) -> Check {
    let f = ahat.field();
    let mut c = Checker::new("t central in Â");
    for n in 0..=1.min(ahat.top().saturating_sub(1)) {
        for x in 0..ahat.dim(n) {
            let e = vecops::unit(f, ahat.dim(n), x);
            c.expect_eq(&ahat.mul(1, n, t, &e), &ahat.mul(n, 1, &e, t), &e, || format!("basis {x} of Â_{n}"));
        }
    }
    c.finish()
}

pub fn derivation_from_central_element(ahat: &QuadraticPresentation, t: &[Scalar]) -> Result<DerivationReport> {
    if ahat.side() != Side::Left {
        return Err(Error::Precondition("expected a left-sided presentation of Â".into()));
    }
    let f = ahat.field();
    let a1 = ahat.generators();
    if t.len() != a1.dim() {
        return Err(Error::Dimension("t must lie in degree 1".into()));
    }
    let r = ahat.base();
    let dual = quadratic_dual(ahat)?;
    let bd: DualModule = left_dual(a1)?;
    let m = bd.module.clone();
    let db = m.dim();
    let del_cols: Vec<Vector> = (0..db).map(|b| vecops::neg(&bd.functional(b).apply(t))).collect();
    let del1 = Matrix::from_cols(f, r.dim(), &del_cols);
    let mut bimod = Checker::new("∂₁ is a bimodule map");
    for b in 0..db {
        let e = vecops::unit(f, db, b);
        for s in 0..r.dim() {
            let rs = vecops::unit(f, r.dim(), s);
            bimod.expect_eq(&del1.apply(&m.act_left(&rs, &e)), &r.mul(&rs, &del1.apply(&e)), &e, || format!("left e{s}"));
            bimod.expect_eq(&del1.apply(&m.act_right(&e, &rs)), &r.mul(&del1.apply(&e), &rs), &e, || format!("right e{s}"));
        }
    }
    let tilde = |w: &[Scalar]| -> Vector {
        let mut out = vecops::zero(f, db);
        for x in 0..db {
            for y in 0..db {
                let c = &w[x * db + y];
                if c.is_zero() {
                    continue;
                }
                let (ex, ey) = (vecops::unit(f, db, x), vecops::unit(f, db, y));
                vecops::axpy(&mut out, c, &m.act_left(&del1.apply(&ex), &ey));
                vecops::axpy(&mut out, &-c, &m.act_right(&ex, &del1.apply(&ey)));
            }
        }
        out
    };
    let mut ext = Checker::new("∂ extends over the relations");
    for rel in dual.relations().basis() {
        let w = dual.square().lift(rel);
        let img = tilde(&w);
        if !vecops::is_zero(&img) {
            ext.record(&w, img, || "∂₁(b₁)b₂ - b₁∂₁(b₂) is nonzero on a relation".into());
        }
    }
    let hat_slice = build_quadratic_slice(ahat, 2)?;
    let central = t_commutes(&hat_slice, t);
    let extends = !bimod.failed() && !ext.failed();
    let del2 = if extends {
        let qs = build_quadratic_slice_with_words(&dual, 2)?;
        let cols: Vec<Vector> = qs.words[2]
            .iter()
            .map(|&(x, y)| tilde(&vecops::unit(f, db * db, x * db + y)))
            .collect();
        Some(Matrix::from_cols(f, db, &cols))
    } else {
        None
    };
    Ok(DerivationReport {
        del1,
        del2,
        dual,
        checks: vec![bimod.finish(), ext.finish(), central],
    })
}

/// The inverse translation: the `t ∈ Â_1` with `⟨t, b⟩ = -∂₁(b)`.
pub fn central_element_from_derivation(ahat: &QuadraticPresentation, del1: &Matrix) -> Result<Vector> {
    let f = ahat.field();
    let a1 = ahat.generators();
    let (d, dd, ev) = double_dual_eval(a1)?;
    del1.check_shape(ahat.base().dim(), d.dim())?;
    let c = dd
        .coords(&del1.scale(&-f.one()))
        .ok_or_else(|| Error::Precondition("∂₁ is not right R-linear".into()))?;
    ev.matrix
        .solve(&c)
        .ok_or_else(|| Error::Precondition("Â_1 is not reflexive; no element realizes ∂₁".into()))
}

/// `B̂^1 → (B̂^1)^{∨∨}`, used to compare `∂` with `∂/∂δ`.
pub fn bhat_reflexive(q: &QuasiDiffSlice) -> Result<Matrix> {
    Ok(double_dual_eval_right(q.hat.component(1))?.2.matrix)
}

/// `t F_{n-1} ⊂ F_n`.
pub fn lower_filtration(fr: &FilteredRingSlice, n: usize) -> Subspace {
    if n == 0 {
        return Subspace::zero(fr.field(), fr.dim(0));
    }
    fr.raise_matrix(n - 1).image()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{BaseAlgebra, Bimodule};
    use crate::checks::first_failure;
    use crate::corpus;
    use crate::nonhomog::build_cdg_dual_unchecked;

    const Q: Field = Field::Rationals;

    /// Rees ring of `P` presented directly: generators `W = Rt ⊕ V` with
    /// `(s, v) r = (sr + q(v,r), vr)`, relations `tw - wt` and `î - p⊗t + h t⊗t`.
    fn rees_oracle(p: &NonhomogPresentation, top: usize) -> Vec<usize> {
        let f = p.field();
        let r = p.base();
        let v = p.generators();
        let (dr, dv) = (r.dim(), v.dim());
        let dw = dr + dv;
        let mut lact = Vec::new();
        let mut ract = Vec::new();
        for i in 0..dr {
            let mut l = Matrix::zeros(f, dw, dw);
            let mut rt = Matrix::zeros(f, dw, dw);
            for a in 0..dr {
                for b in 0..dr {
                    l.set(a, b, r.left_mul(i).get(a, b).clone());
                    rt.set(a, b, r.right_mul(i).get(a, b).clone());
                }
            }
            for a in 0..dv {
                for b in 0..dv {
                    l.set(dr + a, dr + b, v.lact(i).get(a, b).clone());
                    rt.set(dr + a, dr + b, v.ract(i).get(a, b).clone());
                }
                let qv = p.q_value(&vecops::unit(f, dv, a), &vecops::unit(f, dr, i));
                for (s, c) in qv.into_iter().enumerate() {
                    rt.set(s, dr + a, c);
                }
            }
            lact.push(l);
            ract.push(rt);
        }
        let w = Bimodule::new(r.clone(), r.clone(), lact, ract).unwrap();
        let mut t = vecops::zero(f, dw);
        t[..dr].clone_from_slice(r.unit());
        let emb = |x: &[Scalar]| -> Vector {
            let mut out = vecops::zero(f, dw);
            out[dr..].clone_from_slice(x);
            out
        };
        let of_r = |x: &[Scalar]| -> Vector {
            let mut out = vecops::zero(f, dw);
            out[..dr].clone_from_slice(x);
            out
        };
        let mut rels = Vec::new();
        for k in 0..dw {
            let e = vecops::unit(f, dw, k);
            rels.push(vecops::sub(&vecops::kron(f, &t, &e), &vecops::kron(f, &e, &t)));
        }
        for ((wv, pv), hv) in p.lifts().iter().zip(p.p_values()).zip(p.h_values()) {
            let mut rel = vecops::zero(f, dw * dw);
            for a in 0..dv {
                for b in 0..dv {
                    let c = &wv[a * dv + b];
                    if !c.is_zero() {
                        rel[(dr + a) * dw + dr + b] = c.clone();
                    }
                }
            }
            vecops::axpy(&mut rel, &-f.one(), &vecops::kron(f, &emb(pv), &t));
            vecops::axpy(&mut rel, &f.one(), &vecops::kron(f, &of_r(hv), &t));
            rels.push(rel);
        }
        let pres = QuadraticPresentation::from_tensor_relations(w, &rels, Side::Left).unwrap();
        build_quadratic_slice(&pres, top).unwrap().dims()
    }

    fn pbw_of(p: &NonhomogPresentation, top: usize) -> Pbw {
        pbw_reconstruct(&build_cdg_dual(p, 3).unwrap(), top).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn weyl_filtration_dimensions() {
        let pbw = pbw_of(&corpus::weyl1(Q), 6);
        assert!(pbw.report.ok(), "{:?}", first_failure(&pbw.report.checks));
        let expected: Vec<usize> = (0..=6).map(|n| (n + 1) * (n + 2) / 2).collect();
        assert_eq!(pbw.report.dims_filtered, expected);
    }

    #[test]
    fn sl2_filtration_dimensions() {
        let pbw = pbw_of(&corpus::sl2(Q), 5);
        assert!(pbw.report.ok(), "{:?}", first_failure(&pbw.report.checks));
        let expected: Vec<usize> = (0..=5).map(|n| binom(n + 3, 3)).collect();
        assert_eq!(pbw.report.dims_filtered, expected);
    }

    #[test]
    fn fat_point_filtration_dimensions() {
        let pbw = pbw_of(&corpus::fat_point(), 5);
        assert!(pbw.report.ok(), "{:?}", first_failure(&pbw.report.checks));
        let expected: Vec<usize> = (0..=5).map(|n| 2 * (n + 1)).collect();
        assert_eq!(pbw.report.dims_filtered, expected);
    }

    #[test]
    fn rees_oracle_agrees() {
        let cases = vec![
            (corpus::weyl1(Q), 5),
            (corpus::sl2(Q), 4),
            (corpus::nonabelian2(Q), 4),
            (corpus::twisted_sl2(Q), 3),
            (corpus::clifford(Q, &[vec![1, 1], vec![1, 0]]).unwrap(), 4),
            (corpus::fat_point(), 4),
            (corpus::matrix_weyl(Q), 3),
        ];
        for (p, top) in cases {
            let pbw = pbw_of(&p, top);
            assert_eq!(pbw.report.dims_filtered, rees_oracle(&p, top));
        }
    }

    #[test]
    fn round_trip_recovers_the_presentation() {
        for (p, top) in [
            (corpus::weyl1(Q), 3),
            (corpus::heisenberg(Q, 2), 3),
            (corpus::sl2(Q), 3),
            (corpus::twisted_sl2(Q), 3),
            (corpus::clifford(Q, &[vec![2, 1], vec![1, -1]]).unwrap(), 3),
            (corpus::fat_point(), 3),
            (corpus::matrix_weyl(Q), 2),
        ] {
            let rt = roundtrip_duality(&p, top).unwrap();
            assert!(rt.ok(), "{:?} / {:?}", first_failure(&rt.checks), first_failure(&rt.pbw.checks));
            assert_eq!(rt.recovered.as_ref(), Some(&p));
        }
    }

    #[test]
    fn homogeneous_round_trip() {
        let p = NonhomogPresentation::homogeneous(corpus::quiver_relations(Q)).unwrap();
        let rt = roundtrip_duality(&p, 3).unwrap();
        assert!(rt.ok(), "{:?}", first_failure(&rt.checks));
    }

    #[test]
    fn fake_jacobi_is_refused_and_forced_data_shows_a_defect() {
        let p = corpus::fake_jacobi(Q);
        let b = build_cdg_dual_unchecked(&p, 3).unwrap();
        match pbw_reconstruct(&b, 3) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("curvature"), "{msg}"),
            other => panic!("expected refusal, got {:?}", other.map(|x| x.report)),
        }
        let rep = pbw_analyze(&b, 3).unwrap().report;
        assert!(!rep.ok());
    }

    #[test]
    fn central_element_and_derivation_correspond() {
        let pbw = pbw_of(&corpus::weyl1(Q), 3);
        let t = &pbw.filtered.t;
        let der = derivation_from_central_element(&pbw.hat_presentation, t).unwrap();
        assert!(der.extends());
        assert!(der.checks[2].holds);
        let ev = bhat_reflexive(&pbw.quasi).unwrap();
        assert_eq!(der.del1.mul(&ev), pbw.quasi.del[1]);
        let back = central_element_from_derivation(&pbw.hat_presentation, &der.del1).unwrap();
        assert_eq!(&back, t);
        let zero = vecops::zero(Q, t.len());
        let d0 = derivation_from_central_element(&pbw.hat_presentation, &zero).unwrap();
        assert!(d0.del1.is_zero() && d0.extends());
    }

    #[test]
    fn non_central_quiver_element_fails_at_the_relations() {
        let r = BaseAlgebra::product(Q, 2);
        // loops l1 at 0, l2 at 1, arrow a : 0 → 1, no relations
        let v = corpus::quiver_bimodule(&r, &[(0, 0), (1, 1), (0, 1)]);
        let pres = QuadraticPresentation::from_tensor_relations(v, &[], Side::Left).unwrap();
        let t = vec![Q.one(), Q.one(), Q.zero()];
        let der = derivation_from_central_element(&pres, &t).unwrap();
        assert!(der.checks[0].holds);
        assert!(!der.checks[1].holds);
        assert!(!der.checks[2].holds);
        assert!(der.del2.is_none());
    }
}
