//! Quadratic rings over a base algebra: truncated slices, quadratic duality,
//! Koszulity tests and the homogeneous Koszul complexes.

use std::sync::Arc;

use rayon::prelude::*;

use crate::bimodule::{
    hom_space, left_dual, left_pairing, projective_basis_left, right_dual, right_pairing,
    same_algebra, tensor_over, BaseAlgebra, Bimodule, DualModule, Side, TensorChain, TensorPowers,
    TensorProduct, double_dual_eval, double_dual_eval_right, is_projective,
};
use crate::error::{Error, Result};
use crate::graded::{Complex, GradedSlice, MulTable};
use crate::linalg::{vecops, Field, Matrix, Quotient, Scalar, Subspace, Vector};

/// `T_R(V)/(I)` with `I ⊂ V ⊗_R V`. The side records which one-sided
/// projectivity the presentation is meant to satisfy and which dual applies.
#[derive(Clone, Debug)]
pub struct QuadraticPresentation {
    base: Arc<BaseAlgebra>,
    generators: Bimodule,
    relations: Subspace,
    side: Side,
    square: TensorProduct,
}

impl PartialEq for QuadraticPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.generators == other.generators
            && self.relations == other.relations
            && self.side == other.side
    }
}

impl QuadraticPresentation {
    /// `relations` is given in `V ⊗_R V` coordinates.
    pub fn new(generators: Bimodule, relations: Subspace, side: Side) -> Result<QuadraticPresentation> {
        let base = generators.left_algebra().clone();
        if !same_algebra(&base, generators.right_algebra()) {
            return Err(Error::AlgebraMismatch("generators must be an R-R-bimodule".into()));
        }
        let square = tensor_over(&generators, &generators)?;
        if relations.ambient() != square.dim() {
            return Err(Error::Dimension(format!(
                "relations live in a space of dimension {}, but V⊗_R V has dimension {}",
                relations.ambient(),
                square.dim()
            )));
        }
        if !square.module.is_sub_bimodule(&relations) {
            return Err(Error::Invalid("relation subspace is not a subbimodule of V⊗_R V".into()));
        }
        Ok(QuadraticPresentation {
            base,
            generators,
            relations,
            side,
            square,
        })
    }

    /// Relations given as vectors of `V ⊗_k V` (index `a * dim V + b`).
    pub fn from_tensor_relations(generators: Bimodule, rels: &[Vector], side: Side) -> Result<QuadraticPresentation> {
        let square = tensor_over(&generators, &generators)?;
        let d = generators.dim();
        let f = generators.field();
        let mut proj = Vec::with_capacity(rels.len());
        for (i, r) in rels.iter().enumerate() {
            if r.len() != d * d {
                return Err(Error::Dimension(format!("relation {i} has length {}, expected {}", r.len(), d * d)));
            }
            proj.push(square.project(r));
        }
        let rel = Subspace::span(f, square.dim(), proj);
        QuadraticPresentation::new(generators, rel, side)
    }

    pub fn with_side(mut self, side: Side) -> QuadraticPresentation {
        self.side = side;
        self
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn base(&self) -> &Arc<BaseAlgebra> {
        &self.base
    }

    pub fn generators(&self) -> &Bimodule {
        &self.generators
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// `V ⊗_R V` with its projection from `V ⊗_k V`.
    pub fn square(&self) -> &TensorProduct {
        &self.square
    }

    pub fn relations_bimodule(&self) -> Result<Bimodule> {
        self.square.module.sub_bimodule(&self.relations)
    }

    /// `A_2 = (V ⊗_R V)/I`.
    pub fn degree_two(&self) -> Result<(Bimodule, Quotient)> {
        self.square.module.quotient(&self.relations)
    }

    /// Checks that `V` and `A_2` are projective on the presentation's side.
    pub fn check_projectivity(&self) -> Result<()> {
        if !is_projective(&self.generators, self.side) {
            return Err(Error::Precondition(format!(
                "generators are not {} projective",
                side_name(self.side)
            )));
        }
        let (a2, _) = self.degree_two()?;
        if !is_projective(&a2, self.side) {
            return Err(Error::Precondition(format!(
                "degree-two component is not {} projective",
                side_name(self.side)
            )));
        }
        Ok(())
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

/// A slice built from a quadratic presentation. Each basis element of `A_n`
/// (`n ≥ 2`) is the product of a basis element of `A_{n-1}` and a generator;
/// `words[n][c]` records that pair.
#[derive(Clone, Debug)]
pub struct QuadraticSlice {
    pub slice: GradedSlice,
    pub words: Vec<Vec<(usize, usize)>>,
}

/// `A_n = V^{⊗_R n} / Σ_k V^{⊗k-1} ⊗ I ⊗ V^{⊗n-k-1}` for `n ≤ N`.
pub fn build_quadratic_slice(q: &QuadraticPresentation, top: usize) -> Result<GradedSlice> {
    Ok(build_quadratic_slice_with_words(q, top)?.slice)
}

pub fn build_quadratic_slice_with_words(q: &QuadraticPresentation, top: usize) -> Result<QuadraticSlice> {
    let f = q.field();
    let r = q.base().clone();
    let v = q.generators().clone();
    let (rd, dv) = (r.dim(), v.dim());
    let mut comps = vec![Bimodule::regular(&r)];
    if top >= 1 {
        comps.push(v.clone());
    }
    let mut mult: Vec<Vec<Option<MulTable>>> = (0..=top).map(|i| vec![None; top - i + 1]).collect();
    let structure = MulTable {
        out: rd,
        left: rd,
        right: rd,
        cols: (0..rd * rd).map(|x| r.structure()[x / rd][x % rd].clone()).collect(),
    };
    mult[0][0] = Some(structure);
    let mut words: Vec<Vec<(usize, usize)>> = vec![Vec::new(), Vec::new()];
    let actions = |m: &Bimodule| -> (MulTable, MulTable) {
        let d = m.dim();
        let l = MulTable {
            out: d,
            left: rd,
            right: d,
            cols: (0..rd * d).map(|x| m.lact(x / d).col(x % d)).collect(),
        };
        let rt = MulTable {
            out: d,
            left: d,
            right: rd,
            cols: (0..d * rd).map(|x| m.ract(x % rd).col(x / rd)).collect(),
        };
        (l, rt)
    };
    if top >= 1 {
        let (l, rt) = actions(&v);
        mult[0][1] = Some(l);
        mult[1][0] = Some(rt);
    }
    let w_lifts: Vec<Vector> = q.relations().basis().iter().map(|w| q.square().lift(w)).collect();
    for n in 2..=top {
        let prev = comps[n - 1].clone();
        let tp = tensor_over(&prev, &v)?;
        let dp = prev.dim();
        let m_prev = mult[n - 2][1].as_ref().unwrap().clone();
        let mut gens = Vec::new();
        for a in 0..comps[n - 2].dim() {
            let avs: Vec<Vector> = (0..dv).map(|x| m_prev.basis(a, x).clone()).collect();
            for w in &w_lifts {
                let mut t = vecops::zero(f, dp * dv);
                for x in 0..dv {
                    for y in 0..dv {
                        let c = &w[x * dv + y];
                        if c.is_zero() {
                            continue;
                        }
                        for (i, ai) in avs[x].iter().enumerate() {
                            if !ai.is_zero() {
                                t[i * dv + y] = &t[i * dv + y] + &(c * ai);
                            }
                        }
                    }
                }
                gens.push(tp.project(&t));
            }
        }
        let rel = Subspace::span(f, tp.dim(), gens);
        let (an, quo) = tp.module.quotient(&rel)?;
        let cols: Vec<Vector> = (0..dp * dv)
            .map(|x| {
                let mut e = vecops::zero(f, dp * dv);
                e[x] = f.one();
                quo.project(&tp.project(&e))
            })
            .collect();
        mult[n - 1][1] = Some(MulTable {
            out: an.dim(),
            left: dp,
            right: dv,
            cols,
        });
        let w: Vec<(usize, usize)> = (0..an.dim())
            .map(|c| {
                let lifted = tp.lift(&quo.lift(&vecops::unit(f, an.dim(), c)));
                let pos = lifted.iter().position(|x| !x.is_zero()).expect("nonzero lift");
                (pos / dv, pos % dv)
            })
            .collect();
        words.push(w);
        let (l, rt) = actions(&an);
        mult[0][n] = Some(l);
        mult[n][0] = Some(rt);
        comps.push(an);
        // Products into degree n with the right factor of degree ≥ 2.
        for j in 2..n {
            let i = n - j;
            let dn = comps[n].dim();
            let mut cols = Vec::with_capacity(comps[i].dim() * comps[j].dim());
            for a in 0..comps[i].dim() {
                for &(x, y) in &words[j] {
                    let ax = mult[i][j - 1].as_ref().unwrap().basis(a, x).clone();
                    let mut out = vecops::zero(f, dn);
                    let top_mul = mult[n - 1][1].as_ref().unwrap();
                    for (z, c) in ax.iter().enumerate() {
                        if !c.is_zero() {
                            vecops::axpy(&mut out, c, top_mul.basis(z, y));
                        }
                    }
                    cols.push(out);
                }
            }
            mult[i][j] = Some(MulTable {
                out: dn,
                left: comps[i].dim(),
                right: comps[j].dim(),
                cols,
            });
        }
    }
    let mult: Vec<Vec<MulTable>> = mult
        .into_iter()
        .map(|row| row.into_iter().map(|t| t.expect("all products filled")).collect())
        .collect();
    Ok(QuadraticSlice {
        slice: GradedSlice::from_parts(r, comps, mult),
        words,
    })
}

/// `(R, A_1, ker(A_1 ⊗_R A_1 → A_2))`.
pub fn quadratic_part(s: &GradedSlice) -> Result<QuadraticPresentation> {
    if s.top() < 2 {
        return Err(Error::Precondition("quadratic part needs degrees up to 2".into()));
    }
    let v = s.component(1).clone();
    let square = tensor_over(&v, &v)?;
    let m = s.table(1, 1).to_matrix(s.field()).mul(&square.section_matrix());
    QuadraticPresentation::new(v, m.kernel(), Side::Left)
}

/// The quadratic dual: generators `Hom_R(V,R)` (or `Hom_{R^op}(V,R)` for a
/// right-sided presentation) and relations the annihilator of `I`.
pub fn quadratic_dual(q: &QuadraticPresentation) -> Result<QuadraticPresentation> {
    q.check_projectivity()?;
    let v = q.generators();
    let pairing = match q.side() {
        Side::Left => left_pairing(v, v)?,
        Side::Right => right_pairing(v, v)?,
    };
    let f = q.field();
    let rel = q.relations().basis();
    let n_src = pairing.source.dim();
    let rows: Vec<Vector> = if rel.is_empty() {
        Vec::new()
    } else {
        let per: Vec<Vec<Vector>> = pairing
            .functionals
            .iter()
            .map(|fm| rel.iter().map(|w| fm.apply(w)).collect())
            .collect();
        let rdim = per.first().and_then(|p| p.first()).map_or(0, |x| x.len());
        let mut rows = Vec::with_capacity(rel.len() * rdim);
        for w in 0..rel.len() {
            for c in 0..rdim {
                rows.push((0..n_src).map(|b| per[b][w][c].clone()).collect());
            }
        }
        rows
    };
    let ann = if rows.is_empty() {
        Subspace::full(f, n_src)
    } else {
        Matrix::from_rows(f, n_src, &rows).kernel()
    };
    QuadraticPresentation::new(pairing.dual_v.module.clone(), ann, q.side().flip())
}

/// The generator dual used by [`quadratic_dual`].
pub fn generator_dual(q: &QuadraticPresentation) -> Result<DualModule> {
    match q.side() {
        Side::Left => left_dual(q.generators()),
        Side::Right => right_dual(q.generators()),
    }
}

/// Outcome of comparing `Q` with its double dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrip {
    pub evaluation_invertible: bool,
    pub relations_match: bool,
    pub relation_dims: (usize, usize),
}

impl RoundTrip {
    pub fn ok(&self) -> bool {
        self.evaluation_invertible && self.relations_match
    }
}

/// Maps `I` through `ev ⊗ ev` and compares with the relations of the double dual.
pub fn double_dual_round_trip(q: &QuadraticPresentation) -> Result<RoundTrip> {
    let b = quadratic_dual(q)?;
    let c = quadratic_dual(&b)?;
    let (_, _, ev) = match q.side() {
        Side::Left => double_dual_eval(q.generators())?,
        Side::Right => double_dual_eval_right(q.generators())?,
    };
    if ev.target != *c.generators() {
        return Err(Error::Internal("double dual generators differ from evaluation target".into()));
    }
    let e = &ev.matrix;
    let tt = q.square().map_to(c.square(), e, e);
    let image = q.relations().map(&tt);
    Ok(RoundTrip {
        evaluation_invertible: e.is_invertible(),
        relations_match: image == *c.relations(),
        relation_dims: (q.relations().dim(), c.relations().dim()),
    })
}

/// The subspaces `X_k` (`k = 1..n-1`) of `V^{⊗_R n}` spanned by `V^{⊗k-1} ⊗ I ⊗ V^{⊗n-k-1}`.
pub fn relation_lattice(q: &QuadraticPresentation, powers: &TensorPowers, n: usize) -> Vec<Subspace> {
    let f = q.field();
    let ambient = powers.dim(n);
    let one = vec![f.one()];
    let lifts_of = |m: usize| -> Vec<Vector> {
        if m == 0 {
            vec![one.clone()]
        } else {
            (0..powers.dim(m))
                .map(|i| powers.lift(m, &vecops::unit(f, powers.dim(m), i)))
                .collect()
        }
    };
    let rel: Vec<Vector> = q.relations().basis().iter().map(|w| q.square().lift(w)).collect();
    (1..n)
        .map(|k| {
            let left = lifts_of(k - 1);
            let right = lifts_of(n - k - 1);
            let mut gens = Vec::with_capacity(left.len() * rel.len() * right.len());
            for a in &left {
                for w in &rel {
                    let aw = vecops::kron(f, a, w);
                    for b in &right {
                        gens.push(powers.project(n, &vecops::kron(f, &aw, b)));
                    }
                }
            }
            Subspace::span(f, ambient, gens)
        })
        .collect()
}

/// `I^{(n)} = ⋂_k X_k` inside `V^{⊗_R n}`, with its bimodule structure.
pub fn relation_intersections(q: &QuadraticPresentation, n: usize) -> Result<(Subspace, Bimodule)> {
    if n < 2 {
        return Err(Error::Precondition("relation intersections start in degree 2".into()));
    }
    let mut powers = TensorPowers::new(q.generators());
    powers.ensure(n)?;
    let lattice = relation_lattice(q, &powers, n);
    let mut acc = Subspace::full(q.field(), powers.dim(n));
    for x in &lattice {
        acc = acc.intersect(x)?;
    }
    let m = powers.module(n).sub_bimodule(&acc)?;
    Ok((acc, m))
}

/// Verdict of a Koszulity test up to a degree budget.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct KoszulVerdict {
    pub degree: usize,
    pub koszul: bool,
    /// `(n, k)` for distributivity, `(i, j)` for Tor.
    pub first_failure: Option<(usize, usize)>,
}

/// Distributivity of the relation lattices in degrees `4..=N` via the triple criterion.
pub fn check_koszul_distributive(q: &QuadraticPresentation, top: usize) -> Result<KoszulVerdict> {
    q.check_projectivity()?;
    let mut powers = TensorPowers::new(q.generators());
    powers.ensure(top.max(2))?;
    let failures: Vec<Result<Option<(usize, usize)>>> = (4..=top)
        .into_par_iter()
        .map(|n| first_nondistributive(q, &powers, n))
        .collect();
    let mut first = None;
    for r in failures {
        if let Some(x) = r? {
            first = Some(x);
            break;
        }
    }
    Ok(KoszulVerdict {
        degree: top,
        koszul: first.is_none(),
        first_failure: first,
    })
}

fn first_nondistributive(q: &QuadraticPresentation, powers: &TensorPowers, n: usize) -> Result<Option<(usize, usize)>> {
    let x = relation_lattice(q, powers, n);
    let f = q.field();
    let amb = powers.dim(n);
    // prefix[k] = X_1 + ... + X_k, suffix[k] = X_k ∩ ... ∩ X_{n-1} (1-based).
    let mut prefix = vec![Subspace::zero(f, amb)];
    for s in &x {
        let next = prefix.last().unwrap().sum(s)?;
        prefix.push(next);
    }
    let mut suffix = vec![Subspace::full(f, amb); n + 1];
    for k in (1..n).rev() {
        suffix[k] = suffix[k + 1].intersect(&x[k - 1])?;
    }
    for k in 2..=n - 2 {
        if !crate::linalg::is_triple_distributive(&prefix[k - 1], &x[k - 1], &suffix[k + 1])? {
            return Ok(Some((n, k)));
        }
    }
    Ok(None)
}

/// `Tor^A_{i,j}(R,R)` dimensions for `i, j ≤ N` (`table[i][j]`).
pub fn tor_table(s: &GradedSlice, top: usize) -> Result<Vec<Vec<usize>>> {
    let top = top.min(s.top());
    if s.base().dim() == 1 {
        Ok(tor_by_resolution(s, top))
    } else {
        let mut t = vec![vec![0; top + 1]; top + 1];
        let strands: Vec<Result<Vec<usize>>> = (0..=top).into_par_iter().map(|j| bar_strand_homology(s, j)).collect();
        for (j, h) in strands.into_iter().enumerate() {
            for (i, d) in h?.into_iter().enumerate() {
                t[i][j] = d;
            }
        }
        Ok(t)
    }
}

/// Minimal graded free resolution of the augmentation module over `A_0 = k`.
fn tor_by_resolution(s: &GradedSlice, top: usize) -> Vec<Vec<usize>> {
    let f = s.field();
    let dims = s.dims();
    let mut table = vec![vec![0; top + 1]; top + 1];
    table[0][0] = 1;
    // Current free module: generator degrees; syzygies per degree.
    let mut gens: Vec<usize> = vec![0];
    let mut omega: Vec<Subspace> = (0..=top)
        .map(|j| if j == 0 { Subspace::zero(f, 1) } else { Subspace::full(f, dims[j]) })
        .collect();
    for i in 1..=top {
        let layout = |g: &[usize], j: usize| -> Vec<(usize, usize)> {
            // (offset, generator degree) for generators of degree ≤ j.
            let mut off = 0;
            let mut out = Vec::new();
            for &d in g {
                if d <= j {
                    out.push((off, d));
                    off += dims[j - d];
                }
            }
            out
        };
        let free_dim = |g: &[usize], j: usize| -> usize { g.iter().filter(|&&d| d <= j).map(|&d| dims[j - d]).sum() };
        // Right multiplication of an element of degree j by a basis element of A_m.
        let right_mul = |g: &[usize], x: &[Scalar], j: usize, m: usize, a: usize| -> Vector {
            let src = layout(g, j);
            let tgt = layout(g, j + m);
            let mut out = vecops::zero(f, free_dim(g, j + m));
            for ((so, d), (to, _)) in src.iter().zip(&tgt) {
                let block = &x[*so..*so + dims[j - d]];
                let e = vecops::unit(f, dims[m], a);
                let p = s.mul(j - d, m, block, &e);
                for (t, c) in p.into_iter().enumerate() {
                    out[to + t] = c;
                }
            }
            out
        };
        let mut new_gens: Vec<(usize, Vector)> = Vec::new();
        for j in 1..=top {
            let mut dec = Vec::new();
            for l in 1..j {
                for w in omega[l].basis() {
                    for a in 0..dims[j - l] {
                        dec.push(right_mul(&gens, w, l, j - l, a));
                    }
                }
            }
            let mut span = Subspace::span(f, free_dim(&gens, j), dec);
            for w in omega[j].basis() {
                if !span.contains(w) {
                    new_gens.push((j, w.clone()));
                    span = span.sum(&Subspace::span(f, span.ambient(), vec![w.clone()])).unwrap();
                }
            }
            table[i][j] = new_gens.iter().filter(|(d, _)| *d == j).count();
        }
        if new_gens.is_empty() {
            break;
        }
        let g2: Vec<usize> = new_gens.iter().map(|(d, _)| *d).collect();
        // Kernel of the new free module onto the syzygies, degree by degree.
        let mut next = Vec::with_capacity(top + 1);
        for j in 0..=top {
            let src = layout(&g2, j);
            let mut cols = Vec::new();
            for ((_, d), (_, w)) in src.iter().zip(new_gens.iter().filter(|(d, _)| *d <= j)) {
                for a in 0..dims[j - d] {
                    cols.push(right_mul(&gens, w, *d, j - d, a));
                }
            }
            let m = Matrix::from_cols(f, free_dim(&gens, j), &cols);
            next.push(if cols.is_empty() { Subspace::zero(f, 0) } else { m.kernel() });
        }
        gens = g2;
        omega = next;
    }
    table
}

/// Compositions of `j` into `i` positive parts, in lexicographic order.
fn compositions(j: usize, i: usize) -> Vec<Vec<usize>> {
    if i == 0 {
        return if j == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=j.saturating_sub(i - 1) {
        for mut rest in compositions(j - first, i - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The reduced bar complex strand of internal degree `j`:
/// positions `i = j, j-1, ..., 1`, each a direct sum over compositions.
pub struct BarStrand {
    pub degree: usize,
    pub complex: Complex,
    pub spaces: Vec<Bimodule>,
}

pub fn bar_strand(s: &GradedSlice, j: usize) -> Result<BarStrand> {
    let f = s.field();
    if j == 0 {
        let r = Bimodule::regular(s.base());
        return Ok(BarStrand {
            degree: 0,
            complex: Complex::new(f, vec![r.dim()], vec![])?,
            spaces: vec![r],
        });
    }
    // chains[i] = list of (composition, chain, offset) for homological degree i.
    let mut layers: Vec<Vec<(Vec<usize>, TensorChain, usize)>> = vec![Vec::new(); j + 1];
    let mut layer_dims = vec![0; j + 1];
    for (i, layer) in layers.iter_mut().enumerate().skip(1) {
        let mut off = 0;
        for c in compositions(j, i) {
            let factors: Vec<Bimodule> = c.iter().map(|&d| s.component(d).clone()).collect();
            let chain = TensorChain::from_factors(&factors)?;
            let d = chain.dim(i);
            layer.push((c, chain, off));
            off += d;
        }
        layer_dims[i] = off;
    }
    let mut spaces = Vec::with_capacity(j);
    for i in (1..=j).rev() {
        let mut m: Option<Bimodule> = None;
        for (_, chain, _) in &layers[i] {
            let part = chain.module(i);
            m = Some(match m {
                None => part,
                Some(acc) => acc.direct_sum(&part)?,
            });
        }
        spaces.push(m.unwrap_or_else(|| Bimodule::zero(s.base(), s.base())));
    }
    let mut maps = Vec::with_capacity(j - 1);
    for i in (2..=j).rev() {
        let mut cols = Vec::with_capacity(layer_dims[i]);
        for (c, chain, _) in &layers[i] {
            for idx in 0..chain.dim(i) {
                let word = chain.basis_word(i, idx);
                let mut out = vecops::zero(f, layer_dims[i - 1]);
                for l in 0..i - 1 {
                    let p = s.table(c[l], c[l + 1]).basis(word[l], word[l + 1]).clone();
                    if vecops::is_zero(&p) {
                        continue;
                    }
                    let mut merged = c.clone();
                    merged[l] = c[l] + c[l + 1];
                    merged.remove(l + 1);
                    let (_, tchain, toff) = layers[i - 1]
                        .iter()
                        .find(|(cc, _, _)| *cc == merged)
                        .expect("merged composition present");
                    let mut parts: Vec<Vector> = Vec::with_capacity(i - 1);
                    for (t, &w) in word.iter().enumerate() {
                        if t == l {
                            parts.push(p.clone());
                        } else if t != l + 1 {
                            parts.push(vecops::unit(f, s.dim(c[t]), w));
                        }
                    }
                    let img = tchain.pure(&parts);
                    let sign = if l % 2 == 0 { -f.one() } else { f.one() };
                    for (z, x) in img.iter().enumerate() {
                        if !x.is_zero() {
                            out[toff + z] = &out[toff + z] + &(&sign * x);
                        }
                    }
                }
                cols.push(out);
            }
        }
        maps.push(Matrix::from_cols(f, layer_dims[i - 1], &cols));
    }
    let dims = (1..=j).rev().map(|i| layer_dims[i]).collect();
    Ok(BarStrand {
        degree: j,
        complex: Complex::new(f, dims, maps)?,
        spaces,
    })
}

/// Homology dimensions of the bar strand `j`, indexed by homological degree.
fn bar_strand_homology(s: &GradedSlice, j: usize) -> Result<Vec<usize>> {
    let st = bar_strand(s, j)?;
    if j == 0 {
        return Ok(vec![st.complex.dims[0]]);
    }
    let h = st.complex.homology_dims();
    let mut out = vec![0; j + 1];
    for (p, d) in h.into_iter().enumerate() {
        out[j - p] = d;
    }
    Ok(out)
}

/// `Tor^A_{i,j}(R,R)` as a bimodule, from the literal bar complex.
pub fn bar_tor(s: &GradedSlice, i: usize, j: usize) -> Result<Bimodule> {
    if j > s.top() {
        return Err(Error::Window(format!("internal degree {j} exceeds the slice top {}", s.top())));
    }
    if i > j || (i == 0 && j > 0) {
        return Ok(Bimodule::zero(s.base(), s.base()));
    }
    let st = bar_strand(s, j)?;
    if j == 0 {
        return Ok(st.spaces[0].clone());
    }
    let p = j - i;
    let (z, b) = st.complex.cycles_and_boundaries(p);
    homology_bimodule(&st.spaces[p], &z, &b)
}

/// `Z/B` for subbimodules `B ⊂ Z` of `M`.
pub fn homology_bimodule(m: &Bimodule, z: &Subspace, b: &Subspace) -> Result<Bimodule> {
    let zm = m.sub_bimodule(z)?;
    let coords: Vec<Vector> = b
        .basis()
        .iter()
        .map(|v| z.coords(v).ok_or_else(|| Error::Internal("boundary outside cycles".into())))
        .collect::<Result<_>>()?;
    let bz = Subspace::span(m.field(), z.dim(), coords);
    Ok(zm.quotient(&bz)?.0)
}

/// Verdicts for generation in degree one and quadraticity.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GenerationReport {
    pub degree: usize,
    pub generated: bool,
    pub generation_failure: Option<usize>,
    pub quadratic: bool,
    pub quadratic_failure: Option<usize>,
}

pub fn check_generated_and_quadratic(s: &GradedSlice, top: usize) -> Result<GenerationReport> {
    let top = top.min(s.top());
    let t = tor_table(s, top)?;
    let generation_failure = (2..=top).find(|&j| t[1][j] != 0);
    let quad = (3..=top).find(|&j| t[2][j] != 0);
    let generated = generation_failure.is_none();
    Ok(GenerationReport {
        degree: top,
        generated,
        generation_failure,
        quadratic: generated && quad.is_none(),
        quadratic_failure: if generated { quad } else { generation_failure },
    })
}

/// Off-diagonal vanishing of `Tor^A_{i,j}(R,R)` for `j ≤ N`.
pub fn check_koszul_tor(q: &QuadraticPresentation, top: usize) -> Result<KoszulVerdict> {
    let s = build_quadratic_slice(q, top)?;
    koszul_tor_of_slice(&s, top)
}

pub fn koszul_tor_of_slice(s: &GradedSlice, top: usize) -> Result<KoszulVerdict> {
    let t = tor_table(s, top)?;
    let mut first = None;
    'outer: for j in 0..=top {
        for (i, row) in t.iter().enumerate() {
            if i != j && row[j] != 0 {
                first = Some((i, j));
                break 'outer;
            }
        }
    }
    Ok(KoszulVerdict {
        degree: top,
        koszul: first.is_none(),
        first_failure: first,
    })
}

/// A quadratic ring `A` (left side) together with its dual `B` and the
/// canonical element `e = Σ c_k ⊗ a_k ∈ B_1 ⊗_R A_1`.
pub struct KoszulPair {
    pub a_pres: QuadraticPresentation,
    pub b_pres: QuadraticPresentation,
    pub a: GradedSlice,
    pub b: GradedSlice,
    /// `(c_k, a_k)` in `B_1` and `A_1` coordinates.
    pub e: Vec<(Vector, Vector)>,
}

pub fn koszul_pair(q: &QuadraticPresentation, top: usize) -> Result<KoszulPair> {
    if q.side() != Side::Left {
        return Err(Error::Precondition("Koszul complexes are built for left-projective presentations".into()));
    }
    let b_pres = quadratic_dual(q)?;
    let dual = left_dual(q.generators())?;
    let basis = projective_basis_left(q.generators())
        .ok_or_else(|| Error::Precondition("generators are not left projective".into()))?;
    let f = q.field();
    let dv = q.generators().dim();
    let e = basis
        .iter()
        .enumerate()
        .map(|(k, fk)| {
            let c = dual
                .coords(fk)
                .ok_or_else(|| Error::Internal("dual basis functional outside the dual".into()))?;
            Ok((c, vecops::unit(f, dv, k)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KoszulPair {
        a: build_quadratic_slice(q, top)?,
        b: build_quadratic_slice(&b_pres, top)?,
        a_pres: q.clone(),
        b_pres,
        e,
    })
}

impl KoszulPair {
    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn top(&self) -> usize {
        self.a.top().min(self.b.top())
    }

    /// `Hom_{R^op}(B_n, A_0) → ... → Hom_{R^op}(B_0, A_n)`, `d(φ)(b) = Σ φ(b c_k) a_k`.
    pub fn first_koszul_complex(&self, n: usize) -> Result<Complex> {
        let f = self.field();
        let homs = (0..=n)
            .map(|i| hom_space(self.b.component(i), self.a.component(n - i), Side::Right))
            .collect::<Result<Vec<_>>>()?;
        let mut maps = Vec::with_capacity(n);
        for i in (1..=n).rev() {
            let (bi, aj) = (i - 1, n - i);
            let cols = homs[i]
                .basis()
                .iter()
                .map(|phi| {
                    let mut img = Matrix::zeros(f, self.a.dim(aj + 1), self.b.dim(bi));
                    for (c, a) in &self.e {
                        for x in 0..self.b.dim(bi) {
                            let bc = self.b.mul(bi, 1, &vecops::unit(f, self.b.dim(bi), x), c);
                            let y = phi.apply(&bc);
                            let z = self.a.mul(aj, 1, &y, a);
                            for (r, v) in z.into_iter().enumerate() {
                                if !v.is_zero() {
                                    let cur = img.get(r, x).clone();
                                    img.set(r, x, &cur + &v);
                                }
                            }
                        }
                    }
                    homs[i - 1]
                        .coords(&img)
                        .ok_or_else(|| Error::Internal("differential leaves the hom space".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            maps.push(Matrix::from_cols(f, homs[i - 1].dim(), &cols));
        }
        let dims = (0..=n).rev().map(|i| homs[i].dim()).collect();
        let c = Complex::new(f, dims, maps)?;
        square_zero(&c, "first")?;
        Ok(c)
    }

    /// `C_n ⊗_R A_0 → ... → C_0 ⊗_R A_n` with `C_i = Hom_{R^op}(B_i, R)` and
    /// `d(χ ⊗ a) = Σ (χ·c_k) ⊗ a_k a`, `(χ·c)(b) = χ(cb)`.
    pub fn second_koszul_complex(&self, n: usize) -> Result<Complex> {
        let f = self.field();
        let duals = (0..=n).map(|i| right_dual(self.b.component(i))).collect::<Result<Vec<_>>>()?;
        let tensors = (0..=n)
            .map(|i| tensor_over(&duals[i].module, self.a.component(n - i)))
            .collect::<Result<Vec<_>>>()?;
        let mut maps = Vec::with_capacity(n);
        for i in (1..=n).rev() {
            let (bi, aj) = (i - 1, n - i);
            let src = &tensors[i];
            let tgt = &tensors[i - 1];
            let (dc, da) = src.factor_dims();
            let cols: Vec<Vector> = (0..src.dim())
                .map(|q| {
                    let pos = src
                        .lift(&vecops::unit(f, src.dim(), q))
                        .iter()
                        .position(|x| !x.is_zero())
                        .expect("nonzero lift");
                    let (xi, ai) = (pos / da, pos % da);
                    debug_assert!(xi < dc);
                    let chi = duals[i].functional(xi);
                    let mut out = vecops::zero(f, tgt.dim());
                    for (c, a) in &self.e {
                        let vals: Vec<Vector> = (0..self.b.dim(bi))
                            .map(|y| chi.apply(&self.b.mul(1, bi, c, &vecops::unit(f, self.b.dim(bi), y))))
                            .collect();
                        let rd = chi.rows();
                        let fm = Matrix::from_cols(f, rd, &vals);
                        let chic = duals[i - 1].coords(&fm).expect("restricted functional is right linear");
                        let aa = self.a.mul(1, aj, a, &vecops::unit(f, self.a.dim(aj), ai));
                        let img = tgt.pure(&chic, &aa);
                        for (z, v) in img.into_iter().enumerate() {
                            if !v.is_zero() {
                                out[z] = &out[z] + &v;
                            }
                        }
                    }
                    out
                })
                .collect();
            maps.push(Matrix::from_cols(f, tgt.dim(), &cols));
        }
        let dims = (0..=n).rev().map(|i| tensors[i].dim()).collect();
        let c = Complex::new(f, dims, maps)?;
        square_zero(&c, "second")?;
        Ok(c)
    }

    /// Strand `B_i ⊗_R A_{i+s}`, `i = max(0,-s)..=m`, with `b ⊗ a ↦ Σ b c_k ⊗ a_k a`.
    pub fn dual_koszul_complex(&self, s: isize, m: usize) -> Result<Complex> {
        let f = self.field();
        let lo = if s < 0 { (-s) as usize } else { 0 };
        if lo > m {
            return Complex::new(f, vec![], vec![]);
        }
        let top_a = (m as isize + s) as usize;
        if top_a > self.a.top() || m > self.b.top() {
            return Err(Error::Window(format!("strand {s} leaves the computed range")));
        }
        let tensors = (lo..=m)
            .map(|i| tensor_over(self.b.component(i), self.a.component((i as isize + s) as usize)))
            .collect::<Result<Vec<_>>>()?;
        let mut maps = Vec::new();
        for i in lo..m {
            let aj = (i as isize + s) as usize;
            let src = &tensors[i - lo];
            let tgt = &tensors[i + 1 - lo];
            let (_, da) = src.factor_dims();
            let cols: Vec<Vector> = (0..src.dim())
                .map(|q| {
                    let pos = src
                        .lift(&vecops::unit(f, src.dim(), q))
                        .iter()
                        .position(|x| !x.is_zero())
                        .expect("nonzero lift");
                    let (bx, ay) = (pos / da, pos % da);
                    let mut out = vecops::zero(f, tgt.dim());
                    for (c, a) in &self.e {
                        let bc = self.b.mul(i, 1, &vecops::unit(f, self.b.dim(i), bx), c);
                        let aa = self.a.mul(1, aj, a, &vecops::unit(f, self.a.dim(aj), ay));
                        let img = tgt.pure(&bc, &aa);
                        for (z, v) in img.into_iter().enumerate() {
                            if !v.is_zero() {
                                out[z] = &out[z] + &v;
                            }
                        }
                    }
                    out
                })
                .collect();
            maps.push(Matrix::from_cols(f, tgt.dim(), &cols));
        }
        let dims = tensors.iter().map(|t| t.dim()).collect();
        let c = Complex::new(f, dims, maps)?;
        square_zero(&c, "dual")?;
        Ok(c)
    }

    /// Exactness of the first and second complexes in internal degrees `1..=N`.
    pub fn koszul_complexes_exact(&self, top: usize) -> Result<(bool, bool)> {
        let mut first = true;
        let mut second = true;
        for n in 1..=top.min(self.top()) {
            first &= self.first_koszul_complex(n)?.is_exact();
            second &= self.second_koszul_complex(n)?.is_exact();
        }
        Ok((first, second))
    }
}

fn square_zero(c: &Complex, name: &str) -> Result<()> {
    match c.square_zero_failure() {
        Some(p) => Err(Error::Precondition(format!(
            "{name} Koszul differential does not square to zero at position {p}; the rings are not dual"
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn compositions_enumerate() {
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(compositions(4, 1), vec![vec![4]]);
        assert_eq!(compositions(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(compositions(5, 3).len(), 6);
    }

    #[test]
    fn symmetric_and_exterior_dims() {
        let q = Field::Rationals;
        let sym = corpus::symmetric(q, 2);
        assert_eq!(build_quadratic_slice(&sym, 4).unwrap().dims(), vec![1, 2, 3, 4, 5]);
        let ext = corpus::exterior(q, 3);
        assert_eq!(build_quadratic_slice(&ext, 4).unwrap().dims(), vec![1, 3, 3, 1, 0]);
    }

    #[test]
    fn slices_are_associative() {
        let q = Field::Rationals;
        build_quadratic_slice(&corpus::symmetric(q, 3), 4).unwrap().validate().unwrap();
        build_quadratic_slice(&corpus::exterior(q, 3), 4).unwrap().validate().unwrap();
        let quiver = corpus::quiver_relations(q);
        build_quadratic_slice(&quiver, 4).unwrap().validate().unwrap();
    }

    #[test]
    fn everything_killed() {
        let q = Field::Rationals;
        let k = BaseAlgebra::ground(q);
        let v = Bimodule::vector_space(&k, 2);
        let p = QuadraticPresentation::new(v, Subspace::full(q, 4), Side::Left).unwrap();
        assert_eq!(build_quadratic_slice(&p, 3).unwrap().dims(), vec![1, 2, 0, 0]);
    }

    #[test]
    fn quadratic_part_round_trip() {
        let q = Field::Rationals;
        let sym = corpus::symmetric(q, 2);
        let s = build_quadratic_slice(&sym, 3).unwrap();
        let back = quadratic_part(&s).unwrap();
        assert_eq!(back, sym);
        assert_eq!(back.relations().dim(), 1);
    }

    #[test]
    fn dual_of_symmetric_is_exterior() {
        let q = Field::Rationals;
        let d = quadratic_dual(&corpus::symmetric(q, 2)).unwrap();
        assert_eq!(d.relations().dim(), 3);
        assert_eq!(d.side(), Side::Right);
        assert_eq!(build_quadratic_slice(&d, 3).unwrap().dims(), vec![1, 2, 1, 0]);
        let t = corpus::tensor_ring(q, 3);
        let d = quadratic_dual(&t).unwrap();
        assert_eq!(build_quadratic_slice(&d, 3).unwrap().dims(), vec![1, 3, 0, 0]);
    }

    #[test]
    fn bar_tor_low_degrees() {
        let q = Field::Rationals;
        let sym = build_quadratic_slice(&corpus::symmetric(q, 2), 4).unwrap();
        assert_eq!(bar_tor(&sym, 0, 0).unwrap().dim(), 1);
        assert_eq!(bar_tor(&sym, 1, 1).unwrap().dim(), 2);
        assert_eq!(bar_tor(&sym, 2, 2).unwrap().dim(), 1);
        assert_eq!(bar_tor(&sym, 2, 3).unwrap().dim(), 0);
        assert_eq!(bar_tor(&sym, 1, 3).unwrap().dim(), 0);
    }

    #[test]
    fn resolution_matches_bar_complex() {
        let q = Field::Rationals;
        for p in [corpus::symmetric(q, 2), corpus::exterior(q, 2), corpus::tensor_ring(q, 2)] {
            let s = build_quadratic_slice(&p, 4).unwrap();
            let res = tor_by_resolution(&s, 4);
            for j in 0..=4 {
                let bar = bar_strand_homology(&s, j).unwrap();
                for i in 0..=4 {
                    let b = bar.get(i).copied().unwrap_or(0);
                    assert_eq!(res[i][j], b, "Tor_({i},{j})");
                }
            }
        }
    }

    #[test]
    fn monomial_non_koszul_detected() {
        let q = Field::Rationals;
        let p = corpus::non_koszul_example(q);
        let d = check_koszul_distributive(&p, 5).unwrap();
        let t = check_koszul_tor(&p, 5).unwrap();
        assert_eq!(d.first_failure, Some((4, 2)));
        assert_eq!(t.first_failure, Some((3, 4)));
        let pair = koszul_pair(&p, 4).unwrap();
        assert!(!pair.first_koszul_complex(4).unwrap().is_exact());
        assert!(pair.first_koszul_complex(3).unwrap().is_exact());
    }

    #[test]
    fn koszul_complexes_for_symmetric() {
        let q = Field::Rationals;
        let pair = koszul_pair(&corpus::symmetric(q, 2), 5).unwrap();
        for n in 1..=5 {
            assert!(pair.first_koszul_complex(n).unwrap().is_exact(), "first, degree {n}");
            assert!(pair.second_koszul_complex(n).unwrap().is_exact(), "second, degree {n}");
        }
        let top = pair.dual_koszul_complex(-2, 2).unwrap();
        assert_eq!(top.homology_dims(), vec![1]);
        for s in -1..=2 {
            assert!(pair.dual_koszul_complex(s, 2).unwrap().is_exact(), "strand {s}");
        }
    }
}
