use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use koszulkit::bimodule::{
    double_dual_eval, eval_pairing, is_projective_left, left_dual, right_dual, tensor_over, BimoduleMap,
};
use koszulkit::corpus;
use koszulkit::io::{parse_document, Document, Loaded};
use koszulkit::linalg::vecops;
use koszulkit::nonhomog::{build_cdg_dual, connection_element};
use koszulkit::quadratic::{
    bar_tor, build_quadratic_slice, check_koszul_distributive, check_koszul_tor, koszul_pair, quadratic_dual,
    relation_intersections,
};
use koszulkit::{BaseAlgebra, Bimodule, Field, Matrix, QuadraticPresentation, Vector};

const F5: Field = Field::Prime(5);
const Q: Field = Field::Rationals;

fn residue(r: &Arc<BaseAlgebra>) -> Bimodule {
    let f = r.field();
    let one = Matrix::identity(f, 1);
    let zero = Matrix::zeros(f, 1, 1);
    Bimodule::new(r.clone(), r.clone(), vec![one.clone(), zero.clone()], vec![one, zero]).unwrap()
}

/// Sums of regular and residue bimodules over the dual numbers, with the
/// number of residue summands.
fn dual_number_module() -> impl Strategy<Value = (Bimodule, usize)> {
    (0usize..3, 0usize..2)
        .prop_filter("nonzero", |(a, b)| a + b > 0)
        .prop_map(|(a, b)| {
            let r = BaseAlgebra::dual_numbers(Q);
            let mut parts: Vec<Bimodule> = Vec::new();
            parts.extend((0..a).map(|_| Bimodule::regular(&r)));
            parts.extend((0..b).map(|_| residue(&r)));
            let mut m = parts[0].clone();
            for p in &parts[1..] {
                m = m.direct_sum(p).unwrap();
            }
            (m, b)
        })
}

fn quiver_module() -> impl Strategy<Value = Bimodule> {
    proptest::collection::vec((0usize..2, 0usize..2), 1..4).prop_map(|ends| {
        let r = BaseAlgebra::product(Q, 2);
        corpus::quiver_bimodule(&r, &ends)
    })
}

fn random_presentation(seed: u64) -> QuadraticPresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = seed % 2 == 0;
    corpus::random_presentation(&mut rng, F5, two)
}

fn small_vec(n: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-3i64..4, n)
}

fn ints(f: Field, v: &[i64]) -> Vector {
    v.iter().map(|&x| f.int(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projectivity_of_sums((m, residues) in dual_number_module()) {
        prop_assert_eq!(is_projective_left(&m), residues == 0);
    }

    #[test]
    fn projectivity_is_additive(u in quiver_module(), (w, _) in dual_number_module()) {
        let r = BaseAlgebra::dual_numbers(Q);
        let s = w.direct_sum(&residue(&r)).unwrap();
        prop_assert_eq!(is_projective_left(&w.direct_sum(&s).unwrap()), is_projective_left(&w) && is_projective_left(&s));
        let u2 = u.direct_sum(&u).unwrap();
        prop_assert_eq!(is_projective_left(&u2), is_projective_left(&u));
    }

    #[test]
    fn double_dual_is_invertible_for_projectives(u in quiver_module()) {
        prop_assume!(is_projective_left(&u));
        let (_, dd, ev) = double_dual_eval(&u).unwrap();
        prop_assert_eq!(ev.matrix.rank(), u.dim());
        prop_assert_eq!(dd.dim(), u.dim());
        prop_assert!(ev.is_isomorphism());
    }

    #[test]
    fn tensor_is_associative(u in quiver_module(), v in quiver_module(), w in quiver_module()) {
        let uv = tensor_over(&u, &v).unwrap();
        let vw = tensor_over(&v, &w).unwrap();
        let left = tensor_over(&uv.module, &w).unwrap();
        let right = tensor_over(&u, &vw.module).unwrap();
        prop_assert_eq!(left.dim(), right.dim());
        let (dv, dw) = (v.dim(), w.dim());
        let cols: Vec<Vector> = (0..left.dim())
            .map(|x| {
                let l = left.lift(&vecops::unit(Q, left.dim(), x));
                let mut out = vecops::zero(Q, right.dim());
                for (pos, c) in l.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (i, z) = (pos / dw, pos % dw);
                    let uvk = uv.lift(&vecops::unit(Q, uv.dim(), i));
                    for (pq, c2) in uvk.iter().enumerate() {
                        if c2.is_zero() {
                            continue;
                        }
                        let (a, b) = (pq / dv, pq % dv);
                        let vwz = vw.project(&vecops::unit(Q, dv * dw, b * dw + z));
                        let img = right.pure(&vecops::unit(Q, u.dim(), a), &vwz);
                        vecops::axpy(&mut out, &(c * c2), &img);
                    }
                }
                out
            })
            .collect();
        let m = Matrix::from_cols(Q, right.dim(), &cols);
        let map = BimoduleMap::new(left.module.clone(), right.module.clone(), m).unwrap();
        prop_assert!(map.is_isomorphism());
    }

    #[test]
    fn pairing_is_balanced(u in quiver_module(), cu in small_vec(3), cf in small_vec(3), cr in small_vec(2)) {
        let d = left_dual(&u).unwrap();
        let r = u.left_algebra().clone();
        let x = ints(Q, &cu[..u.dim().min(3)]);
        let x: Vector = x.into_iter().chain(std::iter::repeat(Q.zero())).take(u.dim()).collect();
        let f: Vector = ints(Q, &cf).into_iter().chain(std::iter::repeat(Q.zero())).take(d.dim()).collect();
        let s = ints(Q, &cr);
        let pair = |x: &Vector, f: &Vector| eval_pairing(&d, x, f).unwrap();
        // ⟨r u, f⟩ = r ⟨u, f⟩
        prop_assert_eq!(pair(&u.act_left(&s, &x), &f), r.mul(&s, &pair(&x, &f)));
        // ⟨u s, f⟩ = ⟨u, s f⟩
        prop_assert_eq!(pair(&u.act_right(&x, &s), &f), pair(&x, &d.module.act_left(&s, &f)));
        // ⟨u, f r⟩ = ⟨u, f⟩ r
        prop_assert_eq!(pair(&x, &d.module.act_right(&f, &s)), r.mul(&pair(&x, &f), &s));
        // right dual: ⟨m r, g⟩ = ⟨m, g⟩ r
        let e = right_dual(&u).unwrap();
        let g: Vector = ints(Q, &cf).into_iter().chain(std::iter::repeat(Q.zero())).take(e.dim()).collect();
        prop_assert_eq!(e.eval(&u.act_right(&x, &s), &g), r.mul(&e.eval(&x, &g), &s));
    }

    #[test]
    fn checkers_agree_on_random_presentations(seed in any::<u64>()) {
        let q = random_presentation(seed);
        let a = check_koszul_distributive(&q, 4).unwrap();
        let b = check_koszul_tor(&q, 4).unwrap();
        prop_assert_eq!(a.koszul, b.koszul);
        let pair = koszul_pair(&q, 4).unwrap();
        let (first, second) = pair.koszul_complexes_exact(4).unwrap();
        prop_assert_eq!(first, a.koszul);
        prop_assert_eq!(second, a.koszul);
    }

    #[test]
    fn diagonal_law_and_dual_dimensions(seed in any::<u64>()) {
        let q = random_presentation(seed);
        prop_assume!(check_koszul_distributive(&q, 4).unwrap().koszul);
        let s = build_quadratic_slice(&q, 4).unwrap();
        let b = build_quadratic_slice(&quadratic_dual(&q).unwrap(), 4).unwrap();
        for n in 2..=4 {
            let (_, i) = relation_intersections(&q, n).unwrap();
            prop_assert_eq!(bar_tor(&s, n, n).unwrap().dim(), i.dim());
            prop_assert_eq!(b.dim(n), left_dual(&i).unwrap().dim());
        }
    }

    #[test]
    fn random_presentations_serialize(seed in any::<u64>()) {
        let q = random_presentation(seed);
        let text = Document::from_quadratic(&q).to_text();
        let back = parse_document(&text).unwrap().presentation().unwrap();
        prop_assert_eq!(&back, &Loaded::Quadratic(q));
        prop_assert_eq!(Document::from_loaded(&back).to_text(), text);
    }

    #[test]
    fn connection_change_is_functorial(idx in 0usize..3, c in small_vec(6)) {
        let p = [corpus::weyl1(Q), corpus::sl2(Q), corpus::heisenberg(Q, 2)][idx].clone();
        let dual = left_dual(p.generators()).unwrap();
        let cv: Vector = ints(Q, &c).into_iter().chain(std::iter::repeat(Q.zero())).take(dual.dim()).collect();
        let a = dual.functional_of(&cv);
        let changed = p.change_of_generators(&a).unwrap();
        let b = build_cdg_dual(&p, 3).unwrap();
        let b2 = build_cdg_dual(&changed, 3).unwrap();
        let moved = b.connection_change(&connection_element(&p, &a).unwrap()).unwrap();
        prop_assert!(moved.check_axioms().iter().all(|c| c.holds));
        prop_assert_eq!(moved.differentials(), b2.differentials());
        prop_assert_eq!(moved.h(), b2.h());
    }
}
