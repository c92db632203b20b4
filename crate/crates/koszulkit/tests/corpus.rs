use koszulkit::complexes::{bimodule_resolution, dual_nonhomog_koszul_module, TwoSidedData};
use koszulkit::corpus::{self, CorpusPresentation};
use koszulkit::nonhomog::{build_cdg_dual, build_cdg_dual_unchecked, is_self_consistent, verify_self_consistency};
use koszulkit::pbw::{pbw_analyze, roundtrip_duality};
use koszulkit::quadratic::{bar_tor, build_quadratic_slice, check_koszul_distributive, koszul_pair, relation_intersections};
use koszulkit::{cdg::quasi_differential_ring, Field, Side};

const Q: Field = Field::Rationals;

#[test]
fn constructors_are_consistent_unless_flagged() {
    for e in corpus::entries() {
        if let CorpusPresentation::Nonhomogeneous(p) = &e.presentation {
            assert_eq!(is_self_consistent(p), e.expected.self_consistent, "{}", e.name);
        }
    }
}

#[test]
fn koszul_complexes_characterize_the_verdict() {
    let mut seen = (false, false);
    for e in corpus::entries() {
        let q = e.presentation.quadratic();
        if q.side() != Side::Left || q.check_projectivity().is_err() {
            continue;
        }
        let v = check_koszul_distributive(q, 4).unwrap();
        let (first, second) = koszul_pair(q, 4).unwrap().koszul_complexes_exact(4).unwrap();
        assert_eq!(first, v.koszul, "{}", e.name);
        assert_eq!(second, v.koszul, "{}", e.name);
        if v.koszul {
            seen.0 = true;
        } else {
            seen.1 = true;
        }
    }
    assert_eq!(seen, (true, true), "both directions need an example");
}

#[test]
fn diagonal_law_through_degree_five() {
    for q in [corpus::exterior(Q, 2), corpus::symmetric(Q, 2)] {
        let s = build_quadratic_slice(&q, 5).unwrap();
        for n in 2..=5 {
            let (_, i) = relation_intersections(&q, n).unwrap();
            assert_eq!(bar_tor(&s, n, n).unwrap().dim(), i.dim());
        }
    }
}

#[test]
fn dual_rings_satisfy_the_axioms() {
    for e in corpus::entries() {
        let CorpusPresentation::Nonhomogeneous(p) = &e.presentation else { continue };
        if !e.expected.self_consistent {
            continue;
        }
        let b = build_cdg_dual(p, 3).unwrap();
        assert!(b.check_axioms().iter().all(|c| c.holds), "{}", e.name);
        let quasi = quasi_differential_ring(&b).unwrap();
        assert!(quasi.check().iter().all(|c| c.holds), "{}", e.name);
    }
}

#[test]
fn pbw_dimension_law_when_gates_pass() {
    for e in corpus::entries() {
        let CorpusPresentation::Nonhomogeneous(p) = &e.presentation else { continue };
        if !e.expected.self_consistent {
            continue;
        }
        let rt = roundtrip_duality(p, 4).unwrap();
        let rep = &rt.pbw;
        if rep.koszul.koszul && rep.zero_divisor_degree.is_none() {
            let mut acc = 0;
            for (n, d) in rep.dims_graded.iter().enumerate() {
                acc += d;
                assert_eq!(rep.dims_filtered[n], acc, "{} degree {n}", e.name);
            }
        }
        assert!(rt.ok(), "{}", e.name);
    }
}

#[test]
fn refused_presentations_show_a_defect_by_degree_three() {
    let mut count = 0;
    for e in corpus::entries() {
        let CorpusPresentation::Nonhomogeneous(p) = &e.presentation else { continue };
        if e.expected.self_consistent {
            continue;
        }
        count += 1;
        assert!(verify_self_consistency(p).iter().any(|c| !c.holds && c.witness.is_some()));
        assert!(build_cdg_dual(p, 3).is_err(), "{}", e.name);
        let b = build_cdg_dual_unchecked(p, 3).unwrap();
        let axioms_fail = b.check_axioms().iter().any(|c| !c.holds);
        let pbw_fails = pbw_analyze(&b, 3).map_or(true, |a| !a.report.ok());
        assert!(axioms_fail || pbw_fails, "{}", e.name);
    }
    assert!(count >= 2);
}

#[test]
fn dual_modules_are_curved() {
    for p in [corpus::weyl1(Q), corpus::nonabelian2(Q), corpus::clifford(Q, &[vec![1]]).unwrap()] {
        let d = TwoSidedData::from_presentation(&p, 3).unwrap();
        for n in 2..=3 {
            let m = dual_nonhomog_koszul_module(&d, n, 2).unwrap();
            assert!(m.check_axioms().ok());
        }
    }
}

#[test]
fn resolutions_are_exact_where_pbw_holds() {
    for e in corpus::entries() {
        let CorpusPresentation::Nonhomogeneous(p) = &e.presentation else { continue };
        if !e.expected.self_consistent || p.field() != Q || p.base().dim() > 1 {
            continue;
        }
        if !roundtrip_duality(p, 3).unwrap().ok() {
            continue;
        }
        let d = TwoSidedData::from_presentation(p, 2).unwrap();
        let rep = bimodule_resolution(&d, 2).unwrap();
        assert!(rep.ok(), "{}", e.name);
    }
}
