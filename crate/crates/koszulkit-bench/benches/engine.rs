use criterion::{black_box, criterion_group, criterion_main, Criterion};

use koszulkit::complexes::{bimodule_resolution, TwoSidedData};
use koszulkit::corpus;
use koszulkit::linalg::Matrix;
use koszulkit::nonhomog::{build_cdg_dual, verify_self_consistency};
use koszulkit::pbw::pbw_reconstruct;
use koszulkit::quadratic::{check_koszul_distributive, check_koszul_tor, quadratic_dual};
use koszulkit::Field;

const Q: Field = Field::Rationals;

fn linalg(c: &mut Criterion) {
    let n = 24;
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| ((i * 7 + j * 13) % 11) as i64 - 5).collect())
        .collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    let q = Matrix::from_ints(Q, &refs);
    let p = Matrix::from_ints(Field::Prime(5), &refs);
    c.bench_function("rref 24x24 over Q", |b| b.iter(|| black_box(&q).rref()));
    c.bench_function("rref 24x24 over F_5", |b| b.iter(|| black_box(&p).rref()));
}

fn quadratic(c: &mut Criterion) {
    let sym3 = corpus::symmetric(Q, 3);
    let quiver = corpus::quiver_relations(Q);
    c.bench_function("dual of Sym(Q^3)", |b| b.iter(|| quadratic_dual(black_box(&sym3)).unwrap()));
    c.bench_function("distributivity Sym(Q^3) to 5", |b| {
        b.iter(|| check_koszul_distributive(black_box(&sym3), 5).unwrap())
    });
    c.bench_function("Tor Sym(Q^3) to 5", |b| b.iter(|| check_koszul_tor(black_box(&sym3), 5).unwrap()));
    c.bench_function("distributivity quiver to 5", |b| {
        b.iter(|| check_koszul_distributive(black_box(&quiver), 5).unwrap())
    });
}

fn nonhomog(c: &mut Criterion) {
    let sl2 = corpus::sl2(Q);
    let weyl = corpus::weyl1(Q);
    c.bench_function("self-consistency sl2", |b| b.iter(|| verify_self_consistency(black_box(&sl2))));
    c.bench_function("cdg dual sl2 to 3", |b| b.iter(|| build_cdg_dual(black_box(&sl2), 3).unwrap()));
    let bw = build_cdg_dual(&weyl, 3).unwrap();
    c.bench_function("pbw weyl to 6", |b| b.iter(|| pbw_reconstruct(black_box(&bw), 6).unwrap()));
}

fn complexes(c: &mut Criterion) {
    let d = TwoSidedData::from_presentation(&corpus::weyl1(Q), 4).unwrap();
    let mut g = c.benchmark_group("resolution");
    g.sample_size(10);
    g.bench_function("weyl bimodule resolution M=4", |b| b.iter(|| bimodule_resolution(black_box(&d), 4).unwrap()));
    g.finish();
}

criterion_group!(benches, linalg, quadratic, nonhomog, complexes);
criterion_main!(benches);
