use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use eqbundle::congruence::RotationRelations;
use eqbundle::cyclotomic::cot_unit;
use eqbundle::{
    dim_invariant_moduli, linear_cp2, rho_lens, search_realizable, three_cp2_bar_action, AdjointLift, CycloNum,
    SearchParams,
};

fn cyclotomic(c: &mut Criterion) {
    let mut group = c.benchmark_group("cyclotomic");
    for p in [13u64, 101] {
        let x = cot_unit(p, 3).unwrap();
        let y = &CycloNum::zeta_pow(p, 5).unwrap() + &CycloNum::from_rational(p, eqbundle::arith::rat(2, 7)).unwrap();
        group.bench_with_input(BenchmarkId::new("mul", p), &p, |b, _| b.iter(|| black_box(&x) * black_box(&y)));
        group.bench_with_input(BenchmarkId::new("inv", p), &p, |b, _| b.iter(|| black_box(&y).inv().unwrap()));
    }
    group.finish();
}

fn rho(c: &mut Criterion) {
    c.bench_function("rho_lens p=101", |b| {
        b.iter(|| rho_lens(101, black_box(3), black_box(-7), black_box(11)).unwrap())
    });
    let x = three_cp2_bar_action();
    let lift = AdjointLift { ell_points: vec![1, 1, 1], ell_spheres: vec![1], m_spheres: vec![-1] };
    c.bench_function("dimension example", |b| b.iter(|| dim_invariant_moduli(black_box(&x), &lift, 1).unwrap()));
}

fn rotation(c: &mut Criterion) {
    let mut group = c.benchmark_group("rotation relations");
    for p in [11u64, 53, 97] {
        let checker = RotationRelations::new(p).unwrap();
        let x = linear_cp2(p, 2, 5).unwrap();
        group.bench_with_input(BenchmarkId::new("check", p), &p, |b, _| {
            b.iter(|| checker.check(black_box(&x)).unwrap())
        });
    }
    group.bench_function("setup p=97", |b| b.iter(|| RotationRelations::new(black_box(97)).unwrap()));
    group.finish();
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    let cp2 = SearchParams { p: 7, n_points: 3, sphere_alphas: vec![], signature: 1, euler: 3, b2: 1 };
    group.bench_function("CP2 profile p=7", |b| b.iter(|| search_realizable(black_box(&cp2), None).unwrap()));
    let three = SearchParams { p: 5, n_points: 3, sphere_alphas: vec![-2], signature: -3, euler: 5, b2: 3 };
    group.bench_function("3 CP2-bar profile p=5", |b| b.iter(|| search_realizable(black_box(&three), None).unwrap()));
    group.finish();
}

criterion_group!(benches, cyclotomic, rho, rotation, search);
criterion_main!(benches);
