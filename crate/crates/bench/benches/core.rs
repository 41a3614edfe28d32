use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mapseek_core::combinatorics::{enumerate_nc, eta, eta_inverse};
use mapseek_core::formula::{parse_infix, ObjectTable};
use mapseek_core::functional::project;
use mapseek_core::narayana::{qt_narayana, verify_pairing};
use mapseek_core::slurp::SlurpInstance;
use mapseek_core::statistics::StatisticFn;
use mapseek_core::symbolic::{evaluate_population, init_population, presets};

const LEAP: &str = "((i<c-1)+((b<i)∧(i<c+1)))%3";

fn combinatorics(c: &mut Criterion) {
    c.bench_function("enumerate_nc(14,3)", |b| b.iter(|| enumerate_nc(black_box(14), 3).unwrap().len()));
    let parts = enumerate_nc(12, 3).unwrap();
    c.bench_function("eta round trip NC(12,3)", |b| {
        b.iter(|| parts.iter().filter(|p| eta(&eta_inverse(p).unwrap()) == **p).count())
    });
    c.bench_function("qt_narayana(12,3) cached", |b| b.iter(|| qt_narayana(black_box(12), 3).total_mass()));
    let (skip, leap) = (StatisticFn::builtin("skip").unwrap(), StatisticFn::builtin("leap").unwrap());
    c.bench_function("verify_pairing skip leap (12,3)", |b| b.iter(|| verify_pairing(&skip, &leap, 12, 3).unwrap()));
}

fn formulas(c: &mut Criterion) {
    let inst = SlurpInstance::build(14, 3, true).unwrap();
    let table = ObjectTable::new(&inst).unwrap();
    let f = parse_infix(LEAP).unwrap();
    c.bench_function("fingerprint leap on NC(14,3)", |b| b.iter(|| table.fingerprint(black_box(&f))));
    let values = table.fingerprint(&f).unwrap();
    c.bench_function("delta refined (14,3)", |b| b.iter(|| inst.delta(black_box(&values)).unwrap()));
    let pop = init_population(presets(), 1000, 0).unwrap();
    c.bench_function("evaluate 1000 formulas on refined (14,3)", |b| {
        b.iter(|| evaluate_population(&pop, &inst).unwrap().len())
    });
}

fn projection(c: &mut Criterion) {
    let inst = SlurpInstance::build(14, 3, true).unwrap();
    let scores: Vec<f64> = (0..inst.len()).map(|i| ((i * 37) % 11) as f64 / 3.0).collect();
    c.bench_function("project refined (14,3)", |b| b.iter(|| project(black_box(&scores), &inst).unwrap().cost()));
}

criterion_group!(benches, combinatorics, formulas, projection);
criterion_main!(benches);
