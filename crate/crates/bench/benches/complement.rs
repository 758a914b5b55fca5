use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use elcompl::compl_inf::complement_inf;
use elcompl::modular::{complement_tela, mod_compl, SubTrue};
use elcompl::oracle::{xor_suite, LassoWord};
use elcompl::pipeline::{dispatch, ComplementOptions};
use elcompl::random::RandomClass;
use elcompl::DEFAULT_BUDGET;
use elcompl_bench::corpus;

fn inf(c: &mut Criterion) {
    let mut g = c.benchmark_group("complement_inf");
    for class in [RandomClass::Ba, RandomClass::Gba] {
        let auts = corpus(class, 20, 4);
        g.bench_function(BenchmarkId::from_parameter(class.name()), |b| {
            b.iter(|| {
                for a in &auts {
                    // budget overruns are part of the workload
                    let _ = black_box(complement_inf(a, DEFAULT_BUDGET));
                }
            })
        });
    }
    g.finish();
}

fn breakpoint(c: &mut Criterion) {
    let auts = corpus(RandomClass::Cba, 20, 5);
    c.bench_function("mod_compl/breakpoint", |b| {
        b.iter(|| {
            for a in &auts {
                let _ = black_box(mod_compl(&SubTrue, a, 0, DEFAULT_BUDGET));
            }
        })
    });
}

fn tela(c: &mut Criterion) {
    let mut g = c.benchmark_group("complement_tela");
    for class in [RandomClass::Rabin, RandomClass::Parity, RandomClass::El] {
        let auts = corpus(class, 10, 3);
        g.bench_function(BenchmarkId::from_parameter(class.name()), |b| {
            b.iter(|| {
                for a in &auts {
                    let _ = black_box(complement_tela(a, DEFAULT_BUDGET));
                }
            })
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let pairs: Vec<_> = corpus(RandomClass::Rabin, 10, 3)
        .into_iter()
        .filter_map(|a| dispatch(&a, &ComplementOptions::default()).ok().map(|(c, _)| (a, c)))
        .collect();
    c.bench_function("oracle/xor_suite", |b| {
        b.iter(|| {
            for (a, comp) in &pairs {
                black_box(xor_suite(a, comp, 2, 3).unwrap());
            }
        })
    });
    c.bench_function("oracle/enumerate", |b| b.iter(|| black_box(LassoWord::enumerate(2, 2, 3).len())));
}

criterion_group!(benches, inf, breakpoint, tela, oracle);
criterion_main!(benches);
