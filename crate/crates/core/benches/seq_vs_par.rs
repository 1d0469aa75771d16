//! Sequential vs rayon execution of the data-parallel kernels.
//!
//! Both modes produce bit-identical results; only the wall time differs.
//! Build with `--no-default-features` to compare against the fallback
//! compiled without rayon at all.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use lacuna::extremal::{maximize_ratio, ChaosFamily, SearchConfig};
use lacuna::lacunary::{enumerate_index_set, LacunarySequence, Variant};
use lacuna::par::{self, Exec};
use lacuna::trig::{lp_norm_trig, TrigPolynomial};
use lacuna::walsh::{chaos_indices, WalshPolynomial};
use num_complex::Complex64;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn walsh_norm(c: &mut Criterion) {
    let mut group = c.benchmark_group("walsh_lp_norm");
    for k in [16u32, 20] {
        let s = WalshPolynomial::new(chaos_indices(2, k).iter().map(|w| (w.value(), 1.0))).unwrap();
        for (name, mode) in MODES {
            par::set_exec(mode);
            group.bench_with_input(BenchmarkId::new(name, k), &s, |b, s| b.iter(|| black_box(s.lp_norm(6.0).unwrap())));
        }
    }
    group.finish();
}

fn trig_norm(c: &mut Criterion) {
    let mut group = c.benchmark_group("trig_lp_norm");
    let seq = LacunarySequence::powers(3, 11, 2.5).unwrap();
    let set = enumerate_index_set(&seq, 2, Variant::Signed, seq.len()).unwrap();
    let s = TrigPolynomial::new(set.values().into_iter().map(|m| (m, Complex64::new(1.0, 0.0)))).unwrap();
    for (name, mode) in MODES {
        par::set_exec(mode);
        group.bench_function(name, |b| b.iter(|| black_box(lp_norm_trig(&s, 4.0, 8).unwrap())));
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_signed_l3");
    let seq = LacunarySequence::powers(4, 24, 3.5).unwrap();
    for (name, mode) in MODES {
        par::set_exec(mode);
        group.bench_function(name, |b| {
            b.iter(|| black_box(enumerate_index_set(&seq, 3, Variant::SignedStar, seq.len()).unwrap().len()))
        });
    }
    group.finish();
}

fn restarts(c: &mut Criterion) {
    let mut group = c.benchmark_group("maximize_ratio_restarts");
    group.sample_size(10);
    let fam = ChaosFamily::walsh(2, 12).unwrap();
    let config = SearchConfig { restarts: 4, max_iter: 20, step: 0.5, seed: 1 };
    for (name, mode) in MODES {
        par::set_exec(mode);
        group.bench_function(name, |b| b.iter(|| black_box(maximize_ratio(&fam, 6.0, &config).unwrap().ratio)));
    }
    group.finish();
}

criterion_group!(benches, walsh_norm, trig_norm, enumeration, restarts);
criterion_main!(benches);
