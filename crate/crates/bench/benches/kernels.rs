use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::rngs::StdRng;
use rand::SeedableRng;

use dgcat_bench::two_cycle;
use dgcat_core::quotient::quotient_hom;
use dgcat_core::testgen::{random_complex, random_matrix};
use dgcat_core::*;

fn bench_row_reduce(c: &mut Criterion) {
    let mut group = c.benchmark_group("row_reduce");
    for (name, field) in [
        ("rationals", FieldSpec::Rationals),
        ("f65537", FieldSpec::prime(65537).unwrap()),
    ] {
        group.bench_function(format!("{name}_40x40"), |b| {
            let mut rng = StdRng::seed_from_u64(1);
            b.iter_batched(
                || random_matrix(field, 40, 40, &mut rng),
                |m| row_reduce(&m),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn bench_cohomology(c: &mut Criterion) {
    c.bench_function("cohomology_random_complex", |b| {
        let mut rng = StdRng::seed_from_u64(2);
        b.iter_batched(
            || random_complex(FieldSpec::Rationals, -3, 3, 4, &mut rng).0,
            |cx| cx.cohomology_dims(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_quotient_truncation(c: &mut Criterion) {
    let field = FieldSpec::prime(2).unwrap();
    let (table, _) = standard_k_hull(field, 0..=1).unwrap();
    let k0 = table.object_index("k[0]").unwrap();
    let cone = table.object_index("C").unwrap();
    c.bench_function("quotient_truncation_len4_f2", |b| {
        b.iter(|| quotient_hom(&table, &[cone], k0, k0, 4).unwrap())
    });
}

fn bench_gamma(c: &mut Criterion) {
    let a = two_cycle(FieldSpec::Rationals);
    let e = a.element_by_label("e1").unwrap();
    c.bench_function("gamma_record_depth3", |b| {
        b.iter(|| {
            let g = gamma_algebra(&a, &e, 3).unwrap();
            gamma_degree_record(&g).unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_row_reduce,
    bench_cohomology,
    bench_quotient_truncation,
    bench_gamma
);
criterion_main!(benches);
