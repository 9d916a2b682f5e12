use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, Criterion};

use beadiag::diagram::BeadedDiagram;
use beadiag::laurent::{Bead, DeltaContext, LaurentPoly};
use beadiag::normalform::DiagramSum;
use beadiag::rational::qi;

fn theta_with_beads(beads: [&str; 3]) -> BeadedDiagram {
    let ctx = DeltaContext::validate_alexander(&LaurentPoly::parse("t - 1 + t^-1").unwrap())
        .unwrap();
    BeadedDiagram::from_parts(
        ctx.clone(),
        2,
        beads
            .iter()
            .map(|b| (0, 1, Bead::new(LaurentPoly::parse(b).unwrap(), ctx.clone())))
            .collect(),
        BTreeMap::new(),
        BTreeMap::new(),
    )
    .unwrap()
}

fn degree_three_chain() -> BeadedDiagram {
    // Three thetas side by side; a 6-vertex reduction case with symmetry.
    let ctx = DeltaContext::trivial();
    let one = Bead::one(ctx.clone());
    let t = Bead::new(LaurentPoly::parse("t").unwrap(), ctx.clone());
    BeadedDiagram::from_parts(
        ctx,
        6,
        vec![
            (0, 1, t.clone()),
            (0, 1, one.clone()),
            (0, 1, one.clone()),
            (2, 3, t.clone()),
            (2, 3, one.clone()),
            (2, 3, one.clone()),
            (4, 5, t),
            (4, 5, one.clone()),
            (4, 5, one),
        ],
        BTreeMap::new(),
        BTreeMap::new(),
    )
    .unwrap()
}

fn bench_reduce(c: &mut Criterion) {
    let beaded = theta_with_beads(["t^2 - t + 1", "t^-1", "1"]);
    c.bench_function("reduce theta over trefoil context", |b| {
        b.iter(|| {
            DiagramSum::reduce(
                1,
                beaded.context().clone(),
                vec![(qi(1), beaded.clone())],
            )
            .unwrap()
        })
    });

    let chain = degree_three_chain();
    c.bench_function("reduce degree-3 triple theta", |b| {
        b.iter(|| {
            DiagramSum::reduce(3, chain.context().clone(), vec![(qi(1), chain.clone())])
                .unwrap()
        })
    });
}

fn bench_canonical_key(c: &mut Criterion) {
    let chain = degree_three_chain();
    c.bench_function("canonical key of degree-3 diagram", |b| {
        b.iter(|| chain.canonical_key().unwrap())
    });
}

criterion_group!(benches, bench_reduce, bench_canonical_key);
criterion_main!(benches);
