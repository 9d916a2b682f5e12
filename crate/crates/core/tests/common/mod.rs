//! Seeded random generators shared by the integration suites.
//!
//! Each suite uses its own subset of these helpers.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use beadiag::contraction::{Handlebody, LinkingTable, SurgeryDatum, TrilinearForm};
use beadiag::diagram::BeadedDiagram;
use beadiag::laurent::{Bead, ContextHandle, DeltaContext, LaurentPoly};
use beadiag::normalform::DiagramSum;
use beadiag::rational::Q;
use beadiag::series::GradedSeries;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// The three delta contexts the suites rotate through: trivial, a
/// symmetric annihilator, and one with symmetry shift 1.
pub fn contexts() -> Vec<ContextHandle> {
    vec![
        DeltaContext::trivial(),
        DeltaContext::validate_alexander(&LaurentPoly::parse("t - 1 + t^-1").unwrap()).unwrap(),
        DeltaContext::validate_alexander(&LaurentPoly::parse("1/2 + 1/2 t").unwrap()).unwrap(),
    ]
}

pub fn random_context(rng: &mut StdRng) -> ContextHandle {
    let all = contexts();
    all[rng.gen_range(0..all.len())].clone()
}

/// A random nonzero Laurent polynomial with exponents in `[-3, 3]`;
/// mostly monomials so multilinear expansions stay small.
pub fn random_laurent(rng: &mut StdRng) -> LaurentPoly {
    loop {
        let terms = match rng.gen_range(0..100) {
            0..=69 => 1,
            70..=94 => 2,
            _ => 3,
        };
        let mut p = LaurentPoly::zero();
        for _ in 0..terms {
            let e = rng.gen_range(-3..=3);
            let num = rng.gen_range(-4i64..=4);
            let den = rng.gen_range(1i64..=3);
            p = p.add(&LaurentPoly::monomial(e, q(num, den)));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_bead(rng: &mut StdRng, ctx: &ContextHandle) -> Bead {
    Bead::new(random_laurent(rng), ctx.clone())
}

/// A random closed trivalent diagram of loop degree `n` (loops allowed)
/// with random beads, orientations and cyclic orders.
pub fn random_diagram(rng: &mut StdRng, n: usize, ctx: &ContextHandle) -> BeadedDiagram {
    // Random perfect matching of the 6n half-edge slots.
    let mut slots: Vec<usize> = (0..6 * n).collect();
    for i in (1..slots.len()).rev() {
        let j = rng.gen_range(0..=i);
        slots.swap(i, j);
    }
    let mut edges = Vec::with_capacity(3 * n);
    for pair in slots.chunks(2) {
        let (a, b) = (pair[0] / 3, pair[1] / 3);
        edges.push((a, b, random_bead(rng, ctx)));
    }
    let mut d = BeadedDiagram::from_parts(ctx.clone(), 2 * n, edges, BTreeMap::new(), BTreeMap::new())
        .expect("random matching is trivalent");
    // Shuffle cyclic orders by random rotations and flips.
    for v in 0..2 * n {
        if rng.gen_bool(0.5) {
            d = d.rotate_vertex(v);
        }
        if rng.gen_bool(0.5) {
            // Two flips cancel the sign; do them in pairs to keep the
            // diagram in the same signed presentation family. Callers that
            // track signs use `random_move` instead.
            d = d.flip_vertex(v).flip_vertex(v);
        }
    }
    d
}

/// One random relation move; returns the moved diagram and the sign the
/// class picks up.
pub fn random_move(rng: &mut StdRng, d: &BeadedDiagram) -> (BeadedDiagram, i8) {
    let nv = d.num_vertices();
    let ne = d.num_edges();
    match rng.gen_range(0..4) {
        0 => {
            let v = rng.gen_range(0..nv);
            let dir = if rng.gen_bool(0.5) { 1 } else { -1 };
            (d.holonomy_move(v, dir), 1)
        }
        1 => {
            let e = rng.gen_range(0..ne);
            (d.flip_edge(e), 1)
        }
        2 => {
            let v = rng.gen_range(0..nv);
            (d.flip_vertex(v), -1)
        }
        _ => {
            let v = rng.gen_range(0..nv);
            (d.rotate_vertex(v), 1)
        }
    }
}

/// A random sparse exchange-symmetric surgery datum.
pub fn random_datum(rng: &mut StdRng, n: usize, max_genus: usize) -> SurgeryDatum {
    let ctx = random_context(rng);
    let mut handlebodies = Vec::new();
    for _ in 0..2 * n {
        let genus = rng.gen_range(3..=max_genus.max(3));
        let mut form = TrilinearForm::new(genus);
        let triples = if n == 1 { rng.gen_range(1..=2) } else { 1 };
        for _ in 0..triples {
            let mut idx;
            loop {
                let mut pick: Vec<usize> = (1..=genus).collect();
                for i in (1..pick.len()).rev() {
                    let j = rng.gen_range(0..=i);
                    pick.swap(i, j);
                }
                idx = [pick[0], pick[1], pick[2]];
                idx.sort_unstable();
                if idx[0] < idx[1] && idx[1] < idx[2] {
                    break;
                }
            }
            let value = q(rng.gen_range(-3i64..=3), rng.gen_range(1i64..=2));
            let value = if value.is_zero() { Q::one() } else { value };
            form.set(idx[0], idx[1], idx[2], value).unwrap();
        }
        handlebodies.push(Handlebody {
            genus,
            shift: rng.gen_range(-2..=2),
            form,
        });
    }
    // Sparse upper-triangular linking entries over every curve pair; the
    // table completes the conjugates.
    let mut curves: Vec<(usize, usize)> = Vec::new();
    for (i, h) in handlebodies.iter().enumerate() {
        for j in 1..=h.genus {
            curves.push((i + 1, j));
        }
    }
    let mut entries = Vec::new();
    for (a, &x) in curves.iter().enumerate() {
        for &y in curves.iter().skip(a + 1) {
            let bead = if rng.gen_bool(0.45) {
                Bead::zero(ctx.clone())
            } else {
                let e = rng.gen_range(-2i64..=2);
                let c = q(rng.gen_range(-2i64..=2).max(1), 1);
                let mut p = LaurentPoly::monomial(e, c);
                if rng.gen_bool(0.25) {
                    p = p.add(&LaurentPoly::monomial(rng.gen_range(-2i64..=2), Q::one()));
                }
                Bead::new(p, ctx.clone())
            };
            entries.push((x, y, bead));
        }
    }
    let table = LinkingTable::from_entries(ctx.clone(), entries).unwrap();
    SurgeryDatum {
        n,
        handlebodies,
        table,
        context: ctx,
    }
}

/// A random series with zero degree-0 part and a couple of small diagrams
/// per degree.
pub fn random_low_series(rng: &mut StdRng, truncation: usize, ctx: &ContextHandle) -> GradedSeries {
    let mut z = GradedSeries::zero(truncation, ctx.clone());
    for degree in 1..=truncation {
        let mut sum = DiagramSum::zero(degree, ctx.clone());
        let terms = rng.gen_range(0..=1);
        for _ in 0..=terms {
            let coeff = q(rng.gen_range(-3i64..=3), rng.gen_range(1i64..=4));
            if coeff.is_zero() {
                continue;
            }
            sum.insert(coeff, random_diagram(rng, degree, ctx)).unwrap();
        }
        z.set_component(degree, sum).unwrap();
    }
    z
}

/// Connected-only variant used by the connected-part checks.
pub fn random_connected_series(
    rng: &mut StdRng,
    truncation: usize,
    ctx: &ContextHandle,
) -> GradedSeries {
    let mut z = GradedSeries::zero(truncation, ctx.clone());
    for degree in 1..=truncation {
        let mut sum = DiagramSum::zero(degree, ctx.clone());
        for _ in 0..8 {
            let d = random_diagram(rng, degree, ctx);
            if d.is_connected() {
                let coeff = q(rng.gen_range(-3i64..=3).max(1), rng.gen_range(1i64..=4));
                sum.insert(coeff, d).unwrap();
                break;
            }
        }
        z.set_component(degree, sum).unwrap();
    }
    z
}

/// Tadpole probe: a loop with adjustable bead, its stick, and a second
/// loop carrying an antisymmetric bead so the diagram class can survive.
pub fn probe_tadpole(loop_bead: &LaurentPoly, stick_bead: &LaurentPoly, ctx: &ContextHandle) -> BeadedDiagram {
    let anti = {
        // t*delta(t) - conj(t*delta(t)) style antisymmetric numerator.
        let base = LaurentPoly::parse("t").unwrap().mul(ctx.delta());
        let mirrored = Bead::new(base.clone(), ctx.clone()).conjugate();
        base.sub(mirrored.numerator())
    };
    BeadedDiagram::from_parts(
        ctx.clone(),
        2,
        vec![
            (0, 0, Bead::new(loop_bead.clone(), ctx.clone())),
            (0, 1, Bead::new(stick_bead.clone(), ctx.clone())),
            (1, 1, Bead::new(anti, ctx.clone())),
        ],
        BTreeMap::new(),
        BTreeMap::new(),
    )
    .unwrap()
}

