//! Acceptance suite: one test per criterion, each printing a PASS line
//! once its checks hold exactly. Run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the lines).

mod common;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use beadiag::contraction::{
    all_triple_choices, choice_coefficient, chosen_tripods, contract, contract_via_colorings,
    glue_pairing, ordered_legs, pairings_of, surgery_rhs, SlotBijection,
};
use beadiag::diagram::BeadedDiagram;
use beadiag::enumeration::{
    enumerate_graphs, matching_count_oracle, tadpole_class_counts, Family,
};
use beadiag::ihx::{ihx_closure, ihx_triple};
use beadiag::laurent::{Bead, DeltaContext, LaurentPoly};
use beadiag::normalform::DiagramSum;
use beadiag::rational::Q;
use beadiag::series::{
    correction_factor, exp_via_partitions, framing_correct, AnomalySeries, GradedSeries,
};

use common::*;

#[test]
fn criterion_1_relation_soundness() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    for case in 0..500 {
        let ctx = random_context(&mut rng);
        let n = rng.gen_range(1..=3);
        let original = random_diagram(&mut rng, n, &ctx);
        let base = DiagramSum::reduce(n, ctx.clone(), vec![(Q::one(), original.clone())]).unwrap();
        let mut moved = original;
        let mut sign = 1i8;
        for _ in 0..20 {
            let (next, s) = random_move(&mut rng, &moved);
            moved = next;
            sign *= s;
        }
        let moved_sum = DiagramSum::reduce(n, ctx, vec![(Q::one(), moved)]).unwrap();
        let expected = if sign < 0 { base.neg() } else { base };
        assert_eq!(moved_sum, expected, "case {case} drifted under moves");
    }
    println!("criterion 1 (relation soundness, 500 x 20 moves): PASS");
}

#[test]
fn criterion_2_tadpole_identity_suite() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let half = q(1, 2);
    // Three-way loop-bead equality for 100 random beads.
    for _ in 0..100 {
        let ctx = random_context(&mut rng);
        let b = random_laurent(&mut rng);
        let b_conj = Bead::new(b.clone(), ctx.clone()).conjugate().numerator().clone();
        let anti = b.sub(&b_conj);
        let one = LaurentPoly::one().mul(ctx.delta());

        let direct = DiagramSum::reduce(
            1,
            ctx.clone(),
            vec![(Q::one(), probe_tadpole(&b, &one, &ctx))],
        )
        .unwrap();
        let conj_neg = DiagramSum::reduce(
            1,
            ctx.clone(),
            vec![(-Q::one(), probe_tadpole(&b_conj, &one, &ctx))],
        )
        .unwrap();
        let split = DiagramSum::reduce(
            1,
            ctx.clone(),
            vec![(half.clone(), probe_tadpole(&anti, &one, &ctx))],
        )
        .unwrap();
        assert_eq!(direct, conj_neg);
        assert_eq!(direct, split);
    }
    // Stick-bead evaluation for 100 random polynomials.
    for _ in 0..100 {
        let ctx = random_context(&mut rng);
        let p = random_laurent(&mut rng);
        let loop_bead = LaurentPoly::parse("t^2").unwrap();
        let one = LaurentPoly::one().mul(ctx.delta());
        let with_p = DiagramSum::reduce(
            1,
            ctx.clone(),
            vec![(Q::one(), probe_tadpole(&loop_bead, &p, &ctx))],
        )
        .unwrap();
        let with_one = DiagramSum::reduce(
            1,
            ctx.clone(),
            vec![(Q::one(), probe_tadpole(&loop_bead, &one, &ctx))],
        )
        .unwrap();
        assert_eq!(with_p, with_one.scale(&p.eval_one()));
    }
    // The unbeaded tadpole vanishes, in every context.
    for ctx in contexts() {
        let dumbbell = BeadedDiagram::dumbbell(ctx.clone());
        assert!(DiagramSum::reduce(1, ctx, vec![(Q::one(), dumbbell)])
            .unwrap()
            .is_zero());
    }
    println!("criterion 2 (tadpole identity suite, 100 + 100 random instances): PASS");
}

#[test]
fn criterion_3_lift_independence() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    for case in 0..100 {
        let n = if case % 10 < 7 { 1 } else { 2 };
        let mut datum = random_datum(&mut rng, n, 4);
        let before = surgery_rhs(&datum).unwrap();
        let which = rng.gen_range(0..datum.handlebodies.len());
        let delta_shift = *[-2i64, -1, 1, 2, 3].get(rng.gen_range(0..5)).unwrap();
        datum.handlebodies[which].shift += delta_shift;
        let after = surgery_rhs(&datum).unwrap();
        assert_eq!(before, after, "case {case}: shift change leaked");
    }
    println!("criterion 3 (lift independence, 100 random data): PASS");
}

#[test]
fn criterion_4_two_path_identity_degree_one() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    for case in 0..25 {
        let datum = random_datum(&mut rng, 1, 4);
        let mut swept_total = DiagramSum::zero(1, datum.context.clone());
        let mut paired_total = DiagramSum::zero(1, datum.context.clone());
        for dd in all_triple_choices(&datum) {
            let swept = contract_via_colorings(&datum, &dd, 1_000).unwrap();
            let ci = choice_coefficient(&datum, &dd);
            let paired = if ci.is_zero() {
                DiagramSum::zero(1, datum.context.clone())
            } else {
                contract(
                    1,
                    &[(ci, chosen_tripods(&datum, &dd).unwrap())],
                    &datum.table,
                )
                .unwrap()
            };
            assert_eq!(swept, paired, "case {case}: per-choice mismatch");
            swept_total = swept_total.add(&swept).unwrap();
            paired_total = paired_total.add(&paired).unwrap();
        }
        assert_eq!(swept_total, paired_total);
        // Both routes also reproduce the assembled right-hand side.
        assert_eq!(paired_total, surgery_rhs(&datum).unwrap());
    }
    println!("criterion 4 (two-path identity at n = 1, 25 random data, 720 bijections each): PASS");
}

/// Optional smoke test for n = 2: the full 12! sweep is out of reach, so
/// sample bijections and check each one against its glued pairing.
#[test]
fn criterion_4_smoke_degree_two_sampled() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0042);
    let datum = random_datum(&mut rng, 2, 3);
    let dd = all_triple_choices(&datum)[0].clone();
    let tripod_union = chosen_tripods(&datum, &dd).unwrap();
    let legs = ordered_legs(&tripod_union).unwrap();
    // Leg vertex for codomain slot (i, k): tripod i sits at vertices
    // 4i..4i+3 with legs in slot order.
    let leg_of_slot = |slot: (usize, usize)| -> usize { 4 * slot.0 + 1 + slot.1 };
    assert_eq!(legs.len(), 12);
    let mut codomain: Vec<(usize, usize)> = Vec::new();
    for i in 0..4 {
        for k in 0..3 {
            codomain.push((i, k));
        }
    }
    for _ in 0..300 {
        // Random bijection as a shuffle of the codomain.
        let mut b: SlotBijection = codomain.clone();
        for i in (1..b.len()).rev() {
            let j = rng.gen_range(0..=i);
            b.swap(i, j);
        }
        let gamma = beadiag::contraction::bijection_term(&datum, &dd, &b).unwrap();
        let via_gamma =
            DiagramSum::reduce(2, datum.context.clone(), vec![(Q::one(), gamma)]).unwrap();
        // The corresponding pairing glues the same class.
        let pairs: Vec<(usize, usize)> = (0..6)
            .map(|r| (leg_of_slot(b[2 * r]), leg_of_slot(b[2 * r + 1])))
            .collect();
        let glued = glue_pairing(&tripod_union, &pairs, &datum.table).unwrap();
        let via_pairing = match glued {
            Some(d) => DiagramSum::reduce(2, datum.context.clone(), vec![(Q::one(), d)]).unwrap(),
            None => DiagramSum::zero(2, datum.context.clone()),
        };
        assert_eq!(via_gamma, via_pairing);
    }
    println!("criterion 4 smoke (n = 2, 300 sampled bijections vs glued pairings): PASS");
}

#[test]
fn criterion_5_exponential_identities() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0005);
    // Partition route vs Taylor route, truncation 5.
    for case in 0..100 {
        let ctx = random_context(&mut rng);
        let z = random_low_series(&mut rng, 5, &ctx);
        let a = z.exp().unwrap();
        let b = exp_via_partitions(&z).unwrap();
        assert_eq!(a, b, "case {case}: partition route disagrees");
    }
    // Homomorphism and round trip.
    for _ in 0..100 {
        let ctx = random_context(&mut rng);
        let a = random_low_series(&mut rng, 4, &ctx);
        let b = random_low_series(&mut rng, 4, &ctx);
        let sum_exp = a.add(&b).unwrap().exp().unwrap();
        let product = a.exp().unwrap().product(&b.exp().unwrap()).unwrap();
        assert_eq!(sum_exp, product);
        assert_eq!(a.exp().unwrap().log().unwrap(), a);
    }
    println!("criterion 5 (exp = partition route, exp additivity, log round trip; 100 each): PASS");
}

#[test]
fn criterion_6_anomaly_bookkeeping() {
    // Degree-1 correction at p1 = 4 with the default anomaly.
    let alpha = AnomalySeries::default_up_to(4);
    alpha.validate().unwrap();
    for n in (0..=4).step_by(2) {
        assert!(alpha.series().components()[n].is_zero());
    }
    let ctx = DeltaContext::trivial();
    let one = GradedSeries::one(4, ctx.clone());
    let corrected = framing_correct(&one, &q(4, 1), &alpha).unwrap();
    let mut expected = DiagramSum::zero(1, ctx.clone());
    expected
        .insert(q(-1, 12), BeadedDiagram::theta(ctx.clone()))
        .unwrap();
    assert_eq!(corrected.components()[1], expected);

    // Degree-2 part of the correction factor: (p1/48)^2/2 on theta theta.
    let factor = correction_factor(4, ctx.clone(), &q(4, 1), &alpha).unwrap();
    let d2 = &factor.components()[2];
    assert_eq!(d2.num_terms(), 1);
    let (_, d, c) = d2.terms().next().unwrap();
    assert_eq!(d.components().len(), 2);
    assert_eq!(c.clone(), q(16, 4608));

    // The correction also lands inside a nontrivial context.
    let trefoil =
        DeltaContext::validate_alexander(&LaurentPoly::parse("t - 1 + t^-1").unwrap()).unwrap();
    let one_t = GradedSeries::one(2, trefoil.clone());
    let corr = framing_correct(&one_t, &q(4, 1), &alpha).unwrap();
    let back = beadiag::normalform::evaluation_p(&corr.components()[1]).unwrap();
    assert_eq!(back, expected);
    println!("criterion 6 (anomaly bookkeeping, -1/12 theta at p1 = 4): PASS");
}

#[test]
fn criterion_7_counting_oracles() {
    // Matching counts (6n-1)!! for n <= 4 against the recursion, and
    // against explicit enumeration while it is enumerable.
    assert_eq!(matching_count_oracle(6).unwrap(), 15);
    assert_eq!(matching_count_oracle(12).unwrap(), 10395);
    assert_eq!(matching_count_oracle(18).unwrap(), 34459425);
    assert_eq!(matching_count_oracle(24).unwrap(), 316234143225);
    for l in [2usize, 4, 6, 8, 10, 12] {
        assert_eq!(
            pairings_of(l).unwrap().len() as u64,
            matching_count_oracle(l).unwrap()
        );
    }

    // |S^u_1| = 8.
    assert_eq!(enumerate_graphs(1, Family::Su).unwrap().count(), 8);

    // Orbit identity and tadpole counts across all of S^l_n for n <= 2.
    let ctx = DeltaContext::trivial();
    for n in 1..=2usize {
        let group_order: u64 =
            (1u64 << (3 * n)) * fact_u64(3 * n) * fact_u64(2 * n);
        let mut by_class: BTreeMap<Vec<u8>, (beadiag::enumeration::NumberedGraph, u64)> =
            BTreeMap::new();
        let mut dash_total = 0u64;
        let mut labeled_total = 0u64;
        for g in enumerate_graphs(n, Family::Sl).unwrap() {
            labeled_total += 1;
            let key = g.unlabeled_key();
            by_class.entry(key).or_insert_with(|| (g.clone(), 0)).1 += 1;
            // Dashing multiplicities sum back to the family size.
            let mut dashes = 1u64;
            for (a, m, b) in beadiag::enumeration::tadpole_components(&g) {
                dashes *= [a, b].iter().filter(|&&lp| lp < m).count() as u64;
            }
            dash_total += dashes;
        }
        assert_eq!(dash_total, labeled_total);
        for (_, (rep, labeled)) in &by_class {
            let aut = rep.to_diagram(ctx.clone()).unwrap().automorphism_count();
            assert_eq!(group_order % aut, 0, "automorphisms divide the group order");
            assert_eq!(
                *labeled,
                group_order / aut,
                "orbit identity fails for n = {n}"
            );
            let (t, class_size, admissible) = tadpole_class_counts(rep);
            assert_eq!(class_size, 6u64.pow(t as u32));
            assert_eq!(admissible, 6u64.pow(t as u32));
        }
    }

    // Partition-set count: six labels into two unordered triples.
    assert_eq!(beadiag::series::partition_label_count(&[(1, 2)]), 10);
    println!("criterion 7 (counting oracles: matchings, |Su_1|, orbit sizes, 6^t, partitions): PASS");
}

#[test]
fn criterion_8_ihx_window_oracle() {
    let ctx = DeltaContext::trivial();
    // Degree 1, window [0,0]: membership agrees with reduce-to-zero on
    // every enumerated element and the theta class survives.
    let closure = ihx_closure(1, (0, 0), ctx.clone()).unwrap();
    for g in enumerate_graphs(1, Family::Sl).unwrap() {
        let sum = DiagramSum::reduce(
            1,
            ctx.clone(),
            vec![(Q::one(), g.to_diagram(ctx.clone()).unwrap())],
        )
        .unwrap();
        assert_eq!(
            closure.contains_zero_class(&sum).unwrap(),
            sum.is_zero(),
            "membership and reduction disagree on an S^l_1 element"
        );
    }
    let theta = DiagramSum::reduce(
        1,
        ctx.clone(),
        vec![(Q::one(), BeadedDiagram::theta(ctx.clone()))],
    )
    .unwrap();
    assert!(!closure.contains_zero_class(&theta).unwrap());
    assert!(closure.quotient_rank() >= 1);

    // Degree 2: an independent full-elimination oracle over the same
    // window must agree with the engine on 50 random combinations.
    let closure2 = ihx_closure(2, (0, 0), ctx.clone()).unwrap();
    let basis: Vec<(Vec<u8>, BeadedDiagram)> = {
        // Recover representatives through reduction of window diagrams.
        let mut reps: BTreeMap<Vec<u8>, BeadedDiagram> = BTreeMap::new();
        let mut class_seen: BTreeMap<Vec<u8>, ()> = BTreeMap::new();
        for g in enumerate_graphs(2, Family::Sl).unwrap() {
            let uk = g.unlabeled_key();
            if class_seen.insert(uk, ()).is_some() {
                continue;
            }
            let d = g.to_diagram(ctx.clone()).unwrap();
            let sum = DiagramSum::reduce(2, ctx.clone(), vec![(Q::one(), d)]).unwrap();
            for (k, rep, _) in sum.terms() {
                reps.entry(k.clone()).or_insert_with(|| rep.clone());
            }
        }
        reps.into_iter().collect()
    };
    assert_eq!(basis.len(), closure2.basis_len());
    // Relation matrix regenerated in the test, then crunched by an
    // independently written fraction-free elimination.
    let mut relations: Vec<Vec<Q>> = Vec::new();
    let index: BTreeMap<&Vec<u8>, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, (k, _))| (k, i))
        .collect();
    let mut class_seen: BTreeMap<Vec<u8>, ()> = BTreeMap::new();
    for g in enumerate_graphs(2, Family::Sl).unwrap() {
        let uk = g.unlabeled_key();
        if class_seen.insert(uk, ()).is_some() {
            continue;
        }
        let d = g.to_diagram(ctx.clone()).unwrap();
        for e in 0..d.num_edges() {
            let Some(triple) = ihx_triple(&d, e) else {
                continue;
            };
            let mut sum = DiagramSum::zero(2, ctx.clone());
            for part in triple {
                sum.insert(Q::one(), part).unwrap();
            }
            let mut v = vec![Q::zero(); basis.len()];
            let mut ok = true;
            for (k, _, c) in sum.terms() {
                match index.get(k) {
                    Some(&i) => v[i] = c.clone(),
                    None => ok = false,
                }
            }
            if ok && v.iter().any(|c| !c.is_zero()) {
                relations.push(v);
            }
        }
    }
    let base_rank = oracle_rank(relations.clone());
    let mut rng = StdRng::seed_from_u64(0x5eed_0008);
    for case in 0..50 {
        // Half from the relation span (members), half arbitrary.
        let coords: Vec<Q> = if case % 2 == 0 && !relations.is_empty() {
            let mut v = vec![Q::zero(); basis.len()];
            for _ in 0..rng.gen_range(1..=3) {
                let row = &relations[rng.gen_range(0..relations.len())];
                let c = q(rng.gen_range(-3i64..=3), rng.gen_range(1i64..=2));
                for (a, b) in v.iter_mut().zip(row) {
                    *a += c.clone() * b.clone();
                }
            }
            v
        } else {
            (0..basis.len())
                .map(|_| q(rng.gen_range(-2i64..=2), 1))
                .collect()
        };
        // Engine answer.
        let mut sum = DiagramSum::zero(2, ctx.clone());
        for (coord, (_, rep)) in coords.iter().zip(&basis) {
            if !coord.is_zero() {
                sum.insert(coord.clone(), rep.clone()).unwrap();
            }
        }
        let engine = closure2.contains_zero_class(&sum).unwrap();
        // Oracle answer: membership iff appending the vector leaves the
        // rank unchanged.
        let mut with_vec = relations.clone();
        with_vec.push(coords.clone());
        let oracle = oracle_rank(with_vec) == base_rank;
        assert_eq!(engine, oracle, "case {case}: membership oracle disagrees");
    }
    println!("criterion 8 (windowed Jacobi closure vs brute-force elimination, 50 combos): PASS");
}

fn fact_u64(k: usize) -> u64 {
    (1..=k as u64).product::<u64>().max(1)
}

/// Independent elimination: fraction-free row echelon rank.
fn oracle_rank(mut rows: Vec<Vec<Q>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone() / p.clone();
                for c in 0..cols {
                    let sub = factor.clone() * rows[rank][c].clone();
                    rows[r][c] -= sub;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
