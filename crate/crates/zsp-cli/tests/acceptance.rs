//! Acceptance sweep: nine broad checks of the library's published
//! behavior, each printing one `pass`/`fail` summary line with its elapsed
//! time (visible under `--nocapture`) and asserting a wall-clock budget.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use zsp_core::group::{find_complete_mapping, GroupError};
use zsp_core::labeling::{
    distance_antimagic_label, distance_magic_label, irregular_label, verify_distance_antimagic,
    verify_distance_magic, verify_irregular, Digraph, Graph,
};
use zsp_core::partition::parse_tables;
use zsp_core::skolem::skolem_partition;
use zsp_core::{classify, oracle, realize, verify_partition, Classification, GroupSpec};

fn report(n: usize, name: &str, limit_s: u64, start: Instant) {
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed <= limit_s as f64 {
        println!("acceptance {n} ({name}): pass ({elapsed:.2}s, limit {limit_s}s)");
    } else {
        println!("acceptance {n} ({name}): fail ({elapsed:.2}s over the {limit_s}s limit)");
        panic!("acceptance {n} ({name}) exceeded its {limit_s}s time limit: {elapsed:.2}s");
    }
}

fn g(factors: &[u16]) -> GroupSpec {
    GroupSpec::new(factors.to_vec()).expect("valid factors")
}

/// All partitions of `k` into positive integers, largest part first.
fn partitions_of(k: u32) -> Vec<Vec<u32>> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// Every Abelian group of the given order (≥ 2), one spec per isomorphism
/// class, via exponent partitions of each prime power.
fn all_abelian_groups(order: u64) -> Vec<GroupSpec> {
    let mut m = order;
    let mut prime_powers: Vec<(u64, u32)> = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            prime_powers.push((p, k));
        }
        p += 1;
    }
    if m > 1 {
        prime_powers.push((m, 1));
    }
    let mut factor_lists: Vec<Vec<u16>> = vec![Vec::new()];
    for (p, k) in prime_powers {
        let mut next = Vec::new();
        for part in partitions_of(k) {
            for base in &factor_lists {
                let mut f = base.clone();
                f.extend(part.iter().map(|&e| p.pow(e) as u16));
                next.push(f);
            }
        }
        factor_lists = next;
    }
    factor_lists.into_iter().map(|f| g(&f)).collect()
}

/// All `(a, b, c)` with `3a + 4b + 5c = total`.
fn size_triples(total: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for c in 0..=total / 5 {
        for b in 0..=(total - 5 * c) / 4 {
            let rem = total - 5 * c - 4 * b;
            if rem % 3 == 0 {
                out.push((rem / 3, b, c));
            }
        }
    }
    out
}

fn sizes_from(a: usize, b: usize, c: usize, twos: usize) -> Vec<usize> {
    let mut sizes = vec![3; a];
    sizes.extend(vec![4; b]);
    sizes.extend(vec![5; c]);
    sizes.extend(vec![2; twos]);
    sizes
}

/// Multisets of integers in `[min, max]` summing to `total`, non-increasing.
fn multisets_between(total: usize, min: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, cap: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (min..=cap.min(rem)).rev() {
            if rem - part != 0 && rem - part < min {
                continue;
            }
            cur.push(part);
            rec(rem - part, part, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, max, min, &mut Vec::new(), &mut out);
    out
}

fn realize_and_check(spec: &GroupSpec, sizes: &[usize]) {
    let real = realize(spec, sizes)
        .unwrap_or_else(|e| panic!("{spec} with sizes {sizes:?} should be realizable: {e}"));
    let report = verify_partition(spec, &real.partition, Some(sizes));
    assert!(
        report.ok,
        "{spec} with sizes {sizes:?}: construction fails verification: {:?}",
        report.violations
    );
}

// ──────────────────────────────────────────────────────────────────────────
// 1. Bundled tables load and verify with their stated size profiles
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn acceptance_1_bundled_tables() {
    let start = Instant::now();
    let bundles = [
        (include_str!("../../zsp-core/src/engine/tables_2223.txt"), 5),
        (include_str!("../../zsp-core/src/engine/tables_2225.txt"), 12),
    ];
    for (text, expected_blocks) in bundles {
        let blocks = parse_tables(text).expect("bundled tables parse");
        assert_eq!(blocks.len(), expected_blocks);
        for block in &blocks {
            let spec = block.spec().expect("bundled factors are valid");
            let expected: Option<Vec<usize>> = if let Some(t) = &block.count_triple {
                assert_eq!(t.len(), 3);
                Some(sizes_from(t[0], t[1], t[2], 0))
            } else {
                block.sizes_note.as_ref().map(|pairs| {
                    pairs
                        .iter()
                        .flat_map(|&(count, size)| std::iter::repeat(size).take(count))
                        .collect()
                })
            };
            let report = verify_partition(&spec, &block.partition(), expected.as_deref());
            assert!(
                report.ok,
                "bundled table for {spec} fails verification: {:?}",
                report.violations
            );
        }
    }
    report(1, "bundled tables", 1, start);
}

// ──────────────────────────────────────────────────────────────────────────
// 2. Every 3/4/5 count split of the two bundle groups is constructed
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn acceptance_2_base_group_closure() {
    let start = Instant::now();
    for factors in [[2u16, 2, 2, 3], [2, 2, 2, 5]] {
        let spec = g(&factors);
        let total = (spec.order() - 1) as usize;
        let triples = size_triples(total);
        assert!(!triples.is_empty());
        for (a, b, c) in triples {
            realize_and_check(&spec, &sizes_from(a, b, c, 0));
        }
    }
    report(2, "base group closure", 10, start);
}

// ──────────────────────────────────────────────────────────────────────────
// 3. The exhaustive oracle agrees with the classification (orders ≤ 32)
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn acceptance_3_oracle_agreement() {
    let start = Instant::now();
    for order in 2..=oracle::MAX_ENUMERATION_ORDER {
        for spec in all_abelian_groups(order) {
            let class = classify(&spec);
            let results = oracle::enumerate_realizable(&spec, 2, None)
                .unwrap_or_else(|e| panic!("enumeration on {spec} failed: {e}"));
            let elementary_two = spec.factors().iter().all(|&f| f == 2);
            for (sizes, realizable) in &results {
                let min = *sizes.iter().min().expect("non-empty multiset");
                match class {
                    Classification::NoZspp => assert!(
                        !realizable,
                        "{spec} has a unique involution but {sizes:?} was realized"
                    ),
                    Classification::TwoZspp => assert!(
                        realizable,
                        "{spec} should realize every multiset, but {sizes:?} failed"
                    ),
                    Classification::ThreeZspp | Classification::FourZsppOnlyKnown => {
                        if min >= 3 {
                            assert!(
                                realizable,
                                "{spec} should realize every multiset with parts ≥ 3, \
                                 but {sizes:?} failed"
                            );
                        } else if elementary_two {
                            assert!(
                                !realizable,
                                "{spec} has no non-involution inverse pairs, \
                                 but {sizes:?} was realized"
                            );
                        }
                    }
                }
            }
        }
    }
    report(3, "oracle agreement", 600, start);
}

// ──────────────────────────────────────────────────────────────────────────
// 4. Constructive sweep over representative groups of each odd-part residue
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn acceptance_4_construction_sweep() {
    let start = Instant::now();

    // Odd part ≡ 1 or 3 (mod 6): every 3/4/5 count split works.
    let floor_three: [&[u16]; 6] = [
        &[2, 2, 2, 7],
        &[2, 2, 2, 2, 7],
        &[2, 4, 7],
        &[2, 2, 2, 3],
        &[2, 2, 4, 3],
        &[2, 4, 9],
    ];
    for factors in floor_three {
        let spec = g(factors);
        let total = (spec.order() - 1) as usize;
        for (a, b, c) in size_triples(total) {
            realize_and_check(&spec, &sizes_from(a, b, c, 0));
        }
    }

    // Odd part ≡ 5 (mod 6): every 4/5 count split and every multiset with
    // parts between 4 and 7.
    let floor_four: [&[u16]; 3] = [&[2, 2, 2, 5], &[2, 2, 5], &[2, 8, 5]];
    for factors in floor_four {
        let spec = g(factors);
        let total = (spec.order() - 1) as usize;
        for (a, b, c) in size_triples(total) {
            if a == 0 {
                realize_and_check(&spec, &sizes_from(0, b, c, 0));
            }
        }
        for sizes in multisets_between(total, 4, 7) {
            realize_and_check(&spec, &sizes);
        }
    }

    report(4, "construction sweep", 300, start);
}

// ──────────────────────────────────────────────────────────────────────────
// 5. Pair-heavy sweep: 3/4/5 splits plus up to the maximum number of 2-parts
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn acceptance_5_pair_heavy_sweep() {
    let start = Instant::now();
    for factors in [[2u16, 2, 7], [2, 2, 13]] {
        let spec = g(&factors);
        let total = (spec.order() - 1) as usize;
        // Three involutions: every part of size 2 uses up one of the
        // (total − 3)/2 non-involution inverse pairs.
        let max_twos = (total - 3) / 2;
        for twos in 0..=max_twos {
            for (a, b, c) in size_triples(total - 2 * twos) {
                realize_and_check(&spec, &sizes_from(a, b, c, twos));
            }
        }
    }
    report(5, "pair-heavy sweep", 120, start);
}

// ──────────────────────────────────────────────────────────────────────────
// 6. Six-set/pair decompositions cover every odd cyclic group up to 201
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn acceptance_6_skolem_coverage() {
    let start = Instant::now();
    let mut specs: Vec<GroupSpec> = (3..=201u16).step_by(2).map(|q| g(&[q])).collect();
    specs.extend([g(&[3, 3]), g(&[3, 9]), g(&[5, 5]), g(&[3, 3, 3])]);
    for spec in specs {
        let sp = skolem_partition(&spec)
            .unwrap_or_else(|e| panic!("six-set decomposition of {spec} failed: {e}"));
        let universe: BTreeSet<_> = spec.nonzero_elements().collect();
        assert!(
            sp.verify_covers(&spec, &universe),
            "decomposition of {spec} does not cover the non-zero elements exactly"
        );
        let expected_pairs = match spec.order() % 6 {
            1 => 0,
            3 => 1,
            5 => 2,
            _ => unreachable!("odd order"),
        };
        assert_eq!(
            sp.leftover_pairs.len(),
            expected_pairs,
            "decomposition of {spec} has the wrong number of leftover pairs"
        );
    }
    report(6, "six-set coverage", 60, start);
}

// ──────────────────────────────────────────────────────────────────────────
// 7. Complete mappings exist exactly where the involution count allows
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn acceptance_7_complete_mappings() {
    let start = Instant::now();
    for order in 2..=64 {
        for spec in all_abelian_groups(order) {
            if spec.involution_count() == 1 {
                continue;
            }
            let cm = find_complete_mapping(&spec)
                .unwrap_or_else(|e| panic!("no complete mapping found for {spec}: {e}"));
            assert!(cm.verify(), "complete mapping for {spec} fails verification");
        }
    }
    for factors in [[4u16], [8]] {
        let spec = g(&factors);
        assert!(
            matches!(
                find_complete_mapping(&spec),
                Err(GroupError::NoCompleteMapping { .. })
            ),
            "{spec} has a unique involution and must refuse a complete mapping"
        );
    }
    report(7, "complete mappings", 60, start);
}

// ──────────────────────────────────────────────────────────────────────────
// 8. Labeling applications on random graphs
// ──────────────────────────────────────────────────────────────────────────

/// An odd modulus `q ≥ lo` (plus a small random offset).
fn odd_at_least(lo: u64, rng: &mut StdRng) -> u16 {
    let mut q = lo + rng.gen_range(0..6);
    if q % 2 == 0 {
        q += 1;
    }
    q as u16
}

/// A group of order `target` with more than one involution (or none).
/// `target` must not be ≡ 2 (mod 4), where every group has exactly one.
fn friendly_group_of_order(target: u64) -> GroupSpec {
    assert_ne!(target % 4, 2);
    if target % 2 == 1 {
        g(&[target as u16])
    } else {
        g(&[2, 2, (target / 4) as u16])
    }
}

#[test]
fn acceptance_8_labeling_applications() {
    let start = Instant::now();
    let rng = &mut StdRng::seed_from_u64(0xC0FFEE);

    // Arc labelings with pairwise-distinct induced vertex values on random
    // multi-component digraphs.
    for i in 0..200 {
        let comps = rng.gen_range(4..=5);
        let mut arcs: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut base = 0;
        for _ in 0..comps {
            let size = rng.gen_range(4..=7);
            for v in 1..size {
                let u = rng.gen_range(0..v);
                if rng.gen_bool(0.5) {
                    arcs.insert((base + u, base + v));
                } else {
                    arcs.insert((base + v, base + u));
                }
            }
            for _ in 0..size / 2 {
                let u = rng.gen_range(0..size);
                let v = rng.gen_range(0..size);
                if u != v {
                    arcs.insert((base + u, base + v));
                }
            }
            base += size;
        }
        let arcs: Vec<(usize, usize)> = arcs.into_iter().collect();
        let d = Digraph::new(base, &arcs).expect("generated digraph is valid");
        let n = d.vertex_count() as u64;
        let spec = if i % 2 == 0 {
            g(&[odd_at_least(n + 5, rng)])
        } else {
            g(&[2, 2, odd_at_least((n + 5).div_ceil(4), rng)])
        };
        let labeling = irregular_label(&d, &spec)
            .unwrap_or_else(|e| panic!("arc labeling of digraph {i} over {spec} failed: {e}"));
        assert!(
            verify_irregular(&d, &spec, &labeling),
            "arc labeling of digraph {i} over {spec} fails verification"
        );
    }

    // Constant-weight vertex labelings of complete multipartite graphs.
    let mut done = 0;
    while done < 100 {
        let parts: Vec<usize> = (0..rng.gen_range(2..=5))
            .map(|_| rng.gen_range(4..=7))
            .collect();
        let n: usize = parts.iter().sum();
        if (n + 1) % 4 == 2 {
            continue;
        }
        let graph = Graph::complete_multipartite(&parts);
        let spec = friendly_group_of_order(n as u64 + 1);
        let labeling = distance_magic_label(&graph, &spec).unwrap_or_else(|e| {
            panic!("constant-weight labeling of parts {parts:?} over {spec} failed: {e}")
        });
        assert!(verify_distance_magic(&graph, &spec, &labeling));
        assert_eq!(
            labeling.weights[0],
            spec.zero(),
            "the common weight over {spec} is not the identity"
        );
        done += 1;
    }

    // Distinct-weight vertex labelings of disjoint unions of cliques, where
    // every weight is the negated label.
    let mut done = 0;
    while done < 100 {
        let cliques: Vec<usize> = (0..rng.gen_range(2..=5))
            .map(|_| rng.gen_range(4..=8))
            .collect();
        let n: usize = cliques.iter().sum();
        if (n + 1) % 4 == 2 {
            continue;
        }
        let mut edges = Vec::new();
        let mut base = 0;
        for &size in &cliques {
            for u in 0..size {
                for v in u + 1..size {
                    edges.push((base + u, base + v));
                }
            }
            base += size;
        }
        let graph = Graph::new(n, &edges).expect("generated clique union is valid");
        let spec = friendly_group_of_order(n as u64 + 1);
        let labeling = distance_antimagic_label(&graph, &spec).unwrap_or_else(|e| {
            panic!("distinct-weight labeling of cliques {cliques:?} over {spec} failed: {e}")
        });
        assert!(verify_distance_antimagic(&graph, &spec, &labeling));
        for v in 0..n {
            assert_eq!(
                labeling.weights[v],
                spec.negate(&labeling.labels[v]),
                "vertex {v} over {spec} does not weigh its negated label"
            );
        }
        done += 1;
    }

    report(8, "labeling applications", 180, start);
}

// ──────────────────────────────────────────────────────────────────────────
// 9. Classification trichotomy over all orders in [4, 100]
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn acceptance_9_classification_trichotomy() {
    let start = Instant::now();
    for order in 4..=100u64 {
        let classes: Vec<Classification> = all_abelian_groups(order)
            .iter()
            .map(classify)
            .collect();
        if order % 4 == 2 {
            assert!(
                classes.iter().all(|c| *c == Classification::NoZspp),
                "every group of order {order} has a unique involution"
            );
        } else if order % 2 == 1 {
            assert!(
                classes.iter().all(|c| *c == Classification::TwoZspp),
                "every odd-order group realizes all multisets with parts ≥ 2"
            );
        } else {
            assert!(
                classes
                    .iter()
                    .any(|c| matches!(c.guaranteed_floor(), Some(f) if f <= 4)),
                "order {order} should have a group with a guaranteed floor ≤ 4"
            );
        }
    }
    report(9, "classification trichotomy", 5, start);
}
