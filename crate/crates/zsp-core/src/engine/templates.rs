//! Bundled cover templates for `(Z2)³ × H` with odd part ≡ 1 (mod 6).
//!
//! On this 2-part the involutions only pack as one triple plus one
//! quadruple, and with no 4-parts requested the quadruple must be seeded
//! through the borrowed token layer.  That caps how many triples the
//! product solve can emit, while triple-heavy requests can need up to
//! `16k + 1` of them.  This module covers the overflow with fixed
//! tables: the union of the zero block and the *entire first six-set
//! family* (55 elements) is partitioned into zero-sum triples and
//! 5-sets, written over formal symbols `B`, `C` that instantiate to the
//! first good six-set `(c, d)` of the odd part.  Two covers are bundled
//! — one with 15 triples and two 5-sets, one with 10 triples and five
//! 5-sets — so requests on either side of the solver's reach have a
//! direct cover.  The remaining `8·(k−1)` six-set families split into
//! triples or inverse pairs as the request demands.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::group::{find_complete_mapping, Elem, GroupSpec, Sylow2Split};
use crate::partition::{normalize_sizes, Partition, SizeFloor};
use crate::skolem::skolem_partition;

use super::{alphabet3_counts, with_normalized, ConstructionTrace, Realization, RealizeError};

/// A table entry: (2-part bitmask, coefficient of `B`, coefficient of `C`).
type Entry = (u8, i8, i8);

/// 15 triples, each summing to zero in the 2-part and formally over
/// `B`, `C`.
const TRIPLE_HEAVY_TRIPLES: [[Entry; 3]; 15] = [
    [(7, 0, 0), (0, 0, 1), (7, 0, -1)],
    [(1, 1, 0), (2, 0, 1), (3, -1, -1)],
    [(2, 1, 0), (4, 0, 1), (6, -1, -1)],
    [(3, 1, 0), (6, 0, 1), (5, -1, -1)],
    [(4, 1, 0), (3, 0, 1), (7, -1, -1)],
    [(5, 1, 0), (1, 0, 1), (4, -1, -1)],
    [(6, 1, 0), (7, 0, 1), (1, -1, -1)],
    [(7, 1, 0), (5, 0, 1), (2, -1, -1)],
    [(1, -1, 0), (0, 0, -1), (1, 1, 1)],
    [(2, -1, 0), (1, 0, -1), (3, 1, 1)],
    [(3, -1, 0), (6, 0, -1), (5, 1, 1)],
    [(4, -1, 0), (2, 0, -1), (6, 1, 1)],
    [(5, -1, 0), (5, 0, -1), (0, 1, 1)],
    [(6, -1, 0), (4, 0, -1), (2, 1, 1)],
    [(7, -1, 0), (3, 0, -1), (4, 1, 1)],
];

/// Two 5-sets absorbing the non-zero elements of the zero block.
const TRIPLE_HEAVY_FIVES: [[Entry; 5]; 2] = [
    [(1, 0, 0), (2, 0, 0), (3, 0, 0), (0, 1, 0), (0, -1, 0)],
    [(4, 0, 0), (5, 0, 0), (6, 0, 0), (7, 1, 1), (0, -1, -1)],
];

/// A second cover of the same 55 elements, shifted toward 5-sets, for
/// requests whose triple demand is below the first table's reach.
const FIVE_HEAVY_TRIPLES: [[Entry; 3]; 10] = [
    [(1, 0, 0), (2, 0, 0), (3, 0, 0)],
    [(4, 0, 0), (0, 1, 0), (4, -1, 0)],
    [(5, 0, 0), (0, -1, 0), (5, 1, 0)],
    [(6, 0, 0), (0, 0, 1), (6, 0, -1)],
    [(7, 0, 0), (0, 0, -1), (7, 0, 1)],
    [(0, 1, 1), (1, -1, 0), (1, 0, -1)],
    [(0, -1, -1), (1, 1, 0), (1, 0, 1)],
    [(1, 1, 1), (2, -1, 0), (3, 0, -1)],
    [(1, -1, -1), (2, 1, 0), (3, 0, 1)],
    [(2, 0, 1), (4, 1, 0), (6, -1, -1)],
];

/// The five 5-sets completing the second cover.
const FIVE_HEAVY_FIVES: [[Entry; 5]; 5] = [
    [(2, 0, -1), (2, 1, 1), (2, -1, -1), (4, 1, 1), (6, -1, 0)],
    [(3, 1, 0), (4, 0, 1), (4, 0, -1), (5, -1, -1), (6, 0, 1)],
    [(3, -1, 0), (4, -1, -1), (5, 0, -1), (5, 1, 1), (7, 1, 1)],
    [(3, 1, 1), (5, -1, 0), (6, 1, 0), (7, -1, 0), (7, 0, -1)],
    [(3, -1, -1), (5, 0, 1), (6, 1, 1), (7, 1, 0), (7, -1, -1)],
];

/// One bundled cover: triples and 5-sets that jointly partition the 55
/// formal elements.
struct CoverTable {
    triples: &'static [[Entry; 3]],
    fives: &'static [[Entry; 5]],
}

/// Both covers, in preference order.
const COVER_TABLES: [CoverTable; 2] = [
    CoverTable {
        triples: &TRIPLE_HEAVY_TRIPLES,
        fives: &TRIPLE_HEAVY_FIVES,
    },
    CoverTable {
        triples: &FIVE_HEAVY_TRIPLES,
        fives: &FIVE_HEAVY_FIVES,
    },
];

/// Tries the templates.  Returns `None` when the group or the request is
/// out of scope (so the dispatcher can fall through).
pub(super) fn template_route(
    spec: &GroupSpec,
    sizes: &[usize],
) -> Option<Result<Realization, RealizeError>> {
    let split = spec.sylow2_split();
    if split.l.factors() != [2, 2, 2] || split.h.order() < 7 || split.h.order() % 6 != 1 {
        return None;
    }
    let norm = normalize_sizes(sizes, SizeFloor::AtLeast3).ok()?;
    let (alpha, beta, gamma, omega) = alphabet3_counts(&norm.normalized)?;
    if beta != 0 || omega != 0 {
        return None;
    }
    let k = ((split.h.order() - 1) / 6) as usize;
    for table in &COVER_TABLES {
        // The table emits its parts directly; every extra part needs
        // 2·x more triples from the remaining six-set families, and the
        // caller's validated size total makes the pair bookkeeping work
        // out once x does.
        let direct = table.triples.len() + table.fives.len();
        if gamma < table.fives.len()
            || alpha + gamma < direct
            || (alpha + gamma - direct) % 2 != 0
        {
            continue;
        }
        let x = (alpha + gamma - direct) / 2;
        if x > 8 * (k - 1) {
            continue;
        }
        return Some(with_normalized(sizes, SizeFloor::AtLeast3, |n| {
            build(spec, &split, &n.normalized, x, k, table)
        }));
    }
    None
}

/// Instantiates one table entry over the first six-set `(c, d)`.
fn instantiate(split: &Sylow2Split, c: &Elem, d: &Elem, entry: Entry) -> Elem {
    let h = &split.h;
    let (mask, a, b) = entry;
    let le = Elem(alloc::vec![
        (mask >> 2) as u16 & 1,
        (mask >> 1) as u16 & 1,
        mask as u16 & 1,
    ]);
    let mut he = h.zero();
    match a {
        1 => he = h.add(&he, c),
        -1 => he = h.add(&he, &h.negate(c)),
        _ => {}
    }
    match b {
        1 => he = h.add(&he, d),
        -1 => he = h.add(&he, &h.negate(d)),
        _ => {}
    }
    split.combine(&le, &he)
}

fn build(
    spec: &GroupSpec,
    split: &Sylow2Split,
    normalized: &[usize],
    x: usize,
    k: usize,
    table: &CoverTable,
) -> Result<Realization, RealizeError> {
    let l = &split.l;
    let h = &split.h;
    let internal = |reason: &str| RealizeError::InternalExhaustion {
        reason: reason.to_string(),
    };
    let sk = skolem_partition(h)
        .map_err(|e| internal(&format!("six/pair decomposition failed: {e}")))?;
    if sk.sixes.len() != k || !sk.leftover_pairs.is_empty() {
        return Err(internal("odd part decomposition has an unexpected shape"));
    }
    let (c, d) = (&sk.sixes[0].c, &sk.sixes[0].d);
    let cm = find_complete_mapping(l)
        .map_err(|e| internal(&format!("no complete mapping on the 2-part: {e}")))?;

    let mut pool3: Vec<Vec<Elem>> = table
        .triples
        .iter()
        .map(|t| t.iter().map(|&e| instantiate(split, c, d, e)).collect())
        .collect();
    let pool5: Vec<Vec<Elem>> = table
        .fives
        .iter()
        .map(|t| t.iter().map(|&e| instantiate(split, c, d, e)).collect())
        .collect();
    let mut pool2: Vec<Vec<Elem>> = Vec::new();

    // The remaining families: the first `x` as two triples each, the rest
    // as three inverse pairs each.
    let mut triples_left = x;
    for six in sk.sixes.iter().skip(1) {
        let (fc, fd) = (&six.c, &six.d);
        let fe = h.negate(&h.add(fc, fd));
        for xe in l.elements() {
            let px = cm.phi(&xe);
            let vx = cm.varphi(&xe);
            let pos = [
                split.combine(&xe, fc),
                split.combine(&px, fd),
                split.combine(&vx, &fe),
            ];
            let neg: Vec<Elem> = pos.iter().map(|e| spec.negate(e)).collect();
            if triples_left > 0 {
                triples_left -= 1;
                pool3.push(pos.to_vec());
                pool3.push(neg);
            } else {
                for (p, n) in pos.iter().zip(&neg) {
                    pool2.push(alloc::vec![p.clone(), n.clone()]);
                }
            }
        }
    }
    if triples_left > 0 {
        return Err(internal("not enough six-set families for the request"));
    }

    // Compose the parts in normalized order.
    let mut fives_direct = pool5.len();
    let (mut i2, mut i3, mut i5) = (0usize, 0usize, 0usize);
    let mut out = Vec::with_capacity(normalized.len());
    for &s in normalized {
        let part = match s {
            3 => {
                let p = pool3.get(i3).cloned().ok_or(internal("triple pool ran dry"))?;
                i3 += 1;
                p
            }
            5 => {
                if fives_direct > 0 {
                    fives_direct -= 1;
                    let p = pool5.get(i5).cloned().ok_or(internal("5-set pool ran dry"))?;
                    i5 += 1;
                    p
                } else {
                    let mut p =
                        pool3.get(i3).cloned().ok_or(internal("triple pool ran dry"))?;
                    i3 += 1;
                    p.extend(pool2.get(i2).cloned().ok_or(internal("pair pool ran dry"))?);
                    i2 += 1;
                    p
                }
            }
            _ => return Err(internal("template only emits sizes 3 and 5")),
        };
        out.push(part);
    }
    if i2 != pool2.len() || i3 != pool3.len() || i5 != pool5.len() {
        return Err(internal("template pools not exhausted"));
    }

    let mut trace = ConstructionTrace::new("bundled cover template");
    trace.step(format!(
        "covered the zero block and six-set family 0 of {spec} with {} triples and {} 5-sets",
        table.triples.len(),
        table.fives.len()
    ));
    trace.step(format!(
        "split the remaining {} families: {} as triples, {} as pairs",
        8 * (k - 1),
        x,
        8 * (k - 1) - x
    ));
    Ok(Realization {
        partition: Partition::new(out),
        trace,
    })
}

// ──────────────────────────────────────────────────────────────────────────
// Tests
// ──────────────────────────────────────────────────────────────────────────
