//! Bundled partitions for the two smallest mixed groups out of reach of
//! the product construction, plus a coset lift for 4-part-heavy requests.
//!
//! Groups with canonical factors `[2, 2, 2, 3]` (order 24) and
//! `[2, 2, 2, 5]` (order 40) have a 2-part too large relative to their
//! odd part for the generic solve.  Requests over the `{3, 4, 5}`
//! alphabet are answered from verified bundled tables; combinations with
//! more 4-parts than any table carries strip one order-2 factor, solve
//! the reduced request on the index-2 subgroup, and re-attach the
//! stripped coset as zero-sum 4-sets.  Everything else (2-parts, shapes
//! the tables cannot express) goes to exhaustive search, which is cheap
//! at these orders.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::group::{Elem, GroupSpec};
use crate::partition::{
    normalize_sizes, parse_tables, verify_partition, Partition, SizeFloor, TableBlock,
};

use super::{
    alphabet3_counts, exhaustive_route, reconcile_errors, with_normalized, ConstructionTrace,
    Realization, RealizeError, RealizeOptions,
};

const TABLES_ORDER_24: &str = include_str!("tables_2223.txt");
const TABLES_ORDER_40: &str = include_str!("tables_2225.txt");

fn internal(reason: String) -> RealizeError {
    RealizeError::InternalExhaustion { reason }
}

/// The bundle and coset-lift quota (`|subgroup| / 4`) for a covered group.
fn bundle_for(spec: &GroupSpec) -> Option<(&'static str, usize)> {
    match spec.canonical_factors().as_slice() {
        [2, 2, 2, 3] => Some((TABLES_ORDER_24, 3)),
        [2, 2, 2, 5] => Some((TABLES_ORDER_40, 5)),
        _ => None,
    }
}

/// Realizes a request on one of the covered groups.  Tries the bundled
/// tables and the coset lift first, then falls back to search.
pub(super) fn fixture_route(
    spec: &GroupSpec,
    sizes: &[usize],
    options: &RealizeOptions,
) -> Result<Realization, RealizeError> {
    let min = *sizes.iter().min().expect("sizes validated non-empty");
    let structured_err = if min >= 3 {
        match structured_route(spec, sizes, options) {
            Some(Ok(real)) => return Ok(real),
            Some(Err(e)) => Some(e),
            None => None,
        }
    } else {
        None
    };
    match exhaustive_route(spec, sizes, options) {
        Ok(real) => Ok(real),
        Err(fallback) => match structured_err {
            Some(primary) => Err(reconcile_errors(spec, min, primary, fallback)),
            None => Err(fallback),
        },
    }
}

/// Table lookup / coset lift.  `None` means the request shape is not
/// covered structurally and should go to search.
fn structured_route(
    spec: &GroupSpec,
    sizes: &[usize],
    options: &RealizeOptions,
) -> Option<Result<Realization, RealizeError>> {
    let (text, quota) = bundle_for(spec)?;
    let norm = normalize_sizes(sizes, SizeFloor::AtLeast3).ok()?;
    let (threes, fours, fives, _) = alphabet3_counts(&norm.normalized)?;
    let tables = match verified_tables(text) {
        Ok(t) => t,
        Err(e) => return Some(Err(internal(e))),
    };
    if let Some(block) = tables
        .iter()
        .find(|t| size_counts(t) == [threes, fours, fives])
    {
        return Some(with_normalized(sizes, SizeFloor::AtLeast3, |n| {
            instantiate_block(spec, block, &n.normalized)
        }));
    }
    if fours >= quota {
        return Some(with_normalized(sizes, SizeFloor::AtLeast3, |n| {
            coset_lift(spec, &n.normalized, (threes, fours, fives), quota, options)
        }));
    }
    None
}

/// Parses and verifies a bundled table file (cached when `std` is on).
#[cfg(feature = "std")]
fn verified_tables(text: &'static str) -> Result<Vec<TableBlock>, String> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};

    static CACHE: OnceLock<Mutex<HashMap<usize, Result<Vec<TableBlock>, String>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|p| p.into_inner());
    guard
        .entry(text.as_ptr() as usize)
        .or_insert_with(|| build_tables(text))
        .clone()
}

#[cfg(not(feature = "std"))]
fn verified_tables(text: &'static str) -> Result<Vec<TableBlock>, String> {
    build_tables(text)
}

fn build_tables(text: &str) -> Result<Vec<TableBlock>, String> {
    let blocks = parse_tables(text).map_err(|e| format!("bundled table parse failure: {e}"))?;
    for block in &blocks {
        let spec = block
            .spec()
            .map_err(|e| format!("bundled table group invalid: {e}"))?;
        let report = verify_partition(&spec, &block.partition(), None);
        if !report.ok {
            return Err(format!(
                "bundled table for {spec} with counts {:?} failed verification",
                size_counts(block)
            ));
        }
    }
    Ok(blocks)
}

/// `[#size-3, #size-4, #size-5]` for a table block.
fn size_counts(block: &TableBlock) -> [usize; 3] {
    if let Some(t) = &block.count_triple {
        if t.len() == 3 {
            return [t[0], t[1], t[2]];
        }
    }
    let mut counts = [0usize; 3];
    for part in &block.parts {
        match part.len() {
            3 => counts[0] += 1,
            4 => counts[1] += 1,
            5 => counts[2] += 1,
            _ => {}
        }
    }
    counts
}

/// Maps a table (written over `[2, 2, 2, q]` coordinates) into the spec's
/// own factor layout and orders the parts along the normalized sizes.
fn instantiate_block(
    spec: &GroupSpec,
    block: &TableBlock,
    normalized: &[usize],
) -> Result<Realization, RealizeError> {
    let split = spec.sylow2_split();
    if split.l.factors() != [2, 2, 2] || split.h.factors().len() != 1 {
        return Err(internal(format!(
            "{spec} does not split as three order-2 factors times one odd factor"
        )));
    }
    let mut by_size: BTreeMap<usize, Vec<Vec<Elem>>> = BTreeMap::new();
    for part in &block.parts {
        let mapped: Vec<Elem> = part
            .iter()
            .map(|e| {
                let xs = e.coords();
                let le = Elem(alloc::vec![xs[0], xs[1], xs[2]]);
                let he = Elem(alloc::vec![xs[3]]);
                split.combine(&le, &he)
            })
            .collect();
        by_size.entry(mapped.len()).or_default().push(mapped);
    }
    let parts = compose(normalized, by_size)
        .ok_or_else(|| internal("bundled table does not match the requested counts".to_string()))?;
    let mut trace = ConstructionTrace::new("bundled table");
    trace.step(format!(
        "instantiated a verified order-{} table with size counts {:?}",
        spec.order(),
        size_counts(block)
    ));
    Ok(Realization {
        partition: Partition::new(parts),
        trace,
    })
}

/// Strips one order-2 factor, solves the reduced request on the index-2
/// subgroup, and covers the stripped coset by zero-sum 4-sets: the
/// involution subgroup shifted into the coset, and inverse pairs twinned
/// two at a time.
fn coset_lift(
    spec: &GroupSpec,
    normalized: &[usize],
    (threes, fours, fives): (usize, usize, usize),
    quota: usize,
    options: &RealizeOptions,
) -> Result<Realization, RealizeError> {
    let p = spec
        .factors()
        .iter()
        .position(|&f| f == 2)
        .ok_or_else(|| internal(format!("{spec} has no order-2 factor to strip")))?;
    let sub_factors: Vec<u16> = spec
        .factors()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != p)
        .map(|(_, &f)| f)
        .collect();
    let sub_spec = GroupSpec::new(sub_factors).map_err(|e| internal(e.to_string()))?;
    let embed = |e: &Elem, bit: u16| {
        let mut v = e.coords().to_vec();
        v.insert(p, bit);
        Elem(v)
    };

    // The coset quads.
    let mut quads: Vec<Vec<Elem>> = Vec::new();
    let mut klein: Vec<Elem> = alloc::vec![sub_spec.zero()];
    klein.extend(sub_spec.involutions());
    if klein.len() != 4 {
        return Err(internal(format!(
            "{sub_spec} should have exactly three involutions"
        )));
    }
    quads.push(klein.iter().map(|e| embed(e, 1)).collect());
    let mut pair_reps: Vec<(Elem, Elem)> = Vec::new();
    for x in sub_spec.nonzero_elements() {
        let nx = sub_spec.negate(&x);
        if nx > x {
            pair_reps.push((x, nx));
        }
    }
    for chunk in pair_reps.chunks(2) {
        let [(x, nx), (y, ny)] = chunk else {
            return Err(internal("inverse pairs did not twin up evenly".to_string()));
        };
        quads.push(alloc::vec![embed(x, 1), embed(nx, 1), embed(y, 1), embed(ny, 1)]);
    }
    if quads.len() != quota {
        return Err(internal(format!(
            "expected {quota} coset 4-sets, built {}",
            quads.len()
        )));
    }

    // The reduced request on the subgroup.
    let mut sub_sizes = alloc::vec![3; threes];
    sub_sizes.extend(alloc::vec![4; fours - quota]);
    sub_sizes.extend(alloc::vec![5; fives]);
    let sub_real = super::realize_with(&sub_spec, &sub_sizes, options).map_err(|e| {
        internal(format!(
            "reduced request {sub_sizes:?} on {sub_spec} failed: {e}"
        ))
    })?;

    let mut by_size: BTreeMap<usize, Vec<Vec<Elem>>> = BTreeMap::new();
    for part in &sub_real.partition.parts {
        let mapped: Vec<Elem> = part.iter().map(|e| embed(e, 0)).collect();
        by_size.entry(mapped.len()).or_default().push(mapped);
    }
    by_size.entry(4).or_default().extend(quads);
    let parts = compose(normalized, by_size)
        .ok_or_else(|| internal("lift parts do not match the requested counts".to_string()))?;

    let mut trace = ConstructionTrace::new("order-2 coset lift");
    trace.step(format!(
        "stripped factor {} of {spec}, solved {:?} on {sub_spec} (route '{}')",
        p + 1,
        sub_sizes,
        sub_real.trace.route
    ));
    trace.step(format!(
        "covered the stripped coset with {quota} zero-sum 4-sets"
    ));
    trace.used_fallback_search = sub_real.trace.used_fallback_search;
    Ok(Realization {
        partition: Partition::new(parts),
        trace,
    })
}

/// Draws one part of each requested size from the per-size pools,
/// requiring exact exhaustion.
fn compose(normalized: &[usize], mut by_size: BTreeMap<usize, Vec<Vec<Elem>>>) -> Option<Vec<Vec<Elem>>> {
    let mut out = Vec::with_capacity(normalized.len());
    for &s in normalized {
        out.push(by_size.get_mut(&s)?.pop()?);
    }
    if by_size.values().all(|v| v.is_empty()) {
        Some(out)
    } else {
        None
    }
}

// ──────────────────────────────────────────────────────────────────────────
// Tests
// ──────────────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_parse_and_verify() {
        let t24 = verified_tables(TABLES_ORDER_24).expect("order-24 tables");
        let t40 = verified_tables(TABLES_ORDER_40).expect("order-40 tables");
        assert_eq!(t24.len(), 5);
        assert_eq!(t40.len(), 12);
        // Together with the coset lift these cover every {3,4,5} count
        // combination at both orders.
        for (tables, total, quota) in [(&t24, 23usize, 3usize), (&t40, 39, 5)] {
            let keys: Vec<[usize; 3]> = tables.iter().map(size_counts).collect();
            for a in 0..=total / 3 {
                for b in 0..=total / 4 {
                    let rest = total as i64 - 3 * a as i64 - 4 * b as i64;
                    if rest < 0 || rest % 5 != 0 {
                        continue;
                    }
                    let c = rest as usize / 5;
                    assert!(
                        keys.contains(&[a, b, c]) || b >= quota,
                        "counts ({a}, {b}, {c}) uncovered at total {total}"
                    );
                }
            }
        }
    }

    #[test]
    fn table_route_answers_direct_hits() {
        let spec: GroupSpec = "Z2xZ2xZ2xZ3".parse().unwrap();
        let options = RealizeOptions::default();
        let sizes = [3, 3, 3, 3, 3, 4, 4];
        let real = fixture_route(&spec, &sizes, &options).expect("covered by a table");
        assert_eq!(real.trace.route, "bundled table");
        assert!(verify_partition(&spec, &real.partition, Some(&sizes)).ok);
    }

    #[test]
    fn lift_route_covers_heavy_four_requests() {
        let options = RealizeOptions::default();
        let spec: GroupSpec = "Z2xZ2xZ2xZ3".parse().unwrap();
        let sizes = [3, 4, 4, 4, 4, 4];
        let real = fixture_route(&spec, &sizes, &options).expect("covered by the lift");
        assert_eq!(real.trace.route, "order-2 coset lift");
        assert!(verify_partition(&spec, &real.partition, Some(&sizes)).ok);

        let spec: GroupSpec = "Z2xZ2xZ2xZ5".parse().unwrap();
        let sizes = [4, 4, 4, 4, 4, 4, 5, 5, 5];
        let real = fixture_route(&spec, &sizes, &options).expect("covered by the lift");
        assert_eq!(real.trace.route, "order-2 coset lift");
        assert!(verify_partition(&spec, &real.partition, Some(&sizes)).ok);
    }

    #[test]
    fn non_split_presentations_are_supported() {
        // Z2×Z2×Z6 has the same canonical factors as Z2×Z2×Z2×Z3.
        let spec: GroupSpec = "Z2xZ2xZ6".parse().unwrap();
        let options = RealizeOptions::default();
        let sizes = [3, 3, 3, 3, 3, 3, 5];
        let real = fixture_route(&spec, &sizes, &options).expect("covered by a table");
        assert!(verify_partition(&spec, &real.partition, Some(&sizes)).ok);
        let sizes = [4, 4, 4, 4, 4, 3];
        let real = fixture_route(&spec, &sizes, &options).expect("covered by the lift");
        assert!(verify_partition(&spec, &real.partition, Some(&sizes)).ok);
    }

    #[test]
    fn two_parts_go_to_search() {
        let spec: GroupSpec = "Z2xZ2xZ2xZ3".parse().unwrap();
        let options = RealizeOptions::default();
        let sizes = [2, 2, 2, 2, 3, 3, 3, 3, 3];
        match fixture_route(&spec, &sizes, &options) {
            Ok(real) => {
                assert!(real.trace.used_fallback_search);
                assert!(verify_partition(&spec, &real.partition, Some(&sizes)).ok);
            }
            Err(RealizeError::Unrealizable { .. }) => {}
            Err(e) => panic!("search should settle order 24: {e}"),
        }
    }
}
