//! Exhaustive, budgeted search for zero-sum partitions.
//!
//! This is the crate's reference implementation: a canonical backtracking
//! search that either finds a partition of the non-zero elements into
//! zero-sum parts of prescribed sizes, certifies that none exists, or
//! gives up with a budget error.  It is deliberately independent of the
//! constructive engine so the two can be checked against each other, and
//! it doubles as the constructor of last resort for small groups.
//!
//! Canonicality: parts are built one at a time, each starting from the
//! least element not yet covered, with the remaining members chosen as an
//! increasing sequence whose final member is forced by the zero-sum
//! condition.  Equal-size parts therefore appear in increasing order of
//! their least elements and no arrangement is ever visited twice.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::group::{Elem, GroupSpec};
use crate::partition::Partition;

/// Hard cap on the group order for dense index tables.
pub const MAX_DENSE_ORDER: u64 = 512;

/// Default search budget (backtracking nodes) when none is supplied.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

// ──────────────────────────────────────────────────────────────────────────
// Errors
// ──────────────────────────────────────────────────────────────────────────

/// Errors from the exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// No partition with these sizes exists — certified, either by a
    /// counting/sum argument or by exhausting the search space.
    Infeasible { reason: String },
    /// The node budget ran out before the search concluded.
    BudgetExceeded { nodes: u64 },
    /// The instance is too large for the exhaustive search.
    CapabilityExceeded { reason: String },
    /// The input violates a documented precondition.
    PreconditionViolated { reason: String },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Infeasible { reason } => write!(f, "infeasible: {reason}"),
            OracleError::BudgetExceeded { nodes } => {
                write!(f, "search budget of {nodes} nodes exceeded")
            }
            OracleError::CapabilityExceeded { reason } => {
                write!(f, "capability exceeded: {reason}")
            }
            OracleError::PreconditionViolated { reason } => {
                write!(f, "precondition violated: {reason}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OracleError {}

// ──────────────────────────────────────────────────────────────────────────
// Quick infeasibility certificates
// ──────────────────────────────────────────────────────────────────────────

/// Cheap necessary conditions for a zero-sum partition with the given part
/// sizes to exist.  `Err(Infeasible)` carries a certificate; `Ok(())` means
/// only that none of the quick test failed.
///
/// The conditions: sizes sum to `|Γ| − 1`; no part has size `< 2` (a
/// singleton part would be a non-zero element summing to itself); if every
/// part sums to zero then so does the sum of all non-zero elements, which
/// happens exactly when the group does not have a unique involution; and a
/// part of size 2 must be `{x, −x}` with `x` not an involution, so the
/// number of 2-parts is at most the number of non-involution inverse pairs.
pub fn prune_bound(spec: &GroupSpec, sizes: &[usize]) -> Result<(), OracleError> {
    let n = spec.order();
    let total: u64 = sizes.iter().map(|&s| s as u64).sum();
    if total != n - 1 {
        return Err(OracleError::Infeasible {
            reason: format!("sizes sum to {total}, but there are {} non-zero elements", n - 1),
        });
    }
    if let Some(&s) = sizes.iter().find(|&&s| s < 2) {
        return Err(OracleError::Infeasible {
            reason: format!("a part of size {s} cannot sum to zero"),
        });
    }
    if spec.group_sum() != spec.zero() {
        return Err(OracleError::Infeasible {
            reason: format!(
                "{spec} has a unique involution, so its non-zero elements sum to it \
                 and cannot split into zero-sum parts"
            ),
        });
    }
    let involutions = spec.involution_count();
    let non_involution_pairs = (n - 1 - involutions) / 2;
    let twos = sizes.iter().filter(|&&s| s == 2).count() as u64;
    if twos > non_involution_pairs {
        return Err(OracleError::Infeasible {
            reason: format!(
                "{twos} parts of size 2 requested, but only {non_involution_pairs} \
                 inverse pairs {{x, −x}} with x not an involution exist"
            ),
        });
    }
    Ok(())
}

// ──────────────────────────────────────────────────────────────────────────
// Dense tables
// ──────────────────────────────────────────────────────────────────────────

/// Flat addition/negation tables over element indices, for fast search.
struct Dense {
    n: usize,
    add: Vec<u16>,
    neg: Vec<u16>,
    elems: Vec<Elem>,
}

impl Dense {
    fn new(spec: &GroupSpec) -> Result<Dense, OracleError> {
        let order = spec.order();
        if order > MAX_DENSE_ORDER {
            return Err(OracleError::CapabilityExceeded {
                reason: format!(
                    "group order {order} exceeds the exhaustive-search cap {MAX_DENSE_ORDER}"
                ),
            });
        }
        let n = order as usize;
        let elems: Vec<Elem> = spec.elements().collect();
        let mut add = vec![0u16; n * n];
        let mut neg = vec![0u16; n];
        for (i, a) in elems.iter().enumerate() {
            neg[i] = spec.index_of(&spec.negate(a)) as u16;
            for (j, b) in elems.iter().enumerate() {
                add[i * n + j] = spec.index_of(&spec.add(a, b)) as u16;
            }
        }
        Ok(Dense { n, add, neg, elems })
    }

    #[inline]
    fn add(&self, i: usize, j: usize) -> usize {
        self.add[i * self.n + j] as usize
    }

    #[inline]
    fn neg(&self, i: usize) -> usize {
        self.neg[i] as usize
    }
}

// ──────────────────────────────────────────────────────────────────────────
// The search
// ──────────────────────────────────────────────────────────────────────────

enum Outcome {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Searcher<'a> {
    dense: &'a Dense,
    remaining: Vec<bool>,
    remaining_count: usize,
    /// count of still-unassigned parts per size, ascending.
    size_counts: BTreeMap<usize, usize>,
    parts: Vec<Vec<usize>>,
    nodes: u64,
    /// Remaining involutions: they can never sit in a 2-part.
    inv_remaining: usize,
    /// Remaining non-involutions whose inverse is already consumed: they
    /// can never sit in a 2-part either.
    unpaired_remaining: usize,
    /// Unfilled slots across the still-unassigned parts of size ≥ 3.
    big_slots: usize,
}

impl Searcher<'_> {
    fn least_remaining(&self) -> Option<usize> {
        self.remaining.iter().position(|&r| r)
    }

    /// Every remaining involution or unpaired element needs a slot in a
    /// part of size ≥ 3; `open` counts the unfilled slots of the part
    /// currently being extended.
    #[inline]
    fn viable(&self, open: usize) -> bool {
        self.big_slots + open >= self.inv_remaining + self.unpaired_remaining
    }

    #[inline]
    fn remove(&mut self, c: usize) {
        self.remaining[c] = false;
        self.remaining_count -= 1;
        let m = self.dense.neg(c);
        if m == c {
            self.inv_remaining -= 1;
        } else if self.remaining[m] {
            self.unpaired_remaining += 1;
        } else {
            self.unpaired_remaining -= 1;
        }
    }

    #[inline]
    fn restore(&mut self, c: usize) {
        self.remaining[c] = true;
        self.remaining_count += 1;
        let m = self.dense.neg(c);
        if m == c {
            self.inv_remaining += 1;
        } else if self.remaining[m] {
            self.unpaired_remaining -= 1;
        } else {
            self.unpaired_remaining += 1;
        }
    }

    fn search(&mut self) -> Outcome {
        if self.nodes == 0 {
            return Outcome::OutOfBudget;
        }
        self.nodes -= 1;
        let Some(first) = self.least_remaining() else {
            return Outcome::Found;
        };
        if !self.viable(0) {
            return Outcome::Exhausted;
        }
        // Fast path: when only 2-parts remain, the partition is forced —
        // every remaining element must pair with its inverse.
        if self.size_counts.keys().all(|&s| s == 2) {
            return self.pair_off_rest(first);
        }
        let sizes: Vec<usize> = self
            .size_counts
            .iter()
            .filter(|&(_, &c)| c > 0)
            .map(|(&s, _)| s)
            .collect();
        for size in sizes {
            *self.size_counts.get_mut(&size).unwrap() -= 1;
            if self.size_counts[&size] == 0 {
                self.size_counts.remove(&size);
            }
            if size >= 3 {
                self.big_slots -= size;
            }
            self.remove(first);
            let mut part = vec![first];
            let outcome = self.extend_part(&mut part, size, first, first);
            self.restore(first);
            if size >= 3 {
                self.big_slots += size;
            }
            *self.size_counts.entry(size).or_insert(0) += 1;
            match outcome {
                Outcome::Exhausted => {}
                done => return done,
            }
        }
        Outcome::Exhausted
    }

    /// Grows `part` (which currently sums to index-sum `sum`) by elements
    /// greater than `from`, with the final member forced.
    fn extend_part(&mut self, part: &mut Vec<usize>, size: usize, sum: usize, from: usize) -> Outcome {
        if self.nodes == 0 {
            return Outcome::OutOfBudget;
        }
        self.nodes -= 1;
        if part.len() == size - 1 {
            // The last member is −sum; it must be remaining and keep the
            // members strictly increasing so each set is built once.
            let last = self.dense.neg(sum);
            if last > from && self.remaining[last] {
                self.remove(last);
                part.push(last);
                self.parts.push(part.clone());
                let outcome = self.search();
                if matches!(outcome, Outcome::Found) {
                    // Keep the completed assignment intact on the way out.
                    return outcome;
                }
                self.parts.pop();
                part.pop();
                self.restore(last);
                return outcome;
            }
            return Outcome::Exhausted;
        }
        // Leave room for the forced last element.
        for c in from + 1..self.dense.n {
            if !self.remaining[c] {
                continue;
            }
            self.remove(c);
            part.push(c);
            let outcome = if self.viable(size - part.len()) {
                self.extend_part(part, size, self.dense.add(sum, c), c)
            } else {
                Outcome::Exhausted
            };
            part.pop();
            self.restore(c);
            match outcome {
                Outcome::Exhausted => {}
                done => return done,
            }
        }
        Outcome::Exhausted
    }

    /// Deterministically pairs all remaining elements as `{x, −x}`.
    fn pair_off_rest(&mut self, mut cursor: usize) -> Outcome {
        let mut stacked = Vec::new();
        let mut ok = true;
        while let Some(x) = self.remaining[cursor..]
            .iter()
            .position(|&r| r)
            .map(|off| cursor + off)
        {
            let nx = self.dense.neg(x);
            if nx == x || !self.remaining[nx] {
                ok = false;
                break;
            }
            self.remaining[x] = false;
            self.remaining[nx] = false;
            self.remaining_count -= 2;
            stacked.push((x, nx));
            cursor = x;
        }
        if ok && self.remaining_count == 0 {
            for &(x, nx) in &stacked {
                self.parts.push(vec![x, nx]);
            }
            return Outcome::Found;
        }
        for &(x, nx) in stacked.iter().rev() {
            self.remaining[x] = true;
            self.remaining[nx] = true;
            self.remaining_count += 2;
        }
        Outcome::Exhausted
    }
}

/// Exhaustively searches for a zero-sum partition of the non-zero elements
/// with the given part sizes.
///
/// Deterministic: the same instance always yields the same partition.
/// `budget` bounds the number of backtracking nodes (`None` uses
/// [`DEFAULT_BUDGET`], overridable via the `ZSP_ORACLE_BUDGET` environment
/// variable on `std` builds).  Successful and certified-infeasible results
/// are memoized on `std` builds.
pub fn search_partition(
    spec: &GroupSpec,
    sizes: &[usize],
    budget: Option<u64>,
) -> Result<Partition, OracleError> {
    if sizes.iter().any(|&s| s == 0) {
        return Err(OracleError::PreconditionViolated {
            reason: "part sizes must be positive".to_string(),
        });
    }
    prune_bound(spec, sizes)?;

    let mut sorted_sizes = sizes.to_vec();
    sorted_sizes.sort_unstable();

    #[cfg(feature = "std")]
    {
        if let Some(cached) = cache_lookup(spec, &sorted_sizes) {
            return cached;
        }
    }

    let result = search_uncached(spec, &sorted_sizes, budget.unwrap_or_else(default_budget));

    #[cfg(feature = "std")]
    {
        if !matches!(result, Err(OracleError::BudgetExceeded { .. })) {
            cache_store(spec, &sorted_sizes, &result);
        }
    }

    result
}

fn search_uncached(
    spec: &GroupSpec,
    sorted_sizes: &[usize],
    budget: u64,
) -> Result<Partition, OracleError> {
    let dense = Dense::new(spec)?;
    let mut remaining = vec![true; dense.n];
    remaining[0] = false; // zero is excluded
    let mut size_counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in sorted_sizes {
        *size_counts.entry(s).or_insert(0) += 1;
    }
    let inv_remaining = (1..dense.n).filter(|&i| dense.neg(i) == i).count();
    let big_slots = sorted_sizes.iter().filter(|&&s| s >= 3).sum();
    let mut searcher = Searcher {
        dense: &dense,
        remaining,
        remaining_count: dense.n - 1,
        size_counts,
        parts: Vec::new(),
        nodes: budget,
        inv_remaining,
        unpaired_remaining: 0,
        big_slots,
    };
    match searcher.search() {
        Outcome::Found => {
            let parts: Vec<Vec<Elem>> = searcher
                .parts
                .iter()
                .map(|p| p.iter().map(|&i| dense.elems[i].clone()).collect())
                .collect();
            Ok(Partition::new(parts))
        }
        Outcome::Exhausted => Err(OracleError::Infeasible {
            reason: "search space exhausted".to_string(),
        }),
        Outcome::OutOfBudget => Err(OracleError::BudgetExceeded { nodes: budget }),
    }
}

/// The default node budget; on `std` builds the `ZSP_ORACLE_BUDGET`
/// environment variable (a plain integer) overrides the built-in default.
pub fn default_budget() -> u64 {
    #[cfg(feature = "std")]
    {
        if let Ok(s) = std::env::var("ZSP_ORACLE_BUDGET") {
            if let Ok(v) = s.trim().parse::<u64>() {
                return v;
            }
        }
    }
    DEFAULT_BUDGET
}

#[cfg(feature = "std")]
mod memo {
    use super::*;
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};

    /// Success (parts as element tuples) or certified infeasibility.
    type Entry = Result<Vec<Vec<Elem>>, String>;
    type Key = (Vec<u16>, Vec<usize>);

    static CACHE: OnceLock<Mutex<HashMap<Key, Entry>>> = OnceLock::new();

    pub(super) fn cache_lookup(
        spec: &GroupSpec,
        sorted_sizes: &[usize],
    ) -> Option<Result<Partition, OracleError>> {
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (spec.factors().to_vec(), sorted_sizes.to_vec());
        cache.lock().unwrap().get(&key).map(|entry| match entry {
            Ok(parts) => Ok(Partition::new(parts.clone())),
            Err(reason) => Err(OracleError::Infeasible {
                reason: reason.clone(),
            }),
        })
    }

    pub(super) fn cache_store(
        spec: &GroupSpec,
        sorted_sizes: &[usize],
        result: &Result<Partition, OracleError>,
    ) {
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (spec.factors().to_vec(), sorted_sizes.to_vec());
        let entry = match result {
            Ok(p) => Ok(p.parts.clone()),
            Err(OracleError::Infeasible { reason }) => Err(reason.clone()),
            _ => return,
        };
        cache.lock().unwrap().insert(key, entry);
    }
}

#[cfg(feature = "std")]
use memo::{cache_lookup, cache_store};

// ──────────────────────────────────────────────────────────────────────────
// Enumerating realizable multisets
// ──────────────────────────────────────────────────────────────────────────

/// Cap on the group order for [`enumerate_realizable`].
pub const MAX_ENUMERATION_ORDER: u64 = 32;

/// For a group of order at most [`MAX_ENUMERATION_ORDER`], enumerates
/// every multiset of part sizes `≥ min_size` summing to `|Γ| − 1`
/// (non-increasing order) and reports whether each admits a zero-sum
/// partition, as certified by the exhaustive search.
pub fn enumerate_realizable(
    spec: &GroupSpec,
    min_size: usize,
    budget: Option<u64>,
) -> Result<Vec<(Vec<usize>, bool)>, OracleError> {
    if spec.order() > MAX_ENUMERATION_ORDER {
        return Err(OracleError::CapabilityExceeded {
            reason: format!(
                "group order {} exceeds the enumeration cap {MAX_ENUMERATION_ORDER}",
                spec.order()
            ),
        });
    }
    if min_size < 2 {
        return Err(OracleError::PreconditionViolated {
            reason: "minimum part size below 2 is never realizable".to_string(),
        });
    }
    let total = (spec.order() - 1) as usize;
    let mut out = Vec::new();
    let mut current = Vec::new();
    enumerate_multisets(total, total, min_size, &mut current, &mut |sizes| {
        let realizable = match search_partition(spec, sizes, budget) {
            Ok(_) => true,
            Err(OracleError::Infeasible { .. }) => false,
            Err(e) => return Err(e),
        };
        out.push((sizes.to_vec(), realizable));
        Ok(())
    })?;
    Ok(out)
}

/// Multisets of integers in `[min, max_part]` summing to `total`,
/// non-increasing, visited in lexicographically decreasing order.
fn enumerate_multisets(
    total: usize,
    max_part: usize,
    min: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> Result<(), OracleError>,
) -> Result<(), OracleError> {
    if total == 0 {
        return visit(current);
    }
    let cap = total.min(max_part);
    for part in (min..=cap).rev() {
        // The remainder must stay expressible: either zero or at least `min`.
        let rest = total - part;
        if rest != 0 && rest < min {
            continue;
        }
        current.push(part);
        enumerate_multisets(rest, part, min, current, visit)?;
        current.pop();
    }
    Ok(())
}

// ──────────────────────────────────────────────────────────────────────────
// Tests
// ──────────────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::verify_partition;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn finds_simple_partitions() {
        // Z7: sizes [3, 3] — e.g. {1,2,4} and {3,5,6}.
        let spec = g("Z7");
        let p = search_partition(&spec, &[3, 3], None).unwrap();
        assert!(verify_partition(&spec, &p, Some(&[3, 3])).ok);

        // Z3xZ3: all four inverse pairs.
        let spec = g("Z3xZ3");
        let p = search_partition(&spec, &[2, 2, 2, 2], None).unwrap();
        assert!(verify_partition(&spec, &p, Some(&[2, 2, 2, 2])).ok);

        // Klein group: the single part {i1, i2, i3}.
        let spec = g("Z2xZ2");
        let p = search_partition(&spec, &[3], None).unwrap();
        assert!(verify_partition(&spec, &p, Some(&[3])).ok);
    }

    #[test]
    fn deterministic_output() {
        let spec = g("Z3xZ5");
        let p1 = search_partition(&spec, &[3, 4, 7], None).unwrap();
        let p2 = search_partition(&spec, &[7, 3, 4], None).unwrap();
        assert_eq!(p1.canonicalized(), p2.canonicalized());
    }

    #[test]
    fn unique_involution_groups_are_certified_infeasible() {
        for s in ["Z4", "Z8", "Z12", "Z2", "Z4xZ9"] {
            let spec = g(s);
            let n = (spec.order() - 1) as usize;
            match search_partition(&spec, &[n], None) {
                Err(OracleError::Infeasible { .. }) => {}
                other => panic!("{s}: expected Infeasible, got {other:?}"),
            }
        }
    }

    #[test]
    fn klein_group_pairs_are_infeasible() {
        // 2-groups have only involutions, so no 2-part {x, −x} exists; the
        // counting certificate fires without any search.
        let spec = g("Z2xZ2xZ2");
        match search_partition(&spec, &[2, 5], None) {
            Err(OracleError::Infeasible { reason }) => {
                assert!(reason.contains("inverse pairs"), "unexpected reason: {reason}");
            }
            other => panic!("expected Infeasible, got {other:?}"),
        }
        // A size list with the wrong total is certified infeasible up front.
        let spec = g("Z2xZ2");
        match search_partition(&spec, &[2, 2], None) {
            Err(OracleError::Infeasible { reason }) => {
                assert!(reason.contains("sum"), "unexpected reason: {reason}");
            }
            other => panic!("expected Infeasible, got {other:?}"),
        }
    }

    #[test]
    fn elementary_2group_triples() {
        // Z2×Z2×Z2: seven involutions split into {i, j, i+j}-style triples
        // plus a 4-set, or a 3+4 split; sizes [3, 4] and [7] work, [2, 5]
        // does not (no inverse pairs at all).
        let spec = g("Z2xZ2xZ2");
        assert!(search_partition(&spec, &[3, 4], None).is_ok());
        assert!(search_partition(&spec, &[7], None).is_ok());
        assert!(matches!(
            search_partition(&spec, &[2, 5], None),
            Err(OracleError::Infeasible { .. })
        ));
        // [3, 3] doesn't cover 7 elements.
        assert!(matches!(
            search_partition(&spec, &[3, 3], None),
            Err(OracleError::Infeasible { .. })
        ));
    }

    #[test]
    fn budget_is_honored() {
        let spec = g("Z3xZ3xZ3");
        match search_partition(&spec, &[13, 13], Some(1)) {
            Err(OracleError::BudgetExceeded { .. }) => {}
            other => panic!("expected BudgetExceeded, got {other:?}"),
        }
    }

    #[test]
    fn enumerate_realizable_z5() {
        // Z5 (|I| = 0): multisets of sizes ≥ 2 summing to 4: [4], [2,2] —
        // both realizable.
        let spec = g("Z5");
        let all = enumerate_realizable(&spec, 2, None).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all.iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn enumerate_realizable_z4() {
        // Z4 has a unique involution: nothing is realizable.  The only
        // multiset of sizes ≥ 2 summing to 3 is [3].
        let spec = g("Z4");
        let all = enumerate_realizable(&spec, 2, None).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all.iter().all(|(_, ok)| !*ok));
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            enumerate_realizable(&g("Z37"), 2, None),
            Err(OracleError::CapabilityExceeded { .. })
        ));
    }

    #[test]
    fn prune_bound_certificates() {
        assert!(prune_bound(&g("Z7"), &[3, 3]).is_ok());
        assert!(prune_bound(&g("Z7"), &[3, 4]).is_err()); // wrong total
        assert!(prune_bound(&g("Z7"), &[1, 5]).is_err()); // singleton part
        assert!(prune_bound(&g("Z4"), &[3]).is_err()); // unique involution
        assert!(prune_bound(&g("Z2xZ2"), &[2]).is_err()); // no inverse pairs
    }
}
