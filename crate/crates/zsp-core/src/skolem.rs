//! Skolem-type decompositions of odd-order groups.
//!
//! For an odd-order group `H`, the non-zero elements split into good
//! six-sets plus a small number of leftover inverse pairs — none when
//! `|H| ≡ 1 (mod 6)`, one pair when `|H| ≡ 3`, two pairs when `|H| ≡ 5`.
//! These decompositions seed the product constructions: each six-set of
//! `H` spreads into a family of flexible six-sets across `L × H`, and the
//! leftover pairs carry the layers that absorb the 2-part.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::group::{Elem, GroupSpec};
use crate::partition::{GoodSix, PartitionError};

// ──────────────────────────────────────────────────────────────────────────
// Errors
// ──────────────────────────────────────────────────────────────────────────

/// Errors from Skolem-type searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkolemError {
    /// The search space was fully exhausted: no decomposition exists.
    Infeasible { reason: String },
    /// The node budget ran out before the search finished either way.
    BudgetExceeded { nodes: u64 },
    /// The input violates a documented precondition.
    PreconditionViolated { reason: String },
}

impl fmt::Display for SkolemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkolemError::Infeasible { reason } => write!(f, "infeasible: {reason}"),
            SkolemError::BudgetExceeded { nodes } => {
                write!(f, "budget of {nodes} search nodes exceeded")
            }
            SkolemError::PreconditionViolated { reason } => {
                write!(f, "precondition violated: {reason}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SkolemError {}

// ──────────────────────────────────────────────────────────────────────────
// The decomposition
// ──────────────────────────────────────────────────────────────────────────

/// A partition of a (±-closed) subset of an odd group's non-zero elements
/// into good six-sets and leftover inverse pairs, each pair listed by one
/// representative.
#[derive(Debug, Clone)]
pub struct SkolemPartition {
    pub sixes: Vec<GoodSix>,
    pub leftover_pairs: Vec<Elem>,
}

impl SkolemPartition {
    /// All covered elements, grouped: six members then pair members.
    pub fn covered(&self, spec: &GroupSpec) -> BTreeSet<Elem> {
        let mut out = BTreeSet::new();
        for six in &self.sixes {
            out.extend(six.elements(spec));
        }
        for p in &self.leftover_pairs {
            out.insert(p.clone());
            out.insert(spec.negate(p));
        }
        out
    }

    /// Checks the structure covers `universe` exactly, with disjoint cells.
    pub fn verify_covers(&self, spec: &GroupSpec, universe: &BTreeSet<Elem>) -> bool {
        let mut seen: BTreeSet<Elem> = BTreeSet::new();
        for six in &self.sixes {
            for e in six.elements(spec) {
                if !universe.contains(&e) || !seen.insert(e) {
                    return false;
                }
            }
        }
        for p in &self.leftover_pairs {
            let np = spec.negate(p);
            if np == *p {
                return false;
            }
            for e in [p.clone(), np] {
                if !universe.contains(&e) || !seen.insert(e) {
                    return false;
                }
            }
        }
        seen.len() == universe.len()
    }
}

/// Validates generators and builds a good six-set (see [`GoodSix::new`]).
pub fn good_six(spec: &GroupSpec, c: Elem, d: Elem) -> Result<GoodSix, PartitionError> {
    GoodSix::new(spec, c, d)
}

/// Decomposes all non-zero elements of an odd-order group into good
/// six-sets plus the residue-determined number of leftover inverse pairs
/// (`|H| mod 6` → 1: none, 3: one, 5: two).
///
/// Deterministic.  Cyclic groups run on a representative searcher that
/// covers the largest uncovered inverse pair first, which stays shallow
/// even for large orders; other groups extend from the lexicographically
/// least uncovered element.  Leftover pairs prefer the smallest
/// representatives, so `|H| = 5` yields pairs `{±x, ±2x}`, which
/// downstream constructions rely on.  Results are memoized per group
/// when `std` is enabled.
pub fn skolem_partition(spec: &GroupSpec) -> Result<SkolemPartition, SkolemError> {
    if !spec.has_odd_order() || spec.order() < 3 {
        return Err(SkolemError::PreconditionViolated {
            reason: format!("{spec} must have odd order at least 3"),
        });
    }

    #[cfg(feature = "std")]
    {
        use std::collections::HashMap;
        use std::sync::{Mutex, OnceLock};
        type Entry = (Vec<(Elem, Elem)>, Vec<Elem>);
        static CACHE: OnceLock<Mutex<HashMap<Vec<u16>, Entry>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = spec.factors().to_vec();
        if let Some((sixes, pairs)) = cache.lock().unwrap().get(&key).cloned() {
            return Ok(SkolemPartition {
                sixes: sixes
                    .into_iter()
                    .map(|(c, d)| GoodSix { c, d })
                    .collect(),
                leftover_pairs: pairs,
            });
        }
        let result = skolem_partition_uncached(spec)?;
        cache.lock().unwrap().insert(
            key,
            (
                result.sixes.iter().map(|s| (s.c.clone(), s.d.clone())).collect(),
                result.leftover_pairs.clone(),
            ),
        );
        return Ok(result);
    }

    #[cfg(not(feature = "std"))]
    skolem_partition_uncached(spec)
}

fn skolem_partition_uncached(spec: &GroupSpec) -> Result<SkolemPartition, SkolemError> {
    let pairs = match spec.order() % 6 {
        1 => 0,
        3 => 1,
        5 => 2,
        _ => unreachable!("odd order"),
    };
    if spec.factors().len() == 1 {
        return skolem_cyclic(spec, pairs, 50_000_000);
    }
    let universe: BTreeSet<Elem> = spec.nonzero_elements().collect();
    skolem_subset(spec, &universe, pairs, 50_000_000)
}

/// Fast path for odd cyclic groups.  The inverse pairs of `Z_m` are the
/// representatives `1..=t` with `t = (m−1)/2`, and a good six-set is
/// `±{a, b, r}` for distinct representatives with `a + b = r` or
/// `a + b + r = m`.  Leftover representatives are chosen smallest-first;
/// triples always cover the largest free representative next, which has
/// the fewest completions.  Plain backtracking still hits heavy-tailed
/// dead ends on some orders, so the search runs on a deterministic
/// restart schedule: a balanced-split pass first, then budget-capped
/// passes with seeded shuffles of the candidate order, then one final
/// pass on the remaining budget.
fn skolem_cyclic(
    spec: &GroupSpec,
    pairs: usize,
    budget: u64,
) -> Result<SkolemPartition, SkolemError> {
    let m = spec.order() as usize;
    let t = (m - 1) / 2;
    const RESTART_CAP: u64 = 200_000;
    const SHUFFLED_RESTARTS: u64 = 40;
    let mut spent = 0u64;
    for attempt in 0..=SHUFFLED_RESTARTS + 1 {
        if spent >= budget {
            break;
        }
        let cap = if attempt > SHUFFLED_RESTARTS {
            budget - spent
        } else {
            RESTART_CAP.min(budget - spent)
        };
        let mut search = CyclicSearch {
            m,
            t,
            free: alloc::vec![true; t + 1],
            leftover: Vec::new(),
            triples: Vec::new(),
            nodes: cap,
            rng: (1..=SHUFFLED_RESTARTS)
                .contains(&attempt)
                .then(|| (m as u64) * 1000 + attempt),
        };
        search.free[0] = false;
        let found = search.leftovers(pairs, 1);
        spent += cap - search.nodes;
        if found {
            let elem = |v: usize| Elem::from_slice(&[v as u16]);
            let sp = SkolemPartition {
                sixes: search
                    .triples
                    .iter()
                    .map(|&(a, b)| GoodSix {
                        c: elem(a),
                        d: elem(b),
                    })
                    .collect(),
                leftover_pairs: search.leftover.iter().map(|&p| elem(p)).collect(),
            };
            debug_assert!(sp.verify_covers(spec, &spec.nonzero_elements().collect()));
            return Ok(sp);
        }
        if search.nodes > 0 {
            // The pass ran to completion: the space is truly exhausted.
            return Err(SkolemError::Infeasible {
                reason: "search space exhausted".to_string(),
            });
        }
    }
    Err(SkolemError::BudgetExceeded { nodes: budget })
}

struct CyclicSearch {
    m: usize,
    t: usize,
    /// `free[v]`: representative `v` (1..=t) is still uncovered.
    free: Vec<bool>,
    leftover: Vec<usize>,
    triples: Vec<(usize, usize)>,
    nodes: u64,
    /// Some: shuffle candidate orders from this state; None: balanced
    /// splits first.
    rng: Option<u64>,
}

impl CyclicSearch {
    /// splitmix64 — embedded so the documented determinism can never
    /// shift underneath a dependency upgrade.
    fn next_rand(&mut self) -> u64 {
        let s = self.rng.as_mut().expect("only called when seeded");
        *s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = *s;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// All free pairs `(a, b)` completing `r`: `a + b = r`, or
    /// `a + b = m − r` so the triple wraps.  The wrap sum exceeds `t`,
    /// where the lower bound keeps `b ≤ t`.
    fn candidates(&mut self, r: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in [r, self.m - r] {
            let lo = if s > self.t { s - self.t } else { 1 };
            for a in lo..s.div_ceil(2) {
                let b = s - a;
                if b <= self.t && self.free[a] && self.free[b] {
                    out.push((a, b));
                }
            }
        }
        if self.rng.is_some() {
            for i in (1..out.len()).rev() {
                let j = (self.next_rand() % (i as u64 + 1)) as usize;
                out.swap(i, j);
            }
        } else {
            out.sort_by_key(|&(a, b)| b - a);
        }
        out
    }

    fn leftovers(&mut self, pairs_left: usize, min_rep: usize) -> bool {
        if pairs_left == 0 {
            return self.cover();
        }
        if self.nodes == 0 {
            return false;
        }
        self.nodes -= 1;
        for p in min_rep..=self.t {
            if !self.free[p] {
                continue;
            }
            self.free[p] = false;
            self.leftover.push(p);
            if self.leftovers(pairs_left - 1, p + 1) {
                return true;
            }
            self.leftover.pop();
            self.free[p] = true;
            if self.nodes == 0 {
                return false;
            }
        }
        false
    }

    fn cover(&mut self) -> bool {
        if self.nodes == 0 {
            return false;
        }
        self.nodes -= 1;
        let Some(r) = (1..=self.t).rev().find(|&i| self.free[i]) else {
            return true;
        };
        self.free[r] = false;
        for (a, b) in self.candidates(r) {
            self.free[a] = false;
            self.free[b] = false;
            self.triples.push((a, b));
            if self.cover() {
                return true;
            }
            self.triples.pop();
            self.free[a] = true;
            self.free[b] = true;
            if self.nodes == 0 {
                self.free[r] = true;
                return false;
            }
        }
        self.free[r] = true;
        false
    }
}

/// Searches for a decomposition of `subset` (which must be closed under
/// negation and zero-free) into good six-sets plus exactly `pairs`
/// leftover inverse pairs, within a node budget.
///
/// Distinguishes a certified [`SkolemError::Infeasible`] (search space
/// exhausted) from [`SkolemError::BudgetExceeded`].
pub fn skolem_subset(
    spec: &GroupSpec,
    subset: &BTreeSet<Elem>,
    pairs: usize,
    budget: u64,
) -> Result<SkolemPartition, SkolemError> {
    // Good six-sets and zero-sum pairs are closed under negation and free
    // of zero and involutions, so a subset violating any of that is
    // infeasible outright (not an input error).
    let zero = spec.zero();
    if subset.contains(&zero) {
        return Err(SkolemError::Infeasible {
            reason: "zero lies in no zero-sum pair or six-set".to_string(),
        });
    }
    for e in subset {
        if !spec.contains(e) {
            return Err(SkolemError::PreconditionViolated {
                reason: format!("{e} is not a group element"),
            });
        }
        if !subset.contains(&spec.negate(e)) {
            return Err(SkolemError::Infeasible {
                reason: format!(
                    "the subset is not closed under negation at {e}, but every \
                     six-set and inverse pair is"
                ),
            });
        }
        if spec.add(e, e) == zero {
            return Err(SkolemError::Infeasible {
                reason: format!("{e} is an involution, which no six-set or pair contains"),
            });
        }
    }
    if subset.len() < 2 * pairs || (subset.len() - 2 * pairs) % 6 != 0 {
        return Err(SkolemError::Infeasible {
            reason: format!(
                "{} elements cannot split into six-sets plus {pairs} pairs",
                subset.len()
            ),
        });
    }

    let mut uncovered = subset.clone();
    let mut sixes = Vec::new();
    let mut leftover = Vec::new();
    let mut nodes = budget;
    let found = dfs(
        spec,
        &mut uncovered,
        pairs,
        &mut sixes,
        &mut leftover,
        &mut nodes,
    );
    match found {
        Dfs::Found => {
            let sp = SkolemPartition {
                sixes,
                leftover_pairs: leftover,
            };
            debug_assert!(sp.verify_covers(spec, subset));
            Ok(sp)
        }
        Dfs::Exhausted => Err(SkolemError::Infeasible {
            reason: "search space exhausted".to_string(),
        }),
        Dfs::OutOfBudget => Err(SkolemError::BudgetExceeded { nodes: budget }),
    }
}

enum Dfs {
    Found,
    Exhausted,
    OutOfBudget,
}

fn dfs(
    spec: &GroupSpec,
    uncovered: &mut BTreeSet<Elem>,
    pairs_left: usize,
    sixes: &mut Vec<GoodSix>,
    leftover: &mut Vec<Elem>,
    nodes: &mut u64,
) -> Dfs {
    if *nodes == 0 {
        return Dfs::OutOfBudget;
    }
    *nodes -= 1;
    let Some(x) = uncovered.iter().next().cloned() else {
        return if pairs_left == 0 {
            Dfs::Found
        } else {
            Dfs::Exhausted
        };
    };
    // Option 1: the least uncovered element heads a leftover pair.
    if pairs_left > 0 {
        let nx = spec.negate(&x);
        if uncovered.contains(&nx) {
            uncovered.remove(&x);
            uncovered.remove(&nx);
            leftover.push(x.clone());
            match dfs(spec, uncovered, pairs_left - 1, sixes, leftover, nodes) {
                Dfs::Exhausted => {}
                done => return done,
            }
            leftover.pop();
            uncovered.insert(x.clone());
            uncovered.insert(nx);
        }
    }
    // Option 2: it generates a six-set together with some uncovered d.
    let candidates: Vec<Elem> = uncovered.iter().cloned().collect();
    for d in candidates {
        if d == x {
            continue;
        }
        let Ok(six) = GoodSix::new(spec, x.clone(), d.clone()) else {
            continue;
        };
        let members = six.elements(spec);
        if !members.iter().all(|m| uncovered.contains(m)) {
            continue;
        }
        for m in &members {
            uncovered.remove(m);
        }
        sixes.push(six);
        match dfs(spec, uncovered, pairs_left, sixes, leftover, nodes) {
            Dfs::Exhausted => {}
            done => return done,
        }
        sixes.pop();
        for m in members {
            uncovered.insert(m);
        }
    }
    Dfs::Exhausted
}

// ──────────────────────────────────────────────────────────────────────────
// Tests
// ──────────────────────────────────────────────────────────────────────────
