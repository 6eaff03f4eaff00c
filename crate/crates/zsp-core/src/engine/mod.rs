//! The constructive engine: classifies how flexible a group's zero-sum
//! partitions are, and builds a partition for a requested size multiset.
//!
//! The strategy ladder, from most to least structural:
//!
//! 1. direct answers for trivial/odd groups;
//! 2. bundled base tables for `Z2×Z2×Z2×Z3` and `Z2×Z2×Z2×Z5`, extended
//!    by an index-2 doubling step;
//! 3. a product construction for mixed groups `L × H` (non-trivial
//!    2-part `L`, odd part `H`): the odd part is decomposed into good
//!    six-sets plus leftover inverse pairs, which spread into flexible
//!    six-set families and absorber layers across the product; a small
//!    integer solve picks how many of each building block to use;
//! 4. two fixed templates for `Z2×Z2×Z2 × H` cases the generic solve
//!    cannot reach;
//! 5. the exhaustive search as a final fallback for small groups.
//!
//! Every partition produced by any route is re-verified before it is
//! returned.

mod fixtures;
mod odd;
mod solver;
mod templates;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::group::GroupSpec;
use crate::oracle::{self, OracleError};
use crate::partition::{
    normalize_sizes, verify_partition, Partition, SizeFloor, SizeNormalization,
};

pub use solver::{realize_1mod6, realize_3mod6, realize_5mod6, realize_quadruple};

/// Order cap for exhaustive-search fallbacks inside the engine.
pub const FALLBACK_SEARCH_CAP: u64 = 128;

// ──────────────────────────────────────────────────────────────────────────
// Classification
// ──────────────────────────────────────────────────────────────────────────

/// How flexible the group's zero-sum partitions are known to be.
///
/// "Level `r`" means: every multiset of part sizes `≥ r` summing to
/// `|Γ| − 1` admits a zero-sum partition of the non-zero elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// A unique involution: the non-zero elements sum to it, so no
    /// zero-sum partition of any kind exists.
    NoZspp,
    /// No involution (odd order) or exactly three: level 2, the best
    /// possible.
    TwoZspp,
    /// More than three involutions and an odd part of order ≡ 1 or 3
    /// (mod 6), or none: level 3 holds; level 2 fails for elementary
    /// 2-groups and is open otherwise.
    ThreeZspp,
    /// More than three involutions and an odd part of order ≡ 5 (mod 6):
    /// only level 4 is known.
    FourZsppOnlyKnown,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::NoZspp => "none",
            Classification::TwoZspp => "level 2",
            Classification::ThreeZspp => "level 3",
            Classification::FourZsppOnlyKnown => "level 4 (smaller levels open)",
        };
        f.write_str(s)
    }
}

impl Classification {
    /// The smallest part-size floor with a guarantee, if any.
    pub fn guaranteed_floor(&self) -> Option<usize> {
        match self {
            Classification::NoZspp => None,
            Classification::TwoZspp => Some(2),
            Classification::ThreeZspp => Some(3),
            Classification::FourZsppOnlyKnown => Some(4),
        }
    }
}

/// Classifies the group's zero-sum partition flexibility by its involution
/// count and the residue of its odd part modulo 6.
pub fn classify(spec: &GroupSpec) -> Classification {
    match spec.involution_count() {
        1 => Classification::NoZspp,
        0 | 3 => Classification::TwoZspp,
        _ => {
            let h_order = spec.sylow2_split().h.order();
            if h_order % 6 == 5 {
                Classification::FourZsppOnlyKnown
            } else {
                Classification::ThreeZspp
            }
        }
    }
}

// ──────────────────────────────────────────────────────────────────────────
// Realization
// ──────────────────────────────────────────────────────────────────────────

/// Whether a below-floor request is provably impossible or merely beyond
/// what the theory guarantees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloorStatus {
    /// Provably unrealizable.
    Refuted,
    /// Not covered by a construction, not refuted either.
    Open,
}

/// Errors from [`realize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealizeError {
    /// No partition with these sizes exists; the reason is a certificate.
    Unrealizable { reason: String },
    /// The request goes below the group's known part-size floor and the
    /// engine could not settle it either way.
    FloorViolation {
        floor: usize,
        status: FloorStatus,
        reason: String,
    },
    /// The input violates a documented precondition (wrong total, zero
    /// sizes, …).
    PreconditionViolated { reason: String },
    /// The instance is beyond the engine's constructive routes and too
    /// large for the exhaustive fallback.
    CapabilityExceeded { reason: String },
    /// An internal construction dead-ended and no fallback settled the
    /// instance.  This is reported rather than masked.
    InternalExhaustion { reason: String },
}

impl fmt::Display for RealizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealizeError::Unrealizable { reason } => write!(f, "unrealizable: {reason}"),
            RealizeError::FloorViolation {
                floor,
                status,
                reason,
            } => {
                let s = match status {
                    FloorStatus::Refuted => "refuted",
                    FloorStatus::Open => "open",
                };
                write!(f, "below the size floor {floor} ({s}): {reason}")
            }
            RealizeError::PreconditionViolated { reason } => {
                write!(f, "precondition violated: {reason}")
            }
            RealizeError::CapabilityExceeded { reason } => {
                write!(f, "capability exceeded: {reason}")
            }
            RealizeError::InternalExhaustion { reason } => {
                write!(f, "internal exhaustion: {reason}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RealizeError {}

/// A record of how a partition was constructed.
#[derive(Debug, Clone, Default)]
pub struct ConstructionTrace {
    /// Short name of the top-level route.
    pub route: String,
    /// Human-readable construction steps.
    pub steps: Vec<String>,
    /// True when the final answer came from exhaustive search rather than
    /// a structural construction.
    pub used_fallback_search: bool,
}

impl ConstructionTrace {
    fn new(route: &str) -> Self {
        ConstructionTrace {
            route: route.to_string(),
            steps: Vec::new(),
            used_fallback_search: false,
        }
    }

    pub(crate) fn step(&mut self, s: String) {
        self.steps.push(s);
    }
}

/// A verified zero-sum partition together with its construction trace.
#[derive(Debug, Clone)]
pub struct Realization {
    pub partition: Partition,
    pub trace: ConstructionTrace,
}

/// Which engine to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EngineChoice {
    /// Structural constructions with exhaustive search as fallback.
    #[default]
    Constructive,
    /// Exhaustive search only (subject to its order cap).
    Exhaustive,
}

/// Options for [`realize_with`].
#[derive(Debug, Clone, Default)]
pub struct RealizeOptions {
    pub engine: EngineChoice,
    /// Node budget for exhaustive searches (None: default / environment).
    pub budget: Option<u64>,
}

/// Builds a zero-sum partition of the non-zero elements of `spec` with the
/// given part sizes, using default options.
pub fn realize(spec: &GroupSpec, sizes: &[usize]) -> Result<Realization, RealizeError> {
    realize_with(spec, sizes, &RealizeOptions::default())
}

/// [`realize`] with explicit engine/budget options.
pub fn realize_with(
    spec: &GroupSpec,
    sizes: &[usize],
    options: &RealizeOptions,
) -> Result<Realization, RealizeError> {
    // Input validation.
    let n = spec.order();
    let total: u64 = sizes.iter().map(|&s| s as u64).sum();
    if total != n - 1 {
        return Err(RealizeError::PreconditionViolated {
            reason: format!(
                "part sizes sum to {total}, but {spec} has {} non-zero elements",
                n - 1
            ),
        });
    }
    if sizes.iter().any(|&s| s == 0) {
        return Err(RealizeError::PreconditionViolated {
            reason: "part sizes must be positive".to_string(),
        });
    }
    if n == 1 {
        return Ok(Realization {
            partition: Partition::new(Vec::new()),
            trace: ConstructionTrace::new("trivial group"),
        });
    }

    // Groups with a unique involution admit nothing at all.
    if spec.involution_count() == 1 {
        return Err(RealizeError::Unrealizable {
            reason: format!(
                "{spec} has a unique involution; the non-zero elements sum to it, \
                 so they cannot split into zero-sum parts"
            ),
        });
    }

    // Singleton parts can never sum to zero.
    if sizes.contains(&1) {
        return Err(RealizeError::FloorViolation {
            floor: 2,
            status: FloorStatus::Refuted,
            reason: "a part of size 1 is a non-zero element that cannot sum to zero".to_string(),
        });
    }

    if options.engine == EngineChoice::Exhaustive {
        return finish(spec, sizes, exhaustive_route(spec, sizes, options)?);
    }

    let min = *sizes.iter().min().expect("sizes non-empty");

    // Odd order: the direct construction never fails.
    if spec.has_odd_order() {
        return finish(spec, sizes, odd::realize_odd(spec, sizes)?);
    }

    // 2-groups: all structure is involutions; small ones go to search.
    if spec.is_two_group() {
        return finish(spec, sizes, two_group_route(spec, sizes, min, options)?);
    }

    // Mixed groups: bundled tables, the product construction, templates,
    // then search.
    let canonical = spec.canonical_factors();
    if canonical == [2, 2, 2, 3] || canonical == [2, 2, 2, 5] {
        return finish(spec, sizes, fixtures::fixture_route(spec, sizes, options)?);
    }

    match solver::product_route(spec, sizes, min) {
        Ok(real) => return finish(spec, sizes, real),
        Err(primary) => {
            // Templates for Z2×Z2×Z2 × H (β = 0 requests the solve cannot
            // express).
            if let Some(real) = templates::template_route(spec, sizes) {
                return finish(spec, sizes, real?);
            }
            match exhaustive_route(spec, sizes, options) {
                Ok(real) => finish(spec, sizes, real),
                Err(fallback_err) => Err(reconcile_errors(spec, min, primary, fallback_err)),
            }
        }
    }
}

/// Maps a (primary construction, fallback search) error pair to the most
/// honest single answer.
fn reconcile_errors(
    spec: &GroupSpec,
    min: usize,
    primary: RealizeError,
    fallback: RealizeError,
) -> RealizeError {
    // A certificate of impossibility from the search trumps everything.
    if let RealizeError::Unrealizable { .. } = fallback {
        return fallback;
    }
    // If the request sits below the known floor, report that.
    let floor = classify(spec).guaranteed_floor().unwrap_or(2);
    if min < floor {
        return RealizeError::FloorViolation {
            floor,
            status: FloorStatus::Open,
            reason: format!(
                "sizes below {floor} are not covered by a construction for {spec} \
                 and the search could not settle the instance ({fallback})"
            ),
        };
    }
    match primary {
        RealizeError::InternalExhaustion { reason } => RealizeError::InternalExhaustion {
            reason: format!("{reason}; fallback search also failed ({fallback})"),
        },
        other => other,
    }
}

/// Exhaustive-search route, with the engine's order cap.
fn exhaustive_route(
    spec: &GroupSpec,
    sizes: &[usize],
    options: &RealizeOptions,
) -> Result<Realization, RealizeError> {
    if spec.order() > FALLBACK_SEARCH_CAP {
        return Err(RealizeError::CapabilityExceeded {
            reason: format!(
                "order {} exceeds the exhaustive-search cap {FALLBACK_SEARCH_CAP}",
                spec.order()
            ),
        });
    }
    match oracle::search_partition(spec, sizes, options.budget) {
        Ok(partition) => {
            let mut trace = ConstructionTrace::new("exhaustive search");
            trace.used_fallback_search = true;
            trace.step(format!("searched order {} directly", spec.order()));
            Ok(Realization { partition, trace })
        }
        Err(OracleError::Infeasible { reason }) => Err(RealizeError::Unrealizable { reason }),
        Err(OracleError::BudgetExceeded { nodes }) => Err(RealizeError::CapabilityExceeded {
            reason: format!("search budget of {nodes} nodes exceeded"),
        }),
        Err(OracleError::CapabilityExceeded { reason }) => {
            Err(RealizeError::CapabilityExceeded { reason })
        }
        Err(OracleError::PreconditionViolated { reason }) => {
            Err(RealizeError::PreconditionViolated { reason })
        }
    }
}

/// 2-groups: sizes ≥ 3 are guaranteed; size-2 parts are impossible in
/// elementary 2-groups and open otherwise (except with exactly three
/// involutions, where everything ≥ 2 is guaranteed).  Construction is by
/// exhaustive search up to the cap.
fn two_group_route(
    spec: &GroupSpec,
    sizes: &[usize],
    min: usize,
    options: &RealizeOptions,
) -> Result<Realization, RealizeError> {
    let involutions = spec.involution_count();
    if min == 2 && involutions + 1 == spec.order() {
        return Err(RealizeError::FloorViolation {
            floor: 3,
            status: FloorStatus::Refuted,
            reason: format!(
                "every non-zero element of {spec} is an involution, so no part \
                 {{x, −x}} of size 2 exists"
            ),
        });
    }
    match exhaustive_route(spec, sizes, options) {
        Ok(real) => Ok(real),
        Err(RealizeError::CapabilityExceeded { reason }) if min == 2 && involutions > 3 => {
            Err(RealizeError::FloorViolation {
                floor: 3,
                status: FloorStatus::Open,
                reason: format!("size-2 parts are not covered by a construction here; {reason}"),
            })
        }
        Err(e) => Err(e),
    }
}

/// Final verification wrapper: every partition the engine hands out is
/// checked against the group and the requested sizes.
fn finish(
    spec: &GroupSpec,
    sizes: &[usize],
    real: Realization,
) -> Result<Realization, RealizeError> {
    let report = verify_partition(spec, &real.partition, Some(sizes));
    if !report.ok {
        return Err(RealizeError::InternalExhaustion {
            reason: format!(
                "constructed partition failed verification ({} violations; route '{}')",
                report.violations.len(),
                real.trace.route
            ),
        });
    }
    Ok(real)
}

/// Normalizes sizes to a small alphabet and recombines the refined
/// partition afterwards; shared by several routes.
pub(crate) fn with_normalized<F>(
    sizes: &[usize],
    floor: SizeFloor,
    build: F,
) -> Result<Realization, RealizeError>
where
    F: FnOnce(&SizeNormalization) -> Result<Realization, RealizeError>,
{
    let norm = normalize_sizes(sizes, floor).map_err(|e| RealizeError::PreconditionViolated {
        reason: e.to_string(),
    })?;
    let mut real = build(&norm)?;
    let merged = norm.recombine(&real.partition.parts);
    real.partition = Partition::new(merged);
    real.trace.step(format!(
        "recombined {} refined parts into {} requested parts",
        norm.normalized.len(),
        sizes.len()
    ));
    Ok(real)
}

/// Splits a size list into counts per size for the `{2,3,4,5}` alphabet.
pub(crate) fn alphabet3_counts(sizes: &[usize]) -> Option<(usize, usize, usize, usize)> {
    let mut counts = (0usize, 0usize, 0usize, 0usize); // (α, β, γ, ω)
    for &s in sizes {
        match s {
            2 => counts.3 += 1,
            3 => counts.0 += 1,
            4 => counts.1 += 1,
            5 => counts.2 += 1,
            _ => return None,
        }
    }
    Some(counts)
}

// ──────────────────────────────────────────────────────────────────────────
// Tests
// ──────────────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn classification_by_involutions_and_odd_part() {
        assert_eq!(classify(&g("Z4")), Classification::NoZspp);
        assert_eq!(classify(&g("Z2")), Classification::NoZspp);
        assert_eq!(classify(&g("Z4xZ9")), Classification::NoZspp);
        assert_eq!(classify(&g("Z7")), Classification::TwoZspp);
        assert_eq!(classify(&g("Z3xZ9")), Classification::TwoZspp);
        assert_eq!(classify(&g("Z2xZ2")), Classification::TwoZspp);
        assert_eq!(classify(&g("Z2xZ4xZ3")), Classification::TwoZspp);
        assert_eq!(classify(&g("Z4xZ4xZ5")), Classification::TwoZspp);
        assert_eq!(classify(&g("Z2xZ2xZ2")), Classification::ThreeZspp);
        assert_eq!(classify(&g("Z2xZ2xZ4")), Classification::ThreeZspp);
        assert_eq!(classify(&g("Z2xZ2xZ2xZ3")), Classification::ThreeZspp);
        assert_eq!(classify(&g("Z2xZ2xZ2xZ7")), Classification::ThreeZspp);
        assert_eq!(classify(&g("Z2xZ2xZ2xZ5")), Classification::FourZsppOnlyKnown);
        assert_eq!(classify(&g("Z2xZ8xZ2xZ5")), Classification::FourZsppOnlyKnown);
        // Z2xZ2xZ35 has exactly three involutions, so the |I| ∈ {0, 3}
        // clause wins even though 35 ≡ 5 (mod 6).
        assert_eq!(classify(&g("Z2xZ2xZ35")), Classification::TwoZspp);
        assert_eq!(classify(&g("Z2xZ2xZ2xZ35")), Classification::FourZsppOnlyKnown);
        // 15 = 3·5 ≡ 3 (mod 6): level 3.
        assert_eq!(classify(&g("Z2xZ2xZ2xZ15")), Classification::ThreeZspp);
    }

    #[test]
    fn realize_validates_inputs() {
        let spec = g("Z7");
        assert!(matches!(
            realize(&spec, &[3, 4]),
            Err(RealizeError::PreconditionViolated { .. })
        ));
        assert!(matches!(
            realize(&spec, &[3, 3, 0]),
            Err(RealizeError::PreconditionViolated { .. })
        ));
        assert!(matches!(
            realize(&spec, &[1, 5]),
            Err(RealizeError::FloorViolation {
                status: FloorStatus::Refuted,
                ..
            })
        ));
    }

    #[test]
    fn realize_refuses_unique_involution_groups() {
        for s in ["Z4", "Z8", "Z12", "Z4xZ9"] {
            let spec = g(s);
            let n = (spec.order() - 1) as usize;
            assert!(matches!(
                realize(&spec, &[n]),
                Err(RealizeError::Unrealizable { .. })
            ));
        }
    }

    #[test]
    fn realize_refutes_pairs_on_elementary_2groups() {
        let spec = g("Z2xZ2xZ2");
        assert!(matches!(
            realize(&spec, &[2, 2, 3]),
            Err(RealizeError::FloorViolation {
                status: FloorStatus::Refuted,
                floor: 3,
                ..
            })
        ));
    }
}
