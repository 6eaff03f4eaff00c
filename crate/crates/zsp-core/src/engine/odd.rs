//! Direct construction for groups of odd order.
//!
//! The good-six decomposition splits the non-zero elements into six-sets
//! and at most two leftover inverse pairs.  Each six-set yields either
//! three zero-sum pairs or two zero-sum triples, so any size multiset with
//! parts ≥ 2 can be assembled exactly: every odd-sized part takes one
//! triple and fills up with pairs, every even-sized part uses pairs only.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::group::GroupSpec;
use crate::partition::Partition;
use crate::skolem::{skolem_partition, SkolemError};

use super::{ConstructionTrace, Realization, RealizeError};

pub(super) fn realize_odd(
    spec: &GroupSpec,
    sizes: &[usize],
) -> Result<Realization, RealizeError> {
    debug_assert!(spec.has_odd_order());
    let decomposition = skolem_partition(spec).map_err(|e| match e {
        SkolemError::Infeasible { reason } | SkolemError::PreconditionViolated { reason } => {
            RealizeError::InternalExhaustion {
                reason: format!("six-set decomposition failed: {reason}"),
            }
        }
        SkolemError::BudgetExceeded { nodes } => RealizeError::CapabilityExceeded {
            reason: format!("six-set decomposition budget of {nodes} nodes exceeded"),
        },
    })?;

    let sixes = decomposition.sixes.len();
    let odd_parts = sizes.iter().filter(|&&s| s % 2 == 1).count();
    // Each six-set yields two triples; odd-sized parts need one triple each.
    // The counting always works out: Σ sizes = |Γ|−1 = 6·k + 2·leftovers.
    debug_assert_eq!(odd_parts % 2, 0);
    let sixes_as_triples = odd_parts / 2;
    if sixes_as_triples > sixes {
        return Err(RealizeError::InternalExhaustion {
            reason: format!(
                "{odd_parts} odd-sized parts need {sixes_as_triples} six-sets as triples, \
                 but only {sixes} six-sets exist"
            ),
        });
    }

    let mut triples: Vec<Vec<crate::group::Elem>> = Vec::new();
    let mut pairs: Vec<Vec<crate::group::Elem>> = Vec::new();
    for (i, six) in decomposition.sixes.iter().enumerate() {
        if i < sixes_as_triples {
            for triple in six.triples(spec) {
                triples.push(triple.to_vec());
            }
        } else {
            for pair in six.pairs(spec) {
                pairs.push(pair.to_vec());
            }
        }
    }
    for rep in &decomposition.leftover_pairs {
        pairs.push(alloc::vec![rep.clone(), spec.negate(rep)]);
    }

    // Assemble parts: odd sizes take a triple plus pairs, even sizes pairs.
    let mut triple_iter = triples.into_iter();
    let mut pair_iter = pairs.into_iter();
    let mut parts: Vec<Vec<crate::group::Elem>> = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let mut part: Vec<crate::group::Elem> = Vec::with_capacity(size);
        let mut remaining = size;
        if size % 2 == 1 {
            let t = triple_iter.next().ok_or_else(|| RealizeError::InternalExhaustion {
                reason: "ran out of zero-sum triples during assembly".to_string(),
            })?;
            remaining -= 3;
            part.extend(t);
        }
        while remaining > 0 {
            let p = pair_iter.next().ok_or_else(|| RealizeError::InternalExhaustion {
                reason: "ran out of zero-sum pairs during assembly".to_string(),
            })?;
            remaining -= 2;
            part.extend(p);
        }
        parts.push(part);
    }
    debug_assert!(triple_iter.next().is_none());
    debug_assert!(pair_iter.next().is_none());

    let mut trace = ConstructionTrace::new("odd order direct");
    trace.step(format!(
        "decomposed {spec} into {sixes} six-sets and {} leftover pairs",
        decomposition.leftover_pairs.len()
    ));
    trace.step(format!(
        "used {sixes_as_triples} six-sets as triple suppliers for {odd_parts} odd-sized parts"
    ));
    Ok(Realization {
        partition: Partition::new(parts),
        trace,
    })
}
