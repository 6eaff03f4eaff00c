//! Zero-sum partitions of finite Abelian groups.
//!
//! A group `Γ` of order `n` has a *zero-sum partition of the non-zero
//! elements* for a multiset of sizes `[m₁, …, m_t]` (with `Σ mᵢ = n − 1`)
//! when `Γ \ {0}` splits into pairwise disjoint subsets `A₁, …, A_t` with
//! `|Aᵢ| = mᵢ` and `Σ Aᵢ = 0` for every `i`.  The largest `r` such that
//! *every* multiset with all sizes `≥ r` admits such a partition is the
//! group's zero-sum flexibility level; this crate classifies that level,
//! constructs witness partitions for concrete size multisets, verifies
//! them, and applies them to irregular-type digraph labelings.
//!
//! The crate is organised as:
//!
//! * [`group`] — group specifications, element arithmetic, involutions,
//!   Sylow-2 splittings, complete mappings, subgroup/transversal search;
//! * [`partition`] — size-multiset normalization and partition verification;
//! * [`skolem`] — Skolem-type partitions of odd cyclic (and more general
//!   odd) groups, plus the "good six-set" building block;
//! * [`oracle`] — exhaustive, budgeted search for zero-sum partitions,
//!   usable both as a reference oracle and as a fallback constructor;
//! * [`engine`] — the constructive engine: classification of a group's
//!   flexibility level and direct construction of partitions for the
//!   multiset regimes the theory covers;
//! * [`labeling`] — irregular/distance-magic/distance-antimagic labelings
//!   of digraphs derived from zero-sum partitions.
//!
//! With `default-features = false` the crate is `no_std` (it still requires
//! `alloc`); the `std` feature only adds process-wide memoization of the
//! more expensive searches.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod engine;
pub mod group;
pub mod labeling;
pub mod oracle;
pub mod partition;
pub mod skolem;

pub use engine::{classify, realize, Classification, Realization};
pub use group::{Elem, GroupSpec};
pub use partition::{verify_partition, Partition};
