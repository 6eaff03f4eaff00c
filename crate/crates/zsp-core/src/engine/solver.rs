//! Product construction for mixed groups: a non-trivial 2-part `L`
//! crossed with a non-trivial odd part `H`.
//!
//! The odd part is decomposed into good six-sets plus at most two leftover
//! inverse pairs ([`skolem_partition`]).  Crossing each six-set with `L`
//! through a complete mapping of `L` yields `k·|L|` six-set families, each
//! of which splits into two zero-sum triples or three inverse pairs on
//! demand.  What remains — the copy of `L` over zero and the cosets over
//! the leftover pairs — is carved into zero-sum blocks by a small integer
//! solve over a fixed repertoire of unit shapes:
//!
//! * the involutions of `L` are packed into zero-sum triples, quadruples
//!   and 5-sets by an exhaustive search on the tiny involution subgroup;
//! * a packed group is either used directly as one part, or *seeded*
//!   through fresh inverse pairs or through the tokens of a layer coset,
//!   which turns a group of size `s` into `s` zero-sum triples;
//! * non-involution inverse pairs and layer tokens supply further triples
//!   through a handful of additional unit shapes (pair groups, six-sets
//!   inside the zero block, order-3 layer six-sets, cross-layer units).
//!
//! When the odd part has no leftover pairs, the construction borrows the
//! first coset of the first six-set family as its token layer; a consumed
//! token removes two elements from one six-set of that family and leaves
//! two inverse pairs behind.
//!
//! Each combination picked by the solve is assembled concretely; if a
//! greedy assembly step fails, the solve moves on to the next combination.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::min;

use crate::group::{find_complete_mapping, CompleteMapping, Elem, GroupSpec, Sylow2Split};
use crate::oracle;
use crate::partition::{normalize_sizes, Partition, SizeFloor};
use crate::skolem::skolem_partition;

use super::{with_normalized, ConstructionTrace, Realization, RealizeError};

/// Abort threshold for the combination enumeration.
const SOLVE_TUPLE_CAP: u64 = 2_000_000;
/// How many failed concrete assemblies to tolerate before giving up.
const MAX_ASSEMBLY_ATTEMPTS: u32 = 64;

fn internal(reason: String) -> RealizeError {
    RealizeError::InternalExhaustion { reason }
}

// ──────────────────────────────────────────────────────────────────────────
// Context: everything fixed about the group before planning
// ──────────────────────────────────────────────────────────────────────────

struct Ctx {
    spec: GroupSpec,
    split: Sylow2Split,
    /// `|L|`.
    lambda: usize,
    /// Number of involutions (all live in `L`).
    iota: usize,
    /// Number of non-involution inverse pairs in `L ∖ {0}`.
    r_max: usize,
    /// Good six-sets `(c, d)` of the odd part.
    sixes: Vec<(Elem, Elem)>,
    /// Complete mapping `(φ, ϕ)` of `L`.
    cm: CompleteMapping,
    /// The involution subgroup of `L` presented as an elementary 2-group.
    e_spec: GroupSpec,
    /// `e_spec` element (by index) → corresponding element of `L`.
    e_elems: Vec<Elem>,
    /// H-coordinates of the token layers.
    layers: Vec<Elem>,
    /// True when the single layer is borrowed from six-set family 0.
    borrow: bool,
    /// Index into `layers` whose H-coordinate has order 3, if any.
    u_layer: Option<usize>,
    /// Cross-layer unit forms `(from, to)` with `2·layers[from] = ±layers[to]`.
    cross: Vec<(usize, usize)>,
    /// Number of six-sets in the odd part (so `k·|L|` six-set families).
    k: usize,
}

impl Ctx {
    fn build(spec: &GroupSpec) -> Result<Ctx, RealizeError> {
        let split = spec.sylow2_split();
        let l = split.l.clone();
        let h = split.h.clone();
        let lambda = l.order() as usize;
        let iota = l.involution_count() as usize;
        if lambda < 4 || h.order() < 3 {
            return Err(internal(format!(
                "the product construction needs a mixed group, got {spec}"
            )));
        }
        let r_max = (lambda - 1 - iota) / 2;
        let sk = skolem_partition(&h).map_err(|e| {
            internal(format!("six/pair decomposition of the odd part failed: {e}"))
        })?;
        let sixes: Vec<(Elem, Elem)> = sk
            .sixes
            .iter()
            .map(|s| (s.c.clone(), s.d.clone()))
            .collect();
        let cm = find_complete_mapping(&l).map_err(|e| {
            internal(format!("no complete mapping for the 2-part {l}: {e}"))
        })?;

        // A basis of the involution subgroup, for mapping packed groups
        // back into L.
        let mut basis: Vec<Elem> = Vec::new();
        let mut span: BTreeSet<Elem> = BTreeSet::new();
        span.insert(l.zero());
        for v in l.involutions() {
            if !span.contains(&v) {
                let cur: Vec<Elem> = span.iter().cloned().collect();
                for s in &cur {
                    span.insert(l.add(s, &v));
                }
                basis.push(v);
            }
        }
        let e_rank = basis.len();
        debug_assert_eq!((1usize << e_rank) - 1, iota);
        let e_spec =
            GroupSpec::new(vec![2u16; e_rank]).expect("elementary 2-group spec is valid");
        let e_elems: Vec<Elem> = e_spec
            .elements()
            .map(|bits| {
                let mut acc = l.zero();
                for (i, &b) in bits.coords().iter().enumerate() {
                    if b == 1 {
                        acc = l.add(&acc, &basis[i]);
                    }
                }
                acc
            })
            .collect();

        let h_mod = h.order() % 6;
        let k = sixes.len();
        let (layers, borrow) = match h_mod {
            3 => (vec![sk.leftover_pairs[0].clone()], false),
            5 => (
                vec![
                    sk.leftover_pairs[0].clone(),
                    sk.leftover_pairs[1].clone(),
                ],
                false,
            ),
            1 => (vec![sixes[0].0.clone()], true),
            _ => {
                return Err(internal(format!(
                    "odd part {h} has even order — split is broken"
                )))
            }
        };
        let u_layer = if borrow {
            None
        } else {
            layers.iter().position(|s| h.scale(3, s) == h.zero())
        };
        let mut cross = Vec::new();
        if !borrow && layers.len() > 1 {
            for i in 0..layers.len() {
                for j in 0..layers.len() {
                    if i == j {
                        continue;
                    }
                    let twice = h.scale(2, &layers[i]);
                    if twice == layers[j] || twice == h.negate(&layers[j]) {
                        cross.push((i, j));
                    }
                }
            }
        }

        Ok(Ctx {
            spec: spec.clone(),
            split,
            lambda,
            iota,
            r_max,
            sixes,
            cm,
            e_spec,
            e_elems,
            layers,
            borrow,
            u_layer,
            cross,
            k,
        })
    }

    /// Packs the involutions into `t` zero-sum triples, `q` quadruples and
    /// `f` 5-sets (as subsets of `L`), if possible.  Memoized through the
    /// exhaustive-search cache.
    fn pack(&self, t: usize, q: usize, f: usize) -> Option<Vec<Vec<Elem>>> {
        let mut sizes = Vec::with_capacity(t + q + f);
        sizes.extend(core::iter::repeat(3).take(t));
        sizes.extend(core::iter::repeat(4).take(q));
        sizes.extend(core::iter::repeat(5).take(f));
        let parts = oracle::search_partition(&self.e_spec, &sizes, None).ok()?;
        Some(
            parts
                .parts
                .iter()
                .map(|part| {
                    part.iter()
                        .map(|bits| self.e_elems[self.e_spec.index_of(bits)].clone())
                        .collect()
                })
                .collect(),
        )
    }

    fn pack_ok(&self, t: usize, q: usize, f: usize) -> bool {
        self.pack(t, q, f).is_some()
    }
}

// ──────────────────────────────────────────────────────────────────────────
// Demand and plan
// ──────────────────────────────────────────────────────────────────────────

/// Requested part sizes bucketed by size (normalized alphabets only ever
/// contain 2–7).
#[derive(Debug, Clone, Copy, Default)]
struct Demand {
    twos: usize,
    threes: usize,
    fours: usize,
    fives: usize,
    sixes: usize,
    sevens: usize,
}

impl Demand {
    fn from_sizes(sizes: &[usize], extra_twos: usize) -> Option<Demand> {
        let mut d = Demand {
            twos: extra_twos,
            ..Demand::default()
        };
        for &s in sizes {
            match s {
                2 => d.twos += 1,
                3 => d.threes += 1,
                4 => d.fours += 1,
                5 => d.fives += 1,
                6 => d.sixes += 1,
                7 => d.sevens += 1,
                _ => return None,
            }
        }
        Some(d)
    }

    /// How many involution quadruples can be placed directly (4-parts,
    /// and 6- and 7-parts via their quadruple composite).
    fn cap4(&self) -> usize {
        self.fours + self.sixes + self.sevens
    }

    /// How many 5-sets can be placed directly.
    fn cap5(&self) -> usize {
        self.fives
    }

    /// Zero-sum triples needed, given how many 5-parts receive a direct
    /// 5-set: every 3-part, every remaining 5-part (as triple + pair) and
    /// every 7-part (as triple + quadruple or triple + two pairs).
    fn d3(&self, fives_direct: usize) -> usize {
        self.threes + (self.fives - fives_direct) + self.sevens
    }
}

/// Token-seeded item kinds, in per-layer placement order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum SeedKind {
    /// An involution quadruple chained through 4 tokens (4 triples).
    Quad,
    /// An involution triple chained through 3 tokens (3 triples).
    Tri,
    /// A non-involution pair chained through 2 tokens (2 triples).
    PairGroup,
    /// An involution triple plus 1 token (one 5-part).
    Five,
}

fn kind_cost(k: SeedKind) -> usize {
    match k {
        SeedKind::Quad => 4,
        SeedKind::Tri => 3,
        SeedKind::PairGroup => 2,
        SeedKind::Five => 1,
    }
}

/// One concrete choice of building-block counts, with the token-side layer
/// assignment already fixed.
#[derive(Debug, Clone, Default)]
struct Plan {
    /// Involution 5-sets used directly as 5-parts.
    f5: usize,
    /// Involution triples used directly as 3-parts.
    tri_z: usize,
    /// Involution quadruples used directly (4-parts or inside 6/7-parts).
    quad_z: usize,
    /// Groups chained through fresh inverse pairs of the zero block.
    tri_pair: usize,
    quad_pair: usize,
    /// Involution triples completed to a 5-part by one inverse pair.
    five_pair: usize,
    /// Groups chained through layer tokens.
    tri_tok: usize,
    quad_tok: usize,
    /// Involution triples completed to a 5-part by one token.
    five_tok: usize,
    /// Non-involution pairs chained through 2 tokens (2 triples each).
    r: usize,
    /// Six-sets formed from 3 non-involution pairs of the zero block
    /// (2 triples each).
    g: usize,
    /// Six-sets inside an order-3 layer (2 triples each, 3 tokens).
    u: usize,
    /// Cross-layer units per form in `ctx.cross` (2 triples, 3 tokens).
    v: [usize; 2],
    /// Six-set families emitted as two triples.
    x_w: usize,
    /// Six-set families emitted as three inverse pairs.
    y_w: usize,
    /// Token-seeded items per layer, in placement order.
    layer_items: Vec<Vec<SeedKind>>,
}

impl Plan {
    fn t_all(&self) -> usize {
        self.tri_z + self.tri_pair + self.tri_tok + self.five_pair + self.five_tok
    }

    fn q_all(&self) -> usize {
        self.quad_z + self.quad_pair + self.quad_tok
    }

    fn fives_direct(&self) -> usize {
        self.f5 + self.five_pair + self.five_tok
    }

    fn summary(&self) -> String {
        format!(
            "involution pack {}·3 + {}·4 + {}·5; direct {} triples / {} quadruples / {} 5-sets; \
             pair-seeded {}+{} groups, token-seeded {}+{} groups, 5-parts via pair {} / token {}; \
             pair groups {}, zero-block six-sets {}, layer six-sets {}, cross units {:?}; \
             six-set families: {} as triples, {} as pairs",
            self.t_all(),
            self.q_all(),
            self.f5,
            self.tri_z,
            self.quad_z,
            self.f5,
            self.tri_pair,
            self.quad_pair,
            self.tri_tok,
            self.quad_tok,
            self.five_pair,
            self.five_tok,
            self.r,
            self.g,
            self.u,
            self.v,
            self.x_w,
            self.y_w
        )
    }
}

// ──────────────────────────────────────────────────────────────────────────
// The solve: enumerate block combinations
// ──────────────────────────────────────────────────────────────────────────

/// Finds a block combination matching `demand` and assembles it.  Returns
/// the parts in `sizes_seq` order.
fn solve_and_assemble(
    ctx: &Ctx,
    demand: &Demand,
    sizes_seq: &[usize],
) -> Option<(Vec<Vec<Elem>>, Plan)> {
    let iota = ctx.iota;
    let cap5 = demand.cap5();
    let mut budget = SOLVE_TUPLE_CAP;
    let mut attempts = 0u32;

    for f5 in 0..=min(iota / 5, cap5) {
        let rem_f = iota - 5 * f5;
        for q_all in 0..=rem_f / 4 {
            let rem = rem_f - 4 * q_all;
            if rem % 3 != 0 {
                continue;
            }
            let t_all = rem / 3;
            if !ctx.pack_ok(t_all, q_all, f5) {
                continue;
            }
            for nf in 0..=min(t_all, cap5 - f5) {
                if let Some(hit) = solve_shape(
                    ctx,
                    demand,
                    sizes_seq,
                    f5,
                    t_all,
                    q_all,
                    nf,
                    &mut budget,
                    &mut attempts,
                ) {
                    return Some(hit);
                }
                if budget == 0 || attempts >= MAX_ASSEMBLY_ATTEMPTS {
                    return None;
                }
            }
        }
    }
    None
}

/// Enumerates the free choices for one involution-pack shape.
#[allow(clippy::too_many_arguments)]
fn solve_shape(
    ctx: &Ctx,
    demand: &Demand,
    sizes_seq: &[usize],
    f5: usize,
    t_all: usize,
    q_all: usize,
    nf: usize,
    budget: &mut u64,
    attempts: &mut u32,
) -> Option<(Vec<Vec<Elem>>, Plan)> {
    let cap4 = demand.cap4();
    let fives_direct = f5 + nf;
    let d3 = demand.d3(fives_direct);
    let t3 = t_all - nf;
    // Quadruples beyond the direct capacity must be seeded.
    let q_forced = q_all.saturating_sub(cap4);
    let s3_min = t3 + 4 * q_forced;
    if s3_min > d3 {
        return None;
    }
    if (d3 - s3_min) % 2 != 0 {
        return None;
    }
    let units0 = (d3 - s3_min) / 2;
    let n_layers = ctx.layers.len();
    let lam = ctx.lambda;
    let w_total = ctx.k * lam;

    for qse in 0..=(q_all - q_forced) {
        if 2 * qse > units0 {
            break;
        }
        let units1 = units0 - 2 * qse;
        let quad_seed = q_forced + qse;
        let quad_z = q_all - quad_seed;
        for tri_seed in 0..=min(t3, units1) {
            let units2 = units1 - tri_seed;
            let tri_z = t3 - tri_seed;
            let s_total = 3 * tri_seed + 4 * quad_seed + nf;
            for r in 0..=min(units2, ctx.r_max) {
                let units3 = units2 - r;
                for g in 0..=min(units3, (ctx.r_max - r) / 3) {
                    let units4 = units3 - g;
                    let pair_room = ctx.r_max - r - 3 * g;
                    let u_hi = if ctx.u_layer.is_some() {
                        min(units4, lam / 3)
                    } else {
                        0
                    };
                    for u in 0..=u_hi {
                        let units5 = units4 - u;
                        let v0_hi = if ctx.cross.is_empty() { 0 } else { units5 };
                        for v0 in 0..=v0_hi {
                            let v1_hi = if ctx.cross.len() > 1 { units5 - v0 } else { 0 };
                            for v1 in 0..=v1_hi {
                                *budget = budget.saturating_sub(1);
                                if *budget == 0 {
                                    return None;
                                }
                                let x_w = units5 - v0 - v1;

                                // Fixed token loads per layer.
                                let mut fixed = vec![0usize; n_layers];
                                if let Some(ul) = ctx.u_layer {
                                    fixed[ul] += 3 * u;
                                }
                                let vc = [v0, v1];
                                for (fi, &(from, to)) in ctx.cross.iter().enumerate() {
                                    fixed[from] += 2 * vc[fi];
                                    fixed[to] += vc[fi];
                                }
                                if fixed.iter().any(|&f| f > lam) {
                                    continue;
                                }
                                let caps: Vec<usize> =
                                    fixed.iter().map(|&f| lam - f).collect();
                                let token_room: usize = caps.iter().sum();
                                if 2 * r > token_room {
                                    continue;
                                }

                                // Window for the token-side seed load σ.
                                let sig_lo = s_total.saturating_sub(pair_room);
                                let mut sig_hi = min(s_total, token_room - 2 * r);
                                if ctx.borrow {
                                    // Consumed tokens remove six-sets from
                                    // family 0.
                                    if x_w + 2 * r > w_total {
                                        continue;
                                    }
                                    sig_hi = min(sig_hi, w_total - x_w - 2 * r);
                                } else if x_w > w_total {
                                    continue;
                                }
                                if sig_lo > sig_hi {
                                    continue;
                                }

                                for sigma in (sig_lo..=sig_hi).rev() {
                                    // σ = 3·tri_tok + 4·quad_tok + five_tok.
                                    for qt in (0..=min(quad_seed, sigma / 4)).rev() {
                                        let rem = sigma - 4 * qt;
                                        for tt in (0..=min(tri_seed, rem / 3)).rev() {
                                            let ft = rem - 3 * tt;
                                            if ft > nf {
                                                break;
                                            }
                                            let plan = finish_candidate(
                                                ctx, demand, f5, quad_z, tri_z, tri_seed,
                                                quad_seed, nf, r, g, u, vc, x_w, sigma, qt,
                                                tt, ft, &caps, w_total,
                                            );
                                            if let Some(plan) = plan {
                                                match assemble(ctx, demand, &plan, sizes_seq)
                                                {
                                                    Ok(parts) => return Some((parts, plan)),
                                                    Err(_) => {
                                                        *attempts += 1;
                                                        if *attempts
                                                            >= MAX_ASSEMBLY_ATTEMPTS
                                                        {
                                                            return None;
                                                        }
                                                    }
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Checks the remaining numeric constraints for one fully-specified
/// candidate and builds its plan (with layer assignment).
#[allow(clippy::too_many_arguments)]
fn finish_candidate(
    ctx: &Ctx,
    demand: &Demand,
    f5: usize,
    quad_z: usize,
    tri_z: usize,
    tri_seed: usize,
    quad_seed: usize,
    nf: usize,
    r: usize,
    g: usize,
    u: usize,
    vc: [usize; 2],
    x_w: usize,
    sigma: usize,
    quad_tok: usize,
    tri_tok: usize,
    five_tok: usize,
    caps: &[usize],
    w_total: usize,
) -> Option<Plan> {
    let tri_pair = tri_seed - tri_tok;
    let quad_pair = quad_seed - quad_tok;
    let five_pair = nf - five_tok;
    let s_total = 3 * tri_seed + 4 * quad_seed + nf;

    // Distribute the token-seeded items over the layers.
    let mut items: Vec<SeedKind> = Vec::new();
    items.extend(core::iter::repeat(SeedKind::Quad).take(quad_tok));
    items.extend(core::iter::repeat(SeedKind::Tri).take(tri_tok));
    items.extend(core::iter::repeat(SeedKind::PairGroup).take(r));
    items.extend(core::iter::repeat(SeedKind::Five).take(five_tok));
    let layer_items = assign_layers(&items, caps)?;

    // Inverse-pair and six-set bookkeeping.
    let consumed_borrow = if ctx.borrow { sigma + 2 * r } else { 0 };
    let y_w = w_total - x_w - consumed_borrow;
    let r_z = ctx.r_max - (r + 3 * g) - (s_total - sigma);
    let leftover_tokens = if ctx.borrow {
        0
    } else {
        caps.iter().sum::<usize>() - sigma - 2 * r
    };

    // The inverse-pair supply must match the demand exactly.
    let fives_direct = f5 + nf;
    let q_to_4 = min(quad_z, demand.fours);
    let q_to_7 = min(quad_z - q_to_4, demand.sevens);
    let q_to_6 = quad_z - q_to_4 - q_to_7;
    if q_to_6 > demand.sixes {
        return None;
    }
    let need2 = demand.twos
        + 2 * (demand.fours - q_to_4)
        + (demand.fives - fives_direct)
        + 3 * (demand.sixes - q_to_6)
        + q_to_6
        + 2 * (demand.sevens - q_to_7);
    let have2 = 3 * y_w + leftover_tokens + 2 * consumed_borrow + r_z;
    if need2 != have2 {
        return None;
    }

    Some(Plan {
        f5,
        tri_z,
        quad_z,
        tri_pair,
        quad_pair,
        five_pair,
        tri_tok,
        quad_tok,
        five_tok,
        r,
        g,
        u,
        v: vc,
        x_w,
        y_w,
        layer_items,
    })
}

/// Splits weighted items between the layers (≤ 2) under per-layer
/// capacities; returns per-layer item lists sorted by placement order.
fn assign_layers(items: &[SeedKind], caps: &[usize]) -> Option<Vec<Vec<SeedKind>>> {
    let total: usize = items.iter().map(|&k| kind_cost(k)).sum();
    match caps.len() {
        1 => {
            if total > caps[0] {
                return None;
            }
            let mut bin = items.to_vec();
            bin.sort();
            Some(vec![bin])
        }
        2 => {
            if total > caps[0] + caps[1] {
                return None;
            }
            let lo = total.saturating_sub(caps[1]);
            // Subset-sum with reconstruction: reach[s] = (item, prev sum).
            let mut reach: Vec<Option<(usize, usize)>> = vec![None; caps[0] + 1];
            let mut seen = vec![false; caps[0] + 1];
            seen[0] = true;
            for (idx, &it) in items.iter().enumerate() {
                let w = kind_cost(it);
                if w > caps[0] {
                    continue;
                }
                for s in (0..=caps[0] - w).rev() {
                    if seen[s] && !seen[s + w] {
                        seen[s + w] = true;
                        reach[s + w] = Some((idx, s));
                    }
                }
            }
            let mut target = None;
            for s in (lo..=caps[0]).rev() {
                if seen[s] {
                    target = Some(s);
                    break;
                }
            }
            let mut s = target?;
            let mut in_first = vec![false; items.len()];
            while s > 0 {
                let (idx, prev) = reach[s].expect("reconstruction is consistent");
                in_first[idx] = true;
                s = prev;
            }
            let mut bin0 = Vec::new();
            let mut bin1 = Vec::new();
            for (idx, &it) in items.iter().enumerate() {
                if in_first[idx] {
                    bin0.push(it);
                } else {
                    bin1.push(it);
                }
            }
            bin0.sort();
            bin1.sort();
            Some(vec![bin0, bin1])
        }
        _ => None,
    }
}

// ──────────────────────────────────────────────────────────────────────────
// Assembly: realize a plan as concrete parts
// ──────────────────────────────────────────────────────────────────────────

/// The canonical representative of an inverse pair `{x, −x}` in `L`.
fn rep_of(l: &GroupSpec, x: &Elem) -> Elem {
    let n = l.negate(x);
    if n < *x {
        n
    } else {
        x.clone()
    }
}

/// Chains a zero-sum involution group through fresh inverse pairs of the
/// zero block, producing one triple per seed.
fn chain_through_pairs(
    ctx: &Ctx,
    seeds: &[Elem],
    free: &mut BTreeSet<Elem>,
) -> Option<Vec<Vec<Elem>>> {
    let l = &ctx.split.l;
    let mut offs = vec![l.zero()];
    for s in &seeds[..seeds.len() - 1] {
        let last = offs.last().cloned().expect("non-empty");
        offs.push(l.add(&last, s));
    }
    let candidates: Vec<Elem> = free.iter().cloned().collect();
    for z0 in &candidates {
        for z in [z0.clone(), l.negate(z0)] {
            let reps: Vec<Elem> = offs.iter().map(|p| rep_of(l, &l.add(p, &z))).collect();
            let distinct = reps
                .iter()
                .enumerate()
                .all(|(i, a)| reps[..i].iter().all(|b| b != a));
            if !distinct || !reps.iter().all(|rp| free.contains(rp)) {
                continue;
            }
            for rp in &reps {
                free.remove(rp);
            }
            let mut out = Vec::with_capacity(seeds.len());
            for (m, seed) in seeds.iter().enumerate() {
                let a = ctx.split.embed_l(seed);
                let b = ctx.split.embed_l(&l.add(&offs[m], &z));
                let c = ctx.spec.negate(&ctx.spec.add(&a, &b));
                out.push(vec![a, b, c]);
            }
            return Some(out);
        }
    }
    None
}

/// Chains a zero-sum involution group through the tokens of one layer.
fn chain_through_tokens(
    ctx: &Ctx,
    seeds: &[Elem],
    layer_rep: &Elem,
    free: &mut BTreeSet<Elem>,
) -> Option<Vec<Vec<Elem>>> {
    let l = &ctx.split.l;
    let mut offs = vec![l.zero()];
    for s in &seeds[..seeds.len() - 1] {
        let last = offs.last().cloned().expect("non-empty");
        offs.push(l.add(&last, s));
    }
    let candidates: Vec<Elem> = free.iter().cloned().collect();
    for x in &candidates {
        let toks: Vec<Elem> = offs.iter().map(|p| l.add(p, x)).collect();
        if !toks.iter().all(|t| free.contains(t)) {
            continue;
        }
        for t in &toks {
            free.remove(t);
        }
        let mut out = Vec::with_capacity(seeds.len());
        for (m, seed) in seeds.iter().enumerate() {
            let a = ctx.split.embed_l(seed);
            let b = ctx.split.combine(&toks[m], layer_rep);
            let c = ctx.spec.negate(&ctx.spec.add(&a, &b));
            out.push(vec![a, b, c]);
        }
        return Some(out);
    }
    None
}

/// Chains a non-involution inverse pair `{z, −z}` through 2 tokens of one
/// layer, producing two triples.
fn pair_group_unit(
    ctx: &Ctx,
    z: &Elem,
    layer_rep: &Elem,
    free: &mut BTreeSet<Elem>,
) -> Option<Vec<Vec<Elem>>> {
    let l = &ctx.split.l;
    let candidates: Vec<Elem> = free.iter().cloned().collect();
    for x in &candidates {
        let zx = l.add(z, x);
        if zx == *x || !free.contains(&zx) {
            continue;
        }
        free.remove(x);
        free.remove(&zx);
        let ez = ctx.split.embed_l(z);
        let enz = ctx.split.embed_l(&l.negate(z));
        let t1 = ctx.split.combine(x, layer_rep);
        let t2 = ctx.split.combine(&zx, layer_rep);
        let p1 = vec![
            ez,
            t1.clone(),
            ctx.spec.negate(&ctx.spec.add(&ctx.split.embed_l(z), &t1)),
        ];
        let p2 = vec![enz, t2.clone(), ctx.spec.negate(&ctx.spec.sub(&t2, &ctx.split.embed_l(z)))];
        return Some(vec![p1, p2]);
    }
    None
}

/// A six-set inside an order-3 layer: `{x, y, −x−y} × {a}` plus its
/// negation, consuming 3 tokens.
fn layer_six_unit(
    ctx: &Ctx,
    layer_rep: &Elem,
    free: &mut BTreeSet<Elem>,
) -> Option<Vec<Vec<Elem>>> {
    let l = &ctx.split.l;
    let candidates: Vec<Elem> = free.iter().cloned().collect();
    for x in &candidates {
        for y in &candidates {
            if y == x {
                continue;
            }
            let s = l.negate(&l.add(x, y));
            if s == *x || s == *y {
                continue;
            }
            if !free.contains(y) || !free.contains(&s) || !free.contains(x) {
                continue;
            }
            free.remove(x);
            free.remove(y);
            free.remove(&s);
            let pos: Vec<Elem> = [x, y, &s]
                .iter()
                .map(|t| ctx.split.combine(t, layer_rep))
                .collect();
            let neg: Vec<Elem> = pos.iter().map(|e| ctx.spec.negate(e)).collect();
            return Some(vec![pos, neg]);
        }
    }
    None
}

/// A cross-layer unit: two tokens on `from`, one on `to`, valid when
/// `2·rep(from) = ±rep(to)`; yields two triples.
fn cross_unit(
    ctx: &Ctx,
    from: usize,
    to: usize,
    free: &mut [BTreeSet<Elem>],
) -> Option<Vec<Vec<Elem>>> {
    let l = &ctx.split.l;
    let h = &ctx.split.h;
    let sf = &ctx.layers[from];
    let st = &ctx.layers[to];
    let third_h = h.negate(&h.scale(2, sf));
    let direct = third_h == *st;
    debug_assert!(direct || third_h == h.negate(st));
    let candidates: Vec<Elem> = free[from].iter().cloned().collect();
    for x in &candidates {
        for y in &candidates {
            if y <= x {
                continue;
            }
            if !free[from].contains(x) || !free[from].contains(y) {
                continue;
            }
            let sum = l.add(x, y);
            let tok_to = if direct { l.negate(&sum) } else { sum.clone() };
            if !free[to].contains(&tok_to) {
                continue;
            }
            free[from].remove(x);
            free[from].remove(y);
            free[to].remove(&tok_to);
            let p1 = vec![
                ctx.split.combine(x, sf),
                ctx.split.combine(y, sf),
                ctx.split.combine(&l.negate(&sum), &third_h),
            ];
            let p2: Vec<Elem> = p1.iter().map(|e| ctx.spec.negate(e)).collect();
            return Some(vec![p1, p2]);
        }
    }
    None
}

/// A six-set from three non-involution inverse pairs of the zero block:
/// `{z, w, −z−w}` plus its negation.
fn pair_block_six(ctx: &Ctx, free: &mut BTreeSet<Elem>) -> Option<Vec<Vec<Elem>>> {
    let l = &ctx.split.l;
    let candidates: Vec<Elem> = free.iter().cloned().collect();
    for z0 in &candidates {
        for w0 in &candidates {
            if w0 == z0 {
                continue;
            }
            for z in [z0.clone(), l.negate(z0)] {
                for w in [w0.clone(), l.negate(w0)] {
                    let s = l.add(&z, &w);
                    if s == l.zero() || l.add(&s, &s) == l.zero() {
                        continue;
                    }
                    let rs = rep_of(l, &s);
                    if rs == *z0 || rs == *w0 || !free.contains(&rs) {
                        continue;
                    }
                    if !free.contains(z0) || !free.contains(w0) {
                        continue;
                    }
                    free.remove(z0);
                    free.remove(w0);
                    free.remove(&rs);
                    let t1: Vec<Elem> = [&z, &w, &l.negate(&s)]
                        .iter()
                        .map(|e| ctx.split.embed_l(e))
                        .collect();
                    let t2: Vec<Elem> = t1.iter().map(|e| ctx.spec.negate(e)).collect();
                    return Some(vec![t1, t2]);
                }
            }
        }
    }
    None
}

/// The six elements of six-set family `fam` at position `x ∈ L`.
fn w_six_elements(ctx: &Ctx, x: &Elem, fam: usize) -> [Elem; 6] {
    let l = &ctx.split.l;
    let h = &ctx.split.h;
    let (c, d) = &ctx.sixes[fam];
    let e = h.negate(&h.add(c, d));
    let px = ctx.cm.phi(x);
    let vx = ctx.cm.varphi(x);
    [
        ctx.split.combine(x, c),
        ctx.split.combine(&px, d),
        ctx.split.combine(&vx, &e),
        ctx.split.combine(&l.negate(x), &h.negate(c)),
        ctx.split.combine(&l.negate(&px), &h.negate(d)),
        ctx.split.combine(&l.negate(&vx), &h.negate(&e)),
    ]
}

/// Assembles a plan into concrete parts ordered like `sizes_seq`.
fn assemble(
    ctx: &Ctx,
    demand: &Demand,
    plan: &Plan,
    sizes_seq: &[usize],
) -> Result<Vec<Vec<Elem>>, String> {
    let l = &ctx.split.l;
    let spec = &ctx.spec;

    // 1. Pack the involutions and split the groups into roles.
    let pack = ctx
        .pack(plan.t_all(), plan.q_all(), plan.f5)
        .ok_or("involution packing disappeared")?;
    let mut tri_groups: Vec<Vec<Elem>> = Vec::new();
    let mut quad_groups: Vec<Vec<Elem>> = Vec::new();
    let mut pool5: Vec<Vec<Elem>> = Vec::new();
    for part in pack {
        match part.len() {
            3 => tri_groups.push(part),
            4 => quad_groups.push(part),
            5 => pool5.push(part.iter().map(|e| ctx.split.embed_l(e)).collect()),
            _ => return Err(String::from("unexpected packed group size")),
        }
    }
    // Triple roles: [token chains][pair chains][5-part via token][5-part
    // via pair][direct]; quadruple roles: [token][pair][direct].
    let tri_tok_groups: Vec<Vec<Elem>> = tri_groups.drain(..plan.tri_tok).collect();
    let tri_pair_groups: Vec<Vec<Elem>> = tri_groups.drain(..plan.tri_pair).collect();
    let five_tok_groups: Vec<Vec<Elem>> = tri_groups.drain(..plan.five_tok).collect();
    let five_pair_groups: Vec<Vec<Elem>> = tri_groups.drain(..plan.five_pair).collect();
    debug_assert_eq!(tri_groups.len(), plan.tri_z);
    let quad_tok_groups: Vec<Vec<Elem>> = quad_groups.drain(..plan.quad_tok).collect();
    let quad_pair_groups: Vec<Vec<Elem>> = quad_groups.drain(..plan.quad_pair).collect();
    debug_assert_eq!(quad_groups.len(), plan.quad_z);

    let mut pool2: Vec<Vec<Elem>> = Vec::new();
    let mut pool3: Vec<Vec<Elem>> = Vec::new();
    let mut pool4: Vec<Vec<Elem>> = Vec::new();
    for grp in &tri_groups {
        pool3.push(grp.iter().map(|e| ctx.split.embed_l(e)).collect());
    }
    for grp in &quad_groups {
        pool4.push(grp.iter().map(|e| ctx.split.embed_l(e)).collect());
    }

    // 2. Free non-involution inverse pairs of the zero block.
    let mut free_reps: BTreeSet<Elem> = l
        .nonzero_elements()
        .filter(|x| l.add(x, x) != l.zero())
        .map(|x| rep_of(l, &x))
        .collect();

    // 3. Pair-seeded chains (quadruples first: they need four fresh pairs).
    for grp in &quad_pair_groups {
        pool3.extend(
            chain_through_pairs(ctx, grp, &mut free_reps)
                .ok_or("no pair chain fits a quadruple")?,
        );
    }
    for grp in &tri_pair_groups {
        pool3.extend(
            chain_through_pairs(ctx, grp, &mut free_reps)
                .ok_or("no pair chain fits a triple")?,
        );
    }
    // 5-parts completed by a fresh pair.
    for grp in &five_pair_groups {
        let z = free_reps
            .iter()
            .next()
            .cloned()
            .ok_or("no free pair for a 5-part")?;
        free_reps.remove(&z);
        let mut part: Vec<Elem> = grp.iter().map(|e| ctx.split.embed_l(e)).collect();
        part.push(ctx.split.embed_l(&z));
        part.push(ctx.split.embed_l(&l.negate(&z)));
        pool5.push(part);
    }
    // Six-sets inside the zero block.
    for _ in 0..plan.g {
        pool3.extend(pair_block_six(ctx, &mut free_reps).ok_or("no zero-block six-set")?);
    }
    // Reserve the seeds for the token-chained pair groups.
    let mut r_queue: Vec<Elem> = Vec::with_capacity(plan.r);
    for _ in 0..plan.r {
        let z = free_reps
            .iter()
            .next()
            .cloned()
            .ok_or("no free pair for a pair group")?;
        free_reps.remove(&z);
        r_queue.push(z);
    }

    // 4. Token phase.
    let mut free_tok: Vec<BTreeSet<Elem>> = ctx
        .layers
        .iter()
        .map(|_| l.elements().collect::<BTreeSet<Elem>>())
        .collect();
    for _ in 0..plan.u {
        let ul = ctx.u_layer.ok_or("layer six-set without an order-3 layer")?;
        let rep = ctx.layers[ul].clone();
        pool3.extend(
            layer_six_unit(ctx, &rep, &mut free_tok[ul]).ok_or("no layer six-set fits")?,
        );
    }
    for (fi, &(from, to)) in ctx.cross.iter().enumerate() {
        for _ in 0..plan.v[fi] {
            pool3.extend(cross_unit(ctx, from, to, &mut free_tok).ok_or("no cross unit fits")?);
        }
    }
    let mut tri_iter = tri_tok_groups.iter();
    let mut quad_iter = quad_tok_groups.iter();
    let mut five_iter = five_tok_groups.iter();
    let mut r_iter = r_queue.iter();
    for (li, items) in plan.layer_items.iter().enumerate() {
        let rep = ctx.layers[li].clone();
        for kind in items {
            match kind {
                SeedKind::Quad => {
                    let grp = quad_iter.next().ok_or("quadruple queue ran dry")?;
                    pool3.extend(
                        chain_through_tokens(ctx, grp, &rep, &mut free_tok[li])
                            .ok_or("no token chain fits a quadruple")?,
                    );
                }
                SeedKind::Tri => {
                    let grp = tri_iter.next().ok_or("triple queue ran dry")?;
                    pool3.extend(
                        chain_through_tokens(ctx, grp, &rep, &mut free_tok[li])
                            .ok_or("no token chain fits a triple")?,
                    );
                }
                SeedKind::PairGroup => {
                    let z = r_iter.next().ok_or("pair-group queue ran dry")?;
                    pool3.extend(
                        pair_group_unit(ctx, z, &rep, &mut free_tok[li])
                            .ok_or("no pair group fits")?,
                    );
                }
                SeedKind::Five => {
                    let grp = five_iter.next().ok_or("5-part queue ran dry")?;
                    let w = free_tok[li]
                        .iter()
                        .next()
                        .cloned()
                        .ok_or("no free token for a 5-part")?;
                    free_tok[li].remove(&w);
                    let mut part: Vec<Elem> =
                        grp.iter().map(|e| ctx.split.embed_l(e)).collect();
                    let t = ctx.split.combine(&w, &rep);
                    part.push(spec.negate(&t));
                    part.push(t);
                    pool5.push(part);
                }
            }
        }
    }

    // 5. Leftover tokens and six-set families.
    let mut fulls: Vec<(usize, Elem)> = Vec::new();
    if ctx.borrow {
        let consumed: Vec<Elem> = l
            .elements()
            .filter(|t| !free_tok[0].contains(t))
            .collect();
        // Each consumed token leaves two inverse pairs of its six-set.
        for t in &consumed {
            let six = w_six_elements(ctx, t, 0);
            pool2.push(vec![six[1].clone(), six[4].clone()]);
            pool2.push(vec![six[2].clone(), six[5].clone()]);
        }
        for x in free_tok[0].iter() {
            fulls.push((0, x.clone()));
        }
        for fam in 1..ctx.k {
            for x in l.elements() {
                fulls.push((fam, x));
            }
        }
    } else {
        for (li, rep) in ctx.layers.iter().enumerate() {
            for t in free_tok[li].iter() {
                let e = ctx.split.combine(t, rep);
                pool2.push(vec![spec.negate(&e), e]);
            }
        }
        for fam in 0..ctx.k {
            for x in l.elements() {
                fulls.push((fam, x));
            }
        }
    }
    if fulls.len() != plan.x_w + plan.y_w {
        return Err(format!(
            "six-set family count {} does not match plan {}+{}",
            fulls.len(),
            plan.x_w,
            plan.y_w
        ));
    }
    for (i, (fam, x)) in fulls.iter().enumerate() {
        let six = w_six_elements(ctx, x, *fam);
        if i < plan.x_w {
            pool3.push(six[0..3].to_vec());
            pool3.push(six[3..6].to_vec());
        } else {
            pool2.push(vec![six[0].clone(), six[3].clone()]);
            pool2.push(vec![six[1].clone(), six[4].clone()]);
            pool2.push(vec![six[2].clone(), six[5].clone()]);
        }
    }

    // 6. Remaining zero-block pairs stand alone.
    for z in free_reps.iter() {
        pool2.push(vec![
            ctx.split.embed_l(z),
            ctx.split.embed_l(&l.negate(z)),
        ]);
    }

    // 7. Compose the parts in request order.
    let fives_direct = plan.fives_direct();
    let q_to_4 = min(plan.quad_z, demand.fours);
    let q_to_7 = min(plan.quad_z - q_to_4, demand.sevens);
    let q_to_6 = plan.quad_z - q_to_4 - q_to_7;
    let mut four_quads = q_to_4;
    let mut six_quads = q_to_6;
    let mut seven_quads = q_to_7;
    let mut fives_left = fives_direct;
    let (mut i2, mut i3, mut i4, mut i5) = (0usize, 0usize, 0usize, 0usize);
    let take2 = |i2: &mut usize| -> Result<Vec<Elem>, String> {
        let p = pool2.get(*i2).cloned().ok_or("pair pool ran dry")?;
        *i2 += 1;
        Ok(p)
    };
    let take3 = |i3: &mut usize| -> Result<Vec<Elem>, String> {
        let p = pool3.get(*i3).cloned().ok_or("triple pool ran dry")?;
        *i3 += 1;
        Ok(p)
    };
    let mut out = Vec::with_capacity(sizes_seq.len());
    for &s in sizes_seq {
        let part = match s {
            2 => take2(&mut i2)?,
            3 => take3(&mut i3)?,
            4 => {
                if four_quads > 0 {
                    four_quads -= 1;
                    let p = pool4.get(i4).cloned().ok_or("quadruple pool ran dry")?;
                    i4 += 1;
                    p
                } else {
                    let mut p = take2(&mut i2)?;
                    p.extend(take2(&mut i2)?);
                    p
                }
            }
            5 => {
                if fives_left > 0 {
                    fives_left -= 1;
                    let p = pool5.get(i5).cloned().ok_or("5-set pool ran dry")?;
                    i5 += 1;
                    p
                } else {
                    let mut p = take3(&mut i3)?;
                    p.extend(take2(&mut i2)?);
                    p
                }
            }
            6 => {
                if six_quads > 0 {
                    six_quads -= 1;
                    let mut p = pool4.get(i4).cloned().ok_or("quadruple pool ran dry")?;
                    i4 += 1;
                    p.extend(take2(&mut i2)?);
                    p
                } else {
                    let mut p = take2(&mut i2)?;
                    p.extend(take2(&mut i2)?);
                    p.extend(take2(&mut i2)?);
                    p
                }
            }
            7 => {
                let mut p = take3(&mut i3)?;
                if seven_quads > 0 {
                    seven_quads -= 1;
                    p.extend(pool4.get(i4).cloned().ok_or("quadruple pool ran dry")?);
                    i4 += 1;
                } else {
                    p.extend(take2(&mut i2)?);
                    p.extend(take2(&mut i2)?);
                }
                p
            }
            _ => return Err(format!("unsupported normalized size {s}")),
        };
        out.push(part);
    }
    if i2 != pool2.len() || i3 != pool3.len() || i4 != pool4.len() || i5 != pool5.len() {
        return Err(format!(
            "pools not exhausted: pairs {}/{}, triples {}/{}, quadruples {}/{}, 5-sets {}/{}",
            i2,
            pool2.len(),
            i3,
            pool3.len(),
            i4,
            pool4.len(),
            i5,
            pool5.len()
        ));
    }
    Ok(out)
}

// ──────────────────────────────────────────────────────────────────────────
// Mapping route: thread the whole zero block through one token layer
// ──────────────────────────────────────────────────────────────────────────

/// An alternative to the block solve that sidesteps involution packing
/// entirely: the triples `{(a, 0), (φ(a), b), (ϕ(a), −b)}` for `a ∈ L ∖ {0}`
/// consume the zero block together with one full token layer, leaving the
/// 2-part `{(0, b), (0, −b)}`.  Everything else is built from six-set
/// families (split into two triples or three pairs) and, for remaining
/// layers, plain token pairs.  Demands with a large triple count that the
/// chained units cannot reach are often expressible this way.
fn mapping_route(ctx: &Ctx, demand: &Demand, sizes_seq: &[usize]) -> Option<Vec<Vec<Elem>>> {
    if ctx.borrow || ctx.layers.is_empty() {
        return None;
    }
    let l = &ctx.split.l;
    let h = &ctx.split.h;
    let lam = ctx.lambda;
    let base_t = lam - 1;
    let fam_total = ctx.k * lam;
    let extra_pairs = (ctx.layers.len() - 1) * lam + 1;

    // Choose how many 6-parts are made of two triples (the rest use three
    // pairs); everything else is forced: 4 = two pairs, 5 = triple + pair,
    // 7 = triple + two pairs.
    let mut split = None;
    for s6t in 0..=demand.sixes {
        let t_need = demand.threes + demand.fives + 2 * s6t + demand.sevens;
        if t_need < base_t || (t_need - base_t) % 2 != 0 {
            continue;
        }
        let x = (t_need - base_t) / 2;
        if x > fam_total {
            continue;
        }
        let p_need = demand.twos
            + 2 * demand.fours
            + demand.fives
            + 3 * (demand.sixes - s6t)
            + 2 * demand.sevens;
        debug_assert_eq!(p_need, extra_pairs + 3 * (fam_total - x));
        split = Some((s6t, x));
        break;
    }
    let (mut six_as_triples, x) = split?;

    let b = &ctx.layers[0];
    let nb = h.negate(b);
    let mut pool3: Vec<Vec<Elem>> = Vec::with_capacity(base_t + 2 * x);
    let mut pool2: Vec<Vec<Elem>> = Vec::new();
    for a in l.nonzero_elements() {
        pool3.push(vec![
            ctx.split.embed_l(&a),
            ctx.split.combine(&ctx.cm.phi(&a), b),
            ctx.split.combine(&ctx.cm.varphi(&a), &nb),
        ]);
    }
    pool2.push(vec![
        ctx.split.combine(&l.zero(), b),
        ctx.split.combine(&l.zero(), &nb),
    ]);
    for rep in &ctx.layers[1..] {
        for t in l.elements() {
            let e = ctx.split.combine(&t, rep);
            pool2.push(vec![ctx.spec.negate(&e), e]);
        }
    }
    let mut placed = 0usize;
    for fam in 0..ctx.k {
        for pos in l.elements() {
            let six = w_six_elements(ctx, &pos, fam);
            if placed < x {
                pool3.push(six[0..3].to_vec());
                pool3.push(six[3..6].to_vec());
            } else {
                pool2.push(vec![six[0].clone(), six[3].clone()]);
                pool2.push(vec![six[1].clone(), six[4].clone()]);
                pool2.push(vec![six[2].clone(), six[5].clone()]);
            }
            placed += 1;
        }
    }

    let (mut i2, mut i3) = (0usize, 0usize);
    let mut out = Vec::with_capacity(sizes_seq.len());
    for &s in sizes_seq {
        let mut part = Vec::with_capacity(s);
        let (triples, pairs) = match s {
            2 => (0, 1),
            3 => (1, 0),
            4 => (0, 2),
            5 => (1, 1),
            6 if six_as_triples > 0 => {
                six_as_triples -= 1;
                (2, 0)
            }
            6 => (0, 3),
            7 => (1, 2),
            _ => return None,
        };
        for _ in 0..triples {
            part.extend(pool3.get(i3)?.iter().cloned());
            i3 += 1;
        }
        for _ in 0..pairs {
            part.extend(pool2.get(i2)?.iter().cloned());
            i2 += 1;
        }
        out.push(part);
    }
    if i2 != pool2.len() || i3 != pool3.len() {
        return None;
    }
    Some(out)
}

// ──────────────────────────────────────────────────────────────────────────
// Routes
// ──────────────────────────────────────────────────────────────────────────

/// Runs the solve for already-normalized sizes plus `twos` extra 2-parts
/// (appended at the end).
fn run_product(ctx: &Ctx, normalized: &[usize], twos: usize) -> Result<Realization, RealizeError> {
    let demand = Demand::from_sizes(normalized, twos).ok_or_else(|| {
        internal(format!(
            "normalized sizes {normalized:?} escape the 2–7 alphabet"
        ))
    })?;
    let mut sizes_seq: Vec<usize> = normalized.to_vec();
    sizes_seq.extend(core::iter::repeat(2).take(twos));
    match solve_and_assemble(ctx, &demand, &sizes_seq) {
        Some((parts, plan)) => {
            let mut trace = ConstructionTrace::new("product construction");
            trace.step(format!(
                "split {} into 2-part {} and odd part {}",
                ctx.spec, ctx.split.l, ctx.split.h
            ));
            trace.step(format!(
                "odd part: {} six-sets, {} leftover pairs{}",
                ctx.k,
                if ctx.borrow { 0 } else { ctx.layers.len() },
                if ctx.borrow {
                    " (token layer borrowed from family 0)"
                } else {
                    ""
                }
            ));
            trace.step(plan.summary());
            Ok(Realization {
                partition: Partition::new(parts),
                trace,
            })
        }
        None => match mapping_route(ctx, &demand, &sizes_seq) {
            Some(parts) => {
                let mut trace = ConstructionTrace::new("product construction");
                trace.step(format!(
                    "split {} into 2-part {} and odd part {}",
                    ctx.spec, ctx.split.l, ctx.split.h
                ));
                trace.step(format!(
                    "threaded the zero block through token layer ±{} with the \
                     complete mapping ({} triples)",
                    ctx.layers[0],
                    ctx.lambda - 1
                ));
                Ok(Realization {
                    partition: Partition::new(parts),
                    trace,
                })
            }
            None => Err(RealizeError::CapabilityExceeded {
                reason: format!(
                    "the product solve found no block combination for {} with these sizes",
                    ctx.spec
                ),
            }),
        },
    }
}

/// The product-construction route for mixed groups, used by the engine
/// dispatcher.  `min` is the smallest requested size.
pub(super) fn product_route(
    spec: &GroupSpec,
    sizes: &[usize],
    min: usize,
) -> Result<Realization, RealizeError> {
    let ctx = Ctx::build(spec)?;
    let h_mod = ctx.split.h.order() % 6;
    if min >= 4 && h_mod == 5 {
        with_normalized(sizes, SizeFloor::AtLeast4, |norm| {
            run_product(&ctx, &norm.normalized, 0)
        })
    } else if min >= 3 {
        with_normalized(sizes, SizeFloor::AtLeast3, |norm| {
            run_product(&ctx, &norm.normalized, 0)
        })
    } else {
        // Keep the 2-parts aside and normalize the rest.
        let twos = sizes.iter().filter(|&&s| s == 2).count();
        let rest: Vec<usize> = sizes.iter().copied().filter(|&s| s != 2).collect();
        if rest.is_empty() {
            return run_product(&ctx, &[], twos);
        }
        let norm = normalize_sizes(&rest, SizeFloor::AtLeast3).map_err(|e| {
            RealizeError::PreconditionViolated {
                reason: e.to_string(),
            }
        })?;
        let mut real = run_product(&ctx, &norm.normalized, twos)?;
        let parts = real.partition.parts;
        let (refined, two_parts) = parts.split_at(norm.normalized.len());
        let merged = norm.recombine(refined);
        let mut mi = merged.into_iter();
        let mut ti = two_parts.iter().cloned();
        let mut out = Vec::with_capacity(sizes.len());
        for &s in sizes {
            let part = if s == 2 {
                ti.next().ok_or_else(|| internal("2-part bookkeeping mismatch".into()))?
            } else {
                mi.next().ok_or_else(|| internal("recombination mismatch".into()))?
            };
            out.push(part);
        }
        real.partition = Partition::new(out);
        real.trace.step(format!(
            "kept {twos} size-2 parts aside and recombined the remaining {} parts",
            rest.len()
        ));
        Ok(real)
    }
}

// ──────────────────────────────────────────────────────────────────────────
// Public constructive entry points
// ──────────────────────────────────────────────────────────────────────────

fn require_mixed(spec: &GroupSpec, h_mod: u64) -> Result<(), RealizeError> {
    let split = spec.sylow2_split();
    if split.l.order() < 4 || split.h.order() < 3 {
        return Err(RealizeError::PreconditionViolated {
            reason: format!(
                "{spec} must have a 2-part of order at least 4 and a non-trivial odd part"
            ),
        });
    }
    if split.h.order() % 6 != h_mod {
        return Err(RealizeError::PreconditionViolated {
            reason: format!(
                "odd part of {spec} has order {} ≢ {h_mod} (mod 6)",
                split.h.order()
            ),
        });
    }
    Ok(())
}

fn counts_to_sizes(counts: &[(usize, usize)]) -> Vec<usize> {
    let mut sizes = Vec::new();
    for &(size, count) in counts {
        sizes.extend(core::iter::repeat(size).take(count));
    }
    sizes
}

/// Parts of sizes 3, 4 and 5 (`alpha`, `beta`, `gamma` many) for a mixed
/// group whose odd part has order ≡ 1 (mod 6).
pub fn realize_1mod6(
    spec: &GroupSpec,
    alpha: usize,
    beta: usize,
    gamma: usize,
) -> Result<Realization, RealizeError> {
    require_mixed(spec, 1)?;
    super::realize(spec, &counts_to_sizes(&[(3, alpha), (4, beta), (5, gamma)]))
}

/// Parts of sizes 3, 4 and 5 (`alpha`, `beta`, `gamma` many) for a mixed
/// group whose odd part has order ≡ 3 (mod 6).
pub fn realize_3mod6(
    spec: &GroupSpec,
    alpha: usize,
    beta: usize,
    gamma: usize,
) -> Result<Realization, RealizeError> {
    require_mixed(spec, 3)?;
    super::realize(spec, &counts_to_sizes(&[(3, alpha), (4, beta), (5, gamma)]))
}

/// Parts of sizes 4–7 (`beta`, `gamma`, `delta`, `epsilon` many) for a
/// mixed group whose odd part has order ≡ 5 (mod 6).
pub fn realize_5mod6(
    spec: &GroupSpec,
    beta: usize,
    gamma: usize,
    delta: usize,
    epsilon: usize,
) -> Result<Realization, RealizeError> {
    require_mixed(spec, 5)?;
    super::realize(
        spec,
        &counts_to_sizes(&[(4, beta), (5, gamma), (6, delta), (7, epsilon)]),
    )
}

/// Parts of sizes 2–5 (`alpha` threes, `beta` fours, `gamma` fives and
/// `omega` twos) for a mixed group with at least three involutions whose
/// odd part has order ≡ 1 (mod 6).
pub fn realize_quadruple(
    spec: &GroupSpec,
    alpha: usize,
    beta: usize,
    gamma: usize,
    omega: usize,
) -> Result<Realization, RealizeError> {
    require_mixed(spec, 1)?;
    let iota = spec.involution_count();
    if iota < 3 {
        return Err(RealizeError::PreconditionViolated {
            reason: format!("{spec} has {iota} involutions; at least 3 are required"),
        });
    }
    let pairs_available = (spec.order() - 1 - iota) / 2;
    if omega as u64 > pairs_available {
        return Err(RealizeError::Unrealizable {
            reason: format!(
                "{omega} parts of size 2 each need a distinct non-involution inverse pair, \
                 but {} has only {pairs_available}",
                spec
            ),
        });
    }
    super::realize(
        spec,
        &counts_to_sizes(&[(3, alpha), (4, beta), (5, gamma), (2, omega)]),
    )
}

// ──────────────────────────────────────────────────────────────────────────
// Tests
// ──────────────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::realize;
    use crate::partition::verify_partition;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn check(spec: &GroupSpec, sizes: &[usize]) {
        let real = realize(spec, sizes)
            .unwrap_or_else(|e| panic!("realize {spec} {sizes:?} failed: {e}"));
        let report = verify_partition(spec, &real.partition, Some(sizes));
        assert!(report.ok, "{spec} {sizes:?}: {:?}", report.violations);
    }

    #[test]
    fn odd_part_three_small() {
        let spec = g("Z2xZ2xZ3");
        check(&spec, &[3, 4, 4]);
        check(&spec, &[3, 3, 5]);
        check(&spec, &[3, 2, 2, 2, 2]);
        check(&spec, &[5, 4, 2]);
        check(&spec, &[11]);
    }

    #[test]
    fn odd_part_three_mixed_two_part() {
        let spec = g("Z2xZ4xZ3");
        check(&spec, &[3, 4, 4, 4, 4, 4]);
        check(&spec, &[5, 5, 5, 5, 3]);
        check(&spec, &[3, 3, 3, 3, 3, 4, 4]);
        check(&spec, &[2, 2, 2, 2, 3, 4, 4, 4]);
        check(&spec, &[23]);
    }

    #[test]
    fn odd_part_nine() {
        let spec = g("Z2xZ4xZ9");
        // 71 = 3·22 + 5·1.
        let mut sizes = vec![3; 22];
        sizes.push(5);
        check(&spec, &sizes);
        check(&spec, &[8, 9, 10, 11, 12, 21]);
    }

    #[test]
    fn odd_part_one_mod_six_with_borrowed_layer() {
        let spec = g("Z2xZ2xZ7");
        check(&spec, &[3, 3, 3, 3, 3, 4, 4, 4]);
        check(&spec, &[5, 5, 5, 4, 4, 4]);
        check(&spec, &[2, 2, 2, 3, 3, 3, 3, 3, 4, 2]);
        let spec = g("Z2xZ4xZ7");
        // 55 = 3·10 + 5·5, the shape that exercises heavy borrowing.
        let mut sizes = vec![3; 10];
        sizes.extend_from_slice(&[5; 5]);
        check(&spec, &sizes);
    }

    #[test]
    fn odd_part_five_mod_six_floor_four() {
        let spec = g("Z2xZ2xZ5");
        check(&spec, &[4, 4, 4, 7]);
        check(&spec, &[5, 7, 7]);
        check(&spec, &[4, 5, 4, 6]);
        let spec = g("Z2xZ8xZ5");
        // 79 = 4 + 15·5 and 13·4 + 3·5 + 2·6.
        let mut sizes = vec![5; 15];
        sizes.push(4);
        check(&spec, &sizes);
        let mut sizes = vec![4; 13];
        sizes.extend_from_slice(&[5, 5, 5, 6, 6]);
        check(&spec, &sizes);
    }

    #[test]
    fn odd_part_five_mod_six_triples_still_tried() {
        // Below the known floor for ≡ 5 (mod 6), but these particular
        // requests are still constructible.
        let spec = g("Z2xZ2xZ5");
        check(&spec, &[3, 4, 4, 4, 4]);
        check(&spec, &[3, 3, 3, 3, 3, 4]);
    }

    #[test]
    fn elementary_two_part_with_tokens() {
        let spec = g("Z2xZ2xZ2xZ2xZ3");
        // 47 = 3·14 + 5·1.
        let mut sizes = vec![3; 14];
        sizes.push(5);
        check(&spec, &sizes);
        check(&spec, &[4; 11].iter().copied().chain([3]).collect::<Vec<_>>());
    }

    #[test]
    fn quadruple_entry_point() {
        let spec = g("Z2xZ2xZ7");
        // 27 = 3·1 + 4·1 + 5·2 + 2·5.
        let real = realize_quadruple(&spec, 1, 1, 2, 5).unwrap();
        assert!(verify_partition(
            &spec,
            &real.partition,
            Some(&[3, 4, 5, 5, 2, 2, 2, 2, 2])
        )
        .ok);
        // More 2-parts than non-involution inverse pairs: refused with a
        // certificate, regardless of the (wrong) total.
        assert!(matches!(
            realize_quadruple(&spec, 0, 0, 0, 13),
            Err(RealizeError::Unrealizable { .. })
        ));
    }

    #[test]
    fn entry_points_validate_group_shape() {
        assert!(matches!(
            realize_1mod6(&g("Z2xZ2xZ3"), 1, 2, 0),
            Err(RealizeError::PreconditionViolated { .. })
        ));
        assert!(matches!(
            realize_3mod6(&g("Z2xZ2xZ7"), 9, 0, 0),
            Err(RealizeError::PreconditionViolated { .. })
        ));
        assert!(matches!(
            realize_5mod6(&g("Z7"), 0, 0, 1, 0),
            Err(RealizeError::PreconditionViolated { .. })
        ));
    }
}
