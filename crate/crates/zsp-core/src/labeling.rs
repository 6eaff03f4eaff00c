//! Digraph and graph labelings derived from zero-sum partitions.
//!
//! Three applications are covered:
//!
//! * **Group-irregular arc labelings.**  A digraph arc labeling `ψ` is
//!   Γ-irregular when the induced vertex values
//!   `φ(x) = Σ_{y ∈ N⁻(x)} ψ(y,x) − Σ_{y ∈ N⁺(x)} ψ(x,y)` are pairwise
//!   distinct.  Such a labeling exists exactly when the vertices admit an
//!   injective weighting with zero sum on every weakly connected
//!   component; [`irregular_label`] obtains those weights from a zero-sum
//!   partition (component sizes plus one discard set) and realizes them by
//!   spanning-tree back-substitution.
//! * **Distance magic / anti-magic vertex labelings.**  When the
//!   false-twin (resp. true-twin) classes of a graph are labeled with
//!   zero-sum sets, every vertex weight collapses to the identity
//!   (resp. to the negated own label, hence all weights are distinct).
//! * **Joins.**  [`g_join`] blows vertices up into empty or complete
//!   graphs, which manufactures twin classes; [`pad_to_min_twins`] uses it
//!   to raise every twin class of a graph to a requested floor.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::engine;
use crate::group::{Elem, GroupSpec};

// ──────────────────────────────────────────────────────────────────────────
// Errors
// ──────────────────────────────────────────────────────────────────────────

/// Why a labeling could not be produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelingError {
    /// The input violates a documented precondition (bad vertex index,
    /// loop, size mismatch).
    PreconditionViolated { reason: String },
    /// The graph/group pair fails the sufficient conditions this module
    /// implements (never a claim that no labeling exists at all).
    Feasibility { reason: String },
    /// A constructed labeling failed its own final check; this indicates
    /// a defect, not a property of the input.
    Internal { reason: String },
}

impl core::fmt::Display for LabelingError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LabelingError::PreconditionViolated { reason } => {
                write!(f, "precondition violated: {reason}")
            }
            LabelingError::Feasibility { reason } => write!(f, "not feasible here: {reason}"),
            LabelingError::Internal { reason } => write!(f, "internal error: {reason}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LabelingError {}

fn precondition(reason: String) -> LabelingError {
    LabelingError::PreconditionViolated { reason }
}

fn infeasible(reason: String) -> LabelingError {
    LabelingError::Feasibility { reason }
}

fn internal(reason: String) -> LabelingError {
    LabelingError::Internal { reason }
}

// ──────────────────────────────────────────────────────────────────────────
// Graphs and digraphs
// ──────────────────────────────────────────────────────────────────────────

/// A simple undirected graph: no loops, no multi-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<BTreeSet<usize>>,
}

impl Graph {
    /// Builds a graph on `n` vertices.  Duplicate edges collapse; loops
    /// and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph, LabelingError> {
        let mut adjacency = alloc::vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(precondition(format!(
                    "edge ({u}, {v}) is out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(precondition(format!("loop at vertex {u}")));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        Ok(Graph { adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    /// The edges as ordered pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nb) in self.adjacency.iter().enumerate() {
            for &v in nb.range(u + 1..) {
                out.push((u, v));
            }
        }
        out
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).expect("complete graph is simple")
    }

    /// The graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Graph {
        Graph::new(n, &[]).expect("empty graph is simple")
    }

    /// The path `0 – 1 – … – (n−1)`.
    pub fn path(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, &edges).expect("path is simple")
    }

    /// The complete multipartite graph with the given part sizes.
    pub fn complete_multipartite(parts: &[usize]) -> Graph {
        let n: usize = parts.iter().sum();
        let mut class = alloc::vec![0usize; n];
        let mut v = 0;
        for (i, &p) in parts.iter().enumerate() {
            for _ in 0..p {
                class[v] = i;
                v += 1;
            }
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for w in u + 1..n {
                if class[u] != class[w] {
                    edges.push((u, w));
                }
            }
        }
        Graph::new(n, &edges).expect("multipartite graph is simple")
    }
}

/// A simple digraph: no loops; both orientations of a pair may coexist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Digraph, LabelingError> {
        let mut set = BTreeSet::new();
        for &(u, v) in arcs {
            if u >= n || v >= n {
                return Err(precondition(format!(
                    "arc ({u}, {v}) is out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(precondition(format!("loop at vertex {u}")));
            }
            set.insert((u, v));
        }
        Ok(Digraph {
            vertex_count: n,
            arcs: set,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// The directed path `0 → 1 → … → (n−1)`.
    pub fn path(n: usize) -> Digraph {
        let arcs: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        Digraph::new(n, &arcs).expect("path is simple")
    }

    /// The directed cycle `0 → 1 → … → (n−1) → 0`.
    pub fn cycle(n: usize) -> Digraph {
        let mut arcs: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        if n > 1 {
            arcs.push((n - 1, 0));
        }
        Digraph::new(n, &arcs).expect("cycle is simple")
    }

    /// Neighbors in the underlying (undirected) graph.
    fn underlying_neighbors(&self) -> Vec<BTreeSet<usize>> {
        let mut adjacency = alloc::vec![BTreeSet::new(); self.vertex_count];
        for &(u, v) in &self.arcs {
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        adjacency
    }

    /// Weakly connected components, each sorted, ordered by smallest
    /// vertex.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let adjacency = self.underlying_neighbors();
        let mut seen = alloc::vec![false; self.vertex_count];
        let mut components = Vec::new();
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            let mut stack = alloc::vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }
}

// ──────────────────────────────────────────────────────────────────────────
// Twin classes
// ──────────────────────────────────────────────────────────────────────────

/// Which twin relation to use: equal open neighborhoods (`False`, the
/// vertices are non-adjacent) or equal closed neighborhoods (`True`, the
/// vertices are adjacent).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwinKind {
    False,
    True,
}

/// Partitions the vertices into twin equivalence classes (every vertex
/// counts as a twin of itself).  Classes are sorted internally and
/// ordered by their smallest vertex.
pub fn twin_partition(g: &Graph, kind: TwinKind) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for v in 0..g.vertex_count() {
        let mut key: Vec<usize> = g.neighbors(v).iter().copied().collect();
        if kind == TwinKind::True {
            let pos = key.partition_point(|&u| u < v);
            key.insert(pos, v);
        }
        groups.entry(key).or_default().push(v);
    }
    let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    classes
}

// ──────────────────────────────────────────────────────────────────────────
// Irregular labelings of digraphs
// ──────────────────────────────────────────────────────────────────────────

/// Which sufficient conditions for a Γ-irregular labeling hold.  All
/// flags are sufficiency-only: a false flag never means no labeling
/// exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrregularFeasibility {
    pub vertex_count: usize,
    pub group_order: u64,
    pub involution_count: u64,
    /// Orders of the weakly connected components.
    pub component_orders: Vec<usize>,
    /// Components ≥ 3 and `|Γ| ≥ 2n + 2·√(n − 1/2) − 1` (checked in exact
    /// integer arithmetic as `(|Γ| + 1 − 2n)² ≥ 4n − 2`).
    pub sqrt_bound: bool,
    /// Components ≥ 3 and `|Γ| − |I(Γ)| ≥ 2n`.
    pub involution_gap_bound: bool,
    /// Components ≥ 4, `|I(Γ)| ≠ 1` and `|Γ| ≥ n + 5`.
    pub plus_five_bound: bool,
}

impl IrregularFeasibility {
    /// True when at least one sufficient condition holds.
    pub fn any(&self) -> bool {
        self.sqrt_bound || self.involution_gap_bound || self.plus_five_bound
    }
}

/// Evaluates the sufficient conditions for a Γ-irregular labeling of `d`.
pub fn irregular_feasibility(d: &Digraph, spec: &GroupSpec) -> IrregularFeasibility {
    let n = d.vertex_count() as u64;
    let component_orders: Vec<usize> = d.weak_components().iter().map(|c| c.len()).collect();
    let min_comp = component_orders.iter().copied().min().unwrap_or(0);
    let order = spec.order();
    let involutions = spec.involution_count();
    let sqrt_margin = match (order + 1).checked_sub(2 * n) {
        Some(margin) => n >= 1 && margin * margin >= 4 * n - 2,
        None => false,
    };
    IrregularFeasibility {
        vertex_count: d.vertex_count(),
        group_order: order,
        involution_count: involutions,
        component_orders,
        sqrt_bound: min_comp >= 3 && sqrt_margin,
        involution_gap_bound: min_comp >= 3 && order.saturating_sub(involutions) >= 2 * n,
        plus_five_bound: min_comp >= 4 && involutions != 1 && order >= n + 5,
    }
}

/// An arc labeling together with the vertex values it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcLabeling {
    /// Label per arc.
    pub psi: BTreeMap<(usize, usize), Elem>,
    /// Induced value per vertex: incoming labels minus outgoing labels.
    pub induced: Vec<Elem>,
}

/// Builds a Γ-irregular arc labeling of `d`.
///
/// Vertex targets come from a zero-sum partition whose part sizes are the
/// component orders plus one discard set of size `|Γ| − 1 − n`; the arcs
/// then realize the targets per component: non-spanning-tree arcs get 0
/// and tree arcs are forced leaf-by-leaf (the zero component sum makes
/// the root consistent).
pub fn irregular_label(d: &Digraph, spec: &GroupSpec) -> Result<ArcLabeling, LabelingError> {
    let n = d.vertex_count();
    if n == 0 {
        return Err(precondition("the digraph has no vertices".to_string()));
    }
    let components = d.weak_components();
    if let Some(c) = components.iter().find(|c| c.len() == 1) {
        return Err(infeasible(format!(
            "vertex {} is isolated; isolated vertices force an induced value of 0 \
             that no arc labeling can adjust",
            c[0]
        )));
    }
    let feasibility = irregular_feasibility(d, spec);
    if !feasibility.any() {
        return Err(infeasible(format!(
            "no sufficient condition holds for {spec} (order {}, {} involutions) on \
             {n} vertices with component orders {:?}",
            feasibility.group_order, feasibility.involution_count, feasibility.component_orders
        )));
    }

    // One zero-sum set per component, plus a discard set for the unused
    // non-zero elements.
    let discard = (spec.order() - 1) as usize - n;
    if discard == 1 {
        return Err(infeasible(
            "one non-zero element would be left over, and a single element cannot \
             sum to zero; use a group whose order is not n + 2"
                .to_string(),
        ));
    }
    let mut sizes: Vec<usize> = components.iter().map(|c| c.len()).collect();
    if discard > 0 {
        sizes.push(discard);
    }
    let realization = engine::realize(spec, &sizes).map_err(|e| {
        infeasible(format!(
            "no zero-sum partition with component sizes {sizes:?} on {spec}: {e}"
        ))
    })?;
    let mut by_size: BTreeMap<usize, Vec<Vec<Elem>>> = BTreeMap::new();
    for part in &realization.partition.parts {
        by_size.entry(part.len()).or_default().push(part.clone());
    }

    let mut targets: Vec<Elem> = alloc::vec![spec.zero(); n];
    for comp in &components {
        let part = by_size
            .get_mut(&comp.len())
            .and_then(|v| v.pop())
            .ok_or_else(|| internal("partition does not match component sizes".to_string()))?;
        for (&v, e) in comp.iter().zip(part) {
            targets[v] = e;
        }
    }

    let mut psi: BTreeMap<(usize, usize), Elem> = d.arcs().map(|a| (a, spec.zero())).collect();
    for comp in &components {
        solve_component(d, spec, comp, &targets, &mut psi)?;
    }

    let induced = induced_values(d, spec, &psi);
    let mut seen = BTreeSet::new();
    for (v, value) in induced.iter().enumerate() {
        if *value != targets[v] {
            return Err(internal(format!(
                "vertex {v} induces {value:?} instead of its target"
            )));
        }
        if !seen.insert(value.clone()) {
            return Err(internal(format!("induced value at vertex {v} repeats")));
        }
    }
    Ok(ArcLabeling { psi, induced })
}

/// Forces the spanning-tree arcs of one component so each vertex meets
/// its target.
fn solve_component(
    d: &Digraph,
    spec: &GroupSpec,
    comp: &[usize],
    targets: &[Elem],
    psi: &mut BTreeMap<(usize, usize), Elem>,
) -> Result<(), LabelingError> {
    let adjacency = d.underlying_neighbors();
    let root = comp[0];
    // BFS tree: parent of each non-root vertex, in visit order.
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut order = alloc::vec![root];
    let mut seen: BTreeSet<usize> = [root].into_iter().collect();
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in &adjacency[v] {
            if seen.insert(w) {
                parent.insert(w, v);
                order.push(w);
            }
        }
    }
    if order.len() != comp.len() {
        return Err(internal("component traversal mismatch".to_string()));
    }

    // Children before parents: each vertex's one unresolved tree arc is
    // the arc to its parent.
    let mut residual: BTreeMap<usize, Elem> =
        comp.iter().map(|&v| (v, targets[v].clone())).collect();
    for &v in order.iter().skip(1).rev() {
        let p = parent[&v];
        // Prefer the parent→child orientation when both arcs exist.
        if psi.contains_key(&(p, v)) {
            // Incoming at v: ψ equals the residual; at p it is outgoing.
            let value = residual[&v].clone();
            let at_p = residual.get_mut(&p).expect("parent in component");
            *at_p = spec.add(at_p, &value);
            psi.insert((p, v), value);
        } else {
            // Outgoing at v: −ψ equals the residual; at p it is incoming.
            let value = spec.negate(&residual[&v]);
            let at_p = residual.get_mut(&p).expect("parent in component");
            *at_p = spec.sub(at_p, &value);
            psi.insert((v, p), value);
        }
        residual.insert(v, spec.zero());
    }
    if residual[&root] != spec.zero() {
        return Err(internal(
            "root residual non-zero despite zero component sum".to_string(),
        ));
    }
    Ok(())
}

/// Evaluates the induced vertex values of an arc labeling.
fn induced_values(d: &Digraph, spec: &GroupSpec, psi: &BTreeMap<(usize, usize), Elem>) -> Vec<Elem> {
    let mut induced = alloc::vec![spec.zero(); d.vertex_count()];
    for ((u, v), value) in psi {
        induced[*v] = spec.add(&induced[*v], value);
        induced[*u] = spec.sub(&induced[*u], value);
    }
    induced
}

/// Checks a claimed Γ-irregular labeling: the arcs match the digraph, the
/// induced values are consistent and pairwise distinct, and every weakly
/// connected component sums to zero.
pub fn verify_irregular(d: &Digraph, spec: &GroupSpec, labeling: &ArcLabeling) -> bool {
    if labeling.psi.len() != d.arc_count() || labeling.induced.len() != d.vertex_count() {
        return false;
    }
    if !d.arcs().all(|a| labeling.psi.contains_key(&a)) {
        return false;
    }
    if induced_values(d, spec, &labeling.psi) != labeling.induced {
        return false;
    }
    let mut seen = BTreeSet::new();
    if !labeling.induced.iter().all(|e| seen.insert(e.clone())) {
        return false;
    }
    d.weak_components().iter().all(|comp| {
        let sum = comp
            .iter()
            .fold(spec.zero(), |acc, &v| spec.add(&acc, &labeling.induced[v]));
        sum == spec.zero()
    })
}

// ──────────────────────────────────────────────────────────────────────────
// Distance magic / anti-magic labelings via twin classes
// ──────────────────────────────────────────────────────────────────────────

/// An injective vertex labeling with non-zero group elements, together
/// with the neighbor-sum weight of every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexLabeling {
    pub labels: Vec<Elem>,
    pub weights: Vec<Elem>,
}

/// Labels every twin class with a zero-sum set of its size.
fn label_by_twin_classes(
    g: &Graph,
    spec: &GroupSpec,
    kind: TwinKind,
) -> Result<VertexLabeling, LabelingError> {
    let n = g.vertex_count() as u64;
    if spec.order() != n + 1 {
        return Err(infeasible(format!(
            "{n} vertices need a group of order {}, but {spec} has order {}",
            n + 1,
            spec.order()
        )));
    }
    let classes = twin_partition(g, kind);
    let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    let realization = engine::realize(spec, &sizes).map_err(|e| {
        infeasible(format!(
            "twin class sizes {sizes:?} admit no zero-sum partition on {spec}: {e}"
        ))
    })?;
    let mut by_size: BTreeMap<usize, Vec<Vec<Elem>>> = BTreeMap::new();
    for part in &realization.partition.parts {
        by_size.entry(part.len()).or_default().push(part.clone());
    }
    let mut labels = alloc::vec![spec.zero(); g.vertex_count()];
    for class in &classes {
        let part = by_size
            .get_mut(&class.len())
            .and_then(|v| v.pop())
            .ok_or_else(|| internal("partition does not match class sizes".to_string()))?;
        for (&v, e) in class.iter().zip(part) {
            labels[v] = e;
        }
    }
    let weights = neighbor_sums(g, spec, &labels);
    Ok(VertexLabeling { labels, weights })
}

fn neighbor_sums(g: &Graph, spec: &GroupSpec, labels: &[Elem]) -> Vec<Elem> {
    (0..g.vertex_count())
        .map(|v| {
            g.neighbors(v)
                .iter()
                .fold(spec.zero(), |acc, &u| spec.add(&acc, &labels[u]))
        })
        .collect()
}

/// Produces a vertex labeling in which every neighbor-sum weight is the
/// identity, by giving each false-twin class a zero-sum label set.
pub fn distance_magic_label(g: &Graph, spec: &GroupSpec) -> Result<VertexLabeling, LabelingError> {
    let labeling = label_by_twin_classes(g, spec, TwinKind::False)?;
    if let Some(v) = labeling.weights.iter().position(|w| *w != spec.zero()) {
        return Err(internal(format!("vertex {v} has a non-identity weight")));
    }
    Ok(labeling)
}

/// Produces a vertex labeling in which every weight is the negated own
/// label (hence all weights are distinct), by giving each true-twin class
/// a zero-sum label set.
pub fn distance_antimagic_label(
    g: &Graph,
    spec: &GroupSpec,
) -> Result<VertexLabeling, LabelingError> {
    let labeling = label_by_twin_classes(g, spec, TwinKind::True)?;
    for (v, w) in labeling.weights.iter().enumerate() {
        if *w != spec.negate(&labeling.labels[v]) {
            return Err(internal(format!(
                "vertex {v} does not weigh the negation of its label"
            )));
        }
    }
    Ok(labeling)
}

/// Checks injectivity into the non-zero elements and weight consistency.
fn verify_vertex_labeling(g: &Graph, spec: &GroupSpec, labeling: &VertexLabeling) -> bool {
    if labeling.labels.len() != g.vertex_count() || labeling.weights.len() != g.vertex_count() {
        return false;
    }
    let mut seen = BTreeSet::new();
    if !labeling
        .labels
        .iter()
        .all(|e| *e != spec.zero() && spec.contains(e) && seen.insert(e.clone()))
    {
        return false;
    }
    neighbor_sums(g, spec, &labeling.labels) == labeling.weights
}

/// Checks a claimed distance magic labeling: injective non-zero labels
/// and one common weight.
pub fn verify_distance_magic(g: &Graph, spec: &GroupSpec, labeling: &VertexLabeling) -> bool {
    verify_vertex_labeling(g, spec, labeling)
        && labeling.weights.windows(2).all(|w| w[0] == w[1])
}

/// Checks a claimed distance anti-magic labeling: injective non-zero
/// labels and pairwise distinct weights.
pub fn verify_distance_antimagic(g: &Graph, spec: &GroupSpec, labeling: &VertexLabeling) -> bool {
    let mut seen = BTreeSet::new();
    verify_vertex_labeling(g, spec, labeling)
        && labeling.weights.iter().all(|w| seen.insert(w.clone()))
}

// ──────────────────────────────────────────────────────────────────────────
// Joins and twin padding
// ──────────────────────────────────────────────────────────────────────────

/// What to substitute for a vertex in a join: an edgeless graph or a
/// complete graph on `k` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinPart {
    Empty(usize),
    Complete(usize),
}

impl JoinPart {
    pub fn size(&self) -> usize {
        match *self {
            JoinPart::Empty(k) | JoinPart::Complete(k) => k,
        }
    }
}

/// Replaces each vertex `v` of `g` by the assigned part `X_v` and joins
/// parts completely whenever their base vertices are adjacent.  Vertices
/// are numbered part by part in base-vertex order.
pub fn g_join(g: &Graph, parts: &[JoinPart]) -> Result<Graph, LabelingError> {
    if parts.len() != g.vertex_count() {
        return Err(precondition(format!(
            "{} parts assigned to {} vertices",
            parts.len(),
            g.vertex_count()
        )));
    }
    if parts.iter().any(|p| p.size() == 0) {
        return Err(precondition("every part must have at least one vertex".to_string()));
    }
    let mut offset = alloc::vec![0usize; g.vertex_count() + 1];
    for (v, p) in parts.iter().enumerate() {
        offset[v + 1] = offset[v] + p.size();
    }
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        for a in offset[u]..offset[u + 1] {
            for b in offset[v]..offset[v + 1] {
                edges.push((a, b));
            }
        }
    }
    for (v, p) in parts.iter().enumerate() {
        if let JoinPart::Complete(_) = p {
            for a in offset[v]..offset[v + 1] {
                for b in a + 1..offset[v + 1] {
                    edges.push((a, b));
                }
            }
        }
    }
    Graph::new(offset[g.vertex_count()], &edges)
}

/// Blows up one representative of every small twin class so each class
/// reaches at least `floor` members, and returns the join together with
/// the assignment that produced it.
pub fn pad_to_min_twins(g: &Graph, kind: TwinKind, floor: usize) -> (Graph, Vec<JoinPart>) {
    let single = |k: usize| match kind {
        TwinKind::False => JoinPart::Empty(k),
        TwinKind::True => JoinPart::Complete(k),
    };
    let mut parts = alloc::vec![single(1); g.vertex_count()];
    for class in twin_partition(g, kind) {
        if class.len() < floor {
            parts[class[0]] = single(floor - class.len() + 1);
        }
    }
    let joined = g_join(g, &parts).expect("padding parts are non-empty");
    (joined, parts)
}

// ──────────────────────────────────────────────────────────────────────────
// Tests
// ──────────────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twin_classes_of_bipartite_paths_and_cliques() {
        let k34 = Graph::complete_multipartite(&[3, 4]);
        let classes = twin_partition(&k34, TwinKind::False);
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, [3, 4]);

        let p4 = Graph::path(4);
        assert_eq!(twin_partition(&p4, TwinKind::False).len(), 4);

        let k4 = Graph::complete(4);
        let classes = twin_partition(&k4, TwinKind::True);
        assert_eq!(classes, alloc::vec![alloc::vec![0, 1, 2, 3]]);
    }

    #[test]
    fn feasibility_flags_follow_the_bounds() {
        // 10 vertices in two components of 5.
        let mut arcs: Vec<(usize, usize)> = (1..5).map(|v| (v - 1, v)).collect();
        arcs.extend((6..10).map(|v| (v - 1, v)));
        let d = Digraph::new(10, &arcs).unwrap();

        let spec: GroupSpec = "Z3xZ5".parse().unwrap();
        let f = irregular_feasibility(&d, &spec);
        assert!(f.plus_five_bound, "order 15 ≥ 10 + 5 with no involutions");
        assert!(!f.sqrt_bound, "15 < 20 − 1 + √38");

        let spec: GroupSpec = "Z16".parse().unwrap();
        let f = irregular_feasibility(&d, &spec);
        assert!(!f.plus_five_bound, "unique involution");

        // 4 vertices in one path over Z13: 13 ≥ 8 − 1 + √14.
        let d = Digraph::path(4);
        let spec: GroupSpec = "Z13".parse().unwrap();
        let f = irregular_feasibility(&d, &spec);
        assert!(f.sqrt_bound);
        assert!(f.involution_gap_bound, "13 − 0 ≥ 8");
    }

    #[test]
    fn directed_cycle_gets_an_irregular_labeling() {
        let d = Digraph::cycle(4);
        let spec: GroupSpec = "Z11".parse().unwrap();
        let labeling = irregular_label(&d, &spec).expect("order 11 ≥ 4 + 5, no involutions");
        assert!(verify_irregular(&d, &spec, &labeling));
        // The discard set absorbed 11 − 1 − 4 = 6 elements.
        assert_eq!(labeling.psi.len(), 4);
    }

    #[test]
    fn multi_component_labeling_over_a_mixed_group() {
        // A path of 4 and a cycle of 5 over Z2×Z8 (order 16 = 9 + 7).
        let mut arcs: Vec<(usize, usize)> = (1..4).map(|v| (v - 1, v)).collect();
        arcs.extend([(4, 5), (5, 6), (6, 7), (7, 8), (8, 4)]);
        let d = Digraph::new(9, &arcs).unwrap();
        let spec: GroupSpec = "Z2xZ8".parse().unwrap();
        let labeling = irregular_label(&d, &spec).expect("order 16 ≥ 9 + 5, three involutions");
        assert!(verify_irregular(&d, &spec, &labeling));
    }

    #[test]
    fn isolated_vertices_are_refused() {
        let d = Digraph::new(5, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let spec: GroupSpec = "Z11".parse().unwrap();
        assert!(matches!(
            irregular_label(&d, &spec),
            Err(LabelingError::Feasibility { .. })
        ));
    }

    #[test]
    fn opposite_arcs_between_the_same_vertices_are_handled() {
        // Both orientations between 0 and 1; only one joins the tree.
        let d = Digraph::new(4, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 1)]).unwrap();
        let spec: GroupSpec = "Z2xZ2xZ3".parse().unwrap();
        let labeling = irregular_label(&d, &spec).expect("order 12 ≥ 4 + 5, three involutions");
        assert!(verify_irregular(&d, &spec, &labeling));
    }

    #[test]
    fn complete_bipartite_magic_labeling() {
        let g = Graph::complete_multipartite(&[3, 4]);
        let spec: GroupSpec = "Z2xZ4".parse().unwrap();
        let labeling = distance_magic_label(&g, &spec).expect("classes {3, 4} over order 8");
        assert!(verify_distance_magic(&g, &spec, &labeling));
        assert!(labeling.weights.iter().all(|w| *w == spec.zero()));
    }

    #[test]
    fn multipartite_magic_labeling_with_six_classes() {
        let g = Graph::complete_multipartite(&[4, 4, 4, 4, 4, 4]);
        let spec: GroupSpec = "Z5xZ5".parse().unwrap();
        let labeling = distance_magic_label(&g, &spec).expect("24 = 6·4 over order 25");
        assert!(verify_distance_magic(&g, &spec, &labeling));
    }

    #[test]
    fn stars_are_refused_for_magic_labelings() {
        let g = Graph::complete_multipartite(&[1, 5]);
        let spec: GroupSpec = "Z7".parse().unwrap();
        assert!(matches!(
            distance_magic_label(&g, &spec),
            Err(LabelingError::Feasibility { .. })
        ));
    }

    #[test]
    fn cliques_get_antimagic_labelings() {
        let g = Graph::complete(7);
        let spec: GroupSpec = "Z2xZ4".parse().unwrap();
        let labeling = distance_antimagic_label(&g, &spec).expect("one class of 7 over order 8");
        assert!(verify_distance_antimagic(&g, &spec, &labeling));
        for v in 0..7 {
            assert_eq!(labeling.weights[v], spec.negate(&labeling.labels[v]));
        }

        let g = Graph::complete(8);
        let spec: GroupSpec = "Z3xZ3".parse().unwrap();
        let labeling = distance_antimagic_label(&g, &spec).expect("one class of 8 over order 9");
        assert!(verify_distance_antimagic(&g, &spec, &labeling));
    }

    #[test]
    fn false_twin_pairs_fail_the_antimagic_route() {
        // K_{2,3}: every true-twin class is a singleton, so the class
        // sizes contain 1.
        let g = Graph::complete_multipartite(&[2, 3]);
        let spec: GroupSpec = "Z2xZ3".parse().unwrap();
        assert!(matches!(
            distance_antimagic_label(&g, &spec),
            Err(LabelingError::Feasibility { .. })
        ));
    }

    #[test]
    fn joins_build_bipartite_graphs_and_cliques() {
        let k2 = Graph::complete(2);
        let joined = g_join(&k2, &[JoinPart::Empty(2), JoinPart::Empty(3)]).unwrap();
        assert_eq!(joined, Graph::complete_multipartite(&[2, 3]));

        let k1 = Graph::complete(1);
        let joined = g_join(&k1, &[JoinPart::Complete(4)]).unwrap();
        assert_eq!(joined, Graph::complete(4));
    }

    #[test]
    fn join_recovers_assigned_twin_classes() {
        let p3 = Graph::path(3);
        let joined = g_join(
            &p3,
            &[JoinPart::Empty(4), JoinPart::Empty(4), JoinPart::Empty(4)],
        )
        .unwrap();
        assert_eq!(joined.vertex_count(), 12);
        let classes = twin_partition(&joined, TwinKind::False);
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        // The two path ends have equal neighborhoods after the blow-up,
        // so their classes merge.
        assert_eq!(sizes, [4, 8]);
    }

    #[test]
    fn padding_raises_every_class_to_the_floor() {
        let p4 = Graph::path(4);
        let (padded, parts) = pad_to_min_twins(&p4, TwinKind::False, 4);
        assert_eq!(padded.vertex_count(), 16);
        assert_eq!(parts.iter().map(JoinPart::size).sum::<usize>(), 16);
        assert!(twin_partition(&padded, TwinKind::False)
            .iter()
            .all(|c| c.len() >= 4));

        let k44 = Graph::complete_multipartite(&[4, 4]);
        let (padded, parts) = pad_to_min_twins(&k44, TwinKind::False, 4);
        assert_eq!(padded, k44);
        assert!(parts.iter().all(|p| p.size() == 1));

        let k3 = Graph::complete(3);
        let (padded, _) = pad_to_min_twins(&k3, TwinKind::True, 4);
        assert_eq!(padded, Graph::complete(4));
    }

    #[test]
    fn padded_graphs_admit_the_promised_labelings() {
        // P₄ padded to 16 vertices: false-twin classes all ≥ 4, so any
        // order-17 group labels it magically.
        let (padded, _) = pad_to_min_twins(&Graph::path(4), TwinKind::False, 4);
        let spec: GroupSpec = "Z17".parse().unwrap();
        let labeling = distance_magic_label(&padded, &spec).expect("classes ≥ 4 over order 17");
        assert!(verify_distance_magic(&padded, &spec, &labeling));
    }
}
