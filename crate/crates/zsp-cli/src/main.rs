//! `zsp` — build, search, and verify zero-sum partitions of the non-zero
//! elements of finite Abelian groups, and apply them to graph labelings.
//!
//! Output contract: every command prints exactly one JSON document on
//! standard output and keeps diagnostics on standard error.  Exit code 0
//! means the payload was produced *and re-verified* before printing;
//! 1 means the request was refused (infeasible, below a size floor, or
//! beyond a search budget) with a structured reason in the payload;
//! 2 means the input itself was invalid.  Identical invocations produce
//! byte-identical payloads.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};
use zsp_core::engine::{
    classify, realize_with, EngineChoice, FloorStatus, RealizeError, RealizeOptions,
};
use zsp_core::group::{Elem, GroupSpec};
use zsp_core::labeling::{self, Digraph, Graph, JoinPart, LabelingError, TwinKind};
use zsp_core::oracle::{search_partition, OracleError};
use zsp_core::partition::{parse_tables, verify_partition, Partition, TableBlock, VerifyReport};
use zsp_core::skolem::{skolem_partition, skolem_subset, SkolemError};

/// Node budget used for subset decompositions when neither `--budget` nor
/// `ZSP_ORACLE_BUDGET` is given.
const DEFAULT_SUBSET_BUDGET: u64 = 50_000_000;

// ──────────────────────────────────────────────────────────────────────────
// Command-line grammar
// ──────────────────────────────────────────────────────────────────────────

/// Zero-sum partitions of finite Abelian groups: construction, exhaustive
/// search, verification, and graph-labeling applications.
///
/// Groups are written as cyclic factor lists: `Z2xZ4xZ3`, `2,4,3`, or
/// `Z2^3xZ7`.  All payloads are single JSON documents on standard output.
#[derive(Parser)]
#[command(name = "zsp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group facts: order, involutions, group sum, Sylow split, and the
    /// zero-sum partition classification.
    Info {
        /// Group, e.g. `Z2xZ4` or `2,4`.
        group: String,
    },
    /// Build a zero-sum partition with the given part sizes.
    Partition {
        /// Group, e.g. `Z2xZ2xZ2xZ3`.
        group: String,
        /// Comma-separated part sizes, e.g. `3,4,5,5,6`.
        sizes: Option<String>,
        /// Counts of parts of sizes 3, 4, 5 as `a,b,c`.
        #[arg(long, conflicts_with = "sizes")]
        triple: Option<String>,
        /// Counts of parts of sizes 3, 4, 5, 2 as `a,b,c,w`.
        #[arg(long, conflicts_with_all = ["sizes", "triple"])]
        quadruple: Option<String>,
        /// Which engine builds the partition.
        #[arg(long, value_enum, default_value_t = EngineArg::Constructive)]
        engine: EngineArg,
        /// Include the construction trace in the payload.
        #[arg(long)]
        trace: bool,
        /// Node budget for exhaustive searches (default: ZSP_ORACLE_BUDGET).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Check a partition file against a group: membership, disjointness,
    /// coverage, zero sums, and (optionally) an expected size profile.
    Verify {
        /// Group the file's coordinates refer to.
        group: String,
        /// Partition file: JSON, or bracketed tables with --appendix-format.
        file: PathBuf,
        /// Read the bracketed multi-table text layout instead of JSON.
        #[arg(long)]
        appendix_format: bool,
        /// Comma-separated expected part sizes.
        #[arg(long)]
        expect: Option<String>,
        /// Expected counts of parts of sizes 3, 4, 5 as `a,b,c`.
        #[arg(long, conflicts_with = "expect")]
        triple: Option<String>,
    },
    /// Decompose the non-zero elements of an odd-order group (or a given
    /// ±-closed subset) into good six-sets and leftover inverse pairs.
    Skolem {
        /// Group, e.g. `Z7` or `Z3xZ9`.
        group: String,
        /// File with the subset to decompose instead of all of Γ*.
        #[arg(long)]
        subset: Option<PathBuf>,
        /// Node budget for the decomposition search.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Exhaustive search for a partition, bypassing the constructions.
    Search {
        /// Group, e.g. `Z7`.
        group: String,
        /// Comma-separated part sizes, e.g. `3,3`.
        sizes: String,
        /// Node budget for the search (default: ZSP_ORACLE_BUDGET).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Graph labelings driven by zero-sum partitions.
    Label {
        #[command(subcommand)]
        task: LabelTask,
    },
}

#[derive(Subcommand)]
enum LabelTask {
    /// Arc labeling of a digraph whose induced vertex values (in-sum minus
    /// out-sum) are pairwise distinct.
    Irregular {
        /// Digraph file: JSON `{"n": …, "arcs": [[u,v],…]}` or `u v` lines.
        file: PathBuf,
        /// Group, e.g. `Z11`.
        group: String,
    },
    /// Vertex labeling whose open-neighborhood weights are all the identity.
    Magic {
        /// Graph file: JSON `{"n": …, "edges": [[u,v],…]}` or `u v` lines.
        file: PathBuf,
        /// Group of order n+1, e.g. `Z2xZ4` for a 7-vertex graph.
        group: String,
    },
    /// Vertex labeling whose closed-neighborhood weights are pairwise
    /// distinct.
    Antimagic {
        /// Graph file: JSON `{"n": …, "edges": [[u,v],…]}` or `u v` lines.
        file: PathBuf,
        /// Group of order n+1.
        group: String,
    },
    /// Blow up a graph's small twin classes (via a join) until every class
    /// reaches a floor, and optionally label the result.
    Join {
        /// Base graph file.
        file: PathBuf,
        /// Group to label the padded graph over (order must be its vertex
        /// count plus one).
        group: Option<String>,
        /// Which twin relation to pad: `false` pads with independent sets,
        /// `true` with cliques.
        #[arg(long, value_enum, default_value_t = KindArg::False)]
        kind: KindArg,
        /// Minimum twin class size after padding.
        #[arg(long, default_value_t = 4)]
        floor: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    /// Structural constructions with bounded search as a fallback.
    Constructive,
    /// Exhaustive search only.
    Oracle,
}

impl EngineArg {
    fn choice(self) -> EngineChoice {
        match self {
            EngineArg::Constructive => EngineChoice::Constructive,
            EngineArg::Oracle => EngineChoice::Exhaustive,
        }
    }

    fn name(self) -> &'static str {
        match self {
            EngineArg::Constructive => "constructive",
            EngineArg::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    /// False twins: same open neighborhood.
    False,
    /// True twins: same closed neighborhood.
    True,
}

impl KindArg {
    fn kind(self) -> TwinKind {
        match self {
            KindArg::False => TwinKind::False,
            KindArg::True => TwinKind::True,
        }
    }

    fn name(self) -> &'static str {
        match self {
            KindArg::False => "false",
            KindArg::True => "true",
        }
    }
}

// ──────────────────────────────────────────────────────────────────────────
// Entry point and outcome plumbing
// ──────────────────────────────────────────────────────────────────────────

/// A command's verdict: a verified success payload (exit 0) or a refusal
/// payload naming the obstruction (exit 1).  Input errors surface as
/// `anyhow` errors and exit 2.
enum Outcome {
    Success(Value),
    Refusal(Value),
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Success(payload)) => {
            print_payload(&payload);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Refusal(payload)) => {
            print_payload(&payload);
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Info { group } => cmd_info(&group),
        Command::Partition {
            group,
            sizes,
            triple,
            quadruple,
            engine,
            trace,
            budget,
        } => cmd_partition(
            &group,
            sizes.as_deref(),
            triple.as_deref(),
            quadruple.as_deref(),
            engine,
            trace,
            budget,
        ),
        Command::Verify {
            group,
            file,
            appendix_format,
            expect,
            triple,
        } => cmd_verify(
            &group,
            &file,
            appendix_format,
            expect.as_deref(),
            triple.as_deref(),
        ),
        Command::Skolem {
            group,
            subset,
            budget,
        } => cmd_skolem(&group, subset.as_deref(), budget),
        Command::Search {
            group,
            sizes,
            budget,
        } => cmd_search(&group, &sizes, budget),
        Command::Label { task } => match task {
            LabelTask::Irregular { file, group } => cmd_label_irregular(&file, &group),
            LabelTask::Magic { file, group } => cmd_label_vertex(&file, &group, TwinKind::False),
            LabelTask::Antimagic { file, group } => {
                cmd_label_vertex(&file, &group, TwinKind::True)
            }
            LabelTask::Join {
                file,
                group,
                kind,
                floor,
            } => cmd_label_join(&file, group.as_deref(), kind, floor),
        },
    }
}

fn print_payload(payload: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(payload).expect("payloads serialize")
    );
}

fn refusal(kind: &str, reason: String) -> Outcome {
    refusal_with(json!({ "kind": kind, "reason": reason }))
}

fn refusal_with(error: Value) -> Outcome {
    Outcome::Refusal(json!({ "ok": false, "error": error }))
}

/// A refusal for a result that failed its own final check before printing;
/// exit 0 is reserved for re-verified payloads.
fn unverified_refusal(report: &VerifyReport) -> Outcome {
    refusal_with(json!({
        "kind": "internal_error",
        "reason": "the result failed re-verification",
        "violations": report
            .violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<String>>(),
    }))
}

// ──────────────────────────────────────────────────────────────────────────
// Commands
// ──────────────────────────────────────────────────────────────────────────

fn cmd_info(group: &str) -> Result<Outcome> {
    let spec = parse_group(group)?;
    let split = spec.sylow2_split();
    let class = classify(&spec);
    Ok(Outcome::Success(json!({
        "ok": true,
        "group": spec.to_string(),
        "factors": spec.factors(),
        "canonical_factors": spec.canonical_factors(),
        "order": spec.order(),
        "involution_count": spec.involution_count(),
        "group_sum": spec.group_sum().0,
        "sylow_split": {
            "two_part": split.l.factors(),
            "odd_part": split.h.factors(),
        },
        "classification": class.to_string(),
        "guaranteed_floor": class.guaranteed_floor(),
    })))
}

fn cmd_partition(
    group: &str,
    sizes: Option<&str>,
    triple: Option<&str>,
    quadruple: Option<&str>,
    engine: EngineArg,
    trace: bool,
    budget: Option<u64>,
) -> Result<Outcome> {
    let spec = parse_group(group)?;
    let sizes = match (sizes, triple, quadruple) {
        (Some(list), None, None) => parse_sizes(list)?,
        (None, Some(counts), None) => {
            let c = parse_counts(counts, 3, "--triple")?;
            expand_counts(&[(3, c[0]), (4, c[1]), (5, c[2])])
        }
        (None, None, Some(counts)) => {
            let c = parse_counts(counts, 4, "--quadruple")?;
            expand_counts(&[(3, c[0]), (4, c[1]), (5, c[2]), (2, c[3])])
        }
        (None, None, None) => {
            bail!("give part sizes, or --triple a,b,c, or --quadruple a,b,c,w")
        }
        _ => unreachable!("clap rejects conflicting size arguments"),
    };
    let options = RealizeOptions {
        engine: engine.choice(),
        budget: effective_budget(budget)?,
    };
    let realized = match realize_with(&spec, &sizes, &options) {
        Ok(realized) => realized,
        Err(RealizeError::PreconditionViolated { reason }) => bail!("{reason}"),
        Err(err) => return Ok(refusal_with(realize_error_body(&err))),
    };
    let report = verify_partition(&spec, &realized.partition, Some(&sizes));
    if !report.ok {
        return Ok(unverified_refusal(&report));
    }
    let mut payload = json!({
        "ok": true,
        "group": spec.to_string(),
        "order": spec.order(),
        "engine": engine.name(),
        "sizes": sizes,
        "parts": parts_json(&realized.partition),
        "verified": true,
    });
    if trace {
        payload["trace"] = json!({
            "route": realized.trace.route,
            "steps": realized.trace.steps,
            "used_fallback_search": realized.trace.used_fallback_search,
        });
    }
    Ok(Outcome::Success(payload))
}

fn realize_error_body(err: &RealizeError) -> Value {
    match err {
        RealizeError::Unrealizable { reason } => {
            json!({ "kind": "unrealizable", "reason": reason })
        }
        RealizeError::FloorViolation {
            floor,
            status,
            reason,
        } => json!({
            "kind": "floor_violation",
            "floor": floor,
            "floor_status": match status {
                FloorStatus::Refuted => "refuted",
                FloorStatus::Open => "open",
            },
            "reason": reason,
        }),
        RealizeError::PreconditionViolated { reason } => {
            json!({ "kind": "precondition_violated", "reason": reason })
        }
        RealizeError::CapabilityExceeded { reason } => {
            json!({ "kind": "capability_exceeded", "reason": reason })
        }
        RealizeError::InternalExhaustion { reason } => {
            json!({ "kind": "internal_exhaustion", "reason": reason })
        }
    }
}

fn cmd_verify(
    group: &str,
    file: &Path,
    appendix_format: bool,
    expect: Option<&str>,
    triple: Option<&str>,
) -> Result<Outcome> {
    let spec = parse_group(group)?;
    let text =
        fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let expected = match (expect, triple) {
        (Some(list), None) => Some(parse_sizes(list)?),
        (None, Some(counts)) => {
            let c = parse_counts(counts, 3, "--triple")?;
            Some(expand_counts(&[(3, c[0]), (4, c[1]), (5, c[2])]))
        }
        (None, None) => None,
        _ => unreachable!("clap rejects conflicting expectations"),
    };

    // Each entry: the partition, its expected profile, and any mismatch
    // notes that already disqualify it.
    let mut entries: Vec<(Partition, Option<Vec<usize>>, Vec<String>)> = Vec::new();
    if appendix_format {
        let blocks =
            parse_tables(&text).map_err(|e| anyhow!("parsing {}: {e}", file.display()))?;
        if blocks.is_empty() {
            bail!("{} contains no tables", file.display());
        }
        for block in blocks {
            let mut notes = Vec::new();
            if block.factors.as_slice() != spec.factors() {
                notes.push(format!(
                    "the table is declared over factors {:?}, which do not match {}",
                    block.factors, spec
                ));
            }
            let profile = expected.clone().or_else(|| block_profile(&block));
            entries.push((block.partition(), profile, notes));
        }
    } else {
        entries.push((parse_partition_json(&text)?, expected, Vec::new()));
    }

    let mut tables = Vec::new();
    let mut all_ok = true;
    for (index, (partition, profile, notes)) in entries.iter().enumerate() {
        let mut violations = notes.clone();
        let report = verify_partition(&spec, partition, profile.as_deref());
        violations.extend(report.violations.iter().map(ToString::to_string));
        let ok = violations.is_empty();
        all_ok &= ok;
        tables.push(json!({
            "index": index,
            "ok": ok,
            "sizes": partition.parts.iter().map(Vec::len).collect::<Vec<usize>>(),
            "violations": violations,
        }));
    }
    let payload = json!({
        "ok": all_ok,
        "group": spec.to_string(),
        "table_count": tables.len(),
        "tables": tables,
    });
    if all_ok {
        Ok(Outcome::Success(payload))
    } else {
        Ok(Outcome::Refusal(payload))
    }
}

/// The size profile a table claims for itself, from its count triple
/// (`[#3s, #4s, #5s]`) or its trailing `count*size` summary.
fn block_profile(block: &TableBlock) -> Option<Vec<usize>> {
    if let Some(counts) = &block.count_triple {
        if counts.len() == 3 {
            return Some(expand_counts(&[(3, counts[0]), (4, counts[1]), (5, counts[2])]));
        }
    }
    block.sizes_note.as_ref().map(|note| {
        note.iter()
            .flat_map(|&(count, size)| std::iter::repeat(size).take(count))
            .collect()
    })
}

fn cmd_skolem(group: &str, subset: Option<&Path>, budget: Option<u64>) -> Result<Outcome> {
    let spec = parse_group(group)?;
    let (result, universe) = match subset {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let subset = parse_subset(&spec, &text)?;
            if subset.len() % 2 != 0 {
                bail!(
                    "the subset has odd size {}; six-sets and inverse pairs cover an even \
                     number of elements",
                    subset.len()
                );
            }
            let pairs = (subset.len() % 6) / 2;
            let budget = effective_budget(budget)?.unwrap_or(DEFAULT_SUBSET_BUDGET);
            (skolem_subset(&spec, &subset, pairs, budget), subset)
        }
        None => {
            if !spec.has_odd_order() {
                bail!(
                    "{spec} has even order; pass --subset to decompose a chosen ±-closed subset"
                );
            }
            let universe: BTreeSet<Elem> = spec.nonzero_elements().collect();
            (skolem_partition(&spec), universe)
        }
    };
    let decomposition = match result {
        Ok(decomposition) => decomposition,
        Err(SkolemError::PreconditionViolated { reason }) => bail!("{reason}"),
        Err(SkolemError::Infeasible { reason }) => return Ok(refusal("infeasible", reason)),
        Err(SkolemError::BudgetExceeded { nodes }) => {
            return Ok(refusal_with(json!({
                "kind": "budget_exceeded",
                "nodes": nodes,
                "reason": format!("the search budget of {nodes} nodes ran out"),
            })))
        }
    };
    if !decomposition.verify_covers(&spec, &universe) {
        return Ok(refusal(
            "internal_error",
            "the decomposition failed re-verification".to_string(),
        ));
    }
    let sixes: Vec<Value> = decomposition
        .sixes
        .iter()
        .map(|six| {
            json!({
                "c": six.c.0,
                "d": six.d.0,
                "elements": elems_json(&six.elements(&spec)),
            })
        })
        .collect();
    let pairs: Vec<Value> = decomposition
        .leftover_pairs
        .iter()
        .map(|e| json!([e.0, spec.negate(e).0]))
        .collect();
    Ok(Outcome::Success(json!({
        "ok": true,
        "group": spec.to_string(),
        "universe_size": universe.len(),
        "six_count": sixes.len(),
        "pair_count": pairs.len(),
        "sixes": sixes,
        "pairs": pairs,
        "verified": true,
    })))
}

fn cmd_search(group: &str, sizes: &str, budget: Option<u64>) -> Result<Outcome> {
    let spec = parse_group(group)?;
    let sizes = parse_sizes(sizes)?;
    let budget = effective_budget(budget)?;
    let partition = match search_partition(&spec, &sizes, budget) {
        Ok(partition) => partition,
        Err(OracleError::PreconditionViolated { reason }) => bail!("{reason}"),
        Err(OracleError::Infeasible { reason }) => return Ok(refusal("infeasible", reason)),
        Err(OracleError::CapabilityExceeded { reason }) => {
            return Ok(refusal("capability_exceeded", reason))
        }
        Err(OracleError::BudgetExceeded { nodes }) => {
            return Ok(refusal_with(json!({
                "kind": "budget_exceeded",
                "nodes": nodes,
                "reason": format!("the search budget of {nodes} nodes ran out"),
            })))
        }
    };
    let report = verify_partition(&spec, &partition, Some(&sizes));
    if !report.ok {
        return Ok(unverified_refusal(&report));
    }
    Ok(Outcome::Success(json!({
        "ok": true,
        "group": spec.to_string(),
        "order": spec.order(),
        "engine": "oracle",
        "sizes": sizes,
        "parts": parts_json(&partition),
        "verified": true,
    })))
}

fn cmd_label_irregular(file: &Path, group: &str) -> Result<Outcome> {
    let spec = parse_group(group)?;
    let digraph = read_digraph_file(file)?;
    let feasibility = labeling::irregular_feasibility(&digraph, &spec);
    let feasibility_json = json!({
        "component_orders": feasibility.component_orders,
        "sqrt_bound": feasibility.sqrt_bound,
        "involution_gap_bound": feasibility.involution_gap_bound,
        "plus_five_bound": feasibility.plus_five_bound,
    });
    let arc_labeling = match labeling::irregular_label(&digraph, &spec) {
        Ok(labeling) => labeling,
        Err(err) => return labeling_failure(err, Some(feasibility_json)),
    };
    if !labeling::verify_irregular(&digraph, &spec, &arc_labeling) {
        return Ok(refusal(
            "internal_error",
            "the labeling failed re-verification".to_string(),
        ));
    }
    let arcs: Vec<Value> = arc_labeling
        .psi
        .iter()
        .map(|(&(from, to), label)| json!({ "from": from, "to": to, "label": label.0 }))
        .collect();
    Ok(Outcome::Success(json!({
        "ok": true,
        "group": spec.to_string(),
        "vertex_count": digraph.vertex_count(),
        "arc_count": digraph.arc_count(),
        "feasibility": feasibility_json,
        "arcs": arcs,
        "induced": elems_json(&arc_labeling.induced),
        "verified": true,
    })))
}

fn cmd_label_vertex(file: &Path, group: &str, kind: TwinKind) -> Result<Outcome> {
    let spec = parse_group(group)?;
    let graph = read_graph_file(file)?;
    let classes = labeling::twin_partition(&graph, kind);
    let result = match kind {
        TwinKind::False => labeling::distance_magic_label(&graph, &spec),
        TwinKind::True => labeling::distance_antimagic_label(&graph, &spec),
    };
    let vertex_labeling = match result {
        Ok(labeling) => labeling,
        Err(err) => return labeling_failure(err, None),
    };
    let verified = match kind {
        TwinKind::False => labeling::verify_distance_magic(&graph, &spec, &vertex_labeling),
        TwinKind::True => labeling::verify_distance_antimagic(&graph, &spec, &vertex_labeling),
    };
    if !verified {
        return Ok(refusal(
            "internal_error",
            "the labeling failed re-verification".to_string(),
        ));
    }
    let mut payload = json!({
        "ok": true,
        "group": spec.to_string(),
        "vertex_count": graph.vertex_count(),
        "twin_classes": classes,
        "labels": elems_json(&vertex_labeling.labels),
        "weights": elems_json(&vertex_labeling.weights),
        "verified": true,
    });
    if kind == TwinKind::False {
        if let Some(weight) = vertex_labeling.weights.first() {
            payload["magic_weight"] = json!(weight.0);
        }
    }
    Ok(Outcome::Success(payload))
}

fn cmd_label_join(
    file: &Path,
    group: Option<&str>,
    kind: KindArg,
    floor: usize,
) -> Result<Outcome> {
    if floor == 0 {
        bail!("--floor must be at least 1");
    }
    let base = read_graph_file(file)?;
    if base.vertex_count() == 0 {
        bail!("the base graph has no vertices");
    }
    let twin_kind = kind.kind();
    let (joined, parts) = labeling::pad_to_min_twins(&base, twin_kind, floor);
    let parts_json: Vec<Value> = parts
        .iter()
        .enumerate()
        .map(|(vertex, part)| {
            json!({
                "base_vertex": vertex,
                "kind": match part {
                    JoinPart::Empty(_) => "empty",
                    JoinPart::Complete(_) => "complete",
                },
                "size": part.size(),
            })
        })
        .collect();
    let class_sizes: Vec<usize> = labeling::twin_partition(&joined, twin_kind)
        .iter()
        .map(Vec::len)
        .collect();
    let mut payload = json!({
        "ok": true,
        "kind": kind.name(),
        "floor": floor,
        "base_vertex_count": base.vertex_count(),
        "vertex_count": joined.vertex_count(),
        "edges": joined.edges(),
        "parts": parts_json,
        "twin_class_sizes": class_sizes,
    });
    if let Some(group) = group {
        let spec = parse_group(group)?;
        let result = match twin_kind {
            TwinKind::False => labeling::distance_magic_label(&joined, &spec),
            TwinKind::True => labeling::distance_antimagic_label(&joined, &spec),
        };
        let vertex_labeling = match result {
            Ok(labeling) => labeling,
            Err(err) => return labeling_failure(err, None),
        };
        let verified = match twin_kind {
            TwinKind::False => labeling::verify_distance_magic(&joined, &spec, &vertex_labeling),
            TwinKind::True => {
                labeling::verify_distance_antimagic(&joined, &spec, &vertex_labeling)
            }
        };
        if !verified {
            return Ok(refusal(
                "internal_error",
                "the labeling failed re-verification".to_string(),
            ));
        }
        payload["labeling"] = json!({
            "group": spec.to_string(),
            "labels": elems_json(&vertex_labeling.labels),
            "weights": elems_json(&vertex_labeling.weights),
            "verified": true,
        });
    }
    Ok(Outcome::Success(payload))
}

/// Maps a labeling error to the outcome contract: bad inputs exit 2,
/// failed sufficient conditions exit 1 with the condition named.
fn labeling_failure(err: LabelingError, feasibility: Option<Value>) -> Result<Outcome> {
    match err {
        LabelingError::PreconditionViolated { reason } => bail!("{reason}"),
        LabelingError::Feasibility { reason } => {
            let mut payload = json!({
                "ok": false,
                "error": { "kind": "infeasible", "reason": reason },
            });
            if let Some(feasibility) = feasibility {
                payload["feasibility"] = feasibility;
            }
            Ok(Outcome::Refusal(payload))
        }
        LabelingError::Internal { reason } => Ok(refusal("internal_error", reason)),
    }
}

// ──────────────────────────────────────────────────────────────────────────
// Input parsing
// ──────────────────────────────────────────────────────────────────────────

fn parse_group(text: &str) -> Result<GroupSpec> {
    text.parse::<GroupSpec>()
        .map_err(|e| anyhow!("invalid group {text:?}: {e}"))
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|token| !token.is_empty())
        .map(|token| {
            token
                .parse::<usize>()
                .with_context(|| format!("bad number {token:?} in {text:?}"))
        })
        .collect()
}

fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let sizes = parse_usize_list(text)?;
    if sizes.is_empty() {
        bail!("the size list {text:?} is empty");
    }
    Ok(sizes)
}

fn parse_counts(text: &str, arity: usize, flag: &str) -> Result<Vec<usize>> {
    let counts = parse_usize_list(text)?;
    if counts.len() != arity {
        bail!(
            "{flag} takes {arity} comma-separated counts, got {} in {text:?}",
            counts.len()
        );
    }
    Ok(counts)
}

fn expand_counts(counts: &[(usize, usize)]) -> Vec<usize> {
    let mut sizes = Vec::new();
    for &(size, count) in counts {
        sizes.extend(std::iter::repeat(size).take(count));
    }
    sizes
}

/// Reads `ZSP_ORACLE_BUDGET` unless an explicit `--budget` was given.
fn effective_budget(explicit: Option<u64>) -> Result<Option<u64>> {
    if explicit.is_some() {
        return Ok(explicit);
    }
    match std::env::var("ZSP_ORACLE_BUDGET") {
        Ok(raw) => {
            let nodes = raw.trim().parse::<u64>().with_context(|| {
                format!("ZSP_ORACLE_BUDGET={raw:?} is not a node count")
            })?;
            Ok(Some(nodes))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(err) => Err(anyhow!(err)).context("reading ZSP_ORACLE_BUDGET"),
    }
}

/// A partition file: either a bare array of parts or `{"parts": […]}`,
/// with each element written as its coordinate array.
fn parse_partition_json(text: &str) -> Result<Partition> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum PartitionFile {
        Bare(Vec<Vec<Vec<u16>>>),
        Object { parts: Vec<Vec<Vec<u16>>> },
    }
    let parsed: PartitionFile = serde_json::from_str(text)
        .context("parsing the partition file as JSON (expecting [[[…]]] or {\"parts\": …})")?;
    let (PartitionFile::Bare(rows) | PartitionFile::Object { parts: rows }) = parsed;
    Ok(Partition::new(
        rows.into_iter()
            .map(|part| part.into_iter().map(Elem).collect())
            .collect(),
    ))
}

/// A subset file: a JSON array of coordinate arrays, `{"elements": […]}`,
/// or text with one element per line (coordinates separated by spaces or
/// commas, `#` comments allowed).
fn parse_subset(spec: &GroupSpec, text: &str) -> Result<BTreeSet<Elem>> {
    let trimmed = text.trim_start();
    let rows: Vec<Vec<u16>> = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum SubsetFile {
            Bare(Vec<Vec<u16>>),
            Object { elements: Vec<Vec<u16>> },
        }
        let parsed: SubsetFile =
            serde_json::from_str(text).context("parsing the subset file as JSON")?;
        let (SubsetFile::Bare(rows) | SubsetFile::Object { elements: rows }) = parsed;
        rows
    } else {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = strip_comment(line).trim();
            if line.is_empty() {
                continue;
            }
            let coords = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|token| !token.is_empty())
                .map(|token| {
                    token
                        .parse::<u16>()
                        .with_context(|| format!("bad coordinate {token:?}"))
                })
                .collect::<Result<Vec<u16>>>()?;
            rows.push(coords);
        }
        rows
    };
    let arity = spec.factors().len();
    let mut subset = BTreeSet::new();
    for coords in rows {
        if coords.len() != arity {
            bail!(
                "element {coords:?} has {} coordinates, but {spec} has {arity} factors",
                coords.len()
            );
        }
        let elem = Elem(coords);
        if !spec.contains(&elem) {
            bail!("element {elem} is out of range for {spec}");
        }
        subset.insert(elem);
    }
    Ok(subset)
}

/// Pairs from a graph file: JSON `{"n": …, "edges"/"arcs": [[u,v],…]}` or
/// line-oriented text (`u v` per line; a lone number declares the vertex
/// count; `#` starts a comment).
fn parse_pairs_text(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut declared = None;
    let mut pairs = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [n] => {
                declared = Some(n.parse::<usize>().with_context(|| {
                    format!("line {}: bad vertex count {n:?}", index + 1)
                })?)
            }
            [u, v] => {
                let u = u.parse::<usize>().with_context(|| {
                    format!("line {}: bad vertex {u:?}", index + 1)
                })?;
                let v = v.parse::<usize>().with_context(|| {
                    format!("line {}: bad vertex {v:?}", index + 1)
                })?;
                pairs.push((u, v));
            }
            _ => bail!(
                "line {}: expected \"u v\" or a single vertex count",
                index + 1
            ),
        }
    }
    let implied = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Ok((declared.unwrap_or(implied), pairs))
}

#[derive(Deserialize)]
struct GraphFileJson {
    n: usize,
    edges: Option<Vec<(usize, usize)>>,
    arcs: Option<Vec<(usize, usize)>>,
}

fn read_pairs_file(path: &Path, directed: bool) -> Result<(usize, Vec<(usize, usize)>)> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let parsed: GraphFileJson = serde_json::from_str(&text)
            .with_context(|| format!("parsing {} as JSON", path.display()))?;
        let pairs = if directed {
            parsed.arcs.ok_or_else(|| {
                anyhow!("{} needs an \"arcs\" array for a digraph", path.display())
            })?
        } else {
            parsed.edges.ok_or_else(|| {
                anyhow!("{} needs an \"edges\" array for a graph", path.display())
            })?
        };
        Ok((parsed.n, pairs))
    } else {
        parse_pairs_text(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

fn read_graph_file(path: &Path) -> Result<Graph> {
    let (n, edges) = read_pairs_file(path, false)?;
    Graph::new(n, &edges).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn read_digraph_file(path: &Path) -> Result<Digraph> {
    let (n, arcs) = read_pairs_file(path, true)?;
    Digraph::new(n, &arcs).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

// ──────────────────────────────────────────────────────────────────────────
// JSON helpers
// ──────────────────────────────────────────────────────────────────────────

fn parts_json(partition: &Partition) -> Vec<Vec<Vec<u16>>> {
    partition.parts.iter().map(|part| elems_json(part)).collect()
}

fn elems_json(elems: &[Elem]) -> Vec<Vec<u16>> {
    elems.iter().map(|e| e.0.clone()).collect()
}

// ──────────────────────────────────────────────────────────────────────────
// Tests
// ──────────────────────────────────────────────────────────────────────────
