//! Partitions of the non-zero elements into zero-sum parts: the data
//! model, the verifier, size-multiset normalization, and the plain-text
//! table format used for bundled partition tables and CLI interchange.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::group::{Elem, GroupSpec};

// ──────────────────────────────────────────────────────────────────────────
// Errors
// ──────────────────────────────────────────────────────────────────────────

/// Why a six-set pattern `{c, d, −c−d, −c, −d, c+d}` degenerates: any of
/// these conditions makes two of the six members collide (or hit zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SixDegeneracy {
    /// `c = 0`
    CZero,
    /// `d = 0`
    DZero,
    /// `c + d = 0`
    SumZero,
    /// `c = d`
    EqualGenerators,
    /// `2c = 0`
    CInvolution,
    /// `2d = 0`
    DInvolution,
    /// `2(c+d) = 0`
    SumInvolution,
    /// `2c + d = 0`
    TwoCPlusDZero,
    /// `c + 2d = 0`
    CPlusTwoDZero,
}

impl fmt::Display for SixDegeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SixDegeneracy::CZero => "c = 0",
            SixDegeneracy::DZero => "d = 0",
            SixDegeneracy::SumZero => "c + d = 0",
            SixDegeneracy::EqualGenerators => "c = d",
            SixDegeneracy::CInvolution => "2c = 0",
            SixDegeneracy::DInvolution => "2d = 0",
            SixDegeneracy::SumInvolution => "2(c + d) = 0",
            SixDegeneracy::TwoCPlusDZero => "2c + d = 0",
            SixDegeneracy::CPlusTwoDZero => "c + 2d = 0",
        };
        f.write_str(s)
    }
}

/// Errors from partition-model operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionError {
    /// The generators produce a degenerate six-set.
    DegenerateSix { reason: SixDegeneracy },
    /// The input violates a documented precondition.
    PreconditionViolated { reason: String },
    /// Malformed text in the table format.
    ParseError { line: usize, reason: String },
}

impl fmt::Display for PartitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionError::DegenerateSix { reason } => {
                write!(f, "degenerate six-set: {reason}")
            }
            PartitionError::PreconditionViolated { reason } => {
                write!(f, "precondition violated: {reason}")
            }
            PartitionError::ParseError { line, reason } => {
                write!(f, "parse error at line {line}: {reason}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PartitionError {}

// ──────────────────────────────────────────────────────────────────────────
// Partitions
// ──────────────────────────────────────────────────────────────────────────

/// A partition (or candidate partition) of the non-zero group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub parts: Vec<Vec<Elem>>,
}

impl Partition {
    pub fn new(parts: Vec<Vec<Elem>>) -> Self {
        Partition { parts }
    }

    /// Part sizes, in part order.
    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.len()).collect()
    }

    /// Sorts the elements inside each part and the parts themselves
    /// (by size, then lexicographically), giving a canonical form for
    /// comparisons.
    pub fn canonicalized(&self) -> Partition {
        let mut parts: Vec<Vec<Elem>> = self
            .parts
            .iter()
            .map(|p| {
                let mut q = p.clone();
                q.sort();
                q
            })
            .collect();
        parts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Partition { parts }
    }

    /// Total number of elements across parts.
    pub fn total_len(&self) -> usize {
        self.parts.iter().map(|p| p.len()).sum()
    }
}

/// One specific defect found while verifying a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// An element is not a valid non-zero member of the group.
    BadElement { part: usize, elem: Elem },
    /// The zero element appears in a part.
    ZeroIncluded { part: usize },
    /// An element appears more than once across all parts.
    Duplicate { elem: Elem },
    /// A non-zero element of the group is not covered by any part.
    Missing { elem: Elem },
    /// A part does not sum to zero.
    NonZeroSum { part: usize, sum: Elem },
    /// A part is empty.
    EmptyPart { part: usize },
    /// The multiset of part sizes differs from the expected one.
    SizeMismatch {
        expected: Vec<usize>,
        actual: Vec<usize>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadElement { part, elem } => {
                write!(f, "part {part}: element {elem} is not in the group")
            }
            Violation::ZeroIncluded { part } => {
                write!(f, "part {part}: contains the zero element")
            }
            Violation::Duplicate { elem } => write!(f, "element {elem} appears twice"),
            Violation::Missing { elem } => write!(f, "element {elem} is not covered"),
            Violation::NonZeroSum { part, sum } => {
                write!(f, "part {part}: sums to {sum}, not zero")
            }
            Violation::EmptyPart { part } => write!(f, "part {part}: empty"),
            Violation::SizeMismatch { expected, actual } => {
                write!(f, "sizes {actual:?} do not match expected {expected:?}")
            }
        }
    }
}

/// The outcome of verifying a candidate partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// Checks that `partition`'s parts are pairwise disjoint non-empty sets of
/// *non-zero* group elements, cover every non-zero element, and each sum
/// to zero; optionally also that the part sizes match `expected_sizes` as
/// a multiset.  All defects found are reported, not just the first.
pub fn verify_partition(
    spec: &GroupSpec,
    partition: &Partition,
    expected_sizes: Option<&[usize]>,
) -> VerifyReport {
    let mut violations = Vec::new();
    let zero = spec.zero();
    let mut seen: BTreeSet<&Elem> = BTreeSet::new();
    for (pi, part) in partition.parts.iter().enumerate() {
        if part.is_empty() {
            violations.push(Violation::EmptyPart { part: pi });
            continue;
        }
        let mut sum = spec.zero();
        for e in part {
            if !spec.contains(e) {
                violations.push(Violation::BadElement {
                    part: pi,
                    elem: e.clone(),
                });
                continue;
            }
            if *e == zero {
                violations.push(Violation::ZeroIncluded { part: pi });
            }
            if !seen.insert(e) {
                violations.push(Violation::Duplicate { elem: e.clone() });
            }
            sum = spec.add(&sum, e);
        }
        if sum != zero {
            violations.push(Violation::NonZeroSum { part: pi, sum });
        }
    }
    // Coverage: every non-zero element must occur (duplicates are already
    // reported above).
    if (seen.len() as u64) < spec.order().saturating_sub(1)
        || seen.contains(&zero)
    {
        for e in spec.nonzero_elements() {
            if !seen.contains(&e) {
                violations.push(Violation::Missing { elem: e });
                if violations.len() > 64 {
                    break; // keep reports bounded for wildly wrong inputs
                }
            }
        }
    }
    if let Some(expected) = expected_sizes {
        let mut exp: Vec<usize> = expected.to_vec();
        let mut act = partition.sizes();
        exp.sort_unstable();
        act.sort_unstable();
        if exp != act {
            violations.push(Violation::SizeMismatch {
                expected: exp,
                actual: act,
            });
        }
    }
    VerifyReport {
        ok: violations.is_empty(),
        violations,
    }
}

// ──────────────────────────────────────────────────────────────────────────
// Size-multiset normalization
// ──────────────────────────────────────────────────────────────────────────

/// Which small-size alphabet to normalize into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeFloor {
    /// All sizes `≥ 3`, normalized into sizes `{3, 4, 5}`.
    AtLeast3,
    /// All sizes `≥ 4`, normalized into sizes `{4, 5, 6, 7}`.
    AtLeast4,
}

impl SizeFloor {
    pub fn min_size(self) -> usize {
        match self {
            SizeFloor::AtLeast3 => 3,
            SizeFloor::AtLeast4 => 4,
        }
    }
}

/// The result of [`normalize_sizes`]: a refined size list plus, for each
/// original part, the indices of the normalized parts that merge back
/// into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeNormalization {
    pub normalized: Vec<usize>,
    pub recombination: Vec<Vec<usize>>,
}

impl SizeNormalization {
    /// Merges parts of a partition realized for the *normalized* sizes
    /// back into parts matching the original request.
    pub fn recombine(&self, parts: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
        self.recombination
            .iter()
            .map(|idxs| {
                idxs.iter()
                    .flat_map(|&i| parts[i].iter().cloned())
                    .collect()
            })
            .collect()
    }
}

/// Splits every requested size into a sum of sizes from a small alphabet
/// (`{3,4,5}` for floor 3, `{4,5,6,7}` for floor 4), deterministically,
/// recording which refined parts recombine into which original part.
/// Sizes below the floor are rejected.
pub fn normalize_sizes(
    sizes: &[usize],
    floor: SizeFloor,
) -> Result<SizeNormalization, PartitionError> {
    let min = floor.min_size();
    let cap = match floor {
        SizeFloor::AtLeast3 => 5,
        SizeFloor::AtLeast4 => 7,
    };
    let mut normalized = Vec::new();
    let mut recombination = Vec::with_capacity(sizes.len());
    for &m in sizes {
        if m < min {
            return Err(PartitionError::PreconditionViolated {
                reason: format!("size {m} is below the floor {min}"),
            });
        }
        let mut indices = Vec::new();
        let mut rest = m;
        while rest > cap {
            indices.push(normalized.len());
            normalized.push(min);
            rest -= min;
        }
        indices.push(normalized.len());
        normalized.push(rest);
        recombination.push(indices);
    }
    Ok(SizeNormalization {
        normalized,
        recombination,
    })
}

// ──────────────────────────────────────────────────────────────────────────
// Good six-sets
// ──────────────────────────────────────────────────────────────────────────

/// A *good six-set*: `{c, d, −c−d, −c, −d, c+d}` with all six members
/// distinct and non-zero.  Such a set splits both into three zero-sum
/// pairs and into two zero-sum triples, which is what makes it the basic
/// flexible building block of the constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodSix {
    pub c: Elem,
    pub d: Elem,
}

impl GoodSix {
    /// Validates the nine non-degeneracy conditions and builds the six-set.
    pub fn new(spec: &GroupSpec, c: Elem, d: Elem) -> Result<GoodSix, PartitionError> {
        let zero = spec.zero();
        let fail = |reason| Err(PartitionError::DegenerateSix { reason });
        if c == zero {
            return fail(SixDegeneracy::CZero);
        }
        if d == zero {
            return fail(SixDegeneracy::DZero);
        }
        if spec.add(&c, &d) == zero {
            return fail(SixDegeneracy::SumZero);
        }
        if c == d {
            return fail(SixDegeneracy::EqualGenerators);
        }
        if spec.add(&c, &c) == zero {
            return fail(SixDegeneracy::CInvolution);
        }
        if spec.add(&d, &d) == zero {
            return fail(SixDegeneracy::DInvolution);
        }
        let cd = spec.add(&c, &d);
        if spec.add(&cd, &cd) == zero {
            return fail(SixDegeneracy::SumInvolution);
        }
        if spec.add(&cd, &c) == zero {
            return fail(SixDegeneracy::TwoCPlusDZero);
        }
        if spec.add(&cd, &d) == zero {
            return fail(SixDegeneracy::CPlusTwoDZero);
        }
        Ok(GoodSix { c, d })
    }

    /// The six members, in the fixed order `c, d, −c−d, −c, −d, c+d`.
    pub fn elements(&self, spec: &GroupSpec) -> [Elem; 6] {
        let cd = spec.add(&self.c, &self.d);
        [
            self.c.clone(),
            self.d.clone(),
            spec.negate(&cd),
            spec.negate(&self.c),
            spec.negate(&self.d),
            cd,
        ]
    }

    /// The split into three zero-sum pairs.
    pub fn pairs(&self, spec: &GroupSpec) -> [[Elem; 2]; 3] {
        let [c, d, ncd, nc, nd, cd] = self.elements(spec);
        [[c, nc], [d, nd], [cd, ncd]]
    }

    /// The split into two zero-sum triples.
    pub fn triples(&self, spec: &GroupSpec) -> [[Elem; 3]; 2] {
        let [c, d, ncd, nc, nd, cd] = self.elements(spec);
        [[c, d, ncd], [nc, nd, cd]]
    }
}

/// How to break a good six-set into zero-sum parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SixSplit {
    /// Three parts of size 2.
    ThreePairs,
    /// Two parts of size 3.
    TwoTriples,
}

/// Builds the six-set on generators `c, d` and splits it the requested
/// way.  Degenerate generator pairs are rejected with the precise failed
/// condition.
pub fn split_good_six(
    spec: &GroupSpec,
    c: Elem,
    d: Elem,
    split: SixSplit,
) -> Result<Vec<Vec<Elem>>, PartitionError> {
    let six = GoodSix::new(spec, c, d)?;
    Ok(match split {
        SixSplit::ThreePairs => six.pairs(spec).into_iter().map(Vec::from).collect(),
        SixSplit::TwoTriples => six.triples(spec).into_iter().map(Vec::from).collect(),
    })
}

// ──────────────────────────────────────────────────────────────────────────
// Plain-text table format
// ──────────────────────────────────────────────────────────────────────────

/// One table in the plain-text format: a group's factor list, an optional
/// count triple `[#size-3, #size-4, #size-5]`, the parts as nested integer
/// lists, and an optional trailing `count*size` summary line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableBlock {
    pub factors: Vec<u16>,
    pub count_triple: Option<Vec<usize>>,
    pub parts: Vec<Vec<Elem>>,
    pub sizes_note: Option<Vec<(usize, usize)>>,
}

impl TableBlock {
    pub fn spec(&self) -> Result<GroupSpec, PartitionError> {
        GroupSpec::new(self.factors.clone()).map_err(|e| PartitionError::PreconditionViolated {
            reason: e.to_string(),
        })
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.parts.clone())
    }
}

/// Parses a sequence of [`TableBlock`]s from text.
///
/// The format is line-oriented and whitespace-tolerant: a flat bracketed
/// integer list opens a block (factor moduli), an optional second flat
/// list gives the size-count triple, a bracketed region of depth 3 holds
/// the parts (one per row), and a following line of the form
/// `... sizes: a*3 b*4 c*5` is attached as the summary.  Prose lines are
/// ignored.
pub fn parse_tables(text: &str) -> Result<Vec<TableBlock>, PartitionError> {
    // Tokenize into top-level bracket groups and prose lines, in order.
    enum Item {
        Group { depth: usize, values: Nested, line: usize },
        Note { counts: Vec<(usize, usize)> },
    }
    let mut items: Vec<Item> = Vec::new();
    let mut buf = String::new();
    let mut depth = 0usize;
    let mut max_depth = 0usize;
    let mut group_start_line = 0usize;
    for (ln, line) in text.lines().enumerate() {
        if depth == 0 {
            let trimmed = line.trim();
            if !trimmed.starts_with('[') {
                if trimmed.contains('*') && trimmed.to_ascii_lowercase().contains("sizes") {
                    let mut counts = Vec::new();
                    for tok in trimmed.split_whitespace() {
                        if let Some((a, b)) = tok.split_once('*') {
                            if let (Ok(count), Ok(size)) = (a.parse(), b.parse()) {
                                counts.push((count, size));
                            }
                        }
                    }
                    if !counts.is_empty() {
                        items.push(Item::Note { counts });
                    }
                }
                continue;
            }
            group_start_line = ln + 1;
        }
        for ch in line.chars() {
            match ch {
                '[' => {
                    depth += 1;
                    max_depth = max_depth.max(depth);
                    buf.push(ch);
                }
                ']' => {
                    if depth == 0 {
                        return Err(PartitionError::ParseError {
                            line: ln + 1,
                            reason: "unbalanced ']'".to_string(),
                        });
                    }
                    depth -= 1;
                    buf.push(ch);
                    if depth == 0 {
                        let values = parse_nested(&buf, group_start_line)?;
                        items.push(Item::Group {
                            depth: max_depth,
                            values,
                            line: group_start_line,
                        });
                        buf.clear();
                        max_depth = 0;
                    }
                }
                _ => {
                    if depth > 0 {
                        buf.push(ch);
                    }
                }
            }
        }
        if depth > 0 {
            buf.push(' ');
        }
    }
    if depth != 0 {
        return Err(PartitionError::ParseError {
            line: text.lines().count(),
            reason: "unclosed bracket group".to_string(),
        });
    }

    // Assemble items into blocks.
    let mut blocks = Vec::new();
    let mut iter = items.into_iter().peekable();
    while let Some(item) = iter.next() {
        let (factors, line) = match item {
            Item::Note { .. } => continue, // stray note, ignore
            Item::Group { depth: 1, values, line } => (flat_as_u16(&values, line)?, line),
            Item::Group { line, .. } => {
                return Err(PartitionError::ParseError {
                    line,
                    reason: "expected a flat factor list to open a table".to_string(),
                })
            }
        };
        let mut count_triple = None;
        let parts_group = match iter.next() {
            Some(Item::Group { depth: 1, values, line }) => {
                count_triple = Some(flat_as_usize(&values, line)?);
                match iter.next() {
                    Some(Item::Group { depth: d, values, line }) if d >= 2 => (values, line),
                    _ => {
                        return Err(PartitionError::ParseError {
                            line,
                            reason: "expected a parts region after the count triple".to_string(),
                        })
                    }
                }
            }
            Some(Item::Group { depth: d, values, line }) if d >= 2 => (values, line),
            _ => {
                return Err(PartitionError::ParseError {
                    line,
                    reason: "expected parts after the factor list".to_string(),
                })
            }
        };
        let parts = nested_as_parts(&parts_group.0, parts_group.1)?;
        let sizes_note = match iter.peek() {
            Some(Item::Note { .. }) => match iter.next() {
                Some(Item::Note { counts }) => Some(counts),
                _ => unreachable!(),
            },
            _ => None,
        };
        blocks.push(TableBlock {
            factors,
            count_triple,
            parts,
            sizes_note,
        });
    }
    Ok(blocks)
}

/// Renders one block in the same plain-text format parsed by
/// [`parse_tables`].
pub fn format_table(spec: &GroupSpec, partition: &Partition) -> String {
    let mut out = String::new();
    out.push('[');
    for (i, n) in spec.factors().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&n.to_string());
    }
    out.push_str("]\n");
    let sizes = partition.sizes();
    let small = sizes.iter().all(|&s| (3..=5).contains(&s));
    if small {
        let count = |k: usize| sizes.iter().filter(|&&s| s == k).count();
        out.push_str(&format!("[{}, {}, {}]\n", count(3), count(4), count(5)));
    }
    out.push_str("[\n");
    for part in &partition.parts {
        out.push('[');
        for (i, e) in part.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push('[');
            for (j, c) in e.coords().iter().enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                out.push_str(&c.to_string());
            }
            out.push(']');
        }
        out.push_str("],\n");
    }
    out.push_str("]\n");
    // Summary line: count*size for each size, ascending; the {3,4,5}
    // alphabet always lists all three.
    let mut distinct: Vec<usize> = if small {
        vec![3, 4, 5]
    } else {
        let set: BTreeSet<usize> = sizes.iter().copied().collect();
        set.into_iter().collect()
    };
    distinct.sort_unstable();
    out.push_str("A partition for subsets of sizes: ");
    for s in distinct {
        let count = sizes.iter().filter(|&&x| x == s).count();
        out.push_str(&format!(" {count}*{s}"));
    }
    out.push('\n');
    out
}

// Minimal nested integer-list parsing support.

enum Nested {
    Int(i64),
    List(Vec<Nested>),
}

fn parse_nested(s: &str, line: usize) -> Result<Nested, PartitionError> {
    let mut chars = s.chars().peekable();
    let node = parse_nested_inner(&mut chars, line)?;
    Ok(node)
}

fn parse_nested_inner(
    chars: &mut core::iter::Peekable<core::str::Chars<'_>>,
    line: usize,
) -> Result<Nested, PartitionError> {
    // Skip whitespace and separators.
    while matches!(chars.peek(), Some(c) if c.is_whitespace() || *c == ',') {
        chars.next();
    }
    match chars.peek() {
        Some('[') => {
            chars.next();
            let mut items = Vec::new();
            loop {
                while matches!(chars.peek(), Some(c) if c.is_whitespace() || *c == ',') {
                    chars.next();
                }
                match chars.peek() {
                    Some(']') => {
                        chars.next();
                        return Ok(Nested::List(items));
                    }
                    Some(_) => items.push(parse_nested_inner(chars, line)?),
                    None => {
                        return Err(PartitionError::ParseError {
                            line,
                            reason: "unterminated list".to_string(),
                        })
                    }
                }
            }
        }
        Some(c) if c.is_ascii_digit() || *c == '-' => {
            let mut num = String::new();
            if *c == '-' {
                num.push('-');
                chars.next();
            }
            while matches!(chars.peek(), Some(d) if d.is_ascii_digit()) {
                num.push(chars.next().unwrap());
            }
            num.parse::<i64>()
                .map(Nested::Int)
                .map_err(|_| PartitionError::ParseError {
                    line,
                    reason: format!("bad integer '{num}'"),
                })
        }
        other => Err(PartitionError::ParseError {
            line,
            reason: format!("unexpected character {other:?}"),
        }),
    }
}

fn flat_as_u16(n: &Nested, line: usize) -> Result<Vec<u16>, PartitionError> {
    match n {
        Nested::List(items) => items
            .iter()
            .map(|x| match x {
                Nested::Int(v) if *v >= 0 && *v <= u16::MAX as i64 => Ok(*v as u16),
                _ => Err(PartitionError::ParseError {
                    line,
                    reason: "expected a flat list of small non-negative integers".to_string(),
                }),
            })
            .collect(),
        Nested::Int(_) => Err(PartitionError::ParseError {
            line,
            reason: "expected a list".to_string(),
        }),
    }
}

fn flat_as_usize(n: &Nested, line: usize) -> Result<Vec<usize>, PartitionError> {
    flat_as_u16(n, line).map(|v| v.into_iter().map(|x| x as usize).collect())
}

fn nested_as_parts(n: &Nested, line: usize) -> Result<Vec<Vec<Elem>>, PartitionError> {
    let rows = match n {
        Nested::List(rows) => rows,
        Nested::Int(_) => {
            return Err(PartitionError::ParseError {
                line,
                reason: "expected a list of parts".to_string(),
            })
        }
    };
    rows.iter()
        .map(|row| match row {
            Nested::List(elems) => elems
                .iter()
                .map(|e| flat_as_u16(e, line).map(Elem))
                .collect::<Result<Vec<Elem>, _>>(),
            Nested::Int(_) => Err(PartitionError::ParseError {
                line,
                reason: "expected each part to be a list of elements".to_string(),
            }),
        })
        .collect()
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

    fn e(coords: &[u16]) -> Elem {
        Elem::from_slice(coords)
    }

    #[test]
    fn verify_accepts_a_correct_partition() {
        // Z5 \ {0} = {1,4} ∪ {2,3}.
        let spec = g("Z5");
        let p = Partition::new(vec![vec![e(&[1]), e(&[4])], vec![e(&[2]), e(&[3])]]);
        let report = verify_partition(&spec, &p, Some(&[2, 2]));
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn verify_reports_each_kind_of_defect() {
        let spec = g("Z5");
        // Zero included, duplicate, missing, bad sum, bad element.
        let p = Partition::new(vec![
            vec![e(&[0]), e(&[1]), e(&[4])],
            vec![e(&[1]), e(&[2])],
            vec![e(&[7])],
        ]);
        let report = verify_partition(&spec, &p, Some(&[2, 2]));
        assert!(!report.ok);
        let has = |f: fn(&Violation) -> bool| report.violations.iter().any(f);
        assert!(has(|v| matches!(v, Violation::ZeroIncluded { .. })));
        assert!(has(|v| matches!(v, Violation::Duplicate { .. })));
        assert!(has(|v| matches!(v, Violation::Missing { .. })));
        assert!(has(|v| matches!(v, Violation::NonZeroSum { .. })));
        assert!(has(|v| matches!(v, Violation::BadElement { .. })));
        assert!(has(|v| matches!(v, Violation::SizeMismatch { .. })));
    }

    #[test]
    fn normalization_floor3_uses_3_4_5() {
        let n = normalize_sizes(&[3, 6, 7, 11, 23], SizeFloor::AtLeast3).unwrap();
        assert!(n.normalized.iter().all(|s| (3..=5).contains(s)));
        // Each original size is the sum of its refined group.
        for (orig, idxs) in [3usize, 6, 7, 11, 23].iter().zip(&n.recombination) {
            let total: usize = idxs.iter().map(|&i| n.normalized[i]).sum();
            assert_eq!(total, *orig);
        }
        // Refined indices partition 0..len exactly.
        let mut all: Vec<usize> = n.recombination.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..n.normalized.len()).collect::<Vec<_>>());
        assert!(normalize_sizes(&[2, 3], SizeFloor::AtLeast3).is_err());
    }

    #[test]
    fn normalization_floor4_uses_4_to_7() {
        let n = normalize_sizes(&[4, 7, 8, 9, 30], SizeFloor::AtLeast4).unwrap();
        assert!(n.normalized.iter().all(|s| (4..=7).contains(s)));
        for (orig, idxs) in [4usize, 7, 8, 9, 30].iter().zip(&n.recombination) {
            let total: usize = idxs.iter().map(|&i| n.normalized[i]).sum();
            assert_eq!(total, *orig);
        }
        assert!(normalize_sizes(&[3], SizeFloor::AtLeast4).is_err());
    }

    #[test]
    fn recombine_merges_parts() {
        let n = normalize_sizes(&[6], SizeFloor::AtLeast3).unwrap();
        assert_eq!(n.normalized, vec![3, 3]);
        let merged = n.recombine(&[vec![e(&[1]), e(&[2]), e(&[3])], vec![e(&[4]), e(&[5]), e(&[6])]]);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].len(), 6);
    }

    #[test]
    fn good_six_splits_both_ways() {
        let spec = g("Z9");
        let six = GoodSix::new(&spec, e(&[1]), e(&[3])).unwrap();
        let members = six.elements(&spec);
        assert_eq!(members.len(), 6);
        for pair in six.pairs(&spec) {
            assert_eq!(spec.sum_set(pair.iter()), spec.zero());
        }
        for triple in six.triples(&spec) {
            assert_eq!(spec.sum_set(triple.iter()), spec.zero());
        }
        let parts = split_good_six(&spec, e(&[1]), e(&[3]), SixSplit::ThreePairs).unwrap();
        assert_eq!(parts.len(), 3);
        let parts = split_good_six(&spec, e(&[1]), e(&[3]), SixSplit::TwoTriples).unwrap();
        assert_eq!(parts.len(), 2);
    }

    #[test]
    fn degenerate_sixes_name_their_defect() {
        let spec = g("Z12");
        let cases: &[(u16, u16, SixDegeneracy)] = &[
            (0, 1, SixDegeneracy::CZero),
            (1, 0, SixDegeneracy::DZero),
            (1, 11, SixDegeneracy::SumZero),
            (1, 1, SixDegeneracy::EqualGenerators),
            (6, 1, SixDegeneracy::CInvolution),
            (1, 6, SixDegeneracy::DInvolution),
            (1, 5, SixDegeneracy::SumInvolution),
            (1, 10, SixDegeneracy::TwoCPlusDZero),
            (2, 5, SixDegeneracy::CPlusTwoDZero),
        ];
        for &(c, d, expected) in cases {
            match GoodSix::new(&spec, e(&[c]), e(&[d])) {
                Err(PartitionError::DegenerateSix { reason }) => {
                    assert_eq!(reason, expected, "({c},{d})")
                }
                other => panic!("({c},{d}): expected degeneracy, got {other:?}"),
            }
        }
        assert!(GoodSix::new(&spec, e(&[1]), e(&[2])).is_ok());
    }

    #[test]
    fn table_round_trip() {
        let spec = g("Z2xZ2xZ2xZ3");
        let text = "\
[2, 2, 2, 3]
[1, 0, 1]
[
[[0, 0, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1]],
[[0, 1, 0, 0], [0, 1, 0, 1], [0, 0, 0, 2], [1, 0, 0, 1], [1, 0, 0, 0]],
]
A partition for subsets of sizes:  1*3  0*4  1*5
";
        let blocks = parse_tables(text).unwrap();
        assert_eq!(blocks.len(), 1);
        let block = &blocks[0];
        assert_eq!(block.factors, vec![2, 2, 2, 3]);
        assert_eq!(block.count_triple, Some(vec![1, 0, 1]));
        assert_eq!(block.parts.len(), 2);
        assert_eq!(block.parts[0].len(), 3);
        assert_eq!(block.parts[1].len(), 5);
        assert_eq!(block.sizes_note, Some(vec![(1, 3), (0, 4), (1, 5)]));
        assert_eq!(block.spec().unwrap(), spec);

        // format → parse is stable.
        let rendered = format_table(&spec, &block.partition());
        let reparsed = parse_tables(&rendered).unwrap();
        assert_eq!(reparsed.len(), 1);
        assert_eq!(reparsed[0].parts, block.parts);
        assert_eq!(reparsed[0].factors, block.factors);
    }

    #[test]
    fn tables_with_prose_between_blocks() {
        let text = "\
Some leading prose.

[5]
[0, 1, 0]
[
[[1], [2], [3], [4]],
]
A partition for subsets of sizes:  0*3  1*4  0*5

More prose between tables.

[7]
[2, 0, 0]
[
[[1], [2], [4]],
[[3], [5], [6]],
]
A partition for subsets of sizes:  2*3  0*4  0*5
";
        let blocks = parse_tables(text).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].factors, vec![5]);
        assert_eq!(blocks[1].factors, vec![7]);
        assert_eq!(blocks[1].parts.len(), 2);
    }
}
