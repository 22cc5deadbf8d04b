//! Game graphs, vertex sets, PGSolver `.gm` I/O and preprocessing.

use std::fmt;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// One of the two players. Even wins a play iff its highest recurring priority is even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    /// The player whose parity matches `priority`.
    pub fn of_priority(priority: u32) -> Player {
        if priority % 2 == 0 {
            Player::Even
        } else {
            Player::Odd
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// PGSolver owner / winner code: 0 for Even, 1 for Odd.
    pub fn index(self) -> usize {
        match self {
            Player::Even => 0,
            Player::Odd => 1,
        }
    }

    pub fn from_index(index: u64) -> Option<Player> {
        match index {
            0 => Some(Player::Even),
            1 => Some(Player::Odd),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Even => f.write_str("even"),
            Player::Odd => f.write_str("odd"),
        }
    }
}

/// A dense set of vertex indices `0..capacity`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(capacity: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(capacity),
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn from_vertices(capacity: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = VertexSet::empty(capacity);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    /// Size of the index universe, not the number of members.
    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    /// Panics if `v` is outside the universe.
    pub fn insert(&mut self, v: usize) -> bool {
        let fresh = !self.bits.contains(v);
        self.bits.insert(v);
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let present = self.bits.contains(v);
        self.bits.set(v, false);
        present
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("owner and priority tables have different lengths ({owners} vs {priorities})")]
    LengthMismatch { owners: usize, priorities: usize },
    #[error("vertex {vertex} has no successors")]
    Sink { vertex: usize },
    #[error("vertex {vertex} has successor {target} outside 0..{n}")]
    SuccessorOutOfRange { vertex: usize, target: usize, n: usize },
    #[error("name of vertex {vertex} contains a quote or line break")]
    BadName { vertex: usize },
    #[error("vertex {vertex} has priority 0, which requires priority compression")]
    ZeroPriority { vertex: usize },
}

/// A parity game graph with forward and backward adjacency in CSR form.
///
/// Successor lists are sorted and free of duplicates. Self-loops and priority 0 are
/// representable so that raw input can be held before [`normalize`].
#[derive(Clone)]
pub struct Arena {
    owner: Vec<Player>,
    priority: Vec<u32>,
    succ_start: Vec<usize>,
    succ: Vec<usize>,
    pred_start: Vec<usize>,
    pred: Vec<usize>,
    names: Vec<Option<String>>,
    source_ids: Vec<u64>,
    max_priority: u32,
}

impl Arena {
    pub fn new(
        owner: Vec<Player>,
        priority: Vec<u32>,
        successors: Vec<Vec<usize>>,
    ) -> Result<Arena, ArenaError> {
        let n = owner.len();
        Arena::with_names(owner, priority, successors, vec![None; n])
    }

    pub fn with_names(
        owner: Vec<Player>,
        priority: Vec<u32>,
        mut successors: Vec<Vec<usize>>,
        names: Vec<Option<String>>,
    ) -> Result<Arena, ArenaError> {
        let n = owner.len();
        if priority.len() != n || successors.len() != n || names.len() != n {
            return Err(ArenaError::LengthMismatch {
                owners: n,
                priorities: priority.len(),
            });
        }
        for (v, name) in names.iter().enumerate() {
            if let Some(name) = name {
                if name.contains(['"', '\n', '\r']) {
                    return Err(ArenaError::BadName { vertex: v });
                }
            }
        }
        let mut succ_start = Vec::with_capacity(n + 1);
        let mut succ = Vec::new();
        let mut in_degree = vec![0usize; n];
        succ_start.push(0);
        for (v, list) in successors.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() {
                return Err(ArenaError::Sink { vertex: v });
            }
            for &t in list.iter() {
                if t >= n {
                    return Err(ArenaError::SuccessorOutOfRange { vertex: v, target: t, n });
                }
                in_degree[t] += 1;
            }
            succ.extend_from_slice(list);
            succ_start.push(succ.len());
        }
        let mut pred_start = Vec::with_capacity(n + 1);
        pred_start.push(0);
        for d in &in_degree {
            pred_start.push(pred_start.last().unwrap() + d);
        }
        let mut fill = pred_start[..n].to_vec();
        let mut pred = vec![0usize; succ.len()];
        for v in 0..n {
            for &t in &succ[succ_start[v]..succ_start[v + 1]] {
                pred[fill[t]] = v;
                fill[t] += 1;
            }
        }
        let max_priority = priority.iter().copied().max().unwrap_or(0);
        Ok(Arena {
            owner,
            priority,
            succ_start,
            succ,
            pred_start,
            pred,
            names,
            source_ids: (0..n as u64).collect(),
            max_priority,
        })
    }

    /// The arena with no vertices.
    pub fn empty() -> Arena {
        Arena::new(Vec::new(), Vec::new(), Vec::new()).expect("empty arena is valid")
    }

    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.len()
    }

    /// Largest priority present, 0 for the empty arena.
    pub fn max_priority(&self) -> u32 {
        self.max_priority
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn priority(&self, v: usize) -> u32 {
        self.priority[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owner
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priority
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[self.succ_start[v]..self.succ_start[v + 1]]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[self.pred_start[v]..self.pred_start[v + 1]]
    }

    pub fn name(&self, v: usize) -> Option<&str> {
        self.names[v].as_deref()
    }

    /// Identifier the vertex carried in the file it was parsed from.
    pub fn source_id(&self, v: usize) -> u64 {
        self.source_ids[v]
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.num_vertices())
    }

    pub fn successor_lists(&self) -> Vec<Vec<usize>> {
        (0..self.num_vertices())
            .map(|v| self.successors(v).to_vec())
            .collect()
    }

    pub fn has_self_loops(&self) -> bool {
        (0..self.num_vertices()).any(|v| self.successors(v).binary_search(&v).is_ok())
    }

    /// True iff the arena satisfies the solvers' model: no self-loops, priorities >= 1.
    pub fn is_normalized(&self) -> bool {
        !self.has_self_loops() && self.priority.iter().all(|&p| p >= 1)
    }

    /// True iff priorities already form the minimal parity-preserving range.
    pub fn is_compressed(&self) -> bool {
        let table = compression_table(&self.priority);
        table.iter().all(|(from, to)| from == to)
    }
}

/// Structural equality: owners, priorities, edges and names. Source ids are provenance
/// and do not take part.
impl PartialEq for Arena {
    fn eq(&self, other: &Arena) -> bool {
        self.owner == other.owner
            && self.priority == other.priority
            && self.succ_start == other.succ_start
            && self.succ == other.succ
            && self.names == other.names
    }
}

impl Eq for Arena {}

impl fmt::Debug for Arena {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Arena")
            .field("n", &self.num_vertices())
            .field("owner", &self.owner)
            .field("priority", &self.priority)
            .field("succ", &self.successor_lists())
            .finish()
    }
}

/// True iff every vertex of `g` has a successor inside `g`.
pub fn validate_subgame(arena: &Arena, g: &VertexSet) -> bool {
    g.iter()
        .all(|v| arena.successors(v).iter().any(|&t| g.contains(t)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based; 0 when the error is not tied to a line.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("input is not valid UTF-8")]
    InvalidUtf8,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("malformed vertex line: {0}")]
    Malformed(String),
    #[error("duplicate vertex id {0}")]
    DuplicateId(u64),
    #[error("vertex id {id} exceeds header bound {max}")]
    IdAboveHeader { id: u64, max: u64 },
    #[error("successor {succ} of vertex {id} is not a declared vertex")]
    UnknownSuccessor { id: u64, succ: u64 },
    #[error("vertex {0} has an empty successor list")]
    EmptySuccessors(u64),
}

struct RawVertex {
    id: u64,
    priority: u32,
    owner: Player,
    succ: Vec<u64>,
    name: Option<String>,
    line: usize,
}

fn malformed(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        kind: ParseErrorKind::Malformed(msg.into()),
    }
}

fn parse_vertex_line(body: &str, line: usize) -> Result<RawVertex, ParseError> {
    let (fields, name) = match body.find('"') {
        Some(open) => {
            let rest = &body[open + 1..];
            let close = rest
                .find('"')
                .ok_or_else(|| malformed(line, "unterminated vertex name"))?;
            if !rest[close + 1..].trim().is_empty() {
                return Err(malformed(line, "text after vertex name"));
            }
            (&body[..open], Some(rest[..close].to_string()))
        }
        None => (body, None),
    };
    let mut tokens = fields.split_whitespace();
    let mut number = |what: &str| -> Result<u64, ParseError> {
        let tok = tokens
            .next()
            .ok_or_else(|| malformed(line, format!("missing {what}")))?;
        tok.parse::<u64>()
            .map_err(|_| malformed(line, format!("bad {what} `{tok}`")))
    };
    let id = number("vertex id")?;
    let priority = number("priority")?;
    let priority = u32::try_from(priority).map_err(|_| malformed(line, "priority too large"))?;
    let owner = number("owner")?;
    let owner =
        Player::from_index(owner).ok_or_else(|| malformed(line, format!("owner {owner} is not 0 or 1")))?;
    let succ_text: String = tokens.collect::<Vec<_>>().concat();
    if succ_text.is_empty() {
        return Err(ParseError {
            line,
            kind: ParseErrorKind::EmptySuccessors(id),
        });
    }
    let succ = succ_text
        .split(',')
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| malformed(line, format!("bad successor `{tok}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RawVertex {
        id,
        priority,
        owner,
        succ,
        name,
        line,
    })
}

/// Parses the PGSolver game format. Vertices are re-indexed densely in id order; raw
/// priorities (including 0) and self-loops are kept for [`normalize`] to deal with.
pub fn parse_pg(input: &[u8]) -> Result<Arena, ParseError> {
    let text = std::str::from_utf8(input).map_err(|_| ParseError {
        line: 0,
        kind: ParseErrorKind::InvalidUtf8,
    })?;
    let mut header: Option<u64> = None;
    let mut seen_statement = false;
    let mut raw = Vec::new();
    for (idx, line_text) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = line_text.trim();
        if trimmed.is_empty() {
            continue;
        }
        let body = trimmed
            .strip_suffix(';')
            .ok_or_else(|| malformed(line, "missing terminating `;`"))?;
        if let Some(rest) = body.strip_prefix("parity") {
            if seen_statement || header.is_some() {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::BadHeader("header must be the first statement".into()),
                });
            }
            let max = rest.trim().parse::<u64>().map_err(|_| ParseError {
                line,
                kind: ParseErrorKind::BadHeader(format!("bad bound `{}`", rest.trim())),
            })?;
            header = Some(max);
            seen_statement = true;
            continue;
        }
        seen_statement = true;
        // `start <id>;` appears in files written by PGSolver and Oink; it has no meaning here.
        if body.starts_with("start") {
            continue;
        }
        raw.push(parse_vertex_line(body, line)?);
    }

    raw.sort_by_key(|r| r.id);
    for pair in raw.windows(2) {
        if pair[0].id == pair[1].id {
            return Err(ParseError {
                line: pair[0].line.max(pair[1].line),
                kind: ParseErrorKind::DuplicateId(pair[1].id),
            });
        }
    }
    if let Some(max) = header {
        if let Some(r) = raw.iter().find(|r| r.id > max) {
            return Err(ParseError {
                line: r.line,
                kind: ParseErrorKind::IdAboveHeader { id: r.id, max },
            });
        }
    }

    let ids: Vec<u64> = raw.iter().map(|r| r.id).collect();
    let mut owner = Vec::with_capacity(raw.len());
    let mut priority = Vec::with_capacity(raw.len());
    let mut successors = Vec::with_capacity(raw.len());
    let mut names = Vec::with_capacity(raw.len());
    for r in raw {
        let mut list = Vec::with_capacity(r.succ.len());
        for s in &r.succ {
            let target = ids.binary_search(s).map_err(|_| ParseError {
                line: r.line,
                kind: ParseErrorKind::UnknownSuccessor { id: r.id, succ: *s },
            })?;
            list.push(target);
        }
        owner.push(r.owner);
        priority.push(r.priority);
        successors.push(list);
        names.push(r.name);
    }
    let mut arena = Arena::with_names(owner, priority, successors, names).map_err(|e| {
        malformed(0, e.to_string())
    })?;
    arena.source_ids = ids;
    Ok(arena)
}

/// Canonical PGSolver text: `parity <n-1>;` header, one line per vertex in index order.
pub fn write_pg(arena: &Arena) -> String {
    let n = arena.num_vertices();
    let mut out = String::new();
    writeln!(out, "parity {};", n.saturating_sub(1)).unwrap();
    for v in 0..n {
        write!(out, "{} {} {} ", v, arena.priority(v), arena.owner(v).index()).unwrap();
        for (i, t) in arena.successors(v).iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{t}").unwrap();
        }
        if let Some(name) = arena.name(v) {
            write!(out, " \"{name}\"").unwrap();
        }
        out.push_str(";\n");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizeOptions {
    pub compress_priorities: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            compress_priorities: true,
        }
    }
}

/// What [`normalize`] did, so results on the processed arena can be mapped back.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PreprocessReport {
    /// `vertex_map[v]` is the processed index of original vertex `v`.
    pub vertex_map: Vec<usize>,
    /// `(aux, origin)`: processed index of each inserted vertex and the original vertex
    /// whose self-loop it breaks.
    pub auxiliary: Vec<(usize, usize)>,
    /// `(raw, compressed)` for every priority that changed.
    pub priority_remap: Vec<(u32, u32)>,
}

impl PreprocessReport {
    pub fn is_identity(&self) -> bool {
        self.auxiliary.is_empty()
            && self.priority_remap.is_empty()
            && self.vertex_map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Original vertex a processed vertex stands for (an auxiliary maps to its origin).
    pub fn original_of(&self, processed: usize) -> usize {
        if processed < self.vertex_map.len() && self.vertex_map[processed] == processed {
            return processed;
        }
        if let Some(&(_, origin)) = self.auxiliary.iter().find(|&&(aux, _)| aux == processed) {
            return origin;
        }
        self.vertex_map
            .iter()
            .position(|&p| p == processed)
            .expect("processed vertex has no origin")
    }
}

/// Sorted `(raw, compressed)` pairs: order-preserving, parity-preserving, onto the
/// smallest possible range starting at 1 or 2.
fn compression_table(priorities: &[u32]) -> Vec<(u32, u32)> {
    let mut distinct: Vec<u32> = priorities.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut table = Vec::with_capacity(distinct.len());
    let mut current: Option<u32> = None;
    for p in distinct {
        let value = match current {
            None => {
                if p % 2 == 1 {
                    1
                } else {
                    2
                }
            }
            Some(c) if c % 2 == p % 2 => c,
            Some(c) => c + 1,
        };
        current = Some(value);
        table.push((p, value));
    }
    table
}

/// Breaks self-loops with a two-cycle gadget and compresses priorities.
///
/// A self-loop `v -> v` becomes `v -> v'`, `v' -> v` where `v'` is appended after the
/// original vertices, belongs to the opponent of `v`'s owner and copies `v`'s priority.
pub fn normalize(arena: &Arena) -> Result<(Arena, PreprocessReport), ArenaError> {
    normalize_with(arena, NormalizeOptions::default())
}

pub fn normalize_with(
    arena: &Arena,
    options: NormalizeOptions,
) -> Result<(Arena, PreprocessReport), ArenaError> {
    let n = arena.num_vertices();
    let mut report = PreprocessReport {
        vertex_map: (0..n).collect(),
        ..PreprocessReport::default()
    };

    let mut priority = arena.priority.clone();
    if options.compress_priorities {
        let table = compression_table(&priority);
        for p in priority.iter_mut() {
            let i = table.binary_search_by_key(p, |&(raw, _)| raw).unwrap();
            *p = table[i].1;
        }
        report.priority_remap = table.into_iter().filter(|(a, b)| a != b).collect();
    } else if let Some(v) = priority.iter().position(|&p| p == 0) {
        return Err(ArenaError::ZeroPriority { vertex: v });
    }

    let mut owner = arena.owner.clone();
    let mut names = arena.names.clone();
    let mut successors = arena.successor_lists();
    for v in 0..n {
        if let Ok(pos) = successors[v].binary_search(&v) {
            let aux = owner.len();
            successors[v][pos] = aux;
            successors.push(vec![v]);
            owner.push(arena.owner[v].opponent());
            priority.push(priority[v]);
            names.push(None);
            report.auxiliary.push((aux, v));
        }
    }
    let mut out = Arena::with_names(owner, priority, successors, names)?;
    out.source_ids = arena.source_ids.clone();
    out.source_ids
        .extend(report.auxiliary.iter().map(|&(_, v)| arena.source_ids[v]));
    Ok((out, report))
}
