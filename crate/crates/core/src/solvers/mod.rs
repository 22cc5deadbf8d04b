//! Zielonka's recursive algorithm and its two quasipolynomial variants.
//!
//! All three share one [`Run`] context: subgames are masks over the root arena, the
//! attractor scratch is reused, and statistics are threaded through the recursion.
//! Recursion goes through [`stacker`], so deep priority chains grow the stack on demand.

mod bound;
mod liverpool;
mod warsaw;
mod zielonka;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::arena::{validate_subgame, Arena, Player, VertexSet};
use crate::attractor::AttractorScratch;
use crate::solution::{Solution, Strategy};

pub use bound::{call_bound, check_call_bound, effective_bound, QuasiVariant};
pub use num_bigint::BigUint;
pub use liverpool::LiverpoolSolver;
pub use warsaw::WarsawSolver;

const RED_ZONE: usize = 128 * 1024;
const STACK_CHUNK: usize = 8 * 1024 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Zielonka,
    Liverpool,
    Warsaw,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Zielonka, Algorithm::Liverpool, Algorithm::Warsaw];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Zielonka => "zielonka",
            Algorithm::Liverpool => "liverpool",
            Algorithm::Warsaw => "warsaw",
        }
    }

    /// Which analytical call bound applies, if any.
    pub fn quasi_variant(self) -> Option<QuasiVariant> {
        match self {
            Algorithm::Zielonka => None,
            Algorithm::Liverpool => Some(QuasiVariant::Liverpool),
            Algorithm::Warsaw => Some(QuasiVariant::Warsaw),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "zielonka" | "zlk" => Ok(Algorithm::Zielonka),
            "liverpool" => Ok(Algorithm::Liverpool),
            "warsaw" => Ok(Algorithm::Warsaw),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// Optional shortcuts O1 to O6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Optimisation {
    /// Warsaw: return after the repeat loop when `|H| <= p_opp / 2`.
    O1,
    /// Liverpool: return `G1` when `|G| <= p_opp / 2`.
    O2,
    /// Both: start from `2^(floor(log n) + 1) - 1` instead of `n`.
    O3,
    /// Warsaw: skip the full-precision call when the last repeat call never truncated.
    O4,
    /// Warsaw and Zielonka: stop loops once the opponent region is attractor-closed.
    O5,
    /// Liverpool: skip the third call when `Attr_opp(W, G1) = W`.
    O6,
}

impl Optimisation {
    pub const ALL: [Optimisation; 6] = [
        Optimisation::O1,
        Optimisation::O2,
        Optimisation::O3,
        Optimisation::O4,
        Optimisation::O5,
        Optimisation::O6,
    ];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct OptFlags(u8);

impl OptFlags {
    pub const NONE: OptFlags = OptFlags(0);

    pub fn contains(self, opt: Optimisation) -> bool {
        self.0 & opt.bit() != 0
    }

    pub fn with(self, opt: Optimisation) -> OptFlags {
        OptFlags(self.0 | opt.bit())
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: OptFlags) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Optimisation> {
        Optimisation::ALL.into_iter().filter(move |o| self.contains(*o))
    }

    /// Every optimisation the algorithm understands.
    pub fn applicable(algorithm: Algorithm) -> OptFlags {
        use Optimisation::*;
        let list: &[Optimisation] = match algorithm {
            Algorithm::Zielonka => &[O5],
            Algorithm::Liverpool => &[O2, O3, O6],
            Algorithm::Warsaw => &[O1, O3, O4, O5],
        };
        list.iter().fold(OptFlags::NONE, |acc, &o| acc.with(o))
    }

    /// All subsets of the applicable optimisations.
    pub fn subsets(algorithm: Algorithm) -> Vec<OptFlags> {
        let all: Vec<Optimisation> = OptFlags::applicable(algorithm).iter().collect();
        (0u32..1 << all.len())
            .map(|mask| {
                all.iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .fold(OptFlags::NONE, |acc, (_, &o)| acc.with(o))
            })
            .collect()
    }
}

impl fmt::Display for OptFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("none");
        }
        let names: Vec<String> = self.iter().map(|o| format!("O{}", o.number())).collect();
        f.write_str(&names.join("+"))
    }
}

impl FromStr for OptFlags {
    type Err = String;

    /// Accepts `none`, `all`, or a list such as `1,3,5`, `O1+O4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s.eq_ignore_ascii_case("none") {
            return Ok(OptFlags::NONE);
        }
        if s.eq_ignore_ascii_case("all") {
            return Ok(OptFlags(0b11_1111));
        }
        s.split([',', '+'])
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .try_fold(OptFlags::NONE, |acc, tok| {
                let digits = tok.trim_start_matches(['O', 'o']);
                match digits.parse::<u8>() {
                    Ok(k @ 1..=6) => Ok(acc.with(Optimisation::ALL[k as usize - 1])),
                    _ => Err(format!("unknown optimisation `{tok}`")),
                }
            })
    }
}

/// Initial precision of the root call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecisionMode {
    ExactN,
    /// `2^(floor(log n) + 1) - 1`.
    Padded,
}

impl PrecisionMode {
    pub fn initial(self, n: usize) -> u64 {
        let n = n.max(1) as u64;
        match self {
            PrecisionMode::ExactN => n,
            PrecisionMode::Padded => (1u64 << (floor_log2(n) + 1)) - 1,
        }
    }
}

pub(crate) fn floor_log2(p: u64) -> u32 {
    debug_assert!(p >= 1);
    63 - p.leading_zeros()
}

/// Precision parameters: dominions of `even`'s / `odd`'s size caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    pub even: u64,
    pub odd: u64,
}

impl Precision {
    pub fn new(even: u64, odd: u64) -> Precision {
        Precision { even, odd }
    }

    pub fn uniform(p: u64) -> Precision {
        Precision { even: p, odd: p }
    }

    pub fn of(self, player: Player) -> u64 {
        match player {
            Player::Even => self.even,
            Player::Odd => self.odd,
        }
    }

    /// `floor(log p_E) + floor(log p_O)`.
    pub fn log_sum(self) -> u32 {
        floor_log2(self.even) + floor_log2(self.odd)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub opts: OptFlags,
    pub timeout: Option<Duration>,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm) -> SolverConfig {
        SolverConfig {
            algorithm,
            opts: OptFlags::NONE,
            timeout: None,
        }
    }

    /// The algorithm with every applicable optimisation enabled.
    pub fn optimised(algorithm: Algorithm) -> SolverConfig {
        SolverConfig::new(algorithm).with_opts(OptFlags::applicable(algorithm))
    }

    pub fn with_opts(mut self, opts: OptFlags) -> SolverConfig {
        self.opts = opts;
        self
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> SolverConfig {
        self.timeout = timeout;
        self
    }

    pub fn precision_mode(&self) -> PrecisionMode {
        if self.opts.contains(Optimisation::O3) {
            PrecisionMode::Padded
        } else {
            PrecisionMode::ExactN
        }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        let allowed = OptFlags::applicable(self.algorithm);
        if self.opts.is_subset(allowed) {
            Ok(())
        } else {
            Err(SolveError::Config(format!(
                "{} does not support {}",
                self.algorithm,
                OptFlags(self.opts.0 & !allowed.0)
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverStats {
    /// Solver invocations including the root.
    pub recursive_calls: u64,
    /// "Attractor, subcall, attractor" fragments, counted at the call sites.
    pub iterations: u64,
    pub attractor_calls: u64,
    /// Root call has depth 1.
    pub max_recursion_depth: u32,
    /// Some Warsaw call returned early on exhausted precision with a non-empty subgame.
    pub dirty_flag_fired: bool,
    pub root_priority: u32,
    pub root_precision: Option<Precision>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("time limit exceeded")]
    Timeout,
    #[error("arena has self-loops or priority 0; normalize it first")]
    NotNormalized,
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub(crate) struct Run<'a> {
    pub(crate) arena: &'a Arena,
    scratch: AttractorScratch,
    by_priority: Vec<Vec<usize>>,
    pub(crate) stats: SolverStats,
    deadline: Option<Instant>,
    pub(crate) opts: OptFlags,
    pub(crate) dirty: bool,
    pub(crate) strategy: Option<Strategy>,
}

impl<'a> Run<'a> {
    pub(crate) fn new(arena: &'a Arena, opts: OptFlags, timeout: Option<Duration>) -> Run<'a> {
        let mut by_priority = vec![Vec::new(); arena.max_priority() as usize + 1];
        for v in 0..arena.num_vertices() {
            by_priority[arena.priority(v) as usize].push(v);
        }
        Run {
            arena,
            scratch: AttractorScratch::new(arena.num_vertices()),
            by_priority,
            stats: SolverStats::default(),
            deadline: timeout.map(|t| Instant::now() + t),
            opts,
            dirty: false,
            strategy: None,
        }
    }

    pub(crate) fn enabled(&self, opt: Optimisation) -> bool {
        self.opts.contains(opt)
    }

    /// Bookkeeping at the start of every solver invocation.
    pub(crate) fn enter(&mut self, depth: u32) -> Result<(), SolveError> {
        self.stats.recursive_calls += 1;
        self.stats.max_recursion_depth = self.stats.max_recursion_depth.max(depth);
        match self.deadline {
            Some(deadline) if Instant::now() >= deadline => Err(SolveError::Timeout),
            _ => Ok(()),
        }
    }

    /// A recursive call made from inside an iteration.
    pub(crate) fn descend<T>(
        &mut self,
        f: impl FnOnce(&mut Self) -> Result<T, SolveError>,
    ) -> Result<T, SolveError> {
        self.stats.iterations += 1;
        stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || f(self))
    }

    pub(crate) fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.arena.num_vertices())
    }

    /// `N_d`: vertices of `g` with priority exactly `d`.
    pub(crate) fn top(&self, g: &VertexSet, d: u32) -> VertexSet {
        let mut out = self.empty_set();
        if let Some(list) = self.by_priority.get(d as usize) {
            for &v in list {
                if g.contains(v) {
                    out.insert(v);
                }
            }
        }
        out
    }

    pub(crate) fn attractor(&mut self, player: Player, s: &VertexSet, g: &VertexSet) -> VertexSet {
        self.stats.attractor_calls += 1;
        match self.strategy.as_mut() {
            Some(strategy) => self
                .scratch
                .attractor_with_witness(self.arena, player, s, g, strategy),
            None => self.scratch.attractor(self.arena, player, s, g),
        }
    }

    /// `G \ Attr_player(N_d, G)`.
    pub(crate) fn below_top(&mut self, player: Player, g: &VertexSet, d: u32) -> VertexSet {
        let top = self.top(g, d);
        let attr = self.attractor(player, &top, g);
        g.difference(&attr)
    }

    /// Removes `Attr_opp(w, g)` from `g` and reports whether the enclosing loop stops:
    /// `w = ∅`, or with O5, `w` already attractor-closed.
    pub(crate) fn remove_attracted(&mut self, opp: Player, w: &VertexSet, g: &mut VertexSet) -> bool {
        let attr = self.attractor(opp, w, g);
        let stop = if self.enabled(Optimisation::O5) {
            attr == *w
        } else {
            w.is_empty()
        };
        g.difference_with(&attr);
        stop
    }

    /// Runs `f` with a fresh dirty flag and reports whether it was raised inside.
    pub(crate) fn tracking_dirty<T>(
        &mut self,
        f: impl FnOnce(&mut Self) -> Result<T, SolveError>,
    ) -> Result<(T, bool), SolveError> {
        let outer = std::mem::replace(&mut self.dirty, false);
        let out = f(self)?;
        let inner = self.dirty;
        self.dirty = outer || inner;
        Ok((out, inner))
    }
}

/// The root player and priority bound: the parity of the largest priority decides.
pub fn root_parameters(arena: &Arena) -> (Player, u32) {
    let d = arena.max_priority();
    (Player::of_priority(d), d)
}

fn check_input(arena: &Arena, cfg: &SolverConfig) -> Result<(), SolveError> {
    cfg.validate()?;
    if arena.is_normalized() {
        Ok(())
    } else {
        Err(SolveError::NotNormalized)
    }
}

/// Rejects calls outside the solvers' contract.
pub(crate) fn check_player_call(
    arena: &Arena,
    player: Player,
    g: &VertexSet,
    d: u32,
    precision: Precision,
) -> Result<(), SolveError> {
    if !arena.is_normalized() {
        return Err(SolveError::NotNormalized);
    }
    if g.capacity() != arena.num_vertices() {
        return Err(SolveError::Contract("subgame mask has the wrong universe".into()));
    }
    if Player::of_priority(d) != player {
        return Err(SolveError::Contract(format!("d = {d} does not have {player}'s parity")));
    }
    if let Some(v) = g.iter().find(|&v| arena.priority(v) > d) {
        return Err(SolveError::Contract(format!(
            "vertex {v} has priority {} above d = {d}",
            arena.priority(v)
        )));
    }
    if precision.even == 0 || precision.odd == 0 {
        return Err(SolveError::Contract("precision must be at least 1".into()));
    }
    if !validate_subgame(arena, g) {
        return Err(SolveError::Contract("mask does not induce a subgame".into()));
    }
    Ok(())
}

fn finish(run: Run<'_>, player: Player, region: VertexSet) -> (Solution, SolverStats) {
    let mut solution = Solution::from_region(player, region);
    solution.strategy = run.strategy;
    (solution, run.stats)
}

pub fn solve_zielonka(arena: &Arena, cfg: &SolverConfig) -> Result<(Solution, SolverStats), SolveError> {
    check_input(arena, cfg)?;
    let (player, d) = root_parameters(arena);
    let mut run = Run::new(arena, cfg.opts, cfg.timeout);
    run.strategy = Some(vec![None; arena.num_vertices()]);
    run.stats.root_priority = d;
    let region = run.zielonka(arena.vertices(), d, 1)?;
    Ok(finish(run, player, region))
}

pub fn liverpool_solve(arena: &Arena, cfg: &SolverConfig) -> Result<(Solution, SolverStats), SolveError> {
    check_input(arena, cfg)?;
    let (player, d) = root_parameters(arena);
    let precision = Precision::uniform(cfg.precision_mode().initial(arena.num_vertices()));
    let mut run = Run::new(arena, cfg.opts, cfg.timeout);
    run.stats.root_priority = d;
    run.stats.root_precision = Some(precision);
    let region = run.liverpool(arena.vertices(), d, precision.of(player), precision.of(player.opponent()), 1)?;
    Ok(finish(run, player, region))
}

pub fn warsaw_solve(arena: &Arena, cfg: &SolverConfig) -> Result<(Solution, SolverStats), SolveError> {
    check_input(arena, cfg)?;
    let (player, d) = root_parameters(arena);
    let precision = Precision::uniform(cfg.precision_mode().initial(arena.num_vertices()));
    let mut run = Run::new(arena, cfg.opts, cfg.timeout);
    run.stats.root_priority = d;
    run.stats.root_precision = Some(precision);
    let region = run.warsaw(arena.vertices(), d, precision.of(player), precision.of(player.opponent()), 1)?;
    Ok(finish(run, player, region))
}

/// Dispatches on `cfg.algorithm`.
pub fn solve(arena: &Arena, cfg: &SolverConfig) -> Result<(Solution, SolverStats), SolveError> {
    match cfg.algorithm {
        Algorithm::Zielonka => solve_zielonka(arena, cfg),
        Algorithm::Liverpool => liverpool_solve(arena, cfg),
        Algorithm::Warsaw => warsaw_solve(arena, cfg),
    }
}
