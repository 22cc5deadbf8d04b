//! Ground truth for small arenas and certificate checking for large ones.
//!
//! The brute-force route enumerates positional strategies of one player and decides the
//! resulting one-player games with bitmask reachability. It shares no code with the
//! solvers. Strategy certificates are checked with an SCC sweep over priority levels.

use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::NodeFiltered;
use thiserror::Error;

use crate::arena::{Arena, Player, VertexSet};
use crate::solution::Solution;

/// Default vertex cap for the exponential routines.
pub const DEFAULT_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{size} vertices exceed the oracle cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("mask does not induce a subgame (vertex {0} has no successor inside)")]
    NotASubgame(usize),
}

/// A subgame copied into local indices `0..k` with bitmask adjacency.
struct Small {
    vertices: Vec<usize>,
    owner: Vec<Player>,
    priority: Vec<u32>,
    adj: Vec<u64>,
}

impl Small {
    fn new(arena: &Arena, g: &VertexSet, cap: usize) -> Result<Small, OracleError> {
        let vertices: Vec<usize> = g.iter().collect();
        let cap = cap.min(64);
        if vertices.len() > cap {
            return Err(OracleError::CapExceeded { size: vertices.len(), cap });
        }
        let local = |v: usize| vertices.binary_search(&v).ok();
        let mut adj = Vec::with_capacity(vertices.len());
        for &v in &vertices {
            let mask = arena
                .successors(v)
                .iter()
                .filter_map(|&t| local(t))
                .fold(0u64, |m, i| m | 1 << i);
            if mask == 0 {
                return Err(OracleError::NotASubgame(v));
            }
            adj.push(mask);
        }
        Ok(Small {
            owner: vertices.iter().map(|&v| arena.owner(v)).collect(),
            priority: vertices.iter().map(|&v| arena.priority(v)).collect(),
            vertices,
            adj,
        })
    }

    fn all(&self) -> u64 {
        mask_below(self.vertices.len())
    }

    fn restrict(&self, mask: u64) -> Small {
        let keep: Vec<usize> = (0..self.vertices.len()).filter(|&i| mask & 1 << i != 0).collect();
        let remap = |m: u64| {
            keep.iter()
                .enumerate()
                .filter(|(_, &old)| m & 1 << old != 0)
                .fold(0u64, |acc, (new, _)| acc | 1 << new)
        };
        Small {
            vertices: keep.iter().map(|&i| self.vertices[i]).collect(),
            owner: keep.iter().map(|&i| self.owner[i]).collect(),
            priority: keep.iter().map(|&i| self.priority[i]).collect(),
            adj: keep.iter().map(|&i| remap(self.adj[i] & mask)).collect(),
        }
    }

    /// Even's winning region as a local mask.
    fn even_region(&self) -> u64 {
        let k = self.vertices.len();
        if k == 0 {
            return 0;
        }
        let choices = |p: Player| {
            (0..k)
                .filter(|&i| self.owner[i] == p)
                .fold(1u128, |acc, i| acc.saturating_mul(self.adj[i].count_ones() as u128))
        };
        // Enumerate whichever player has fewer positional strategies.
        let chooser = if choices(Player::Even) <= choices(Player::Odd) {
            Player::Even
        } else {
            Player::Odd
        };
        let movers: Vec<usize> = (0..k).filter(|&i| self.owner[i] == chooser).collect();
        let options: Vec<Vec<usize>> = movers
            .iter()
            .map(|&i| (0..k).filter(|&t| self.adj[i] & 1 << t != 0).collect())
            .collect();
        let mut digit = vec![0usize; movers.len()];
        let mut restricted = self.adj.clone();
        let mut won = 0u64;
        loop {
            for (j, &i) in movers.iter().enumerate() {
                restricted[i] = 1 << options[j][digit[j]];
            }
            won |= self.one_player_region(chooser, &restricted);
            if won == self.all() {
                break;
            }
            let mut j = 0;
            while j < movers.len() {
                digit[j] += 1;
                if digit[j] < options[j].len() {
                    break;
                }
                digit[j] = 0;
                j += 1;
            }
            if j == movers.len() {
                break;
            }
        }
        match chooser {
            Player::Even => won,
            Player::Odd => self.all() & !won,
        }
    }

    /// Vertices from which `player` wins when the graph is `adj` and the opponent picks
    /// every move: exactly those that cannot reach a cycle whose top priority has the
    /// opponent's parity.
    fn one_player_region(&self, player: Player, adj: &[u64]) -> u64 {
        let k = self.vertices.len();
        let mut bad = 0u64;
        for v in 0..k {
            let p = self.priority[v];
            if Player::of_priority(p) == player {
                continue;
            }
            let allowed = (0..k)
                .filter(|&u| self.priority[u] <= p)
                .fold(0u64, |m, u| m | 1 << u);
            let mut seen = adj[v] & allowed;
            let mut frontier = seen;
            while frontier != 0 && seen & 1 << v == 0 {
                let mut next = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let u = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= adj[u] & allowed;
                }
                frontier = next & !seen;
                seen |= next;
            }
            if seen & 1 << v != 0 {
                bad |= 1 << v;
            }
        }
        let mut losing = bad;
        loop {
            let grown = (0..k)
                .filter(|&u| adj[u] & losing != 0)
                .fold(losing, |m, u| m | 1 << u);
            if grown == losing {
                break;
            }
            losing = grown;
        }
        self.all() & !losing
    }

    /// `mask` is `player`-closed in this subgame.
    fn is_closed(&self, player: Player, mask: u64) -> bool {
        (0..self.vertices.len())
            .filter(|&i| mask & 1 << i != 0)
            .all(|i| {
                if self.owner[i] == player {
                    self.adj[i] & mask != 0
                } else {
                    self.adj[i] & !mask == 0
                }
            })
    }

    fn to_set(&self, n: usize, mask: u64) -> VertexSet {
        VertexSet::from_vertices(
            n,
            (0..self.vertices.len())
                .filter(|&i| mask & 1 << i != 0)
                .map(|i| self.vertices[i]),
        )
    }
}

fn mask_below(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Exact winning regions by positional-strategy enumeration.
pub fn brute_force_regions(arena: &Arena) -> Result<Solution, OracleError> {
    brute_force_regions_capped(arena, DEFAULT_CAP)
}

pub fn brute_force_regions_capped(arena: &Arena, cap: usize) -> Result<Solution, OracleError> {
    let (win_even, _) = brute_force_subgame(arena, &arena.vertices(), cap)?;
    Ok(Solution::from_region(Player::Even, win_even))
}

/// `(Even's region, Odd's region)` of the subgame induced by `g`.
pub fn brute_force_subgame(
    arena: &Arena,
    g: &VertexSet,
    cap: usize,
) -> Result<(VertexSet, VertexSet), OracleError> {
    let small = Small::new(arena, g, cap)?;
    let even = small.even_region();
    let n = arena.num_vertices();
    Ok((small.to_set(n, even), small.to_set(n, small.all() & !even)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominionList {
    pub player: Player,
    pub max_size: usize,
    pub dominions: Vec<VertexSet>,
}

impl DominionList {
    /// Dominions of at most `size` vertices.
    pub fn up_to(&self, size: usize) -> impl Iterator<Item = &VertexSet> {
        self.dominions.iter().filter(move |d| d.len() <= size)
    }
}

/// Every non-empty `player` dominion of `g` with at most `max_size` vertices.
pub fn enumerate_dominions(
    arena: &Arena,
    g: &VertexSet,
    player: Player,
    max_size: usize,
) -> Result<DominionList, OracleError> {
    enumerate_dominions_capped(arena, g, player, max_size, DEFAULT_CAP)
}

pub fn enumerate_dominions_capped(
    arena: &Arena,
    g: &VertexSet,
    player: Player,
    max_size: usize,
    cap: usize,
) -> Result<DominionList, OracleError> {
    let small = Small::new(arena, g, cap.min(20))?;
    let n = arena.num_vertices();
    let mut dominions = Vec::new();
    for mask in 1..=small.all() {
        if mask.count_ones() as usize > max_size || !small.is_closed(player, mask) {
            continue;
        }
        let sub = small.restrict(mask);
        let even = sub.even_region();
        let wins_all = match player {
            Player::Even => even == sub.all(),
            Player::Odd => even == 0,
        };
        if wins_all {
            dominions.push(small.to_set(n, mask));
        }
    }
    Ok(DominionList {
        player,
        max_size,
        dominions,
    })
}

/// Why a strategy certificate was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategyFault {
    Missing { vertex: usize },
    NotAnEdge { vertex: usize, target: usize },
    LeavesRegion { vertex: usize, target: usize },
    OpponentEscapes { vertex: usize, target: usize },
    LosingCycle { vertex: usize, priority: u32 },
}

impl StrategyFault {
    pub fn vertex(&self) -> usize {
        match *self {
            StrategyFault::Missing { vertex }
            | StrategyFault::NotAnEdge { vertex, .. }
            | StrategyFault::LeavesRegion { vertex, .. }
            | StrategyFault::OpponentEscapes { vertex, .. }
            | StrategyFault::LosingCycle { vertex, .. } => vertex,
        }
    }
}

impl fmt::Display for StrategyFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyFault::Missing { vertex } => write!(f, "no move chosen at vertex {vertex}"),
            StrategyFault::NotAnEdge { vertex, target } => write!(f, "{vertex} -> {target} is not an edge"),
            StrategyFault::LeavesRegion { vertex, target } => {
                write!(f, "move {vertex} -> {target} leaves the region")
            }
            StrategyFault::OpponentEscapes { vertex, target } => {
                write!(f, "opponent escapes the region by {vertex} -> {target}")
            }
            StrategyFault::LosingCycle { vertex, priority } => {
                write!(f, "cycle through vertex {vertex} has top priority {priority}")
            }
        }
    }
}

/// Checks that `strategy` wins for `player` everywhere in `region`: the region is closed
/// under the strategy and opponent moves, and no cycle of the restricted graph has a top
/// priority of the opponent's parity.
pub fn check_strategy(
    arena: &Arena,
    player: Player,
    region: &VertexSet,
    strategy: &[Option<usize>],
) -> Result<(), StrategyFault> {
    let mut graph: DiGraph<u32, ()> = DiGraph::new();
    let mut node = vec![NodeIndex::end(); arena.num_vertices()];
    for v in region.iter() {
        node[v] = graph.add_node(arena.priority(v));
    }
    let mut vertex_of = vec![0usize; graph.node_count()];
    for v in region.iter() {
        vertex_of[node[v].index()] = v;
        if arena.owner(v) == player {
            let target = strategy[v].ok_or(StrategyFault::Missing { vertex: v })?;
            if !arena.successors(v).contains(&target) {
                return Err(StrategyFault::NotAnEdge { vertex: v, target });
            }
            if !region.contains(target) {
                return Err(StrategyFault::LeavesRegion { vertex: v, target });
            }
            graph.add_edge(node[v], node[target], ());
        } else {
            for &target in arena.successors(v) {
                if !region.contains(target) {
                    return Err(StrategyFault::OpponentEscapes { vertex: v, target });
                }
                graph.add_edge(node[v], node[target], ());
            }
        }
    }
    let mut levels: Vec<u32> = region
        .iter()
        .map(|v| arena.priority(v))
        .filter(|&p| Player::of_priority(p) != player)
        .collect();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels.dedup();
    for p in levels {
        let below = NodeFiltered::from_fn(&graph, |n: NodeIndex| graph[n] <= p);
        for component in tarjan_scc(&below) {
            let Some(&top) = component.iter().find(|&&n| graph[n] == p) else {
                continue;
            };
            if component.len() > 1 || graph.contains_edge(top, top) {
                return Err(StrategyFault::LosingCycle {
                    vertex: vertex_of[top.index()],
                    priority: p,
                });
            }
        }
    }
    Ok(())
}

pub fn verify_strategy(arena: &Arena, player: Player, region: &VertexSet, strategy: &[Option<usize>]) -> bool {
    check_strategy(arena, player, region, strategy).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    NotAPartition,
    NotClosed { player: Player, vertex: usize },
    Strategy { player: Player, fault: StrategyFault },
    OracleMismatch { vertex: usize, expected: Player },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::NotAPartition => f.write_str("regions do not partition the vertices"),
            VerifyFailure::NotClosed { player, vertex } => {
                write!(f, "{player}'s region is not {player}-closed at vertex {vertex}")
            }
            VerifyFailure::Strategy { player, fault } => write!(f, "{player}'s strategy: {fault}"),
            VerifyFailure::OracleMismatch { vertex, expected } => {
                write!(f, "vertex {vertex} is won by {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub failures: Vec<VerifyFailure>,
    /// Whether regions were compared against [`brute_force_regions`].
    pub oracle_checked: bool,
    pub strategies_checked: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "ok")?;
            if self.strategies_checked {
                write!(f, " (strategies certified)")?;
            } else if self.oracle_checked {
                write!(f, " (matches brute force)")?;
            } else {
                write!(f, " (closedness only)")?;
            }
            return Ok(());
        }
        for (i, failure) in self.failures.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "FAIL: {failure}")?;
        }
        Ok(())
    }
}

fn closedness_witness(arena: &Arena, player: Player, s: &VertexSet) -> Option<usize> {
    s.iter().find(|&v| {
        let succ = arena.successors(v);
        if arena.owner(v) == player {
            !succ.iter().any(|&t| s.contains(t))
        } else {
            succ.iter().any(|&t| !s.contains(t))
        }
    })
}

/// Checks closedness of both regions, then strategies if present, otherwise (within the
/// cap) the regions themselves against brute force.
pub fn verify_solution(arena: &Arena, solution: &Solution) -> VerifyReport {
    verify_solution_capped(arena, solution, DEFAULT_CAP)
}

pub fn verify_solution_capped(arena: &Arena, solution: &Solution, cap: usize) -> VerifyReport {
    let mut report = VerifyReport::default();
    let n = arena.num_vertices();
    if solution.num_vertices() != n || !solution.is_partition() {
        report.failures.push(VerifyFailure::NotAPartition);
        return report;
    }
    for player in [Player::Even, Player::Odd] {
        if let Some(vertex) = closedness_witness(arena, player, solution.region(player)) {
            report.failures.push(VerifyFailure::NotClosed { player, vertex });
        }
    }
    if let Some(strategy) = &solution.strategy {
        report.strategies_checked = true;
        for player in [Player::Even, Player::Odd] {
            if let Err(fault) = check_strategy(arena, player, solution.region(player), strategy) {
                report.failures.push(VerifyFailure::Strategy { player, fault });
            }
        }
    } else if n <= cap {
        if let Ok(truth) = brute_force_regions_capped(arena, cap) {
            report.oracle_checked = true;
            if let Some(vertex) = (0..n).find(|&v| truth.winner(v) != solution.winner(v)) {
                report.failures.push(VerifyFailure::OracleMismatch {
                    vertex,
                    expected: truth.winner(vertex),
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(priorities: [u32; 2]) -> Arena {
        Arena::new(vec![Player::Even, Player::Odd], priorities.to_vec(), vec![vec![1], vec![0]]).unwrap()
    }

    #[test]
    fn two_cycles() {
        assert_eq!(brute_force_regions(&cycle([2, 1])).unwrap().win_even.len(), 2);
        assert_eq!(brute_force_regions(&cycle([1, 2])).unwrap().win_even.len(), 2);
        assert_eq!(brute_force_regions(&cycle([3, 2])).unwrap().win_odd.len(), 2);
        assert!(brute_force_regions(&Arena::empty()).unwrap().win_even.is_empty());
    }

    #[test]
    fn choice_matters() {
        // Even at 0 picks between a 2-cycle with top 3 (via 1) and one with top 4 (via 2).
        let a = Arena::new(
            vec![Player::Even, Player::Odd, Player::Odd],
            vec![1, 3, 4],
            vec![vec![1, 2], vec![0], vec![0]],
        )
        .unwrap();
        assert_eq!(brute_force_regions(&a).unwrap().win_even, a.vertices());
        let b = Arena::new(
            vec![Player::Odd, Player::Odd, Player::Odd],
            vec![1, 3, 4],
            vec![vec![1, 2], vec![0], vec![0]],
        )
        .unwrap();
        assert_eq!(brute_force_regions(&b).unwrap().win_odd, b.vertices());
    }

    #[test]
    fn cap_is_enforced() {
        let n = 11;
        let a = Arena::new(
            vec![Player::Even; n],
            vec![1; n],
            (0..n).map(|v| vec![(v + 1) % n]).collect(),
        )
        .unwrap();
        assert!(matches!(brute_force_regions(&a), Err(OracleError::CapExceeded { size: 11, cap: 10 })));
        assert!(brute_force_regions_capped(&a, 12).is_ok());
    }

    #[test]
    fn dominions_of_two_cycle() {
        let a = cycle([2, 1]);
        let g = a.vertices();
        let even = enumerate_dominions(&a, &g, Player::Even, 2).unwrap();
        assert_eq!(even.dominions, vec![g.clone()]);
        assert!(enumerate_dominions(&a, &g, Player::Odd, 2).unwrap().dominions.is_empty());
        assert!(enumerate_dominions(&a, &g, Player::Even, 1).unwrap().dominions.is_empty());
    }

    #[test]
    fn strategy_checks_on_two_cycle() {
        let a = cycle([2, 1]);
        let g = a.vertices();
        let strategy = vec![Some(1), Some(0)];
        assert!(verify_strategy(&a, Player::Even, &g, &strategy));
        assert!(matches!(
            check_strategy(&a, Player::Odd, &g, &strategy),
            Err(StrategyFault::LosingCycle { priority: 2, .. })
        ));
        assert_eq!(
            check_strategy(&a, Player::Even, &g, &[None, None]),
            Err(StrategyFault::Missing { vertex: 0 })
        );
    }

    #[test]
    fn swapped_regions_fail_with_witness() {
        let a = cycle([2, 1]);
        let swapped = Solution::from_region(Player::Odd, a.vertices());
        let report = verify_solution(&a, &swapped);
        assert!(!report.passed());
        assert_eq!(
            report.failures,
            vec![VerifyFailure::OracleMismatch { vertex: 0, expected: Player::Even }]
        );
        let mut with_strategy = swapped;
        with_strategy.strategy = Some(vec![Some(1), Some(0)]);
        let report = verify_solution(&a, &with_strategy);
        assert!(matches!(
            report.failures.as_slice(),
            [VerifyFailure::Strategy { player: Player::Odd, .. }]
        ));
    }

    #[test]
    fn empty_solution_passes() {
        let sol = Solution::from_region(Player::Even, VertexSet::empty(0));
        assert!(verify_solution(&Arena::empty(), &sol).passed());
    }
}
