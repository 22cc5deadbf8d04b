//! Winning regions, positional strategies and the PGSolver `paritysol` format.

use std::fmt::Write as _;

use thiserror::Error;

use crate::arena::{Player, PreprocessReport, VertexSet};

/// A positional strategy: the chosen successor of each vertex, where one is defined.
pub type Strategy = Vec<Option<usize>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub win_even: VertexSet,
    pub win_odd: VertexSet,
    /// Winner's choices inside the winner's region (Zielonka only).
    pub strategy: Option<Strategy>,
}

impl Solution {
    /// Solution in which `player` wins `region` and the opponent wins the rest.
    pub fn from_region(player: Player, region: VertexSet) -> Solution {
        let rest = VertexSet::full(region.capacity()).difference(&region);
        match player {
            Player::Even => Solution {
                win_even: region,
                win_odd: rest,
                strategy: None,
            },
            Player::Odd => Solution {
                win_even: rest,
                win_odd: region,
                strategy: None,
            },
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.win_even.capacity()
    }

    pub fn region(&self, player: Player) -> &VertexSet {
        match player {
            Player::Even => &self.win_even,
            Player::Odd => &self.win_odd,
        }
    }

    pub fn winner(&self, v: usize) -> Player {
        if self.win_even.contains(v) {
            Player::Even
        } else {
            Player::Odd
        }
    }

    pub fn is_partition(&self) -> bool {
        self.win_even.capacity() == self.win_odd.capacity()
            && self.win_even.is_disjoint(&self.win_odd)
            && self.win_even.len() + self.win_odd.len() == self.num_vertices()
    }

    /// True iff both solutions assign the same winner to every vertex.
    pub fn same_regions(&self, other: &Solution) -> bool {
        self.win_even == other.win_even && self.win_odd == other.win_odd
    }

    /// Restricts a solution of a normalised arena to the original vertices.
    pub fn lift(&self, report: &PreprocessReport) -> Solution {
        let n = report.vertex_map.len();
        let mut win_even = VertexSet::empty(n);
        let mut win_odd = VertexSet::empty(n);
        for (v, &p) in report.vertex_map.iter().enumerate() {
            if self.win_even.contains(p) {
                win_even.insert(v);
            } else {
                win_odd.insert(v);
            }
        }
        let strategy = self.strategy.as_ref().map(|strategy| {
            report
                .vertex_map
                .iter()
                .map(|&p| strategy[p].map(|t| report.original_of(t)))
                .collect()
        });
        Solution {
            win_even,
            win_odd,
            strategy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct SolutionParseError {
    pub line: usize,
    pub message: String,
}

/// `paritysol <n-1>;` followed by `<id> <winner> [<successor>];` per vertex.
pub fn write_solution(solution: &Solution) -> String {
    let n = solution.num_vertices();
    let mut out = String::new();
    writeln!(out, "paritysol {};", n.saturating_sub(1)).unwrap();
    for v in 0..n {
        write!(out, "{} {}", v, solution.winner(v).index()).unwrap();
        if let Some(t) = solution.strategy.as_ref().and_then(|s| s[v]) {
            write!(out, " {t}").unwrap();
        }
        out.push_str(";\n");
    }
    out
}

/// Parses a solution for an arena of `num_vertices` vertices. Every vertex must appear
/// exactly once; a strategy is attached iff at least one line names a successor.
pub fn parse_solution(input: &[u8], num_vertices: usize) -> Result<Solution, SolutionParseError> {
    let err = |line: usize, message: String| SolutionParseError { line, message };
    let text = std::str::from_utf8(input).map_err(|_| err(0, "input is not valid UTF-8".into()))?;
    let mut header = None;
    let mut winners: Vec<Option<Player>> = vec![None; num_vertices];
    let mut strategy: Strategy = vec![None; num_vertices];
    let mut any_choice = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let body = trimmed
            .strip_suffix(';')
            .ok_or_else(|| err(line, "missing terminating `;`".into()))?;
        if let Some(rest) = body.strip_prefix("paritysol") {
            if header.is_some() {
                return Err(err(line, "repeated header".into()));
            }
            let max = rest
                .trim()
                .parse::<usize>()
                .map_err(|_| err(line, format!("bad header bound `{}`", rest.trim())))?;
            header = Some(max);
            continue;
        }
        if header.is_none() {
            return Err(err(line, "missing `paritysol` header".into()));
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(err(line, format!("expected `<id> <winner> [<successor>]`, got `{body}`")));
        }
        let num = |tok: &str| tok.parse::<usize>().map_err(|_| err(line, format!("bad number `{tok}`")));
        let v = num(fields[0])?;
        if v >= num_vertices {
            return Err(err(line, format!("vertex {v} is not in the game")));
        }
        if winners[v].is_some() {
            return Err(err(line, format!("vertex {v} listed twice")));
        }
        let winner = Player::from_index(num(fields[1])? as u64)
            .ok_or_else(|| err(line, format!("winner `{}` is not 0 or 1", fields[1])))?;
        winners[v] = Some(winner);
        if let Some(tok) = fields.get(2) {
            let t = num(tok)?;
            if t >= num_vertices {
                return Err(err(line, format!("successor {t} is not in the game")));
            }
            strategy[v] = Some(t);
            any_choice = true;
        }
    }
    let max = header.ok_or_else(|| err(0, "missing `paritysol` header".into()))?;
    if max != num_vertices.saturating_sub(1) {
        return Err(err(1, format!("header bound {max} does not match a game of {num_vertices} vertices")));
    }
    if let Some(v) = winners.iter().position(Option::is_none) {
        return Err(err(0, format!("no entry for vertex {v} (truncated solution?)")));
    }
    let mut win_even = VertexSet::empty(num_vertices);
    let mut win_odd = VertexSet::empty(num_vertices);
    for (v, w) in winners.into_iter().enumerate() {
        match w.unwrap() {
            Player::Even => win_even.insert(v),
            Player::Odd => win_odd.insert(v),
        };
    }
    Ok(Solution {
        win_even,
        win_odd,
        strategy: any_choice.then_some(strategy),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solution_round_trip() {
        let sol = Solution {
            win_even: VertexSet::from_vertices(3, [0, 2]),
            win_odd: VertexSet::from_vertices(3, [1]),
            strategy: Some(vec![Some(2), None, Some(0)]),
        };
        let text = write_solution(&sol);
        assert_eq!(text, "paritysol 2;\n0 0 2;\n1 1;\n2 0 0;\n");
        assert_eq!(parse_solution(text.as_bytes(), 3).unwrap(), sol);
    }

    #[test]
    fn truncated_solution_is_rejected() {
        assert!(parse_solution(b"paritysol 2;\n0 0;\n1 1;\n", 3).is_err());
        assert!(parse_solution(b"paritysol 1;\n0 0;\n1 1", 2).is_err());
        assert!(parse_solution(b"0 0;\n1 1;\n", 2).is_err());
        assert!(parse_solution(b"paritysol 1;\n0 0;\n0 1;\n", 2).is_err());
    }

    #[test]
    fn empty_solution() {
        let sol = Solution::from_region(Player::Even, VertexSet::empty(0));
        assert_eq!(write_solution(&sol), "paritysol 0;\n");
        assert_eq!(parse_solution(b"paritysol 0;\n", 0).unwrap(), sol);
    }
}
