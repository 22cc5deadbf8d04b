use crate::arena::{Arena, Player, VertexSet};

use super::{check_player_call, OptFlags, Optimisation, Precision, Run, SolveError, SolverStats};

impl Run<'_> {
    /// Three-call recursion: two calls halve the opponent's precision around one
    /// full-precision call on the subgame below the top priority.
    pub(crate) fn liverpool(
        &mut self,
        g: VertexSet,
        d: u32,
        p_me: u64,
        p_opp: u64,
        depth: u32,
    ) -> Result<VertexSet, SolveError> {
        self.enter(depth)?;
        if g.is_empty() || p_opp <= 1 {
            return Ok(g);
        }
        let me = Player::of_priority(d);
        let opp = me.opponent();
        let half = p_opp / 2;
        let size = g.len() as u64;

        let g1 = self.descend(|run| run.liverpool(g, d, p_me, half, depth + 1))?;
        if self.enabled(Optimisation::O2) && size <= half {
            return Ok(g1);
        }
        let h = self.below_top(me, &g1, d);
        let lost = self.descend(|run| run.liverpool(h, d - 1, p_opp, p_me, depth + 1))?;
        let attr = self.attractor(opp, &lost, &g1);
        let g2 = g1.difference(&attr);
        if self.enabled(Optimisation::O6) && attr == lost {
            return Ok(g2);
        }
        self.descend(|run| run.liverpool(g2, d, p_me, half, depth + 1))
    }
}

/// Direct access to the Liverpool procedure at arbitrary precision.
pub struct LiverpoolSolver<'a> {
    run: Run<'a>,
}

impl<'a> LiverpoolSolver<'a> {
    pub fn new(arena: &'a Arena, opts: OptFlags) -> Self {
        LiverpoolSolver {
            run: Run::new(arena, opts, None),
        }
    }

    /// Returns a `player`-closed subset of `g` that contains every `player` dominion of
    /// size up to `precision.of(player)` and meets no opponent dominion of size up to
    /// `precision.of(opponent)`. `d` must have `player`'s parity and bound all priorities in `g`.
    pub fn solve_player(
        &mut self,
        player: Player,
        g: &VertexSet,
        d: u32,
        precision: Precision,
    ) -> Result<VertexSet, SolveError> {
        check_player_call(self.run.arena, player, g, d, precision)?;
        self.run.liverpool(
            g.clone(),
            d,
            precision.of(player),
            precision.of(player.opponent()),
            1,
        )
    }

    /// Accumulated over every call since construction or the last reset.
    pub fn stats(&self) -> SolverStats {
        self.run.stats
    }

    pub fn reset_stats(&mut self) {
        self.run.stats = SolverStats::default();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{liverpool_solve, Algorithm, SolverConfig};

    fn two_cycle() -> Arena {
        Arena::new(vec![Player::Even, Player::Odd], vec![2, 1], vec![vec![1], vec![0]]).unwrap()
    }

    #[test]
    fn exhausted_opponent_precision_returns_everything() {
        let a = two_cycle();
        let mut solver = LiverpoolSolver::new(&a, OptFlags::NONE);
        let g = a.vertices();
        assert_eq!(solver.solve_player(Player::Odd, &g, 3, Precision::new(1, 2)).unwrap(), g);
        assert_eq!(solver.stats().recursive_calls, 1);
    }

    #[test]
    fn root_solves_small_games() {
        let (sol, stats) = liverpool_solve(&Arena::empty(), &SolverConfig::new(Algorithm::Liverpool)).unwrap();
        assert!(sol.win_even.is_empty() && sol.win_odd.is_empty());
        assert_eq!(stats.recursive_calls, 1);

        let a = two_cycle();
        let (sol, stats) = liverpool_solve(&a, &SolverConfig::new(Algorithm::Liverpool)).unwrap();
        assert_eq!(sol.win_even, a.vertices());
        assert_eq!(stats.iterations + 1, stats.recursive_calls);
        assert!(sol.strategy.is_none());
    }

    #[test]
    fn contract_is_checked() {
        let a = two_cycle();
        let mut solver = LiverpoolSolver::new(&a, OptFlags::NONE);
        let g = a.vertices();
        assert!(matches!(
            solver.solve_player(Player::Even, &g, 3, Precision::uniform(2)),
            Err(SolveError::Contract(_))
        ));
        assert!(matches!(
            solver.solve_player(Player::Odd, &g, 1, Precision::uniform(2)),
            Err(SolveError::Contract(_))
        ));
        assert!(matches!(
            solver.solve_player(Player::Even, &VertexSet::from_vertices(2, [0]), 2, Precision::uniform(2)),
            Err(SolveError::Contract(_))
        ));
    }
}
