use crate::arena::{Arena, Player, VertexSet};

use super::{check_player_call, OptFlags, Optimisation, Precision, Run, SolveError, SolverStats};

impl Run<'_> {
    /// Zielonka-style loops in which every call but one runs at half the opponent's
    /// precision. Exhausting the own precision returns the empty set.
    pub(crate) fn warsaw(
        &mut self,
        g: VertexSet,
        d: u32,
        p_me: u64,
        p_opp: u64,
        depth: u32,
    ) -> Result<VertexSet, SolveError> {
        self.enter(depth)?;
        if g.is_empty() {
            return Ok(g);
        }
        if p_me <= 1 {
            self.dirty = true;
            self.stats.dirty_flag_fired = true;
            return Ok(self.empty_set());
        }
        let me = Player::of_priority(d);
        let opp = me.opponent();
        let half = p_opp / 2;
        let mut g = g;

        let (mut h, last_dirty) = loop {
            let h = self.below_top(me, &g, d);
            let sub = h.clone();
            let (lost, dirty) =
                self.tracking_dirty(|run| run.descend(|run| run.warsaw(sub, d - 1, half, p_me, depth + 1)))?;
            if self.remove_attracted(opp, &lost, &mut g) {
                break (h, dirty);
            }
        };
        if self.enabled(Optimisation::O1) && h.len() as u64 <= half {
            return Ok(g);
        }
        if self.enabled(Optimisation::O4) && !last_dirty {
            return Ok(g);
        }
        if self.enabled(Optimisation::O5) {
            h = self.below_top(me, &g, d);
        }

        let lost = self.descend(|run| run.warsaw(h, d - 1, p_opp, p_me, depth + 1))?;
        let mut stop = self.remove_attracted(opp, &lost, &mut g);
        while !stop {
            let h = self.below_top(me, &g, d);
            let lost = self.descend(|run| run.warsaw(h, d - 1, half, p_me, depth + 1))?;
            stop = self.remove_attracted(opp, &lost, &mut g);
        }
        Ok(g)
    }
}

/// Direct access to the Warsaw procedure at arbitrary precision.
pub struct WarsawSolver<'a> {
    run: Run<'a>,
}

impl<'a> WarsawSolver<'a> {
    pub fn new(arena: &'a Arena, opts: OptFlags) -> Self {
        WarsawSolver {
            run: Run::new(arena, opts, None),
        }
    }

    /// Returns a subset of `g` containing every `player` dominion of size up to
    /// `precision.of(player)` and meeting no opponent dominion of size up to
    /// `precision.of(opponent)`.
    pub fn solve_player(
        &mut self,
        player: Player,
        g: &VertexSet,
        d: u32,
        precision: Precision,
    ) -> Result<VertexSet, SolveError> {
        check_player_call(self.run.arena, player, g, d, precision)?;
        self.run.dirty = false;
        self.run.warsaw(
            g.clone(),
            d,
            precision.of(player),
            precision.of(player.opponent()),
            1,
        )
    }

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
    use crate::solvers::{warsaw_solve, Algorithm, SolverConfig};

    #[test]
    fn exhausted_own_precision_returns_nothing() {
        let a = Arena::new(vec![Player::Even, Player::Odd], vec![2, 1], vec![vec![1], vec![0]]).unwrap();
        let mut solver = WarsawSolver::new(&a, OptFlags::NONE);
        let g = a.vertices();
        assert!(solver.solve_player(Player::Even, &g, 2, Precision::new(1, 5)).unwrap().is_empty());
        assert!(solver.stats().dirty_flag_fired);
    }

    #[test]
    fn single_priority_returns_whole_game() {
        let a = Arena::new(
            vec![Player::Even, Player::Odd, Player::Odd],
            vec![2; 3],
            vec![vec![1], vec![2], vec![0]],
        )
        .unwrap();
        let mut solver = WarsawSolver::new(&a, OptFlags::NONE);
        let g = a.vertices();
        assert_eq!(solver.solve_player(Player::Even, &g, 2, Precision::uniform(3)).unwrap(), g);
        // the root plus two calls on H = ∅ (repeat loop, then full precision)
        assert_eq!(solver.stats().recursive_calls, 3);
    }

    #[test]
    fn empty_arena() {
        let (sol, stats) = warsaw_solve(&Arena::empty(), &SolverConfig::new(Algorithm::Warsaw)).unwrap();
        assert!(sol.win_even.is_empty() && sol.win_odd.is_empty());
        assert_eq!(stats.recursive_calls, 1);
    }
}
