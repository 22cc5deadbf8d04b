use crate::arena::{Player, VertexSet};

use super::{Run, SolveError};

impl Run<'_> {
    /// Region of the player of parity `d` in `g`; strategies for both players are written
    /// into `self.strategy` (the caller owns the complement).
    pub(crate) fn zielonka(&mut self, mut g: VertexSet, d: u32, depth: u32) -> Result<VertexSet, SolveError> {
        self.enter(depth)?;
        if g.is_empty() {
            return Ok(g);
        }
        let me = Player::of_priority(d);
        let opp = me.opponent();
        loop {
            let top = self.top(&g, d);
            let attr = self.attractor(me, &top, &g);
            let h = g.difference(&attr);
            let lost = self.descend(|run| run.zielonka(h, d - 1, depth + 1))?;
            let before = g.clone();
            if self.remove_attracted(opp, &lost, &mut g) {
                let region = before.difference(&lost);
                self.choose_inside(me, &top, &region);
                return Ok(region);
            }
        }
    }

    /// Gives every `player` vertex of `top` some successor inside `region`.
    fn choose_inside(&mut self, player: Player, top: &VertexSet, region: &VertexSet) {
        let arena = self.arena;
        let strategy = self.strategy.as_mut().expect("zielonka runs with a strategy table");
        for v in top.iter().filter(|&v| arena.owner(v) == player) {
            strategy[v] = arena.successors(v).iter().copied().find(|&t| region.contains(t));
            debug_assert!(strategy[v].is_some());
        }
    }
}
