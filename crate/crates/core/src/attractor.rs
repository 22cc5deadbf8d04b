//! Attractors inside a subgame mask and closedness tests.

use crate::arena::{Arena, Player, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) enum QueueOrder {
    #[default]
    Lifo,
    #[cfg_attr(not(test), allow(dead_code))]
    Fifo,
}

/// Reusable buffers for [`AttractorScratch::attractor`].
///
/// Out-degree counters are initialised lazily: a vertex's counter is only computed the
/// first time one of its successors is attracted, so the cost of a call is linear in the
/// edges around the attracted region rather than in the whole mask.
#[derive(Debug, Clone)]
pub struct AttractorScratch {
    remaining: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
    queue: Vec<usize>,
    order: QueueOrder,
    invocations: u64,
}

impl AttractorScratch {
    pub fn new(num_vertices: usize) -> Self {
        AttractorScratch {
            remaining: vec![0; num_vertices],
            stamp: vec![0; num_vertices],
            epoch: 0,
            queue: Vec::new(),
            order: QueueOrder::default(),
            invocations: 0,
        }
    }

    #[cfg(test)]
    pub(crate) fn with_order(num_vertices: usize, order: QueueOrder) -> Self {
        AttractorScratch {
            order,
            ..AttractorScratch::new(num_vertices)
        }
    }

    /// Number of attractor computations run through this scratch.
    pub fn invocations(&self) -> u64 {
        self.invocations
    }

    /// `Attr_player(s, g)`. Panics unless `s ⊆ g`.
    pub fn attractor(
        &mut self,
        arena: &Arena,
        player: Player,
        s: &VertexSet,
        g: &VertexSet,
    ) -> VertexSet {
        self.attract(arena, player, s, s.iter(), g, None)
    }

    /// Like [`attractor`](Self::attractor), additionally recording in `witness` the
    /// successor each attracted vertex of `player` uses to move closer to `s`.
    pub fn attractor_with_witness(
        &mut self,
        arena: &Arena,
        player: Player,
        s: &VertexSet,
        g: &VertexSet,
        witness: &mut [Option<usize>],
    ) -> VertexSet {
        self.attract(arena, player, s, s.iter(), g, Some(witness))
    }

    pub(crate) fn attract(
        &mut self,
        arena: &Arena,
        player: Player,
        s: &VertexSet,
        seeds: impl Iterator<Item = usize>,
        g: &VertexSet,
        mut witness: Option<&mut [Option<usize>]>,
    ) -> VertexSet {
        assert!(s.is_subset(g), "attractor seed is not inside the subgame");
        debug_assert!(crate::arena::validate_subgame(arena, g));
        self.invocations += 1;
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let mut attracted = s.clone();
        self.queue.clear();
        self.queue.extend(seeds);
        let mut head = 0;
        loop {
            let v = match self.order {
                QueueOrder::Lifo => match self.queue.pop() {
                    Some(v) => v,
                    None => break,
                },
                QueueOrder::Fifo => {
                    if head == self.queue.len() {
                        break;
                    }
                    head += 1;
                    self.queue[head - 1]
                }
            };
            for &u in arena.predecessors(v) {
                if !g.contains(u) || attracted.contains(u) {
                    continue;
                }
                let joins = if arena.owner(u) == player {
                    if let Some(w) = witness.as_deref_mut() {
                        w[u] = Some(v);
                    }
                    true
                } else {
                    if self.stamp[u] != self.epoch {
                        self.stamp[u] = self.epoch;
                        self.remaining[u] = arena
                            .successors(u)
                            .iter()
                            .filter(|&&t| g.contains(t))
                            .count() as u32;
                    }
                    self.remaining[u] -= 1;
                    self.remaining[u] == 0
                };
                if joins {
                    attracted.insert(u);
                    self.queue.push(u);
                }
            }
        }
        attracted
    }
}

/// `Attr_player(s, g)` with throwaway scratch buffers.
pub fn attractor(arena: &Arena, player: Player, s: &VertexSet, g: &VertexSet) -> VertexSet {
    AttractorScratch::new(arena.num_vertices()).attractor(arena, player, s, g)
}

/// `s` is `player`-closed in `g`: every vertex of `player` in `s` has a successor in `s`
/// and no opponent vertex in `s` has a successor in `g \ s`.
pub fn is_closed(arena: &Arena, player: Player, s: &VertexSet, g: &VertexSet) -> bool {
    debug_assert!(s.is_subset(g));
    s.iter().all(|v| {
        let mut succ = arena.successors(v).iter().filter(|&&t| g.contains(t));
        if arena.owner(v) == player {
            succ.any(|&t| s.contains(t))
        } else {
            succ.all(|&t| s.contains(t))
        }
    })
}

/// Closedness through the defining equation `Attr_opp(g \ s, g) = g \ s`.
pub fn is_closed_by_attractor(arena: &Arena, player: Player, s: &VertexSet, g: &VertexSet) -> bool {
    let rest = g.difference(s);
    attractor(arena, player.opponent(), &rest, g) == rest
}
