//! Reduced-precision guarantees of the two quasipolynomial procedures, checked against
//! every small dominion of both players.

use pgsolve_core::attractor::is_closed;
use pgsolve_core::generators::gen_random;
use pgsolve_core::oracle::enumerate_dominions;
use pgsolve_core::solvers::{LiverpoolSolver, Precision, WarsawSolver};
use pgsolve_core::{Arena, OptFlags, Player, VertexSet};
use proptest::prelude::*;

fn bound_for(a: &Arena, player: Player) -> u32 {
    let d = a.max_priority();
    if Player::of_priority(d) == player { d } else { d + 1 }
}

/// Contains every own dominion of size `<= mine`, meets no opponent dominion of size `<= theirs`.
fn respects(out: &VertexSet, own: &[VertexSet], opp: &[VertexSet], mine: u64, theirs: u64) -> bool {
    own.iter().filter(|d| d.len() as u64 <= mine).all(|d| d.is_subset(out))
        && opp.iter().filter(|d| d.len() as u64 <= theirs).all(|d| d.is_disjoint(out))
}

fn check_all_precisions(a: &Arena, opts: OptFlags) -> Result<(), TestCaseError> {
    let n = a.num_vertices();
    let g = a.vertices();
    for player in [Player::Even, Player::Odd] {
        let d = bound_for(a, player);
        let own = enumerate_dominions(a, &g, player, n).unwrap().dominions;
        let opp = enumerate_dominions(a, &g, player.opponent(), n).unwrap().dominions;
        let mut liverpool = LiverpoolSolver::new(a, opts);
        let mut warsaw = WarsawSolver::new(a, opts);
        for p_self in 1..=n as u64 {
            for p_opp in 1..=n as u64 {
                let prec = match player {
                    Player::Even => Precision::new(p_self, p_opp),
                    Player::Odd => Precision::new(p_opp, p_self),
                };
                let l = liverpool.solve_player(player, &g, d, prec).unwrap();
                prop_assert!(is_closed(a, player, &l, &g), "liverpool {player} {prec:?} not closed");
                prop_assert!(respects(&l, &own, &opp, p_self, p_opp), "liverpool {player} {prec:?}");
                let w = warsaw.solve_player(player, &g, d, prec).unwrap();
                prop_assert!(respects(&w, &own, &opp, p_self, p_opp), "warsaw {player} {prec:?}");
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn plain_procedures(n in 2usize..=8, d in 1u32..=6, hi in 1usize..=3, seed in any::<u64>()) {
        let a = gen_random(n, d, 1, hi.min(n - 1), seed).unwrap();
        check_all_precisions(&a, OptFlags::NONE)?;
    }
}

#[test]
fn three_vertex_odd_dominion_at_low_odd_precision() {
    // Odd owns a 3-ring of priority 1 reached from an Even 2-cycle; no smaller Odd dominion
    let a = Arena::new(
        vec![Player::Odd, Player::Odd, Player::Odd, Player::Even, Player::Even],
        vec![1, 1, 1, 2, 2],
        vec![vec![1], vec![2], vec![0], vec![4], vec![3, 0]],
    )
    .unwrap();
    let g = a.vertices();
    let odd = enumerate_dominions(&a, &g, Player::Odd, 5).unwrap();
    assert_eq!(odd.dominions.iter().map(|d| d.len()).min(), Some(3));
    let out = LiverpoolSolver::new(&a, OptFlags::NONE)
        .solve_player(Player::Even, &g, 2, Precision::new(5, 2))
        .unwrap();
    assert!(VertexSet::from_vertices(5, [3, 4]).is_subset(&out));
}
