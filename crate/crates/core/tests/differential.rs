//! Solvers against the brute-force oracle and against each other.

use pgsolve_core::generators::gen_random;
use pgsolve_core::oracle::brute_force_regions;
use pgsolve_core::solvers::{check_call_bound, QuasiVariant};
use pgsolve_core::{solve, Algorithm, Arena, OptFlags, SolverConfig};
use proptest::prelude::*;

fn small_arena() -> impl Strategy<Value = Arena> {
    (2usize..=9, 1u32..=6, any::<u64>()).prop_flat_map(|(n, d, seed)| {
        (1..n).prop_map(move |hi| gen_random(n, d, 1, hi, seed).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn every_configuration_matches_brute_force(a in small_arena()) {
        let truth = brute_force_regions(&a).unwrap();
        for alg in Algorithm::ALL {
            for opts in OptFlags::subsets(alg) {
                let (sol, stats) = solve(&a, &SolverConfig::new(alg).with_opts(opts)).unwrap();
                prop_assert!(sol.same_regions(&truth), "{alg} {opts}");
                prop_assert_eq!(stats.iterations + 1, stats.recursive_calls);
            }
        }
    }

    #[test]
    fn plain_runs_respect_call_bounds(a in small_arena()) {
        for (alg, variant) in [(Algorithm::Liverpool, QuasiVariant::Liverpool), (Algorithm::Warsaw, QuasiVariant::Warsaw)] {
            let (_, stats) = solve(&a, &SolverConfig::new(alg)).unwrap();
            let p = stats.root_precision.unwrap();
            prop_assert!(check_call_bound(&stats, variant, stats.root_priority, a.num_vertices() as u64, p.log_sum()));
        }
    }

    #[test]
    fn liverpool_depth_is_bounded(a in small_arena()) {
        let (_, stats) = solve(&a, &SolverConfig::new(Algorithm::Liverpool)).unwrap();
        let p = stats.root_precision.unwrap();
        prop_assert!(stats.max_recursion_depth <= stats.root_priority + p.log_sum() + 1);
    }
}

#[test]
fn warsaw_follows_zielonka_when_never_truncated() {
    let mut compared = 0;
    for seed in 0..300 {
        let n = 100 + (seed as usize * 7) % 400;
        let a = gen_random(n, n as u32, 10, 40, seed).unwrap();
        let (z, zs) = solve(&a, &SolverConfig::optimised(Algorithm::Zielonka)).unwrap();
        let (w, ws) = solve(&a, &SolverConfig::optimised(Algorithm::Warsaw)).unwrap();
        assert!(z.same_regions(&w));
        if !ws.dirty_flag_fired {
            compared += 1;
            assert_eq!(ws.iterations, zs.iterations, "seed {seed}");
        }
    }
    assert!(compared > 0);
}

#[test]
fn zielonka_strategies_certify_large_games() {
    for seed in 0..200u64 {
        let n = 20 + (seed as usize * 37) % 480;
        let hi = if seed % 2 == 0 { 3 } else { 12 };
        let a = gen_random(n, n as u32, 1, hi, seed).unwrap();
        let (sol, _) = solve(&a, &SolverConfig::optimised(Algorithm::Zielonka)).unwrap();
        let report = pgsolve_core::oracle::verify_solution(&a, &sol);
        assert!(report.passed() && report.strategies_checked, "seed {seed}: {report}");
    }
}
