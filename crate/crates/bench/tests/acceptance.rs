//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use pgsolve_bench::{build_suite, run_suite, summarize, BenchConfig, BenchRecord, Status, SuiteSpec};
use pgsolve_core::attractor::is_closed;
use pgsolve_core::generators::{gen_random, gen_single_priority, gen_worstcase, Rng};
use pgsolve_core::oracle::{brute_force_regions, enumerate_dominions};
use pgsolve_core::solvers::{LiverpoolSolver, Precision, WarsawSolver};
use pgsolve_core::{parse_pg, solve, write_pg, Algorithm, Arena, OptFlags, Player, SolverConfig, VertexSet};

type Outcome = Result<String, String>;

/// The small-arena corpus shared by the oracle and optimisation criteria.
fn small_corpus() -> Vec<Arena> {
    let mut rng = Rng::new(0x5eed_0001);
    (0..500)
        .map(|_| {
            let n = rng.range(2, 9) as usize;
            let d = rng.range(1, 6) as u32;
            let hi = rng.range(1, n as u64 - 1) as usize;
            gen_random(n, d, 1, hi, rng.next_u64()).unwrap()
        })
        .collect()
}

fn oracle_equivalence(corpus: &[Arena]) -> Outcome {
    for (i, a) in corpus.iter().enumerate() {
        let truth = brute_force_regions(a).map_err(|e| e.to_string())?;
        for alg in Algorithm::ALL {
            let (sol, _) = solve(a, &SolverConfig::new(alg)).map_err(|e| e.to_string())?;
            if !sol.same_regions(&truth) {
                return Err(format!("arena {i}: {alg} differs from brute force"));
            }
        }
    }
    Ok(format!("{} arenas, 3 solvers", corpus.len()))
}

fn check_records(records: &[BenchRecord]) -> Result<(), String> {
    match records.iter().find(|r| r.status != Status::Ok || !r.verified) {
        Some(r) => Err(format!("{} {}: {:?}", r.game_id, r.algorithm, r.status)),
        None => Ok(()),
    }
}

fn cross_solver_at_scale() -> Outcome {
    let games = build_suite(&SuiteSpec::RandomHigh { count: 200, n_lo: 100, n_hi: 2000 }, 2).map_err(|e| e.to_string())?;
    let records = run_suite(&games, &BenchConfig::optimised(&Algorithm::ALL), |_| Ok::<_, ()>(())).unwrap();
    check_records(&records)?;
    Ok(format!("{} games, {} verified records", games.len(), records.len()))
}

fn respects(out: &VertexSet, own: &[VertexSet], opp: &[VertexSet], mine: u64, theirs: u64) -> bool {
    own.iter().filter(|d| d.len() as u64 <= mine).all(|d| d.is_subset(out))
        && opp.iter().filter(|d| d.len() as u64 <= theirs).all(|d| d.is_disjoint(out))
}

fn precision_lemmas() -> Outcome {
    let mut rng = Rng::new(0x5eed_0003);
    let mut calls = 0;
    for i in 0..100 {
        let n = rng.range(2, 8) as usize;
        let d = rng.range(1, 6) as u32;
        let hi = rng.range(1, n as u64 - 1) as usize;
        let a = gen_random(n, d, 1, hi, rng.next_u64()).unwrap();
        let g = a.vertices();
        for player in [Player::Even, Player::Odd] {
            let top = a.max_priority();
            let d = if Player::of_priority(top) == player { top } else { top + 1 };
            let own = enumerate_dominions(&a, &g, player, n).map_err(|e| e.to_string())?.dominions;
            let opp = enumerate_dominions(&a, &g, player.opponent(), n).map_err(|e| e.to_string())?.dominions;
            let mut l = LiverpoolSolver::new(&a, OptFlags::NONE);
            let mut w = WarsawSolver::new(&a, OptFlags::NONE);
            for p_self in 1..=n as u64 {
                for p_opp in 1..=n as u64 {
                    let prec = match player {
                        Player::Even => Precision::new(p_self, p_opp),
                        Player::Odd => Precision::new(p_opp, p_self),
                    };
                    let lo = l.solve_player(player, &g, d, prec).map_err(|e| e.to_string())?;
                    if !is_closed(&a, player, &lo, &g) || !respects(&lo, &own, &opp, p_self, p_opp) {
                        return Err(format!("arena {i}: liverpool {player} at {prec:?}"));
                    }
                    let wo = w.solve_player(player, &g, d, prec).map_err(|e| e.to_string())?;
                    if !respects(&wo, &own, &opp, p_self, p_opp) {
                        return Err(format!("arena {i}: warsaw {player} at {prec:?}"));
                    }
                    calls += 2;
                }
            }
        }
    }
    Ok(format!("100 arenas, {calls} reduced-precision calls"))
}

fn call_bounds() -> Outcome {
    let suites = [
        SuiteSpec::Worstcase { lo: 1, hi: 12 },
        SuiteSpec::RandomHigh { count: 10, n_lo: 100, n_hi: 300 },
        SuiteSpec::RandomLow { count: 20, n_lo: 10, n_hi: 60 },
        SuiteSpec::SinglePriority { count: 5 },
    ];
    let mut checked = 0;
    for spec in &suites {
        let games = build_suite(spec, 4).map_err(|e| e.to_string())?;
        let records = run_suite(&games, &BenchConfig::plain(&Algorithm::ALL), |_| Ok::<_, ()>(())).unwrap();
        check_records(&records)?;
        for r in records.iter().filter(|r| r.algorithm != Algorithm::Zielonka) {
            match r.within_bound() {
                Some(true) => checked += 1,
                _ => return Err(format!("{} {}: {:?} calls, bound {:?}", r.game_id, r.algorithm, r.recursive_calls, r.bound_value)),
            }
        }
    }
    Ok(format!("{checked} optimisation-free runs within bound"))
}

fn worstcase_family() -> Outcome {
    let games = build_suite(&SuiteSpec::Worstcase { lo: 1, hi: 34 }, 0).map_err(|e| e.to_string())?;
    let records = run_suite(&games, &BenchConfig::optimised(&Algorithm::ALL), |_| Ok::<_, ()>(())).unwrap();
    check_records(&records)?;
    let report = summarize(&records).worstcase.ok_or("no worstcase records")?;
    let growth = report.growth_per_step.ok_or("no growth fit")?;
    let per_vertex = report.growth_per_vertex.ok_or("no growth fit")?;
    let crossover = report.crossover_n;
    let (le, total) = report.liverpool_le_warsaw.unwrap_or((0, 0));
    let detail = format!(
        "growth {growth:.3}/member ({per_vertex:.3}/vertex), crossover n = {crossover:?}, liverpool <= warsaw on {le}/{total}"
    );
    let ok = growth >= 1.15 && crossover.is_some_and(|n| n <= 200) && total > 0 && le * 5 >= total * 4;
    if ok { Ok(detail) } else { Err(detail) }
}

fn warsaw_matches_zielonka() -> Outcome {
    let games = build_suite(&SuiteSpec::RandomHigh { count: 100, n_lo: 100, n_hi: 2000 }, 6).map_err(|e| e.to_string())?;
    let mut flagged = 0;
    for g in &games {
        let (_, z) = solve(&g.arena, &SolverConfig::optimised(Algorithm::Zielonka)).map_err(|e| e.to_string())?;
        let (_, w) = solve(&g.arena, &SolverConfig::optimised(Algorithm::Warsaw)).map_err(|e| e.to_string())?;
        if z.iterations < 15 && !w.dirty_flag_fired {
            flagged += 1;
            if z.iterations != w.iterations {
                return Err(format!("{}: zielonka {} vs warsaw {}", g.id, z.iterations, w.iterations));
            }
        }
    }
    if flagged == 0 {
        return Err("no easy game without truncation".into());
    }
    Ok(format!("{flagged} of {} games compared", games.len()))
}

fn optimisation_soundness(corpus: &[Arena]) -> Outcome {
    let mut runs = 0;
    for (i, a) in corpus.iter().enumerate() {
        let truth = brute_force_regions(a).map_err(|e| e.to_string())?;
        for alg in Algorithm::ALL {
            for opts in OptFlags::subsets(alg) {
                let (sol, _) = solve(a, &SolverConfig::new(alg).with_opts(opts)).map_err(|e| e.to_string())?;
                if !sol.same_regions(&truth) {
                    return Err(format!("arena {i}: {alg} with {opts}"));
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} runs over {} arenas", corpus.len()))
}

fn format_round_trip() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    files.sort();
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy();
        let first = parse_pg(&std::fs::read(path).unwrap()).map_err(|e| format!("{name}: {e}"))?;
        let text = write_pg(&first);
        let second = parse_pg(text.as_bytes()).map_err(|e| format!("{name}: rewrite does not parse: {e}"))?;
        if second != first {
            return Err(format!("{name}: arena changed across write and parse"));
        }
        if write_pg(&second) != text {
            return Err(format!("{name}: canonical output is not a fixpoint"));
        }
    }
    if files.len() < 50 {
        return Err(format!("only {} corpus files", files.len()));
    }
    Ok(format!("{} files", files.len()))
}

fn determinism() -> Outcome {
    let params = [(8, 8, 1, 7, 42), (2, 1, 1, 1, 0), (300, 300, 1, 3, 9), (1000, 1000, 10, 50, 77)];
    for &(n, d, lo, hi, seed) in &params {
        if write_pg(&gen_random(n, d, lo, hi, seed).unwrap()) != write_pg(&gen_random(n, d, lo, hi, seed).unwrap()) {
            return Err(format!("gen_random{:?}", (n, d, lo, hi, seed)));
        }
    }
    for k in [1, 10, 34] {
        if write_pg(&gen_worstcase(k).unwrap()) != write_pg(&gen_worstcase(k).unwrap()) {
            return Err(format!("gen_worstcase({k})"));
        }
    }
    if write_pg(&gen_single_priority(17, 3).unwrap()) != write_pg(&gen_single_priority(17, 3).unwrap()) {
        return Err("gen_single_priority".into());
    }
    let spec = SuiteSpec::RandomLow { count: 10, n_lo: 50, n_hi: 500 };
    let texts = |seed| build_suite(&spec, seed).unwrap().iter().map(|g| write_pg(&g.arena)).collect::<Vec<_>>();
    if texts(5) != texts(5) {
        return Err("random suite".into());
    }
    Ok(format!("{} parameter sets", params.len() + 4 + 10))
}

fn main() -> ExitCode {
    let corpus = small_corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("oracle equivalence", Box::new(|| oracle_equivalence(&corpus))),
        ("cross-solver equivalence at scale", Box::new(cross_solver_at_scale)),
        ("precision lemma properties", Box::new(precision_lemmas)),
        ("analytical call bounds", Box::new(call_bounds)),
        ("worst-case family behaviour", Box::new(worstcase_family)),
        ("warsaw matches zielonka on easy games", Box::new(warsaw_matches_zielonka)),
        ("optimisation soundness", Box::new(|| optimisation_soundness(&corpus))),
        ("format round-trip", Box::new(format_round_trip)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
