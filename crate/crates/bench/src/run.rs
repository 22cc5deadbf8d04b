use std::collections::BTreeMap;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use pgsolve_core::oracle::verify_solution;
use pgsolve_core::solvers::effective_bound;
use pgsolve_core::{solve, Algorithm, Solution, SolveError, SolverConfig};
use rayon::prelude::*;

use crate::record::{BenchRecord, Status};
use crate::suite::GameSource;

/// Per-game, per-solver time limit used unless configured otherwise.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(15 * 60);

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub solvers: Vec<SolverConfig>,
    pub timeout: Option<Duration>,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

impl BenchConfig {
    /// Zielonka with the loop shortcut, the two other solvers with all their shortcuts.
    pub fn optimised(algorithms: &[Algorithm]) -> BenchConfig {
        BenchConfig {
            solvers: algorithms.iter().map(|&a| SolverConfig::optimised(a)).collect(),
            timeout: Some(DEFAULT_TIMEOUT),
            jobs: 0,
        }
    }

    pub fn plain(algorithms: &[Algorithm]) -> BenchConfig {
        BenchConfig {
            solvers: algorithms.iter().map(|&a| SolverConfig::new(a)).collect(),
            ..BenchConfig::optimised(&[])
        }
    }
}

/// Runs every configured solver on one game, then cross-checks and verifies the results.
pub fn bench_game(game: &GameSource, cfg: &BenchConfig) -> Vec<BenchRecord> {
    let arena = &game.arena;
    let n = arena.num_vertices();
    let mut records = Vec::with_capacity(cfg.solvers.len());
    let mut solutions: Vec<Option<Solution>> = Vec::with_capacity(cfg.solvers.len());
    for solver in &cfg.solvers {
        let start = Instant::now();
        let outcome = solve(arena, &solver.with_timeout(cfg.timeout));
        let wall_time_ns = start.elapsed().as_nanos() as u64;
        let mut record = BenchRecord {
            game_id: game.id.clone(),
            n,
            m: arena.num_edges(),
            d: arena.max_priority(),
            algorithm: solver.algorithm,
            opt_flags: solver.opts,
            iterations: None,
            recursive_calls: None,
            bound_value: None,
            wall_time_ns,
            verified: false,
            status: Status::Ok,
        };
        match outcome {
            Ok((solution, stats)) => {
                record.iterations = Some(stats.iterations);
                record.recursive_calls = Some(stats.recursive_calls);
                if let (true, Some(variant), Some(p)) =
                    (solver.opts.is_empty(), solver.algorithm.quasi_variant(), stats.root_precision)
                {
                    record.bound_value = Some(effective_bound(variant, stats.root_priority, n as u64, p.log_sum()));
                }
                solutions.push(Some(solution));
            }
            Err(SolveError::Timeout) => {
                record.status = Status::Timeout;
                solutions.push(None);
            }
            Err(e) => {
                record.status = Status::Error(e.to_string());
                solutions.push(None);
            }
        }
        records.push(record);
    }

    // the reference carries strategies when zielonka ran; otherwise it is checked on its own
    let reference = cfg
        .solvers
        .iter()
        .zip(&solutions)
        .position(|(s, sol)| s.algorithm == Algorithm::Zielonka && sol.is_some())
        .or_else(|| solutions.iter().position(Option::is_some));
    let Some(reference) = reference else {
        return records;
    };
    let truth = solutions[reference].as_ref().expect("reference solved");
    let report = verify_solution(arena, truth);
    for (record, solution) in records.iter_mut().zip(&solutions) {
        let Some(solution) = solution else { continue };
        record.verified = report.passed() && solution.same_regions(truth) && verify_solution(arena, solution).passed();
        if !record.verified {
            record.status = Status::Error(if report.passed() {
                "disagrees with the reference solution".into()
            } else {
                format!("verification failed: {report}")
            });
        }
    }
    records
}

/// Benchmarks every game on a worker pool. `sink` sees the records of each game as soon as
/// it and all earlier games are done, so the output order is the suite order.
pub fn run_suite<E>(
    games: &[GameSource],
    cfg: &BenchConfig,
    mut sink: impl FnMut(&BenchRecord) -> Result<(), E>,
) -> Result<Vec<BenchRecord>, E> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .expect("worker pool");
    let (tx, rx) = mpsc::channel();
    let mut all = Vec::new();
    std::thread::scope(|scope| {
        scope.spawn(|| {
            pool.install(|| {
                games.par_iter().enumerate().for_each_with(tx, |tx, (i, game)| {
                    // the receiver only hangs up after a sink error
                    let _ = tx.send((i, bench_game(game, cfg)));
                });
            });
        });
        let mut pending = BTreeMap::new();
        let mut next = 0;
        for (i, records) in rx {
            pending.insert(i, records);
            while let Some(records) = pending.remove(&next) {
                for r in &records {
                    sink(r)?;
                }
                all.extend(records);
                next += 1;
            }
        }
        Ok(())
    })?;
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suite::{build_suite, SuiteSpec};

    #[test]
    fn rings_need_one_zielonka_iteration() {
        let games = build_suite(&SuiteSpec::SinglePriority { count: 3 }, 1).unwrap();
        let records = run_suite(&games, &BenchConfig::optimised(&Algorithm::ALL), |_| Ok::<_, ()>(())).unwrap();
        assert_eq!(records.len(), 9);
        assert!(records.iter().all(|r| r.verified && r.status == Status::Ok));
        for r in records.iter().filter(|r| r.algorithm == Algorithm::Zielonka) {
            assert_eq!(r.iterations, Some(1));
        }
    }

    #[test]
    fn output_follows_suite_order() {
        let games = build_suite(&SuiteSpec::Worstcase { lo: 1, hi: 8 }, 0).unwrap();
        let cfg = BenchConfig { jobs: 3, ..BenchConfig::plain(&Algorithm::ALL) };
        let mut seen = Vec::new();
        let records = run_suite(&games, &cfg, |r| {
            seen.push(r.game_id.clone());
            Ok::<_, ()>(())
        })
        .unwrap();
        let expected: Vec<String> = games.iter().flat_map(|g| vec![g.id.clone(); 3]).collect();
        assert_eq!(seen, expected);
        assert!(records.iter().filter(|r| r.algorithm != Algorithm::Zielonka).all(|r| r.within_bound() == Some(true)));
    }

    #[test]
    fn timeouts_become_rows() {
        let games = build_suite(&SuiteSpec::Worstcase { lo: 24, hi: 24 }, 0).unwrap();
        let cfg = BenchConfig {
            timeout: Some(Duration::from_millis(1)),
            ..BenchConfig::optimised(&[Algorithm::Zielonka])
        };
        let records = run_suite(&games, &cfg, |_| Ok::<_, ()>(())).unwrap();
        assert_eq!(records[0].status, Status::Timeout);
        assert!(!records[0].verified);
    }
}
