use std::collections::BTreeMap;
use std::fmt::Write as _;

use pgsolve_core::{Algorithm, OptFlags};

use crate::record::{BenchRecord, Status};

/// A re-plotting table: one row per game, one iteration column per solver configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub name: String,
    pub csv: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorstcasePoint {
    pub k: usize,
    pub n: usize,
    pub zielonka: Option<u64>,
    pub liverpool: Option<u64>,
    pub warsaw: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WorstcaseReport {
    pub points: Vec<WorstcasePoint>,
    /// `exp` of the least-squares slope of `ln(iterations)` against `k`.
    pub growth_per_step: Option<f64>,
    /// The same against `n`.
    pub growth_per_vertex: Option<f64>,
    /// Smallest `n` at which both quasipolynomial solvers need strictly fewer iterations.
    pub crossover_n: Option<usize>,
    /// `(sizes with liverpool <= warsaw, sizes compared)` from the crossover on.
    pub liverpool_le_warsaw: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Summary {
    pub text: String,
    pub figures: Vec<Figure>,
    pub worstcase: Option<WorstcaseReport>,
    /// Per random suite: `(games with warsaw <= liverpool, games compared)`.
    pub warsaw_le_liverpool: BTreeMap<String, (usize, usize)>,
}

fn suite_of(id: &str) -> &str {
    id.split('/').next().unwrap_or("")
}

fn label(algorithm: Algorithm, opts: OptFlags) -> String {
    format!("{algorithm}[{opts}]")
}

/// `exp(slope)` of the least-squares line through `(x, ln y)`.
fn growth_ratio(points: &[(f64, u64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0).map(|&(x, y)| (x, (y as f64).ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| (sxy / sxx).exp())
}

/// Iterations per game for the first configuration seen of `algorithm`.
fn series<'a>(records: &[&'a BenchRecord], algorithm: Algorithm) -> BTreeMap<&'a str, u64> {
    let Some(opts) = records.iter().find(|r| r.algorithm == algorithm).map(|r| r.opt_flags) else {
        return BTreeMap::new();
    };
    records
        .iter()
        .filter(|r| r.algorithm == algorithm && r.opt_flags == opts && r.status == Status::Ok)
        .filter_map(|r| Some((r.game_id.as_str(), r.iterations?)))
        .collect()
}

fn worstcase_report(records: &[&BenchRecord]) -> WorstcaseReport {
    let z = series(records, Algorithm::Zielonka);
    let l = series(records, Algorithm::Liverpool);
    let w = series(records, Algorithm::Warsaw);
    let mut points: Vec<WorstcasePoint> = Vec::new();
    for r in records {
        let Some(k) = r.game_id.rsplit_once("/k").and_then(|(_, k)| k.parse().ok()) else {
            continue;
        };
        if points.iter().any(|p| p.k == k) {
            continue;
        }
        let id = r.game_id.as_str();
        points.push(WorstcasePoint {
            k,
            n: r.n,
            zielonka: z.get(id).copied(),
            liverpool: l.get(id).copied(),
            warsaw: w.get(id).copied(),
        });
    }
    points.sort_by_key(|p| p.k);
    let zs = |f: fn(&WorstcasePoint) -> f64| points.iter().filter_map(|p| Some((f(p), p.zielonka?))).collect::<Vec<_>>();
    let crossover_n = points
        .iter()
        .find(|p| matches!((p.zielonka, p.liverpool, p.warsaw), (Some(z), Some(l), Some(w)) if l < z && w < z))
        .map(|p| p.n);
    let liverpool_le_warsaw = crossover_n.map(|c| {
        let compared: Vec<_> = points
            .iter()
            .filter(|p| p.n >= c)
            .filter_map(|p| Some((p.liverpool?, p.warsaw?)))
            .collect();
        (compared.iter().filter(|(l, w)| l <= w).count(), compared.len())
    });
    WorstcaseReport {
        growth_per_step: growth_ratio(&zs(|p| p.k as f64)),
        growth_per_vertex: growth_ratio(&zs(|p| p.n as f64)),
        crossover_n,
        liverpool_le_warsaw,
        points,
    }
}

fn figure(suite: &str, records: &[&BenchRecord]) -> Figure {
    let mut configs: Vec<(Algorithm, OptFlags)> = Vec::new();
    let mut games: Vec<(&str, usize)> = Vec::new();
    for r in records {
        if !configs.contains(&(r.algorithm, r.opt_flags)) {
            configs.push((r.algorithm, r.opt_flags));
        }
        if !games.iter().any(|g| g.0 == r.game_id) {
            games.push((&r.game_id, r.n));
        }
    }
    let mut csv = String::from("game_id,n");
    for &(a, o) in &configs {
        write!(csv, ",{}", label(a, o)).unwrap();
    }
    csv.push('\n');
    for (id, n) in games {
        write!(csv, "{id},{n}").unwrap();
        for &(a, o) in &configs {
            let it = records
                .iter()
                .find(|r| r.game_id == id && r.algorithm == a && r.opt_flags == o)
                .and_then(|r| r.iterations);
            write!(csv, ",{}", it.map(|v| v.to_string()).unwrap_or_default()).unwrap();
        }
        csv.push('\n');
    }
    Figure {
        name: format!("{suite}.csv"),
        csv,
    }
}

/// Aggregates per configuration, worst-case trend figures and per-suite tables.
pub fn summarize(records: &[BenchRecord]) -> Summary {
    let mut summary = Summary::default();
    let mut text = String::new();

    let mut configs: Vec<(Algorithm, OptFlags)> = Vec::new();
    for r in records {
        if !configs.contains(&(r.algorithm, r.opt_flags)) {
            configs.push((r.algorithm, r.opt_flags));
        }
    }
    writeln!(text, "{:<24} {:>6} {:>8} {:>8} {:>14} {:>10} {:>12}", "solver", "games", "timeouts", "verified", "iterations", "median", "max").unwrap();
    for &(a, o) in &configs {
        let rows: Vec<&BenchRecord> = records.iter().filter(|r| r.algorithm == a && r.opt_flags == o).collect();
        let mut its: Vec<u64> = rows.iter().filter_map(|r| r.iterations).collect();
        its.sort_unstable();
        let timeouts = rows.iter().filter(|r| r.status == Status::Timeout).count();
        let verified = rows.iter().filter(|r| r.verified).count();
        writeln!(
            text,
            "{:<24} {:>6} {:>8} {:>8} {:>14} {:>10} {:>12}",
            label(a, o),
            rows.len(),
            timeouts,
            verified,
            its.iter().sum::<u64>(),
            its.get(its.len() / 2).map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
            its.last().map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
        )
        .unwrap();
    }

    let mut suites: Vec<&str> = Vec::new();
    for r in records {
        let s = suite_of(&r.game_id);
        if !suites.contains(&s) {
            suites.push(s);
        }
    }
    for suite in suites {
        let rows: Vec<&BenchRecord> = records.iter().filter(|r| suite_of(&r.game_id) == suite).collect();
        summary.figures.push(figure(suite, &rows));
        if suite == "worstcase" {
            let report = worstcase_report(&rows);
            let fmt_ratio = |r: Option<f64>| r.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
            writeln!(text, "\nworstcase: {} sizes", report.points.len()).unwrap();
            writeln!(text, "  zielonka growth per member: {}", fmt_ratio(report.growth_per_step)).unwrap();
            writeln!(text, "  zielonka growth per vertex: {}", fmt_ratio(report.growth_per_vertex)).unwrap();
            match report.crossover_n {
                Some(n) => writeln!(text, "  both quasipolynomial solvers below zielonka from n = {n}").unwrap(),
                None => writeln!(text, "  no crossover in the measured range").unwrap(),
            }
            if let Some((le, total)) = report.liverpool_le_warsaw {
                writeln!(text, "  liverpool <= warsaw on {le} of {total} sizes from the crossover on").unwrap();
            }
            summary.worstcase = Some(report);
        } else if suite.starts_with("random") {
            let l = series(&rows, Algorithm::Liverpool);
            let w = series(&rows, Algorithm::Warsaw);
            let compared: Vec<bool> = w.iter().filter_map(|(id, wi)| Some(*wi <= *l.get(id)?)).collect();
            if !compared.is_empty() {
                let le = compared.iter().filter(|&&b| b).count();
                writeln!(text, "\n{suite}: warsaw <= liverpool on {le} of {} games", compared.len()).unwrap();
                summary.warsaw_le_liverpool.insert(suite.to_string(), (le, compared.len()));
            }
        }
    }
    summary.text = text;
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, n: usize, algorithm: Algorithm, iterations: u64) -> BenchRecord {
        BenchRecord {
            game_id: id.into(),
            n,
            m: n,
            d: 2,
            algorithm,
            opt_flags: OptFlags::NONE,
            iterations: Some(iterations),
            recursive_calls: Some(iterations + 1),
            bound_value: None,
            wall_time_ns: 0,
            verified: true,
            status: Status::Ok,
        }
    }

    #[test]
    fn one_game_three_rows() {
        let records: Vec<_> = Algorithm::ALL.iter().map(|&a| rec("file/x", 4, a, 3)).collect();
        let s = summarize(&records);
        assert_eq!(s.text.lines().count(), 4);
        assert_eq!(s.figures.len(), 1);
        assert_eq!(s.figures[0].csv.lines().nth(1), Some("file/x,4,3,3,3"));
    }

    #[test]
    fn geometric_series_fit_exactly() {
        let pts: Vec<(f64, u64)> = (0..6).map(|i| (i as f64, 3u64.pow(i))).collect();
        assert!((growth_ratio(&pts).unwrap() - 3.0).abs() < 1e-9);
        assert_eq!(growth_ratio(&pts[..1]), None);
    }

    #[test]
    fn crossover_and_ordering() {
        let mut records = Vec::new();
        for (k, (z, l, w)) in [(1, (1, 5, 6)), (2, (10, 8, 9)), (3, (100, 20, 15)), (4, (1000, 30, 40))] {
            let id = format!("worstcase/k{k}");
            records.push(rec(&id, 3 * k, Algorithm::Zielonka, z));
            records.push(rec(&id, 3 * k, Algorithm::Liverpool, l));
            records.push(rec(&id, 3 * k, Algorithm::Warsaw, w));
        }
        let report = summarize(&records).worstcase.unwrap();
        assert_eq!(report.crossover_n, Some(6));
        assert_eq!(report.liverpool_le_warsaw, Some((2, 3)));
        assert!((report.growth_per_step.unwrap() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn random_ordering_statistic() {
        let records = vec![
            rec("random-low/0", 9, Algorithm::Liverpool, 50),
            rec("random-low/0", 9, Algorithm::Warsaw, 20),
            rec("random-low/1", 9, Algorithm::Liverpool, 10),
            rec("random-low/1", 9, Algorithm::Warsaw, 20),
        ];
        assert_eq!(summarize(&records).warsaw_le_liverpool["random-low"], (1, 2));
    }
}
