use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use pgsolve_core::generators::{gen_random, gen_single_priority, gen_worstcase, Rng};
use pgsolve_core::{normalize, parse_pg, Arena};

/// Out-degree range of the "high degree" random suite.
pub const HIGH_DEGREE: (usize, usize) = (10, 50);
/// Out-degree range of the "low degree" random suite.
pub const LOW_DEGREE: (usize, usize) = (1, 3);

#[derive(Debug, Clone)]
pub struct GameSource {
    /// `<suite>/<member>`; generated members carry their seed.
    pub id: String,
    /// Normalized and ready to solve.
    pub arena: Arena,
}

impl GameSource {
    pub fn suite(&self) -> &str {
        self.id.split('/').next().unwrap_or("")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuiteSpec {
    Empty,
    Worstcase { lo: usize, hi: usize },
    RandomHigh { count: usize, n_lo: usize, n_hi: usize },
    RandomLow { count: usize, n_lo: usize, n_hi: usize },
    SinglePriority { count: usize },
    /// A `.gm` file, or every `.gm` file of a directory.
    Path(PathBuf),
}

#[derive(Debug)]
pub struct SuiteError(pub String);

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SuiteError {}

fn range(text: &str) -> Result<(usize, usize), SuiteError> {
    let bad = || SuiteError(format!("expected a range like 10-20, got `{text}`"));
    let (lo, hi) = text.split_once('-').ok_or_else(bad)?;
    let lo = lo.parse().map_err(|_| bad())?;
    let hi = hi.parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn count(text: &str) -> Result<usize, SuiteError> {
    text.parse().map_err(|_| SuiteError(format!("bad count `{text}`")))
}

impl FromStr for SuiteSpec {
    type Err = SuiteError;

    /// `empty`, `worstcase[:LO-HI]`, `random-high[:COUNT[:NLO-NHI]]`, `random-low[...]`,
    /// `single-priority[:COUNT]`, or a path.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or("");
        let args: Vec<&str> = parts.collect();
        let random = |default_hi: usize| -> Result<(usize, usize, usize), SuiteError> {
            let c = args.first().map(|a| count(a)).transpose()?.unwrap_or(20);
            let (lo, hi) = args.get(1).map(|a| range(a)).transpose()?.unwrap_or((100, default_hi));
            if lo < 2 {
                return Err(SuiteError("random games need at least 2 vertices".into()));
            }
            Ok((c, lo, hi))
        };
        let spec = match kind {
            "empty" => SuiteSpec::Empty,
            "worstcase" => {
                let (lo, hi) = args.first().map(|a| range(a)).transpose()?.unwrap_or((1, 30));
                if lo < 1 {
                    return Err(SuiteError("worstcase members start at k = 1".into()));
                }
                SuiteSpec::Worstcase { lo, hi }
            }
            "random-high" => {
                let (count, n_lo, n_hi) = random(2000)?;
                SuiteSpec::RandomHigh { count, n_lo, n_hi }
            }
            "random-low" => {
                let (count, n_lo, n_hi) = random(500)?;
                SuiteSpec::RandomLow { count, n_lo, n_hi }
            }
            "single-priority" => SuiteSpec::SinglePriority {
                count: args.first().map(|a| count(a)).transpose()?.unwrap_or(5),
            },
            _ if args.is_empty() && !s.is_empty() => SuiteSpec::Path(PathBuf::from(s)),
            _ => return Err(SuiteError(format!("unknown suite `{s}`"))),
        };
        Ok(spec)
    }
}

fn random_suite(
    name: &str,
    count: usize,
    n_range: (usize, usize),
    degree: (usize, usize),
    rng: &mut Rng,
) -> Result<Vec<GameSource>, SuiteError> {
    (0..count)
        .map(|i| {
            let n = rng.range(n_range.0 as u64, n_range.1 as u64) as usize;
            let seed = rng.next_u64();
            let hi = degree.1.min(n - 1);
            let lo = degree.0.min(hi);
            let arena = gen_random(n, n as u32, lo, hi, seed).map_err(|e| SuiteError(e.to_string()))?;
            Ok(GameSource {
                id: format!("{name}/{i:03}-n{n}-s{seed}"),
                arena,
            })
        })
        .collect()
}

fn load_file(path: &Path) -> Result<GameSource, SuiteError> {
    let bytes = std::fs::read(path).map_err(|e| SuiteError(format!("{}: {e}", path.display())))?;
    let parsed = parse_pg(&bytes).map_err(|e| SuiteError(format!("{}: {e}", path.display())))?;
    let (arena, _) = normalize(&parsed).map_err(|e| SuiteError(format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(GameSource {
        id: format!("file/{stem}"),
        arena,
    })
}

/// Materialises a suite. Random suites draw sizes and per-game seeds from `seed`.
pub fn build_suite(spec: &SuiteSpec, seed: u64) -> Result<Vec<GameSource>, SuiteError> {
    let mut rng = Rng::new(seed);
    match spec {
        SuiteSpec::Empty => Ok(Vec::new()),
        SuiteSpec::Worstcase { lo, hi } => (*lo..=*hi)
            .map(|k| {
                Ok(GameSource {
                    id: format!("worstcase/k{k}"),
                    arena: gen_worstcase(k).map_err(|e| SuiteError(e.to_string()))?,
                })
            })
            .collect(),
        SuiteSpec::RandomHigh { count, n_lo, n_hi } => {
            random_suite("random-high", *count, (*n_lo, *n_hi), HIGH_DEGREE, &mut rng)
        }
        SuiteSpec::RandomLow { count, n_lo, n_hi } => {
            random_suite("random-low", *count, (*n_lo, *n_hi), LOW_DEGREE, &mut rng)
        }
        SuiteSpec::SinglePriority { count } => (0..*count)
            .map(|i| {
                let n = rng.range(2, 1000) as usize;
                let p = rng.range(1, 10) as u32;
                Ok(GameSource {
                    id: format!("single-priority/{i:03}-n{n}-p{p}"),
                    arena: gen_single_priority(n, p).map_err(|e| SuiteError(e.to_string()))?,
                })
            })
            .collect(),
        SuiteSpec::Path(path) if path.is_dir() => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(path)
                .map_err(|e| SuiteError(format!("{}: {e}", path.display())))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "gm"))
                .collect();
            files.sort();
            files.iter().map(|p| load_file(p)).collect()
        }
        SuiteSpec::Path(path) => Ok(vec![load_file(path)?]),
    }
}
