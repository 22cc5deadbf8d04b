//! Solver-by-suite benchmark matrices. Iterations are the reported metric; wall time is
//! recorded but never compared.

mod record;
mod run;
mod suite;
mod summary;

pub use record::{write_csv, BenchRecord, CsvSink, Status, CSV_HEADER};
pub use run::{bench_game, run_suite, BenchConfig, DEFAULT_TIMEOUT};
pub use suite::{build_suite, GameSource, SuiteError, SuiteSpec, HIGH_DEGREE, LOW_DEGREE};
pub use summary::{summarize, Figure, Summary, WorstcaseReport};
