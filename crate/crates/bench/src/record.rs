use std::io::Write;

use pgsolve_core::solvers::BigUint;
use pgsolve_core::{Algorithm, OptFlags};

pub const CSV_HEADER: [&str; 12] = [
    "game_id",
    "n",
    "m",
    "d",
    "algorithm",
    "opt_flags",
    "iterations",
    "recursive_calls",
    "bound_value",
    "wall_time_ns",
    "verified",
    "status",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Ok,
    Timeout,
    /// Solver refused the input or the solution failed its checks.
    Error(String),
}

impl Status {
    fn label(&self) -> String {
        match self {
            Status::Ok => "ok".into(),
            Status::Timeout => "timeout".into(),
            Status::Error(msg) => format!("error: {msg}"),
        }
    }
}

/// One (game, solver configuration) measurement. Counter fields are `None` on timeouts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub game_id: String,
    pub n: usize,
    pub m: usize,
    pub d: u32,
    pub algorithm: Algorithm,
    pub opt_flags: OptFlags,
    pub iterations: Option<u64>,
    pub recursive_calls: Option<u64>,
    /// Analytical call bound, for optimisation-free quasipolynomial runs only.
    pub bound_value: Option<BigUint>,
    pub wall_time_ns: u64,
    pub verified: bool,
    pub status: Status,
}

impl BenchRecord {
    pub fn within_bound(&self) -> Option<bool> {
        let bound = self.bound_value.as_ref()?;
        Some(BigUint::from(self.recursive_calls?) <= *bound)
    }

    fn fields(&self) -> [String; 12] {
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.game_id.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.d.to_string(),
            self.algorithm.to_string(),
            self.opt_flags.to_string(),
            opt(self.iterations),
            opt(self.recursive_calls),
            self.bound_value.as_ref().map(|b| b.to_string()).unwrap_or_default(),
            self.wall_time_ns.to_string(),
            self.verified.to_string(),
            self.status.label(),
        ]
    }
}

/// Streams records as CSV, header first.
pub struct CsvSink<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(out: W) -> csv::Result<Self> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(CSV_HEADER)?;
        writer.flush()?;
        Ok(CsvSink { writer })
    }

    pub fn write(&mut self, record: &BenchRecord) -> csv::Result<()> {
        self.writer.write_record(record.fields())?;
        // rows are flushed one by one so partial runs leave usable output
        self.writer.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.writer.into_inner().ok().expect("flushed after every row")
    }
}

/// The whole table as a string.
pub fn write_csv(records: &[BenchRecord]) -> String {
    let mut sink = CsvSink::new(Vec::new()).expect("writing to memory");
    for r in records {
        sink.write(r).expect("writing to memory");
    }
    String::from_utf8(sink.into_inner()).expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_for_no_records() {
        assert_eq!(write_csv(&[]), format!("{}\n", CSV_HEADER.join(",")));
    }

    #[test]
    fn timeout_rows_leave_counters_blank() {
        let r = BenchRecord {
            game_id: "g".into(),
            n: 3,
            m: 4,
            d: 2,
            algorithm: Algorithm::Warsaw,
            opt_flags: OptFlags::NONE,
            iterations: None,
            recursive_calls: None,
            bound_value: Some(BigUint::from(23u32)),
            wall_time_ns: 5,
            verified: false,
            status: Status::Timeout,
        };
        let text = write_csv(&[r.clone()]);
        assert_eq!(text.lines().nth(1), Some("g,3,4,2,warsaw,none,,,23,5,false,timeout"));
        assert_eq!(r.within_bound(), None);
    }
}
