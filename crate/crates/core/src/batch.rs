//! Census tabulation: parse a census, evaluate every diagram on a worker
//! pool, and write records in input order.
//!
//! Each diagram is reduced to its canonical form first (after optional kink
//! removal), so symmetric re-encodings give identical records and share a
//! cache entry.

use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cache::{cache_key, ResultCache};
use crate::coloring::{wirtinger_number, wirtinger_oracle_with_bound, Certificate, SearchOptions, DEFAULT_ORACLE_BOUND};
use crate::diagram::{parse_gauss, Diagram, DiagramError, EMPTY_CODE_MARKER};
use crate::passes::overpass_number;
use crate::sum::{decompose, is_composite, reduce_kinks};

pub const ENGINE_VERSION: &str = concat!("bridgekit-", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
    /// Tab-separated summary lines for reading at a terminal.
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub max_k: Option<usize>,
    pub time_limit_ms: u64,
    pub jobs: usize,
    pub oracle_check: bool,
    pub oracle_bound: usize,
    pub output_format: OutputFormat,
    pub cache_path: Option<PathBuf>,
    pub emit_certificate: bool,
    /// Remove kinks before evaluating.
    pub reduce: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_k: None,
            time_limit_ms: 30_000,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            oracle_check: false,
            oracle_bound: DEFAULT_ORACLE_BOUND,
            output_format: OutputFormat::Csv,
            cache_path: None,
            emit_certificate: false,
            reduce: false,
        }
    }
}

impl RunConfig {
    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            max_k: self.max_k,
            time_limit: Some(Duration::from_millis(self.time_limit_ms.max(1))),
            // parallelism comes from evaluating diagrams side by side
            parallel: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaStatus {
    Exact,
    LowerBound,
    Skipped,
}

impl OmegaStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            OmegaStatus::Exact => "exact",
            OmegaStatus::LowerBound => "lower_bound",
            OmegaStatus::Skipped => "skipped",
        }
    }
}

/// One diagram's invariants. Fields other than `name` are `None` for
/// skipped lines; for those, `code` holds the raw input text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchRecord {
    pub name: String,
    pub code: String,
    pub n: Option<usize>,
    /// Exact value, or the lower bound when `omega_status` is `lower_bound`.
    pub omega: Option<usize>,
    pub omega_status: OmegaStatus,
    pub overpass: Option<usize>,
    pub composite: Option<bool>,
    pub summands: Option<usize>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    pub engine_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// The CSV columns of a record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub name: String,
    pub code: String,
    pub n: Option<usize>,
    pub omega: Option<usize>,
    pub omega_status: OmegaStatus,
    pub overpass: Option<usize>,
    pub composite: Option<bool>,
    pub summands: Option<usize>,
    pub elapsed_ms: u64,
}

pub const CSV_COLUMNS: [&str; 9] =
    ["name", "code", "n", "omega", "omega_status", "overpass", "composite", "summands", "elapsed_ms"];

impl From<&BatchRecord> for CsvRow {
    fn from(r: &BatchRecord) -> Self {
        CsvRow {
            name: r.name.clone(),
            code: r.code.clone(),
            n: r.n,
            omega: r.omega,
            omega_status: r.omega_status,
            overpass: r.overpass,
            composite: r.composite,
            summands: r.summands,
            elapsed_ms: r.elapsed_ms,
        }
    }
}

/// One non-comment line of a census file.
#[derive(Clone, Debug)]
pub struct CensusLine {
    pub line_no: usize,
    pub name: String,
    pub raw_code: String,
    pub diagram: Result<Diagram, DiagramError>,
}

/// Splits census text into lines of `[name<TAB>]code`. Blank lines and
/// lines starting with `#` are ignored; unnamed lines get `line<N>`.
pub fn parse_census(text: &str) -> Vec<CensusLine> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let (name, code) = match trimmed.split_once('\t') {
            Some((name, code)) => (name.trim().to_string(), code.trim()),
            None => (format!("line{line_no}"), trimmed.trim()),
        };
        let diagram = if code == EMPTY_CODE_MARKER { Ok(Diagram::unknot()) } else { parse_gauss(code) };
        out.push(CensusLine { line_no, name, raw_code: code.to_string(), diagram });
    }
    out
}

#[derive(Debug, Error)]
pub enum BatchError {
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cache {path}: {source}")]
    Cache { path: PathBuf, source: io::Error },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BatchSummary {
    pub records: usize,
    pub exact: usize,
    pub lower_bound: usize,
    pub skipped: usize,
    pub cache_hits: usize,
    pub oracle_checked: usize,
    pub oracle_mismatches: usize,
    /// Sum of per-record compute times.
    pub compute_ms: u64,
    pub wall_ms: u64,
}

impl std::fmt::Display for BatchSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "# records={} exact={} lower_bound={} skipped={} cache_hits={} oracle_checked={} oracle_mismatches={} compute_ms={} wall_ms={}",
            self.records,
            self.exact,
            self.lower_bound,
            self.skipped,
            self.cache_hits,
            self.oracle_checked,
            self.oracle_mismatches,
            self.compute_ms,
            self.wall_ms
        )
    }
}

/// Destination for records, written strictly in input order.
pub trait RecordSink {
    fn write_record(&mut self, r: &BatchRecord) -> Result<(), BatchError>;
    fn finish(&mut self) -> Result<(), BatchError> {
        Ok(())
    }
}

impl RecordSink for Vec<BatchRecord> {
    fn write_record(&mut self, r: &BatchRecord) -> Result<(), BatchError> {
        self.push(r.clone());
        Ok(())
    }
}

pub struct CsvSink<W: Write> {
    w: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(w: W) -> Self {
        CsvSink { w: csv::Writer::from_writer(w) }
    }

    pub fn into_inner(self) -> W {
        self.w.into_inner().unwrap_or_else(|e| panic!("flush failed: {}", e.error()))
    }
}

impl<W: Write> RecordSink for CsvSink<W> {
    fn write_record(&mut self, r: &BatchRecord) -> Result<(), BatchError> {
        self.w.serialize(CsvRow::from(r))?;
        Ok(())
    }

    fn finish(&mut self) -> Result<(), BatchError> {
        self.w.flush()?;
        Ok(())
    }
}

pub struct JsonlSink<W: Write> {
    w: W,
}

impl<W: Write> JsonlSink<W> {
    pub fn new(w: W) -> Self {
        JsonlSink { w }
    }

    pub fn into_inner(self) -> W {
        self.w
    }
}

impl<W: Write> RecordSink for JsonlSink<W> {
    fn write_record(&mut self, r: &BatchRecord) -> Result<(), BatchError> {
        let line = serde_json::to_string(r).map_err(io::Error::from)?;
        writeln!(self.w, "{line}")?;
        Ok(())
    }

    fn finish(&mut self) -> Result<(), BatchError> {
        self.w.flush()?;
        Ok(())
    }
}

pub struct TextSink<W: Write> {
    w: W,
}

impl<W: Write> TextSink<W> {
    pub fn new(w: W) -> Self {
        TextSink { w }
    }
}

impl<W: Write> RecordSink for TextSink<W> {
    fn write_record(&mut self, r: &BatchRecord) -> Result<(), BatchError> {
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
        match r.omega_status {
            OmegaStatus::Skipped => writeln!(
                self.w,
                "{}\tskipped\t{}",
                r.name,
                r.diagnostic.as_deref().unwrap_or("")
            )?,
            status => writeln!(
                self.w,
                "{}\tn={}\tomega{}{}\toverpass={}\tsummands={}\t{}ms",
                r.name,
                opt(r.n),
                if status == OmegaStatus::Exact { "=" } else { ">=" },
                opt(r.omega),
                opt(r.overpass),
                opt(r.summands),
                r.elapsed_ms
            )?,
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<(), BatchError> {
        self.w.flush()?;
        Ok(())
    }
}

pub fn read_csv_rows<R: io::Read>(r: R) -> Result<Vec<CsvRow>, csv::Error> {
    csv::Reader::from_reader(r).deserialize().collect()
}

pub fn read_jsonl_records<R: io::BufRead>(r: R) -> io::Result<Vec<BatchRecord>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line).map_err(io::Error::from)?);
        }
    }
    Ok(out)
}

/// Computes the record for one diagram (name left empty).
pub fn evaluate(d: &Diagram, cfg: &RunConfig) -> BatchRecord {
    let started = Instant::now();
    let d = if cfg.reduce { reduce_kinks(d) } else { d.clone() };
    let canon = d.canonical_form();
    let out = wirtinger_number(&canon, &cfg.search_options());
    let composite = is_composite(&canon).is_some();
    let summands = if composite { decompose(&canon).len() } else { 1 };
    BatchRecord {
        name: String::new(),
        code: canon.to_code_cell(),
        n: Some(canon.n()),
        omega: Some(out.k),
        omega_status: if out.is_exact() { OmegaStatus::Exact } else { OmegaStatus::LowerBound },
        overpass: Some(overpass_number(&canon)),
        composite: Some(composite),
        summands: Some(summands),
        elapsed_ms: started.elapsed().as_millis() as u64,
        certificate: out.certificate,
        engine_version: ENGINE_VERSION.to_string(),
        diagnostic: None,
    }
}

fn skipped(line: &CensusLine, err: &DiagramError) -> BatchRecord {
    BatchRecord {
        name: line.name.clone(),
        code: line.raw_code.clone(),
        n: None,
        omega: None,
        omega_status: OmegaStatus::Skipped,
        overpass: None,
        composite: None,
        summands: None,
        elapsed_ms: 0,
        certificate: None,
        engine_version: ENGINE_VERSION.to_string(),
        diagnostic: Some(format!("line {}: {err}", line.line_no)),
    }
}

enum Slot {
    Done(BatchRecord),
    Hit(BatchRecord),
    Compute(Diagram),
}

/// Evaluates every census line and writes one record per line, in input
/// order, to `sink`. Work runs on a pool of `cfg.jobs` threads; the cache
/// and the sink are only touched from the calling thread.
pub fn run_batch<S: RecordSink + Send>(
    lines: &[CensusLine],
    cfg: &RunConfig,
    sink: &mut S,
) -> Result<BatchSummary, BatchError> {
    let started = Instant::now();
    let mut cache = match &cfg.cache_path {
        Some(path) => Some(
            ResultCache::open(path).map_err(|source| BatchError::Cache { path: path.clone(), source })?,
        ),
        None => None,
    };
    let jobs = cfg.jobs.max(1);
    let chunk = jobs * 8;
    let mut summary = BatchSummary::default();

    crate::par::with_jobs(jobs, || -> Result<(), BatchError> {
        for group in lines.chunks(chunk) {
            let mut slots: Vec<Slot> = Vec::with_capacity(group.len());
            for line in group {
                slots.push(match &line.diagram {
                    Err(e) => Slot::Done(skipped(line, e)),
                    Ok(d) => {
                        let d = if cfg.reduce { reduce_kinks(d) } else { d.clone() };
                        let canon = d.canonical_form();
                        match cache.as_ref().and_then(|c| c.lookup(&cache_key(&canon.to_code_cell()))) {
                            Some(hit) => Slot::Hit(hit.clone()),
                            None => Slot::Compute(canon),
                        }
                    }
                });
            }
            let todo: Vec<&Diagram> = slots
                .iter()
                .filter_map(|s| match s {
                    Slot::Compute(d) => Some(d),
                    _ => None,
                })
                .collect();
            // canonical diagrams are already kink-free when `reduce` is set
            let fresh_cfg = RunConfig { reduce: false, ..cfg.clone() };
            let mut fresh = crate::par::map_slice(&todo, |d| evaluate(d, &fresh_cfg)).into_iter();

            for (slot, line) in slots.into_iter().zip(group) {
                let mut rec = match slot {
                    Slot::Done(r) => r,
                    Slot::Hit(r) => {
                        summary.cache_hits += 1;
                        r
                    }
                    Slot::Compute(_) => {
                        let r = fresh.next().expect("one result per computed slot");
                        if let (Some(c), OmegaStatus::Exact) = (cache.as_mut(), r.omega_status) {
                            let path = cfg.cache_path.clone().unwrap_or_default();
                            c.store(&cache_key(&r.code), &r).map_err(|source| BatchError::Cache { path, source })?;
                        }
                        r
                    }
                };
                rec.name = line.name.clone();
                if cfg.oracle_check {
                    oracle_check(&mut rec, line, cfg, &mut summary);
                }
                if !cfg.emit_certificate {
                    rec.certificate = None;
                }
                match rec.omega_status {
                    OmegaStatus::Exact => summary.exact += 1,
                    OmegaStatus::LowerBound => summary.lower_bound += 1,
                    OmegaStatus::Skipped => summary.skipped += 1,
                }
                summary.records += 1;
                summary.compute_ms += rec.elapsed_ms;
                sink.write_record(&rec)?;
            }
        }
        Ok(())
    })?;
    sink.finish()?;
    summary.wall_ms = started.elapsed().as_millis() as u64;
    Ok(summary)
}

/// Replaces a disagreeing exact value by the exhaustive one and notes it.
fn oracle_check(rec: &mut BatchRecord, line: &CensusLine, cfg: &RunConfig, summary: &mut BatchSummary) {
    if rec.omega_status != OmegaStatus::Exact {
        return;
    }
    let Ok(d) = &line.diagram else { return };
    let d = if cfg.reduce { reduce_kinks(d) } else { d.clone() };
    let Ok(truth) = wirtinger_oracle_with_bound(&d, cfg.oracle_bound) else { return };
    summary.oracle_checked += 1;
    if rec.omega != Some(truth) {
        summary.oracle_mismatches += 1;
        rec.diagnostic = Some(format!("oracle mismatch: search gave {:?}, oracle gives {truth}", rec.omega));
        rec.omega = Some(truth);
        rec.certificate = None;
    }
}
