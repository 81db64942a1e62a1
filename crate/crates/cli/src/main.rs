use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use bridgekit_core::batch::{
    parse_census, run_batch, CsvSink, JsonlSink, OutputFormat, RecordSink, RunConfig, TextSink, ENGINE_VERSION,
};
use bridgekit_core::coloring::{wirtinger_oracle_with_bound, DEFAULT_ORACLE_BOUND};
use bridgekit_core::diagram::EMPTY_CODE_MARKER;
use bridgekit_core::passes::{consecutive_shared_crossings, minimality_incompatibility_report, pass_decomposition};
use bridgekit_core::sum::reduce_kinks;
use bridgekit_core::{
    connected_sum, decompose, is_composite, overpass_number, parse_gauss, verify_certificate, wirtinger_number,
    Certificate, Diagram, EdgeRef, SearchOptions,
};

#[derive(Parser, Debug)]
#[command(name = "bridgekit", version, about = "Diagrammatic bridge-number invariants of knot diagrams")]
struct Cli {
    /// Output format; batch defaults to csv, other commands to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Per-diagram search time limit.
    #[arg(long, global = true, default_value_t = 30_000, value_parser = clap::value_parser!(u64).range(1..))]
    time_limit_ms: u64,
    /// Largest number of seeds to try.
    #[arg(long, global = true)]
    max_k: Option<usize>,
    /// Worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// JSONL result cache (batch only).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Cross-check exact results against exhaustive search when n is small.
    #[arg(long, global = true)]
    oracle_check: bool,
    /// Include coloring certificates in the output.
    #[arg(long, global = true)]
    emit_certificate: bool,
    /// Remove kinks before computing.
    #[arg(long, global = true)]
    reduce: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
    Text,
}

/// Codes are Gauss codes such as `O1U2O3U1O2U3` (use `.` for the
/// 0-crossing diagram).
#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a code and show its strands and crossings.
    Parse { code: String },
    /// Wirtinger number.
    Wirtinger { code: String },
    /// Overpass decomposition and the minimality report.
    Passes { code: String },
    /// Connected sum of two codes.
    Consum {
        code1: String,
        code2: String,
        /// Cut the first code just before this entry.
        #[arg(long, default_value_t = 0)]
        edge1: usize,
        /// Cut the second code just before this entry.
        #[arg(long, default_value_t = 0)]
        edge2: usize,
    },
    /// Split into diagrammatically prime summands.
    Decompose { code: String },
    /// Replay a certificate (file, or - for stdin) against a code.
    Verify { code: String, certificate: String },
    /// Tabulate a census file (or - for stdin) of `name<TAB>code` lines.
    Batch {
        input: String,
        /// Write records here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    /// Bad input: unparsable code, unreadable file.
    Input(anyhow::Error),
    /// A result failed a consistency check.
    Check(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let format = cli.format.unwrap_or(match cli.command {
        Command::Batch { .. } => Format::Csv,
        _ => Format::Text,
    });
    let jobs = cli.jobs.map(|j| j as usize);
    let out = &mut io::stdout().lock();
    match &cli.command {
        Command::Parse { code } => cmd_parse(&diagram(code, cli.reduce)?, format, out),
        Command::Wirtinger { code } => cmd_wirtinger(cli, &diagram(code, cli.reduce)?, format, jobs, out),
        Command::Passes { code } => cmd_passes(&diagram(code, cli.reduce)?, format, out),
        Command::Consum { code1, code2, edge1, edge2 } => {
            let sum = connected_sum(
                &diagram(code1, cli.reduce)?,
                EdgeRef(*edge1),
                &diagram(code2, cli.reduce)?,
                EdgeRef(*edge2),
            )
            .map_err(|e| anyhow!(e))?;
            let cell = sum.to_code_cell();
            let line = match format {
                Format::Jsonl => json!({ "code": cell, "n": sum.n() }).to_string(),
                Format::Csv => format!("code,n\n{cell},{}", sum.n()),
                Format::Text => cell,
            };
            emit(out, &line)
        }
        Command::Decompose { code } => {
            let d = diagram(code, cli.reduce)?;
            let pieces: Vec<String> = decompose(&d).iter().map(|p| p.to_code_cell()).collect();
            let text = match format {
                Format::Jsonl => json!({ "code": d.to_code_cell(), "summands": pieces }).to_string(),
                Format::Csv => {
                    let rows: Vec<String> = pieces.iter().enumerate().map(|(i, p)| format!("{},{p}", i + 1)).collect();
                    format!("index,code\n{}", rows.join("\n"))
                }
                Format::Text => pieces.join("\n"),
            };
            emit(out, &text)
        }
        Command::Verify { code, certificate } => {
            let d = diagram(code, cli.reduce)?;
            let text = read_input(certificate)?;
            let cert = Certificate::from_json(&text).context("certificate is not valid JSON")?;
            match verify_certificate(&d, &cert) {
                Ok(()) => emit(out, &format!("ok: k={}", cert.k)),
                Err(e) => Err(Failure::Check(format!("certificate rejected: {e}"))),
            }
        }
        Command::Batch { input, output } => {
            let text = read_input(input)?;
            let cfg = RunConfig {
                max_k: cli.max_k,
                time_limit_ms: cli.time_limit_ms,
                jobs: jobs.unwrap_or(RunConfig::default().jobs),
                oracle_check: cli.oracle_check,
                oracle_bound: DEFAULT_ORACLE_BOUND,
                output_format: match format {
                    Format::Csv => OutputFormat::Csv,
                    Format::Jsonl => OutputFormat::Jsonl,
                    Format::Text => OutputFormat::Text,
                },
                cache_path: cli.cache.clone(),
                emit_certificate: cli.emit_certificate,
                reduce: cli.reduce,
            };
            let sink: Box<dyn Write + Send> = match output {
                Some(path) => Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?),
                None => Box::new(io::stdout()),
            };
            let summary = batch(&text, &cfg, BufWriter::new(sink))?;
            eprintln!("{summary}");
            if summary.oracle_mismatches > 0 {
                return Err(Failure::Check(format!("{} oracle mismatches", summary.oracle_mismatches)));
            }
            Ok(())
        }
    }
}

fn batch<W: Write + Send>(text: &str, cfg: &RunConfig, w: W) -> Result<bridgekit_core::batch::BatchSummary, Failure> {
    let lines = parse_census(text);
    let result = match cfg.output_format {
        OutputFormat::Csv => run_with(&lines, cfg, CsvSink::new(w)),
        OutputFormat::Jsonl => run_with(&lines, cfg, JsonlSink::new(w)),
        OutputFormat::Text => run_with(&lines, cfg, TextSink::new(w)),
    };
    result.map_err(|e| Failure::Input(anyhow!(e)))
}

fn run_with<S: RecordSink + Send>(
    lines: &[bridgekit_core::batch::CensusLine],
    cfg: &RunConfig,
    mut sink: S,
) -> Result<bridgekit_core::batch::BatchSummary, bridgekit_core::batch::BatchError> {
    run_batch(lines, cfg, &mut sink)
}

fn diagram(code: &str, reduce: bool) -> Result<Diagram, Failure> {
    let code = code.trim();
    let d = if code == EMPTY_CODE_MARKER {
        Diagram::unknot()
    } else {
        parse_gauss(code).with_context(|| format!("cannot parse code {code:?}"))?
    };
    Ok(if reduce { reduce_kinks(&d) } else { d })
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text).context("reading stdin")?;
    } else {
        text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    }
    Ok(text)
}

fn emit(out: &mut impl Write, text: &str) -> Outcome {
    writeln!(out, "{text}").context("writing output")?;
    Ok(())
}

fn cmd_parse(d: &Diagram, format: Format, out: &mut impl Write) -> Outcome {
    let canon = d.canonical_form().to_code_cell();
    match format {
        Format::Jsonl => {
            let crossings: Vec<_> = d
                .crossings()
                .iter()
                .map(|c| json!({ "crossing": c.id, "over": c.over_strand, "under": [c.under_pair.0, c.under_pair.1] }))
                .collect();
            let v = json!({
                "code": d.to_code_cell(),
                "canonical": canon,
                "n": d.n(),
                "strands": d.strand_count(),
                "crossings": crossings,
            });
            emit(out, &v.to_string())
        }
        Format::Csv => emit(out, &format!("code,canonical,n,strands\n{},{canon},{},{}", d.to_code_cell(), d.n(), d.strand_count())),
        Format::Text => {
            let mut s = format!("code {}\ncanonical {canon}\nn {}\nstrands {}", d.to_code_cell(), d.n(), d.strand_count());
            for c in d.crossings() {
                s.push_str(&format!("\ncrossing {} over {} under {} {}", c.id, c.over_strand, c.under_pair.0, c.under_pair.1));
            }
            emit(out, &s)
        }
    }
}

fn cmd_wirtinger(cli: &Cli, d: &Diagram, format: Format, jobs: Option<usize>, out: &mut impl Write) -> Outcome {
    let opts = SearchOptions {
        max_k: cli.max_k,
        time_limit: Some(Duration::from_millis(cli.time_limit_ms)),
        parallel: jobs != Some(1),
    };
    let res = match jobs {
        Some(j) => bridgekit_core::par::with_jobs(j, || wirtinger_number(d, &opts)),
        None => wirtinger_number(d, &opts),
    };
    let status = if res.is_exact() { "exact" } else { "lower_bound" };
    let elapsed_ms = res.elapsed.as_millis() as u64;
    if let Some(cert) = &res.certificate {
        verify_certificate(d, cert).map_err(|e| Failure::Check(format!("own certificate rejected: {e}")))?;
    }
    let mut mismatch = None;
    if cli.oracle_check && res.is_exact() {
        if let Ok(truth) = wirtinger_oracle_with_bound(d, DEFAULT_ORACLE_BOUND) {
            if truth != res.k {
                mismatch = Some(format!("search gave {}, oracle gives {truth}", res.k));
            }
        }
    }
    let cert = res.certificate.as_ref().filter(|_| cli.emit_certificate);
    match format {
        Format::Jsonl => {
            let mut v = json!({
                "code": d.to_code_cell(),
                "n": d.n(),
                "omega": res.k,
                "omega_status": status,
                "elapsed_ms": elapsed_ms,
                "engine_version": ENGINE_VERSION,
            });
            if let Some(c) = cert {
                v["certificate"] = serde_json::to_value(c).expect("certificate serializes");
            }
            emit(out, &v.to_string())?;
        }
        Format::Csv => emit(
            out,
            &format!("code,n,omega,omega_status,elapsed_ms\n{},{},{},{status},{elapsed_ms}", d.to_code_cell(), d.n(), res.k),
        )?,
        Format::Text => {
            let rel = if res.is_exact() { "=" } else { ">=" };
            emit(out, &format!("omega {rel} {} ({status}, {elapsed_ms} ms)", res.k))?;
            if let Some(c) = cert {
                emit(out, &c.to_json())?;
            }
        }
    }
    match mismatch {
        Some(m) => Err(Failure::Check(m)),
        None => Ok(()),
    }
}

fn cmd_passes(d: &Diagram, format: Format, out: &mut impl Write) -> Outcome {
    let overpass = overpass_number(d);
    let composite = is_composite(d).is_some();
    if d.is_empty() {
        return match format {
            Format::Jsonl => emit(out, &json!({ "code": EMPTY_CODE_MARKER, "overpass": 1, "runs": [] }).to_string()),
            Format::Csv => emit(out, "code,overpass,runs,shared\n.,1,0,0"),
            Format::Text => emit(out, "overpass 1\nruns 0"),
        };
    }
    let p = pass_decomposition(d).map_err(|e| anyhow!(e))?;
    let shared = consecutive_shared_crossings(d).map_err(|e| anyhow!(e))?;
    let report = minimality_incompatibility_report(d).map_err(|e| anyhow!(e))?;
    match format {
        Format::Jsonl => {
            let v = json!({
                "code": d.to_code_cell(),
                "overpass": overpass,
                "runs": p.runs,
                "shared": shared,
                "report": report,
                "composite": composite,
            });
            emit(out, &v.to_string())
        }
        Format::Csv => emit(
            out,
            &format!("code,overpass,runs,shared\n{},{overpass},{},{}", d.to_code_cell(), p.runs.len(), shared.len()),
        ),
        Format::Text => {
            let mut s = format!("overpass {overpass}");
            for r in &p.runs {
                let ids: Vec<String> = r.crossings.iter().map(|c| c.to_string()).collect();
                s.push_str(&format!("\n{} @{}: {}", r.kind.letter(), r.start, ids.join(" ")));
            }
            let ids: Vec<String> = shared.iter().map(|c| c.crossing.to_string()).collect();
            s.push_str(&format!("\nshared [{}]", ids.join(" ")));
            s.push_str(&format!(
                "\noverpass-minimal condition {}\ncrossing-minimal condition {}",
                report.overpass_minimal_necessary_condition, report.crossing_minimal_necessary_condition
            ));
            emit(out, &s)
        }
    }
}
