//! Command-line front end: argument parsing, report rendering and the
//! `decide`, `gen-pham`, `bench` and `check-theory` subcommands.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{OrderKind, TermOrdering};
use crate::criteria::{
    decide_main, verify_report, B3Options, Certificate, DecisionReport, EdgeWitness, Mode,
};
use crate::groebner::{pair_schedule, ReductionTrace};
use crate::parser::{parse_factor_hints, parse_system, serialize_system, FactorHint, SystemFile};
use crate::pham::{generate_pham_like, GeneratedSystem, PhamConfig};
use crate::theory::{run_all, CheckOutcome};

pub const SCHEMA: &str = "groebner-decide/1";
pub const CSV_HEADER: &str = "m,seed,mode,verdict,reductions,wall_ms";
pub const THREADS_ENV: &str = "GBDECIDE_THREADS";

pub const EXIT_GROEBNER: i32 = 0;
pub const EXIT_NOT_GROEBNER: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gbdecide", version, about = "Decide whether a polynomial list is a Groebner basis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a system file; exit 0 for a Groebner basis, 1 otherwise, 2 on input errors.
    Decide(DecideArgs),
    /// Generate a Pham-like system.
    GenPham(GenArgs),
    /// Compare reduction counts of all modes on generated systems.
    Bench(BenchArgs),
    /// Run the structural checks on a system with known common factors.
    CheckTheory(CheckArgs),
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    pub path: PathBuf,
    #[arg(long, default_value = "extended", value_parser = parse_mode)]
    pub mode: Mode,
    /// Override the ordering kind: lex, grlex or grevlex.
    #[arg(long)]
    pub order: Option<OrderKind>,
    /// Comma-separated variable priority, most significant first.
    #[arg(long)]
    pub priority: Option<String>,
    #[arg(long)]
    pub json: bool,
    /// Re-reduce missing chain edges against the chain alone.
    #[arg(long, default_value_t = true, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    pub b3_rereduce: bool,
    /// Re-check every certificate after deciding.
    #[arg(long)]
    pub verify: bool,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Generate a Groebner basis (default).
    #[arg(long, conflicts_with = "no_gb")]
    pub gb: bool,
    /// Perturb the system so that it is not a Groebner basis.
    #[arg(long)]
    pub no_gb: bool,
    #[arg(long, default_value_t = 1)]
    pub extra_vars: usize,
    /// Omit the common factor, giving a plain Pham system.
    #[arg(long)]
    pub no_common_factor: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchKind {
    Gb,
    NonGb,
    Mixed,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Inclusive range `A-B`; an empty range yields only the header.
    #[arg(long, default_value = "2-8")]
    pub m_range: String,
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[arg(long, value_enum, default_value_t = BenchKind::Gb)]
    pub kind: BenchKind,
    #[arg(long, default_value_t = 1)]
    pub extra_vars: usize,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// System file; omit to use a generated Pham-like system.
    pub path: Option<PathBuf>,
    /// Factor sidecar; defaults to `<path>.factors`, then the path with a
    /// `.factors` extension, whichever exists first.
    #[arg(long)]
    pub factors: Option<PathBuf>,
    /// Size of the generated system when no path is given.
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub extra_vars: usize,
}

/// Machine-readable decision report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub input: String,
    pub mode: String,
    pub verdict: bool,
    pub variables: Vec<String>,
    pub ordering: String,
    pub pairs: Vec<PairRow>,
    pub witness: Option<WitnessDoc>,
    pub counts: CountsDoc,
    pub verified: Option<bool>,
    pub timing: TimingDoc,
}

/// One pair; indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRow {
    pub i: usize,
    pub j: usize,
    pub status: String,
    pub rule: Option<String>,
    pub summary: String,
    pub certificate: Option<CertificateDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateDoc {
    Reduction { trace: TraceDoc },
    Coprime,
    LcmChain { chain: Vec<usize> },
    ExtendedChain { chain: Vec<usize>, edges: Vec<EdgeDoc> },
    PhamLike { d: String, cofactors: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub i: usize,
    pub j: usize,
    pub witness: String,
    pub trace: Option<TraceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub target: String,
    pub steps: Vec<StepDoc>,
    pub remainder: String,
    pub reducers_used: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub coeff: String,
    pub term: String,
    pub reducer: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub i: usize,
    pub j: usize,
    pub remainder: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsDoc {
    pub reductions: usize,
    pub cache_hits: usize,
    pub chain_reductions: usize,
    pub pairs_by_rule: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingDoc {
    pub parse_us: u64,
    pub decide_us: u64,
    pub verify_us: u64,
}

fn trace_doc(t: &ReductionTrace, sys: &SystemFile) -> TraceDoc {
    let ord = &sys.ordering;
    TraceDoc {
        target: t.target.display(ord).to_string(),
        steps: t
            .steps
            .iter()
            .map(|s| StepDoc {
                coeff: s.coeff.to_string(),
                term: s.term.display(&sys.context).to_string(),
                reducer: s.reducer + 1,
            })
            .collect(),
        remainder: t.remainder.display(ord).to_string(),
        reducers_used: t.reducers_used.iter().map(|k| k + 1).collect(),
    }
}

fn one_based(chain: &[usize]) -> Vec<usize> {
    chain.iter().map(|v| v + 1).collect()
}

fn joined(chain: &[usize]) -> String {
    one_based(chain)
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("-")
}

fn reducer_set(t: &ReductionTrace) -> String {
    let v: Vec<String> = t.reducers_used.iter().map(|k| (k + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

impl ReportDocument {
    pub fn from_report(
        input: &str,
        sys: &SystemFile,
        report: &DecisionReport,
        verified: Option<bool>,
        timing: TimingDoc,
    ) -> Self {
        let ctx = &sys.context;
        let ord = &sys.ordering;
        let mut rows = Vec::new();
        for pair in pair_schedule(sys.len()) {
            let (i, j) = (pair.i + 1, pair.j + 1);
            if let Some(d) = report.disposition(pair) {
                let (summary, cert) = match &d.certificate {
                    Certificate::Reduction(t) => (
                        format!("reduces to 0 using {}", reducer_set(t)),
                        CertificateDoc::Reduction {
                            trace: trace_doc(t, sys),
                        },
                    ),
                    Certificate::Coprime => (
                        "coprime leading terms".to_string(),
                        CertificateDoc::Coprime,
                    ),
                    Certificate::LcmChain { chain } => (
                        format!("lcm chain {}", joined(chain)),
                        CertificateDoc::LcmChain {
                            chain: one_based(chain),
                        },
                    ),
                    Certificate::ExtendedChain { chain, edges } => (
                        format!("extended chain {}", joined(chain)),
                        CertificateDoc::ExtendedChain {
                            chain: one_based(chain),
                            edges: edges
                                .iter()
                                .map(|e| {
                                    let p = e.pair();
                                    match e {
                                        EdgeWitness::Coprime { .. } => EdgeDoc {
                                            i: p.i + 1,
                                            j: p.j + 1,
                                            witness: "coprime".into(),
                                            trace: None,
                                        },
                                        EdgeWitness::Reduced { trace, .. } => EdgeDoc {
                                            i: p.i + 1,
                                            j: p.j + 1,
                                            witness: "reduced".into(),
                                            trace: Some(trace_doc(trace, sys)),
                                        },
                                    }
                                })
                                .collect(),
                        },
                    ),
                    Certificate::PhamLike { factorization } => (
                        "consecutive pairs of a Pham-like system reduce to 0".to_string(),
                        CertificateDoc::PhamLike {
                            d: factorization.d.display(ctx).to_string(),
                            cofactors: factorization
                                .cofactors
                                .iter()
                                .map(|c| c.display(ctx).to_string())
                                .collect(),
                        },
                    ),
                };
                rows.push(PairRow {
                    i,
                    j,
                    status: "discharged".into(),
                    rule: Some(d.rule.label().into()),
                    summary,
                    certificate: Some(cert),
                });
            } else if let Some(f) = report.failures.iter().find(|f| f.pair == pair) {
                rows.push(PairRow {
                    i,
                    j,
                    status: "failed".into(),
                    rule: None,
                    summary: format!("remainder {}", f.trace.remainder.display(ord)),
                    certificate: Some(CertificateDoc::Reduction {
                        trace: trace_doc(&f.trace, sys),
                    }),
                });
            } else {
                rows.push(PairRow {
                    i,
                    j,
                    status: "skipped".into(),
                    rule: None,
                    summary: "not examined".into(),
                    certificate: None,
                });
            }
        }
        ReportDocument {
            schema: SCHEMA.into(),
            input: input.into(),
            mode: report.mode.keyword().into(),
            verdict: report.is_groebner(),
            variables: ctx.names().to_vec(),
            ordering: ord.kind().keyword().into(),
            pairs: rows,
            witness: report.witness().map(|w| WitnessDoc {
                i: w.pair.i + 1,
                j: w.pair.j + 1,
                remainder: w.trace.remainder.display(ord).to_string(),
            }),
            counts: CountsDoc {
                reductions: report.counts.reductions_performed,
                cache_hits: report.counts.cache_hits,
                chain_reductions: report.counts.chain_reductions,
                pairs_by_rule: report
                    .counts
                    .pairs_by_rule
                    .iter()
                    .map(|(r, n)| (r.label().to_string(), *n))
                    .collect(),
            },
            verified,
            timing,
        }
    }

    /// Aligned table for terminals.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "system: {} ({} polynomials, {})",
            self.input,
            self.pairs.iter().map(|p| p.j).max().unwrap_or(1),
            self.ordering
        )
        .unwrap();
        writeln!(out, "mode: {}", self.mode).unwrap();
        writeln!(out, "{:<8} {:<10} detail", "pair", "rule").unwrap();
        for p in &self.pairs {
            let rule = p.rule.clone().unwrap_or_else(|| match p.status.as_str() {
                "failed" => "FAILED".into(),
                _ => "-".into(),
            });
            writeln!(out, "{:<8} {:<10} {}", format!("({},{})", p.i, p.j), rule, p.summary).unwrap();
        }
        let rules: Vec<String> = self
            .counts
            .pairs_by_rule
            .iter()
            .map(|(r, n)| format!("{r}x{n}"))
            .collect();
        writeln!(out, "rules: {}", rules.join(" ")).unwrap();
        writeln!(out, "reductions: {}", self.counts.reductions).unwrap();
        if let Some(w) = &self.witness {
            writeln!(out, "witness: ({},{}) remainder {}", w.i, w.j, w.remainder).unwrap();
        }
        if let Some(v) = self.verified {
            writeln!(out, "certificates: {}", if v { "verified" } else { "INVALID" }).unwrap();
        }
        writeln!(
            out,
            "verdict: {}",
            if self.verdict {
                "Groebner basis"
            } else {
                "not a Groebner basis"
            }
        )
        .unwrap();
        out
    }
}

fn micros(start: Instant) -> u64 {
    start.elapsed().as_micros() as u64
}

fn read_system(path: &Path) -> Result<SystemFile, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_system(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn apply_ordering(
    sys: SystemFile,
    kind: Option<OrderKind>,
    priority: Option<&str>,
) -> Result<SystemFile, String> {
    if kind.is_none() && priority.is_none() {
        return Ok(sys);
    }
    let kind = kind.unwrap_or(sys.ordering.kind());
    let prio = match priority {
        None => sys.ordering.priority().to_vec(),
        Some(list) => list
            .split(',')
            .map(|name| {
                sys.context
                    .index_of(name.trim())
                    .ok_or_else(|| format!("unknown variable `{}` in --priority", name.trim()))
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    let ord = TermOrdering::with_priority(kind, prio).map_err(|e| e.to_string())?;
    sys.with_ordering(ord).map_err(|e| e.to_string())
}

fn cmd_decide(args: &DecideArgs, out: &mut dyn std::io::Write) -> Result<i32, String> {
    let t0 = Instant::now();
    let sys = read_system(&args.path)?;
    let sys = apply_ordering(sys, args.order, args.priority.as_deref())?;
    let parse_us = micros(t0);

    let opts = B3Options {
        rereduce: args.b3_rereduce,
        ..B3Options::default()
    };
    let t1 = Instant::now();
    let report = decide_main(&sys, args.mode, &opts).map_err(|e| e.to_string())?;
    let decide_us = micros(t1);

    let t2 = Instant::now();
    let verified = args.verify.then(|| verify_report(&sys, &report).is_ok());
    let verify_us = if args.verify { micros(t2) } else { 0 };

    let doc = ReportDocument::from_report(
        &args.path.display().to_string(),
        &sys,
        &report,
        verified,
        TimingDoc {
            parse_us,
            decide_us,
            verify_us,
        },
    );
    let text = if args.json {
        serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())? + "\n"
    } else {
        doc.render_text()
    };
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    if verified == Some(false) {
        return Err("certificate verification failed".into());
    }
    Ok(if report.is_groebner() {
        EXIT_GROEBNER
    } else {
        EXIT_NOT_GROEBNER
    })
}

/// Sidecar text naming the full chain and every consecutive pair.
pub fn hints_text(g: &GeneratedSystem) -> Option<String> {
    let hidden = g.hidden.as_ref()?;
    let factor = hidden.factor.display(&g.system.ordering).to_string();
    let m = g.system.len();
    let mut out = String::new();
    let all: Vec<String> = (1..=m).map(|k| k.to_string()).collect();
    writeln!(out, "chain {} : {factor}", all.join(" ")).unwrap();
    if m > 2 {
        for l in 1..m {
            writeln!(out, "chain {} {} : {factor}", l, l + 1).unwrap();
        }
    }
    Some(out)
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".factors");
    PathBuf::from(s)
}

fn cmd_gen_pham(args: &GenArgs, out: &mut dyn std::io::Write) -> Result<i32, String> {
    let cfg = PhamConfig {
        m: args.m,
        extra_vars: args.extra_vars,
        seed: args.seed,
        make_gb: !args.no_gb,
        common_factor: !args.no_common_factor,
    };
    let g = generate_pham_like(&cfg).map_err(|e| e.to_string())?;
    fs::write(&args.out, serialize_system(&g.system))
        .map_err(|e| format!("{}: {e}", args.out.display()))?;
    writeln!(out, "wrote {}", args.out.display()).map_err(|e| e.to_string())?;
    if let Some(text) = hints_text(&g) {
        let side = sidecar_path(&args.out);
        fs::write(&side, text).map_err(|e| format!("{}: {e}", side.display()))?;
        writeln!(out, "wrote {}", side.display()).map_err(|e| e.to_string())?;
    }
    Ok(0)
}

/// Parses `A-B` (inclusive); `A > B` is an empty range.
pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once('-')
        .ok_or_else(|| format!("range `{s}` is not of the form A-B"))?;
    let a = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
    Ok((a, b))
}

/// One CSV row per (instance, mode).
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub m: usize,
    pub seed: u64,
    pub mode: Mode,
    pub verdict: bool,
    pub reductions: usize,
    pub wall_ms: f64,
}

pub const BENCH_MODES: [Mode; 4] = [Mode::Plain, Mode::Buchberger, Mode::Extended, Mode::PhamLike];

/// Runs every mode on generated instances; instances run in parallel and
/// rows come back in (m, seed, mode) order.
pub fn run_bench(
    range: (usize, usize),
    seeds: u64,
    kind: BenchKind,
    extra_vars: usize,
) -> Result<Vec<BenchRow>, String> {
    let (lo, hi) = range;
    if lo < 2 && lo <= hi {
        return Err("m must be at least 2".into());
    }
    let instances: Vec<(usize, u64)> = (lo..=hi)
        .flat_map(|m| (0..seeds).map(move |s| (m, s)))
        .collect();
    let rows = instances
        .par_iter()
        .map(|&(m, seed)| {
            let make_gb = match kind {
                BenchKind::Gb => true,
                BenchKind::NonGb => false,
                BenchKind::Mixed => seed % 2 == 0,
            };
            let cfg = PhamConfig {
                extra_vars,
                ..PhamConfig::new(m, seed, make_gb)
            };
            let g = generate_pham_like(&cfg).map_err(|e| e.to_string())?;
            BENCH_MODES
                .iter()
                .map(|&mode| {
                    let t = Instant::now();
                    let r = decide_main(&g.system, mode, &B3Options::default())
                        .map_err(|e| e.to_string())?;
                    Ok(BenchRow {
                        m,
                        seed,
                        mode,
                        verdict: r.is_groebner(),
                        reductions: r.counts.reductions_performed,
                        wall_ms: t.elapsed().as_secs_f64() * 1e3,
                    })
                })
                .collect::<Result<Vec<_>, String>>()
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{:.3}",
            r.m, r.seed, r.mode, r.verdict, r.reductions, r.wall_ms
        )
        .unwrap();
    }
    out
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn std::io::Write) -> Result<i32, String> {
    let range = parse_range(&args.m_range)?;
    let rows = run_bench(range, args.seeds, args.kind, args.extra_vars)?;
    let csv = bench_csv(&rows);
    match &args.csv {
        Some(path) => {
            fs::write(path, &csv).map_err(|e| format!("{}: {e}", path.display()))?;
            let mut summary = String::new();
            writeln!(summary, "{:>3} {:>8} {:>11} {:>9} {:>5}", "m", "plain", "buchberger", "extended", "pham").unwrap();
            for m in range.0..=range.1 {
                let mean = |mode: Mode| {
                    let v: Vec<usize> = rows
                        .iter()
                        .filter(|r| r.m == m && r.mode == mode)
                        .map(|r| r.reductions)
                        .collect();
                    v.iter().sum::<usize>() as f64 / v.len().max(1) as f64
                };
                writeln!(
                    summary,
                    "{:>3} {:>8.2} {:>11.2} {:>9.2} {:>5.2}",
                    m,
                    mean(Mode::Plain),
                    mean(Mode::Buchberger),
                    mean(Mode::Extended),
                    mean(Mode::PhamLike)
                )
                .unwrap();
            }
            out.write_all(summary.as_bytes()).map_err(|e| e.to_string())?;
        }
        None => out.write_all(csv.as_bytes()).map_err(|e| e.to_string())?,
    }
    Ok(0)
}

fn cmd_check_theory(args: &CheckArgs, out: &mut dyn std::io::Write) -> Result<i32, String> {
    let (sys, hints): (SystemFile, Vec<FactorHint>) = match &args.path {
        Some(path) => {
            let sys = read_system(path)?;
            let side = args.factors.clone().or_else(|| {
                [sidecar_path(path), path.with_extension("factors")]
                    .into_iter()
                    .find(|p| p.exists())
            });
            let hints = match side {
                Some(p) => {
                    let text =
                        fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
                    parse_factor_hints(&sys, &text).map_err(|e| format!("{}: {e}", p.display()))?
                }
                None => Vec::new(),
            };
            (sys, hints)
        }
        None => {
            let cfg = PhamConfig {
                extra_vars: args.extra_vars,
                ..PhamConfig::new(args.m, args.seed, true)
            };
            let g = generate_pham_like(&cfg).map_err(|e| e.to_string())?;
            let text = hints_text(&g).unwrap_or_default();
            let hints = parse_factor_hints(&g.system, &text).map_err(|e| e.to_string())?;
            (g.system, hints)
        }
    };
    let reports = run_all(&sys, &hints).map_err(|e| e.to_string())?;
    let mut text = String::new();
    for r in &reports {
        writeln!(text, "{r}").unwrap();
    }
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    let failed = reports
        .iter()
        .any(|r| matches!(r.outcome, CheckOutcome::Fail(_)));
    let unmet = reports
        .iter()
        .any(|r| matches!(r.outcome, CheckOutcome::Precondition(_)));
    Ok(if failed {
        1
    } else if unmet {
        EXIT_PRECONDITION
    } else {
        0
    })
}

/// Runs a parsed command, writing results to `out` and errors to stderr.
pub fn run(cli: &Cli, out: &mut dyn std::io::Write) -> i32 {
    let result = match &cli.command {
        Command::Decide(a) => cmd_decide(a, out),
        Command::GenPham(a) => cmd_gen_pham(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::CheckTheory(a) => cmd_check_theory(a, out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_INPUT_ERROR
        }
    }
}

/// Configures the thread pool from the environment, then parses and runs.
pub fn main_entry() -> i32 {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run(&cli, &mut lock)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::Pair;

    fn data(name: &str) -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
    }

    fn decide_doc(name: &str, mode: Mode) -> ReportDocument {
        let sys = read_system(&data(name)).unwrap();
        let report = decide_main(&sys, mode, &B3Options::default()).unwrap();
        let timing = TimingDoc {
            parse_us: 0,
            decide_us: 0,
            verify_us: 0,
        };
        ReportDocument::from_report(name, &sys, &report, Some(true), timing)
    }

    #[test]
    fn json_round_trip_is_a_fixed_point() {
        let doc = decide_doc("easy-example.sys", Mode::Extended);
        let json = serde_json::to_string_pretty(&doc).unwrap();
        let back: ReportDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), json);
        assert!(json.starts_with("{\n  \"schema\": \"groebner-decide/1\""));
    }

    #[test]
    fn easy_example_document() {
        let doc = decide_doc("easy-example.sys", Mode::Extended);
        assert!(doc.verdict);
        assert_eq!(doc.counts.reductions, 3);
        assert_eq!(doc.counts.pairs_by_rule.get("B0"), Some(&3));
        assert_eq!(doc.counts.pairs_by_rule.get("B3"), Some(&3));
        let text = doc.render_text();
        assert!(text.contains("(1,4)    B3         extended chain 1-2-3-4"), "{text}");
    }

    #[test]
    fn bad_application_document() {
        for mode in [Mode::Plain, Mode::Buchberger, Mode::Extended] {
            let doc = decide_doc("bad-application.sys", mode);
            assert!(!doc.verdict);
            let text = doc.render_text();
            assert!(text.contains("witness: (1,3) remainder y*z"), "{text}");
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4-6"), Ok((4, 6)));
        assert!(parse_range("4").is_err());
        assert!(bench_csv(&run_bench((5, 4), 3, BenchKind::Gb, 1).unwrap())
            .eq(&format!("{CSV_HEADER}\n")));
    }

    #[test]
    fn bench_counts_on_groebner_instances() {
        let rows = run_bench((4, 5), 3, BenchKind::Gb, 1).unwrap();
        assert_eq!(rows.len(), 2 * 3 * 4);
        for r in &rows {
            assert!(r.verdict);
            match r.mode {
                Mode::Plain | Mode::Buchberger => assert_eq!(r.reductions, r.m * (r.m - 1) / 2),
                Mode::Extended | Mode::PhamLike => assert_eq!(r.reductions, r.m - 1),
            }
        }
    }

    #[test]
    fn ordering_override() {
        let sys = read_system(&data("bad-application.sys")).unwrap();
        let s = apply_ordering(sys.clone(), Some(OrderKind::GradedReverseLex), Some("z,y,x")).unwrap();
        assert_eq!(s.ordering.priority(), &[2, 1, 0]);
        assert!(apply_ordering(sys, None, Some("x,q,z")).is_err());
    }

    #[test]
    fn pair_rows_follow_processing_order() {
        let doc = decide_doc("easy-example.sys", Mode::Extended);
        let got: Vec<(usize, usize)> = doc.pairs.iter().map(|p| (p.i, p.j)).collect();
        assert_eq!(got, vec![(1, 2), (2, 3), (3, 4), (1, 3), (2, 4), (1, 4)]);
        let _ = Pair::new(0, 1);
    }
}
