//! The `hpl` command line: argument parsing, input ingestion, record
//! rendering and exit codes.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::combinatorics::{critical_value, eq4_identity_check, forms_dim, n3lu1_check, split_bc, split_uv};
use crate::engine::{
    general_hilbert, hilbert_report, maximal_rank_sweep, FamilySpec, TrialCertificate, TrialPlan, Verdict, DEFAULT_SEED,
};
use crate::error::{Error, Result};
use crate::geometry::{ruling_line, tangent_plane, Line, Plane, ProjPoint, Quadric, QuadricPoint, Ruling};
use crate::horace::{check_assertion, decompose, exceptional_certificate, horace_bounds, Assertion, ExceptionalCase};
use crate::linalg::{PrimeField, DEFAULT_PRIME, SECONDARY_PRIME};
use crate::schemes::{Component, Configuration};

/// Version of the output record layout.
pub const SCHEMA: u64 = 1;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for a computation error, failed certificate or mismatch.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status for invalid arguments or input.
pub const EXIT_USAGE: i32 = 2;

/// Inclusive integer range written `lo..hi` or as a single integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

fn parse_span(s: &str) -> std::result::Result<Span, String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok(Span { lo, hi })
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse::<u64>(),
    }
    .map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn parse_prime(s: &str) -> std::result::Result<PrimeField, String> {
    let p: u64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    PrimeField::new(p).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Z,
    W,
    Arrows,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AssertionKind {
    #[value(name = "C")]
    C,
    #[value(name = "E")]
    E,
    #[value(name = "F")]
    F,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Prime modulus; repeat for several.
    #[arg(long = "prime", value_name = "P", value_parser = parse_prime)]
    pub primes: Vec<PrimeField>,
    /// Samples per prime.
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    /// Base seed, decimal or 0x-hex.
    #[arg(long, env = "HPL_SEED", value_parser = parse_seed)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// JSON-lines file of expected records, matched by command and params.
    #[arg(long, value_name = "FILE")]
    pub expect: Option<PathBuf>,
    /// Record wall-clock time per cell in elapsed_ms.
    #[arg(long)]
    pub timing: bool,
}

impl Common {
    fn plan(&self) -> Result<TrialPlan> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("--trials must be at least 1".into()));
        }
        let primes = if self.primes.is_empty() {
            vec![PrimeField::new(DEFAULT_PRIME)?, PrimeField::new(SECONDARY_PRIME)?]
        } else {
            self.primes.clone()
        };
        Ok(TrialPlan {
            trials: self.trials,
            primes,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        })
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hpl",
    version,
    about = "Hilbert functions of unions of lines and double lines in P3"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// h0 and h1 of general members of a family, or of an explicit configuration.
    Hilbert {
        #[arg(long, value_enum, default_value_t = Family::Z)]
        family: Family,
        #[arg(long, value_parser = parse_span, default_value = "0")]
        a: Span,
        #[arg(long, value_parser = parse_span, default_value = "0")]
        b: Span,
        #[arg(long, value_parser = parse_span, default_value = "0")]
        u: Span,
        #[arg(long, value_parser = parse_span, default_value = "0")]
        v: Span,
        #[arg(long, value_parser = parse_span, default_value = "0")]
        e: Span,
        #[arg(long, value_parser = parse_span)]
        d: Span,
        /// JSON file with an explicit list of components.
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Per-degree verdicts for Z(a, b) and the critical-value criterion.
    Table {
        #[arg(long, value_parser = parse_span)]
        a: Span,
        #[arg(long, value_parser = parse_span)]
        b: Span,
        #[arg(long)]
        dmax: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check the C, E or F assertions by sampling their families.
    Assert {
        #[arg(long, value_enum)]
        kind: AssertionKind,
        #[arg(long, value_parser = parse_span)]
        a: Span,
        #[arg(long, value_parser = parse_span)]
        d: Span,
        #[arg(long, value_parser = parse_span, default_value = "0")]
        e: Span,
        #[command(flatten)]
        common: Common,
    },
    /// Residual/trace bounds: certificates for the exceptional cases, or
    /// bounds for an explicit configuration.
    Horace {
        /// X22_d4, X30_d4, X31_d5, X40_d6, X41_d6; all when omitted.
        #[arg(long = "case")]
        cases: Vec<String>,
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long, value_parser = parse_span)]
        d: Option<Span>,
        #[command(flatten)]
        common: Common,
    },
    /// The (b, c) and (u, v) splits and related counts.
    Split {
        #[arg(long, value_parser = parse_span)]
        a: Span,
        #[arg(long, value_parser = parse_span)]
        d: Span,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Hilbert { common, .. }
            | Command::Table { common, .. }
            | Command::Assert { common, .. }
            | Command::Horace { common, .. }
            | Command::Split { common, .. } => common,
        }
    }
}

// ---------------------------------------------------------------------------
// Configuration files.

#[derive(Debug, Clone, Deserialize)]
struct QuadricPointRecord {
    st: [i64; 2],
    uv: [i64; 2],
}

#[derive(Debug, Clone, Deserialize)]
struct RulingRecord {
    ruling: u8,
    param: [i64; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum ComponentRecord {
    Point {
        point: Option<[i64; 4]>,
        on_quadric: Option<QuadricPointRecord>,
    },
    DoublePoint {
        point: Option<[i64; 4]>,
        on_quadric: Option<QuadricPointRecord>,
    },
    PlanarDoublePoint {
        point: Option<[i64; 4]>,
        on_quadric: Option<QuadricPointRecord>,
        plane: Option<[i64; 4]>,
    },
    Arrow {
        point: Option<[i64; 4]>,
        on_quadric: Option<QuadricPointRecord>,
        direction: [i64; 4],
    },
    Line {
        span: Option<[[i64; 4]; 2]>,
        on_quadric: Option<RulingRecord>,
    },
    DoubleLine {
        span: Option<[[i64; 4]; 2]>,
        on_quadric: Option<RulingRecord>,
    },
    NodalConic {
        node: Option<[i64; 4]>,
        on_quadric: Option<QuadricPointRecord>,
        ends: [[i64; 4]; 2],
    },
    Sundial {
        node: Option<[i64; 4]>,
        on_quadric: Option<QuadricPointRecord>,
        ends: [[i64; 4]; 2],
    },
}

fn pick_point(field: PrimeField, point: Option<[i64; 4]>, on_q: Option<QuadricPointRecord>) -> Result<ProjPoint> {
    match (point, on_q) {
        (Some(x), None) => ProjPoint::from_i64(field, x),
        (None, Some(q)) => {
            let st = q.st.map(|x| field.from_i64(x));
            let uv = q.uv.map(|x| field.from_i64(x));
            Ok(QuadricPoint::new(field, st, uv)?.to_p3(field))
        }
        _ => Err(Error::InvalidInput(
            "give exactly one of a point and an on_quadric placement".into(),
        )),
    }
}

fn pick_line(field: PrimeField, span: Option<[[i64; 4]; 2]>, on_q: Option<RulingRecord>) -> Result<Line> {
    match (span, on_q) {
        (Some([a, b]), None) => Line::new(field, ProjPoint::from_i64(field, a)?, ProjPoint::from_i64(field, b)?),
        (None, Some(r)) => {
            let ruling = match r.ruling {
                1 => Ruling::First,
                2 => Ruling::Second,
                k => return Err(Error::InvalidInput(format!("ruling must be 1 or 2, got {k}"))),
            };
            ruling_line(field, ruling, r.param.map(|x| field.from_i64(x)))
        }
        _ => Err(Error::InvalidInput(
            "give exactly one of a span and an on_quadric placement".into(),
        )),
    }
}

fn to_component(field: PrimeField, r: ComponentRecord) -> Result<Component> {
    use ComponentRecord as R;
    Ok(match r {
        R::Point { point, on_quadric } => Component::Point {
            point: pick_point(field, point, on_quadric)?,
        },
        R::DoublePoint { point, on_quadric } => Component::SpaceDoublePoint {
            point: pick_point(field, point, on_quadric)?,
        },
        R::PlanarDoublePoint {
            point,
            on_quadric,
            plane,
        } => {
            let point = pick_point(field, point, on_quadric)?;
            let plane = match plane {
                Some(n) => Plane::new(field, n.map(|x| field.from_i64(x)))?,
                None => tangent_plane(field, &Quadric::standard(field), &point)?,
            };
            Component::PlanarDoublePoint { point, plane }
        }
        R::Arrow {
            point,
            on_quadric,
            direction,
        } => Component::Arrow {
            point: pick_point(field, point, on_quadric)?,
            direction: ProjPoint::from_i64(field, direction)?,
        },
        R::Line { span, on_quadric } => Component::Line {
            line: pick_line(field, span, on_quadric)?,
        },
        R::DoubleLine { span, on_quadric } => Component::DoubleLine {
            line: pick_line(field, span, on_quadric)?,
        },
        R::NodalConic {
            node,
            on_quadric,
            ends: [a, b],
        } => Component::nodal_conic(
            field,
            pick_point(field, node, on_quadric)?,
            ProjPoint::from_i64(field, a)?,
            ProjPoint::from_i64(field, b)?,
        )?,
        R::Sundial {
            node,
            on_quadric,
            ends: [a, b],
        } => Component::sundial(
            field,
            pick_point(field, node, on_quadric)?,
            ProjPoint::from_i64(field, a)?,
            ProjPoint::from_i64(field, b)?,
        )?,
    })
}

/// Parses component records over `field`, given either as one JSON array or
/// as one JSON object per line. The result always carries Q0 as its
/// reference quadric.
pub fn parse_configuration(text: &str, field: PrimeField) -> Result<Configuration> {
    let bad = |e: serde_json::Error| Error::InvalidInput(format!("configuration file: {e}"));
    let records: Vec<ComponentRecord> = if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(bad)?
    } else {
        serde_json::Deserializer::from_str(text)
            .into_iter()
            .collect::<std::result::Result<_, _>>()
            .map_err(bad)?
    };
    let components = records
        .into_iter()
        .map(|r| to_component(field, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(Configuration::new(field, components)?.with_reference_quadric())
}

// ---------------------------------------------------------------------------
// Records.

/// One output record and whether it counts as a success.
#[derive(Debug, Clone)]
struct Row {
    record: Map<String, Value>,
    ok: bool,
}

fn base(command: &str, params: Value) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m.insert("params".into(), params);
    for key in [
        "prime",
        "seed",
        "n",
        "sheaf_dim",
        "rank",
        "h0",
        "h1",
        "expected_h0",
        "expected_h1",
        "verdict",
        "elapsed_ms",
    ] {
        m.insert(key.into(), Value::Null);
    }
    m
}

fn error_row(command: &str, params: Value, err: &Error) -> Row {
    let mut record = base(command, params);
    record.insert("error".into(), json!(err.to_string()));
    Row { record, ok: false }
}

fn elapsed(timing: bool, start: Instant) -> Value {
    if timing {
        json!(start.elapsed().as_millis() as u64)
    } else {
        Value::Null
    }
}

fn fill_certificate(m: &mut Map<String, Value>, c: &TrialCertificate, seed: u64) {
    let w = c.witness();
    m.insert("prime".into(), json!(w.prime));
    m.insert("seed".into(), json!(seed));
    m.insert("n".into(), json!(c.n));
    m.insert("sheaf_dim".into(), json!(c.sheaf_dim));
    m.insert("rank".into(), json!(w.rank));
    m.insert("h0".into(), json!(c.min_h0));
    m.insert("h1".into(), json!(c.min_h1));
    m.insert("expected_h0".into(), json!(c.expected_h0));
    m.insert("expected_h1".into(), json!(c.expected_h1));
    m.insert("verdict".into(), json!(c.verdict.label()));
    m.insert("primes".into(), json!(c.primes));
    m.insert("trials".into(), json!(c.trials.len()));
    if let Verdict::DefectObserved { h0, h1 } = c.verdict {
        m.insert("defect".into(), json!({ "h0": h0, "h1": h1 }));
    }
}

fn certificate_row(command: &str, params: Value, c: &TrialCertificate, seed: u64, ms: Value) -> Row {
    let mut record = base(command, params);
    fill_certificate(&mut record, c, seed);
    record.insert("elapsed_ms".into(), ms);
    Row {
        record,
        ok: c.verdict != Verdict::Inconclusive,
    }
}

fn family_cells(family: Family, a: Span, b: Span, u: Span, v: Span, e: Span) -> Vec<(FamilySpec, Value)> {
    let mut cells = Vec::new();
    match family {
        Family::Z => {
            for a in a.iter() {
                for b in b.iter() {
                    cells.push((FamilySpec::Z { a, b }, json!({ "family": "z", "a": a, "b": b })));
                }
            }
        }
        Family::W => {
            for a in a.iter() {
                for u in u.iter() {
                    for v in v.iter() {
                        for e in e.iter() {
                            cells.push((
                                FamilySpec::W { a, u, v, e },
                                json!({ "family": "w", "a": a, "u": u, "v": v, "e": e }),
                            ));
                        }
                    }
                }
            }
        }
        Family::Arrows => {
            for e in e.iter() {
                cells.push((FamilySpec::Arrows { e }, json!({ "family": "arrows", "e": e })));
            }
        }
    }
    cells
}

fn with_param(params: &Value, key: &str, v: Value) -> Value {
    let mut p = params.clone();
    p.as_object_mut().expect("params object").insert(key.into(), v);
    p
}

fn run_family(cells: Vec<(FamilySpec, Value)>, d: Span, plan: &TrialPlan, timing: bool) -> Vec<Row> {
    let work: Vec<(FamilySpec, Value, usize)> = cells
        .into_iter()
        .flat_map(|(spec, params)| d.iter().map(move |d| (spec.clone(), params.clone(), d)))
        .collect();
    work.par_iter()
        .map(|(spec, params, d)| {
            let params = with_param(params, "d", json!(d));
            if let FamilySpec::Z { a: 0, b: 0 } = spec {
                return error_row("hilbert", params, &Error::EmptyConfiguration);
            }
            let start = Instant::now();
            match general_hilbert(spec, *d, plan) {
                Ok(c) => certificate_row("hilbert", params, &c, plan.seed, elapsed(timing, start)),
                Err(err) => error_row("hilbert", params, &err),
            }
        })
        .collect()
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn run_input(path: &Path, d: Span, plan: &TrialPlan, timing: bool) -> Result<Vec<Row>> {
    let text = read_file(path)?;
    let mut cfgs = Vec::new();
    for &field in &plan.primes {
        cfgs.push((field, parse_configuration(&text, field)?));
    }
    let work: Vec<(PrimeField, &Configuration, usize)> = cfgs
        .iter()
        .flat_map(|(f, c)| d.iter().map(move |d| (*f, c, d)))
        .collect();
    Ok(work
        .par_iter()
        .map(|&(field, cfg, d)| {
            let params = json!({ "input": path.display().to_string(), "d": d });
            let start = Instant::now();
            match hilbert_report(cfg, d) {
                Ok(r) => {
                    let mut m = base("hilbert", params);
                    m.insert("prime".into(), json!(field.modulus()));
                    m.insert("n".into(), json!(r.n));
                    m.insert("sheaf_dim".into(), json!(r.sheaf_dim));
                    m.insert("rank".into(), json!(r.rank));
                    m.insert("rows_emitted".into(), json!(r.rows_emitted));
                    m.insert("h0".into(), json!(r.h0));
                    m.insert("h1".into(), json!(r.h1));
                    m.insert("expected_h0".into(), json!(r.expected_h0));
                    m.insert("expected_h1".into(), json!(r.expected_h1));
                    let verdict = if r.maximal_rank_at_d {
                        "MaximalRank"
                    } else {
                        "NotMaximalRank"
                    };
                    m.insert("verdict".into(), json!(verdict));
                    m.insert("elapsed_ms".into(), elapsed(timing, start));
                    Row { record: m, ok: true }
                }
                Err(err) => error_row("hilbert", params, &err),
            }
        })
        .collect())
}

fn run_table(a: Span, b: Span, dmax: usize, plan: &TrialPlan, timing: bool) -> Vec<Row> {
    let pairs: Vec<(usize, usize)> = a.iter().flat_map(|a| b.iter().map(move |b| (a, b))).collect();
    pairs
        .par_iter()
        .map(|&(a, b)| table_pair(a, b, dmax, plan, timing))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn table_pair(a: usize, b: usize, dmax: usize, plan: &TrialPlan, timing: bool) -> Vec<Row> {
    let summary_params = json!({ "a": a, "b": b, "dmax": dmax });
    if a == 0 && b == 0 {
        return vec![error_row("table", summary_params, &Error::EmptyConfiguration)];
    }
    let start = Instant::now();
    let (cells, summary) = match critical_value(a as u64, b as u64) {
        Ok(_) => match maximal_rank_sweep(a, b, dmax, plan) {
            Ok(s) => {
                let verdict = if s.flagged_cells().is_empty() && s.h0_vanishes_below && s.h1_vanishes_at {
                    "MaximalRank"
                } else {
                    "Flagged"
                };
                let summary = json!({
                    "critical_value": s.critical_value,
                    "h0_vanishes_below": s.h0_vanishes_below,
                    "h1_vanishes_at": s.h1_vanishes_at,
                    "flagged_degrees": s.flagged_cells(),
                    "verdict": verdict,
                });
                (s.cells, summary)
            }
            Err(err) => return vec![error_row("table", summary_params, &err)],
        },
        Err(Error::Undefined(..)) => {
            let spec = FamilySpec::Z { a, b };
            let cells = match (1..=dmax)
                .map(|d| general_hilbert(&spec, d, plan))
                .collect::<Result<Vec<_>>>()
            {
                Ok(c) => c,
                Err(err) => return vec![error_row("table", summary_params, &err)],
            };
            let flagged: Vec<usize> = cells
                .iter()
                .filter(|c| !c.verdict.is_certified())
                .map(|c| c.d)
                .collect();
            let summary = json!({
                "critical_value": Value::Null,
                "h0_vanishes_below": Value::Null,
                "h1_vanishes_at": Value::Null,
                "verdict": if flagged.is_empty() { "MaximalRank" } else { "Flagged" },
                "flagged_degrees": flagged,
            });
            (cells, summary)
        }
        Err(err) => return vec![error_row("table", summary_params, &err)],
    };
    let mut rows: Vec<Row> = cells
        .iter()
        .map(|c| {
            let mut row = certificate_row("table", json!({ "a": a, "b": b, "d": c.d }), c, plan.seed, Value::Null);
            row.record.insert("flag".into(), json!(!c.verdict.is_certified()));
            row
        })
        .collect();
    let mut m = base("table", summary_params);
    m.insert("seed".into(), json!(plan.seed));
    for (k, v) in summary.as_object().expect("object") {
        m.insert(k.clone(), v.clone());
    }
    m.insert("elapsed_ms".into(), elapsed(timing, start));
    let ok = rows.iter().all(|r| r.ok);
    rows.push(Row { record: m, ok });
    rows
}

fn run_assert(kind: AssertionKind, a: Span, d: Span, e: Span, plan: &TrialPlan, timing: bool) -> Vec<Row> {
    let mut work = Vec::new();
    for a in a.iter() {
        for d in d.iter() {
            match kind {
                AssertionKind::C => work.extend(e.iter().map(|e| Assertion::C { a, d, e })),
                AssertionKind::E => work.push(Assertion::E { a, d }),
                AssertionKind::F => work.push(Assertion::F { a, d }),
            }
        }
    }
    work.par_iter()
        .map(|&asn| {
            let params = match asn {
                Assertion::C { a, d, e } => json!({ "kind": "C", "a": a, "d": d, "e": e }),
                Assertion::E { a, d } => json!({ "kind": "E", "a": a, "d": d }),
                Assertion::F { a, d } => json!({ "kind": "F", "a": a, "d": d }),
            };
            let start = Instant::now();
            match check_assertion(asn, plan) {
                Ok(o) => {
                    let mut row = certificate_row("assert", params, &o.certificate, plan.seed, elapsed(timing, start));
                    row.record.insert("holds".into(), json!(o.holds));
                    row.record.insert("assertion".into(), json!(asn.to_string()));
                    row.record.insert("degree".into(), json!(o.degree));
                    row.record
                        .insert("family".into(), serde_json::to_value(&o.family).expect("serializable"));
                    row.ok = o.holds;
                    row
                }
                Err(err) => {
                    let mut row = error_row("assert", params, &err);
                    row.record.insert("holds".into(), json!(false));
                    row
                }
            }
        })
        .collect()
}

fn bounds_json(b: &crate::horace::HoraceBounds) -> Value {
    serde_json::to_value(b).expect("serializable")
}

fn run_cases(cases: &[ExceptionalCase], plan: &TrialPlan, timing: bool) -> Vec<Row> {
    cases
        .par_iter()
        .map(|&case| {
            let (a, b, d) = case.params();
            let params = json!({ "case": case.to_string(), "a": a, "b": b, "d": d });
            let start = Instant::now();
            match exceptional_certificate(case, plan) {
                Ok(c) => {
                    let mut row = certificate_row("horace", params, &c.sampled, plan.seed, elapsed(timing, start));
                    row.record.insert("h0".into(), json!(c.h0));
                    row.record.insert("h1".into(), json!(c.h1));
                    row.record.insert("bounds".into(), bounds_json(&c.bounds));
                    row.record.insert("certified".into(), json!([c.h0, c.h1]));
                    row.record.insert("exact".into(), json!(case.known_values().is_some()));
                    row.ok = true;
                    row
                }
                Err(err) => error_row("horace", params, &err),
            }
        })
        .collect()
}

fn run_horace_input(path: &Path, d: Span, plan: &TrialPlan, timing: bool) -> Result<Vec<Row>> {
    let text = read_file(path)?;
    let mut rows = Vec::new();
    for &field in &plan.primes {
        let cfg = parse_configuration(&text, field)?;
        for d in d.iter() {
            let params = json!({ "input": path.display().to_string(), "d": d });
            let start = Instant::now();
            let outcome = decompose(&cfg).and_then(|dec| {
                let b = horace_bounds(&cfg, d)?;
                let r = hilbert_report(&cfg, d)?;
                Ok((dec, b, r))
            });
            rows.push(match outcome {
                Ok((dec, b, r)) => {
                    let mut m = base("horace", params);
                    m.insert("prime".into(), json!(field.modulus()));
                    m.insert("n".into(), json!(r.n));
                    m.insert("sheaf_dim".into(), json!(r.sheaf_dim));
                    m.insert("rank".into(), json!(r.rank));
                    m.insert("h0".into(), json!(r.h0));
                    m.insert("h1".into(), json!(r.h1));
                    m.insert("expected_h0".into(), json!(r.expected_h0));
                    m.insert("expected_h1".into(), json!(r.expected_h1));
                    let inside = b.best_lower() <= r.h0 && r.h0 <= b.upper;
                    m.insert(
                        "verdict".into(),
                        json!(if inside { "WithinBounds" } else { "OutsideBounds" }),
                    );
                    m.insert("bounds".into(), bounds_json(&b));
                    m.insert("residual_components".into(), json!(dec.residual.len()));
                    m.insert("trace".into(), serde_json::to_value(&dec.trace).expect("serializable"));
                    m.insert("elapsed_ms".into(), elapsed(timing, start));
                    Row { record: m, ok: inside }
                }
                Err(err) => error_row("horace", params, &err),
            });
        }
    }
    Ok(rows)
}

fn run_split(a: Span, d: Span) -> Vec<Row> {
    let mut rows = Vec::new();
    for a in a.iter() {
        for d in d.iter() {
            let (a64, d64) = (a as u64, d as u64);
            let mut m = base("split", json!({ "a": a, "d": d }));
            m.insert("n".into(), forms_dim(d64).map_or(Value::Null, |n| json!(n)));
            match split_bc(a64, d64) {
                Ok(s) => {
                    m.insert("b".into(), json!(s.b));
                    m.insert("c".into(), json!(s.c));
                }
                Err(err) => {
                    m.insert("b".into(), Value::Null);
                    m.insert("c".into(), Value::Null);
                    m.insert("infeasible".into(), json!(err.to_string()));
                }
            }
            match split_uv(a64, d64) {
                Ok(s) => {
                    m.insert("u".into(), json!(s.u));
                    m.insert("v".into(), json!(s.v));
                }
                Err(_) => {
                    m.insert("u".into(), Value::Null);
                    m.insert("v".into(), Value::Null);
                }
            }
            if d >= 2 {
                m.insert("n3lu1".into(), json!(n3lu1_check(a64, d64)));
                m.insert("eq4".into(), json!(eq4_identity_check(a64, d64)));
            }
            rows.push(Row { record: m, ok: true });
        }
    }
    rows
}

// ---------------------------------------------------------------------------
// Expectations and rendering.

fn load_expectations(path: &Path) -> Result<Vec<Map<String, Value>>> {
    let text = read_file(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| match serde_json::from_str::<Value>(l) {
            Ok(Value::Object(m)) => Ok(m),
            Ok(_) => Err(Error::InvalidInput(format!(
                "{}:{}: not a JSON object",
                path.display(),
                i + 1
            ))),
            Err(e) => Err(Error::InvalidInput(format!("{}:{}: {e}", path.display(), i + 1))),
        })
        .collect()
}

fn params_match(expected: &Value, actual: &Value) -> bool {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => e.iter().all(|(k, v)| a.get(k) == Some(v)),
        _ => expected == actual,
    }
}

/// Applies `--expect`: a row matched by some expectation passes iff every
/// field the expectation names is equal; unmatched rows keep their status.
fn apply_expectations(rows: &mut [Row], exps: &[Map<String, Value>], err: &mut dyn Write) {
    for row in rows.iter_mut() {
        let matching: Vec<&Map<String, Value>> = exps
            .iter()
            .filter(|e| {
                e.get("command").is_none_or(|c| row.record.get("command") == Some(c))
                    && e.get("params").is_none_or(|p| params_match(p, &row.record["params"]))
            })
            .collect();
        if matching.is_empty() {
            continue;
        }
        row.ok = true;
        for e in matching {
            for (k, v) in e.iter().filter(|(k, _)| *k != "command" && *k != "params") {
                if row.record.get(k) != Some(v) {
                    let _ = writeln!(
                        err,
                        "expectation mismatch for {} {}: {k} = {} (expected {v})",
                        row.record["command"],
                        row.record["params"],
                        row.record.get(k).unwrap_or(&Value::Null)
                    );
                    row.ok = false;
                }
            }
        }
    }
}

const CSV_COLUMNS: [&str; 14] = [
    "schema",
    "command",
    "params",
    "prime",
    "seed",
    "n",
    "sheaf_dim",
    "rank",
    "h0",
    "h1",
    "expected_h0",
    "expected_h1",
    "verdict",
    "elapsed_ms",
];

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}={}", scalar(v)))
            .collect::<Vec<_>>()
            .join(";"),
        other => other.to_string(),
    }
}

fn render(rows: &[Row], format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for r in rows {
                serde_json::to_writer(&mut *out, &r.record)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
            header.push("extra");
            w.write_record(&header)?;
            for r in rows {
                let mut fields: Vec<String> = CSV_COLUMNS
                    .iter()
                    .map(|c| r.record.get(*c).map_or(String::new(), scalar))
                    .collect();
                let extra: BTreeMap<&String, &Value> = r
                    .record
                    .iter()
                    .filter(|(k, _)| !CSV_COLUMNS.contains(&k.as_str()))
                    .collect();
                fields.push(if extra.is_empty() {
                    String::new()
                } else {
                    serde_json::to_string(&extra).expect("serializable")
                });
                w.write_record(&fields)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in rows {
                let mut line = format!("{} {}:", scalar(&r.record["command"]), scalar(&r.record["params"]));
                for (k, v) in &r.record {
                    if matches!(k.as_str(), "schema" | "command" | "params") || v.is_null() {
                        continue;
                    }
                    line.push_str(&format!(
                        " {k}={}",
                        if v.is_object() || v.is_array() {
                            v.to_string()
                        } else {
                            scalar(v)
                        }
                    ));
                }
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(())
}

fn usage(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    EXIT_USAGE
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let common = cli.command.common().clone();
    let plan = match common.plan() {
        Ok(p) => p,
        Err(e) => return usage(err, &e),
    };
    let expectations = match common.expect.as_deref().map(load_expectations).transpose() {
        Ok(e) => e,
        Err(e) => return usage(err, &e),
    };
    let timing = common.timing;
    let rows = match cli.command {
        Command::Hilbert {
            family,
            a,
            b,
            u,
            v,
            e,
            d,
            input,
            ..
        } => match input {
            Some(path) => match run_input(&path, d, &plan, timing) {
                Ok(rows) => rows,
                Err(e) => return usage(err, &e),
            },
            None => run_family(family_cells(family, a, b, u, v, e), d, &plan, timing),
        },
        Command::Table { a, b, dmax, .. } => run_table(a, b, dmax, &plan, timing),
        Command::Assert { kind, a, d, e, .. } => run_assert(kind, a, d, e, &plan, timing),
        Command::Horace { cases, input, d, .. } => match input {
            Some(path) => {
                let Some(d) = d else {
                    return usage(err, &Error::InvalidInput("--input needs --d".into()));
                };
                match run_horace_input(&path, d, &plan, timing) {
                    Ok(rows) => rows,
                    Err(e) => return usage(err, &e),
                }
            }
            None => {
                let parsed = if cases.is_empty() {
                    Ok(ExceptionalCase::ALL.to_vec())
                } else {
                    cases.iter().map(|c| c.parse()).collect::<Result<Vec<_>>>()
                };
                match parsed {
                    Ok(cases) => run_cases(&cases, &plan, timing),
                    Err(e) => return usage(err, &e),
                }
            }
        },
        Command::Split { a, d, .. } => run_split(a, d),
    };
    let mut rows = rows;
    if let Some(exps) = &expectations {
        apply_expectations(&mut rows, exps, err);
    }
    for r in rows.iter().filter(|r| !r.ok) {
        if let Some(Value::String(e)) = r.record.get("error") {
            let _ = writeln!(err, "error in {} {}: {e}", r.record["command"], r.record["params"]);
        }
    }
    if let Err(e) = render(&rows, common.format, out) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_FAILURE;
    }
    if rows.iter().all(|r| r.ok) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

/// Runs the CLI on `args` (program name first), writing records to `out`
/// and diagnostics to `err`; returns the exit status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            code
        }
    }
}
