//! The four subcommands, independent of argument parsing so tests can call
//! them directly.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use subspace_bounds_core::grassmann::{best_grassmann_bound, GrassmannMethod};
use subspace_bounds_core::optim::{export_lp_text, export_sdpa};
use subspace_bounds_core::projective_lp::{combined_cap, ev_bound, ev_model, pair_cuts, EvMode};
use subspace_bounds_core::projective_sdp::{sdp_model, solve_sdp, SdpOptions};
use subspace_bounds_core::{Error, FieldOrder, GrassmannParams, Metric, ProjectiveParams};

use crate::published::{sdp_matches, table, PublishedRow};
use crate::report::{self, BoundReport};

pub const THREADS_ENV: &str = "SUBSPACE_BOUNDS_THREADS";
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    /// The solver did not converge; the report carries its status.
    Solver(Box<BoundReport>),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "{m}"),
            CliError::Solver(r) => write!(f, "solver stopped with status {}", r.status),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(m) => CliError::Invalid(m),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format {s:?}; expected text, json or csv")),
        }
    }
}

pub fn field(q: u32) -> CliResult<FieldOrder> {
    Ok(FieldOrder::new(q)?)
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn stamp(mut r: BoundReport, start: Instant, timings: bool) -> BoundReport {
    if timings {
        r.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    r
}

#[derive(Debug, Clone)]
pub struct GrassmannArgs {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    /// Empty means every method.
    pub methods: Vec<GrassmannMethod>,
    pub timings: bool,
}

/// One report per requested method, then a `best` report when more than
/// one method was asked for.
pub fn grassmann(args: &GrassmannArgs) -> CliResult<Vec<BoundReport>> {
    let start = Instant::now();
    let p = GrassmannParams::new(args.n, args.k, args.delta, field(args.q)?)?;
    let methods: Vec<GrassmannMethod> =
        if args.methods.is_empty() { GrassmannMethod::ALL.to_vec() } else { args.methods.clone() };
    let (best, reports) = best_grassmann_bound(&p, &methods)?;
    let mut out: Vec<BoundReport> = reports.iter().map(report::from_grassmann).collect();
    if methods.len() > 1 {
        let best_value = reports
            .iter()
            .filter(|r| r.floored.as_ref() == Some(&best))
            .filter_map(|r| r.value.clone())
            .min();
        out.push(report::grassmann_report(&p, "best", best_value.as_ref(), Some(&best)));
    }
    Ok(out.into_iter().map(|r| stamp(r, start, args.timings)).collect())
}

pub fn render_reports(reports: &[BoundReport], format: Format) -> String {
    match format {
        Format::Json if reports.len() == 1 => json(&reports[0]),
        Format::Json => json(&reports),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["label", "method", "status", "raw_value", "floored_bound", "gap"]).expect("in-memory writer");
            for r in reports {
                let floored = r.floored_bound.as_ref().map(|n| n.to_string()).unwrap_or_default();
                let label = report::label(&r.params);
                let raw = r.raw_value.clone().unwrap_or_default();
                w.write_record([&label, &r.method, &r.status, &raw, &floored, &r.gap.to_string()])
                    .expect("in-memory writer");
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is utf-8")
        }
        Format::Text => reports.iter().map(report::to_text).collect::<Vec<_>>().join(""),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectiveMethod {
    EvLp,
    EvIp,
    Sdp,
}

impl ProjectiveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ProjectiveMethod::EvLp => "ev_lp",
            ProjectiveMethod::EvIp => "ev_ip",
            ProjectiveMethod::Sdp => "sdp",
        }
    }
}

impl FromStr for ProjectiveMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ev-lp" | "ev_lp" => Ok(ProjectiveMethod::EvLp),
            "ev-ip" | "ev_ip" => Ok(ProjectiveMethod::EvIp),
            "sdp" => Ok(ProjectiveMethod::Sdp),
            _ => Err(format!("unknown method {s:?}; expected ev-lp, ev-ip or sdp")),
        }
    }
}

pub fn parse_metric(s: &str) -> Result<Metric, String> {
    match s {
        "subspace" => Ok(Metric::Subspace),
        "injection" => Ok(Metric::Injection),
        _ => Err(format!("unknown metric {s:?}; expected subspace or injection")),
    }
}

#[derive(Debug, Clone)]
pub struct ProjectiveArgs {
    pub q: u32,
    pub n: usize,
    pub d: usize,
    pub metric: Metric,
    pub method: ProjectiveMethod,
    pub extra_cuts: bool,
    pub dim_cuts: bool,
    pub tol: f64,
    pub timings: bool,
}

impl ProjectiveArgs {
    pub fn new(n: usize, d: usize, metric: Metric, method: ProjectiveMethod) -> Self {
        ProjectiveArgs { q: 2, n, d, metric, method, extra_cuts: false, dim_cuts: true, tol: DEFAULT_TOL, timings: false }
    }

    fn params(&self) -> CliResult<ProjectiveParams> {
        if self.extra_cuts && self.method == ProjectiveMethod::Sdp {
            return Err(CliError::Invalid("--extra-cuts applies to ev-lp and ev-ip only".into()));
        }
        if self.extra_cuts && self.metric == Metric::Injection {
            return Err(CliError::Invalid("--extra-cuts is only defined for the subspace metric".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::Invalid(format!("tolerance {} must lie in (0, 1)", self.tol)));
        }
        Ok(ProjectiveParams::new(self.n, self.d, field(self.q)?, self.metric)?)
    }
}

/// Solver failures are returned as [`CliError::Solver`] carrying the report.
pub fn projective(args: &ProjectiveArgs) -> CliResult<BoundReport> {
    let start = Instant::now();
    let p = args.params()?;
    let r = match args.method {
        ProjectiveMethod::EvLp | ProjectiveMethod::EvIp => {
            let mode = if args.method == ProjectiveMethod::EvLp { EvMode::Real } else { EvMode::Integer };
            let ev = ev_bound(&p, args.extra_cuts, mode)?;
            report::from_ev(&p, args.method.as_str(), &ev)
        }
        ProjectiveMethod::Sdp => {
            let cap = combined_cap(p.q);
            let model = sdp_model(&p, SdpOptions { dim_cuts: args.dim_cuts, ..SdpOptions::default() }, &cap);
            let sdp = solve_sdp(&model, args.tol)?;
            let r = report::from_sdp(&p, &sdp, args.dim_cuts);
            if sdp.floored.is_none() {
                return Err(CliError::Solver(Box::new(stamp(r, start, args.timings))));
            }
            r
        }
    };
    Ok(stamp(r, start, args.timings))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportModel {
    Sdp,
    EvLp,
}

impl FromStr for ExportModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sdp" => Ok(ExportModel::Sdp),
            "ev-lp" | "ev_lp" => Ok(ExportModel::EvLp),
            _ => Err(format!("unknown model {s:?}; expected sdp or ev-lp")),
        }
    }
}

/// The model as SDPA sparse text or LP text.
pub fn export(model: ExportModel, args: &ProjectiveArgs) -> CliResult<String> {
    let method = match model {
        ExportModel::Sdp => ProjectiveMethod::Sdp,
        ExportModel::EvLp => ProjectiveMethod::EvLp,
    };
    let p = ProjectiveArgs { method, ..args.clone() }.params()?;
    let cap = combined_cap(p.q);
    Ok(match model {
        ExportModel::Sdp => {
            let m = sdp_model(&p, SdpOptions { dim_cuts: args.dim_cuts, ..SdpOptions::default() }, &cap);
            export_sdpa(&m.to_sdpa())
        }
        ExportModel::EvLp => {
            let mut lp = ev_model(&p, &cap);
            if args.extra_cuts {
                let c = p.d.div_ceil(2);
                lp.rows.extend(pair_cuts(p.n, p.d, p.q, &cap(p.n, c, c)));
            }
            export_lp_text(&lp)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub n: usize,
    pub d: usize,
    pub published_lp: u64,
    pub starred: bool,
    pub lp: i64,
    /// Integer program optimum.
    pub ip: i64,
    pub lp_match: bool,
    /// For starred rows: `ip == lp - 1`; otherwise `ip <= lp`.
    pub ip_match: bool,
    pub published_sdp: u64,
    pub sdp: Option<i64>,
    pub sdp_status: String,
    pub sdp_match: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: u8,
    pub metric: String,
    pub rows: Vec<TableRow>,
    pub all_match: bool,
}

fn threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&t| t > 0)
}

fn table_row(row: &PublishedRow, metric: Metric, tol: f64) -> CliResult<TableRow> {
    let p = ProjectiveParams::new(row.n, row.d, FieldOrder::BINARY, metric)?;
    let lp = ev_bound(&p, false, EvMode::Real)?;
    let ip = ev_bound(&p, false, EvMode::Integer)?;
    let cap = combined_cap(p.q);
    let sdp = solve_sdp(&sdp_model(&p, SdpOptions::default(), &cap), tol)?;
    let lp_v: i64 = lp.floored.to_string().parse().expect("table values fit in i64");
    let ip_v: i64 = ip.floored.to_string().parse().expect("table values fit in i64");
    let inj = if metric == Metric::Injection { "^inj" } else { "" };
    Ok(TableRow {
        label: format!("A{inj}_2({},{})", row.n, row.d),
        n: row.n,
        d: row.d,
        published_lp: row.lp,
        starred: row.starred,
        lp: lp_v,
        ip: ip_v,
        lp_match: lp_v == row.lp as i64,
        ip_match: if row.starred { ip_v == lp_v - 1 } else { ip_v <= lp_v },
        published_sdp: row.sdp,
        sdp: sdp.floored,
        sdp_status: sdp.status.as_str().to_string(),
        sdp_match: sdp.floored.is_some_and(|v| sdp_matches(row.sdp, v, row.n)),
    })
}

/// Recomputes every published row with `n <= max_n`, rows in parallel,
/// output in table order.
pub fn compute_table(which: u8, max_n: Option<usize>, tol: f64) -> CliResult<TableReport> {
    let (rows, metric) = table(which).ok_or_else(|| CliError::Invalid(format!("no table {which}; expected 1 or 2")))?;
    let selected: Vec<&PublishedRow> = rows.iter().filter(|r| max_n.is_none_or(|m| r.n <= m)).collect();
    let work = || selected.par_iter().map(|r| table_row(r, metric, tol)).collect::<CliResult<Vec<_>>>();
    let rows = match threads() {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Invalid(format!("cannot start {t} threads: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let all_match = rows.iter().all(|r| r.lp_match && r.ip_match && r.sdp_match);
    Ok(TableReport { table: which, metric: metric.as_str().to_string(), rows, all_match })
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

pub fn render_table(t: &TableReport, format: Format) -> String {
    match format {
        Format::Json => json(t),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &t.rows {
                w.serialize(r).expect("rows serialize to csv");
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is utf-8")
        }
        Format::Text => {
            let title = if t.table == 1 { "subspace distance" } else { "injection distance" };
            let mut out = format!("Table {}: bounds for the {title}, q = 2\n", t.table);
            let header = format!(
                "{:<16} {:>10} {:>10} {:>10}  {:<8} {:>10} {:>10}",
                "parameter", "E-V LP", "computed", "IP", "", "SDP", "computed"
            );
            out.push_str(header.trim_end());
            out.push('\n');
            for r in &t.rows {
                let published_lp = if r.starred { format!("*{}", r.published_lp) } else { r.published_lp.to_string() };
                let sdp = r.sdp.map(|v| v.to_string()).unwrap_or_else(|| r.sdp_status.clone());
                out.push_str(&format!(
                    "{:<16} {:>10} {:>10} {:>10}  {:<8} {:>10} {:>10}  {}\n",
                    r.label,
                    published_lp,
                    r.lp,
                    r.ip,
                    mark(r.lp_match && r.ip_match),
                    r.published_sdp,
                    sdp,
                    mark(r.sdp_match)
                ));
            }
            let bad = t.rows.iter().filter(|r| !(r.lp_match && r.ip_match && r.sdp_match)).count();
            out.push_str(&format!("{} rows, {} with a mismatch\n", t.rows.len(), bad));
            out
        }
    }
}
