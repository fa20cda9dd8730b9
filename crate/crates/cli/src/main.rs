use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use subspace_bounds::commands::{
    self, parse_metric, ExportModel, GrassmannArgs, ProjectiveArgs, ProjectiveMethod, DEFAULT_TOL,
};
use subspace_bounds::{CliError, Format};
use subspace_bounds_core::grassmann::GrassmannMethod;
use subspace_bounds_core::Metric;

/// Upper bounds on the size of subspace codes.
#[derive(Parser)]
#[command(name = "subspace-bounds", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds on constant-dimension codes A_q(n, k, 2·delta).
    Grassmann {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: usize,
        /// sphere, singleton, anticode, johnson1, johnson2, combined,
        /// delsarte-lp or all.
        #[arg(long, default_value = "combined")]
        method: String,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Record wall-clock time in the reports.
        #[arg(long)]
        timings: bool,
    },
    /// Bounds on codes in the whole projective space.
    Projective {
        #[command(flatten)]
        model: ModelArgs,
        /// ev-lp, ev-ip or sdp.
        #[arg(long, default_value = "sdp")]
        method: ProjectiveMethod,
        #[arg(long, default_value = "text")]
        format: Format,
        #[arg(long)]
        timings: bool,
    },
    /// Recompute a reference table and compare with the published values.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Write a model as SDPA sparse text (sdp) or LP text (ev-lp).
    Export {
        #[arg(long)]
        model: ExportModel,
        #[command(flatten)]
        params: ModelArgs,
        /// Output path; `-` writes to standard output.
        #[arg(long)]
        out: String,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value = "subspace", value_parser = parse_metric)]
    metric: Metric,
    /// Add the extra inequalities for the subspace metric (LP only).
    #[arg(long)]
    extra_cuts: bool,
    /// Drop the per-dimension cap rows from the SDP.
    #[arg(long)]
    no_dim_cuts: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

impl ModelArgs {
    fn to_args(&self, method: ProjectiveMethod, timings: bool) -> ProjectiveArgs {
        ProjectiveArgs {
            q: self.q,
            n: self.n,
            d: self.d,
            metric: self.metric,
            method,
            extra_cuts: self.extra_cuts,
            dim_cuts: !self.no_dim_cuts,
            tol: self.tol,
            timings,
        }
    }
}

fn methods(spec: &str) -> Result<Vec<GrassmannMethod>, CliError> {
    if spec == "all" {
        return Ok(Vec::new());
    }
    spec.split(',').map(|m| m.trim().parse::<GrassmannMethod>().map_err(CliError::from)).collect()
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Grassmann { q, n, k, delta, method, format, timings } => {
            let args = GrassmannArgs { q, n, k, delta, methods: methods(&method)?, timings };
            Ok(commands::render_reports(&commands::grassmann(&args)?, format))
        }
        Command::Projective { model, method, format, timings } => {
            match commands::projective(&model.to_args(method, timings)) {
                Ok(r) => Ok(commands::render_reports(&[r], format)),
                Err(CliError::Solver(r)) => {
                    print!("{}", commands::render_reports(&[(*r).clone()], format));
                    Err(CliError::Solver(r))
                }
                Err(e) => Err(e),
            }
        }
        Command::Table { which, max_n, format, tol } => {
            Ok(commands::render_table(&commands::compute_table(which, max_n, tol)?, format))
        }
        Command::Export { model, params, out } => {
            let text = commands::export(model, &params.to_args(ProjectiveMethod::Sdp, false))?;
            if out == "-" {
                Ok(text)
            } else {
                fs::write(&out, text).map_err(|e| CliError::Io(format!("cannot write {out}: {e}")))?;
                Ok(String::new())
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(4);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
