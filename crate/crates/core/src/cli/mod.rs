//! Command-line front end: configuration, evaluation, CSV and JSON output.
//!
//! Every run writes `<out>` (CSV, one row per grid point) and
//! `<out>.json` (columns, inputs, convention ledger, row errors).
//! Exit codes: 0 success, 2 schema or range error, 3 numerical
//! singularity, 4 quadrature failure, 5 verification failure.

pub mod commands;
pub mod config;
pub mod ledger;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::error::Error;
use crate::verify::{self, CheckOutcome};

use commands::{RowError, Table};
use config::{parse_config, RunConfig};
use ledger::{ConventionLedger, CSV_SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error at '{path}': {message}")]
    Schema { path: String, message: String },

    #[error("range error at '{path}': {message}")]
    Range { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error(transparent)]
    Numeric(#[from] Error),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } | CliError::Range { .. } | CliError::Io(_) => 2,
            CliError::Numeric(e) => e.exit_code(),
            CliError::Verification(_) => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Identities,
    Kernel,
    K,
    SpinFactor,
    Gf,
    GfK0,
    Dirac,
    Verify,
    Limits,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Identities,
        Command::Kernel,
        Command::K,
        Command::SpinFactor,
        Command::Gf,
        Command::GfK0,
        Command::Dirac,
        Command::Verify,
        Command::Limits,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Identities => "identities",
            Command::Kernel => "kernel",
            Command::K => "K",
            Command::SpinFactor => "spinfactor",
            Command::Gf => "gf",
            Command::GfK0 => "gf-k0",
            Command::Dirac => "dirac",
            Command::Verify => "verify",
            Command::Limits => "limits",
        }
    }

    pub fn parse(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Whether the command can run without a configuration file.
    pub fn config_optional(&self) -> bool {
        matches!(self, Command::Identities | Command::Verify)
    }
}

/// One invocation of the front end.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub command: Command,
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub angle: Option<f64>,
    pub profile_sign_toggle: bool,
}

/// Result of a completed run; `exit_code` may still be nonzero when some
/// rows failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub exit_code: i32,
    pub csv: PathBuf,
    pub sidecar: PathBuf,
    pub lines: Vec<String>,
}

#[derive(Serialize)]
struct GridRecord<'a> {
    param: String,
    values: &'a [f64],
}

#[derive(Serialize)]
struct Inputs {
    g: f64,
    b: f64,
    profile: &'static str,
    m: f64,
    x_a: [f64; 4],
    x_b: [f64; 4],
    p_l: [f64; 4],
    y0: [f64; 4],
    e0: Option<[f64; 2]>,
    phi: Option<f64>,
    e0_max: Option<f64>,
    tolerance: [f64; 2],
    max_nodes: usize,
    fd_step: f64,
    limit_tolerance: f64,
}

impl Inputs {
    fn from(cfg: &RunConfig) -> Self {
        let ctx = &cfg.eval;
        Inputs {
            g: ctx.field.charge,
            b: ctx.field.b,
            profile: ctx.field.profile.kind().name(),
            m: ctx.m,
            x_a: ctx.x_a.re(),
            x_b: ctx.x_b.re(),
            p_l: ctx.p_l.re(),
            y0: ctx.y0.re(),
            e0: cfg.e0.map(|z| [z.re, z.im]),
            phi: cfg.phi,
            e0_max: ctx.e0_max,
            tolerance: [ctx.tol.abs, ctx.tol.rel],
            max_nodes: ctx.tol.max_nodes,
            fd_step: cfg.fd_step,
            limit_tolerance: cfg.limit_tolerance,
        }
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    command: &'static str,
    csv: String,
    csv_schema_version: u32,
    columns: &'a [String],
    rows: usize,
    grid: Option<GridRecord<'a>>,
    inputs: Option<Inputs>,
    conventions: &'a ConventionLedger,
    errors: &'a [RowError],
    failed_checks: usize,
    exit_code: i32,
    verify: Option<&'a [CheckOutcome]>,
}

/// `<out>.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_csv(path: &Path, table: &Table) -> Result<(), CliError> {
    let mut text = String::new();
    text.push_str(&table.columns.join(","));
    text.push('\n');
    for row in &table.rows {
        // labels never contain commas or quotes
        let _ = writeln!(text, "{}", row.join(","));
    }
    fs::write(path, text).map_err(|e| io(path, e))
}

fn load_config(inv: &Invocation) -> Result<Option<RunConfig>, CliError> {
    let path = match &inv.config {
        Some(p) => p,
        None if inv.command.config_optional() => return Ok(None),
        None => {
            return Err(CliError::Schema {
                path: "--config".into(),
                message: format!("'{}' needs a configuration file", inv.command.name()),
            })
        }
    };
    let text = fs::read_to_string(path).map_err(|e| io(path, e))?;
    let mut cfg = parse_config(&text)?;
    if let Some(theta) = inv.angle {
        if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
            return Err(CliError::Range {
                path: "--angle".into(),
                message: "contour angle must lie in (0, pi/2)".into(),
            });
        }
        cfg.eval.angle = theta;
    }
    if inv.profile_sign_toggle {
        cfg.eval.field.flip_k_prefactor = !cfg.eval.field.flip_k_prefactor;
    }
    Ok(Some(cfg))
}

/// Re-reads a sidecar and compares its ledger with the compiled conventions.
pub fn check_sidecar_ledger(path: &Path) -> Result<Vec<String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io(path, e))?;
    let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| io(path, e))?;
    let ledger: ConventionLedger =
        serde_json::from_value(doc["conventions"].clone()).map_err(|e| io(path, e))?;
    Ok(ledger.mismatches())
}

/// Runs one invocation, writing the CSV and sidecar.
pub fn run(inv: &Invocation) -> Result<Report, CliError> {
    let cfg = load_config(inv)?;
    let ledger = match &cfg {
        Some(c) => ConventionLedger::for_context(&c.eval),
        None => ConventionLedger::compiled(),
    };

    let outcomes = match inv.command {
        Command::Verify => Some(verify::run_all()),
        Command::Identities => Some(commands::identities()),
        _ => None,
    };
    if outcomes.is_some() {
        if let Some(c) = &cfg {
            if c.grid.is_some() {
                return Err(CliError::Schema {
                    path: "command.grid".into(),
                    message: format!("'{}' takes no grid", inv.command.name()),
                });
            }
        }
    }
    let table = match (&outcomes, &cfg) {
        (Some(o), _) => commands::outcome_table(o),
        (None, Some(c)) => commands::evaluate_grid(inv.command, c)?,
        (None, None) => unreachable!("config presence checked on load"),
    };

    let exit_code = match table.errors.first() {
        Some(e) => e.exit_code,
        None if table.failed_checks > 0 => 5,
        None => 0,
    };

    let csv = inv.out.clone();
    let sidecar = sidecar_path(&csv);
    write_csv(&csv, &table)?;
    let record = Sidecar {
        command: inv.command.name(),
        csv: csv
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        csv_schema_version: CSV_SCHEMA_VERSION,
        columns: &table.columns,
        rows: table.rows.len(),
        grid: cfg
            .as_ref()
            .and_then(|c| c.grid.as_ref())
            .map(|g| GridRecord {
                param: g.param.name(),
                values: &g.values,
            }),
        inputs: cfg.as_ref().map(Inputs::from),
        conventions: &ledger,
        errors: &table.errors,
        failed_checks: table.failed_checks,
        exit_code,
        verify: outcomes.as_deref(),
    };
    let json = serde_json::to_string_pretty(&record).map_err(|e| io(&sidecar, e))?;
    fs::write(&sidecar, json + "\n").map_err(|e| io(&sidecar, e))?;

    let mut lines = Vec::new();
    let mut exit_code = exit_code;
    if let Some(o) = &outcomes {
        lines.extend(o.iter().map(CheckOutcome::summary));
    }
    if inv.command == Command::Verify {
        let mismatches = check_sidecar_ledger(&sidecar)?;
        if mismatches.is_empty() {
            lines.push("[PASS] convention ledger matches compiled constants".into());
        } else {
            lines.push(format!(
                "[FAIL] convention ledger differs in: {}",
                mismatches.join(", ")
            ));
            exit_code = 5;
        }
    }
    lines.push(format!(
        "{}: {} rows written to {} ({} failed)",
        inv.command.name(),
        table.rows.len(),
        csv.display(),
        table.errors.len() + table.failed_checks
    ));
    for e in &table.errors {
        lines.push(format!("row {}: {}", e.row, e.message));
    }
    Ok(Report {
        exit_code,
        csv,
        sidecar,
        lines,
    })
}

/// Runs an invocation and prints its report; returns the process exit code.
pub fn main_with(inv: &Invocation) -> i32 {
    match run(inv) {
        Ok(report) => {
            for line in &report.lines {
                println!("{line}");
            }
            report.exit_code
        }
        Err(e) => {
            eprintln!("wavefield: {e}");
            e.exit_code()
        }
    }
}
