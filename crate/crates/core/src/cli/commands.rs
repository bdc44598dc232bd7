//! Row evaluation for each subcommand.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::green::{dirac_apply, gf_fixed_pl, gf_k_zero, spin_factor, PropagatorValue};
use crate::kernels::{
    k_conjugate, k_function, near_caustic, schwinger_kernel, TransverseEndpoints,
};
use crate::minkowski::{Matrix4C, C64};
use crate::oracles::{free_propagator, FreeGeometry};
use crate::verify::{self, CheckOutcome};

use super::config::{GridParam, RunConfig};
use super::{CliError, Command};

/// Cells of a finished table, already formatted.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub errors: Vec<RowError>,
    /// Rows whose values were computed but failed a comparison.
    pub failed_checks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowError {
    pub row: usize,
    pub status: String,
    pub exit_code: i32,
    pub message: String,
}

pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:.16e}")
    }
}

fn complex_columns(name: &str) -> Vec<String> {
    vec![format!("{name}_re"), format!("{name}_im")]
}

fn matrix_columns() -> Vec<String> {
    (0..4)
        .flat_map(|r| (0..4).flat_map(move |c| complex_columns(&format!("m{r}{c}"))))
        .collect()
}

fn push_complex(cells: &mut Vec<String>, z: C64) {
    cells.push(num(z.re));
    cells.push(num(z.im));
}

fn push_matrix(cells: &mut Vec<String>, m: &Matrix4C) {
    for r in 0..4 {
        for c in 0..4 {
            push_complex(cells, m[(r, c)]);
        }
    }
}

fn push_propagator(cells: &mut Vec<String>, v: &PropagatorValue) {
    push_matrix(cells, &v.matrix);
    cells.push(num(v.diagnostics.error_estimate));
    cells.push(v.diagnostics.nodes.to_string());
}

impl Command {
    fn grid_params(&self, p: GridParam) -> bool {
        use GridParam::*;
        match self {
            Command::Identities | Command::Verify => false,
            Command::Kernel | Command::SpinFactor => matches!(p, E0 | B | G | Xb(_) | P2 | P3),
            Command::K => matches!(p, Phi | B | G | P2 | P3),
            Command::Gf | Command::GfK0 | Command::Dirac | Command::Limits => {
                matches!(p, B | G | M | Theta | Xb(_) | P2 | P3)
            }
        }
    }

    /// Value and diagnostic columns, after the grid and status columns.
    fn value_columns(&self) -> Vec<String> {
        let mut cols = Vec::new();
        match self {
            Command::Kernel => {
                cols.extend(complex_columns("kernel"));
                cols.push("near_singularity".into());
            }
            Command::K => {
                cols.extend(complex_columns("K"));
                cols.extend(complex_columns("K_conj"));
                cols.push("error_estimate".into());
                cols.push("nodes".into());
            }
            Command::SpinFactor => cols.extend(matrix_columns()),
            Command::Gf | Command::GfK0 | Command::Dirac => {
                cols.extend(matrix_columns());
                cols.push("error_estimate".into());
                cols.push("nodes".into());
            }
            Command::Limits => {
                cols.extend(complex_columns("gf_scalar"));
                cols.extend(complex_columns("free"));
                cols.push("rel_error".into());
                cols.push("within_tolerance".into());
            }
            Command::Identities | Command::Verify => {}
        }
        cols
    }
}

/// Values of one row, and whether any comparison in it failed.
fn evaluate_point(command: Command, cfg: &RunConfig) -> Result<(Vec<String>, bool)> {
    let ctx = &cfg.eval;
    let mut cells = Vec::new();
    let mut failed = false;
    match command {
        Command::Kernel => {
            let e0 = cfg.e0.unwrap_or_default();
            let ep = TransverseEndpoints::from_vectors(&ctx.x_a, &ctx.x_b);
            push_complex(&mut cells, schwinger_kernel(e0, &ep, &ctx.field)?);
            cells.push(near_caustic(e0, &ctx.field).to_string());
        }
        Command::K => {
            let phi = cfg.phi.unwrap_or_default();
            let (k, dk) = k_function(phi, ctx.phi0(), &ctx.p_l, &ctx.field, &ctx.tol)?;
            let (ks, dks) = k_conjugate(phi, ctx.phi0(), &ctx.p_l, &ctx.field, &ctx.tol)?;
            push_complex(&mut cells, k);
            push_complex(&mut cells, ks);
            let d = dk.merge(&dks);
            cells.push(num(d.error_estimate));
            cells.push(d.nodes.to_string());
        }
        Command::SpinFactor => {
            let e0 = cfg.e0.unwrap_or_default();
            let m = spin_factor(e0, ctx.phi_a(), ctx.phi_b(), &ctx.p_l, &ctx.field)?;
            push_matrix(&mut cells, &m);
        }
        Command::Gf => push_propagator(&mut cells, &gf_fixed_pl(ctx)?),
        Command::GfK0 => push_propagator(&mut cells, &gf_k_zero(ctx)?),
        Command::Dirac => push_propagator(&mut cells, &dirac_apply(ctx, gf_fixed_pl, cfg.fd_step)?),
        Command::Limits => {
            // the spin coupling is traceless and linear in B, so only the
            // scalar part is compared
            let scalar = gf_k_zero(ctx)?.matrix.trace() / 4.0;
            let free = free_propagator(&FreeGeometry::new(ctx.m, &ctx.x_a, &ctx.x_b, &ctx.p_l));
            let rel = (scalar - free).norm() / free.norm();
            failed = !(rel <= cfg.limit_tolerance);
            push_complex(&mut cells, scalar);
            push_complex(&mut cells, free);
            cells.push(num(rel));
            cells.push((!failed).to_string());
        }
        Command::Identities | Command::Verify => unreachable!("not a grid command"),
    }
    Ok((cells, failed))
}

/// Evaluates a grid command; the grid is processed in parallel and the
/// rows come back in grid order.
pub fn evaluate_grid(command: Command, cfg: &RunConfig) -> std::result::Result<Table, CliError> {
    let grid = cfg.grid.as_ref();
    if let Some(g) = grid {
        if !command.grid_params(g.param) {
            return Err(CliError::Schema {
                path: "command.grid.param".into(),
                message: format!(
                    "'{}' cannot be varied for '{}'",
                    g.param.name(),
                    command.name()
                ),
            });
        }
    }
    let varied = |p: GridParam| grid.map(|g| g.param == p).unwrap_or(false);
    if matches!(command, Command::Kernel | Command::SpinFactor)
        && cfg.e0.is_none()
        && !varied(GridParam::E0)
    {
        return Err(CliError::Schema {
            path: "eval.e0".into(),
            message: format!(
                "'{}' needs a proper time (eval.e0 or a grid over e0)",
                command.name()
            ),
        });
    }
    if command == Command::K && cfg.phi.is_none() && !varied(GridParam::Phi) {
        return Err(CliError::Schema {
            path: "eval.phi".into(),
            message: "'K' needs a phase (eval.phi or a grid over phi)".into(),
        });
    }

    let points: Vec<(Option<f64>, RunConfig)> = match grid {
        Some(g) => g
            .values
            .iter()
            .map(|&v| (Some(v), cfg.with(g.param, v)))
            .collect(),
        None => vec![(None, cfg.clone())],
    };
    let results: Vec<Result<(Vec<String>, bool)>> = points
        .par_iter()
        .map(|(_, c)| evaluate_point(command, c))
        .collect();

    let value_columns = command.value_columns();
    let mut columns = Vec::new();
    if let Some(g) = grid {
        columns.push(g.param.name());
    }
    columns.push("status".into());
    columns.extend(value_columns.iter().cloned());

    let mut table = Table {
        columns,
        rows: Vec::new(),
        errors: Vec::new(),
        failed_checks: 0,
    };
    for (i, ((x, _), result)) in points.iter().zip(results).enumerate() {
        let mut row: Vec<String> = x.iter().map(|&v| num(v)).collect();
        match result {
            Ok((cells, failed)) => {
                row.push("ok".into());
                row.extend(cells);
                table.failed_checks += failed as usize;
            }
            Err(e) => {
                row.push(e.kind().into());
                row.extend(value_columns.iter().map(|_| "NaN".to_string()));
                table.errors.push(row_error(i, &e));
            }
        }
        table.rows.push(row);
    }
    Ok(table)
}

fn row_error(row: usize, e: &Error) -> RowError {
    RowError {
        row,
        status: e.kind().into(),
        exit_code: e.exit_code(),
        message: e.to_string(),
    }
}

/// One row per sub-check of the given verification outcomes.
pub fn outcome_table(outcomes: &[CheckOutcome]) -> Table {
    let columns = [
        "id",
        "check",
        "status",
        "part",
        "value",
        "tolerance",
        "passed",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut rows = Vec::new();
    let mut failed = 0;
    for o in outcomes {
        failed += !o.passed() as usize;
        let status = match &o.error {
            Some(_) => "error",
            None => "ok",
        };
        if o.parts.is_empty() {
            rows.push(vec![
                o.id.to_string(),
                o.name.clone(),
                status.into(),
                String::new(),
                "NaN".into(),
                "NaN".into(),
                "false".into(),
            ]);
        }
        for p in &o.parts {
            rows.push(vec![
                o.id.to_string(),
                o.name.clone(),
                status.into(),
                p.label.clone(),
                num(p.value),
                num(p.tolerance),
                (p.passed() && o.error.is_none()).to_string(),
            ]);
        }
    }
    Table {
        columns,
        rows,
        errors: Vec::new(),
        failed_checks: failed,
    }
}

/// Algebraic identity checks.
pub fn identities() -> Vec<CheckOutcome> {
    let checks: [fn() -> CheckOutcome; 3] = [
        verify::clifford_suite,
        verify::basis_suite,
        verify::wave_tensor_suite,
    ];
    checks.par_iter().map(|c| c()).collect()
}
