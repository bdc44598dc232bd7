use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use wavefield::cli::{main_with, Command, Invocation};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Identities,
    Kernel,
    #[value(name = "K")]
    K,
    #[value(name = "spinfactor")]
    SpinFactor,
    Gf,
    #[value(name = "gf-k0")]
    GfK0,
    Dirac,
    Verify,
    Limits,
}

/// Proper-time Green function of a Dirac particle in a plane wave plus a
/// constant magnetic field.
#[derive(Debug, Parser)]
#[command(name = "wavefield", version)]
struct Args {
    command: Cmd,
    /// JSON configuration (optional for `identities` and `verify`).
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path; the sidecar goes to `<out>.json`.
    #[arg(long)]
    out: PathBuf,
    /// Contour angle theta in (0, pi/2), overriding the configuration.
    #[arg(long)]
    angle: Option<f64>,
    /// Flip the sign of the outer exponential of the dressing K.
    #[arg(long)]
    profile_sign_toggle: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let command = match args.command {
        Cmd::Identities => Command::Identities,
        Cmd::Kernel => Command::Kernel,
        Cmd::K => Command::K,
        Cmd::SpinFactor => Command::SpinFactor,
        Cmd::Gf => Command::Gf,
        Cmd::GfK0 => Command::GfK0,
        Cmd::Dirac => Command::Dirac,
        Cmd::Verify => Command::Verify,
        Cmd::Limits => Command::Limits,
    };
    let code = main_with(&Invocation {
        command,
        config: args.config,
        out: args.out,
        angle: args.angle,
        profile_sign_toggle: args.profile_sign_toggle,
    });
    ExitCode::from(code as u8)
}
