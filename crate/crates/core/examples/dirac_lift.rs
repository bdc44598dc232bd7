// The Dirac operator applied to the Green function by finite differences,
// compared with the closed-form free and constant-field results.

use wavefield::field::{FieldConfig, PlaneWaveProfile};
use wavefield::green::{dirac_apply, gf_fixed_pl, gf_k_zero, EvalContext, DEFAULT_FD_STEP};
use wavefield::minkowski::{max_abs, LorentzVector};
use wavefield::oracles::{free_dirac, magnetic_dirac, MagneticDiracCase};
use wavefield::quadrature::Tolerance;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut ctx = EvalContext::new(
        1.0,
        LorentzVector::real(0.1, 0.0, 0.2, 0.1),
        LorentzVector::real(0.7, -0.5, 0.4, -0.3),
        LorentzVector::longitudinal_from(0.2, 1.6),
        FieldConfig::new(1.0, 0.0, PlaneWaveProfile::Zero),
    );

    let s = dirac_apply(&ctx, gf_fixed_pl, DEFAULT_FD_STEP)?;
    let exact = free_dirac(ctx.m, &ctx.x_a, &ctx.x_b, &ctx.p_l);
    println!(
        "free: rel. diff {:.2e} ({} integrand nodes)",
        max_abs(&(s.matrix - exact)) / max_abs(&exact),
        s.diagnostics.nodes
    );

    ctx.field.b = 0.7;
    let s = dirac_apply(&ctx, gf_k_zero, DEFAULT_FD_STEP)?;
    let exact = magnetic_dirac(&MagneticDiracCase {
        m: ctx.m,
        charge: ctx.field.charge,
        b: ctx.field.b,
        x_a: ctx.x_a,
        x_b: ctx.x_b,
        p_l: ctx.p_l,
        angle: ctx.angle,
        tol: Tolerance::new(1e-12, 1e-10),
    })?;
    println!(
        "B = 0.7: rel. diff {:.2e}",
        max_abs(&(s.matrix - exact)) / max_abs(&exact)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
