// Without a wave the general integrand reduces to the constant-field one,
// and for a weak field both approach the free propagator.

use wavefield::field::{FieldConfig, PlaneWaveProfile};
use wavefield::green::{gf_fixed_pl, gf_k_zero, EvalContext};
use wavefield::minkowski::{max_abs, LorentzVector};
use wavefield::oracles::{free_propagator, FreeGeometry};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut ctx = EvalContext::new(
        0.9,
        LorentzVector::real(0.0, 0.0, 0.2, 0.1),
        LorentzVector::real(0.6, -0.4, 0.5, -0.3),
        LorentzVector::longitudinal_from(-0.2, 1.6),
        FieldConfig::new(1.0, 1.1, PlaneWaveProfile::Zero),
    );
    let general = gf_fixed_pl(&ctx)?.matrix;
    let magnetic = gf_k_zero(&ctx)?.matrix;
    println!(
        "general vs constant-field integrand: max diff {:.1e}",
        max_abs(&(general - magnetic))
    );

    let free = free_propagator(&FreeGeometry::new(ctx.m, &ctx.x_a, &ctx.x_b, &ctx.p_l));
    for b in [1e-1, 1e-2, 1e-4, 1e-6] {
        ctx.field.b = b;
        let scalar = gf_k_zero(&ctx)?.matrix.trace() / 4.0;
        println!(
            "B = {b:.0e}  tr G/4 = {scalar:.10}  rel. diff to free {:.2e}",
            (scalar - free).norm() / free.norm()
        );
    }
    println!("free closed form          {free:.10}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
