// The Green function in a circularly polarized wave plus a magnetic field,
// evaluated along two different rotated rays.

use std::f64::consts::PI;

use wavefield::field::{FieldConfig, PlaneWaveProfile};
use wavefield::green::{gf_fixed_pl, spin_factor, EvalContext};
use wavefield::minkowski::{max_abs, LorentzVector, C64};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let field = FieldConfig::new(
        1.0,
        0.8,
        PlaneWaveProfile::Circular {
            amplitude: 0.5,
            frequency: 1.2,
        },
    );
    let mut ctx = EvalContext::new(
        1.0,
        LorentzVector::real(0.1, -0.2, 0.1, 0.3),
        LorentzVector::real(0.8, 0.5, 0.4, -0.2),
        LorentzVector::longitudinal_from(0.3, 1.5),
        field,
    );

    let s = spin_factor(
        C64::new(0.5, 0.5),
        ctx.phi_a(),
        ctx.phi_b(),
        &ctx.p_l,
        &ctx.field,
    )?;
    println!(
        "spin factor at e0 = 0.5+0.5i, diagonal: {:.5} {:.5} {:.5} {:.5}",
        s[(0, 0)],
        s[(1, 1)],
        s[(2, 2)],
        s[(3, 3)]
    );

    ctx.angle = PI / 6.0;
    let a = gf_fixed_pl(&ctx)?;
    ctx.angle = PI / 3.0;
    let b = gf_fixed_pl(&ctx)?;
    println!("G[0][0] along theta = pi/6: {:.10}", a.matrix[(0, 0)]);
    println!("G[0][0] along theta = pi/3: {:.10}", b.matrix[(0, 0)]);
    println!(
        "max rel. difference {:.2e}; error estimate {:.1e} from {} nodes",
        max_abs(&(a.matrix - b.matrix)) / max_abs(&a.matrix),
        a.diagnostics.error_estimate,
        a.diagnostics.nodes
    );

    ctx.p_l = LorentzVector::longitudinal_from(0.3, 0.9);
    match gf_fixed_pl(&ctx) {
        Ok(_) => println!("unexpected convergence below the mass shell"),
        Err(e) => println!("below the mass shell: {e}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
