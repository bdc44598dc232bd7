// The dressing `K(φ)` by quadrature and in closed form.

use wavefield::field::{FieldConfig, PlaneWaveProfile};
use wavefield::kernels::{k_conjugate, k_dot_p, k_function};
use wavefield::minkowski::LorentzVector;
use wavefield::oracles::{k_closed_form, KCase, KSetup};
use wavefield::quadrature::Tolerance;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (amplitude, frequency) = (0.6, 1.4);
    let mut cfg = FieldConfig::new(
        1.0,
        0.5,
        PlaneWaveProfile::Circular {
            amplitude,
            frequency,
        },
    );
    let p_l = LorentzVector::longitudinal_from(0.3, 1.5);
    let tol = Tolerance::new(1e-13, 1e-12);
    let phi0 = -0.4;

    for flip in [false, true] {
        cfg.flip_k_prefactor = flip;
        let setup = KSetup {
            charge: cfg.charge,
            b: cfg.b,
            kp: k_dot_p(&p_l)?,
            phi0,
            flip_prefactor: flip,
        };
        println!("outer exponential sign flipped: {flip}");
        for phi in [0.0, 0.8, 2.5] {
            let (k, diag) = k_function(phi, phi0, &p_l, &cfg, &tol)?;
            let (k_star, _) = k_conjugate(phi, phi0, &p_l, &cfg, &tol)?;
            let closed = k_closed_form(
                &KCase::Circular {
                    amplitude,
                    frequency,
                },
                &setup,
                phi,
            )?;
            println!(
                "  phi = {phi:.1}  K = {k:.8}  closed form = {closed:.8}  K* = {k_star:.8}  ({} nodes)",
                diag.nodes
            );
        }
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
