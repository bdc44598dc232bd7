// Classical phase path, transverse drift and spin solutions.

use wavefield::field::{FieldConfig, PlaneWaveProfile};
use wavefield::minkowski::LorentzVector;
use wavefield::paths::{
    psi_classical, y_path, PathContext, PhiPath, SpinPathContext, TransverseDrift,
};
use wavefield::quadrature::Tolerance;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = FieldConfig::new(
        1.0,
        0.7,
        PlaneWaveProfile::Circular {
            amplitude: 0.5,
            frequency: 1.3,
        },
    );
    let p_l = LorentzVector::longitudinal_from(0.3, 1.5);
    let y0 = LorentzVector::real(0.1, -0.2, 0.0, 0.0);
    let tol = Tolerance::new(1e-12, 1e-10);
    let e0 = 0.8;
    let phi = PhiPath::new(e0, &p_l, 0.2);

    let ctx = PathContext {
        e0,
        field: &cfg,
        phi,
        tol,
    };
    let drift = TransverseDrift::new(&cfg, &p_l, &y0, phi.at(0.0), phi.at(1.0), &tol)?;
    for tau in [0.0, 0.25, 0.5, 1.0] {
        let by_tau = y_path(tau, &y0, &ctx)?;
        let by_phase = drift.at(phi.at(tau));
        println!(
            "tau = {tau:.2}  phi = {:+.3}  Y = ({:+.6}, {:+.6})  |Y(tau) - Y(phi)| = {:.1e}",
            phi.at(tau),
            by_tau[0].re,
            by_tau[1].re,
            (by_tau - by_phase).max_abs()
        );
    }

    let spin = SpinPathContext {
        e0,
        field: &cfg,
        p_l,
        phi_a: 0.2,
        tol,
    };
    let start = psi_classical(0.0, &spin)?;
    let end = psi_classical(1.0, &spin)?;
    let boundary = start.m_gamma + end.m_gamma;
    println!(
        "M(0) + M(1) on the transverse block: [[{:.3}, {:.3}], [{:.3}, {:.3}]]",
        boundary[(0, 0)],
        boundary[(0, 1)],
        boundary[(1, 0)],
        boundary[(1, 1)]
    );
    println!(
        "|v(0) + v(1)| = {:.1e}",
        (start.v_eta + end.v_eta).max_abs()
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
