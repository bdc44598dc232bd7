// Plane-wave profiles and the combined field tensor.

use wavefield::field::{make_profile, total_field_tensor, FieldConfig, ProfileKind, ProfileParams};
use wavefield::minkowski::LorentzVector;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let pulse = make_profile(
        ProfileKind::Pulse,
        &ProfileParams {
            amplitude: 0.8,
            frequency: 2.0,
            width: 1.5,
            ..Default::default()
        },
    )?;
    let table = make_profile(
        ProfileKind::Tabulated,
        &ProfileParams {
            phi: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            a1: vec![0.0, 0.3, 0.5, 0.3, 0.0],
            a2: vec![0.0, -0.1, 0.0, 0.1, 0.0],
            ..Default::default()
        },
    )?;
    for phi in [-1.5, 0.0, 0.5, 3.0] {
        let (p1, p2) = pulse.components(phi);
        let (t1, t2) = table.components(phi);
        println!("phi = {phi:5.2}  pulse A = ({p1:+.4}, {p2:+.4})  table A = ({t1:+.4}, {t2:+.4})");
    }

    let bad = make_profile(
        ProfileKind::Circular,
        &ProfileParams {
            amplitude: 1.0,
            frequency: -1.0,
            ..Default::default()
        },
    );
    println!("negative frequency: {}", bad.unwrap_err());

    let cfg = FieldConfig::new(1.0, 0.6, pulse);
    let x = LorentzVector::real(0.2, -0.1, 0.4, 0.9);
    let a = cfg.potential_at(&x);
    println!(
        "A(x) = ({:+.4}, {:+.4}, {:+.4}, {:+.4})",
        a[0], a[1], a[2], a[3]
    );
    let f = total_field_tensor(&cfg, 0.3);
    println!("F_01 at phi = 0.3: {:+.4}", f[(0, 1)]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
