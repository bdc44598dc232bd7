// The magnetic transverse kernel against its time-sliced path integral,
// and a scan of real proper times across the first caustic.

use wavefield::field::{FieldConfig, PlaneWaveProfile};
use wavefield::kernels::{near_caustic, schwinger_kernel, spin_determinant, TransverseEndpoints};
use wavefield::minkowski::C64;
use wavefield::oracles::{sliced_extrapolated, spin_determinant_eigen, SliceLattice};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = FieldConfig::new(1.0, 0.9, PlaneWaveProfile::Zero);
    let ends = TransverseEndpoints::new([0.1, -0.3], [0.7, 0.2]);
    let e0 = C64::from_polar(1.2, 0.5);

    let exact = schwinger_kernel(e0, &ends, &cfg)?;
    let lattice = SliceLattice {
        n: 8,
        endpoints: ends,
        e0,
        charge: cfg.charge,
        b: cfg.b,
    };
    let sliced = sliced_extrapolated(&lattice, &[8, 16, 32, 64])?;
    for (n, v) in &sliced.values {
        println!("N = {n:2}  sliced = {v:.6}");
    }
    println!(
        "extrapolated {:.6} (order {:.2}), closed form {:.6}, rel. diff {:.1e}",
        sliced.extrapolated,
        sliced.observed_order,
        exact,
        (sliced.extrapolated - exact).norm() / exact.norm()
    );

    let first_caustic = 2.0 * std::f64::consts::PI / (cfg.charge * cfg.b);
    for s in [0.5, 0.9, 0.99, 1.0, 1.01, 1.2] {
        let e0 = C64::from(s * first_caustic);
        match schwinger_kernel(e0, &ends, &cfg) {
            Ok(k) => println!(
                "e0 = {:.4}  kernel = {k:.4}  near caustic: {}",
                e0.re,
                near_caustic(e0, &cfg)
            ),
            Err(e) => println!("e0 = {:.4}  {e}", e0.re),
        }
    }

    let det = spin_determinant(C64::from(1.3), &cfg);
    println!(
        "spin determinant at e0 = 1.3: {:.12} (eigenvalue reference {:.12})",
        det.re,
        spin_determinant_eigen(1.3, cfg.charge, cfg.b)
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
