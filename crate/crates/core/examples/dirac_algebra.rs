// Gamma matrices, the metric and the polarization basis.

use wavefield::minkowski::{
    dot, max_abs, tanh_projector_identity, GammaBasis, LorentzVector, Matrix4C, C64, METRIC,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let basis = GammaBasis::default();
    println!("metric diag = {METRIC:?}");

    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let expected =
                Matrix4C::identity() * C64::from(if mu == nu { 2.0 * METRIC[mu] } else { 0.0 });
            worst = worst.max(max_abs(&(basis.anticommutator(mu, nu) - expected)));
        }
    }
    println!("max |{{g^mu, g^nu}} - 2 g^(mu nu)| = {worst:.2e}");

    let eps = LorentzVector::epsilon();
    let k = LorentzVector::wave_vector();
    println!(
        "eps.eps = {}, eps.eps* = {}, k.k = {}, k.eps = {}",
        dot(&eps, &eps),
        dot(&eps, &LorentzVector::epsilon_star()),
        dot(&k, &k),
        dot(&k, &eps)
    );

    let projectors = basis.projector_plus() + basis.projector_minus() - Matrix4C::identity();
    println!("|P+ + P- - I| = {:.2e}", max_abs(&projectors));

    let (lhs, rhs) = tanh_projector_identity(C64::new(0.7, 0.3), &basis)?;
    println!(
        "tanh projector identity at alpha = 0.7+0.3i: residual {:.2e}",
        max_abs(&(lhs - rhs))
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
