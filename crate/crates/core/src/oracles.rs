//! Reference values computed without the kernel, dressing and assembly
//! code: a time-sliced Gaussian path integral, closed-form antiderivatives,
//! the free propagator through Bessel functions, an eigenvalue evaluation
//! of the spin determinant and analytic `x_b` derivatives.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen};

use crate::error::{Error, Result};
use crate::field::PlaneWaveProfile;
use crate::kernels::TransverseEndpoints;
use crate::minkowski::{GammaBasis, LorentzVector, Matrix4C, C64, I, METRIC, ONE, ZERO};
use crate::quadrature::{integrate_with_breaks, Tolerance};

/// Discretized transverse path integral with `n` slices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceLattice {
    pub n: usize,
    pub endpoints: TransverseEndpoints,
    pub e0: C64,
    pub charge: f64,
    pub b: f64,
}

// Index of coordinate `a` of lattice node `j` in the full coordinate list.
fn node(j: usize, a: usize) -> usize {
    2 * j + a
}

/// Exact Gaussian integral over the interior nodes of the lattice.
///
/// The action `Σ_j [−|X_{j+1} − X_j|²/(2e₀ε) − (gB/2)(X_j¹X_{j+1}² − X_j²X_{j+1}¹)]`
/// uses the midpoint rule for the magnetic term; each slice carries the
/// free normalization `i/(2πe₀ε)`. The interior form is factorized as
/// `LDLᵀ` without conjugation, which is stable because its Hermitian part
/// is positive definite for `Im e₀ > 0`.
pub fn sliced_kernel(lat: &SliceLattice) -> Result<C64> {
    let n = lat.n;
    if n < 2 {
        return Err(Error::InvalidContext(format!(
            "slice count must be >= 2, got {n}"
        )));
    }
    if lat.e0.im < 0.0 || lat.e0.norm() == 0.0 {
        return Err(Error::InvalidContext(
            "proper time must lie in the closed upper half-plane".into(),
        ));
    }
    let eps = 1.0 / n as f64;
    let c = lat.charge * lat.b;
    let size = 2 * (n + 1);

    // S = yᵀ Q y over all coordinates
    let mut q = DMatrix::<C64>::zeros(size, size);
    let w = -1.0 / (2.0 * lat.e0 * eps);
    for j in 0..n {
        for a in 0..2 {
            let (p, r) = (node(j, a), node(j + 1, a));
            q[(p, p)] += w;
            q[(r, r)] += w;
            q[(p, r)] -= w;
            q[(r, p)] -= w;
        }
        for (p, r, s) in [
            (node(j, 0), node(j + 1, 1), -c / 2.0),
            (node(j, 1), node(j + 1, 0), c / 2.0),
        ] {
            q[(p, r)] += C64::from(s / 2.0);
            q[(r, p)] += C64::from(s / 2.0);
        }
    }

    let boundary = [node(0, 0), node(0, 1), node(n, 0), node(n, 1)];
    let ep = lat.endpoints;
    let yb = [ep.xa1, ep.xa2, ep.xb1, ep.xb2];
    let dim = 2 * (n - 1);
    let interior = |k: usize| k + 2;

    // iS = −½ yᵀ A y + bᵀ y + c0
    let a = DMatrix::<C64>::from_fn(dim, dim, |r, s| -2.0 * I * q[(interior(r), interior(s))]);
    let b = DVector::<C64>::from_fn(dim, |r, _| {
        boundary
            .iter()
            .zip(yb)
            .map(|(&col, y)| 2.0 * I * q[(interior(r), col)] * y)
            .sum()
    });
    let mut c0 = ZERO;
    for (i, &p) in boundary.iter().enumerate() {
        for (j, &r) in boundary.iter().enumerate() {
            c0 += I * q[(p, r)] * yb[i] * yb[j];
        }
    }

    let (l, d) = ldlt(a)?;
    let x = ldlt_solve(&l, &d, &b);
    let quadratic = 0.5 * b.iter().zip(x.iter()).map(|(u, v)| u * v).sum::<C64>();

    let slice_norm = I / (2.0 * PI * lat.e0 * eps);
    let mut prefactor = slice_norm;
    for j in 0..n - 1 {
        prefactor *= slice_norm * 2.0 * PI / (d[2 * j].sqrt() * d[2 * j + 1].sqrt());
    }
    Ok(prefactor * (quadratic + c0).exp())
}

fn ldlt(mut a: DMatrix<C64>) -> Result<(DMatrix<C64>, Vec<C64>)> {
    let dim = a.nrows();
    let scale = (0..dim).map(|k| a[(k, k)].norm()).fold(0.0, f64::max);
    let mut d = vec![ZERO; dim];
    for k in 0..dim {
        let pivot = a[(k, k)];
        if pivot.norm() <= 1e-13 * scale {
            return Err(Error::SingularForm {
                pivot: k,
                size: dim,
            });
        }
        d[k] = pivot;
        for r in k + 1..dim {
            let lr = a[(r, k)] / pivot;
            for s in k + 1..=r {
                let update = lr * a[(s, k)];
                a[(r, s)] -= update;
            }
            a[(r, k)] = lr;
        }
    }
    for r in 0..dim {
        a[(r, r)] = ONE;
        for s in r + 1..dim {
            a[(r, s)] = ZERO;
        }
    }
    Ok((a, d))
}

fn ldlt_solve(l: &DMatrix<C64>, d: &[C64], b: &DVector<C64>) -> DVector<C64> {
    let dim = b.len();
    let mut y = b.clone();
    for r in 0..dim {
        for s in 0..r {
            let t = l[(r, s)] * y[s];
            y[r] -= t;
        }
    }
    for r in 0..dim {
        y[r] /= d[r];
    }
    for r in (0..dim).rev() {
        for s in r + 1..dim {
            let t = l[(s, r)] * y[s];
            y[r] -= t;
        }
    }
    y
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlicedEstimate {
    pub values: Vec<(usize, C64)>,
    pub extrapolated: C64,
    /// Convergence order in `1/N` from the three finest lattices.
    pub observed_order: f64,
}

/// Sliced values at each `N` and a Richardson extrapolation using the
/// observed order of the finest three (`counts` must double successively).
pub fn sliced_extrapolated(lat: &SliceLattice, counts: &[usize]) -> Result<SlicedEstimate> {
    if counts.len() < 3 {
        return Err(Error::InvalidContext(
            "need at least three slice counts".into(),
        ));
    }
    let values = counts
        .iter()
        .map(|&n| Ok((n, sliced_kernel(&SliceLattice { n, ..*lat })?)))
        .collect::<Result<Vec<_>>>()?;
    let k = values.len();
    let (v1, v2, v3) = (values[k - 3].1, values[k - 2].1, values[k - 1].1);
    let (d1, d2) = ((v2 - v1).norm(), (v3 - v2).norm());
    if d2 <= 1e-14 * v3.norm() {
        return Ok(SlicedEstimate {
            values,
            extrapolated: v3,
            observed_order: f64::INFINITY,
        });
    }
    let order = (d1 / d2).log2();
    let extrapolated = v3 + (v3 - v2) / (2f64.powf(order) - 1.0);
    Ok(SlicedEstimate {
        values,
        extrapolated,
        observed_order: order,
    })
}

/// Profiles with an elementary antiderivative for the dressing integral.
#[derive(Debug, Clone, Copy)]
pub enum KCase<'a> {
    /// `B = 0`, any profile: the exponentials drop out.
    BZero(&'a PlaneWaveProfile),
    /// `ε·A'^p ≡ c`.
    ConstantSlope(C64),
    Circular {
        amplitude: f64,
        frequency: f64,
    },
    Linear {
        amplitude: f64,
        frequency: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KSetup {
    pub charge: f64,
    pub b: f64,
    /// `k·p^L`.
    pub kp: f64,
    pub phi0: f64,
    pub flip_prefactor: bool,
}

/// Closed-form dressing `K(φ)`.
///
/// Writing `ε·A'^p = Σ c_j e^{iω_jφ}` gives
/// `K = g/(2k·p) e^{iβφ} Σ c_j (e^{i(β+ω_j)φ} − e^{i(β+ω_j)φ₀})/(i(β+ω_j))`.
/// A circular wave has the single term `ω = ν`; a linear one has `ω = ±ν`.
pub fn k_closed_form(case: &KCase, setup: &KSetup, phi: f64) -> Result<C64> {
    let prefactor = setup.charge / (2.0 * setup.kp);
    let beta = setup.charge * setup.b / setup.kp;
    let outer_sign = if setup.flip_prefactor { -1.0 } else { 1.0 };
    let outer = C64::new(0.0, outer_sign * beta * phi).exp();

    let terms: Vec<(C64, f64)> = match *case {
        KCase::BZero(profile) => {
            return Ok(C64::from(prefactor)
                * (profile.eps_dot_potential(phi) - profile.eps_dot_potential(setup.phi0)));
        }
        KCase::ConstantSlope(c) => vec![(c, 0.0)],
        KCase::Circular {
            amplitude,
            frequency,
        } => {
            vec![(I * amplitude * frequency * FRAC_1_SQRT_2, frequency)]
        }
        KCase::Linear {
            amplitude,
            frequency,
        } => {
            let c = I * (amplitude * frequency * FRAC_1_SQRT_2 / 2.0);
            vec![(c, frequency), (-c, -frequency)]
        }
    };

    let mut sum = ZERO;
    for (c, omega) in terms {
        let w = beta + omega;
        if w.abs() < 1e-9 {
            return Err(Error::ResonantDenominator(format!("beta + omega = {w:e}")));
        }
        sum += c * (C64::new(0.0, w * phi).exp() - C64::new(0.0, w * setup.phi0).exp()) / (I * w);
    }
    Ok(prefactor * outer * sum)
}

/// Cross phase for `B = 0`, `Y0 = 0` and a constant potential `c`:
/// `−i(g/2)(g/k·p)|c|²(φ_b − φ_a)`.
pub fn cross_phase_constant_potential(
    charge: f64,
    kp: f64,
    c: [f64; 2],
    phi_a: f64,
    phi_b: f64,
) -> C64 {
    let c2 = c[0] * c[0] + c[1] * c[1];
    -I * (0.5 * charge) * (charge / kp) * c2 * (phi_b - phi_a)
}

/// `√det cosh(e₀gf/2)` from the eigenvalues of the real symmetric matrix
/// `cosh(M)`, with `M = e₀g f^μ_ν/2` exponentiated by its power series.
/// Valid while `cos(e₀gB/2) > 0`.
pub fn spin_determinant_eigen(e0: f64, charge: f64, b: f64) -> f64 {
    let h = 0.5 * e0 * charge * b;
    // x ↦ f·x on transverse slots: (fx)¹ = B x², (fx)² = −B x¹
    let mut m = Matrix4::<f64>::zeros();
    m[(0, 1)] = h;
    m[(1, 0)] = -h;
    let m2 = m * m;
    let mut term = Matrix4::<f64>::identity();
    let mut cosh = term;
    for k in 1..60 {
        term = term * m2 / ((2 * k - 1) as f64 * (2 * k) as f64);
        cosh += term;
        if term.amax() < 1e-18 {
            break;
        }
    }
    let sym = (cosh + cosh.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    eig.eigenvalues.iter().product::<f64>().sqrt()
}

/// `∫₀^∞ exp(−x cosh t) cosh(νt) dt` by the trapezoid rule, which converges
/// geometrically for this integrand.
fn bessel_k(nu: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    let h = 0.05;
    let t_max = (745.0 / x).max(1.0).acosh() + h;
    let steps = (t_max / h).ceil() as usize;
    let mut sum = 0.5 * (-x).exp();
    for j in 1..=steps {
        let t = j as f64 * h;
        sum += (-x * t.cosh()).exp() * (nu * t).cosh();
    }
    sum * h
}

pub fn bessel_k0(x: f64) -> f64 {
    bessel_k(0.0, x)
}

pub fn bessel_k1(x: f64) -> f64 {
    bessel_k(1.0, x)
}

/// Longitudinal data of a free propagator: transverse distance `r`,
/// `ψ = p^L·Δx^L` and `μ = p^L² − m²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeGeometry {
    pub r: f64,
    pub psi: f64,
    pub mu: f64,
}

impl FreeGeometry {
    pub fn new(m: f64, x_a: &LorentzVector, x_b: &LorentzVector, p_l: &LorentzVector) -> Self {
        let (a, b, p) = (x_a.re(), x_b.re(), p_l.re());
        let r = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        let psi = METRIC[2] * p[2] * (b[2] - a[2]) + METRIC[3] * p[3] * (b[3] - a[3]);
        let mu = METRIC[2] * p[2] * p[2] + METRIC[3] * p[3] * p[3] - m * m;
        FreeGeometry { r, psi, mu }
    }
}

/// Free proper-time integrand `(−i/2)(i/2πe₀)exp(−ir²/2e₀ + iψ + ie₀μ/2)`.
pub fn free_integrand(e0: C64, geo: &FreeGeometry) -> C64 {
    let exponent = -I * geo.r * geo.r / (2.0 * e0) + I * geo.psi + I * e0 * geo.mu / 2.0;
    C64::new(0.0, -0.5) * I / (2.0 * PI * e0) * exponent.exp()
}

/// Integrated free propagator `K₀(r√μ)e^{iψ}/(2π)`, for `μ > 0`, `r > 0`.
pub fn free_propagator(geo: &FreeGeometry) -> C64 {
    bessel_k0(geo.r * geo.mu.sqrt()) / (2.0 * PI) * C64::new(0.0, geo.psi).exp()
}

fn lift(gamma: &GammaBasis, g: C64, d: [C64; 4], m: f64) -> Matrix4C {
    let mut s = Matrix4C::identity() * (g * m);
    for (mu, dmu) in d.iter().enumerate() {
        s += gamma.gamma(mu) * (I * dmu);
    }
    s
}

/// `(iγ^μ∂/∂x_b^μ + m)` applied to the free propagator, from the Bessel
/// closed form.
pub fn free_dirac(
    m: f64,
    x_a: &LorentzVector,
    x_b: &LorentzVector,
    p_l: &LorentzVector,
) -> Matrix4C {
    let geo = FreeGeometry::new(m, x_a, x_b, p_l);
    let (a, b, p) = (x_a.re(), x_b.re(), p_l.re());
    let g = free_propagator(&geo);
    let root = geo.mu.sqrt();
    let radial = -root * bessel_k1(geo.r * root) / (2.0 * PI) * C64::new(0.0, geo.psi).exp();
    let d = [
        radial * (b[0] - a[0]) / geo.r,
        radial * (b[1] - a[1]) / geo.r,
        I * METRIC[2] * p[2] * g,
        I * METRIC[3] * p[3] * g,
    ];
    lift(&GammaBasis::default(), g, d, m)
}

/// Parameters of the constant-field Dirac reference.
#[derive(Debug, Clone, Copy)]
pub struct MagneticDiracCase {
    pub m: f64,
    pub charge: f64,
    pub b: f64,
    pub x_a: LorentzVector,
    pub x_b: LorentzVector,
    pub p_l: LorentzVector,
    pub angle: f64,
    pub tol: Tolerance,
}

/// `(iγ^μ(∂/∂x_b^μ − gA_μ) + m)G` for the pure magnetic field, where both
/// `G` and its `x_b` derivatives are proper-time integrals of analytic
/// expressions along `e₀ = s e^{iθ}`, and `A = ½f x^T`.
pub fn magnetic_dirac(case: &MagneticDiracCase) -> Result<Matrix4C> {
    let (a, b, p) = (case.x_a.re(), case.x_b.re(), case.p_l.re());
    let gb = case.charge * case.b;
    let geo = FreeGeometry::new(case.m, &case.x_a, &case.x_b, &case.p_l);
    if geo.mu <= 0.0 {
        return Err(Error::DivergentRay(format!(
            "p^L² − m² = {} must be positive",
            geo.mu
        )));
    }
    let basis = GammaBasis::default();
    let (pp, pm) = (basis.projector_plus(), basis.projector_minus());
    let cross = b[0] * a[1] - b[1] * a[0];
    let (d1, d2) = (b[0] - a[0], b[1] - a[1]);
    let dir = C64::from_polar(1.0, case.angle);

    let integrand = |s: f64, slot: Option<usize>| -> Result<Matrix4C> {
        if s == 0.0 {
            return Ok(Matrix4C::zeros());
        }
        let e0 = dir * s;
        let z = e0 * gb / 2.0;
        let cot = z.cos() / z.sin();
        let kernel = I * gb / (4.0 * PI * z.sin())
            * (I * (gb / 2.0) * (cross - 0.5 * cot * geo.r * geo.r)).exp();
        let scalar = C64::new(0.0, -0.5) * kernel * (I * geo.psi + I * e0 * geo.mu / 2.0).exp();
        let factor = match slot {
            None => ONE,
            Some(0) => I * (gb / 2.0) * (a[1] - cot * d1),
            Some(1) => I * (gb / 2.0) * (-a[0] - cot * d2),
            Some(mu) => I * METRIC[mu] * p[mu],
        };
        let braces = pp * (I * z).exp() + pm * (-I * z).exp();
        Ok(braces * (scalar * factor * dir))
    };

    let s_max = 100.0 / (geo.mu * case.angle.sin());
    let breaks = [0.0, 1e-3 * s_max, 1e-2 * s_max, 0.1 * s_max, s_max];
    let run = |slot: Option<usize>| -> Result<Matrix4C> {
        let mut f = |s: f64| integrand(s, slot);
        Ok(integrate_with_breaks(&mut f, &breaks, &case.tol)?.value)
    };

    let g = run(None)?;
    let pot = [case.b * b[1] / 2.0, -case.b * b[0] / 2.0, 0.0, 0.0];
    let mut s = g * C64::from(case.m);
    for mu in 0..4 {
        let d = run(Some(mu))?;
        let gauge = g * C64::from(case.charge * METRIC[mu] * pot[mu]);
        s += basis.gamma(mu) * (d - gauge) * I;
    }
    Ok(s)
}
