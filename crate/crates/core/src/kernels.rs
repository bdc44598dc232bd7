//! Scalar building blocks of the propagator: the transverse magnetic
//! kernel, the spin determinant, the plane-wave dressing `K(φ)` and the
//! longitudinal and cross phases.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::minkowski::{dot, LorentzVector, C64, I};
use crate::paths::TransverseDrift;
use crate::quadrature::{integrate, Tolerance};

/// `|sin(e₀gB/2)|` below which the kernel is treated as singular.
pub const CAUSTIC_THRESHOLD: f64 = 1e-10;

/// `|sin(e₀gB/2)|` below which a value is flagged as close to a caustic.
pub const NEAR_CAUSTIC: f64 = 0.05;

// Below this |e₀gB/2| the kernel uses its small-field expansion.
const SMALL_FIELD: f64 = 1e-3;

/// Transverse coordinates of the fluctuation endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct TransverseEndpoints {
    pub xa1: f64,
    pub xa2: f64,
    pub xb1: f64,
    pub xb2: f64,
}

impl TransverseEndpoints {
    pub fn new(xa: [f64; 2], xb: [f64; 2]) -> Self {
        TransverseEndpoints {
            xa1: xa[0],
            xa2: xa[1],
            xb1: xb[0],
            xb2: xb[1],
        }
    }

    /// Real parts of the transverse slots of two four-vectors.
    pub fn from_vectors(xa: &LorentzVector, xb: &LorentzVector) -> Self {
        TransverseEndpoints::new([xa[0].re, xa[1].re], [xb[0].re, xb[1].re])
    }

    pub fn separation_sq(&self) -> f64 {
        (self.xb1 - self.xa1).powi(2) + (self.xb2 - self.xa2).powi(2)
    }

    /// `X_b¹X_a² − X_b²X_a¹`.
    pub fn cross(&self) -> f64 {
        self.xb1 * self.xa2 - self.xb2 * self.xa1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct KernelDiagnostics {
    pub error_estimate: f64,
    pub nodes: usize,
    pub near_singularity: bool,
}

impl KernelDiagnostics {
    pub fn merge(&self, other: &KernelDiagnostics) -> KernelDiagnostics {
        KernelDiagnostics {
            error_estimate: self.error_estimate + other.error_estimate,
            nodes: self.nodes + other.nodes,
            near_singularity: self.near_singularity || other.near_singularity,
        }
    }
}

fn half_angle(e0: C64, cfg: &FieldConfig) -> C64 {
    e0 * (0.5 * cfg.charge * cfg.b)
}

/// Whether `e₀` lies within [`NEAR_CAUSTIC`] of a nonzero caustic.
pub fn near_caustic(e0: C64, cfg: &FieldConfig) -> bool {
    let z = half_angle(e0, cfg);
    z.norm() > 1.0 && z.sin().norm() < NEAR_CAUSTIC
}

/// Transverse Gaussian kernel of a scalar particle in the constant field,
///
/// `igB/(4π sin(e₀gB/2)) · exp{i(gB/2)[(X_b¹X_a² − X_b²X_a¹) − ½cot(e₀gB/2)|X_b − X_a|²]}`.
///
/// `e₀` may be complex (rotated proper time). For small `e₀gB` the
/// expression is evaluated through its expansion around the free kernel
/// `i/(2πe₀)·exp(−i|ΔX|²/2e₀)`, so `B = 0` is allowed.
pub fn schwinger_kernel(e0: C64, ep: &TransverseEndpoints, cfg: &FieldConfig) -> Result<C64> {
    if e0.norm() == 0.0 {
        return Err(Error::DivisionByZero("proper time e0 = 0"));
    }
    let gb = cfg.charge * cfg.b;
    let z = half_angle(e0, cfg);
    let dx2 = ep.separation_sq();
    let cross = C64::from(0.5 * gb * ep.cross());

    if z.norm() < SMALL_FIELD {
        let z2 = z * z;
        let z_over_sin = 1.0 + z2 / 6.0 + z2 * z2 * (7.0 / 360.0);
        let z_cot = 1.0 - z2 / 3.0 - z2 * z2 / 45.0;
        let prefactor = I / (2.0 * PI * e0) * z_over_sin;
        let exponent = I * cross - I * dx2 * z_cot / (2.0 * e0);
        return Ok(prefactor * exponent.exp());
    }

    let sin = z.sin();
    if sin.norm() < CAUSTIC_THRESHOLD {
        return Err(Error::KernelSingularity {
            re: e0.re,
            im: e0.im,
        });
    }
    let cot = z.cos() / sin;
    let prefactor = I * gb / (4.0 * PI * sin);
    let exponent = I * (cross - 0.25 * gb * cot * dx2);
    Ok(prefactor * exponent.exp())
}

/// Transverse spin-fluctuation determinant `cosh(ie₀gB/2) = cos(e₀gB/2)`.
pub fn spin_determinant(e0: C64, cfg: &FieldConfig) -> C64 {
    (I * half_angle(e0, cfg)).cosh()
}

/// `k·p^L`, rejecting the null case.
pub fn k_dot_p(p_l: &LorentzVector) -> Result<f64> {
    let kp = dot(&LorentzVector::wave_vector(), p_l).re;
    if kp == 0.0 {
        return Err(Error::DivisionByZero("k·p^L = 0"));
    }
    Ok(kp)
}

fn dressing(
    phi: f64,
    phi0: f64,
    p_l: &LorentzVector,
    cfg: &FieldConfig,
    tol: &Tolerance,
    conjugate: bool,
) -> Result<(C64, KernelDiagnostics)> {
    if cfg.profile.is_zero() {
        return Ok((C64::new(0.0, 0.0), KernelDiagnostics::default()));
    }
    let kp = k_dot_p(p_l)?;
    let beta = cfg.charge * cfg.b / kp;
    let sign = if conjugate { -1.0 } else { 1.0 };
    let prefactor_sign = if cfg.flip_k_prefactor { -sign } else { sign };
    let profile = &cfg.profile;
    let q = integrate(
        |s: f64| {
            let slope = profile.eps_dot_derivative(s);
            let slope = if conjugate { slope.conj() } else { slope };
            Ok(C64::new(0.0, sign * beta * s).exp() * slope)
        },
        phi0,
        phi,
        tol,
    )?;
    let prefactor = C64::new(0.0, prefactor_sign * beta * phi).exp() * (cfg.charge / (2.0 * kp));
    let diag = KernelDiagnostics {
        error_estimate: q.error * prefactor.norm(),
        nodes: q.nodes,
        near_singularity: false,
    };
    Ok((prefactor * q.value, diag))
}

/// Plane-wave dressing
///
/// `K(φ) = g/(2k·p) · exp[igBφ/(k·p)] ∫_{φ₀}^{φ} exp[igBφ'/(k·p)] ε·A'^p(φ') dφ'`.
///
/// Both exponentials carry the same sign; `cfg.flip_k_prefactor` flips the
/// sign of the outer one.
pub fn k_function(
    phi: f64,
    phi0: f64,
    p_l: &LorentzVector,
    cfg: &FieldConfig,
    tol: &Tolerance,
) -> Result<(C64, KernelDiagnostics)> {
    dressing(phi, phi0, p_l, cfg, tol, false)
}

/// `K*(φ)`: `ε → ε*` and both exponentials conjugated.
pub fn k_conjugate(
    phi: f64,
    phi0: f64,
    p_l: &LorentzVector,
    cfg: &FieldConfig,
    tol: &Tolerance,
) -> Result<(C64, KernelDiagnostics)> {
    dressing(phi, phi0, p_l, cfg, tol, true)
}

/// Exponent `i p^L·(x_b^L − x_a^L) + i(e₀/2)(p^L² − m²)` (not exponentiated).
pub fn longitudinal_phase(
    e0: C64,
    p_l: &LorentzVector,
    x_a: &LorentzVector,
    x_b: &LorentzVector,
    m: f64,
) -> C64 {
    let dx = (*x_b - *x_a).longitudinal_slots();
    I * dot(p_l, &dx) + I * e0 * 0.5 * (dot(p_l, p_l) - m * m)
}

#[derive(Debug, Clone, Copy)]
pub struct CrossPhaseInput<'a> {
    pub field: &'a FieldConfig,
    pub p_l: LorentzVector,
    pub x_a: LorentzVector,
    pub x_b: LorentzVector,
    pub y0: LorentzVector,
    pub tol: Tolerance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossPhase {
    /// `−i(g/2)(∫ A^p·dY/dφ dφ + X·fY|_{φ_a}^{φ_b})`.
    pub phase: C64,
    /// `X = x^T − Y` at both ends.
    pub endpoints: TransverseEndpoints,
    pub phi_a: f64,
    pub phi_b: f64,
    pub drift_a: LorentzVector,
    pub drift_b: LorentzVector,
    pub diagnostics: KernelDiagnostics,
}

/// Plane-wave/magnetic mixing phase, with the drift `Y` parameterized by
/// the phase between `φ_a = k·x_a` and `φ_b = k·x_b`.
pub fn cross_phase(input: &CrossPhaseInput) -> Result<CrossPhase> {
    let k = LorentzVector::wave_vector();
    let phi_a = dot(&k, &input.x_a).re;
    let phi_b = dot(&k, &input.x_b).re;
    let cfg = input.field;
    let drift = TransverseDrift::new(cfg, &input.p_l, &input.y0, phi_a, phi_b, &input.tol)?;

    let integral = if cfg.profile.is_zero() {
        crate::quadrature::Quadrature {
            value: C64::new(0.0, 0.0),
            error: 0.0,
            nodes: 0,
        }
    } else {
        integrate(
            |phi: f64| {
                Ok(dot(
                    &cfg.profile.potential(phi),
                    &drift.slope(phi, &cfg.profile),
                ))
            },
            phi_a,
            phi_b,
            &input.tol,
        )?
    };

    let drift_a = drift.at(phi_a);
    let drift_b = drift.at(phi_b);
    let big_xa = input.x_a.transverse_slots() - drift_a;
    let big_xb = input.x_b.transverse_slots() - drift_b;
    let f = cfg.magnetic();
    let boundary = dot(&big_xb, &f.apply(&drift_b)) - dot(&big_xa, &f.apply(&drift_a));
    let phase = -I * (0.5 * cfg.charge) * (integral.value + boundary);

    Ok(CrossPhase {
        phase,
        endpoints: TransverseEndpoints::new(
            [big_xa[0].re, big_xa[1].re],
            [big_xb[0].re, big_xb[1].re],
        ),
        phi_a,
        phi_b,
        drift_a,
        drift_b,
        diagnostics: KernelDiagnostics {
            error_estimate: integral.error + drift.error,
            nodes: integral.nodes + drift.nodes,
            near_singularity: false,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_profile, PlaneWaveProfile, ProfileKind, ProfileParams};

    fn cfg(g: f64, b: f64) -> FieldConfig {
        FieldConfig::new(g, b, PlaneWaveProfile::Zero)
    }

    fn tight() -> Tolerance {
        Tolerance::new(1e-13, 1e-12)
    }

    fn tabulated(phi: Vec<f64>, a1: Vec<f64>, a2: Vec<f64>) -> PlaneWaveProfile {
        make_profile(
            ProfileKind::Tabulated,
            &ProfileParams {
                phi,
                a1,
                a2,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn coincident_endpoints() {
        let c = cfg(1.2, 0.8);
        let e0 = C64::from(1.5);
        let ep = TransverseEndpoints::new([0.3, -0.4], [0.3, -0.4]);
        let z: f64 = 1.5 * 1.2 * 0.8 / 2.0;
        let expected = I * (1.2 * 0.8) / (4.0 * PI * z.sin());
        // cross term of identical points vanishes
        assert!((schwinger_kernel(e0, &ep, &c).unwrap() - expected).norm() < 1e-14);
    }

    #[test]
    fn unit_parameters() {
        let c = cfg(1.0, 1.0);
        let ep = TransverseEndpoints::new([0.0, 0.0], [1.0, 0.0]);
        let k = schwinger_kernel(C64::from(1.0), &ep, &c).unwrap();
        let half: f64 = 0.5;
        let expected = I / (4.0 * PI * half.sin()) * (-I * 0.25 / half.tan()).exp();
        assert!((k - expected).norm() < 1e-14);
    }

    #[test]
    fn weak_field_limit() {
        let ep = TransverseEndpoints::new([0.2, 0.1], [0.9, -0.3]);
        let dx2 = ep.separation_sq();
        for e0 in [C64::from(0.7), C64::from_polar(1.3, 0.6)] {
            let free = I / (2.0 * PI * e0) * (-I * dx2 / (2.0 * e0)).exp();
            let k = schwinger_kernel(e0, &ep, &cfg(1.0, 1e-4)).unwrap();
            // O(B) cross term: relative size gB/2 · |cross|
            assert!(((k - free) / free).norm() < 1e-6 + 0.5e-4 * ep.cross().abs());
            let exact_zero = schwinger_kernel(e0, &ep, &cfg(1.0, 0.0)).unwrap();
            assert!(((exact_zero - free) / free).norm() < 1e-14);
        }
    }

    #[test]
    fn expansion_matches_direct_formula_at_switch() {
        let ep = TransverseEndpoints::new([0.2, 0.1], [0.9, -0.3]);
        let e0 = C64::from_polar(1.0, 0.4);
        // |z| just above and below the switch
        let above = schwinger_kernel(e0, &ep, &cfg(1.0, 2.0 * 1.0001e-3)).unwrap();
        let below = schwinger_kernel(e0, &ep, &cfg(1.0, 2.0 * 0.9999e-3)).unwrap();
        assert!(((above - below) / above).norm() < 1e-6);
    }

    #[test]
    fn caustic_is_rejected() {
        let ep = TransverseEndpoints::new([0.0, 0.0], [1.0, 0.0]);
        let c = cfg(1.0, 1.0);
        let r = schwinger_kernel(C64::from(2.0 * PI), &ep, &c);
        assert!(matches!(r, Err(Error::KernelSingularity { .. })));
        assert!(near_caustic(C64::from(2.0 * PI + 0.01), &c));
        assert!(!near_caustic(C64::from(1.0), &c));
        assert!(!near_caustic(C64::from(0.01), &c));
        // off the real axis the caustic is avoided
        assert!(schwinger_kernel(C64::new(2.0 * PI, 0.3), &ep, &c).is_ok());
    }

    #[test]
    fn spin_determinant_values() {
        assert_eq!(
            spin_determinant(C64::from(2.0), &cfg(1.0, 0.0)),
            C64::from(1.0)
        );
        assert!(spin_determinant(C64::from(PI), &cfg(1.0, 1.0)).norm() < 1e-15);
        let v = spin_determinant(C64::from(1.0), &cfg(1.0, 1.0));
        assert!((v - C64::from(0.5f64.cos())).norm() < 1e-15);
        assert!((v.re - 0.877582561890372716).abs() < 1e-15);
    }

    #[test]
    fn k_zero_profile_is_exactly_zero() {
        let p = LorentzVector::longitudinal_from(0.3, 1.5);
        let (k, _) = k_function(2.0, 0.0, &p, &cfg(1.0, 1.0), &tight()).unwrap();
        assert_eq!(k, C64::new(0.0, 0.0));
    }

    #[test]
    fn k_requires_non_null_momentum() {
        let mut c = cfg(1.0, 1.0);
        c.profile = PlaneWaveProfile::Circular {
            amplitude: 1.0,
            frequency: 1.0,
        };
        let null = LorentzVector::longitudinal_from(1.0, 1.0);
        assert!(matches!(
            k_function(1.0, 0.0, &null, &c, &tight()),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn k_conjugate_is_complex_conjugate_for_real_profiles() {
        let mut c = cfg(1.1, 0.7);
        c.profile = PlaneWaveProfile::Pulse {
            amplitude: 0.8,
            frequency: 2.0,
            width: 1.0,
        };
        let p = LorentzVector::longitudinal_from(0.3, 1.5);
        let (k, _) = k_function(1.3, -0.5, &p, &c, &tight()).unwrap();
        let (ks, _) = k_conjugate(1.3, -0.5, &p, &c, &tight()).unwrap();
        assert!((k.conj() - ks).norm() < 1e-13);
    }

    #[test]
    fn k_sign_toggle_flips_only_the_prefactor() {
        let mut c = cfg(1.0, 0.9);
        c.profile = PlaneWaveProfile::Circular {
            amplitude: 1.0,
            frequency: 1.3,
        };
        let p = LorentzVector::longitudinal_from(0.3, 1.5);
        let kp = k_dot_p(&p).unwrap();
        let beta = c.charge * c.b / kp;
        let phi = 0.8;
        let (k, _) = k_function(phi, 0.0, &p, &c, &tight()).unwrap();
        c.flip_k_prefactor = true;
        let (flipped, _) = k_function(phi, 0.0, &p, &c, &tight()).unwrap();
        let ratio = C64::new(0.0, -2.0 * beta * phi).exp();
        assert!((flipped - k * ratio).norm() < 1e-13);
    }

    #[test]
    fn longitudinal_phase_examples() {
        let p = LorentzVector::longitudinal_from(0.0, 1.0);
        let x = LorentzVector::real(0.1, 0.2, 0.3, 0.4);
        // on shell (p² = 1 = m²) and coincident
        assert_eq!(
            longitudinal_phase(C64::from(2.0), &p, &x, &x, 1.0),
            C64::new(0.0, 0.0)
        );

        let xb = LorentzVector::real(5.0, 5.0, 1.3, 0.9);
        let q = LorentzVector::longitudinal_from(0.7, 1.1);
        let dxl = (xb - x).longitudinal_slots();
        assert_eq!(
            longitudinal_phase(C64::from(0.0), &q, &x, &xb, 2.0),
            I * dot(&q, &dxl)
        );

        // p = (0,0,1,0): p² = −1
        let p = LorentzVector::longitudinal_from(1.0, 0.0);
        let e0 = 0.6;
        let phase = longitudinal_phase(C64::from(e0), &p, &x, &xb, 1.0);
        let expected = I * (-(1.3 - 0.3)) + I * (e0 / 2.0) * (-1.0 - 1.0);
        assert!((phase - expected).norm() < 1e-15);
    }

    fn cross_input(
        field: &FieldConfig,
        xa: LorentzVector,
        xb: LorentzVector,
    ) -> CrossPhaseInput<'_> {
        CrossPhaseInput {
            field,
            p_l: LorentzVector::longitudinal_from(0.3, 1.5),
            x_a: xa,
            x_b: xb,
            y0: LorentzVector::zero(),
            tol: tight(),
        }
    }

    #[test]
    fn cross_phase_zero_profile() {
        let c = cfg(1.0, 1.0);
        let xa = LorentzVector::real(0.1, 0.2, 0.3, 0.4);
        let xb = LorentzVector::real(0.5, -0.2, 1.3, 0.1);
        let cp = cross_phase(&cross_input(&c, xa, xb)).unwrap();
        assert_eq!(cp.phase, C64::new(0.0, 0.0));
        assert_eq!(cp.endpoints, TransverseEndpoints::from_vectors(&xa, &xb));
    }

    #[test]
    fn cross_phase_constant_potential() {
        // B = 0: dY/dφ = (g/k·p) c, so the integral is (g/k·p)(c·c)(φ_b − φ_a)
        let g = 1.3;
        let c = FieldConfig::new(
            g,
            0.0,
            tabulated(vec![-50.0, 0.0, 50.0], vec![0.6; 3], vec![-0.2; 3]),
        );
        let xa = LorentzVector::real(0.1, 0.2, 0.3, 0.4);
        let xb = LorentzVector::real(0.5, -0.2, 1.3, -0.1);
        let input = cross_input(&c, xa, xb);
        let cp = cross_phase(&input).unwrap();
        let kp = k_dot_p(&input.p_l).unwrap();
        let k = LorentzVector::wave_vector();
        let (phi_a, phi_b) = (dot(&k, &xa).re, dot(&k, &xb).re);
        let integral = g / kp * (0.6 * 0.6 + 0.2 * 0.2) * (phi_b - phi_a);
        let expected = -I * (0.5 * g) * integral;
        assert!((cp.phase - expected).norm() < 1e-8);
    }

    #[test]
    fn cross_phase_coincident_phases_keep_boundary_term() {
        let c = FieldConfig::new(
            1.0,
            0.7,
            PlaneWaveProfile::Circular {
                amplitude: 1.0,
                frequency: 1.0,
            },
        );
        let xa = LorentzVector::real(0.1, 0.2, 0.3, 0.4);
        // shift along k keeps φ fixed
        let xb = xa + LorentzVector::real(0.4, 0.1, 0.0, 0.0) + LorentzVector::wave_vector() * 0.5;
        let mut input = cross_input(&c, xa, xb);
        input.y0 = LorentzVector::real(0.2, -0.3, 0.0, 0.0);
        let cp = cross_phase(&input).unwrap();
        assert_eq!(cp.phi_a, cp.phi_b);
        // Y is the same at both ends; only the boundary term survives
        let y = input.y0;
        let f = c.magnetic();
        let xa_big = xa.transverse_slots() - y;
        let xb_big = xb.transverse_slots() - y;
        let boundary = dot(&xb_big, &f.apply(&y)) - dot(&xa_big, &f.apply(&y));
        assert!((cp.phase - (-I * 0.5 * boundary)).norm() < 1e-14);
    }
}
