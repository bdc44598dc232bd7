//! Classical trajectories: the phase path `φ(τ)`, the transverse drift
//! `Y(τ)` and the classical spin solutions.
//!
//! The spin solutions are linear in the Grassmann boundary data `(Γ, η_a)`.
//! They are stored as coefficient maps, `ψ_c(τ) = M_Γ(τ)·Γ + v_η(τ)·η_a`,
//! and every identity is checked coefficient by coefficient.

use crate::error::{Error, Result};
use crate::field::{FieldConfig, PlaneWaveProfile};
use crate::minkowski::{dot, longitudinal_project, outer_map, LorentzVector, Matrix4C, C64, I};
use crate::quadrature::{integrate, CumulativeIntegral, Tolerance};

/// Affine phase path `φ(τ) = φ_a + slope·τ` with `slope = −e₀ (k·p^L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiPath {
    pub phi_a: f64,
    pub slope: f64,
}

impl PhiPath {
    pub fn new(e0: f64, p_l: &LorentzVector, phi_a: f64) -> Self {
        let kp = dot(&LorentzVector::wave_vector(), p_l).re;
        PhiPath {
            phi_a,
            slope: -e0 * kp,
        }
    }

    pub fn at(&self, tau: f64) -> f64 {
        self.slope * tau + self.phi_a
    }
}

pub fn phi_path(tau: f64, e0: f64, p_l: &LorentzVector, phi_a: f64) -> f64 {
    PhiPath::new(e0, p_l, phi_a).at(tau)
}

/// Projectors onto `ε`, `ε*` and the longitudinal plane, as mixed-index
/// matrices.
pub fn spectral_projectors() -> (Matrix4C, Matrix4C, Matrix4C) {
    let e = LorentzVector::epsilon();
    let es = LorentzVector::epsilon_star();
    let p_eps = outer_map(&e, &es);
    let p_eps_star = outer_map(&es, &e);
    let p_long = Matrix4C::identity() - p_eps - p_eps_star;
    (p_eps, p_eps_star, p_long)
}

/// `exp(Qτ)` for `Q = e₀ g f`, from the spectral decomposition of `f`
/// (eigenvalues `±iB` on `ε, ε*`, zero on the longitudinal plane).
pub fn exp_q(tau: f64, e0: f64, cfg: &FieldConfig) -> Matrix4C {
    let omega = e0 * cfg.charge * cfg.b;
    let (p_eps, p_eps_star, p_long) = spectral_projectors();
    let phase = C64::new(0.0, omega * tau).exp();
    p_eps * phase + p_eps_star * phase.conj() + p_long
}

#[derive(Debug, Clone, Copy)]
pub struct PathContext<'a> {
    pub e0: f64,
    pub field: &'a FieldConfig,
    pub phi: PhiPath,
    pub tol: Tolerance,
}

fn require_transverse(v: &LorentzVector, what: &str) -> Result<()> {
    if v[2].norm() > 0.0 || v[3].norm() > 0.0 {
        return Err(Error::InvalidContext(format!("{what} must be transverse")));
    }
    Ok(())
}

/// Transverse drift `Y(τ) = e^{Qτ}[Y₀ − e₀g ∫₀^τ e^{−Qs} A^p(φ(s)) ds]`,
/// the solution of `−Ẏ/e₀ + g f Y − g A^p(φ) = 0` with `Y(0) = Y₀`.
pub fn y_path(tau: f64, y0: &LorentzVector, ctx: &PathContext) -> Result<LorentzVector> {
    require_transverse(y0, "Y0")?;
    let cfg = ctx.field;
    let drive = integrate(
        |s: f64| {
            let a = cfg.profile.potential(ctx.phi.at(s));
            Ok(a.transformed(&exp_q(-s, ctx.e0, cfg)))
        },
        0.0,
        tau,
        &ctx.tol,
    )?;
    let inner = *y0 - drive.value * (ctx.e0 * cfg.charge);
    Ok(inner.transformed(&exp_q(tau, ctx.e0, cfg)))
}

type ScalarFn = Box<dyn Fn(f64) -> C64 + Send + Sync>;

enum DriftState {
    Static(LorentzVector),
    Driven {
        phi_a: f64,
        kappa: f64,
        coupling: f64,
        y0_plus: C64,
        y0_minus: C64,
        plus: CumulativeIntegral<C64, ScalarFn>,
        minus: CumulativeIntegral<C64, ScalarFn>,
    },
}

/// The drift `Y` re-parameterized by the phase, `Y(φ)` with `Y(φ_a) = Y₀`.
///
/// Along the path `dτ = dφ / (−e₀ k·p^L)`, so the drift obeys
/// `dY/dφ = −(g/k·p)(fY − A^p(φ))`, which does not involve `e₀`.
/// In the eigenbasis, `y₊ = ε*·Y` rotates with `κ = −gB/(k·p)`.
pub struct TransverseDrift {
    state: DriftState,
    field_b: f64,
    /// Error estimate of the underlying cumulative integrals.
    pub error: f64,
    pub nodes: usize,
}

impl TransverseDrift {
    pub fn new(
        cfg: &FieldConfig,
        p_l: &LorentzVector,
        y0: &LorentzVector,
        phi_a: f64,
        phi_b: f64,
        tol: &Tolerance,
    ) -> Result<Self> {
        require_transverse(y0, "Y0")?;
        if cfg.profile.is_zero() && y0.max_abs() == 0.0 {
            return Ok(TransverseDrift {
                state: DriftState::Static(LorentzVector::zero()),
                field_b: cfg.b,
                error: 0.0,
                nodes: 0,
            });
        }
        let kp = dot(&LorentzVector::wave_vector(), p_l).re;
        if kp == 0.0 {
            return Err(Error::DivisionByZero(
                "k·p^L = 0 in the phase-parameterized drift",
            ));
        }
        let kappa = -cfg.charge * cfg.b / kp;
        let coupling = cfg.charge / kp;
        let y0_plus = dot(&LorentzVector::epsilon_star(), y0);
        let y0_minus = dot(&LorentzVector::epsilon(), y0);

        let profile_p: PlaneWaveProfile = cfg.profile.clone();
        let profile_m: PlaneWaveProfile = cfg.profile.clone();
        let plus: ScalarFn = Box::new(move |s: f64| {
            let a_plus = profile_p.eps_dot_potential(s).conj();
            C64::new(0.0, -kappa * (s - phi_a)).exp() * a_plus
        });
        let minus: ScalarFn = Box::new(move |s: f64| {
            let a_minus = profile_m.eps_dot_potential(s);
            C64::new(0.0, kappa * (s - phi_a)).exp() * a_minus
        });
        let plus = CumulativeIntegral::new(plus, phi_a, phi_b, tol)?;
        let minus = CumulativeIntegral::new(minus, phi_a, phi_b, tol)?;
        let error = plus.error + minus.error;
        let nodes = plus.nodes + minus.nodes;
        Ok(TransverseDrift {
            state: DriftState::Driven {
                phi_a,
                kappa,
                coupling,
                y0_plus,
                y0_minus,
                plus,
                minus,
            },
            field_b: cfg.b,
            error,
            nodes,
        })
    }

    pub fn at(&self, phi: f64) -> LorentzVector {
        match &self.state {
            DriftState::Static(y) => *y,
            DriftState::Driven {
                phi_a,
                kappa,
                coupling,
                y0_plus,
                y0_minus,
                plus,
                minus,
            } => {
                let rot = C64::new(0.0, kappa * (phi - phi_a)).exp();
                let yp = rot * (y0_plus + plus.at(phi) * coupling);
                let ym = rot.conj() * (y0_minus + minus.at(phi) * coupling);
                LorentzVector::epsilon() * yp + LorentzVector::epsilon_star() * ym
            }
        }
    }

    /// `dY/dφ = −(g/k·p)(fY − A^p(φ))`.
    pub fn slope(&self, phi: f64, profile: &PlaneWaveProfile) -> LorentzVector {
        match &self.state {
            DriftState::Static(_) => LorentzVector::zero(),
            DriftState::Driven { coupling, .. } => {
                let y = self.at(phi);
                let fy = crate::field::ConstantFieldTensor::new(self.field_b).apply(&y);
                (fy - profile.potential(phi)) * (-coupling)
            }
        }
    }
}

/// Coefficients of `ψ_c^T(τ)` in the boundary data:
/// `ψ_c^T(τ) = M_Γ(τ)·Γ + v_η(τ)·η_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinCoefficientMap {
    pub m_gamma: Matrix4C,
    pub v_eta: LorentzVector,
}

#[derive(Debug, Clone, Copy)]
pub struct SpinPathContext<'a> {
    pub e0: f64,
    pub field: &'a FieldConfig,
    pub p_l: LorentzVector,
    pub phi_a: f64,
    pub tol: Tolerance,
}

/// Classical transverse spin solution satisfying
/// `ψ̇ − e₀gfψ = −e₀g η_a A'^p(φ(τ))` with `ψ(1) + ψ(0) = Γ^T`.
///
/// `M_Γ(τ) = e^{Qτ}·½(1 − tanh(Q/2))` restricted to the transverse plane and
/// `v_η(τ) = e₀g e^{Qτ}[e^Q(1+e^Q)⁻¹ J(1) − J(τ)]` with
/// `J(τ) = ∫₀^τ e^{−Qs} A'^p(φ(s)) ds`.
pub fn psi_classical(tau: f64, ctx: &SpinPathContext) -> Result<SpinCoefficientMap> {
    let cfg = ctx.field;
    let omega = ctx.e0 * cfg.charge * cfg.b;
    if (0.5 * omega).cos().abs() < 1e-10 {
        return Err(Error::ResonantQ { omega });
    }
    let (p_eps, p_eps_star, _) = spectral_projectors();
    let tan_half = (0.5 * omega).tan();
    let half_one_minus_tanh = p_eps * ((C64::from(1.0) - I * tan_half) * 0.5)
        + p_eps_star * ((C64::from(1.0) + I * tan_half) * 0.5);
    let prop = exp_q(tau, ctx.e0, cfg);
    let m_gamma = prop * half_one_minus_tanh;

    let v_eta = if cfg.profile.is_zero() {
        LorentzVector::zero()
    } else {
        let path = PhiPath::new(ctx.e0, &ctx.p_l, ctx.phi_a);
        let drive = |s: f64| {
            let da = cfg.profile.derivative(path.at(s));
            Ok(da.transformed(&exp_q(-s, ctx.e0, cfg)))
        };
        let j_tau = integrate(drive, 0.0, tau, &ctx.tol)?.value;
        let j_one = integrate(drive, 0.0, 1.0, &ctx.tol)?.value;
        let w = C64::new(0.0, omega).exp();
        let resolvent = p_eps * (w / (w + 1.0)) + p_eps_star * (w.conj() / (w.conj() + 1.0));
        (j_one.transformed(&resolvent) - j_tau).transformed(&prop) * (ctx.e0 * cfg.charge)
    };
    Ok(SpinCoefficientMap { m_gamma, v_eta })
}

/// `η_a = k·Γ^L / 2`.
pub fn eta_a(gamma: &LorentzVector) -> C64 {
    dot(&LorentzVector::wave_vector(), &longitudinal_project(gamma)) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_profile, ProfileKind, ProfileParams};
    use crate::minkowski::{max_abs, transverse_project};

    fn tight() -> Tolerance {
        Tolerance::new(1e-13, 1e-12)
    }

    fn constant_profile(c1: f64, c2: f64) -> PlaneWaveProfile {
        let params = ProfileParams {
            phi: vec![-100.0, 0.0, 100.0],
            a1: vec![c1; 3],
            a2: vec![c2; 3],
            ..Default::default()
        };
        make_profile(ProfileKind::Tabulated, &params).unwrap()
    }

    fn ramp_profile(slope1: f64, slope2: f64) -> PlaneWaveProfile {
        let params = ProfileParams {
            phi: vec![-100.0, 0.0, 100.0],
            a1: vec![-100.0 * slope1, 0.0, 100.0 * slope1],
            a2: vec![-100.0 * slope2, 0.0, 100.0 * slope2],
            ..Default::default()
        };
        make_profile(ProfileKind::Tabulated, &params).unwrap()
    }

    #[test]
    fn phi_path_examples() {
        let p = LorentzVector::longitudinal_from(0.4, 1.5);
        assert_eq!(phi_path(0.0, 2.0, &p, 0.7), 0.7);
        let kp = dot(&LorentzVector::wave_vector(), &p).re;
        assert!((phi_path(1.0, 2.0, &p, 0.7) - (0.7 - 2.0 * kp)).abs() < 1e-15);
        let null = LorentzVector::longitudinal_from(1.0, 1.0);
        assert_eq!(phi_path(0.6, 2.0, &null, 0.7), 0.7);
    }

    #[test]
    fn exp_q_examples() {
        let cfg = FieldConfig::new(1.3, 0.7, PlaneWaveProfile::Zero);
        assert!(max_abs(&(exp_q(0.0, 2.0, &cfg) - Matrix4C::identity())) < 1e-15);
        let e = LorentzVector::epsilon();
        let rotated = e.transformed(&exp_q(0.4, 2.0, &cfg));
        let expected = e * C64::new(0.0, 2.0 * 1.3 * 0.7 * 0.4).exp();
        assert!((rotated - expected).max_abs() < 1e-15);
        let k = LorentzVector::wave_vector();
        assert!((k.transformed(&exp_q(0.4, 2.0, &cfg)) - k).max_abs() < 1e-15);
    }

    #[test]
    fn exp_q_matches_power_series() {
        let cfg = FieldConfig::new(0.9, 1.4, PlaneWaveProfile::Zero);
        let (e0, tau) = (1.7, 0.6);
        let q = cfg.magnetic().mixed() * C64::from(e0 * cfg.charge * tau);
        let mut term = Matrix4C::identity();
        let mut sum = Matrix4C::identity();
        for n in 1..40 {
            term = term * q / C64::from(n as f64);
            sum += term;
        }
        assert!(max_abs(&(sum - exp_q(tau, e0, &cfg))) < 1e-13);
    }

    #[test]
    fn y_path_zero_profile() {
        let cfg = FieldConfig::new(1.0, 1.0, PlaneWaveProfile::Zero);
        let p = LorentzVector::longitudinal_from(0.3, 1.5);
        let ctx = PathContext {
            e0: 1.2,
            field: &cfg,
            phi: PhiPath::new(1.2, &p, 0.0),
            tol: tight(),
        };
        for tau in [0.0, 0.5, 1.0] {
            assert_eq!(
                y_path(tau, &LorentzVector::zero(), &ctx).unwrap().max_abs(),
                0.0
            );
        }
    }

    #[test]
    fn y_path_constant_potential_without_field() {
        let cfg = FieldConfig::new(1.5, 0.0, constant_profile(0.8, -0.3));
        let p = LorentzVector::longitudinal_from(0.3, 1.5);
        let e0 = 0.9;
        let ctx = PathContext {
            e0,
            field: &cfg,
            phi: PhiPath::new(e0, &p, 0.2),
            tol: tight(),
        };
        let y0 = LorentzVector::real(0.1, 0.2, 0.0, 0.0);
        let c = LorentzVector::real(0.8, -0.3, 0.0, 0.0);
        for tau in [0.25, 0.5, 1.0] {
            let y = y_path(tau, &y0, &ctx).unwrap();
            let expected = y0 - c * (e0 * cfg.charge * tau);
            assert!((y - expected).max_abs() < 1e-12);
        }
    }

    // Closed-form particular solution of the driven rotation for a
    // circular wave: with φ(s) = φ_a + λs, ε*·A = (a/√2) e^{−iνφ}.
    fn circular_drift_oracle(
        tau: f64,
        e0: f64,
        g: f64,
        b: f64,
        a: f64,
        nu: f64,
        phi_a: f64,
        lambda: f64,
        y0: &LorentzVector,
    ) -> LorentzVector {
        let omega = e0 * g * b;
        let coeff = |sign: f64| {
            // y(τ) = e^{iσωτ}[y0 − e0 g (a/√2) e^{−iσνφ_a} ∫₀^τ e^{−iσ(ω+νλ)s} ds]
            let rate = C64::new(0.0, -sign * (omega + nu * lambda));
            let integral = if rate.norm() == 0.0 {
                C64::from(tau)
            } else {
                ((rate * tau).exp() - 1.0) / rate
            };
            let amp = C64::new(0.0, -sign * nu * phi_a).exp() * (a / 2f64.sqrt());
            (amp, integral, C64::new(0.0, sign * omega * tau).exp())
        };
        let y0p = dot(&LorentzVector::epsilon_star(), y0);
        let y0m = dot(&LorentzVector::epsilon(), y0);
        let (amp_p, int_p, rot_p) = coeff(1.0);
        let (amp_m, int_m, rot_m) = coeff(-1.0);
        let yp = rot_p * (y0p - amp_p * int_p * (e0 * g));
        let ym = rot_m * (y0m - amp_m * int_m * (e0 * g));
        LorentzVector::epsilon() * yp + LorentzVector::epsilon_star() * ym
    }

    #[test]
    fn y_path_circular_closed_form() {
        let (a, nu, g, b, e0, phi_a) = (0.7, 1.3, 1.1, 0.8, 1.4, 0.25);
        let profile = PlaneWaveProfile::Circular {
            amplitude: a,
            frequency: nu,
        };
        let cfg = FieldConfig::new(g, b, profile);
        let p = LorentzVector::longitudinal_from(0.3, 1.5);
        let path = PhiPath::new(e0, &p, phi_a);
        let ctx = PathContext {
            e0,
            field: &cfg,
            phi: path,
            tol: tight(),
        };
        let y0 = LorentzVector::real(0.2, -0.1, 0.0, 0.0);
        for tau in [0.1, 0.5, 0.9, 1.0] {
            let y = y_path(tau, &y0, &ctx).unwrap();
            let oracle = circular_drift_oracle(tau, e0, g, b, a, nu, phi_a, path.slope, &y0);
            assert!((y - oracle).max_abs() < 1e-8, "tau {tau}");
        }
    }

    #[test]
    fn y_path_satisfies_drift_equation() {
        let cfg = FieldConfig::new(
            0.8,
            1.3,
            PlaneWaveProfile::Pulse {
                amplitude: 1.0,
                frequency: 2.0,
                width: 1.0,
            },
        );
        let p = LorentzVector::longitudinal_from(0.3, 1.5);
        let e0 = 0.7;
        let ctx = PathContext {
            e0,
            field: &cfg,
            phi: PhiPath::new(e0, &p, -0.4),
            tol: tight(),
        };
        let y0 = LorentzVector::real(0.3, 0.1, 0.0, 0.0);
        let h = 1e-4;
        for tau in [0.2, 0.5, 0.8] {
            let yp = y_path(tau + h, &y0, &ctx).unwrap();
            let ym = y_path(tau - h, &y0, &ctx).unwrap();
            let y = y_path(tau, &y0, &ctx).unwrap();
            let ydot = (yp - ym) * (0.5 / h);
            let a = cfg.profile.potential(ctx.phi.at(tau));
            let residual = ydot * (-1.0 / e0) + (cfg.magnetic().apply(&y) - a) * cfg.charge;
            assert!(residual.max_abs() < 1e-7, "residual {}", residual.max_abs());
        }
    }

    #[test]
    fn phase_drift_agrees_with_proper_time_drift() {
        let cfg = FieldConfig::new(
            1.2,
            0.6,
            PlaneWaveProfile::Linear {
                amplitude: 0.9,
                frequency: 1.7,
            },
        );
        let p = LorentzVector::longitudinal_from(0.3, 1.5);
        let (e0, phi_a) = (1.3, 0.4);
        let path = PhiPath::new(e0, &p, phi_a);
        let y0 = LorentzVector::real(-0.2, 0.5, 0.0, 0.0);
        let drift = TransverseDrift::new(&cfg, &p, &y0, phi_a, path.at(1.0), &tight()).unwrap();
        let ctx = PathContext {
            e0,
            field: &cfg,
            phi: path,
            tol: tight(),
        };
        for tau in [0.0, 0.3, 0.77, 1.0] {
            let by_tau = y_path(tau, &y0, &ctx).unwrap();
            let by_phi = drift.at(path.at(tau));
            assert!((by_tau - by_phi).max_abs() < 1e-10, "tau {tau}");
        }
    }

    #[test]
    fn drift_endpoint_split_is_exact() {
        // x^T = X^T + Y^T at both ends when X endpoints are x minus Y.
        let cfg = FieldConfig::new(
            1.0,
            0.5,
            PlaneWaveProfile::Circular {
                amplitude: 1.0,
                frequency: 1.0,
            },
        );
        let p = LorentzVector::longitudinal_from(0.3, 1.5);
        let drift =
            TransverseDrift::new(&cfg, &p, &LorentzVector::zero(), 0.0, 2.0, &tight()).unwrap();
        let xa = LorentzVector::real(0.3, -0.2, 0.0, 0.0);
        let xb = LorentzVector::real(1.1, 0.4, 0.0, 0.0);
        let (ya, yb) = (drift.at(0.0), drift.at(2.0));
        assert_eq!(ya, LorentzVector::zero());
        let (big_xa, big_xb) = (xa - ya, xb - yb);
        assert_eq!(big_xa + ya, xa);
        assert!((big_xb + yb - xb).max_abs() <= f64::EPSILON);
    }

    fn spin_ctx(cfg: &FieldConfig, e0: f64) -> SpinPathContext<'_> {
        SpinPathContext {
            e0,
            field: cfg,
            p_l: LorentzVector::longitudinal_from(0.3, 1.5),
            phi_a: 0.2,
            tol: tight(),
        }
    }

    #[test]
    fn psi_zero_profile() {
        let cfg = FieldConfig::new(1.0, 0.9, PlaneWaveProfile::Zero);
        let ctx = spin_ctx(&cfg, 1.1);
        let map = psi_classical(0.4, &ctx).unwrap();
        assert_eq!(map.v_eta, LorentzVector::zero());
        let omega: f64 = 1.1 * 0.9;
        let (pe, pes, _) = spectral_projectors();
        let expected = exp_q(0.4, 1.1, &cfg)
            * (pe * (C64::from(1.0) - I * (0.5 * omega).tan()) * C64::from(0.5)
                + pes * (C64::from(1.0) + I * (0.5 * omega).tan()) * C64::from(0.5));
        assert!(max_abs(&(map.m_gamma - expected)) < 1e-15);
    }

    #[test]
    fn psi_boundary_sum() {
        let cfg = FieldConfig::new(
            1.2,
            0.8,
            PlaneWaveProfile::Circular {
                amplitude: 0.6,
                frequency: 2.1,
            },
        );
        let ctx = spin_ctx(&cfg, 1.3);
        let m0 = psi_classical(0.0, &ctx).unwrap();
        let m1 = psi_classical(1.0, &ctx).unwrap();
        let (pe, pes, _) = spectral_projectors();
        assert!(max_abs(&(m0.m_gamma + m1.m_gamma - pe - pes)) < 1e-10);
        assert!((m0.v_eta + m1.v_eta).max_abs() < 1e-10);
        // acts as the identity on transverse Γ
        let gamma = LorentzVector::real(0.3, -1.0, 0.7, 0.2);
        let sum = gamma.transformed(&(m0.m_gamma + m1.m_gamma));
        assert!((sum - transverse_project(&gamma)).max_abs() < 1e-10);
    }

    #[test]
    fn psi_eta_coefficient_without_field() {
        // B = 0 and ε·A' constant: J(τ) = A'τ, v_η(τ) = e0 g A' (1/2 − τ).
        let cfg = FieldConfig::new(1.4, 0.0, ramp_profile(0.5, -0.25));
        let e0 = 0.8;
        let ctx = spin_ctx(&cfg, e0);
        let da = LorentzVector::real(0.5, -0.25, 0.0, 0.0);
        for tau in [0.0, 0.3, 1.0] {
            let v = psi_classical(tau, &ctx).unwrap().v_eta;
            let expected = da * (e0 * cfg.charge * (0.5 - tau));
            assert!((v - expected).max_abs() < 1e-8);
        }
    }

    #[test]
    fn psi_resonance_is_reported() {
        let cfg = FieldConfig::new(1.0, std::f64::consts::PI, PlaneWaveProfile::Zero);
        let ctx = spin_ctx(&cfg, 1.0);
        assert!(matches!(
            psi_classical(0.5, &ctx),
            Err(Error::ResonantQ { .. })
        ));
    }

    #[test]
    fn euler_lagrange_residual() {
        let cfg = FieldConfig::new(
            0.9,
            1.1,
            PlaneWaveProfile::Pulse {
                amplitude: 0.8,
                frequency: 1.5,
                width: 1.2,
            },
        );
        let e0 = 1.2;
        let ctx = spin_ctx(&cfg, e0);
        let path = PhiPath::new(e0, &ctx.p_l, ctx.phi_a);
        let q = cfg.magnetic().mixed() * C64::from(e0 * cfg.charge);
        let h = 1e-4;
        for i in 1..=20 {
            let tau = i as f64 / 21.0;
            let plus = psi_classical(tau + h, &ctx).unwrap();
            let minus = psi_classical(tau - h, &ctx).unwrap();
            let mid = psi_classical(tau, &ctx).unwrap();
            let dm = (plus.m_gamma - minus.m_gamma) / C64::from(2.0 * h);
            let dv = (plus.v_eta - minus.v_eta) * (0.5 / h);
            let res_gamma = dm - q * mid.m_gamma;
            let res_eta = dv - mid.v_eta.transformed(&q)
                + cfg.profile.derivative(path.at(tau)) * (e0 * cfg.charge);
            assert!(max_abs(&res_gamma) < 1e-6);
            assert!(res_eta.max_abs() < 1e-6);
        }
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta_a(&LorentzVector::zero()), C64::from(0.0));
        assert!(eta_a(&LorentzVector::wave_vector()).norm() < 1e-15);
        // g_22 k^2 Γ^2 = (−1)(−1)(1)
        assert!((eta_a(&LorentzVector::real(0.0, 0.0, 1.0, 0.0)) - C64::from(0.5)).norm() < 1e-15);
        // transverse parts do not contribute
        assert!((eta_a(&LorentzVector::real(3.0, -2.0, 1.0, 0.0)) - C64::from(0.5)).norm() < 1e-15);
    }

    #[test]
    fn longitudinal_endpoints_share_k_projection() {
        // ψ^L(1) = (i/4) k (p_a − p_b) + Γ^L/2 and ψ^L(0) = −(i/4) k (p_a − p_b) + Γ^L/2
        // contract with k to the same value for any p_η data, since k² = 0.
        let k = LorentzVector::wave_vector();
        let gamma = LorentzVector::real(0.4, 0.1, -1.3, 0.6);
        let gl = longitudinal_project(&gamma);
        for (pa, pb) in [
            (C64::new(1.0, 2.0), C64::new(-0.5, 0.3)),
            (C64::from(7.0), C64::from(0.0)),
        ] {
            let shift = k * (I * 0.25 * (pa - pb));
            let end = shift + gl * 0.5;
            let start = -shift + gl * 0.5;
            assert_eq!(dot(&k, &end), dot(&k, &start));
            assert!((dot(&k, &end) - eta_a(&gamma)).norm() < 1e-15);
        }
    }
}
