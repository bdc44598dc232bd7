//! The verification suite: each check draws its parameters from a seeded
//! generator, compares an implementation against an identity or an
//! independent reference and reports the worst deviation per sub-check.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::field::{
    make_profile, total_field_tensor, FieldConfig, PlaneWaveProfile, ProfileKind, ProfileParams,
};
use crate::green::{dirac_apply, gf_fixed_pl, gf_k_zero, EvalContext, DEFAULT_FD_STEP};
use crate::kernels::{
    k_dot_p, k_function, schwinger_kernel, spin_determinant, TransverseEndpoints,
};
use crate::minkowski::{
    dot, max_abs, tanh_projector_identity, GammaBasis, LorentzVector, Matrix4C, C64, METRIC,
};
use crate::oracles::{
    free_dirac, free_propagator, k_closed_form, magnetic_dirac, sliced_extrapolated,
    spin_determinant_eigen, FreeGeometry, KCase, KSetup, MagneticDiracCase, SliceLattice,
};
use crate::paths::{eta_a, psi_classical, spectral_projectors, PhiPath, SpinPathContext};
use crate::quadrature::Tolerance;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Part {
    pub label: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Part {
    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: String,
    pub parts: Vec<Part>,
    pub error: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.parts.is_empty() && self.parts.iter().all(Part::passed)
    }

    /// The sub-check closest to (or furthest past) its tolerance.
    pub fn worst(&self) -> Option<&Part> {
        let ratio = |p: &Part| {
            if p.value.is_nan() {
                f64::INFINITY
            } else if p.tolerance == 0.0 {
                if p.value == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                p.value / p.tolerance
            }
        };
        self.parts
            .iter()
            .max_by(|a, b| ratio(a).total_cmp(&ratio(b)))
    }

    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let detail = match (&self.error, self.worst()) {
            (Some(e), _) => format!("error: {e}"),
            (None, Some(p)) => format!(
                "worst {} = {:.3e} (tol {:.1e})",
                p.label, p.value, p.tolerance
            ),
            (None, None) => "no sub-checks ran".to_string(),
        };
        format!("[{status}] {:>2} {}: {detail}", self.id, self.name)
    }
}

struct Tally {
    parts: Vec<Part>,
}

impl Tally {
    /// Keeps the largest value seen per label.
    fn record(&mut self, label: &str, value: f64, tolerance: f64) {
        let value = if value.is_nan() { f64::INFINITY } else { value };
        match self.parts.iter_mut().find(|p| p.label == label) {
            Some(p) => p.value = p.value.max(value),
            None => self.parts.push(Part {
                label: label.to_string(),
                value,
                tolerance,
            }),
        }
    }
}

fn run(id: u32, name: &str, body: impl FnOnce(&mut Tally) -> Result<()>) -> CheckOutcome {
    let mut tally = Tally { parts: Vec::new() };
    let error = body(&mut tally).err().map(|e| e.to_string());
    CheckOutcome {
        id,
        name: name.to_string(),
        parts: tally.parts,
        error,
    }
}

fn rng(id: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + id as u64)
}

fn rel(a: &Matrix4C, b: &Matrix4C) -> f64 {
    max_abs(&(a - b)) / max_abs(b)
}

fn rel_c(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

/// A random context with `μ = p^L² − m² ∈ [0.6, 2]` and transverse
/// separation at least 0.3.
fn random_context(rng: &mut ChaCha8Rng, profile: PlaneWaveProfile) -> EvalContext {
    let m = rng.random_range(0.5..1.2);
    let p2: f64 = rng.random_range(-0.5..0.5);
    let mu = rng.random_range(0.6..2.0);
    let p3 = (mu + p2 * p2 + m * m).sqrt() * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let point = |rng: &mut ChaCha8Rng| {
        LorentzVector::real(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
    };
    let x_a = point(rng);
    let mut x_b = point(rng);
    while TransverseEndpoints::from_vectors(&x_a, &x_b).separation_sq() < 0.09 {
        x_b = point(rng);
    }
    let field = FieldConfig::new(
        rng.random_range(0.5..1.5),
        rng.random_range(-1.5..1.5),
        profile,
    );
    EvalContext::new(m, x_a, x_b, LorentzVector::longitudinal_from(p2, p3), field)
}

fn random_wave(rng: &mut ChaCha8Rng) -> PlaneWaveProfile {
    let amplitude = rng.random_range(0.2..1.0);
    let frequency = rng.random_range(0.5..2.0);
    match rng.random_range(0..3) {
        0 => PlaneWaveProfile::Linear {
            amplitude,
            frequency,
        },
        1 => PlaneWaveProfile::Circular {
            amplitude,
            frequency,
        },
        _ => PlaneWaveProfile::Pulse {
            amplitude,
            frequency,
            width: rng.random_range(0.8..2.0),
        },
    }
}

/// Gamma anticommutators, the tanh projector identity and the projectors.
pub fn clifford_suite() -> CheckOutcome {
    run(1, "Clifford algebra and projector identities", |t| {
        let basis = GammaBasis::default();
        for mu in 0..4 {
            for nu in 0..4 {
                let expected =
                    Matrix4C::identity() * C64::from(if mu == nu { 2.0 * METRIC[mu] } else { 0.0 });
                t.record(
                    "anticommutator",
                    max_abs(&(basis.anticommutator(mu, nu) - expected)),
                    1e-12,
                );
            }
        }
        let mut r = rng(1);
        for _ in 0..20 {
            let alpha = C64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
            let (lhs, rhs) = tanh_projector_identity(alpha, &basis)?;
            t.record("tanh identity", max_abs(&(lhs - rhs)), 1e-10);
        }
        let (pp, pm) = (basis.projector_plus(), basis.projector_minus());
        t.record(
            "P+ + P- - I",
            max_abs(&(pp + pm - Matrix4C::identity())),
            f64::EPSILON,
        );
        t.record(
            "idempotence",
            max_abs(&(pp * pp - pp)).max(max_abs(&(pm * pm - pm))),
            1e-12,
        );
        t.record(
            "orthogonality",
            max_abs(&(pp * pm)).max(max_abs(&(pm * pp))),
            1e-12,
        );
        Ok(())
    })
}

/// Null-tetrad products and the eigenvectors of the magnetic tensor.
pub fn basis_suite() -> CheckOutcome {
    run(2, "basis products and magnetic eigenvectors", |t| {
        let (e, es, k) = (
            LorentzVector::epsilon(),
            LorentzVector::epsilon_star(),
            LorentzVector::wave_vector(),
        );
        let exact = [
            ("e.e", dot(&e, &e)),
            ("e*.e*", dot(&es, &es)),
            ("k.k", dot(&k, &k)),
            ("k.e", dot(&k, &e)),
            ("k.e*", dot(&k, &es)),
        ];
        for (label, value) in exact {
            t.record(label, value.norm(), 0.0);
        }
        // 1/√2 is rounded, so the normalization holds to one ulp
        t.record("e.e* - 1", (dot(&e, &es) - 1.0).norm(), f64::EPSILON);
        let mut r = rng(2);
        let wave = random_wave(&mut r);
        for _ in 0..10 {
            let phi = r.random_range(-5.0..5.0);
            t.record("k.A", dot(&k, &wave.potential(phi)).norm(), 0.0);
            let b = r.random_range(-3.0..3.0);
            let f = FieldConfig::new(1.0, b, PlaneWaveProfile::Zero).magnetic();
            t.record(
                "f e - iB e",
                (f.apply(&e) - e * C64::new(0.0, b)).max_abs(),
                1e-12,
            );
            t.record(
                "f e* + iB e*",
                (f.apply(&es) + es * C64::new(0.0, b)).max_abs(),
                1e-12,
            );
        }
        Ok(())
    })
}

/// Plane-wave tensor contracted with antisymmetric `M` equals `2k_μA'_νM^{μν}`.
pub fn wave_tensor_suite() -> CheckOutcome {
    run(3, "plane-wave tensor contraction", |t| {
        let mut r = rng(3);
        let k = LorentzVector::wave_vector().lowered();
        for _ in 0..20 {
            let cfg = FieldConfig::new(r.random_range(0.5..1.5), 0.0, random_wave(&mut r));
            let phi = r.random_range(-4.0..4.0);
            let mut m = Matrix4C::zeros();
            for mu in 0..4 {
                for nu in mu + 1..4 {
                    let v = C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
                    m[(mu, nu)] = v;
                    m[(nu, mu)] = -v;
                }
            }
            let big_f = total_field_tensor(&cfg, phi);
            let da = cfg.profile.derivative(phi).lowered();
            let mut lhs = C64::from(0.0);
            let mut rhs = C64::from(0.0);
            for mu in 0..4 {
                for nu in 0..4 {
                    lhs += big_f[(mu, nu)] * m[(mu, nu)];
                    rhs += 2.0 * k[mu] * da[nu] * m[(mu, nu)];
                }
            }
            t.record("contraction", (lhs - rhs).norm(), 1e-12);
        }
        Ok(())
    })
}

/// Euler–Lagrange residual, boundary sums and the longitudinal constraint
/// of the classical spin solutions.
pub fn spin_path_suite() -> CheckOutcome {
    run(4, "classical spin solutions", |t| {
        let mut r = rng(4);
        let tol = Tolerance::new(1e-13, 1e-12);
        for _ in 0..3 {
            let e0 = r.random_range(0.5..1.5);
            let charge = r.random_range(0.5..1.5);
            let b = r.random_range(-1.5..1.5);
            let cfg = FieldConfig::new(charge, b, random_wave(&mut r));
            let ctx = SpinPathContext {
                e0,
                field: &cfg,
                p_l: LorentzVector::longitudinal_from(
                    r.random_range(-0.5..0.5),
                    r.random_range(1.0..2.0),
                ),
                phi_a: r.random_range(-1.0..1.0),
                tol,
            };
            let path = PhiPath::new(e0, &ctx.p_l, ctx.phi_a);
            let q = cfg.magnetic().mixed() * C64::from(e0 * charge);
            let h = 1e-4;
            for i in 1..=20 {
                let tau = i as f64 / 21.0;
                let plus = psi_classical(tau + h, &ctx)?;
                let minus = psi_classical(tau - h, &ctx)?;
                let mid = psi_classical(tau, &ctx)?;
                let dm = (plus.m_gamma - minus.m_gamma) / C64::from(2.0 * h);
                let dv = (plus.v_eta - minus.v_eta) * (0.5 / h);
                t.record("residual (Gamma)", max_abs(&(dm - q * mid.m_gamma)), 1e-6);
                let res = dv - mid.v_eta.transformed(&q)
                    + cfg.profile.derivative(path.at(tau)) * (e0 * charge);
                t.record("residual (eta)", res.max_abs(), 1e-6);
            }
            let (m0, m1) = (psi_classical(0.0, &ctx)?, psi_classical(1.0, &ctx)?);
            let (pe, pes, _) = spectral_projectors();
            t.record(
                "M(1) + M(0) - I_T",
                max_abs(&(m0.m_gamma + m1.m_gamma - pe - pes)),
                1e-10,
            );
            t.record("v(1) + v(0)", (m0.v_eta + m1.v_eta).max_abs(), 1e-10);
        }
        // the p_η-dependent parts of the longitudinal endpoints are ∝ k
        let k = LorentzVector::wave_vector();
        for _ in 0..10 {
            let c = C64::new(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
            t.record("k.(c k)", dot(&k, &(k * c)).norm(), 0.0);
            let gamma = LorentzVector::real(
                0.0,
                0.0,
                r.random_range(-2.0..2.0),
                r.random_range(-2.0..2.0),
            );
            let half = dot(&k, &(gamma * 0.5));
            t.record("k.Gamma^L/2 - eta_a", (half - eta_a(&gamma)).norm(), 0.0);
        }
        Ok(())
    })
}

/// Time-sliced path integral against the transverse kernel, and the weak
/// field limit of the kernel.
pub fn sliced_kernel_suite() -> CheckOutcome {
    run(5, "time-sliced oracle for the transverse kernel", |t| {
        let mut r = rng(5);
        for _ in 0..5 {
            let e0 = C64::from_polar(r.random_range(0.6..1.6), r.random_range(0.0..0.4));
            let charge = r.random_range(0.5..1.5);
            let b = r.random_range(0.3..1.5) * if r.random_bool(0.5) { 1.0 } else { -1.0 };
            let ep = TransverseEndpoints::new(
                [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)],
                [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)],
            );
            let lat = SliceLattice {
                n: 8,
                endpoints: ep,
                e0,
                charge,
                b,
            };
            let est = sliced_extrapolated(&lat, &[8, 16, 32, 64])?;
            let cfg = FieldConfig::new(charge, b, PlaneWaveProfile::Zero);
            let target = schwinger_kernel(e0, &ep, &cfg)?;
            t.record(
                "sliced vs kernel (rel)",
                rel_c(est.extrapolated, target),
                1e-3,
            );
        }
        for _ in 0..5 {
            let e0 = C64::from_polar(r.random_range(0.5..2.0), r.random_range(0.0..1.2));
            let ep = TransverseEndpoints::new(
                [0.0, 0.0],
                [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)],
            );
            let cfg = FieldConfig::new(1.0, 1e-4, PlaneWaveProfile::Zero);
            let free = C64::new(0.0, 1.0) / (2.0 * PI * e0)
                * (C64::new(0.0, -1.0) * ep.separation_sq() / (2.0 * e0)).exp();
            t.record(
                "B=1e-4 vs free (rel)",
                rel_c(schwinger_kernel(e0, &ep, &cfg)?, free),
                1e-6,
            );
        }
        Ok(())
    })
}

pub fn spin_determinant_suite() -> CheckOutcome {
    run(6, "spin determinant against eigenvalues", |t| {
        let mut r = rng(6);
        for _ in 0..10 {
            let e0 = r.random_range(0.2..2.0);
            let charge = r.random_range(0.3..1.5);
            // keep cos(e₀gB/2) > 0 so the principal square root applies
            let b = r.random_range(-0.95..0.95) * PI / (e0 * charge);
            let cfg = FieldConfig::new(charge, b, PlaneWaveProfile::Zero);
            let v = spin_determinant(C64::from(e0), &cfg);
            t.record(
                "cos vs sqrt det cosh",
                (v - spin_determinant_eigen(e0, charge, b)).norm(),
                1e-12,
            );
        }
        Ok(())
    })
}

/// Dressing quadrature against the `B = 0` and constant-slope antiderivatives.
pub fn dressing_suite() -> CheckOutcome {
    run(7, "dressing K against closed forms", |t| {
        let mut r = rng(7);
        let tol = Tolerance::default();
        for draw in 0..50 {
            let charge = r.random_range(0.5..1.5);
            let p = LorentzVector::longitudinal_from(
                r.random_range(-0.5..0.5),
                r.random_range(1.0..2.0),
            );
            let kp = k_dot_p(&p)?;
            let phi0 = r.random_range(-3.0..3.0);
            let phi = r.random_range(-3.0..3.0);
            if draw % 2 == 0 {
                let cfg = FieldConfig::new(charge, 0.0, random_wave(&mut r));
                let setup = KSetup {
                    charge,
                    b: 0.0,
                    kp,
                    phi0,
                    flip_prefactor: false,
                };
                let (k, _) = k_function(phi, phi0, &p, &cfg, &tol)?;
                t.record(
                    "B=0",
                    (k - k_closed_form(&KCase::BZero(&cfg.profile), &setup, phi)?).norm(),
                    1e-8,
                );
            } else {
                let (s1, s2) = (r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
                let ramp = make_profile(
                    ProfileKind::Tabulated,
                    &ProfileParams {
                        phi: vec![-10.0, 0.0, 10.0],
                        a1: vec![-10.0 * s1, 0.0, 10.0 * s1],
                        a2: vec![-10.0 * s2, 0.0, 10.0 * s2],
                        ..Default::default()
                    },
                )?;
                let b = r.random_range(-1.5..1.5);
                let cfg = FieldConfig::new(charge, b, ramp);
                let setup = KSetup {
                    charge,
                    b,
                    kp,
                    phi0,
                    flip_prefactor: false,
                };
                let slope = C64::new(s1, s2) * std::f64::consts::FRAC_1_SQRT_2;
                let (k, _) = k_function(phi, phi0, &p, &cfg, &tol)?;
                let closed = k_closed_form(&KCase::ConstantSlope(slope), &setup, phi)?;
                t.record("constant slope", (k - closed).norm(), 1e-8);
            }
        }
        let zero = FieldConfig::new(1.0, 0.7, PlaneWaveProfile::Zero);
        let p = LorentzVector::longitudinal_from(0.3, 1.5);
        let (k, _) = k_function(1.7, 0.0, &p, &zero, &tol)?;
        t.record("zero profile |K|", k.norm(), 0.0);
        Ok(())
    })
}

/// With the plane wave off, the general assembly reproduces the pure
/// magnetic propagator.
pub fn magnetic_limit_suite() -> CheckOutcome {
    run(8, "zero wave: general vs magnetic propagator", |t| {
        let mut r = rng(8);
        for _ in 0..10 {
            let ctx = random_context(&mut r, PlaneWaveProfile::Zero);
            let a = gf_fixed_pl(&ctx)?.matrix;
            let b = gf_k_zero(&ctx)?.matrix;
            t.record("entrywise (rel to max)", rel(&a, &b), 1e-10);
        }
        Ok(())
    })
}

/// The propagator does not depend on the ray angle.
pub fn contour_suite() -> CheckOutcome {
    run(9, "contour-angle invariance", |t| {
        let mut r = rng(9);
        for _ in 0..5 {
            let wave = random_wave(&mut r);
            let mut ctx = random_context(&mut r, wave);
            ctx.angle = PI / 6.0;
            let a = gf_fixed_pl(&ctx)?.matrix;
            ctx.angle = PI / 3.0;
            let b = gf_fixed_pl(&ctx)?.matrix;
            t.record("pi/6 vs pi/3 (rel)", rel(&a, &b), 1e-4);
        }
        Ok(())
    })
}

/// Weak magnetic field and no wave reproduces the free propagator.
pub fn free_limit_suite() -> CheckOutcome {
    run(10, "free-field reduction", |t| {
        let mut r = rng(10);
        for _ in 0..3 {
            let mut ctx = random_context(&mut r, PlaneWaveProfile::Zero);
            ctx.field.b = 1e-6;
            let g = gf_fixed_pl(&ctx)?.matrix;
            let free = free_propagator(&FreeGeometry::new(ctx.m, &ctx.x_a, &ctx.x_b, &ctx.p_l));
            t.record(
                "vs K0 closed form (rel)",
                rel(&g, &(Matrix4C::identity() * free)),
                1e-5,
            );
        }
        Ok(())
    })
}

/// Finite-difference Dirac lift against analytic derivatives.
pub fn dirac_lift_suite() -> CheckOutcome {
    run(11, "Dirac lift by finite differences", |t| {
        let mut r = rng(11);
        for _ in 0..2 {
            let mut ctx = random_context(&mut r, PlaneWaveProfile::Zero);
            ctx.field.b = 0.0;
            let s = dirac_apply(&ctx, gf_fixed_pl, DEFAULT_FD_STEP)?.matrix;
            let exact = free_dirac(ctx.m, &ctx.x_a, &ctx.x_b, &ctx.p_l);
            t.record("free (rel)", rel(&s, &exact), 1e-4);
        }
        for _ in 0..3 {
            let ctx = random_context(&mut r, PlaneWaveProfile::Zero);
            let s = dirac_apply(&ctx, gf_k_zero, DEFAULT_FD_STEP)?.matrix;
            let exact = magnetic_dirac(&MagneticDiracCase {
                m: ctx.m,
                charge: ctx.field.charge,
                b: ctx.field.b,
                x_a: ctx.x_a,
                x_b: ctx.x_b,
                p_l: ctx.p_l,
                angle: ctx.angle,
                tol: Tolerance::new(1e-12, 1e-10),
            })?;
            t.record("constant B (rel)", rel(&s, &exact), 1e-3);
        }
        Ok(())
    })
}

/// Repeated in-process evaluation, serial and on the thread pool, is
/// bit-identical.
pub fn determinism_suite() -> CheckOutcome {
    run(12, "bit-identical repeated evaluation", |t| {
        let mut r = rng(12);
        let contexts: Vec<EvalContext> = (0..4)
            .map(|_| {
                let wave = random_wave(&mut r);
                random_context(&mut r, wave)
            })
            .collect();
        let serial: Vec<Matrix4C> = contexts
            .iter()
            .map(|c| gf_fixed_pl(c).map(|v| v.matrix))
            .collect::<Result<_>>()?;
        let parallel: Vec<Matrix4C> = contexts
            .par_iter()
            .map(|c| gf_fixed_pl(c).map(|v| v.matrix))
            .collect::<Result<_>>()?;
        let differing = serial
            .iter()
            .zip(&parallel)
            .flat_map(|(a, b)| a.iter().zip(b.iter()))
            .filter(|(x, y)| x.re.to_bits() != y.re.to_bits() || x.im.to_bits() != y.im.to_bits())
            .count();
        t.record("differing entries", differing as f64, 0.0);
        Ok(())
    })
}

/// All numerical checks in order.
pub fn run_all() -> Vec<CheckOutcome> {
    let checks: [fn() -> CheckOutcome; 12] = [
        clifford_suite,
        basis_suite,
        wave_tensor_suite,
        spin_path_suite,
        sliced_kernel_suite,
        spin_determinant_suite,
        dressing_suite,
        magnetic_limit_suite,
        contour_suite,
        free_limit_suite,
        dirac_lift_suite,
        determinism_suite,
    ];
    checks.par_iter().map(|check| check()).collect()
}
