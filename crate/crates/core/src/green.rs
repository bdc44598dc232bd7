//! Assembly of the proper-time integrand, integration along a rotated ray
//! in the complex `e₀` plane, the pure magnetic limit and the Dirac lift
//! `S = (iγ^μ(∂_μ − gA_μ) + m)G`.
//!
//! All propagators are in the mixed representation: fixed longitudinal
//! momentum `p^L`, transverse positions. The overall constant is `−i/2`;
//! the `(2π)⁻²` of a momentum-space measure is not included.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::kernels::{
    cross_phase, k_conjugate, k_function, longitudinal_phase, schwinger_kernel, CrossPhase,
    CrossPhaseInput, KernelDiagnostics, TransverseEndpoints,
};
use crate::minkowski::{dot, max_abs, GammaBasis, LorentzVector, Matrix4C, C64, I};
use crate::quadrature::{integrate_with_breaks, Tolerance};

/// Overall constant multiplying the integrand.
pub const NORMALIZATION: C64 = C64::new(0.0, -0.5);

/// Gaussian over longitudinal fluctuations. Its source has vanishing
/// square, so the integral is exactly one.
pub const LONGITUDINAL_GAUSSIAN: f64 = 1.0;

pub const DEFAULT_ANGLE: f64 = FRAC_PI_4;

/// Default ray length in units of `1/(μ sin θ)`, where the on-shell factor
/// has decayed to `e^{-40}`.
pub const RAY_DECAY_LENGTHS: f64 = 80.0;

/// Minimum distance between the ray and a real caustic.
pub const CAUSTIC_CLEARANCE: f64 = 1e-8;

pub const DEFAULT_FD_STEP: f64 = 0.02;

/// Everything needed to evaluate the propagator at one pair of points.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalContext {
    pub m: f64,
    pub x_a: LorentzVector,
    pub x_b: LorentzVector,
    /// Longitudinal momentum; transverse slots must vanish.
    pub p_l: LorentzVector,
    pub field: FieldConfig,
    /// Ray direction: `e₀ = s·e^{iθ}`, `θ ∈ (0, π/2)`.
    pub angle: f64,
    /// Ray truncation; `None` picks [`RAY_DECAY_LENGTHS`]`/(μ sin θ)`.
    pub e0_max: Option<f64>,
    pub tol: Tolerance,
    /// Drift at `φ_a`.
    pub y0: LorentzVector,
}

impl EvalContext {
    pub fn new(
        m: f64,
        x_a: LorentzVector,
        x_b: LorentzVector,
        p_l: LorentzVector,
        field: FieldConfig,
    ) -> Self {
        EvalContext {
            m,
            x_a,
            x_b,
            p_l,
            field,
            angle: DEFAULT_ANGLE,
            e0_max: None,
            tol: Tolerance::default(),
            y0: LorentzVector::zero(),
        }
    }

    /// `p^L² − m²`.
    pub fn mass_shell(&self) -> f64 {
        dot(&self.p_l, &self.p_l).re - self.m * self.m
    }

    pub fn phi_a(&self) -> f64 {
        dot(&LorentzVector::wave_vector(), &self.x_a).re
    }

    pub fn phi_b(&self) -> f64 {
        dot(&LorentzVector::wave_vector(), &self.x_b).re
    }

    /// Lower limit of the dressing integral.
    pub fn phi0(&self) -> f64 {
        self.field.phi0.unwrap_or_else(|| self.phi_a())
    }

    pub fn direction(&self) -> C64 {
        C64::from_polar(1.0, self.angle)
    }

    pub fn ray_length(&self) -> f64 {
        self.e0_max
            .unwrap_or_else(|| RAY_DECAY_LENGTHS / (self.mass_shell() * self.angle.sin()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidContext(msg));
        if !self.m.is_finite() {
            return bad(format!("mass must be finite, got {}", self.m));
        }
        if !(self.x_a.is_finite()
            && self.x_b.is_finite()
            && self.p_l.is_finite()
            && self.y0.is_finite())
        {
            return bad("positions, momentum and Y0 must be finite".into());
        }
        if self.p_l[0].norm() != 0.0 || self.p_l[1].norm() != 0.0 {
            return bad("longitudinal momentum must have vanishing transverse slots".into());
        }
        if !(self.angle > 0.0 && self.angle < PI / 2.0) {
            return bad(format!(
                "contour angle must lie in (0, pi/2), got {}",
                self.angle
            ));
        }
        if let Some(s) = self.e0_max {
            if !(s.is_finite() && s > 0.0) {
                return bad(format!("e0_max must be positive, got {s}"));
            }
        }
        if !(self.field.charge.is_finite() && self.field.b.is_finite()) {
            return bad("coupling and field strength must be finite".into());
        }
        let mu = self.mass_shell();
        if !(mu > 0.0) {
            return Err(Error::DivergentRay(format!(
                "p^L² − m² = {mu} must be positive for the rotated ray to converge"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorValue {
    pub matrix: Matrix4C,
    pub diagnostics: KernelDiagnostics,
}

/// `K` and `K*` at both ends of the phase interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dressings {
    pub k_a: C64,
    pub k_conj_a: C64,
    pub k_b: C64,
    pub k_conj_b: C64,
    pub diagnostics: KernelDiagnostics,
}

impl Dressings {
    pub fn new(
        phi_a: f64,
        phi_b: f64,
        phi0: f64,
        p_l: &LorentzVector,
        cfg: &FieldConfig,
        tol: &Tolerance,
    ) -> Result<Self> {
        let (k_a, d1) = k_function(phi_a, phi0, p_l, cfg, tol)?;
        let (k_conj_a, d2) = k_conjugate(phi_a, phi0, p_l, cfg, tol)?;
        let (k_b, d3) = k_function(phi_b, phi0, p_l, cfg, tol)?;
        let (k_conj_b, d4) = k_conjugate(phi_b, phi0, p_l, cfg, tol)?;
        Ok(Dressings {
            k_a,
            k_conj_a,
            k_b,
            k_conj_b,
            diagnostics: d1.merge(&d2).merge(&d3).merge(&d4),
        })
    }
}

/// The `e₀`-independent matrices multiplying `e^{±ie₀gB/2}` in the spin factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinBraces {
    pub plus: Matrix4C,
    pub minus: Matrix4C,
}

impl SpinBraces {
    pub fn new(d: &Dressings, basis: &GammaBasis) -> Self {
        let one = Matrix4C::identity();
        let k = basis.slash(&LorentzVector::wave_vector());
        let ke = k * basis.slash(&LorentzVector::epsilon());
        let kes = k * basis.slash(&LorentzVector::epsilon_star());
        let plus = (one - kes * d.k_b) * basis.projector_plus() * (one + ke * d.k_conj_a);
        let minus = (one - ke * d.k_conj_b) * basis.projector_minus() * (one + kes * d.k_a);
        SpinBraces { plus, minus }
    }

    pub fn at(&self, e0: C64, cfg: &FieldConfig) -> Matrix4C {
        let z = e0 * (0.5 * cfg.charge * cfg.b);
        self.plus * (I * z).exp() + self.minus * (-I * z).exp()
    }
}

/// Spin factor
///
/// `e^{ie₀gB/2}[1 − k̸ε̸*K(φ_b)]P₊[1 + k̸ε̸K*(φ_a)] + e^{−ie₀gB/2}[1 − k̸ε̸K*(φ_b)]P₋[1 + k̸ε̸*K(φ_a)]`.
pub fn spin_factor(
    e0: C64,
    phi_a: f64,
    phi_b: f64,
    p_l: &LorentzVector,
    cfg: &FieldConfig,
) -> Result<Matrix4C> {
    let phi0 = cfg.phi0.unwrap_or(phi_a);
    let d = Dressings::new(phi_a, phi_b, phi0, p_l, cfg, &Tolerance::default())?;
    Ok(SpinBraces::new(&d, &GammaBasis::default()).at(e0, cfg))
}

/// The `e₀`-independent parts of the integrand: cross phase, shifted
/// endpoints and spin braces.
#[derive(Debug, Clone)]
pub struct PreparedContext {
    pub ctx: EvalContext,
    pub cross: CrossPhase,
    pub dressings: Dressings,
    pub braces: SpinBraces,
}

impl PreparedContext {
    pub fn new(ctx: &EvalContext) -> Result<Self> {
        ctx.validate()?;
        let cross = cross_phase(&CrossPhaseInput {
            field: &ctx.field,
            p_l: ctx.p_l,
            x_a: ctx.x_a,
            x_b: ctx.x_b,
            y0: ctx.y0,
            tol: ctx.tol,
        })?;
        let dressings = Dressings::new(
            cross.phi_a,
            cross.phi_b,
            ctx.phi0(),
            &ctx.p_l,
            &ctx.field,
            &ctx.tol,
        )?;
        let braces = SpinBraces::new(&dressings, &GammaBasis::default());
        Ok(PreparedContext {
            ctx: ctx.clone(),
            cross,
            dressings,
            braces,
        })
    }

    fn scalar(&self, e0: C64, with_unit_gaussian: bool) -> Result<C64> {
        let ctx = &self.ctx;
        let kernel = schwinger_kernel(e0, &self.cross.endpoints, &ctx.field)?;
        let phase = longitudinal_phase(e0, &ctx.p_l, &ctx.x_a, &ctx.x_b, ctx.m) + self.cross.phase;
        let value = NORMALIZATION * kernel * phase.exp();
        Ok(if with_unit_gaussian {
            value * LONGITUDINAL_GAUSSIAN
        } else {
            value
        })
    }

    pub fn integrand(&self, e0: C64) -> Result<Matrix4C> {
        Ok(self.braces.at(e0, &self.ctx.field) * self.scalar(e0, true)?)
    }

    pub fn integrate(&self) -> Result<PropagatorValue> {
        require_separated(&self.cross.endpoints)?;
        let mut value = integrate_ray(&self.ctx, |e0| self.integrand(e0))?;
        value.diagnostics = value
            .diagnostics
            .merge(&self.cross.diagnostics)
            .merge(&self.dressings.diagnostics);
        Ok(value)
    }
}

/// Integrand of the propagator at one proper time.
pub fn integrand(e0: C64, ctx: &EvalContext) -> Result<Matrix4C> {
    PreparedContext::new(ctx)?.integrand(e0)
}

/// Proper-time integral at fixed `p^L`.
pub fn gf_fixed_pl(ctx: &EvalContext) -> Result<PropagatorValue> {
    PreparedContext::new(ctx)?.integrate()
}

/// Integrand of the pure magnetic problem (plane wave switched off):
/// `(−i/2)·kernel(x^T)·e^{longitudinal phase}·(e^{iz}P₊ + e^{−iz}P₋)`.
pub fn k_zero_integrand(e0: C64, ctx: &EvalContext, basis: &GammaBasis) -> Result<Matrix4C> {
    let ep = TransverseEndpoints::from_vectors(&ctx.x_a, &ctx.x_b);
    let kernel = schwinger_kernel(e0, &ep, &ctx.field)?;
    let scalar =
        NORMALIZATION * kernel * longitudinal_phase(e0, &ctx.p_l, &ctx.x_a, &ctx.x_b, ctx.m).exp();
    let z = e0 * (0.5 * ctx.field.charge * ctx.field.b);
    let braces = basis.projector_plus() * (I * z).exp() + basis.projector_minus() * (-I * z).exp();
    Ok(braces * scalar)
}

/// Proper-time integral of the pure magnetic problem; the profile is ignored.
pub fn gf_k_zero(ctx: &EvalContext) -> Result<PropagatorValue> {
    ctx.validate()?;
    require_separated(&TransverseEndpoints::from_vectors(&ctx.x_a, &ctx.x_b))?;
    let basis = GammaBasis::default();
    integrate_ray(ctx, |e0| k_zero_integrand(e0, ctx, &basis))
}

fn require_separated(ep: &TransverseEndpoints) -> Result<()> {
    if ep.separation_sq() < 1e-24 {
        return Err(Error::DivergentRay(
            "coincident transverse endpoints make the e0 integral diverge at e0 -> 0".into(),
        ));
    }
    Ok(())
}

/// Real caustics `2πn/|gB|` closer to the ray than [`CAUSTIC_CLEARANCE`].
fn check_caustics(ctx: &EvalContext, s_max: f64) -> Result<()> {
    let gb = (ctx.field.charge * ctx.field.b).abs();
    if gb == 0.0 {
        return Ok(());
    }
    let spacing = 2.0 * PI / gb;
    let (sin, cos) = ctx.angle.sin_cos();
    let mut n = 1.0;
    while n * spacing * cos <= s_max + spacing {
        let caustic = n * spacing;
        // distance from the real point to the segment s·e^{iθ}, 0 ≤ s ≤ s_max
        let along = (caustic * cos).min(s_max);
        let distance = (C64::from(caustic) - ctx.direction() * along).norm();
        if distance < CAUSTIC_CLEARANCE {
            return Err(Error::ContourCaustic { caustic, distance });
        }
        if caustic * sin >= CAUSTIC_CLEARANCE {
            break;
        }
        n += 1.0;
    }
    Ok(())
}

/// `∫ de₀ f(e₀)` along `e₀ = s e^{iθ}`, `0 < s ≤ s_max`, with a tail
/// estimate from the on-shell decay `e^{−sμ sin θ/2}`.
fn integrate_ray<F>(ctx: &EvalContext, mut f: F) -> Result<PropagatorValue>
where
    F: FnMut(C64) -> Result<Matrix4C>,
{
    let s_max = ctx.ray_length();
    check_caustics(ctx, s_max)?;
    let dir = ctx.direction();
    let mut along = |s: f64| -> Result<Matrix4C> { Ok(f(dir * s)? * dir) };
    let breaks = [
        0.0,
        1e-3 * s_max,
        1e-2 * s_max,
        0.1 * s_max,
        0.3 * s_max,
        s_max,
    ];
    let q = integrate_with_breaks(&mut along, &breaks, &ctx.tol)?;
    let tail = max_abs(&along(s_max)?) * 2.0 / (ctx.mass_shell() * ctx.angle.sin());
    if !q.value.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::DivergentRay("non-finite propagator".into()));
    }
    Ok(PropagatorValue {
        matrix: q.value,
        diagnostics: KernelDiagnostics {
            error_estimate: q.error + tail,
            nodes: q.nodes,
            near_singularity: false,
        },
    })
}

/// `(iγ^μ(∂/∂x_b^μ − gA_μ(x_b)) + m)G`, with `A_μ` the lowered total
/// potential and the derivatives from fourth-order central differences at
/// steps `h` and `h/2`, combined by Richardson extrapolation.
pub fn dirac_apply<F>(ctx: &EvalContext, evaluator: F, step: f64) -> Result<PropagatorValue>
where
    F: Fn(&EvalContext) -> Result<PropagatorValue>,
{
    let centre = evaluator(ctx)?;
    let g = centre.matrix;
    let mut diagnostics = centre.diagnostics;
    let basis = GammaBasis::default();
    let pot = ctx.field.potential_at(&ctx.x_b).lowered();

    let mut shifted = |mu: usize, h: f64| -> Result<Matrix4C> {
        let mut c = ctx.clone();
        c.x_b.0[mu] += C64::from(h);
        let v = evaluator(&c)?;
        diagnostics = diagnostics.merge(&v.diagnostics);
        Ok(v.matrix)
    };

    let mut s = g * C64::from(ctx.m);
    for mu in 0..4 {
        let mut central = |h: f64| -> Result<Matrix4C> {
            let (p2, p1, m1, m2) = (
                shifted(mu, 2.0 * h)?,
                shifted(mu, h)?,
                shifted(mu, -h)?,
                shifted(mu, -2.0 * h)?,
            );
            Ok((m2 - p2 + (p1 - m1) * C64::from(8.0)) / C64::from(12.0 * h))
        };
        let coarse = central(step)?;
        let fine = central(step / 2.0)?;
        let spread = max_abs(&(coarse - fine));
        if spread > 1e-12 * max_abs(&g) / step {
            let discrepancy = spread / max_abs(&fine);
            if !(discrepancy <= 0.1) {
                return Err(Error::StepCalibrationFailure {
                    direction: mu,
                    discrepancy,
                });
            }
        }
        let derivative = (fine * C64::from(16.0) - coarse) / C64::from(15.0);
        let gauge = g * (pot[mu] * ctx.field.charge);
        s += basis.gamma(mu) * (derivative - gauge) * I;
    }
    Ok(PropagatorValue {
        matrix: s,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PlaneWaveProfile;
    use crate::oracles::{free_propagator, FreeGeometry};

    fn context(b: f64, profile: PlaneWaveProfile) -> EvalContext {
        EvalContext::new(
            1.0,
            LorentzVector::real(0.0, 0.0, 0.1, 0.3),
            LorentzVector::real(0.8, 0.5, 0.4, -0.2),
            LorentzVector::longitudinal_from(0.3, 1.5),
            FieldConfig::new(1.0, b, profile),
        )
    }

    fn circular() -> PlaneWaveProfile {
        PlaneWaveProfile::Circular {
            amplitude: 0.6,
            frequency: 1.1,
        }
    }

    fn rel(a: &Matrix4C, b: &Matrix4C) -> f64 {
        max_abs(&(a - b)) / max_abs(b)
    }

    #[test]
    fn validation() {
        let mut c = context(1.0, PlaneWaveProfile::Zero);
        assert!(c.validate().is_ok());
        c.angle = 0.0;
        assert!(matches!(c.validate(), Err(Error::InvalidContext(_))));
        c.angle = PI / 2.0;
        assert!(matches!(c.validate(), Err(Error::InvalidContext(_))));
        let mut c = context(1.0, PlaneWaveProfile::Zero);
        c.p_l = LorentzVector::real(0.1, 0.0, 0.3, 1.5);
        assert!(matches!(c.validate(), Err(Error::InvalidContext(_))));
        let mut c = context(1.0, PlaneWaveProfile::Zero);
        c.e0_max = Some(-1.0);
        assert!(matches!(c.validate(), Err(Error::InvalidContext(_))));
        let mut c = context(1.0, PlaneWaveProfile::Zero);
        c.p_l = LorentzVector::longitudinal_from(1.5, 0.3);
        assert!(matches!(c.validate(), Err(Error::DivergentRay(_))));
    }

    #[test]
    fn spin_factor_limits() {
        let p = LorentzVector::longitudinal_from(0.3, 1.5);
        let basis = GammaBasis::default();
        let e0 = C64::from_polar(1.3, 0.4);
        let cfg = FieldConfig::new(1.0, 0.0, PlaneWaveProfile::Zero);
        assert_eq!(
            spin_factor(e0, 0.2, 0.9, &p, &cfg).unwrap(),
            basis.projector_plus() + basis.projector_minus()
        );
        assert!(
            max_abs(&(spin_factor(e0, 0.2, 0.9, &p, &cfg).unwrap() - Matrix4C::identity())) < 1e-15
        );

        let cfg = FieldConfig::new(0.7, 1.2, PlaneWaveProfile::Zero);
        let z = e0 * 0.42;
        let sf = spin_factor(e0, 0.2, 0.9, &p, &cfg).unwrap();
        let expected =
            basis.projector_plus() * (I * z).exp() + basis.projector_minus() * (-I * z).exp();
        assert!(max_abs(&(sf - expected)) < 1e-15);
        assert!((sf.trace() - 4.0 * z.cos()).norm() < 1e-14);
    }

    #[test]
    fn spin_factor_with_wave_is_dressed() {
        let p = LorentzVector::longitudinal_from(0.3, 1.5);
        let cfg = FieldConfig::new(1.0, 0.5, circular());
        let e0 = C64::from(0.7);
        let sf = spin_factor(e0, 0.2, 0.9, &p, &cfg).unwrap();
        let bare = spin_factor(
            e0,
            0.2,
            0.9,
            &p,
            &FieldConfig::new(1.0, 0.5, PlaneWaveProfile::Zero),
        )
        .unwrap();
        assert!(max_abs(&(sf - bare)) > 1e-3);
        // k̸k̸ = k² = 0: the dressing is nilpotent, so the trace is unchanged
        assert!((sf.trace() - bare.trace()).norm() < 1e-13);
    }

    #[test]
    fn unit_longitudinal_gaussian_is_bit_identical() {
        let prep = PreparedContext::new(&context(0.8, circular())).unwrap();
        for s in [0.1, 0.7, 2.5] {
            let e0 = C64::from_polar(s, 0.5);
            let with = prep.scalar(e0, true).unwrap();
            let without = prep.scalar(e0, false).unwrap();
            assert_eq!(with.re.to_bits(), without.re.to_bits());
            assert_eq!(with.im.to_bits(), without.im.to_bits());
        }
    }

    #[test]
    fn zero_profile_integrand_matches_magnetic_integrand() {
        let ctx = context(0.9, PlaneWaveProfile::Zero);
        let basis = GammaBasis::default();
        for s in [0.2, 1.0, 3.0] {
            let e0 = C64::from_polar(s, 0.6);
            let a = integrand(e0, &ctx).unwrap();
            let b = k_zero_integrand(e0, &ctx, &basis).unwrap();
            assert!(rel(&a, &b) < 1e-15);
        }
    }

    #[test]
    fn weak_field_integrand_is_free() {
        let ctx = context(1e-9, PlaneWaveProfile::Zero);
        let geo = FreeGeometry::new(ctx.m, &ctx.x_a, &ctx.x_b, &ctx.p_l);
        let e0 = C64::from_polar(1.1, 0.5);
        let a = integrand(e0, &ctx).unwrap();
        let free = crate::oracles::free_integrand(e0, &geo);
        assert!(rel(&a, &(Matrix4C::identity() * free)) < 1e-8);
    }

    #[test]
    fn coincident_integrand() {
        let mut ctx = context(0.9, PlaneWaveProfile::Zero);
        ctx.x_b = ctx.x_a;
        let e0 = C64::from_polar(1.1, 0.5);
        let z = e0 * 0.45;
        let kernel = I * 0.9 / (4.0 * PI * z.sin());
        let phase = (I * e0 / 2.0 * ctx.mass_shell()).exp();
        let v = integrand(e0, &ctx).unwrap();
        assert!((v.trace() / 4.0 - NORMALIZATION * kernel * phase * z.cos()).norm() < 1e-14);
        assert!(matches!(gf_fixed_pl(&ctx), Err(Error::DivergentRay(_))));
    }

    #[test]
    fn zero_profile_matches_magnetic_propagator() {
        let mut ctx = context(0.9, PlaneWaveProfile::Zero);
        ctx.tol = Tolerance::new(1e-13, 1e-12);
        let a = gf_fixed_pl(&ctx).unwrap().matrix;
        let b = gf_k_zero(&ctx).unwrap().matrix;
        assert!(max_abs(&(a - b)) < 1e-10 * max_abs(&b));
    }

    #[test]
    fn magnetic_propagator_commutes_with_projectors() {
        let ctx = context(1.3, PlaneWaveProfile::Zero);
        let g = gf_k_zero(&ctx).unwrap().matrix;
        let p = GammaBasis::default().projector_plus();
        assert!(max_abs(&(g * p - p * g)) < 1e-10 * max_abs(&g));
    }

    #[test]
    fn weak_field_reproduces_free_propagator() {
        let ctx = context(1e-6, PlaneWaveProfile::Zero);
        let g = gf_fixed_pl(&ctx).unwrap();
        let free = free_propagator(&FreeGeometry::new(ctx.m, &ctx.x_a, &ctx.x_b, &ctx.p_l));
        assert!(rel(&g.matrix, &(Matrix4C::identity() * free)) < 1e-5);
        assert!(g.diagnostics.error_estimate < 1e-6);
    }

    #[test]
    fn angle_independence_with_wave() {
        let mut ctx = context(0.7, circular());
        let a = gf_fixed_pl(&ctx).unwrap().matrix;
        ctx.angle = PI / 3.0;
        let b = gf_fixed_pl(&ctx).unwrap().matrix;
        ctx.angle = PI / 6.0;
        let c = gf_fixed_pl(&ctx).unwrap().matrix;
        assert!(rel(&a, &b) < 1e-6);
        assert!(rel(&c, &b) < 1e-6);
    }

    #[test]
    fn shift_along_wave_vector() {
        let ctx = context(0.7, circular());
        let g = gf_fixed_pl(&ctx).unwrap().matrix;
        let d = LorentzVector::wave_vector() * 0.37;

        // both ends: phases φ_a, φ_b and Δx unchanged
        let mut both = ctx.clone();
        both.x_a = ctx.x_a + d;
        both.x_b = ctx.x_b + d;
        assert!(rel(&gf_fixed_pl(&both).unwrap().matrix, &g) < 1e-8);

        // one end: only the explicit p^L·Δx^L phase changes
        let mut one = ctx.clone();
        one.x_b = ctx.x_b + d;
        let expected = g * (I * dot(&ctx.p_l, &d)).exp();
        assert!(rel(&gf_fixed_pl(&one).unwrap().matrix, &expected) < 1e-8);
    }

    #[test]
    fn longitudinal_shift_without_wave() {
        let ctx = context(0.7, PlaneWaveProfile::Zero);
        let g = gf_fixed_pl(&ctx).unwrap().matrix;
        let d = LorentzVector::real(0.0, 0.0, 0.8, -0.3);
        let mut both = ctx.clone();
        both.x_a = ctx.x_a + d;
        both.x_b = ctx.x_b + d;
        assert!(rel(&gf_fixed_pl(&both).unwrap().matrix, &g) < 1e-8);
    }

    #[test]
    fn caustic_clearance() {
        let mut ctx = context(1.0, PlaneWaveProfile::Zero);
        ctx.angle = 1e-10;
        assert!(matches!(
            check_caustics(&ctx, ctx.ray_length()),
            Err(Error::ContourCaustic { .. })
        ));
        ctx.angle = 0.3;
        assert!(check_caustics(&ctx, ctx.ray_length()).is_ok());
    }

    fn constant(value: Matrix4C) -> impl Fn(&EvalContext) -> Result<PropagatorValue> {
        move |_| {
            Ok(PropagatorValue {
                matrix: value,
                diagnostics: KernelDiagnostics::default(),
            })
        }
    }

    #[test]
    fn dirac_of_constant_field() {
        let value = Matrix4C::from_fn(|r, c| C64::new(r as f64 + 0.5, c as f64 - 1.0));
        let ctx = context(0.0, PlaneWaveProfile::Zero);
        let s = dirac_apply(&ctx, constant(value), DEFAULT_FD_STEP).unwrap();
        assert_eq!(s.matrix, value * C64::from(ctx.m));
    }

    #[test]
    fn dirac_gauge_term_is_linear() {
        let value = Matrix4C::from_fn(|r, c| C64::new(r as f64 + 0.5, c as f64 - 1.0));
        let mut ctx = context(1.3, PlaneWaveProfile::Zero);
        let mass = value * C64::from(ctx.m);
        let s0 = dirac_apply(&ctx, constant(value), DEFAULT_FD_STEP)
            .unwrap()
            .matrix
            - mass;
        let delta = LorentzVector::real(0.4, -0.7, 0.0, 0.0);
        ctx.x_b = ctx.x_b + delta;
        let s1 = dirac_apply(&ctx, constant(value), DEFAULT_FD_STEP)
            .unwrap()
            .matrix
            - mass;
        ctx.x_b = ctx.x_b + delta;
        let s2 = dirac_apply(&ctx, constant(value), DEFAULT_FD_STEP)
            .unwrap()
            .matrix
            - mass;
        assert!(max_abs(&((s2 - s1) - (s1 - s0))) < 1e-8 * max_abs(&s0));
        // −iγ^μ g A_μ with A = ½ f x_b^T
        let basis = GammaBasis::default();
        let a = ctx.field.magnetic().apply(&delta) * 0.5;
        let mut expected = Matrix4C::zeros();
        for mu in 0..2 {
            expected -= basis.gamma(mu) * value * (I * a.lowered()[mu] * ctx.field.charge);
        }
        assert!(max_abs(&((s1 - s0) - expected)) < 1e-8 * max_abs(&expected));
    }

    #[test]
    fn dirac_step_calibration_failure() {
        let ctx = context(0.0, PlaneWaveProfile::Zero);
        // a field varying on the step scale defeats the difference formula
        let rough = |c: &EvalContext| -> Result<PropagatorValue> {
            let x = c.x_b[0].re;
            Ok(PropagatorValue {
                matrix: Matrix4C::identity() * C64::from((x * 300.0).sin()),
                diagnostics: KernelDiagnostics::default(),
            })
        };
        assert!(matches!(
            dirac_apply(&ctx, rough, DEFAULT_FD_STEP),
            Err(Error::StepCalibrationFailure { direction: 0, .. })
        ));
    }

    #[test]
    fn dirac_free_matches_analytic() {
        let ctx = context(0.0, PlaneWaveProfile::Zero);
        let s = dirac_apply(&ctx, gf_fixed_pl, DEFAULT_FD_STEP).unwrap();
        let exact = crate::oracles::free_dirac(ctx.m, &ctx.x_a, &ctx.x_b, &ctx.p_l);
        assert!(rel(&s.matrix, &exact) < 1e-4);
    }
}
