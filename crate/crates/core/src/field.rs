//! Background fields: the constant magnetic tensor, the transverse
//! plane-wave potential and the total field tensor.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::{LorentzVector, Matrix4C, C64, I, METRIC};

/// Constant magnetic field `f_{μν} = iB(ε_μ ε*_ν − ε_ν ε*_μ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantFieldTensor {
    b: f64,
}

impl ConstantFieldTensor {
    pub fn new(b: f64) -> Self {
        ConstantFieldTensor { b }
    }

    pub fn strength(&self) -> f64 {
        self.b
    }

    /// Index-lowered components `f_{μν}`.
    pub fn lowered(&self) -> Matrix4C {
        let e = LorentzVector::epsilon().lowered();
        let es = LorentzVector::epsilon_star().lowered();
        Matrix4C::from_fn(|mu, nu| I * self.b * (e[mu] * es[nu] - e[nu] * es[mu]))
    }

    /// Mixed components `f^μ_ν = g^{μμ} f_{μν}`, the matrix of `x ↦ f·x`.
    pub fn mixed(&self) -> Matrix4C {
        let low = self.lowered();
        Matrix4C::from_fn(|mu, nu| low[(mu, nu)] * METRIC[mu])
    }

    pub fn apply(&self, x: &LorentzVector) -> LorentzVector {
        x.transformed(&self.mixed())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Zero,
    Linear,
    Circular,
    Pulse,
    Tabulated,
}

impl ProfileKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProfileKind::Zero => "zero",
            ProfileKind::Linear => "linear",
            ProfileKind::Circular => "circular",
            ProfileKind::Pulse => "pulse",
            ProfileKind::Tabulated => "tabulated",
        }
    }
}

/// Parameters accepted by [`make_profile`]. Unused fields are ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProfileParams {
    pub amplitude: f64,
    pub frequency: f64,
    pub width: f64,
    pub phi: Vec<f64>,
    /// Samples of the `ê₁` (slot 0) component.
    pub a1: Vec<f64>,
    /// Samples of the `ê₂` (slot 1) component.
    pub a2: Vec<f64>,
}

/// Natural cubic spline through `(x_i, y_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    second: Vec<f64>,
}

impl NaturalSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        let mut second = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior equations.
            let m = n - 2;
            let mut diag = vec![0.0; m];
            let mut upper = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            for i in 0..m {
                let h0 = x[i + 1] - x[i];
                let h1 = x[i + 2] - x[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h1 - (y[i + 1] - y[i]) / h0);
            }
            for i in 1..m {
                let lower = x[i + 1] - x[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            second[m] = rhs[m - 1] / diag[m - 1];
            for i in (0..m - 1).rev() {
                second[i + 1] = (rhs[i] - upper[i] * second[i + 2]) / diag[i];
            }
        }
        NaturalSpline { x, y, second }
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.x.len();
        self.x.partition_point(|&xi| xi <= t).clamp(1, n - 1) - 1
    }

    /// Value; constant continuation outside the table.
    pub fn value(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h
                / 6.0
    }

    /// First derivative; zero outside the table.
    pub fn derivative(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t < self.x[0] || t > self.x[n - 1] {
            return 0.0;
        }
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        (self.y[i + 1] - self.y[i]) / h - (3.0 * a * a - 1.0) * h * self.second[i] / 6.0
            + (3.0 * b * b - 1.0) * h * self.second[i + 1] / 6.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedProfile {
    e1: NaturalSpline,
    e2: NaturalSpline,
}

/// Transverse potential `A^p(φ)` of the plane wave.
///
/// With `ê₁ = (ε+ε*)/√2 = (1,0,0,0)` and `ê₂ = (ε−ε*)/(i√2) = (0,1,0,0)`:
/// linear is `a cos(νφ) ê₁`, circular is `a(ê₁ cos νφ + ê₂ sin νφ)` and
/// pulse is circular times `exp(−φ²/2σ²)`.
#[derive(Debug, Clone, PartialEq)]
pub enum PlaneWaveProfile {
    Zero,
    Linear {
        amplitude: f64,
        frequency: f64,
    },
    Circular {
        amplitude: f64,
        frequency: f64,
    },
    Pulse {
        amplitude: f64,
        frequency: f64,
        width: f64,
    },
    Tabulated(TabulatedProfile),
}

fn transverse(c1: f64, c2: f64) -> LorentzVector {
    LorentzVector::real(c1, c2, 0.0, 0.0)
}

impl PlaneWaveProfile {
    pub fn kind(&self) -> ProfileKind {
        match self {
            PlaneWaveProfile::Zero => ProfileKind::Zero,
            PlaneWaveProfile::Linear { .. } => ProfileKind::Linear,
            PlaneWaveProfile::Circular { .. } => ProfileKind::Circular,
            PlaneWaveProfile::Pulse { .. } => ProfileKind::Pulse,
            PlaneWaveProfile::Tabulated(_) => ProfileKind::Tabulated,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PlaneWaveProfile::Zero)
    }

    /// Real transverse components `(A¹, A²)` at phase `φ`.
    pub fn components(&self, phi: f64) -> (f64, f64) {
        match *self {
            PlaneWaveProfile::Zero => (0.0, 0.0),
            PlaneWaveProfile::Linear {
                amplitude,
                frequency,
            } => (amplitude * (frequency * phi).cos(), 0.0),
            PlaneWaveProfile::Circular {
                amplitude,
                frequency,
            } => {
                let (s, c) = (frequency * phi).sin_cos();
                (amplitude * c, amplitude * s)
            }
            PlaneWaveProfile::Pulse {
                amplitude,
                frequency,
                width,
            } => {
                let env = (-phi * phi / (2.0 * width * width)).exp();
                let (s, c) = (frequency * phi).sin_cos();
                (amplitude * env * c, amplitude * env * s)
            }
            PlaneWaveProfile::Tabulated(ref t) => (t.e1.value(phi), t.e2.value(phi)),
        }
    }

    /// Real transverse components of `dA^p/dφ`.
    pub fn derivative_components(&self, phi: f64) -> (f64, f64) {
        match *self {
            PlaneWaveProfile::Zero => (0.0, 0.0),
            PlaneWaveProfile::Linear {
                amplitude,
                frequency,
            } => (-amplitude * frequency * (frequency * phi).sin(), 0.0),
            PlaneWaveProfile::Circular {
                amplitude,
                frequency,
            } => {
                let (s, c) = (frequency * phi).sin_cos();
                (-amplitude * frequency * s, amplitude * frequency * c)
            }
            PlaneWaveProfile::Pulse {
                amplitude,
                frequency,
                width,
            } => {
                let env = (-phi * phi / (2.0 * width * width)).exp();
                let denv = -phi / (width * width) * env;
                let (s, c) = (frequency * phi).sin_cos();
                (
                    amplitude * (denv * c - env * frequency * s),
                    amplitude * (denv * s + env * frequency * c),
                )
            }
            PlaneWaveProfile::Tabulated(ref t) => (t.e1.derivative(phi), t.e2.derivative(phi)),
        }
    }

    pub fn potential(&self, phi: f64) -> LorentzVector {
        let (a1, a2) = self.components(phi);
        transverse(a1, a2)
    }

    pub fn derivative(&self, phi: f64) -> LorentzVector {
        let (a1, a2) = self.derivative_components(phi);
        transverse(a1, a2)
    }

    /// `ε·A^p(φ) = (A¹ + iA²)/√2`.
    pub fn eps_dot_potential(&self, phi: f64) -> C64 {
        let (a1, a2) = self.components(phi);
        C64::new(a1, a2) * FRAC_1_SQRT_2
    }

    /// `ε·A'^p(φ)`.
    pub fn eps_dot_derivative(&self, phi: f64) -> C64 {
        let (a1, a2) = self.derivative_components(phi);
        C64::new(a1, a2) * FRAC_1_SQRT_2
    }
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidProfile(format!(
            "{name} must be finite, got {v}"
        )))
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidProfile(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

pub fn make_profile(kind: ProfileKind, params: &ProfileParams) -> Result<PlaneWaveProfile> {
    Ok(match kind {
        ProfileKind::Zero => PlaneWaveProfile::Zero,
        ProfileKind::Linear => PlaneWaveProfile::Linear {
            amplitude: finite("amplitude", params.amplitude)?,
            frequency: positive("frequency", params.frequency)?,
        },
        ProfileKind::Circular => PlaneWaveProfile::Circular {
            amplitude: finite("amplitude", params.amplitude)?,
            frequency: positive("frequency", params.frequency)?,
        },
        ProfileKind::Pulse => PlaneWaveProfile::Pulse {
            amplitude: finite("amplitude", params.amplitude)?,
            frequency: positive("frequency", params.frequency)?,
            width: positive("width", params.width)?,
        },
        ProfileKind::Tabulated => {
            let n = params.phi.len();
            if n < 2 {
                return Err(Error::InvalidProfile(
                    "tabulated profile needs at least two nodes".into(),
                ));
            }
            if params.a1.len() != n || params.a2.len() != n {
                return Err(Error::InvalidProfile(format!(
                    "tabulated profile has {n} nodes but {} / {} samples",
                    params.a1.len(),
                    params.a2.len()
                )));
            }
            let all = params.phi.iter().chain(&params.a1).chain(&params.a2);
            if all.into_iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidProfile(
                    "tabulated values must be finite".into(),
                ));
            }
            if params.phi.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidProfile(
                    "tabulated grid must be strictly increasing".into(),
                ));
            }
            PlaneWaveProfile::Tabulated(TabulatedProfile {
                e1: NaturalSpline::new(params.phi.clone(), params.a1.clone()),
                e2: NaturalSpline::new(params.phi.clone(), params.a2.clone()),
            })
        }
    })
}

/// Background configuration: coupling, magnetic field, plane wave.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldConfig {
    pub charge: f64,
    pub b: f64,
    pub profile: PlaneWaveProfile,
    /// Lower limit of the phase integral in `K(φ)`; `None` means `φ_a`.
    pub phi0: Option<f64>,
    /// Flip the sign of the prefactor exponential of `K(φ)`.
    pub flip_k_prefactor: bool,
}

impl FieldConfig {
    pub fn new(charge: f64, b: f64, profile: PlaneWaveProfile) -> Self {
        FieldConfig {
            charge,
            b,
            profile,
            phi0: None,
            flip_k_prefactor: false,
        }
    }

    pub fn magnetic(&self) -> ConstantFieldTensor {
        ConstantFieldTensor::new(self.b)
    }

    /// Total potential `A(x) = ½ f x^T + A^p(k·x)`, contravariant.
    pub fn potential_at(&self, x: &LorentzVector) -> LorentzVector {
        let phi = x.dot(&LorentzVector::wave_vector()).re;
        self.magnetic().apply(&x.transverse_slots()) * 0.5 + self.profile.potential(phi)
    }
}

/// `F_{μν}(φ) = f_{μν} + k_μ A'_ν(φ) − k_ν A'_μ(φ)`, index-lowered.
pub fn total_field_tensor(cfg: &FieldConfig, phi: f64) -> Matrix4C {
    let k = LorentzVector::wave_vector().lowered();
    let da = cfg.profile.derivative(phi).lowered();
    let wave = Matrix4C::from_fn(|mu, nu| k[mu] * da[nu] - k[nu] * da[mu]);
    cfg.magnetic().lowered() + wave
}
