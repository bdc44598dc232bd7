//! Four-vector algebra in the transverse/longitudinal basis and the Dirac
//! matrices built for it.
//!
//! Components are stored contravariantly in the slot order
//! `(transverse, transverse, longitudinal, longitudinal)` with the fixed
//! diagonal metric [`METRIC`]. Under this metric the polarization pair
//! `ε = (1, i, 0, 0)/√2`, `ε* = (1, -i, 0, 0)/√2` and the wave vector
//! `k = (0, 0, -1, -1)` satisfy `ε·ε = ε*·ε* = 0`, `ε·ε* = 1`, `k² = 0`
//! and `k·ε = 0` simultaneously.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// 4×4 complex matrix used for gamma matrices, spin factors and tensors.
pub type Matrix4C = nalgebra::Matrix4<C64>;

/// Diagonal of the metric tensor. The longitudinal sign placement (slot 2
/// negative rather than slot 3) is a convention; both choices keep `k`
/// null.
pub const METRIC: [f64; 4] = [1.0, 1.0, -1.0, 1.0];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LorentzVector(pub [C64; 4]);

impl LorentzVector {
    pub const fn new(c0: C64, c1: C64, c2: C64, c3: C64) -> Self {
        LorentzVector([c0, c1, c2, c3])
    }

    pub fn real(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        LorentzVector([c0.into(), c1.into(), c2.into(), c3.into()])
    }

    pub fn zero() -> Self {
        LorentzVector([ZERO; 4])
    }

    /// `ε = (1, i, 0, 0)/√2`.
    pub fn epsilon() -> Self {
        LorentzVector([
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::new(0.0, FRAC_1_SQRT_2),
            ZERO,
            ZERO,
        ])
    }

    /// `ε* = (1, -i, 0, 0)/√2`.
    pub fn epsilon_star() -> Self {
        LorentzVector([
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::new(0.0, -FRAC_1_SQRT_2),
            ZERO,
            ZERO,
        ])
    }

    /// Wave vector of the plane wave, `k = (0, 0, -1, -1)`.
    pub fn wave_vector() -> Self {
        LorentzVector::real(0.0, 0.0, -1.0, -1.0)
    }

    /// Longitudinal vector with the given slot-2 and slot-3 components.
    pub fn longitudinal_from(p2: f64, p3: f64) -> Self {
        LorentzVector::real(0.0, 0.0, p2, p3)
    }

    pub fn dot(&self, other: &LorentzVector) -> C64 {
        dot(self, other)
    }

    /// Covariant components `g_{μμ} v^μ`.
    pub fn lowered(&self) -> LorentzVector {
        let mut out = *self;
        for (c, g) in out.0.iter_mut().zip(METRIC) {
            *c *= g;
        }
        out
    }

    /// Slots 0 and 1 only.
    pub fn transverse_slots(&self) -> LorentzVector {
        LorentzVector([self.0[0], self.0[1], ZERO, ZERO])
    }

    /// Slots 2 and 3 only.
    pub fn longitudinal_slots(&self) -> LorentzVector {
        LorentzVector([ZERO, ZERO, self.0[2], self.0[3]])
    }

    pub fn conj(&self) -> LorentzVector {
        LorentzVector(self.0.map(|c| c.conj()))
    }

    pub fn re(&self) -> [f64; 4] {
        self.0.map(|c| c.re)
    }

    /// Largest component modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Apply a mixed-index matrix `M^μ_ν` to the vector.
    pub fn transformed(&self, m: &Matrix4C) -> LorentzVector {
        let mut out = [ZERO; 4];
        for (mu, slot) in out.iter_mut().enumerate() {
            *slot = (0..4).map(|nu| m[(mu, nu)] * self.0[nu]).sum();
        }
        LorentzVector(out)
    }
}

impl Index<usize> for LorentzVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl Add for LorentzVector {
    type Output = LorentzVector;
    fn add(self, rhs: LorentzVector) -> LorentzVector {
        LorentzVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for LorentzVector {
    type Output = LorentzVector;
    fn sub(self, rhs: LorentzVector) -> LorentzVector {
        LorentzVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for LorentzVector {
    type Output = LorentzVector;
    fn neg(self) -> LorentzVector {
        LorentzVector(self.0.map(|c| -c))
    }
}

impl Mul<C64> for LorentzVector {
    type Output = LorentzVector;
    fn mul(self, s: C64) -> LorentzVector {
        LorentzVector(self.0.map(|c| c * s))
    }
}

impl Mul<f64> for LorentzVector {
    type Output = LorentzVector;
    fn mul(self, s: f64) -> LorentzVector {
        LorentzVector(self.0.map(|c| c * s))
    }
}

/// Bilinear metric product `Σ g_{μμ} u^μ v^μ`. No conjugation is applied.
pub fn dot(u: &LorentzVector, v: &LorentzVector) -> C64 {
    (0..4).map(|mu| u.0[mu] * v.0[mu] * METRIC[mu]).sum()
}

/// `ε (ε*·x) + ε* (ε·x)`.
pub fn transverse_project(x: &LorentzVector) -> LorentzVector {
    let eps = LorentzVector::epsilon();
    let eps_star = LorentzVector::epsilon_star();
    eps * dot(&eps_star, x) + eps_star * dot(&eps, x)
}

/// `x - transverse_project(x)`.
pub fn longitudinal_project(x: &LorentzVector) -> LorentzVector {
    *x - transverse_project(x)
}

/// Mixed-index matrix of the map `x ↦ a (b·x)`.
pub fn outer_map(a: &LorentzVector, b: &LorentzVector) -> Matrix4C {
    let bl = b.lowered();
    Matrix4C::from_fn(|mu, nu| a.0[mu] * bl.0[nu])
}

/// Four gamma matrices obeying `{γ^μ, γ^ν} = 2 g^{μν}` for [`METRIC`].
#[derive(Debug, Clone, PartialEq)]
pub struct GammaBasis {
    gamma: [Matrix4C; 4],
}

impl GammaBasis {
    pub fn gamma(&self, mu: usize) -> &Matrix4C {
        &self.gamma[mu]
    }

    pub fn anticommutator(&self, mu: usize, nu: usize) -> Matrix4C {
        self.gamma[mu] * self.gamma[nu] + self.gamma[nu] * self.gamma[mu]
    }

    pub fn slash(&self, v: &LorentzVector) -> Matrix4C {
        slash(v, self)
    }

    /// `ε̸ ε̸* / 2`.
    pub fn projector_plus(&self) -> Matrix4C {
        let e = self.slash(&LorentzVector::epsilon());
        let es = self.slash(&LorentzVector::epsilon_star());
        e * es * C64::from(0.5)
    }

    /// `ε̸* ε̸ / 2`.
    pub fn projector_minus(&self) -> Matrix4C {
        let e = self.slash(&LorentzVector::epsilon());
        let es = self.slash(&LorentzVector::epsilon_star());
        es * e * C64::from(0.5)
    }
}

impl Default for GammaBasis {
    fn default() -> Self {
        build_gamma()
    }
}

fn dirac_representation() -> [Matrix4C; 4] {
    let z = ZERO;
    let o = ONE;
    let i = I;
    let g0 = Matrix4C::from_row_slice(&[
        o, z, z, z, //
        z, o, z, z, //
        z, z, -o, z, //
        z, z, z, -o,
    ]);
    let g1 = Matrix4C::from_row_slice(&[
        z, z, z, o, //
        z, z, o, z, //
        z, -o, z, z, //
        -o, z, z, z,
    ]);
    let g2 = Matrix4C::from_row_slice(&[
        z, z, z, -i, //
        z, z, i, z, //
        z, i, z, z, //
        -i, z, z, z,
    ]);
    let g3 = Matrix4C::from_row_slice(&[
        z, z, o, z, //
        z, z, z, -o, //
        -o, z, z, z, //
        z, o, z, z,
    ]);
    [g0, g1, g2, g3]
}

/// Gamma matrices for [`METRIC`], obtained from the standard Dirac
/// representation `γ̃` (with `γ̃⁰² = 1`, `γ̃ᵏ² = -1`) as
/// `γ⁰ = iγ̃¹, γ¹ = iγ̃², γ² = iγ̃⁰, γ³ = iγ̃³`.
pub fn build_gamma() -> GammaBasis {
    let [t0, t1, t2, t3] = dirac_representation();
    GammaBasis {
        gamma: [t1 * I, t2 * I, t0 * I, t3 * I],
    }
}

/// `γ^μ v_μ = Σ γ^μ g_{μμ} v^μ`.
pub fn slash(v: &LorentzVector, basis: &GammaBasis) -> Matrix4C {
    let vl = v.lowered();
    (0..4).fold(Matrix4C::zeros(), |acc, mu| {
        acc + basis.gamma[mu] * vl.0[mu]
    })
}

pub fn projector_plus(basis: &GammaBasis) -> Matrix4C {
    basis.projector_plus()
}

pub fn projector_minus(basis: &GammaBasis) -> Matrix4C {
    basis.projector_minus()
}

/// Both sides of the hyperbolic projector identity
///
/// `1 - ½ tanh(α/2) (ε̸ε̸* - ε̸*ε̸) = e^{-α/2}/(e^{-α/2}+e^{α/2}) ε̸ε̸* + e^{α/2}/(e^{-α/2}+e^{α/2}) ε̸*ε̸`.
pub fn tanh_projector_identity(alpha: C64, basis: &GammaBasis) -> Result<(Matrix4C, Matrix4C)> {
    let half = alpha * 0.5;
    if half.cosh().norm() < 1e-12 {
        return Err(Error::Pole {
            re: alpha.re,
            im: alpha.im,
        });
    }
    let e = basis.slash(&LorentzVector::epsilon());
    let es = basis.slash(&LorentzVector::epsilon_star());
    let ees = e * es;
    let ese = es * e;

    let lhs = Matrix4C::identity() - (ees - ese) * (half.tanh() * 0.5);

    let (em, ep) = ((-half).exp(), half.exp());
    let rhs = ees * (em / (em + ep)) + ese * (ep / (em + ep));
    Ok((lhs, rhs))
}

/// Largest entry modulus.
pub fn max_abs(m: &Matrix4C) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}
