//! Adaptive 21-point Gauss–Kronrod quadrature for scalar, vector and
//! matrix valued integrands.
//!
//! Panels are bisected worst-first until the summed error estimate meets
//! `max(abs, rel·|I|)`. The returned value is re-accumulated in panel order
//! with compensated summation, so it depends only on the integrand and the
//! tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::minkowski::{LorentzVector, Matrix4C, C64};

/// Values that can be integrated: a real vector space with a size measure.
pub trait Integrable: Copy + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
    fn scale(self, s: f64) -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrable for f64 {
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrable for C64 {
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Integrable for LorentzVector {
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn zero() -> Self {
        LorentzVector::zero()
    }
    fn magnitude(&self) -> f64 {
        self.max_abs()
    }
}

impl Integrable for Matrix4C {
    fn scale(self, s: f64) -> Self {
        self * C64::from(s)
    }
    fn zero() -> Self {
        Matrix4C::zeros()
    }
    fn magnitude(&self) -> f64 {
        crate::minkowski::max_abs(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_nodes: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-10,
            rel: 1e-8,
            max_nodes: 100_000,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: f64,
    pub nodes: usize,
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208794693350,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

pub const NODES_PER_PANEL: usize = 21;

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

/// One Gauss–Kronrod panel on `[a, b]`.
fn gk21<T, F>(f: &mut F, a: f64, b: f64) -> Result<Panel<T>>
where
    T: Integrable,
    F: FnMut(f64) -> Result<T>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center)?;
    let mut kronrod = fc.scale(WGK[10]);
    let mut gauss = T::zero();
    let mut samples = [(T::zero(), T::zero()); 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        kronrod = kronrod + (f1 + f2).scale(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2).scale(WG[j / 2]);
        }
        samples[j] = (f1, f2);
    }

    let mean = kronrod.scale(0.5);
    let mut asc = WGK[10] * (fc - mean).magnitude();
    let mut absval = WGK[10] * fc.magnitude();
    for (j, (f1, f2)) in samples.iter().enumerate() {
        asc += WGK[j] * ((*f1 - mean).magnitude() + (*f2 - mean).magnitude());
        absval += WGK[j] * (f1.magnitude() + f2.magnitude());
    }

    let value = kronrod.scale(half);
    let asc = asc * half.abs();
    let absval = absval * half.abs();
    let mut error = (kronrod - gauss).scale(half).magnitude();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if absval > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * absval);
    }
    if !error.is_finite() {
        error = f64::INFINITY;
    }
    Ok(Panel { a, b, value, error })
}

struct ByError<T>(Panel<T>);

impl<T> PartialEq for ByError<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for ByError<T> {}
impl<T> PartialOrd for ByError<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for ByError<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .total_cmp(&other.0.error)
            // ties broken by position so the schedule is fully determined
            .then_with(|| other.0.a.total_cmp(&self.0.a))
    }
}

/// Compensated accumulator using the branch-free two-sum, so it works
/// componentwise for vector and matrix values.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Integrable> Default for CompensatedSum<T> {
    fn default() -> Self {
        CompensatedSum {
            sum: T::zero(),
            carry: T::zero(),
        }
    }
}

impl<T: Integrable> CompensatedSum<T> {
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        let bp = t - self.sum;
        let err = (self.sum - (t - bp)) + (x - bp);
        self.carry = self.carry + err;
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

fn adaptive_panels<T, F>(
    f: &mut F,
    breaks: &[f64],
    tol: &Tolerance,
) -> Result<(Vec<Panel<T>>, usize)>
where
    T: Integrable,
    F: FnMut(f64) -> Result<T>,
{
    let mut heap = BinaryHeap::new();
    let mut nodes = 0usize;
    let mut total = T::zero();
    let mut total_error = 0.0;
    for w in breaks.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let p = gk21(f, w[0], w[1])?;
        nodes += NODES_PER_PANEL;
        total = total + p.value;
        total_error += p.error;
        heap.push(ByError(p));
    }

    let span = breaks
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);

    while total_error > tol.abs.max(tol.rel * total.magnitude()) {
        let Some(ByError(worst)) = heap.pop() else {
            break;
        };
        let (lower, upper) = (breaks[0], breaks[breaks.len() - 1]);
        let width = (worst.b - worst.a).abs();
        if nodes + 2 * NODES_PER_PANEL > tol.max_nodes || width < 1e-14 * span {
            return Err(Error::QuadratureFailure {
                lower,
                upper,
                error: total_error,
                nodes,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk21(f, worst.a, mid)?;
        let right = gk21(f, mid, worst.b)?;
        nodes += 2 * NODES_PER_PANEL;
        total = total - worst.value + left.value + right.value;
        total_error += left.error + right.error - worst.error;
        heap.push(ByError(left));
        heap.push(ByError(right));
    }

    let mut panels: Vec<Panel<T>> = heap.into_iter().map(|p| p.0).collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    if breaks.first() > breaks.last() {
        panels.reverse();
    }
    Ok((panels, nodes))
}

fn summarize<T: Integrable>(panels: &[Panel<T>], nodes: usize) -> Quadrature<T> {
    let mut sum = CompensatedSum::default();
    let mut error = 0.0;
    for p in panels {
        sum.add(p.value);
        error += p.error;
    }
    Quadrature {
        value: sum.value(),
        error,
        nodes,
    }
}

/// Integrate `f` over `[a, b]`. `a > b` is allowed and flips the sign.
pub fn integrate<T, F>(mut f: F, a: f64, b: f64, tol: &Tolerance) -> Result<Quadrature<T>>
where
    T: Integrable,
    F: FnMut(f64) -> Result<T>,
{
    integrate_with_breaks(&mut f, &[a, b], tol)
}

/// Integrate over consecutive intervals of a monotone break list.
pub fn integrate_with_breaks<T, F>(
    f: &mut F,
    breaks: &[f64],
    tol: &Tolerance,
) -> Result<Quadrature<T>>
where
    T: Integrable,
    F: FnMut(f64) -> Result<T>,
{
    if breaks.len() < 2 || breaks[0] == breaks[breaks.len() - 1] {
        return Ok(Quadrature {
            value: T::zero(),
            error: 0.0,
            nodes: 0,
        });
    }
    let (panels, nodes) = adaptive_panels(f, breaks, tol)?;
    Ok(summarize(&panels, nodes))
}

/// Running integral `x ↦ ∫_a^x f` backed by an adaptive panel partition of
/// `[a, b]`. Evaluation inside a panel uses one Kronrod rule on the partial
/// panel, which is accurate because the panel already resolves `f`.
pub struct CumulativeIntegral<T, F> {
    f: F,
    edges: Vec<f64>,
    prefix: Vec<T>,
    pub error: f64,
    pub nodes: usize,
}

impl<T, F> CumulativeIntegral<T, F>
where
    T: Integrable,
    F: Fn(f64) -> T,
{
    pub fn new(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<Self> {
        let mut wrapped = |x: f64| Ok(f(x));
        let (panels, nodes) = if a == b {
            (Vec::new(), 0)
        } else {
            adaptive_panels(&mut wrapped, &[a, b], tol)?
        };
        let mut edges = vec![a];
        let mut prefix = vec![T::zero()];
        let mut sum = CompensatedSum::default();
        let mut error = 0.0;
        for p in &panels {
            sum.add(p.value);
            error += p.error;
            edges.push(p.b);
            prefix.push(sum.value());
        }
        Ok(CumulativeIntegral {
            f,
            edges,
            prefix,
            error,
            nodes,
        })
    }

    pub fn total(&self) -> T {
        *self.prefix.last().expect("prefix is never empty")
    }

    /// `∫_a^x f`. Arguments outside `[a, b]` are clamped.
    pub fn at(&self, x: f64) -> T {
        let n = self.edges.len();
        if n < 2 {
            return T::zero();
        }
        let ascending = self.edges[n - 1] > self.edges[0];
        // first edge at or beyond x, in the direction of integration
        let idx = self
            .edges
            .partition_point(|&e| if ascending { e < x } else { e > x });
        if idx == 0 {
            return T::zero();
        }
        if idx >= n {
            return self.total();
        }
        let left = self.edges[idx - 1];
        if x == self.edges[idx] {
            return self.prefix[idx];
        }
        let mut g = |s: f64| Ok::<T, Error>((self.f)(s));
        let partial = gk21(&mut g, left, x).expect("infallible integrand").value;
        self.prefix[idx - 1] + partial
    }
}
