//! Core objects: the cube, scalar fields on it, one-dimensional profiles,
//! weight functions, threshold windows and the constant ledger.
//!
//! Everything here is immutable after construction and cheap to clone
//! (models sit behind `Arc`), so values can be shared across worker threads.

pub mod corpus;
pub mod validate;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};

pub use corpus::{
    builtin_corpus, default_cube, field_by_name, field_on_cube, profile_by_name, weight_by_name, CorpusEntry,
    FIELD_NAMES, PROFILE_NAMES, WEIGHT_NAMES,
};
pub use validate::{
    validate_field, validate_profile, validate_weight, FieldValidation, ProfileValidation,
    WeightValidation,
};

/// Relative width of the evaluation slack around the cube.
pub const DEFAULT_MARGIN_FRACTION: f64 = 1e-3;

/// Closed cube `{x : |x_j - c_j| <= d}` with an evaluation margin around it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeDomain {
    center: Vec<f64>,
    half_side: f64,
    margin: f64,
}

impl CubeDomain {
    pub fn new(center: Vec<f64>, half_side: f64) -> Result<Self> {
        let margin = DEFAULT_MARGIN_FRACTION * half_side;
        Self::with_margin(center, half_side, margin)
    }

    pub fn with_margin(center: Vec<f64>, half_side: f64, margin: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(argument("cube dimension must be at least 1"));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(argument("cube center must be finite"));
        }
        if !(half_side > 0.0 && half_side.is_finite()) {
            return Err(argument(format!("half side must be positive, got {half_side}")));
        }
        if !(margin > 0.0 && margin.is_finite()) {
            return Err(argument(format!("margin must be positive, got {margin}")));
        }
        Ok(Self {
            center,
            half_side,
            margin,
        })
    }

    /// Cube of half side `d` centred at the origin of R^n.
    pub fn centered(n: usize, half_side: f64) -> Result<Self> {
        Self::new(vec![0.0; n], half_side)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn half_side(&self) -> f64 {
        self.half_side
    }

    pub fn side(&self) -> f64 {
        2.0 * self.half_side
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn lower(&self, j: usize) -> f64 {
        self.center[j] - self.half_side
    }

    pub fn upper(&self, j: usize) -> f64 {
        self.center[j] + self.half_side
    }

    pub fn volume(&self) -> f64 {
        self.side().powi(self.dim() as i32)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.within(x, self.half_side)
    }

    /// Membership in the slightly larger region where fields may be evaluated.
    pub fn in_evaluation_region(&self, x: &[f64]) -> bool {
        self.within(x, self.half_side + self.margin)
    }

    fn within(&self, x: &[f64], radius: f64) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(&self.center)
                .all(|(xi, ci)| (xi - ci).abs() <= radius)
    }

    pub(crate) fn check_point(&self, x: &[f64]) -> Result<()> {
        if self.in_evaluation_region(x) {
            Ok(())
        } else {
            Err(Error::Domain { point: x.to_vec() })
        }
    }
}

/// Value and gradient of a twice differentiable function of n variables.
pub trait FieldModel: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;
    /// Writes the gradient at `x` into `out` (same length as `x`).
    fn gradient(&self, x: &[f64], out: &mut [f64]);
}

struct FnField<V, G> {
    value: V,
    gradient: G,
}

impl<V, G> FieldModel for FnField<V, G>
where
    V: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        (self.gradient)(x, out)
    }
}

/// A scalar field on a cube together with a certified bound `c1` on all
/// of its second partial derivatives.
#[derive(Clone)]
pub struct ScalarField {
    name: String,
    domain: CubeDomain,
    hessian_bound: f64,
    model: Arc<dyn FieldModel>,
}

impl ScalarField {
    pub fn new(
        name: impl Into<String>,
        domain: CubeDomain,
        hessian_bound: f64,
        model: Arc<dyn FieldModel>,
    ) -> Result<Self> {
        if !(hessian_bound > 0.0 && hessian_bound.is_finite()) {
            return Err(argument(format!(
                "hessian bound must be positive, got {hessian_bound}"
            )));
        }
        Ok(Self {
            name: name.into(),
            domain,
            hessian_bound,
            model,
        })
    }

    /// Builds a field from a value closure and a gradient closure.
    pub fn from_fns<V, G>(
        name: impl Into<String>,
        domain: CubeDomain,
        hessian_bound: f64,
        value: V,
        gradient: G,
    ) -> Result<Self>
    where
        V: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        Self::new(
            name,
            domain,
            hessian_bound,
            Arc::new(FnField { value, gradient }),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &CubeDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn hessian_bound(&self) -> f64 {
        self.hessian_bound
    }

    /// Unchecked evaluation; callers keep `x` inside the evaluation region.
    #[inline]
    pub fn value(&self, x: &[f64]) -> f64 {
        self.model.value(x)
    }

    #[inline]
    pub fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        self.model.gradient(x, out)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        self.model.gradient(x, &mut g);
        g
    }

    pub fn value_checked(&self, x: &[f64]) -> Result<f64> {
        self.domain.check_point(x)?;
        Ok(self.model.value(x))
    }

    pub fn gradient_checked(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.domain.check_point(x)?;
        Ok(self.gradient(x))
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("hessian_bound", &self.hessian_bound)
            .finish_non_exhaustive()
    }
}

/// A twice differentiable function of one variable on `[0, d]`.
pub trait ProfileModel: Send + Sync {
    fn value(&self, z: f64) -> f64;
    fn deriv(&self, z: f64) -> f64;
}

struct FnProfile<V, D> {
    value: V,
    deriv: D,
}

impl<V, D> ProfileModel for FnProfile<V, D>
where
    V: Fn(f64) -> f64 + Send + Sync,
    D: Fn(f64) -> f64 + Send + Sync,
{
    fn value(&self, z: f64) -> f64 {
        (self.value)(z)
    }

    fn deriv(&self, z: f64) -> f64 {
        (self.deriv)(z)
    }
}

#[derive(Clone)]
pub struct Profile {
    name: String,
    length: f64,
    hessian_bound: f64,
    model: Arc<dyn ProfileModel>,
}

impl Profile {
    pub fn from_fns<V, D>(
        name: impl Into<String>,
        length: f64,
        hessian_bound: f64,
        value: V,
        deriv: D,
    ) -> Result<Self>
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(length > 0.0 && length.is_finite()) {
            return Err(argument(format!("profile length must be positive, got {length}")));
        }
        if !(hessian_bound > 0.0 && hessian_bound.is_finite()) {
            return Err(argument(format!(
                "hessian bound must be positive, got {hessian_bound}"
            )));
        }
        Ok(Self {
            name: name.into(),
            length,
            hessian_bound,
            model: Arc::new(FnProfile { value, deriv }),
        })
    }

    /// `slope * z`. The stored `c1` is 1 since the true bound is zero.
    pub fn linear(slope: f64, length: f64) -> Result<Self> {
        Self::from_fns(
            format!("linear({slope})"),
            length,
            1.0,
            move |z| slope * z,
            move |_| slope,
        )
    }

    /// `scale * z^2`, with `c1 = 2 |scale|`.
    pub fn quadratic(scale: f64, length: f64) -> Result<Self> {
        let c1 = (2.0 * scale.abs()).max(f64::MIN_POSITIVE);
        Self::from_fns(
            format!("quadratic({scale})"),
            length,
            c1,
            move |z| scale * z * z,
            move |z| 2.0 * scale * z,
        )
    }

    /// `amplitude * sin(2 pi cycles z)`, with `c1 = amplitude (2 pi cycles)^2`.
    pub fn sine(amplitude: f64, cycles: f64, length: f64) -> Result<Self> {
        let w = 2.0 * std::f64::consts::PI * cycles;
        Self::from_fns(
            format!("sine({amplitude},{cycles})"),
            length,
            (amplitude.abs() * w * w).max(f64::MIN_POSITIVE),
            move |z| amplitude * (w * z).sin(),
            move |z| amplitude * w * (w * z).cos(),
        )
    }

    pub fn constant(level: f64, length: f64) -> Result<Self> {
        Self::from_fns(format!("constant({level})"), length, 1.0, move |_| level, |_| 0.0)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Length `d` of the interval `[0, d]`.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn hessian_bound(&self) -> f64 {
        self.hessian_bound
    }

    #[inline]
    pub fn value(&self, z: f64) -> f64 {
        self.model.value(z)
    }

    #[inline]
    pub fn deriv(&self, z: f64) -> f64 {
        self.model.deriv(z)
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Profile")
            .field("name", &self.name)
            .field("length", &self.length)
            .field("hessian_bound", &self.hessian_bound)
            .finish_non_exhaustive()
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Weight `f` on `(0, 1]` with its two certificates: `B_f >= f(x) sqrt(x)`
/// and `I_f = int_0^1 f(x) / sqrt(x) dx`.
#[derive(Clone)]
pub struct WeightFunction {
    name: String,
    eval: ScalarFn,
    sqrt_bound: f64,
    integral_01: f64,
    sqrt_weighted_primitive: Option<ScalarFn>,
    endpoint_degenerate: bool,
}

impl WeightFunction {
    pub fn new<F>(name: impl Into<String>, eval: F, sqrt_bound: f64, integral_01: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(sqrt_bound > 0.0 && sqrt_bound.is_finite()) {
            return Err(argument("sqrt bound must be positive and finite"));
        }
        if !(integral_01 > 0.0 && integral_01.is_finite()) {
            return Err(argument("weighted integral must be positive and finite"));
        }
        Ok(Self {
            name: name.into(),
            eval: Arc::new(eval),
            sqrt_bound,
            integral_01,
            sqrt_weighted_primitive: None,
            endpoint_degenerate: false,
        })
    }

    /// Attaches `P` with `P' = f / sqrt` and `P(0) = 0`.
    pub fn with_primitive<P>(mut self, primitive: P) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.sqrt_weighted_primitive = Some(Arc::new(primitive));
        self
    }

    /// Marks a weight that vanishes at 1 (admitted: the bounds only use `f >= 0`).
    pub fn endpoint_degenerate(mut self) -> Self {
        self.endpoint_degenerate = true;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        (self.eval)(xi)
    }

    pub fn sqrt_bound(&self) -> f64 {
        self.sqrt_bound
    }

    pub fn integral_01(&self) -> f64 {
        self.integral_01
    }

    pub fn is_endpoint_degenerate(&self) -> bool {
        self.endpoint_degenerate
    }

    /// Closed form of `int_lo^hi f(k)/sqrt(k) dk`, when a primitive is known.
    pub fn sqrt_weighted_integral(&self, lo: f64, hi: f64) -> Option<f64> {
        self.sqrt_weighted_primitive
            .as_ref()
            .map(|p| p(hi) - p(lo))
    }
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightFunction")
            .field("name", &self.name)
            .field("sqrt_bound", &self.sqrt_bound)
            .field("integral_01", &self.integral_01)
            .field("endpoint_degenerate", &self.endpoint_degenerate)
            .finish_non_exhaustive()
    }
}

/// Half-open threshold band `[lo, hi)` with `0 <= lo < hi <= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    lo: f64,
    hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(argument(format!("window needs 0 <= lo < hi <= 1, got [{lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    /// The band `[0, a)`, i.e. `|v| < a`.
    pub fn below(a: f64) -> Result<Self> {
        Self::new(0.0, a)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Strict IEEE comparison, no tolerance.
    #[inline]
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v < self.hi
    }
}

/// The explicit constants behind the bounds, with the formulas used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantLedger {
    pub n: usize,
    pub half_side: f64,
    pub line_length: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    #[serde(rename = "C1")]
    pub big_c1: f64,
    #[serde(rename = "C2")]
    pub big_c2: f64,
    pub weight: String,
    pub provenance: Vec<String>,
}

/// One-dimensional constant for a segment of length `length`:
/// `c2 = length (1 + 4 c1) + 2`, valid for every `a < 1`.
pub fn c2_for_length(c1: f64, length: f64) -> f64 {
    length * (1.0 + 4.0 * c1) + 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_membership_and_margin() {
        let cube = CubeDomain::centered(2, 0.9).unwrap();
        assert!(cube.contains(&[0.9, -0.9]));
        assert!(!cube.contains(&[0.9 + 1e-4, 0.0]));
        assert!(cube.in_evaluation_region(&[0.9 + 1e-4, 0.0]));
        assert!(!cube.in_evaluation_region(&[0.9 + 1e-2, 0.0]));
        assert!((cube.margin() - 9e-4).abs() < 1e-15);
        assert!((cube.volume() - 3.24).abs() < 1e-12);
    }

    #[test]
    fn cube_rejects_bad_input() {
        assert!(CubeDomain::centered(0, 1.0).is_err());
        assert!(CubeDomain::centered(2, 0.0).is_err());
        assert!(CubeDomain::with_margin(vec![0.0], 1.0, -1.0).is_err());
    }

    #[test]
    fn window_half_open() {
        let w = Window::new(0.1, 0.5).unwrap();
        assert!(w.contains(0.1));
        assert!(!w.contains(0.5));
        assert!(Window::new(0.5, 0.5).is_err());
        assert!(Window::new(0.2, 1.1).is_err());
        assert!(Window::new(-0.1, 0.5).is_err());
    }

    #[test]
    fn checked_evaluation_outside_margin() {
        let cube = CubeDomain::centered(1, 1.0).unwrap();
        let f = ScalarField::from_fns("x", cube, 1.0, |x| x[0], |_, g| g[0] = 1.0).unwrap();
        assert!(matches!(f.value_checked(&[1.5]), Err(Error::Domain { .. })));
        assert_eq!(f.value_checked(&[1.0005]).unwrap(), 1.0005);
    }

    #[test]
    fn c2_formula() {
        assert_eq!(c2_for_length(1.0, 1.0), 7.0);
        assert!((c2_for_length(1.0, 0.9) - 6.5).abs() < 1e-15);
    }
}
