//! Truncation operators: the gradient restricted to the band `|sigma| < a`,
//! the windowed derivative of a profile, and the weighted complement
//! integrand.

use crate::domain::{Profile, ScalarField, WeightFunction, Window};
use crate::error::{argument, Result};

pub(crate) fn check_threshold(a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(argument(format!("threshold a must lie in (0, 1), got {a}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedGradientSample {
    pub point: Vec<f64>,
    pub value: Vec<f64>,
    pub inside_band: bool,
}

impl TruncatedGradientSample {
    pub fn at(field: &ScalarField, x: &[f64], a: f64) -> Result<Self> {
        check_threshold(a)?;
        let sigma = field.value_checked(x)?;
        let inside_band = sigma.abs() < a;
        let value = if inside_band {
            field.gradient(x)
        } else {
            vec![0.0; x.len()]
        };
        Ok(Self {
            point: x.to_vec(),
            value,
            inside_band,
        })
    }
}

/// Gradient of `field` at `x` when `|sigma(x)| < a`, otherwise zero.
pub fn truncated_gradient(field: &ScalarField, x: &[f64], a: f64) -> Result<Vec<f64>> {
    TruncatedGradientSample::at(field, x, a).map(|s| s.value)
}

/// `dpsi/dz` when `|psi(z)|` lies in the half-open window, otherwise zero.
pub fn windowed_derivative(profile: &Profile, z: f64, w: Window) -> Result<f64> {
    if !(0.0..=profile.length()).contains(&z) {
        return Err(argument(format!(
            "z = {z} outside [0, {}]",
            profile.length()
        )));
    }
    Ok(if w.contains(profile.value(z).abs()) {
        profile.deriv(z)
    } else {
        0.0
    })
}

/// `||grad sigma|| f(|sigma|)` where `|sigma| >= a`, zero inside the band.
/// `f` is never evaluated inside the band, in particular never at 0.
pub fn gamma2_integrand(
    field: &ScalarField,
    f: &WeightFunction,
    x: &[f64],
    a: f64,
) -> Result<f64> {
    check_threshold(a)?;
    let sigma = field.value_checked(x)?;
    if sigma.abs() < a {
        return Ok(0.0);
    }
    debug_assert!(sigma.abs() >= a && a > 0.0);
    let norm = norm(&field.gradient(x));
    Ok(norm * f.eval(sigma.abs()))
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}
