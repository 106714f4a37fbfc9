//! Sampled checks of the hypotheses placed on fields, profiles and weights.

use rayon::prelude::*;
use serde::Serialize;

use super::{Profile, ScalarField, WeightFunction};
use crate::error::{argument, Result};
use crate::quad::midpoint_rule;

/// Relative slack allowed on sampled second derivatives.
pub const HESSIAN_SLACK: f64 = 1e-3;
/// Tolerance on analytic vs central-difference gradients.
pub const GRADIENT_TOL: f64 = 1e-6;
/// Relative tolerance on the numeric check of `I_f`.
pub const INTEGRAL_REL_TOL: f64 = 5e-3;

#[derive(Clone, Debug, Serialize)]
pub struct FieldValidation {
    pub name: String,
    pub samples: usize,
    pub max_abs_value: f64,
    pub max_abs_value_at: Vec<f64>,
    pub bounded: bool,
    pub max_gradient_error: f64,
    pub max_gradient_error_at: Vec<f64>,
    pub gradient_ok: bool,
    pub max_second_partial: f64,
    pub max_second_partial_at: Vec<f64>,
    pub hessian_bound: f64,
    pub hessian_ok: bool,
}

impl FieldValidation {
    pub fn passed(&self) -> bool {
        self.bounded && self.gradient_ok && self.hessian_ok
    }
}

#[derive(Default, Clone, Copy)]
struct PointStats {
    abs_value: f64,
    grad_err: f64,
    second: f64,
}

fn grid_point(cube: &super::CubeDomain, index: usize, per_axis: usize, out: &mut [f64]) {
    let mut rem = index;
    let step = cube.side() / (per_axis - 1) as f64;
    for (j, o) in out.iter_mut().enumerate() {
        let i = rem % per_axis;
        rem /= per_axis;
        *o = if i == per_axis - 1 {
            cube.upper(j)
        } else {
            cube.lower(j) + step * i as f64
        };
    }
}

/// Checks `|sigma| < 1`, the analytic gradient and the Hessian bound on a
/// tensor grid with `samples_per_axis` points per axis (corners included).
/// Finite differences step into the evaluation margin at the boundary.
pub fn validate_field(field: &ScalarField, samples_per_axis: usize) -> Result<FieldValidation> {
    if samples_per_axis < 3 {
        return Err(argument("validation needs at least 3 samples per axis"));
    }
    let cube = field.domain();
    let n = cube.dim();
    let total = samples_per_axis
        .checked_pow(n as u32)
        .ok_or_else(|| argument("sample grid too large"))?;
    let h = (0.5 * cube.margin()).min(1e-4);

    let stats: Vec<PointStats> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut x = vec![0.0; n];
            grid_point(cube, idx, samples_per_axis, &mut x);
            point_stats(field, &x, h)
        })
        .collect();

    let mut worst = [(0.0f64, 0usize); 3];
    for (idx, s) in stats.iter().enumerate() {
        for (slot, v) in worst.iter_mut().zip([s.abs_value, s.grad_err, s.second]) {
            if v > slot.0 {
                *slot = (v, idx);
            }
        }
    }
    let at = |idx: usize| {
        let mut x = vec![0.0; n];
        grid_point(cube, idx, samples_per_axis, &mut x);
        x
    };
    let c1 = field.hessian_bound();
    Ok(FieldValidation {
        name: field.name().to_string(),
        samples: total,
        max_abs_value: worst[0].0,
        max_abs_value_at: at(worst[0].1),
        bounded: worst[0].0 < 1.0,
        max_gradient_error: worst[1].0,
        max_gradient_error_at: at(worst[1].1),
        gradient_ok: worst[1].0 <= GRADIENT_TOL,
        max_second_partial: worst[2].0,
        max_second_partial_at: at(worst[2].1),
        hessian_bound: c1,
        hessian_ok: worst[2].0 <= c1 * (1.0 + HESSIAN_SLACK),
    })
}

fn point_stats(field: &ScalarField, x: &[f64], h: f64) -> PointStats {
    let n = x.len();
    let grad = field.gradient(x);
    let f0 = field.value(x);
    let mut y = x.to_vec();
    let mut grad_err = 0.0f64;
    let mut second = 0.0f64;
    for i in 0..n {
        y[i] = x[i] + h;
        let fp = field.value(&y);
        y[i] = x[i] - h;
        let fm = field.value(&y);
        y[i] = x[i];
        let fd = (fp - fm) / (2.0 * h);
        grad_err = grad_err.max((fd - grad[i]).abs() / grad[i].abs().max(1.0));
        second = second.max(((fp - 2.0 * f0 + fm) / (h * h)).abs());
        for j in (i + 1)..n {
            let mut corner = |si: f64, sj: f64| {
                y[i] = x[i] + si * h;
                y[j] = x[j] + sj * h;
                let v = field.value(&y);
                y[i] = x[i];
                y[j] = x[j];
                v
            };
            let mixed = (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0)
                + corner(-1.0, -1.0))
                / (4.0 * h * h);
            second = second.max(mixed.abs());
        }
    }
    PointStats {
        abs_value: f0.abs(),
        grad_err,
        second,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileValidation {
    pub name: String,
    pub samples: usize,
    pub max_abs_value: f64,
    pub max_abs_value_at: f64,
    pub bounded: bool,
    pub max_deriv_error: f64,
    pub deriv_ok: bool,
    pub max_second_deriv: f64,
    pub max_second_deriv_at: f64,
    pub hessian_ok: bool,
}

impl ProfileValidation {
    pub fn passed(&self) -> bool {
        self.bounded && self.deriv_ok && self.hessian_ok
    }
}

pub fn validate_profile(profile: &Profile, samples: usize) -> Result<ProfileValidation> {
    if samples < 3 {
        return Err(argument("validation needs at least 3 samples"));
    }
    let d = profile.length();
    let h = 1e-4 * d.min(1.0);
    let mut out = ProfileValidation {
        name: profile.name().to_string(),
        samples,
        max_abs_value: 0.0,
        max_abs_value_at: 0.0,
        bounded: true,
        max_deriv_error: 0.0,
        deriv_ok: true,
        max_second_deriv: 0.0,
        max_second_deriv_at: 0.0,
        hessian_ok: true,
    };
    for i in 0..samples {
        let z = if i == samples - 1 {
            d
        } else {
            d * i as f64 / (samples - 1) as f64
        };
        let v = profile.value(z);
        if v.abs() > out.max_abs_value {
            out.max_abs_value = v.abs();
            out.max_abs_value_at = z;
        }
        let (fp, fm) = (profile.value(z + h), profile.value(z - h));
        let fd = (fp - fm) / (2.0 * h);
        let dv = profile.deriv(z);
        out.max_deriv_error = out.max_deriv_error.max((fd - dv).abs() / dv.abs().max(1.0));
        let second = ((fp - 2.0 * v + fm) / (h * h)).abs();
        if second > out.max_second_deriv {
            out.max_second_deriv = second;
            out.max_second_deriv_at = z;
        }
    }
    out.bounded = out.max_abs_value < 1.0;
    out.deriv_ok = out.max_deriv_error <= GRADIENT_TOL;
    out.hessian_ok = out.max_second_deriv <= profile.hessian_bound() * (1.0 + HESSIAN_SLACK);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightValidation {
    pub name: String,
    pub decreasing: bool,
    pub nonnegative: bool,
    pub endpoint_degenerate: bool,
    pub max_sqrt_product: f64,
    pub sqrt_bound: f64,
    pub sqrt_bound_ok: bool,
    pub integral_estimate: f64,
    pub integral_claimed: f64,
    pub integral_rel_error: f64,
    pub integral_ok: bool,
}

impl WeightValidation {
    pub fn passed(&self) -> bool {
        self.decreasing && self.nonnegative && self.sqrt_bound_ok && self.integral_ok
    }
}

/// Sample points in (0, 1]: a dyadic ladder towards 0 merged with a uniform grid.
fn weight_grid(samples: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = (1..=60).map(|j| 0.5f64.powi(j)).collect();
    pts.extend((1..=samples).map(|i| i as f64 / samples as f64));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Estimates `int_0^1 f(x)/sqrt(x) dx` piece by piece over dyadic intervals
/// `[2^-(j+1), 2^-j]`, closing the remainder with a geometric tail.
pub fn tail_refined_integral(f: &WeightFunction) -> f64 {
    const PIECES: i32 = 64;
    const CELLS: usize = 128;
    let g = |x: f64| f.eval(x) / x.sqrt();
    let parts: Vec<f64> = (0..PIECES)
        .map(|j| {
            let hi = 0.5f64.powi(j);
            midpoint_rule(&g, 0.5 * hi, hi, CELLS)
        })
        .collect();
    let body: f64 = parts.iter().rev().sum();
    let (last, prev) = (parts[PIECES as usize - 1], parts[PIECES as usize - 2]);
    let ratio = if prev != 0.0 { last / prev } else { 0.0 };
    let tail = if ratio > 0.0 && ratio < 1.0 {
        last * ratio / (1.0 - ratio)
    } else {
        0.0
    };
    body + tail
}

pub fn validate_weight(f: &WeightFunction, samples: usize) -> Result<WeightValidation> {
    if samples < 3 {
        return Err(argument("validation needs at least 3 samples"));
    }
    let pts = weight_grid(samples);
    let vals: Vec<f64> = pts.iter().map(|&x| f.eval(x)).collect();
    let decreasing = vals.windows(2).all(|w| w[1] < w[0]);
    let nonnegative = vals.iter().all(|&v| v >= 0.0);
    let max_sqrt_product = pts
        .iter()
        .zip(&vals)
        .map(|(x, v)| v * x.sqrt())
        .fold(f64::NEG_INFINITY, f64::max);
    let estimate = tail_refined_integral(f);
    let rel = (estimate - f.integral_01()).abs() / f.integral_01();
    Ok(WeightValidation {
        name: f.name().to_string(),
        decreasing,
        nonnegative,
        endpoint_degenerate: f.is_endpoint_degenerate(),
        max_sqrt_product,
        sqrt_bound: f.sqrt_bound(),
        sqrt_bound_ok: max_sqrt_product <= f.sqrt_bound() * (1.0 + 1e-12),
        integral_estimate: estimate,
        integral_claimed: f.integral_01(),
        integral_rel_error: rel,
        integral_ok: rel <= INTEGRAL_REL_TOL,
    })
}
