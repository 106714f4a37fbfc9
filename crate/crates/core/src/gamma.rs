//! The integrals `Gamma1(a)`, `Gamma2(a)` over the cube and the axis-sum
//! upper bound for `Gamma1`.
//!
//! Both integrals are evaluated as iterated integrals. Writing
//! `||grad s|| = sum_i (d_i s)^2 / ||grad s||`, the `i`-th term is integrated
//! along lines parallel to `x_i`, and the lines are summed by the midpoint
//! rule with grid doubling over the `(n-1)`-dimensional face. Along each
//! line the restriction is split into monotone pieces, the band edges
//! `|s| = a` are located by bisection, and the smooth remainder is integrated
//! with an end-graded rule. The weighting by `(d_i s)^2` makes every line
//! cross the level sets it integrates over transversally, so thin bands
//! never have to be resolved by the outer grid.
//!
//! The same line machinery gives the axis-sum bound exactly per line: on a
//! monotone piece, `int |d_i s| 1{|s| < a} dx_i` is the length of the value
//! range inside `(-a, a)`.

use std::cell::RefCell;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{ScalarField, WeightFunction};
use crate::error::{Error, Result};
use crate::quad::{
    graded_piece, integrate_cube, range_window_measure, segment_by_derivative, tree_sum,
    window_pieces_into, MonotoneSegmentation, PieceConfig, PieceScratch, QuadConfig,
    QuadratureResult, MAX_CELLS,
};
use crate::truncate::{check_threshold, gamma2_integrand, norm, truncated_gradient};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaConfig {
    /// Outer grid over the face of the cube.
    pub outer: QuadConfig,
    /// Smooth pieces along each line.
    pub piece: PieceConfig,
    /// Scan points used to bracket critical points along a line.
    pub scan_points: usize,
}

impl Default for GammaConfig {
    fn default() -> Self {
        Self {
            outer: QuadConfig {
                base_cells: 8,
                tol: 1e-3,
                max_doublings: 8,
            },
            // per-line error far below the outer tolerance
            piece: PieceConfig {
                base_cells: 4,
                tol: 1e-5,
                max_doublings: 12,
            },
            scan_points: 64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaResult {
    pub a: f64,
    pub gamma1: QuadratureResult,
    pub gamma2: QuadratureResult,
    pub axis_bound: f64,
    pub axis_bound_error: f64,
}

impl GammaResult {
    /// `Gamma1 <= axis bound` up to the combined error estimates.
    pub fn axis_inequality_holds(&self) -> bool {
        self.gamma1.value
            <= self.axis_bound + self.gamma1.error_estimate + self.axis_bound_error
    }
}

#[derive(Clone, Copy)]
enum Mode {
    /// outputs: [Gamma1, axis bound]
    Band,
    /// outputs: one Gamma2 per weight
    Complement,
}

#[derive(Default)]
struct LineScratch {
    x: RefCell<Vec<f64>>,
    grad: RefCell<Vec<f64>>,
    pieces: Vec<(f64, f64)>,
    piece: PieceScratch,
    inner_failures: usize,
}

struct LineIntegrator<'a> {
    field: &'a ScalarField,
    weights: &'a [WeightFunction],
    a: f64,
    mode: Mode,
    cfg: &'a GammaConfig,
}

impl LineIntegrator<'_> {
    fn outputs(&self) -> usize {
        match self.mode {
            Mode::Band => 2,
            Mode::Complement => self.weights.len(),
        }
    }

    /// Adds the contributions of all `n` axis lines through face point `y`.
    fn eval(&self, y: &[f64], s: &mut LineScratch, out: &mut [f64]) {
        let cube = self.field.domain();
        let n = cube.dim();
        {
            let mut x = s.x.borrow_mut();
            x.resize(n, 0.0);
            s.grad.borrow_mut().resize(n, 0.0);
        }
        for axis in 0..n {
            {
                let mut x = s.x.borrow_mut();
                let mut k = 0;
                for (j, xj) in x.iter_mut().enumerate() {
                    if j != axis {
                        *xj = cube.center()[j] + y[k];
                        k += 1;
                    }
                }
            }
            self.line(axis, s, out);
        }
    }

    fn line(&self, axis: usize, s: &mut LineScratch, out: &mut [f64]) {
        let field = self.field;
        let cube = field.domain();
        let (lo, hi) = (cube.lower(axis), cube.upper(axis));
        let xs = &s.x;
        let gs = &s.grad;
        let value = |t: f64| {
            let mut x = xs.borrow_mut();
            x[axis] = t;
            field.value(&x)
        };
        let partial = |t: f64| {
            let mut x = xs.borrow_mut();
            x[axis] = t;
            let mut g = gs.borrow_mut();
            field.gradient_into(&x, &mut g);
            g[axis]
        };
        let seg: MonotoneSegmentation = segment_by_derivative(partial, lo, hi, self.cfg.scan_points);
        let a = self.a;
        // (d_i s)^2 / ||grad s|| at t, plus |s| for the weights
        let weight_term = |t: f64| {
            let mut x = xs.borrow_mut();
            x[axis] = t;
            let mut g = gs.borrow_mut();
            field.gradient_into(&x, &mut g);
            let nrm = norm(&g);
            let share = if nrm > 0.0 { g[axis] * g[axis] / nrm } else { 0.0 };
            (share, field.value(&x).abs())
        };
        match self.mode {
            Mode::Band => {
                let mut axis_part = 0.0;
                for (t0, t1, _) in seg.segments() {
                    let (v0, v1) = (value(t0), value(t1));
                    axis_part += range_window_measure(v0.min(v1), v0.max(v1), 0.0, a);
                }
                out[1] += axis_part;
                window_pieces_into(&value, &seg, 0.0, a, &mut s.pieces);
                let mut acc = [0.0];
                for &(p, q) in &s.pieces {
                    let ok = graded_piece(
                        &mut |t: f64, o: &mut [f64]| o[0] = weight_term(t).0,
                        p,
                        q,
                        &self.cfg.piece,
                        &mut acc,
                        &mut s.piece,
                    );
                    if !ok {
                        s.inner_failures += 1;
                    }
                }
                out[0] += acc[0];
            }
            Mode::Complement => {
                window_pieces_into(&value, &seg, a, f64::INFINITY, &mut s.pieces);
                let weights = self.weights;
                let mut acc = vec![0.0; weights.len()];
                for &(p, q) in &s.pieces {
                    let ok = graded_piece(
                        &mut |t: f64, o: &mut [f64]| {
                            let (share, v) = weight_term(t);
                            // |s| >= a > 0 inside these pieces, f is never evaluated at 0
                            let v = v.max(a);
                            for (ok, w) in o.iter_mut().zip(weights) {
                                *ok = share * w.eval(v);
                            }
                        },
                        p,
                        q,
                        &self.cfg.piece,
                        &mut acc,
                        &mut s.piece,
                    );
                    if !ok {
                        s.inner_failures += 1;
                    }
                }
                for (o, v) in out.iter_mut().zip(acc) {
                    *o += v;
                }
            }
        }
    }
}

const BLOCK: usize = 256;

struct Level {
    values: Vec<f64>,
    inner_failures: usize,
}

/// Midpoint sums of the line integrator over a `cells^(n-1)` face grid.
fn face_level(li: &LineIntegrator<'_>, cells: usize) -> Result<Level> {
    let cube = li.field.domain();
    let dim = cube.dim() - 1;
    let outputs = li.outputs();
    let d = cube.half_side();
    let total = cells.pow(dim as u32);
    let h = 2.0 * d / cells as f64;
    let blocks = total.div_ceil(BLOCK);
    let partial: Vec<(Vec<f64>, usize)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut s = LineScratch::default();
            let mut y = vec![0.0; dim];
            let mut acc = vec![0.0; outputs];
            for idx in (b * BLOCK)..((b + 1) * BLOCK).min(total) {
                let mut rem = idx;
                for yj in y.iter_mut() {
                    *yj = -d + ((rem % cells) as f64 + 0.5) * h;
                    rem /= cells;
                }
                li.eval(&y, &mut s, &mut acc);
            }
            (acc, s.inner_failures)
        })
        .collect();
    let vol = h.powi(dim as i32);
    let mut values = Vec::with_capacity(outputs);
    let mut column = Vec::with_capacity(partial.len());
    for k in 0..outputs {
        column.clear();
        column.extend(partial.iter().map(|(acc, _)| acc[k]));
        values.push(tree_sum(&column) * vol);
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Numeric {
            point: Vec::new(),
            value: *v,
        });
    }
    Ok(Level {
        values,
        inner_failures: partial.iter().map(|p| p.1).sum(),
    })
}

/// Runs the face grid with doubling until every output has converged.
///
/// An output that is exactly zero on two successive grids only counts as
/// converged once the face spacing is below `sqrt(a / c1)`: a band around a
/// critical value has at least that width, so coarser grids may step over it.
fn integrate_lines(li: &LineIntegrator<'_>) -> Result<Vec<QuadratureResult>> {
    let cfg = &li.cfg.outer;
    cfg.validate()?;
    let cube = li.field.domain();
    let dim = cube.dim() - 1;
    let outputs = li.outputs();
    if dim == 0 {
        let mut s = LineScratch::default();
        let mut acc = vec![0.0; outputs];
        li.eval(&[], &mut s, &mut acc);
        if let Some(v) = acc.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numeric {
                point: Vec::new(),
                value: *v,
            });
        }
        let converged = s.inner_failures == 0;
        return Ok(acc
            .into_iter()
            .map(|value| QuadratureResult {
                value,
                error_estimate: value.abs() * li.cfg.piece.tol,
                cells_used: 1,
                converged,
            })
            .collect());
    }
    let floor = (li.a / li.field.hessian_bound()).sqrt();
    let mut cells = cfg.base_cells;
    let mut prev = face_level(li, cells)?;
    let mut results: Vec<QuadratureResult> = prev
        .values
        .iter()
        .map(|&value| QuadratureResult {
            value,
            error_estimate: f64::INFINITY,
            cells_used: cells.pow(dim as u32),
            converged: false,
        })
        .collect();
    for _ in 0..cfg.max_doublings {
        let next = cells * 2;
        match next.checked_pow(dim as u32) {
            Some(total) if total <= MAX_CELLS => {}
            _ => break,
        }
        cells = next;
        let level = face_level(li, cells)?;
        let h = cube.side() / cells as f64;
        let mut all = true;
        for (k, r) in results.iter_mut().enumerate() {
            let (old, new) = (prev.values[k], level.values[k]);
            let err = (new - old).abs();
            let ok = if new == 0.0 && old == 0.0 {
                h <= floor
            } else {
                err <= cfg.tol * new.abs()
            };
            *r = QuadratureResult {
                value: new,
                error_estimate: err,
                cells_used: cells.pow(dim as u32),
                converged: ok && level.inner_failures == 0,
            };
            all &= r.converged;
        }
        prev = level;
        if all {
            break;
        }
    }
    Ok(results)
}

/// `Gamma1(a)` together with the axis-sum bound, from one pass.
pub fn gamma1_with_axis_bound(
    field: &ScalarField,
    a: f64,
    cfg: &GammaConfig,
) -> Result<(QuadratureResult, QuadratureResult)> {
    check_threshold(a)?;
    let li = LineIntegrator {
        field,
        weights: &[],
        a,
        mode: Mode::Band,
        cfg,
    };
    let r = integrate_lines(&li)?;
    Ok((r[0], r[1]))
}

/// `int_Q ||truncated gradient|| dmu`.
pub fn gamma1(field: &ScalarField, a: f64, cfg: &GammaConfig) -> Result<QuadratureResult> {
    gamma1_with_axis_bound(field, a, cfg).map(|r| r.0)
}

/// `sum_i int_{Q_i} int |d_i s| 1{|s| < a} dx_i`, an upper bound for `Gamma1`.
pub fn axis_reduction_bound(field: &ScalarField, a: f64, cfg: &GammaConfig) -> Result<f64> {
    gamma1_with_axis_bound(field, a, cfg).map(|r| r.1.value)
}

/// `Gamma2(a)` for several weights at once.
pub fn gamma2_many(
    field: &ScalarField,
    weights: &[WeightFunction],
    a: f64,
    cfg: &GammaConfig,
) -> Result<Vec<QuadratureResult>> {
    check_threshold(a)?;
    if weights.is_empty() {
        return Ok(Vec::new());
    }
    let li = LineIntegrator {
        field,
        weights,
        a,
        mode: Mode::Complement,
        cfg,
    };
    integrate_lines(&li)
}

/// `int_Q ||grad s|| f(|s|) 1{|s| >= a} dmu`.
pub fn gamma2(
    field: &ScalarField,
    f: &WeightFunction,
    a: f64,
    cfg: &GammaConfig,
) -> Result<QuadratureResult> {
    gamma2_many(field, std::slice::from_ref(f), a, cfg).map(|mut v| v.remove(0))
}

pub fn evaluate(
    field: &ScalarField,
    f: &WeightFunction,
    a: f64,
    cfg: &GammaConfig,
) -> Result<GammaResult> {
    let (gamma1, axis) = gamma1_with_axis_bound(field, a, cfg)?;
    let gamma2 = gamma2(field, f, a, cfg)?;
    Ok(GammaResult {
        a,
        gamma1,
        gamma2,
        axis_bound: axis.value,
        axis_bound_error: axis.error_estimate,
    })
}

/// Brute-force `Gamma1` by the midpoint rule on the full cube. Independent
/// of the line machinery; only practical for moderate `a` and `n`.
pub fn gamma1_direct(field: &ScalarField, a: f64, cfg: &QuadConfig) -> Result<QuadratureResult> {
    check_threshold(a)?;
    integrate_cube(
        |x| truncated_gradient(field, x, a).map(|g| norm(&g)).unwrap_or(f64::NAN),
        field.domain(),
        cfg,
    )
}

/// Brute-force `Gamma2` by the midpoint rule on the full cube.
pub fn gamma2_direct(
    field: &ScalarField,
    f: &WeightFunction,
    a: f64,
    cfg: &QuadConfig,
) -> Result<QuadratureResult> {
    check_threshold(a)?;
    integrate_cube(
        |x| gamma2_integrand(field, f, x, a).unwrap_or(f64::NAN),
        field.domain(),
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{field_by_name, field_on_cube, weight_by_name, CubeDomain};

    fn cube2() -> CubeDomain {
        CubeDomain::centered(2, 0.9).unwrap()
    }

    #[test]
    fn constant_field_has_zero_integrals() {
        let cube = cube2();
        let half = ScalarField::from_fns("half", cube, 1.0, |_| 0.5, |_, g| g.fill(0.0)).unwrap();
        let cfg = GammaConfig::default();
        let w = weight_by_name("weight-log1").unwrap();
        let r = evaluate(&half, &w, 0.25, &cfg).unwrap();
        assert_eq!(r.gamma1.value, 0.0);
        assert_eq!(r.gamma2.value, 0.0);
        assert_eq!(r.axis_bound, 0.0);
        assert!(r.gamma1.converged && r.gamma2.converged);
    }

    #[test]
    fn linear_field_band() {
        let f = field_on_cube("linear-x1", cube2()).unwrap();
        let (g1, axis) = gamma1_with_axis_bound(&f, 0.25, &GammaConfig::default()).unwrap();
        assert!((g1.value - 0.9).abs() < 1e-9, "{g1:?}");
        assert!((axis.value - 0.9).abs() < 1e-12);
    }

    #[test]
    fn gamma2_vanishes_when_band_covers_range() {
        let f = field_on_cube("linear-x1", cube2()).unwrap();
        let w = weight_by_name("weight-log1").unwrap();
        let r = gamma2(&f, &w, 0.9 + 1e-9, &GammaConfig::default()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn zero_field_axis_bound() {
        let f = field_by_name("constant-0@2").unwrap();
        assert_eq!(axis_reduction_bound(&f, 0.1, &GammaConfig::default()).unwrap(), 0.0);
    }

    #[test]
    fn threshold_checked() {
        let f = field_by_name("linear-x1@2").unwrap();
        assert!(gamma1(&f, 1.5, &GammaConfig::default()).is_err());
        assert!(gamma1(&f, 0.0, &GammaConfig::default()).is_err());
    }

    #[test]
    fn line_and_direct_routes_agree() {
        let f = field_by_name("trig-product@2").unwrap();
        let cfg = GammaConfig::default();
        let fast = gamma1(&f, 0.3, &cfg).unwrap();
        let slow = gamma1_direct(&f, 0.3, &QuadConfig::new(12, 1e-4, 9).unwrap()).unwrap();
        assert!((fast.value - slow.value).abs() < 5e-3 * fast.value, "{fast:?} {slow:?}");
    }

    #[test]
    fn bowl_band_is_a_disk() {
        // |x|^2 / 2 < 1/4 is the disk of radius 1/sqrt(2); int r dA = 2 pi r^3 / 3
        let f = field_on_cube("quadratic-bowl", cube2()).unwrap();
        let r: f64 = 0.5f64.sqrt();
        let exact = 2.0 * std::f64::consts::PI * r.powi(3) / 3.0;
        let g1 = gamma1(&f, 0.25, &GammaConfig::default()).unwrap();
        assert!((g1.value - exact).abs() < 1e-3 * exact, "{g1:?} vs {exact}");
        assert!((exact - 0.74048).abs() < 1e-5);
    }

    #[test]
    fn linear_gamma2_log_weight() {
        // 2 * 1.8 * int_{1/4}^{0.9} (1 - ln x) dx, antiderivative 2x - x ln x
        let prim = |x: f64| 2.0 * x - x * x.ln();
        let exact = 3.6 * (prim(0.9) - prim(0.25));
        let f = field_on_cube("linear-x1", cube2()).unwrap();
        let w = weight_by_name("weight-log1").unwrap();
        let g2 = gamma2(&f, &w, 0.25, &GammaConfig::default()).unwrap();
        assert!((g2.value - exact).abs() < 1e-6 * exact, "{g2:?} vs {exact}");
        assert!((exact - 3.7737).abs() < 1e-4);
    }

    #[test]
    fn axis_bound_dominates() {
        for name in ["trig-product@2", "cubic-saddle@2", "quadratic-bowl@3"] {
            let f = field_by_name(name).unwrap();
            let (g1, axis) = gamma1_with_axis_bound(&f, 0.1, &GammaConfig::default()).unwrap();
            assert!(g1.value <= axis.value + g1.error_estimate + axis.error_estimate, "{name}");
        }
    }
}
