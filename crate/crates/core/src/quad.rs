//! Riemann sums on uniform grids with grid doubling, monotone segmentation
//! of one-dimensional functions, and the exact windowed-variation evaluator.
//!
//! All cell sums are reduced in a fixed block/tree order so that results are
//! bit-identical no matter how many worker threads rayon uses.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{CubeDomain, Profile, Window};
use crate::error::{argument, Error, Result};

const BLOCK: usize = 1024;
/// Grids are never refined beyond this many cells.
pub const MAX_CELLS: usize = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub base_cells: usize,
    pub tol: f64,
    pub max_doublings: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            base_cells: 8,
            tol: 1e-3,
            max_doublings: 10,
        }
    }
}

impl QuadConfig {
    pub fn new(base_cells: usize, tol: f64, max_doublings: u32) -> Result<Self> {
        let cfg = Self {
            base_cells,
            tol,
            max_doublings,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.base_cells < 2 {
            return Err(argument("base cell count must be at least 2"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(argument("tolerance must be positive"));
        }
        if self.max_doublings == 0 {
            return Err(argument("at least one doubling is needed for an error estimate"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// `|I_2N - I_N|` for the last two grids.
    pub error_estimate: f64,
    /// Total number of cells in the finest grid evaluated.
    pub cells_used: usize,
    pub converged: bool,
}

impl QuadratureResult {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            cells_used: 1,
            converged: true,
        }
    }

    pub fn relative_error(&self) -> f64 {
        if self.error_estimate == 0.0 {
            0.0
        } else {
            self.error_estimate / self.value.abs()
        }
    }
}

/// Pairwise sum in a fixed tree order.
pub fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        len => {
            let mid = len / 2;
            tree_sum(&values[..mid]) + tree_sum(&values[mid..])
        }
    }
}

/// Plain composite midpoint rule with `cells` cells, sequential.
pub fn midpoint_rule<G: Fn(f64) -> f64>(g: &G, lo: f64, hi: f64, cells: usize) -> f64 {
    let h = (hi - lo) / cells as f64;
    let mut acc = 0.0;
    for i in 0..cells {
        acc += g(lo + (i as f64 + 0.5) * h);
    }
    acc * h
}

/// Sum of `g` over the midpoints of an `cells^dim` grid on the cube
/// `lower + [0, side]^dim`, times the cell volume.
pub(crate) fn midpoint_grid_sum<G>(g: &G, lower: &[f64], side: f64, cells: usize) -> Result<f64>
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    let dim = lower.len();
    let total = cells.pow(dim as u32);
    let h = side / cells as f64;
    let blocks = total.div_ceil(BLOCK);
    let partial: Vec<std::result::Result<f64, (Vec<f64>, f64)>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut x = vec![0.0; dim];
            let mut acc = 0.0;
            for idx in (b * BLOCK)..((b + 1) * BLOCK).min(total) {
                let mut rem = idx;
                for (j, xj) in x.iter_mut().enumerate() {
                    *xj = lower[j] + ((rem % cells) as f64 + 0.5) * h;
                    rem /= cells;
                }
                let v = g(&x);
                if !v.is_finite() {
                    return Err((x, v));
                }
                acc += v;
            }
            Ok(acc)
        })
        .collect();
    let mut sums = Vec::with_capacity(blocks);
    for p in partial {
        match p {
            Ok(s) => sums.push(s),
            Err((point, value)) => return Err(Error::Numeric { point, value }),
        }
    }
    Ok(tree_sum(&sums) * h.powi(dim as i32))
}

fn doubling<F>(cfg: &QuadConfig, dim: usize, mut level: F) -> Result<QuadratureResult>
where
    F: FnMut(usize) -> Result<f64>,
{
    cfg.validate()?;
    let mut cells = cfg.base_cells;
    let mut prev = level(cells)?;
    let mut out = QuadratureResult {
        value: prev,
        error_estimate: f64::INFINITY,
        cells_used: cells.pow(dim as u32),
        converged: false,
    };
    for _ in 0..cfg.max_doublings {
        let next_cells = cells * 2;
        match next_cells.checked_pow(dim as u32) {
            Some(total) if total <= MAX_CELLS => {}
            _ => break,
        }
        cells = next_cells;
        let value = level(cells)?;
        let err = (value - prev).abs();
        out = QuadratureResult {
            value,
            error_estimate: err,
            cells_used: cells.pow(dim as u32),
            converged: err <= cfg.tol * value.abs().max(1.0),
        };
        if out.converged {
            break;
        }
        prev = value;
    }
    Ok(out)
}

/// Midpoint rule on uniform grids `N, 2N, 4N, ...` over the cube until
/// `|I_2N - I_N| <= tol * max(1, |I_2N|)` or the doubling budget runs out.
///
/// For integrands with jumps on hyperplanes the difference of two grids can
/// vanish by accident when the jump sits at a fixed dyadic offset of the
/// grid; pick `base_cells` so that the jumps are not grid-aligned.
pub fn integrate_cube<G>(g: G, cube: &CubeDomain, cfg: &QuadConfig) -> Result<QuadratureResult>
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    let lower: Vec<f64> = (0..cube.dim()).map(|j| cube.lower(j)).collect();
    let side = cube.side();
    doubling(cfg, cube.dim(), |cells| midpoint_grid_sum(&g, &lower, side, cells))
}

/// One-dimensional version of [`integrate_cube`] on `[lo, hi]`.
pub fn integrate_range<G>(g: G, lo: f64, hi: f64, cfg: &QuadConfig) -> Result<QuadratureResult>
where
    G: Fn(f64) -> f64 + Sync,
{
    if !(hi > lo) {
        return Err(argument(format!("empty interval [{lo}, {hi}]")));
    }
    let wrapped = |x: &[f64]| g(x[0]);
    doubling(cfg, 1, |cells| midpoint_grid_sum(&wrapped, &[lo], hi - lo, cells))
}

/// Integral of `g` over `[0, d]`.
pub fn integrate_interval<G>(g: G, d: f64, cfg: &QuadConfig) -> Result<QuadratureResult>
where
    G: Fn(f64) -> f64 + Sync,
{
    integrate_range(g, 0.0, d, cfg)
}

/// Settings for the smooth-piece integrator used on band-resolved lines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceConfig {
    pub base_cells: usize,
    pub tol: f64,
    pub max_doublings: u32,
}

impl Default for PieceConfig {
    fn default() -> Self {
        Self {
            base_cells: 4,
            tol: 1e-7,
            max_doublings: 12,
        }
    }
}

/// Integrates a vector-valued `g` over `[lo, hi]`, where `g` is smooth on
/// the closed interval but may be steep next to either end.
///
/// Each half is mapped by `t = end +/- (L/2) s^2`, which clusters midpoints
/// towards the ends; the midpoint sequence is Richardson-extrapolated and
/// stops once successive extrapolants agree to `tol` in every component.
/// Returns the values added into `acc` and whether convergence was reached.
pub(crate) fn graded_piece<G>(
    g: &mut G,
    lo: f64,
    hi: f64,
    cfg: &PieceConfig,
    acc: &mut [f64],
    scratch: &mut PieceScratch,
) -> bool
where
    G: FnMut(f64, &mut [f64]),
{
    let dim = acc.len();
    let len = hi - lo;
    if !(len > 0.0) {
        return true;
    }
    scratch.reset(dim);
    let PieceScratch {
        sample,
        mid_prev,
        mid_cur,
        rich_prev,
        rich_cur,
    } = scratch;
    let mut level = |cells: usize, out: &mut Vec<f64>| {
        out.iter_mut().for_each(|v| *v = 0.0);
        let ds = 1.0 / cells as f64;
        for i in 0..cells {
            let s = (i as f64 + 0.5) * ds;
            let off = 0.5 * len * s * s;
            let jac = len * s * ds;
            g(lo + off, sample);
            for (o, v) in out.iter_mut().zip(sample.iter()) {
                *o += v * jac;
            }
            g(hi - off, sample);
            for (o, v) in out.iter_mut().zip(sample.iter()) {
                *o += v * jac;
            }
        }
    };
    let mut cells = cfg.base_cells.max(1);
    level(cells, mid_prev);
    let mut have_rich = false;
    let mut converged = false;
    for _ in 0..cfg.max_doublings {
        cells *= 2;
        level(cells, mid_cur);
        for k in 0..dim {
            rich_cur[k] = (4.0 * mid_cur[k] - mid_prev[k]) / 3.0;
        }
        if have_rich {
            converged = (0..dim).all(|k| {
                let err = (rich_cur[k] - rich_prev[k]).abs();
                err <= cfg.tol * rich_cur[k].abs() + 1e-300
            });
        }
        std::mem::swap(mid_prev, mid_cur);
        std::mem::swap(rich_prev, rich_cur);
        have_rich = true;
        if converged {
            break;
        }
    }
    let best = if have_rich { &*rich_prev } else { &*mid_prev };
    for (a, v) in acc.iter_mut().zip(best.iter()) {
        *a += v;
    }
    converged
}

#[derive(Default)]
pub(crate) struct PieceScratch {
    sample: Vec<f64>,
    mid_prev: Vec<f64>,
    mid_cur: Vec<f64>,
    rich_prev: Vec<f64>,
    rich_cur: Vec<f64>,
}

impl PieceScratch {
    fn reset(&mut self, dim: usize) {
        for v in [
            &mut self.sample,
            &mut self.mid_prev,
            &mut self.mid_cur,
            &mut self.rich_prev,
            &mut self.rich_cur,
        ] {
            v.clear();
            v.resize(dim, 0.0);
        }
    }
}

/// Breakpoints splitting an interval into pieces on which the function is
/// monotone. `flat[k]` marks segment `k` (between breakpoints `k` and
/// `k + 1`) as having an identically zero derivative on the scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotoneSegmentation {
    pub breakpoints: Vec<f64>,
    pub flat: Vec<bool>,
}

impl MonotoneSegmentation {
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, bool)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.flat)
            .map(|(w, &flat)| (w[0], w[1], flat))
    }

    pub fn len(&self) -> usize {
        self.flat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }
}

const ROOT_TOL: f64 = 1e-12;

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Brackets sign changes of `deriv` on a uniform scan of `[lo, hi]` and
/// bisects each to `1e-12`.
pub fn segment_by_derivative<D>(deriv: D, lo: f64, hi: f64, scan_points: usize) -> MonotoneSegmentation
where
    D: Fn(f64) -> f64,
{
    let step = (hi - lo) / scan_points as f64;
    let at = |i: usize| if i == scan_points { hi } else { lo + step * i as f64 };
    let mut breakpoints = vec![lo];
    let mut flat = Vec::new();
    let mut last: Option<(f64, i8)> = None;
    let mut seg_nonzero = false;
    for i in 0..=scan_points {
        let t = at(i);
        let s = sign(deriv(t));
        if s == 0 {
            continue;
        }
        match last {
            Some((t_prev, s_prev)) if s_prev != s => {
                let root = bisect_sign(&deriv, t_prev, t, s_prev);
                if root > *breakpoints.last().unwrap() && root < hi {
                    breakpoints.push(root);
                    flat.push(false);
                }
            }
            _ => {}
        }
        seg_nonzero = true;
        last = Some((t, s));
    }
    breakpoints.push(hi);
    flat.push(!seg_nonzero);
    MonotoneSegmentation { breakpoints, flat }
}

fn bisect_sign<D: Fn(f64) -> f64>(deriv: &D, mut a: f64, mut b: f64, sign_a: i8) -> f64 {
    for _ in 0..200 {
        if b - a <= ROOT_TOL {
            break;
        }
        let m = 0.5 * (a + b);
        let s = sign(deriv(m));
        if s == 0 {
            return m;
        }
        if s == sign_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

pub fn segment_monotone(profile: &Profile, scan_points: usize) -> Result<MonotoneSegmentation> {
    if scan_points < 16 {
        return Err(argument("segmentation needs at least 16 scan points"));
    }
    Ok(segment_by_derivative(
        |z| profile.deriv(z),
        0.0,
        profile.length(),
        scan_points,
    ))
}

/// Lebesgue measure of `[lo, hi] ∩ ([-beta, -alpha] ∪ [alpha, beta])`.
pub fn range_window_measure(lo: f64, hi: f64, alpha: f64, beta: f64) -> f64 {
    let overlap = |p: f64, q: f64| (hi.min(q) - lo.max(p)).max(0.0);
    if alpha == 0.0 {
        overlap(-beta, beta)
    } else {
        overlap(alpha, beta) + overlap(-beta, -alpha)
    }
}

/// `int_0^d |windowed dpsi/dz| dz`, computed exactly from the value ranges
/// of the monotone segments.
pub fn exact_windowed_variation(profile: &Profile, w: Window, seg: &MonotoneSegmentation) -> f64 {
    exact_windowed_variation_on(profile, w, seg, 0.0, profile.length())
}

/// As [`exact_windowed_variation`] restricted to `[lo, hi]`.
pub fn exact_windowed_variation_on(
    profile: &Profile,
    w: Window,
    seg: &MonotoneSegmentation,
    lo: f64,
    hi: f64,
) -> f64 {
    let mut total = 0.0;
    for (t0, t1, _) in seg.segments() {
        let (a, b) = (t0.max(lo), t1.min(hi));
        if b <= a {
            continue;
        }
        let (v0, v1) = (profile.value(a), profile.value(b));
        total += range_window_measure(v0.min(v1), v0.max(v1), w.lo(), w.hi());
    }
    total
}

/// Solves `value(t) = target` on a monotone piece by bisection.
fn invert_monotone<V: Fn(f64) -> f64>(value: &V, mut a: f64, mut b: f64, target: f64, increasing: bool) -> f64 {
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let below = value(m) < target;
        if below == increasing {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Sub-intervals of the segmentation on which `|value|` lies in
/// `[alpha, beta]` (`beta` may be infinite). Endpoints are located by
/// bisection; closed and half-open windows differ only on a null set.
pub fn window_pieces<V>(value: &V, seg: &MonotoneSegmentation, alpha: f64, beta: f64) -> Vec<(f64, f64)>
where
    V: Fn(f64) -> f64,
{
    let mut out = Vec::new();
    window_pieces_into(value, seg, alpha, beta, &mut out);
    out
}

pub(crate) fn window_pieces_into<V>(
    value: &V,
    seg: &MonotoneSegmentation,
    alpha: f64,
    beta: f64,
    out: &mut Vec<(f64, f64)>,
) where
    V: Fn(f64) -> f64,
{
    out.clear();
    for (t0, t1, flat) in seg.segments() {
        let (v0, v1) = (value(t0), value(t1));
        if flat || v0 == v1 {
            let v = v0.abs();
            if v >= alpha && v < beta {
                out.push((t0, t1));
            }
            continue;
        }
        let increasing = v1 > v0;
        let (vmin, vmax) = if increasing { (v0, v1) } else { (v1, v0) };
        let bands: [(f64, f64); 2] = if alpha == 0.0 {
            [(-beta, beta), (f64::NAN, f64::NAN)]
        } else {
            [(-beta, -alpha), (alpha, beta)]
        };
        let mut found: [(f64, f64); 2] = [(f64::NAN, f64::NAN); 2];
        for (slot, &(p, q)) in found.iter_mut().zip(&bands) {
            if p.is_nan() {
                continue;
            }
            let lo_v = p.max(vmin);
            let hi_v = q.min(vmax);
            if !(hi_v > lo_v) {
                continue;
            }
            let t_of = |target: f64| {
                if target == v0 {
                    t0
                } else if target == v1 {
                    t1
                } else {
                    invert_monotone(value, t0, t1, target, increasing)
                }
            };
            let (ta, tb) = (t_of(lo_v), t_of(hi_v));
            *slot = (ta.min(tb), ta.max(tb));
        }
        if !found[0].0.is_nan() && !found[1].0.is_nan() && found[1].0 < found[0].0 {
            found.swap(0, 1);
        }
        out.extend(found.into_iter().filter(|p| !p.0.is_nan() && p.1 > p.0));
    }
}
