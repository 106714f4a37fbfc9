//! One-dimensional estimates for a profile `psi` on `[0, d]`.
//!
//! Part one bounds the variation of `psi` inside the band `|psi| < a` by
//! splitting `[0, d]` on a grid of step `h = l / (2 c1)` into cells where the
//! slope stays below `l` (the set `M_h`) and the rest (`Lambda_h`). On
//! `Lambda_h` the slope exceeds `l / 2`, so `psi` is monotone on each of its
//! intervals and crosses the band at most once.
//!
//! Part two partitions `[a, 1]` by `kappa_1 < ... < kappa_{k+1}` and bounds the
//! weighted integral by `sum f(kappa_nu) (dpsi)_nu`, where `(dpsi)_nu` is the
//! variation of `psi` inside the window `[kappa_nu, kappa_{nu+1})`.

use serde::{Deserialize, Serialize};

use crate::domain::{c2_for_length, Profile, WeightFunction, Window};
use crate::error::{argument, Result};
use crate::quad::{
    exact_windowed_variation, exact_windowed_variation_on, graded_piece, window_pieces,
    MonotoneSegmentation, PieceConfig, PieceScratch,
};

pub const DEFAULT_SAMPLES_PER_CELL: usize = 32;

/// Relative slack for comparing computed quantities against bounds.
const SLACK: f64 = 1e-12;

fn le(x: f64, y: f64) -> bool {
    x <= y + SLACK * y.abs().max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridDecomposition {
    pub l: f64,
    pub h: f64,
    /// `q h < d <= (q + 1) h`.
    pub q: usize,
    /// Cells on which every sampled slope is at most `l`.
    pub m_cells: Vec<(f64, f64)>,
    /// Maximal intervals of the complement, `[alpha_r, beta_r]`.
    pub lambda_part: Vec<(f64, f64)>,
    pub r1: usize,
}

impl GridDecomposition {
    pub fn m_measure(&self) -> f64 {
        self.m_cells.iter().map(|(p, q)| q - p).sum()
    }

    pub fn lambda_measure(&self) -> f64 {
        self.lambda_part.iter().map(|(p, q)| q - p).sum()
    }
}

fn cell_points(lo: f64, hi: f64, samples: usize) -> impl Iterator<Item = f64> {
    let samples = samples.max(2);
    let step = (hi - lo) / (samples - 1) as f64;
    (0..samples).map(move |j| if j + 1 == samples { hi } else { lo + step * j as f64 })
}

/// Splits `[0, d]` into `M_h` cells and the `Lambda_h` intervals at slope
/// threshold `l`. Membership of a cell is decided on `samples_per_cell`
/// equally spaced points including both ends.
pub fn decompose(profile: &Profile, l: f64, samples_per_cell: usize) -> Result<GridDecomposition> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(argument(format!("slope threshold l must be positive, got {l}")));
    }
    let d = profile.length();
    let h = 0.5 * l / profile.hessian_bound();
    let cells = (d / h).ceil().max(1.0) as usize;
    let q = cells - 1;
    let mut m_cells = Vec::new();
    let mut lambda_part: Vec<(f64, f64)> = Vec::new();
    let mut open = false;
    for r in 0..cells {
        let lo = h * r as f64;
        let hi = if r == q { d } else { h * (r + 1) as f64 };
        let in_m = cell_points(lo, hi, samples_per_cell).all(|z| profile.deriv(z).abs() <= l);
        if in_m {
            m_cells.push((lo, hi));
            open = false;
        } else if open {
            lambda_part.last_mut().expect("open interval").1 = hi;
        } else {
            lambda_part.push((lo, hi));
            open = true;
        }
    }
    let r1 = lambda_part.len();
    Ok(GridDecomposition {
        l,
        h,
        q,
        m_cells,
        lambda_part,
        r1,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma22Report {
    pub l: f64,
    pub threshold: f64,
    /// `None` when `Lambda_h` is empty.
    pub min_slope: Option<f64>,
    pub witness: Option<f64>,
    pub samples: usize,
    pub passed: bool,
}

impl Lemma22Report {
    /// `min_slope - l / 2`, infinite for an empty `Lambda_h`.
    pub fn margin(&self) -> f64 {
        self.min_slope.map_or(f64::INFINITY, |m| m - self.threshold)
    }
}

/// Checks `|psi'| > l / 2` on about `samples` points spread over `Lambda_h`
/// in proportion to length, each interval's ends included.
pub fn check_lemma22(dec: &GridDecomposition, profile: &Profile, samples: usize) -> Lemma22Report {
    let threshold = 0.5 * dec.l;
    let total = dec.lambda_measure();
    let mut min_slope: Option<f64> = None;
    let mut witness = None;
    let mut used = 0;
    for &(lo, hi) in &dec.lambda_part {
        let share = if total > 0.0 { (hi - lo) / total } else { 0.0 };
        let count = ((samples as f64 * share).ceil() as usize).max(2);
        for z in cell_points(lo, hi, count) {
            let s = profile.deriv(z).abs();
            if min_slope.is_none_or(|m| s < m) {
                min_slope = Some(s);
                witness = Some(z);
            }
        }
        used += count;
    }
    Lemma22Report {
        l: dec.l,
        threshold,
        min_slope,
        witness,
        samples: used,
        passed: min_slope.is_none_or(|m| m > threshold),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bound1d {
    pub a: f64,
    pub l: f64,
    /// `d l`
    pub m_part: f64,
    /// `(2 d / h + 2) a = 4 d c1 a / l + 2 a`
    pub lambda_part: f64,
    pub bound: f64,
    pub c2: f64,
    /// `c2 sqrt(a)`, reported when `l = sqrt(a)`.
    pub certificate: Option<f64>,
}

/// Analytic bound on `int_0^d |windowed psi'| dz` over the band `[0, a)`.
pub fn bound_1d(profile: &Profile, a: f64, l: f64) -> Result<Bound1d> {
    if !(a > 0.0 && a < 0.5) {
        return Err(argument(format!("threshold a must lie in (0, 1/2), got {a}")));
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(argument(format!("slope threshold l must be positive, got {l}")));
    }
    let d = profile.length();
    let c1 = profile.hessian_bound();
    let m_part = d * l;
    let lambda_part = 4.0 * d * c1 * a / l + 2.0 * a;
    let c2 = c2_for_length(c1, d);
    let sqrt_a = a.sqrt();
    let certificate = ((l - sqrt_a).abs() <= 1e-15 * sqrt_a).then(|| c2 * sqrt_a);
    Ok(Bound1d {
        a,
        l,
        m_part,
        lambda_part,
        bound: m_part + lambda_part,
        c2,
        certificate,
    })
}

/// Measured and analytic quantities of the part-one chain for one `(a, l)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma21Chain {
    pub profile: String,
    pub a: f64,
    pub l: f64,
    pub measured: f64,
    pub m_measured: f64,
    pub lambda_measured: f64,
    pub r1: usize,
    /// Largest band variation over a single `Lambda_h` interval.
    pub worst_interval: f64,
    pub bound: Bound1d,
    pub lemma22: Lemma22Report,
    pub violations: Vec<String>,
}

impl Lemma21Chain {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// `d l + 2 r1 a`, the decomposition-level bound.
    pub fn decomposition_bound(&self) -> f64 {
        self.bound.m_part + 2.0 * self.r1 as f64 * self.a
    }

    /// Smallest relative gap among the asserted inequalities.
    pub fn worst_margin(&self) -> f64 {
        let mut m = (self.decomposition_bound() - self.measured) / self.decomposition_bound();
        m = m.min((self.bound.bound - self.decomposition_bound()) / self.bound.bound);
        if let Some(c) = self.bound.certificate {
            m = m.min((c - self.bound.bound) / c);
        }
        m
    }
}

/// Runs every inequality of part one and records violations by name.
pub fn lemma21_chain(
    profile: &Profile,
    seg: &MonotoneSegmentation,
    a: f64,
    l: f64,
    samples_per_cell: usize,
    lemma22_samples: usize,
) -> Result<Lemma21Chain> {
    let bound = bound_1d(profile, a, l)?;
    let dec = decompose(profile, l, samples_per_cell)?;
    let lemma22 = check_lemma22(&dec, profile, lemma22_samples);
    let band = Window::below(a)?;
    let measured = exact_windowed_variation(profile, band, seg);
    let m_measured: f64 = dec
        .m_cells
        .iter()
        .map(|&(p, q)| exact_windowed_variation_on(profile, band, seg, p, q))
        .fold(0.0, |s, v| s + v);
    let per_interval: Vec<f64> = dec
        .lambda_part
        .iter()
        .map(|&(p, q)| exact_windowed_variation_on(profile, band, seg, p, q))
        .collect();
    let lambda_measured = per_interval.iter().fold(0.0, |s, v| s + v);
    let worst_interval = per_interval.iter().copied().fold(0.0, f64::max);
    let d = profile.length();
    let r1 = dec.r1;

    let mut violations = Vec::new();
    let mut require = |ok: bool, what: &str| {
        if !ok {
            violations.push(what.to_string());
        }
    };
    require(lemma22.passed, "slope on Lambda_h above l/2");
    require(le(measured, m_measured + lambda_measured), "measured <= M part + Lambda part");
    require(le(m_measured, d * l), "M part <= d l");
    require(le(worst_interval, 2.0 * a), "each Lambda interval <= 2a");
    require(le(lambda_measured, 2.0 * r1 as f64 * a), "Lambda part <= 2 r1 a");
    require((r1 as f64) < d / dec.h + 1.0, "r1 < d/h + 1");
    let decomposition = d * l + 2.0 * r1 as f64 * a;
    require(le(measured, decomposition), "measured <= d l + 2 r1 a");
    require(le(decomposition, bound.bound), "d l + 2 r1 a <= analytic bound");
    if let Some(c) = bound.certificate {
        require(le(bound.bound, c), "analytic bound <= c2 sqrt(a)");
    }
    Ok(Lemma21Chain {
        profile: profile.name().to_string(),
        a,
        l,
        measured,
        m_measured,
        lambda_measured,
        r1,
        worst_interval,
        bound,
        lemma22,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaPartition {
    kappas: Vec<f64>,
    theta: f64,
}

impl KappaPartition {
    /// Validates `a = kappa_1 < ... < kappa_{k+1} = 1` with `0 < a < 1`.
    pub fn from_points(kappas: Vec<f64>) -> Result<Self> {
        if kappas.len() < 2 {
            return Err(argument("a partition needs at least two points"));
        }
        let a = kappas[0];
        if !(a > 0.0 && a < 1.0) {
            return Err(argument(format!("partition must start in (0, 1), got {a}")));
        }
        if *kappas.last().expect("nonempty") != 1.0 {
            return Err(argument("partition must end at 1"));
        }
        let mut theta: f64 = 0.0;
        for w in kappas.windows(2) {
            if !(w[1] > w[0]) {
                return Err(argument(format!("partition not increasing at {}", w[0])));
            }
            theta = theta.max(w[1] - w[0]);
        }
        Ok(Self { kappas, theta })
    }

    /// `k` equal steps on `[a, 1]`.
    pub fn uniform(a: f64, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(argument("partition needs k >= 1"));
        }
        let step = (1.0 - a) / k as f64;
        let pts = (0..=k)
            .map(|i| if i == k { 1.0 } else { a + step * i as f64 })
            .collect();
        Self::from_points(pts)
    }

    /// The coarsest uniform partition with diameter at most `theta`.
    pub fn with_diameter(a: f64, theta: f64) -> Result<Self> {
        if !(theta > 0.0) {
            return Err(argument(format!("diameter must be positive, got {theta}")));
        }
        let k = ((1.0 - a) / theta * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Self::uniform(a, k)
    }

    /// `kappa_nu = a^{1 - (nu - 1)/k}`, equal ratios.
    pub fn geometric(a: f64, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(argument("partition needs k >= 1"));
        }
        let pts = (0..=k)
            .map(|i| if i == k { 1.0 } else { a.powf(1.0 - i as f64 / k as f64) })
            .collect();
        Self::from_points(pts)
    }

    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    pub fn a(&self) -> f64 {
        self.kappas[0]
    }

    /// Number of windows.
    pub fn k(&self) -> usize {
        self.kappas.len() - 1
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn windows(&self) -> impl Iterator<Item = Window> + '_ {
        self.kappas
            .windows(2)
            .map(|w| Window::new(w[0], w[1]).expect("validated partition"))
    }
}

/// `(dpsi)_nu` for every window of the partition.
pub fn variation_partition(
    profile: &Profile,
    kp: &KappaPartition,
    seg: &MonotoneSegmentation,
) -> Vec<f64> {
    kp.windows()
        .map(|w| exact_windowed_variation(profile, w, seg))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartTwoReport {
    pub profile: String,
    pub weight: String,
    pub k: usize,
    pub gamma_profile: f64,
    pub upper: f64,
    pub deltas: Vec<f64>,
    /// `c2 sqrt(kappa_{r+1})` for each prefix.
    pub prefix_caps: Vec<f64>,
    pub prefix_sums: Vec<f64>,
    pub violations: Vec<String>,
}

impl PartTwoReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `int_0^d |psi'| f(|psi|) 1{a <= |psi| < 1} dz` by graded quadrature on the
/// exact band pieces.
pub fn gamma_profile(profile: &Profile, f: &WeightFunction, a: f64, seg: &MonotoneSegmentation) -> f64 {
    let cfg = PieceConfig {
        base_cells: 4,
        tol: 1e-11,
        max_doublings: 16,
    };
    let pieces = window_pieces(&|z| profile.value(z), seg, a, 1.0);
    let mut acc = [0.0];
    let mut scratch = PieceScratch::default();
    for (p, q) in pieces {
        graded_piece(
            &mut |z: f64, o: &mut [f64]| {
                let v = profile.value(z).abs().clamp(a, 1.0);
                o[0] = profile.deriv(z).abs() * f.eval(v);
            },
            p,
            q,
            &cfg,
            &mut acc,
            &mut scratch,
        );
    }
    acc[0]
}

/// The part-two chain: `gamma_profile <= sum f(kappa_nu) (dpsi)_nu` and the
/// prefix caps `sum_{nu <= r} (dpsi)_nu <= c2 sqrt(kappa_{r+1})` with
/// `c2 = d (1 + 4 c1) + 2`.
pub fn profile_gamma_upper(
    profile: &Profile,
    f: &WeightFunction,
    kp: &KappaPartition,
    seg: &MonotoneSegmentation,
) -> PartTwoReport {
    let deltas = variation_partition(profile, kp, seg);
    let kappas = kp.kappas();
    let upper: f64 = deltas
        .iter()
        .zip(kappas)
        .map(|(dv, &k)| f.eval(k) * dv)
        .sum();
    let gamma = gamma_profile(profile, f, kp.a(), seg);
    let c2 = c2_for_length(profile.hessian_bound(), profile.length());
    let mut prefix_sums = Vec::with_capacity(deltas.len());
    let mut prefix_caps = Vec::with_capacity(deltas.len());
    let mut running = 0.0;
    let mut violations = Vec::new();
    for (r, dv) in deltas.iter().enumerate() {
        running += dv;
        let cap = c2 * kappas[r + 1].sqrt();
        if !le(running, cap) {
            violations.push(format!("prefix {} exceeds c2 sqrt(kappa)", r + 1));
        }
        prefix_sums.push(running);
        prefix_caps.push(cap);
    }
    // quadrature tolerance on the left, exact arithmetic on the right
    if gamma > upper + 1e-9 * upper.max(1.0) {
        violations.push("gamma_profile exceeds sum f(kappa) dpsi".into());
    }
    PartTwoReport {
        profile: profile.name().to_string(),
        weight: f.name().to_string(),
        k: kp.k(),
        gamma_profile: gamma,
        upper,
        deltas,
        prefix_caps,
        prefix_sums,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{profile_by_name, weight_by_name, PROFILE_NAMES};
    use crate::quad::segment_monotone;
    use std::f64::consts::PI;

    fn unit_sine() -> Profile {
        Profile::sine(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn decompose_linear_and_constant() {
        let p = Profile::linear(1.0, 1.0).unwrap();
        let dec = decompose(&p, 0.5, 32).unwrap();
        assert!(dec.m_cells.is_empty());
        assert_eq!(dec.lambda_part, vec![(0.0, 1.0)]);
        assert_eq!(dec.r1, 1);

        let c = Profile::constant(0.3, 1.0).unwrap();
        let dec = decompose(&c, 0.5, 32).unwrap();
        assert!(dec.lambda_part.is_empty());
        assert!((dec.m_measure() - 1.0).abs() < 1e-12);
        assert!(decompose(&c, 0.0, 32).is_err());
    }

    #[test]
    fn decompose_sine() {
        let p = unit_sine();
        let dec = decompose(&p, 0.5, 32).unwrap();
        assert_eq!(dec.h, 0.25 / (4.0 * PI * PI));
        assert!((dec.h - 0.006333).abs() < 1e-6);
        assert!(dec.q as f64 * dec.h < 1.0 && 1.0 <= (dec.q + 1) as f64 * dec.h);
        assert_eq!(dec.r1, 3);
        // |2 pi cos 2 pi z| <= 0.5 within asin(0.5 / 2 pi) / (2 pi) of the peaks
        let half_gap = (0.5 / (2.0 * PI)).asin() / (2.0 * PI);
        for &(lo, hi) in &dec.m_cells {
            let near = [0.25, 0.75].iter().any(|c| lo >= c - half_gap && hi <= c + half_gap);
            assert!(near, "{lo} {hi}");
        }
        assert!(dec.m_measure() < 4.0 * half_gap);
        assert!(dec.m_measure() > 4.0 * half_gap - 4.0 * dec.h);
    }

    #[test]
    fn lemma22_cases() {
        let p = Profile::linear(1.0, 1.0).unwrap();
        let r = check_lemma22(&decompose(&p, 0.5, 32).unwrap(), &p, 1000);
        assert_eq!(r.min_slope, Some(1.0));
        assert!(r.passed && (r.margin() - 0.75).abs() < 1e-15);

        let s = unit_sine();
        let r = check_lemma22(&decompose(&s, 0.5, 32).unwrap(), &s, 10_000);
        assert!(r.passed && r.margin() > 0.0, "{r:?}");

        let c = Profile::constant(0.0, 1.0).unwrap();
        let r = check_lemma22(&decompose(&c, 0.5, 32).unwrap(), &c, 1000);
        assert!(r.passed && r.min_slope.is_none());
    }

    #[test]
    fn lemma22_detects_understated_c1() {
        // the true c1 of this sine is 4 pi^2; claiming 1 makes h far too large
        let p = Profile::from_fns("bad", 1.0, 1.0, |z| (2.0 * PI * z).sin(), |z| 2.0 * PI * (2.0 * PI * z).cos())
            .unwrap();
        let r = check_lemma22(&decompose(&p, 0.5, 32).unwrap(), &p, 10_000);
        assert!(!r.passed);
        assert!(r.witness.is_some());
    }

    #[test]
    fn bound_1d_examples() {
        let p = Profile::linear(1.0, 1.0).unwrap();
        let b = bound_1d(&p, 0.25, 0.5).unwrap();
        assert!((b.bound - 3.0).abs() < 1e-12);
        assert_eq!(b.certificate, Some(7.0 * 0.5));

        let s = unit_sine();
        let b = bound_1d(&s, 0.25, 0.5).unwrap();
        let expected = 0.5 + 4.0 * 4.0 * PI * PI * 2.0 * 0.25 + 0.5;
        assert!((b.bound - expected).abs() < 1e-12);
        assert!((b.bound - 79.96).abs() < 0.01);
        let seg = segment_monotone(&s, 256).unwrap();
        // four monotone branches, each crossing the band over a range of 0.25
        let measured = exact_windowed_variation(&s, Window::below(0.25).unwrap(), &seg);
        assert!((measured - 1.0).abs() < 1e-12);
        assert!(measured <= b.bound);

        assert!(bound_1d(&p, 0.25, 0.0).is_err());
        assert!(bound_1d(&p, 0.5, 0.5).is_err());
        let tiny = bound_1d(&p, 1e-12, 1e-6).unwrap();
        assert!(tiny.bound < 1e-5);
    }

    #[test]
    fn chain_holds_on_corpus() {
        for name in PROFILE_NAMES {
            let p = profile_by_name(name).unwrap();
            let seg = segment_monotone(&p, 256).unwrap();
            for k in 1..=6 {
                let l = 0.5f64.powi(k);
                let c = lemma21_chain(&p, &seg, l * l, l, 32, 10_000).unwrap();
                assert!(c.passed(), "{name} l={l}: {:?}", c.violations);
                assert!(c.bound.certificate.is_some());
            }
        }
    }

    #[test]
    fn kappa_partitions() {
        let u = KappaPartition::uniform(0.25, 3).unwrap();
        assert_eq!(u.kappas(), &[0.25, 0.5, 0.75, 1.0]);
        assert!((u.theta() - 0.25).abs() < 1e-15);
        let g = KappaPartition::geometric(0.25, 2).unwrap();
        assert_eq!(g.kappas(), &[0.25, 0.5, 1.0]);
        let t = KappaPartition::with_diameter(0.25, 0.25).unwrap();
        assert_eq!(t.k(), 3);
        assert!(KappaPartition::from_points(vec![0.25, 0.2, 1.0]).is_err());
        assert!(KappaPartition::from_points(vec![0.25, 0.9]).is_err());
        assert!(KappaPartition::from_points(vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn variation_partition_examples() {
        let kp = KappaPartition::from_points(vec![0.25, 0.5, 1.0]).unwrap();
        let p = Profile::linear(1.0, 1.0).unwrap();
        let seg = segment_monotone(&p, 64).unwrap();
        let v = variation_partition(&p, &kp, &seg);
        assert!((v[0] - 0.25).abs() < 1e-15 && (v[1] - 0.5).abs() < 1e-15);

        let z = Profile::constant(0.0, 1.0).unwrap();
        let seg = segment_monotone(&z, 64).unwrap();
        assert_eq!(variation_partition(&z, &kp, &seg), vec![0.0, 0.0]);

        let s = unit_sine();
        let seg = segment_monotone(&s, 256).unwrap();
        let v = variation_partition(&s, &kp, &seg);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 2.0).abs() < 1e-12, "{v:?}");
    }

    #[test]
    fn part_two_linear_fixture() {
        let p = Profile::linear(1.0, 1.0).unwrap();
        let f = weight_by_name("weight-log1").unwrap();
        let kp = KappaPartition::from_points(vec![0.25, 0.5, 1.0]).unwrap();
        let seg = segment_monotone(&p, 64).unwrap();
        let r = profile_gamma_upper(&p, &f, &kp, &seg);
        let prim = |t: f64| 2.0 * t - t * t.ln();
        assert!((r.gamma_profile - (prim(1.0) - prim(0.25))).abs() < 1e-9);
        assert!((r.gamma_profile - 1.15343).abs() < 1e-5);
        assert!((r.upper - 1.44315).abs() < 1e-5);
        assert!(r.passed());

        let z = Profile::constant(0.0, 1.0).unwrap();
        let seg = segment_monotone(&z, 64).unwrap();
        let r = profile_gamma_upper(&z, &f, &kp, &seg);
        assert_eq!((r.gamma_profile, r.upper), (0.0, 0.0));
    }

    #[test]
    fn refining_partition_tightens_upper() {
        let p = Profile::linear(1.0, 1.0).unwrap();
        let f = weight_by_name("weight-log1").unwrap();
        let seg = segment_monotone(&p, 64).unwrap();
        let mut last = f64::INFINITY;
        for k in [2, 4, 8, 16, 32] {
            let r = profile_gamma_upper(&p, &f, &KappaPartition::uniform(0.25, k).unwrap(), &seg);
            assert!(r.upper < last && r.upper >= r.gamma_profile);
            last = r.upper;
        }
    }
}
