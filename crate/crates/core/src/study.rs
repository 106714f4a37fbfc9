//! Constant ledgers, threshold sweeps over the corpus and the suites behind
//! each CLI subcommand. Every suite returns plain rows that serialize to CSV
//! with a fixed header.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{
    c2_for_length, field_by_name, profile_by_name, validate_field, validate_profile,
    validate_weight, weight_by_name, ConstantLedger, Profile, ScalarField, WeightFunction, Window,
    FIELD_NAMES, PROFILE_NAMES, WEIGHT_NAMES,
};
use crate::error::{argument, Result};
use crate::fit::{power_law, PowerFit};
use crate::gamma::{gamma1_with_axis_bound, gamma2_many, GammaConfig};
use crate::nestedlp::ledger_c3;
use crate::onedim::{lemma21_chain, profile_gamma_upper, KappaPartition, PartTwoReport};
use crate::quad::{exact_windowed_variation, integrate_interval, segment_monotone, QuadConfig};
use crate::truncate::windowed_derivative;

/// Constants for `n` dimensions on a cube of half-side `d`. The 1-D
/// constant is taken on lines of length `2d`, the length of a cube line:
///
/// * `c2 = 2d (1 + 4 c1) + 2`
/// * `c3 = c2 (B_f + I_f / 2)`
/// * `C1 = n (2d)^(n-1) c2`, `C2 = n (2d)^(n-1) c3`
pub fn constants_ledger(n: usize, d: f64, c1: f64, f: &WeightFunction) -> Result<ConstantLedger> {
    if n == 0 {
        return Err(argument("dimension must be at least 1"));
    }
    if !(d > 0.0 && c1 > 0.0) {
        return Err(argument(format!("need d > 0 and c1 > 0, got d = {d}, c1 = {c1}")));
    }
    let line = 2.0 * d;
    let c2 = c2_for_length(c1, line);
    let c3 = ledger_c3(f, c2);
    let faces = n as f64 * line.powi(n as i32 - 1);
    Ok(ConstantLedger {
        n,
        half_side: d,
        line_length: line,
        c1,
        c2,
        c3,
        big_c1: faces * c2,
        big_c2: faces * c3,
        weight: f.name().to_string(),
        provenance: vec![
            "c2 = L (1 + 4 c1) + 2 with L = 2d".into(),
            "c3 = c2 (B_f + I_f / 2)".into(),
            "C1 = n (2d)^(n-1) c2".into(),
            "C2 = n (2d)^(n-1) c3".into(),
        ],
    })
}

pub fn field_ledger(field: &ScalarField, f: &WeightFunction) -> Result<ConstantLedger> {
    let cube = field.domain();
    constants_ledger(cube.dim(), cube.half_side(), field.hessian_bound(), f)
}

/// `steps` geometrically spaced thresholds from `a_max` down to `a_min`.
pub fn geometric_grid(a_max: f64, a_min: f64, steps: usize) -> Result<Vec<f64>> {
    if !(a_min > 0.0 && a_min <= a_max && a_max < 0.5) {
        return Err(argument(format!(
            "threshold grid must satisfy 0 < a_min <= a_max < 1/2, got [{a_min}, {a_max}]"
        )));
    }
    if steps == 0 || (steps == 1 && a_min != a_max) {
        return Err(argument("threshold grid needs at least two steps"));
    }
    if steps == 1 {
        return Ok(vec![a_max]);
    }
    let ratio = (a_min / a_max).powf(1.0 / (steps - 1) as f64);
    Ok((0..steps)
        .map(|i| if i + 1 == steps { a_min } else { a_max * ratio.powi(i as i32) })
        .collect())
}

/// `2^-2, ..., 2^-12`.
pub fn default_a_grid() -> Vec<f64> {
    (2..=12).map(|k| 0.5f64.powi(k)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub name: String,
    pub f: String,
    pub a: f64,
    pub gamma1: f64,
    pub gamma1_err: f64,
    pub gamma2: f64,
    pub gamma2_err: f64,
    pub axis_bound: f64,
    #[serde(rename = "C1_sqrt_a")]
    pub c1_sqrt_a: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    pub pass_g1: bool,
    pub pass_g2: bool,
    #[serde(skip)]
    pub axis_bound_err: f64,
    #[serde(skip)]
    pub converged: bool,
}

impl SweepRow {
    pub fn passed(&self) -> bool {
        self.pass_g1 && self.pass_g2
    }

    /// `Gamma1 <= axis bound` up to the combined error estimates.
    pub fn axis_inequality_holds(&self) -> bool {
        self.gamma1 <= self.axis_bound + self.gamma1_err + self.axis_bound_err + 1e-12
    }

    /// Largest relative error estimate of the two integrals.
    pub fn relative_error(&self) -> f64 {
        let rel = |v: f64, e: f64| if v == 0.0 { if e == 0.0 { 0.0 } else { f64::INFINITY } } else { e / v.abs() };
        rel(self.gamma1, self.gamma1_err).max(rel(self.gamma2, self.gamma2_err))
    }

    /// Smallest relative slack of the two bounds.
    pub fn margin(&self) -> f64 {
        let m1 = (self.c1_sqrt_a - self.gamma1 - self.gamma1_err) / self.c1_sqrt_a;
        let m2 = (self.c2 - self.gamma2 - self.gamma2_err) / self.c2;
        m1.min(m2)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub field: String,
    pub rows: Vec<SweepRow>,
    /// Fit of `log Gamma1` against `log a`; `None` when fewer than two rows
    /// have `Gamma1` above ten times its error estimate.
    pub fit: Option<PowerFit>,
    /// `max Gamma1 / sqrt(a)` over the grid.
    pub c1_star: f64,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(SweepRow::passed)
    }

    /// `Gamma2` grows (weakly) as `a` decreases, per weight, up to the error
    /// estimates.
    pub fn gamma2_monotone(&self) -> bool {
        let mut by_weight: Vec<(&str, Vec<&SweepRow>)> = Vec::new();
        for r in &self.rows {
            match by_weight.iter_mut().find(|(w, _)| *w == r.f) {
                Some((_, v)) => v.push(r),
                None => by_weight.push((&r.f, vec![r])),
            }
        }
        by_weight.iter().all(|(_, rows)| {
            let mut rows = rows.clone();
            rows.sort_by(|x, y| y.a.total_cmp(&x.a));
            rows.windows(2).all(|w| {
                w[1].gamma2 >= w[0].gamma2 - w[0].gamma2_err - w[1].gamma2_err - 1e-12
            })
        })
    }
}

/// `Gamma1`, `Gamma2` and the bounds for one field at each threshold, one row
/// per (threshold, weight).
pub fn scaling_sweep(
    field: &ScalarField,
    weights: &[WeightFunction],
    a_grid: &[f64],
    cfg: &GammaConfig,
) -> Result<SweepReport> {
    if let Some(a) = a_grid.iter().find(|a| !(**a > 0.0 && **a < 0.5)) {
        return Err(argument(format!("thresholds must lie in (0, 1/2), got {a}")));
    }
    sweep(field, weights, a_grid, cfg)
}

/// Rows for a single threshold `a` in `(0, 1)`. The ledger constants stay
/// valid above `1/2`, so the pass flags keep their meaning.
pub fn gamma_rows(
    field: &ScalarField,
    weights: &[WeightFunction],
    a: f64,
    cfg: &GammaConfig,
) -> Result<Vec<SweepRow>> {
    crate::truncate::check_threshold(a)?;
    Ok(sweep(field, weights, &[a], cfg)?.rows)
}

fn sweep(
    field: &ScalarField,
    weights: &[WeightFunction],
    a_grid: &[f64],
    cfg: &GammaConfig,
) -> Result<SweepReport> {
    let ledgers = weights
        .iter()
        .map(|f| field_ledger(field, f))
        .collect::<Result<Vec<_>>>()?;
    let per_a = a_grid
        .par_iter()
        .map(|&a| {
            let (g1, axis) = gamma1_with_axis_bound(field, a, cfg)?;
            let g2 = gamma2_many(field, weights, a, cfg)?;
            Ok((a, g1, axis, g2))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(a_grid.len() * weights.len());
    let mut fit_x = Vec::new();
    let mut fit_y = Vec::new();
    let mut c1_star: f64 = 0.0;
    for (a, g1, axis, g2) in per_a {
        c1_star = c1_star.max(g1.value / a.sqrt());
        if g1.converged && g1.value > 10.0 * g1.error_estimate && g1.value > 0.0 {
            fit_x.push(a);
            fit_y.push(g1.value);
        }
        for ((f, ledger), g2) in weights.iter().zip(&ledgers).zip(g2) {
            let c1_sqrt_a = ledger.big_c1 * a.sqrt();
            let big_c2 = ledger.big_c2;
            rows.push(SweepRow {
                name: field.name().to_string(),
                f: f.name().to_string(),
                a,
                gamma1: g1.value,
                gamma1_err: g1.error_estimate,
                gamma2: g2.value,
                gamma2_err: g2.error_estimate,
                axis_bound: axis.value,
                axis_bound_err: axis.error_estimate,
                c1_sqrt_a,
                c2: big_c2,
                pass_g1: g1.value + g1.error_estimate <= c1_sqrt_a,
                pass_g2: g2.value + g2.error_estimate <= big_c2,
                converged: g1.converged && g2.converged,
            });
        }
    }
    Ok(SweepReport {
        field: field.name().to_string(),
        rows,
        fit: power_law(&fit_x, &fit_y),
        c1_star,
    })
}

pub fn corpus_fields() -> Result<Vec<ScalarField>> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for name in FIELD_NAMES {
            out.push(field_by_name(&format!("{name}@{n}"))?);
        }
    }
    Ok(out)
}

pub fn corpus_weights() -> Result<Vec<WeightFunction>> {
    WEIGHT_NAMES.iter().map(|n| weight_by_name(n)).collect()
}

pub fn corpus_profiles() -> Result<Vec<Profile>> {
    PROFILE_NAMES.iter().map(|n| profile_by_name(n)).collect()
}

/// The sweep for every corpus field against every corpus weight.
pub fn corpus_sweep(a_grid: &[f64], cfg: &GammaConfig) -> Result<Vec<SweepReport>> {
    let weights = corpus_weights()?;
    corpus_fields()?
        .iter()
        .map(|field| scaling_sweep(field, &weights, a_grid, cfg))
        .collect()
}

/// Writes serializable rows as CSV with a header row. An empty slice still
/// gets no output; callers that need a header for no rows write it
/// themselves.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Slope thresholds `2^-1, ..., 2^-6`.
pub fn default_l_grid() -> Vec<f64> {
    (1..=6).map(|k| 0.5f64.powi(k)).collect()
}

pub const SEGMENT_SCAN: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma21Row {
    pub profile: String,
    pub a: f64,
    pub l: f64,
    pub h: f64,
    pub r1: usize,
    pub measured: f64,
    pub m_part: f64,
    pub lambda_part: f64,
    pub decomposition_bound: f64,
    pub bound: f64,
    pub certificate: Option<f64>,
    pub lemma22_margin: f64,
    pub pass: bool,
}

impl Lemma21Row {
    /// Smallest relative slack along the chain of bounds.
    pub fn margin(&self) -> f64 {
        let mut m = (self.decomposition_bound - self.measured) / self.decomposition_bound;
        m = m.min((self.bound - self.decomposition_bound) / self.bound);
        if let Some(c) = self.certificate {
            m = m.min((c - self.bound) / c);
        }
        m
    }
}

/// The part-one chain for each profile and slope threshold, at `a = l^2`
/// (where the certificate applies) or at a fixed `a` if given.
pub fn lemma21_suite(profiles: &[Profile], l_grid: &[f64], a: Option<f64>) -> Result<Vec<Lemma21Row>> {
    let jobs: Vec<(usize, f64)> = (0..profiles.len())
        .flat_map(|p| l_grid.iter().map(move |&l| (p, l)))
        .collect();
    let segs = profiles
        .iter()
        .map(|p| segment_monotone(p, SEGMENT_SCAN))
        .collect::<Result<Vec<_>>>()?;
    jobs.par_iter()
        .map(|&(p, l)| {
            let profile = &profiles[p];
            let a = a.unwrap_or(l * l);
            let c = lemma21_chain(profile, &segs[p], a, l, crate::onedim::DEFAULT_SAMPLES_PER_CELL, 10_000)?;
            let dec_h = 0.5 * l / profile.hessian_bound();
            Ok(Lemma21Row {
                profile: c.profile.clone(),
                a,
                l,
                h: dec_h,
                r1: c.r1,
                measured: c.measured,
                m_part: c.m_measured,
                lambda_part: c.lambda_measured,
                decomposition_bound: c.decomposition_bound(),
                bound: c.bound.bound,
                certificate: c.bound.certificate,
                lemma22_margin: c.lemma22.margin(),
                pass: c.passed(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma22Row {
    pub profile: String,
    pub l: f64,
    pub h: f64,
    pub r1: usize,
    pub samples: usize,
    pub min_slope: Option<f64>,
    pub threshold: f64,
    pub witness: Option<f64>,
    pub pass: bool,
}

pub fn lemma22_suite(profiles: &[Profile], l_grid: &[f64], samples: usize) -> Result<Vec<Lemma22Row>> {
    let jobs: Vec<(usize, f64)> = (0..profiles.len())
        .flat_map(|p| l_grid.iter().map(move |&l| (p, l)))
        .collect();
    jobs.par_iter()
        .map(|&(p, l)| {
            let profile = &profiles[p];
            let dec = crate::onedim::decompose(profile, l, crate::onedim::DEFAULT_SAMPLES_PER_CELL)?;
            let r = crate::onedim::check_lemma22(&dec, profile, samples);
            Ok(Lemma22Row {
                profile: profile.name().to_string(),
                l,
                h: dec.h,
                r1: dec.r1,
                samples: r.samples,
                min_slope: r.min_slope,
                threshold: r.threshold,
                witness: r.witness,
                pass: r.passed,
            })
        })
        .collect()
}

/// Partitions used by the part-two suite for threshold `a`.
pub fn corpus_partitions(a: f64) -> Result<Vec<KappaPartition>> {
    Ok(vec![
        KappaPartition::uniform(a, 1)?,
        KappaPartition::uniform(a, 4)?,
        KappaPartition::uniform(a, 32)?,
        KappaPartition::geometric(a, 8)?,
        KappaPartition::with_diameter(a, 1e-3)?,
    ])
}

/// The part-two chain over every corpus profile, weight, threshold in
/// `a_grid` and partition from [`corpus_partitions`].
pub fn part_two_suite(a_grid: &[f64]) -> Result<Vec<PartTwoReport>> {
    let profiles = corpus_profiles()?;
    let weights = corpus_weights()?;
    let mut out = Vec::new();
    for p in &profiles {
        let seg = segment_monotone(p, SEGMENT_SCAN)?;
        for f in &weights {
            for &a in a_grid {
                for kp in corpus_partitions(a)? {
                    out.push(profile_gamma_upper(p, f, &kp, &seg));
                }
            }
        }
    }
    Ok(out)
}

/// Windows used to compare interval quadrature with exact variation.
pub fn corpus_windows() -> Vec<Window> {
    [(0.0, 0.25), (0.0, 0.1), (0.0, 0.015625), (0.1, 0.5), (0.25, 0.5), (0.5, 1.0), (0.3, 0.9)]
        .iter()
        .map(|&(lo, hi)| Window::new(lo, hi).expect("valid window"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowOracleRow {
    pub profile: String,
    pub lo: f64,
    pub hi: f64,
    pub exact: f64,
    pub quadrature: f64,
    pub quadrature_err: f64,
    pub difference: f64,
    pub pass: bool,
}

/// Midpoint quadrature of `|windowed psi'|` against the exact segment
/// formula, with the given quadrature configuration and agreement tolerance.
pub fn window_oracle_suite(cfg: &QuadConfig, agree: f64) -> Result<Vec<WindowOracleRow>> {
    let mut out = Vec::new();
    for p in corpus_profiles()? {
        let seg = segment_monotone(&p, SEGMENT_SCAN)?;
        for w in corpus_windows() {
            let exact = exact_windowed_variation(&p, w, &seg);
            let q = integrate_interval(
                |z| windowed_derivative(&p, z, w).map(f64::abs).unwrap_or(f64::NAN),
                p.length(),
                cfg,
            )?;
            let difference = (q.value - exact).abs();
            out.push(WindowOracleRow {
                profile: p.name().to_string(),
                lo: w.lo(),
                hi: w.hi(),
                exact,
                quadrature: q.value,
                quadrature_err: q.error_estimate,
                difference,
                pass: difference <= agree,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantsRow {
    pub name: String,
    pub n: usize,
    pub d: f64,
    pub line_length: f64,
    pub c1: f64,
    pub f: String,
    pub c2: f64,
    pub c3: f64,
    #[serde(rename = "C1")]
    pub big_c1: f64,
    #[serde(rename = "C2")]
    pub big_c2: f64,
}

impl ConstantsRow {
    pub fn new(name: &str, l: &ConstantLedger) -> Self {
        Self {
            name: name.to_string(),
            n: l.n,
            d: l.half_side,
            line_length: l.line_length,
            c1: l.c1,
            f: l.weight.clone(),
            c2: l.c2,
            c3: l.c3,
            big_c1: l.big_c1,
            big_c2: l.big_c2,
        }
    }
}

pub fn constants_table(fields: &[ScalarField], weights: &[WeightFunction]) -> Result<Vec<ConstantsRow>> {
    let mut out = Vec::new();
    for field in fields {
        for f in weights {
            out.push(ConstantsRow::new(field.name(), &field_ledger(field, f)?));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationRow {
    pub kind: String,
    pub name: String,
    pub check: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

/// Hypothesis checks for the whole corpus.
pub fn validate_corpus(field_samples: usize, profile_samples: usize) -> Result<Vec<ValidationRow>> {
    let row = |kind: &str, name: &str, check: &str, value: f64, limit: f64, pass: bool| ValidationRow {
        kind: kind.into(),
        name: name.into(),
        check: check.into(),
        value,
        limit,
        pass,
    };
    let mut out = Vec::new();
    for field in corpus_fields()? {
        let v = validate_field(&field, field_samples)?;
        out.push(row("field", &v.name, "max_abs_value", v.max_abs_value, 1.0, v.bounded));
        out.push(row(
            "field",
            &v.name,
            "gradient_error",
            v.max_gradient_error,
            crate::domain::validate::GRADIENT_TOL,
            v.gradient_ok,
        ));
        out.push(row("field", &v.name, "second_partial", v.max_second_partial, v.hessian_bound, v.hessian_ok));
    }
    for p in corpus_profiles()? {
        let v = validate_profile(&p, profile_samples)?;
        out.push(row("profile", &v.name, "max_abs_value", v.max_abs_value, 1.0, v.bounded));
        out.push(row("profile", &v.name, "derivative_error", v.max_deriv_error, crate::domain::validate::GRADIENT_TOL, v.deriv_ok));
        out.push(row("profile", &v.name, "second_derivative", v.max_second_deriv, p.hessian_bound(), v.hessian_ok));
    }
    for f in corpus_weights()? {
        let v = validate_weight(&f, profile_samples)?;
        out.push(row("weight", &v.name, "sqrt_weighted_max", v.max_sqrt_product, v.sqrt_bound, v.sqrt_bound_ok));
        out.push(row("weight", &v.name, "integral_rel_error", v.integral_rel_error, crate::domain::validate::INTEGRAL_REL_TOL, v.integral_ok));
        out.push(row("weight", &v.name, "decreasing", f64::from(u8::from(v.decreasing)), 1.0, v.decreasing && v.nonnegative));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ledger_examples() {
        let f = weight_by_name("weight-log1").unwrap();
        // unit line: c2 = 1 (1 + 4) + 2
        let l = constants_ledger(1, 0.5, 1.0, &f).unwrap();
        assert_eq!((l.c2, l.big_c1), (7.0, 7.0));
        let l = constants_ledger(2, 0.9, 1.0, &f).unwrap();
        assert!((l.c2 - 11.0).abs() < 1e-12);
        assert!((l.big_c1 - 2.0 * 1.8 * 11.0).abs() < 1e-12);
        let c3 = 11.0 * (2.0 * (-0.5f64).exp() + 3.0);
        assert!((l.c3 - c3).abs() < 1e-12);
        assert!((l.big_c2 - 3.6 * c3).abs() < 1e-12);
        assert!(constants_ledger(0, 0.9, 1.0, &f).is_err());
    }

    #[test]
    fn grids() {
        let g = default_a_grid();
        assert_eq!(g.len(), 11);
        assert_eq!((g[0], g[10]), (0.25, 0.5f64.powi(12)));
        let h = geometric_grid(0.25, 0.5f64.powi(12), 11).unwrap();
        for (x, y) in g.iter().zip(&h) {
            assert!((x - y).abs() <= 1e-15 * x);
        }
        assert!(geometric_grid(0.5, 0.1, 3).is_err());
        assert!(geometric_grid(0.25, 0.1, 1).is_err());
        assert_eq!(geometric_grid(0.25, 0.25, 1).unwrap(), vec![0.25]);
    }

    #[test]
    fn linear_sweep_is_exact_and_linear() {
        let field = field_by_name("linear-x1@2").unwrap();
        let w = corpus_weights().unwrap();
        let r = scaling_sweep(&field, &w, &default_a_grid(), &GammaConfig::default()).unwrap();
        assert!(r.passed());
        for row in &r.rows {
            assert!((row.gamma1 - 3.6 * row.a).abs() < 1e-12 * row.gamma1.max(1.0));
        }
        assert!((r.fit.unwrap().exponent - 1.0).abs() < 0.02);
        assert!(r.gamma2_monotone());
        assert!((r.c1_star - 3.6 * 0.5).abs() < 1e-9);
    }

    #[test]
    fn zero_field_skips_fit() {
        let field = field_by_name("constant-0@2").unwrap();
        let w = corpus_weights().unwrap();
        let r = scaling_sweep(&field, &w, &default_a_grid(), &GammaConfig::default()).unwrap();
        assert!(r.fit.is_none());
        assert!(r.passed());
        assert!(r.rows.iter().all(|x| x.gamma1 == 0.0 && x.gamma2 == 0.0));
    }

    #[test]
    fn bowl_exponent() {
        let field = field_by_name("quadratic-bowl@2").unwrap();
        let w = [weight_by_name("weight-log1").unwrap()];
        let r = scaling_sweep(&field, &w, &default_a_grid(), &GammaConfig::default()).unwrap();
        assert!((r.fit.unwrap().exponent - 1.5).abs() < 0.05, "{:?}", r.fit);
        assert!(r.passed());
    }

    #[test]
    fn csv_header_is_fixed() {
        let field = field_by_name("linear-x1@1").unwrap();
        let w = [weight_by_name("weight-log1").unwrap()];
        let r = scaling_sweep(&field, &w, &[0.25], &GammaConfig::default()).unwrap();
        let text = csv_string(&r.rows).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "name,f,a,gamma1,gamma1_err,gamma2,gamma2_err,axis_bound,C1_sqrt_a,C2,pass_g1,pass_g2"
        );
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn one_dimensional_suites_pass() {
        let profiles = corpus_profiles().unwrap();
        assert!(lemma21_suite(&profiles, &default_l_grid(), None).unwrap().iter().all(|r| r.pass));
        assert!(lemma22_suite(&profiles, &default_l_grid(), 10_000).unwrap().iter().all(|r| r.pass));
        let reports = part_two_suite(&[0.25, 0.01]).unwrap();
        assert!(reports.iter().all(PartTwoReport::passed));
    }

    #[test]
    fn corpus_validates() {
        let rows = validate_corpus(9, 257).unwrap();
        let bad: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }
}
