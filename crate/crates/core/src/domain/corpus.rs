//! Built-in analytic fields, profiles and weights.
//!
//! Every entry carries an analytic derivative and an exact constant: `c1` is
//! the supremum of the second partials over the cube (1 is stored where the
//! true value is 0), and the weights carry `B_f`, `I_f` in closed form.
//!
//! Field names accept an optional `@n` dimension suffix (default 2), and the
//! trig product accepts a `-k<freq>` suffix, e.g. `trig-product-k5@3`.

use std::f64::consts::E;
use std::sync::Arc;

use super::{CubeDomain, FieldModel, Profile, ScalarField, WeightFunction};
use crate::error::{Error, Result};

pub const FIELD_NAMES: [&str; 5] = [
    "constant-0",
    "linear-x1",
    "quadratic-bowl",
    "trig-product",
    "cubic-saddle",
];

pub const PROFILE_NAMES: [&str; 4] = ["linear", "quadratic", "sine", "constant"];

pub const WEIGHT_NAMES: [&str; 3] = ["weight-log1", "weight-pow13", "weight-log"];

const DEFAULT_DIM: usize = 2;
const DEFAULT_TRIG_K: f64 = 3.0;
const TRIG_AMPLITUDE: f64 = 0.9;
const SADDLE_SCALE: f64 = 0.5;
/// Corpus profiles are scaled so that `|psi| < 1` holds on the closed interval.
const PROFILE_AMPLITUDE: f64 = 0.95;

#[derive(Clone, Debug)]
pub enum CorpusEntry {
    Field(ScalarField),
    Profile(Profile),
    Weight(WeightFunction),
}

impl CorpusEntry {
    pub fn name(&self) -> &str {
        match self {
            CorpusEntry::Field(f) => f.name(),
            CorpusEntry::Profile(p) => p.name(),
            CorpusEntry::Weight(w) => w.name(),
        }
    }
}

/// Fields for n in {1, 2, 3}, all profiles and all weights.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for name in FIELD_NAMES {
            let field = field_by_name(&format!("{name}@{n}")).expect("corpus field");
            out.push(CorpusEntry::Field(field));
        }
    }
    for name in PROFILE_NAMES {
        out.push(CorpusEntry::Profile(profile_by_name(name).expect("corpus profile")));
    }
    for name in WEIGHT_NAMES {
        out.push(CorpusEntry::Weight(weight_by_name(name).expect("corpus weight")));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Analytic {
    Constant(f64),
    Linear,
    Bowl,
    TrigProduct { k: f64 },
    CubicSaddle,
}

impl FieldModel for Analytic {
    fn value(&self, x: &[f64]) -> f64 {
        match *self {
            Analytic::Constant(c) => c,
            Analytic::Linear => x[0],
            Analytic::Bowl => 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
            Analytic::TrigProduct { k } => {
                TRIG_AMPLITUDE * x.iter().map(|v| (k * v).sin()).product::<f64>()
            }
            Analytic::CubicSaddle => {
                let x1 = x[0];
                let x2 = if x.len() > 1 { x[1] } else { 0.0 };
                SADDLE_SCALE * (x1 * x1 * x1 - 3.0 * x1 * x2 * x2)
            }
        }
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        match *self {
            Analytic::Constant(_) => out.fill(0.0),
            Analytic::Linear => {
                out.fill(0.0);
                out[0] = 1.0;
            }
            Analytic::Bowl => out.copy_from_slice(x),
            Analytic::TrigProduct { k } => {
                for (i, o) in out.iter_mut().enumerate() {
                    let mut p = TRIG_AMPLITUDE * k * (k * x[i]).cos();
                    for (j, v) in x.iter().enumerate() {
                        if j != i {
                            p *= (k * v).sin();
                        }
                    }
                    *o = p;
                }
            }
            Analytic::CubicSaddle => {
                out.fill(0.0);
                let x1 = x[0];
                let x2 = if x.len() > 1 { x[1] } else { 0.0 };
                out[0] = SADDLE_SCALE * (3.0 * x1 * x1 - 3.0 * x2 * x2);
                if x.len() > 1 {
                    out[1] = -SADDLE_SCALE * 6.0 * x1 * x2;
                }
            }
        }
    }
}

impl Analytic {
    /// Supremum of |d2 sigma / dx_i dx_j| over the cube.
    fn hessian_bound(&self, cube: &CubeDomain) -> f64 {
        match *self {
            Analytic::Constant(_) | Analytic::Linear => 1.0,
            Analytic::Bowl => 1.0,
            Analytic::TrigProduct { k } => TRIG_AMPLITUDE * k * k,
            Analytic::CubicSaddle => {
                // second partials are 3 x1, -3 x2, -3 x1 (times 2 * scale)
                let reach = (0..cube.dim().min(2))
                    .map(|j| cube.lower(j).abs().max(cube.upper(j).abs()))
                    .fold(0.0, f64::max);
                6.0 * SADDLE_SCALE * reach
            }
        }
    }
}

/// Default cube for a corpus field: centred, half side 0.9, shrunk for the
/// bowl in n >= 3 so that `n d^2 / 2 < 1`.
pub fn default_cube(base: &str, n: usize) -> Result<CubeDomain> {
    let d = if base == "quadratic-bowl" {
        let limit = (10.0 * (2.0 / n as f64).sqrt() * 0.99).floor() / 10.0;
        limit.min(0.9)
    } else {
        0.9
    };
    CubeDomain::centered(n, d)
}

struct ParsedName {
    base: String,
    n: usize,
    trig_k: f64,
}

fn parse_field_name(name: &str) -> Result<ParsedName> {
    let unknown = || Error::UnknownEntry(name.to_string());
    let (stem, n) = match name.split_once('@') {
        Some((stem, dim)) => {
            let n: usize = dim.parse().map_err(|_| unknown())?;
            if n == 0 {
                return Err(unknown());
            }
            (stem, n)
        }
        None => (name, DEFAULT_DIM),
    };
    if let Some(k) = stem.strip_prefix("trig-product-k") {
        let k: f64 = k.parse().map_err(|_| unknown())?;
        if !(k > 0.0 && k.is_finite()) {
            return Err(unknown());
        }
        return Ok(ParsedName {
            base: "trig-product".into(),
            n,
            trig_k: k,
        });
    }
    if !FIELD_NAMES.contains(&stem) {
        return Err(unknown());
    }
    Ok(ParsedName {
        base: stem.into(),
        n,
        trig_k: DEFAULT_TRIG_K,
    })
}

/// Looks up a corpus field on its default cube.
pub fn field_by_name(name: &str) -> Result<ScalarField> {
    let parsed = parse_field_name(name)?;
    let cube = default_cube(&parsed.base, parsed.n)?;
    field_on_cube(name, cube)
}

/// Looks up a corpus field on a caller-supplied cube. The dimension comes
/// from the cube; an `@n` suffix, if present, must agree with it.
pub fn field_on_cube(name: &str, cube: CubeDomain) -> Result<ScalarField> {
    let parsed = parse_field_name(name)?;
    if name.contains('@') && parsed.n != cube.dim() {
        return Err(Error::Argument(format!(
            "field `{name}` requested on a cube of dimension {}",
            cube.dim()
        )));
    }
    let model = match parsed.base.as_str() {
        "constant-0" => Analytic::Constant(0.0),
        "linear-x1" => Analytic::Linear,
        "quadratic-bowl" => Analytic::Bowl,
        "trig-product" => Analytic::TrigProduct { k: parsed.trig_k },
        "cubic-saddle" => Analytic::CubicSaddle,
        _ => return Err(Error::UnknownEntry(name.to_string())),
    };
    let c1 = model.hessian_bound(&cube);
    let stem = if parsed.base == "trig-product" && parsed.trig_k != DEFAULT_TRIG_K {
        format!("trig-product-k{}", parsed.trig_k)
    } else {
        parsed.base.clone()
    };
    let canonical = format!("{stem}@{}", cube.dim());
    ScalarField::new(canonical, cube, c1, Arc::new(model))
}

/// Corpus profiles live on `[0, 1]`.
pub fn profile_by_name(name: &str) -> Result<Profile> {
    let p = match name {
        "linear" => Profile::linear(PROFILE_AMPLITUDE, 1.0)?,
        "quadratic" => Profile::quadratic(PROFILE_AMPLITUDE, 1.0)?,
        "sine" => Profile::sine(PROFILE_AMPLITUDE, 1.0, 1.0)?,
        "constant" => Profile::constant(0.5, 1.0)?,
        _ => return Err(Error::UnknownEntry(name.to_string())),
    };
    Ok(p.renamed(name))
}

pub fn weight_by_name(name: &str) -> Result<WeightFunction> {
    match name {
        // max of sqrt(x)(1 - ln x) is at x = 1/e; primitive 6 sqrt(k) - 2 sqrt(k) ln k
        "weight-log1" => Ok(WeightFunction::new(
            name,
            |xi: f64| 1.0 - xi.ln(),
            2.0 / E.sqrt(),
            6.0,
        )?
        .with_primitive(|k: f64| {
            if k <= 0.0 {
                0.0
            } else {
                let s = k.sqrt();
                6.0 * s - 2.0 * s * k.ln()
            }
        })),
        // x^(1/6) <= 1; primitive 6 k^(1/6)
        "weight-pow13" => Ok(WeightFunction::new(name, |xi: f64| xi.powf(-1.0 / 3.0), 1.0, 6.0)?
            .with_primitive(|k: f64| 6.0 * k.max(0.0).powf(1.0 / 6.0))),
        // max of -sqrt(x) ln x is at x = e^-2; primitive 4 sqrt(k) - 2 sqrt(k) ln k
        "weight-log" => Ok(WeightFunction::new(name, |xi: f64| -xi.ln(), 2.0 / E, 4.0)?
            .with_primitive(|k: f64| {
                if k <= 0.0 {
                    0.0
                } else {
                    let s = k.sqrt();
                    4.0 * s - 2.0 * s * k.ln()
                }
            })
            .endpoint_degenerate()),
        _ => Err(Error::UnknownEntry(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_lookup() {
        let cube = CubeDomain::centered(2, 0.9).unwrap();
        let f = field_on_cube("linear-x1", cube).unwrap();
        assert_eq!(f.gradient(&[0.3, -0.2]), vec![1.0, 0.0]);
        assert_eq!(f.hessian_bound(), 1.0);
        assert_eq!(f.name(), "linear-x1@2");
    }

    #[test]
    fn weight_log1_certificates() {
        let w = weight_by_name("weight-log1").unwrap();
        assert!((w.sqrt_bound() - 1.2130613194252668).abs() < 1e-12);
        assert_eq!(w.integral_01(), 6.0);
        assert!((w.sqrt_weighted_integral(0.0, 1.0).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn weight_pow13_certificates() {
        let w = weight_by_name("weight-pow13").unwrap();
        assert_eq!(w.sqrt_bound(), 1.0);
        assert_eq!(w.integral_01(), 6.0);
        assert!(!w.is_endpoint_degenerate());
        assert!(weight_by_name("weight-log").unwrap().is_endpoint_degenerate());
    }

    #[test]
    fn names_and_dimensions() {
        assert_eq!(field_by_name("quadratic-bowl@3").unwrap().domain().half_side(), 0.8);
        assert_eq!(field_by_name("quadratic-bowl").unwrap().domain().half_side(), 0.9);
        assert_eq!(field_by_name("trig-product-k5@1").unwrap().hessian_bound(), 22.5);
        assert_eq!(field_by_name("trig-product@2").unwrap().name(), "trig-product@2");
        assert!(matches!(field_by_name("nope"), Err(Error::UnknownEntry(_))));
        assert!(field_by_name("linear-x1@0").is_err());
        let cube = CubeDomain::centered(3, 0.5).unwrap();
        assert!(field_on_cube("linear-x1@2", cube).is_err());
    }

    #[test]
    fn saddle_bound_tracks_cube() {
        let f = field_by_name("cubic-saddle@2").unwrap();
        assert!((f.hessian_bound() - 2.7).abs() < 1e-12);
    }

    #[test]
    fn corpus_is_complete() {
        let c = builtin_corpus();
        assert_eq!(c.len(), 15 + 4 + 3);
    }
}
