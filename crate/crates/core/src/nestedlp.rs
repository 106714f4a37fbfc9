//! The nested-prefix linear program
//!
//! ```text
//! maximize   sum_nu w_nu y_nu
//! subject to sum_{nu <= r} y_nu <= chi_r = c2 sqrt(kappa_{r+1}),  y >= 0
//! ```
//!
//! with `w_nu = f(kappa_nu)` decreasing. Filling every prefix cap in order is
//! optimal; [`oracle_max`] checks that by enumerating vertices. The greedy
//! objective is a left Riemann-Stieltjes sum of `c2 int f d(sqrt kappa)`, whose
//! limit as the partition is refined is [`limit_value`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::WeightFunction;
use crate::error::{argument, Error, Result};
use crate::fit::{power_law, PowerFit};
use crate::onedim::KappaPartition;
use crate::quad::{graded_piece, PieceConfig, PieceScratch};

pub const ORACLE_MAX_K: usize = 12;
const FEAS_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NestedLpInstance {
    kappas: Vec<f64>,
    c2: f64,
    weights: Vec<f64>,
    caps: Vec<f64>,
}

impl NestedLpInstance {
    /// Weights `f(kappa_nu)` for `nu = 1..k`.
    pub fn new(kp: &KappaPartition, f: &WeightFunction, c2: f64) -> Result<Self> {
        let weights = kp.kappas()[..kp.k()].iter().map(|&k| f.eval(k)).collect();
        Self::with_weights(kp, weights, c2)
    }

    pub fn with_weights(kp: &KappaPartition, weights: Vec<f64>, c2: f64) -> Result<Self> {
        if !(c2 >= 0.0 && c2.is_finite()) {
            return Err(argument(format!("c2 must be nonnegative, got {c2}")));
        }
        if weights.len() != kp.k() {
            return Err(argument(format!(
                "expected {} weights, got {}",
                kp.k(),
                weights.len()
            )));
        }
        let caps = kp.kappas()[1..].iter().map(|k| c2 * k.sqrt()).collect();
        Ok(Self {
            kappas: kp.kappas().to_vec(),
            c2,
            weights,
            caps,
        })
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn caps(&self) -> &[f64] {
        &self.caps
    }

    pub fn objective(&self, y: &[f64]) -> f64 {
        self.weights.iter().zip(y).map(|(w, v)| w * v).sum()
    }

    /// All prefix caps and nonnegativity hold to `tol`.
    pub fn is_feasible(&self, y: &[f64], tol: f64) -> bool {
        let mut s = 0.0;
        for (v, cap) in y.iter().zip(&self.caps) {
            if *v < -tol {
                return false;
            }
            s += v;
            if s > cap + tol {
                return false;
            }
        }
        true
    }

    fn solution(&self, y: Vec<f64>) -> NestedLpSolution {
        let mut s = 0.0;
        let tight_prefixes = y
            .iter()
            .zip(&self.caps)
            .map(|(v, cap)| {
                s += v;
                (s - cap).abs() <= FEAS_TOL * cap.max(1.0)
            })
            .collect();
        NestedLpSolution {
            objective: self.objective(&y),
            y,
            tight_prefixes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NestedLpSolution {
    pub y: Vec<f64>,
    pub objective: f64,
    pub tight_prefixes: Vec<bool>,
}

/// `y_1 = c2 sqrt(kappa_2)`, `y_nu = c2 (sqrt(kappa_{nu+1}) - sqrt(kappa_nu))`.
pub fn greedy_solution(inst: &NestedLpInstance) -> NestedLpSolution {
    let k = inst.k();
    let roots: Vec<f64> = inst.kappas.iter().map(|k| k.sqrt()).collect();
    let y = (0..k)
        .map(|nu| {
            if nu == 0 {
                inst.c2 * roots[1]
            } else {
                inst.c2 * (roots[nu + 1] - roots[nu])
            }
        })
        .collect();
    inst.solution(y)
}

/// Best vertex of the feasible set, found by trying every choice of
/// "prefix `r` tight" or "`y_r = 0`" for each `r`.
///
/// With strictly increasing positive caps the two constraints at index `r`
/// cannot both be active at a feasible point, so each vertex has exactly one
/// per index and all vertices are visited.
pub fn oracle_max(inst: &NestedLpInstance) -> Result<NestedLpSolution> {
    let k = inst.k();
    if k > ORACLE_MAX_K {
        return Err(Error::Capability(format!(
            "vertex enumeration supports k <= {ORACLE_MAX_K}, got {k}"
        )));
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut y = vec![0.0; k];
    for mask in 0u32..(1 << k) {
        let mut s = 0.0;
        for r in 0..k {
            y[r] = if mask & (1 << r) != 0 { inst.caps[r] - s } else { 0.0 };
            s += y[r];
        }
        if !inst.is_feasible(&y, FEAS_TOL) {
            continue;
        }
        let obj = inst.objective(&y);
        let better = match &best {
            None => true,
            Some((b, by)) => {
                let tie = (obj - b).abs() <= FEAS_TOL * b.abs().max(1.0);
                if tie {
                    y.as_slice() < by.as_slice()
                } else {
                    obj > *b
                }
            }
        };
        if better {
            best = Some((obj, y.clone()));
        }
    }
    let (_, y) = best.expect("y = 0 is always feasible");
    Ok(inst.solution(y))
}

/// Greedy objective `Y(y0)` for the partition.
pub fn riemann_y(kp: &KappaPartition, f: &WeightFunction, c2: f64) -> Result<f64> {
    Ok(greedy_solution(&NestedLpInstance::new(kp, f, c2)?).objective)
}

/// `c2 (sqrt(a) f(a) + 1/2 int_a^1 f(k) / sqrt(k) dk)` by quadrature after
/// substituting `k = s^2`, which leaves `int_{sqrt a}^1 f(s^2) ds`.
pub fn limit_value(f: &WeightFunction, a: f64, c2: f64) -> Result<f64> {
    check_a(a)?;
    let cfg = PieceConfig {
        base_cells: 8,
        tol: 1e-13,
        max_doublings: 16,
    };
    let mut acc = [0.0];
    graded_piece(
        &mut |s: f64, o: &mut [f64]| o[0] = f.eval(s * s),
        a.sqrt(),
        1.0,
        &cfg,
        &mut acc,
        &mut PieceScratch::default(),
    );
    Ok(c2 * (a.sqrt() * f.eval(a) + acc[0]))
}

/// The same limit from the weight's closed-form primitive, when it has one.
pub fn limit_closed_form(f: &WeightFunction, a: f64, c2: f64) -> Option<f64> {
    let integral = f.sqrt_weighted_integral(a, 1.0)?;
    Some(c2 * (a.sqrt() * f.eval(a) + 0.5 * integral))
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(argument(format!("threshold a must lie in (0, 1), got {a}")))
    }
}

/// `c3 = c2 (B_f + I_f / 2)`, bounding the limit for every `a` in `(0, 1)`.
pub fn ledger_c3(f: &WeightFunction, c2: f64) -> f64 {
    c2 * (f.sqrt_bound() + 0.5 * f.integral_01())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    /// Requested diameter.
    pub theta: f64,
    /// Actual diameter of the partition used, at most `theta`.
    pub diameter: f64,
    pub k: usize,
    pub riemann: f64,
    pub limit: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub weight: String,
    pub a: f64,
    pub c2: f64,
    pub rows: Vec<ConvergenceRow>,
    /// `max error / diameter`.
    pub k_const: f64,
    pub fit: Option<PowerFit>,
}

impl ConvergenceReport {
    /// Fitted order at least `min_order`.
    pub fn passed(&self, min_order: f64) -> bool {
        self.fit.is_some_and(|f| f.exponent >= min_order) && self.k_const.is_finite()
    }
}

/// Riemann sums on uniform partitions of diameter `theta` against the limit.
pub fn convergence(f: &WeightFunction, a: f64, c2: f64, thetas: &[f64]) -> Result<ConvergenceReport> {
    let limit = limit_value(f, a, c2)?;
    let rows = thetas
        .iter()
        .map(|&theta| {
            let kp = KappaPartition::with_diameter(a, theta)?;
            let riemann = riemann_y(&kp, f, c2)?;
            Ok(ConvergenceRow {
                theta,
                diameter: kp.theta(),
                k: kp.k(),
                riemann,
                limit,
                error: (riemann - limit).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let k_const = rows.iter().map(|r| r.error / r.diameter).fold(0.0, f64::max);
    let xs: Vec<f64> = rows.iter().map(|r| r.diameter).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.error).collect();
    Ok(ConvergenceReport {
        weight: f.name().to_string(),
        a,
        c2,
        rows,
        k_const,
        fit: power_law(&xs, &ys),
    })
}

/// A random instance with `1 <= k <= max_k`, strictly decreasing positive
/// weights and a random partition of `[a, 1]`.
pub fn random_instance(rng: &mut ChaCha8Rng, max_k: usize) -> NestedLpInstance {
    loop {
        let k = rng.gen_range(1..=max_k.max(1));
        let a: f64 = rng.gen_range(0.01..0.5);
        let mut inner: Vec<f64> = (0..k - 1).map(|_| rng.gen_range(a..1.0)).collect();
        inner.sort_by(f64::total_cmp);
        let mut pts = vec![a];
        pts.extend(inner);
        pts.push(1.0);
        let mut weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..10.0)).collect();
        weights.sort_by(|x, y| y.total_cmp(x));
        if weights.windows(2).any(|w| w[0] <= w[1]) {
            continue;
        }
        let Ok(kp) = KappaPartition::from_points(pts) else {
            continue;
        };
        let c2 = rng.gen_range(0.5..10.0);
        return NestedLpInstance::with_weights(&kp, weights, c2).expect("valid instance");
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpTrial {
    pub trial: u64,
    pub k: usize,
    pub greedy: f64,
    pub oracle: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpSuiteReport {
    pub seed: u64,
    pub tol: f64,
    pub trials: Vec<LpTrial>,
}

impl LpSuiteReport {
    pub fn agreements(&self) -> usize {
        self.trials.iter().filter(|t| t.gap <= self.tol).count()
    }

    pub fn worst_gap(&self) -> f64 {
        self.trials.iter().map(|t| t.gap).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.agreements() == self.trials.len()
    }
}

/// Greedy against the oracle on `trials` instances; trial `t` draws from a
/// generator seeded with `seed + t`, so the result is independent of
/// scheduling.
pub fn greedy_vs_oracle(max_k: usize, trials: u64, seed: u64, tol: f64) -> Result<LpSuiteReport> {
    if max_k == 0 || max_k > ORACLE_MAX_K {
        return Err(argument(format!("k must lie in 1..={ORACLE_MAX_K}, got {max_k}")));
    }
    let trials = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t));
            let inst = random_instance(&mut rng, max_k);
            let greedy = greedy_solution(&inst).objective;
            let oracle = oracle_max(&inst)?.objective;
            Ok(LpTrial {
                trial: t,
                k: inst.k(),
                greedy,
                oracle,
                gap: (greedy - oracle).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LpSuiteReport { seed, tol, trials })
}

/// `y` with `delta` moved from index `from` to index `to`, if the result is
/// still feasible.
pub fn shift_mass(inst: &NestedLpInstance, y: &[f64], from: usize, to: usize, delta: f64) -> Option<Vec<f64>> {
    let mut z = y.to_vec();
    z[from] -= delta;
    z[to] += delta;
    inst.is_feasible(&z, FEAS_TOL).then_some(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::weight_by_name;
    use proptest::prelude::*;

    fn fixture() -> (KappaPartition, WeightFunction) {
        (
            KappaPartition::from_points(vec![0.25, 0.49, 0.81, 1.0]).unwrap(),
            weight_by_name("weight-log1").unwrap(),
        )
    }

    #[test]
    fn greedy_fixture() {
        let (kp, f) = fixture();
        let inst = NestedLpInstance::new(&kp, &f, 1.0).unwrap();
        let g = greedy_solution(&inst);
        for (v, e) in g.y.iter().zip([0.7, 0.2, 0.1]) {
            assert!((v - e).abs() < 1e-15);
        }
        let w = |x: f64| 1.0 - x.ln();
        let expected = 0.7 * w(0.25) + 0.2 * w(0.49) + 0.1 * w(0.81);
        assert!((g.objective - expected).abs() < 1e-14);
        assert!((g.objective - 2.13414).abs() < 1e-5);
        assert!(g.tight_prefixes.iter().all(|t| *t));
        let o = oracle_max(&inst).unwrap();
        assert!((o.objective - g.objective).abs() < 1e-9);
        assert!((riemann_y(&kp, &f, 1.0).unwrap() - g.objective).abs() < 1e-15);
    }

    #[test]
    fn single_window_and_zero_cap() {
        let f = weight_by_name("weight-log1").unwrap();
        let kp = KappaPartition::from_points(vec![0.3, 1.0]).unwrap();
        let inst = NestedLpInstance::new(&kp, &f, 1.0).unwrap();
        assert_eq!(greedy_solution(&inst).y, vec![1.0]);
        assert_eq!(greedy_solution(&inst).objective, f.eval(0.3));
        assert_eq!(oracle_max(&inst).unwrap().objective, f.eval(0.3));

        let (kp, f) = fixture();
        let inst = NestedLpInstance::new(&kp, &f, 0.0).unwrap();
        assert_eq!(greedy_solution(&inst).objective, 0.0);
        assert_eq!(oracle_max(&inst).unwrap().y, vec![0.0; 3]);
        assert_eq!(riemann_y(&kp, &f, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn oracle_capability_limit() {
        let f = weight_by_name("weight-log1").unwrap();
        let kp = KappaPartition::uniform(0.1, 13).unwrap();
        let inst = NestedLpInstance::new(&kp, &f, 1.0).unwrap();
        assert!(matches!(oracle_max(&inst), Err(Error::Capability(_))));
    }

    #[test]
    fn limit_fixtures() {
        let f1 = weight_by_name("weight-log1").unwrap();
        let v = limit_value(&f1, 0.25, 1.0).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "{v}");
        assert!((v - (3.0 - 2.0 * 0.25f64.sqrt())).abs() < 1e-12);
        assert!((limit_closed_form(&f1, 0.25, 1.0).unwrap() - v).abs() < 1e-12);

        let f2 = weight_by_name("weight-pow13").unwrap();
        let v = limit_value(&f2, 0.25, 1.0).unwrap();
        assert!((v - (3.0 - 2.0 * 0.25f64.powf(1.0 / 6.0))).abs() < 1e-12);
        assert!((v - 1.41260).abs() < 1e-5);

        assert_eq!(limit_value(&f1, 0.25, 0.0).unwrap(), 0.0);
        assert!(limit_value(&f1, 0.0, 1.0).is_err());
    }

    #[test]
    fn riemann_approaches_limit() {
        let f = weight_by_name("weight-log1").unwrap();
        let kp = KappaPartition::with_diameter(0.25, 1e-4).unwrap();
        assert!((riemann_y(&kp, &f, 1.0).unwrap() - 2.0).abs() < 1e-3);
        let rep = convergence(&f, 0.25, 1.0, &[1e-1, 1e-2, 1e-3, 1e-4]).unwrap();
        let fit = rep.fit.unwrap();
        assert!(fit.exponent >= 1.0 - 0.02, "{fit:?}");
        assert!(rep.passed(0.98));
    }

    #[test]
    fn c3_fixtures_and_majorant() {
        let f1 = weight_by_name("weight-log1").unwrap();
        let f2 = weight_by_name("weight-pow13").unwrap();
        assert!((ledger_c3(&f1, 1.0) - (2.0 * (-0.5f64).exp() + 3.0)).abs() < 1e-15);
        assert!((ledger_c3(&f1, 1.0) - 4.2131).abs() < 1e-4);
        assert_eq!(ledger_c3(&f2, 1.0), 4.0);
        assert_eq!(ledger_c3(&f1, 0.0), 0.0);
        for f in [f1, f2, weight_by_name("weight-log").unwrap()] {
            for k in 2..=12 {
                let a = 0.5f64.powi(k);
                assert!(limit_value(&f, a, 1.0).unwrap() <= ledger_c3(&f, 1.0));
            }
        }
    }

    #[test]
    fn suite_agrees_and_is_deterministic() {
        let r = greedy_vs_oracle(6, 200, 7, 1e-9).unwrap();
        assert!(r.passed(), "worst gap {}", r.worst_gap());
        assert_eq!(r, greedy_vs_oracle(6, 200, 7, 1e-9).unwrap());
        assert!(greedy_vs_oracle(13, 1, 7, 1e-9).is_err());
    }

    proptest! {
        #[test]
        fn greedy_is_feasible_and_optimal(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&mut rng, 8);
            let g = greedy_solution(&inst);
            prop_assert!(inst.is_feasible(&g.y, 1e-12));
            let o = oracle_max(&inst).unwrap();
            prop_assert!((g.objective - o.objective).abs() <= 1e-9 * o.objective.max(1.0));
        }

        #[test]
        fn exchanges_never_help(seed in any::<u64>(), frac in 0.0f64..1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&mut rng, 6);
            let g = greedy_solution(&inst);
            let k = inst.k();
            for mu in 0..k {
                for nu in (mu + 1)..k {
                    // later mass moved earlier: feasible only if it was slack, never worse
                    let delta = frac * g.y[nu];
                    if let Some(z) = shift_mass(&inst, &g.y, nu, mu, delta) {
                        prop_assert!(inst.objective(&z) >= g.objective - 1e-12);
                    }
                    // earlier mass moved later: always feasible, never better
                    let delta = frac * g.y[mu];
                    let z = shift_mass(&inst, &g.y, mu, nu, delta).unwrap();
                    prop_assert!(inst.objective(&z) <= g.objective + 1e-12);
                }
            }
        }
    }
}
