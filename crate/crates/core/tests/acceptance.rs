//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Slow: the corpus sweep is evaluated twice.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use varbound::cli::run_with;
use varbound::domain::{field_by_name, weight_by_name};
use varbound::gamma::{evaluate, GammaConfig};
use varbound::nestedlp::{convergence, greedy_vs_oracle, limit_closed_form};
use varbound::quad::QuadConfig;
use varbound::study::{
    corpus_profiles, corpus_sweep, csv_string, default_a_grid, default_l_grid, lemma21_suite, lemma22_suite,
    part_two_suite, window_oracle_suite, SweepRow,
};
use varbound::Result;

const SWEEP_BUDGET: Duration = Duration::from_secs(600);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

fn sweep_bounds(rows: &[SweepRow], elapsed: Duration) -> Result<Outcome> {
    let failed = rows.iter().filter(|r| !r.passed()).count();
    let worst_rel = rows.iter().map(SweepRow::relative_error).fold(0.0, f64::max);
    let worst_margin = rows.iter().map(SweepRow::margin).fold(f64::INFINITY, f64::min);
    outcome(
        failed == 0 && worst_rel <= 0.01 && elapsed <= SWEEP_BUDGET,
        format!(
            "{} rows, {failed} bound violations, worst relative error {worst_rel:.2e}, \
             worst margin {worst_margin:.4}, {:.0}s",
            rows.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn fixtures() -> Result<Outcome> {
    let cfg = GammaConfig::default();
    let log1 = weight_by_name("weight-log1")?;
    let lin = evaluate(&field_by_name("linear-x1@2")?, &log1, 0.25, &cfg)?;
    let bowl = evaluate(&field_by_name("quadratic-bowl@2")?, &log1, 0.25, &cfg)?;
    // strip of width 2a and length 1.8; 1.8 * 2 int_a^0.9 (1 - ln x) dx;
    // disk of radius sqrt(2a) with |grad| = r
    let prim = |x: f64| 2.0 * x - x * x.ln();
    let g2_exact = 3.6 * (prim(0.9) - prim(0.25));
    let disk = 2.0 * PI * 0.5f64.sqrt().powi(3) / 3.0;
    let e = [
        rel(lin.gamma1.value, 0.9),
        rel(lin.gamma2.value, 3.7737),
        rel(bowl.gamma1.value, 0.74048),
    ];
    outcome(
        e[0] <= 0.005 && e[1] <= 0.01 && e[2] <= 0.01 && rel(g2_exact, 3.7737) < 1e-4 && rel(disk, 0.74048) < 1e-4,
        format!(
            "linear Gamma1 {:.6} ({:.1e}), Gamma2 {:.6} ({:.1e}), bowl Gamma1 {:.6} ({:.1e})",
            lin.gamma1.value, e[0], lin.gamma2.value, e[1], bowl.gamma1.value, e[2]
        ),
    )
}

fn axis_inequality(rows: &[SweepRow]) -> Result<Outcome> {
    let violations = rows.iter().filter(|r| !r.axis_inequality_holds()).count();
    let linear = rows
        .iter()
        .filter(|r| r.name.starts_with("linear-x1@") && r.gamma1 > 0.0)
        .map(|r| rel(r.axis_bound, r.gamma1))
        .fold(0.0, f64::max);
    outcome(
        violations == 0 && linear <= 0.01,
        format!("{violations} violations, linear field axis bound vs Gamma1 within {linear:.2e}"),
    )
}

fn chain() -> Result<Outcome> {
    let rows = lemma21_suite(&corpus_profiles()?, &default_l_grid(), None)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    let margin = rows.iter().map(|r| r.margin()).fold(f64::INFINITY, f64::min);
    outcome(
        failed == 0,
        format!("{} (profile, l) pairs, {failed} violations, worst margin {margin:.4}", rows.len()),
    )
}

fn slopes() -> Result<Outcome> {
    let rows = lemma22_suite(&corpus_profiles()?, &default_l_grid(), 10_000)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    let ratio = rows
        .iter()
        .filter_map(|r| r.min_slope.map(|s| s / r.threshold))
        .fold(f64::INFINITY, f64::min);
    outcome(
        failed == 0,
        format!("{} (profile, l) pairs, {failed} violations, min slope / (l/2) = {ratio:.4}", rows.len()),
    )
}

fn greedy() -> Result<Outcome> {
    let r = greedy_vs_oracle(6, 200, 7, 1e-9)?;
    outcome(
        r.passed() && r.trials.len() == 200,
        format!("{}/{} agree, worst gap {:.2e}", r.agreements(), r.trials.len(), r.worst_gap()),
    )
}

fn riemann() -> Result<Outcome> {
    let thetas = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut pass = true;
    let mut detail = Vec::new();
    for name in ["weight-log1", "weight-pow13", "weight-log"] {
        let f = weight_by_name(name)?;
        let rep = convergence(&f, 0.25, 1.0, &thetas)?;
        let order = rep.fit.map_or(f64::NAN, |f| f.exponent);
        let bounded = rep.rows.iter().all(|r| r.error <= rep.k_const * r.diameter * (1.0 + 1e-12));
        pass &= rep.passed(1.0) && bounded;
        if let Some(closed) = limit_closed_form(&f, 0.25, 1.0) {
            pass &= (rep.rows[0].limit - closed).abs() <= 1e-9;
        }
        if name == "weight-log1" {
            let limit = rep.rows[0].limit;
            let last = rep.rows.last().expect("four rows");
            // 3 - 2 sqrt(a)
            pass &= (limit - 2.0).abs() <= 5e-6 && (last.riemann - limit).abs() <= 1e-3;
            detail.push(format!("limit {limit:.5}, Y(1e-4) {:.6}", last.riemann));
        }
        detail.push(format!("{name} order {order:.4}"));
    }
    outcome(pass, detail.join(", "))
}

fn part_two() -> Result<Outcome> {
    let reports = part_two_suite(&default_a_grid())?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    outcome(failed == 0, format!("{} triples, {failed} violations", reports.len()))
}

fn window_oracle() -> Result<Outcome> {
    let cfg = QuadConfig::new(1_000_003, 1e-5, 4)?;
    let rows = window_oracle_suite(&cfg, 1e-4)?;
    let worst = rows.iter().map(|r| r.difference).fold(0.0, f64::max);
    outcome(
        rows.iter().all(|r| r.pass),
        format!("{} (profile, window) pairs, worst difference {worst:.2e}", rows.len()),
    )
}

/// CSV output of every one-dimensional and program subcommand.
fn cli_suite() -> Vec<(String, String)> {
    let runs: [&[&str]; 6] = [
        &["lemma21"],
        &["lemma22"],
        &["lp", "--seed", "11"],
        &["limit"],
        &["constants"],
        &["validate"],
    ];
    runs.iter()
        .map(|args| {
            let mut out = Vec::new();
            let mut err = Vec::new();
            run_with(std::iter::once("varbound").chain(args.iter().copied()), &mut out, &mut err);
            (args.join(" "), String::from_utf8_lossy(&out).into_owned())
        })
        .collect()
}

fn determinism(first_sweep: &str) -> Result<Outcome> {
    let first = cli_suite();
    let mut out = Vec::new();
    let code = run_with(["varbound", "scaling"], &mut out, &mut Vec::new());
    let second_sweep = String::from_utf8_lossy(&out).into_owned();
    let second = cli_suite();
    let mut differing: Vec<String> = first
        .iter()
        .zip(&second)
        .filter(|(a, b)| a.1.is_empty() || a.1 != b.1)
        .map(|(a, _)| a.0.clone())
        .collect();
    if second_sweep != first_sweep {
        differing.push("scaling".into());
    }
    outcome(
        differing.is_empty(),
        format!(
            "{} CSV outputs compared, {} bytes of sweep, scaling exit {code}, differing: [{}]",
            first.len() + 1,
            first_sweep.len(),
            differing.join(", ")
        ),
    )
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |n: usize, name: &str, r: Result<Outcome>| {
        let (pass, detail) = match r {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        println!("{} {n:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    };

    let start = Instant::now();
    let sweep = corpus_sweep(&default_a_grid(), &GammaConfig::default());
    let elapsed = start.elapsed();
    let rows: Vec<SweepRow> = match &sweep {
        Ok(reports) => reports.iter().flat_map(|r| r.rows.clone()).collect(),
        Err(_) => Vec::new(),
    };
    let sweep_csv = csv_string(&rows);
    match sweep {
        Ok(_) => report(1, "corpus sweep", sweep_bounds(&rows, elapsed)),
        Err(e) => report(1, "corpus sweep", Err(e)),
    }
    report(2, "closed-form fixtures", fixtures());
    report(3, "axis reduction inequality", if rows.is_empty() { outcome(false, "no sweep rows") } else { axis_inequality(&rows) });
    report(4, "band variation chain", chain());
    report(5, "slope on the Lambda cells", slopes());
    report(6, "greedy vs vertex enumeration", greedy());
    report(7, "Riemann limit", riemann());
    report(8, "weighted profile chain", part_two());
    report(9, "window oracle", window_oracle());
    match sweep_csv {
        Ok(csv) => report(10, "determinism", determinism(&csv)),
        Err(e) => report(10, "determinism", Err(e)),
    }

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
