//! Threshold sweep for the quadratic bowl in two dimensions, with the
//! fitted exponent of Gamma1 and the ledger bounds per row.

use varbound::domain::field_by_name;
use varbound::gamma::GammaConfig;
use varbound::study::{corpus_weights, csv_string, default_a_grid, scaling_sweep};

fn main() {
    let field = field_by_name("quadratic-bowl@2").expect("corpus field");
    let weights = corpus_weights().expect("corpus weights");
    let report = scaling_sweep(&field, &weights, &default_a_grid(), &GammaConfig::default())
        .expect("sweep");

    print!("{}", csv_string(&report.rows).expect("csv"));
    if let Some(fit) = report.fit {
        println!("# Gamma1 ~ a^{:.4} over {} points", fit.exponent, fit.points);
    }
    println!("# max Gamma1/sqrt(a) = {:.4}", report.c1_star);
    println!("# all bounds hold: {}", report.passed());
}
