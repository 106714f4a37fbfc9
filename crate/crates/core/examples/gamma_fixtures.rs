//! Gamma1 and Gamma2 on fields whose band integrals have closed forms.

use std::f64::consts::PI;

use varbound::domain::{field_by_name, weight_by_name};
use varbound::gamma::{evaluate, GammaConfig};

fn main() {
    let cfg = GammaConfig::default();
    let log1 = weight_by_name("weight-log1").expect("corpus weight");

    // s = x1 on [-0.9, 0.9]^2: the band is a strip of width 2a and height 1.8
    let linear = field_by_name("linear-x1@2").expect("corpus field");
    let r = evaluate(&linear, &log1, 0.25, &cfg).expect("evaluation");
    let prim = |x: f64| 2.0 * x - x * x.ln();
    println!("linear  a=0.25  gamma1 = {:.6} (exact 0.9)", r.gamma1.value);
    println!(
        "linear  a=0.25  gamma2 = {:.6} (exact {:.6})",
        r.gamma2.value,
        3.6 * (prim(0.9) - prim(0.25))
    );

    // |x|^2 / 2 < a is a disk of radius sqrt(2a); int r dA = 2 pi r^3 / 3
    let bowl = field_by_name("quadratic-bowl@2").expect("corpus field");
    let r = evaluate(&bowl, &log1, 0.25, &cfg).expect("evaluation");
    let radius = 0.5f64.sqrt();
    println!(
        "bowl    a=0.25  gamma1 = {:.6} (exact {:.6})",
        r.gamma1.value,
        2.0 * PI * radius.powi(3) / 3.0
    );
    println!(
        "bowl    a=0.25  axis bound = {:.6}, inequality holds: {}",
        r.axis_bound,
        r.axis_inequality_holds()
    );
}
