//! Greedy objectives on finer partitions approach the integral limit at
//! first order in the partition diameter.

use varbound::domain::weight_by_name;
use varbound::nestedlp::{convergence, ledger_c3, limit_closed_form};

fn main() {
    for name in ["weight-log1", "weight-pow13", "weight-log"] {
        let f = weight_by_name(name).expect("corpus weight");
        let rep = convergence(&f, 0.25, 1.0, &[1e-1, 1e-2, 1e-3, 1e-4]).expect("convergence");
        println!(
            "{name}: limit {:.8} (closed form {:.8}), c3 = {:.4}",
            rep.rows[0].limit,
            limit_closed_form(&f, 0.25, 1.0).unwrap_or(f64::NAN),
            ledger_c3(&f, 1.0)
        );
        for row in &rep.rows {
            println!("  theta {:>7.1e}  k {:>5}  Y {:.8}  error {:.3e}", row.diameter, row.k, row.riemann, row.error);
        }
        if let Some(fit) = rep.fit {
            println!("  order {:.4}, K = {:.4}", fit.exponent, rep.k_const);
        }
    }
}
