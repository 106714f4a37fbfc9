//! Minimum slope over the Lambda_h part of the grid decomposition against
//! the threshold l/2.

use varbound::domain::Profile;
use varbound::onedim::{check_lemma22, decompose, DEFAULT_SAMPLES_PER_CELL};

fn main() {
    let profile = Profile::sine(1.0, 1.0, 1.0).expect("profile");
    for k in 1..=6 {
        let l = 0.5f64.powi(k);
        let dec = decompose(&profile, l, DEFAULT_SAMPLES_PER_CELL).expect("decomposition");
        let r = check_lemma22(&dec, &profile, 10_000);
        println!(
            "l = {l:<9} h = {:.3e}  M cells = {:>4}  Lambda intervals = {}  min slope = {:.5}  > {:.5}: {}",
            dec.h,
            dec.m_cells.len(),
            dec.r1,
            r.min_slope.unwrap_or(f64::NAN),
            r.threshold,
            r.passed
        );
    }
}
