//! The one-dimensional band-variation chain for every corpus profile at
//! `a = l^2`, from the measured variation up to `c2 sqrt(a)`.

use varbound::study::{corpus_profiles, default_l_grid, lemma21_suite};

fn main() {
    let profiles = corpus_profiles().expect("corpus profiles");
    let rows = lemma21_suite(&profiles, &default_l_grid(), None).expect("suite");
    println!(
        "{:<10} {:>10} {:>4} {:>10} {:>10} {:>10} {:>10}",
        "profile", "l", "r1", "measured", "dl+2r1a", "bound", "c2 sqrt a"
    );
    for r in &rows {
        println!(
            "{:<10} {:>10.6} {:>4} {:>10.6} {:>10.6} {:>10.4} {:>10.4}",
            r.profile,
            r.l,
            r.r1,
            r.measured,
            r.decomposition_bound,
            r.bound,
            r.certificate.unwrap_or(f64::NAN)
        );
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    println!("{} rows, {failed} violations", rows.len());
}
