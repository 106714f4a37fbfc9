//! Sampled checks of the corpus hypotheses: bounded values, analytic
//! derivatives, second-derivative bounds and the weight certificates.

use varbound::study::validate_corpus;

fn main() {
    let rows = validate_corpus(9, 1025).expect("validation");
    for r in &rows {
        let mark = if r.pass { "ok  " } else { "FAIL" };
        println!("{mark} {:<8} {:<20} {:<20} {:.4e} (limit {:.4e})", r.kind, r.name, r.check, r.value, r.limit);
    }
}
