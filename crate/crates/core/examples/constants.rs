//! The constant ledger for each corpus field with each weight.

use varbound::study::{constants_table, corpus_fields, corpus_weights};

fn main() {
    let rows = constants_table(&corpus_fields().expect("fields"), &corpus_weights().expect("weights"))
        .expect("ledger");
    println!("{:<18} {:<13} {:>6} {:>8} {:>9} {:>10}", "field", "weight", "c1", "c2", "C1", "C2");
    for r in rows {
        println!("{:<18} {:<13} {:>6.2} {:>8.3} {:>9.3} {:>10.3}", r.name, r.f, r.c1, r.c2, r.big_c1, r.big_c2);
    }
}
