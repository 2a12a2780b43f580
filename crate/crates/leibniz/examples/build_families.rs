//! Construct the four solvable families and verify the Leibniz identity
//! on every basis triple.
//!
//! Run with: cargo run --example build_families

use leibniz::families::{build, FamilyId};

fn main() {
    for f in FamilyId::ALL {
        let n = f.min_n();
        let a = build(f, n).unwrap();
        println!("{f} (n = {n}, dim = {}):", a.dim());
        for ((i, j), coords) in a.table() {
            let terms: Vec<String> = coords
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| {
                    if c.is_one() {
                        a.label(k).to_string()
                    } else {
                        format!("{c}*{}", a.label(k))
                    }
                })
                .collect();
            println!(
                "  [{},{}] = {}",
                a.label(*i),
                a.label(*j),
                terms.join(" + ")
            );
        }
        let violations = a.check_leibniz();
        println!(
            "  Leibniz identity: {}",
            if violations.is_empty() {
                "holds"
            } else {
                "FAILS"
            }
        );
        println!();
    }
}
