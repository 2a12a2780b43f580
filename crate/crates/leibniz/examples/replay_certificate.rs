//! Symbolic replay of the automorphism necessity arguments: rederive the
//! closed-form coefficients from the homomorphism equations and emit the
//! audit certificate.
//!
//! Run with: cargo run --example replay_certificate

use leibniz::families::FamilyId;
use leibniz::necessity::replay;

fn main() {
    for (f, n) in [(FamilyId::R0, 4), (FamilyId::R1, 5)] {
        let cert = replay(f, n).unwrap();
        println!("{f} (n = {n}): match = {}", cert.matches);
        println!("  nonvanishing assumptions: {:?}", cert.assumptions);
        for step in &cert.steps {
            let solved: Vec<String> = step
                .constraints
                .iter()
                .map(|c| format!("{} = {}", c.var, c.value_poly))
                .collect();
            println!(
                "  impose ({}, {}): {}{}",
                step.pair[0],
                step.pair[1],
                if solved.is_empty() {
                    "-".to_string()
                } else {
                    solved.join(", ")
                },
                if step.residuals.is_empty() {
                    String::new()
                } else {
                    format!("  [{} open relation(s)]", step.residuals.len())
                }
            );
        }
        println!();
    }

    // The full machine-readable certificate for the smallest case.
    println!("{}", replay(FamilyId::R0, 2).unwrap().to_json());
}
