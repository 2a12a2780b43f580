//! Derivation spaces: their dimension matches the number of group
//! parameters, and exponentials of nilpotent derivations land inside the
//! automorphism family.
//!
//! Run with: cargo run --example derivations

use leibniz::families::{build, recover_params, FamilyId};
use leibniz::morphisms::{derivation_space, exp_derivation, is_automorphism};

fn main() {
    for f in FamilyId::ALL {
        let n = f.min_n() + 1;
        let a = build(f, n).unwrap();
        let der = derivation_space(&a);
        println!(
            "{f} (n = {n}): dim Der = {} (group parameters: {})",
            der.dimension,
            f.param_count()
        );
        for (i, d) in der.elements.iter().enumerate() {
            match exp_derivation(&a, d) {
                Ok(m) => {
                    let auto = is_automorphism(&a, &m).unwrap();
                    let recovered = recover_params(f, n, &m).is_ok();
                    println!("  exp(D{i}): automorphism = {auto}, inside the family = {recovered}");
                }
                Err(e) => println!("  exp(D{i}): skipped ({e})"),
            }
        }
        println!();
    }
}
