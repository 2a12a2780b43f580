//! The parametric automorphism groups: build the matrix for a parameter
//! tuple, verify it preserves the bracket, and read the parameters back
//! out of the matrix.
//!
//! Run with: cargo run --example automorphisms

use leibniz::families::{aut_matrix, build, random_params, recover_params, FamilyId};
use leibniz::morphisms::is_automorphism;
use leibniz::rng::SplitMix64;

fn main() {
    let mut rng = SplitMix64::new(2024);
    for f in FamilyId::ALL {
        let n = f.min_n() + 1;
        let a = build(f, n).unwrap();
        let p = random_params(f, &mut rng);
        let m = aut_matrix(f, n, &p).unwrap();

        println!("{f} (n = {n}):");
        for (name, value) in p.components() {
            println!("  {name} = {value}");
        }
        for r in 0..m.dim() {
            let row: Vec<String> = (0..m.dim())
                .map(|c| m.matrix()[(r, c)].to_string())
                .collect();
            println!("  [{}]", row.join(", "));
        }
        println!("  is_automorphism: {}", is_automorphism(&a, &m).unwrap());
        let recovered = recover_params(f, n, &m).unwrap();
        println!("  parameters recovered intact: {}", recovered == p);
        println!();
    }
}
