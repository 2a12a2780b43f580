//! The closed-form group law on parameter tuples agrees with matrix
//! multiplication, and inverses stay inside the family.
//!
//! Run with: cargo run --example group_law

use leibniz::families::{aut_matrix, compose_params, random_params, recover_params, FamilyId};
use leibniz::morphisms::LinearMap;
use leibniz::rng::SplitMix64;

fn main() {
    let mut rng = SplitMix64::new(7);
    for f in FamilyId::ALL {
        let n = f.min_n();
        let p1 = random_params(f, &mut rng);
        let p2 = random_params(f, &mut rng);
        let m1 = aut_matrix(f, n, &p1).unwrap();
        let m2 = aut_matrix(f, n, &p2).unwrap();

        // Compose by matrices, then read the parameters back.
        let product = LinearMap::new(m1.matrix().multiply(m2.matrix()).unwrap());
        let from_matrices = recover_params(f, n, &product).unwrap();
        let from_law = compose_params(f, &p1, &p2).unwrap();

        println!("{f} (n = {n}):");
        println!("  p1      : {:?}", p1.components());
        println!("  p2      : {:?}", p2.components());
        println!("  p1 * p2 : {:?}", from_law.components());
        println!(
            "  law agrees with matrix product: {}",
            from_law == from_matrices
        );

        let inverse = LinearMap::new(m1.matrix().invert().unwrap());
        let p1_inv = recover_params(f, n, &inverse).unwrap();
        let round = compose_params(f, &p1, &p1_inv).unwrap();
        println!(
            "  p1 * p1^-1 = identity: {}",
            round == leibniz::families::AutParams::identity(f)
        );
        println!();
    }
}
