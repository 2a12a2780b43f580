//! Characteristic series and structural classification: derived and
//! lower central series, solvability, and the null-filiform/filiform
//! dichotomy of the nilradicals.
//!
//! Run with: cargo run --example series_and_classification

use leibniz::algebra::{basis_vector, Subspace};
use leibniz::families::{build, FamilyId};

fn main() {
    for f in FamilyId::ALL {
        let n = f.min_n() + 2;
        let a = build(f, n).unwrap();
        let lcs: Vec<usize> = a.lower_central_series().iter().map(|s| s.rank()).collect();
        let ds: Vec<usize> = a.derived_series().iter().map(|s| s.rank()).collect();
        println!("{f} (n = {n}, dim = {}):", a.dim());
        println!("  lower central series dims: {lcs:?}");
        println!("  derived series dims:       {ds:?}");
        println!(
            "  solvable: {} (index {:?}), nilpotent: {}",
            a.is_solvable(),
            a.solvability_index(),
            a.is_nilpotent()
        );

        // The nilradical is span(e_1..e_n) in every family.
        let indices: Vec<usize> = match f {
            FamilyId::R0 => (1..=n).collect(),
            _ => (0..n).collect(),
        };
        let vectors = indices.iter().map(|&i| basis_vector(a.dim(), i)).collect();
        let nil = a
            .subalgebra_restrict(&Subspace::span(a.dim(), vectors))
            .unwrap();
        println!(
            "  nilradical: dim {}, null-filiform: {}, filiform: {}",
            nil.dim(),
            nil.is_null_filiform(),
            nil.is_filiform()
        );
        println!();
    }
}
