//! Structure-constant algebras and their structural invariants.
//!
//! An [`Algebra`] is a finite-dimensional (generally non-associative)
//! algebra given by a sparse multiplication table on a fixed basis. Pairs
//! absent from the table multiply to zero. All predicates here (Leibniz
//! identity, solvability, nilpotency, null-filiform/filiform) are decided
//! exactly over the rationals.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Coordinate vector relative to an algebra's basis.
pub type Vector = Vec<Scalar>;

/// Returns the standard basis vector `index` in dimension `dim`.
pub fn basis_vector(dim: usize, index: usize) -> Vector {
    let mut v = vec![Scalar::zero(); dim];
    v[index] = Scalar::one();
    v
}

/// Finite-dimensional algebra defined by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    dim: usize,
    basis_labels: Vec<String>,
    /// (i, j) -> coordinates of `[b_i, b_j]`; absent pairs are zero.
    table: BTreeMap<(usize, usize), Vector>,
}

/// One failure of the Leibniz identity on a basis triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizViolation {
    pub triple: (usize, usize, usize),
    /// `[[b_i,b_j],b_k] - [[b_i,b_k],b_j] - [b_i,[b_j,b_k]]`, nonzero.
    pub discrepancy: Vector,
}

impl Algebra {
    /// Builds an algebra from its nonzero products. Zero vectors are
    /// dropped so the stored table is canonical.
    pub fn new(
        dim: usize,
        basis_labels: Vec<String>,
        products: BTreeMap<(usize, usize), Vector>,
    ) -> Result<Self> {
        if basis_labels.len() != dim {
            return Err(Error::Shape(format!(
                "{} labels for dimension {dim}",
                basis_labels.len()
            )));
        }
        {
            let mut sorted = basis_labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != dim {
                return Err(Error::Shape("duplicate basis labels".into()));
            }
        }
        let mut table = BTreeMap::new();
        for ((i, j), v) in products {
            if i >= dim || j >= dim {
                return Err(Error::Shape(format!(
                    "table index ({i},{j}) out of range for dimension {dim}"
                )));
            }
            if v.len() != dim {
                return Err(Error::Shape(format!(
                    "product vector for ({i},{j}) has length {}, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|s| !s.is_zero()) {
                table.insert((i, j), v);
            }
        }
        Ok(Algebra {
            dim,
            basis_labels,
            table,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis_labels[i]
    }

    /// Index of a basis label, if present.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis_labels.iter().position(|l| l == label)
    }

    pub fn table(&self) -> &BTreeMap<(usize, usize), Vector> {
        &self.table
    }

    /// `[b_i, b_j]` straight from the table (zero when absent).
    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        self.table
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| vec![Scalar::zero(); self.dim])
    }

    /// Bilinear extension of the table.
    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vector> {
        if u.len() != self.dim || v.len() != self.dim {
            return Err(Error::Shape(format!(
                "bracket arguments of length {}/{} in dimension {}",
                u.len(),
                v.len(),
                self.dim
            )));
        }
        let mut out = vec![Scalar::zero(); self.dim];
        for ((i, j), prod) in &self.table {
            if u[*i].is_zero() || v[*j].is_zero() {
                continue;
            }
            let c = &u[*i] * &v[*j];
            for (k, coeff) in prod.iter().enumerate() {
                if !coeff.is_zero() {
                    out[k] += &c * coeff;
                }
            }
        }
        Ok(out)
    }

    /// Checks the Leibniz identity `[[x,y],z] = [[x,z],y] + [x,[y,z]]` on
    /// all basis triples, which suffices by trilinearity.
    pub fn check_leibniz(&self) -> Vec<LeibnizViolation> {
        let mut violations = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.basis_product(i, j);
                for k in 0..self.dim {
                    let ik = self.basis_product(i, k);
                    let jk = self.basis_product(j, k);
                    let lhs = self.bracket_with_basis_right(&ij, k);
                    let term1 = self.bracket_with_basis_right(&ik, j);
                    let term2 = self.bracket_with_basis_left(i, &jk);
                    let mut diff = lhs;
                    for r in 0..self.dim {
                        diff[r] -= &term1[r] + &term2[r];
                    }
                    if diff.iter().any(|s| !s.is_zero()) {
                        violations.push(LeibnizViolation {
                            triple: (i, j, k),
                            discrepancy: diff,
                        });
                    }
                }
            }
        }
        violations
    }

    /// `[w, b_k]` for a coordinate vector `w`.
    fn bracket_with_basis_right(&self, w: &[Scalar], k: usize) -> Vector {
        let mut out = vec![Scalar::zero(); self.dim];
        for (p, coeff) in w.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            if let Some(prod) = self.table.get(&(p, k)) {
                for (r, c) in prod.iter().enumerate() {
                    if !c.is_zero() {
                        out[r] += coeff * c;
                    }
                }
            }
        }
        out
    }

    /// `[b_i, w]` for a coordinate vector `w`.
    fn bracket_with_basis_left(&self, i: usize, w: &[Scalar]) -> Vector {
        let mut out = vec![Scalar::zero(); self.dim];
        for (q, coeff) in w.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            if let Some(prod) = self.table.get(&(i, q)) {
                for (r, c) in prod.iter().enumerate() {
                    if !c.is_zero() {
                        out[r] += coeff * c;
                    }
                }
            }
        }
        out
    }

    /// Span of all pairwise brackets `[x, y]`, `x` in `s`, `y` in `t`.
    pub fn subspace_product(&self, s: &Subspace, t: &Subspace) -> Subspace {
        let mut vectors = Vec::new();
        for x in s.basis_rows() {
            for y in t.basis_rows() {
                let w = self.bracket(x, y).expect("subspace vectors match dim");
                vectors.push(w);
            }
        }
        Subspace::span(self.dim, vectors)
    }

    pub fn full_space(&self) -> Subspace {
        Subspace::span(
            self.dim,
            (0..self.dim).map(|i| basis_vector(self.dim, i)).collect(),
        )
    }

    /// `L^1 = L`, `L^{k+1} = [L^k, L]`, listed until two consecutive terms
    /// coincide (the stabilized term appears once more at the end unless it
    /// already reached zero).
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = self.full_space();
        let mut series = vec![full.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.subspace_product(last, &full);
            if &next == last {
                if last.rank() != 0 {
                    series.push(next);
                }
                break;
            }
            let done = next.rank() == 0;
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    /// `L^{[1]} = L`, `L^{[k+1]} = [L^{[k]}, L^{[k]}]`.
    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut series = vec![self.full_space()];
        loop {
            let last = series.last().unwrap();
            let next = self.subspace_product(last, last);
            if &next == last {
                if last.rank() != 0 {
                    series.push(next);
                }
                break;
            }
            let done = next.rank() == 0;
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().rank() == 0
    }

    /// Smallest `k` with `L^k = 0`, when it exists.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let series = self.lower_central_series();
        if series.last().unwrap().rank() == 0 {
            Some(series.len())
        } else {
            None
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().rank() == 0
    }

    /// Smallest `s` with `L^{[s]} = 0`, when it exists.
    pub fn solvability_index(&self) -> Option<usize> {
        let series = self.derived_series();
        if series.last().unwrap().rank() == 0 {
            Some(series.len())
        } else {
            None
        }
    }

    /// `dim L^i = n+1-i` for `1 <= i <= n+1`.
    pub fn is_null_filiform(&self) -> bool {
        let n = self.dim;
        let series = self.lower_central_series();
        if series.last().unwrap().rank() != 0 {
            return false;
        }
        if series.len() != n + 1 {
            return false;
        }
        series
            .iter()
            .enumerate()
            .all(|(idx, s)| s.rank() == n - idx)
    }

    /// `dim L^i = n-i` for `2 <= i <= n` (and the series reaches zero).
    pub fn is_filiform(&self) -> bool {
        let n = self.dim;
        if n < 2 {
            return false;
        }
        let series = self.lower_central_series();
        if series.last().unwrap().rank() != 0 {
            return false;
        }
        // Need terms L^2..L^n; the computed series may be shorter only if
        // it hit zero early, in which case the dimension pattern fails.
        for i in 2..=n {
            let rank = series.get(i - 1).map_or(0, Subspace::rank);
            if rank != n - i {
                return false;
            }
        }
        true
    }

    /// `{ v : [u, v] = 0 for all u }`, computed as one exact nullspace.
    pub fn right_annihilator(&self) -> Subspace {
        // Stack, for every basis element b_i, the matrix of v -> [b_i, v].
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for i in 0..self.dim {
            let mut block = vec![vec![Scalar::zero(); self.dim]; self.dim];
            for ((p, j), prod) in &self.table {
                if *p != i {
                    continue;
                }
                for (k, c) in prod.iter().enumerate() {
                    if !c.is_zero() {
                        block[k][*j] += c.clone();
                    }
                }
            }
            rows.extend(block);
        }
        let stacked = Matrix::from_rows(rows);
        let basis = stacked
            .nullspace()
            .into_iter()
            .map(|col| col.column(0))
            .collect();
        Subspace::span(self.dim, basis)
    }

    /// Restricts the algebra to a bracket-closed subspace, expressing the
    /// induced table in the subspace's own coordinates.
    pub fn subalgebra_restrict(&self, s: &Subspace) -> Result<Algebra> {
        let k = s.rank();
        let mut products = BTreeMap::new();
        for (a, x) in s.basis_rows().iter().enumerate() {
            for (b, y) in s.basis_rows().iter().enumerate() {
                let w = self.bracket(x, y)?;
                let coords = s.coordinates(&w).ok_or_else(|| {
                    Error::NotClosed(format!(
                        "bracket of subspace basis vectors {a} and {b} leaves the subspace"
                    ))
                })?;
                products.insert((a, b), coords);
            }
        }
        let labels = (0..k).map(|i| format!("s{i}")).collect();
        Algebra::new(k, labels, products)
    }
}

/// Subspace of an algebra, stored as a reduced-row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    /// Rows are basis vectors; in rref with no zero rows.
    basis: Matrix,
    pivot_columns: Vec<usize>,
}

impl Subspace {
    /// Canonical span of a set of vectors.
    pub fn span(ambient_dim: usize, vectors: Vec<Vector>) -> Subspace {
        assert!(vectors.iter().all(|v| v.len() == ambient_dim));
        if vectors.is_empty() {
            return Subspace {
                ambient_dim,
                basis: Matrix::zeros(0, ambient_dim),
                pivot_columns: Vec::new(),
            };
        }
        let reduced = Matrix::from_rows(vectors).rref();
        let rank = reduced.rank;
        let rows = (0..rank).map(|r| reduced.reduced.row(r).to_vec()).collect();
        Subspace {
            ambient_dim,
            basis: Matrix::from_rows(rows),
            pivot_columns: reduced.pivot_columns,
        }
    }

    pub fn zero(ambient_dim: usize) -> Subspace {
        Subspace::span(ambient_dim, Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<&[Scalar]> {
        (0..self.basis.rows()).map(|r| self.basis.row(r)).collect()
    }

    /// Coordinates of `v` in the rref basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient_dim);
        let mut residual = v.to_vec();
        let mut coords = vec![Scalar::zero(); self.rank()];
        for (r, &pc) in self.pivot_columns.iter().enumerate() {
            let c = residual[pc].clone();
            if !c.is_zero() {
                for col in 0..self.ambient_dim {
                    let delta = &c * &self.basis[(r, col)];
                    residual[col] -= delta;
                }
                coords[r] = c;
            }
        }
        if residual.iter().all(Scalar::is_zero) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis_rows().iter().all(|row| other.contains(row))
    }
}

// ---------------------------------------------------------------------------
// JSON schema: { "dim": n, "basis": [...], "table": [ { "left", "right",
// "coords" } ] } with coords as scalar strings and zero pairs omitted.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TableEntry {
    left: usize,
    right: usize,
    coords: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    dim: usize,
    basis: Vec<String>,
    table: Vec<TableEntry>,
}

impl Serialize for Algebra {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = AlgebraRepr {
            dim: self.dim,
            basis: self.basis_labels.clone(),
            table: self
                .table
                .iter()
                .map(|((i, j), v)| TableEntry {
                    left: *i,
                    right: *j,
                    coords: v.clone(),
                })
                .collect(),
        };
        repr.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Algebra {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = AlgebraRepr::deserialize(de)?;
        let mut products = BTreeMap::new();
        for e in repr.table {
            if products.insert((e.left, e.right), e.coords).is_some() {
                return Err(serde::de::Error::custom(format!(
                    "duplicate table entry ({}, {})",
                    e.left, e.right
                )));
            }
        }
        Algebra::new(repr.dim, repr.basis, products).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build, FamilyId};

    fn abelian(dim: usize) -> Algebra {
        let labels = (0..dim).map(|i| format!("b{i}")).collect();
        Algebra::new(dim, labels, BTreeMap::new()).unwrap()
    }

    fn r0_nilradical(n: usize) -> Algebra {
        let a = build(FamilyId::R0, n).unwrap();
        let span = Subspace::span(n + 1, (1..=n).map(|i| basis_vector(n + 1, i)).collect());
        a.subalgebra_restrict(&span).unwrap()
    }

    #[test]
    fn bracket_r0_examples() {
        let a = build(FamilyId::R0, 3).unwrap();
        let e = |i| basis_vector(4, i);
        // [e_1, e_1] = e_2
        assert_eq!(a.bracket(&e(1), &e(1)).unwrap(), e(2));
        // [e_2, e_0] = -2 e_2
        let mut expect = vec![Scalar::zero(); 4];
        expect[2] = Scalar::from_int(-2);
        assert_eq!(a.bracket(&e(2), &e(0)).unwrap(), expect);
        // unlisted pair is zero
        assert!(a.bracket(&e(0), &e(2)).unwrap().iter().all(Scalar::is_zero));
    }

    #[test]
    fn bracket_shape_error() {
        let a = build(FamilyId::R0, 2).unwrap();
        let short = vec![Scalar::one()];
        assert!(matches!(a.bracket(&short, &short), Err(Error::Shape(_))));
    }

    #[test]
    fn leibniz_holds_for_r0() {
        assert!(build(FamilyId::R0, 4).unwrap().check_leibniz().is_empty());
    }

    #[test]
    fn leibniz_holds_for_abelian() {
        assert!(abelian(3).check_leibniz().is_empty());
    }

    #[test]
    fn leibniz_violation_for_idempotent_element() {
        // 1-dim algebra with [b,b] = b: LHS of the identity at (0,0,0) is b,
        // RHS is 2b, discrepancy -b.
        let mut products = BTreeMap::new();
        products.insert((0, 0), vec![Scalar::one()]);
        let a = Algebra::new(1, vec!["b".into()], products).unwrap();
        let v = a.check_leibniz();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].triple, (0, 0, 0));
        assert_eq!(v[0].discrepancy, vec![Scalar::from_int(-1)]);
    }

    #[test]
    fn subspace_product_examples() {
        let a = build(FamilyId::R0, 2).unwrap();
        let full = a.full_space();
        let sq = a.subspace_product(&full, &full);
        let expected = Subspace::span(3, vec![basis_vector(3, 1), basis_vector(3, 2)]);
        assert_eq!(sq, expected);

        let zero = Subspace::zero(3);
        assert_eq!(a.subspace_product(&full, &zero), zero);
    }

    #[test]
    fn r0_nilradical_product() {
        let a = build(FamilyId::R0, 3).unwrap();
        let n_span = Subspace::span(4, (1..=3).map(|i| basis_vector(4, i)).collect());
        let prod = a.subspace_product(&n_span, &n_span);
        let expected = Subspace::span(4, vec![basis_vector(4, 2), basis_vector(4, 3)]);
        assert_eq!(prod, expected);
    }

    #[test]
    fn series_dims_r0() {
        let a = build(FamilyId::R0, 3).unwrap();
        let lcs: Vec<usize> = a
            .lower_central_series()
            .iter()
            .map(Subspace::rank)
            .collect();
        // [e_i, e_0] = -i e_i keeps e_1..e_3 in every term.
        assert_eq!(lcs, vec![4, 3, 3]);
        assert!(!a.is_nilpotent());
        assert_eq!(a.nilpotency_index(), None);

        let ds: Vec<usize> = a.derived_series().iter().map(Subspace::rank).collect();
        assert_eq!(ds, vec![4, 3, 2, 0]);
        assert!(a.is_solvable());
        assert_eq!(a.solvability_index(), Some(4));
    }

    #[test]
    fn series_dims_nilradical() {
        let nil = r0_nilradical(3);
        let lcs: Vec<usize> = nil
            .lower_central_series()
            .iter()
            .map(Subspace::rank)
            .collect();
        assert_eq!(lcs, vec![3, 2, 1, 0]);
        assert_eq!(nil.nilpotency_index(), Some(4));
    }

    #[test]
    fn series_dims_abelian() {
        let a = abelian(5);
        let lcs: Vec<usize> = a
            .lower_central_series()
            .iter()
            .map(Subspace::rank)
            .collect();
        assert_eq!(lcs, vec![5, 0]);
        assert_eq!(a.nilpotency_index(), Some(2));
        let ds: Vec<usize> = a.derived_series().iter().map(Subspace::rank).collect();
        assert_eq!(ds, vec![5, 0]);
    }

    #[test]
    fn derived_series_r1_terminates() {
        let a = build(FamilyId::R1, 4).unwrap();
        assert!(a.is_solvable());
    }

    #[test]
    fn null_filiform_predicate() {
        assert!(r0_nilradical(4).is_null_filiform());
        assert!(!abelian(2).is_null_filiform());
        // R2 nilradical has dim L^2 = n-2, so it is filiform, not null-filiform.
        let a = build(FamilyId::R2, 5).unwrap();
        let span = Subspace::span(7, (0..5).map(|i| basis_vector(7, i)).collect());
        let nil = a.subalgebra_restrict(&span).unwrap();
        assert!(!nil.is_null_filiform());
        assert!(nil.is_filiform());
    }

    #[test]
    fn filiform_predicate() {
        let a = build(FamilyId::R1, 5).unwrap();
        let span = Subspace::span(7, (0..5).map(|i| basis_vector(7, i)).collect());
        let nil = a.subalgebra_restrict(&span).unwrap();
        assert!(nil.is_filiform());
        assert!(!abelian(3).is_filiform());
        assert!(!r0_nilradical(4).is_filiform());
    }

    #[test]
    fn right_annihilator_examples() {
        let r1 = build(FamilyId::R1, 4).unwrap();
        let ann = r1.right_annihilator();
        for i in 1..4 {
            assert!(
                ann.contains(&basis_vector(6, i)),
                "e_{} not in Ann_r",
                i + 1
            );
        }

        let ab = abelian(3);
        assert_eq!(ab.right_annihilator().rank(), 3);

        let r0 = build(FamilyId::R0, 3).unwrap();
        let ann0 = r0.right_annihilator();
        assert_eq!(ann0.rank(), 2);
        assert!(ann0.contains(&basis_vector(4, 2)));
        assert!(ann0.contains(&basis_vector(4, 3)));
        assert!(!ann0.contains(&basis_vector(4, 1)));
    }

    #[test]
    fn restrict_closed_and_not_closed() {
        let a = build(FamilyId::R0, 3).unwrap();
        let nil = r0_nilradical(3);
        assert_eq!(nil.dim(), 3);
        assert!(nil.is_null_filiform());

        let zero = Subspace::zero(4);
        assert_eq!(a.subalgebra_restrict(&zero).unwrap().dim(), 0);

        // span(e_0) is closed ([e_0,e_0]=0), span(e_1) is not ([e_1,e_1]=e_2).
        let span_e0 = Subspace::span(4, vec![basis_vector(4, 0)]);
        assert!(a.subalgebra_restrict(&span_e0).is_ok());
        let span_e1 = Subspace::span(4, vec![basis_vector(4, 1)]);
        assert!(matches!(
            a.subalgebra_restrict(&span_e1),
            Err(Error::NotClosed(_))
        ));
    }

    #[test]
    fn series_monotone_and_derived_descends_faster() {
        for (f, n) in [
            (FamilyId::R0, 4),
            (FamilyId::R1, 5),
            (FamilyId::R2, 4),
            (FamilyId::R3, 6),
        ] {
            let a = build(f, n).unwrap();
            let lcs = a.lower_central_series();
            let ds = a.derived_series();
            for w in lcs.windows(2) {
                assert!(w[1].is_subspace_of(&w[0]));
            }
            for w in ds.windows(2) {
                assert!(w[1].is_subspace_of(&w[0]));
            }
            for (k, dk) in ds.iter().enumerate() {
                if let Some(lk) = lcs.get(k) {
                    assert!(dk.is_subspace_of(lk));
                }
            }
        }
    }

    #[test]
    fn json_round_trip_is_identity() {
        let a = build(FamilyId::R2, 4).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        let back: Algebra = serde_json::from_str(&text).unwrap();
        assert_eq!(a, back);
    }
}
