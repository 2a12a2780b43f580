//! Homomorphism and automorphism verification, derivation spaces, and
//! exact exponentials of nilpotent derivations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Vector};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::SplitMix64;
use crate::scalar::Scalar;

/// Square linear self-map; column `i` holds the coordinates of the image
/// of basis vector `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Self {
        assert!(matrix.is_square(), "linear map matrix must be square");
        LinearMap { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap::new(Matrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vector> {
        self.matrix.mul_vector(v)
    }
}

/// Outcome of a homomorphism check: either it holds on every basis pair,
/// or the first failing pair is reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomCheck {
    Holds,
    Fails {
        /// Basis indices (i, j) with `phi([b_i,b_j]) != [phi(b_i), phi(b_j)]`.
        pair: (usize, usize),
        discrepancy: Vector,
    },
}

impl HomCheck {
    pub fn holds(&self) -> bool {
        matches!(self, HomCheck::Holds)
    }
}

/// Checks `phi([b_i,b_j]) = [phi(b_i), phi(b_j)]` on all basis pairs,
/// which is sufficient by bilinearity. A handful of random vector pairs is
/// cross-checked as a smoke test; it is advisory and cannot change the
/// verdict.
pub fn is_homomorphism(a: &Algebra, m: &LinearMap) -> Result<HomCheck> {
    let dim = a.dim();
    if m.dim() != dim {
        return Err(Error::Shape(format!(
            "map of dimension {} on algebra of dimension {dim}",
            m.dim()
        )));
    }
    let g = m.matrix();
    for j in 0..dim {
        // w = image of v -> [v, phi(b_j)] as a matrix, assembled sparsely
        // from the right-multiplication operators of the table.
        let mut right_by_image = Matrix::zeros(dim, dim);
        for ((p, q), prod) in a.table() {
            let scale = &g[(*q, j)];
            if scale.is_zero() {
                continue;
            }
            for (k, c) in prod.iter().enumerate() {
                if !c.is_zero() {
                    right_by_image[(k, *p)] += scale * c;
                }
            }
        }
        for i in 0..dim {
            // phi([b_i, b_j])
            let lhs = m.apply(&a.basis_product(i, j))?;
            // [phi(b_i), phi(b_j)]
            let rhs = right_by_image.mul_vector(&g.column(i))?;
            if lhs != rhs {
                let discrepancy = lhs.iter().zip(&rhs).map(|(l, r)| l - r).collect();
                return Ok(HomCheck::Fails {
                    pair: (i, j),
                    discrepancy,
                });
            }
        }
    }
    debug_assert!(
        random_pair_smoke_test(a, m),
        "basis pairs passed but a random pair failed"
    );
    Ok(HomCheck::Holds)
}

/// Advisory cross-check on random vectors; by bilinearity it cannot
/// disagree with the basis-pair check.
fn random_pair_smoke_test(a: &Algebra, m: &LinearMap) -> bool {
    let mut rng = SplitMix64::new(0x5eed);
    for _ in 0..20 {
        let u: Vector = (0..a.dim()).map(|_| rng.small_scalar()).collect();
        let v: Vector = (0..a.dim()).map(|_| rng.small_scalar()).collect();
        let lhs = m.apply(&a.bracket(&u, &v).unwrap()).unwrap();
        let rhs = a
            .bracket(&m.apply(&u).unwrap(), &m.apply(&v).unwrap())
            .unwrap();
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Bijective homomorphism test.
pub fn is_automorphism(a: &Algebra, m: &LinearMap) -> Result<bool> {
    Ok(is_homomorphism(a, m)?.holds() && m.matrix().invert().is_ok())
}

/// Basis of the space of derivations, each satisfying
/// `D[x,y] = [Dx,y] + [x,Dy]` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationBasis {
    pub elements: Vec<Matrix>,
    pub dimension: usize,
}

/// Exact check of the derivation equation on all basis pairs.
pub fn is_derivation(a: &Algebra, d: &Matrix) -> Result<bool> {
    if !d.is_square() || d.rows() != a.dim() {
        return Err(Error::Shape(format!(
            "derivation candidate {}x{} on algebra of dimension {}",
            d.rows(),
            d.cols(),
            a.dim()
        )));
    }
    let dm = LinearMap::new(d.clone());
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let lhs = dm.apply(&a.basis_product(i, j))?;
            let di = dm.apply(&crate::algebra::basis_vector(a.dim(), i))?;
            let dj = dm.apply(&crate::algebra::basis_vector(a.dim(), j))?;
            let mut rhs = a.bracket(&di, &crate::algebra::basis_vector(a.dim(), j))?;
            let term2 = a.bracket(&crate::algebra::basis_vector(a.dim(), i), &dj)?;
            for (r, t) in rhs.iter_mut().zip(term2) {
                *r += t;
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Solves the derivation equation `D[b_i,b_j] = [Db_i,b_j] + [b_i,Db_j]`
/// over all basis pairs as one exact linear system and returns a
/// deterministic nullspace basis.
///
/// Equations are assembled with pairs `(i,j)` in lexicographic order and
/// the unknown matrix flattened row-major, so the basis is reproducible.
pub fn derivation_space(a: &Algebra) -> DerivationBasis {
    let dim = a.dim();
    let nvars = dim * dim;
    let var = |row: usize, col: usize| row * dim + col;

    // by_right[j] and by_left[i] index the sparse table for the two
    // bracket terms of the derivation equation.
    let mut by_right: Vec<Vec<(usize, &Vector)>> = vec![Vec::new(); dim];
    let mut by_left: Vec<Vec<(usize, &Vector)>> = vec![Vec::new(); dim];
    for ((p, q), prod) in a.table() {
        by_right[*q].push((*p, prod));
        by_left[*p].push((*q, prod));
    }

    let mut rows: Vec<BTreeMap<usize, Scalar>> = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let w = a.basis_product(i, j);
            for k in 0..dim {
                let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                let mut add = |v: usize, c: Scalar| {
                    if c.is_zero() {
                        return;
                    }
                    let e = row.entry(v).or_insert_with(Scalar::zero);
                    *e += c;
                    if e.is_zero() {
                        row.remove(&v);
                    }
                };
                for (mth, wm) in w.iter().enumerate() {
                    if !wm.is_zero() {
                        add(var(k, mth), wm.clone());
                    }
                }
                for (mth, prod) in &by_right[j] {
                    if !prod[k].is_zero() {
                        add(var(*mth, i), -&prod[k]);
                    }
                }
                for (mth, prod) in &by_left[i] {
                    if !prod[k].is_zero() {
                        add(var(*mth, j), -&prod[k]);
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }

    // Presolve: a single-term equation forces its variable to zero;
    // propagate until fixpoint. This keeps the dense solve small.
    let mut forced_zero = vec![false; nvars];
    loop {
        let mut changed = false;
        rows.retain_mut(|row| {
            row.retain(|v, _| !forced_zero[*v]);
            if row.is_empty() {
                return false;
            }
            if row.len() == 1 {
                let v = *row.keys().next().unwrap();
                forced_zero[v] = true;
                changed = true;
                return false;
            }
            true
        });
        if !changed {
            break;
        }
    }

    // Deduplicate scaled copies of the same equation.
    let mut distinct: BTreeSet<Vec<(usize, Scalar)>> = BTreeSet::new();
    for row in rows {
        let lead = row.values().next().unwrap().clone();
        let inv = lead.recip().expect("nonzero leading coefficient");
        let key: Vec<(usize, Scalar)> = row.into_iter().map(|(v, c)| (v, &c * &inv)).collect();
        distinct.insert(key);
    }

    let live_vars: Vec<usize> = (0..nvars).filter(|v| !forced_zero[*v]).collect();
    let col_of: BTreeMap<usize, usize> =
        live_vars.iter().enumerate().map(|(c, v)| (*v, c)).collect();

    let mut dense = Vec::with_capacity(distinct.len());
    for row in &distinct {
        let mut r = vec![Scalar::zero(); live_vars.len()];
        for (v, c) in row {
            r[col_of[v]] = c.clone();
        }
        dense.push(r);
    }
    let null = if dense.is_empty() {
        // No constraints on the live variables: every one is free.
        (0..live_vars.len())
            .map(|c| {
                let mut m = Matrix::zeros(live_vars.len(), 1);
                m[(c, 0)] = Scalar::one();
                m
            })
            .collect::<Vec<_>>()
    } else {
        Matrix::from_rows(dense).nullspace()
    };

    let mut elements = Vec::with_capacity(null.len());
    for vec in null {
        let mut d = Matrix::zeros(dim, dim);
        for (c, v) in live_vars.iter().enumerate() {
            let value = vec[(c, 0)].clone();
            if !value.is_zero() {
                d[(v / dim, v % dim)] = value;
            }
        }
        debug_assert_eq!(is_derivation(a, &d), Ok(true));
        elements.push(d);
    }
    DerivationBasis {
        dimension: elements.len(),
        elements,
    }
}

/// `exp(D) = sum_{m=0}^{k-1} D^m / m!` for a nilpotent derivation.
///
/// Refuses non-derivations and non-nilpotent matrices: the exponential of
/// a non-nilpotent derivation is not exactly representable over the
/// rationals.
pub fn exp_derivation(a: &Algebra, d: &Matrix) -> Result<LinearMap> {
    if !is_derivation(a, d)? {
        return Err(Error::NotDerivation);
    }
    let dim = a.dim();
    // Find the nilpotency degree; d^k = 0 must happen by k = dim.
    let mut powers = vec![Matrix::identity(dim)];
    let mut current = Matrix::identity(dim);
    let mut nilpotent = false;
    for _ in 1..=dim {
        current = current.multiply(d)?;
        if current.is_zero() {
            nilpotent = true;
            break;
        }
        powers.push(current.clone());
    }
    if !nilpotent {
        return Err(Error::NotNilpotent);
    }
    let mut sum = Matrix::zeros(dim, dim);
    for (m, p) in powers.iter().enumerate() {
        sum = sum.add(&p.scale(&Scalar::inv_factorial(m as u32)))?;
    }
    Ok(LinearMap::new(sum))
}

// ---------------------------------------------------------------------------
// JSON schema: { "dim": n, "columns": [["c", ...], ...] }, column i = image
// of basis vector i.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct LinearMapRepr {
    dim: usize,
    columns: Vec<Vec<Scalar>>,
}

impl Serialize for LinearMap {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = LinearMapRepr {
            dim: self.dim(),
            columns: (0..self.dim()).map(|c| self.matrix.column(c)).collect(),
        };
        repr.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for LinearMap {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = LinearMapRepr::deserialize(de)?;
        if repr.columns.len() != repr.dim || repr.columns.iter().any(|c| c.len() != repr.dim) {
            return Err(serde::de::Error::custom("columns do not match dim"));
        }
        let mut m = Matrix::zeros(repr.dim, repr.dim);
        for (c, col) in repr.columns.iter().enumerate() {
            for (r, s) in col.iter().enumerate() {
                m[(r, c)] = s.clone();
            }
        }
        Ok(LinearMap::new(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{aut_matrix, build, recover_params, AutParams, FamilyId};

    #[test]
    fn zero_map_is_homomorphism_but_not_automorphism() {
        let a = build(FamilyId::R0, 3).unwrap();
        let zero = LinearMap::new(Matrix::zeros(4, 4));
        assert!(is_homomorphism(&a, &zero).unwrap().holds());
        assert!(!is_automorphism(&a, &zero).unwrap());
    }

    #[test]
    fn family_matrix_is_automorphism() {
        let a = build(FamilyId::R0, 3).unwrap();
        let p = AutParams::R0 {
            alpha: Scalar::one(),
            beta: Scalar::one(),
        };
        let m = aut_matrix(FamilyId::R0, 3, &p).unwrap();
        assert!(is_automorphism(&a, &m).unwrap());
    }

    #[test]
    fn scaling_one_chain_element_breaks_homomorphism() {
        // diag(1,2,1,1) on R0(3): phi([e_1,e_1]) = e_2 but
        // [phi(e_1),phi(e_1)] = 4 e_2.
        let a = build(FamilyId::R0, 3).unwrap();
        let mut m = Matrix::identity(4);
        m[(1, 1)] = Scalar::from_int(2);
        match is_homomorphism(&a, &LinearMap::new(m)).unwrap() {
            HomCheck::Fails { pair, discrepancy } => {
                assert_eq!(pair, (1, 1));
                let mut expect = vec![Scalar::zero(); 4];
                expect[2] = Scalar::from_int(-3);
                assert_eq!(discrepancy, expect);
            }
            HomCheck::Holds => panic!("expected failure"),
        }
    }

    #[test]
    fn identity_is_automorphism() {
        let a = build(FamilyId::R2, 4).unwrap();
        assert!(is_automorphism(&a, &LinearMap::identity(6)).unwrap());
    }

    #[test]
    fn shape_mismatch_rejected() {
        let a = build(FamilyId::R0, 2).unwrap();
        assert!(matches!(
            is_homomorphism(&a, &LinearMap::identity(5)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn abelian_derivations_fill_the_matrix_space() {
        let labels = (0..3).map(|i| format!("b{i}")).collect();
        let a = Algebra::new(3, labels, Default::default()).unwrap();
        assert_eq!(derivation_space(&a).dimension, 9);
    }

    #[test]
    fn derivation_dims_match_parameter_counts() {
        assert_eq!(
            derivation_space(&build(FamilyId::R0, 3).unwrap()).dimension,
            2
        );
        assert_eq!(
            derivation_space(&build(FamilyId::R1, 4).unwrap()).dimension,
            3
        );
        assert_eq!(
            derivation_space(&build(FamilyId::R2, 4).unwrap()).dimension,
            4
        );
        assert_eq!(
            derivation_space(&build(FamilyId::R3, 4).unwrap()).dimension,
            3
        );
    }

    #[test]
    fn derivation_commutators_are_derivations() {
        let a = build(FamilyId::R1, 4).unwrap();
        let basis = derivation_space(&a);
        for d1 in &basis.elements {
            for d2 in &basis.elements {
                let comm = d1
                    .multiply(d2)
                    .unwrap()
                    .add(&d2.multiply(d1).unwrap().scale(&Scalar::from_int(-1)))
                    .unwrap();
                assert_eq!(is_derivation(&a, &comm), Ok(true));
            }
        }
    }

    #[test]
    fn exp_zero_is_identity() {
        let a = build(FamilyId::R0, 3).unwrap();
        let e = exp_derivation(&a, &Matrix::zeros(4, 4)).unwrap();
        assert_eq!(*e.matrix(), Matrix::identity(4));
    }

    #[test]
    fn exp_of_nilpotent_derivation_lands_in_family() {
        let a = build(FamilyId::R0, 3).unwrap();
        let basis = derivation_space(&a);
        let mut found_nilpotent = false;
        for d in &basis.elements {
            match exp_derivation(&a, d) {
                Ok(m) => {
                    found_nilpotent = true;
                    assert!(is_automorphism(&a, &m).unwrap());
                    recover_params(FamilyId::R0, 3, &m).unwrap();
                }
                Err(Error::NotNilpotent) => {}
                Err(other) => panic!("unexpected error {other:?}"),
            }
        }
        assert!(
            found_nilpotent,
            "R0 should have a nilpotent derivation direction"
        );
    }

    #[test]
    fn exp_rejects_non_derivation_and_non_nilpotent() {
        let a = build(FamilyId::R0, 3).unwrap();
        let mut junk = Matrix::zeros(4, 4);
        junk[(0, 1)] = Scalar::one();
        junk[(3, 2)] = Scalar::from_int(5);
        assert_eq!(exp_derivation(&a, &junk), Err(Error::NotDerivation));

        // A diagonal derivation of R0 is never nilpotent.
        let basis = derivation_space(&a);
        let diagonal = basis
            .elements
            .iter()
            .find(|d| (0..4).any(|i| !d[(i, i)].is_zero()));
        if let Some(d) = diagonal {
            assert_eq!(exp_derivation(&a, d), Err(Error::NotNilpotent));
        }
    }

    #[test]
    fn linear_map_json_round_trip() {
        let p = AutParams::R0 {
            alpha: Scalar::ratio(1, 2),
            beta: Scalar::from_int(3),
        };
        let m = aut_matrix(FamilyId::R0, 3, &p).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: LinearMap = serde_json::from_str(&text).unwrap();
        assert_eq!(m, back);
    }
}
