//! Symbolic replay of the automorphism necessity arguments.
//!
//! Starting from fully general images of the algebra generators (every
//! coefficient an unknown `a_{r,c}`), the engine imposes homomorphism
//! equations pair by pair in a fixed, family-specific order, solving the
//! resulting polynomial constraints by linear elimination. Division is
//! only ever performed by quantities previously recorded as nonzero.
//! The run produces a [`Certificate`] whose steps can be audited
//! independently, and whose final images are compared against the known
//! closed form of the automorphism group.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::families::{build, FamilyId};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Bracket of two vectors with polynomial coordinates, via the algebra's
/// exact structure constants.
pub fn sym_bracket(a: &Algebra, p: &[Poly], q: &[Poly]) -> Vec<Poly> {
    let dim = a.dim();
    assert_eq!(p.len(), dim);
    assert_eq!(q.len(), dim);
    let mut out = vec![Poly::zero(); dim];
    for ((i, j), coords) in a.table() {
        if p[*i].is_zero() || q[*j].is_zero() {
            continue;
        }
        let prod = &p[*i] * &q[*j];
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out[k] = &out[k] + &prod.scale(c);
            }
        }
    }
    out
}

/// One derived substitution `var = value`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Constraint {
    pub var: String,
    pub value_poly: String,
}

/// One imposed pair and everything it yielded: solved variables plus any
/// relations left unresolved at that point (solved later or discharged).
#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub pair: [String; 2],
    pub constraints: Vec<Constraint>,
    pub residuals: Vec<String>,
}

/// Audit trail of a full necessity replay.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub family: String,
    pub n: usize,
    /// Variables assumed nonzero (bijectivity of the map), quoted so every
    /// division performed during solving is justified.
    pub assumptions: Vec<String>,
    pub steps: Vec<StepRecord>,
    /// Entry `[i][j]` is the coefficient of basis vector `j` in the image
    /// of basis vector `i`, written in the final renamed parameters.
    pub final_images: Vec<Vec<String>>,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization cannot fail")
    }

    /// Looks up a solved constraint and the pair that produced it.
    pub fn constraint_source(&self, var: &str) -> Option<(&[String; 2], &Constraint)> {
        for step in &self.steps {
            for c in &step.constraints {
                if c.var == var {
                    return Some((&step.pair, c));
                }
            }
        }
        None
    }
}

/// Sort key for unknowns `a_{r,c}`: numeric (row, column), so elimination
/// order does not depend on decimal string lengths.
fn var_key(name: &str) -> (u64, u64, String) {
    if let Some(body) = name.strip_prefix("a_{").and_then(|s| s.strip_suffix('}')) {
        if let Some((r, c)) = body.split_once(',') {
            if let (Ok(r), Ok(c)) = (r.parse(), c.parse()) {
                return (r, c, String::new());
            }
        }
    }
    (u64::MAX, u64::MAX, name.to_string())
}

/// A linear map whose entries are polynomials in unknowns, together with
/// the substitutions discovered so far.
#[derive(Clone, Debug)]
pub struct SymbolicMap {
    dim: usize,
    /// Column `i` is the image of basis vector `i`; `None` until it is
    /// either declared symbolic or propagated from brackets.
    images: Vec<Option<Vec<Poly>>>,
    solved: BTreeMap<String, Poly>,
    /// Variables asserted nonzero; the only permitted divisors.
    side_conditions: Vec<String>,
    /// Relations that could not be solved when first seen.
    pending: Vec<Poly>,
}

/// What a single imposed pair produced.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub constraints: Vec<Constraint>,
    /// Relations still open after this step's fixpoint.
    pub residuals: Vec<Poly>,
}

impl SymbolicMap {
    pub fn new(dim: usize) -> Self {
        SymbolicMap {
            dim,
            images: vec![None; dim],
            solved: BTreeMap::new(),
            side_conditions: Vec::new(),
            pending: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Fills column `col` with fresh unknowns named by `namer(row, col)`.
    pub fn set_symbolic_column(&mut self, col: usize, namer: &dyn Fn(usize, usize) -> String) {
        let column = (0..self.dim).map(|r| Poly::var(&namer(r, col))).collect();
        self.images[col] = Some(column);
    }

    pub fn assume_nonzero(&mut self, var: &str) {
        if !self.side_conditions.iter().any(|s| s == var) {
            self.side_conditions.push(var.to_string());
        }
    }

    pub fn side_conditions(&self) -> &[String] {
        self.side_conditions.as_slice()
    }

    pub fn solved(&self) -> &BTreeMap<String, Poly> {
        &self.solved
    }

    /// Applies every discovered substitution.
    fn reduce(&self, p: &Poly) -> Poly {
        let mut out = p.clone();
        loop {
            let mut changed = false;
            for v in out.vars() {
                if let Some(value) = self.solved.get(&v) {
                    out = out.substitute(&v, value);
                    changed = true;
                }
            }
            if !changed {
                return out;
            }
        }
    }

    /// Cancels factors known to be nonzero. Sound because a product is
    /// zero iff some factor is, and side conditions are exactly the
    /// factors excluded from vanishing.
    fn strip_nonzero_factors(&self, p: &Poly) -> Poly {
        let mut out = p.clone();
        loop {
            let mut changed = false;
            for s in &self.side_conditions {
                if out.is_zero() {
                    return out;
                }
                let var = Poly::var(s);
                if let Some(q) = out.div_exact(&var) {
                    out = q;
                    changed = true;
                }
            }
            if !changed {
                return out;
            }
        }
    }

    /// A polynomial provably nonzero under the side conditions: a single
    /// term whose variables are all asserted nonzero.
    fn is_known_nonzero(&self, p: &Poly) -> bool {
        let mut terms = p.terms();
        let first = match terms.next() {
            Some(t) => t,
            None => return false,
        };
        if terms.next().is_some() {
            return false;
        }
        first
            .0
            .vars()
            .all(|v| self.side_conditions.iter().any(|s| s == v))
    }

    /// Tries to eliminate one variable from a reduced, stripped relation.
    /// Returns the substitution, or `None` when the relation must wait.
    fn try_solve(&self, p: &Poly, defer: &[String]) -> Result<Option<(String, Poly)>> {
        if p.is_zero() {
            return Ok(None);
        }
        if let Some(c) = p.constant_value() {
            if !c.is_zero() {
                return Err(Error::Inconsistency(format!(
                    "relation reduced to nonzero constant {c} = 0"
                )));
            }
        }
        let mut vars: Vec<String> = p
            .vars()
            .into_iter()
            .filter(|v| !defer.iter().any(|d| d == v))
            .collect();
        vars.sort_by_key(|v| var_key(v));
        // First preference: a variable appearing linearly with a nonzero
        // constant coefficient — no nonvanishing assumption needed.
        for v in &vars {
            if let Some((a, b)) = p.split_linear_in(v) {
                if let Some(c) = a.constant_value() {
                    if !c.is_zero() {
                        return Ok(Some((v.clone(), b.scale(&-(&Scalar::one() / &c)))));
                    }
                }
            }
        }
        // Otherwise: a coefficient provably nonzero under the recorded
        // side conditions, provided the division comes out exact.
        for v in &vars {
            if let Some((a, b)) = p.split_linear_in(v) {
                if !a.is_zero() && self.is_known_nonzero(&a) {
                    if let Some(q) = (&Poly::zero() - &b).div_exact(&a) {
                        return Ok(Some((v.clone(), q)));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Records `var = value`, back-substituting everywhere and
    /// re-examining pending relations (discharging those that vanish).
    fn record_solution(&mut self, var: &str, value: Poly) -> Result<()> {
        debug_assert!(!self.solved.contains_key(var));
        for v in self.solved.values_mut() {
            *v = v.substitute(var, &value);
        }
        self.solved.insert(var.to_string(), value);
        let mut remaining = Vec::new();
        for p in std::mem::take(&mut self.pending) {
            let r = self.strip_nonzero_factors(&self.reduce(&p));
            if r.is_zero() {
                continue;
            }
            if let Some(c) = r.constant_value() {
                return Err(Error::Inconsistency(format!(
                    "pending relation reduced to nonzero constant {c} = 0"
                )));
            }
            remaining.push(r);
        }
        self.pending = remaining;
        Ok(())
    }

    /// Image of basis vector `col`, fully reduced.
    pub fn image(&self, col: usize) -> Result<Vec<Poly>> {
        match &self.images[col] {
            Some(column) => Ok(column.iter().map(|p| self.reduce(p)).collect()),
            None => Err(Error::Shape(format!(
                "image of basis vector {col} has not been set or propagated"
            ))),
        }
    }

    fn apply(&self, v: &[Scalar]) -> Result<Vec<Poly>> {
        let mut out = vec![Poly::zero(); self.dim];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let col = self.image(i)?;
            for k in 0..self.dim {
                out[k] = &out[k] + &col[k].scale(c);
            }
        }
        Ok(out)
    }

    /// Imposes `phi([u,v]) = [phi(u), phi(v)]` coefficient-wise, solving
    /// whatever becomes linear (variables in `defer` are never chosen as
    /// elimination targets during this step). Unsolved relations are kept
    /// pending for later discharge.
    pub fn impose_pair(
        &mut self,
        a: &Algebra,
        u: &[Scalar],
        v: &[Scalar],
        defer: &[String],
    ) -> Result<StepOutcome> {
        if u.len() != self.dim || v.len() != self.dim || a.dim() != self.dim {
            return Err(Error::Shape(
                "impose_pair: vector/algebra dimension mismatch".into(),
            ));
        }
        let lhs = self.apply(&a.bracket(u, v)?)?;
        let phi_u = self.apply(u)?;
        let phi_v = self.apply(v)?;
        let rhs = sym_bracket(a, &phi_u, &phi_v);
        let mut relations: Vec<Poly> = (0..self.dim).map(|k| &lhs[k] - &rhs[k]).collect();

        let mut constraints = Vec::new();
        // In-step fixpoint: keep sweeping this step's relations until a
        // full pass solves nothing new.
        loop {
            let mut progress = false;
            let mut open = Vec::new();
            for p in relations {
                let r = self.strip_nonzero_factors(&self.reduce(&p));
                if r.is_zero() {
                    continue;
                }
                match self.try_solve(&r, defer)? {
                    Some((var, value)) => {
                        constraints.push(Constraint {
                            var: var.clone(),
                            value_poly: value.to_string(),
                        });
                        self.record_solution(&var, value)?;
                        progress = true;
                    }
                    None => open.push(r),
                }
            }
            relations = open;
            if !progress {
                break;
            }
        }
        // One more reduction pass so reported residuals reflect everything
        // solved during the step.
        let mut residuals = Vec::new();
        for p in relations {
            let r = self.strip_nonzero_factors(&self.reduce(&p));
            if !r.is_zero() {
                self.pending.push(r.clone());
                residuals.push(r);
            }
        }
        Ok(StepOutcome {
            constraints,
            residuals,
        })
    }

    /// Resolves every pending relation (no deferrals) or fails with the
    /// survivors. Used once the scripted pair sequence is exhausted.
    pub fn flush(&mut self) -> Result<Vec<Constraint>> {
        let mut constraints = Vec::new();
        loop {
            let mut progress = false;
            let mut open = Vec::new();
            for p in std::mem::take(&mut self.pending) {
                let r = self.strip_nonzero_factors(&self.reduce(&p));
                if r.is_zero() {
                    continue;
                }
                match self.try_solve(&r, &[])? {
                    Some((var, value)) => {
                        constraints.push(Constraint {
                            var: var.clone(),
                            value_poly: value.to_string(),
                        });
                        self.record_solution(&var, value)?;
                        progress = true;
                    }
                    None => open.push(r),
                }
            }
            self.pending = open;
            if !progress {
                break;
            }
        }
        if !self.pending.is_empty() {
            let survivors: Vec<String> = self.pending.iter().map(|p| p.to_string()).collect();
            return Err(Error::Residual(format!(
                "unresolved relations after scripted sequence: {}",
                survivors.join("; ")
            )));
        }
        Ok(constraints)
    }

    /// Defines the image of basis vector `target` as the bracket of two
    /// already-known images.
    pub fn propagate_bracket(
        &mut self,
        a: &Algebra,
        target: usize,
        left: usize,
        right: usize,
    ) -> Result<()> {
        let l = self.image(left)?;
        let r = self.image(right)?;
        self.images[target] = Some(sym_bracket(a, &l, &r));
        Ok(())
    }
}

/// Closed-form images for the two replayable families, in the renamed
/// parameters (`alpha`, `beta`, and for the larger family `gamma`).
fn expected_images(f: FamilyId, n: usize) -> Vec<Vec<Poly>> {
    let dim = f.dim(n);
    let mut cols = vec![vec![Poly::zero(); dim]; dim];
    match f {
        FamilyId::R0 => {
            let alpha = Poly::var("alpha");
            let beta = Poly::var("beta");
            for i in 0..=n {
                for j in i..=n {
                    let k = (j - i) as u32;
                    let coeff =
                        &alpha.pow(k).scale(&Scalar::inv_factorial(k)) * &beta.pow(i as u32);
                    cols[i][j] = coeff;
                }
            }
        }
        FamilyId::R1 => {
            let alpha = Poly::var("alpha");
            let beta = Poly::var("beta");
            let gamma = Poly::var("gamma");
            let e = |i: usize| i - 1;
            let x = n;
            let y = n + 1;
            cols[e(1)][e(1)] = alpha.clone();
            for i in 2..=n {
                for j in i..=n {
                    let k = (j - i) as u32;
                    let mut coeff = &alpha.pow((i - 2) as u32) * &beta;
                    coeff = &coeff * &gamma.pow(k).scale(&Scalar::inv_factorial(k));
                    if k % 2 == 1 {
                        coeff = &Poly::zero() - &coeff;
                    }
                    cols[e(i)][e(j)] = coeff;
                }
            }
            cols[x][e(1)] = gamma;
            cols[x][x] = Poly::one();
            cols[y][y] = Poly::one();
        }
        _ => unreachable!("replay is only scripted for the first two families"),
    }
    cols
}

/// Renaming applied at certificate finalization: surviving unknowns to
/// group parameters.
fn final_renaming(f: FamilyId, n: usize) -> Vec<(String, &'static str)> {
    match f {
        FamilyId::R0 => vec![
            ("a_{1,0}".to_string(), "alpha"),
            ("a_{1,1}".to_string(), "beta"),
        ],
        FamilyId::R1 => vec![
            ("a_{1,1}".to_string(), "alpha"),
            ("a_{2,2}".to_string(), "beta"),
            (format!("a_{{1,{}}}", n + 1), "gamma"),
        ],
        _ => unreachable!(),
    }
}

enum Action {
    /// Record a nonvanishing assumption (bijectivity of the map).
    Assume(String),
    /// Impose the homomorphism equation on a basis pair, optionally
    /// refusing to eliminate certain variables during that step.
    Impose(usize, usize, Vec<String>),
}

fn script(f: FamilyId, n: usize) -> Vec<Action> {
    use Action::*;
    match f {
        // Generators e_0, e_1; unknowns 0-indexed to match the table.
        FamilyId::R0 => vec![
            Assume("a_{1,1}".into()),
            Impose(0, 0, vec![]),
            Impose(0, 1, vec![]),
        ],
        // Generators e_1, e_2, x, y at columns 0, 1, n, n+1; unknowns
        // 1-indexed with rows/columns n+1 ~ x and n+2 ~ y.
        FamilyId::R1 => {
            let x = n;
            let y = n + 1;
            let e = |i: usize| i - 1;
            vec![
                Impose(e(1), x, vec![]),
                Impose(e(2), y, vec![]),
                Assume("a_{1,1}".into()),
                Assume("a_{2,2}".into()),
                Impose(e(1), e(1), vec![]),
                Impose(y, e(1), vec![]),
                Impose(x, e(1), vec![format!("a_{{{n},1}}")]),
                Impose(x, e(2), vec![]),
                Impose(y, x, vec![]),
                Impose(e(2), y, vec![]),
                Impose(y, y, vec![]),
                Impose(e(1), y, vec![]),
                Impose(x, y, vec![]),
                Impose(e(2), x, vec![]),
            ]
        }
        _ => unreachable!(),
    }
}

/// Runs the scripted elimination for one family and compares the outcome
/// with the closed form of the automorphism group.
pub fn replay(f: FamilyId, n: usize) -> Result<Certificate> {
    match f {
        FamilyId::R0 | FamilyId::R1 => {}
        _ => {
            return Err(Error::Param(format!(
                "replay is only scripted for R0 and R1, not {f}"
            )))
        }
    }
    f.check_n(n)?;
    if n > 8 {
        return Err(Error::Param(format!(
            "replay is limited to n <= 8 (symbolic cost); got {n}"
        )));
    }
    let a = build(f, n)?;
    let dim = a.dim();
    let mut s = SymbolicMap::new(dim);

    // Unknown naming follows the a_{row,col} convention of the closed
    // forms: 0-based for R0, 1-based for R1.
    let offset = if f == FamilyId::R0 { 0 } else { 1 };
    let namer = move |r: usize, c: usize| format!("a_{{{},{}}}", r + offset, c + offset);
    let generators: Vec<usize> = match f {
        FamilyId::R0 => vec![0, 1],
        FamilyId::R1 => vec![0, 1, n, n + 1],
        _ => unreachable!(),
    };
    for &g in &generators {
        s.set_symbolic_column(g, &namer);
    }

    let mut steps = Vec::new();
    for action in script(f, n) {
        match action {
            Action::Assume(v) => s.assume_nonzero(&v),
            Action::Impose(u, v, defer) => {
                let eu = crate::algebra::basis_vector(dim, u);
                let ev = crate::algebra::basis_vector(dim, v);
                let outcome = s.impose_pair(&a, &eu, &ev, &defer)?;
                steps.push(StepRecord {
                    pair: [a.label(u).to_string(), a.label(v).to_string()],
                    constraints: outcome.constraints,
                    residuals: outcome.residuals.iter().map(|p| p.to_string()).collect(),
                });
            }
        }
    }
    let closure = s.flush()?;
    if !closure.is_empty() {
        steps.push(StepRecord {
            pair: ["*".into(), "*".into()],
            constraints: closure,
            residuals: vec![],
        });
    }

    // Propagate the non-generator images: phi(e_k) = [phi(e_{k-1}), phi(e_1)].
    match f {
        FamilyId::R0 => {
            for k in 2..=n {
                s.propagate_bracket(&a, k, k - 1, 1)?;
            }
        }
        FamilyId::R1 => {
            for k in 3..=n {
                s.propagate_bracket(&a, k - 1, k - 2, 0)?;
            }
        }
        _ => unreachable!(),
    }

    // Finalize: rename surviving unknowns to the group parameters and
    // compare with the closed form.
    let renaming = final_renaming(f, n);
    let expected = expected_images(f, n);
    let mut final_images = Vec::with_capacity(dim);
    let mut matches = true;
    for col in 0..dim {
        let mut image = s.image(col)?;
        for p in image.iter_mut() {
            for (old, new) in &renaming {
                *p = p.substitute(old, &Poly::var(new));
            }
        }
        if image != expected[col] {
            matches = false;
        }
        final_images.push(image.iter().map(|p| p.to_string()).collect());
    }

    Ok(Certificate {
        family: f.to_string(),
        n,
        assumptions: s.side_conditions().to_vec(),
        steps,
        final_images,
        matches,
    })
}
