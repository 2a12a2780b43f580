//! Sparse multivariate polynomials over exact rationals.
//!
//! Terms are kept in a canonical graded-lexicographic order (total degree
//! first, then variable names), so printing and equality are stable and
//! certificates diff cleanly.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Monomial: variable name -> positive exponent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), 1);
        Monomial(m)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    /// Quotient monomial if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            let have = out.get_mut(v)?;
            if *have < *e {
                return None;
            }
            *have -= e;
            if *have == 0 {
                out.remove(v);
            }
        }
        Some(Monomial(out))
    }

    pub fn without(&self, name: &str) -> Monomial {
        let mut out = self.0.clone();
        out.remove(name);
        Monomial(out)
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: higher total degree first, ties broken by the
    /// lexicographically earliest variable carrying the larger exponent.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut names: BTreeSet<&String> = self.0.keys().collect();
        names.extend(other.0.keys());
        for name in names {
            let a = self.degree_in(name);
            let b = other.degree_in(name);
            match a.cmp(&b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.clone()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    /// No zero coefficients are stored.
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name), Scalar::one());
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            Some(Scalar::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Single variable with coefficient 1?
    pub fn as_single_var(&self) -> Option<&str> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if !c.is_one() || m.total_degree() != 1 {
            return None;
        }
        m.vars().next().map(|s| s.as_str())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            out.extend(m.vars().cloned());
        }
        out
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.terms
            .keys()
            .map(|m| m.degree_in(name))
            .max()
            .unwrap_or(0)
    }

    fn insert_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, s)| (m.clone(), s * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    /// Highest term in the graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Replaces `name` by `value` everywhere.
    pub fn substitute(&self, name: &str, value: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let d = m.degree_in(name);
            if d == 0 {
                out.insert_term(m.clone(), c.clone());
            } else {
                let rest = Poly {
                    terms: [(m.without(name), c.clone())].into_iter().collect(),
                };
                let replaced = &rest * &value.pow(d);
                out = &out + &replaced;
            }
        }
        out
    }

    /// Exact evaluation; every variable must be assigned.
    pub fn eval(&self, assignment: &BTreeMap<String, Scalar>) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for v in m.vars() {
                let value = assignment
                    .get(v)
                    .ok_or_else(|| Error::MissingVariable(v.clone()))?;
                term *= value.pow(m.degree_in(v));
            }
            total += term;
        }
        Ok(total)
    }

    /// Writes `self = A*x + B` with `A`, `B` free of `x`, provided `x`
    /// appears at most linearly.
    pub fn split_linear_in(&self, name: &str) -> Option<(Poly, Poly)> {
        if self.degree_in(name) > 1 {
            return None;
        }
        let mut a = Poly::zero();
        let mut b = Poly::zero();
        for (m, c) in &self.terms {
            if m.degree_in(name) == 1 {
                a.insert_term(m.without(name), c.clone());
            } else {
                b.insert_term(m.clone(), c.clone());
            }
        }
        Some((a, b))
    }

    /// Exact polynomial quotient, or `None` when `divisor` does not divide
    /// `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        let (dm, dc) = divisor.leading_term().unwrap();
        let dm = dm.clone();
        let dc = dc.clone();
        let mut remainder = self.clone();
        let mut quotient = Poly::zero();
        while !remainder.is_zero() {
            let (rm, rc) = remainder.leading_term().unwrap();
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            let t = Poly {
                terms: [(qm, qc)].into_iter().collect(),
            };
            quotient = &quotient + &t;
            remainder = &remainder - &(&t * divisor);
        }
        Some(quotient)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Poly {
    /// Canonical graded-lex form, highest term first, e.g.
    /// `1/2*a_{1,0}^2 - a_{2,0}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}
