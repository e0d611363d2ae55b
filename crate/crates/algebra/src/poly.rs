//! Sparse multivariate Laurent polynomials over GF(2^k).
//!
//! Terms are kept sorted in descending graded reverse lexicographic order with
//! respect to the registry order, so every polynomial has one canonical form.
//! Negative exponents are only allowed on variables flagged as inverted.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::field::{Embedding, Field, FieldElement};
use crate::{AlgebraError, Result};

/// Ordered variable names with a subset of inverted (unit) variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableRegistry {
    names: Vec<String>,
    inverted: Vec<bool>,
}

impl VariableRegistry {
    pub fn new<S: AsRef<str>>(names: &[S], inverted: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(AlgebraError::DuplicateVariable(n.clone()));
            }
            if !is_identifier(n) || n == "w" {
                return Err(AlgebraError::UnknownVariable(format!("invalid name {n}")));
            }
        }
        let mut flags = vec![false; names.len()];
        for inv in inverted {
            let inv = inv.as_ref();
            let i = names
                .iter()
                .position(|n| n == inv)
                .ok_or_else(|| AlgebraError::UnknownVariable(inv.to_string()))?;
            flags[i] = true;
        }
        Ok(VariableRegistry {
            names,
            inverted: flags,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_inverted(&self, i: usize) -> bool {
        self.inverted[i]
    }

    pub fn inverted_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.inverted[i]).collect()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug)]
struct RingInner {
    field: Field,
    vars: VariableRegistry,
}

/// A Laurent polynomial ring: a field plus a variable registry.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.vars == other.0.vars)
    }
}
impl Eq for Ring {}

impl Ring {
    pub fn new(field: Field, vars: VariableRegistry) -> Ring {
        Ring(Arc::new(RingInner { field, vars }))
    }

    /// Convenience constructor from name lists.
    pub fn with_vars<S: AsRef<str>>(field: &Field, names: &[S], inverted: &[S]) -> Result<Ring> {
        Ok(Ring::new(field.clone(), VariableRegistry::new(names, inverted)?))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn vars(&self) -> &VariableRegistry {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.0
            .vars
            .index(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Result<Polynomial> {
        Ok(self.var_at(self.var_index(name)?))
    }

    pub fn var_at(&self, i: usize) -> Polynomial {
        let mut m = Monomial::one(self.nvars());
        m.0[i] = 1;
        Polynomial::monomial(self, m, 1)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self)
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::constant(self, 1)
    }

    /// Same variables over another field.
    pub fn with_field(&self, field: &Field) -> Ring {
        if field == self.field() {
            self.clone()
        } else {
            Ring::new(field.clone(), self.vars().clone())
        }
    }

    /// Parse a polynomial in this ring.
    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        crate::parse::parse_polynomial(self, text)
    }
}

/// Exponent vector. Entries may be negative at inverted positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub SmallVec<[i32; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn from_exps(exps: &[i32]) -> Monomial {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Exponent difference (may be negative).
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    pub fn pow(&self, e: i32) -> Monomial {
        Monomial(self.0.iter().map(|&a| a * e).collect())
    }

    pub fn inverse(&self) -> Monomial {
        self.pow(-1)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn weighted_degree(&self, weights: &[i32]) -> i64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w as i64)
            .sum()
    }
}

/// Graded reverse lexicographic comparison (first registry variable largest).
pub fn grevlex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&e| e as i64).sum();
    let db: i64 = b.iter().map(|&e| e as i64).sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

/// Pure lexicographic comparison.
pub fn lex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    a.cmp(b)
}

/// A polynomial: nonzero terms in descending grevlex order.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, u64)>,
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Ring, c: u64) -> Polynomial {
        Polynomial::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_element(ring: &Ring, c: &FieldElement) -> Polynomial {
        assert_eq!(c.field(), ring.field(), "field mismatch");
        Polynomial::constant(ring, c.value())
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: u64) -> Polynomial {
        debug_assert_eq!(m.0.len(), ring.nvars());
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Build from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Polynomial {
        let mut map: HashMap<Monomial, u64> = HashMap::new();
        for (m, c) in terms {
            if c != 0 {
                *map.entry(m).or_insert(0) ^= c;
            }
        }
        Polynomial::from_map(ring, map)
    }

    fn from_map(ring: &Ring, map: HashMap<Monomial, u64>) -> Polynomial {
        let mut terms: Vec<(Monomial, u64)> = map.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_unstable_by(|a, b| grevlex_cmp(&b.0 .0, &a.0 .0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Checks the Laurent support rule.
    pub fn validate(&self) -> Result<()> {
        for (m, _) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if e < 0 && !self.ring.vars().is_inverted(i) {
                    return Err(AlgebraError::NegativeExponent(
                        self.ring.vars().name(i).to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, u64)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1 == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> u64 {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    pub fn coefficient(&self, m: &Monomial) -> u64 {
        self.terms
            .binary_search_by(|(t, _)| grevlex_cmp(&m.0, &t.0))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<&(Monomial, u64)> {
        self.terms.first()
    }

    /// Highest total degree (None for zero).
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Lowest total degree of a term (None for zero).
    pub fn order(&self) -> Option<i64> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    pub fn weighted_order(&self, weights: &[i32]) -> Option<i64> {
        self.terms.iter().map(|(m, _)| m.weighted_degree(weights)).min()
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.0[i]).max()
    }

    pub fn min_degree_in(&self, i: usize) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.0[i]).min()
    }

    /// Variables that occur with a nonzero exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.0[i] != 0))
            .collect()
    }

    pub fn scale(&self, c: u64) -> Polynomial {
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        let f = self.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u64) -> Polynomial {
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        let f = self.field();
        // multiplying by a monomial preserves the grevlex order of terms
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), f.mul(*a, c)))
                .collect(),
        }
    }

    /// Make the leading coefficient 1.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field().inv(*c).expect("nonzero")),
        }
    }

    fn check_ring(&self, other: &Polynomial) {
        assert!(self.ring == other.ring, "ring mismatch");
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_ring(other);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match grevlex_cmp(&a[i].0 .0, &b[j].0 .0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].1 ^ b[j].1;
                    if c != 0 {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_monomial(m, *c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_monomial(m, *c);
        }
        let f = self.field();
        let mut map: HashMap<Monomial, u64> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *map.entry(ma.mul(mb)).or_insert(0) ^= f.mul(*ca, *cb);
            }
        }
        Polynomial::from_map(&self.ring, map)
    }

    /// Frobenius: squares every coefficient and doubles every exponent.
    pub fn square(&self) -> Polynomial {
        let f = self.field();
        // doubling exponents preserves the term order
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.pow(2), f.square(*c)))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(&self.ring, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Integer power allowing negative exponents for invertible monomials.
    pub fn pow_signed(&self, e: i32) -> Result<Polynomial> {
        if e >= 0 {
            return Ok(self.pow(e as u32));
        }
        Ok(self.invert_monomial()?.pow((-e) as u32))
    }

    /// Inverse of a single term whose variables are all inverted.
    pub fn invert_monomial(&self) -> Result<Polynomial> {
        if self.terms.len() != 1 {
            return Err(AlgebraError::NotInvertible(self.to_string()));
        }
        let (m, c) = &self.terms[0];
        for (i, &e) in m.0.iter().enumerate() {
            if e != 0 && !self.ring.vars().is_inverted(i) {
                return Err(AlgebraError::NotInvertible(self.to_string()));
            }
        }
        Ok(Polynomial::monomial(
            &self.ring,
            m.inverse(),
            self.field().inv(*c)?,
        ))
    }

    /// Formal partial derivative; `d(t^e) = e t^(e-1)` also for e < 0.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.0[var];
            if e.rem_euclid(2) == 0 {
                None
            } else {
                let mut m = m.clone();
                m.0[var] -= 1;
                Some((m, *c))
            }
        });
        Polynomial::from_terms(&self.ring, terms.collect::<Vec<_>>())
    }

    /// Exact value at a point given as raw field values, one per variable.
    pub fn evaluate(&self, point: &[u64]) -> Result<u64> {
        assert_eq!(point.len(), self.ring.nvars(), "point dimension");
        let f = self.field();
        let mut inverses: Vec<Option<u64>> = vec![None; point.len()];
        for (i, &v) in point.iter().enumerate() {
            if self.ring.vars().is_inverted(i) {
                if v == 0 {
                    return Err(AlgebraError::ZeroAtInvertedVariable(
                        self.ring.vars().name(i).to_string(),
                    ));
                }
                inverses[i] = Some(f.inv(v)?);
            }
        }
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = f.mul(t, f.pow(point[i], e as u128));
                } else if e < 0 {
                    let inv = inverses[i].ok_or_else(|| {
                        AlgebraError::NegativeExponent(self.ring.vars().name(i).to_string())
                    })?;
                    t = f.mul(t, f.pow(inv, (-e) as u128));
                }
            }
            acc ^= t;
        }
        Ok(acc)
    }

    /// Evaluate at a point of `FieldElement`s.
    pub fn evaluate_at(&self, point: &[FieldElement]) -> Result<FieldElement> {
        let raw: Vec<u64> = point.iter().map(|e| e.value()).collect();
        Ok(self.field().elem(self.evaluate(&raw)?))
    }

    /// Substitute variable `i` by `images[i]` (all in the target ring) without
    /// clearing denominators. Negative powers need invertible monomial images.
    pub fn substitute_raw(&self, target: &Ring, images: &[Polynomial]) -> Result<Polynomial> {
        assert_eq!(images.len(), self.ring.nvars(), "one image per variable");
        for img in images {
            if img.ring != *target {
                return Err(AlgebraError::RingMismatch("substitution image".into()));
            }
        }
        let mut power_cache: Vec<HashMap<i32, Polynomial>> = vec![HashMap::new(); images.len()];
        let mut acc = Polynomial::zero(target);
        let f = target.field();
        if f != self.field() {
            return Err(AlgebraError::FieldMismatch(
                "substitution across fields; map coefficients first".into(),
            ));
        }
        let mut groups: HashMap<Monomial, Polynomial> = HashMap::new();
        // monomial images are combined directly; others go through powers
        let monomial_image: Vec<bool> = images.iter().map(|p| p.terms.len() == 1).collect();
        for (m, c) in &self.terms {
            let mut mono = Polynomial::constant(target, *c);
            let mut rest = Polynomial::constant(target, 1);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = match power_cache[i].get(&e) {
                    Some(p) => p.clone(),
                    None => {
                        let p = images[i].pow_signed(e)?;
                        power_cache[i].insert(e, p.clone());
                        p
                    }
                };
                if monomial_image[i] {
                    mono = mono.mul(&p);
                } else {
                    rest = rest.mul(&p);
                }
            }
            if mono.is_zero() {
                continue;
            }
            let (mm, mc) = mono.terms[0].clone();
            let key = mm;
            let entry = groups.entry(key).or_insert_with(|| Polynomial::zero(target));
            *entry = entry.add(&rest.scale(mc));
        }
        let mut keys: Vec<Monomial> = groups.keys().cloned().collect();
        keys.sort();
        for k in keys {
            let p = &groups[&k];
            acc = acc.add(&p.mul_monomial(&k, 1));
        }
        acc.validate()?;
        Ok(acc)
    }

    /// Substitute and clear: the result is multiplied by the returned monomial
    /// (in inverted target variables) so that every inverted variable has
    /// minimal exponent 0.
    pub fn substitute(&self, target: &Ring, images: &[Polynomial]) -> Result<(Polynomial, Monomial)> {
        let raw = self.substitute_raw(target, images)?;
        let clearing = raw.clearing_monomial();
        Ok((raw.mul_monomial(&clearing, 1), clearing))
    }

    /// Monomial in inverted variables that normalizes the minimal exponent of
    /// each inverted variable to 0.
    pub fn clearing_monomial(&self) -> Monomial {
        let n = self.ring.nvars();
        let mut m = Monomial::one(n);
        for i in self.ring.vars().inverted_indices() {
            if let Some(e) = self.min_degree_in(i) {
                m.0[i] = -e;
            }
        }
        m
    }

    /// Multiply by the clearing monomial.
    pub fn cleared(&self) -> Polynomial {
        self.mul_monomial(&self.clearing_monomial(), 1)
    }

    /// Keep terms of (weighted) degree ≤ `order`.
    pub fn jet_truncate(&self, weights: Option<&[i32]>, order: i64) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| match weights {
                Some(w) => m.weighted_degree(w) <= order,
                None => m.degree() <= order,
            })
            .cloned()
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Terms of exactly the given (weighted) degree.
    pub fn homogeneous_part(&self, weights: Option<&[i32]>, degree: i64) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| match weights {
                Some(w) => m.weighted_degree(w) == degree,
                None => m.degree() == degree,
            })
            .cloned()
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Substitute `x_i -> x_i + point_i`.
    pub fn translate(&self, point: &[u64]) -> Result<Polynomial> {
        let images: Vec<Polynomial> = (0..self.ring.nvars())
            .map(|i| self.ring.var_at(i).add(&Polynomial::constant(&self.ring, point[i])))
            .collect();
        self.substitute_raw(&self.ring.clone(), &images)
    }

    /// Push coefficients through a field embedding into `target`
    /// (same variables).
    pub fn map_field(&self, emb: &Embedding, target: &Ring) -> Polynomial {
        assert_eq!(emb.source(), self.field(), "embedding source");
        assert_eq!(emb.target(), target.field(), "embedding target");
        assert_eq!(target.nvars(), self.ring.nvars());
        Polynomial {
            ring: target.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), emb.map(*c)))
                .collect(),
        }
    }

    /// Re-home into a ring over the same field, sending variable `i` to
    /// variable `var_map[i]` of `target`.
    pub fn rename(&self, target: &Ring, var_map: &[usize]) -> Polynomial {
        assert_eq!(target.field(), self.field());
        let n = target.nvars();
        Polynomial::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut e = Monomial::one(n);
                for (i, &x) in m.0.iter().enumerate() {
                    e.0[var_map[i]] += x;
                }
                (e, *c)
            }).collect::<Vec<_>>(),
        )
    }

    /// Terms as a map keyed by monomial.
    pub fn to_map(&self) -> HashMap<Monomial, u64> {
        self.terms.iter().cloned().collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            let num: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| power_string(self.ring.vars().name(i), e))
                .collect();
            let den: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e < 0)
                .map(|(i, &e)| power_string(self.ring.vars().name(i), -e))
                .collect();
            let coef = if *c == 1 {
                None
            } else if c.count_ones() == 1 {
                Some(field.format_value(*c))
            } else {
                Some(format!("({})", field.format_value(*c)))
            };
            let mut factors: Vec<String> = coef.into_iter().collect();
            factors.extend(num);
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(f, "{}", factors.join("*"))?;
            for d in den {
                write!(f, "/{d}")?;
            }
        }
        Ok(())
    }
}

fn power_string(name: &str, e: i32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(names: &[&str], inv: &[&str]) -> Ring {
        Ring::with_vars(&Field::gf2(), names, inv).unwrap()
    }

    #[test]
    fn freshmans_dream() {
        let r = ring(&["t"], &[]);
        let p = r.parse("(t+1)^4").unwrap();
        assert_eq!(p, r.parse("t^4+1").unwrap());
    }

    #[test]
    fn product_of_example_coefficients() {
        let r = ring(&["t"], &[]);
        let a = r.parse("t^3*(t+1)").unwrap();
        let b = r.parse("t^3*(t+1)^3").unwrap();
        assert_eq!(&a * &b, r.parse("t^10+t^6").unwrap());
        assert!((&a * &r.zero()).is_zero());
    }

    #[test]
    fn derivatives() {
        let r = ring(&["t", "y"], &[]);
        let f = r.parse("t*(t+1)^4").unwrap();
        assert_eq!(f.derivative(0), r.parse("(t+1)^4").unwrap());
        let ab = r.parse("t^10+t^6").unwrap();
        assert!(ab.derivative(0).is_zero());
        assert!(r.parse("y^2").unwrap().derivative(1).is_zero());
        let ri = ring(&["t"], &["t"]);
        let inv = ri.parse("1/t").unwrap();
        assert_eq!(inv.derivative(0), ri.parse("1/t^2").unwrap());
    }

    #[test]
    fn weierstrass_chart_transition() {
        let src = ring(&["x", "y", "t"], &[]);
        let dst = ring(&["x0", "y0", "t"], &["x0", "t"]);
        let f = src.parse("y^2+t^6*y+x^3+(t^2+t^6)*x+t^7").unwrap();
        let images = vec![
            dst.parse("t^2/x0").unwrap(),
            dst.parse("t^2*y0/x0^2").unwrap(),
            dst.var("t").unwrap(),
        ];
        let (g, clear) = f.substitute(&dst, &images).unwrap();
        assert_eq!(
            g,
            dst.parse("y0^2+t^4*x0^2*y0+x0^3+t^2*x0+t^4*x0^3+t^3*x0^4").unwrap()
        );
        assert_eq!(clear.exps(), &[4, 0, -4]);
    }

    #[test]
    fn inverse_substitution_clears() {
        let rs = ring(&["s"], &["s"]);
        let rt = ring(&["t"], &["t"]);
        let f = rs.parse("s^2+s").unwrap();
        let (g, clear) = f.substitute(&rt, &[rt.parse("1/t").unwrap()]).unwrap();
        assert_eq!(g, rt.parse("1+t").unwrap());
        assert_eq!(clear.exps(), &[2]);
        let g = rs.parse("s^2+s+1").unwrap();
        let id = g.substitute(&rs, &[rs.var("s").unwrap()]).unwrap();
        assert_eq!(id.0, g);
    }

    #[test]
    fn evaluation() {
        let f4 = Field::from_modulus(0b111).unwrap();
        let r = Ring::with_vars(&f4, &["t"], &[]).unwrap();
        let p = r.parse("t^2+t+1").unwrap();
        assert_eq!(p.evaluate(&[0b10]).unwrap(), 0);
        assert_eq!(r.parse("w").unwrap().evaluate(&[0]).unwrap(), 0b10);
        let ri = Ring::with_vars(&f4, &["t"], &["t"]).unwrap();
        assert!(ri.parse("1/t").unwrap().evaluate(&[0]).is_err());
    }

    #[test]
    fn truncation() {
        let r = ring(&["x", "y", "z"], &[]);
        let f = r.parse("z^2+x^3+y^7+x^9").unwrap();
        assert_eq!(f.jet_truncate(None, 7), r.parse("z^2+x^3+y^7").unwrap());
        assert!(r.zero().jet_truncate(None, 3).is_zero());
        assert_eq!(r.parse("x+x*y").unwrap().jet_truncate(None, 1), r.parse("x").unwrap());
    }

    #[test]
    fn display_roundtrip() {
        let f4 = Field::from_modulus(0b111).unwrap();
        let r = Ring::with_vars(&f4, &["x", "t"], &["t"]).unwrap();
        let p = r.parse("(w+1)*x^2/t + w*t^3 + 1").unwrap();
        let q = r.parse(&p.to_string()).unwrap();
        assert_eq!(p, q);
    }
}
