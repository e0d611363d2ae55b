//! Finite fields GF(2^k) in the power basis of a root `w` of an irreducible
//! modulus over GF(2).

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use crate::gf2x;
use crate::AlgebraError;

/// Largest degree for which log/antilog tables are built.
const TABLE_DEGREE_LIMIT: u32 = 16;

#[derive(Debug)]
pub struct FieldSpec {
    modulus: u64,
    degree: u32,
    tables: Option<Tables>,
}

#[derive(Debug)]
struct Tables {
    log: Vec<u32>,
    // doubled so that log a + log b never needs a reduction
    exp: Vec<u64>,
}

/// Shared handle to a field. Cheap to clone; equality is modulus equality.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.modulus == other.0.modulus
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})[{}]", self.degree(), self.modulus_string())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 1 {
            write!(f, "GF(2)")
        } else {
            write!(f, "GF(2^{}) mod {}", self.degree(), self.modulus_string())
        }
    }
}

impl Field {
    /// The prime field GF(2).
    pub fn gf2() -> Field {
        Field::canonical(1)
    }

    /// GF(2^k) defined by the smallest irreducible modulus of degree `k`.
    pub fn canonical(k: u32) -> Field {
        Field::build(gf2x::smallest_irreducible(k))
    }

    /// Field defined by a bit-packed modulus; rejects reducible moduli with
    /// their factorization in the error.
    pub fn from_modulus(modulus: u64) -> Result<Field, AlgebraError> {
        match gf2x::degree(modulus) {
            None | Some(0) => Err(AlgebraError::InvalidModulus(format!(
                "modulus {} has degree < 1",
                bits_to_string(modulus)
            ))),
            Some(_) if gf2x::is_irreducible(modulus) => Ok(Field::build(modulus)),
            Some(_) => Err(AlgebraError::ReducibleModulus(
                crate::univariate::describe_gf2_factorization(modulus),
            )),
        }
    }

    fn build(modulus: u64) -> Field {
        let degree = gf2x::degree(modulus).expect("nonzero modulus");
        let tables = (degree <= TABLE_DEGREE_LIMIT).then(|| Tables::new(modulus, degree));
        Field(Arc::new(FieldSpec {
            modulus,
            degree,
            tables,
        }))
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn modulus(&self) -> u64 {
        self.0.modulus
    }

    pub fn modulus_string(&self) -> String {
        bits_to_string(self.0.modulus)
    }

    /// Number of elements, 2^k.
    pub fn size(&self) -> u128 {
        1u128 << self.0.degree
    }

    /// Raw value of the generator `w` (the class of `w` modulo the modulus).
    pub fn generator_value(&self) -> u64 {
        if self.degree() == 1 {
            // w + 1 = 0
            1
        } else {
            0b10
        }
    }

    pub fn elem(&self, value: u64) -> FieldElement {
        debug_assert!(value >> self.0.degree == 0, "non-reduced field value");
        FieldElement {
            field: self.clone(),
            value,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    pub fn generator(&self) -> FieldElement {
        self.elem(self.generator_value())
    }

    /// All elements in increasing raw order. Panics for fields above 2^24.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        assert!(self.degree() <= 24, "refusing to enumerate a large field");
        (0..1u64 << self.degree()).map(move |v| self.elem(v))
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.0.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => gf2x::mulmod(a, b, self.0.modulus, self.0.degree),
        }
    }

    #[inline]
    pub fn square(&self, a: u64) -> u64 {
        self.mul(a, a)
    }

    pub fn inv(&self, a: u64) -> Result<u64, AlgebraError> {
        if a == 0 {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match &self.0.tables {
            Some(t) => {
                let order = (1u32 << self.0.degree) - 1;
                t.exp[((order - t.log[a as usize]) % order) as usize]
            }
            None => self.pow(a, (1u128 << self.0.degree) - 2),
        })
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64, AlgebraError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u64, e: u128) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.0.tables {
            Some(t) => {
                let order = ((1u64 << self.0.degree) - 1) as u128;
                let l = (t.log[a as usize] as u128 * (e % order)) % order;
                t.exp[l as usize]
            }
            None => gf2x::powmod(a, e, self.0.modulus, self.0.degree),
        }
    }

    /// The unique square root, a^(2^(k-1)).
    pub fn sqrt(&self, a: u64) -> u64 {
        let mut v = a;
        for _ in 1..self.0.degree {
            v = self.square(v);
        }
        v
    }

    /// Whether `a` lies in the subfield GF(2^d) (d must divide the degree).
    pub fn in_subfield(&self, a: u64, d: u32) -> bool {
        let mut v = a;
        for _ in 0..d {
            v = self.square(v);
        }
        v == a
    }

    /// Elements of the subfield GF(2^d), in increasing raw order.
    pub fn subfield_elements(&self, d: u32) -> Result<Vec<FieldElement>, AlgebraError> {
        if self.degree() % d != 0 {
            return Err(AlgebraError::FieldMismatch(format!(
                "GF(2^{d}) is not a subfield of {self}"
            )));
        }
        if d == self.degree() {
            return Ok(self.elements().collect());
        }
        // the subfield is generated by a^((q-1)/(2^d-1)) for a primitive a; the
        // enumeration below is cheap for the field sizes used here
        Ok(self.elements().filter(|e| self.in_subfield(e.value, d)).collect())
    }

    /// Embedding of this field into `target` sending `w` to the smallest root
    /// of the modulus in `target`.
    pub fn embedding_into(&self, target: &Field) -> Result<Embedding, AlgebraError> {
        if target.degree() % self.degree() != 0 {
            return Err(AlgebraError::FieldMismatch(format!(
                "{self} does not embed into {target}"
            )));
        }
        if self == target {
            return Ok(Embedding::identity(self));
        }
        let root = if self.degree() == 1 {
            1
        } else {
            crate::univariate::smallest_root_of_gf2_poly(self.modulus(), target).ok_or_else(
                || AlgebraError::FieldMismatch(format!("no root of modulus in {target}")),
            )?
        };
        let mut images = Vec::with_capacity(self.degree() as usize);
        let mut p = 1u64;
        for _ in 0..self.degree() {
            images.push(p);
            p = target.mul(p, root);
        }
        Ok(Embedding {
            source: self.clone(),
            target: target.clone(),
            images,
        })
    }

    /// The canonical field of degree lcm(deg self, deg other).
    pub fn compositum(&self, other: &Field) -> Field {
        let l = lcm(self.degree(), other.degree());
        if l == self.degree() {
            self.clone()
        } else if l == other.degree() {
            other.clone()
        } else {
            Field::canonical(l)
        }
    }

    /// Degree-`d` extension (canonical modulus of degree k*d).
    pub fn extension(&self, d: u32) -> Field {
        if d == 1 {
            self.clone()
        } else {
            Field::canonical(self.degree() * d)
        }
    }

    pub fn format_value(&self, v: u64) -> String {
        bits_to_string(v)
    }
}

impl Tables {
    fn new(modulus: u64, degree: u32) -> Tables {
        let q = 1usize << degree;
        let order = q - 1;
        let mut exp = vec![0u64; 2 * order.max(1)];
        let mut log = vec![0u32; q];
        let primitive = (1..q as u64)
            .find(|&g| multiplicative_order(g, modulus, degree) == order as u64)
            .expect("a primitive element exists");
        let mut v = 1u64;
        for i in 0..order {
            exp[i] = v;
            exp[i + order] = v;
            log[v as usize] = i as u32;
            v = gf2x::mulmod(v, primitive, modulus, degree);
        }
        Tables { log, exp }
    }
}

fn multiplicative_order(g: u64, m: u64, k: u32) -> u64 {
    let order = (1u64 << k) - 1;
    let mut n = order;
    let mut d = 2;
    let mut rest = order;
    while d * d <= rest {
        if rest % d == 0 {
            while rest % d == 0 {
                rest /= d;
            }
            while n % d == 0 && gf2x::powmod(g, (n / d) as u128, m, k) == 1 {
                n /= d;
            }
        }
        d += 1;
    }
    if rest > 1 && n % rest == 0 && gf2x::powmod(g, (n / rest) as u128, m, k) == 1 {
        n /= rest;
    }
    n
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Power-basis rendering in the generator name `w`.
pub fn bits_to_string(v: u64) -> String {
    if v == 0 {
        return "0".into();
    }
    let mut parts = Vec::new();
    for i in (0..64).rev() {
        if v >> i & 1 == 1 {
            parts.push(match i {
                0 => "1".to_string(),
                1 => "w".to_string(),
                _ => format!("w^{i}"),
            });
        }
    }
    parts.join("+")
}

/// A field homomorphism, determined by the images of the power basis.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    images: Vec<u64>,
}

impl Embedding {
    pub fn identity(field: &Field) -> Embedding {
        Embedding {
            source: field.clone(),
            target: field.clone(),
            images: (0..field.degree()).map(|i| 1u64 << i).collect(),
        }
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    #[inline]
    pub fn map(&self, v: u64) -> u64 {
        let mut acc = 0;
        let mut bits = v;
        let mut i = 0;
        while bits != 0 {
            if bits & 1 == 1 {
                acc ^= self.images[i];
            }
            bits >>= 1;
            i += 1;
        }
        acc
    }

    pub fn map_elem(&self, e: &FieldElement) -> FieldElement {
        debug_assert_eq!(e.field, self.source);
        self.target.elem(self.map(e.value))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Embedding) -> Embedding {
        assert_eq!(self.target, next.source, "embeddings do not compose");
        Embedding {
            source: self.source.clone(),
            target: next.target.clone(),
            images: self.images.iter().map(|&v| next.map(v)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }
}

/// An element of a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u64,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    pub fn inv(&self) -> Result<FieldElement, AlgebraError> {
        Ok(self.field.elem(self.field.inv(self.value)?))
    }

    pub fn sqrt(&self) -> FieldElement {
        self.field.elem(self.field.sqrt(self.value))
    }

    pub fn pow(&self, e: u128) -> FieldElement {
        self.field.elem(self.field.pow(self.value, e))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, AlgebraError> {
        self.check(other);
        Ok(self.field.elem(self.field.div(self.value, other.value)?))
    }

    fn check(&self, other: &FieldElement) {
        assert_eq!(self.field, other.field, "field mismatch");
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", bits_to_string(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", bits_to_string(self.value))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        self.field.elem(self.value ^ rhs.value)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + rhs
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        self.field.elem(self.field.mul(self.value, rhs.value))
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Field {
        Field::from_modulus(0b111).unwrap()
    }

    #[test]
    fn gf4_arithmetic() {
        let f = gf4();
        let w = f.generator();
        assert_eq!((&w * &w).value(), 0b11);
        assert_eq!(w.inv().unwrap().value(), 0b11);
        assert_eq!(w.sqrt().value(), 0b11);
        assert!(f.zero().inv().is_err());
    }

    #[test]
    fn default_field_is_gf2() {
        let f = Field::gf2();
        assert_eq!(f.degree(), 1);
        assert_eq!(f.size(), 2);
        assert_eq!(f.generator().value(), 1);
    }

    #[test]
    fn reducible_modulus_is_rejected_with_factorization() {
        let err = Field::from_modulus(0b101).unwrap_err();
        assert_eq!(err.to_string(), "reducible: (w+1)^2");
    }

    #[test]
    fn frobenius_is_bijective_exhaustively() {
        for k in 1..=4 {
            let f = Field::canonical(k);
            for a in f.elements() {
                assert_eq!((&a.sqrt() * &a.sqrt()), a);
                assert_eq!(a.pow(1u128 << k), a);
            }
        }
    }

    #[test]
    fn table_and_carryless_paths_agree() {
        let small = Field::canonical(16);
        for a in [1u64, 2, 3, 0x1234, 0xffff, 0x8001] {
            for b in [1u64, 7, 0x4321, 0xfffe] {
                assert_eq!(
                    small.mul(a, b),
                    gf2x::mulmod(a, b, small.modulus(), 16),
                    "{a} * {b}"
                );
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let f4 = gf4();
        let f16 = Field::canonical(4);
        let e = f4.embedding_into(&f16).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(
                    e.map(f4.mul(a.value(), b.value())),
                    f16.mul(e.map(a.value()), e.map(b.value()))
                );
            }
        }
        assert!(Field::canonical(3).embedding_into(&f16).is_err());
    }

    #[test]
    fn subfield_enumeration() {
        let f16 = Field::canonical(4);
        assert_eq!(f16.subfield_elements(2).unwrap().len(), 4);
        assert_eq!(f16.subfield_elements(1).unwrap().len(), 2);
    }
}
