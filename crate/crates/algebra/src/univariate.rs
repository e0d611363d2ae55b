//! Dense univariate polynomials over GF(2^k) and their factorization
//! (squarefree, distinct-degree, then equal-degree splitting).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{bits_to_string, Field};
use crate::poly::{Monomial, Polynomial};
use crate::{AlgebraError, Result};

/// Coefficients from degree 0 upwards; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    c: Vec<u64>,
}

impl UniPoly {
    pub fn new(field: &Field, mut c: Vec<u64>) -> UniPoly {
        while c.last() == Some(&0) {
            c.pop();
        }
        UniPoly {
            field: field.clone(),
            c,
        }
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> UniPoly {
        UniPoly::new(field, vec![1])
    }

    /// The polynomial `x`.
    pub fn x(field: &Field) -> UniPoly {
        UniPoly::new(field, vec![0, 1])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn leading(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| self.c.get(i).copied().unwrap_or(0) ^ o.c.get(i).copied().unwrap_or(0))
            .collect();
        UniPoly::new(&self.field, c)
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let f = &self.field;
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] ^= f.mul(a, b);
            }
        }
        UniPoly::new(f, c)
    }

    pub fn scale(&self, s: u64) -> UniPoly {
        UniPoly::new(
            &self.field,
            self.c.iter().map(|&a| self.field.mul(a, s)).collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading()).expect("nonzero leading"))
    }

    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let f = &self.field;
        let inv = f.inv(d.leading()).expect("nonzero");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (UniPoly::zero(f), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let coef = r[i];
            if coef == 0 {
                continue;
            }
            let factor = f.mul(coef, inv);
            q[i - dd] = factor;
            for (j, &b) in d.c.iter().enumerate() {
                r[i - dd + j] ^= f.mul(factor, b);
            }
        }
        r.truncate(dd);
        (UniPoly::new(f, q), UniPoly::new(f, r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divrem(d).1
    }

    pub fn div_exact(&self, d: &UniPoly) -> UniPoly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| if i % 2 == 1 { a } else { 0 })
            .collect();
        UniPoly::new(&self.field, c)
    }

    pub fn mulmod(&self, o: &UniPoly, m: &UniPoly) -> UniPoly {
        self.mul(o).rem(m)
    }

    pub fn sqrmod(&self, m: &UniPoly) -> UniPoly {
        let f = &self.field;
        let mut c = vec![0u64; (self.c.len() * 2).saturating_sub(1)];
        for (i, &a) in self.c.iter().enumerate() {
            c[2 * i] = f.square(a);
        }
        UniPoly::new(f, c).rem(m)
    }

    pub fn evaluate(&self, x: u64) -> u64 {
        let f = &self.field;
        self.c.iter().rev().fold(0, |acc, &a| f.mul(acc, x) ^ a)
    }

    /// `p = g(x^2)` written as `h(x)^2`; requires a vanishing derivative.
    fn sqrt_of_square(&self) -> UniPoly {
        debug_assert!(self.derivative().is_zero());
        let c = self
            .c
            .iter()
            .step_by(2)
            .map(|&a| self.field.sqrt(a))
            .collect();
        UniPoly::new(&self.field, c)
    }

    /// Map onto a multivariate polynomial in variable `var` of `ring`.
    pub fn to_polynomial(&self, ring: &crate::poly::Ring, var: usize) -> Polynomial {
        let n = ring.nvars();
        Polynomial::from_terms(
            ring,
            self.c
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(i, &a)| {
                    let mut m = Monomial::one(n);
                    m.0[var] = i as i32;
                    (m, a)
                })
                .collect::<Vec<_>>(),
        )
    }

    /// View a polynomial in at most one variable (nonnegative exponents).
    pub fn from_polynomial(p: &Polynomial, var: usize) -> Result<UniPoly> {
        let mut c = Vec::new();
        for (m, a) in p.terms() {
            for (i, &e) in m.exps().iter().enumerate() {
                if (i != var && e != 0) || e < 0 {
                    return Err(AlgebraError::NotUnivariate(p.to_string()));
                }
            }
            let e = m.exps()[var] as usize;
            if c.len() <= e {
                c.resize(e + 1, 0);
            }
            c[e] ^= *a;
        }
        Ok(UniPoly::new(p.field(), c))
    }

    /// Display in variable `name`.
    pub fn format(&self, name: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => name.to_string(),
                _ => format!("{name}^{i}"),
            };
            let coef = bits_to_string(a);
            parts.push(match (a == 1, mono.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => mono,
                (false, true) => {
                    if a.count_ones() == 1 {
                        coef
                    } else {
                        format!("({coef})")
                    }
                }
                (false, false) => {
                    if a.count_ones() == 1 {
                        format!("{coef}*{mono}")
                    } else {
                        format!("({coef})*{mono}")
                    }
                }
            });
        }
        parts.join("+")
    }
}

/// Squarefree decomposition of a monic polynomial: (factor, multiplicity).
pub fn squarefree(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        for (g, m) in squarefree(&c.sqrt_of_square()) {
            out.push((g, 2 * m));
        }
    }
    out
}

/// x^(q^i) mod f by repeated squaring, q = field size.
fn frobenius_power(x: &UniPoly, f: &UniPoly, k: u32) -> UniPoly {
    let mut h = x.clone();
    for _ in 0..k {
        h = h.sqrmod(f);
    }
    h
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let field = f.field().clone();
    let k = field.degree();
    let x = UniPoly::x(&field);
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut h = x.rem(&rest);
    let mut i = 0;
    while rest.degree().unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = frobenius_power(&h, &rest, k);
        let g = rest.gcd(&h.add(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, i));
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    out
}

/// Split a product of distinct irreducibles of degree `d` (char 2 trace map).
pub fn equal_degree(f: &UniPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<UniPoly> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.monic()];
    }
    let field = f.field().clone();
    let k = field.degree() as usize;
    let size = field.size();
    loop {
        let coeffs: Vec<u64> = (0..n)
            .map(|_| (rng.gen::<u64>() as u128 % size) as u64)
            .collect();
        let a = UniPoly::new(&field, coeffs);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        // trace from GF(q^d) to GF(2): sum of a^(2^j) for j < k d
        let mut t = a.rem(f);
        let mut acc = t.clone();
        for _ in 1..k * d {
            t = t.sqrmod(f);
            acc = acc.add(&t);
        }
        let g = f.gcd(&acc);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.div_exact(&g), d, rng));
            return out;
        }
    }
}

fn cmp_unipoly(a: &UniPoly, b: &UniPoly) -> std::cmp::Ordering {
    a.c.len()
        .cmp(&b.c.len())
        .then_with(|| a.c.iter().rev().cmp(b.c.iter().rev()))
}

/// Complete factorization into monic irreducibles with multiplicities, sorted
/// by degree then coefficients. Returns the leading coefficient separately.
pub fn factor_with_seed(f: &UniPoly, seed: u64) -> (u64, Vec<(UniPoly, u32)>) {
    assert!(!f.is_zero(), "factoring the zero polynomial");
    let lead = f.leading();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, m) in squarefree(&f.monic()) {
        for (h, d) in distinct_degree(&g) {
            for p in equal_degree(&h, d, &mut rng) {
                out.push((p, m));
            }
        }
    }
    out.sort_by(|a, b| cmp_unipoly(&a.0, &b.0).then(a.1.cmp(&b.1)));
    (lead, out)
}

pub fn factor(f: &UniPoly) -> (u64, Vec<(UniPoly, u32)>) {
    factor_with_seed(f, 0)
}

/// Distinct roots in the coefficient field, ascending by raw value.
pub fn roots(f: &UniPoly) -> Vec<u64> {
    if f.is_zero() {
        return Vec::new();
    }
    let mut r: Vec<u64> = factor(f)
        .1
        .iter()
        .filter(|(p, _)| p.degree() == Some(1))
        .map(|(p, _)| p.c[0])
        .collect();
    r.sort_unstable();
    r
}

/// Irreducibility via distinct-degree factorization.
pub fn is_irreducible(f: &UniPoly) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(n) => {
            let sf = squarefree(&f.monic());
            sf.len() == 1 && sf[0].1 == 1 && {
                let dd = distinct_degree(&sf[0].0);
                dd.len() == 1 && dd[0].1 == n
            }
        }
    }
}

/// Factor a univariate [`Polynomial`]; the variable is the only one that
/// occurs (or the first variable for constants).
pub fn factor_polynomial(f: &Polynomial, seed: u64) -> Result<(u64, Vec<(Polynomial, u32)>)> {
    let vars = f.support_vars();
    if vars.len() > 1 {
        return Err(AlgebraError::NotUnivariate(f.to_string()));
    }
    if f.is_zero() {
        return Err(AlgebraError::NotUnivariate("zero polynomial".into()));
    }
    let var = vars.first().copied().unwrap_or(0);
    let u = UniPoly::from_polynomial(f, var)?;
    let (lead, fs) = factor_with_seed(&u, seed);
    Ok((
        lead,
        fs.into_iter()
            .map(|(p, m)| (p.to_polynomial(f.ring(), var), m))
            .collect(),
    ))
}

/// Text form of the factorization of a bit-packed GF(2) polynomial in `w`,
/// e.g. `(w+1)^2`.
pub fn describe_gf2_factorization(modulus: u64) -> String {
    let f2 = Field::gf2();
    let coeffs = (0..64).map(|i| modulus >> i & 1).collect();
    let u = UniPoly::new(&f2, coeffs);
    if u.degree().unwrap_or(0) == 0 {
        return bits_to_string(modulus);
    }
    factor(&u)
        .1
        .iter()
        .map(|(p, m)| {
            let bits = p.c.iter().enumerate().fold(0u64, |acc, (i, &a)| acc | a << i);
            if *m == 1 {
                format!("({})", bits_to_string(bits))
            } else {
                format!("({})^{m}", bits_to_string(bits))
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Smallest root in `target` of a bit-packed GF(2) polynomial.
pub fn smallest_root_of_gf2_poly(poly: u64, target: &Field) -> Option<u64> {
    let coeffs = (0..64).map(|i| poly >> i & 1).collect();
    roots(&UniPoly::new(target, coeffs)).first().copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Ring;

    fn gf4() -> Field {
        Field::from_modulus(0b111).unwrap()
    }

    #[test]
    fn irreducible_quadratic_over_gf2() {
        let r = Ring::with_vars(&Field::gf2(), &["t"], &[]).unwrap();
        let (_, fs) = factor_polynomial(&r.parse("t^2+t+1").unwrap(), 0).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0], (r.parse("t^2+t+1").unwrap(), 1));
    }

    #[test]
    fn splits_over_gf4() {
        let r = Ring::with_vars(&gf4(), &["t"], &[]).unwrap();
        let (_, fs) = factor_polynomial(&r.parse("t^2+t+1").unwrap(), 0).unwrap();
        assert_eq!(
            fs,
            vec![
                (r.parse("t+w").unwrap(), 1),
                (r.parse("t+w+1").unwrap(), 1)
            ]
        );
    }

    #[test]
    fn squares_in_characteristic_two() {
        let r = Ring::with_vars(&Field::gf2(), &["t"], &[]).unwrap();
        let (_, fs) = factor_polynomial(&r.parse("t^4+t^2").unwrap(), 0).unwrap();
        assert_eq!(
            fs,
            vec![(r.parse("t").unwrap(), 2), (r.parse("t+1").unwrap(), 2)]
        );
    }

    #[test]
    fn quintic_splits_as_two_and_three() {
        let f2 = Field::gf2();
        let u = UniPoly::new(&f2, vec![1, 1, 0, 0, 0, 1]);
        let (_, fs) = factor(&u);
        let degs: Vec<usize> = fs.iter().map(|(p, _)| p.degree().unwrap()).collect();
        assert_eq!(degs, vec![2, 3]);
    }

    #[test]
    fn factorization_description() {
        assert_eq!(describe_gf2_factorization(0b101), "(w+1)^2");
        assert_eq!(describe_gf2_factorization(0b110), "(w)*(w+1)");
    }

    #[test]
    fn seeds_give_same_factorization() {
        let f16 = Field::canonical(4);
        let u = UniPoly::new(&f16, vec![3, 0, 7, 1, 0, 0, 1, 1, 1]);
        assert_eq!(factor_with_seed(&u, 0), factor_with_seed(&u, 99));
    }
}
