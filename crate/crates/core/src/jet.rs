//! Arithmetic modulo a power of the maximal ideal at the origin.

use std::collections::HashMap;

use algebra::{Monomial, Polynomial, Ring};

/// `a * b` with every term of total degree above `n` dropped.
pub fn mul_trunc(a: &Polynomial, b: &Polynomial, n: i64) -> Polynomial {
    let ring = a.ring();
    let field = ring.field();
    let mut bs: Vec<(&Monomial, u64, i64)> = b.terms().iter().map(|(m, c)| (m, *c, m.degree())).collect();
    bs.sort_by_key(|t| t.2);
    let mut acc: HashMap<Monomial, u64> = HashMap::new();
    for (ma, ca) in a.terms() {
        let da = ma.degree();
        for &(mb, cb, db) in &bs {
            if da + db > n {
                break;
            }
            let e = acc.entry(ma.mul(mb)).or_insert(0);
            *e ^= field.mul(*ca, cb);
        }
    }
    Polynomial::from_terms(ring, acc.into_iter().filter(|(_, c)| *c != 0))
}

pub fn pow_trunc(a: &Polynomial, mut e: u32, n: i64) -> Polynomial {
    let mut base = a.jet_truncate(None, n);
    let mut out = a.ring().one().jet_truncate(None, n);
    while e > 0 {
        if e & 1 == 1 {
            out = mul_trunc(&out, &base, n);
        }
        e >>= 1;
        if e > 0 {
            base = mul_trunc(&base, &base, n);
        }
    }
    out
}

/// `f(images)` modulo terms of degree above `n`. `f` must be a polynomial
/// (no negative exponents); `images[i]` replaces variable `i` of `f`.
pub fn substitute_trunc(f: &Polynomial, target: &Ring, images: &[Polynomial], n: i64) -> Polynomial {
    let nv = images.len();
    let mut maxe = vec![0i32; nv];
    for (m, _) in f.terms() {
        for (i, &e) in m.exps().iter().enumerate() {
            assert!(e >= 0, "truncated substitution needs a polynomial");
            maxe[i] = maxe[i].max(e);
        }
    }
    let powers: Vec<Vec<Polynomial>> = (0..nv)
        .map(|i| {
            let mut v = vec![target.one()];
            let img = images[i].jet_truncate(None, n);
            for k in 1..=maxe[i] {
                let next = mul_trunc(&v[(k - 1) as usize], &img, n);
                v.push(next);
            }
            v
        })
        .collect();
    let mut out = target.zero();
    for (m, c) in f.terms() {
        let mut t = Polynomial::constant(target, *c);
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                t = mul_trunc(&t, &powers[i][e as usize], n);
                if t.is_zero() {
                    break;
                }
            }
        }
        out = out.add(&t);
    }
    out
}

/// The homogeneous part of degree `d`.
pub fn part(f: &Polynomial, d: i64) -> Polynomial {
    f.homogeneous_part(None, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use algebra::Field;

    #[test]
    fn truncated_products_agree_with_full_products() {
        let r = Ring::with_vars(&Field::gf2(), &["x", "y", "z"], &[]).unwrap();
        let a = r.parse("1+x+y*z+x^3").unwrap();
        let b = r.parse("x+z^2+y^4").unwrap();
        assert_eq!(mul_trunc(&a, &b, 4), a.mul(&b).jet_truncate(None, 4));
        assert_eq!(pow_trunc(&a, 5, 6), a.pow(5).jet_truncate(None, 6));
    }

    #[test]
    fn truncated_substitution() {
        let r = Ring::with_vars(&Field::gf2(), &["x", "y", "z"], &[]).unwrap();
        let f = r.parse("z^2+x^3+y^7").unwrap();
        let imgs = [r.parse("x+y^2").unwrap(), r.parse("y+z").unwrap(), r.parse("z+x*y").unwrap()];
        let full = f.substitute_raw(&r, &imgs).unwrap();
        assert_eq!(substitute_trunc(&f, &r, &imgs, 5), full.jet_truncate(None, 5));
    }
}
