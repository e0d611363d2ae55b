//! Bit-packed polynomials over GF(2) of degree < 64.
//!
//! Bit `i` of a `u64` is the coefficient of `w^i`. These are used for field
//! moduli and for the power-basis representation of field elements.

/// Degree of `p`, or `None` for the zero polynomial.
#[inline]
pub fn degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Carry-less product.
#[inline]
pub fn clmul(a: u64, b: u64) -> u128 {
    let mut acc: u128 = 0;
    let mut a = a as u128;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

/// Reduce a 128-bit product modulo `m` (degree `k >= 1`).
#[inline]
pub fn reduce(mut p: u128, m: u64, k: u32) -> u64 {
    let m = m as u128;
    while p >> k != 0 {
        let top = 127 - p.leading_zeros();
        p ^= m << (top - k);
    }
    p as u64
}

#[inline]
pub fn mulmod(a: u64, b: u64, m: u64, k: u32) -> u64 {
    reduce(clmul(a, b), m, k)
}

pub fn powmod(mut base: u64, mut e: u128, m: u64, k: u32) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, m, k);
        }
        base = mulmod(base, base, m, k);
        e >>= 1;
    }
    acc
}

/// Remainder of `a` divided by `b` (b != 0).
pub fn rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b).expect("division by zero polynomial");
    while let Some(da) = degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible(m: u64) -> bool {
    let k = match degree(m) {
        None | Some(0) => return false,
        Some(k) => k,
    };
    if k == 1 {
        return true;
    }
    let x = 0b10u64;
    // w^(2^j) mod m by repeated squaring
    let frob = |j: u32| {
        let mut v = x;
        for _ in 0..j {
            v = mulmod(v, v, m, k);
        }
        v
    };
    if frob(k) != x {
        return false;
    }
    prime_divisors(k)
        .into_iter()
        .all(|q| gcd(m, frob(k / q) ^ x) == 1)
}

/// Smallest (as an integer) irreducible polynomial of degree `k`.
/// Degree 1 yields `w + 1`, so that the generator of GF(2) is 1.
pub fn smallest_irreducible(k: u32) -> u64 {
    assert!((1..=63).contains(&k), "degree out of range");
    if k == 1 {
        return 0b11;
    }
    let lo = 1u64 << k;
    (lo + 1..lo << 1)
        .step_by(2)
        .find(|&m| is_irreducible(m))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_irreducibles() {
        assert!(is_irreducible(0b111));
        assert!(!is_irreducible(0b101));
        assert!(is_irreducible(0b1011));
        assert!(is_irreducible(0b10011));
        assert!(!is_irreducible(0b10101));
        assert_eq!(smallest_irreducible(2), 0b111);
        assert_eq!(smallest_irreducible(3), 0b1011);
        assert_eq!(smallest_irreducible(4), 0b10011);
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducibles of degree k over GF(2)
        let expected = [2u32, 1, 2, 3, 6, 9, 18];
        for (i, &e) in expected.iter().enumerate() {
            let k = i as u32 + 1;
            let count = (1u64 << k..1u64 << (k + 1))
                .filter(|&m| is_irreducible(m))
                .count() as u32;
            assert_eq!(count, e, "degree {k}");
        }
    }
}
