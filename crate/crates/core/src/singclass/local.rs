use algebra::groebner::colength_with_power_of_maximal;
use algebra::{Field, Monomial, Polynomial, Ring};

use super::{NeedPrecision, SingClass};
use crate::jet::{mul_trunc, part, substitute_trunc};

/// Polynomial ring in `x, y, z` over `field`.
pub fn std_ring(field: &Field) -> Ring {
    Ring::with_vars(field, &["x", "y", "z"], &[] as &[&str]).expect("fixed variable names")
}

fn mono(e: [i32; 3]) -> Monomial {
    Monomial::from_exps(&e)
}

/// Outcome of normalizing the quadratic part of a double point.
#[derive(Clone, Debug)]
pub enum Branch {
    /// Quadratic part is `xy + a x^2 + b y^2 + c z^2`.
    A(Polynomial),
    /// Quadratic part is `z^2`.
    DE(Polynomial),
}

/// Linear coordinate change bringing the quadratic part to a standard shape.
/// `f` must have order 2.
pub fn quadratic_analysis(f: &Polynomial, n: i64) -> Branch {
    let ring = f.ring().clone();
    let field = ring.field().clone();
    let q = part(f, 2);
    let sq: Vec<u64> = (0..3)
        .map(|i| {
            let mut e = [0; 3];
            e[i] = 2;
            q.coefficient(&mono(e))
        })
        .collect();
    let b01 = q.coefficient(&mono([1, 1, 0]));
    let b02 = q.coefficient(&mono([1, 0, 1]));
    let b12 = q.coefficient(&mono([0, 1, 1]));
    let lin = |c: [u64; 3]| -> Polynomial {
        Polynomial::from_terms(
            &ring,
            (0..3).filter(|&i| c[i] != 0).map(|i| {
                let mut e = [0; 3];
                e[i] = 1;
                (mono(e), c[i])
            }),
        )
    };
    let pairs = [(0, 1, b01), (0, 2, b02), (1, 2, b12)];
    if let Some(&(i, j, b)) = pairs.iter().find(|p| p.2 != 0) {
        let kernel = [b12, b02, b01];
        let binv = field.inv(b).expect("nonzero");
        // old variable l = u_l X + v_l Y + k_l Z
        let images: Vec<Polynomial> = (0..3)
            .map(|l| {
                let u = u64::from(l == i);
                let v = if l == j { binv } else { 0 };
                lin([u, v, kernel[l]])
            })
            .collect();
        return Branch::A(substitute_trunc(f, &ring, &images, n));
    }
    let l: Vec<u64> = sq.iter().map(|&a| field.sqrt(a)).collect();
    let k = [2, 1, 0].into_iter().find(|&k| l[k] != 0).expect("order 2");
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let kinv = field.inv(l[k]).expect("nonzero");
    let mut images = vec![ring.zero(); 3];
    let mut ck = [0u64; 3];
    ck[2] = kinv;
    for (slot, &o) in others.iter().enumerate() {
        let mut e = [0u64; 3];
        e[slot] = 1;
        images[o] = lin(e);
        ck[slot] = field.mul(l[o], kinv);
    }
    images[k] = lin(ck);
    Branch::DE(substitute_trunc(f, &ring, &images, n))
}

fn restrict(f: &Polynomial, x: &Polynomial, y: &Polynomial, n: i64) -> Polynomial {
    let ring = f.ring().clone();
    substitute_trunc(f, &ring, &[x.clone(), y.clone(), ring.var_at(2)], n)
}

/// Type `A` from a jet whose quadratic part contains `xy`: eliminates the
/// critical curve `F_x = F_y = 0` and reads the order in `z`.
pub fn split_hyperbolic(f: &Polynomial, n: i64) -> Result<SingClass, NeedPrecision> {
    let ring = f.ring().clone();
    let fx = f.derivative(0);
    let fy = f.derivative(1);
    let mut x = ring.zero();
    let mut y = ring.zero();
    for _ in 0..=n + 2 {
        let rx = restrict(&fx, &x, &y, n);
        let ry = restrict(&fy, &x, &y, n);
        if rx.is_zero() && ry.is_zero() {
            let g = restrict(f, &x, &y, n);
            return match g.order() {
                Some(m) if m >= 2 => Ok(SingClass::A((m - 1) as u32)),
                Some(_) => Ok(SingClass::Unclassified("degenerate critical curve".into())),
                None => Err(NeedPrecision),
            };
        }
        y = y.add(&rx);
        x = x.add(&ry);
    }
    Ok(SingClass::Unclassified("critical curve iteration did not settle".into()))
}

fn split_z(f: &Polynomial) -> (Polynomial, Polynomial) {
    let ring = f.ring();
    let mut hi = Vec::new();
    let mut lo = Vec::new();
    for (m, c) in f.terms() {
        if m.exps()[2] >= 2 {
            hi.push((mono([m.exps()[0], m.exps()[1], m.exps()[2] - 2]), *c));
        } else {
            lo.push((m.clone(), *c));
        }
    }
    (Polynomial::from_terms(ring, hi), Polynomial::from_terms(ring, lo))
}

/// `1/u` for a unit `u` with `u(0) = 1`, modulo degree above `n`.
fn unit_inverse(u: &Polynomial, n: i64) -> Polynomial {
    let ring = u.ring();
    let h = u.add(&ring.one());
    let mut out = ring.one();
    let mut pw = ring.one();
    loop {
        pw = mul_trunc(&pw, &h, n);
        if pw.is_zero() {
            return out;
        }
        out = out.add(&pw);
    }
}

/// Weierstrass polynomial `z^2 + b z + c` of a jet with quadratic part `z^2`,
/// exact through degree `n`.
pub fn weierstrass(f: &Polynomial, n: i64) -> Polynomial {
    let ring = f.ring().clone();
    let f = f.jet_truncate(None, n);
    let (u, g0) = split_z(&f);
    debug_assert_eq!(u.constant_term(), 1);
    let uinv = unit_inverse(&u, n);
    let z2 = Polynomial::monomial(&ring, mono([0, 0, 2]), 1);
    let mut rem = ring.zero();
    let mut cur = mul_trunc(&uinv, &g0, n);
    while !cur.is_zero() {
        let (a, b) = split_z(&cur);
        rem = rem.add(&b);
        cur = mul_trunc(&mul_trunc(&a, &uinv, n), &g0, n);
    }
    z2.add(&rem)
}

/// Tjurina number `dim k[[x,y,z]]/(F, F_x, F_y, F_z)` from a jet exact through
/// degree `n`. `None` when that jet is too short to decide.
pub fn tjurina(f: &Polynomial, n: i64) -> Option<usize> {
    let ring = f.ring().clone();
    let gens = [f.clone(), f.derivative(0), f.derivative(1), f.derivative(2)];
    let at = |k: i64| {
        let g: Vec<Polynomial> = gens.iter().map(|g| g.jet_truncate(None, k - 1)).collect();
        colength_with_power_of_maximal(&ring, &g, k)
    };
    let mut prev = at(1);
    for k in 1..n {
        let next = at(k + 1);
        if next == prev {
            return Some(prev);
        }
        prev = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> Ring {
        std_ring(&Field::gf2())
    }

    #[test]
    fn tjurina_numbers_of_standard_forms() {
        let r = r();
        for (s, t) in [("z^2+x*y", 2), ("z^2+x^3+y^5", 16), ("z^2+x^3+y^7", 24), ("z^2+x^2*y+x*y^2", 8)] {
            let f = r.parse(s).unwrap();
            assert_eq!(tjurina(&f, 30), Some(t), "{s}");
        }
    }

    #[test]
    fn hyperbolic_split_reads_a_type() {
        let r = r();
        let f = r.parse("x*y+z^8").unwrap();
        match quadratic_analysis(&f, 24) {
            Branch::A(g) => assert_eq!(split_hyperbolic(&g, 24), Ok(SingClass::A(7))),
            Branch::DE(_) => panic!("expected hyperbolic branch"),
        }
        let g = r.parse("y*z+x^2+x*y^3+z^5+x^4*y").unwrap();
        match quadratic_analysis(&g, 24) {
            Branch::A(h) => assert!(matches!(split_hyperbolic(&h, 24), Ok(SingClass::A(_)))),
            Branch::DE(_) => panic!("expected hyperbolic branch"),
        }
        let flat = r.parse("x*y").unwrap();
        assert_eq!(split_hyperbolic(&flat, 24), Err(NeedPrecision));
    }

    #[test]
    fn square_quadratic_moves_to_z() {
        let r = r();
        let f = r.parse("x^2+y^2+x^3+y^5").unwrap();
        let Branch::DE(g) = quadratic_analysis(&f, 12) else { panic!() };
        assert_eq!(part(&g, 2), r.parse("z^2").unwrap());
    }

    #[test]
    fn weierstrass_preparation_is_exact_to_order() {
        let r = r();
        let f = r.parse("z^2+x*z^3+y^3*z+x^3+y^5+x*y*z^2").unwrap();
        let n = 14;
        let p = weierstrass(&f, n);
        assert!(p.terms().iter().all(|(m, _)| m.exps()[2] <= 2));
        // p = unit * f: the ideals agree modulo m^(n+1)
        let a = colength_with_power_of_maximal(&r, &[p.clone()], 8);
        let b = colength_with_power_of_maximal(&r, &[f.clone()], 8);
        assert_eq!(a, b);
        let both = colength_with_power_of_maximal(&r, &[p, f], 8);
        assert_eq!(a, both);
    }
}
