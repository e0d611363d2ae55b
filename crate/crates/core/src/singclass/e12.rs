use algebra::{Monomial, Polynomial};

use super::local::weierstrass;
use crate::jet::substitute_trunc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum E12Search {
    Found,
    NotE12,
    Undecided,
}

const WEIGHTS: [i32; 3] = [14, 6, 21];
const MAX_STEPS: usize = 60;

const PRINCIPAL: i64 = 42;

/// Remainders in `(x^5, x^3 y, x^2 y^3, x y^4, y^9)` leave the class unchanged.
fn negligible(a: i32, b: i32) -> bool {
    a >= 5 || (a >= 3 && b >= 1) || (a >= 2 && b >= 3) || (a >= 1 && b >= 4) || b >= 9
}

fn xy(a: i32, b: i32, c: i32) -> Monomial {
    Monomial::from_exps(&[a, b, c])
}

/// Decide whether a Weierstrass jet `z^2 + b z + c` exact through degree
/// `n >= 9` can be brought to the form `z^2 + u x^3 + a y^7 + (terms of
/// weight above 42)` with weights `x = 14, y = 6, z = 21`, and then to one
/// whose remainder past `u x^3 + a y^7` is negligible. A leftover term of
/// weight below 42 rules E12 out; one above 42 that no shear removes leaves
/// the question open.
pub fn detect_e12(p: &Polynomial, n: i64) -> E12Search {
    let ring = p.ring().clone();
    let field = ring.field().clone();
    let (x, y, z) = (ring.var_at(0), ring.var_at(1), ring.var_at(2));
    let subst = |p: &Polynomial, imgs: [Polynomial; 3]| weierstrass(&substitute_trunc(p, &ring, &imgs, n), n);

    // cubic part must be a cube; make it a multiple of x^3
    let c3: Vec<u64> = (0..=3).map(|j| p.coefficient(&xy(3 - j, j, 0))).collect();
    let [al, be, ga, de] = [c3[0], c3[1], c3[2], c3[3]];
    let mut p = if al != 0 {
        let r = field.div(be, al).expect("nonzero");
        let r2 = field.mul(r, r);
        if ga != field.mul(al, r2) || de != field.mul(al, field.mul(r2, r)) {
            return E12Search::NotE12;
        }
        subst(p, [x.add(&y.scale(r)), y.clone(), z.clone()])
    } else if be == 0 && ga == 0 && de != 0 {
        subst(p, [y.clone(), x.clone(), z.clone()])
    } else {
        return E12Search::NotE12;
    };
    if n < 9 {
        return E12Search::Undecided;
    }

    for _ in 0..MAX_STEPS {
        let u = p.coefficient(&xy(3, 0, 0));
        let a = p.coefficient(&xy(0, 7, 0));
        // a low `z`-linear term survives every shear
        if p.terms().iter().any(|(m, _)| m.exps()[2] == 1 && m.weighted_degree(&WEIGHTS) < PRINCIPAL) {
            return E12Search::NotE12;
        }
        let bad = p
            .terms()
            .iter()
            .filter(|(m, _)| {
                let e = m.exps();
                let w = m.weighted_degree(&WEIGHTS);
                e[2] < 2 && !(e[2] == 0 && w == PRINCIPAL) && (w < PRINCIPAL || !negligible(e[0], e[1]))
            })
            .min_by_key(|(m, _)| (m.weighted_degree(&WEIGHTS), m.exps().to_vec()));
        let Some((m, coef)) = bad else {
            return if u != 0 && a != 0 { E12Search::Found } else { E12Search::NotE12 };
        };
        let low = m.weighted_degree(&WEIGHTS) < PRINCIPAL;
        let e = m.exps();
        let (ea, eb, ez) = (e[0], e[1], e[2]);
        if u == 0 {
            return E12Search::NotE12;
        }
        if ez == 0 && ea % 2 == 0 && eb % 2 == 0 {
            let h = Polynomial::monomial(&ring, xy(ea / 2, eb / 2, 0), field.sqrt(*coef));
            p = subst(&p, [x.clone(), y.clone(), z.add(&h)]);
        } else if ez == 0 && ea == 1 && eb % 2 == 0 {
            let al = field.sqrt(field.div(*coef, u).expect("nonzero"));
            let d = Polynomial::monomial(&ring, xy(0, eb / 2, 0), al);
            p = subst(&p, [x.add(&d), y.clone(), z.clone()]);
        } else if ea >= 2 {
            let d = Polynomial::monomial(&ring, xy(ea - 2, eb, ez), field.div(*coef, u).expect("nonzero"));
            p = subst(&p, [x.add(&d), y.clone(), z.clone()]);
        } else if eb >= 6 && a != 0 {
            let d = Polynomial::monomial(&ring, xy(ea, eb - 6, ez), field.div(*coef, a).expect("nonzero"));
            p = subst(&p, [x.clone(), y.add(&d), z.clone()]);
        } else if low {
            return E12Search::NotE12;
        } else {
            return E12Search::Undecided;
        }
    }
    E12Search::Undecided
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singclass::local::std_ring;
    use algebra::Field;

    #[test]
    fn recognizes_the_normal_form_and_rejects_neighbours() {
        let r = std_ring(&Field::gf2());
        let e = |s: &str| detect_e12(&r.parse(s).unwrap(), 16);
        assert_eq!(e("z^2+x^3+y^7"), E12Search::Found);
        assert_eq!(e("z^2+x^3+y^7+x*y^4+x^2*y^2+y^8"), E12Search::Found);
        assert_eq!(e("z^2+x^3+y^7+x^2*y^4+x*y^6*z"), E12Search::Found);
        // x -> x + y^2 turns x^2 y^3 into y^7
        assert_eq!(e("z^2+x^3+x*y^4+x^2*y^3+y^6"), E12Search::Found);
        assert_eq!(e("z^2+x^3+x*y^4+y^6"), E12Search::NotE12);
        assert_eq!(e("z^2+x^3+y^7+x^5"), E12Search::Found);
        assert_eq!(e("z^2+x^3+y^7+y^4*z"), E12Search::Undecided);
        assert_eq!(e("z^2+x^3+y^5"), E12Search::NotE12);
        assert_eq!(e("z^2+x^3+x*y^3"), E12Search::NotE12);
        assert_eq!(e("z^2+x^3+y^2*z"), E12Search::NotE12);
        assert_eq!(e("z^2+x^2*y+x*y^4"), E12Search::NotE12);
    }
}
