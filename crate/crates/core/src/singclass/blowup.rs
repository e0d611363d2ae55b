use algebra::univariate::{factor, roots, UniPoly};
use algebra::{Monomial, Polynomial};

use super::local::std_ring;

/// A singular point on the blow-up, with the number of Galois-conjugate
/// copies it stands for.
#[derive(Clone, Debug)]
pub struct Child {
    pub jet: Polynomial,
    pub conjugates: usize,
    /// `"x"` or `"y"`: the affine chart of the blow-up it was found in.
    pub chart: &'static str,
}

/// Strict transform `P(x, x y, x z) / x^2` (`toward = 0`) or
/// `P(x y, y, y z) / y^2` (`toward = 1`), keeping the terms whose exponent
/// of the exceptional coordinate is at most `n`. Those are exact when `P` is
/// exact through degree `n + 2`, whatever their other exponents.
fn strict_transform(p: &Polynomial, toward: usize, n: i64) -> Polynomial {
    let ring = p.ring();
    let terms = p.terms().iter().filter_map(|(m, c)| {
        let e = m.exps();
        let mut out = [e[0], e[1], e[2]];
        out[toward] = e[0] + e[1] + e[2] - 2;
        let mono = Monomial::from_exps(&out);
        (i64::from(out[toward]) <= n).then_some((mono, *c))
    });
    Polynomial::from_terms(ring, terms.collect::<Vec<_>>())
}

/// Singular points on the blow-up of the origin of `z^2 + b z + c`, where `b`
/// has order at least 2 and `c` at least 3, exact through degree `n`. The
/// returned jets are exact through degree `n - 2`.
pub fn blowup_children(p: &Polynomial, n: i64) -> Result<Vec<Child>, String> {
    let ring = p.ring().clone();
    let field = ring.field().clone();
    let c3: Vec<u64> = (0..=3)
        .map(|j| p.coefficient(&Monomial::from_exps(&[3 - j, j, 0])))
        .collect();
    if c3.iter().all(|&c| c == 0) {
        return Err("not a rational double point".into());
    }
    let mut out = Vec::new();
    let px = strict_transform(p, 0, n - 2);
    let dehom = UniPoly::new(&field, c3.clone());
    if dehom.degree().unwrap_or(0) > 0 {
        let (_, facs) = factor(&dehom);
        for (g, _) in facs {
            let d = g.degree().expect("nonzero factor");
            let ext = field.extension(d as u32);
            let emb = field.embedding_into(&ext).map_err(|e| e.to_string())?;
            let lifted = UniPoly::new(&ext, g.coeffs().iter().map(|&c| emb.map(c)).collect());
            let r = *roots(&lifted).first().ok_or("irreducible factor without a root in its splitting field")?;
            let ering = std_ring(&ext);
            let jet = px
                .map_field(&emb, &ering)
                .translate(&[0, r, 0])
                .map_err(|e| e.to_string())?
                .jet_truncate(None, n - 2);
            out.push(Child { jet, conjugates: d, chart: "x" });
        }
    }
    if c3[3] == 0 {
        let jet = strict_transform(p, 1, n - 2).jet_truncate(None, n - 2);
        out.push(Child { jet, conjugates: 1, chart: "y" });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use algebra::Field;

    #[test]
    fn d4_blows_up_to_three_a1() {
        let r = std_ring(&Field::gf2());
        let p = r.parse("z^2+x^2*y+x*y^2").unwrap();
        let ch = blowup_children(&p, 20).unwrap();
        let total: usize = ch.iter().map(|c| c.conjugates).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn e6_has_a_single_child_over_the_cube_root_direction() {
        let r = std_ring(&Field::gf2());
        let p = r.parse("z^2+x^3+y^2*z").unwrap();
        let ch = blowup_children(&p, 20).unwrap();
        assert_eq!(ch.len(), 1);
        assert_eq!(ch[0].chart, "y");
        assert_eq!(ch[0].jet, r.parse("z^2+x^3*y+y*z").unwrap());
    }

    #[test]
    fn conjugate_directions_share_one_child() {
        let r = std_ring(&Field::gf2());
        // c3(1, y) = y^3 + y^2 + 1 is irreducible over GF(2)
        let p = r.parse("z^2+x^3+x*y^2+y^3").unwrap();
        let ch = blowup_children(&p, 20).unwrap();
        assert_eq!(ch.len(), 1);
        assert_eq!(ch[0].conjugates, 3);
        assert_eq!(ch[0].jet.field().degree(), 3);
    }
}
