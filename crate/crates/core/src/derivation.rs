//! Global derivations on an atlas, given chart by chart.

use algebra::groebner::{local_multiplicity, localize};
use algebra::univariate::{factor, UniPoly};
use algebra::{Field, GroebnerBasis, Monomial, MonomialOrder, Polynomial};

use crate::geometry::{Atlas, ClosedPoint, Transition};
use crate::{CoreError, Result};

/// Images of the chart variables, one list per chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub name: String,
    pub images: Vec<Vec<Polynomial>>,
}

/// Why a derivation fails a check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub chart: String,
    pub detail: String,
}

/// Coefficients in a basis (D1, D2), raw values in the atlas field.
pub type Coords = (u64, u64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpressError {
    NotInSpan(Witness),
    Degenerate,
}

impl std::fmt::Display for ExpressError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExpressError::NotInSpan(w) => write!(f, "not in span: chart {}: {}", w.chart, w.detail),
            ExpressError::Degenerate => write!(f, "basis degenerate"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PClosed {
    /// `D^2 = lambda * D`.
    Lambda(u64),
    NotPClosed,
    /// The zero derivation.
    Degenerate,
}

/// Fibers `t = beta` along which `D(t)` vanishes; `infinity` for the fiber at
/// the other end of the base line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentFibers {
    /// `D(t)` as a polynomial in `t`.
    pub poly: UniPoly,
    pub infinity: bool,
}

impl Derivation {
    pub fn zero(atlas: &Atlas, name: impl Into<String>) -> Derivation {
        Derivation {
            name: name.into(),
            images: atlas
                .charts
                .iter()
                .map(|c| vec![c.ring.zero(); c.ring.nvars()])
                .collect(),
        }
    }

    /// `D(f)` on chart `chart` by the chain rule.
    pub fn apply(&self, chart: usize, f: &Polynomial) -> Polynomial {
        let imgs = &self.images[chart];
        let mut acc = f.ring().zero();
        for (v, img) in imgs.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let d = f.derivative(v);
            if !d.is_zero() {
                acc = acc.add(&d.mul(img));
            }
        }
        acc
    }

    /// Each relation is mapped into the relation ideal.
    pub fn well_defined(&self, atlas: &Atlas, chart: usize) -> std::result::Result<(), Witness> {
        let c = &atlas.charts[chart];
        for (i, r) in c.relations.iter().enumerate() {
            let d = self.apply(chart, r);
            if !c.contains(&d) {
                return Err(Witness {
                    chart: c.name.clone(),
                    detail: format!(
                        "{}(relation {}) reduces to {}",
                        self.name,
                        i + 1,
                        c.reduce(&d)
                    ),
                });
            }
        }
        Ok(())
    }

    /// `D(phi(v)) = phi(D(v))` on the overlap for every target variable `v`.
    pub fn transition_compatible(&self, atlas: &Atlas, t: &Transition) -> std::result::Result<(), Witness> {
        let src = &atlas.charts[t.src];
        let dst = &atlas.charts[t.dst];
        let lifted: Vec<Polynomial> = self.images[t.src].iter().map(|p| t.lift(p)).collect();
        for (j, phi) in t.images.iter().enumerate() {
            let mut lhs = t.overlap.zero();
            for (v, img) in lifted.iter().enumerate() {
                let d = phi.derivative(v);
                if !d.is_zero() && !img.is_zero() {
                    lhs = lhs.add(&d.mul(img));
                }
            }
            let rhs = t.pullback(&self.images[t.dst][j]).map_err(|e| Witness {
                chart: src.name.clone(),
                detail: format!("pullback failed: {e}"),
            })?;
            let diff = lhs.add(&rhs);
            if !t.overlap_contains(src, &diff) {
                return Err(Witness {
                    chart: src.name.clone(),
                    detail: format!(
                        "{} disagrees with {} on variable {} via {}->{}",
                        self.name,
                        self.name,
                        dst.ring.vars().name(j),
                        src.name,
                        dst.name
                    ),
                });
            }
        }
        Ok(())
    }

    /// The composite `D∘D`, again a derivation in characteristic 2.
    pub fn square(&self) -> Derivation {
        Derivation {
            name: format!("{}^2", self.name),
            images: self
                .images
                .iter()
                .enumerate()
                .map(|(c, imgs)| imgs.iter().map(|p| self.apply(c, p)).collect())
                .collect(),
        }
    }

    /// `[D, E] = D∘E + E∘D`.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        Derivation {
            name: format!("[{},{}]", self.name, other.name),
            images: self
                .images
                .iter()
                .enumerate()
                .map(|(c, imgs)| {
                    imgs.iter()
                        .zip(&other.images[c])
                        .map(|(d, e)| self.apply(c, e).add(&other.apply(c, d)))
                        .collect()
                })
                .collect(),
        }
    }

    /// `a*D + b*E` for scalars in the atlas field.
    pub fn combine(a: u64, d: &Derivation, b: u64, e: &Derivation) -> Derivation {
        Derivation {
            name: format!("{}*{}+{}*{}", a, d.name, b, e.name),
            images: d
                .images
                .iter()
                .zip(&e.images)
                .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.scale(a).add(&q.scale(b))).collect())
                .collect(),
        }
    }

    /// The same derivation on an atlas over a larger field.
    pub fn map_field(&self, target: &Atlas) -> Result<Derivation> {
        let from = self.images[0][0].field().clone();
        if from == target.field {
            return Ok(self.clone());
        }
        let emb = from.embedding_into(&target.field)?;
        Ok(Derivation {
            name: self.name.clone(),
            images: self
                .images
                .iter()
                .zip(&target.charts)
                .map(|(imgs, c)| imgs.iter().map(|p| p.map_field(&emb, &c.ring)).collect())
                .collect(),
        })
    }

    /// Values of the images at a point.
    pub fn evaluate(&self, point: &ClosedPoint) -> Result<Vec<u64>> {
        self.images[point.chart]
            .iter()
            .map(|p| Ok(p.evaluate(&point.coords)?))
            .collect()
    }

    /// Relations plus all images, localized.
    pub fn fix_ideal(&self, atlas: &Atlas, chart: usize) -> Vec<Polynomial> {
        let c = &atlas.charts[chart];
        let mut gens = c.relations.clone();
        gens.extend(self.images[chart].iter().filter(|p| !p.is_zero()).cloned());
        localize(&c.ring, &gens)
    }

    pub fn is_fixed_point_free(&self, atlas: &Atlas) -> bool {
        (0..atlas.charts.len()).all(|c| {
            let g = self.fix_ideal(atlas, c);
            g.len() == 1 && g[0].is_one()
        })
    }

    /// Local multiplicity of the fix ideal at a point (0 when not fixed).
    pub fn fixed_degree_at(&self, atlas: &Atlas, point: &ClosedPoint, max_n: i64) -> Result<usize> {
        let c = &atlas.charts[point.chart];
        let gens = self.fix_ideal(atlas, point.chart);
        Ok(local_multiplicity(&c.ring, &gens, &point.coords, max_n)?)
    }

    /// `D(base)` on the first chart carrying a base coordinate, and whether
    /// `D` is tangent to the fiber at infinity, read on the first chart whose
    /// base coordinate has a different name.
    pub fn tangent_fibers(&self, atlas: &Atlas) -> Result<TangentFibers> {
        let (c0, b0) = atlas
            .base
            .iter()
            .enumerate()
            .find_map(|(c, b)| b.map(|b| (c, b)))
            .ok_or_else(|| CoreError::Derivation("no base coordinate declared".into()))?;
        let name0 = atlas.charts[c0].ring.vars().name(b0).to_string();
        let img = &self.images[c0][b0];
        if img.is_zero() {
            return Err(CoreError::Derivation("derivation is vertical: every fiber is tangent".into()));
        }
        let poly = UniPoly::from_polynomial(&clear_poles(img), b0)
            .map_err(|_| CoreError::Derivation("image of the base coordinate is not univariate".into()))?;
        let mut infinity = false;
        if let Some((c1, b1)) = atlas
            .base
            .iter()
            .enumerate()
            .find_map(|(c, b)| b.filter(|&b| atlas.charts[c].ring.vars().name(b) != name0).map(|b| (c, b)))
        {
            let img = &self.images[c1][b1];
            let u = UniPoly::from_polynomial(&clear_poles(img), b1)
                .map_err(|_| CoreError::Derivation(format!("image of the base coordinate on chart {} is not univariate", atlas.charts[c1].name)))?;
            infinity = u.evaluate(0) == 0 && img.min_degree_in(b1).unwrap_or(0) >= 0;
        }
        Ok(TangentFibers { poly, infinity })
    }
}

impl TangentFibers {
    /// Distinct finite roots, in the smallest extension containing them all.
    pub fn finite(&self) -> (Field, Vec<u64>) {
        split_roots(&self.poly)
    }
}

/// Multiply away negative exponents only, keeping roots at zero.
fn clear_poles(p: &Polynomial) -> Polynomial {
    let mut m = p.clearing_monomial();
    for e in m.0.iter_mut() {
        *e = (*e).max(0);
    }
    p.mul_monomial(&m, 1)
}

/// Distinct roots of `f` over its splitting field.
pub fn split_roots(f: &UniPoly) -> (Field, Vec<u64>) {
    let base = f.field();
    let (_, fs) = factor(f);
    let d = fs.iter().map(|(p, _)| p.degree().unwrap_or(1) as u32).fold(1, |a, b| a / gcd(a, b) * b);
    let ext = base.extension(d);
    let emb = base.embedding_into(&ext).expect("extension of the base field");
    let lifted = UniPoly::new(&ext, f.coeffs().iter().map(|&c| emb.map(c)).collect());
    let mut r = algebra::univariate::roots(&lifted);
    r.sort_unstable();
    r.dedup();
    (ext, r)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Unique `(a, b)` with `E = a*D1 + b*D2` modulo the relations on every chart.
pub fn express_in_basis(
    atlas: &Atlas,
    e: &Derivation,
    d1: &Derivation,
    d2: &Derivation,
) -> std::result::Result<Coords, ExpressError> {
    let field = &atlas.field;
    // rows (coefficient in D1, coefficient in D2, coefficient in E)
    let mut rows: Vec<[u64; 3]> = Vec::new();
    for (ci, chart) in atlas.charts.iter().enumerate() {
        let gb = chart.local_basis();
        for v in 0..chart.ring.nvars() {
            let polys = [&d1.images[ci][v], &d2.images[ci][v], &e.images[ci][v]];
            let clear = common_clearing(&polys);
            let nfs: Vec<Polynomial> = polys
                .iter()
                .map(|p| gb.normal_form(&p.mul_monomial(&clear, 1)))
                .collect();
            let mut monos: Vec<Monomial> = nfs.iter().flat_map(|p| p.terms().iter().map(|(m, _)| m.clone())).collect();
            monos.sort();
            monos.dedup();
            for m in monos {
                rows.push([nfs[0].coefficient(&m), nfs[1].coefficient(&m), nfs[2].coefficient(&m)]);
            }
        }
    }
    // Gaussian elimination on the 2 unknowns
    let mut pivots: Vec<(usize, [u64; 3])> = Vec::new();
    for mut row in rows {
        for (col, p) in &pivots {
            let c = row[*col];
            if c != 0 {
                for k in 0..3 {
                    row[k] ^= field.mul(c, p[k]);
                }
            }
        }
        match (0..2).find(|&k| row[k] != 0) {
            Some(col) => {
                let inv = field.inv(row[col]).expect("nonzero");
                for x in row.iter_mut() {
                    *x = field.mul(*x, inv);
                }
                // keep earlier pivots reduced
                for (_, p) in pivots.iter_mut() {
                    let c = p[col];
                    if c != 0 {
                        for k in 0..3 {
                            p[k] ^= field.mul(c, row[k]);
                        }
                    }
                }
                pivots.push((col, row));
            }
            None => {
                if row[2] != 0 {
                    return Err(ExpressError::NotInSpan(Witness {
                        chart: String::new(),
                        detail: format!("{} has a component outside the span", e.name),
                    }));
                }
            }
        }
    }
    if pivots.len() < 2 {
        return Err(ExpressError::Degenerate);
    }
    let mut out = (0, 0);
    for (col, p) in pivots {
        if col == 0 {
            out.0 = p[2];
        } else {
            out.1 = p[2];
        }
    }
    Ok(out)
}

fn common_clearing(polys: &[&Polynomial]) -> Monomial {
    let ring = polys[0].ring();
    let mut m = Monomial::one(ring.nvars());
    for p in polys {
        let c = p.clearing_monomial();
        for (i, &e) in c.exps().iter().enumerate() {
            m.0[i] = m.0[i].max(e);
        }
    }
    m
}

/// `lambda` with `D^2 = lambda D` for `D = e1*D1 + e2*D2`, given the
/// coordinates of `D^2`.
pub fn p_closed_from_coords(field: &Field, d: Coords, sq: Coords) -> PClosed {
    let (e1, e2) = d;
    let (a, b) = sq;
    if e1 == 0 && e2 == 0 {
        return PClosed::Degenerate;
    }
    if field.mul(a, e2) != field.mul(b, e1) {
        return PClosed::NotPClosed;
    }
    let lambda = if e1 != 0 { field.div(a, e1) } else { field.div(b, e2) };
    PClosed::Lambda(lambda.expect("nonzero divisor"))
}

/// p-closedness of `e1*D1 + e2*D2`, by expressing its square in the basis.
pub fn p_closed(atlas: &Atlas, d1: &Derivation, d2: &Derivation, e: Coords) -> std::result::Result<PClosed, ExpressError> {
    let d = Derivation::combine(e.0, d1, e.1, d2);
    if e == (0, 0) {
        return Ok(PClosed::Degenerate);
    }
    let sq = express_in_basis(atlas, &d.square(), d1, d2)?;
    Ok(p_closed_from_coords(&atlas.field, e, sq))
}

/// The line of `[e1:e2]` whose derivations vanish at the point, normalized
/// with first nonzero entry 1. `None` when only zero fixes the point.
pub fn canonical_line(atlas: &Atlas, point: &ClosedPoint, d1: &Derivation, d2: &Derivation) -> Result<Option<Coords>> {
    let field = &atlas.field;
    let a = d1.evaluate(point)?;
    let b = d2.evaluate(point)?;
    let nonzero: Vec<(u64, u64)> = a.into_iter().zip(b).filter(|&(x, y)| x != 0 || y != 0).collect();
    if nonzero.is_empty() {
        return Err(CoreError::Derivation(format!(
            "every derivation fixes {}: tangent sheaf not free there",
            point.describe(atlas)
        )));
    }
    // kernel of e1*x + e2*y = 0 for the first row
    let (x, y) = nonzero[0];
    let line = if y == 0 {
        (0, 1)
    } else {
        (1, field.div(x, y)?)
    };
    let line = if line.0 == 0 { (0, 1) } else { line };
    let ok = nonzero
        .iter()
        .all(|&(x, y)| field.mul(line.0, x) ^ field.mul(line.1, y) == 0);
    Ok(if ok { Some(line) } else { None })
}

/// Check of a derivation on every chart and every transition.
pub fn check_global(atlas: &Atlas, d: &Derivation) -> std::result::Result<(), Witness> {
    for c in 0..atlas.charts.len() {
        d.well_defined(atlas, c)?;
    }
    for t in &atlas.transitions {
        d.transition_compatible(atlas, t)?;
    }
    Ok(())
}

/// Grevlex basis of a fix ideal, for reporting.
pub fn fix_basis(atlas: &Atlas, d: &Derivation, chart: usize) -> GroebnerBasis {
    let ring = &atlas.charts[chart].ring;
    GroebnerBasis::compute(ring, &d.fix_ideal(atlas, chart), MonomialOrder::Grevlex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{overlap_ring, Chart};
    use algebra::{Field, Ring};

    fn d12() -> (Atlas, Derivation, Derivation) {
        let f = Field::gf2();
        let r0 = Ring::with_vars(&f, &["x", "y", "t"], &["t"]).unwrap();
        let r1 = Ring::with_vars(&f, &["x0", "y0", "t"], &[]).unwrap();
        let main = Chart::new("main", r0.clone(), vec![r0.parse("y^2+t^6*y+x^3+(t^2+t^6)*x+t^7").unwrap()]);
        let x0 = Chart::new("x0", r1.clone(), vec![r1.parse("y0^2+t^4*x0^2*y0+x0^3+t^2*x0+t^4*x0^3+t^3*x0^4").unwrap()]);
        let ov = overlap_ring(&r0, &[0]).unwrap();
        let imgs = ["t^2/x", "t^2*y/x^2", "t"].map(|s| ov.parse(s).unwrap()).to_vec();
        let atlas = Atlas {
            field: f,
            charts: vec![main, x0],
            transitions: vec![Transition::new(0, 1, vec![0], ov, imgs)],
            base: vec![Some(2), Some(2)],
        };
        let p = |r: &Ring, xs: [&str; 3]| xs.iter().map(|s| r.parse(s).unwrap()).collect::<Vec<_>>();
        let d1 = Derivation {
            name: "D1".into(),
            images: vec![p(&r0, ["0", "t^2", "t^2"]), p(&r1, ["0", "x0^2", "t^2"])],
        };
        let d2 = Derivation {
            name: "D2".into(),
            images: vec![p(&r0, ["t^4", "(x^2+t^6)/t^2", "1"]), p(&r1, ["t^2*x0^2", "t^2*x0^2+1", "1"])],
        };
        (atlas, d1, d2)
    }

    #[test]
    fn well_defined_and_compatible() {
        let (a, d1, d2) = d12();
        for d in [&d1, &d2] {
            check_global(&a, d).unwrap();
        }
        let r0 = a.charts[0].ring.clone();
        let mut bad = d1.clone();
        bad.images[0] = vec![r0.one(), r0.zero(), r0.zero()];
        let w = bad.well_defined(&a, 0).unwrap_err();
        assert_eq!(w.chart, "main");
        let mut bad = d1.clone();
        bad.images[1][1] = a.charts[1].ring.parse("x0^2+1").unwrap();
        assert!(bad.transition_compatible(&a, &a.transitions[0]).is_err());
    }

    #[test]
    fn squares_and_brackets_vanish() {
        let (a, d1, d2) = d12();
        for d in [d1.square(), d2.square(), d1.bracket(&d2)] {
            assert_eq!(express_in_basis(&a, &d, &d1, &d2), Ok((0, 0)));
        }
        assert_eq!(express_in_basis(&a, &d2, &d1, &d2), Ok((0, 1)));
        assert_eq!(express_in_basis(&a, &d1, &d1, &d1), Err(ExpressError::Degenerate));
        assert_eq!(p_closed(&a, &d1, &d2, (1, 1)), Ok(PClosed::Lambda(0)));
    }

    #[test]
    fn fixed_points_and_lines() {
        let (a, d1, d2) = d12();
        let sum = Derivation::combine(1, &d1, 1, &d2);
        assert!(sum.is_fixed_point_free(&a));
        assert!(!d1.is_fixed_point_free(&a));
        let origin = ClosedPoint { chart: 1, coords: vec![0, 0, 0] };
        assert_eq!(canonical_line(&a, &origin, &d1, &d2).unwrap(), Some((1, 0)));
        assert!(d1.fixed_degree_at(&a, &origin, 40).unwrap() > 0);
        let tf = sum.tangent_fibers(&a).unwrap();
        assert_eq!(tf.finite(), (Field::gf2(), vec![1]));
    }

    #[test]
    fn model_fixed_degrees() {
        let f = Field::gf2();
        let r = Ring::with_vars(&f, &["X", "Y"], &[]).unwrap();
        let a = Atlas {
            field: f,
            charts: vec![Chart::new("plane", r.clone(), vec![])],
            transitions: vec![],
            base: vec![None],
        };
        let o = ClosedPoint { chart: 0, coords: vec![0, 0] };
        let e12 = Derivation { name: "E".into(), images: vec![vec![r.parse("Y^6").unwrap(), r.parse("X^2").unwrap()]] };
        assert_eq!(e12.fixed_degree_at(&a, &o, 40).unwrap(), 12);
        let a1 = Derivation { name: "A".into(), images: vec![vec![r.parse("X").unwrap(), r.parse("Y").unwrap()]] };
        assert_eq!(a1.fixed_degree_at(&a, &o, 40).unwrap(), 1);
        let p = ClosedPoint { chart: 0, coords: vec![1, 0] };
        assert_eq!(a1.fixed_degree_at(&a, &p, 40).unwrap(), 0);
    }
}
