//! Two-dimensional restricted Lie algebras in characteristic 2.

use std::fmt;

use algebra::univariate::{factor, roots, UniPoly};
use algebra::Field;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derivation::{express_in_basis, Coords, Derivation};
use crate::geometry::Atlas;

/// Bracket and 2-power map of the basis, in coordinates of that basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lie2Structure {
    pub field: Field,
    /// `[D1, D2]`.
    pub bracket: Coords,
    /// `D1^[2]`.
    pub s1: Coords,
    /// `D2^[2]`.
    pub s2: Coords,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineKind {
    Multiplicative,
    Additive,
}

impl LineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LineKind::Multiplicative => "multiplicative",
            LineKind::Additive => "additive",
        }
    }
}

/// A p-closed line `[e1:e2]`, normalized with first nonzero entry 1. The
/// coordinates live in `field`, which may extend the structure's field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieLine {
    pub field: Field,
    pub point: Coords,
    pub kind: LineKind,
}

impl fmt::Display for LieLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}:{}] {}",
            self.field.format_value(self.point.0),
            self.field.format_value(self.point.1),
            self.kind.as_str()
        )
    }
}

/// Where the 2-power map vanishes when every line is p-closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdditiveLocus {
    Everything,
    Line(Coords),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineCensus {
    AllPClosed(AdditiveLocus),
    Finite(Vec<LieLine>),
}

impl LineCensus {
    /// `(multiplicative, additive)` counts for a finite census.
    pub fn counts(&self) -> Option<(usize, usize)> {
        match self {
            LineCensus::AllPClosed(_) => None,
            LineCensus::Finite(ls) => {
                let add = ls.iter().filter(|l| l.kind == LineKind::Additive).count();
                Some((ls.len() - add, add))
            }
        }
    }

    pub fn signature(&self) -> String {
        match self {
            LineCensus::AllPClosed(AdditiveLocus::Everything) => "all additive".into(),
            LineCensus::AllPClosed(AdditiveLocus::Line(_)) => "all p-closed, 1 additive".into(),
            LineCensus::Finite(_) => {
                let (m, a) = self.counts().expect("finite");
                match (m, a) {
                    (0, 0) => "none".into(),
                    (m, 0) => format!("{m} mult"),
                    (0, a) => format!("{a} add"),
                    (m, a) => format!("{m} mult + {a} add"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("cannot express {what} in the basis: {why}")]
    Express { what: String, why: String },
    #[error("polarization fails at ({alpha}, {beta}): expected {expected:?}, found {found:?}")]
    Polarization { alpha: u64, beta: u64, expected: Coords, found: Coords },
    #[error("restricted Lie axioms violated: {0}")]
    Axioms(String),
}

impl Lie2Structure {
    /// Coordinates of `(e1 D1 + e2 D2)^[2]`.
    pub fn square(&self, e: Coords) -> Coords {
        let f = &self.field;
        let (a, b) = e;
        let (aa, bb, ab) = (f.square(a), f.square(b), f.mul(a, b));
        let comb = |i: fn(Coords) -> u64| f.mul(aa, i(self.s1)) ^ f.mul(bb, i(self.s2)) ^ f.mul(ab, i(self.bracket));
        (comb(|c| c.0), comb(|c| c.1))
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket == (0, 0)
    }

    /// The structure of the given type in its standard basis.
    pub fn canonical(ty: u8, field: &Field) -> Option<Lie2Structure> {
        let (bracket, s1, s2) = match ty {
            1 => ((0, 1), (1, 0), (0, 0)),
            2 => ((0, 0), (0, 0), (0, 0)),
            3 => ((0, 0), (1, 0), (0, 0)),
            4 => ((0, 0), (0, 1), (0, 0)),
            5 => ((0, 0), (1, 0), (0, 1)),
            _ => return None,
        };
        Some(Lie2Structure { field: field.clone(), bracket, s1, s2 })
    }
}

/// Structure constants of the span of `d1, d2`, checked against the
/// polarization identity on three sampled combinations.
pub fn build_structure(atlas: &Atlas, d1: &Derivation, d2: &Derivation, seed: u64) -> Result<Lie2Structure, LieError> {
    let express = |d: &Derivation, what: &str| {
        express_in_basis(atlas, d, d1, d2).map_err(|e| LieError::Express { what: what.into(), why: e.to_string() })
    };
    let s = Lie2Structure {
        field: atlas.field.clone(),
        bracket: express(&d1.bracket(d2), "the bracket")?,
        s1: express(&d1.square(), "the square of the first basis element")?,
        s2: express(&d2.square(), "the square of the second basis element")?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = atlas.field.size() as u64;
    for _ in 0..3 {
        let (alpha, beta) = (rng.gen_range(0..size), rng.gen_range(0..size));
        let found = express(&Derivation::combine(alpha, d1, beta, d2).square(), "a sampled square")?;
        let expected = s.square((alpha, beta));
        if found != expected {
            return Err(LieError::Polarization { alpha, beta, expected, found });
        }
    }
    Ok(s)
}

/// Coefficients of `det((e1 D1 + e2 D2)^[2] ; (e1, e2))` on
/// `e1^3, e1^2 e2, e1 e2^2, e2^3`.
pub fn p_closed_cubic(s: &Lie2Structure) -> [u64; 4] {
    [s.s1.1, s.s1.0 ^ s.bracket.1, s.bracket.0 ^ s.s2.1, s.s2.0]
}

pub fn format_cubic(c: &[u64; 4], field: &Field) -> String {
    let monos = ["e1^3", "e1^2*e2", "e1*e2^2", "e2^3"];
    let terms: Vec<String> = c
        .iter()
        .zip(monos)
        .filter(|(&v, _)| v != 0)
        .map(|(&v, m)| if v == 1 { m.to_string() } else { format!("{}*{m}", field.format_value(v)) })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn normalize(field: &Field, e: Coords) -> Coords {
    if e.0 == 0 {
        (0, 1)
    } else {
        (1, field.div(e.1, e.0).expect("nonzero"))
    }
}

/// p-closed lines of the structure, over the extension splitting the cubic.
pub fn p_closed_lines(s: &Lie2Structure) -> LineCensus {
    let f = &s.field;
    let c = p_closed_cubic(s);
    if c.iter().all(|&v| v == 0) {
        // square(e) = lambda(e) e with lambda = s1.0 e1 + bracket.0 e2
        let (p, q) = (s.s1.0, s.bracket.0);
        return LineCensus::AllPClosed(if p == 0 && q == 0 {
            AdditiveLocus::Everything
        } else {
            AdditiveLocus::Line(normalize(f, (q, p)))
        });
    }
    // e1 = 1, e2 = t
    let dehom = UniPoly::new(f, c.to_vec());
    let (_, facs) = factor(&dehom);
    let split = facs.iter().map(|(g, _)| g.degree().unwrap_or(1) as u32).fold(1, lcm);
    let ext = f.extension(split);
    let emb = f.embedding_into(&ext).expect("extension of the base field");
    let lifted = Lie2Structure {
        field: ext.clone(),
        bracket: (emb.map(s.bracket.0), emb.map(s.bracket.1)),
        s1: (emb.map(s.s1.0), emb.map(s.s1.1)),
        s2: (emb.map(s.s2.0), emb.map(s.s2.1)),
    };
    let mut points: Vec<Coords> = Vec::new();
    if c[3] == 0 {
        points.push((0, 1));
    }
    let lifted_cubic = UniPoly::new(&ext, c.iter().map(|&v| emb.map(v)).collect());
    let mut rs = roots(&lifted_cubic);
    rs.sort_unstable();
    rs.dedup();
    points.extend(rs.into_iter().map(|t| (1, t)));
    let lines = points
        .into_iter()
        .map(|p| LieLine {
            field: ext.clone(),
            point: p,
            kind: if lifted.square(p) == (0, 0) { LineKind::Additive } else { LineKind::Multiplicative },
        })
        .collect();
    LineCensus::Finite(lines)
}

fn lcm(a: u32, b: u32) -> u32 {
    let g = |mut x: u32, mut y: u32| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    a / g(a, b) * b
}

/// Type 1..5 in the standard numbering, with the line census as cross-check.
pub fn classify_type(s: &Lie2Structure) -> Result<u8, LieError> {
    let census = p_closed_lines(s);
    if !s.is_abelian() {
        return match census {
            LineCensus::AllPClosed(AdditiveLocus::Line(_)) => Ok(1),
            other => Err(LieError::Axioms(format!("non-abelian with line census {}", other.signature()))),
        };
    }
    if s.s1 == (0, 0) && s.s2 == (0, 0) {
        return Ok(2);
    }
    match census.counts() {
        Some((1, 1)) => Ok(3),
        Some((0, 1)) => Ok(4),
        Some((3, 0)) => Ok(5),
        _ => Err(LieError::Axioms(format!("abelian with line census {}", census.signature()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_structures_and_their_lines() {
        let f = Field::gf2();
        let expect = ["all p-closed, 1 additive", "all additive", "1 mult + 1 add", "1 add", "3 mult"];
        for ty in 1..=5u8 {
            let s = Lie2Structure::canonical(ty, &f).unwrap();
            assert_eq!(classify_type(&s), Ok(ty));
            assert_eq!(p_closed_lines(&s).signature(), expect[ty as usize - 1]);
        }
        let t5 = Lie2Structure::canonical(5, &f).unwrap();
        assert_eq!(format_cubic(&p_closed_cubic(&t5), &f), "e1^2*e2 + e1*e2^2");
        let t4 = Lie2Structure::canonical(4, &f).unwrap();
        assert_eq!(p_closed_cubic(&t4), [1, 0, 0, 0]);
        let t1 = Lie2Structure::canonical(1, &f).unwrap();
        assert_eq!(p_closed_lines(&t1), LineCensus::AllPClosed(AdditiveLocus::Line((0, 1))));
        match p_closed_lines(&t5) {
            LineCensus::Finite(ls) => {
                let pts: Vec<Coords> = ls.iter().map(|l| l.point).collect();
                assert_eq!(pts, vec![(0, 1), (1, 0), (1, 1)]);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn twisted_type_five_splits_over_gf8() {
        // x^[2] = y, y^[2] = x + y: cubic e1^3 + e1 e2^2 + e2^3 has no root over GF(2)
        let f = Field::gf2();
        let s = Lie2Structure { field: f.clone(), bracket: (0, 0), s1: (0, 1), s2: (1, 1) };
        assert_eq!(classify_type(&s), Ok(5));
        match p_closed_lines(&s) {
            LineCensus::Finite(ls) => assert!(ls.iter().all(|l| l.field.degree() == 3)),
            _ => panic!(),
        }
    }

    #[test]
    fn inconsistent_data_is_rejected() {
        let f = Field::gf2();
        let s = Lie2Structure { field: f, bracket: (1, 0), s1: (0, 0), s2: (0, 0) };
        assert!(matches!(classify_type(&s), Err(LieError::Axioms(_))));
    }
}
