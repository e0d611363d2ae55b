//! Double points in characteristic 2: classes, quotient images and lifts.

mod blowup;
mod e12;
mod local;
mod table;

use std::fmt;
use std::str::FromStr;

pub use blowup::{blowup_children, Child};
pub use e12::{detect_e12, E12Search};
pub use local::{quadratic_analysis, split_hyperbolic, std_ring, tjurina, weierstrass, Branch};
pub use table::{normal_form_table, NormalForm, NormalFormTable};

use algebra::{Polynomial, Ring};

use crate::derivation::Derivation;
use crate::geometry::{local_model, Atlas, Chart, ClosedPoint};
use crate::{CoreError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SingClass {
    Smooth,
    A(u32),
    D(u32, u32),
    E(u32, u32),
    E12,
    Unclassified(String),
}

impl SingClass {
    pub fn index(&self) -> u32 {
        match self {
            SingClass::Smooth | SingClass::Unclassified(_) => 0,
            SingClass::A(n) | SingClass::D(n, _) | SingClass::E(n, _) => *n,
            SingClass::E12 => 12,
        }
    }

    pub fn is_rdp(&self) -> bool {
        matches!(self, SingClass::A(_) | SingClass::D(..) | SingClass::E(..))
    }

    /// The Dynkin part, coindex dropped.
    pub fn dynkin(&self) -> String {
        match self {
            SingClass::A(n) => format!("A{n}"),
            SingClass::D(n, _) => format!("D{n}"),
            SingClass::E(n, _) => format!("E{n}"),
            other => other.to_string(),
        }
    }

    fn sort_key(&self) -> (u8, std::cmp::Reverse<u32>, u32, String) {
        let (k, n, r) = match self {
            SingClass::A(n) => (0, *n, 0),
            SingClass::D(n, r) => (1, *n, *r),
            SingClass::E(n, r) => (2, *n, *r),
            SingClass::E12 => (3, 12, 0),
            SingClass::Smooth => (4, 0, 0),
            SingClass::Unclassified(_) => (5, 0, 0),
        };
        let why = match self {
            SingClass::Unclassified(s) => s.clone(),
            _ => String::new(),
        };
        (k, std::cmp::Reverse(n), r, why)
    }
}

impl PartialOrd for SingClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SingClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for SingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingClass::Smooth => write!(f, "smooth"),
            SingClass::A(n) => write!(f, "A{n}"),
            SingClass::D(n, r) => write!(f, "D{n}^{r}"),
            SingClass::E(n, r) => write!(f, "E{n}^{r}"),
            SingClass::E12 => write!(f, "E12"),
            SingClass::Unclassified(why) => write!(f, "unclassified({why})"),
        }
    }
}

impl serde::Serialize for SingClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for SingClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s == "smooth" {
            return Ok(SingClass::Smooth);
        }
        if s == "E12" {
            return Ok(SingClass::E12);
        }
        let bad = || format!("unknown singularity `{s}`");
        let (head, r) = match s.split_once('^') {
            Some((h, r)) => (h, Some(r.parse::<u32>().map_err(|_| bad())?)),
            None => (s, None),
        };
        let letter = head.chars().next().ok_or_else(bad)?;
        let n: u32 = head[1..].parse().map_err(|_| bad())?;
        match (letter, r) {
            ('A', None) if n >= 1 => Ok(SingClass::A(n)),
            ('D', Some(r)) if n >= 4 && r < n / 2 => Ok(SingClass::D(n, r)),
            ('E', Some(r)) if matches!((n, r), (6, 0..=1) | (7, 0..=3) | (8, 0..=4)) => Ok(SingClass::E(n, r)),
            ('D', None) | ('E', None) => Err(format!("`{s}` needs a coindex such as `{s}^0`")),
            _ => Err(bad()),
        }
    }
}

/// `2*A7 + 4*A1`, or `none` for the empty multiset. Sorted.
pub fn parse_multiset(s: &str) -> std::result::Result<Vec<SingClass>, String> {
    let s = s.trim();
    if s == "none" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for term in s.split('+') {
        let term = term.trim();
        let (k, c) = match term.split_once('*') {
            Some((k, c)) => (k.trim().parse::<usize>().map_err(|_| format!("bad count in `{term}`"))?, c),
            None => (1, term),
        };
        let c: SingClass = c.parse()?;
        out.extend(std::iter::repeat(c).take(k));
    }
    out.sort();
    Ok(out)
}

pub fn format_multiset(items: &[SingClass]) -> String {
    let mut v = items.to_vec();
    v.sort();
    let mut parts = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        parts.push(if j - i == 1 { v[i].to_string() } else { format!("{}*{}", j - i, v[i]) });
        i = j;
    }
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(" + ")
    }
}

/// Type of the image point under a quotient by a fixed-point-free p-closed
/// derivation.
pub fn image_type(c: &SingClass) -> std::result::Result<SingClass, String> {
    match *c {
        SingClass::A(n) if n % 2 == 1 => Ok(if n == 1 { SingClass::Smooth } else { SingClass::A((n + 1) / 2 - 1) }),
        SingClass::D(n, 0) if n % 2 == 0 => Ok(SingClass::Smooth),
        SingClass::D(_, 0) => Ok(SingClass::A(1)),
        SingClass::E(6, 0) => Ok(SingClass::A(2)),
        SingClass::E(7, 0) | SingClass::E(8, 0) | SingClass::E12 => Ok(SingClass::Smooth),
        SingClass::Smooth => Ok(SingClass::Smooth),
        _ => Err(format!("{c} cannot appear on such a cover")),
    }
}

/// Singularities of the canonical cover lying over a point of the given type.
pub fn lift_to_cover(c: &SingClass) -> Vec<SingClass> {
    match *c {
        SingClass::A(n) if n % 2 == 1 => vec![SingClass::A(1); ((n + 1) / 2) as usize],
        SingClass::D(n, 0) if n % 2 == 1 => vec![SingClass::D(n - 1, 0)],
        SingClass::E(6, 0) => vec![SingClass::Unclassified("lift over E6^0 not determined".into())],
        _ => match image_type(c) {
            Ok(SingClass::Smooth) => vec![c.clone()],
            _ => vec![SingClass::Unclassified(format!("no lift rule for {c}"))],
        },
    }
}

/// Classification needs a longer jet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeedPrecision;

/// Largest jet order tried by [`classify_point`].
pub const MAX_ORDER: i64 = 96;
pub const START_ORDER: i64 = 24;

/// Classify a double point given by a jet in `x, y, z` (see [`std_ring`])
/// whose terms up to degree `n` are exact.
pub fn classify_jet(f: &Polynomial, n: i64) -> std::result::Result<SingClass, NeedPrecision> {
    classify_inner(f, n, 0, normal_form_table())
}

const MAX_DEPTH: usize = 16;

pub(crate) fn classify_inner(
    f: &Polynomial,
    n: i64,
    depth: usize,
    table: &NormalFormTable,
) -> std::result::Result<SingClass, NeedPrecision> {
    if n < 2 {
        return Err(NeedPrecision);
    }
    let f = f.jet_truncate(None, n);
    if f.is_zero() {
        return Err(NeedPrecision);
    }
    if f.constant_term() != 0 {
        return Ok(SingClass::Unclassified("point not on the hypersurface".into()));
    }
    match f.order() {
        Some(1) => return Ok(SingClass::Smooth),
        Some(2) => {}
        _ => return Ok(SingClass::Unclassified("multiplicity at least 3".into())),
    }
    match quadratic_analysis(&f, n) {
        Branch::A(g) => split_hyperbolic(&g, n),
        Branch::DE(g) => {
            let p = weierstrass(&g, n);
            match detect_e12(&p, n) {
                E12Search::Found => return Ok(SingClass::E12),
                E12Search::Undecided if n < 9 => return Err(NeedPrecision),
                E12Search::Undecided => {
                    return Ok(SingClass::Unclassified("E12 principal part with an unresolved remainder".into()))
                }
                E12Search::NotE12 => {}
            }
            match blowup_signature(&p, n, depth, table)? {
                Ok((children, tau)) => Ok(table.lookup(&children, tau)),
                Err(why) => Ok(SingClass::Unclassified(why)),
            }
        }
    }
}

/// Sorted types of the singular points on the blow-up, with the Tjurina
/// number. `p` is a Weierstrass jet with quadratic part `z^2`.
pub(crate) fn blowup_signature(
    p: &Polynomial,
    n: i64,
    depth: usize,
    table: &NormalFormTable,
) -> std::result::Result<std::result::Result<(Vec<SingClass>, usize), String>, NeedPrecision> {
    if depth > MAX_DEPTH {
        return Ok(Err("blow-up recursion too deep".into()));
    }
    let tau = tjurina(p, n).ok_or(NeedPrecision)?;
    let children = match blowup_children(p, n) {
        Ok(c) => c,
        Err(why) => return Ok(Err(why)),
    };
    let mut classes = Vec::new();
    for ch in &children {
        match classify_inner(&ch.jet, n - 2, depth + 1, table)? {
            SingClass::Unclassified(why) => return Ok(Err(format!("blow-up child: {why}"))),
            SingClass::Smooth => {}
            c => classes.extend(std::iter::repeat(c).take(ch.conjugates)),
        }
    }
    classes.sort();
    Ok(Ok((classes, tau)))
}

/// Result of classifying one point of an atlas.
#[derive(Clone, Debug)]
pub struct PointClass {
    pub class: SingClass,
    pub jet_order: i64,
    pub exact: bool,
}

/// Classify a singular point, doubling the jet order from 24 up to 96.
pub fn classify_point(atlas: &Atlas, point: &ClosedPoint) -> Result<PointClass> {
    let mut n = START_ORDER;
    loop {
        let model = local_model(atlas, point, n)?;
        let ring = std_ring(model.ring.field());
        let jet = to_std(&model.jet, &ring)?;
        match classify_jet(&jet, n) {
            Ok(class) => return Ok(PointClass { class, jet_order: n, exact: model.exact }),
            Err(NeedPrecision) if n < MAX_ORDER => n *= 2,
            Err(NeedPrecision) => {
                return Ok(PointClass {
                    class: SingClass::Unclassified(format!("jet order {MAX_ORDER} exceeded")),
                    jet_order: n,
                    exact: model.exact,
                })
            }
        }
    }
}

/// Degree of the fixed locus at the origin of `D(X) = Y^6, D(Y) = X^2` on
/// the plane, whose quotient is the E12 double point.
pub fn e12_model_degree() -> Result<usize> {
    model_degree(["Y^6", "X^2"])
}

/// Same for `D(X) = X, D(Y) = Y`, with quotient `A1`.
pub fn a1_model_degree() -> Result<usize> {
    model_degree(["X", "Y"])
}

fn model_degree(images: [&str; 2]) -> Result<usize> {
    let field = algebra::Field::gf2();
    let ring = Ring::with_vars(&field, &["X", "Y"], &[] as &[&str])?;
    let atlas = Atlas {
        field,
        charts: vec![Chart::new("plane", ring.clone(), vec![])],
        transitions: vec![],
        base: vec![None],
    };
    let images = images.iter().map(|s| ring.parse(s)).collect::<std::result::Result<Vec<_>, _>>()?;
    let d = Derivation { name: "model".into(), images: vec![images] };
    d.fixed_degree_at(&atlas, &ClosedPoint { chart: 0, coords: vec![0, 0] }, 40)
}

/// Move a three-variable jet into the `x, y, z` ring.
pub fn to_std(f: &Polynomial, ring: &Ring) -> Result<Polynomial> {
    if f.ring().nvars() != 3 {
        return Err(CoreError::Classifier(format!("local model has {} variables", f.ring().nvars())));
    }
    Ok(f.rename(ring, &[0, 1, 2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_round_trip() {
        let m = parse_multiset("2*A7 + 4*A1 + D5^0 + E12").unwrap();
        assert_eq!(m.len(), 8);
        assert_eq!(format_multiset(&m), "2*A7 + 4*A1 + D5^0 + E12");
        assert_eq!(parse_multiset("none").unwrap(), vec![]);
        assert!(parse_multiset("D5").is_err());
        assert!("D4^2".parse::<SingClass>().is_err());
    }

    #[test]
    fn image_and_lift_rules() {
        assert_eq!(image_type(&SingClass::A(7)).unwrap(), SingClass::A(3));
        assert_eq!(image_type(&SingClass::D(5, 0)).unwrap(), SingClass::A(1));
        assert_eq!(image_type(&SingClass::E12).unwrap(), SingClass::Smooth);
        assert!(image_type(&SingClass::A(4)).is_err());
        assert_eq!(lift_to_cover(&SingClass::A(7)), vec![SingClass::A(1); 4]);
        assert_eq!(lift_to_cover(&SingClass::D(5, 0)), vec![SingClass::D(4, 0)]);
        assert_eq!(lift_to_cover(&SingClass::D(12, 0)), vec![SingClass::D(12, 0)]);
        assert!(matches!(lift_to_cover(&SingClass::E(6, 0))[0], SingClass::Unclassified(_)));
    }

    #[test]
    fn multiplicity_three_and_smooth_points() {
        let r = std_ring(&algebra::Field::gf2());
        let c = classify_jet(&r.parse("x^3+y^3+z^3").unwrap(), 8).unwrap();
        assert!(matches!(&c, SingClass::Unclassified(m) if m.contains("multiplicity")), "{c}");
        assert_eq!(classify_jet(&r.parse("x+y^2").unwrap(), 8), Ok(SingClass::Smooth));
        assert!(matches!(classify_jet(&r.parse("1+x").unwrap(), 8), Ok(SingClass::Unclassified(_))));
    }

    #[test]
    fn xyz_term_raises_the_coindex() {
        let r = std_ring(&algebra::Field::gf2());
        let cases = [
            ("z^2+x^2*y+x*y^2", SingClass::D(4, 0)),
            ("z^2+x^2*y+x*y^2+x*y*z", SingClass::D(4, 1)),
            ("z^2+x^3+x*y^3", SingClass::E(7, 0)),
            ("z^2+x^3+x*y^3+x*y*z", SingClass::E(7, 3)),
            ("z^2+x^2*y+x*y^4+x*y*z", SingClass::D(8, 3)),
        ];
        for (eq, want) in cases {
            assert_eq!(classify_jet(&r.parse(eq).unwrap(), START_ORDER), Ok(want), "{eq}");
        }
    }
}
