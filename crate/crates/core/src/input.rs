//! Line-oriented example files.
//!
//! ```text
//! field gf2                       # or a modulus such as w^2+w+1
//! chart main vars=x,y,t inverted=t
//! relation main : y^2 + x^3 + t
//! transition main->x0 invert=x : x0=t^2/x; y0=t^2*y/x^2; t=t
//! derivation D1 main : x=0; y=x^2; t=1
//! basis D1,D2
//! base-coordinate main:t
//! expect verdict = supersingular
//! ```

use std::collections::BTreeMap;

use algebra::parse::offset_error;
use algebra::{AlgebraError, Field, Polynomial, Ring};

use crate::derivation::Derivation;
use crate::expr::{parse_expr, parse_pred, Expr, Pred};
use crate::geometry::{overlap_ring, Atlas, Chart, Transition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for InputError {}

fn at<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError { line, col, msg: msg.into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Classical,
    Supersingular,
    Mixed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Classical => "classical",
            Verdict::Supersingular => "supersingular",
            Verdict::Mixed => "mixed",
        }
    }
}

/// Expected ordinariness of the curves over the finite tangent fibers and over
/// the fiber at infinity; `None` leaves a part unchecked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Ordinary {
    pub finite: Option<bool>,
    pub infinity: Option<bool>,
}

#[derive(Clone, Debug, Default)]
pub struct Expectations {
    pub sing_cover: Option<String>,
    pub sing_image: Option<String>,
    pub sing_lifted: Option<String>,
    pub lie_type: Option<u8>,
    pub verdict: Option<Verdict>,
    pub generic: Option<(String, Pred)>,
    pub tangent_fibers: Option<(String, Expr)>,
    pub ordinary: Option<Ordinary>,
    /// Source line of each key.
    pub lines: BTreeMap<String, usize>,
}

/// Source line of each directive that a later check may want to point at.
#[derive(Clone, Debug, Default)]
pub struct SourceLines {
    pub charts: Vec<usize>,
    pub transitions: Vec<usize>,
    pub derivations: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct ExampleSpec {
    pub name: String,
    pub atlas: Atlas,
    pub derivations: Vec<Derivation>,
    pub basis: (usize, usize),
    pub expect: Expectations,
    pub lines: SourceLines,
}

impl ExampleSpec {
    pub fn derivation(&self, name: &str) -> Option<&Derivation> {
        self.derivations.iter().find(|d| d.name == name)
    }
}

struct Line<'a> {
    no: usize,
    /// 1-based column of `rest` within the line.
    col: usize,
    keyword: &'a str,
    rest: &'a str,
}

fn split_lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let lead = body.len() - body.trim_start().len();
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let (kw, rest) = match body.find(char::is_whitespace) {
            Some(k) => (&body[..k], &body[k..]),
            None => (body, ""),
        };
        let skip = rest.len() - rest.trim_start().len();
        out.push(Line {
            no: i + 1,
            col: lead + kw.len() + skip + 1,
            keyword: kw,
            rest: rest.trim(),
        });
    }
    out
}

fn parse_modulus(line: &Line) -> Result<Field, InputError> {
    let s = line.rest;
    if s == "gf2" || s == "GF(2)" {
        return Ok(Field::gf2());
    }
    let mut bits = 0u64;
    let mut var: Option<&str> = None;
    for term in s.split('+') {
        let term = term.trim();
        let e = if term == "1" {
            0
        } else {
            let (v, e) = match term.split_once('^') {
                Some((v, e)) => (v.trim(), e.trim().parse::<u32>().ok()),
                None => (term, Some(1)),
            };
            if v.is_empty() || !v.chars().all(|c| c.is_ascii_alphabetic()) || var.is_some_and(|w| w != v) {
                return at(line.no, line.col, format!("bad modulus term `{term}`"));
            }
            var = Some(v);
            match e {
                Some(e) if e < 64 => e,
                _ => return at(line.no, line.col, format!("bad exponent in `{term}`")),
            }
        };
        bits ^= 1 << e;
    }
    Field::from_modulus(bits).or_else(|e| at(line.no, line.col, e.to_string()))
}

/// `key=a,b` pairs after a chart name.
fn key_list<'a>(line: &Line, text: &'a str, key: &str) -> Result<Option<Vec<&'a str>>, InputError> {
    for tok in text.split_whitespace() {
        if let Some(v) = tok.strip_prefix(key).and_then(|r| r.strip_prefix('=')) {
            let names: Vec<&str> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            return Ok(Some(names));
        }
        if !tok.contains('=') {
            return at(line.no, line.col, format!("unexpected `{tok}`"));
        }
    }
    Ok(None)
}

/// Split `head : body` and return the body's column.
fn split_colon<'a>(line: &Line<'a>) -> Result<(&'a str, &'a str, usize), InputError> {
    match line.rest.find(':') {
        Some(k) => {
            let body = &line.rest[k + 1..];
            let skip = body.len() - body.trim_start().len();
            Ok((line.rest[..k].trim(), body.trim(), line.col + k + 1 + skip))
        }
        None => at(line.no, line.col, "expected `:`"),
    }
}

fn poly_at(ring: &Ring, text: &str, line: usize, col: usize) -> Result<Polynomial, InputError> {
    ring.parse(text).map_err(|e| match offset_error(e, line, col) {
        AlgebraError::Parse { line, col, msg } => InputError { line, col, msg },
        AlgebraError::UnknownVariable(v) => InputError { line, col, msg: format!("undeclared variable `{v}`") },
        other => InputError { line, col, msg: other.to_string() },
    })
}

/// `v=expr; v=expr; ...` with the column of each expression.
fn assignments<'a>(body: &'a str, col: usize) -> Vec<(&'a str, &'a str, usize)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in body.split(';') {
        let start = offset;
        offset += part.len() + 1;
        if part.trim().is_empty() {
            continue;
        }
        match part.split_once('=') {
            Some((v, e)) => {
                let skip = e.len() - e.trim_start().len();
                out.push((v.trim(), e.trim(), col + start + v.len() + 1 + skip));
            }
            None => out.push((part.trim(), "", col + start)),
        }
    }
    out
}

/// Images of every variable of `target`, in order, parsed in `ring`.
fn images(
    ring: &Ring,
    target: &Ring,
    body: &str,
    line: usize,
    col: usize,
) -> Result<Vec<Polynomial>, InputError> {
    let mut slots: Vec<Option<Polynomial>> = vec![None; target.nvars()];
    for (v, e, c) in assignments(body, col) {
        if e.is_empty() {
            return at(line, c, format!("expected `=` after `{v}`"));
        }
        let i = target.var_index(v).or_else(|_| at(line, c, format!("undeclared variable `{v}`")))?;
        if slots[i].is_some() {
            return at(line, c, format!("variable `{v}` assigned twice"));
        }
        slots[i] = Some(poly_at(ring, e, line, c)?);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| InputError { line, col, msg: format!("missing image of `{}`", target.vars().name(i)) }))
        .collect()
}

fn parse_multiset(s: &str) -> Result<(), String> {
    for term in s.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err("empty term".into());
        }
    }
    Ok(())
}

/// Parse an example file without checking the geometry.
pub fn parse_structure(name: &str, text: &str) -> Result<ExampleSpec, InputError> {
    let lines = split_lines(text);
    let mut field: Option<Field> = None;
    for l in lines.iter().filter(|l| l.keyword == "field") {
        if field.is_some() {
            return at(l.no, 1, "field declared twice");
        }
        field = Some(parse_modulus(l)?);
    }
    let field = field.ok_or(InputError { line: 1, col: 1, msg: "missing `field` directive".into() })?;

    let mut charts: Vec<(String, Ring)> = Vec::new();
    let mut src = SourceLines::default();
    for l in lines.iter().filter(|l| l.keyword == "chart") {
        let (cname, tail) = l.rest.split_once(char::is_whitespace).unwrap_or((l.rest, ""));
        if cname.is_empty() {
            return at(l.no, l.col, "missing chart name");
        }
        if charts.iter().any(|(n, _)| n == cname) {
            return at(l.no, l.col, format!("chart `{cname}` declared twice"));
        }
        let vars = key_list(l, tail, "vars")?.ok_or(InputError { line: l.no, col: l.col, msg: "missing vars=".into() })?;
        let inv = key_list(l, tail, "inverted")?.unwrap_or_default();
        let ring = Ring::with_vars(&field, &vars, &inv).or_else(|e| at(l.no, l.col, e.to_string()))?;
        charts.push((cname.to_string(), ring));
        src.charts.push(l.no);
    }
    if charts.is_empty() {
        return at(1, 1, "no charts declared");
    }
    let chart_of = |l: &Line, n: &str| -> Result<usize, InputError> {
        charts.iter().position(|(c, _)| c == n).ok_or(InputError { line: l.no, col: l.col, msg: format!("unknown chart `{n}`") })
    };

    let mut relations: Vec<Vec<Polynomial>> = vec![Vec::new(); charts.len()];
    let mut transitions = Vec::new();
    let mut derivs: Vec<(String, Vec<Option<Vec<Polynomial>>>, Vec<usize>, usize)> = Vec::new();
    let mut basis: Option<(String, String, usize, usize)> = None;
    let mut base = vec![None; charts.len()];
    let mut expect = Expectations::default();

    for l in &lines {
        match l.keyword {
            "field" | "chart" => {}
            "relation" => {
                let (head, body, col) = split_colon(l)?;
                let c = chart_of(l, head)?;
                relations[c].push(poly_at(&charts[c].1, body, l.no, col)?);
            }
            "transition" => {
                let (head, body, col) = split_colon(l)?;
                let (route, tail) = head.split_once(char::is_whitespace).unwrap_or((head, ""));
                let (a, b) = route.split_once("->").ok_or(InputError { line: l.no, col: l.col, msg: "expected `src->dst`".into() })?;
                let (s, d) = (chart_of(l, a.trim())?, chart_of(l, b.trim())?);
                let inv = key_list(l, tail, "invert")?.unwrap_or_default();
                let sring = &charts[s].1;
                let mut idx = Vec::new();
                for v in inv {
                    idx.push(sring.var_index(v).or_else(|_| at(l.no, l.col, format!("undeclared variable `{v}`")))?);
                }
                let ov = overlap_ring(sring, &idx).or_else(|e| at(l.no, l.col, e.to_string()))?;
                let imgs = images(&ov, &charts[d].1, body, l.no, col)?;
                transitions.push(Transition::new(s, d, idx, ov, imgs));
                src.transitions.push(l.no);
            }
            "derivation" => {
                let (head, body, col) = split_colon(l)?;
                let mut it = head.split_whitespace();
                let (dn, cn) = match (it.next(), it.next(), it.next()) {
                    (Some(d), Some(c), None) => (d, c),
                    _ => return at(l.no, l.col, "expected `derivation <name> <chart> :`"),
                };
                let c = chart_of(l, cn)?;
                let k = match derivs.iter().position(|d| d.0 == dn) {
                    Some(k) => k,
                    None => {
                        derivs.push((dn.to_string(), vec![None; charts.len()], vec![0; charts.len()], l.no));
                        derivs.len() - 1
                    }
                };
                if derivs[k].1[c].is_some() {
                    return at(l.no, l.col, format!("derivation `{dn}` given twice on chart `{cn}`"));
                }
                let ring = &charts[c].1;
                derivs[k].1[c] = Some(images(ring, ring, body, l.no, col)?);
                derivs[k].2[c] = l.no;
            }
            "basis" => {
                let parts: Vec<&str> = l.rest.split(',').map(str::trim).collect();
                if parts.len() != 2 || basis.is_some() {
                    return at(l.no, l.col, "expected one `basis <D1>,<D2>`");
                }
                basis = Some((parts[0].to_string(), parts[1].to_string(), l.no, l.col));
            }
            "base-coordinate" => {
                let (cn, v) = l.rest.split_once(':').ok_or(InputError { line: l.no, col: l.col, msg: "expected `<chart>:<var>`".into() })?;
                let c = chart_of(l, cn.trim())?;
                let i = charts[c].1.var_index(v.trim()).or_else(|_| at(l.no, l.col, format!("undeclared variable `{}`", v.trim())))?;
                base[c] = Some(i);
            }
            "expect" => {
                let (key, value) = l.rest.split_once('=').ok_or(InputError { line: l.no, col: l.col, msg: "expected `key = value`".into() })?;
                let (key, value) = (key.trim(), value.trim());
                let vcol = l.col + l.rest.find('=').unwrap_or(0) + 1 + (l.rest.len() - l.rest.find('=').unwrap_or(0) - 1 - value.len()).min(1);
                if expect.lines.insert(key.to_string(), l.no).is_some() {
                    return at(l.no, l.col, format!("expectation `{key}` given twice"));
                }
                let bad = |m: String| InputError { line: l.no, col: vcol, msg: m };
                match key {
                    "sing-cover" | "sing-image" | "sing-lifted" => {
                        parse_multiset(value).map_err(bad)?;
                        let slot = match key {
                            "sing-cover" => &mut expect.sing_cover,
                            "sing-image" => &mut expect.sing_image,
                            _ => &mut expect.sing_lifted,
                        };
                        *slot = Some(value.to_string());
                    }
                    "lie-type" => {
                        let t: u8 = value.parse().map_err(|_| bad("lie type must be 1..5".into()))?;
                        if !(1..=5).contains(&t) {
                            return Err(bad("lie type must be 1..5".into()));
                        }
                        expect.lie_type = Some(t);
                    }
                    "verdict" => {
                        expect.verdict = Some(match value {
                            "classical" => Verdict::Classical,
                            "supersingular" => Verdict::Supersingular,
                            "mixed" => Verdict::Mixed,
                            _ => return Err(bad(format!("unknown verdict `{value}`"))),
                        })
                    }
                    "generic" => {
                        let p = parse_pred(value).map_err(|e| InputError { line: l.no, col: vcol + e.col - 1, msg: e.msg })?;
                        expect.generic = Some((value.to_string(), p));
                    }
                    "tangent-fibers" => {
                        let p = parse_expr(value).map_err(|e| InputError { line: l.no, col: vcol + e.col - 1, msg: e.msg })?;
                        expect.tangent_fibers = Some((value.to_string(), p));
                    }
                    "ordinary" => {
                        let mut o = Ordinary::default();
                        for part in value.split(',') {
                            let (k, v) = part.split_once(':').ok_or_else(|| bad(format!("expected `finite:yes|no` or `infinity:yes|no`, got `{}`", part.trim())))?;
                            let b = match v.trim() {
                                "yes" => true,
                                "no" => false,
                                other => return Err(bad(format!("expected yes or no, got `{other}`"))),
                            };
                            match k.trim() {
                                "finite" => o.finite = Some(b),
                                "infinity" => o.infinity = Some(b),
                                other => return Err(bad(format!("unknown fiber class `{other}`"))),
                            }
                        }
                        expect.ordinary = Some(o);
                    }
                    _ => return at(l.no, l.col, format!("unknown expectation `{key}`")),
                }
            }
            other => return at(l.no, 1, format!("unknown directive `{other}`")),
        }
    }

    let mut derivations = Vec::new();
    for (dn, per_chart, dl, first) in derivs {
        let mut imgs = Vec::new();
        for (c, p) in per_chart.into_iter().enumerate() {
            match p {
                Some(p) => imgs.push(p),
                None => return at(first, 1, format!("derivation `{dn}` missing on chart `{}`", charts[c].0)),
            }
        }
        derivations.push(Derivation { name: dn, images: imgs });
        src.derivations.push(dl);
    }
    let basis = match basis {
        Some((a, b, no, col)) => {
            let find = |n: &str| derivations.iter().position(|d| d.name == n).ok_or(InputError { line: no, col, msg: format!("unknown derivation `{n}`") });
            (find(&a)?, find(&b)?)
        }
        None => return at(1, 1, "missing `basis` directive"),
    };
    let charts = charts
        .into_iter()
        .zip(relations)
        .map(|((n, r), rel)| Chart::new(n, r, rel))
        .collect();
    Ok(ExampleSpec {
        name: name.to_string(),
        atlas: Atlas { field, charts, transitions, base },
        derivations,
        basis,
        expect,
        lines: src,
    })
}

/// Parse an example file and check its charts and transitions.
pub fn parse_input(name: &str, text: &str) -> Result<ExampleSpec, InputError> {
    let spec = parse_structure(name, text)?;
    let rep = spec.atlas.validate();
    for (c, r) in rep.charts.iter().enumerate() {
        if let Some(p) = r.problems.first() {
            return at(spec.lines.charts[c], 1, format!("chart {}: {p}", r.chart));
        }
    }
    for (t, r) in rep.transitions.iter().enumerate() {
        if let Some(p) = r.problems.first() {
            return at(spec.lines.transitions[t], 1, format!("transition {}: {p}", r.label));
        }
    }
    if !rep.connected {
        return at(1, 1, "charts are not connected by transitions");
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
field gf2
chart main vars=x,y,t inverted=t
chart x0 vars=x0,y0,t
relation main : y^2+t^6*y+x^3+(t^2+t^6)*x+t^7
relation x0 : y0^2+t^4*x0^2*y0+x0^3+t^2*x0+t^4*x0^3+t^3*x0^4
transition main->x0 invert=x : x0=t^2/x; y0=t^2*y/x^2; t=t
transition x0->main invert=x0,t : x=t^2/x0; y=t^2*y0/x0^2; t=t
derivation D main : x=1; y=0; t=0
derivation D x0 : x0=0; y0=0; t=0
basis D,D
base-coordinate main:t
expect verdict = supersingular  # comment
expect generic = e1 != 0
";

    #[test]
    fn parses_a_small_file() {
        let s = parse_input("small", SMALL).unwrap();
        assert_eq!(s.atlas.charts.len(), 2);
        assert_eq!(s.atlas.transitions.len(), 2);
        assert_eq!(s.atlas.base, vec![Some(2), None]);
        assert_eq!(s.expect.verdict, Some(Verdict::Supersingular));
        assert_eq!(s.lines.transitions, vec![6, 7]);
    }

    #[test]
    fn undeclared_variable_has_a_position() {
        let bad = SMALL.replace("relation main : y^2+t^6*y", "relation main : y^2+q^6*y");
        let e = parse_structure("bad", &bad).unwrap_err();
        assert_eq!((e.line, e.col), (4, 21), "{e}");
        let bad = SMALL.replace("y0=t^2*y/x^2; t=t\ntransition", "y1=t^2*y/x^2; t=t\ntransition");
        let e = parse_structure("bad", &bad).unwrap_err();
        assert_eq!(e.line, 6);
        assert!(e.msg.contains("y1"), "{e}");
    }

    #[test]
    fn non_member_relation_names_the_relation() {
        let bad = SMALL.replace("x0=t^2/x;", "x0=t^3/x;");
        let e = parse_input("bad", &bad).unwrap_err();
        assert_eq!(e.line, 6);
        assert!(e.msg.contains("relation 1 of x0"), "{e}");
    }

    #[test]
    fn bad_modulus_and_unknown_directive() {
        assert!(parse_structure("m", "field w^2+1\n").unwrap_err().msg.contains("reducible"));
        let e = parse_structure("m", "field gf2\nchart c vars=x,y,z\nfrobnicate x\n").unwrap_err();
        assert_eq!(e.line, 3);
    }
}
