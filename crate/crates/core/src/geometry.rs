//! Surfaces given by affine charts, their singular points, local equations at
//! those points and the Hasse coefficient of fibers.

use std::collections::HashSet;
use std::sync::OnceLock;

use algebra::groebner::localize;
use algebra::solve::solve_zero_dim;
use algebra::univariate::UniPoly;
use algebra::{Embedding, Field, GroebnerBasis, Monomial, MonomialOrder, Polynomial, Ring, VariableRegistry};

use crate::jet::substitute_trunc;
use crate::{CoreError, Result};

/// An affine chart: a localized polynomial ring and its defining relations.
#[derive(Clone, Debug)]
pub struct Chart {
    pub name: String,
    pub ring: Ring,
    pub relations: Vec<Polynomial>,
    local: OnceLock<GroebnerBasis>,
}

impl Chart {
    pub fn new(name: impl Into<String>, ring: Ring, relations: Vec<Polynomial>) -> Chart {
        Chart {
            name: name.into(),
            ring,
            relations,
            local: OnceLock::new(),
        }
    }

    /// Basis of the relation ideal of the localized ring (cleared and
    /// saturated at the inverted variables).
    pub fn local_basis(&self) -> &GroebnerBasis {
        self.local.get_or_init(|| {
            let gens = localize(&self.ring, &self.relations);
            GroebnerBasis::compute(&self.ring, &gens, MonomialOrder::Grevlex)
        })
    }

    /// Membership of a Laurent polynomial in the localized relation ideal.
    pub fn contains(&self, f: &Polynomial) -> bool {
        f.is_zero() || self.local_basis().contains(&f.cleared())
    }

    /// Normal form of the cleared polynomial.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        self.local_basis().normal_form(&f.cleared())
    }

    pub fn map_field(&self, emb: &Embedding) -> Chart {
        let ring = self.ring.with_field(emb.target());
        let relations = self.relations.iter().map(|r| r.map_field(emb, &ring)).collect();
        Chart::new(self.name.clone(), ring, relations)
    }

    /// Whether raw coordinates satisfy the relations and keep inverted
    /// variables nonzero.
    pub fn contains_point(&self, coords: &[u64]) -> bool {
        self.relations
            .iter()
            .all(|r| matches!(r.evaluate(coords), Ok(0)))
    }
}

/// A gluing map from `src` to `dst`: `images[j]` is the pullback of the
/// `j`-th variable of `dst`, living in `overlap` (the source variables with
/// `invert` added to the inverted set).
#[derive(Clone, Debug)]
pub struct Transition {
    pub src: usize,
    pub dst: usize,
    pub invert: Vec<usize>,
    pub overlap: Ring,
    pub images: Vec<Polynomial>,
    local: OnceLock<GroebnerBasis>,
}

/// Source ring with additional variables inverted.
pub fn overlap_ring(src: &Ring, invert: &[usize]) -> Result<Ring> {
    let names = src.vars().names().to_vec();
    let mut inv: Vec<String> = src
        .vars()
        .inverted_indices()
        .into_iter()
        .map(|i| names[i].clone())
        .collect();
    for &i in invert {
        if !inv.contains(&names[i]) {
            inv.push(names[i].clone());
        }
    }
    Ok(Ring::new(src.field().clone(), VariableRegistry::new(&names, &inv)?))
}

impl Transition {
    pub fn new(src: usize, dst: usize, invert: Vec<usize>, overlap: Ring, images: Vec<Polynomial>) -> Transition {
        Transition {
            src,
            dst,
            invert,
            overlap,
            images,
            local: OnceLock::new(),
        }
    }

    /// Relation ideal of the source chart localized on the overlap.
    pub fn local_basis(&self, src: &Chart) -> &GroebnerBasis {
        self.local.get_or_init(|| {
            let idx: Vec<usize> = (0..src.ring.nvars()).collect();
            let rels: Vec<Polynomial> = src.relations.iter().map(|r| r.rename(&self.overlap, &idx)).collect();
            let gens = localize(&self.overlap, &rels);
            GroebnerBasis::compute(&self.overlap, &gens, MonomialOrder::Grevlex)
        })
    }

    /// Membership in the overlap ideal.
    pub fn overlap_contains(&self, src: &Chart, f: &Polynomial) -> bool {
        f.is_zero() || self.local_basis(src).contains(&f.cleared())
    }

    /// A source-chart polynomial viewed on the overlap.
    pub fn lift(&self, f: &Polynomial) -> Polynomial {
        let idx: Vec<usize> = (0..self.overlap.nvars()).collect();
        f.rename(&self.overlap, &idx)
    }

    /// Pull a target-chart polynomial back to the overlap.
    pub fn pullback(&self, f: &Polynomial) -> Result<Polynomial> {
        Ok(f.substitute_raw(&self.overlap, &self.images)?)
    }

    /// Image of a source point, if the point lies on the overlap.
    pub fn apply(&self, coords: &[u64]) -> Option<Vec<u64>> {
        self.images.iter().map(|p| p.evaluate(coords).ok()).collect()
    }

    pub fn map_field(&self, emb: &Embedding) -> Transition {
        let overlap = self.overlap.with_field(emb.target());
        Transition::new(
            self.src,
            self.dst,
            self.invert.clone(),
            overlap.clone(),
            self.images.iter().map(|p| p.map_field(emb, &overlap)).collect(),
        )
    }
}

/// A surface as a list of charts glued by transitions.
#[derive(Clone, Debug)]
pub struct Atlas {
    pub field: Field,
    pub charts: Vec<Chart>,
    pub transitions: Vec<Transition>,
    /// Fibration coordinate per chart, if any.
    pub base: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartReport {
    pub chart: String,
    pub dimension: Option<usize>,
    pub problems: Vec<String>,
}

impl ChartReport {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionReport {
    pub label: String,
    pub problems: Vec<String>,
    /// Whether an inverse transition was found and composed.
    pub inverse_checked: bool,
}

impl TransitionReport {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasReport {
    pub charts: Vec<ChartReport>,
    pub transitions: Vec<TransitionReport>,
    pub connected: bool,
}

impl AtlasReport {
    pub fn ok(&self) -> bool {
        self.connected && self.charts.iter().all(|c| c.ok()) && self.transitions.iter().all(|t| t.ok())
    }

    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.charts {
            out.extend(c.problems.iter().map(|p| format!("chart {}: {p}", c.chart)));
        }
        for t in &self.transitions {
            out.extend(t.problems.iter().map(|p| format!("transition {}: {p}", t.label)));
        }
        if !self.connected {
            out.push("transition graph is not connected".into());
        }
        out
    }
}

/// Krull dimension of `k[x]/I` read off the leading monomials: the largest set
/// of variables containing the support of no leading monomial. `None` for the
/// unit ideal.
pub fn dimension(gb: &GroebnerBasis) -> Option<usize> {
    if gb.contains_one() {
        return None;
    }
    let n = gb.ring().nvars();
    let supports: Vec<u32> = gb
        .leading_monomials()
        .iter()
        .map(|m| {
            m.exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0u32, |acc, (i, _)| acc | (1 << i))
        })
        .collect();
    let best = (0u32..(1 << n))
        .filter(|&s| supports.iter().all(|&sup| sup & !s != 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0);
    Some(best)
}

/// Checks that a chart is a two-dimensional complete intersection.
pub fn validate_chart(chart: &Chart) -> ChartReport {
    let mut problems = Vec::new();
    let n = chart.ring.nvars();
    let c = chart.relations.len();
    if c == 0 {
        problems.push("no relations".into());
    }
    for (i, r) in chart.relations.iter().enumerate() {
        if r.is_zero() {
            problems.push(format!("relation {} is zero", i + 1));
        }
    }
    let dim = dimension(chart.local_basis());
    match dim {
        None => problems.push("relations generate the unit ideal (empty chart)".into()),
        Some(d) => {
            if d != 2 {
                problems.push(format!("dimension {d}, expected 2"));
            }
            if n < c || n - c != 2 {
                problems.push(format!("{c} relations in {n} variables is not a complete intersection surface"));
            }
        }
    }
    ChartReport {
        chart: chart.name.clone(),
        dimension: dim,
        problems,
    }
}

/// Checks that target relations pull back into the source ideal, and that an
/// inverse transition (if declared) composes to the identity.
pub fn validate_transition(atlas: &Atlas, t: &Transition) -> TransitionReport {
    let src = &atlas.charts[t.src];
    let dst = &atlas.charts[t.dst];
    let label = format!("{}->{}", src.name, dst.name);
    let mut problems = Vec::new();
    if t.images.len() != dst.ring.nvars() {
        problems.push(format!(
            "{} images for {} target variables",
            t.images.len(),
            dst.ring.nvars()
        ));
        return TransitionReport {
            label,
            problems,
            inverse_checked: false,
        };
    }
    for (i, rel) in dst.relations.iter().enumerate() {
        match t.pullback(rel) {
            Ok(p) => {
                if !t.overlap_contains(src, &p) {
                    problems.push(format!(
                        "relation {} of {} ({rel}) does not pull back into the ideal of {}",
                        i + 1,
                        dst.name,
                        src.name
                    ));
                }
            }
            Err(e) => problems.push(format!("relation {} of {}: {e}", i + 1, dst.name)),
        }
    }
    // images of inverted target variables must be units on the overlap
    for j in dst.ring.vars().inverted_indices() {
        let img = &t.images[j];
        if img.len() != 1 || img.invert_monomial().is_err() {
            let name = dst.ring.vars().name(j);
            let unit = unit_modulo(t, src, img);
            if !unit {
                problems.push(format!("image of inverted variable {name} ({img}) is not a unit on the overlap"));
            }
        }
    }
    let mut inverse_checked = false;
    if problems.is_empty() {
        if let Some(inv) = atlas.transitions.iter().find(|u| u.src == t.dst && u.dst == t.src) {
            match compose_identity(src, t, inv) {
                Some(bad) => problems.extend(bad),
                None => inverse_checked = true,
            }
        }
    }
    TransitionReport {
        label,
        problems,
        inverse_checked,
    }
}

/// Whether `img` times some polynomial is 1 modulo the overlap ideal, tested
/// through the saturation: a unit generates the unit ideal together with the
/// relations after removing the inverted locus.
fn unit_modulo(t: &Transition, src: &Chart, img: &Polynomial) -> bool {
    let mut gens: Vec<Polynomial> = t.local_basis(src).generators().to_vec();
    gens.push(img.cleared());
    let g = localize(&t.overlap, &gens);
    GroebnerBasis::compute(&t.overlap, &g, MonomialOrder::Grevlex).contains_one()
}

/// Returns `None` when `inv ∘ t` is the identity on the source chart, or the
/// list of offending variables.
fn compose_identity(src: &Chart, t: &Transition, inv: &Transition) -> Option<Vec<String>> {
    let names = src.ring.vars().names().to_vec();
    let all = Ring::new(
        src.ring.field().clone(),
        VariableRegistry::new(&names, &names).ok()?,
    );
    let idx: Vec<usize> = (0..names.len()).collect();
    let images: Vec<Polynomial> = t.images.iter().map(|p| p.rename(&all, &idx)).collect();
    let rels: Vec<Polynomial> = src.relations.iter().map(|r| r.rename(&all, &idx)).collect();
    let basis = GroebnerBasis::compute(&all, &localize(&all, &rels), MonomialOrder::Grevlex);
    let mut bad = Vec::new();
    for (i, back) in inv.images.iter().enumerate() {
        let comp = match back.substitute_raw(&all, &images) {
            Ok(c) => c,
            // an inverted variable of the inverse maps to a non-monomial:
            // composition is not expressible with monomial denominators
            Err(_) => return None,
        };
        let diff = comp.add(&all.var_at(i));
        if !diff.is_zero() && !basis.contains(&diff.cleared()) {
            bad.push(format!("inverse composition moves {}", names[i]));
        }
    }
    if bad.is_empty() {
        None
    } else {
        Some(bad)
    }
}

impl Atlas {
    pub fn chart_index(&self, name: &str) -> Result<usize> {
        self.charts
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| CoreError::UnknownChart(name.to_string()))
    }

    pub fn validate(&self) -> AtlasReport {
        let charts = self.charts.iter().map(validate_chart).collect();
        let transitions = self.transitions.iter().map(|t| validate_transition(self, t)).collect();
        AtlasReport {
            charts,
            transitions,
            connected: self.connected(),
        }
    }

    fn connected(&self) -> bool {
        let n = self.charts.len();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for t in &self.transitions {
                for (a, b) in [(t.src, t.dst), (t.dst, t.src)] {
                    if a == c && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The same atlas with coefficients pushed into a larger field.
    pub fn map_field(&self, target: &Field) -> Result<Atlas> {
        if *target == self.field {
            return Ok(self.clone());
        }
        let emb = self.field.embedding_into(target)?;
        Ok(Atlas {
            field: target.clone(),
            charts: self.charts.iter().map(|c| c.map_field(&emb)).collect(),
            transitions: self.transitions.iter().map(|t| t.map_field(&emb)).collect(),
            base: self.base.clone(),
        })
    }

    /// All chart positions of a point reachable through transitions.
    pub fn orbit(&self, point: &ClosedPoint) -> Vec<ClosedPoint> {
        let mut out = vec![point.clone()];
        let mut seen: HashSet<(usize, Vec<u64>)> = HashSet::new();
        seen.insert((point.chart, point.coords.clone()));
        let mut i = 0;
        while i < out.len() {
            let p = out[i].clone();
            for t in self.transitions.iter().filter(|t| t.src == p.chart) {
                if let Some(c) = t.apply(&p.coords) {
                    if seen.insert((t.dst, c.clone())) {
                        out.push(ClosedPoint { chart: t.dst, coords: c });
                    }
                }
            }
            i += 1;
        }
        out
    }
}

/// A point of a chart with coordinates in the atlas field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedPoint {
    pub chart: usize,
    pub coords: Vec<u64>,
}

impl ClosedPoint {
    pub fn describe(&self, atlas: &Atlas) -> String {
        let chart = &atlas.charts[self.chart];
        let vals: Vec<String> = self
            .coords
            .iter()
            .map(|&v| atlas.field.format_value(v))
            .collect();
        format!(
            "{}: ({}) = ({})",
            chart.name,
            chart.ring.vars().names().join(","),
            vals.join(",")
        )
    }
}

fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let ring = m[0][0].ring().clone();
    let mut acc = ring.zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
            .collect();
        acc = acc.add(&m[0][j].mul(&determinant(&minor)));
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Relations plus all maximal minors of the Jacobian, localized.
pub fn singular_locus(chart: &Chart) -> Vec<Polynomial> {
    let n = chart.ring.nvars();
    let c = chart.relations.len();
    let jac: Vec<Vec<Polynomial>> = chart
        .relations
        .iter()
        .map(|r| (0..n).map(|v| r.derivative(v)).collect())
        .collect();
    let mut gens: Vec<Polynomial> = chart.relations.clone();
    for cols in subsets(n, c) {
        let m: Vec<Vec<Polynomial>> = jac.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
        let d = determinant(&m);
        if !d.is_zero() {
            gens.push(d);
        }
    }
    localize(&chart.ring, &gens)
}

/// Singular points of an atlas, all with coordinates in one field.
#[derive(Clone, Debug)]
pub struct PointSet {
    pub atlas: Atlas,
    pub points: Vec<ClosedPoint>,
}

impl PointSet {
    pub fn field(&self) -> &Field {
        &self.atlas.field
    }

    /// The same points over a larger field.
    pub fn lift(&self, target: &Field) -> Result<PointSet> {
        let emb = self.atlas.field.embedding_into(target)?;
        Ok(PointSet {
            atlas: self.atlas.map_field(target)?,
            points: self
                .points
                .iter()
                .map(|p| ClosedPoint {
                    chart: p.chart,
                    coords: p.coords.iter().map(|&v| emb.map(v)).collect(),
                })
                .collect(),
        })
    }
}

/// Solve every chart's singular locus and identify points across charts.
/// Charts earlier in the atlas take priority.
pub fn singular_points(atlas: &Atlas, max_ext_degree: u32) -> Result<PointSet> {
    let loci: Vec<Vec<Polynomial>> = atlas.charts.iter().map(singular_locus).collect();
    let nonempty = |l: &Vec<Polynomial>| !(l.len() == 1 && l[0].is_one());
    let mut ext = 1u32;
    for (chart, locus) in atlas.charts.iter().zip(&loci) {
        if nonempty(locus) {
            let sol = solve_zero_dim(&chart.ring, locus, max_ext_degree)?;
            let d = sol.field.degree() / atlas.field.degree();
            ext = lcm(ext, d);
        }
    }
    if ext > max_ext_degree {
        return Err(algebra::AlgebraError::ExtensionTooSmall {
            needed: ext,
            max: max_ext_degree,
        }
        .into());
    }
    let field = if ext == 1 {
        atlas.field.clone()
    } else {
        Field::canonical(atlas.field.degree() * ext)
    };
    let big = atlas.map_field(&field)?;
    let emb = atlas.field.embedding_into(&field)?;
    let mut found: Vec<ClosedPoint> = Vec::new();
    for (ci, locus) in loci.iter().enumerate() {
        if !nonempty(locus) {
            continue;
        }
        let ring = &big.charts[ci].ring;
        let gens: Vec<Polynomial> = locus.iter().map(|g| g.map_field(&emb, ring)).collect();
        let sol = solve_zero_dim(ring, &gens, 1)?;
        for coords in sol.points {
            found.push(ClosedPoint { chart: ci, coords });
        }
    }
    let mut kept: Vec<ClosedPoint> = Vec::new();
    let mut covered: HashSet<ClosedPoint> = HashSet::new();
    for p in found {
        if covered.contains(&p) {
            continue;
        }
        let orbit = big.orbit(&p);
        if kept.iter().any(|q| orbit.contains(q)) {
            continue;
        }
        covered.extend(orbit);
        kept.push(p);
    }
    Ok(PointSet {
        atlas: big,
        points: kept,
    })
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// A hypersurface jet in three variables at a singular point.
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub ring: Ring,
    pub jet: Polynomial,
    /// Terms of degree ≤ `order` are exact.
    pub order: i64,
    /// True when `jet` is the whole local equation.
    pub exact: bool,
    pub chart: String,
    pub point: Vec<u64>,
    pub trace: Vec<String>,
}

impl LocalModel {
    pub fn variables(&self) -> &[String] {
        self.ring.vars().names()
    }
}

fn linear_coeffs(f: &Polynomial) -> Vec<u64> {
    let n = f.ring().nvars();
    (0..n)
        .map(|i| {
            let mut m = Monomial::one(n);
            m.0[i] = 1;
            f.coefficient(&m)
        })
        .collect()
}

fn rank(field: &Field, mut rows: Vec<Vec<u64>>) -> usize {
    let mut r = 0;
    let ncols = rows.first().map_or(0, |x| x.len());
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][col]).expect("nonzero pivot");
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let f = field.mul(rows[i][col], inv);
                for k in 0..ncols {
                    let v = field.mul(f, rows[r][k]);
                    rows[i][k] ^= v;
                }
            }
        }
        r += 1;
    }
    r
}

fn invert_matrix(field: &Field, m: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| a[i][col] != 0)?;
        a.swap(col, p);
        let inv = field.inv(a[col][col]).ok()?;
        for v in a[col].iter_mut() {
            *v = field.mul(*v, inv);
        }
        for i in 0..n {
            if i != col && a[i][col] != 0 {
                let f = a[i][col];
                for k in 0..2 * n {
                    let v = field.mul(f, a[col][k]);
                    a[i][k] ^= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Local equation at a singular point, to order `n`.
///
/// For `c` relations the Jacobian at the point must have rank `c - 1`;
/// `c - 1` relations are solved for `c - 1` variables by a chord iteration
/// and the result substituted into the remaining relation.
pub fn local_model(atlas: &Atlas, point: &ClosedPoint, n: i64) -> Result<LocalModel> {
    let chart = &atlas.charts[point.chart];
    let field = &atlas.field;
    let names = chart.ring.vars().names().to_vec();
    let nv = names.len();
    let c = chart.relations.len();
    let plain = Ring::new(field.clone(), VariableRegistry::new::<String>(&names, &[])?);
    let idx: Vec<usize> = (0..nv).collect();
    let mut rels = Vec::with_capacity(c);
    for r in &chart.relations {
        if r.evaluate(&point.coords)? != 0 {
            return Err(CoreError::Geometry(format!(
                "point {} is not on chart {}",
                point.describe(atlas),
                chart.name
            )));
        }
        // clearing multiplies by a monomial that is a unit at the point
        rels.push(r.cleared().rename(&plain, &idx).translate(&point.coords)?);
    }
    let jac: Vec<Vec<u64>> = rels.iter().map(linear_coeffs).collect();
    let rk = rank(field, jac.clone());
    if rk == c {
        return Err(CoreError::NotSingular);
    }
    if rk + 1 < c {
        return Err(CoreError::RankTooLow { rank: rk, needed: c - 1 });
    }
    let mut trace = vec![format!("chart {} point {}", chart.name, point.describe(atlas))];
    if c == 1 {
        if nv != 3 {
            return Err(CoreError::Geometry(format!("hypersurface chart {} has {nv} variables", chart.name)));
        }
        let f = &rels[0];
        let exact = f.total_degree().unwrap_or(0) <= n;
        return Ok(LocalModel {
            ring: plain.clone(),
            jet: f.jet_truncate(None, n),
            order: n,
            exact,
            chart: chart.name.clone(),
            point: point.coords.clone(),
            trace,
        });
    }
    // choose c-1 relations and c-1 variables with an invertible block,
    // preferring to eliminate variables declared last
    let k = c - 1;
    let mut choice = None;
    'outer: for rows in subsets(c, k) {
        let mut col_sets = subsets(nv, k);
        col_sets.sort_by(|a, b| b.iter().rev().cmp(a.iter().rev()));
        for cols in col_sets {
            let block: Vec<Vec<u64>> = rows.iter().map(|&i| cols.iter().map(|&j| jac[i][j]).collect()).collect();
            if let Some(inv) = invert_matrix(field, &block) {
                choice = Some((rows, cols, inv));
                break 'outer;
            }
        }
    }
    let (rows, cols, minv) = choice.ok_or_else(|| CoreError::Internal("no invertible Jacobian block".into()))?;
    let rest: Vec<usize> = (0..nv).filter(|i| !cols.contains(i)).collect();
    let rest_names: Vec<String> = rest.iter().map(|&i| names[i].clone()).collect();
    let local = Ring::new(field.clone(), VariableRegistry::new::<String>(&rest_names, &[])?);
    trace.push(format!(
        "solve relations {:?} for {:?}",
        rows.iter().map(|r| r + 1).collect::<Vec<_>>(),
        cols.iter().map(|&j| names[j].as_str()).collect::<Vec<_>>()
    ));
    let mut phi: Vec<Polynomial> = vec![local.zero(); k];
    let images = |phi: &[Polynomial]| -> Vec<Polynomial> {
        (0..nv)
            .map(|i| match cols.iter().position(|&j| j == i) {
                Some(p) => phi[p].clone(),
                None => local.var_at(rest.iter().position(|&j| j == i).unwrap()),
            })
            .collect()
    };
    let mut converged = false;
    for step in 0..=(n + 2) {
        let imgs = images(&phi);
        let residual: Vec<Polynomial> = rows.iter().map(|&r| substitute_trunc(&rels[r], &local, &imgs, n)).collect();
        if residual.iter().all(|p| p.is_zero()) {
            trace.push(format!("elimination converged after {step} chord steps"));
            converged = true;
            break;
        }
        for (a, row) in minv.iter().enumerate() {
            let mut delta = local.zero();
            for (b, &m) in row.iter().enumerate() {
                if m != 0 {
                    delta = delta.add(&residual[b].scale(m));
                }
            }
            phi[a] = phi[a].add(&delta);
        }
    }
    if !converged {
        return Err(CoreError::Internal("chord elimination did not converge".into()));
    }
    let remaining = (0..c).find(|r| !rows.contains(r)).unwrap();
    let imgs = images(&phi);
    let jet = substitute_trunc(&rels[remaining], &local, &imgs, n);
    for (a, &j) in cols.iter().enumerate() {
        trace.push(format!("{} = {}", names[j], phi[a].jet_truncate(None, 4.min(n))));
    }
    Ok(LocalModel {
        ring: local,
        jet,
        order: n,
        exact: false,
        chart: chart.name.clone(),
        point: point.coords.clone(),
        trace,
    })
}

/// Hasse coefficient of the fiber over `base_value` on a chart with a base
/// coordinate: the coefficient of `X0*X1*...*Xm` in the product of the
/// homogenized fiber relations (for a Weierstrass cubic this is `a1`).
/// Variables other than the fiber coordinates and the base are determined by
/// the relations not involving fiber coordinates.
pub fn hasse_coefficient(atlas: &Atlas, chart_idx: usize, base_value: u64) -> Result<u64> {
    let chart = &atlas.charts[chart_idx];
    let field = &atlas.field;
    let base = atlas.base[chart_idx]
        .ok_or_else(|| CoreError::Geometry(format!("chart {} has no base coordinate", chart.name)))?;
    let vars = chart.ring.vars();
    let fiber: Vec<usize> = (0..vars.len()).filter(|&i| i != base && !vars.is_inverted(i)).collect();
    let aux: Vec<usize> = (0..vars.len()).filter(|&i| i != base && vars.is_inverted(i)).collect();
    let (fiber_rels, aux_rels): (Vec<&Polynomial>, Vec<&Polynomial>) = chart
        .relations
        .iter()
        .partition(|r| fiber.iter().any(|&v| r.degree_in(v).unwrap_or(0) > 0 || r.min_degree_in(v).unwrap_or(0) < 0));
    let m = fiber.len();
    let degrees: i64 = fiber_rels.iter().map(|r| total_degree_in(r, &fiber)).sum();
    if fiber_rels.len() + 1 != m || degrees != m as i64 + 1 {
        return Err(CoreError::Geometry(format!(
            "chart {}: fiber is not a curve with trivial canonical class in P^{m}",
            chart.name
        )));
    }
    // values of the auxiliary variables over the fiber
    let mut values = vec![0u64; vars.len()];
    values[base] = base_value;
    if !aux.is_empty() {
        let names: Vec<String> = aux.iter().map(|&i| vars.name(i).to_string()).collect();
        let inv = names.clone();
        let ring = Ring::new(field.clone(), VariableRegistry::new(&names, &inv)?);
        let imgs: Vec<Polynomial> = (0..vars.len())
            .map(|i| {
                if i == base {
                    Polynomial::constant(&ring, base_value)
                } else if let Some(p) = aux.iter().position(|&a| a == i) {
                    ring.var_at(p)
                } else {
                    ring.zero()
                }
            })
            .collect();
        let gens: Vec<Polynomial> = aux_rels
            .iter()
            .map(|r| r.substitute_raw(&ring, &imgs))
            .collect::<std::result::Result<_, _>>()?;
        let sol = solve_zero_dim(&ring, &gens, 1)?;
        if sol.points.len() != 1 {
            return Err(CoreError::Geometry(format!(
                "auxiliary variables over the fiber have {} solutions",
                sol.points.len()
            )));
        }
        for (p, &i) in aux.iter().enumerate() {
            values[i] = sol.points[0][p];
        }
    }
    // homogenized fiber relations in X0, fiber variables
    let mut hnames = vec!["X0".to_string()];
    hnames.extend(fiber.iter().map(|&i| vars.name(i).to_string()));
    let hring = Ring::new(field.clone(), VariableRegistry::new::<String>(&hnames, &[])?);
    let mut product = hring.one();
    for r in fiber_rels {
        let d = total_degree_in(r, &fiber);
        let mut terms = Vec::new();
        for (mono, coeff) in r.terms() {
            let mut c = *coeff;
            let mut e = Monomial::one(m + 1);
            let mut deg = 0;
            for (i, &x) in mono.exps().iter().enumerate() {
                if let Some(p) = fiber.iter().position(|&f| f == i) {
                    e.0[p + 1] = x;
                    deg += x as i64;
                } else if x != 0 {
                    let v = values[i];
                    let f = if x > 0 { field.pow(v, x as u128) } else { field.pow(field.inv(v)?, (-x) as u128) };
                    c = field.mul(c, f);
                }
            }
            e.0[0] = (d - deg) as i32;
            terms.push((e, c));
        }
        product = product.mul(&Polynomial::from_terms(&hring, terms));
    }
    Ok(product.coefficient(&Monomial::from_exps(&vec![1; m + 1])))
}

fn total_degree_in(r: &Polynomial, vars: &[usize]) -> i64 {
    r.terms()
        .iter()
        .map(|(m, _)| vars.iter().map(|&v| m.exps()[v] as i64).sum::<i64>())
        .max()
        .unwrap_or(0)
}

/// Roots of a univariate polynomial in variable `var`, after checking it
/// involves no other variable.
pub fn univariate_roots(f: &Polynomial, var: usize) -> Result<Vec<u64>> {
    let u = UniPoly::from_polynomial(&f.cleared(), var)?;
    Ok(algebra::univariate::roots(&u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(field: &Field, name: &str, vars: &[&str], inv: &[&str], rels: &[&str]) -> Chart {
        let ring = Ring::with_vars(field, vars, inv).unwrap();
        let relations = rels.iter().map(|r| ring.parse(r).unwrap()).collect();
        Chart::new(name, ring, relations)
    }

    fn d12_atlas() -> Atlas {
        let f = Field::gf2();
        let main = chart(&f, "main", &["x", "y", "t"], &["t"], &["y^2+t^6*y+x^3+(t^2+t^6)*x+t^7"]);
        let x0 = chart(&f, "x0", &["x0", "y0", "t"], &[], &["y0^2+t^4*x0^2*y0+x0^3+t^2*x0+t^4*x0^3+t^3*x0^4"]);
        let ov = overlap_ring(&main.ring, &[0]).unwrap();
        let imgs = ["t^2/x", "t^2*y/x^2", "t"].map(|s| ov.parse(s).unwrap()).to_vec();
        let t = Transition::new(0, 1, vec![0], ov, imgs);
        let ov2 = overlap_ring(&x0.ring, &[0, 2]).unwrap();
        let imgs2 = ["t^2/x0", "t^2*y0/x0^2", "t"].map(|s| ov2.parse(s).unwrap()).to_vec();
        let u = Transition::new(1, 0, vec![0, 2], ov2, imgs2);
        Atlas {
            field: f,
            charts: vec![main, x0],
            transitions: vec![t, u],
            base: vec![Some(2), Some(2)],
        }
    }

    #[test]
    fn charts_have_dimension_two() {
        let a = d12_atlas();
        for c in &a.charts {
            let r = validate_chart(c);
            assert!(r.ok(), "{:?}", r);
        }
        let bad = chart(&Field::gf2(), "bad", &["x", "y", "z"], &[], &["x", "y+z^2"]);
        assert_eq!(validate_chart(&bad).dimension, Some(1));
        assert!(!validate_chart(&bad).ok());
    }

    #[test]
    fn transitions_validate_and_corruption_is_caught() {
        let mut a = d12_atlas();
        let rep = a.validate();
        assert!(rep.ok(), "{:?}", rep.problems());
        assert!(rep.transitions.iter().all(|t| t.inverse_checked));
        let ov = a.transitions[0].overlap.clone();
        a.transitions[0].images[0] = ov.parse("t^3/x").unwrap();
        let rep = validate_transition(&a, &a.transitions[0]);
        assert!(!rep.ok());
        assert!(rep.problems[0].contains("relation 1 of x0"), "{:?}", rep.problems);
    }

    #[test]
    fn unique_singular_point() {
        let a = d12_atlas();
        assert!(singular_locus(&a.charts[0])[0].is_one());
        let ps = singular_points(&a, 4).unwrap();
        assert_eq!(ps.points, vec![ClosedPoint { chart: 1, coords: vec![0, 0, 0] }]);
        let m = local_model(&ps.atlas, &ps.points[0], 24).unwrap();
        assert!(m.exact);
        assert_eq!(m.jet, a.charts[1].relations[0]);
    }

    #[test]
    fn smooth_point_is_rejected() {
        let a = d12_atlas();
        // t = 1, x0 = 0: y0^2 = 0 lies on the surface; gradient has t^2 x0 term
        let p = ClosedPoint { chart: 1, coords: vec![0, 0, 1] };
        assert!(matches!(local_model(&a, &p, 10), Err(CoreError::NotSingular)));
    }

    #[test]
    fn smooth_chart_locus_is_unit() {
        let c = chart(&Field::gf2(), "c", &["x", "y", "z"], &["x", "y"], &["x*y+1"]);
        let l = singular_locus(&c);
        assert!(l.len() == 1 && l[0].is_one());
    }

    #[test]
    fn hasse_of_weierstrass_cubics() {
        let a = d12_atlas();
        // a1 = 0 on every smooth fiber
        assert_eq!(hasse_coefficient(&a, 0, 1).unwrap(), 0);
        let f = Field::gf2();
        let ord = chart(&f, "m", &["x", "y", "t"], &["t"], &["y^2+x*y+x^3+t"]);
        let at = Atlas { field: f, charts: vec![ord], transitions: vec![], base: vec![Some(2)] };
        assert_eq!(hasse_coefficient(&at, 0, 1).unwrap(), 1);
    }

    #[test]
    fn elimination_in_a_complete_intersection() {
        // z^2 + x^3 + y^7 written with an extra variable u = z + x*y
        let f = Field::gf2();
        let c = chart(&f, "ci", &["x", "y", "z", "u"], &[], &["u+z+x*y+u^2*x", "z^2+x^3+y^7"]);
        let a = Atlas { field: f, charts: vec![c], transitions: vec![], base: vec![None] };
        let p = ClosedPoint { chart: 0, coords: vec![0, 0, 0, 0] };
        let m = local_model(&a, &p, 12).unwrap();
        assert_eq!(m.variables(), &["x", "y", "z"]);
        assert_eq!(m.jet, m.ring.parse("z^2+x^3+y^7").unwrap());
    }
}
