//! Buchberger's algorithm with the Gebauer–Möller criteria and the normal
//! selection strategy, plus the ideal operations built on it.
//!
//! Internally polynomials are exponent-vector/coefficient lists sorted
//! descending in the active order. Exponents must be nonnegative; callers
//! clear Laurent denominators first (see [`localize`]).

use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::field::Field;
use crate::poly::{grevlex_cmp, Monomial, Polynomial, Ring};
use crate::{AlgebraError, Result};

type Mon = SmallVec<[i32; 8]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Grevlex on the first `k` variables, ties broken by grevlex on the rest.
    Block(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[i32], b: &[i32]) -> Ordering {
        match *self {
            MonomialOrder::Grevlex => grevlex_cmp(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Block(k) => {
                grevlex_cmp(&a[..k], &b[..k]).then_with(|| grevlex_cmp(&a[k..], &b[k..]))
            }
        }
    }

    fn is_degree_compatible(&self) -> bool {
        matches!(self, MonomialOrder::Grevlex)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GPoly {
    pub(crate) terms: Vec<(Mon, u64)>,
}

fn deg(m: &[i32]) -> i64 {
    m.iter().map(|&e| e as i64).sum()
}

fn divides(a: &[i32], b: &[i32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[i32], b: &[i32]) -> Mon {
    a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect()
}

fn coprime(a: &[i32], b: &[i32]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x == 0 || y == 0)
}

/// Shared arithmetic context.
#[derive(Clone)]
pub(crate) struct Ctx {
    pub(crate) field: Field,
    pub(crate) order: MonomialOrder,
    /// When set, the ideal contains every monomial of this total degree.
    pub(crate) truncate: Option<i64>,
}

impl Ctx {
    fn sort(&self, p: &mut GPoly) {
        p.terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        // merge duplicates
        let mut out: Vec<(Mon, u64)> = Vec::with_capacity(p.terms.len());
        for (m, c) in p.terms.drain(..) {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc ^= c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(m, c)| *c != 0 && self.keep(m));
        p.terms = out;
    }

    #[inline]
    fn keep(&self, m: &[i32]) -> bool {
        match self.truncate {
            Some(n) => deg(m) < n,
            None => true,
        }
    }

    pub(crate) fn from_poly(&self, p: &Polynomial) -> GPoly {
        let mut g = GPoly {
            terms: p
                .terms()
                .iter()
                .map(|(m, c)| (SmallVec::from_slice(m.exps()), *c))
                .collect(),
        };
        debug_assert!(g.terms.iter().all(|(m, _)| m.iter().all(|&e| e >= 0)));
        self.sort(&mut g);
        g
    }

    pub(crate) fn to_poly(&self, ring: &Ring, g: &GPoly) -> Polynomial {
        Polynomial::from_terms(
            ring,
            g.terms
                .iter()
                .map(|(m, c)| (Monomial(m.clone()), *c))
                .collect::<Vec<_>>(),
        )
    }

    fn monic(&self, p: &mut GPoly) {
        if let Some(&(_, c)) = p.terms.first() {
            if c != 1 {
                let inv = self.field.inv(c).expect("nonzero");
                for t in &mut p.terms {
                    t.1 = self.field.mul(t.1, inv);
                }
            }
        }
    }

    /// p - c * m * g, all sorted.
    fn sub_mul(&self, p: &GPoly, c: u64, m: &[i32], g: &GPoly) -> GPoly {
        let f = &self.field;
        let mut out = Vec::with_capacity(p.terms.len() + g.terms.len());
        let mut i = 0;
        let mut it = g.terms.iter().map(|(gm, gc)| {
            let mm: Mon = gm.iter().zip(m).map(|(a, b)| a + b).collect();
            (mm, f.mul(*gc, c))
        });
        let mut next = it.next();
        loop {
            match (&p.terms.get(i), &next) {
                (None, None) => break,
                (Some(a), None) => {
                    out.push((*a).clone());
                    i += 1;
                }
                (None, Some(b)) => {
                    if self.keep(&b.0) {
                        out.push(b.clone());
                    }
                    next = it.next();
                }
                (Some(a), Some(b)) => match self.order.cmp(&a.0, &b.0) {
                    Ordering::Greater => {
                        out.push((*a).clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        if self.keep(&b.0) {
                            out.push(b.clone());
                        }
                        next = it.next();
                    }
                    Ordering::Equal => {
                        let v = a.1 ^ b.1;
                        if v != 0 {
                            out.push((a.0.clone(), v));
                        }
                        i += 1;
                        next = it.next();
                    }
                },
            }
        }
        GPoly { terms: out }
    }

    /// Full reduction of `p` modulo `basis` (indices into `polys`).
    fn reduce(&self, p: &GPoly, polys: &[GPoly], basis: &[usize]) -> GPoly {
        let mut p = p.clone();
        p.terms.retain(|(m, _)| self.keep(m));
        let mut rem: Vec<(Mon, u64)> = Vec::new();
        loop {
            // move the irreducible prefix into the remainder
            let mut hit = None;
            let mut k = 0;
            while k < p.terms.len() {
                let lm = &p.terms[k].0;
                if let Some(&j) = basis.iter().find(|&&j| divides(&polys[j].terms[0].0, lm)) {
                    hit = Some(j);
                    break;
                }
                k += 1;
            }
            rem.extend(p.terms.drain(..k));
            let Some(j) = hit else { break };
            let (lm, lc) = p.terms[0].clone();
            let g = &polys[j];
            let (gm, gc) = &g.terms[0];
            let q: Mon = lm.iter().zip(gm).map(|(a, b)| a - b).collect();
            let c = self.field.div(lc, *gc).expect("nonzero");
            p = self.sub_mul(&p, c, &q, g);
        }
        GPoly { terms: rem }
    }

    fn spoly(&self, a: &GPoly, b: &GPoly) -> GPoly {
        let (am, ac) = &a.terms[0];
        let (bm, bc) = &b.terms[0];
        let l = lcm(am, bm);
        let qa: Mon = l.iter().zip(am).map(|(x, y)| x - y).collect();
        let qb: Mon = l.iter().zip(bm).map(|(x, y)| x - y).collect();
        // bc * qa * a - ac * qb * b
        let scaled_a = self.sub_mul(&GPoly { terms: vec![] }, *bc, &qa, a);
        self.sub_mul(&scaled_a, *ac, &qb, b)
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mon,
    seq: usize,
}

fn trace_enabled() -> bool {
    std::env::var_os("ALGEBRA_GB_TRACE").is_some()
}

/// Reduced Gröbner basis (monic, sorted ascending by leading monomial).
pub(crate) fn buchberger(ctx: &Ctx, nvars: usize, gens: Vec<GPoly>) -> Vec<GPoly> {
    let trace = trace_enabled();
    let mut polys: Vec<GPoly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut seq = 0usize;

    let mut input: Vec<GPoly> = gens.into_iter().filter(|g| !g.terms.is_empty()).collect();
    // low leading monomials first keeps the early basis small
    input.sort_by(|a, b| ctx.order.cmp(&a.terms[0].0, &b.terms[0].0));

    let insert = |h: GPoly,
                      polys: &mut Vec<GPoly>,
                      active: &mut Vec<usize>,
                      pairs: &mut Vec<Pair>,
                      seq: &mut usize| {
        let hi = polys.len();
        let hm = h.terms[0].0.clone();
        polys.push(h);
        // Gebauer–Möller update
        let mut cands: Vec<(usize, Mon, bool)> = active
            .iter()
            .map(|&g| {
                let gm = &polys[g].terms[0].0;
                (g, lcm(&hm, gm), coprime(&hm, gm))
            })
            .collect();
        let mut keep_c: Vec<bool> = vec![true; cands.len()];
        for a in 0..cands.len() {
            if cands[a].2 {
                continue;
            }
            for b in 0..cands.len() {
                if a == b || !keep_c[b] {
                    continue;
                }
                // drop a if a strictly larger lcm is divisible by another's
                if divides(&cands[b].1, &cands[a].1)
                    && (cands[b].1 != cands[a].1 || b < a)
                {
                    keep_c[a] = false;
                    break;
                }
            }
        }
        let mut newpairs: Vec<(usize, Mon)> = Vec::new();
        for (k, (g, l, cp)) in cands.drain(..).enumerate() {
            if keep_c[k] && !cp {
                newpairs.push((g, l));
            }
        }
        pairs.retain(|p| {
            let pm = &p.lcm;
            if !divides(&hm, pm) {
                return true;
            }
            let li = lcm(&polys[p.i].terms[0].0, &hm);
            let lj = lcm(&polys[p.j].terms[0].0, &hm);
            li == *pm || lj == *pm
        });
        for (g, l) in newpairs {
            pairs.push(Pair {
                i: g,
                j: hi,
                lcm: l,
                seq: *seq,
            });
            *seq += 1;
        }
        active.retain(|&g| !divides(&hm, &polys[g].terms[0].0));
        active.push(hi);
    };

    // With a truncation degree n the ideal implicitly contains m^n; its
    // S-pairs with an element h are the multiples of h whose leading term
    // reaches degree n, queued here as pending generators.
    let mut pending: Vec<GPoly> = input;
    pending.reverse();
    loop {
        let s = if let Some(g) = pending.pop() {
            g
        } else if !pairs.is_empty() {
            // normal strategy: smallest lcm degree, then the order, then age
            let best = (0..pairs.len())
                .min_by(|&a, &b| {
                    let (pa, pb) = (&pairs[a], &pairs[b]);
                    deg(&pa.lcm)
                        .cmp(&deg(&pb.lcm))
                        .then_with(|| ctx.order.cmp(&pa.lcm, &pb.lcm))
                        .then(pa.seq.cmp(&pb.seq))
                })
                .unwrap();
            let p = pairs.swap_remove(best);
            if trace {
                eprintln!("gb: pair ({}, {}) lcm {:?}", p.i, p.j, p.lcm.as_slice());
            }
            ctx.spoly(&polys[p.i], &polys[p.j])
        } else {
            break;
        };
        let mut h = ctx.reduce(&s, &polys, &active);
        if h.terms.is_empty() {
            continue;
        }
        ctx.monic(&mut h);
        if trace {
            eprintln!(
                "gb: new element, lead {:?}, {} terms",
                h.terms[0].0.as_slice(),
                h.terms.len()
            );
        }
        if h.terms[0].0.iter().all(|&e| e == 0) {
            return vec![GPoly {
                terms: vec![(SmallVec::from_elem(0, nvars), 1)],
            }];
        }
        if let Some(n) = ctx.truncate {
            let d = deg(&h.terms[0].0);
            if d < n {
                for beta in monomials_of_degree(nvars, n - d) {
                    let m = ctx.sub_mul(&GPoly { terms: vec![] }, 1, &beta, &h);
                    if !m.terms.is_empty() {
                        pending.push(m);
                    }
                }
            }
        }
        insert(h, &mut polys, &mut active, &mut pairs, &mut seq);
    }

    // interreduce the minimal basis
    let mut minimal: Vec<usize> = active.clone();
    minimal.sort_by(|&a, &b| ctx.order.cmp(&polys[a].terms[0].0, &polys[b].terms[0].0));
    let mut out: Vec<GPoly> = Vec::with_capacity(minimal.len());
    for (k, &g) in minimal.iter().enumerate() {
        let others: Vec<usize> = minimal
            .iter()
            .enumerate()
            .filter(|&(k2, _)| k2 != k)
            .map(|(_, &x)| x)
            .collect();
        let head = GPoly {
            terms: vec![polys[g].terms[0].clone()],
        };
        let tail = GPoly {
            terms: polys[g].terms[1..].to_vec(),
        };
        let mut r = ctx.reduce(&tail, &polys, &others);
        r.terms.insert(0, head.terms[0].clone());
        ctx.monic(&mut r);
        out.push(r);
    }
    if cfg!(debug_assertions) {
        assert!(
            satisfies_buchberger_criterion(ctx, &out),
            "Buchberger criterion violated"
        );
    }
    out
}

/// Every S-polynomial of basis pairs reduces to zero.
pub(crate) fn satisfies_buchberger_criterion(ctx: &Ctx, basis: &[GPoly]) -> bool {
    let idx: Vec<usize> = (0..basis.len()).collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let (a, b) = (&basis[i].terms[0].0, &basis[j].terms[0].0);
            if coprime(a, b) || (basis[i].terms.len() == 1 && basis[j].terms.len() == 1) {
                continue;
            }
            let s = ctx.spoly(&basis[i], &basis[j]);
            if !ctx.reduce(&s, basis, &idx).terms.is_empty() {
                return false;
            }
        }
    }
    true
}

fn monomials_of_degree(n: usize, d: i64) -> Vec<Mon> {
    let mut out = Vec::new();
    let mut cur: Mon = SmallVec::from_elem(0, n);
    fn rec(i: usize, left: i64, cur: &mut Mon, out: &mut Vec<Mon>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left as i32;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as i32;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// A reduced Gröbner basis together with its ring, order and source ideal.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    basis: Vec<Polynomial>,
    internal: Vec<GPoly>,
    source: Vec<Polynomial>,
    truncate: Option<i64>,
}

impl GroebnerBasis {
    /// Reduced basis of the ideal generated by `gens` (nonnegative exponents).
    pub fn compute(ring: &Ring, gens: &[Polynomial], order: MonomialOrder) -> GroebnerBasis {
        Self::compute_inner(ring, gens, order, None)
    }

    /// Basis of `gens + m^n` where `m` is the ideal of the origin. Grevlex only.
    pub fn compute_with_power_of_maximal(ring: &Ring, gens: &[Polynomial], n: i64) -> GroebnerBasis {
        Self::compute_inner(ring, gens, MonomialOrder::Grevlex, Some(n))
    }

    fn compute_inner(
        ring: &Ring,
        gens: &[Polynomial],
        order: MonomialOrder,
        truncate: Option<i64>,
    ) -> GroebnerBasis {
        assert!(truncate.is_none() || order.is_degree_compatible());
        let ctx = Ctx {
            field: ring.field().clone(),
            order,
            truncate,
        };
        let internal_gens: Vec<GPoly> = gens.iter().map(|g| ctx.from_poly(g)).collect();
        let internal = buchberger(&ctx, ring.nvars(), internal_gens);
        let basis = internal.iter().map(|g| ctx.to_poly(ring, g)).collect();
        GroebnerBasis {
            ring: ring.clone(),
            order,
            basis,
            internal,
            source: gens.to_vec(),
            truncate,
        }
    }

    fn ctx(&self) -> Ctx {
        Ctx {
            field: self.ring.field().clone(),
            order: self.order,
            truncate: self.truncate,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn source(&self) -> &[Polynomial] {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Leading monomials in the basis order.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.internal
            .iter()
            .map(|g| Monomial(g.terms[0].0.clone()))
            .collect()
    }

    /// Remainder modulo the basis (terms sorted in the ring's canonical order).
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let ctx = self.ctx();
        let g = ctx.from_poly(f);
        let idx: Vec<usize> = (0..self.internal.len()).collect();
        ctx.to_poly(&self.ring, &ctx.reduce(&g, &self.internal, &idx))
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn contains_one(&self) -> bool {
        self.internal.len() == 1 && self.internal[0].terms[0].0.iter().all(|&e| e == 0)
    }

    pub fn satisfies_buchberger_criterion(&self) -> bool {
        satisfies_buchberger_criterion(&self.ctx(), &self.internal)
    }

    /// Standard monomials, or an error if the quotient is infinite.
    pub fn standard_monomials(&self) -> Result<Vec<Monomial>> {
        let n = self.ring.nvars();
        if self.contains_one() {
            return Ok(Vec::new());
        }
        let lms: Vec<Mon> = self.internal.iter().map(|g| g.terms[0].0.clone()).collect();
        let cap = self.truncate.map(|t| t as i32).unwrap_or(i32::MAX);
        let mut bounds = vec![cap; n];
        for m in &lms {
            let nz: Vec<usize> = (0..n).filter(|&i| m[i] > 0).collect();
            if nz.len() == 1 {
                bounds[nz[0]] = bounds[nz[0]].min(m[nz[0]]);
            }
        }
        if bounds.iter().any(|&b| b == i32::MAX) {
            return Err(AlgebraError::NotZeroDimensional);
        }
        let mut out = Vec::new();
        let mut cur: Mon = SmallVec::from_elem(0, n);
        fn rec(
            i: usize,
            cur: &mut Mon,
            bounds: &[i32],
            cap: i32,
            lms: &[Mon],
            out: &mut Vec<Monomial>,
        ) {
            if i == cur.len() {
                out.push(Monomial(cur.clone()));
                return;
            }
            let used: i32 = cur[..i].iter().sum();
            for e in 0..bounds[i] {
                if used + e >= cap {
                    break;
                }
                cur[i] = e;
                // divisibility only depends on the prefix set so far
                let blocked = lms.iter().any(|m| {
                    (0..=i).all(|k| m[k] <= cur[k]) && m[i + 1..].iter().all(|&x| x == 0)
                });
                if blocked {
                    break;
                }
                rec(i + 1, cur, bounds, cap, lms, out);
            }
            cur[i] = 0;
        }
        rec(0, &mut cur, &bounds, cap, &lms, &mut out);
        out.sort_by(|a, b| self.order.cmp(&a.0, &b.0));
        Ok(out)
    }

    /// Vector-space dimension of the quotient ring.
    pub fn zero_dim_degree(&self) -> Result<usize> {
        Ok(self.standard_monomials()?.len())
    }
}

/// Reduced basis in grevlex.
pub fn groebner(gens: &[Polynomial]) -> GroebnerBasis {
    let ring = gens.first().expect("at least one generator").ring().clone();
    GroebnerBasis::compute(&ring, gens, MonomialOrder::Grevlex)
}

fn with_extra_vars(g: &GPoly, extra: usize) -> GPoly {
    GPoly {
        terms: g
            .terms
            .iter()
            .map(|(m, c)| {
                let mut mm: Mon = SmallVec::from_elem(0, extra);
                mm.extend_from_slice(m);
                (mm, *c)
            })
            .collect(),
    }
}

/// `I : f^∞` via `I + (1 - u f)` and elimination of `u`.
pub fn saturate(ring: &Ring, gens: &[Polynomial], f: &Polynomial) -> Vec<Polynomial> {
    if f.is_constant() && !f.is_zero() {
        return groebner_or_empty(ring, gens);
    }
    let n = ring.nvars();
    let ctx_big = Ctx {
        field: ring.field().clone(),
        order: MonomialOrder::Block(1),
        truncate: None,
    };
    let ctx_small = Ctx {
        field: ring.field().clone(),
        order: MonomialOrder::Grevlex,
        truncate: None,
    };
    let mut big: Vec<GPoly> = gens
        .iter()
        .map(|g| with_extra_vars(&ctx_small.from_poly(g), 1))
        .collect();
    // 1 + u f
    let uf = with_extra_vars(&ctx_small.from_poly(f), 1);
    let mut t = GPoly {
        terms: uf
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m = m.clone();
                m[0] += 1;
                (m, *c)
            })
            .collect(),
    };
    t.terms.push((SmallVec::from_elem(0, n + 1), 1));
    ctx_big.sort(&mut t);
    big.push(t);
    for g in &mut big {
        ctx_big.sort(g);
    }
    let basis = buchberger(&ctx_big, n + 1, big);
    let kept: Vec<Polynomial> = basis
        .iter()
        .filter(|g| g.terms.iter().all(|(m, _)| m[0] == 0))
        .map(|g| {
            let small = GPoly {
                terms: g.terms.iter().map(|(m, c)| (m[1..].into(), *c)).collect(),
            };
            ctx_small.to_poly(ring, &small)
        })
        .collect();
    kept
}

fn groebner_or_empty(ring: &Ring, gens: &[Polynomial]) -> Vec<Polynomial> {
    GroebnerBasis::compute(ring, gens, MonomialOrder::Grevlex)
        .generators()
        .to_vec()
}

/// Generators of `I ∩ k[remaining variables]`, still living in `ring`.
pub fn eliminate(ring: &Ring, gens: &[Polynomial], vars: &[usize]) -> Vec<Polynomial> {
    if vars.is_empty() {
        return groebner_or_empty(ring, gens);
    }
    let n = ring.nvars();
    // permutation putting eliminated variables first
    let mut perm: Vec<usize> = vars.to_vec();
    perm.extend((0..n).filter(|i| !vars.contains(i)));
    let ctx_big = Ctx {
        field: ring.field().clone(),
        order: MonomialOrder::Block(vars.len()),
        truncate: None,
    };
    let permuted: Vec<GPoly> = gens
        .iter()
        .map(|g| {
            let mut p = GPoly {
                terms: g
                    .terms()
                    .iter()
                    .map(|(m, c)| (perm.iter().map(|&i| m.exps()[i]).collect(), *c))
                    .collect(),
            };
            ctx_big.sort(&mut p);
            p
        })
        .collect();
    let basis = buchberger(&ctx_big, n, permuted);
    let k = vars.len();
    basis
        .into_iter()
        .filter(|g| g.terms.iter().all(|(m, _)| m[..k].iter().all(|&e| e == 0)))
        .map(|g| {
            Polynomial::from_terms(
                ring,
                g.terms
                    .iter()
                    .map(|(m, c)| {
                        let mut e = Monomial::one(n);
                        for (pos, &orig) in perm.iter().enumerate() {
                            e.0[orig] = m[pos];
                        }
                        (e, *c)
                    })
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}

/// Clear Laurent denominators and saturate at the product of the inverted
/// variables that occur, giving the ideal of the localization.
pub fn localize(ring: &Ring, gens: &[Polynomial]) -> Vec<Polynomial> {
    let cleared: Vec<Polynomial> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.cleared())
        .collect();
    if cleared.is_empty() {
        return Vec::new();
    }
    let inv = ring.vars().inverted_indices();
    if inv.is_empty() {
        return groebner_or_empty(ring, &cleared);
    }
    let mut m = Monomial::one(ring.nvars());
    for i in inv {
        m.0[i] = 1;
    }
    saturate(ring, &cleared, &Polynomial::monomial(ring, m, 1))
}

/// `dim k[x]/(I + m^n)` for the ideal `m` of the origin.
pub fn colength_with_power_of_maximal(ring: &Ring, gens: &[Polynomial], n: i64) -> usize {
    GroebnerBasis::compute_with_power_of_maximal(ring, gens, n)
        .zero_dim_degree()
        .expect("quotient by a power of the maximal ideal is finite")
}

/// Local multiplicity of `I` at the origin: `dim k[x]/(I + m^N)` for the first
/// `N` at which two consecutive values agree. Errors past `max_n`.
pub fn local_multiplicity_at_origin(ring: &Ring, gens: &[Polynomial], max_n: i64) -> Result<usize> {
    let mut prev = colength_with_power_of_maximal(ring, gens, 1);
    if prev == 0 {
        return Ok(0);
    }
    for n in 2..=max_n {
        let cur = colength_with_power_of_maximal(ring, gens, n);
        if cur == prev {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(AlgebraError::NotZeroDimensional)
}

/// Local multiplicity of the (Laurent) ideal at a point given by raw values in
/// the ring's field.
pub fn local_multiplicity(ring: &Ring, gens: &[Polynomial], point: &[u64], max_n: i64) -> Result<usize> {
    for i in ring.vars().inverted_indices() {
        if point[i] == 0 {
            return Err(AlgebraError::ZeroAtInvertedVariable(
                ring.vars().name(i).to_string(),
            ));
        }
    }
    let plain = Ring::new(
        ring.field().clone(),
        crate::poly::VariableRegistry::new::<&str>(
            &ring.vars().names().iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            &[],
        )?,
    );
    let idx: Vec<usize> = (0..ring.nvars()).collect();
    let mut shifted = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let c = g.cleared().rename(&plain, &idx);
        shifted.push(c.translate(point)?);
    }
    if shifted.is_empty() {
        return Err(AlgebraError::NotZeroDimensional);
    }
    local_multiplicity_at_origin(&plain, &shifted, max_n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(names: &[&str]) -> Ring {
        Ring::with_vars(&Field::gf2(), names, &[]).unwrap()
    }

    #[test]
    fn unit_ideal() {
        let r = ring(&["x"]);
        let gb = groebner(&[r.parse("x").unwrap(), r.parse("x+1").unwrap()]);
        assert!(gb.contains_one());
        let r2 = ring(&["x", "y"]);
        assert!(!groebner(&[r2.parse("x*y").unwrap()]).contains_one());
    }

    #[test]
    fn already_reduced() {
        let r = ring(&["x", "y"]);
        let gens = [r.parse("y^2").unwrap(), r.parse("x*y").unwrap()];
        let gb = groebner(&gens);
        let mut got: Vec<String> = gb.generators().iter().map(|p| p.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["x*y", "y^2"]);
        assert_eq!(gb.normal_form(&r.one()), r.one());
    }

    #[test]
    fn zero_dimensional_degrees() {
        let r = ring(&["X", "Y"]);
        let gb = groebner(&[r.parse("X^2").unwrap(), r.parse("Y^6").unwrap()]);
        assert_eq!(gb.zero_dim_degree().unwrap(), 12);
        let gb = groebner(&[r.parse("X").unwrap(), r.parse("Y").unwrap()]);
        assert_eq!(gb.zero_dim_degree().unwrap(), 1);
        let gb = groebner(&[r.parse("X").unwrap()]);
        assert_eq!(gb.zero_dim_degree(), Err(AlgebraError::NotZeroDimensional));
    }

    #[test]
    fn saturation() {
        let r = ring(&["t", "x"]);
        let t = r.parse("t").unwrap();
        let sat = saturate(&r, &[r.parse("t*x").unwrap()], &t);
        assert_eq!(sat, vec![r.parse("x").unwrap()]);
        let sat = saturate(&r, &[t.clone()], &t);
        assert_eq!(sat, vec![r.one()]);
        let sat = saturate(&r, &[r.parse("t*x").unwrap()], &r.one());
        assert_eq!(sat, vec![r.parse("t*x").unwrap()]);
    }

    #[test]
    fn elimination_finds_cusp() {
        let r = ring(&["t", "x", "y"]);
        let gens = [r.parse("x+t^2").unwrap(), r.parse("y+t^3").unwrap()];
        let el = eliminate(&r, &gens, &[0]);
        let gb = GroebnerBasis::compute(&r, &el, MonomialOrder::Grevlex);
        assert!(gb.contains(&r.parse("x^3+y^2").unwrap()));
        let unit = eliminate(&r, &[r.one()], &[0, 1, 2]);
        assert_eq!(unit, vec![r.one()]);
    }

    #[test]
    fn local_multiplicities() {
        let r = ring(&["x", "y", "z"]);
        // tjurina ideal of z^2 + x^3 + y^7 in characteristic 2
        let gens = ["z^2+x^3+y^7", "x^2", "y^6", "0"].map(|s| r.parse(s).unwrap());
        assert_eq!(local_multiplicity_at_origin(&r, &gens, 60).unwrap(), 24);
        // a distant point does not contribute
        let gens = ["x*(x+1)", "y", "z"].map(|s| r.parse(s).unwrap());
        assert_eq!(local_multiplicity_at_origin(&r, &gens, 60).unwrap(), 1);
        assert_eq!(local_multiplicity(&r, &gens, &[1, 0, 0], 60).unwrap(), 1);
        assert_eq!(local_multiplicity(&r, &gens, &[0, 1, 0], 60).unwrap(), 0);
    }
}
