//! Solving zero-dimensional systems over GF(2^k) with on-demand extensions.
//!
//! Coordinates are found one variable at a time: the minimal polynomial of
//! the variable in the quotient algebra is factored, each root is fixed by
//! adding a linear generator, and the search continues with the next variable.
//! A nonlinear irreducible factor triggers a restart over a larger field.

use std::collections::HashMap;

use crate::field::{Embedding, Field};
use crate::groebner::{localize, GroebnerBasis, MonomialOrder};
use crate::poly::{Monomial, Polynomial, Ring};
use crate::univariate::{factor, UniPoly};
use crate::{AlgebraError, Result};

/// Solutions of a zero-dimensional system.
#[derive(Clone, Debug)]
pub struct Solutions {
    /// Field containing every coordinate.
    pub field: Field,
    /// Embedding of the input's coefficient field into `field`.
    pub embedding: Embedding,
    /// Raw coordinates in `field`, one vector per point, in ascending order.
    pub points: Vec<Vec<u64>>,
}

enum Failure {
    Extend(u32),
    Fatal(AlgebraError),
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        Failure::Fatal(e)
    }
}

/// All points of `V(gens)` in the localization at the inverted variables.
///
/// Coordinates live in an extension of degree at most `max_ext_degree` over
/// the ring's field; otherwise an `ExtensionTooSmall` error is returned.
pub fn solve_zero_dim(ring: &Ring, gens: &[Polynomial], max_ext_degree: u32) -> Result<Solutions> {
    let base = ring.field().clone();
    let local = localize(ring, gens);
    let mut ext = 1u32;
    loop {
        let field = if ext == 1 {
            base.clone()
        } else {
            Field::canonical(base.degree() * ext)
        };
        let emb = base.embedding_into(&field)?;
        let r = ring.with_field(&field);
        let mapped: Vec<Polynomial> = local.iter().map(|g| g.map_field(&emb, &r)).collect();
        match solve_over(&r, &mapped) {
            Ok(points) => {
                return Ok(Solutions {
                    field,
                    embedding: emb,
                    points,
                })
            }
            Err(Failure::Extend(d)) => {
                let next = crate::field::lcm(ext, d * ext);
                if next > max_ext_degree {
                    return Err(AlgebraError::ExtensionTooSmall {
                        needed: next,
                        max: max_ext_degree,
                    });
                }
                ext = next;
            }
            Err(Failure::Fatal(e)) => return Err(e),
        }
    }
}

fn solve_over(ring: &Ring, gens: &[Polynomial]) -> std::result::Result<Vec<Vec<u64>>, Failure> {
    let n = ring.nvars();
    let mut out = Vec::new();
    let mut fixed = Vec::with_capacity(n);
    if gens.is_empty() {
        return Err(Failure::Fatal(AlgebraError::NotZeroDimensional));
    }
    recurse(ring, gens.to_vec(), 0, &mut fixed, &mut out)?;
    // drop points where an inverted coordinate vanishes (cannot happen for a
    // saturated ideal; kept as a guard)
    let inv = ring.vars().inverted_indices();
    out.retain(|p| inv.iter().all(|&i| p[i] != 0));
    Ok(out)
}

fn recurse(
    ring: &Ring,
    gens: Vec<Polynomial>,
    var: usize,
    fixed: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) -> std::result::Result<(), Failure> {
    let gb = GroebnerBasis::compute(ring, &gens, MonomialOrder::Grevlex);
    if gb.contains_one() {
        return Ok(());
    }
    if var == ring.nvars() {
        out.push(fixed.clone());
        return Ok(());
    }
    let minpoly = minimal_polynomial(&gb, var)?;
    let (_, factors) = factor(&minpoly);
    if let Some(d) = factors
        .iter()
        .map(|(p, _)| p.degree().unwrap_or(1) as u32)
        .find(|&d| d > 1)
    {
        return Err(Failure::Extend(d));
    }
    let mut roots: Vec<u64> = factors.iter().map(|(p, _)| p.coeffs()[0]).collect();
    roots.sort_unstable();
    roots.dedup();
    let base: Vec<Polynomial> = gb.generators().to_vec();
    for r in roots {
        let mut next = base.clone();
        next.push(ring.var_at(var).add(&Polynomial::constant(ring, r)));
        fixed.push(r);
        recurse(ring, next, var + 1, fixed, out)?;
        fixed.pop();
    }
    Ok(())
}

/// Minimal polynomial of multiplication by variable `var` on the quotient.
pub fn minimal_polynomial(gb: &GroebnerBasis, var: usize) -> Result<UniPoly> {
    let ring = gb.ring();
    let field = ring.field();
    let basis = gb.standard_monomials()?;
    let index: HashMap<Monomial, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let dim = basis.len();
    let to_vec = |p: &Polynomial| -> Vec<u64> {
        let mut v = vec![0u64; dim];
        for (m, c) in p.terms() {
            v[index[m]] = *c;
        }
        v
    };
    // echelon rows: (vector, combination of powers, pivot)
    let mut rows: Vec<(Vec<u64>, Vec<u64>, usize)> = Vec::new();
    let x = ring.var_at(var);
    let mut power = gb.normal_form(&ring.one());
    for j in 0..=dim {
        let mut v = to_vec(&power);
        let mut comb = vec![0u64; dim + 1];
        comb[j] = 1;
        for (rv, rc, piv) in &rows {
            let c = v[*piv];
            if c != 0 {
                for k in 0..dim {
                    v[k] ^= field.mul(c, rv[k]);
                }
                for k in 0..=dim {
                    comb[k] ^= field.mul(c, rc[k]);
                }
            }
        }
        match v.iter().position(|&c| c != 0) {
            None => return Ok(UniPoly::new(field, comb).monic()),
            Some(piv) => {
                let inv = field.inv(v[piv])?;
                for c in v.iter_mut() {
                    *c = field.mul(*c, inv);
                }
                for c in comb.iter_mut() {
                    *c = field.mul(*c, inv);
                }
                rows.push((v, comb, piv));
            }
        }
        power = gb.normal_form(&power.mul(&x));
    }
    unreachable!("dependency found within dim + 1 powers")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_over_gf4() {
        let r = Ring::with_vars(&Field::gf2(), &["x", "y", "t"], &[]).unwrap();
        let gens = ["t^2+t+1", "x", "y"].map(|s| r.parse(s).unwrap());
        let sol = solve_zero_dim(&r, &gens, 2).unwrap();
        assert_eq!(sol.field.degree(), 2);
        assert_eq!(sol.points, vec![vec![0, 0, 2], vec![0, 0, 3]]);
    }

    #[test]
    fn nilpotent_single_point() {
        let r = Ring::with_vars(&Field::gf2(), &["x", "y"], &[]).unwrap();
        let sol = solve_zero_dim(&r, &[r.parse("x^2").unwrap(), r.parse("y").unwrap()], 1).unwrap();
        assert_eq!(sol.points, vec![vec![0, 0]]);
    }

    #[test]
    fn extension_too_small() {
        let r = Ring::with_vars(&Field::gf2(), &["t", "x"], &[]).unwrap();
        let gens = [r.parse("t^5+t+1").unwrap(), r.parse("x").unwrap()];
        let e = solve_zero_dim(&r, &gens, 2).unwrap_err();
        assert!(matches!(e, AlgebraError::ExtensionTooSmall { .. }), "{e}");
        let sol = solve_zero_dim(&r, &gens, 6).unwrap();
        assert_eq!(sol.points.len(), 5);
    }

    #[test]
    fn inverted_variables_exclude_points() {
        let r = Ring::with_vars(&Field::gf2(), &["t"], &["t"]).unwrap();
        let sol = solve_zero_dim(&r, &[r.parse("t^2+t").unwrap()], 1).unwrap();
        assert_eq!(sol.points, vec![vec![1]]);
    }
}
