use algebra::groebner::{local_multiplicity, GroebnerBasis, MonomialOrder};
use algebra::solve::solve_zero_dim;
use algebra::univariate::{factor_with_seed, is_irreducible, UniPoly};
use algebra::{Field, Monomial, Polynomial, Ring};
use proptest::prelude::*;

fn ring3(field: &Field) -> Ring {
    Ring::with_vars(field, &["x", "y", "z"], &[]).unwrap()
}

fn poly_strategy(nvars: usize, max_exp: i32, max_terms: usize, field_size: u64) -> impl Strategy<Value = Vec<(Vec<i32>, u64)>> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, nvars), 1..field_size),
        0..=max_terms,
    )
}

fn build(ring: &Ring, terms: &[(Vec<i32>, u64)]) -> Polynomial {
    Polynomial::from_terms(ring, terms.iter().map(|(e, c)| (Monomial::from_exps(e), *c)))
}

fn check_normal_forms(
    r: &Ring,
    gens: &[Vec<(Vec<i32>, u64)>],
    f: &[(Vec<i32>, u64)],
    order: MonomialOrder,
) -> Result<(), TestCaseError> {
    let gens: Vec<Polynomial> = gens.iter().map(|g| build(r, g)).filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Ok(());
    }
    let gb = GroebnerBasis::compute(r, &gens, order);
    prop_assert!(gb.satisfies_buchberger_criterion());
    for g in &gens {
        prop_assert!(gb.contains(g));
    }
    let f = build(r, f);
    let nf = gb.normal_form(&f);
    prop_assert_eq!(gb.normal_form(&nf), nf.clone());
    prop_assert!(gb.contains(&f.add(&nf)));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_is_bijective(k in 1u32..=16, seed in any::<u64>()) {
        let f = Field::canonical(k);
        let a = seed % (1u64 << k);
        let r = f.sqrt(a);
        prop_assert_eq!(f.square(r), a);
        prop_assert_eq!(f.pow(a, 1u128 << k), a);
    }

    #[test]
    fn square_is_additive(a in poly_strategy(3, 4, 6, 4), b in poly_strategy(3, 4, 6, 4)) {
        let r = ring3(&Field::canonical(2));
        let (f, g) = (build(&r, &a), build(&r, &b));
        prop_assert_eq!(f.add(&g).square(), f.square().add(&g.square()));
        prop_assert_eq!(f.add(&g).pow(2), f.pow(2).add(&g.pow(2)));
    }

    #[test]
    fn leibniz(a in poly_strategy(3, 4, 6, 16), b in poly_strategy(3, 4, 6, 16), v in 0usize..3) {
        let r = ring3(&Field::canonical(4));
        let (f, g) = (build(&r, &a), build(&r, &b));
        let lhs = f.mul(&g).derivative(v);
        let rhs = f.mul(&g.derivative(v)).add(&g.mul(&f.derivative(v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn laurent_leibniz(a in poly_strategy(2, 3, 5, 4), b in poly_strategy(2, 3, 5, 4)) {
        let r = Ring::with_vars(&Field::canonical(2), &["x", "t"], &["t"]).unwrap();
        let shift = |p: &Polynomial| p.mul(&r.parse("1/t^2").unwrap());
        let (f, g) = (shift(&build(&r, &a)), shift(&build(&r, &b)));
        let lhs = f.mul(&g).derivative(1);
        let rhs = f.mul(&g.derivative(1)).add(&g.mul(&f.derivative(1)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn factorization_recombines(coeffs in prop::collection::vec(0u64..16, 1..10), seed in 0u64..4) {
        let field = Field::canonical(4);
        let f = UniPoly::new(&field, coeffs);
        prop_assume!(!f.is_zero());
        let (lead, factors) = factor_with_seed(&f, seed);
        let mut prod = UniPoly::new(&field, vec![lead]);
        for (p, e) in &factors {
            prop_assert!(is_irreducible(p), "{} reducible", p.format("t"));
            for _ in 0..*e {
                prod = prod.mul(p);
            }
        }
        prop_assert_eq!(prod, f);
    }

    #[test]
    fn normal_forms_are_consistent(
        gens in prop::collection::vec(poly_strategy(3, 3, 4, 2), 1..4),
        f in poly_strategy(3, 4, 6, 2),
    ) {
        let r = ring3(&Field::gf2());
        check_normal_forms(&r, &gens, &f, MonomialOrder::Grevlex)?;
    }

    // lex bases of random ideals grow fast, so these stay small
    #[test]
    fn normal_forms_are_consistent_in_elimination_orders(
        gens in prop::collection::vec(poly_strategy(3, 2, 3, 2), 1..3),
        f in poly_strategy(3, 3, 5, 2),
    ) {
        let r = ring3(&Field::gf2());
        check_normal_forms(&r, &gens, &f, MonomialOrder::Lex)?;
        check_normal_forms(&r, &gens, &f, MonomialOrder::Block(1))?;
    }

    #[test]
    fn degree_matches_point_multiplicities(
        roots in prop::collection::vec(prop::collection::vec((0u64..4, 1u32..3), 1..3), 3),
        shear in 0u64..4,
    ) {
        let field = Field::canonical(2);
        let r = ring3(&field);
        let vars = [r.var_at(0), r.var_at(1), r.var_at(2)];
        let mut gens = Vec::new();
        let mut expected = 1usize;
        for (v, rs) in vars.iter().zip(&roots) {
            let mut g = r.one();
            let mut deg = 0;
            let mut seen = Vec::new();
            for &(a, e) in rs {
                if seen.contains(&a) {
                    continue;
                }
                seen.push(a);
                g = g.mul(&v.add(&Polynomial::constant(&r, a)).pow(e));
                deg += e as usize;
            }
            expected *= deg;
            gens.push(g);
        }
        // a triangular coordinate change x -> x + c*y keeps the count
        let images = [
            vars[0].add(&vars[1].scale(shear)),
            vars[1].clone(),
            vars[2].clone(),
        ];
        let gens: Vec<Polynomial> = gens.iter().map(|g| g.substitute_raw(&r, &images).unwrap()).collect();
        let gb = GroebnerBasis::compute(&r, &gens, MonomialOrder::Grevlex);
        prop_assert_eq!(gb.zero_dim_degree().unwrap(), expected);
        let sol = solve_zero_dim(&r, &gens, 1).unwrap();
        let mut total = 0;
        for p in &sol.points {
            for g in &gens {
                prop_assert_eq!(g.evaluate(p).unwrap(), 0);
            }
            total += local_multiplicity(&r, &gens, p, 16).unwrap();
        }
        prop_assert_eq!(total, expected);
    }
}

#[test]
fn transition_round_trip_recovers_a_monomial_multiple() {
    // (x, y, t) -> (x0, y0, t) with x0 = t^2/x, y0 = t^2 y / x^2 and back
    let f = Field::gf2();
    let main = Ring::with_vars(&f, &["x", "y", "t"], &["t", "x"]).unwrap();
    let chart = Ring::with_vars(&f, &["x0", "y0", "t"], &["t", "x0"]).unwrap();
    let rel = main.parse("y^2+t^6*y+x^3+(t^2+t^6)*x+t^7").unwrap();
    let to_chart = [
        chart.parse("t^2/x0").unwrap(),
        chart.parse("t^2*y0/x0^2").unwrap(),
        chart.parse("t").unwrap(),
    ];
    let back = [
        main.parse("t^2/x").unwrap(),
        main.parse("t^2*y/x^2").unwrap(),
        main.parse("t").unwrap(),
    ];
    let (g, _) = rel.substitute(&chart, &to_chart).unwrap();
    let (h, _) = g.substitute(&main, &back).unwrap();
    let ratio_terms: Vec<_> = rel.terms().iter().zip(h.terms()).map(|(a, b)| b.0.div(&a.0)).collect();
    assert_eq!(rel.len(), h.len());
    assert!(ratio_terms.windows(2).all(|w| w[0] == w[1]));
}
