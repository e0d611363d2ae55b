//! Random jet-bounded coordinate changes of double points.
#![allow(dead_code)]

use algebra::{Field, Monomial, Polynomial, Ring};
use covercheck::jet::{mul_trunc, substitute_trunc};
use covercheck::singclass::{classify_jet, normal_form_table, std_ring, SingClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TRIALS: usize = 20;
pub const ORDER: i64 = 32;
pub const SEED: u64 = 0x5eed;

pub fn random_poly(ring: &Ring, rng: &mut ChaCha8Rng, lo: i32, hi: i32, density: f64) -> Polynomial {
    let q = ring.field().size() as u64;
    let n = ring.nvars();
    let mut terms = Vec::new();
    let mut e = vec![0i32; n];
    loop {
        let d: i32 = e.iter().sum();
        if d >= lo && d <= hi && rng.gen_bool(density) {
            terms.push((Monomial::from_exps(&e), rng.gen_range(1..q)));
        }
        // odometer over exponent vectors of total degree <= hi, last
        // variable fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Polynomial::from_terms(ring, terms);
            }
            i -= 1;
            e[i] += 1;
            if e.iter().sum::<i32>() <= hi {
                break;
            }
            e[i] = 0;
        }
    }
}

fn det3(f: &Field, m: &[[u64; 3]; 3]) -> u64 {
    let t = |a: u64, b: u64, c: u64| f.mul(a, f.mul(b, c));
    t(m[0][0], m[1][1], m[2][2])
        ^ t(m[0][1], m[1][2], m[2][0])
        ^ t(m[0][2], m[1][0], m[2][1])
        ^ t(m[0][2], m[1][1], m[2][0])
        ^ t(m[0][0], m[1][2], m[2][1])
        ^ t(m[0][1], m[1][0], m[2][2])
}

/// Invertible linear map plus random terms of degree 2 and 3, times a random
/// unit, truncated at degree `n`.
pub fn perturb(f: &Polynomial, rng: &mut ChaCha8Rng, n: i64) -> Polynomial {
    let ring = f.ring().clone();
    let field = ring.field().clone();
    let q = field.size() as u64;
    let m = loop {
        let mut m = [[0u64; 3]; 3];
        for row in &mut m {
            for v in row.iter_mut() {
                *v = rng.gen_range(0..q);
            }
        }
        if det3(&field, &m) != 0 {
            break m;
        }
    };
    let images: Vec<Polynomial> = (0..3)
        .map(|i| {
            let lin = Polynomial::from_terms(
                &ring,
                (0..3).filter(|&j| m[i][j] != 0).map(|j| {
                    let mut e = [0; 3];
                    e[j] = 1;
                    (Monomial::from_exps(&e), m[i][j])
                }),
            );
            lin.add(&random_poly(&ring, rng, 2, 3, 0.3))
        })
        .collect();
    let unit = ring.one().add(&random_poly(&ring, rng, 1, 2, 0.4));
    mul_trunc(&substitute_trunc(f, &ring, &images, n), &unit, n)
}

/// Classify a jet exact through `ORDER`, starting at half that order.
pub fn classify(f: &Polynomial) -> SingClass {
    for n in [ORDER / 2, ORDER] {
        if let Ok(c) = classify_jet(&f.jet_truncate(None, n), n) {
            return c;
        }
    }
    SingClass::Unclassified("precision".into())
}

/// Every shipped normal form, the `A_k` forms up to `A12`, and `E12`.
pub fn corpus() -> Vec<(SingClass, Polynomial)> {
    let r2 = std_ring(&Field::gf2());
    let mut out: Vec<(SingClass, Polynomial)> = normal_form_table()
        .forms()
        .iter()
        .map(|f| (f.class.clone(), f.equation.clone()))
        .collect();
    for k in 1..=12 {
        out.push((SingClass::A(k), r2.parse(&format!("x*y+z^{}", k + 1)).unwrap()));
    }
    out.push((SingClass::E12, r2.parse("z^2+x^3+y^7").unwrap()));
    out
}

/// Failures over `TRIALS` perturbations of each corpus entry, and the number
/// of jets classified.
pub fn run_corpus(seed: u64) -> (Vec<String>, usize) {
    let f4 = Field::canonical(2);
    let emb = Field::gf2().embedding_into(&f4).unwrap();
    let r4 = std_ring(&f4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut count = 0;
    for (class, eq) in corpus() {
        let got = classify(&eq);
        if got != class {
            failures.push(format!("{class} unperturbed: got {got}"));
        }
        let eq4 = eq.map_field(&emb, &r4);
        for trial in 0..TRIALS {
            let got = classify(&perturb(&eq4, &mut rng, ORDER));
            count += 1;
            if got != class {
                failures.push(format!("{class} trial {trial}: got {got}"));
            }
        }
    }
    (failures, count)
}
