mod common;

use algebra::Field;
use covercheck::singclass::{normal_form_table, std_ring, tjurina, SingClass};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn tjurina_number_is_a_coordinate_invariant() {
    let f4 = Field::canonical(2);
    let emb = Field::gf2().embedding_into(&f4).unwrap();
    let r4 = std_ring(&f4);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let picks = [SingClass::D(4, 0), SingClass::D(6, 1), SingClass::E(6, 0), SingClass::E(7, 2), SingClass::E(8, 0)];
    for class in picks {
        let form = normal_form_table().get(&class).unwrap();
        let eq = form.equation.map_field(&emb, &r4);
        for _ in 0..5 {
            let g = common::perturb(&eq, &mut rng, common::ORDER);
            assert_eq!(tjurina(&g, common::ORDER), Some(form.tau), "{class}");
        }
    }
}

#[test]
fn perturbed_low_index_forms_are_recovered() {
    let f4 = Field::canonical(2);
    let emb = Field::gf2().embedding_into(&f4).unwrap();
    let r4 = std_ring(&f4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (class, eq) in common::corpus().into_iter().filter(|(c, _)| c.index() <= 7) {
        let eq4 = eq.map_field(&emb, &r4);
        for _ in 0..3 {
            assert_eq!(common::classify(&common::perturb(&eq4, &mut rng, common::ORDER)), class);
        }
    }
}
