//! The shipped examples.

use crate::input::{parse_structure, ExampleSpec, InputError};

/// Registry name and source text, in report order.
pub const BUILTINS: [(&str, &str); 10] = [
    ("12A1", include_str!("../assets/examples/12a1.txt")),
    ("8A1+D4", include_str!("../assets/examples/8a1_d4.txt")),
    ("6A1+D6", include_str!("../assets/examples/6a1_d6.txt")),
    ("5A1+E7", include_str!("../assets/examples/5a1_e7.txt")),
    ("3D4", include_str!("../assets/examples/3d4.txt")),
    ("D4+D8", include_str!("../assets/examples/d4_d8.txt")),
    ("D4+E8", include_str!("../assets/examples/d4_e8.txt")),
    ("D12", include_str!("../assets/examples/d12.txt")),
    ("D4D8-same-fiber", include_str!("../assets/examples/d4d8_same_fiber.txt")),
    ("E12", include_str!("../assets/examples/e12.txt")),
];

pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, s)| *s)
}

/// One builtin, parsed but not yet validated (the pipeline validates).
pub fn builtin(name: &str) -> Option<Result<ExampleSpec, InputError>> {
    BUILTINS
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(n, s)| parse_structure(n, s))
}

pub fn builtin_registry() -> Vec<ExampleSpec> {
    BUILTINS
        .iter()
        .map(|(n, s)| parse_structure(n, s).unwrap_or_else(|e| panic!("builtin {n}: {e}")))
        .collect()
}
