use std::time::Instant;

use covercheck::derivation::check_global;
use covercheck::registry::{builtin_registry, BUILTINS};

#[test]
fn builtin_atlases_validate_and_derivations_are_global() {
    for spec in builtin_registry() {
        let start = Instant::now();
        let rep = spec.atlas.validate();
        assert!(rep.ok(), "{}: {:?}", spec.name, rep.problems());
        for d in &spec.derivations {
            if let Err(w) = check_global(&spec.atlas, d) {
                panic!("{}: {} fails on chart {}: {}", spec.name, d.name, w.chart, w.detail);
            }
        }
        eprintln!("{}: {:?}", spec.name, start.elapsed());
    }
    assert_eq!(BUILTINS.len(), 10);
}

#[test]
fn lie_types_match_expectations() {
    use covercheck::liealg::{build_structure, classify_type, p_closed_lines};
    for spec in builtin_registry() {
        let (d1, d2) = (&spec.derivations[spec.basis.0], &spec.derivations[spec.basis.1]);
        let s = build_structure(&spec.atlas, d1, d2, 7).unwrap_or_else(|e| panic!("{}: {e}", spec.name));
        let ty = classify_type(&s).unwrap_or_else(|e| panic!("{}: {e}", spec.name));
        eprintln!("{}: {:?} type {ty} lines {:?}", spec.name, s, p_closed_lines(&s));
        assert_eq!(Some(ty), spec.expect.lie_type, "{}", spec.name);
    }
}

#[test]
fn builtin_singular_points_classify_as_frozen() {
    use covercheck::geometry::singular_points;
    use covercheck::singclass::{classify_point, format_multiset};
    let want = [
        ("12A1", "2*A7 + 4*A1"),
        ("8A1+D4", "2*A5 + 2*A1 + D5^0"),
        ("6A1+D6", "A5 + 3*A1 + D7^0"),
        ("5A1+E7", "A5 + 2*A1 + E7^0"),
        ("3D4", "2*D5^0 + D4^0"),
        ("D4+D8", "D9^0 + D4^0"),
        ("D4+E8", "D4^0 + E8^0"),
        ("D12", "D12^0"),
        ("D4D8-same-fiber", "D9^0 + D4^0"),
        ("E12", "E12"),
    ];
    for spec in builtin_registry() {
        let ps = singular_points(&spec.atlas, 4).unwrap();
        let classes: Vec<_> = ps.points.iter().map(|p| classify_point(&ps.atlas, p).unwrap().class).collect();
        let expected = want.iter().find(|w| w.0 == spec.name).unwrap().1;
        assert_eq!(format_multiset(&classes), expected, "{}", spec.name);
    }
}

fn report_json(spec: &covercheck::input::ExampleSpec, seed: u64) -> String {
    use covercheck::pipeline::{run_example, Options};
    serde_json::to_string(&run_example(spec, &Options { seed, max_ext_degree: 4 })).unwrap()
}

#[test]
fn shipped_files_match_builtins_and_reports_are_deterministic() {
    use covercheck::input::parse_input;
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("assets/examples");
    let mut files = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let (name, _) = BUILTINS.iter().find(|(_, src)| *src == text).expect("file is a builtin");
        let spec = parse_input(name, &text).unwrap();
        let builtin = covercheck::registry::builtin(name).unwrap().unwrap();
        let a = report_json(&spec, 0);
        assert_eq!(a, report_json(&builtin, 0), "{name}");
        assert_eq!(a, report_json(&builtin, 0xdead_beef), "{name}: seed changes the report");
        files += 1;
    }
    assert_eq!(files, BUILTINS.len());
}

#[test]
fn corrupted_derivation_fails_the_global_check() {
    use covercheck::pipeline::{run_example, Options, Status};
    let mut spec = covercheck::registry::builtin("D12").unwrap().unwrap();
    let ring = spec.atlas.charts[0].ring.clone();
    let d = &mut spec.derivations[spec.basis.0];
    d.images[0][0] = d.images[0][0].add(&ring.var_at(ring.nvars() - 1));
    let rep = run_example(&spec, &Options::default());
    assert!(!rep.passed);
    let c2 = rep.check("C2").unwrap();
    assert_eq!(c2.status, Status::Fail, "{}", c2.detail);
    assert!(!c2.witnesses.is_empty());
}
