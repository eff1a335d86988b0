use cremona_contact::catalog::{parse_catalog, registry, serialize_catalog, validate, Field};

const GOLDEN: &str = include_str!("../data/registry.catalog");
const HEADER: &str = "# Built-in example corpus. Regenerate with `cargo test --test catalog_golden -- --ignored`.\n\n";

#[test]
fn golden_file_matches_registry() {
    assert_eq!(parse_catalog(GOLDEN).unwrap(), registry());
    assert_eq!(GOLDEN, format!("{HEADER}{}", serialize_catalog(&registry())));
}

#[test]
fn golden_file_round_trips() {
    let parsed = parse_catalog(GOLDEN).unwrap();
    assert_eq!(parse_catalog(&serialize_catalog(&parsed)).unwrap(), parsed);
}

#[test]
fn every_expected_value_recomputes() {
    for e in registry() {
        for c in validate(&e, 0) {
            assert!(c.ok, "{} {}: expected {} got {}", e.name, c.field, c.expected, c.actual);
        }
    }
}

#[test]
fn validation_is_seed_independent() {
    for e in registry().iter().filter(|e| e.expected(Field::Regular).is_some()) {
        for seed in [1, 2, 99] {
            assert!(validate(e, seed).iter().all(|c| c.ok), "{} seed {seed}", e.name);
        }
    }
}

#[test]
fn required_entries_exist() {
    let names: Vec<String> = registry().into_iter().map(|e| e.name).collect();
    for n in [
        "legendre", "klein:cremona", "lyness5", "sansfib", "nfamily:0", "nfamily:1", "nfamily:2", "nfamily:3",
        "vexample:square", "alpha:linear", "alpha:quadratic", "alpha:cubic", "eclate", "kernel:1/z1",
        "kernel:z1/(z1^2 + 1)", "theta-conjugation",
    ] {
        assert!(names.iter().any(|x| x == n), "{n}");
    }
    assert!(names.iter().filter(|n| n.starts_with("pgl2:")).count() >= 3);
}

#[test]
fn user_catalog_with_loose_spelling_validates() {
    let text = "# hand written\nNAME: mine\nMAP: (z1, z0, -z2 - z0*z1)\nEXPECTED.V: -1\nEXPECTED.DEGREES: 2, 1, 2, 1\n\nNAME: w\nMAP: (-z0 + 1/(z1^2-1), -z1)\nEXPECTED.WITNESS: z1: 1/(z1^2-1)\n";
    for e in parse_catalog(text).unwrap() {
        assert!(validate(&e, 0).iter().all(|c| c.ok), "{}", e.name);
    }
}

#[test]
#[ignore]
fn regenerate_golden() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/registry.catalog");
    std::fs::write(path, format!("{HEADER}{}", serialize_catalog(&registry()))).unwrap();
}
