//! Replays the fuzz corpus and a few hostile inputs through every parser.

use std::path::Path;

use resham::polyfield::{parse_binding, parse_decimal, parse_numeric_binding, parse_point, parse_poly, Poly};

fn seeds(target: &str) -> Vec<String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<String> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| std::fs::read_to_string(entry.unwrap().path()).unwrap())
        .collect();
    assert!(!out.is_empty(), "no seeds for {target}");
    out.sort();
    out
}

#[test]
fn poly_seeds_round_trip() {
    let mut parsed = 0;
    for src in seeds("parse_poly") {
        if let Ok(p) = parse_poly(&src) {
            let again: Poly = p.to_string().parse().unwrap();
            assert_eq!(again, p, "{src:?}");
            parsed += 1;
        }
    }
    assert!(parsed >= 8);
}

#[test]
fn binding_seeds() {
    let ok = seeds("parse_binding").iter().filter(|s| parse_binding(s).is_ok()).count();
    assert!(ok >= 6);
    for src in seeds("parse_numeric_binding") {
        if let Ok((_, v)) = parse_numeric_binding(&src) {
            assert!(v.is_finite(), "{src:?}");
        }
    }
}

#[test]
fn point_and_decimal_seeds() {
    for src in seeds("parse_point") {
        if let Ok(p) = parse_point(&src) {
            assert!(p.iter().all(|c| c.is_finite()));
        }
    }
    for src in seeds("parse_decimal") {
        let _ = parse_decimal(&src);
    }
}

#[test]
fn hostile_inputs_fail_cleanly() {
    let nested = "x*".repeat(5000) + "x";
    for src in ["x^99999999999999999999", "x^-", "((x))", "1/0", "1/0*x", "x^4294967296", "*", "+", "--x", "x y", nested.as_str()] {
        let _ = parse_poly(src);
    }
    assert!(parse_poly("1/0").is_err());
}

proptest::proptest! {
    #[test]
    fn random_text_never_panics(src in "[xyzabgkI123^*/+. =,-]{0,40}") {
        if let Ok(p) = parse_poly(&src) {
            let again: Poly = p.to_string().parse().unwrap();
            proptest::prop_assert_eq!(again, p);
        }
        let _ = parse_binding(&src);
        let _ = parse_numeric_binding(&src);
        let _ = parse_point(&src);
        let _ = parse_decimal(&src);
    }
}
