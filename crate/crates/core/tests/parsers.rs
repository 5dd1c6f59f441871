//! The fuzz properties, run over the checked-in corpus and random mutations
//! of it.

use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;
use tandeg::report::{parse_coeff_list, parse_curve, parse_report, write_curve};

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files.into_iter().map(|p| fs::read(p).unwrap()).collect()
}

fn curve_property(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(curve) = parse_curve(text) {
        let again = write_curve(&curve);
        let back = parse_curve(&again).expect("written curve parses");
        assert_eq!(back, curve);
        assert_eq!(write_curve(&back), again);
    }
}

fn report_property(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = parse_report(text) {
        let back = parse_report(&report.to_json()).expect("written report parses");
        assert_eq!(back, report);
    }
}

fn coeff_property(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_coeff_list(text) {
        assert!(!v.is_empty());
        let joined: Vec<String> = v.iter().map(i64::to_string).collect();
        assert_eq!(parse_coeff_list(&joined.join(",")).unwrap(), v);
        assert_eq!(parse_coeff_list(&format!("[{}]", joined.join(", "))).unwrap(), v);
    }
}

#[test]
fn corpus_seeds_round_trip() {
    let curves = corpus("curve_json");
    let parsed = curves.iter().filter(|d| parse_curve(std::str::from_utf8(d).unwrap()).is_ok()).count();
    assert!(parsed >= 5, "only {parsed} curve seeds parse");
    curves.iter().for_each(|d| curve_property(d));

    let reports = corpus("report_json");
    for d in &reports {
        parse_report(std::str::from_utf8(d).unwrap()).expect("report seed parses");
        report_property(d);
    }
    corpus("coeff_list").iter().for_each(|d| coeff_property(d));
}

fn mutate(seed: &[u8], edits: &[(usize, u8, u8)]) -> Vec<u8> {
    let mut out = seed.to_vec();
    for &(pos, byte, op) in edits {
        if out.is_empty() {
            out.push(byte);
            continue;
        }
        let i = pos % out.len();
        match op % 3 {
            0 => out[i] = byte,
            1 => {
                out.remove(i);
            }
            _ => out.insert(i, byte),
        }
    }
    out
}

fn edits() -> impl Strategy<Value = Vec<(usize, u8, u8)>> {
    prop::collection::vec((any::<usize>(), prop::sample::select(b"0123456789-,[]{}\":. anpqx".to_vec()), any::<u8>()), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn mutated_curves(which in any::<prop::sample::Index>(), e in edits()) {
        let seeds = corpus("curve_json");
        curve_property(&mutate(which.get(&seeds), &e));
    }

    #[test]
    fn mutated_reports(which in any::<prop::sample::Index>(), e in edits()) {
        let seeds = corpus("report_json");
        report_property(&mutate(which.get(&seeds), &e));
    }

    #[test]
    fn mutated_coeff_lists(which in any::<prop::sample::Index>(), e in edits()) {
        let seeds = corpus("coeff_list");
        coeff_property(&mutate(which.get(&seeds), &e));
    }

    #[test]
    fn arbitrary_coeff_text(s in ".{0,40}") {
        coeff_property(s.as_bytes());
    }
}
