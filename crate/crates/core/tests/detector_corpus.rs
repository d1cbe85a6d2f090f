mod common;

use std::time::{Duration, Instant};

use common::{load_corpus, Role};
use tsadopt::{detect_features, FeatureId};

#[test]
fn corpus_has_enough_snippets_per_feature() {
    let corpus = load_corpus();
    assert_eq!(corpus.labeler, "typescript@4.9.5");
    for f in FeatureId::ALL {
        let count = |role| corpus.snippets.iter().filter(|s| s.feature == f && s.role == role).count();
        assert!(count(Role::Positive) >= 5, "{f}: {} positives", count(Role::Positive));
        assert!(count(Role::Negative) >= 5, "{f}: {} negatives", count(Role::Negative));
    }
}

#[test]
fn labels_agree_with_file_roles() {
    for s in load_corpus().snippets {
        let labeled = s.expected.contains(s.feature);
        assert_eq!(labeled, s.role == Role::Positive, "{} is labeled {}", s.file, s.expected);
    }
}

#[test]
fn detector_matches_reference_labels() {
    let started = Instant::now();
    let corpus = load_corpus();
    let mismatches: Vec<String> = corpus
        .snippets
        .iter()
        .filter_map(|s| {
            let got = detect_features(&s.source);
            (got != s.expected).then(|| format!("{}: expected {}, detected {}", s.file, s.expected, got))
        })
        .collect();
    assert!(mismatches.is_empty(), "{} mismatches:\n{}", mismatches.len(), mismatches.join("\n"));
    assert!(started.elapsed() < Duration::from_secs(10));
}

#[test]
fn adversarial_negatives_are_present() {
    let corpus = load_corpus();
    let negatives = |f: FeatureId, needle: &str| {
        corpus.snippets.iter().any(|s| s.feature == f && s.role == Role::Negative && s.source.contains(needle))
    };
    assert!(negatives(FeatureId::F0, "let satisfies"), "satisfies as an identifier");
    assert!(negatives(FeatureId::F0, "// a satisfies"), "trigger text in a comment");
    assert!(negatives(FeatureId::F3, "for (const k in"), "`in` in a for loop");
    assert!(negatives(FeatureId::F10, "[K in keyof T]"), "mapped type without `as`");
    assert!(negatives(FeatureId::F9, "const s = `"), "template literal in expression position");
    assert!(negatives(FeatureId::F4, "import type {"), "whole-clause type import");
}
