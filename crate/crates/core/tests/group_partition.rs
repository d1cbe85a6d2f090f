mod common;

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::Deserialize;
use tsadopt::analytics::{analyze, RepoObservations, Subject};
use tsadopt::miner::Window;
use tsadopt::{FeatureId, FeatureSet, ReleaseTable};

#[derive(Deserialize)]
struct Fixture {
    adopters_at_365: BTreeMap<FeatureId, u64>,
    events: Vec<Event>,
}

#[derive(Deserialize)]
struct Event {
    repo: String,
    feature: FeatureId,
    first_use: DateTime<Utc>,
    offset_days: i64,
}

fn load() -> (Fixture, Vec<RepoObservations>) {
    let path = common::crate_dir().join("tests/fixtures/group_partition.json");
    let fixture: Fixture = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let mut repos: BTreeMap<&str, RepoObservations> = BTreeMap::new();
    for e in &fixture.events {
        let r = repos.entry(&e.repo).or_insert_with(|| RepoObservations { repo: e.repo.clone(), ..Default::default() });
        r.blobs.push((e.first_use, FeatureSet::from_features([e.feature])));
    }
    let repos = repos.into_values().collect();
    (fixture, repos)
}

fn codes(members: &[tsadopt::analytics::GroupMember]) -> Vec<&'static str> {
    members.iter().map(|m| m.feature.code()).collect()
}

#[test]
fn partition_matches_published_grouping() {
    let (fixture, repos) = load();
    let a = analyze(&repos, &ReleaseTable::standard(), Window::study().end, 800);

    assert_eq!(codes(&a.groups.group1), ["f4", "f9", "f11", "f7", "f12", "f10"]);
    assert_eq!(codes(&a.groups.group2), ["f2", "f1", "f8", "f3", "f0", "f5", "f6"]);

    for m in a.groups.group1.iter().chain(&a.groups.group2) {
        assert_eq!(m.adopters_at_365, fixture.adopters_at_365[&m.feature], "{}", m.feature);
    }
    let f6 = a.groups.group2.iter().find(|m| m.feature == FeatureId::F6).unwrap();
    assert_eq!(f6.adopters_at_365, 4);
    // Exactly twenty is not "more than twenty".
    let f2 = a.groups.group2.iter().find(|m| m.feature == FeatureId::F2).unwrap();
    assert_eq!((f2.adopters_at_365, f2.censored), (20, true));
}

#[test]
fn offsets_agree_with_fixture_generator() {
    let (fixture, repos) = load();
    let a = analyze(&repos, &ReleaseTable::standard(), Window::study().end, 800);
    let got: BTreeMap<(String, FeatureId), i64> = a
        .events
        .iter()
        .filter_map(|e| match e.subject {
            Subject::Feature(f) => Some(((e.repo.clone(), f), e.offset_days)),
            Subject::Version(_) => None,
        })
        .collect();
    let want: BTreeMap<(String, FeatureId), i64> =
        fixture.events.iter().map(|e| ((e.repo.clone(), e.feature), e.offset_days)).collect();
    assert_eq!(got, want);
}
