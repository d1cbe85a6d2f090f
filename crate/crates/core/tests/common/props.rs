//! Generators and property bodies for the analytics invariants.

use chrono::{DateTime, TimeZone, Utc};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use tsadopt::analytics::{analyze, offset_days, RepoObservations, Subject, GROUP_DAY, GROUP_THRESHOLD};
use tsadopt::miner::Window;
use tsadopt::version::{ResolvedVersion, VersionObservation};
use tsadopt::{FeatureId, FeatureSet, ReleaseTable};

pub const HORIZON: i64 = 800;
pub const CASES: u32 = 1000;

fn timestamp() -> impl Strategy<Value = DateTime<Utc>> {
    // 2019-06-01 .. 2023-06-01, wider than the window on both sides.
    (1_559_347_200i64..1_685_577_600).prop_map(|s| Utc.timestamp_opt(s, 0).unwrap())
}

fn version() -> impl Strategy<Value = ResolvedVersion> {
    prop_oneof![
        (0usize..8).prop_map(|i| ["4.0", "4.1", "4.2", "4.3", "4.4", "4.5", "4.7", "4.9"][i].parse().unwrap()),
        Just(ResolvedVersion::new(4, 8)),
        Just(ResolvedVersion::new(3, 9)),
        Just(ResolvedVersion::Unknown),
    ]
}

fn repo(name: String, max_blobs: usize) -> impl Strategy<Value = RepoObservations> {
    let blobs = prop::collection::vec(
        (timestamp(), 0u16..(1 << 13), prop::bool::weighted(0.9))
            .prop_map(|(t, bits, ok)| (t, FeatureSet::from_bits(if ok { bits } else { 0 }, ok).unwrap())),
        0..max_blobs,
    );
    let versions = prop::collection::btree_map(version(), timestamp(), 0..4);
    (blobs, versions).prop_map(move |(blobs, versions)| RepoObservations {
        repo: name.clone(),
        blobs,
        versions: versions
            .into_iter()
            .map(|(version, earliest_timestamp)| VersionObservation { repo: name.clone(), version, earliest_timestamp })
            .collect(),
    })
}

/// Up to `max_repos` repositories with up to `max_blobs` blobs each.
pub fn repos(max_repos: usize, max_blobs: usize) -> impl Strategy<Value = Vec<RepoObservations>> {
    (0..=max_repos).prop_flat_map(move |n| (0..n).map(|i| repo(format!("org/r{i:02}"), max_blobs)).collect::<Vec<_>>())
}

/// Repositories plus a permutation of their indices.
pub fn repos_and_order(max_repos: usize, max_blobs: usize) -> impl Strategy<Value = (Vec<RepoObservations>, Vec<usize>)> {
    repos(max_repos, max_blobs).prop_flat_map(|r| {
        let n = r.len();
        (Just(r), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

/// Day offsets at which `repo` used `subject`, straight from the raw
/// observations.
fn raw_offsets(repo: &RepoObservations, subject: Subject, table: &ReleaseTable) -> Vec<i64> {
    let Some(release) = subject.release_date(table) else { return vec![] };
    match subject {
        Subject::Feature(f) => repo.blobs.iter().filter(|(_, s)| s.contains(f)).map(|(t, _)| offset_days(*t, release)).collect(),
        Subject::Version(v) => repo.versions.iter().filter(|o| o.version == v).map(|o| offset_days(o.earliest_timestamp, release)).collect(),
    }
}

/// Repositories with some use of `subject` on or before `day`.
fn recount(repos: &[RepoObservations], subject: Subject, table: &ReleaseTable, day: i64) -> u64 {
    repos.iter().filter(|r| raw_offsets(r, subject, table).iter().any(|d| *d <= day)).count() as u64
}

fn subjects(table: &ReleaseTable) -> Vec<Subject> {
    let mut all: Vec<Subject> = FeatureId::ALL.into_iter().map(Subject::Feature).collect();
    all.extend(table.versions().map(|v| Subject::Version(v.parse().unwrap())));
    all
}

pub fn curves_are_monotone_and_capped(repos: &[RepoObservations]) -> Result<(), TestCaseError> {
    let table = ReleaseTable::standard();
    let a = analyze(repos, &table, Window::study().end, HORIZON);
    let with_any = repos.iter().filter(|r| !r.blobs.is_empty() || !r.versions.is_empty()).count() as u64;
    for c in a.feature_curves.iter().chain(&a.version_curves) {
        for w in c.points.windows(2) {
            prop_assert!(w[0].offset_day < w[1].offset_day);
            prop_assert!(w[0].cumulative_repos < w[1].cumulative_repos);
        }
        prop_assert!(c.max_cumulative() <= with_any);
        prop_assert!(c.points.iter().all(|p| p.cumulative_repos >= 1 && p.offset_day <= c.last_day));
    }
    for s in &a.version_summary {
        prop_assert!(s.max_cumulative <= repos.len() as u64);
        prop_assert!(s.adopters_at_90 <= s.max_cumulative);
        prop_assert!((0.0..=1.0).contains(&s.fraction_at_90));
    }
    Ok(())
}

pub fn offset_sign_follows_release_date(repos: &[RepoObservations]) -> Result<(), TestCaseError> {
    let table = ReleaseTable::standard();
    let a = analyze(repos, &table, Window::study().end, HORIZON);
    for e in &a.events {
        let release = e.subject.release_date(&table).unwrap();
        let day_zero = release.and_hms_opt(0, 0, 0).unwrap().and_utc();
        prop_assert_eq!(e.first_use < day_zero, e.offset_days < 0, "{:?}", e);
    }
    // One event per (repo, subject).
    let mut keys: Vec<_> = a.events.iter().map(|e| (e.repo.clone(), e.subject)).collect();
    let n = keys.len();
    keys.dedup();
    prop_assert_eq!(keys.len(), n);
    Ok(())
}

pub fn curves_equal_brute_force_recount(repos: &[RepoObservations]) -> Result<(), TestCaseError> {
    let table = ReleaseTable::standard();
    let end = Window::study().end;
    let a = analyze(repos, &table, end, HORIZON);
    for subject in subjects(&table) {
        let curve = a.feature_curves.iter().chain(&a.version_curves).find(|c| c.subject == subject).unwrap();
        let release = subject.release_date(&table).unwrap();
        prop_assert_eq!(curve.last_day, HORIZON.min(offset_days(end, release)));
        // The count only changes at raw offsets, so checking each of them
        // and the day before covers every day.
        let mut days: Vec<i64> = repos.iter().flat_map(|r| raw_offsets(r, subject, &table)).flat_map(|d| [d - 1, d]).collect();
        days.extend([GROUP_DAY, curve.last_day]);
        days.retain(|d| *d <= curve.last_day);
        days.sort_unstable();
        days.dedup();
        let mut expected = Vec::new();
        for day in days {
            let here = recount(repos, subject, &table, day);
            prop_assert_eq!(curve.count_at(day), here, "{} at {}", subject, day);
            if here > recount(repos, subject, &table, day - 1) {
                expected.push((day, here));
            }
        }
        let got: Vec<_> = curve.points.iter().map(|p| (p.offset_day, p.cumulative_repos)).collect();
        prop_assert_eq!(got, expected);
    }
    Ok(())
}

pub fn groups_ignore_repository_order(repos: &[RepoObservations], order: &[usize]) -> Result<(), TestCaseError> {
    let table = ReleaseTable::standard();
    let end = Window::study().end;
    let a = analyze(repos, &table, end, HORIZON);
    let shuffled: Vec<_> = order.iter().map(|&i| repos[i].clone()).collect();
    let b = analyze(&shuffled, &table, end, HORIZON);
    prop_assert_eq!(&a.groups, &b.groups);
    prop_assert_eq!(&a, &b);
    // Censored features are judged on what the window holds.
    let at_365 = |f: FeatureId| {
        let last = HORIZON.min(offset_days(end, f.release_date()));
        recount(repos, Subject::Feature(f), &table, GROUP_DAY.min(last))
    };
    for m in &a.groups.group1 {
        prop_assert!(at_365(m.feature) > GROUP_THRESHOLD);
        prop_assert_eq!(m.adopters_at_365, at_365(m.feature));
    }
    for m in &a.groups.group2 {
        prop_assert!(at_365(m.feature) <= GROUP_THRESHOLD);
        prop_assert_eq!(m.adopters_at_365, at_365(m.feature));
    }
    prop_assert_eq!(a.groups.group1.len() + a.groups.group2.len(), FeatureId::COUNT);
    Ok(())
}
