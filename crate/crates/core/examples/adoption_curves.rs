//! Build adoption curves and the popularity groups from hand-written
//! first-use dates, without touching git.

use chrono::{TimeZone, Utc};
use tsadopt::analytics::{analyze, RepoObservations, DEFAULT_HORIZON_DAYS};
use tsadopt::miner::Window;
use tsadopt::version::{ResolvedVersion, VersionObservation};
use tsadopt::{FeatureId, FeatureSet, ReleaseTable};

fn repo(name: &str, uses: &[(i32, u32, u32, &[FeatureId])], version: Option<(u64, u64, i32, u32)>) -> RepoObservations {
    RepoObservations {
        repo: name.into(),
        blobs: uses
            .iter()
            .map(|&(y, m, d, fs)| (Utc.with_ymd_and_hms(y, m, d, 12, 0, 0).unwrap(), FeatureSet::from_features(fs.iter().copied())))
            .collect(),
        versions: version
            .map(|(major, minor, y, m)| VersionObservation {
                repo: name.into(),
                version: ResolvedVersion::new(major, minor),
                earliest_timestamp: Utc.with_ymd_and_hms(y, m, 1, 0, 0, 0).unwrap(),
            })
            .into_iter()
            .collect(),
    }
}

fn main() {
    use FeatureId::*;
    let repos = vec![
        repo("a/one", &[(2020, 12, 1, &[F11]), (2021, 3, 1, &[F10, F11])], Some((4, 1, 2020, 12))),
        repo("b/two", &[(2020, 11, 1, &[F11])], Some((4, 1, 2020, 10))),
        repo("c/three", &[(2021, 9, 10, &[F4, F2])], Some((4, 4, 2021, 9))),
        repo("d/four", &[], None),
    ];
    let a = analyze(&repos, &ReleaseTable::standard(), Window::study().end, DEFAULT_HORIZON_DAYS);

    for e in &a.events {
        println!("{:<8} {:<5} first use {}  day {:+}", e.repo, e.subject.to_string(), e.first_use.format("%Y-%m-%d"), e.offset_days);
    }
    println!();
    for c in a.feature_curves.iter().chain(&a.version_curves).filter(|c| !c.points.is_empty()) {
        let pts: Vec<String> = c.points.iter().map(|p| format!("{}:{}", p.offset_day, p.cumulative_repos)).collect();
        println!("{:<5} last day {:>3}  {}", c.subject.to_string(), c.last_day, pts.join(" "));
    }
    println!("\nmore than {} adopters at day {}:", a.groups.threshold, a.groups.day);
    println!("  group1 {:?}", a.groups.group1.iter().map(|m| m.feature.code()).collect::<Vec<_>>());
    println!("  group2 {:?}", a.groups.group2.iter().map(|m| m.feature.code()).collect::<Vec<_>>());
    println!("repositories without a version: {}", a.repos_without_versions);
}
