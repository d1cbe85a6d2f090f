//! First-use events, release-relative offsets, cumulative adoption curves
//! and feature popularity groups.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::detect::FeatureSet;
use crate::features::{FeatureId, ReleaseTable};
use crate::version::{ResolvedVersion, VersionObservation};

/// Curves stop this many days after release.
pub const DEFAULT_HORIZON_DAYS: i64 = 800;

/// Day at which groups are decided.
pub const GROUP_DAY: i64 = 365;

/// Group one needs strictly more adopters than this at [`GROUP_DAY`].
pub const GROUP_THRESHOLD: u64 = 20;

/// Window used for the version summary's early adoption count.
pub const EARLY_ADOPTION_DAYS: i64 = 90;

/// What is being adopted: a syntax feature or a compiler version.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Feature(FeatureId),
    Version(ResolvedVersion),
}

impl Subject {
    /// Day Zero, if the subject has one in `table`.
    pub fn release_date(&self, table: &ReleaseTable) -> Option<NaiveDate> {
        match self {
            Subject::Feature(f) => table.release_date(f.introducing_version()),
            Subject::Version(v @ ResolvedVersion::Known { .. }) => table.release_date(&v.to_string()),
            Subject::Version(ResolvedVersion::Unknown) => None,
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Feature(id) => id.fmt(f),
            Subject::Version(v) => v.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is neither a feature id nor a version")]
pub struct BadSubject(String);

impl FromStr for Subject {
    type Err = BadSubject;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(f) = s.parse() {
            return Ok(Subject::Feature(f));
        }
        s.parse().map(Subject::Version).map_err(|_| BadSubject(s.to_string()))
    }
}

impl Serialize for Subject {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Subject {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Everything mined from one repository.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepoObservations {
    pub repo: String,
    /// Earliest timestamp of each distinct blob with its detected features.
    pub blobs: Vec<(DateTime<Utc>, FeatureSet)>,
    pub versions: Vec<VersionObservation>,
}

/// A repository's first use of a subject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdoptionEvent {
    pub repo: String,
    pub subject: Subject,
    pub first_use: DateTime<Utc>,
    pub offset_days: i64,
}

/// Whole UTC days from Day Zero, rounded down.
///
/// ```
/// # use chrono::{NaiveDate, TimeZone, Utc};
/// use tsadopt::analytics::offset_days;
/// let release = NaiveDate::from_ymd_opt(2022, 11, 15).unwrap();
/// assert_eq!(offset_days(Utc.with_ymd_and_hms(2022, 11, 20, 9, 0, 0).unwrap(), release), 5);
/// assert_eq!(offset_days(Utc.with_ymd_and_hms(2022, 11, 14, 23, 59, 59).unwrap(), release), -1);
/// ```
pub fn offset_days(first_use: DateTime<Utc>, release: NaiveDate) -> i64 {
    (first_use.date_naive() - release).num_days()
}

/// The repository's earliest use of `subject`, or `None` if it never
/// appears or has no release date.
pub fn first_use(obs: &RepoObservations, subject: Subject, table: &ReleaseTable) -> Option<AdoptionEvent> {
    let release = subject.release_date(table)?;
    let first = match subject {
        Subject::Feature(f) => obs.blobs.iter().filter(|(_, set)| set.contains(f)).map(|(ts, _)| *ts).min(),
        Subject::Version(v) => obs.versions.iter().filter(|o| o.version == v).map(|o| o.earliest_timestamp).min(),
    }?;
    Some(AdoptionEvent {
        repo: obs.repo.clone(),
        subject,
        first_use: first,
        offset_days: offset_days(first, release),
    })
}

/// First-use events for every feature and every tabled version, in one
/// pass over the blobs.
pub fn repo_events(obs: &RepoObservations, table: &ReleaseTable) -> Vec<AdoptionEvent> {
    let mut earliest: [Option<DateTime<Utc>>; FeatureId::COUNT] = [None; FeatureId::COUNT];
    for (ts, set) in &obs.blobs {
        for f in set.iter() {
            let slot = &mut earliest[f.index()];
            *slot = Some(slot.map_or(*ts, |t| t.min(*ts)));
        }
    }
    let mut events = Vec::new();
    for f in FeatureId::ALL {
        if let (Some(ts), Some(release)) = (earliest[f.index()], Subject::Feature(f).release_date(table)) {
            events.push(AdoptionEvent {
                repo: obs.repo.clone(),
                subject: Subject::Feature(f),
                first_use: ts,
                offset_days: offset_days(ts, release),
            });
        }
    }
    let versions: BTreeSet<ResolvedVersion> = obs.versions.iter().map(|o| o.version).collect();
    events.extend(versions.into_iter().filter_map(|v| first_use(obs, Subject::Version(v), table)));
    events
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub offset_day: i64,
    pub cumulative_repos: u64,
}

/// Cumulative adopters by day offset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdoptionCurve {
    pub subject: Subject,
    pub points: Vec<CurvePoint>,
    /// Last day the curve covers.
    pub last_day: i64,
}

impl AdoptionCurve {
    /// Adopters at or before `day`.
    pub fn count_at(&self, day: i64) -> u64 {
        let idx = self.points.partition_point(|p| p.offset_day <= day);
        if idx == 0 {
            0
        } else {
            self.points[idx - 1].cumulative_repos
        }
    }

    pub fn max_cumulative(&self) -> u64 {
        self.points.last().map_or(0, |p| p.cumulative_repos)
    }
}

/// Last day a curve can cover: the horizon, or the end of the collection
/// window if that comes first.
pub fn curve_last_day(release: NaiveDate, window_end: DateTime<Utc>, horizon_days: i64) -> i64 {
    horizon_days.min(offset_days(window_end, release))
}

/// Counts adopters at each distinct offset up to `last_day`.
///
/// ```
/// use tsadopt::analytics::{build_curve, Subject};
/// use tsadopt::FeatureId;
/// let c = build_curve(Subject::Feature(FeatureId::F0), [-5, 3, 3, 10], 800);
/// let pts: Vec<_> = c.points.iter().map(|p| (p.offset_day, p.cumulative_repos)).collect();
/// assert_eq!(pts, [(-5, 1), (3, 3), (10, 4)]);
/// ```
pub fn build_curve<I: IntoIterator<Item = i64>>(subject: Subject, offsets: I, last_day: i64) -> AdoptionCurve {
    let mut per_day: BTreeMap<i64, u64> = BTreeMap::new();
    for d in offsets.into_iter().filter(|d| *d <= last_day) {
        *per_day.entry(d).or_default() += 1;
    }
    let mut total = 0;
    let points = per_day
        .into_iter()
        .map(|(offset_day, n)| {
            total += n;
            CurvePoint { offset_day, cumulative_repos: total }
        })
        .collect();
    AdoptionCurve { subject, points, last_day }
}

/// [`build_curve`] over events, keeping one event per repository.
pub fn curve_from_events(
    subject: Subject,
    events: &[AdoptionEvent],
    table: &ReleaseTable,
    window_end: DateTime<Utc>,
    horizon_days: i64,
) -> Option<AdoptionCurve> {
    let release = subject.release_date(table)?;
    let mut per_repo: BTreeMap<&str, i64> = BTreeMap::new();
    for e in events.iter().filter(|e| e.subject == subject) {
        per_repo.entry(&e.repo).and_modify(|d| *d = (*d).min(e.offset_days)).or_insert(e.offset_days);
    }
    Some(build_curve(subject, per_repo.into_values(), curve_last_day(release, window_end, horizon_days)))
}

/// Position of a feature in the popularity partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMember {
    pub feature: FeatureId,
    pub adopters_at_365: u64,
    /// Released less than a year before the window closed; the count is
    /// whatever was observed.
    pub censored: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Groups {
    pub threshold: u64,
    pub day: i64,
    pub group1: Vec<GroupMember>,
    pub group2: Vec<GroupMember>,
}

/// Splits features on adoption a year after release. Each group is
/// ordered most adopted first; ties by feature id.
pub fn classify_groups(curves: &[AdoptionCurve], table: &ReleaseTable, window_end: DateTime<Utc>) -> Groups {
    let mut members: Vec<GroupMember> = FeatureId::ALL
        .into_iter()
        .map(|f| {
            let adopters = curves
                .iter()
                .find(|c| c.subject == Subject::Feature(f))
                .map_or(0, |c| c.count_at(GROUP_DAY));
            let release = table.release_date(f.introducing_version()).unwrap_or_else(|| f.release_date());
            GroupMember { feature: f, adopters_at_365: adopters, censored: offset_days(window_end, release) < GROUP_DAY }
        })
        .collect();
    members.sort_by(|a, b| b.adopters_at_365.cmp(&a.adopters_at_365).then(a.feature.cmp(&b.feature)));
    let (group1, group2) = members.into_iter().partition(|m| m.adopters_at_365 > GROUP_THRESHOLD);
    Groups { threshold: GROUP_THRESHOLD, day: GROUP_DAY, group1, group2 }
}

/// Early and peak adoption of one compiler version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VersionSummary {
    pub version: ResolvedVersion,
    pub adopters_at_90: u64,
    pub fraction_at_90: f64,
    pub max_cumulative: u64,
    /// Adopters whose first use precedes Day Zero.
    pub prerelease_adopters: u64,
    pub censored: bool,
}

/// Summarizes version curves against `repo_count` repositories.
pub fn version_adoption_summary(curves: &[AdoptionCurve], repo_count: u64) -> Vec<VersionSummary> {
    curves
        .iter()
        .filter_map(|c| match c.subject {
            Subject::Version(version) => Some(VersionSummary {
                version,
                adopters_at_90: c.count_at(EARLY_ADOPTION_DAYS),
                fraction_at_90: if repo_count == 0 { 0.0 } else { c.count_at(EARLY_ADOPTION_DAYS) as f64 / repo_count as f64 },
                max_cumulative: c.max_cumulative(),
                prerelease_adopters: c.count_at(-1),
                censored: c.last_day < EARLY_ADOPTION_DAYS,
            }),
            Subject::Feature(_) => None,
        })
        .collect()
}

/// All curves and groups for a set of repositories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub events: Vec<AdoptionEvent>,
    pub feature_curves: Vec<AdoptionCurve>,
    pub version_curves: Vec<AdoptionCurve>,
    pub groups: Groups,
    pub version_summary: Vec<VersionSummary>,
    /// Repositories whose root manifest never named TypeScript.
    pub repos_without_versions: u64,
}

/// Runs every analysis step. The result does not depend on the order of
/// `repos`.
pub fn analyze(repos: &[RepoObservations], table: &ReleaseTable, window_end: DateTime<Utc>, horizon_days: i64) -> Analysis {
    let mut events: Vec<AdoptionEvent> = repos.iter().flat_map(|r| repo_events(r, table)).collect();
    events.sort_by(|a, b| (&a.repo, a.subject).cmp(&(&b.repo, b.subject)));

    let feature_curves: Vec<AdoptionCurve> = FeatureId::ALL
        .into_iter()
        .filter_map(|f| curve_from_events(Subject::Feature(f), &events, table, window_end, horizon_days))
        .collect();
    let mut versions: Vec<ResolvedVersion> = table.versions().filter_map(|v| v.parse().ok()).collect();
    versions.sort();
    let version_curves: Vec<AdoptionCurve> = versions
        .into_iter()
        .filter_map(|v| curve_from_events(Subject::Version(v), &events, table, window_end, horizon_days))
        .collect();

    let with_versions = repos.iter().filter(|r| !r.versions.is_empty()).count() as u64;
    let groups = classify_groups(&feature_curves, table, window_end);
    let version_summary = version_adoption_summary(&version_curves, repos.len() as u64);
    Analysis {
        events,
        feature_curves,
        version_curves,
        groups,
        version_summary,
        repos_without_versions: repos.len() as u64 - with_versions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn at(y: i32, m: u32, d: u32) -> DateTime<Utc> {
        Utc.with_ymd_and_hms(y, m, d, 12, 0, 0).unwrap()
    }

    fn pts(c: &AdoptionCurve) -> Vec<(i64, u64)> {
        c.points.iter().map(|p| (p.offset_day, p.cumulative_repos)).collect()
    }

    #[test]
    fn curve_examples() {
        let s = Subject::Feature(FeatureId::F0);
        assert_eq!(pts(&build_curve(s, [-5, 3, 3, 10], 800)), [(-5, 1), (3, 3), (10, 4)]);
        assert!(build_curve(s, [801, 900], 800).points.is_empty());
        assert!(build_curve(s, [], 800).points.is_empty());
        let c = build_curve(s, [-5, 3, 3, 10], 800);
        assert_eq!((c.count_at(-6), c.count_at(-5), c.count_at(9), c.count_at(1000)), (0, 1, 3, 4));
    }

    #[test]
    fn first_use_picks_earliest_flagging_blob() {
        let table = ReleaseTable::standard();
        let f0 = FeatureSet::from_features([FeatureId::F0]);
        let obs = RepoObservations {
            repo: "r".into(),
            blobs: vec![(at(2022, 12, 1), f0), (at(2022, 11, 20), f0), (at(2022, 1, 1), FeatureSet::EMPTY)],
            versions: vec![],
        };
        let e = first_use(&obs, Subject::Feature(FeatureId::F0), &table).unwrap();
        assert_eq!((e.first_use, e.offset_days), (at(2022, 11, 20), 5));
        assert!(first_use(&obs, Subject::Feature(FeatureId::F1), &table).is_none());
        assert_eq!(repo_events(&obs, &table), vec![e]);
    }

    #[test]
    fn censoring_and_window_cut() {
        let table = ReleaseTable::standard();
        let end = Utc.with_ymd_and_hms(2022, 12, 31, 23, 59, 59).unwrap();
        assert_eq!(curve_last_day(table.release_date("4.9").unwrap(), end, 800), 46);
        assert_eq!(curve_last_day(table.release_date("4.0").unwrap(), end, 800), 800);
        let g = classify_groups(&[], &table, end);
        let censored: Vec<_> = g.group2.iter().filter(|m| m.censored).map(|m| m.feature.code()).collect();
        assert_eq!(censored, ["f0", "f1", "f2", "f3"]);
    }

    #[test]
    fn subjects_round_trip() {
        for s in ["f0", "f12", "4.9", "UNKNOWN"] {
            assert_eq!(s.parse::<Subject>().unwrap().to_string(), s);
        }
        assert!("g1".parse::<Subject>().is_err());
    }
}
