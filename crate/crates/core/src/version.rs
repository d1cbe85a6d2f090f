//! TypeScript compiler version from the root `package.json`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use nodejs_semver::Range;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::miner::{self, CommitRecord, MineError};

/// Dependency sections searched for `typescript`, first hit wins.
pub const DEPENDENCY_FIELDS: [&str; 4] = ["devDependencies", "dependencies", "peerDependencies", "optionalDependencies"];

/// How a written range becomes a version.
pub const RANGE_RESOLUTION: &str = "floor";

/// A `major.minor` version, or `UNKNOWN` when the range names none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResolvedVersion {
    Known { major: u64, minor: u64 },
    Unknown,
}

impl ResolvedVersion {
    pub const fn new(major: u64, minor: u64) -> ResolvedVersion {
        ResolvedVersion::Known { major, minor }
    }
}

impl fmt::Display for ResolvedVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResolvedVersion::Known { major, minor } => write!(f, "{major}.{minor}"),
            ResolvedVersion::Unknown => f.write_str("UNKNOWN"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is neither major.minor nor UNKNOWN")]
pub struct BadVersion(String);

impl FromStr for ResolvedVersion {
    type Err = BadVersion;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "UNKNOWN" {
            return Ok(ResolvedVersion::Unknown);
        }
        let bad = || BadVersion(s.to_string());
        let (major, minor) = s.split_once('.').ok_or_else(bad)?;
        let digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
        if !digits(major) || !digits(minor) {
            return Err(bad());
        }
        Ok(ResolvedVersion::new(major.parse().map_err(|_| bad())?, minor.parse().map_err(|_| bad())?))
    }
}

impl Serialize for ResolvedVersion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ResolvedVersion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Earliest commit at which a repository's manifest resolved to `version`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionObservation {
    pub repo: String,
    pub version: ResolvedVersion,
    pub earliest_timestamp: DateTime<Utc>,
}

/// The `typescript` range declared in a manifest.
///
/// ```
/// use tsadopt::version::parse_manifest;
/// let m = r#"{"dependencies":{"typescript":"~4.7.0"},"devDependencies":{}}"#;
/// assert_eq!(parse_manifest(m).as_deref(), Some("~4.7.0"));
/// assert_eq!(parse_manifest("{not json"), None);
/// ```
pub fn parse_manifest(content: &str) -> Option<String> {
    let json: serde_json::Value = serde_json::from_str(content).ok()?;
    DEPENDENCY_FIELDS
        .iter()
        .find_map(|field| json.get(field)?.get("typescript"))
        .map(|v| match v {
            serde_json::Value::String(s) => s.clone(),
            // Not a range; resolves to UNKNOWN.
            other => other.to_string(),
        })
}

/// Lowest version satisfying `range`, truncated to `major.minor`.
///
/// Ranges without a concrete lower bound (`*`, `latest`, `<5`, URLs,
/// `workspace:` refs) are [`ResolvedVersion::Unknown`].
///
/// ```
/// use tsadopt::version::{resolve_range, ResolvedVersion};
/// assert_eq!(resolve_range("^4.9.3"), ResolvedVersion::new(4, 9));
/// assert_eq!(resolve_range("4.5.0-beta"), ResolvedVersion::new(4, 5));
/// assert_eq!(resolve_range("*"), ResolvedVersion::Unknown);
/// ```
pub fn resolve_range(range: &str) -> ResolvedVersion {
    let range = range.trim();
    // The parser accepts a few things npm would treat as tags or specs.
    if range.is_empty() || range.contains(':') || range.contains('/') || !range.bytes().any(|b| b.is_ascii_digit()) {
        return ResolvedVersion::Unknown;
    }
    let Ok(parsed) = Range::parse(range) else {
        return ResolvedVersion::Unknown;
    };
    match parsed.min_version() {
        Some(v) if (v.major(), v.minor(), v.patch()) != (0, 0, 0) => ResolvedVersion::new(v.major(), v.minor()),
        _ => ResolvedVersion::Unknown,
    }
}

/// Resolves one manifest; `None` when it declares no `typescript`.
pub fn resolve_manifest(bytes: &[u8]) -> Option<ResolvedVersion> {
    let text = std::str::from_utf8(bytes).ok()?;
    parse_manifest(text).map(|r| resolve_range(&r))
}

/// Folds `(timestamp, version)` pairs into one observation per version.
pub fn min_per_version<I>(repo: &str, resolved: I) -> Vec<VersionObservation>
where
    I: IntoIterator<Item = (DateTime<Utc>, ResolvedVersion)>,
{
    let mut earliest: BTreeMap<ResolvedVersion, DateTime<Utc>> = BTreeMap::new();
    for (ts, version) in resolved {
        earliest.entry(version).and_modify(|t| *t = (*t).min(ts)).or_insert(ts);
    }
    earliest
        .into_iter()
        .map(|(version, earliest_timestamp)| VersionObservation { repo: repo.to_string(), version, earliest_timestamp })
        .collect()
}

/// Reads `package.json` at the tree root of every commit.
///
/// Manifests in subdirectories are never consulted.
pub fn collect_versions(repo: &str, path: &Path, commits: &[CommitRecord]) -> Result<Vec<VersionObservation>, MineError> {
    // Identical manifests are resolved once, at their oldest commit.
    let mut ordered = commits.to_vec();
    ordered.sort_by(|a, b| (a.timestamp, &a.commit_id).cmp(&(b.timestamp, &b.commit_id)));
    let mut resolved = Vec::new();
    miner::read_root_file(path, &ordered, "package.json", |commit, bytes| {
        if let Some(v) = resolve_manifest(bytes) {
            resolved.push((commit.timestamp, v));
        }
    })?;
    Ok(min_per_version(repo, resolved))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_table() {
        let known = [
            ("^4.9.3", "4.9"),
            ("~4.7.0", "4.7"),
            ("4.5.0-beta", "4.5"),
            ("4.4.2", "4.4"),
            (">=4.1 <5", "4.1"),
            ("4.2.x", "4.2"),
            ("4", "4.0"),
            ("4.3.1 - 4.6", "4.3"),
            ("^4.8 || ^4.0.2", "4.0"),
            ("=4.0.5", "4.0"),
            ("v4.1.2", "4.1"),
            (">4.8.4", "4.8"),
        ];
        for (range, want) in known {
            assert_eq!(resolve_range(range).to_string(), want, "{range}");
        }
        for range in ["*", "", "latest", "next", "x", "<5.0.0", "https://example.com/ts.tgz", "workspace:*", "workspace:^4.9.0", "github:microsoft/TypeScript", "file:../ts", "microsoft/TypeScript#v4.9.3", "not a range"] {
            assert_eq!(resolve_range(range), ResolvedVersion::Unknown, "{range}");
        }
    }

    #[test]
    fn manifest_field_order() {
        let m = r#"{"peerDependencies":{"typescript":"4.1"},"dependencies":{"typescript":"4.2"},"devDependencies":{"typescript":"^4.9.3"}}"#;
        assert_eq!(parse_manifest(m).as_deref(), Some("^4.9.3"));
        let m = r#"{"optionalDependencies":{"typescript":"4.0"},"peerDependencies":{"typescript":"4.1"}}"#;
        assert_eq!(parse_manifest(m).as_deref(), Some("4.1"));
        assert_eq!(parse_manifest(r#"{"name":"x"}"#), None);
        assert_eq!(parse_manifest(r#"{"devDependencies":{"typescript":4}}"#).map(|r| resolve_range(&r)), Some(ResolvedVersion::new(4, 0)));
        assert_eq!(parse_manifest(r#"{"devDependencies":{"typescript":null}}"#).map(|r| resolve_range(&r)), Some(ResolvedVersion::Unknown));
        assert_eq!(parse_manifest("[1,2]"), None);
    }

    #[test]
    fn version_strings_round_trip() {
        for s in ["4.9", "10.12", "UNKNOWN"] {
            assert_eq!(s.parse::<ResolvedVersion>().unwrap().to_string(), s);
        }
        for s in ["4", "4.9.1", "a.b", ".9", "unknown"] {
            assert!(s.parse::<ResolvedVersion>().is_err(), "{s}");
        }
    }

    #[test]
    fn earliest_per_version() {
        let t = |s: &str| DateTime::parse_from_rfc3339(s).unwrap().with_timezone(&Utc);
        let obs = min_per_version(
            "r",
            [
                (t("2021-03-01T00:00:00Z"), ResolvedVersion::new(4, 4)),
                (t("2022-09-01T00:00:00Z"), ResolvedVersion::new(4, 8)),
                (t("2021-01-05T00:00:00Z"), ResolvedVersion::new(4, 4)),
            ],
        );
        assert_eq!(obs.len(), 2);
        assert_eq!(obs[0].version.to_string(), "4.4");
        assert_eq!(obs[0].earliest_timestamp, t("2021-01-05T00:00:00Z"));
        assert_eq!(obs[1].earliest_timestamp, t("2022-09-01T00:00:00Z"));
    }
}
