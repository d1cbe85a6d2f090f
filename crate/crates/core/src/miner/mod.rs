//! Commit enumeration and TypeScript blob extraction from local clones.

pub(crate) mod git;

use std::collections::{HashMap, HashSet};
use std::io;
use std::path::{Path, PathBuf};

use chrono::{DateTime, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use crate::hash::ContentHash;
use git::{CatFile, EntryKind};

#[derive(Debug, thiserror::Error)]
pub enum MineError {
    #[error("{0} is not a git repository")]
    NotARepository(PathBuf),
    #[error("failed to run git: {0}")]
    Spawn(#[source] io::Error),
    #[error("git {args} failed: {stderr}")]
    Git { args: String, stderr: String },
    #[error("git output: {0}")]
    Io(#[from] io::Error),
}

/// One repository of the study.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepoRef {
    /// `owner/repo`
    pub name: String,
    pub clone_url: String,
    pub stars: u64,
    pub local_path: PathBuf,
}

impl RepoRef {
    /// Directory name used for the clone inside a workspace: `owner__repo`.
    pub fn dir_name(name: &str) -> String {
        name.replace('/', "__")
    }
}

/// Inclusive UTC time range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

impl Window {
    /// 2020-01-01T00:00:00Z through 2022-12-31T23:59:59Z.
    pub fn study() -> Window {
        Window {
            start: Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap(),
            end: Utc.with_ymd_and_hms(2022, 12, 31, 23, 59, 59).unwrap(),
        }
    }

    pub fn contains(&self, t: DateTime<Utc>) -> bool {
        self.start <= t && t <= self.end
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::study()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CommitRecord {
    pub commit_id: String,
    /// The later of author and committer date.
    pub timestamp: DateTime<Utc>,
}

/// A distinct `.ts` file content and the first time it appears in a repo.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlobObservation {
    pub content_hash: ContentHash,
    pub repo: String,
    pub earliest_timestamp: DateTime<Utc>,
    pub path_sample: String,
}

/// The later of two ISO-8601 dates, in UTC. An unparseable date is
/// ignored; `None` if neither parses.
pub fn commit_timestamp(author: &str, committer: &str) -> Option<DateTime<Utc>> {
    let parse = |s: &str| DateTime::parse_from_rfc3339(s.trim()).ok().map(|d| d.with_timezone(&Utc));
    match (parse(author), parse(committer)) {
        (Some(a), Some(c)) => Some(a.max(c)),
        (a, c) => a.or(c),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommitEnumeration {
    /// Sorted by timestamp, then commit id.
    pub commits: Vec<CommitRecord>,
    /// Reachable commits whose dates could not be parsed.
    pub unparseable_dates: usize,
    /// Reachable commits dated outside the window.
    pub outside_window: usize,
}

/// Every commit reachable from a branch, remote-tracking branch or tag,
/// limited to `window`.
pub fn enumerate_commits(repo: &Path, window: &Window) -> Result<CommitEnumeration, MineError> {
    if !git::is_repository(repo) {
        return Err(MineError::NotARepository(repo.to_path_buf()));
    }
    let out = git::output(
        repo,
        &["rev-list", "--branches", "--tags", "--remotes", "--format=%H%x00%aI%x00%cI"],
    )?;
    let mut result = CommitEnumeration::default();
    let mut seen = HashSet::new();
    for line in out.split(|&b| b == b'\n') {
        // rev-list prints a `commit <id>` header before each formatted line.
        if line.is_empty() || line.starts_with(b"commit ") {
            continue;
        }
        let line = String::from_utf8_lossy(line);
        let mut fields = line.split('\0');
        let (Some(id), Some(author), Some(committer)) = (fields.next(), fields.next(), fields.next()) else {
            result.unparseable_dates += 1;
            continue;
        };
        if !seen.insert(id.to_string()) {
            continue;
        }
        match commit_timestamp(author, committer) {
            None => {
                log::warn!("{}: commit {id} has no parseable date", repo.display());
                result.unparseable_dates += 1;
            }
            Some(t) if !window.contains(t) => result.outside_window += 1,
            Some(timestamp) => result.commits.push(CommitRecord { commit_id: id.to_string(), timestamp }),
        }
    }
    result.commits.sort_by(|a, b| (a.timestamp, &a.commit_id).cmp(&(b.timestamp, &b.commit_id)));
    Ok(result)
}

/// Which paths count as TypeScript sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFilter {
    pub include_dts: bool,
}

impl Default for PathFilter {
    fn default() -> Self {
        PathFilter { include_dts: true }
    }
}

impl PathFilter {
    /// Case-sensitive `.ts` suffix; `.tsx` never matches.
    pub fn matches(&self, file_name: &[u8]) -> bool {
        file_name.ends_with(b".ts") && (self.include_dts || !file_name.ends_with(b".d.ts"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlobCollection {
    /// Sorted by content hash.
    pub observations: Vec<BlobObservation>,
    /// Commits whose tree could not be read completely.
    pub skipped_commits: usize,
}

/// [`collect_blobs_with`] without a content visitor.
pub fn collect_blobs(
    repo_name: &str,
    repo: &Path,
    commits: &[CommitRecord],
    filter: PathFilter,
) -> Result<BlobCollection, MineError> {
    collect_blobs_with(repo_name, repo, commits, filter, |_, _| {})
}

/// Walks the tree of every commit and records each distinct `.ts` content
/// with the earliest commit timestamp it appears at.
///
/// `visit` is called exactly once per distinct content, with its digest and
/// raw bytes, so callers can analyze each file without keeping it around.
/// Submodules and symlinks are not followed.
pub fn collect_blobs_with<F>(
    repo_name: &str,
    repo: &Path,
    commits: &[CommitRecord],
    filter: PathFilter,
    mut visit: F,
) -> Result<BlobCollection, MineError>
where
    F: FnMut(&ContentHash, &[u8]),
{
    let oid_len = git::object_id_len(repo);
    let mut cat = CatFile::spawn(repo)?;

    let mut ordered: Vec<&CommitRecord> = commits.iter().collect();
    ordered.sort_by(|a, b| (a.timestamp, &a.commit_id).cmp(&(b.timestamp, &b.commit_id)));

    // Processing commits oldest first means the first sighting of a blob is
    // its earliest, and a tree seen before cannot contribute anything new.
    let mut walked_trees: HashSet<String> = HashSet::new();
    let mut blob_hashes: HashMap<String, ContentHash> = HashMap::new();
    let mut observations: HashMap<ContentHash, BlobObservation> = HashMap::new();
    let mut skipped_commits = 0;

    for commit in ordered {
        let mut walk = Walk {
            cat: &mut cat,
            oid_len,
            filter,
            walked_trees: &walked_trees,
            known_blobs: &blob_hashes,
            new_trees: HashSet::new(),
            new_blob_ids: HashSet::new(),
            new_blobs: Vec::new(),
        };
        let root = format!("{}^{{tree}}", commit.commit_id);
        match walk.walk(&root, "") {
            Ok(()) => {}
            Err(e) => {
                log::warn!("{repo_name}: skipping commit {}: {e}", commit.commit_id);
                skipped_commits += 1;
                if e.kind() == io::ErrorKind::UnexpectedEof || e.kind() == io::ErrorKind::BrokenPipe {
                    // The batch process died; restart it for the next commit.
                    cat = CatFile::spawn(repo)?;
                }
                continue;
            }
        }
        let Walk { new_trees, new_blobs, .. } = walk;
        walked_trees.extend(new_trees);
        for (oid, path, data) in new_blobs {
            if blob_hashes.contains_key(&oid) {
                continue;
            }
            let hash = ContentHash::of(&data);
            blob_hashes.insert(oid, hash);
            if observations.contains_key(&hash) {
                continue;
            }
            visit(&hash, &data);
            observations.insert(
                hash,
                BlobObservation {
                    content_hash: hash,
                    repo: repo_name.to_string(),
                    earliest_timestamp: commit.timestamp,
                    path_sample: path,
                },
            );
        }
    }

    let mut observations: Vec<BlobObservation> = observations.into_values().collect();
    observations.sort_by_key(|o| o.content_hash);
    Ok(BlobCollection { observations, skipped_commits })
}

/// One commit's tree walk. Results are buffered so a failed walk leaves the
/// shared state untouched.
struct Walk<'a> {
    cat: &'a mut CatFile,
    oid_len: usize,
    filter: PathFilter,
    walked_trees: &'a HashSet<String>,
    known_blobs: &'a HashMap<String, ContentHash>,
    new_trees: HashSet<String>,
    new_blob_ids: HashSet<String>,
    new_blobs: Vec<(String, String, Vec<u8>)>,
}

impl Walk<'_> {
    fn walk(&mut self, rev: &str, prefix: &str) -> io::Result<()> {
        let tree = self
            .cat
            .get(rev)?
            .filter(|o| o.kind == "tree")
            .ok_or_else(|| io::Error::new(io::ErrorKind::NotFound, format!("tree {rev} is missing")))?;
        if self.walked_trees.contains(&tree.oid) || self.new_trees.contains(&tree.oid) {
            return Ok(());
        }
        for entry in git::parse_tree(&tree.data, self.oid_len)? {
            let name = String::from_utf8_lossy(entry.name);
            let path = if prefix.is_empty() { name.into_owned() } else { format!("{prefix}/{name}") };
            match entry.kind {
                EntryKind::Tree => self.walk(&entry.oid, &path)?,
                EntryKind::Blob if self.filter.matches(entry.name) => {
                    if self.known_blobs.contains_key(&entry.oid) || !self.new_blob_ids.insert(entry.oid.clone()) {
                        continue;
                    }
                    let blob = self.cat.get(&entry.oid)?.ok_or_else(|| {
                        io::Error::new(io::ErrorKind::NotFound, format!("blob {} is missing", entry.oid))
                    })?;
                    self.new_blobs.push((entry.oid, path, blob.data));
                }
                EntryKind::Blob | EntryKind::Symlink | EntryKind::Submodule => {}
            }
        }
        self.new_trees.insert(tree.oid);
        Ok(())
    }
}

/// Reads the file at `path` in the root tree of each commit. Contents are
/// deduplicated by blob id; the callback receives each distinct content
/// once with the earliest commit it appears in (commits must be sorted by
/// timestamp).
pub(crate) fn read_root_file<F>(repo: &Path, commits: &[CommitRecord], path: &str, mut visit: F) -> Result<(), MineError>
where
    F: FnMut(&CommitRecord, &[u8]),
{
    let mut cat = CatFile::spawn(repo)?;
    let mut seen = HashSet::new();
    for commit in commits {
        match cat.get(&format!("{}:{path}", commit.commit_id)) {
            Ok(Some(obj)) if obj.kind == "blob" => {
                if seen.insert(obj.oid) {
                    visit(commit, &obj.data);
                }
            }
            Ok(_) => {}
            Err(e) => {
                log::warn!("{}: cannot read {path} at {}: {e}", repo.display(), commit.commit_id);
                cat = CatFile::spawn(repo)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn utc(s: &str) -> DateTime<Utc> {
        DateTime::parse_from_rfc3339(s).unwrap().with_timezone(&Utc)
    }

    #[test]
    fn timestamp_is_later_of_two() {
        assert_eq!(
            commit_timestamp("2022-01-01T10:00:00Z", "2022-01-02T10:00:00Z"),
            Some(utc("2022-01-02T10:00:00Z"))
        );
        assert_eq!(
            commit_timestamp("2022-01-01T10:00:00Z", "2022-01-01T10:00:00Z"),
            Some(utc("2022-01-01T10:00:00Z"))
        );
    }

    #[test]
    fn timestamp_compares_in_utc() {
        // +10:00 local midnight is 14:00 UTC the previous day.
        assert_eq!(
            commit_timestamp("2022-03-05T00:00:00+10:00", "2022-03-04T20:00:00Z"),
            Some(utc("2022-03-04T20:00:00Z"))
        );
    }

    #[test]
    fn timestamp_falls_back_to_parseable_date() {
        assert_eq!(commit_timestamp("garbage", "2021-06-01T00:00:00-05:00"), Some(utc("2021-06-01T05:00:00Z")));
        assert_eq!(commit_timestamp("2021-06-01T00:00:00Z", ""), Some(utc("2021-06-01T00:00:00Z")));
        assert_eq!(commit_timestamp("x", "y"), None);
    }

    #[test]
    fn window_is_inclusive() {
        let w = Window::study();
        assert!(w.contains(utc("2020-01-01T00:00:00Z")));
        assert!(w.contains(utc("2022-12-31T23:59:59Z")));
        assert!(!w.contains(utc("2019-12-31T23:59:59Z")));
        assert!(!w.contains(utc("2023-01-01T00:00:00Z")));
    }

    #[test]
    fn path_filter() {
        let all = PathFilter { include_dts: true };
        let no_dts = PathFilter { include_dts: false };
        assert!(all.matches(b"a.ts"));
        assert!(all.matches(b"a.d.ts"));
        assert!(!no_dts.matches(b"a.d.ts"));
        assert!(no_dts.matches(b"a.ts"));
        for name in [&b"a.tsx"[..], b"a.TS", b"ts", b"a.ts.bak", b"a.mts"] {
            assert!(!all.matches(name), "{}", String::from_utf8_lossy(name));
        }
    }

    #[test]
    fn dir_name_flattens_owner() {
        assert_eq!(RepoRef::dir_name("microsoft/TypeScript"), "microsoft__TypeScript");
    }
}
