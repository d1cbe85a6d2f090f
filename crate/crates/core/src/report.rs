//! Report files. Every file is sorted and free of timings, paths and other
//! run-specific values, so identical inputs give identical bytes.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analytics::{AdoptionCurve, Analysis, VersionSummary, EARLY_ADOPTION_DAYS, GROUP_DAY, GROUP_THRESHOLD};
use crate::config::RunConfig;
use crate::detect::DETECTOR_VERSION;
use crate::miner::Window;
use crate::pipeline::{PipelineError, ScanRecord};
use crate::version::{DEPENDENCY_FIELDS, RANGE_RESOLUTION};

pub const FEATURE_CURVES: &str = "feature_curves.csv";
pub const VERSION_CURVES: &str = "version_curves.csv";
pub const FIRST_USE: &str = "first_use.csv";
pub const GROUPS: &str = "groups.json";
pub const SUMMARY: &str = "summary.json";
pub const RUN_META: &str = "run_meta.json";

/// All report file names, in the order they are written.
pub const REPORT_FILES: [&str; 6] = [FEATURE_CURVES, VERSION_CURVES, FIRST_USE, GROUPS, SUMMARY, RUN_META];

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a half-written report.
pub fn write_atomic<F>(path: &Path, write: F) -> Result<(), PipelineError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let tmp = path.with_extension("tmp");
    let result = (|| {
        let mut out = BufWriter::new(fs::File::create(&tmp)?);
        write(&mut out)?;
        out.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        fs::rename(&tmp, path)
    })();
    result.map_err(|source| {
        let _ = fs::remove_file(&tmp);
        PipelineError::Io { path: path.to_path_buf(), source }
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PipelineError> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n")
    })
}

fn write_curves(path: &Path, subject_column: &str, curves: &[AdoptionCurve]) -> Result<(), PipelineError> {
    write_atomic(path, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record([subject_column, "offset_day", "cumulative_repos"])?;
        for c in curves {
            let subject = c.subject.to_string();
            for p in &c.points {
                csv.write_record([subject.as_str(), &p.offset_day.to_string(), &p.cumulative_repos.to_string()])?;
            }
        }
        csv.flush()
    })
}

#[derive(Serialize)]
struct RepoSummary<'a> {
    repo: &'a str,
    commits: usize,
    unique_blobs: usize,
    unparsed_blobs: usize,
    skipped_commits: usize,
    unparseable_dates: usize,
    outside_window: usize,
    versions_recorded: usize,
}

#[derive(Serialize)]
struct Failure<'a> {
    repo: &'a str,
    error: &'a str,
}

#[derive(Serialize)]
struct Summary<'a> {
    repos_listed: usize,
    /// Scanned repositories, whether or not they had commits in the window.
    analyzed: Vec<&'a str>,
    failed: Vec<Failure<'a>>,
    /// Repositories in the curves: analyzed with at least one commit.
    repo_count: usize,
    /// Failed repositories plus analyzed ones without commits in the window.
    no_commits: usize,
    /// Repositories in the curves whose root manifest never named TypeScript.
    no_versions: u64,
    commits_considered: usize,
    unique_blobs: usize,
    unparsed_blobs: usize,
    version_summary: &'a [VersionSummary],
    repos: Vec<RepoSummary<'a>>,
}

#[derive(Serialize)]
struct Decisions {
    commit_date: &'static str,
    refs: &'static str,
    path_rule: &'static str,
    include_dts: bool,
    dependency_fields: [&'static str; 4],
    range_resolution: &'static str,
    manifest: &'static str,
    offset_rounding: &'static str,
    group_rule: String,
    early_adoption_days: i64,
}

#[derive(Serialize)]
struct RunMeta {
    tool_version: &'static str,
    detector_version: u32,
    config: MetaConfig,
    decisions: Decisions,
}

/// Settings that can change results. Paths, cache location and
/// parallelism are left out so they cannot change the report bytes.
#[derive(Serialize)]
struct MetaConfig {
    repo_list_sha256: Option<String>,
    window: Window,
    horizon_days: i64,
    include_dts: bool,
}

fn run_meta(config: &RunConfig) -> RunMeta {
    let repo_list_sha256 = fs::read(&config.repo_list).ok().map(|b| hex::encode(Sha256::digest(b)));
    RunMeta {
        tool_version: env!("CARGO_PKG_VERSION"),
        detector_version: DETECTOR_VERSION,
        config: MetaConfig {
            repo_list_sha256,
            window: config.window,
            horizon_days: config.horizon_days,
            include_dts: config.include_dts,
        },
        decisions: Decisions {
            commit_date: "later of author and committer date, UTC",
            refs: "branches, tags and remote-tracking branches",
            path_rule: if config.include_dts { "*.ts including *.d.ts; *.tsx excluded" } else { "*.ts excluding *.d.ts; *.tsx excluded" },
            include_dts: config.include_dts,
            dependency_fields: DEPENDENCY_FIELDS,
            range_resolution: RANGE_RESOLUTION,
            manifest: "package.json at the repository root only",
            offset_rounding: "floor, UTC calendar days",
            group_rule: format!("group1 if more than {GROUP_THRESHOLD} adopters at day {GROUP_DAY}"),
            early_adoption_days: EARLY_ADOPTION_DAYS,
        },
    }
}

fn summary<'a>(analysis: &'a Analysis, records: &'a [ScanRecord]) -> Summary<'a> {
    let mut analyzed = Vec::new();
    let mut failed = Vec::new();
    let mut repos = Vec::new();
    let mut no_commits = 0;
    for rec in records {
        match rec {
            ScanRecord::Analyzed(s) => {
                analyzed.push(s.repo.as_str());
                if s.commits == 0 {
                    no_commits += 1;
                }
                repos.push(RepoSummary {
                    repo: &s.repo,
                    commits: s.commits,
                    unique_blobs: s.unique_blobs,
                    unparsed_blobs: s.unparsed_blobs,
                    skipped_commits: s.skipped_commits,
                    unparseable_dates: s.unparseable_dates,
                    outside_window: s.outside_window,
                    versions_recorded: s.observations.versions.len(),
                });
            }
            ScanRecord::Failed { repo, error } => {
                no_commits += 1;
                failed.push(Failure { repo, error });
            }
        }
    }
    analyzed.sort_unstable();
    failed.sort_by(|a, b| a.repo.cmp(b.repo));
    repos.sort_by(|a, b| a.repo.cmp(b.repo));
    Summary {
        repos_listed: records.len(),
        repo_count: repos.iter().filter(|r| r.commits > 0).count(),
        no_commits,
        no_versions: analysis.repos_without_versions,
        commits_considered: repos.iter().map(|r| r.commits).sum(),
        unique_blobs: repos.iter().map(|r| r.unique_blobs).sum(),
        unparsed_blobs: repos.iter().map(|r| r.unparsed_blobs).sum(),
        version_summary: &analysis.version_summary,
        analyzed,
        failed,
        repos,
    }
}

/// Writes the six report files into `dir`.
pub fn emit_reports(dir: &Path, analysis: &Analysis, records: &[ScanRecord], config: &RunConfig) -> Result<Vec<PathBuf>, PipelineError> {
    fs::create_dir_all(dir).map_err(PipelineError::io(dir))?;
    let path = |name: &str| dir.join(name);

    write_curves(&path(FEATURE_CURVES), "feature_id", &analysis.feature_curves)?;
    write_curves(&path(VERSION_CURVES), "version", &analysis.version_curves)?;

    let mut events: Vec<_> = analysis.events.iter().collect();
    events.sort_by(|a, b| (&a.repo, a.subject).cmp(&(&b.repo, b.subject)));
    write_atomic(&path(FIRST_USE), |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["repo", "subject", "first_use_iso", "offset_days"])?;
        for e in events {
            csv.write_record([
                e.repo.as_str(),
                &e.subject.to_string(),
                &e.first_use.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                &e.offset_days.to_string(),
            ])?;
        }
        csv.flush()
    })?;

    write_json(&path(GROUPS), &analysis.groups)?;
    write_json(&path(SUMMARY), &summary(analysis, records))?;
    write_json(&path(RUN_META), &run_meta(config))?;
    Ok(REPORT_FILES.iter().map(|n| path(n)).collect())
}

/// SHA-256 of each report file, in [`REPORT_FILES`] order.
pub fn report_digests(dir: &Path) -> io::Result<Vec<(String, String)>> {
    REPORT_FILES
        .iter()
        .map(|name| Ok((name.to_string(), hex::encode(Sha256::digest(fs::read(dir.join(name))?)))))
        .collect()
}
