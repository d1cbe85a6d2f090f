//! fetch → scan → analyze → report.
//!
//! Each stage reads the previous stage's files from the output directory, so
//! stages can be rerun on their own:
//!
//! * `scan` writes `observations.jsonl`, one record per listed repository.
//! * `analyze` writes `analysis.json`.
//! * `report` writes the CSV and JSON reports.

use std::collections::HashMap;
use std::fs;
use std::io::{self, BufRead, BufReader};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{self, Analysis, RepoObservations};
use crate::config::{ingest_repo_list, ConfigError, RunConfig};
use crate::detect::{DetectionCache, FeatureSet};
use crate::features::ReleaseTable;
use crate::miner::{self, git, MineError, PathFilter, RepoRef, Window};
use crate::report;
use crate::version;

pub const OBSERVATIONS_FILE: &str = "observations.jsonl";
pub const ANALYSIS_FILE: &str = "analysis.json";

/// Worker threads parse deeply nested sources recursively.
const WORKER_STACK: usize = 64 << 20;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: {message}")]
    Corrupt { path: PathBuf, line: usize, message: String },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl PipelineError {
    pub(crate) fn io(path: &Path) -> impl FnOnce(io::Error) -> PipelineError + '_ {
        move |source| PipelineError::Io { path: path.to_path_buf(), source }
    }
}

/// Mining counts and observations for one repository.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepoScan {
    pub repo: String,
    pub commits: usize,
    pub unique_blobs: usize,
    pub unparsed_blobs: usize,
    pub skipped_commits: usize,
    pub unparseable_dates: usize,
    pub outside_window: usize,
    /// Only blobs that use at least one feature are kept.
    pub observations: RepoObservations,
}

/// One line of `observations.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScanRecord {
    Analyzed(RepoScan),
    Failed { repo: String, error: String },
}

impl ScanRecord {
    pub fn repo(&self) -> &str {
        match self {
            ScanRecord::Analyzed(s) => &s.repo,
            ScanRecord::Failed { repo, .. } => repo,
        }
    }
}

/// Scan results plus detection work done.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutcome {
    pub records: Vec<ScanRecord>,
    pub parses: u64,
    pub cache_hits: u64,
}

impl ScanOutcome {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| matches!(r, ScanRecord::Failed { .. })).count()
    }
}

fn pool(parallelism: usize) -> Result<rayon::ThreadPool, PipelineError> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(parallelism.max(1)).stack_size(WORKER_STACK).build()?)
}

/// Mines one clone: commits in the window, distinct `.ts` contents with
/// their features, and root manifest versions.
pub fn scan_repo(repo: &RepoRef, window: &Window, filter: PathFilter, cache: &DetectionCache) -> Result<RepoScan, MineError> {
    let commits = miner::enumerate_commits(&repo.local_path, window)?;
    let mut features: HashMap<_, FeatureSet> = HashMap::new();
    let blobs = miner::collect_blobs_with(&repo.name, &repo.local_path, &commits.commits, filter, |hash, bytes| {
        features.insert(*hash, cache.detect_cached(hash, bytes));
    })?;
    let versions = version::collect_versions(&repo.name, &repo.local_path, &commits.commits)?;

    let mut unparsed_blobs = 0;
    let mut flagged = Vec::new();
    for obs in &blobs.observations {
        let set = features.get(&obs.content_hash).copied().unwrap_or(FeatureSet::UNPARSED);
        if !set.parsed_ok() {
            unparsed_blobs += 1;
        } else if !set.is_empty() {
            flagged.push((obs.earliest_timestamp, set));
        }
    }
    flagged.sort();
    Ok(RepoScan {
        repo: repo.name.clone(),
        commits: commits.commits.len(),
        unique_blobs: blobs.observations.len(),
        unparsed_blobs,
        skipped_commits: blobs.skipped_commits,
        unparseable_dates: commits.unparseable_dates,
        outside_window: commits.outside_window,
        observations: RepoObservations { repo: repo.name.clone(), blobs: flagged, versions },
    })
}

/// Scans every repository on a pool of `parallelism` workers. Records come
/// back in list order whatever the scheduling.
pub fn scan_all(repos: &[RepoRef], window: &Window, filter: PathFilter, cache: &DetectionCache, parallelism: usize) -> Result<ScanOutcome, PipelineError> {
    let (parses, hits) = (cache.parse_count(), cache.hit_count());
    let records = pool(parallelism)?.install(|| {
        repos
            .par_iter()
            .map(|repo| match scan_repo(repo, window, filter, cache) {
                Ok(scan) => {
                    log::info!("{}: {} commits, {} distinct files", repo.name, scan.commits, scan.unique_blobs);
                    ScanRecord::Analyzed(scan)
                }
                Err(e) => {
                    log::warn!("{}: {e}", repo.name);
                    ScanRecord::Failed { repo: repo.name.clone(), error: e.to_string() }
                }
            })
            .collect()
    });
    if let Err(e) = cache.flush() {
        log::warn!("cannot flush detection cache: {e}");
    }
    Ok(ScanOutcome { records, parses: cache.parse_count() - parses, cache_hits: cache.hit_count() - hits })
}

/// Result of cloning one repository.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FetchStatus {
    Cloned,
    Present,
    Failed(String),
}

/// Mirrors each repository into the workspace unless a clone is already
/// there.
pub fn fetch(repos: &[RepoRef], parallelism: usize) -> Result<Vec<(String, FetchStatus)>, PipelineError> {
    pool(parallelism)?.install(|| {
        Ok(repos
            .par_iter()
            .map(|repo| {
                let status = if git::is_repository(&repo.local_path) {
                    FetchStatus::Present
                } else {
                    let parent = repo.local_path.parent().unwrap_or(Path::new("."));
                    let target = repo.local_path.to_string_lossy();
                    match fs::create_dir_all(parent)
                        .map_err(MineError::from)
                        .and_then(|()| git::output(parent, &["clone", "--quiet", "--mirror", &repo.clone_url, &target]))
                    {
                        Ok(_) => FetchStatus::Cloned,
                        Err(e) => FetchStatus::Failed(e.to_string()),
                    }
                };
                (repo.name.clone(), status)
            })
            .collect())
    })
}

pub fn write_observations(path: &Path, records: &[ScanRecord]) -> Result<(), PipelineError> {
    report::write_atomic(path, |w| {
        for rec in records {
            serde_json::to_writer(&mut *w, rec)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    })
}

pub fn read_observations(path: &Path) -> Result<Vec<ScanRecord>, PipelineError> {
    let file = fs::File::open(path).map_err(PipelineError::io(path))?;
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(PipelineError::io(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| PipelineError::Corrupt {
            path: path.to_path_buf(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        records.push(rec);
    }
    Ok(records)
}

/// Repositories that enter the curves: analyzed and with at least one
/// commit in the window.
pub fn studied(records: &[ScanRecord]) -> Vec<RepoObservations> {
    records
        .iter()
        .filter_map(|r| match r {
            ScanRecord::Analyzed(s) if s.commits > 0 => Some(s.observations.clone()),
            _ => None,
        })
        .collect()
}

pub fn analyze_records(records: &[ScanRecord], config: &RunConfig) -> Analysis {
    analytics::analyze(&studied(records), &ReleaseTable::standard(), config.window.end, config.horizon_days)
}

/// `scan` stage: reads the repository list, writes `observations.jsonl`.
pub fn run_scan(config: &RunConfig) -> Result<ScanOutcome, PipelineError> {
    let repos = ingest_repo_list(&config.repo_list, &config.workspace_dir)?;
    if repos.is_empty() {
        log::warn!("{} lists no repositories", config.repo_list.display());
    }
    fs::create_dir_all(&config.output_dir).map_err(PipelineError::io(&config.output_dir))?;
    let cache = DetectionCache::open(config.cache_file());
    let filter = PathFilter { include_dts: config.include_dts };
    let outcome = scan_all(&repos, &config.window, filter, &cache, config.parallelism)?;
    write_observations(&config.output_dir.join(OBSERVATIONS_FILE), &outcome.records)?;
    log::info!("scan: {} parses, {} cache hits", outcome.parses, outcome.cache_hits);
    Ok(outcome)
}

/// `analyze` stage: `observations.jsonl` to `analysis.json`.
pub fn run_analyze(config: &RunConfig) -> Result<Analysis, PipelineError> {
    let records = read_observations(&config.output_dir.join(OBSERVATIONS_FILE))?;
    let analysis = analyze_records(&records, config);
    let path = config.output_dir.join(ANALYSIS_FILE);
    report::write_atomic(&path, |w| {
        serde_json::to_writer_pretty(&mut *w, &analysis)?;
        w.write_all(b"\n")
    })?;
    Ok(analysis)
}

/// `report` stage: writes the report files from the earlier stages.
pub fn run_report(config: &RunConfig) -> Result<Vec<PathBuf>, PipelineError> {
    let records = read_observations(&config.output_dir.join(OBSERVATIONS_FILE))?;
    let path = config.output_dir.join(ANALYSIS_FILE);
    let text = fs::read_to_string(&path).map_err(PipelineError::io(&path))?;
    let analysis: Analysis = serde_json::from_str(&text).map_err(|e| PipelineError::Corrupt {
        path: path.clone(),
        line: e.line(),
        message: e.to_string(),
    })?;
    report::emit_reports(&config.output_dir, &analysis, &records, config)
}

/// What a full run did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub scan: ScanOutcome,
    pub reports: Vec<PathBuf>,
}

/// Runs scan, analyze and report in turn.
pub fn run_pipeline(config: &RunConfig) -> Result<RunOutcome, PipelineError> {
    config.validate()?;
    let scan = run_scan(config)?;
    run_analyze(config)?;
    let reports = run_report(config)?;
    Ok(RunOutcome { scan, reports })
}
