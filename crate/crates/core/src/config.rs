//! Run configuration and the repository list.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytics::{DEFAULT_HORIZON_DAYS, GROUP_DAY};
use crate::miner::{RepoRef, Window};

/// Overrides `cache_dir` from the config file.
pub const CACHE_DIR_ENV: &str = "TSADOPT_CACHE_DIR";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Toml { path: PathBuf, source: toml::de::Error },
    #[error("{path}:{line}: {message}")]
    RepoList { path: PathBuf, line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// JSON-lines file of `{name, clone_url, stars}` records.
    pub repo_list: PathBuf,
    /// Holds one clone per repository, named by [`RepoRef::dir_name`].
    pub workspace_dir: PathBuf,
    pub cache_dir: PathBuf,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub window: Window,
    #[serde(default = "default_horizon")]
    pub horizon_days: i64,
    #[serde(default = "default_true")]
    pub include_dts: bool,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
}

fn default_horizon() -> i64 {
    DEFAULT_HORIZON_DAYS
}

fn default_true() -> bool {
    true
}

fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RunConfig {
    /// Defaults rooted at `base`.
    pub fn rooted_at(base: &Path) -> RunConfig {
        RunConfig {
            repo_list: base.join("repos.jsonl"),
            workspace_dir: base.join("workspace"),
            cache_dir: base.join("cache"),
            output_dir: base.join("out"),
            window: Window::study(),
            horizon_days: DEFAULT_HORIZON_DAYS,
            include_dts: true,
            parallelism: default_parallelism(),
        }
    }

    /// Reads a TOML file. Relative paths are taken from the file's
    /// directory and `TSADOPT_CACHE_DIR` replaces `cache_dir`.
    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        let mut config: RunConfig =
            toml::from_str(&text).map_err(|source| ConfigError::Toml { path: path.to_path_buf(), source })?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut config.repo_list, &mut config.workspace_dir, &mut config.cache_dir, &mut config.output_dir] {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        config.apply_env();
        config.validate()?;
        Ok(config)
    }

    pub fn apply_env(&mut self) {
        if let Some(dir) = std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()) {
            self.cache_dir = PathBuf::from(dir);
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.window.start > self.window.end {
            return Err(ConfigError::Invalid(format!(
                "window starts ({}) after it ends ({})",
                self.window.start, self.window.end
            )));
        }
        if self.parallelism == 0 {
            return Err(ConfigError::Invalid("parallelism must be at least 1".into()));
        }
        if self.horizon_days < GROUP_DAY {
            return Err(ConfigError::Invalid(format!("horizon_days must be at least {GROUP_DAY}")));
        }
        Ok(())
    }

    /// Cache file shared by all runs using this cache directory.
    pub fn cache_file(&self) -> PathBuf {
        self.cache_dir.join("detections.jsonl")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RepoLine {
    name: String,
    clone_url: String,
    #[serde(default)]
    stars: u64,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name.split('/').all(|part| !part.is_empty() && !part.starts_with('.'))
        && name.bytes().all(|b| b.is_ascii_alphanumeric() || b"-_./".contains(&b))
}

/// Parses the repository list, keeping its order. Clones are expected
/// under `workspace`.
///
/// A malformed or duplicate line fails the whole list, naming the line.
pub fn ingest_repo_list(path: &Path, workspace: &Path) -> Result<Vec<RepoRef>, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
    parse_repo_list(&text, workspace).map_err(|(line, message)| ConfigError::RepoList { path: path.to_path_buf(), line, message })
}

/// [`ingest_repo_list`] over text; errors carry a 1-based line number.
pub fn parse_repo_list(text: &str, workspace: &Path) -> Result<Vec<RepoRef>, (usize, String)> {
    let mut seen = HashSet::new();
    let mut repos = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RepoLine = serde_json::from_str(line).map_err(|e| (lineno, e.to_string()))?;
        if !valid_name(&rec.name) {
            return Err((lineno, format!("invalid repository name `{}`", rec.name)));
        }
        if !seen.insert(RepoRef::dir_name(&rec.name)) {
            return Err((lineno, format!("duplicate repository `{}`", rec.name)));
        }
        repos.push(RepoRef {
            local_path: workspace.join(RepoRef::dir_name(&rec.name)),
            name: rec.name,
            clone_url: rec.clone_url,
            stars: rec.stars,
        });
    }
    Ok(repos)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repo_list_keeps_order() {
        let text = "{\"name\":\"b/one\",\"clone_url\":\"u1\",\"stars\":5}\n\n{\"name\":\"a/two\",\"clone_url\":\"u2\",\"stars\":9}\n";
        let repos = parse_repo_list(text, Path::new("/w")).unwrap();
        let names: Vec<_> = repos.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["b/one", "a/two"]);
        assert_eq!(repos[0].local_path, Path::new("/w/b__one"));
        assert!(parse_repo_list("", Path::new("/w")).unwrap().is_empty());
    }

    #[test]
    fn repo_list_errors_name_the_line() {
        let dup = "{\"name\":\"a/b\",\"clone_url\":\"u\"}\n{\"name\":\"a/b\",\"clone_url\":\"v\"}\n";
        let (line, msg) = parse_repo_list(dup, Path::new("/w")).unwrap_err();
        assert_eq!(line, 2);
        assert!(msg.contains("a/b"), "{msg}");
        let (line, _) = parse_repo_list("{\"name\":\"a/b\",\"clone_url\":\"u\"}\nnot json\n", Path::new("/w")).unwrap_err();
        assert_eq!(line, 2);
        for bad in ["../x", "a//b", "", "a/.git", "a b"] {
            let text = format!("{{\"name\":{},\"clone_url\":\"u\"}}", serde_json::to_string(bad).unwrap());
            assert!(parse_repo_list(&text, Path::new("/w")).is_err(), "{bad}");
        }
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig::rooted_at(Path::new("/tmp/x"));
        assert!(c.validate().is_ok());
        c.parallelism = 0;
        assert!(c.validate().is_err());
        c.parallelism = 1;
        std::mem::swap(&mut c.window.start, &mut c.window.end);
        assert!(c.validate().is_err());
    }

    #[test]
    fn toml_round_trip_with_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(
            &path,
            "repo_list = \"repos.jsonl\"\nworkspace_dir = \"ws\"\ncache_dir = \"c\"\noutput_dir = \"/abs/out\"\nparallelism = 3\n\n[window]\nstart = \"2021-01-01T00:00:00Z\"\nend = \"2021-12-31T23:59:59Z\"\n",
        )
        .unwrap();
        let c = RunConfig::load(&path).unwrap();
        assert_eq!(c.workspace_dir, dir.path().join("ws"));
        assert_eq!(c.output_dir, Path::new("/abs/out"));
        assert_eq!(c.parallelism, 3);
        assert_eq!(c.horizon_days, 800);
        assert!(c.include_dts);
        assert_eq!(c.window.start.to_rfc3339(), "2021-01-01T00:00:00+00:00");
        fs::write(&path, "repo_list = 1").unwrap();
        assert!(matches!(RunConfig::load(&path), Err(ConfigError::Toml { .. })));
    }
}
