//! Scripted git repositories with fixed author and committer dates, for
//! fixtures and examples.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::Command;

pub struct ScriptedRepo {
    path: PathBuf,
}

impl ScriptedRepo {
    /// Creates an empty repository whose first branch is `main`.
    pub fn init(path: impl Into<PathBuf>) -> io::Result<ScriptedRepo> {
        let repo = ScriptedRepo { path: path.into() };
        fs::create_dir_all(&repo.path)?;
        repo.git(&["init", "-q"])?;
        repo.git(&["symbolic-ref", "HEAD", "refs/heads/main"])?;
        Ok(repo)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Runs git in the work tree with user and system config ignored.
    pub fn git(&self, args: &[&str]) -> io::Result<String> {
        self.git_dated(args, "2020-06-01T00:00:00Z", "2020-06-01T00:00:00Z")
    }

    fn git_dated(&self, args: &[&str], author_date: &str, committer_date: &str) -> io::Result<String> {
        let out = Command::new("git")
            .arg("-C")
            .arg(&self.path)
            .args(args)
            .env("GIT_CONFIG_NOSYSTEM", "1")
            .env("GIT_CONFIG_GLOBAL", "/dev/null")
            .env("GIT_AUTHOR_NAME", "Fixture Author")
            .env("GIT_AUTHOR_EMAIL", "author@example.com")
            .env("GIT_COMMITTER_NAME", "Fixture Committer")
            .env("GIT_COMMITTER_EMAIL", "committer@example.com")
            .env("GIT_AUTHOR_DATE", author_date)
            .env("GIT_COMMITTER_DATE", committer_date)
            .output()?;
        if !out.status.success() {
            return Err(io::Error::other(format!(
                "git {} failed: {}",
                args.join(" "),
                String::from_utf8_lossy(&out.stderr).trim()
            )));
        }
        Ok(String::from_utf8_lossy(&out.stdout).trim().to_string())
    }

    pub fn write(&self, rel: &str, contents: impl AsRef<[u8]>) -> io::Result<&Self> {
        let path = self.path.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, contents)?;
        Ok(self)
    }

    pub fn remove(&self, rel: &str) -> io::Result<&Self> {
        fs::remove_file(self.path.join(rel))?;
        Ok(self)
    }

    /// Moves a file without changing its bytes.
    pub fn rename(&self, from: &str, to: &str) -> io::Result<&Self> {
        let target = self.path.join(to);
        if let Some(parent) = target.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::rename(self.path.join(from), target)?;
        Ok(self)
    }

    /// Commits the whole work tree and returns the commit id. Dates are
    /// ISO 8601 with an offset, e.g. `2022-11-20T09:30:00Z`.
    pub fn commit(&self, message: &str, author_date: &str, committer_date: &str) -> io::Result<String> {
        self.git(&["add", "-A"])?;
        self.git_dated(&["commit", "-q", "--allow-empty", "-m", message], author_date, committer_date)?;
        self.git(&["rev-parse", "HEAD"])
    }

    /// [`commit`](Self::commit) with one date for author and committer.
    pub fn commit_at(&self, message: &str, date: &str) -> io::Result<String> {
        self.commit(message, date, date)
    }

    /// Merges `branch` into the current branch with a merge commit.
    pub fn merge(&self, branch: &str, message: &str, date: &str) -> io::Result<String> {
        self.git_dated(&["merge", "-q", "--no-ff", "-m", message, branch], date, date)?;
        self.git(&["rev-parse", "HEAD"])
    }

    pub fn checkout(&self, rev: &str) -> io::Result<&Self> {
        self.git(&["checkout", "-q", rev])?;
        Ok(self)
    }

    pub fn checkout_new(&self, branch: &str) -> io::Result<&Self> {
        self.git(&["checkout", "-q", "-b", branch])?;
        Ok(self)
    }

    pub fn tag(&self, name: &str) -> io::Result<&Self> {
        self.git(&["tag", name])?;
        Ok(self)
    }
}
