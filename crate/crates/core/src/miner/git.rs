//! Thin wrappers around the `git` executable.

use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use super::MineError;

pub(crate) fn command(repo: &Path) -> Command {
    let mut cmd = Command::new("git");
    cmd.arg("-C").arg(repo);
    // Keep user configuration from changing output formats.
    cmd.env("GIT_CONFIG_NOSYSTEM", "1").env("GIT_TERMINAL_PROMPT", "0").env("LC_ALL", "C");
    cmd
}

/// Runs git to completion and returns stdout.
pub(crate) fn output(repo: &Path, args: &[&str]) -> Result<Vec<u8>, MineError> {
    let out = command(repo)
        .args(args)
        .stdin(Stdio::null())
        .output()
        .map_err(MineError::Spawn)?;
    if !out.status.success() {
        return Err(MineError::Git {
            args: args.join(" "),
            stderr: String::from_utf8_lossy(&out.stderr).trim().to_string(),
        });
    }
    Ok(out.stdout)
}

pub(crate) fn is_repository(path: &Path) -> bool {
    path.is_dir()
        && command(path)
            .args(["rev-parse", "--git-dir"])
            .stdin(Stdio::null())
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .is_ok_and(|s| s.success())
}

/// Raw object id length in bytes for the repository's hash algorithm.
pub(crate) fn object_id_len(repo: &Path) -> usize {
    match output(repo, &["rev-parse", "--show-object-format"]) {
        Ok(out) if out.trim_ascii() == b"sha256" => 32,
        _ => 20,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Object {
    pub oid: String,
    pub kind: String,
    pub data: Vec<u8>,
}

/// A long-lived `git cat-file --batch` process.
pub(crate) struct CatFile {
    child: Child,
    stdin: Option<BufWriter<ChildStdin>>,
    stdout: BufReader<ChildStdout>,
}

impl CatFile {
    pub fn spawn(repo: &Path) -> Result<CatFile, MineError> {
        let mut child = command(repo)
            .args(["cat-file", "--batch"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(MineError::Spawn)?;
        let stdin = child.stdin.take().map(BufWriter::new);
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        Ok(CatFile { child, stdin, stdout })
    }

    /// Reads the object named by `rev` (an object id or an expression such
    /// as `<commit>^{tree}` / `<commit>:package.json`). `None` if missing.
    pub fn get(&mut self, rev: &str) -> io::Result<Option<Object>> {
        if rev.contains('\n') {
            return Ok(None);
        }
        let stdin = self
            .stdin
            .as_mut()
            .ok_or_else(|| io::Error::new(io::ErrorKind::BrokenPipe, "cat-file closed"))?;
        writeln!(stdin, "{rev}")?;
        stdin.flush()?;

        let mut header = String::new();
        if self.stdout.read_line(&mut header)? == 0 {
            return Err(io::Error::new(io::ErrorKind::UnexpectedEof, "cat-file exited"));
        }
        let header = header.trim_end_matches('\n');
        let mut parts = header.split(' ');
        let (Some(oid), Some(kind), Some(size), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            // "<rev> missing" or "<rev> ambiguous"
            return Ok(None);
        };
        let size: usize = size
            .parse()
            .map_err(|_| io::Error::new(io::ErrorKind::InvalidData, format!("bad cat-file header `{header}`")))?;
        let mut data = vec![0; size];
        self.stdout.read_exact(&mut data)?;
        let mut newline = [0u8; 1];
        self.stdout.read_exact(&mut newline)?;
        Ok(Some(Object { oid: oid.to_string(), kind: kind.to_string(), data }))
    }
}

impl Drop for CatFile {
    fn drop(&mut self) {
        drop(self.stdin.take());
        let _ = self.child.wait();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EntryKind {
    Blob,
    Tree,
    Symlink,
    Submodule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TreeEntry<'a> {
    pub kind: EntryKind,
    pub name: &'a [u8],
    pub oid: String,
}

/// Parses a binary tree object.
pub(crate) fn parse_tree(data: &[u8], oid_len: usize) -> io::Result<Vec<TreeEntry<'_>>> {
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    let mut entries = Vec::new();
    let mut rest = data;
    while !rest.is_empty() {
        let space = rest.iter().position(|&b| b == b' ').ok_or_else(|| bad("tree entry without mode"))?;
        let mode = &rest[..space];
        rest = &rest[space + 1..];
        let nul = rest.iter().position(|&b| b == 0).ok_or_else(|| bad("tree entry without name"))?;
        let name = &rest[..nul];
        rest = &rest[nul + 1..];
        if rest.len() < oid_len {
            return Err(bad("truncated tree entry"));
        }
        let oid = hex::encode(&rest[..oid_len]);
        rest = &rest[oid_len..];
        let kind = match mode {
            b"40000" | b"040000" => EntryKind::Tree,
            b"120000" => EntryKind::Symlink,
            b"160000" => EntryKind::Submodule,
            _ => EntryKind::Blob,
        };
        entries.push(TreeEntry { kind, name, oid });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tree_entries() {
        let mut data = Vec::new();
        data.extend_from_slice(b"100644 a.ts\0");
        data.extend_from_slice(&[0x11; 20]);
        data.extend_from_slice(b"40000 src\0");
        data.extend_from_slice(&[0x22; 20]);
        data.extend_from_slice(b"120000 link.ts\0");
        data.extend_from_slice(&[0x33; 20]);
        data.extend_from_slice(b"160000 vendor\0");
        data.extend_from_slice(&[0x44; 20]);
        let entries = parse_tree(&data, 20).unwrap();
        let kinds: Vec<_> = entries.iter().map(|e| (e.kind, e.name)).collect();
        assert_eq!(
            kinds,
            [
                (EntryKind::Blob, &b"a.ts"[..]),
                (EntryKind::Tree, b"src"),
                (EntryKind::Symlink, b"link.ts"),
                (EntryKind::Submodule, b"vendor"),
            ]
        );
        assert_eq!(entries[0].oid, "11".repeat(20));
    }

    #[test]
    fn rejects_truncated_tree() {
        assert!(parse_tree(b"100644 a.ts\0\x11\x11", 20).is_err());
        assert!(parse_tree(b"100644", 20).is_err());
    }
}
