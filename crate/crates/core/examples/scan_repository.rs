//! Mine one local git repository: commits in the window, distinct `.ts`
//! contents with their features, and root manifest versions.
//!
//! ```text
//! cargo run --example scan_repository -- path/to/clone
//! cargo run --example scan_repository                  # scripted demo repo
//! ```

use std::path::PathBuf;

use tsadopt::miner::{PathFilter, RepoRef, Window};
use tsadopt::pipeline::scan_repo;
use tsadopt::synth::ScriptedRepo;
use tsadopt::DetectionCache;

fn demo_repo(dir: &std::path::Path) -> std::io::Result<PathBuf> {
    let r = ScriptedRepo::init(dir.join("demo"))?;
    r.write("package.json", r#"{"devDependencies":{"typescript":"^4.4.2"}}"#)?
        .write("src/a.ts", "declare let a: number | undefined;\na ??= 1;\n")?;
    r.commit_at("start", "2021-09-01T10:00:00Z")?;
    r.write("src/b.ts", "export class B { static { console.log('ready'); } }\n")?
        .write("package.json", r#"{"devDependencies":{"typescript":"~4.7.4"}}"#)?;
    r.commit("static block", "2022-06-01T10:00:00+02:00", "2022-06-02T00:00:00Z")?;
    Ok(r.path().to_path_buf())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tmp = tempfile::tempdir()?;
    let path = match std::env::args_os().nth(1) {
        Some(p) => PathBuf::from(p),
        None => demo_repo(tmp.path())?,
    };
    let name = path.file_name().map_or("repo".into(), |n| n.to_string_lossy().into_owned());
    let repo = RepoRef { name, clone_url: String::new(), stars: 0, local_path: path };
    let scan = scan_repo(&repo, &Window::study(), PathFilter::default(), &DetectionCache::in_memory())?;

    println!("{}: {} commits, {} distinct .ts contents, {} unparsed", scan.repo, scan.commits, scan.unique_blobs, scan.unparsed_blobs);
    println!("outside window {}, bad dates {}, skipped commits {}", scan.outside_window, scan.unparseable_dates, scan.skipped_commits);
    for (first_seen, set) in &scan.observations.blobs {
        println!("  {}  {set}", first_seen.format("%Y-%m-%d"));
    }
    for v in &scan.observations.versions {
        println!("  typescript {} since {}", v.version, v.earliest_timestamp.format("%Y-%m-%d"));
    }
    Ok(())
}
