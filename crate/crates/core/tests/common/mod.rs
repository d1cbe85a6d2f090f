//! Fixtures shared by the integration tests and the acceptance target.
#![allow(dead_code)]

pub mod props;

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use tsadopt::config::RunConfig;
use tsadopt::miner::RepoRef;
use tsadopt::synth::ScriptedRepo;
use tsadopt::{FeatureId, FeatureSet};

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_dir() -> PathBuf {
    crate_dir().join("tests/golden/study")
}

// ---- labeled snippet corpus ----

#[derive(Deserialize)]
struct Manifest {
    labeler: String,
    snippets: BTreeMap<String, Vec<FeatureId>>,
}

/// Whether a snippet was written to exhibit its feature or to trip up a
/// detector that matches too eagerly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Positive,
    Negative,
}

pub struct Snippet {
    pub file: String,
    pub feature: FeatureId,
    pub role: Role,
    pub source: String,
    /// Labels from the reference compiler.
    pub expected: FeatureSet,
}

pub struct Corpus {
    pub labeler: String,
    pub snippets: Vec<Snippet>,
}

/// Loads `tests/corpus`. File names look like `f07_neg_03.ts`.
pub fn load_corpus() -> Corpus {
    let dir = crate_dir().join("tests/corpus");
    let manifest: Manifest =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).expect("corpus manifest")).expect("manifest json");
    let mut snippets = Vec::new();
    for entry in fs::read_dir(dir.join("snippets")).expect("snippet dir") {
        let path = entry.unwrap().path();
        let file = path.file_name().unwrap().to_string_lossy().into_owned();
        let mut parts = file.trim_end_matches(".ts").split('_');
        let feature: FeatureId = parts.next().unwrap().trim_start_matches('f').parse::<usize>().ok().and_then(FeatureId::from_index).unwrap_or_else(|| panic!("bad snippet name {file}"));
        let role = match parts.next() {
            Some("pos") => Role::Positive,
            Some("neg") => Role::Negative,
            _ => panic!("bad snippet name {file}"),
        };
        let labels = manifest.snippets.get(&file).unwrap_or_else(|| panic!("{file} is not labeled"));
        snippets.push(Snippet {
            feature,
            role,
            source: fs::read_to_string(&path).unwrap(),
            expected: FeatureSet::from_features(labels.iter().copied()),
            file,
        });
    }
    snippets.sort_by(|a, b| a.file.cmp(&b.file));
    assert_eq!(snippets.len(), manifest.snippets.len(), "manifest lists files that are missing");
    Corpus { labeler: manifest.labeler, snippets }
}

// ---- synthetic repositories ----

/// Everything a pipeline run over the study fixture needs.
pub struct StudyFixture {
    pub root: PathBuf,
    pub config: RunConfig,
}

fn repo_line(name: &str) -> String {
    format!("{{\"name\":\"{name}\",\"clone_url\":\"https://example.com/{name}.git\",\"stars\":1}}\n")
}

fn workspace_repo(workspace: &Path, name: &str) -> io::Result<ScriptedRepo> {
    ScriptedRepo::init(workspace.join(RepoRef::dir_name(name)))
}

/// Three scripted repositories plus an empty one and one that was never
/// cloned. Expected outputs are in `tests/golden/study`.
pub fn build_study_fixture(root: &Path) -> io::Result<StudyFixture> {
    let workspace = root.join("workspace");

    // acme/alpha: a divergent feature branch merged later, and a renamed
    // but identical file.
    let a = workspace_repo(&workspace, "acme/alpha")?;
    a.write("package.json", r#"{"name":"alpha","devDependencies":{"typescript":"~4.7.4"}}"#)?
        .write("src/a.ts", "let x = 1;\nexport { x };\n")?
        .write("src/t.ts", "export type Pair = [first: string, second: number];\n")?;
    a.commit_at("initial", "2022-10-01T10:00:00Z")?;
    a.checkout_new("feature/x")?
        .write("src/o.ts", "class A { m() {} }\nexport class B extends A { override m() {} }\n")?
        .write("src/n.ts", "declare let a: number | undefined;\na ??= 1;\n")?;
    a.commit("override and ??=", "2022-11-08T12:00:00Z", "2022-11-10T08:00:00Z")?;
    a.checkout("main")?
        .write("src/s.ts", "export const conf = { port: 80 } satisfies Record<string, number>;\n")?
        .write("package.json", r#"{"name":"alpha","devDependencies":{"typescript":"^4.9.3"}}"#)?;
    a.commit_at("satisfies", "2022-11-20T09:30:00Z")?;
    a.merge("feature/x", "merge feature/x", "2022-12-05T00:00:00Z")?;
    a.rename("src/t.ts", "lib/tuple.ts")?;
    a.commit_at("move tuple types", "2022-12-06T00:00:00Z")?;

    // beta/bravo: a commit before the window, offsets in both directions,
    // a pre-release adoption of 4.9, mixed time zones, .tsx and .d.ts.
    let b = workspace_repo(&workspace, "beta/bravo")?;
    b.write("package.json", r#"{"devDependencies":{"typescript":"^3.9.7"}}"#)?
        .write("src/old.ts", "declare let x: boolean, y: boolean;\nx ||= y;\n")?;
    b.commit_at("before the window", "2019-12-31T23:59:59Z")?;
    b.write("src/ev.ts", "export type Ev = `on${string}`;\n")?
        .write("package.json", r#"{"devDependencies":{"typescript":"^4.1.2"}}"#)?;
    b.commit_at("template literal types", "2021-03-01T12:00:00Z")?;
    b.write("src/st.ts", "export class S { static { S.ready = true; } static ready = false; }\n")?
        .write("src/view.tsx", "export const v = {} satisfies object;\n")?;
    b.commit("static block", "2021-06-01T23:30:00-05:00", "2021-06-01T12:00:00Z")?;
    b.write("src/pre.ts", "export const p = [1, 2] satisfies number[];\n")?
        .write("package.json", r#"{"devDependencies":{"typescript":"4.9.1-beta"}}"#)?;
    b.commit("try the beta", "2022-10-20T08:00:00+02:00", "2022-10-19T23:00:00Z")?;
    b.write("types/k.d.ts", "export declare class K { accessor v: number; }\n")?;
    b.commit_at("declarations", "2022-12-20T00:00:00Z")?;
    b.write("src/late.ts", "export interface Box<in out T> { v: T }\n")?;
    b.commit_at("after the window", "2023-01-05T00:00:00Z")?;

    // gamma/charlie: monorepo without a root manifest, an upper-case
    // extension, and a tag on a commit no branch contains.
    let c = workspace_repo(&workspace, "gamma/charlie")?;
    c.write("packages/app/package.json", r#"{"devDependencies":{"typescript":"^4.5.2"}}"#)?
        .write("packages/app/src/i.ts", "import { type T } from './t';\nexport const t: T | undefined = undefined;\n")?
        .write("packages/app/src/u.ts", "import type { X } from 'y';\nexport type { X };\n")?
        .write("packages/app/src/Legacy.TS", "declare let a: number;\na &&= 2;\n")?;
    let base = c.commit_at("monorepo", "2022-01-10T15:00:00Z")?;
    c.checkout(&base)?
        .write("packages/app/src/data.ts", "import data from './d.json' assert { type: 'json' };\nexport { data };\n")?;
    c.commit_at("experiment", "2022-02-01T00:00:00Z")?;
    c.tag("experiment")?.checkout("main")?;
    c.write("packages/app/src/m.ts", "export type Public<T> = { [K in keyof T as Exclude<K, '_secret'>]: T[K] };\n")?;
    c.commit_at("getters", "2022-03-01T00:00:00Z")?;
    c.write("packages/lib/c.ts", "export type Ctor = abstract new () => object;\n")?;
    c.commit_at("ctor", "2022-03-01T00:00:00Z")?;

    workspace_repo(&workspace, "empty/none")?;

    let list = ["acme/alpha", "beta/bravo", "gamma/charlie", "empty/none", "missing/repo"];
    let repo_list = root.join("repos.jsonl");
    fs::write(&repo_list, list.iter().map(|n| repo_line(n)).collect::<String>())?;

    let mut config = RunConfig::rooted_at(root);
    config.repo_list = repo_list;
    config.parallelism = 2;
    Ok(StudyFixture { root: root.to_path_buf(), config })
}

/// One repository where the same file content sits in `commits` commits,
/// under a different path each time.
pub fn build_dedup_fixture(root: &Path, commits: usize) -> io::Result<RunConfig> {
    let workspace = root.join("workspace");
    let r = workspace_repo(&workspace, "dup/same")?;
    let content = "export const conf = { retries: 3 } satisfies { retries: number };\n";
    for i in 0..commits {
        r.write(&format!("copies/c{i:03}.ts"), content)?
            .write("notes.txt", format!("revision {i}\n"))?;
        let day = chrono::NaiveDate::from_ymd_opt(2022, 1, 1).unwrap() + chrono::Days::new(i as u64);
        r.commit_at(&format!("copy {i}"), &format!("{day}T12:00:00Z"))?;
    }
    let repo_list = root.join("repos.jsonl");
    fs::write(&repo_list, repo_line("dup/same"))?;
    let mut config = RunConfig::rooted_at(root);
    config.repo_list = repo_list;
    config.parallelism = 1;
    Ok(config)
}

/// Byte content of each report file.
pub fn read_reports(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    tsadopt::report::REPORT_FILES.iter().map(|n| (n.to_string(), fs::read(dir.join(n)).unwrap())).collect()
}
