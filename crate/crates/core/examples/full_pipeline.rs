//! Builds a small set of scripted repositories, runs the whole pipeline
//! over them and prints the reports.
//!
//! ```text
//! cargo run --example full_pipeline [OUTPUT_DIR]
//! ```

use std::fs;
use std::path::PathBuf;

use tsadopt::config::RunConfig;
use tsadopt::pipeline::run_pipeline;
use tsadopt::report::REPORT_FILES;
use tsadopt::synth::ScriptedRepo;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = match std::env::args_os().nth(1) {
        Some(dir) => PathBuf::from(dir),
        None => std::env::temp_dir().join(format!("tsadopt-example-{}", std::process::id())),
    };
    if root.exists() {
        fs::remove_dir_all(&root)?;
    }
    let workspace = root.join("workspace");

    let web = ScriptedRepo::init(workspace.join("example__web"))?;
    web.write("package.json", r#"{"devDependencies":{"typescript":"~4.8.4"}}"#)?
        .write("src/config.ts", "export const port = 8080;\n")?;
    web.commit_at("start", "2022-09-01T10:00:00Z")?;
    web.write("src/config.ts", "export const conf = { port: 8080 } satisfies { port: number };\n")?
        .write("package.json", r#"{"devDependencies":{"typescript":"^4.9.3"}}"#)?;
    web.commit_at("use satisfies", "2022-11-25T16:00:00Z")?;

    let lib = ScriptedRepo::init(workspace.join("example__lib"))?;
    lib.write("package.json", r#"{"devDependencies":{"typescript":"4.1.0-beta"}}"#)?
        .write("src/events.ts", "export type Handler = `on${Capitalize<string>}`;\n")?;
    lib.commit_at("events", "2020-10-01T08:00:00Z")?;

    let list = root.join("repos.jsonl");
    fs::write(
        &list,
        concat!(
            "{\"name\":\"example/web\",\"clone_url\":\"https://example.com/web.git\",\"stars\":10}\n",
            "{\"name\":\"example/lib\",\"clone_url\":\"https://example.com/lib.git\",\"stars\":5}\n",
        ),
    )?;

    let mut config = RunConfig::rooted_at(&root);
    config.repo_list = list;
    let outcome = run_pipeline(&config)?;
    println!("parses: {}, cache hits: {}", outcome.scan.parses, outcome.scan.cache_hits);
    for name in REPORT_FILES {
        println!("==> {name}");
        print!("{}", fs::read_to_string(config.output_dir.join(name))?);
    }
    Ok(())
}
