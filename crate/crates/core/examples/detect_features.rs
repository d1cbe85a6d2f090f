//! Detect TypeScript features in source text.
//!
//! ```text
//! cargo run --example detect_features                 # built-in samples
//! cargo run --example detect_features -- a.ts b.ts    # one JSON line per file
//! ```

use tsadopt::detect::analyze;
use tsadopt::{detect_features, FeatureId};

const SAMPLES: &[&str] = &[
    "const cfg = { port: 80 } satisfies Config;",
    "let satisfies = 1; satisfies + 2;",
    "class Counter { static { Counter.init(); } accessor count = 0; }",
    "type Getters<T> = { [K in keyof T as `get${Capitalize<string & K>}`]: () => T[K] };",
    "import { type Props, render } from './view';",
    "// a ||= b is only mentioned in a comment",
    "function broken( {",
];

fn main() {
    let files: Vec<String> = std::env::args().skip(1).collect();
    if files.is_empty() {
        for src in SAMPLES {
            let set = detect_features(src);
            println!("{:<16} {src}", set.to_string());
            for f in set.iter() {
                println!("    {} {}", f.code(), f.display_name());
            }
        }
        return;
    }
    for file in files {
        let bytes = match std::fs::read(&file) {
            Ok(b) => b,
            Err(e) => {
                eprintln!("{file}: {e}");
                continue;
            }
        };
        let analysis = analyze(&String::from_utf8_lossy(&bytes));
        let set = analysis.features;
        let features: Vec<&str> = set.iter().map(FeatureId::code).collect();
        let line = serde_json::json!({
            "file": file,
            "features": features,
            "parsed_ok": set.parsed_ok(),
            "recovered": analysis.recovered_errors,
            "first_recovery_offset": analysis.first_recovery_offset,
        });
        println!("{line}");
    }
}
