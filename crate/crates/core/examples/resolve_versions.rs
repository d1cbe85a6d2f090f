//! Resolve `typescript` dependency ranges to the `major.minor` floor.
//!
//! ```text
//! cargo run --example resolve_versions -- '^4.9.3' '>=4.2 <5' latest
//! ```

use tsadopt::version::{parse_manifest, resolve_range};

const RANGES: &[&str] = &["^4.9.3", "~4.7.0", "4.5.0-beta", ">=4.2.0 <5", "4.x", "*", "latest", "<5", "npm:typescript@4.8", "git+https://example.com/ts.git"];

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ranges: Vec<&str> = if args.is_empty() { RANGES.to_vec() } else { args.iter().map(String::as_str).collect() };
    for r in ranges {
        println!("{r:<34} {}", resolve_range(r));
    }

    // devDependencies is consulted before dependencies.
    let manifest = r#"{"dependencies":{"typescript":"^4.1.2"},"devDependencies":{"typescript":"~4.8.4"}}"#;
    let range = parse_manifest(manifest).unwrap_or_default();
    println!("\n{manifest}\n  -> {range} -> {}", resolve_range(&range));
}
