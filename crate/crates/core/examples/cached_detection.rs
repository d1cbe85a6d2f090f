//! Detection results are keyed by content digest and persisted, so each
//! distinct file is parsed once across commits, repositories and runs.

use tsadopt::{ContentHash, DetectionCache};

fn main() -> std::io::Result<()> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("detections.jsonl");
    let files: [&[u8]; 3] = [b"let a = b satisfies C;\n", b"export type T = `x${string}`;\n", b"let a = b satisfies C;\n"];

    let cache = DetectionCache::open(&path);
    for src in files {
        let set = cache.detect_cached(&ContentHash::of(src), src);
        println!("{:<8} {}", set.to_string(), String::from_utf8_lossy(src).trim());
    }
    println!("first run: {} parses, {} hits", cache.parse_count(), cache.hit_count());
    cache.flush()?;

    let reopened = DetectionCache::open(&path);
    for src in files {
        reopened.detect_cached(&ContentHash::of(src), src);
    }
    println!("second run: {} parses, {} hits, {} entries on disk", reopened.parse_count(), reopened.hit_count(), reopened.len());
    Ok(())
}
