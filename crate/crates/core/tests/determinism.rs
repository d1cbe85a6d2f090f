mod common;

use common::{build_study_fixture, read_reports};
use tsadopt::pipeline::run_pipeline;

#[test]
fn parallelism_does_not_change_report_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let fx = build_study_fixture(dir.path()).unwrap();

    let mut serial = fx.config.clone();
    serial.parallelism = 1;
    serial.output_dir = dir.path().join("out-1");
    serial.cache_dir = dir.path().join("cache-1");
    let mut parallel = fx.config.clone();
    parallel.parallelism = 8;
    parallel.output_dir = dir.path().join("out-8");
    parallel.cache_dir = dir.path().join("cache-8");

    run_pipeline(&serial).unwrap();
    run_pipeline(&parallel).unwrap();
    let a = read_reports(&serial.output_dir);
    let b = read_reports(&parallel.output_dir);
    assert_eq!(a.len(), 6);
    for (name, bytes) in &a {
        assert_eq!(bytes, &b[name], "{name} differs between parallelism 1 and 8");
    }
}
