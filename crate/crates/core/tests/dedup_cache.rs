mod common;

use common::build_dedup_fixture;
use tsadopt::pipeline::run_pipeline;
use tsadopt::report::report_digests;

#[test]
fn hundred_identical_commits_parse_once_and_warm_rerun_parses_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let config = build_dedup_fixture(dir.path(), 100).unwrap();

    let cold = run_pipeline(&config).unwrap();
    assert_eq!(cold.scan.parses, 1);
    let cold_digests = report_digests(&config.output_dir).unwrap();

    let warm = run_pipeline(&config).unwrap();
    assert_eq!(warm.scan.parses, 0);
    assert_eq!(warm.scan.cache_hits, 1);
    assert_eq!(report_digests(&config.output_dir).unwrap(), cold_digests);

    let first_use = std::fs::read_to_string(config.output_dir.join("first_use.csv")).unwrap();
    assert_eq!(first_use, "repo,subject,first_use_iso,offset_days\ndup/same,f0,2022-01-01T12:00:00Z,-318\n");
}

#[test]
fn cache_directory_can_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = build_dedup_fixture(dir.path(), 3).unwrap();
    let other = dir.path().join("elsewhere");
    std::env::set_var(tsadopt::config::CACHE_DIR_ENV, &other);
    config.apply_env();
    std::env::remove_var(tsadopt::config::CACHE_DIR_ENV);
    assert_eq!(config.cache_dir, other);
    run_pipeline(&config).unwrap();
    assert!(other.join("detections.jsonl").is_file());
}
