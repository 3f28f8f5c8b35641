use std::fs;

use droppush_core::harness::output::{write_alpha, write_file, write_moments, write_summary, SUMMARY_HEADER};
use droppush_core::harness::{run_experiment_with, Execution, ExperimentConfig};
use droppush_core::ring::CostMode;
use droppush_core::rng::mix64;

fn files_for(config: &ExperimentConfig, exec: Execution, dir: &std::path::Path, tag: &str) -> Vec<u8> {
    let result = run_experiment_with(config, exec).unwrap();
    let summary = dir.join(format!("{tag}-summary.csv"));
    let alpha = dir.join(format!("{tag}-alpha.csv"));
    let moments = dir.join(format!("{tag}-moments.csv"));
    write_file(&summary, |w| write_summary(w, &result.replications)).unwrap();
    write_file(&alpha, |w| write_alpha(w, &result.alpha_rows()?)).unwrap();
    write_file(&moments, |w| write_moments(w, &result.moment_rows(&[1, 2, 3])?)).unwrap();
    [summary, alpha, moments]
        .iter()
        .flat_map(|p| fs::read(p).unwrap())
        .collect()
}

#[test]
fn files_are_identical_across_schedules() {
    let dir = std::env::temp_dir().join(format!("droppush-determinism-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    for mode in [CostMode::ExactWalk, CostMode::ExpectedCost] {
        let config = ExperimentConfig::new(500, 24, mode, 77)
            .unwrap()
            .with_alpha_grid(vec![0.1, 0.5, 0.9])
            .unwrap();
        let reference = files_for(&config, Execution::Sequential, &dir, "seq");
        for threads in [None, Some(1), Some(3), Some(8)] {
            let bytes = files_for(&config, Execution::Parallel { threads }, &dir, "par");
            assert_eq!(bytes, reference, "{mode:?} with {threads:?} workers");
        }
        let text = String::from_utf8(reference).unwrap();
        assert!(text.starts_with(SUMMARY_HEADER));
        assert!(!text.contains('\r'));
    }
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn replications_do_not_depend_on_batch_size() {
    let small = ExperimentConfig::new(200, 5, CostMode::ExactWalk, 3).unwrap();
    let large = ExperimentConfig::new(200, 40, CostMode::ExactWalk, 3).unwrap();
    let a = run_experiment_with(&small, Execution::default()).unwrap();
    let b = run_experiment_with(&large, Execution::Sequential).unwrap();
    assert_eq!(a.replications[..], b.replications[..5]);
    for r in &b.replications {
        assert_eq!(r.seed, mix64(3, r.rep as u64));
    }
}

#[test]
fn different_seeds_give_different_runs() {
    let a = run_experiment_with(&ExperimentConfig::new(200, 4, CostMode::ExactWalk, 1).unwrap(), Execution::default());
    let b = run_experiment_with(&ExperimentConfig::new(200, 4, CostMode::ExactWalk, 2).unwrap(), Execution::default());
    assert_ne!(a.unwrap().replications, b.unwrap().replications);
}
