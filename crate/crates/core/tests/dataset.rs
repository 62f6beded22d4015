mod common;

use std::collections::HashSet;

use karel_core::gen::{build_dataset, generate_dataset, split_file_name};
use karel_core::harness::dataset_stats;
use karel_core::io::{read_dataset, write_dataset};
use karel_core::{GenConfig, Split, SplitPlan, DEFAULT_STEP_LIMIT};
use sha2::{Digest, Sha256};

fn plan(train: usize, valid: usize, test: usize) -> Vec<SplitPlan> {
    vec![
        SplitPlan {
            split: Split::Train,
            tasks: train,
            examples_per_task: 6,
        },
        SplitPlan {
            split: Split::Validation,
            tasks: valid,
            examples_per_task: 6,
        },
        SplitPlan {
            split: Split::Test,
            tasks: test,
            examples_per_task: 11,
        },
    ]
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Frozen digest of the seed-2024 dataset below. Any change to sampling,
/// execution, or serialization moves it.
const GOLDEN_SHA256: &str = "94f99b92c468eb7c5112725a0194da3ea4a7230d9de020cdb3d32ca353f44e93";

#[test]
fn golden_dataset_digest() {
    let tasks = build_dataset(&GenConfig::with_seed(2024), &plan(20, 5, 5), Some(2)).unwrap();
    let text = write_dataset(&tasks);
    assert_eq!(hex(&Sha256::digest(text.as_bytes())), GOLDEN_SHA256);
}

#[test]
fn files_are_byte_identical_across_runs_and_workers() {
    let config = GenConfig::with_seed(7);
    let p = plan(30, 10, 10);
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    generate_dataset(&config, &p, dirs[0].path(), Some(1)).unwrap();
    generate_dataset(&config, &p, dirs[1].path(), Some(1)).unwrap();
    generate_dataset(&config, &p, dirs[2].path(), Some(4)).unwrap();
    for split in Split::ALL {
        let read = |i: usize| std::fs::read(dirs[i].path().join(split_file_name(split))).unwrap();
        assert_eq!(read(0), read(1), "{split}: same seed");
        assert_eq!(read(0), read(2), "{split}: different worker count");
    }
    let other = build_dataset(&GenConfig::with_seed(8), &p, None).unwrap();
    let first = std::fs::read_to_string(dirs[0].path().join("train.karelds")).unwrap();
    assert_ne!(write_dataset(&other[..30]), first);
}

#[test]
fn dataset_is_unique_and_valid() {
    let tasks = build_dataset(&GenConfig::with_seed(9), &plan(200, 25, 25), None).unwrap();
    assert_eq!(tasks.len(), 250);
    let mut programs = HashSet::new();
    let mut inputs = HashSet::new();
    for (i, t) in tasks.iter().enumerate() {
        assert!(programs.insert(t.program_source.clone()));
        for ex in &t.examples {
            assert!(inputs.insert(ex.input.clone()));
        }
        let n = if t.split == Split::Test { 11 } else { 6 };
        t.verify(Some(n), DEFAULT_STEP_LIMIT).unwrap();
        let local = match t.split {
            Split::Train => i,
            Split::Validation => i - 200,
            Split::Test => i - 225,
        };
        assert_eq!(t.task_id, format!("{}-{local:06}", t.split));
    }
    let st = dataset_stats(&tasks, DEFAULT_STEP_LIMIT);
    assert_eq!(st.uniqueness_violations(), 0);
    assert_eq!(st.invalid_tasks, 0);
    assert_eq!(st.examples, 200 * 6 + 25 * 6 + 25 * 11);
}

#[test]
fn serialization_round_trips() {
    let tasks = build_dataset(&GenConfig::with_seed(10), &plan(15, 0, 5), None).unwrap();
    let text = write_dataset(&tasks);
    assert_eq!(text.lines().count(), 20);
    let back = read_dataset(&text).unwrap();
    assert_eq!(back, tasks);
    assert_eq!(write_dataset(&back), text);
}

#[test]
fn corrupt_lines_report_their_position() {
    let tasks = build_dataset(&GenConfig::with_seed(11), &plan(3, 0, 0), None).unwrap();
    let mut lines: Vec<String> = write_dataset(&tasks).lines().map(String::from).collect();
    lines[1] = lines[1].replace("\"program\"", "\"programme\"");
    let err = read_dataset(&lines.join("\n")).unwrap_err();
    assert_eq!(err.line, 2);
}
