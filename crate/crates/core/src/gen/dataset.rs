//! Whole-dataset generation with global uniqueness.
//!
//! Candidate task `i` of a split is drawn from its own ChaCha stream derived
//! from `(seed, split, i)`, so candidates can be produced in parallel. They
//! are then accepted strictly in index order, skipping any candidate whose
//! program text or one of whose input grids already appeared anywhere in the
//! dataset. The output depends only on the config, never on worker count.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{generate_task, GenConfig, GenError, Split, TaskRecord};
use crate::io::write_dataset;
use crate::world::World;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitPlan {
    pub split: Split,
    pub tasks: usize,
    pub examples_per_task: usize,
}

fn candidate_rng(seed: u64, split: Split, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((split as u64) << 56) | index);
    rng
}

fn candidates(
    config: &GenConfig,
    split: Split,
    range: std::ops::Range<u64>,
    pool: Option<&rayon::ThreadPool>,
) -> Result<Vec<TaskRecord>, GenError> {
    let work = || {
        range
            .into_par_iter()
            .map(|i| generate_task(&mut candidate_rng(config.seed, split, i), config, split, String::new()))
            .collect::<Result<Vec<_>, _>>()
    };
    match pool {
        Some(pool) => pool.install(work),
        None => work(),
    }
}

/// Builds every split of the plan in memory. `jobs` fixes the worker count;
/// `None` uses the global thread pool.
pub fn build_dataset(config: &GenConfig, plan: &[SplitPlan], jobs: Option<usize>) -> Result<Vec<TaskRecord>, GenError> {
    config.validate()?;
    if plan.iter().map(|p| p.tasks).sum::<usize>() == 0 {
        return Err(GenError::InvalidConfig("dataset must contain at least one task".into()));
    }
    let pool = jobs
        .map(|n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| GenError::InvalidConfig(format!("thread pool: {e}")))
        })
        .transpose()?;

    let mut programs: HashSet<String> = HashSet::new();
    let mut inputs: HashSet<World> = HashSet::new();
    let mut out = Vec::new();
    for sp in plan {
        let split_config = GenConfig {
            examples_per_task: sp.examples_per_task,
            ..config.clone()
        };
        split_config.validate()?;
        let mut accepted = 0;
        let mut next: u64 = 0;
        while accepted < sp.tasks {
            let need = sp.tasks - accepted;
            let batch = (need + need / 8 + 4) as u64;
            for mut task in candidates(&split_config, sp.split, next..next + batch, pool.as_ref())? {
                if accepted == sp.tasks {
                    break;
                }
                if programs.contains(&task.program_source) || task.examples.iter().any(|e| inputs.contains(&e.input)) {
                    continue;
                }
                programs.insert(task.program_source.clone());
                inputs.extend(task.examples.iter().map(|e| e.input.clone()));
                task.task_id = format!("{}-{:06}", sp.split, accepted);
                out.push(task);
                accepted += 1;
            }
            next += batch;
        }
    }
    Ok(out)
}

pub fn split_file_name(split: Split) -> String {
    format!("{split}.karelds")
}

/// Generates the dataset and writes one `<split>.karelds` file per split
/// with a nonzero task count. Returns the written paths.
pub fn generate_dataset(
    config: &GenConfig,
    plan: &[SplitPlan],
    out_dir: &Path,
    jobs: Option<usize>,
) -> Result<Vec<PathBuf>, GenError> {
    let tasks = build_dataset(config, plan, jobs)?;
    let io_err = |path: &Path| {
        let path = path.display().to_string();
        move |source| GenError::Io { path, source }
    };
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut written = Vec::new();
    for sp in plan.iter().filter(|p| p.tasks > 0) {
        let records: Vec<TaskRecord> = tasks.iter().filter(|t| t.split == sp.split).cloned().collect();
        let path = out_dir.join(split_file_name(sp.split));
        std::fs::write(&path, write_dataset(&records)).map_err(io_err(&path))?;
        written.push(path);
    }
    Ok(written)
}
