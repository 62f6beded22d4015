use std::collections::HashSet;

use rand::Rng;

use super::{sample_program, sample_world, Example, GenConfig, GenError, Split, TaskRecord};
use crate::exec::{execute, ExecutionOutcome};
use crate::parse::pretty_print;
use crate::program::{Action, Program};
use crate::world::World;

/// One draw of the rejection loop: `None` if the run crashed, timed out, or
/// left the agent where it started.
fn try_example<R: Rng + ?Sized>(program: &Program, rng: &mut R, config: &GenConfig) -> Option<(World, World)> {
    let input = sample_world(rng, config);
    match execute(program, &input, config.step_limit) {
        ExecutionOutcome::Success { world, .. } if world.agent() != input.agent() => Some((input, world)),
        _ => None,
    }
}

/// Samples input worlds until `program` yields an accepted example.
pub fn generate_example<R: Rng + ?Sized>(
    program: &Program,
    rng: &mut R,
    config: &GenConfig,
) -> Result<(World, World), GenError> {
    (0..config.max_retries_per_example)
        .find_map(|_| try_example(program, rng, config))
        .ok_or(GenError::RetriesExhausted {
            attempts: config.max_retries_per_example,
        })
}

/// Collects `count` examples with pairwise distinct inputs, or `None` once a
/// slot uses up its retry budget.
fn collect_examples<R: Rng + ?Sized>(
    program: &Program,
    rng: &mut R,
    config: &GenConfig,
    count: usize,
) -> Option<Vec<Example>> {
    let mut seen = HashSet::with_capacity(count);
    let mut examples = Vec::with_capacity(count);
    while examples.len() < count {
        let (input, output) = (0..config.max_retries_per_example).find_map(|_| {
            try_example(program, rng, config).filter(|(input, _)| !seen.contains(input))
        })?;
        seen.insert(input.clone());
        examples.push(Example { input, output });
    }
    Some(examples)
}

/// Samples programs until one produces `config.examples_per_task` accepted
/// examples with distinct inputs. Degenerate programs are skipped.
pub fn generate_task<R: Rng + ?Sized>(
    rng: &mut R,
    config: &GenConfig,
    split: Split,
    task_id: String,
) -> Result<TaskRecord, GenError> {
    for _ in 0..config.max_programs_per_task {
        let program = sample_program(rng, config);
        // Without a `move` every draw would be rejected; skip the retries.
        if !program.contains_action(Action::Move) {
            continue;
        }
        if let Some(examples) = collect_examples(&program, rng, config, config.examples_per_task) {
            return Ok(TaskRecord {
                task_id,
                program_source: pretty_print(&program),
                examples,
                split,
            });
        }
    }
    Err(GenError::TaskExhausted {
        attempts: config.max_programs_per_task,
    })
}
