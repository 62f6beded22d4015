//! `.karelds` datasets: one JSON object per line, keys in sorted order.
//!
//! ```text
//! {"examples":[{"input":"<world>","output":"<world>"},...],"program":"<text>","split":"train","task_id":"train-000000"}
//! ```
//!
//! Worlds are embedded as their `.karelworld` text and programs as their
//! canonical text, so equal datasets always serialize to identical bytes.

use serde::{Deserialize, Serialize};

use super::world::read_world_at;
use super::{write_world, FormatError};
use crate::gen::{Example, Split, TaskRecord};

// Field order is alphabetical; serde_json emits fields in declaration order.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExampleLine {
    input: String,
    output: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskLine {
    examples: Vec<ExampleLine>,
    program: String,
    split: String,
    task_id: String,
}

/// One dataset line, without the trailing newline.
pub fn write_task(task: &TaskRecord) -> String {
    let line = TaskLine {
        examples: task
            .examples
            .iter()
            .map(|e| ExampleLine {
                input: write_world(&e.input),
                output: write_world(&e.output),
            })
            .collect(),
        program: task.program_source.clone(),
        split: task.split.to_string(),
        task_id: task.task_id.clone(),
    };
    serde_json::to_string(&line).expect("dataset line serializes")
}

pub fn write_dataset(tasks: &[TaskRecord]) -> String {
    let mut out = String::new();
    for t in tasks {
        out.push_str(&write_task(t));
        out.push('\n');
    }
    out
}

/// Parses a dataset. Blank lines are skipped; errors carry the file line.
pub fn read_dataset(text: &str) -> Result<Vec<TaskRecord>, FormatError> {
    let mut tasks = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let parsed: TaskLine = serde_json::from_str(raw).map_err(|e| FormatError::new(line, e.to_string()))?;
        let split: Split = parsed.split.parse().map_err(|e: String| FormatError::new(line, e))?;
        let world = |text: &str, which: &str, j: usize| {
            read_world_at(text, 1).map_err(|e| FormatError::new(line, format!("example {j} {which}: {e}")))
        };
        let examples = parsed
            .examples
            .iter()
            .enumerate()
            .map(|(j, e)| {
                Ok(Example {
                    input: world(&e.input, "input", j)?,
                    output: world(&e.output, "output", j)?,
                })
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        tasks.push(TaskRecord {
            task_id: parsed.task_id,
            program_source: parsed.program,
            examples,
            split,
        });
    }
    Ok(tasks)
}
