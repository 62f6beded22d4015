//! Random programs, random worlds, and the task/dataset pipeline built on them.

mod dataset;
mod program;
mod task;
mod world;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exec::{execute, ExecutionOutcome, DEFAULT_STEP_LIMIT};
use crate::parse::{parse, ParseError};
use crate::program::{MAX_DEPTH, MAX_STATEMENTS};
use crate::world::{World, MAX_DIM, MIN_DIM};

pub use dataset::{build_dataset, generate_dataset, split_file_name, SplitPlan};
pub use program::sample_program;
pub use task::{generate_example, generate_task};
pub use world::sample_world;

/// Probability that a non-agent cell holds an obstacle.
pub const DEFAULT_P_OBSTACLE: f64 = 0.10;
/// Probability that a non-obstacle cell holds markers.
pub const DEFAULT_P_MARKER: f64 = 0.10;

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_statements: usize,
    pub max_depth: usize,
    pub min_dim: usize,
    pub max_dim: usize,
    /// Number of I/O examples per task (k + 1).
    pub examples_per_task: usize,
    pub step_limit: usize,
    pub max_retries_per_example: usize,
    /// Program resamples allowed before a task is declared impossible.
    pub max_programs_per_task: usize,
    pub p_obstacle: f64,
    pub p_marker: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_statements: MAX_STATEMENTS,
            max_depth: MAX_DEPTH,
            min_dim: MIN_DIM,
            max_dim: MAX_DIM,
            examples_per_task: 6,
            step_limit: DEFAULT_STEP_LIMIT,
            max_retries_per_example: 1000,
            max_programs_per_task: 10_000,
            p_obstacle: DEFAULT_P_OBSTACLE,
            p_marker: DEFAULT_P_MARKER,
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> GenConfig {
        GenConfig {
            seed,
            ..GenConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: String| Err(GenError::InvalidConfig(msg));
        if !(1..=MAX_STATEMENTS).contains(&self.max_statements) {
            return bad(format!("max_statements must be in [1, {MAX_STATEMENTS}]"));
        }
        if self.max_depth > MAX_DEPTH {
            return bad(format!("max_depth must be at most {MAX_DEPTH}"));
        }
        if self.min_dim < MIN_DIM || self.max_dim > MAX_DIM || self.min_dim > self.max_dim {
            return bad(format!("grid dimensions must satisfy {MIN_DIM} <= min <= max <= {MAX_DIM}"));
        }
        if self.examples_per_task < 2 {
            return bad("examples_per_task must be at least 2".into());
        }
        if self.step_limit == 0 || self.max_retries_per_example == 0 || self.max_programs_per_task == 0 {
            return bad("step_limit and retry limits must be positive".into());
        }
        if !(0.0..1.0).contains(&self.p_obstacle) || !(0.0..=1.0).contains(&self.p_marker) {
            return bad("p_obstacle must be in [0, 1) and p_marker in [0, 1]".into());
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("no acceptable example after {attempts} attempts")]
    RetriesExhausted { attempts: usize },
    #[error("no program produced a full task after {attempts} attempts")]
    TaskExhausted { attempts: usize },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Validation, Split::Test];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Split, String> {
        Split::ALL
            .into_iter()
            .find(|sp| sp.name() == s)
            .ok_or_else(|| format!("unknown split {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub input: World,
    pub output: World,
}

/// One induction task: a program and the I/O examples it produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskRecord {
    pub task_id: String,
    /// Canonical program text.
    pub program_source: String,
    pub examples: Vec<Example>,
    pub split: Split,
}

#[derive(Debug, Error, PartialEq)]
pub enum TaskError {
    #[error("program does not parse: {0}")]
    Parse(#[from] ParseError),
    #[error("program text is not in canonical form")]
    NonCanonical,
    #[error("expected {expected} examples, found {found}")]
    ExampleCount { expected: usize, found: usize },
    #[error("example {0} does not replay to its output")]
    Replay(usize),
    #[error("example {0} leaves the agent in place")]
    AgentUnmoved(usize),
}

impl TaskRecord {
    /// Replays every example and checks the record's invariants.
    pub fn verify(&self, expected_examples: Option<usize>, step_limit: usize) -> Result<(), TaskError> {
        let program = parse(&self.program_source)?;
        if crate::parse::pretty_print(&program) != self.program_source {
            return Err(TaskError::NonCanonical);
        }
        if let Some(expected) = expected_examples {
            if self.examples.len() != expected {
                return Err(TaskError::ExampleCount {
                    expected,
                    found: self.examples.len(),
                });
            }
        }
        for (i, ex) in self.examples.iter().enumerate() {
            match execute(&program, &ex.input, step_limit) {
                ExecutionOutcome::Success { world, .. } if world == ex.output => {}
                _ => return Err(TaskError::Replay(i)),
            }
            if ex.input.agent() == ex.output.agent() {
                return Err(TaskError::AgentUnmoved(i));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        assert!(GenConfig::default().validate().is_ok());
        assert_eq!(GenConfig::default().examples_per_task, 6);
    }

    #[test]
    fn invalid_configs() {
        let cases = [
            GenConfig {
                examples_per_task: 1,
                ..GenConfig::default()
            },
            GenConfig {
                max_statements: 21,
                ..GenConfig::default()
            },
            GenConfig {
                max_depth: 5,
                ..GenConfig::default()
            },
            GenConfig {
                min_dim: 1,
                ..GenConfig::default()
            },
            GenConfig {
                min_dim: 10,
                max_dim: 9,
                ..GenConfig::default()
            },
            GenConfig {
                p_obstacle: 1.0,
                ..GenConfig::default()
            },
            GenConfig {
                step_limit: 0,
                ..GenConfig::default()
            },
        ];
        for c in cases {
            assert!(matches!(c.validate(), Err(GenError::InvalidConfig(_))), "{c:?}");
        }
    }

    #[test]
    fn split_names_round_trip() {
        for s in Split::ALL {
            assert_eq!(s.name().parse::<Split>(), Ok(s));
        }
        assert!("valid".parse::<Split>().is_err());
    }
}
