//! Karel program-induction toolkit.
//!
//! The DSL ([`program`], [`parse`]), a deterministic interpreter ([`exec`]),
//! PCFG-based task generation ([`gen`]), the input→output delta codec
//! ([`delta`]), canonical file formats and feature encoding ([`io`]), and
//! the evaluation harness ([`harness`]).

pub mod delta;
pub mod exec;
pub mod gen;
pub mod harness;
pub mod io;
pub mod parse;
pub mod program;
pub mod world;

pub use delta::{apply, detokenize, diff, tokenize, DeltaError, DeltaScript, MarkerEdit, Token};
pub use exec::{execute, trace, CrashCause, ExecutionOutcome, DEFAULT_STEP_LIMIT};
pub use gen::{Example, GenConfig, GenError, Split, SplitPlan, TaskRecord};
pub use parse::{parse, pretty_print, ParseError};
pub use program::{nesting_depth, statement_count, Action, Condition, Program, Statement};
pub use world::{world_equal, Direction, World, WorldError};
