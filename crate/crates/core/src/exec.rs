//! Deterministic interpreter with crash and step-limit semantics.
//!
//! Only primitive actions consume steps. A crash aborts the run and discards
//! the partial world. A `while` iteration that performs no action leaves the
//! world untouched and would repeat forever, so it ends the run as a timeout.

use std::fmt;

use crate::program::{Action, Condition, Program, Statement};
use crate::world::{World, MAX_MARKERS};

/// Default cap on primitive actions per execution.
pub const DEFAULT_STEP_LIMIT: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrashCause {
    HitObstacle,
    OutOfBounds,
    PickEmpty,
    MarkerOverflow,
}

impl fmt::Display for CrashCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrashCause::HitObstacle => "hit-obstacle",
            CrashCause::OutOfBounds => "out-of-bounds",
            CrashCause::PickEmpty => "pick-empty",
            CrashCause::MarkerOverflow => "marker-overflow",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExecutionOutcome {
    Success { world: World, steps: usize },
    /// `step` is the 1-based index of the action that crashed.
    Crash { step: usize, cause: CrashCause },
    Timeout { step_limit: usize },
}

impl ExecutionOutcome {
    pub fn success(&self) -> Option<&World> {
        match self {
            ExecutionOutcome::Success { world, .. } => Some(world),
            _ => None,
        }
    }

    pub fn into_success(self) -> Option<World> {
        match self {
            ExecutionOutcome::Success { world, .. } => Some(world),
            _ => None,
        }
    }
}

pub fn eval_condition(cond: &Condition, world: &World) -> bool {
    let clear = |dir| {
        world
            .neighbor(world.agent(), dir)
            .is_some_and(|cell| !world.is_obstacle(cell))
    };
    match cond {
        Condition::FrontIsClear => clear(world.dir()),
        Condition::LeftIsClear => clear(world.dir().left()),
        Condition::RightIsClear => clear(world.dir().right()),
        Condition::MarkersPresent => world.marker_count(world.agent()) > 0,
        Condition::NoMarkersPresent => world.marker_count(world.agent()) == 0,
        Condition::Not(inner) => !eval_condition(inner, world),
    }
}

fn step_in_place(action: Action, world: &mut World) -> Result<(), CrashCause> {
    let here = world.agent();
    match action {
        Action::Move => {
            let next = world.neighbor(here, world.dir()).ok_or(CrashCause::OutOfBounds)?;
            if world.is_obstacle(next) {
                return Err(CrashCause::HitObstacle);
            }
            world.set_agent(next);
        }
        Action::TurnLeft => world.set_dir(world.dir().left()),
        Action::TurnRight => world.set_dir(world.dir().right()),
        Action::PutMarker => {
            let count = world.marker_count(here);
            if count >= MAX_MARKERS {
                return Err(CrashCause::MarkerOverflow);
            }
            world.set_marker_count(here, count + 1);
        }
        Action::PickMarker => {
            let count = world.marker_count(here);
            if count == 0 {
                return Err(CrashCause::PickEmpty);
            }
            world.set_marker_count(here, count - 1);
        }
    }
    Ok(())
}

/// Applies one primitive action, returning the new world or the crash cause.
pub fn apply_action(action: Action, world: &World) -> Result<World, CrashCause> {
    let mut next = world.clone();
    step_in_place(action, &mut next)?;
    Ok(next)
}

enum Halt {
    Crash { step: usize, cause: CrashCause },
    Timeout,
}

struct Machine<F> {
    world: World,
    steps: usize,
    limit: usize,
    observe: F,
}

impl<F: FnMut(Action, &World)> Machine<F> {
    fn block(&mut self, stmts: &[Statement]) -> Result<(), Halt> {
        stmts.iter().try_for_each(|s| self.statement(s))
    }

    fn statement(&mut self, stmt: &Statement) -> Result<(), Halt> {
        match stmt {
            Statement::Action(a) => self.act(*a),
            Statement::If { cond, body } => {
                if eval_condition(cond, &self.world) {
                    self.block(body)?;
                }
                Ok(())
            }
            Statement::IfElse {
                cond,
                then_body,
                else_body,
            } => {
                if eval_condition(cond, &self.world) {
                    self.block(then_body)
                } else {
                    self.block(else_body)
                }
            }
            Statement::While { cond, body } => {
                while eval_condition(cond, &self.world) {
                    let before = self.steps;
                    self.block(body)?;
                    if self.steps == before {
                        return Err(Halt::Timeout);
                    }
                }
                Ok(())
            }
            Statement::Repeat { times, body } => (0..*times).try_for_each(|_| self.block(body)),
        }
    }

    fn act(&mut self, action: Action) -> Result<(), Halt> {
        if self.steps >= self.limit {
            return Err(Halt::Timeout);
        }
        self.steps += 1;
        step_in_place(action, &mut self.world).map_err(|cause| Halt::Crash {
            step: self.steps,
            cause,
        })?;
        (self.observe)(action, &self.world);
        Ok(())
    }
}

fn run<F: FnMut(Action, &World)>(program: &Program, world: &World, step_limit: usize, observe: F) -> ExecutionOutcome {
    let mut m = Machine {
        world: world.clone(),
        steps: 0,
        limit: step_limit,
        observe,
    };
    match m.block(&program.body) {
        Ok(()) => ExecutionOutcome::Success {
            world: m.world,
            steps: m.steps,
        },
        Err(Halt::Crash { step, cause }) => ExecutionOutcome::Crash { step, cause },
        Err(Halt::Timeout) => ExecutionOutcome::Timeout { step_limit },
    }
}

/// Runs `program` on a private copy of `world`.
pub fn execute(program: &Program, world: &World, step_limit: usize) -> ExecutionOutcome {
    run(program, world, step_limit, |_, _| {})
}

/// Every action executed, paired with the world right after it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<(Action, World)>,
    pub outcome: ExecutionOutcome,
}

/// Like [`execute`], but records the world after each successful action.
pub fn trace(program: &Program, world: &World, step_limit: usize) -> Trace {
    let mut steps = Vec::new();
    let outcome = run(program, world, step_limit, |a, w| steps.push((a, w.clone())));
    Trace { steps, outcome }
}
