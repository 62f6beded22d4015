//! Abstract syntax of the Karel DSL.

use std::fmt;

use thiserror::Error;

/// Maximum number of statements (actions and control nodes) in a program.
pub const MAX_STATEMENTS: usize = 20;
/// Maximum nesting of control-flow nodes.
pub const MAX_DEPTH: usize = 4;
/// Smallest legal `repeat` count.
pub const REPEAT_MIN: u32 = 2;
/// Largest legal `repeat` count.
pub const REPEAT_MAX: u32 = 10;
/// Maximum number of stacked `not(...)` wrappers around a condition.
pub const MAX_NEGATIONS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Move,
    TurnLeft,
    TurnRight,
    PutMarker,
    PickMarker,
}

impl Action {
    pub const ALL: [Action; 5] = [
        Action::Move,
        Action::TurnLeft,
        Action::TurnRight,
        Action::PutMarker,
        Action::PickMarker,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Action::Move => "move",
            Action::TurnLeft => "turnLeft",
            Action::TurnRight => "turnRight",
            Action::PutMarker => "putMarker",
            Action::PickMarker => "pickMarker",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Condition {
    FrontIsClear,
    LeftIsClear,
    RightIsClear,
    MarkersPresent,
    NoMarkersPresent,
    Not(Box<Condition>),
}

impl Condition {
    /// The five primitive conditions, in keyword order.
    pub const BASE: [Condition; 5] = [
        Condition::FrontIsClear,
        Condition::LeftIsClear,
        Condition::RightIsClear,
        Condition::MarkersPresent,
        Condition::NoMarkersPresent,
    ];

    pub fn negate(inner: Condition) -> Condition {
        Condition::Not(Box::new(inner))
    }

    /// Number of stacked `Not` wrappers.
    pub fn negations(&self) -> usize {
        let mut n = 0;
        let mut c = self;
        while let Condition::Not(inner) = c {
            n += 1;
            c = inner;
        }
        n
    }

    /// Keyword of a primitive condition; `None` for `Not`.
    pub fn keyword(&self) -> Option<&'static str> {
        Some(match self {
            Condition::FrontIsClear => "frontIsClear",
            Condition::LeftIsClear => "leftIsClear",
            Condition::RightIsClear => "rightIsClear",
            Condition::MarkersPresent => "markersPresent",
            Condition::NoMarkersPresent => "noMarkersPresent",
            Condition::Not(_) => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    Action(Action),
    If {
        cond: Condition,
        body: Vec<Statement>,
    },
    IfElse {
        cond: Condition,
        then_body: Vec<Statement>,
        else_body: Vec<Statement>,
    },
    While {
        cond: Condition,
        body: Vec<Statement>,
    },
    Repeat {
        times: u32,
        body: Vec<Statement>,
    },
}

impl Statement {
    pub fn is_control(&self) -> bool {
        !matches!(self, Statement::Action(_))
    }

    /// Child blocks of a control node, in source order.
    pub fn blocks(&self) -> Vec<&[Statement]> {
        match self {
            Statement::Action(_) => vec![],
            Statement::If { body, .. } | Statement::While { body, .. } | Statement::Repeat { body, .. } => {
                vec![body]
            }
            Statement::IfElse {
                then_body,
                else_body,
                ..
            } => vec![then_body, else_body],
        }
    }

    pub fn condition(&self) -> Option<&Condition> {
        match self {
            Statement::If { cond, .. } | Statement::IfElse { cond, .. } | Statement::While { cond, .. } => {
                Some(cond)
            }
            _ => None,
        }
    }
}

impl From<Action> for Statement {
    fn from(a: Action) -> Statement {
        Statement::Action(a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Program {
    pub body: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("program has {count} statements, more than the limit of {max}")]
    TooManyStatements { count: usize, max: usize },
    #[error("control flow nested {depth} deep, more than the limit of {max}")]
    TooDeep { depth: usize, max: usize },
    #[error("empty block")]
    EmptyBlock,
    #[error("repeat count {0} outside [{REPEAT_MIN}, {REPEAT_MAX}]")]
    RepeatCount(u32),
    #[error("condition has {0} nested negations, more than the limit of {MAX_NEGATIONS}")]
    TooManyNegations(usize),
}

impl Program {
    pub fn new(body: Vec<Statement>) -> Program {
        Program { body }
    }

    pub fn statement_count(&self) -> usize {
        statement_count(self)
    }

    pub fn nesting_depth(&self) -> usize {
        nesting_depth(self)
    }

    /// True if `action` appears anywhere in the program text.
    pub fn contains_action(&self, action: Action) -> bool {
        fn walk(stmts: &[Statement], action: Action) -> bool {
            stmts.iter().any(|s| match s {
                Statement::Action(a) => *a == action,
                other => other.blocks().into_iter().any(|b| walk(b, action)),
            })
        }
        walk(&self.body, action)
    }

    /// Checks every structural invariant against the default limits.
    pub fn validate(&self) -> Result<(), ProgramError> {
        self.validate_with(MAX_STATEMENTS, MAX_DEPTH)
    }

    pub fn validate_with(&self, max_statements: usize, max_depth: usize) -> Result<(), ProgramError> {
        fn walk(stmts: &[Statement]) -> Result<(), ProgramError> {
            for s in stmts {
                if let Statement::Repeat { times, .. } = s {
                    if !(REPEAT_MIN..=REPEAT_MAX).contains(times) {
                        return Err(ProgramError::RepeatCount(*times));
                    }
                }
                if let Some(cond) = s.condition() {
                    let n = cond.negations();
                    if n > MAX_NEGATIONS {
                        return Err(ProgramError::TooManyNegations(n));
                    }
                }
                for block in s.blocks() {
                    if block.is_empty() {
                        return Err(ProgramError::EmptyBlock);
                    }
                    walk(block)?;
                }
            }
            Ok(())
        }
        let count = statement_count(self);
        if count > max_statements {
            return Err(ProgramError::TooManyStatements {
                count,
                max: max_statements,
            });
        }
        let depth = nesting_depth(self);
        if depth > max_depth {
            return Err(ProgramError::TooDeep { depth, max: max_depth });
        }
        walk(&self.body)
    }
}

/// Number of statement nodes, counting control nodes and actions alike.
pub fn statement_count(program: &Program) -> usize {
    fn count(stmts: &[Statement]) -> usize {
        stmts
            .iter()
            .map(|s| 1 + s.blocks().into_iter().map(count).sum::<usize>())
            .sum()
    }
    count(&program.body)
}

/// Deepest chain of nested control nodes; a program of bare actions has depth 0.
pub fn nesting_depth(program: &Program) -> usize {
    fn depth(stmts: &[Statement]) -> usize {
        stmts
            .iter()
            .map(|s| match s {
                Statement::Action(_) => 0,
                control => 1 + control.blocks().into_iter().map(depth).max().unwrap_or(0),
            })
            .max()
            .unwrap_or(0)
    }
    depth(&program.body)
}
