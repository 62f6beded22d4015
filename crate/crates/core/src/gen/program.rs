//! Top-down PCFG expansion of the Karel grammar.
//!
//! Statements expand by one of six productions: an action, `if`, `ifelse`,
//! `while`, `repeat`, or a sequence of two statements. Each nonterminal picks
//! uniformly among the productions that still fit the remaining statement
//! budget and depth allowance, so every sample satisfies the size and depth
//! limits without whole-program rejection.

use rand::Rng;

use super::GenConfig;
use crate::program::{Action, Condition, Program, Statement, MAX_NEGATIONS, REPEAT_MAX, REPEAT_MIN};

#[derive(Clone, Copy)]
enum Rule {
    Action,
    If,
    IfElse,
    While,
    Repeat,
    Seq,
}

fn pick<T: Copy, R: Rng + ?Sized>(rng: &mut R, choices: &[T]) -> T {
    choices[rng.random_range(0..choices.len() as u32) as usize]
}

fn sample_condition<R: Rng + ?Sized>(rng: &mut R, negations: usize) -> Condition {
    let n = Condition::BASE.len() as u32 + u32::from(negations < MAX_NEGATIONS);
    match rng.random_range(0..n) as usize {
        i if i < Condition::BASE.len() => Condition::BASE[i].clone(),
        _ => Condition::negate(sample_condition(rng, negations + 1)),
    }
}

/// Expands one statement nonterminal into `out`, using at most `budget`
/// statement nodes. `depth` counts enclosing control nodes. Returns the
/// number of nodes used (always >= 1).
fn expand<R: Rng + ?Sized>(
    rng: &mut R,
    budget: usize,
    depth: usize,
    max_depth: usize,
    out: &mut Vec<Statement>,
) -> usize {
    debug_assert!(budget >= 1);
    let mut legal = vec![Rule::Action];
    if depth < max_depth && budget >= 2 {
        legal.extend([Rule::If, Rule::While, Rule::Repeat]);
        if budget >= 3 {
            legal.push(Rule::IfElse);
        }
    }
    if budget >= 2 {
        legal.push(Rule::Seq);
    }
    let block = |rng: &mut R, budget: usize| {
        let mut body = Vec::new();
        let used = expand(rng, budget, depth + 1, max_depth, &mut body);
        (body, used)
    };
    match pick(rng, &legal) {
        Rule::Action => {
            out.push(Statement::Action(pick(rng, &Action::ALL)));
            1
        }
        Rule::Seq => {
            let first = expand(rng, budget - 1, depth, max_depth, out);
            first + expand(rng, budget - first, depth, max_depth, out)
        }
        Rule::If => {
            let cond = sample_condition(rng, 0);
            let (body, used) = block(rng, budget - 1);
            out.push(Statement::If { cond, body });
            1 + used
        }
        Rule::While => {
            let cond = sample_condition(rng, 0);
            let (body, used) = block(rng, budget - 1);
            out.push(Statement::While { cond, body });
            1 + used
        }
        Rule::Repeat => {
            let times = rng.random_range(REPEAT_MIN..=REPEAT_MAX);
            let (body, used) = block(rng, budget - 1);
            out.push(Statement::Repeat { times, body });
            1 + used
        }
        Rule::IfElse => {
            let cond = sample_condition(rng, 0);
            let (then_body, used_then) = block(rng, budget - 2);
            let (else_body, used_else) = block(rng, budget - 1 - used_then);
            out.push(Statement::IfElse {
                cond,
                then_body,
                else_body,
            });
            1 + used_then + used_else
        }
    }
}

/// Samples a program within `config.max_statements` and `config.max_depth`.
pub fn sample_program<R: Rng + ?Sized>(rng: &mut R, config: &GenConfig) -> Program {
    let mut body = Vec::new();
    expand(rng, config.max_statements.max(1), 0, config.max_depth, &mut body);
    Program::new(body)
}
