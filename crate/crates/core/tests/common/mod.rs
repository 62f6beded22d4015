//! Shared helpers for the integration tests: a naive reference interpreter
//! written independently of `karel_core::exec`, a text-level size/depth
//! counter, and random world/program sources.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use karel_core::exec::CrashCause;
use karel_core::gen::{sample_program, GenConfig};
use karel_core::{Action, Condition, Direction, ExecutionOutcome, Program, Statement, World};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Reference simulator: flat grids, a continuation stack, one step per loop.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefWorld {
    rows: i64,
    cols: i64,
    r: i64,
    c: i64,
    /// 0 = north, 1 = east, 2 = south, 3 = west
    dir: u8,
    markers: Vec<u8>,
    walls: Vec<bool>,
}

const DR: [i64; 4] = [-1, 0, 1, 0];
const DC: [i64; 4] = [0, 1, 0, -1];

fn dir_code(d: Direction) -> u8 {
    match d {
        Direction::North => 0,
        Direction::East => 1,
        Direction::South => 2,
        Direction::West => 3,
    }
}

fn code_dir(d: u8) -> Direction {
    [Direction::North, Direction::East, Direction::South, Direction::West][d as usize]
}

impl RefWorld {
    pub fn from_world(w: &World) -> RefWorld {
        let (rows, cols) = (w.rows() as i64, w.cols() as i64);
        let mut markers = vec![0; (rows * cols) as usize];
        let mut walls = vec![false; (rows * cols) as usize];
        for r in 0..w.rows() {
            for c in 0..w.cols() {
                markers[r * w.cols() + c] = w.marker_count((r, c));
                walls[r * w.cols() + c] = w.is_obstacle((r, c));
            }
        }
        RefWorld {
            rows,
            cols,
            r: w.agent().0 as i64,
            c: w.agent().1 as i64,
            dir: dir_code(w.dir()),
            markers,
            walls,
        }
    }

    pub fn to_world(&self) -> World {
        let mut markers = BTreeMap::new();
        let mut obstacles = BTreeSet::new();
        for i in 0..self.markers.len() {
            let cell = (i / self.cols as usize, i % self.cols as usize);
            if self.markers[i] > 0 {
                markers.insert(cell, self.markers[i]);
            }
            if self.walls[i] {
                obstacles.insert(cell);
            }
        }
        World::new(
            self.rows as usize,
            self.cols as usize,
            (self.r as usize, self.c as usize),
            code_dir(self.dir),
            markers,
            obstacles,
        )
        .expect("reference world stays valid")
    }

    fn here(&self) -> usize {
        (self.r * self.cols + self.c) as usize
    }

    fn open(&self, dir: u8) -> bool {
        let (r, c) = (self.r + DR[dir as usize], self.c + DC[dir as usize]);
        r >= 0 && c >= 0 && r < self.rows && c < self.cols && !self.walls[(r * self.cols + c) as usize]
    }

    fn test(&self, cond: &Condition) -> bool {
        match cond {
            Condition::FrontIsClear => self.open(self.dir),
            Condition::LeftIsClear => self.open((self.dir + 3) % 4),
            Condition::RightIsClear => self.open((self.dir + 1) % 4),
            Condition::MarkersPresent => self.markers[self.here()] != 0,
            Condition::NoMarkersPresent => self.markers[self.here()] == 0,
            Condition::Not(inner) => !self.test(inner),
        }
    }

    fn act(&mut self, a: Action) -> Result<(), &'static str> {
        match a {
            Action::Move => {
                let (r, c) = (self.r + DR[self.dir as usize], self.c + DC[self.dir as usize]);
                if r < 0 || c < 0 || r >= self.rows || c >= self.cols {
                    return Err("bounds");
                }
                if self.walls[(r * self.cols + c) as usize] {
                    return Err("wall");
                }
                self.r = r;
                self.c = c;
            }
            Action::TurnLeft => self.dir = (self.dir + 3) % 4,
            Action::TurnRight => self.dir = (self.dir + 1) % 4,
            Action::PutMarker => {
                let i = self.here();
                if self.markers[i] == 10 {
                    return Err("overflow");
                }
                self.markers[i] += 1;
            }
            Action::PickMarker => {
                let i = self.here();
                if self.markers[i] == 0 {
                    return Err("empty");
                }
                self.markers[i] -= 1;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefOutcome {
    Done { world: RefWorld, steps: usize },
    Crash { step: usize, cause: &'static str },
    Timeout,
}

enum Frame<'a> {
    Block(&'a [Statement], usize),
    Repeat(&'a [Statement], u32),
    /// A `while` loop and the world at the start of its current iteration.
    Loop(&'a Condition, &'a [Statement], Option<RefWorld>),
}

/// Runs `program` one small step at a time. A loop iteration that leaves the
/// world exactly as it found it can never make progress, so it is reported as
/// a timeout right away.
pub fn reference_run(program: &Program, start: &World, limit: usize) -> RefOutcome {
    let mut w = RefWorld::from_world(start);
    let mut steps = 0usize;
    let mut stack = vec![Frame::Block(&program.body, 0)];
    while let Some(top) = stack.last_mut() {
        match top {
            Frame::Block(stmts, i) => {
                if *i == stmts.len() {
                    stack.pop();
                    continue;
                }
                let s = &stmts[*i];
                *i += 1;
                match s {
                    Statement::Action(a) => {
                        steps += 1;
                        if steps > limit {
                            return RefOutcome::Timeout;
                        }
                        if let Err(cause) = w.act(*a) {
                            return RefOutcome::Crash { step: steps, cause };
                        }
                    }
                    Statement::If { cond, body } => {
                        if w.test(cond) {
                            stack.push(Frame::Block(body, 0));
                        }
                    }
                    Statement::IfElse {
                        cond,
                        then_body,
                        else_body,
                    } => {
                        let b = if w.test(cond) { then_body } else { else_body };
                        stack.push(Frame::Block(b, 0));
                    }
                    Statement::While { cond, body } => stack.push(Frame::Loop(cond, body, None)),
                    Statement::Repeat { times, body } => stack.push(Frame::Repeat(body, *times)),
                }
            }
            Frame::Repeat(body, left) => {
                if *left == 0 {
                    stack.pop();
                } else {
                    *left -= 1;
                    let b = *body;
                    stack.push(Frame::Block(b, 0));
                }
            }
            Frame::Loop(cond, body, snap) => {
                if snap.as_ref() == Some(&w) {
                    return RefOutcome::Timeout;
                }
                if w.test(cond) {
                    *snap = Some(w.clone());
                    let b = *body;
                    stack.push(Frame::Block(b, 0));
                } else {
                    stack.pop();
                }
            }
        }
    }
    RefOutcome::Done { world: w, steps }
}

/// True when the library interpreter and the reference agree on everything
/// observable: final world and step count, crash step and cause, or timeout.
pub fn agrees(got: &ExecutionOutcome, want: &RefOutcome) -> bool {
    match (got, want) {
        (ExecutionOutcome::Success { world, steps }, RefOutcome::Done { world: rw, steps: rs }) => {
            *world == rw.to_world() && steps == rs
        }
        (ExecutionOutcome::Crash { step, cause }, RefOutcome::Crash { step: rs, cause: rc }) => {
            let name = match cause {
                CrashCause::HitObstacle => "wall",
                CrashCause::OutOfBounds => "bounds",
                CrashCause::PickEmpty => "empty",
                CrashCause::MarkerOverflow => "overflow",
            };
            step == rs && name == *rc
        }
        (ExecutionOutcome::Timeout { .. }, RefOutcome::Timeout) => true,
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Size and depth read straight off program text.

fn lex(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut word = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            word.push(ch);
            continue;
        }
        if !word.is_empty() {
            out.push(std::mem::take(&mut word));
        }
        if "(){}".contains(ch) {
            out.push(ch.to_string());
        }
    }
    if !word.is_empty() {
        out.push(word);
    }
    out
}

/// `(statement count, control nesting depth)` of well-formed program text.
pub fn text_count_depth(text: &str) -> (usize, usize) {
    let toks = lex(text);
    let mut pos = 0;
    let r = stmts(&toks, &mut pos);
    assert_eq!(pos, toks.len(), "trailing tokens in {text:?}");
    r
}

fn stmts(t: &[String], pos: &mut usize) -> (usize, usize) {
    let (mut n, mut d) = (0, 0);
    while *pos < t.len() && t[*pos] != "}" {
        let (sn, sd) = stmt(t, pos);
        n += sn;
        d = d.max(sd);
    }
    (n, d)
}

fn skip_parens(t: &[String], pos: &mut usize) {
    assert_eq!(t[*pos], "(");
    let mut open = 0;
    loop {
        match t[*pos].as_str() {
            "(" => open += 1,
            ")" => open -= 1,
            _ => {}
        }
        *pos += 1;
        if open == 0 {
            return;
        }
    }
}

fn braced(t: &[String], pos: &mut usize) -> (usize, usize) {
    assert_eq!(t[*pos], "{");
    *pos += 1;
    let r = stmts(t, pos);
    assert_eq!(t[*pos], "}");
    *pos += 1;
    r
}

fn stmt(t: &[String], pos: &mut usize) -> (usize, usize) {
    let word = t[*pos].clone();
    *pos += 1;
    match word.as_str() {
        "if" | "while" | "repeat" => {
            skip_parens(t, pos);
            let (n, d) = braced(t, pos);
            (n + 1, d + 1)
        }
        "ifelse" => {
            skip_parens(t, pos);
            let (n1, d1) = braced(t, pos);
            let (n2, d2) = braced(t, pos);
            (n1 + n2 + 1, d1.max(d2) + 1)
        }
        "move" | "turnLeft" | "turnRight" | "putMarker" | "pickMarker" => (1, 0),
        other => panic!("unexpected word {other:?}"),
    }
}

// ---------------------------------------------------------------------------
// Random sources.

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A world drawn independently of the library's sampler. Densities are
/// chosen per world, so the corpus covers empty, crowded, and full-stack
/// cells (10 markers) that the task generator rarely produces.
pub fn arbitrary_world<R: Rng>(rng: &mut R, max_dim: usize) -> World {
    let rows = rng.random_range(2..=max_dim);
    let cols = rng.random_range(2..=max_dim);
    let p_wall = rng.random_range(0.0..0.4);
    let p_mark = rng.random_range(0.0..0.5);
    let agent = (rng.random_range(0..rows), rng.random_range(0..cols));
    let dir = Direction::ALL[rng.random_range(0..4)];
    let mut markers = BTreeMap::new();
    let mut obstacles = BTreeSet::new();
    for r in 0..rows {
        for c in 0..cols {
            if (r, c) != agent && rng.random_bool(p_wall) {
                obstacles.insert((r, c));
            } else if rng.random_bool(p_mark) {
                let n = if rng.random_bool(0.2) { 10 } else { rng.random_range(1..=10) };
                markers.insert((r, c), n);
            }
        }
    }
    World::new(rows, cols, agent, dir, markers, obstacles).unwrap()
}

/// Programs from the library's PCFG sampler.
pub fn programs(seed: u64, n: usize) -> Vec<Program> {
    let mut r = rng(seed);
    let config = GenConfig::default();
    (0..n).map(|_| sample_program(&mut r, &config)).collect()
}
