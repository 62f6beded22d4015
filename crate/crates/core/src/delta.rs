//! Input→output world deltas and their token form.
//!
//! A delta records the agent displacement, the final facing direction (always
//! absolute), and every marker-count change. Marker offsets are relative to
//! the agent's position in the *input* world.
//!
//! Token order is `AgentRow AgentCol HeroDir (MarkerRow MarkerCol MarkerCount)* END`.
//! Agent offsets always carry a sign (`AgentRow=+0`); marker offsets are
//! signed unless zero (`MarkerRow=0`); marker counts are signed and nonzero.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::world::{Direction, World, MAX_DIM, MAX_MARKERS};

/// Largest absolute row/column offset between two cells of a grid.
pub const MAX_OFFSET: i32 = MAX_DIM as i32 - 1;
/// Largest absolute marker-count change in a single cell.
pub const MAX_COUNT_DELTA: i32 = MAX_MARKERS as i32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkerEdit {
    pub drow: i32,
    pub dcol: i32,
    pub dcount: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeltaError {
    #[error("worlds differ in dimensions or obstacles")]
    DimensionMismatch,
    #[error("invalid delta: {0}")]
    InvalidDelta(String),
    #[error("malformed token sequence at token {position}: {reason}")]
    MalformedTokenSequence { position: usize, reason: String },
}

fn invalid(msg: impl Into<String>) -> DeltaError {
    DeltaError::InvalidDelta(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeltaScript {
    agent_drow: i32,
    agent_dcol: i32,
    final_dir: Direction,
    marker_edits: Vec<MarkerEdit>,
}

impl DeltaScript {
    /// Builds a delta, sorting edits into canonical order. Rejects duplicate
    /// cells, zero counts, and offsets outside the tokenizable range.
    pub fn new(
        agent_drow: i32,
        agent_dcol: i32,
        final_dir: Direction,
        mut marker_edits: Vec<MarkerEdit>,
    ) -> Result<DeltaScript, DeltaError> {
        let in_range = |v: i32| (-MAX_OFFSET..=MAX_OFFSET).contains(&v);
        if !in_range(agent_drow) || !in_range(agent_dcol) {
            return Err(invalid(format!("agent offset ({agent_drow}, {agent_dcol}) out of range")));
        }
        marker_edits.sort();
        for e in &marker_edits {
            if !in_range(e.drow) || !in_range(e.dcol) {
                return Err(invalid(format!("marker offset ({}, {}) out of range", e.drow, e.dcol)));
            }
            if e.dcount == 0 || e.dcount.abs() > MAX_COUNT_DELTA {
                return Err(invalid(format!("marker count change {} out of range", e.dcount)));
            }
        }
        if marker_edits
            .windows(2)
            .any(|w| (w[0].drow, w[0].dcol) == (w[1].drow, w[1].dcol))
        {
            return Err(invalid("duplicate marker cell"));
        }
        Ok(DeltaScript {
            agent_drow,
            agent_dcol,
            final_dir,
            marker_edits,
        })
    }

    /// The delta that leaves a world facing `dir` unchanged.
    pub fn identity(dir: Direction) -> DeltaScript {
        DeltaScript {
            agent_drow: 0,
            agent_dcol: 0,
            final_dir: dir,
            marker_edits: Vec::new(),
        }
    }

    pub fn agent_drow(&self) -> i32 {
        self.agent_drow
    }

    pub fn agent_dcol(&self) -> i32 {
        self.agent_dcol
    }

    pub fn final_dir(&self) -> Direction {
        self.final_dir
    }

    pub fn marker_edits(&self) -> &[MarkerEdit] {
        &self.marker_edits
    }
}

fn signed_offset(from: usize, to: usize) -> i32 {
    to as i32 - from as i32
}

/// Computes the delta turning `input` into `output`.
pub fn diff(input: &World, output: &World) -> Result<DeltaScript, DeltaError> {
    if !input.same_frame(output) {
        return Err(DeltaError::DimensionMismatch);
    }
    let (ar, ac) = input.agent();
    let mut cells: BTreeMap<_, i32> = BTreeMap::new();
    for (&cell, &n) in output.markers() {
        *cells.entry(cell).or_default() += i32::from(n);
    }
    for (&cell, &n) in input.markers() {
        *cells.entry(cell).or_default() -= i32::from(n);
    }
    let edits = cells
        .into_iter()
        .filter(|&(_, d)| d != 0)
        .map(|((r, c), dcount)| MarkerEdit {
            drow: signed_offset(ar, r),
            dcol: signed_offset(ac, c),
            dcount,
        })
        .collect();
    let (or, oc) = output.agent();
    DeltaScript::new(signed_offset(ar, or), signed_offset(ac, oc), output.dir(), edits)
}

/// Applies `delta` to `input`. The result must be a valid world.
pub fn apply(input: &World, delta: &DeltaScript) -> Result<World, DeltaError> {
    let origin = input.agent();
    let agent = input
        .offset_cell(origin, delta.agent_drow as isize, delta.agent_dcol as isize)
        .ok_or_else(|| invalid("agent leaves the grid"))?;
    if input.is_obstacle(agent) {
        return Err(invalid("agent lands on an obstacle"));
    }
    let mut markers = input.markers().clone();
    for e in &delta.marker_edits {
        let cell = input
            .offset_cell(origin, e.drow as isize, e.dcol as isize)
            .ok_or_else(|| invalid(format!("marker edit ({}, {}) leaves the grid", e.drow, e.dcol)))?;
        if input.is_obstacle(cell) {
            return Err(invalid(format!("marker edit targets obstacle at {cell:?}")));
        }
        let count = i32::from(input.marker_count(cell)) + e.dcount;
        if !(0..=i32::from(MAX_MARKERS)).contains(&count) {
            return Err(invalid(format!("marker count {count} at {cell:?} out of range")));
        }
        if count == 0 {
            markers.remove(&cell);
        } else {
            markers.insert(cell, count as u8);
        }
    }
    World::new(
        input.rows(),
        input.cols(),
        agent,
        delta.final_dir,
        markers,
        input.obstacles().clone(),
    )
    .map_err(|e| invalid(e.to_string()))
}

/// One symbol of the delta vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    AgentRow(i32),
    AgentCol(i32),
    HeroDir(Direction),
    MarkerRow(i32),
    MarkerCol(i32),
    MarkerCount(i32),
    End,
}

fn always_signed(v: i32) -> String {
    format!("{v:+}")
}

fn signed_unless_zero(v: i32) -> String {
    if v == 0 {
        "0".into()
    } else {
        format!("{v:+}")
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Token::AgentRow(v) => write!(f, "AgentRow={}", always_signed(v)),
            Token::AgentCol(v) => write!(f, "AgentCol={}", always_signed(v)),
            Token::HeroDir(d) => write!(f, "HeroDir={d}"),
            Token::MarkerRow(v) => write!(f, "MarkerRow={}", signed_unless_zero(v)),
            Token::MarkerCol(v) => write!(f, "MarkerCol={}", signed_unless_zero(v)),
            Token::MarkerCount(v) => write!(f, "MarkerCount={}", always_signed(v)),
            Token::End => f.write_str("END"),
        }
    }
}

impl FromStr for Token {
    type Err = String;

    /// Accepts exactly the canonical spelling of a vocabulary entry.
    fn from_str(s: &str) -> Result<Token, String> {
        let token = if s == "END" {
            Token::End
        } else {
            let (key, value) = s.split_once('=').ok_or_else(|| format!("not a token: {s:?}"))?;
            let num = || value.parse::<i32>().map_err(|_| format!("bad value in {s:?}"));
            match key {
                "AgentRow" => Token::AgentRow(num()?),
                "AgentCol" => Token::AgentCol(num()?),
                "HeroDir" => Token::HeroDir(value.parse().map_err(|_| format!("bad direction in {s:?}"))?),
                "MarkerRow" => Token::MarkerRow(num()?),
                "MarkerCol" => Token::MarkerCol(num()?),
                "MarkerCount" => Token::MarkerCount(num()?),
                _ => return Err(format!("unknown token key in {s:?}")),
            }
        };
        if !token.in_vocabulary() {
            return Err(format!("value out of range in {s:?}"));
        }
        if token.to_string() != s {
            return Err(format!("non-canonical spelling {s:?}"));
        }
        Ok(token)
    }
}

impl Token {
    fn in_vocabulary(&self) -> bool {
        let offset = |v: i32| (-MAX_OFFSET..=MAX_OFFSET).contains(&v);
        match *self {
            Token::AgentRow(v) | Token::AgentCol(v) | Token::MarkerRow(v) | Token::MarkerCol(v) => offset(v),
            Token::MarkerCount(v) => v != 0 && v.abs() <= MAX_COUNT_DELTA,
            Token::HeroDir(_) | Token::End => true,
        }
    }

    /// Index of this token in [`vocabulary`].
    pub fn id(&self) -> usize {
        let span = (2 * MAX_OFFSET + 1) as usize;
        let off = |v: i32| (v + MAX_OFFSET) as usize;
        match *self {
            Token::AgentRow(v) => off(v),
            Token::AgentCol(v) => span + off(v),
            Token::HeroDir(d) => 2 * span + d.index(),
            Token::MarkerRow(v) => 2 * span + 4 + off(v),
            Token::MarkerCol(v) => 3 * span + 4 + off(v),
            Token::MarkerCount(v) => {
                let base = 4 * span + 4;
                let k = (v + MAX_COUNT_DELTA) as usize;
                base + if v > 0 { k - 1 } else { k }
            }
            Token::End => 4 * span + 4 + 2 * MAX_COUNT_DELTA as usize,
        }
    }
}

/// Every token, ordered by [`Token::id`].
pub fn vocabulary() -> Vec<Token> {
    let offsets = || -MAX_OFFSET..=MAX_OFFSET;
    let mut v: Vec<Token> = offsets().map(Token::AgentRow).collect();
    v.extend(offsets().map(Token::AgentCol));
    v.extend(Direction::ALL.map(Token::HeroDir));
    v.extend(offsets().map(Token::MarkerRow));
    v.extend(offsets().map(Token::MarkerCol));
    v.extend((-MAX_COUNT_DELTA..=MAX_COUNT_DELTA).filter(|&c| c != 0).map(Token::MarkerCount));
    v.push(Token::End);
    v
}

pub fn tokenize(delta: &DeltaScript) -> Vec<Token> {
    let mut out = vec![
        Token::AgentRow(delta.agent_drow),
        Token::AgentCol(delta.agent_dcol),
        Token::HeroDir(delta.final_dir),
    ];
    for e in &delta.marker_edits {
        out.extend([Token::MarkerRow(e.drow), Token::MarkerCol(e.dcol), Token::MarkerCount(e.dcount)]);
    }
    out.push(Token::End);
    out
}

pub fn detokenize(tokens: &[Token]) -> Result<DeltaScript, DeltaError> {
    let malformed = |position: usize, reason: &str| DeltaError::MalformedTokenSequence {
        position,
        reason: reason.to_string(),
    };
    let (drow, dcol, dir) = match tokens {
        [Token::AgentRow(r), Token::AgentCol(c), Token::HeroDir(d), ..] => (*r, *c, *d),
        _ => return Err(malformed(0, "expected AgentRow AgentCol HeroDir prefix")),
    };
    let mut edits = Vec::new();
    let mut i = 3;
    loop {
        match tokens.get(i..) {
            Some([Token::End]) => break,
            Some([Token::End, ..]) => return Err(malformed(i + 1, "tokens after END")),
            Some([Token::MarkerRow(r), Token::MarkerCol(c), Token::MarkerCount(n), ..]) => {
                edits.push(MarkerEdit {
                    drow: *r,
                    dcol: *c,
                    dcount: *n,
                });
                i += 3;
            }
            Some([]) | None => return Err(malformed(i, "missing END")),
            Some(_) => return Err(malformed(i, "expected MarkerRow MarkerCol MarkerCount or END")),
        }
    }
    if edits.windows(2).any(|w| (w[0].drow, w[0].dcol) >= (w[1].drow, w[1].dcol)) {
        return Err(malformed(3, "marker edits not in canonical order"));
    }
    DeltaScript::new(drow, dcol, dir, edits).map_err(|e| malformed(0, &e.to_string()))
}

/// Space-separated token text, the prediction interchange format.
pub fn to_text(tokens: &[Token]) -> String {
    tokens.iter().map(Token::to_string).collect::<Vec<_>>().join(" ")
}

pub fn parse_tokens(text: &str) -> Result<Vec<Token>, DeltaError> {
    text.split_whitespace()
        .enumerate()
        .map(|(position, word)| {
            word.parse()
                .map_err(|reason| DeltaError::MalformedTokenSequence { position, reason })
        })
        .collect()
}

/// Parses a token line straight into a delta.
pub fn delta_from_text(text: &str) -> Result<DeltaScript, DeltaError> {
    detokenize(&parse_tokens(text)?)
}
