//! `.karelworld` text records.
//!
//! ```text
//! <rows> <cols> <agent_row> <agent_col> <dir>
//! obstacles[ <row>,<col>]*
//! markers[ <row>,<col>,<count>]*
//! ```
//!
//! Coordinates are listed in ascending `(row, col)` order and every line,
//! including the last, ends in `\n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::FormatError;
use crate::world::{Direction, World};

pub fn write_world(world: &World) -> String {
    let mut s = String::new();
    let (r, c) = world.agent();
    let _ = writeln!(s, "{} {} {} {} {}", world.rows(), world.cols(), r, c, world.dir());
    s.push_str("obstacles");
    for (r, c) in world.obstacles() {
        let _ = write!(s, " {r},{c}");
    }
    s.push_str("\nmarkers");
    for ((r, c), n) in world.markers() {
        let _ = write!(s, " {r},{c},{n}");
    }
    s.push('\n');
    s
}

fn numbers(field: &str, count: usize, line: usize) -> Result<Vec<usize>, FormatError> {
    let parts: Vec<&str> = field.split(',').collect();
    if parts.len() != count {
        return Err(FormatError::new(line, format!("expected {count} comma-separated numbers in {field:?}")));
    }
    parts
        .iter()
        .map(|p| {
            // Reject signs and leading zeros so the text stays canonical.
            if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) || (p.len() > 1 && p.starts_with('0')) {
                return Err(FormatError::new(line, format!("bad number {p:?}")));
            }
            p.parse::<usize>().map_err(|_| FormatError::new(line, format!("bad number {p:?}")))
        })
        .collect()
}

/// Parses a world record; the text must be exactly what [`write_world`]
/// produces for some valid world. `first_line` offsets reported line numbers.
pub(crate) fn read_world_at(text: &str, first_line: usize) -> Result<World, FormatError> {
    let lines: Vec<&str> = text.split('\n').collect();
    if lines.len() != 4 || !lines[3].is_empty() {
        return Err(FormatError::new(first_line, "world record must be exactly three newline-terminated lines"));
    }
    let (l1, l2, l3) = (first_line, first_line + 1, first_line + 2);

    let header: Vec<&str> = lines[0].split(' ').collect();
    if header.len() != 5 {
        return Err(FormatError::new(l1, "header must be `rows cols agent_row agent_col dir`"));
    }
    let nums = numbers(&header[..4].join(","), 4, l1)?;
    let dir: Direction = header[4].parse().map_err(|e| FormatError::new(l1, format!("{e}")))?;

    let mut obstacles = BTreeSet::new();
    let mut rest = lines[1].split(' ');
    if rest.next() != Some("obstacles") {
        return Err(FormatError::new(l2, "expected `obstacles`"));
    }
    for field in rest {
        let v = numbers(field, 2, l2)?;
        if !obstacles.insert((v[0], v[1])) || obstacles.last() != Some(&(v[0], v[1])) {
            return Err(FormatError::new(l2, "obstacles must be sorted and distinct"));
        }
    }

    let mut markers = BTreeMap::new();
    let mut rest = lines[2].split(' ');
    if rest.next() != Some("markers") {
        return Err(FormatError::new(l3, "expected `markers`"));
    }
    for field in rest {
        let v = numbers(field, 3, l3)?;
        let count = u8::try_from(v[2]).map_err(|_| FormatError::new(l3, "marker count out of range"))?;
        let cell = (v[0], v[1]);
        if markers.last_key_value().is_some_and(|(&last, _)| last >= cell) {
            return Err(FormatError::new(l3, "markers must be sorted and distinct"));
        }
        markers.insert(cell, count);
    }

    World::new(nums[0], nums[1], (nums[2], nums[3]), dir, markers, obstacles)
        .map_err(|e| FormatError::new(l1, e.to_string()))
}

pub fn read_world(text: &str) -> Result<World, FormatError> {
    read_world_at(text, 1)
}
