//! Per-cell binary feature encoding.
//!
//! | channel | meaning                                   |
//! |---------|-------------------------------------------|
//! | 0..=3   | agent here, facing N / E / S / W          |
//! | 4..=13  | exactly 1..=10 markers (one-hot on count) |
//! | 14      | obstacle                                  |
//! | 15      | real cell (zero on padding)               |

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::world::{Direction, World, MAX_MARKERS};

pub const CHANNELS: usize = 16;
const MARKER_BASE: usize = 4;
const OBSTACLE: usize = 14;
const VALID: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed feature grid: {0}")]
pub struct FeatureError(pub String);

/// A `(rows, cols, 16)` tensor of 0/1 entries, stored row-major with the
/// channel index fastest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureGrid {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FeatureGrid {
    pub fn zeros(rows: usize, cols: usize) -> FeatureGrid {
        FeatureGrid {
            rows,
            cols,
            data: vec![0; rows * cols * CHANNELS],
        }
    }

    /// Wraps raw data; `data.len()` must equal `rows * cols * 16`.
    pub fn from_raw(rows: usize, cols: usize, data: Vec<u8>) -> Result<FeatureGrid, FeatureError> {
        if data.len() != rows * cols * CHANNELS {
            return Err(FeatureError(format!(
                "{} values for a {rows}x{cols}x{CHANNELS} grid",
                data.len()
            )));
        }
        Ok(FeatureGrid { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    fn index(&self, row: usize, col: usize, channel: usize) -> usize {
        (row * self.cols + col) * CHANNELS + channel
    }

    pub fn get(&self, row: usize, col: usize, channel: usize) -> u8 {
        self.data[self.index(row, col, channel)]
    }

    pub fn set(&mut self, row: usize, col: usize, channel: usize, value: u8) {
        let i = self.index(row, col, channel);
        self.data[i] = value;
    }

    pub fn cell(&self, row: usize, col: usize) -> &[u8] {
        let i = self.index(row, col, 0);
        &self.data[i..i + CHANNELS]
    }

    /// Zero-pads to `rows x cols` (bottom and right). Padding cells have
    /// every channel, including the valid-cell mask, cleared.
    pub fn pad_to(&self, rows: usize, cols: usize) -> Result<FeatureGrid, FeatureError> {
        if rows < self.rows || cols < self.cols {
            return Err(FeatureError(format!(
                "cannot pad {}x{} down to {rows}x{cols}",
                self.rows, self.cols
            )));
        }
        let mut out = FeatureGrid::zeros(rows, cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let dst = out.index(r, c, 0);
                out.data[dst..dst + CHANNELS].copy_from_slice(self.cell(r, c));
            }
        }
        Ok(out)
    }

    /// Text dump: a `rows cols 16` header, then one 16-character 0/1 string
    /// per cell in row-major order.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {CHANNELS}\n", self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                for &v in self.cell(r, c) {
                    s.push(if v != 0 { '1' } else { '0' });
                }
                s.push('\n');
            }
        }
        s
    }
}

pub fn encode_world(world: &World) -> FeatureGrid {
    let mut g = FeatureGrid::zeros(world.rows(), world.cols());
    for r in 0..world.rows() {
        for c in 0..world.cols() {
            g.set(r, c, VALID, 1);
        }
    }
    let (ar, ac) = world.agent();
    g.set(ar, ac, world.dir().index(), 1);
    for (&(r, c), &n) in world.markers() {
        g.set(r, c, MARKER_BASE + usize::from(n) - 1, 1);
    }
    for &(r, c) in world.obstacles() {
        g.set(r, c, OBSTACLE, 1);
    }
    g
}

/// Inverse of [`encode_world`]; also accepts zero-padded grids, taking the
/// real extent from the valid-cell mask.
pub fn decode_features(grid: &FeatureGrid) -> Result<World, FeatureError> {
    let bad = |msg: String| Err(FeatureError(msg));
    if let Some(v) = grid.data.iter().find(|&&v| v > 1) {
        return bad(format!("non-binary entry {v}"));
    }
    let rows = (0..grid.rows).take_while(|&r| grid.cols > 0 && grid.get(r, 0, VALID) == 1).count();
    let cols = (0..grid.cols).take_while(|&c| grid.rows > 0 && grid.get(0, c, VALID) == 1).count();

    let mut agent = None;
    let mut markers = BTreeMap::new();
    let mut obstacles = BTreeSet::new();
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            let cell = grid.cell(r, c);
            let real = r < rows && c < cols;
            if (cell[VALID] == 1) != real {
                return bad(format!("valid-cell mask is not a top-left rectangle at ({r}, {c})"));
            }
            if !real {
                if cell.iter().any(|&v| v != 0) {
                    return bad(format!("padding cell ({r}, {c}) carries features"));
                }
                continue;
            }
            for d in Direction::ALL {
                if cell[d.index()] == 1 {
                    if agent.is_some() {
                        return bad("more than one agent channel set".into());
                    }
                    agent = Some(((r, c), d));
                }
            }
            let counts: Vec<usize> = (0..usize::from(MAX_MARKERS))
                .filter(|&k| cell[MARKER_BASE + k] == 1)
                .collect();
            match counts.as_slice() {
                [] => {}
                [k] => {
                    markers.insert((r, c), (*k + 1) as u8);
                }
                _ => return bad(format!("several marker counts at ({r}, {c})")),
            }
            if cell[OBSTACLE] == 1 {
                obstacles.insert((r, c));
            }
        }
    }
    let Some((pos, dir)) = agent else {
        return bad("no agent channel set".into());
    };
    World::new(rows, cols, pos, dir, markers, obstacles).map_err(|e| FeatureError(e.to_string()))
}
