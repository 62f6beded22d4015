//! Karel grid worlds.
//!
//! Row 0 is the top row and rows grow southward; column 0 is the leftmost
//! column and columns grow eastward. Facing north therefore decreases the row.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Smallest allowed grid dimension (rows or columns).
pub const MIN_DIM: usize = 2;
/// Largest allowed grid dimension (rows or columns).
pub const MAX_DIM: usize = 20;
/// Largest marker count a single cell may hold.
pub const MAX_MARKERS: u8 = 10;

/// A grid cell as `(row, col)`.
pub type Cell = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    North,
    East,
    South,
    West,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::North,
        Direction::East,
        Direction::South,
        Direction::West,
    ];

    /// Position in the clockwise order N, E, S, W.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Direction> {
        Self::ALL.get(i).copied()
    }

    pub fn left(self) -> Direction {
        Self::ALL[(self.index() + 3) % 4]
    }

    pub fn right(self) -> Direction {
        Self::ALL[(self.index() + 1) % 4]
    }

    /// `(drow, dcol)` of a single step in this direction.
    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::North => (-1, 0),
            Direction::East => (0, 1),
            Direction::South => (1, 0),
            Direction::West => (0, -1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::North => "north",
            Direction::East => "east",
            Direction::South => "south",
            Direction::West => "west",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown direction {0:?}")]
pub struct ParseDirectionError(pub String);

impl FromStr for Direction {
    type Err = ParseDirectionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "north" => Ok(Direction::North),
            "east" => Ok(Direction::East),
            "south" => Ok(Direction::South),
            "west" => Ok(Direction::West),
            other => Err(ParseDirectionError(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorldError {
    #[error("grid dimensions {rows}x{cols} outside [{MIN_DIM}, {MAX_DIM}]")]
    Dimensions { rows: usize, cols: usize },
    #[error("agent at ({0}, {1}) is out of bounds")]
    AgentOutOfBounds(usize, usize),
    #[error("agent at ({0}, {1}) stands on an obstacle")]
    AgentOnObstacle(usize, usize),
    #[error("obstacle at ({0}, {1}) is out of bounds")]
    ObstacleOutOfBounds(usize, usize),
    #[error("marker cell ({0}, {1}) is out of bounds")]
    MarkerOutOfBounds(usize, usize),
    #[error("marker cell ({0}, {1}) is also an obstacle")]
    MarkerOnObstacle(usize, usize),
    #[error("marker count {count} at ({row}, {col}) outside [1, {MAX_MARKERS}]")]
    MarkerCount { row: usize, col: usize, count: u8 },
}

/// A Karel world: grid size, agent pose, markers and obstacles.
///
/// Worlds can only be built through [`World::new`], which rejects any
/// state violating the grid invariants. Equality is structural over every
/// field, so `==` is the exact-match comparison used for scoring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct World {
    rows: usize,
    cols: usize,
    agent: Cell,
    dir: Direction,
    markers: BTreeMap<Cell, u8>,
    obstacles: BTreeSet<Cell>,
}

impl World {
    pub fn new(
        rows: usize,
        cols: usize,
        agent: Cell,
        dir: Direction,
        markers: BTreeMap<Cell, u8>,
        obstacles: BTreeSet<Cell>,
    ) -> Result<World, WorldError> {
        if !(MIN_DIM..=MAX_DIM).contains(&rows) || !(MIN_DIM..=MAX_DIM).contains(&cols) {
            return Err(WorldError::Dimensions { rows, cols });
        }
        let in_bounds = |(r, c): Cell| r < rows && c < cols;
        if !in_bounds(agent) {
            return Err(WorldError::AgentOutOfBounds(agent.0, agent.1));
        }
        if let Some(&(r, c)) = obstacles.iter().find(|&&cell| !in_bounds(cell)) {
            return Err(WorldError::ObstacleOutOfBounds(r, c));
        }
        if obstacles.contains(&agent) {
            return Err(WorldError::AgentOnObstacle(agent.0, agent.1));
        }
        for (&(row, col), &count) in &markers {
            if !in_bounds((row, col)) {
                return Err(WorldError::MarkerOutOfBounds(row, col));
            }
            if obstacles.contains(&(row, col)) {
                return Err(WorldError::MarkerOnObstacle(row, col));
            }
            if count == 0 || count > MAX_MARKERS {
                return Err(WorldError::MarkerCount { row, col, count });
            }
        }
        Ok(World {
            rows,
            cols,
            agent,
            dir,
            markers,
            obstacles,
        })
    }

    /// An empty grid with the agent at `agent` facing `dir`.
    pub fn empty(rows: usize, cols: usize, agent: Cell, dir: Direction) -> Result<World, WorldError> {
        World::new(rows, cols, agent, dir, BTreeMap::new(), BTreeSet::new())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn agent(&self) -> Cell {
        self.agent
    }

    pub fn dir(&self) -> Direction {
        self.dir
    }

    pub fn markers(&self) -> &BTreeMap<Cell, u8> {
        &self.markers
    }

    pub fn obstacles(&self) -> &BTreeSet<Cell> {
        &self.obstacles
    }

    pub fn marker_count(&self, cell: Cell) -> u8 {
        self.markers.get(&cell).copied().unwrap_or(0)
    }

    pub fn is_obstacle(&self, cell: Cell) -> bool {
        self.obstacles.contains(&cell)
    }

    /// The cell one step from `from` in `dir`, if it lies inside the grid.
    pub fn neighbor(&self, from: Cell, dir: Direction) -> Option<Cell> {
        let (dr, dc) = dir.offset();
        self.offset_cell(from, dr, dc)
    }

    /// `from + (drow, dcol)` if it lies inside the grid.
    pub fn offset_cell(&self, from: Cell, drow: isize, dcol: isize) -> Option<Cell> {
        let r = from.0.checked_add_signed(drow)?;
        let c = from.1.checked_add_signed(dcol)?;
        (r < self.rows && c < self.cols).then_some((r, c))
    }

    /// True when `dims`, obstacles, and therefore the static frame match.
    pub fn same_frame(&self, other: &World) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.obstacles == other.obstacles
    }

    // Interpreter-only mutators. They keep every invariant as long as the
    // caller checks bounds/obstacles/counts first, which `exec` does.

    pub(crate) fn set_agent(&mut self, cell: Cell) {
        debug_assert!(cell.0 < self.rows && cell.1 < self.cols && !self.is_obstacle(cell));
        self.agent = cell;
    }

    pub(crate) fn set_dir(&mut self, dir: Direction) {
        self.dir = dir;
    }

    pub(crate) fn set_marker_count(&mut self, cell: Cell, count: u8) {
        debug_assert!(count <= MAX_MARKERS && !self.is_obstacle(cell));
        if count == 0 {
            self.markers.remove(&cell);
        } else {
            self.markers.insert(cell, count);
        }
    }
}

/// Exact equality of two worlds: dimensions, agent pose, markers, obstacles.
pub fn world_equal(a: &World, b: &World) -> bool {
    a == b
}
