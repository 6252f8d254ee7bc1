// Copyright contributors to the qmap project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The placement grid and the spiral embedding of a long path.

use std::fmt::{self, Write};

use crate::error::{Error, Result};
use crate::interaction::LongPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    pub fn manhattan(self, other: Cell) -> usize {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col)
    }

    pub fn is_adjacent(self, other: Cell) -> bool {
        self.manhattan(other) == 1
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// An `rows x cols` array of cells, each holding one qubit or nothing.
///
/// Qubits `0..qubit_count()` are each placed exactly once. The cell array and
/// the position table are kept mutually inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    rows: usize,
    cols: usize,
    cells: Vec<Option<usize>>,
    positions: Vec<Cell>,
}

impl Grid {
    /// Builds a grid from a row-major cell array. The occupied cells must hold
    /// exactly the indices `0..n` for some `n`.
    pub fn from_cells(rows: usize, cols: usize, cells: Vec<Option<usize>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidGrid("grid dimensions must be positive".into()));
        }
        if cells.len() != rows * cols {
            return Err(Error::InvalidGrid(format!(
                "expected {} cells, found {}",
                rows * cols,
                cells.len()
            )));
        }
        let n = cells.iter().flatten().count();
        let mut positions: Vec<Option<Cell>> = vec![None; n];
        for (k, q) in cells.iter().enumerate() {
            if let Some(q) = *q {
                let slot = positions
                    .get_mut(q)
                    .ok_or_else(|| Error::InvalidGrid(format!("qubit q{q} out of range for {n} placed qubits")))?;
                if slot.is_some() {
                    return Err(Error::InvalidGrid(format!("qubit q{q} placed twice")));
                }
                *slot = Some(Cell::new(k / cols, k % cols));
            }
        }
        Ok(Grid {
            rows,
            cols,
            cells,
            positions: positions.into_iter().map(|p| p.expect("counted")).collect(),
        })
    }

    /// Places qubit `k` at `positions[k]`.
    pub fn from_positions(rows: usize, cols: usize, positions: &[Cell]) -> Result<Self> {
        let mut cells = vec![None; rows * cols];
        for (q, p) in positions.iter().enumerate() {
            if p.row >= rows || p.col >= cols {
                return Err(Error::InvalidGrid(format!("cell {p} outside {rows}x{cols} grid")));
            }
            let slot = &mut cells[p.row * cols + p.col];
            if slot.is_some() {
                return Err(Error::InvalidGrid(format!("cell {p} occupied twice")));
            }
            *slot = Some(q);
        }
        Grid::from_cells(rows, cols, cells)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn qubit_count(&self) -> usize {
        self.positions.len()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.row < self.rows && cell.col < self.cols
    }

    pub fn cell_index(&self, cell: Cell) -> usize {
        cell.row * self.cols + cell.col
    }

    pub fn cell_at(&self, index: usize) -> Cell {
        Cell::new(index / self.cols, index % self.cols)
    }

    pub fn at(&self, cell: Cell) -> Option<usize> {
        self.cells[self.cell_index(cell)]
    }

    pub fn position(&self, qubit: usize) -> Option<Cell> {
        self.positions.get(qubit).copied()
    }

    pub fn cells(&self) -> &[Option<usize>] {
        &self.cells
    }

    pub fn distance(&self, i: usize, j: usize) -> Result<usize> {
        let a = self.position(i).ok_or(Error::Unplaced(i))?;
        let b = self.position(j).ok_or(Error::Unplaced(j))?;
        Ok(a.manhattan(b))
    }

    /// Puts a fresh qubit index into an empty cell and returns it. Routing
    /// uses this to give idle grid sites a wire when a qubit has to move
    /// through them.
    pub fn occupy(&mut self, cell: Cell) -> usize {
        let k = self.cell_index(cell);
        assert!(self.cells[k].is_none(), "cell {cell} is occupied");
        let q = self.positions.len();
        self.cells[k] = Some(q);
        self.positions.push(cell);
        q
    }

    /// Exchanges the contents of two cells, either of which may be empty.
    pub fn swap_cells(&mut self, a: Cell, b: Cell) {
        let (ka, kb) = (self.cell_index(a), self.cell_index(b));
        self.cells.swap(ka, kb);
        if let Some(q) = self.cells[ka] {
            self.positions[q] = a;
        }
        if let Some(q) = self.cells[kb] {
            self.positions[q] = b;
        }
    }

    pub fn swap_qubits(&mut self, i: usize, j: usize) -> Result<()> {
        let a = self.position(i).ok_or(Error::Unplaced(i))?;
        let b = self.position(j).ok_or(Error::Unplaced(j))?;
        self.swap_cells(a, b);
        Ok(())
    }

    /// Row-major CSV, `-1` for empty cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.cells.chunks(self.cols) {
            let fields: Vec<String> = row
                .iter()
                .map(|c| c.map_or_else(|| "-1".to_string(), |q| q.to_string()))
                .collect();
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut cols = None;
        let mut cells = Vec::new();
        let mut rows = 0;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if *cols.get_or_insert(fields.len()) != fields.len() {
                return Err(Error::InvalidGrid(format!(
                    "row {} has {} cells",
                    rows + 1,
                    fields.len()
                )));
            }
            for f in fields {
                let cell = match f {
                    "-1" => None,
                    _ => Some(f.parse().map_err(|_| Error::InvalidGrid(format!("bad cell `{f}`")))?),
                };
                cells.push(cell);
            }
            rows += 1;
        }
        Grid::from_cells(rows, cols.unwrap_or(0), cells)
    }
}

/// Text art, one row per line, `.` for empty cells.
impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = format!("q{}", self.qubit_count().saturating_sub(1)).len();
        for row in self.cells.chunks(self.cols) {
            let line: Vec<String> = row
                .iter()
                .map(|c| {
                    let label = c.map_or_else(|| ".".to_string(), |q| format!("q{q}"));
                    format!("{label:>width$}")
                })
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Grid dimensions; unset sides default to `ceil(sqrt(q))`, or to whatever
/// fits `q` when only the other side is given.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PlacementConfig {
    pub rows: Option<usize>,
    pub cols: Option<usize>,
}

impl PlacementConfig {
    pub fn with_dims(rows: usize, cols: usize) -> Self {
        PlacementConfig {
            rows: Some(rows),
            cols: Some(cols),
        }
    }

    /// A `1 x qubits` line.
    pub fn linear() -> Self {
        PlacementConfig {
            rows: Some(1),
            cols: None,
        }
    }

    pub fn dims(&self, qubits: usize) -> Result<(usize, usize)> {
        let side = |other: usize| qubits.div_ceil(other).max(1);
        let (rows, cols) = match (self.rows, self.cols) {
            (Some(r), Some(c)) => (r, c),
            (Some(r), None) if r > 0 => (r, side(r)),
            (None, Some(c)) if c > 0 => (side(c), c),
            (None, None) => {
                let n = ceil_sqrt(qubits).max(1);
                (n, n)
            }
            (r, c) => (r.unwrap_or(0), c.unwrap_or(0)),
        };
        if rows == 0 || cols == 0 || rows * cols < qubits {
            return Err(Error::GridTooSmall { rows, cols, qubits });
        }
        Ok((rows, cols))
    }
}

fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Every cell of a `rows x cols` grid in outward spiral order from the center
/// `((rows-1)/2, (cols-1)/2)`: runs of 1 East, 1 South, 2 West, 2 North,
/// 3 East, 3 South, ..., skipping coordinates outside the grid.
pub fn spiral_order(rows: usize, cols: usize) -> Vec<Cell> {
    const MOVES: [(isize, isize); 4] = [(0, 1), (1, 0), (0, -1), (-1, 0)];
    let total = rows * cols;
    let mut out = Vec::with_capacity(total);
    if total == 0 {
        return out;
    }
    let (mut r, mut c) = (((rows - 1) / 2) as isize, ((cols - 1) / 2) as isize);
    out.push(Cell::new(r as usize, c as usize));
    let mut run = 1;
    let mut dir = 0;
    while out.len() < total {
        for _ in 0..2 {
            let (dr, dc) = MOVES[dir % 4];
            for _ in 0..run {
                r += dr;
                c += dc;
                if (0..rows as isize).contains(&r) && (0..cols as isize).contains(&c) {
                    out.push(Cell::new(r as usize, c as usize));
                }
            }
            dir += 1;
        }
        run += 1;
    }
    out
}

pub fn spiral_place(path: &LongPath, cfg: &PlacementConfig) -> Result<Grid> {
    let (rows, cols) = cfg.dims(path.len())?;
    let mut cells = vec![None; rows * cols];
    for (&q, cell) in path.order().iter().zip(spiral_order(rows, cols)) {
        cells[cell.row * cols + cell.col] = Some(q);
    }
    Grid::from_cells(rows, cols, cells)
}

pub fn grid_distance(grid: &Grid, i: usize, j: usize) -> Result<usize> {
    grid.distance(i, j)
}
