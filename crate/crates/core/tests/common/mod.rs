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

#![allow(dead_code)]

use std::collections::VecDeque;

use qmap::placement::{Cell, Grid};
use qmap::{Circuit, Gate, Opcode};
use rand::seq::SliceRandom;
use rand::Rng;

/// Opcodes of arity <= 2 other than swap.
pub const ROUTABLE: [Opcode; 9] = [
    Opcode::X,
    Opcode::H,
    Opcode::T,
    Opcode::Tdg,
    Opcode::S,
    Opcode::Sdg,
    Opcode::Cnot,
    Opcode::Cv,
    Opcode::Cvdg,
];

pub fn random_gate(rng: &mut impl Rng, qubits: usize, ops: &[Opcode]) -> Gate {
    let op = *ops.choose(rng).unwrap();
    let mut wires: Vec<usize> = (0..qubits).collect();
    wires.shuffle(rng);
    let n = if op == Opcode::Mct {
        rng.gen_range(3..=qubits.max(3))
    } else {
        op.min_arity()
    };
    Gate::new(op, wires[..n].to_vec()).unwrap()
}

pub fn random_circuit(rng: &mut impl Rng, qubits: usize, gates: usize, ops: &[Opcode]) -> Circuit {
    let list = (0..gates).map(|_| random_gate(rng, qubits, ops)).collect();
    Circuit::new(qubits, list).unwrap()
}

/// `qubits` placed at random cells of a `rows x cols` grid.
pub fn random_grid(rng: &mut impl Rng, rows: usize, cols: usize, qubits: usize) -> Grid {
    let mut cells: Vec<Cell> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| Cell::new(r, c)))
        .collect();
    cells.shuffle(rng);
    Grid::from_positions(rows, cols, &cells[..qubits]).unwrap()
}

/// Shortest path length between two cells of the full grid graph.
pub fn bfs_distance(rows: usize, cols: usize, from: Cell, to: Cell) -> usize {
    let mut dist = vec![usize::MAX; rows * cols];
    let mut queue = VecDeque::new();
    dist[from.row * cols + from.col] = 0;
    queue.push_back(from);
    while let Some(c) = queue.pop_front() {
        let d = dist[c.row * cols + c.col];
        if c == to {
            return d;
        }
        let mut next = Vec::new();
        if c.row > 0 {
            next.push(Cell::new(c.row - 1, c.col));
        }
        if c.row + 1 < rows {
            next.push(Cell::new(c.row + 1, c.col));
        }
        if c.col > 0 {
            next.push(Cell::new(c.row, c.col - 1));
        }
        if c.col + 1 < cols {
            next.push(Cell::new(c.row, c.col + 1));
        }
        for n in next {
            let k = n.row * cols + n.col;
            if dist[k] == usize::MAX {
                dist[k] = d + 1;
                queue.push_back(n);
            }
        }
    }
    unreachable!("grid graph is connected")
}

pub fn fixtures() -> Vec<(String, String)> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "qasm"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}
