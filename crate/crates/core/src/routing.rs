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

//! SWAP insertion on the placement grid and removal of redundant gate pairs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::placement::{Cell, Grid};
use crate::qasm::{Circuit, Gate, Opcode};

/// Opcodes eligible for adjacent-pair removal. Only self-inverse opcodes are
/// accepted, since removing two copies of anything else changes the circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancelWhitelist(BTreeSet<Opcode>);

impl CancelWhitelist {
    pub fn new(opcodes: impl IntoIterator<Item = Opcode>) -> Result<Self> {
        let set: BTreeSet<Opcode> = opcodes.into_iter().collect();
        if let Some(&op) = set.iter().find(|op| !op.is_self_inverse()) {
            return Err(Error::NotSelfInverse(op));
        }
        Ok(CancelWhitelist(set))
    }

    pub fn contains(&self, op: Opcode) -> bool {
        self.0.contains(&op)
    }

    pub fn opcodes(&self) -> impl Iterator<Item = Opcode> + '_ {
        self.0.iter().copied()
    }
}

impl Default for CancelWhitelist {
    fn default() -> Self {
        CancelWhitelist(
            [Opcode::Swap, Opcode::Cnot, Opcode::X, Opcode::Toffoli, Opcode::Fredkin]
                .into_iter()
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingConfig {
    /// Undo each gate's forward swaps right after it, so every gate is routed
    /// from the initial placement.
    pub restore: bool,
    pub cancel: bool,
    pub cancel_whitelist: CancelWhitelist,
}

impl Default for RoutingConfig {
    fn default() -> Self {
        RoutingConfig {
            restore: true,
            cancel: true,
            cancel_whitelist: CancelWhitelist::default(),
        }
    }
}

/// Where a gate of a routed circuit came from; the payload is the index of
/// the source gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateOrigin {
    Source(usize),
    Forward(usize),
    Restore(usize),
}

impl GateOrigin {
    pub fn is_inserted(self) -> bool {
        !matches!(self, GateOrigin::Source(_))
    }

    pub fn source_index(self) -> usize {
        match self {
            GateOrigin::Source(k) | GateOrigin::Forward(k) | GateOrigin::Restore(k) => k,
        }
    }
}

/// A circuit whose two-qubit gates all act on neighboring cells.
///
/// Every swap gate, inserted or from the source, exchanges the cells of its
/// operands, so `final_grid` is `initial_grid` moved by the swaps in order.
/// With restore on and no source swaps the two grids are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutedCircuit {
    pub circuit: Circuit,
    /// Includes any idle wires routing had to allocate, at their starting
    /// cells.
    pub initial_grid: Grid,
    pub final_grid: Grid,
    /// Swaps inserted by routing, before cancellation.
    pub swaps_inserted: usize,
    /// Inserted swaps that survived cancellation.
    pub swaps_remaining: usize,
    /// Source gates removed by cancellation.
    pub source_gates_removed: usize,
    /// Parallel to `circuit.gates()`.
    pub origins: Vec<GateOrigin>,
}

/// Swaps that make the operands of `gate` adjacent, applied to `grid` as they
/// are generated.
///
/// The first operand walks toward the second: vertically along its column
/// until it reaches the second operand's row, then horizontally along that
/// row, stopping on the first cell next to the second operand. That is
/// `distance - 1` swaps. A walk into an empty cell gives the cell a fresh
/// idle wire so the move is still a swap. The second list is the first one
/// reversed; `grid` is left in the forward state.
pub fn route_gate(grid: &mut Grid, gate: &Gate) -> Result<(Vec<Gate>, Vec<Gate>)> {
    let (i, j) = match *gate.operands() {
        [q] => {
            grid.position(q).ok_or(Error::Unplaced(q))?;
            return Ok((Vec::new(), Vec::new()));
        }
        [i, j] => (i, j),
        _ => {
            return Err(Error::ArityTooHigh {
                index: 0,
                opcode: gate.opcode(),
            })
        }
    };
    let mut cur = grid.position(i).ok_or(Error::Unplaced(i))?;
    let target = grid.position(j).ok_or(Error::Unplaced(j))?;

    let mut forward = Vec::with_capacity(cur.manhattan(target).saturating_sub(1));
    while cur.manhattan(target) > 1 {
        let next = if cur.row != target.row {
            Cell::new(step_toward(cur.row, target.row), cur.col)
        } else {
            Cell::new(cur.row, step_toward(cur.col, target.col))
        };
        let other = match grid.at(next) {
            Some(q) => q,
            None => grid.occupy(next),
        };
        forward.push(Gate::swap(i, other));
        grid.swap_cells(cur, next);
        cur = next;
    }
    let restore = forward.iter().rev().cloned().collect();
    Ok((forward, restore))
}

fn step_toward(from: usize, to: usize) -> usize {
    if from < to {
        from + 1
    } else {
        from - 1
    }
}

pub fn route_circuit(circuit: &Circuit, grid: &Grid, cfg: &RoutingConfig) -> Result<RoutedCircuit> {
    if let Some((index, opcode)) = circuit.first_wide_gate() {
        return Err(Error::ArityTooHigh { index, opcode });
    }
    if grid.qubit_count() < circuit.qubit_count() {
        return Err(Error::Unplaced(grid.qubit_count()));
    }

    let mut work = grid.clone();
    let mut gates = Vec::with_capacity(circuit.len());
    let mut origins = Vec::with_capacity(circuit.len());
    let mut swaps_inserted = 0;
    for (k, gate) in circuit.gates().iter().enumerate() {
        let (forward, restore) = route_gate(&mut work, gate)?;
        swaps_inserted += forward.len();
        origins.extend(std::iter::repeat_n(GateOrigin::Forward(k), forward.len()));
        gates.extend(forward);
        gates.push(gate.clone());
        origins.push(GateOrigin::Source(k));
        let restore = if gate.opcode() == Opcode::Swap {
            // A source swap moves its operands like any other swap; the walker
            // is now the other operand, and restoring brings it back instead.
            let (i, j) = (gate.operands()[0], gate.operands()[1]);
            work.swap_qubits(i, j)?;
            restore
                .iter()
                .map(|s| s.relabel(|q| if q == i { j } else { q }))
                .collect::<std::result::Result<Vec<_>, _>>()?
        } else {
            restore
        };
        if cfg.restore {
            for s in &restore {
                let ops = s.operands();
                work.swap_qubits(ops[0], ops[1])?;
            }
            swaps_inserted += restore.len();
            origins.extend(std::iter::repeat_n(GateOrigin::Restore(k), restore.len()));
            gates.extend(restore);
        }
    }

    // Idle wires appear only when first needed; undoing every swap from the
    // final state recovers where they started.
    let final_grid = work;
    let mut initial_grid = final_grid.clone();
    for g in gates.iter().rev().filter(|g| g.opcode() == Opcode::Swap) {
        initial_grid.swap_qubits(g.operands()[0], g.operands()[1])?;
    }

    let (gates, origins) = if cfg.cancel {
        let kept = cancel_indices(&gates, &cfg.cancel_whitelist);
        (
            kept.iter().map(|&k| gates[k].clone()).collect(),
            kept.iter().map(|&k| origins[k]).collect(),
        )
    } else {
        (gates, origins)
    };
    let swaps_remaining = origins.iter().filter(|o: &&GateOrigin| o.is_inserted()).count();
    let sources_kept = origins.len() - swaps_remaining;

    Ok(RoutedCircuit {
        circuit: Circuit::new(circuit.qubit_count().max(final_grid.qubit_count()), gates)?,
        initial_grid,
        final_grid,
        swaps_inserted,
        swaps_remaining,
        source_gates_removed: circuit.len() - sources_kept,
        origins,
    })
}

/// Indices of the gates that survive stack-based pair removal.
fn cancel_indices(gates: &[Gate], whitelist: &CancelWhitelist) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::with_capacity(gates.len());
    for (k, g) in gates.iter().enumerate() {
        match stack.last() {
            Some(&top) if whitelist.contains(g.opcode()) && gates[top] == *g => {
                stack.pop();
            }
            _ => stack.push(k),
        }
    }
    stack
}

/// Removes adjacent identical pairs of whitelisted gates, including pairs that
/// only become adjacent once an inner pair is gone.
pub fn cancel_pairs(circuit: &Circuit, whitelist: &CancelWhitelist) -> Circuit {
    let gates = circuit.gates();
    let kept = cancel_indices(gates, whitelist)
        .into_iter()
        .map(|k| gates[k].clone())
        .collect();
    Circuit::new(circuit.qubit_count(), kept).expect("subset of a valid circuit")
}

/// Net movement of cell contents under the swap gates of a circuit.
///
/// `destination(c)` is the cell where the content that started in `c` ends
/// up. Cells are numbered row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellPermutation(Vec<usize>);

impl CellPermutation {
    pub fn identity(cells: usize) -> Self {
        CellPermutation((0..cells).collect())
    }

    pub fn destination(&self, cell: usize) -> usize {
        self.0[cell]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &d)| k == d)
    }
}

pub fn permutation_trace(circuit: &Circuit, grid: &Grid) -> Result<CellPermutation> {
    let mut grid = grid.clone();
    let cells = grid.rows() * grid.cols();
    // origin[c] = starting cell of the content now in c
    let mut origin: Vec<usize> = (0..cells).collect();
    for (index, gate) in circuit.gates().iter().enumerate() {
        if gate.opcode() != Opcode::Swap {
            continue;
        }
        let (i, j) = (gate.operands()[0], gate.operands()[1]);
        let a = grid.position(i).ok_or(Error::Unplaced(i))?;
        let b = grid.position(j).ok_or(Error::Unplaced(j))?;
        if !a.is_adjacent(b) {
            return Err(Error::NonAdjacentSwap { index });
        }
        grid.swap_cells(a, b);
        origin.swap(grid.cell_index(a), grid.cell_index(b));
    }
    let mut dest = vec![0; cells];
    for (now, &start) in origin.iter().enumerate() {
        dest[start] = now;
    }
    Ok(CellPermutation(dest))
}
