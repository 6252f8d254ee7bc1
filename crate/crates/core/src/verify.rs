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

//! Small exact simulators used as oracles.
//!
//! Basis convention: qubit 0 is the most significant bit of a basis index, so
//! on `m` qubits qubit `k` is bit `m - 1 - k`. Circuits multiply on the left:
//! the unitary of `A ++ B` is `U(B) * U(A)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::placement::Grid;
use crate::qasm::{Circuit, Gate, Opcode};
use crate::routing::RoutedCircuit;

pub const DENSE_QUBIT_LIMIT: usize = 6;
pub const CLASSICAL_QUBIT_LIMIT: usize = 24;

type Matrix2 = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Target matrix of the gates that act as a controlled single-qubit unitary.
fn target_matrix(op: Opcode) -> Option<Matrix2> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    Some(match op {
        Opcode::X | Opcode::Cnot | Opcode::Toffoli | Opcode::Mct => [[zero, one], [one, zero]],
        Opcode::H => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        Opcode::T => [[one, zero], [zero, c(s, s)]],
        Opcode::Tdg => [[one, zero], [zero, c(s, -s)]],
        Opcode::S => [[one, zero], [zero, c(0.0, 1.0)]],
        Opcode::Sdg => [[one, zero], [zero, c(0.0, -1.0)]],
        // V = sqrt(X) = (1/2)[[1+i, 1-i], [1-i, 1+i]]
        Opcode::Cv => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        Opcode::Cvdg => [[c(0.5, -0.5), c(0.5, 0.5)], [c(0.5, 0.5), c(0.5, -0.5)]],
        Opcode::Swap | Opcode::Fredkin => return None,
    })
}

fn bit(qubits: usize, q: usize) -> usize {
    1 << (qubits - 1 - q)
}

/// Applies `gate` to a state vector over `qubits` wires.
pub fn apply_gate(state: &mut [Complex64], qubits: usize, gate: &Gate) {
    let ops = gate.operands();
    match target_matrix(gate.opcode()) {
        Some(m) => {
            let (target, controls) = ops.split_last().expect("gates have operands");
            let cmask: usize = controls.iter().map(|&q| bit(qubits, q)).sum();
            let tbit = bit(qubits, *target);
            for idx in 0..state.len() {
                if idx & tbit == 0 && idx & cmask == cmask {
                    let (a, b) = (state[idx], state[idx | tbit]);
                    state[idx] = m[0][0] * a + m[0][1] * b;
                    state[idx | tbit] = m[1][0] * a + m[1][1] * b;
                }
            }
        }
        None => {
            let (controls, pair) = ops.split_at(ops.len() - 2);
            let cmask: usize = controls.iter().map(|&q| bit(qubits, q)).sum();
            let (abit, bbit) = (bit(qubits, pair[0]), bit(qubits, pair[1]));
            for idx in 0..state.len() {
                if idx & abit != 0 && idx & bbit == 0 && idx & cmask == cmask {
                    state.swap(idx, idx ^ abit ^ bbit);
                }
            }
        }
    }
}

/// A `2^m x 2^m` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    qubits: usize,
    data: Vec<Complex64>,
}

impl DenseUnitary {
    pub fn identity(qubits: usize) -> Self {
        let dim = 1 << qubits;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for k in 0..dim {
            data[k * dim + k] = Complex64::new(1.0, 0.0);
        }
        DenseUnitary { qubits, data }
    }

    pub fn from_rows(qubits: usize, data: Vec<Complex64>) -> Self {
        let dim = 1 << qubits;
        assert_eq!(data.len(), dim * dim);
        DenseUnitary { qubits, data }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|r| self.get(r, col)).collect()
    }

    pub fn mul(&self, rhs: &DenseUnitary) -> DenseUnitary {
        assert_eq!(self.qubits, rhs.qubits);
        let n = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        DenseUnitary {
            qubits: self.qubits,
            data,
        }
    }

    pub fn adjoint(&self) -> DenseUnitary {
        let n = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j).conj();
            }
        }
        DenseUnitary {
            qubits: self.qubits,
            data,
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.mul(&self.adjoint());
        prod.max_abs_diff(&DenseUnitary::identity(self.qubits)) <= tol
    }

    pub fn max_abs_diff(&self, other: &DenseUnitary) -> f64 {
        max_abs_diff(&self.data, &other.data)
    }

    /// Compares the matrices after rotating each so that its first nonzero
    /// entry is real and positive.
    pub fn approx_eq_up_to_phase(&self, other: &DenseUnitary, tol: f64) -> bool {
        self.qubits == other.qubits && equal_up_to_phase(&self.data, &other.data, tol)
    }
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn phase_normalized(v: &[Complex64], tol: f64) -> Vec<Complex64> {
    match v.iter().find(|z| z.norm() > tol) {
        Some(z) => {
            let rot = z.conj() / z.norm();
            v.iter().map(|x| x * rot).collect()
        }
        None => v.to_vec(),
    }
}

fn equal_up_to_phase(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.len() == b.len() && max_abs_diff(&phase_normalized(a, tol), &phase_normalized(b, tol)) <= tol
}

pub fn circuit_unitary(circuit: &Circuit) -> Result<DenseUnitary> {
    let m = circuit.qubit_count();
    if m > DENSE_QUBIT_LIMIT {
        return Err(Error::TooManyQubits {
            qubits: m,
            limit: DENSE_QUBIT_LIMIT,
        });
    }
    let dim = 1 << m;
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut state = vec![Complex64::new(0.0, 0.0); dim];
    for col in 0..dim {
        state.fill(Complex64::new(0.0, 0.0));
        state[col] = Complex64::new(1.0, 0.0);
        for g in circuit.gates() {
            apply_gate(&mut state, m, g);
        }
        for (row, amp) in state.iter().enumerate() {
            data[row * dim + col] = *amp;
        }
    }
    Ok(DenseUnitary { qubits: m, data })
}

/// Image of every computational basis state: `map[x]` is the output index
/// for input index `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisPermutation {
    qubits: usize,
    map: Vec<usize>,
}

impl BasisPermutation {
    pub fn identity(qubits: usize) -> Self {
        BasisPermutation {
            qubits,
            map: (0..1 << qubits).collect(),
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn apply(&self, input: usize) -> usize {
        self.map[input]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.map.len()];
        self.map
            .iter()
            .all(|&y| y < seen.len() && !std::mem::replace(&mut seen[y], true))
    }
}

/// Applies a classical reversible gate to one basis index.
pub fn apply_classical(index: usize, qubits: usize, gate: &Gate) -> usize {
    let ops = gate.operands();
    let set = |q: usize| index & bit(qubits, q) != 0;
    match gate.opcode() {
        Opcode::X | Opcode::Cnot | Opcode::Toffoli | Opcode::Mct => {
            let (target, controls) = ops.split_last().expect("gates have operands");
            if controls.iter().all(|&q| set(q)) {
                index ^ bit(qubits, *target)
            } else {
                index
            }
        }
        Opcode::Swap | Opcode::Fredkin => {
            let (controls, pair) = ops.split_at(ops.len() - 2);
            if controls.iter().all(|&q| set(q)) && set(pair[0]) != set(pair[1]) {
                index ^ bit(qubits, pair[0]) ^ bit(qubits, pair[1])
            } else {
                index
            }
        }
        op => panic!("{op} is not classical"),
    }
}

pub fn classical_action(circuit: &Circuit) -> Result<BasisPermutation> {
    let m = circuit.qubit_count();
    if let Some(g) = circuit.gates().iter().find(|g| !g.opcode().is_classical()) {
        return Err(Error::NonClassical(g.opcode()));
    }
    if m > CLASSICAL_QUBIT_LIMIT {
        return Err(Error::TooManyQubits {
            qubits: m,
            limit: CLASSICAL_QUBIT_LIMIT,
        });
    }
    let map = (0..1usize << m)
        .map(|x| circuit.gates().iter().fold(x, |acc, g| apply_classical(acc, m, g)))
        .collect();
    Ok(BasisPermutation { qubits: m, map })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdjacencyVerdict {
    Pass,
    Violation { gate_index: usize, reason: String },
}

impl AdjacencyVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, AdjacencyVerdict::Pass)
    }
}

pub fn replay_adjacency(routed: &RoutedCircuit) -> AdjacencyVerdict {
    replay_adjacency_on(&routed.circuit, &routed.initial_grid)
}

/// Replays `circuit` from the placement `grid`, moving operands on every swap,
/// and reports the first gate whose operands are not on neighboring cells.
pub fn replay_adjacency_on(circuit: &Circuit, grid: &Grid) -> AdjacencyVerdict {
    let mut grid = grid.clone();
    for (gate_index, gate) in circuit.gates().iter().enumerate() {
        let violation = |reason: String| AdjacencyVerdict::Violation { gate_index, reason };
        let ops = gate.operands();
        let mut cells = Vec::with_capacity(ops.len());
        for &q in ops {
            match grid.position(q) {
                Some(c) => cells.push(c),
                None => return violation(format!("q{q} is not on the grid")),
            }
        }
        match cells[..] {
            [_] => {}
            [a, b] => {
                if !a.is_adjacent(b) {
                    return violation(format!("{gate} acts on {a} and {b}"));
                }
                if gate.opcode() == Opcode::Swap {
                    grid.swap_cells(a, b);
                }
            }
            _ => return violation(format!("{gate} has more than two operands")),
        }
    }
    AdjacencyVerdict::Pass
}

/// Checks that `lowered` acts like `original` when the extra wires of
/// `lowered` (the highest indices) start in |0>, and that they return to |0>.
///
/// Uses dense simulation up to [`DENSE_QUBIT_LIMIT`] wires and basis
/// permutations beyond that when both circuits are classical.
pub fn lowering_preserves_action(original: &Circuit, lowered: &Circuit, tol: f64) -> Result<bool> {
    let extra = lowered
        .qubit_count()
        .checked_sub(original.qubit_count())
        .expect("lowering never removes qubits");
    if lowered.qubit_count() <= DENSE_QUBIT_LIMIT {
        let u = circuit_unitary(original)?;
        let l = circuit_unitary(lowered)?;
        let (dim_o, dim_l) = (u.dim(), l.dim());
        let mut expected = Vec::with_capacity(dim_o * dim_l);
        let mut actual = Vec::with_capacity(dim_o * dim_l);
        for x in 0..dim_o {
            let col = l.column(x << extra);
            for (row, amp) in col.into_iter().enumerate() {
                actual.push(amp);
                expected.push(if row % (1 << extra) == 0 {
                    u.get(row >> extra, x)
                } else {
                    Complex64::new(0.0, 0.0)
                });
            }
        }
        return Ok(equal_up_to_phase(&expected, &actual, tol));
    }
    let p = classical_action(original)?;
    let l = classical_action(lowered)?;
    Ok((0..1usize << original.qubit_count()).all(|x| l.apply(x << extra) == p.apply(x) << extra))
}
