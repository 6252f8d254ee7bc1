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

//! Qubit interaction graph and the greedy long-path ordering.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::qasm::Circuit;

/// Symmetric weight matrix: `weight(i, j)` counts the two-qubit gates acting
/// on the pair `{i, j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    qubits: usize,
    weights: Vec<u64>,
}

impl InteractionGraph {
    /// Builds a graph from a full row-major `qubits x qubits` matrix.
    pub fn from_weights(qubits: usize, weights: Vec<u64>) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::NoQubits);
        }
        assert_eq!(weights.len(), qubits * qubits, "weight matrix must be square");
        for i in 0..qubits {
            for j in i..qubits {
                let ok = if i == j {
                    weights[i * qubits + i] == 0
                } else {
                    weights[i * qubits + j] == weights[j * qubits + i]
                };
                if !ok {
                    return Err(Error::MalformedGraph { row: i, col: j });
                }
            }
        }
        Ok(InteractionGraph { qubits, weights })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn weight(&self, i: usize, j: usize) -> u64 {
        self.weights[i * self.qubits + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.weights[i * self.qubits..(i + 1) * self.qubits]
    }

    /// Sum over the upper triangle.
    pub fn total_weight(&self) -> u64 {
        (0..self.qubits)
            .flat_map(|i| (i + 1..self.qubits).map(move |j| (i, j)))
            .map(|(i, j)| self.weight(i, j))
            .sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.qubits {
            let row: Vec<String> = self.row(i).iter().map(u64::to_string).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

pub fn build_interaction_graph(circuit: &Circuit) -> Result<InteractionGraph> {
    let q = circuit.qubit_count();
    let mut weights = vec![0u64; q * q];
    for (index, gate) in circuit.gates().iter().enumerate() {
        match *gate.operands() {
            [_] => {}
            [i, j] => {
                weights[i * q + j] += 1;
                weights[j * q + i] += 1;
            }
            _ => {
                return Err(Error::ArityTooHigh {
                    index,
                    opcode: gate.opcode(),
                })
            }
        }
    }
    Ok(InteractionGraph { qubits: q, weights })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeInfo {
    pub degrees: Vec<usize>,
    pub max_degree_vertex: usize,
}

/// Number of distinct interaction partners per qubit; the maximum is taken at
/// the lowest index among ties.
pub fn degree_info(graph: &InteractionGraph) -> DegreeInfo {
    let degrees: Vec<usize> = (0..graph.qubits)
        .map(|i| graph.row(i).iter().filter(|&&w| w > 0).count())
        .collect();
    let mut max_degree_vertex = 0;
    for (i, &d) in degrees.iter().enumerate() {
        if d > degrees[max_degree_vertex] {
            max_degree_vertex = i;
        }
    }
    DegreeInfo {
        degrees,
        max_degree_vertex,
    }
}

/// An ordering of every qubit, used as the placement sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongPath(Vec<usize>);

impl LongPath {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &q in &order {
            if q >= n || std::mem::replace(&mut seen[q], true) {
                return Err(Error::NotAPermutation(n));
            }
        }
        Ok(LongPath(order))
    }

    pub fn identity(qubits: usize) -> Self {
        LongPath((0..qubits).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Greedy long path through the interaction graph.
///
/// Starts at the max-degree vertex and repeatedly follows the heaviest edge to
/// an unvisited neighbor of the last vertex, zeroing each traversed edge in a
/// working copy. When the last vertex has no unvisited neighbor the walk
/// restarts at the unvisited vertex whose row holds the largest remaining
/// weight, or at the lowest unvisited index once every such row is zero. All
/// ties go to the lowest index.
///
/// Traversed edges always touch a visited row, so the row maxima of unvisited
/// vertices never change and can be computed once; that keeps the whole walk
/// at O(q^2).
pub fn long_path(graph: &InteractionGraph) -> LongPath {
    let q = graph.qubits;
    let mut work = graph.weights.clone();
    let row_max: Vec<u64> = (0..q)
        .map(|i| graph.row(i).iter().copied().max().unwrap_or(0))
        .collect();
    let mut visited = vec![false; q];
    let mut order = Vec::with_capacity(q);

    let start = degree_info(graph).max_degree_vertex;
    visited[start] = true;
    order.push(start);

    while order.len() < q {
        let prev = *order.last().expect("path is non-empty");
        let mut next: Option<(usize, u64)> = None;
        for j in (0..q).filter(|&j| !visited[j]) {
            let w = work[prev * q + j];
            if w > 0 && next.is_none_or(|(_, best)| w > best) {
                next = Some((j, w));
            }
        }
        let chosen = match next {
            Some((j, _)) => {
                work[prev * q + j] = 0;
                work[j * q + prev] = 0;
                j
            }
            None => {
                let mut best: Option<usize> = None;
                for r in (0..q).filter(|&r| !visited[r]) {
                    if best.is_none_or(|b| row_max[r] > row_max[b]) {
                        best = Some(r);
                    }
                }
                best.expect("an unvisited vertex remains")
            }
        };
        visited[chosen] = true;
        order.push(chosen);
    }
    LongPath(order)
}
