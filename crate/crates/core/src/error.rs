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

use thiserror::Error;

use crate::qasm::{GateError, Opcode, ParseError};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error("a circuit needs at least one qubit")]
    NoQubits,
    #[error("expected a {expected} gate, found {found}")]
    WrongOpcode { expected: Opcode, found: Opcode },
    #[error("mct lowering needs at least 3 controls, found {0}")]
    TooFewControls(usize),
    #[error("mct with {controls} controls needs {needed} ancillas, {available} available")]
    InsufficientAncillas {
        controls: usize,
        needed: usize,
        available: usize,
    },
    #[error("ancilla q{0} is also an operand of the gate")]
    AncillaCollision(usize),
    #[error("mct lowering requires three-qubit lowering to be enabled")]
    InvalidDecomposeConfig,
    #[error("gate {index} ({opcode}) has arity > 2; pass --decompose")]
    ArityTooHigh { index: usize, opcode: Opcode },
    #[error("interaction matrix is not symmetric with zero diagonal at ({row}, {col})")]
    MalformedGraph { row: usize, col: usize },
    #[error("ordering is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("grid {rows}x{cols} cannot hold {qubits} qubits")]
    GridTooSmall { rows: usize, cols: usize, qubits: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("qubit q{0} is not placed on the grid")]
    Unplaced(usize),
    #[error("swap at gate {index} acts on non-adjacent cells")]
    NonAdjacentSwap { index: usize },
    #[error("{0} is not self-inverse and cannot be pair-cancelled")]
    NotSelfInverse(Opcode),
    #[error("{qubits} qubits exceed the simulation limit of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },
    #[error("{0} is not a classical reversible gate")]
    NonClassical(Opcode),
}
