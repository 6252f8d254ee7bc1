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

//! Placement and SWAP routing of quantum circuits on nearest-neighbor grids.
//!
//! The pipeline reads a circuit in a small line-oriented QASM dialect
//! ([`qasm`]), optionally lowers three-qubit and multi-controlled gates
//! ([`decompose`]), builds the qubit interaction graph and a greedy long-path
//! ordering ([`interaction`]), lays that ordering out on a grid in a spiral
//! ([`placement`]), and inserts SWAP gates so every two-qubit gate acts on
//! neighboring cells ([`routing`]). [`verify`] holds small exact simulators
//! used as oracles, and [`metrics`] ties it all together with cost reports and
//! a baseline benchmark.

pub mod cli;
pub mod decompose;
pub mod error;
pub mod interaction;
pub mod metrics;
pub mod placement;
pub mod qasm;
pub mod routing;
pub mod verify;

pub use error::{Error, Result};
pub use qasm::{Circuit, Gate, Opcode};
