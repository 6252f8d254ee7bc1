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

//! The line-oriented circuit dialect.
//!
//! ```text
//! qubits 3
//! # comment
//! h q0
//! cnot q0,q1
//! toffoli q0,q1,q2
//! ```
//!
//! The first line declares the qubit count. Every other line is blank, a
//! `#` comment, or one instruction: an opcode, a single space, and a
//! comma-separated operand list. Lines end in LF; CRLF is accepted on input.
//! Swap operands are stored in ascending order so that two textually
//! identical swap lines always denote the same operation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Opcode {
    X,
    H,
    T,
    Tdg,
    S,
    Sdg,
    Cnot,
    Cv,
    Cvdg,
    Swap,
    Toffoli,
    Fredkin,
    Mct,
}

impl Opcode {
    pub const ALL: [Opcode; 13] = [
        Opcode::X,
        Opcode::H,
        Opcode::T,
        Opcode::Tdg,
        Opcode::S,
        Opcode::Sdg,
        Opcode::Cnot,
        Opcode::Cv,
        Opcode::Cvdg,
        Opcode::Swap,
        Opcode::Toffoli,
        Opcode::Fredkin,
        Opcode::Mct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Opcode::X => "x",
            Opcode::H => "h",
            Opcode::T => "t",
            Opcode::Tdg => "tdg",
            Opcode::S => "s",
            Opcode::Sdg => "sdg",
            Opcode::Cnot => "cnot",
            Opcode::Cv => "cv",
            Opcode::Cvdg => "cvdg",
            Opcode::Swap => "swap",
            Opcode::Toffoli => "toffoli",
            Opcode::Fredkin => "fredkin",
            Opcode::Mct => "mct",
        }
    }

    /// Minimum operand count; equal to the exact count for every opcode but
    /// `mct`.
    pub fn min_arity(self) -> usize {
        match self {
            Opcode::X | Opcode::H | Opcode::T | Opcode::Tdg | Opcode::S | Opcode::Sdg => 1,
            Opcode::Cnot | Opcode::Cv | Opcode::Cvdg | Opcode::Swap => 2,
            Opcode::Toffoli | Opcode::Fredkin | Opcode::Mct => 3,
        }
    }

    pub fn accepts_arity(self, n: usize) -> bool {
        match self {
            Opcode::Mct => n >= 3,
            _ => n == self.min_arity(),
        }
    }

    pub fn is_self_inverse(self) -> bool {
        matches!(
            self,
            Opcode::X | Opcode::H | Opcode::Cnot | Opcode::Swap | Opcode::Toffoli | Opcode::Fredkin | Opcode::Mct
        )
    }

    /// Gates that permute computational basis states.
    pub fn is_classical(self) -> bool {
        matches!(
            self,
            Opcode::X | Opcode::Cnot | Opcode::Swap | Opcode::Toffoli | Opcode::Fredkin | Opcode::Mct
        )
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown opcode `{0}`")]
pub struct UnknownOpcode(pub String);

impl FromStr for Opcode {
    type Err = UnknownOpcode;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Opcode::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| UnknownOpcode(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("{opcode} takes {expected} operands, found {found}")]
    Arity {
        opcode: Opcode,
        expected: &'static str,
        found: usize,
    },
    #[error("duplicate operand q{0}")]
    DuplicateOperand(usize),
    #[error("operand q{operand} out of range for {qubits} qubits")]
    OperandOutOfRange { operand: usize, qubits: usize },
}

/// One instruction: an opcode applied to distinct qubits.
///
/// For controlled gates the controls come first and the target last. For
/// `fredkin` the first operand is the control and the other two are swapped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    opcode: Opcode,
    operands: Vec<usize>,
}

impl Gate {
    pub fn new(opcode: Opcode, mut operands: Vec<usize>) -> std::result::Result<Self, GateError> {
        if !opcode.accepts_arity(operands.len()) {
            let expected = match opcode.min_arity() {
                1 => "1",
                2 => "2",
                _ if opcode == Opcode::Mct => "at least 3",
                _ => "3",
            };
            return Err(GateError::Arity {
                opcode,
                expected,
                found: operands.len(),
            });
        }
        for (k, &a) in operands.iter().enumerate() {
            if operands[..k].contains(&a) {
                return Err(GateError::DuplicateOperand(a));
            }
        }
        if opcode == Opcode::Swap {
            operands.sort_unstable();
        }
        Ok(Gate { opcode, operands })
    }

    fn fixed(opcode: Opcode, operands: Vec<usize>) -> Self {
        match Gate::new(opcode, operands) {
            Ok(g) => g,
            Err(e) => panic!("{e}"),
        }
    }

    /// Panics if `a == b`; likewise for the other fixed-arity constructors.
    pub fn swap(a: usize, b: usize) -> Self {
        Gate::fixed(Opcode::Swap, vec![a, b])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::fixed(Opcode::Cnot, vec![control, target])
    }

    pub fn cv(control: usize, target: usize) -> Self {
        Gate::fixed(Opcode::Cv, vec![control, target])
    }

    pub fn cvdg(control: usize, target: usize) -> Self {
        Gate::fixed(Opcode::Cvdg, vec![control, target])
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Self {
        Gate::fixed(Opcode::Toffoli, vec![c0, c1, target])
    }

    pub fn fredkin(control: usize, a: usize, b: usize) -> Self {
        Gate::fixed(Opcode::Fredkin, vec![control, a, b])
    }

    pub fn single(opcode: Opcode, qubit: usize) -> Self {
        Gate::fixed(opcode, vec![qubit])
    }

    pub fn opcode(&self) -> Opcode {
        self.opcode
    }

    pub fn operands(&self) -> &[usize] {
        &self.operands
    }

    pub fn arity(&self) -> usize {
        self.operands.len()
    }

    /// Rewrites every operand through `map`. Swap operands are re-normalized.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> std::result::Result<Gate, GateError> {
        Gate::new(self.opcode, self.operands.iter().map(|&q| map(q)).collect())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.opcode)?;
        for (k, q) in self.operands.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "q{q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    qubit_count: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubit_count: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::empty(qubit_count)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn empty(qubit_count: usize) -> Result<Self> {
        if qubit_count == 0 {
            return Err(Error::NoQubits);
        }
        Ok(Circuit {
            qubit_count,
            gates: Vec::new(),
        })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&q) = gate.operands.iter().find(|&&q| q >= self.qubit_count) {
            return Err(GateError::OperandOutOfRange {
                operand: q,
                qubits: self.qubit_count,
            }
            .into());
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.arity() == 2).count()
    }

    /// Index and opcode of the first gate with more than two operands.
    pub fn first_wide_gate(&self) -> Option<(usize, Opcode)> {
        self.gates
            .iter()
            .position(|g| g.arity() > 2)
            .map(|k| (k, self.gates[k].opcode))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    UnknownOpcode(#[from] UnknownOpcode),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error("a circuit needs at least one qubit")]
    NoQubits,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

fn parse_int(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn parse_qasm(text: &str) -> std::result::Result<Circuit, ParseError> {
    let mut lines = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(k, l)| (k + 1, l));

    let (_, header) = lines.next().unwrap_or((1, ""));
    let qubits = header
        .strip_prefix("qubits ")
        .and_then(parse_int)
        .ok_or_else(|| syntax(1, "expected header `qubits <count>`"))?;
    if qubits == 0 {
        return Err(ParseError {
            line: 1,
            kind: ParseErrorKind::NoQubits,
        });
    }

    let mut gates = Vec::new();
    for (line, text) in lines {
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let (op, args) = text
            .split_once(' ')
            .ok_or_else(|| syntax(line, "expected `<opcode> <operands>`"))?;
        let opcode: Opcode = op
            .parse()
            .map_err(|e: UnknownOpcode| ParseError { line, kind: e.into() })?;
        let operands = args
            .split(',')
            .map(|a| a.strip_prefix('q').and_then(parse_int))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| syntax(line, format!("malformed operand list `{args}`")))?;
        let gate_err = |e: GateError| ParseError { line, kind: e.into() };
        let gate = Gate::new(opcode, operands).map_err(gate_err)?;
        if let Some(&q) = gate.operands().iter().find(|&&q| q >= qubits) {
            return Err(gate_err(GateError::OperandOutOfRange { operand: q, qubits }));
        }
        gates.push(gate);
    }
    Ok(Circuit {
        qubit_count: qubits,
        gates,
    })
}

pub fn emit_qasm(circuit: &Circuit) -> String {
    emit_qasm_with_comments(circuit, &BTreeMap::new())
}

/// Emits `circuit`, writing each entry of `comments` as a `# ...` line
/// directly before the gate at that index. Comments keyed past the last gate
/// go at the end.
pub fn emit_qasm_with_comments(circuit: &Circuit, comments: &BTreeMap<usize, Vec<String>>) -> String {
    use std::fmt::Write;

    let mut out = format!("qubits {}\n", circuit.qubit_count);
    let write_notes = |out: &mut String, notes: &[String]| {
        for note in notes {
            let _ = writeln!(out, "# {note}");
        }
    };
    for (k, gate) in circuit.gates.iter().enumerate() {
        if let Some(notes) = comments.get(&k) {
            write_notes(&mut out, notes);
        }
        let _ = writeln!(out, "{gate}");
    }
    for notes in comments.range(circuit.gates.len()..).map(|(_, n)| n) {
        write_notes(&mut out, notes);
    }
    out
}
