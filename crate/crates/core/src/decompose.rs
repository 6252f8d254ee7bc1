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

//! Lowering of three-qubit and multi-controlled gates to one- and two-qubit
//! gates.
//!
//! Toffoli becomes the five-gate controlled-V network, Fredkin becomes a
//! Toffoli framed by two CNOTs, and a `k`-control MCT (k >= 3) becomes a
//! V-chain of `2(k-2)+1` Toffolis over `k-2` ancillas that start and end in
//! |0>.

use crate::error::{Error, Result};
use crate::qasm::{Circuit, Gate, Opcode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecomposeConfig {
    lower_mct: bool,
    lower_three_qubit: bool,
}

impl DecomposeConfig {
    /// MCT lowering emits Toffolis, so it is only valid together with
    /// three-qubit lowering.
    pub fn new(lower_mct: bool, lower_three_qubit: bool) -> Result<Self> {
        if lower_mct && !lower_three_qubit {
            return Err(Error::InvalidDecomposeConfig);
        }
        Ok(DecomposeConfig {
            lower_mct,
            lower_three_qubit,
        })
    }

    /// Lower everything down to arity <= 2.
    pub fn full() -> Self {
        DecomposeConfig {
            lower_mct: true,
            lower_three_qubit: true,
        }
    }

    pub fn none() -> Self {
        DecomposeConfig {
            lower_mct: false,
            lower_three_qubit: false,
        }
    }

    pub fn lower_mct(&self) -> bool {
        self.lower_mct
    }

    pub fn lower_three_qubit(&self) -> bool {
        self.lower_three_qubit
    }
}

/// Fresh qubit indices appended after the original wires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AncillaAllocation {
    original_qubits: usize,
    ancilla_indices: Vec<usize>,
}

impl AncillaAllocation {
    pub fn new(original_qubits: usize, count: usize) -> Self {
        AncillaAllocation {
            original_qubits,
            ancilla_indices: (original_qubits..original_qubits + count).collect(),
        }
    }

    /// Ancillas needed by a `controls`-control MCT.
    pub fn required(controls: usize) -> usize {
        controls.saturating_sub(2)
    }

    pub fn original_qubits(&self) -> usize {
        self.original_qubits
    }

    pub fn ancilla_indices(&self) -> &[usize] {
        &self.ancilla_indices
    }

    pub fn total_qubits(&self) -> usize {
        self.original_qubits + self.ancilla_indices.len()
    }
}

fn expect_opcode(gate: &Gate, expected: Opcode) -> Result<()> {
    if gate.opcode() != expected {
        return Err(Error::WrongOpcode {
            expected,
            found: gate.opcode(),
        });
    }
    Ok(())
}

pub fn decompose_toffoli(gate: &Gate) -> Result<Vec<Gate>> {
    expect_opcode(gate, Opcode::Toffoli)?;
    let &[a, b, c] = gate.operands() else {
        unreachable!("toffoli arity is checked on construction")
    };
    Ok(vec![
        Gate::cv(b, c),
        Gate::cnot(a, b),
        Gate::cvdg(b, c),
        Gate::cnot(a, b),
        Gate::cv(a, c),
    ])
}

pub fn decompose_fredkin(gate: &Gate) -> Result<Vec<Gate>> {
    expect_opcode(gate, Opcode::Fredkin)?;
    let &[a, b, c] = gate.operands() else {
        unreachable!("fredkin arity is checked on construction")
    };
    let mut out = Vec::with_capacity(7);
    out.push(Gate::cnot(c, b));
    out.extend(decompose_toffoli(&Gate::toffoli(a, b, c))?);
    out.push(Gate::cnot(c, b));
    Ok(out)
}

/// V-chain lowering of an MCT into Toffolis.
///
/// With controls `c1..ck` and ancillas `f0..f(k-3)`: `f0 = c1 c2`,
/// `fi = f(i-1) c(i+2)`, then `toffoli(f(k-3), ck, target)`, then the chain is
/// uncomputed in reverse. Only the first `k-2` entries of `alloc` are used.
pub fn decompose_mct(gate: &Gate, alloc: &AncillaAllocation) -> Result<Vec<Gate>> {
    expect_opcode(gate, Opcode::Mct)?;
    let (target, controls) = gate
        .operands()
        .split_last()
        .expect("mct arity is checked on construction");
    let k = controls.len();
    if k < 3 {
        return Err(Error::TooFewControls(k));
    }
    let needed = AncillaAllocation::required(k);
    if alloc.ancilla_indices.len() < needed {
        return Err(Error::InsufficientAncillas {
            controls: k,
            needed,
            available: alloc.ancilla_indices.len(),
        });
    }
    let ancillas = &alloc.ancilla_indices[..needed];
    if let Some(&a) = ancillas.iter().find(|a| gate.operands().contains(a)) {
        return Err(Error::AncillaCollision(a));
    }

    let mut compute = Vec::with_capacity(needed);
    compute.push(Gate::toffoli(controls[0], controls[1], ancillas[0]));
    for i in 1..needed {
        compute.push(Gate::toffoli(ancillas[i - 1], controls[i + 1], ancillas[i]));
    }
    let mut out = compute.clone();
    out.push(Gate::toffoli(ancillas[needed - 1], controls[k - 1], *target));
    out.extend(compute.into_iter().rev());
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoweringStats {
    pub ancillas: usize,
    pub mct_lowered: usize,
    pub toffolis_from_mct: usize,
}

pub fn lower_circuit(circuit: &Circuit, cfg: DecomposeConfig) -> Result<Circuit> {
    lower_circuit_with_stats(circuit, cfg).map(|(c, _)| c)
}

/// Like [`lower_circuit`], also reporting how many ancillas and Toffolis the
/// MCT lowering introduced. Ancillas are shared across MCT instances, so the
/// count is the maximum any single gate needs.
pub fn lower_circuit_with_stats(circuit: &Circuit, cfg: DecomposeConfig) -> Result<(Circuit, LoweringStats)> {
    lower_with(circuit, cfg.lower_mct, cfg.lower_three_qubit)
}

/// Expands every MCT into Toffolis (plus ancillas) and leaves all other gates
/// alone. The result stays classical when the input is, so it can be checked
/// on basis states at widths where dense simulation is out of reach.
pub fn expand_mct(circuit: &Circuit) -> Result<(Circuit, LoweringStats)> {
    lower_with(circuit, true, false)
}

fn lower_with(circuit: &Circuit, lower_mct: bool, lower_three_qubit: bool) -> Result<(Circuit, LoweringStats)> {
    let mut stats = LoweringStats::default();
    if lower_mct {
        stats.ancillas = circuit
            .gates()
            .iter()
            .filter(|g| g.opcode() == Opcode::Mct)
            .map(|g| AncillaAllocation::required(g.arity() - 1))
            .max()
            .unwrap_or(0);
    }
    let alloc = AncillaAllocation::new(circuit.qubit_count(), stats.ancillas);
    let mut out = Circuit::empty(alloc.total_qubits())?;

    let push_three = |out: &mut Circuit, gate: Gate| -> Result<()> {
        let lowered = match gate.opcode() {
            Opcode::Toffoli if lower_three_qubit => decompose_toffoli(&gate)?,
            Opcode::Fredkin if lower_three_qubit => decompose_fredkin(&gate)?,
            _ => vec![gate],
        };
        lowered.into_iter().try_for_each(|g| out.push(g))
    };

    for gate in circuit.gates() {
        if gate.opcode() == Opcode::Mct && lower_mct {
            stats.mct_lowered += 1;
            let toffolis = if gate.arity() == 3 {
                let &[a, b, t] = gate.operands() else { unreachable!() };
                vec![Gate::toffoli(a, b, t)]
            } else {
                decompose_mct(gate, &alloc)?
            };
            stats.toffolis_from_mct += toffolis.len();
            for t in toffolis {
                push_three(&mut out, t)?;
            }
        } else {
            push_three(&mut out, gate.clone())?;
        }
    }
    Ok((out, stats))
}
