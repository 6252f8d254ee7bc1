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

//! Cost accounting, the end-to-end pipeline, and the baseline benchmark.

use std::fmt::{self, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decompose::{lower_circuit, DecomposeConfig};
use crate::error::{Error, Result};
use crate::interaction::{build_interaction_graph, long_path, InteractionGraph, LongPath};
use crate::placement::{spiral_place, Grid, PlacementConfig};
use crate::qasm::{Circuit, Gate, Opcode};
use crate::routing::{route_circuit, RoutedCircuit, RoutingConfig};

/// Swap overhead of `circuit` on a line where wire `k` sits at position `k`:
/// each two-qubit gate on lines `a < b` costs `x * (b - a - 1)`.
pub fn nnc_cost_1d(circuit: &Circuit, x: u64) -> Result<u64> {
    let mut total = 0;
    for (index, gate) in circuit.gates().iter().enumerate() {
        match *gate.operands() {
            [_] => {}
            [a, b] => total += x * (a.abs_diff(b) as u64 - 1),
            _ => {
                return Err(Error::ArityTooHigh {
                    index,
                    opcode: gate.opcode(),
                })
            }
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    LongPath,
    /// Qubit `k` takes the `k`-th spiral cell.
    Identity,
    /// A seeded uniform shuffle of the qubits along the spiral.
    Random(u64),
}

impl Strategy {
    pub fn label(&self) -> &'static str {
        match self {
            Strategy::LongPath => "longpath",
            Strategy::Identity => "identity",
            Strategy::Random(_) => "random",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Strategy::Random(s) => Some(*s),
            _ => None,
        }
    }

    pub fn ordering(&self, graph: &InteractionGraph) -> LongPath {
        match self {
            Strategy::LongPath => long_path(graph),
            Strategy::Identity => LongPath::identity(graph.qubits()),
            Strategy::Random(seed) => {
                let mut order: Vec<usize> = (0..graph.qubits()).collect();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
                LongPath::new(order).expect("shuffle of 0..q")
            }
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PipelineConfig {
    /// `None` leaves the circuit as is; wide gates are then rejected.
    pub decompose: Option<DecomposeConfig>,
    pub placement: PlacementConfig,
    pub routing: RoutingConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridDims {
    pub rows: usize,
    pub cols: usize,
}

/// Counts for one pipeline run. Serializes to the JSON report object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub strategy: &'static str,
    #[serde(rename = "grid")]
    pub grid_dims: GridDims,
    /// After lowering.
    pub gates_in: usize,
    pub gates_out: usize,
    pub two_qubit_gates: usize,
    #[serde(rename = "swaps_raw")]
    pub swaps_inserted_raw: usize,
    #[serde(rename = "swaps_final")]
    pub swaps_after_cancel: usize,
    /// Line cost of the placement order read as a 1D chain, one unit per
    /// swap.
    pub nnc_1d: u64,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub source_gates_removed: usize,
}

impl CostReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let seed = self.seed.map_or_else(|| "-".to_string(), |s| s.to_string());
        let rows: [(&str, String); 9] = [
            ("strategy", self.strategy.to_string()),
            ("grid", format!("{}x{}", self.grid_dims.rows, self.grid_dims.cols)),
            ("gates_in", self.gates_in.to_string()),
            ("gates_out", self.gates_out.to_string()),
            ("two_qubit_gates", self.two_qubit_gates.to_string()),
            ("swaps_raw", self.swaps_inserted_raw.to_string()),
            ("swaps_final", self.swaps_after_cancel.to_string()),
            ("nnc_1d", self.nnc_1d.to_string()),
            ("seed", seed),
        ];
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<16} {v}");
        }
        out
    }
}

/// Everything up to and including placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub lowered: Circuit,
    pub graph: InteractionGraph,
    pub path: LongPath,
    pub grid: Grid,
}

pub fn place(circuit: &Circuit, strategy: Strategy, cfg: &PipelineConfig) -> Result<Placement> {
    let lowered = match cfg.decompose {
        Some(d) => lower_circuit(circuit, d)?,
        None => circuit.clone(),
    };
    if let Some((index, opcode)) = lowered.first_wide_gate() {
        return Err(Error::ArityTooHigh { index, opcode });
    }
    let graph = build_interaction_graph(&lowered)?;
    let path = strategy.ordering(&graph);
    let grid = spiral_place(&path, &cfg.placement)?;
    Ok(Placement {
        lowered,
        graph,
        path,
        grid,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOutput {
    pub placement: Placement,
    pub routed: RoutedCircuit,
    pub report: CostReport,
}

/// Lower, place with `strategy`, route, and count.
pub fn run_pipeline(circuit: &Circuit, strategy: Strategy, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    let placement = place(circuit, strategy, cfg)?;
    let routed = route_circuit(&placement.lowered, &placement.grid, &cfg.routing)?;
    let report = cost_report(&placement.lowered, &placement.path, &routed, strategy)?;
    Ok(PipelineOutput {
        placement,
        routed,
        report,
    })
}

/// Routes against an explicit grid instead of a computed placement.
pub fn run_with_grid(circuit: &Circuit, grid: &Grid, cfg: &PipelineConfig) -> Result<(RoutedCircuit, CostReport)> {
    let lowered = match cfg.decompose {
        Some(d) => lower_circuit(circuit, d)?,
        None => circuit.clone(),
    };
    let routed = route_circuit(&lowered, grid, &cfg.routing)?;
    // placement order: qubits in row-major cell order
    let order: Vec<usize> = grid
        .cells()
        .iter()
        .flatten()
        .copied()
        .filter(|&q| q < lowered.qubit_count())
        .collect();
    let path = LongPath::new(order)?;
    let mut report = cost_report(&lowered, &path, &routed, Strategy::Identity)?;
    report.strategy = "grid";
    Ok((routed, report))
}

fn cost_report(lowered: &Circuit, path: &LongPath, routed: &RoutedCircuit, strategy: Strategy) -> Result<CostReport> {
    let mut line_of = vec![0; path.len()];
    for (pos, &q) in path.order().iter().enumerate() {
        line_of[q] = pos;
    }
    let on_line = Circuit::new(
        lowered.qubit_count(),
        lowered
            .gates()
            .iter()
            .map(|g| g.relabel(|q| line_of[q]))
            .collect::<std::result::Result<Vec<_>, _>>()?,
    )?;
    let (rows, cols) = routed.initial_grid.dims();
    Ok(CostReport {
        strategy: strategy.label(),
        grid_dims: GridDims { rows, cols },
        gates_in: lowered.len(),
        gates_out: routed.circuit.len(),
        two_qubit_gates: lowered.two_qubit_gate_count(),
        swaps_inserted_raw: routed.swaps_inserted,
        swaps_after_cancel: routed.swaps_remaining,
        nnc_1d: nnc_cost_1d(&on_line, 1)?,
        seed: strategy.seed(),
        source_gates_removed: routed.source_gates_removed,
    })
}

/// Random circuits of two-qubit gates whose interactions concentrate on a
/// few "hot" pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircuitFamily {
    pub qubits: usize,
    pub gates: usize,
    /// Fraction of all qubit pairs that are hot.
    pub hot_pair_fraction: f64,
    /// Fraction of gates drawn from the hot pairs.
    pub hot_gate_fraction: f64,
}

impl CircuitFamily {
    /// 80% of the gates on 20% of the pairs.
    pub fn skewed(qubits: usize, gates: usize) -> Self {
        CircuitFamily {
            qubits,
            gates,
            hot_pair_fraction: 0.2,
            hot_gate_fraction: 0.8,
        }
    }

    pub fn generate(&self, seed: u64) -> Circuit {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = self.qubits;
        let mut pairs: Vec<(usize, usize)> = (0..q).flat_map(|i| (i + 1..q).map(move |j| (i, j))).collect();
        let mut circuit = Circuit::empty(q.max(1)).expect("at least one qubit");
        if pairs.is_empty() {
            return circuit;
        }
        pairs.shuffle(&mut rng);
        let hot = ((pairs.len() as f64 * self.hot_pair_fraction).ceil() as usize).clamp(1, pairs.len());
        let (hot_pairs, cold_pairs) = pairs.split_at(hot);
        for _ in 0..self.gates {
            let pool = if cold_pairs.is_empty() || rng.gen_bool(self.hot_gate_fraction) {
                hot_pairs
            } else {
                cold_pairs
            };
            let (a, b) = pool[rng.gen_range(0..pool.len())];
            let (c, t) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            circuit
                .push(Gate::new(Opcode::Cnot, vec![c, t]).expect("distinct pair"))
                .expect("in range");
        }
        circuit
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyStats {
    pub strategy: &'static str,
    pub trials: usize,
    pub mean_swaps_raw: f64,
    pub mean_swaps_final: f64,
    pub median_swaps_final: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchTable {
    pub family: CircuitFamily,
    pub grid: Option<GridDims>,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<StrategyStats>,
}

impl BenchTable {
    pub fn row(&self, strategy: &str) -> Option<&StrategyStats> {
        self.rows.iter().find(|r| r.strategy == strategy)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "q={} gates={} trials={} seed={}\n{:<10} {:>12} {:>12} {:>12}\n",
            self.family.qubits,
            self.family.gates,
            self.trials,
            self.seed,
            "strategy",
            "mean_raw",
            "mean_final",
            "median_final"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<10} {:>12.3} {:>12.3} {:>12.3}",
                r.strategy, r.mean_swaps_raw, r.mean_swaps_final, r.median_swaps_final
            );
        }
        out
    }
}

fn median(values: &mut [usize]) -> f64 {
    values.sort_unstable();
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2] as f64
    } else {
        (values[n / 2 - 1] + values[n / 2]) as f64 / 2.0
    }
}

/// Seed of trial `k`: one ChaCha stream per benchmark seed.
fn trial_seeds(seed: u64, trials: usize) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| (rng.gen(), rng.gen())).collect()
}

/// Runs `trials` circuits from `family` through the longpath, identity, and
/// random strategies. `trials == 0` gives an empty table.
pub fn benchmark(family: &CircuitFamily, trials: usize, seed: u64, cfg: &PipelineConfig) -> Result<BenchTable> {
    let mut rows = Vec::new();
    if trials > 0 {
        let mut raw = [
            Vec::with_capacity(trials),
            Vec::with_capacity(trials),
            Vec::with_capacity(trials),
        ];
        let mut fin = raw.clone();
        for (circuit_seed, shuffle_seed) in trial_seeds(seed, trials) {
            let circuit = family.generate(circuit_seed);
            let strategies = [Strategy::LongPath, Strategy::Identity, Strategy::Random(shuffle_seed)];
            for (k, s) in strategies.into_iter().enumerate() {
                let report = run_pipeline(&circuit, s, cfg)?.report;
                raw[k].push(report.swaps_inserted_raw);
                fin[k].push(report.swaps_after_cancel);
            }
        }
        for (k, label) in ["longpath", "identity", "random"].into_iter().enumerate() {
            let mean = |v: &[usize]| v.iter().sum::<usize>() as f64 / trials as f64;
            rows.push(StrategyStats {
                strategy: label,
                trials,
                mean_swaps_raw: mean(&raw[k]),
                mean_swaps_final: mean(&fin[k]),
                median_swaps_final: median(&mut fin[k]),
            });
        }
    }
    let grid = match (cfg.placement.rows, cfg.placement.cols) {
        (None, None) => None,
        _ => cfg
            .placement
            .dims(family.qubits)
            .ok()
            .map(|(rows, cols)| GridDims { rows, cols }),
    };
    Ok(BenchTable {
        family: *family,
        grid,
        trials,
        seed,
        rows,
    })
}
