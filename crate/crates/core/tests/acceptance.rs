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

//! Acceptance suite. Runs without the libtest harness and prints one line per
//! criterion; exits nonzero if any criterion fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qmap::decompose::{decompose_fredkin, decompose_mct, decompose_toffoli, AncillaAllocation, DecomposeConfig};
use qmap::interaction::{long_path, InteractionGraph};
use qmap::metrics::{benchmark, nnc_cost_1d, run_pipeline, CircuitFamily, PipelineConfig, Strategy};
use qmap::placement::{Grid, PlacementConfig};
use qmap::qasm::{emit_qasm, parse_qasm};
use qmap::routing::{cancel_pairs, permutation_trace, route_circuit, route_gate, CancelWhitelist, RoutingConfig};
use qmap::verify::{circuit_unitary, classical_action, replay_adjacency, DenseUnitary};
use qmap::{Circuit, Gate, Opcode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{bfs_distance, random_circuit, random_grid, ROUTABLE};

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

const TOL: f64 = 1e-9;

fn corpus() -> Vec<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    (0..1000)
        .map(|_| {
            let q = rng.gen_range(4..=16);
            let n = rng.gen_range(10..=200);
            random_circuit(&mut rng, q, n, &ROUTABLE)
        })
        .collect()
}

fn routing(restore: bool, cancel: bool) -> RoutingConfig {
    RoutingConfig {
        restore,
        cancel,
        ..RoutingConfig::default()
    }
}

fn placed_grid(circuit: &Circuit) -> Grid {
    let cfg = PipelineConfig::default();
    qmap::metrics::place(circuit, Strategy::LongPath, &cfg).unwrap().grid
}

fn adjacency(corpus: &[Circuit]) -> Outcome {
    let start = Instant::now();
    let mut runs = 0;
    for (k, c) in corpus.iter().enumerate() {
        let grid = placed_grid(c);
        for restore in [true, false] {
            for cancel in [true, false] {
                let routed =
                    route_circuit(c, &grid, &routing(restore, cancel)).map_err(|e| format!("circuit {k}: {e}"))?;
                if let qmap::verify::AdjacencyVerdict::Violation { gate_index, reason } = replay_adjacency(&routed) {
                    return Err(format!(
                        "circuit {k} restore={restore} cancel={cancel} gate {gate_index}: {reason}"
                    ));
                }
                runs += 1;
            }
        }
    }
    let took = start.elapsed();
    if took > Duration::from_secs(10) {
        return Err(format!("took {took:.2?}, limit 10s"));
    }
    Ok(format!("{runs} routed circuits replayed in {took:.2?}"))
}

fn swap_count_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for k in 0..10_000 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        if rows * cols < 2 {
            continue;
        }
        let qubits = rng.gen_range(2..=rows * cols);
        let mut grid = random_grid(&mut rng, rows, cols, qubits);
        let i = rng.gen_range(0..qubits);
        let j = (i + rng.gen_range(1..qubits)) % qubits;
        let (a, b) = (grid.position(i).unwrap(), grid.position(j).unwrap());
        let expect = bfs_distance(rows, cols, a, b) - 1;
        let (forward, _) = route_gate(&mut grid, &Gate::cnot(i, j)).map_err(|e| e.to_string())?;
        if forward.len() != expect {
            return Err(format!(
                "instance {k}: {rows}x{cols} {a}->{b}: {} swaps, BFS says {expect}",
                forward.len()
            ));
        }
    }
    Ok("10000 instances match BFS - 1".into())
}

fn restore_correctness(corpus: &[Circuit]) -> Outcome {
    for (k, c) in corpus.iter().enumerate() {
        let routed = route_circuit(c, &placed_grid(c), &routing(true, false)).map_err(|e| e.to_string())?;
        if routed.final_grid != routed.initial_grid {
            return Err(format!("circuit {k}: final grid differs from initial"));
        }
    }
    Ok(format!("{} circuits return to their placement", corpus.len()))
}

fn cancellation_soundness(corpus: &[Circuit]) -> Outcome {
    let whitelist = CancelWhitelist::default();
    let mut dense = 0;
    for (k, c) in corpus.iter().enumerate() {
        let grid = placed_grid(c);
        for restore in [true, false] {
            let raw = route_circuit(c, &grid, &routing(restore, false)).map_err(|e| e.to_string())?;
            let cancelled = cancel_pairs(&raw.circuit, &whitelist);
            let before = permutation_trace(&raw.circuit, &raw.initial_grid).map_err(|e| e.to_string())?;
            let after = permutation_trace(&cancelled, &raw.initial_grid).map_err(|e| e.to_string())?;
            if before != after {
                return Err(format!("circuit {k} restore={restore}: permutation changed"));
            }
            if cancel_pairs(&cancelled, &whitelist) != cancelled {
                return Err(format!("circuit {k} restore={restore}: not idempotent"));
            }
            let routed = route_circuit(c, &grid, &routing(restore, true)).map_err(|e| e.to_string())?;
            if routed.swaps_remaining > routed.swaps_inserted {
                return Err(format!(
                    "circuit {k}: {} swaps after > {} raw",
                    routed.swaps_remaining, routed.swaps_inserted
                ));
            }
            if routed.circuit != cancelled {
                return Err(format!(
                    "circuit {k} restore={restore}: routed output differs from cancel_pairs"
                ));
            }
            if raw.circuit.qubit_count() <= 4 {
                let u0 = circuit_unitary(&raw.circuit).map_err(|e| e.to_string())?;
                let u1 = circuit_unitary(&cancelled).map_err(|e| e.to_string())?;
                if !u0.approx_eq_up_to_phase(&u1, TOL) {
                    return Err(format!("circuit {k} restore={restore}: unitary changed"));
                }
                dense += 1;
            }
        }
    }
    Ok(format!("{} runs checked, {dense} by unitary", corpus.len() * 2))
}

fn repeated_gate_swaps() -> Outcome {
    let mut notes = Vec::new();
    for d in 2..=5usize {
        // q0 at the left end of a line, q1 at distance d
        let mut cells = vec![None; d + 1];
        cells[0] = Some(0);
        cells[d] = Some(1);
        for (k, c) in cells.iter_mut().enumerate().take(d).skip(1) {
            *c = Some(k + 1);
        }
        let grid = Grid::from_cells(1, d + 1, cells).map_err(|e| e.to_string())?;
        let circuit = Circuit::new(d + 1, vec![Gate::cv(0, 1), Gate::cv(0, 1)]).map_err(|e| e.to_string())?;
        let with = route_circuit(&circuit, &grid, &routing(true, true)).map_err(|e| e.to_string())?;
        let without = route_circuit(&circuit, &grid, &routing(true, false)).map_err(|e| e.to_string())?;
        let count = |c: &Circuit| c.gates().iter().filter(|g| g.opcode() == Opcode::Swap).count();
        let (a, b) = (count(&with.circuit), count(&without.circuit));
        if a != 2 * (d - 1) || b != 4 * (d - 1) {
            return Err(format!("d={d}: {a} swaps with cancel, {b} without"));
        }
        notes.push(format!("d={d}:{a}/{b}"));
    }
    Ok(notes.join(" "))
}

fn permutation_matrix(qubits: usize, f: impl Fn(usize) -> usize) -> DenseUnitary {
    let dim = 1 << qubits;
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        data[f(col) * dim + col] = Complex64::new(1.0, 0.0);
    }
    DenseUnitary::from_rows(qubits, data)
}

/// Value of qubit `q` in basis index `x` of an `n`-qubit register; qubit 0 is
/// the most significant bit.
fn bit(x: usize, n: usize, q: usize) -> usize {
    (x >> (n - 1 - q)) & 1
}

fn decomposition_equivalence() -> Outcome {
    let start = Instant::now();
    let toffoli_target = permutation_matrix(3, |x| if x >= 6 { x ^ 1 } else { x });
    let fredkin_target = permutation_matrix(3, |x| match x {
        5 => 6,
        6 => 5,
        _ => x,
    });
    let lowered = Circuit::new(3, decompose_toffoli(&Gate::toffoli(0, 1, 2)).unwrap()).unwrap();
    if !circuit_unitary(&lowered)
        .unwrap()
        .approx_eq_up_to_phase(&toffoli_target, TOL)
    {
        return Err("toffoli lowering differs from target".into());
    }
    let lowered = Circuit::new(3, decompose_fredkin(&Gate::fredkin(0, 1, 2)).unwrap()).unwrap();
    if !circuit_unitary(&lowered)
        .unwrap()
        .approx_eq_up_to_phase(&fredkin_target, TOL)
    {
        return Err("fredkin lowering differs from target".into());
    }
    for k in [3usize, 4] {
        let anc = AncillaAllocation::required(k);
        let n = k + 1 + anc;
        let operands: Vec<usize> = (0..=k).collect();
        let gate = Gate::new(Opcode::Mct, operands).unwrap();
        let chain = decompose_mct(&gate, &AncillaAllocation::new(k + 1, anc)).map_err(|e| e.to_string())?;
        let action = classical_action(&Circuit::new(n, chain).unwrap()).map_err(|e| e.to_string())?;
        for x in 0..(1usize << n) {
            if (k + 1..n).any(|a| bit(x, n, a) == 1) {
                continue;
            }
            let all = (0..k).all(|c| bit(x, n, c) == 1);
            let expect = if all { x ^ (1 << (n - 1 - k)) } else { x };
            if action.apply(x) != expect {
                return Err(format!(
                    "mct k={k}: input {x:0n$b} gives {:0n$b}, expected {expect:0n$b}",
                    action.apply(x)
                ));
            }
        }
        // same chain fully lowered to two-qubit gates, when small enough to simulate
        if n <= qmap::verify::DENSE_QUBIT_LIMIT {
            let full = qmap::decompose::lower_circuit(
                &Circuit::new(k + 1, vec![gate.clone()]).unwrap(),
                DecomposeConfig::full(),
            )
            .map_err(|e| e.to_string())?;
            let u = circuit_unitary(&full).unwrap();
            let target = circuit_unitary(
                &Circuit::new(n, decompose_mct(&gate, &AncillaAllocation::new(k + 1, anc)).unwrap()).unwrap(),
            )
            .unwrap();
            for x in (0..(1usize << n)).filter(|x| x & ((1 << anc) - 1) == 0) {
                let diff = u
                    .column(x)
                    .iter()
                    .zip(target.column(x))
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                if diff > TOL {
                    return Err(format!("mct k={k}: lowered column {x} off by {diff:e}"));
                }
            }
        }
    }
    let took = start.elapsed();
    if took > Duration::from_secs(5) {
        return Err(format!("took {took:.2?}, limit 5s"));
    }
    Ok(format!("toffoli, fredkin, mct k=3,4 equivalent in {took:.2?}"))
}

fn long_path_structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut disconnected = 0;
    for k in 0..1000 {
        let q = rng.gen_range(1..=24);
        let density = rng.gen_range(0.0..0.6);
        let mut w = vec![0u64; q * q];
        for i in 0..q {
            for j in i + 1..q {
                if rng.gen_bool(density) {
                    let v = rng.gen_range(1..=5);
                    w[i * q + j] = v;
                    w[j * q + i] = v;
                }
            }
        }
        if !connected(q, &w) {
            disconnected += 1;
        }
        let graph = InteractionGraph::from_weights(q, w.clone()).map_err(|e| e.to_string())?;
        let path = long_path(&graph);
        let mut seen = vec![false; q];
        for &v in path.order() {
            if v >= q || std::mem::replace(&mut seen[v], true) {
                return Err(format!("graph {k}: {:?} is not a permutation", path.order()));
            }
        }
        if path.len() != q {
            return Err(format!("graph {k}: length {} for {q} vertices", path.len()));
        }
        let degree = |i: usize| (0..q).filter(|&j| w[i * q + j] > 0).count();
        let max = (0..q).map(degree).max().unwrap();
        let first = (0..q).find(|&i| degree(i) == max).unwrap();
        if path.order()[0] != first {
            return Err(format!("graph {k}: starts at {}, expected {first}", path.order()[0]));
        }
    }
    Ok(format!("1000 graphs, {disconnected} disconnected"))
}

fn connected(q: usize, w: &[u64]) -> bool {
    let mut seen = vec![false; q];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for u in 0..q {
            if w[v * q + u] > 0 && !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn heuristic_benefit() -> Outcome {
    let start = Instant::now();
    let table =
        benchmark(&CircuitFamily::skewed(9, 100), 200, 2024, &PipelineConfig::default()).map_err(|e| e.to_string())?;
    let row = |s: &str| table.row(s).cloned().ok_or(format!("missing row {s}"));
    let (lp, id, rnd) = (row("longpath")?, row("identity")?, row("random")?);
    let took = start.elapsed();
    let summary = format!(
        "mean longpath {:.2} identity {:.2}; median longpath {} random {}; {took:.2?}",
        lp.mean_swaps_final, id.mean_swaps_final, lp.median_swaps_final, rnd.median_swaps_final
    );
    if lp.mean_swaps_final > id.mean_swaps_final || lp.median_swaps_final > rnd.median_swaps_final {
        return Err(summary);
    }
    if took > Duration::from_secs(60) {
        return Err(format!("{summary}; limit 60s"));
    }
    Ok(summary)
}

fn nnc_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let ops = [
        Opcode::H,
        Opcode::T,
        Opcode::Cnot,
        Opcode::Cv,
        Opcode::Cvdg,
        Opcode::Swap,
    ];
    for k in 0..1000 {
        let q = rng.gen_range(3..=20);
        let n = rng.gen_range(0..=150);
        let circuit = random_circuit(&mut rng, q, n, &ops);
        let x = rng.gen_range(1..=7u64);
        let mut expect = 0u64;
        for g in circuit.gates() {
            if g.arity() == 2 {
                let (a, b) = (g.operands()[0], g.operands()[1]);
                expect += (a.max(b) - a.min(b) - 1) as u64 * x;
            }
        }
        let got = nnc_cost_1d(&circuit, x).map_err(|e| e.to_string())?;
        if got != expect {
            return Err(format!("circuit {k}: {got} != {expect}"));
        }
    }
    Ok("1000 circuits match the direct sum".into())
}

fn pipeline_bytes(text: &str) -> Result<String, String> {
    let circuit = parse_qasm(text).map_err(|e| e.to_string())?;
    let cfg = PipelineConfig {
        decompose: Some(DecomposeConfig::full()),
        placement: PlacementConfig::default(),
        routing: RoutingConfig::default(),
    };
    let mut out = String::new();
    for s in [Strategy::LongPath, Strategy::Identity, Strategy::Random(7)] {
        let run = run_pipeline(&circuit, s, &cfg).map_err(|e| e.to_string())?;
        out += &run.placement.grid.to_csv();
        out += &emit_qasm(&run.routed.circuit);
        out += &run.report.to_json();
    }
    Ok(out)
}

fn binary_bytes(path: &std::path::Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qmap"))
        .args(["run", "--decompose", "--report", "json", "--annotate", "-i"])
        .arg(path)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{}: exit {:?}", path.display(), out.status.code()));
    }
    let mut bytes = out.stdout;
    bytes.extend(out.stderr);
    Ok(bytes)
}

fn determinism() -> Outcome {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let fixtures = common::fixtures();
    if fixtures.is_empty() {
        return Err("no fixtures".into());
    }
    for (name, text) in &fixtures {
        if pipeline_bytes(text)? != pipeline_bytes(text)? {
            return Err(format!("{name}: library output differs between runs"));
        }
        let path = dir.join(name);
        if binary_bytes(&path)? != binary_bytes(&path)? {
            return Err(format!("{name}: binary output differs between runs"));
        }
    }
    Ok(format!("{} fixtures, library and binary", fixtures.len()))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<(&str, Check)> = vec![
        ("adjacency invariant", Box::new(|| adjacency(&corpus))),
        ("per-gate swap count", Box::new(swap_count_oracle)),
        ("restore correctness", Box::new(|| restore_correctness(&corpus))),
        ("cancellation soundness", Box::new(|| cancellation_soundness(&corpus))),
        ("repeated distant gate", Box::new(repeated_gate_swaps)),
        ("decomposition equivalence", Box::new(decomposition_equivalence)),
        ("long path structure", Box::new(long_path_structure)),
        ("heuristic benefit", Box::new(heuristic_benefit)),
        ("nnc formula", Box::new(nnc_formula)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
