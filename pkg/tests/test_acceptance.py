"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line
that is also collected into the terminal summary."""

import itertools
import math
import time
from functools import lru_cache

import numpy as np

from conftest import ACCEPTANCE_LINES
from walkqram.cli import main
from walkqram.encoder import build_cascade
from walkqram.formats import format_memory
from walkqram.gates import CNOT, HADAMARD, RoundaboutSpec, cnot_from_cp, roundabout_path
from walkqram.query import MemorySpec, attach_cells, query_quantum
from walkqram.resources import count_scheme, scaling_table
from walkqram.schemes import hadamard_like_matrix, output_full, qram, qram_tilde, route_full
from walkqram.state import SparseState, basis, fidelity, make_input
from walkqram.verify import all_memories, expected_qram_tilde, nonempty_subsets, random_case, verify_qram

TOL = 1e-10
SIZES = [(n, m) for n in (1, 2, 3) for m in (1, 2)]


def record(tag, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@lru_cache(maxsize=None)
def criterion1_cases():
    """200 random configurations per size plus every n = m = 1 memory and address set."""
    rng = np.random.default_rng(1019)
    cases = []
    for n, m in SIZES:
        cases += [random_case(rng, n, m) for _ in range(200)]
    for mem in all_memories(1, 1):
        cases += [(mem, list(subset), None) for subset in nonempty_subsets(1)]
    return cases


def test_criterion_1_definition_oracle():
    start = time.perf_counter()
    worst = 1.0
    for mem, addrs, weights in criterion1_cases():
        worst = min(worst, verify_qram(mem, addrs, weights, "classical").fidelity)
    elapsed = time.perf_counter() - start
    record("AC1 oracle equivalence", worst >= 1 - TOL and elapsed < 60,
           f"{len(criterion1_cases())} configs, min fidelity {worst:.15f}, {elapsed:.1f}s")


def test_criterion_2_superposition_builder():
    mem = MemorySpec(3, 1, {1: 1, 3: 0, 6: 1, 0: 1}, {1, 3, 6})
    out = qram_tilde(mem)
    target = 1 / math.sqrt(3)
    fixed_ok = (len(out) == 3
               and all(abs(abs(a) - 0.577350269) <= 1e-9 and abs(abs(a) - target) <= 1e-9 for _, a in out.items())
               and {(t.address, t.data) for t, _ in out.items()} == {(1, 1), (3, 0), (6, 1)})
    rng = np.random.default_rng(4)
    random_ok = 0
    for _ in range(100):
        n, m = int(rng.integers(1, 5)), int(rng.integers(1, 3))
        k = int(rng.integers(1, 2 ** n + 1))
        des = {int(a) for a in rng.choice(2 ** n, size=k, replace=False)}
        cells = {a: int(rng.integers(0, 2 ** m)) for a in range(2 ** n)}
        mem = MemorySpec(n, m, cells, des)
        got = qram_tilde(mem)
        amp = 1 / math.sqrt(len(des))
        if (len(got) == len(des)
                and all(abs(abs(a) - amp) <= 1e-9 for _, a in got.items())
                and {(t.address, t.data) for t, _ in got.items()} == {(a, cells[a]) for a in des}
                and fidelity(got, expected_qram_tilde(mem)) >= 1 - TOL):
            random_ok += 1
    record("AC2 superposition builder", fixed_ok and random_ok == 100,
           f"set {{1,3,6}} {'ok' if fixed_ok else 'wrong'}, {random_ok}/100 random sets")


def test_criterion_3_round_trip_and_disentanglement():
    worst, stray = 1.0, 0
    for mem, addrs, weights in criterion1_cases():
        s = make_input(addrs, weights, mem.n, mem.m)
        back = output_full(route_full(s))
        worst = min(worst, fidelity(back, s))
        for state in (back, qram(mem, s)):
            stray += sum(1 for t, _ in state.items() if t.colors or t.bus != (0, 0))
    record("AC3 round trip + disentanglement", worst >= 1 - TOL and stray == 0,
           f"min fidelity {worst:.15f}, {stray} terms with colors or bus left set")


def _fan_out(layers, colors):
    for layer in layers:
        for j, k in layer.pairs:
            if (colors >> j) & 1:
                colors ^= 1 << k
    return colors


def test_criterion_4_encoder_cascade():
    problems = []
    for width in (2, 4, 8, 16):
        p = int(math.log2(width))
        for n in range(1, width):
            for level in range(n):
                layers = build_cascade(level, n, width - n)
                gates = sum(len(layer.pairs) for layer in layers)
                r = n - 1 - level
                if len(layers) != p or gates != width - 1:
                    problems.append((width, n, level, "shape"))
                if _fan_out(layers, 1 << r) != (1 << width) - 1 or _fan_out(layers, 0) != 0:
                    problems.append((width, n, level, "fan-out"))
    golden = build_cascade(2, 8, 8)[0].pairs == ((5, 13),)
    record("AC4 encoder cascade", not problems and golden,
           f"{len(problems)} bad (width, n, level) cases, n=8 m=8 level 2 first layer "
           f"{build_cascade(2, 8, 8)[0].pairs}")


def test_criterion_5_gate_algebra():
    cnot_err = float(np.max(np.abs(cnot_from_cp(0, 1) - CNOT)))
    h_err = float(np.max(np.abs(hadamard_like_matrix(1, 1) - HADAMARD)))
    inverse_ok = 0
    for slots in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        left, right = RoundaboutSpec("left", slots), RoundaboutSpec("right", slots)
        for path, color in itertools.product(slots, (0, 1)):
            if roundabout_path(right, color, roundabout_path(left, color, path)) == path:
                inverse_ok += 1
    record("AC5 gate algebra", cnot_err < 1e-12 and h_err < 1e-12 and inverse_ok == 18,
           f"CNOT err {cnot_err:.1e}, Hadamard err {h_err:.1e}, roundabout inverse {inverse_ok}/18")


def test_criterion_6_resource_scaling():
    depth_ratio, gate_ratio, qubits_ok = [], [], True
    for n in range(1, 9):
        for m in range(1, 9):
            rep = count_scheme("F", n, m)
            depth_ratio.append(rep.depth / (n * math.ceil(math.log2(n + m))))
            gate_ratio.append(rep.gate_count / ((n + m) * 2 ** n))
            qubits_ok &= rep.qubit_count == n + m
    rows = scaling_table(range(1, 9), range(1, 9))
    baseline_ok = all(r["bb_steps"] == r["n"] ** 2 + r["n"] * r["m"] and r["bb_qubits"] == 2 ** r["n"] + r["m"]
                      for r in rows)
    d_band, g_band = max(depth_ratio) / min(depth_ratio), max(gate_ratio) / min(gate_ratio)
    record("AC6 resource scaling", d_band <= 4 and g_band <= 4 and qubits_ok and baseline_ok,
           f"depth ratio in [{min(depth_ratio):.3f}, {max(depth_ratio):.3f}] (band {d_band:.2f}), "
           f"gate ratio in [{min(gate_ratio):.3f}, {max(gate_ratio):.3f}] (band {g_band:.2f})")


def test_criterion_7_quantum_query():
    rng = np.random.default_rng(7)
    worst, failures, trials = 1.0, 0, 0
    for m in (1, 2):
        n = 2
        for _ in range(50):
            v = rng.normal(size=2 ** m) + 1j * rng.normal(size=2 ** m)
            psi = v / np.linalg.norm(v)
            leaf = int(rng.integers(0, 2 ** n))
            mem = MemorySpec(n, m, {leaf: psi})
            start = attach_cells(SparseState(n, m, {basis(bus=(leaf, n)): 1}), mem)
            out = query_quantum(mem, start)
            data = np.zeros(2 ** m, dtype=complex)
            for t, a in out.items():
                data[t.data] += a
                failures += t.cells[leaf] != 0
            worst = min(worst, abs(np.vdot(psi, data)) ** 2)
            failures += not query_quantum(mem, out, require_empty_data=False).allclose(start)
            failures += not verify_qram(mem, [leaf], None, "quantum").passed
            trials += 1
    record("AC7 quantum query", worst >= 1 - TOL and failures == 0,
           f"{trials} cell vectors, min transfer fidelity {worst:.15f}, {failures} failed checks")


def _mutations(n, m):
    for level in range(n):
        for k in range(len(build_cascade(level, n, m))):
            yield f"skip-layer:{level}:{k}"
    for level in range(n):
        for w in range(2 ** level):
            yield f"flip-roundabout:{w}:{level}"


def _weights_arg(weights):
    return "--weights=" + ",".join(str(complex(w)) for w in weights)


def test_criterion_8_mutation_sensitivity(tmp_path, capsys):
    by_size = {}
    for case in criterion1_cases():
        by_size.setdefault((case[0].n, case[0].m), []).append(case)
    missed, total = [], 0
    for (n, m), cases in sorted(by_size.items()):
        for mutation in _mutations(n, m):
            total += 1
            caught = False
            for i, (mem, addrs, weights) in enumerate(cases):
                path = tmp_path / f"mem_{n}_{m}_{i}.mem"
                if not path.exists():
                    path.write_text(format_memory(mem))
                argv = ["verify", "--memory", str(path), "--addresses", ",".join(map(str, addrs)),
                        "--mutate", mutation]
                if weights is not None:
                    argv.append(_weights_arg(weights))
                if main(argv) == 1:
                    caught = True
                    break
            if not caught:
                missed.append((n, m, mutation))
    capsys.readouterr()
    record("AC8 mutation sensitivity", not missed,
           f"{total - len(missed)}/{total} mutations detected" + (f", missed {missed}" if missed else ""))
