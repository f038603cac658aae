"""Exact depth, gate and qubit counts, next to the bucket-brigade baseline.

Depth is the number of conflict-free gate layers in the constructed circuit.
Gate count is the number of devices placed on the trees: a layer at tree
level ``l`` places its gates once per node of that level.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import asdict, dataclass, field

from .circuit import Circuit
from .query import MemorySpec, query_circuit
from .schemes import output_circuit, qram_circuit, qram_tilde_circuit, routing_circuit, routing_tilde_circuit

SCHEMES = ("F", "Q", "F_dagger", "F_tilde", "Q_tilde", "qram", "qram_tilde")


@dataclass(frozen=True)
class ResourceReport:
    scheme: str
    n: int
    m: int
    depth: int
    gate_count: int
    qubit_count: int
    baseline_steps: int
    baseline_qubits: int
    baseline_gates: int
    by_kind: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("depth", "gate_count", "qubit_count"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def bucket_brigade_baseline(n: int, m: int) -> tuple[int, int, int]:
    """Steps, qubits and gates of the bucket-brigade design, as order formulas."""
    return n * n + n * m, 2 ** n + m, 2 ** n


def worst_case_memory(n: int, m: int, designated=None) -> MemorySpec:
    """Every cell stores the all-ones word, so every query device is present."""
    ones = 2 ** m - 1
    return MemorySpec(n, m, {a: ones for a in range(2 ** n)},
                      designated=designated if designated is not None else range(2 ** n))


def scheme_circuit(scheme: str, n: int, m: int, memory: MemorySpec | None = None,
                   designated=None) -> Circuit:
    if memory is None:
        memory = worst_case_memory(n, m, designated)
    elif designated is not None:
        memory = MemorySpec(memory.n, memory.m, memory.cells, designated)
    designated = memory.designated if memory.designated else range(2 ** n)
    if scheme == "F":
        return routing_circuit(n, m)
    if scheme == "F_dagger":
        return output_circuit(n, m)
    if scheme == "Q":
        return query_circuit(memory, "quantum" if memory.has_quantum_cells else "classical")
    if scheme == "Q_tilde":
        return query_circuit(memory, "tilde")
    if scheme == "F_tilde":
        return routing_tilde_circuit(designated, n, m)
    if scheme == "qram":
        return qram_circuit(memory, "quantum" if memory.has_quantum_cells else "classical")
    if scheme == "qram_tilde":
        return qram_tilde_circuit(memory)
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def report_for(circuit: Circuit, scheme: str = "custom") -> ResourceReport:
    events = circuit.events()
    steps, qubits, gates = bucket_brigade_baseline(circuit.n, circuit.m)
    return ResourceReport(
        scheme=scheme, n=circuit.n, m=circuit.m,
        depth=circuit.depth,
        gate_count=len(events),
        qubit_count=circuit.n + circuit.m,
        baseline_steps=steps, baseline_qubits=qubits, baseline_gates=gates,
        by_kind=dict(sorted(Counter(e.kind for e in events).items())),
    )


def count_scheme(scheme: str, n: int, m: int, memory: MemorySpec | None = None,
                 designated=None) -> ResourceReport:
    """Exact counts for one scheme.

    Without ``memory`` the query layers are counted for the worst case (all
    cells hold the all-ones word) and the splitters of ``F_tilde`` for every
    address designated.
    """
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    return report_for(scheme_circuit(scheme, n, m, memory, designated), scheme)


# comparison table -----------------------------------------------------------

COLUMNS = ("n", "m", "depth", "gates", "qubits", "bb_steps", "bb_qubits")


def scaling_table(n_range, m_range, scheme: str = "F") -> list[dict[str, int]]:
    """One row per ``(n, m)``: counts for ``scheme`` and the baseline ``n^2+nm``, ``2^n+m``."""
    rows = []
    for n in n_range:
        for m in m_range:
            rep = count_scheme(scheme, n, m)
            rows.append({"n": n, "m": m, "depth": rep.depth, "gates": rep.gate_count,
                         "qubits": rep.qubit_count, "bb_steps": rep.baseline_steps,
                         "bb_qubits": rep.baseline_qubits})
    return rows


def format_table(rows: list[dict[str, int]]) -> str:
    widths = {c: max([len(c)] + [len(str(r[c])) for r in rows]) for c in COLUMNS}
    lines = ["  ".join(c.rjust(widths[c]) for c in COLUMNS)]
    lines += ["  ".join(str(r[c]).rjust(widths[c]) for c in COLUMNS) for r in rows]
    return "\n".join(lines) + "\n"


def format_csv(rows: list[dict[str, int]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def parse_csv(text: str) -> list[dict[str, int]]:
    return [{k: int(v) for k, v in row.items()} for row in csv.DictReader(io.StringIO(text))]


def parse_table(text: str) -> list[dict[str, int]]:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    header, body = lines[0], lines[1:]
    return [dict(zip(header, map(int, row))) for row in body]


def report_dict(report: ResourceReport) -> dict:
    return asdict(report)
