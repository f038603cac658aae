"""Text formats: memory files and state dumps.

Memory file::

    # comment
    n=3 m=4
    designated=1,3,6
    cell 110 = 1001
    cell 001 = [0.7071067811865476,0; 0,0; 0,0; 0.7071067811865476,0; ...]

Addresses and words are written most-significant bit first. Quantum cells
list ``2**m`` amplitudes as ``re,im`` pairs separated by ``;``.

State dump, one line per term, sorted::

    a=101 bus=(0,0) c=00000 d=10 amp=1.000000000000,0.000000000000
"""

from __future__ import annotations

import os
import re

import numpy as np

from .query import NORM_TOL, MemorySpec
from .state import BasisState, SparseState

_HEADER = re.compile(r"^n\s*=\s*(\d+)\s+m\s*=\s*(\d+)$")
_DESIGNATED = re.compile(r"^designated\s*=\s*(.*)$")
_CELL = re.compile(r"^cell\s+([01]+)\s*=\s*(.+)$")
_DUMP = re.compile(
    r"^a=([01]+) bus=\((\d+),(\d+)\) c=([01]+) d=([01]+)(?: cells=([01,]+))? "
    r"amp=(\S+),(\S+)$")


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


def _bits(token: str, width: int, what: str, line: int) -> int:
    if len(token) != width or set(token) - {"0", "1"}:
        raise FormatError(f"{what} {token!r} must be {width} binary digits", line)
    return int(token, 2)


def _quantum_vector(body: str, m: int, line: int) -> np.ndarray:
    inner = body.strip()[1:-1]
    entries = [e.strip() for e in inner.split(";") if e.strip()]
    if len(entries) != 2 ** m:
        raise FormatError(f"quantum cell needs {2 ** m} amplitudes, got {len(entries)}", line)
    vec = np.empty(2 ** m, dtype=complex)
    for i, entry in enumerate(entries):
        parts = entry.split(",")
        try:
            re_, im_ = (float(parts[0]), float(parts[1])) if len(parts) == 2 else (float(parts[0]), 0.0)
        except ValueError:
            raise FormatError(f"bad amplitude {entry!r}", line) from None
        vec[i] = complex(re_, im_)
    if abs(np.linalg.norm(vec) - 1) > NORM_TOL:
        raise FormatError(f"quantum cell vector has norm {np.linalg.norm(vec):.6g}, expected 1", line)
    return vec


def parse_memory_text(text: str) -> MemorySpec:
    n = m = None
    designated = None
    cells: dict[int, int | np.ndarray] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            hdr = _HEADER.match(line)
            if not hdr:
                raise FormatError("expected header 'n=<int> m=<int>'", lineno)
            n, m = int(hdr.group(1)), int(hdr.group(2))
            if n < 1 or m < 1:
                raise FormatError("n and m must be >= 1", lineno)
            continue
        if mdes := _DESIGNATED.match(line):
            if designated is not None:
                raise FormatError("designated set given twice", lineno)
            body = mdes.group(1).strip()
            if body == "all":
                designated = frozenset(range(2 ** n))
            else:
                try:
                    designated = [int(t) for t in body.split(",") if t.strip()]
                except ValueError:
                    raise FormatError(f"bad designated list {body!r}", lineno) from None
                if len(set(designated)) != len(designated):
                    raise FormatError("duplicate designated address", lineno)
                if any(not 0 <= a < 2 ** n for a in designated):
                    raise FormatError(f"designated address out of range for n={n}", lineno)
                designated = frozenset(designated)
            continue
        if mcell := _CELL.match(line):
            addr = _bits(mcell.group(1), n, "cell address", lineno)
            if addr in cells:
                raise FormatError(f"duplicate cell {mcell.group(1)}", lineno)
            body = mcell.group(2).strip()
            if body.startswith("["):
                if not body.endswith("]"):
                    raise FormatError("unterminated quantum cell vector", lineno)
                cells[addr] = _quantum_vector(body, m, lineno)
            else:
                cells[addr] = _bits(body, m, "cell word", lineno)
            continue
        raise FormatError(f"unrecognized line {line!r}", lineno)
    if n is None:
        raise FormatError("missing header 'n=<int> m=<int>'")
    return MemorySpec(n, m, cells, designated)


def parse_memory(path: str | os.PathLike) -> MemorySpec:
    with open(path, encoding="utf-8") as fh:
        return parse_memory_text(fh.read())


def format_memory(memory: MemorySpec) -> str:
    n, m = memory.n, memory.m
    lines = [f"n={n} m={m}"]
    if memory.designated is not None:
        lines.append("designated=" + ",".join(str(a) for a in sorted(memory.designated)))
    for a in sorted(memory.cells):
        content = memory.cells[a]
        if isinstance(content, np.ndarray):
            body = "[" + "; ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in content) + "]"
        else:
            body = format(content, f"0{m}b")
        lines.append(f"cell {format(a, f'0{n}b')} = {body}")
    return "\n".join(lines) + "\n"


# state dumps ---------------------------------------------------------------

def _num(x: float) -> str:
    s = f"{x:.12f}"
    return "0.000000000000" if s == "-0.000000000000" else s


def format_term(term: BasisState, amp: complex, n: int, m: int) -> str:
    return f"{term.label(n, m)} amp={_num(amp.real)},{_num(amp.imag)}"


def dump_state(state: SparseState) -> str:
    """Sorted term lines. Terms whose amplitude rounds to zero at 12 digits
    are left out so that a dump parses back to the same dump."""
    lines = []
    for t, a in state.items():
        line = format_term(t, a, state.n, state.m)
        if not line.endswith("amp=0.000000000000,0.000000000000"):
            lines.append(line + "\n")
    return "".join(lines)


def parse_dump(text: str) -> SparseState:
    terms = {}
    n = m = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        mt = _DUMP.match(raw.strip())
        if not mt:
            raise FormatError(f"bad state line {raw!r}", lineno)
        a, w, lv, c, d, cells, re_, im_ = mt.groups()
        if n is None:
            n, m = len(a), len(d)
        if (len(a), len(d), len(c)) != (n, m, n + m):
            raise FormatError("inconsistent register widths", lineno)
        cell_words = None if cells is None else tuple(int(x, 2) for x in cells.split(","))
        term = BasisState(int(a, 2), (int(w), int(lv)), int(c, 2), int(d, 2), cell_words)
        if term in terms:
            raise FormatError("duplicate basis term", lineno)
        terms[term] = complex(float(re_), float(im_))
    if n is None:
        raise FormatError("empty state dump")
    return SparseState(n, m, terms)
