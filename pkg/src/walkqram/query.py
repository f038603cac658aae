"""Memory contents and the querying layers applied at the leaves."""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, GateEvent, Operation
from .state import BasisState, DomainError, SparseState

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MemorySpec:
    """Contents of the ``2**n`` cells.

    ``cells`` maps an address to either an m-bit classical word (``int``) or
    an m-qubit state vector of length ``2**m``. Unlisted cells hold the zero
    word. ``designated`` is the address set used by the superposition builder.
    """

    n: int
    m: int
    cells: Mapping[int, int | np.ndarray] = field(default_factory=dict)
    designated: frozenset[int] | None = None

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("need n >= 1 and m >= 1")
        clean = {}
        for a, content in self.cells.items():
            if not 0 <= a < 2 ** self.n:
                raise ValueError(f"cell address {a} out of range for n={self.n}")
            if isinstance(content, (int, np.integer)):
                if not 0 <= content < 2 ** self.m:
                    raise ValueError(f"cell {a} word {content} does not fit in m={self.m} bits")
                clean[a] = int(content)
            else:
                vec = np.asarray(content, dtype=complex)
                if vec.shape != (2 ** self.m,):
                    raise ValueError(f"cell {a} vector must have {2 ** self.m} entries")
                if abs(np.linalg.norm(vec) - 1) > NORM_TOL:
                    raise ValueError(f"cell {a} vector is not normalized")
                clean[a] = vec
        object.__setattr__(self, "cells", clean)
        if self.designated is not None:
            des = frozenset(int(a) for a in self.designated)
            if any(not 0 <= a < 2 ** self.n for a in des):
                raise ValueError("designated address out of range")
            object.__setattr__(self, "designated", des)

    def is_quantum(self, address: int) -> bool:
        return isinstance(self.cells.get(address), np.ndarray)

    @property
    def has_quantum_cells(self) -> bool:
        return any(isinstance(c, np.ndarray) for c in self.cells.values())

    def word(self, address: int) -> int:
        content = self.cells.get(address, 0)
        if isinstance(content, np.ndarray):
            raise DomainError(f"cell {address} holds quantum data", op="Q")
        return content

    def vector(self, address: int) -> np.ndarray:
        """Cell contents as a state vector (classical words become basis vectors)."""
        content = self.cells.get(address, 0)
        if isinstance(content, np.ndarray):
            return content
        vec = np.zeros(2 ** self.m, dtype=complex)
        vec[content] = 1
        return vec


# classical and address-writing queries ------------------------------------

def _leaf(op: Operation, term: BasisState, n: int) -> int:
    w, level = term.bus
    if level != n:
        raise op.fail(f"bus at level {level}, query needs a leaf (level {n})", term)
    return w


class QueryClassical(Operation):
    """Leaf-projected ``X`` gates loading ``x^(a)`` into the data register."""

    name = "Q"

    def __init__(self, memory: MemorySpec):
        self.memory = memory
        self.level = memory.n

    def apply(self, term):
        a = _leaf(self, term, self.memory.n)
        if self.memory.is_quantum(a):
            raise self.fail(f"cell {a} holds quantum data; use the quantum query", term)
        return [(term.with_(data=term.data ^ self.memory.word(a)), 1.0)]

    def inverse(self):
        return self

    def events(self, n, m):
        return [GateEvent("pauli_x", (n + i,), (a, n))
                for a in range(2 ** n) if not self.memory.is_quantum(a)
                for i in range(m) if (self.memory.word(a) >> i) & 1]


class QueryTilde(Operation):
    """Like :class:`QueryClassical` but also writes the cell address into the
    address register."""

    name = "Q~"

    def __init__(self, memory: MemorySpec):
        self.memory = memory
        self.level = memory.n

    def apply(self, term):
        a = _leaf(self, term, self.memory.n)
        if self.memory.is_quantum(a):
            raise self.fail(f"cell {a} holds quantum data", term)
        return [(term.with_(address=term.address ^ a, data=term.data ^ self.memory.word(a)), 1.0)]

    def inverse(self):
        return self

    def events(self, n, m):
        out = []
        for a in range(2 ** n):
            if self.memory.is_quantum(a):
                continue
            out += [GateEvent("pauli_x", (i,), (a, n)) for i in range(n) if (a >> i) & 1]
            out += [GateEvent("pauli_x", (n + i,), (a, n))
                    for i in range(m) if (self.memory.word(a) >> i) & 1]
        return out


# quantum query --------------------------------------------------------------

class DataColorEncoder(Operation):
    """Exchange each data walker's rail with its internal state.

    Stands in for the position/color encoder at every leaf. It is its own
    inverse, so the same layer also serves as the decoder.
    """

    name = "U_E"

    def __init__(self, n: int, m: int):
        self.n, self.m = n, m
        self.level = n

    def apply(self, term):
        _leaf(self, term, self.n)
        data, colors = term.data, term.colors
        for i in range(self.m):
            d, c = (data >> i) & 1, (colors >> (self.n + i)) & 1
            if d != c:
                data ^= 1 << i
                colors ^= 1 << (self.n + i)
        return [(term.with_(data=data, colors=colors), 1.0)]

    def inverse(self):
        return self

    def events(self, n, m):
        return [GateEvent("encoder", (n + i,), (a, n)) for a in range(2 ** n) for i in range(m)]


class CellSwapCX(Operation):
    """CNOTs between the data walkers' colors and the addressed cell's walkers.

    ``toward_cell`` selects the direction: data color controls cell color, or
    the reverse. Three alternating layers make a swap.
    """

    name = "CX_cell"

    def __init__(self, memory: MemorySpec, toward_cell: bool):
        self.memory = memory
        self.toward_cell = toward_cell
        self.level = memory.n

    def describe(self):
        return f"CX_{'D->cell' if self.toward_cell else 'cell->D'}@level{self.level}"

    def apply(self, term):
        n, m = self.memory.n, self.memory.m
        a = _leaf(self, term, n)
        if term.cells is None:
            raise self.fail("quantum query needs the cell registers in the state", term)
        if a in self.memory.cells and not self.memory.is_quantum(a):
            raise self.fail(f"cell {a} holds a classical word in quantum mode", term)
        cell, colors = term.cells[a], term.colors
        for i in range(m):
            if self.toward_cell:
                if (colors >> (n + i)) & 1:
                    cell ^= 1 << i
            elif (cell >> i) & 1:
                colors ^= 1 << (n + i)
        cells = term.cells[:a] + (cell,) + term.cells[a + 1:]
        return [(term.with_(colors=colors, cells=cells), 1.0)]

    def inverse(self):
        return self

    def events(self, n, m):
        # cell walkers are labelled n+m+i so they never clash with bus walkers
        return [GateEvent("cx_cc", (n + i, n + m + i), (a, n))
                for a in range(2 ** n) for i in range(m)]


def quantum_query_circuit(memory: MemorySpec) -> Circuit:
    n, m = memory.n, memory.m
    enc = DataColorEncoder(n, m)
    return Circuit(n, m, (enc, CellSwapCX(memory, True), CellSwapCX(memory, False),
                          CellSwapCX(memory, True), enc))


def query_circuit(memory: MemorySpec, mode: str = "classical") -> Circuit:
    if mode == "classical":
        return Circuit(memory.n, memory.m, (QueryClassical(memory),))
    if mode == "tilde":
        return Circuit(memory.n, memory.m, (QueryTilde(memory),))
    if mode == "quantum":
        return quantum_query_circuit(memory)
    raise ValueError(f"unknown query mode {mode!r}")


def attach_cells(state: SparseState, memory: MemorySpec) -> SparseState:
    """Tensor the cell registers of all ``2**n`` cells onto ``state``."""
    if (state.n, state.m) != (memory.n, memory.m):
        raise ValueError("memory and state register shapes differ")
    supports = []
    for a in range(2 ** memory.n):
        vec = memory.vector(a)
        supports.append([(x, vec[x]) for x in np.flatnonzero(np.abs(vec) > 0)])
    out = {}
    for term, amp in state.items():
        if term.cells is not None:
            raise ValueError("state already carries cell registers")
        for combo in itertools.product(*supports):
            coeff = amp
            for _, c in combo:
                coeff *= c
            out[term.with_(cells=tuple(int(x) for x, _ in combo))] = coeff
    return SparseState(state.n, state.m, out)


def query_classical(memory: MemorySpec, state: SparseState) -> SparseState:
    return query_circuit(memory, "classical").run(state)


def query_tilde(memory: MemorySpec, state: SparseState) -> SparseState:
    """Write address and data of the reached cell; the address register must be zero."""
    for term, _ in state.items():
        if term.address != 0:
            raise DomainError("address register must be |0> before Q~", op="Q~", term=term)
    return query_circuit(memory, "tilde").run(state)


def query_quantum(memory: MemorySpec, state: SparseState, require_empty_data: bool = True) -> SparseState:
    """Swap the reached cell's m-qubit state into the data register.

    Cell registers are attached first if the state does not carry them yet.
    With ``require_empty_data`` the data register must be zero on entry, which
    makes the swap a transfer; turn it off to apply the bare swap (e.g. to
    undo a previous transfer).
    """
    if any(t.cells is None for t, _ in state.items()):
        state = attach_cells(state, memory)
    if require_empty_data:
        for term, _ in state.items():
            if term.data != 0:
                raise DomainError("data register must be |0> before the quantum query",
                                  op="Q_quantum", term=term)
    return quantum_query_circuit(memory).run(state)
