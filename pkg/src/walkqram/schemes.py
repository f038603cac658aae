"""Routing, output and the two qRAM pipelines.

``F`` walks the bus from the terminal to leaf ``(a, n)`` one level at a time:
reset colors at odd nodes, encode the steering address bit into every walker's
color, then let the roundabouts move the bus to the left (red) or right (blue)
child. ``F-dagger`` is the exact adjoint of the recorded layer list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, GateEvent, Operation, SchemeTrace
from .encoder import AddressColorCX, ColorReset, cascade_ops
from .query import MemorySpec, attach_cells, query_circuit
from .state import BasisState, SparseState, basis, uniform_colors
from .tree import subtree_leaf_counts


@dataclass(frozen=True)
class Mutation:
    """Deliberate circuit defect, used to check that verification can fail.

    ``skip_layer`` is ``(level, k)``: drop cascade round ``k`` at tree level
    ``level``. ``flip_roundabout`` is ``(w, level)``: that node's routers send
    red walkers right and blue walkers left.
    """

    skip_layer: tuple[int, int] | None = None
    flip_roundabout: tuple[int, int] | None = None

    def skipped(self, level: int) -> frozenset[int]:
        if self.skip_layer and self.skip_layer[0] == level:
            return frozenset({self.skip_layer[1]})
        return frozenset()

    def flipped(self, level: int) -> frozenset[int]:
        if self.flip_roundabout and self.flip_roundabout[1] == level:
            return frozenset({self.flip_roundabout[0]})
        return frozenset()


NO_MUTATION = Mutation()


class Route(Operation):
    """Roundabouts at every node of ``level``: ``|w,l>|c..c> -> |2w+c, l+1>|c..c>``.

    The adjoint moves the bus back to the parent; it is only defined where
    the walker color matches the side of the child it sits on.
    """

    name = "R"

    def __init__(self, level: int, width: int, flipped: frozenset[int] = frozenset(),
                 adjoint: bool = False):
        self.level = level
        self.width = width
        self.flipped = flipped
        self.adjoint = adjoint

    def describe(self):
        return f"{'R^dag' if self.adjoint else 'R'}@level{self.level}"

    def apply(self, term: BasisState):
        c = uniform_colors(term.colors, self.width)
        if c is None:
            raise self.fail("mixed walker colors entering a roundabout", term)
        w, lv = term.bus
        if not self.adjoint:
            if lv != self.level:
                raise self.fail(f"bus at level {lv}, expected {self.level}", term)
            side = c ^ (w in self.flipped)
            return [(term.with_(bus=(2 * w + side, lv + 1)), 1.0)]
        if lv != self.level + 1:
            raise self.fail(f"bus at level {lv}, expected {self.level + 1}", term)
        up = w // 2
        if c ^ (up in self.flipped) != w % 2:
            raise self.fail("walker color does not match the branch it returns from", term)
        return [(term.with_(bus=(up, self.level)), 1.0)]

    def inverse(self):
        return Route(self.level, self.width, self.flipped, not self.adjoint)

    def events(self, n, m):
        return [GateEvent("roundabout", (j,), (w, self.level))
                for w in range(2 ** self.level) for j in range(self.width)]


def hadamard_like_matrix(left: int, right: int) -> np.ndarray:
    """Amplitude splitter sending weight ``left/(left+right)`` to the left child."""
    total = left + right
    if total < 1:
        raise ValueError("no designated leaf below this node")
    sl, sr = math.sqrt(left), math.sqrt(right)
    return np.array([[sl, sr], [sr, -sl]], dtype=complex) / math.sqrt(total)


def hadamard_like(w: int, level: int, designated, n: int) -> np.ndarray:
    """Splitter for node ``(w, level)`` given the designated address set."""
    return hadamard_like_matrix(*subtree_leaf_counts(designated, w, level, n))


class HadamardLike(Operation):
    """Node-dependent splitter on the color of walker 0; identity at nodes
    with no designated leaf below."""

    name = "H"

    def __init__(self, level: int, matrices: dict[int, np.ndarray]):
        self.level = level
        self.matrices = matrices

    def apply(self, term):
        w, lv = term.bus
        if lv != self.level:
            raise self.fail(f"bus at level {lv}, expected {self.level}", term)
        u = self.matrices.get(w)
        if u is None:
            return [(term, 1.0)]
        c0 = term.colors & 1
        rest = term.colors & ~1
        return [(term.with_(colors=rest | out), u[out, c0]) for out in (0, 1) if u[out, c0] != 0]

    def inverse(self):
        return HadamardLike(self.level, {w: u.conj().T for w, u in self.matrices.items()})

    def events(self, n, m):
        return [GateEvent("hadamard_like", (0,), (w, self.level)) for w in sorted(self.matrices)]


# circuit builders -----------------------------------------------------------

def level_ops(level: int, n: int, m: int, mutation: Mutation = NO_MUTATION) -> list[Operation]:
    """``F^(l+1|l)``: color reset, encoder, roundabouts."""
    width = n + m
    return [ColorReset(level, width),
            AddressColorCX(level, n),
            *cascade_ops(level, n, m, skip=mutation.skipped(level)),
            Route(level, width, mutation.flipped(level))]


def routing_circuit(n: int, m: int, mutation: Mutation = NO_MUTATION) -> Circuit:
    ops = [op for level in range(n) for op in level_ops(level, n, m, mutation)]
    ops.append(ColorReset(n, n + m))
    return Circuit(n, m, tuple(ops))


def output_circuit(n: int, m: int, mutation: Mutation = NO_MUTATION) -> Circuit:
    return routing_circuit(n, m, mutation).inverse()


def splitter_table(designated, n: int) -> dict[int, dict[int, np.ndarray]]:
    """Per level, the splitter matrix of every node with designated leaves below."""
    table = {}
    for level in range(n):
        table[level] = {}
        for w in range(2 ** level):
            left, right = subtree_leaf_counts(designated, w, level, n)
            if left + right:
                table[level][w] = hadamard_like_matrix(left, right)
    return table


def routing_tilde_circuit(designated, n: int, m: int, mutation: Mutation = NO_MUTATION) -> Circuit:
    """``F~``: the splitter on walker 0 replaces the address-to-color CNOT, and
    every level fans out from walker 0."""
    designated = frozenset(designated)
    if not designated:
        raise ValueError("designated address set must be nonempty")
    if any(not 0 <= a < 2 ** n for a in designated):
        raise ValueError(f"designated addresses must lie in [0, {2 ** n})")
    width = n + m
    table = splitter_table(designated, n)
    ops: list[Operation] = []
    for level in range(n):
        ops += [ColorReset(level, width),
                HadamardLike(level, table[level]),
                *cascade_ops(level, n, m, source_level=n - 1, skip=mutation.skipped(level)),
                Route(level, width, mutation.flipped(level))]
    ops.append(ColorReset(n, width))
    return Circuit(n, m, tuple(ops))


def qram_circuit(memory: MemorySpec, mode: str = "classical",
                 mutation: Mutation = NO_MUTATION) -> Circuit:
    """``F-dagger Q F``."""
    f = routing_circuit(memory.n, memory.m, mutation)
    return f + query_circuit(memory, mode) + f.inverse()


def qram_tilde_circuit(memory: MemorySpec, mutation: Mutation = NO_MUTATION) -> Circuit:
    """``F-dagger Q~ F~``."""
    if not memory.designated:
        raise ValueError("memory has no designated address set")
    n, m = memory.n, memory.m
    return (routing_tilde_circuit(memory.designated, n, m, mutation)
            + query_circuit(memory, "tilde")
            + output_circuit(n, m, mutation))


# state-level entry points ---------------------------------------------------

def route_step(level: int, state: SparseState) -> SparseState:
    return Circuit(state.n, state.m, tuple(level_ops(level, state.n, state.m))).run(state)


def route_full(state: SparseState, mutation: Mutation = NO_MUTATION) -> SparseState:
    return routing_circuit(state.n, state.m, mutation).run(state)


def output_full(state: SparseState, mutation: Mutation = NO_MUTATION) -> SparseState:
    return output_circuit(state.n, state.m, mutation).run(state)


def zero_state(n: int, m: int) -> SparseState:
    return SparseState(n, m, {basis(): 1.0})


def route_tilde(designated, n: int, m: int) -> SparseState:
    """Uniform superposition of the bus over the designated leaves, from ``|0>``."""
    return routing_tilde_circuit(designated, n, m).run(zero_state(n, m))


def resolve_mode(memory: MemorySpec, mode: str | None) -> str:
    if mode is None:
        return "quantum" if memory.has_quantum_cells else "classical"
    if mode not in ("classical", "quantum"):
        raise ValueError(f"qram mode must be 'classical' or 'quantum', got {mode!r}")
    return mode


def prepare_input(memory: MemorySpec, state: SparseState, mode: str) -> SparseState:
    if mode == "quantum" and any(t.cells is None for t, _ in state.items()):
        return attach_cells(state, memory)
    return state


def qram(memory: MemorySpec, state: SparseState, mode: str | None = None,
         mutation: Mutation = NO_MUTATION) -> SparseState:
    """``sum_a w_a |a>|0> -> sum_a w_a |a>|x^(a)>``; quantum cells are swapped in."""
    mode = resolve_mode(memory, mode)
    return qram_circuit(memory, mode, mutation).run(prepare_input(memory, state, mode))


def qram_tilde(memory: MemorySpec, mutation: Mutation = NO_MUTATION) -> SparseState:
    return qram_tilde_circuit(memory, mutation).run(zero_state(memory.n, memory.m))


def run_traced(circuit: Circuit, state: SparseState, snapshots: bool = False) -> tuple[SparseState, SchemeTrace]:
    return circuit.run_traced(state, snapshots)
