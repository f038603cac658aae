"""Color encoding: the per-node color reset, the address-to-color CNOT and
the logarithmic-depth CNOT fan-out cascade."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .circuit import Circuit, GateEvent, Operation
from .state import BasisState, DomainError, SparseState, uniform_colors


def cascade_depth(width: int) -> int:
    """``ceil(log2(width))``."""
    if width < 2:
        raise ValueError("need at least two walkers")
    return math.ceil(math.log2(width))


@dataclass(frozen=True)
class CascadeLayer:
    """One round of parallel ``[j, k] = CX_{C_j C_k}`` gates."""

    index: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = [i for pair in self.pairs for i in pair]
        if len(seen) != len(set(seen)):
            raise ValueError(f"cascade layer {self.index} is not parallel: {self.pairs}")


def _literal_pairs(r: int, p: int, k: int) -> list[tuple[int, int]]:
    """Pairs of the ``k``-th round for ``n + m = 2**p``, exactly as the closed
    form writes them (indices mod ``2**p``)."""
    size = 2 ** p
    if k == 0:
        return [(r % size, (r + 2 ** (p - 1)) % size)]
    stride, half = 2 ** (p - k), 2 ** (p - k - 1)
    pairs = []
    for s in range(2 ** (k - 1)):
        a = r - s * stride
        b = r + 2 ** (p - 1) - s * stride
        pairs.append((a % size, (a - half) % size))
        pairs.append((b % size, (b - half) % size))
    return pairs


def _clipped_pairs(r: int, width: int, p: int, k: int) -> list[tuple[int, int]]:
    """Generic ``width``: run the power-of-two pattern on offsets
    ``d = (r - j) mod 2**p`` and keep gates whose target offset is a real walker.

    In offset space round ``k`` sends holders ``h`` (multiples of
    ``2**(p-k)``) to ``h + 2**(p-k-1)``; targets exceed their holders, so a kept
    target always has a kept holder.
    """
    stride, half = 2 ** (p - k), 2 ** (p - k - 1)
    pairs = []
    for h in range(0, 2 ** p, stride):
        t = h + half
        if t < width:
            pairs.append(((r - h) % width, (r - t) % width))
    return pairs


@lru_cache(maxsize=None)
def build_cascade(level: int, n: int, m: int) -> tuple[CascadeLayer, ...]:
    """Fan-out rounds copying the color of walker ``r = n-1-level`` to all
    ``n + m`` walkers.

    For ``n + m`` a power of two the rounds are the closed-form pattern; any
    other width uses the same pattern on ``2**ceil(log2(n+m))`` virtual slots
    with out-of-range targets dropped.
    """
    if not 0 <= level <= n - 1:
        raise ValueError(f"level {level} out of range for n={n}")
    width = n + m
    p = cascade_depth(width)
    r = n - 1 - level
    power_of_two = width == 2 ** p
    layers = []
    for k in range(p):
        pairs = _literal_pairs(r, p, k) if power_of_two else _clipped_pairs(r, width, p, k)
        layers.append(CascadeLayer(k, tuple(pairs)))
    return tuple(layers)


# operations ----------------------------------------------------------------

class ColorReset(Operation):
    """``X_(w, level)``: flip every walker's color when the bus heads to an odd node."""

    name = "X"

    def __init__(self, level: int, width: int):
        self.level = level
        self.width = width

    def apply(self, term: BasisState):
        w, lv = term.bus
        if lv != self.level:
            raise self.fail(f"bus at level {lv}, expected {self.level}", term)
        if uniform_colors(term.colors, self.width) is None:
            raise self.fail("mixed walker colors at color reset", term)
        if w % 2:
            return [(term.with_(colors=term.colors ^ ((1 << self.width) - 1)), 1.0)]
        return [(term, 1.0)]

    def inverse(self):
        return self

    def events(self, n, m):
        return [GateEvent("pauli_x", (j,), (w, self.level))
                for w in range(1, 2 ** self.level, 2) for j in range(self.width)]


class AddressColorCX(Operation):
    """``CX_{A_r C_r}`` with ``r = n-1-level``, placed at every node of the level."""

    name = "CX_AC"

    def __init__(self, level: int, n: int):
        self.level = level
        self.r = n - 1 - level

    def apply(self, term: BasisState):
        if (term.address >> self.r) & 1:
            return [(term.with_(colors=term.colors ^ (1 << self.r)), 1.0)]
        return [(term, 1.0)]

    def inverse(self):
        return self

    def events(self, n, m):
        return [GateEvent("cx_ac", (self.r,), (w, self.level)) for w in range(2 ** self.level)]


class CascadeLayerOp(Operation):
    name = "cascade"

    def __init__(self, level: int, layer: CascadeLayer):
        self.level = level
        self.layer = layer

    def describe(self):
        return f"cascade[{self.layer.index}]@level{self.level}"

    def apply(self, term: BasisState):
        colors = term.colors
        for j, k in self.layer.pairs:
            if (colors >> j) & 1:
                colors ^= 1 << k
        return [(term.with_(colors=colors), 1.0)]

    def inverse(self):
        # gates within a layer touch disjoint walkers, so the layer is an involution
        return self

    def events(self, n, m):
        return [GateEvent("cx_cc", pair, (w, self.level))
                for w in range(2 ** self.level) for pair in self.layer.pairs]


def cascade_ops(level: int, n: int, m: int, source_level: int | None = None,
                skip: frozenset[int] = frozenset()) -> list[Operation]:
    """Layers of the fan-out placed at tree ``level``.

    ``source_level`` selects which walker is copied (``r = n-1-source_level``);
    it defaults to ``level``. ``skip`` drops cascade rounds (mutation testing).
    """
    src = level if source_level is None else source_level
    return [CascadeLayerOp(level, layer) for layer in build_cascade(src, n, m)
            if layer.index not in skip]


def encoder_circuit(level: int, n: int, m: int, skip: frozenset[int] = frozenset()) -> Circuit:
    """``E_level``: address bit into color ``r``, then fan it out."""
    return Circuit(n, m, (AddressColorCX(level, n), *cascade_ops(level, n, m, skip=skip)))


# state-level entry points --------------------------------------------------

def color_reset(state: SparseState, level: int | None = None) -> SparseState:
    """Apply ``X_(w, l)`` at the level the bus currently sits on."""
    levels = {b.bus[1] for b, _ in state.items()}
    if level is None:
        if len(levels) != 1:
            raise ValueError(f"terms sit on several levels {sorted(levels)}; pass level")
        level = levels.pop()
    return Circuit(state.n, state.m, (ColorReset(level, state.width),)).run(state)


def _require_colors(state: SparseState, predicate, message: str, op: str) -> None:
    for b, _ in state.items():
        if not predicate(b.colors):
            raise DomainError(message, op=op, term=b)


def encode_E(level: int, state: SparseState) -> SparseState:
    """All walker colors become ``a_{n-1-level}``; entry colors must be red."""
    _require_colors(state, lambda c: c == 0, "encoder entered with non-red walkers", f"E_{level}")
    return encoder_circuit(level, state.n, state.m).run(state)


def encode_E_tilde(state: SparseState) -> SparseState:
    """Fan the color of walker 0 out to every walker, branch by branch."""
    _require_colors(state, lambda c: c >> 1 == 0, "walkers 1.. must be red before fan-out", "E~")
    n, m = state.n, state.m
    return Circuit(n, m, tuple(cascade_ops(n - 1, n, m))).run(state)
