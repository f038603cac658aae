"""Operator sequences with gate bookkeeping.

Every scheme is a :class:`Circuit`: an ordered tuple of :class:`Operation`
objects. Each operation is one conflict-free layer of devices placed on the
tree and also a basis map used by the state-vector simulator, so the same
object drives both simulation and resource counting.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Literal

from .state import BasisState, DomainError, SparseState, apply_operator

GateKind = Literal["roundabout", "rotation", "cx_cc", "cx_ac", "pauli_x",
                   "hadamard_like", "cp", "encoder"]

Location = tuple[int, int] | None


@dataclass(frozen=True)
class GateEvent:
    kind: GateKind
    walkers: tuple[int, ...]
    location: Location
    layer: int = -1


class Operation:
    """One layer of the circuit, usable as a basis map.

    Subclasses implement :meth:`apply`, :meth:`inverse` and :meth:`events`.
    """

    name: str = "op"
    level: int | None = None

    def apply(self, term: BasisState) -> list[tuple[BasisState, complex]]:
        raise NotImplementedError

    def inverse(self) -> "Operation":
        raise NotImplementedError

    def events(self, n: int, m: int) -> list[GateEvent]:
        return []

    def __call__(self, term: BasisState):
        return self.apply(term)

    def fail(self, message: str, term: BasisState) -> DomainError:
        return DomainError(message, op=self.describe(), term=term)

    def describe(self) -> str:
        return self.name if self.level is None else f"{self.name}@level{self.level}"


@dataclass
class TraceEntry:
    op: str
    level: int | None
    events: list[GateEvent]
    snapshot: SparseState | None = None


@dataclass
class SchemeTrace:
    entries: list[TraceEntry] = field(default_factory=list)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class Circuit:
    n: int
    m: int
    ops: tuple[Operation, ...] = ()

    def __add__(self, other: "Circuit") -> "Circuit":
        if (self.n, self.m) != (other.n, other.m):
            raise ValueError("cannot concatenate circuits of different register shapes")
        return Circuit(self.n, self.m, self.ops + other.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def inverse(self) -> "Circuit":
        """Adjoint: reversed order, each layer inverted."""
        return Circuit(self.n, self.m, tuple(op.inverse() for op in reversed(self.ops)))

    def run(self, state: SparseState) -> SparseState:
        self._check_shape(state)
        for op in self.ops:
            state = apply_operator(state, op)
        return state

    def run_traced(self, state: SparseState, snapshots: bool = False) -> tuple[SparseState, SchemeTrace]:
        self._check_shape(state)
        trace = SchemeTrace()
        layers = iter(self.layered_events())
        for op in self.ops:
            state = apply_operator(state, op)
            trace.entries.append(TraceEntry(op.describe(), op.level, next(layers),
                                            state if snapshots else None))
        return state, trace

    def layered_events(self) -> list[list[GateEvent]]:
        """Gate events per operation with layer indices assigned.

        Operations that place no device are not counted as a layer. Raises
        ``ValueError`` if two gates in one layer share a walker at the same
        tree location.
        """
        out = []
        layer = 0
        for op in self.ops:
            events = op.events(self.n, self.m)
            if events:
                check_conflict_free(events, op.describe())
                events = [replace(e, layer=layer) for e in events]
                layer += 1
            out.append(events)
        return out

    def events(self) -> list[GateEvent]:
        return [e for layer in self.layered_events() for e in layer]

    @property
    def depth(self) -> int:
        return sum(1 for op in self.ops if op.events(self.n, self.m))

    def _check_shape(self, state: SparseState) -> None:
        if (state.n, state.m) != (self.n, self.m):
            raise ValueError(f"state has (n={state.n}, m={state.m}), circuit expects "
                             f"(n={self.n}, m={self.m})")


def check_conflict_free(events: Iterable[GateEvent], where: str = "") -> None:
    used: dict[Location, set[int]] = defaultdict(set)
    for e in events:
        seen = used[e.location]
        clash = seen.intersection(e.walkers)
        if clash:
            raise ValueError(f"layer {where} reuses walker(s) {sorted(clash)} at {e.location}")
        seen.update(e.walkers)
