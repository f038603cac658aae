"""Composite register basis and the sparse state vector the schemes act on.

A basis configuration is ``(address, bus, colors, data, cells)``:

* ``address`` -- integer word of the address register, bit ``j`` is ``a_j``.
* ``bus`` -- tree node ``(w, level)`` the walkers are heading to. ``(0, 0)``
  doubles as the input/output terminal.
* ``colors`` -- bitmask of the walkers' internal states, bit ``j`` is the
  color of walker ``j`` (0 = red, 1 = blue). Walkers ``0..n-1`` carry the
  address qubits and walkers ``n..n+m-1`` carry the data qubits.
* ``data`` -- integer word of the data register, bit ``i`` is ``x_i``.
* ``cells`` -- ``None`` in classical mode, otherwise a tuple with one m-bit
  word per memory cell holding the colors of the cell's own walkers.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Mapping, Sequence
from typing import NamedTuple

import numpy as np

PRUNE_TOL = 1e-15


class DomainError(RuntimeError):
    """An operator was applied to a basis term outside its domain.

    In this simulator that always means the operator sequence is wrong
    (a mutated circuit, mixed colors entering a router, a bus on the wrong
    level), never a numerical issue.
    """

    def __init__(self, message: str, op: str | None = None, term: "BasisState | None" = None):
        super().__init__(message)
        self.message = message
        self.op = op
        self.term = term

    def __str__(self) -> str:
        parts = [self.message]
        if self.op is not None:
            parts.append(f"operator={self.op}")
        if self.term is not None:
            parts.append(f"term={self.term.label()}")
        return "; ".join(parts)


class BasisState(NamedTuple):
    address: int
    bus: tuple[int, int]
    colors: int
    data: int
    cells: tuple[int, ...] | None = None

    def label(self, n: int | None = None, m: int | None = None) -> str:
        w, level = self.bus
        if n is None:
            return f"a={self.address} bus=({w},{level}) c={self.colors} d={self.data}"
        a = format(self.address, f"0{n}b")
        c = format(self.colors, f"0{n + m}b")
        d = format(self.data, f"0{m}b")
        out = f"a={a} bus=({w},{level}) c={c} d={d}"
        if self.cells is not None:
            out += " cells=" + ",".join(format(x, f"0{m}b") for x in self.cells)
        return out

    def with_(self, **changes) -> "BasisState":
        return self._replace(**changes)


BasisMap = Callable[[BasisState], Iterable[tuple[BasisState, complex]]]


class SparseState:
    """Map from :class:`BasisState` to complex amplitude.

    Instances are treated as immutable values; every operation returns a new
    state. Amplitudes with modulus below ``PRUNE_TOL`` are dropped on
    construction.
    """

    __slots__ = ("n", "m", "_terms")

    def __init__(self, n: int, m: int, terms: Mapping[BasisState, complex] | None = None):
        if n < 1 or m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
        self.n = n
        self.m = m
        self._terms: dict[BasisState, complex] = {}
        for basis, amp in (terms or {}).items():
            amp = complex(amp)
            if abs(amp) >= PRUNE_TOL:
                self._terms[basis] = amp

    @property
    def terms(self) -> Mapping[BasisState, complex]:
        return dict(self._terms)

    @property
    def width(self) -> int:
        """Number of walkers, ``n + m``."""
        return self.n + self.m

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self.items())

    def __contains__(self, basis: BasisState) -> bool:
        return basis in self._terms

    def items(self) -> list[tuple[BasisState, complex]]:
        """Terms in lexicographic basis order."""
        return sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0]))

    def amplitude(self, basis: BasisState) -> complex:
        return self._terms.get(basis, 0j)

    def norm(self) -> float:
        return math.sqrt(math.fsum(abs(a) ** 2 for a in self._terms.values()))

    def normalized(self) -> "SparseState":
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero state")
        return SparseState(self.n, self.m, {b: a / nrm for b, a in self._terms.items()})

    def inner(self, other: "SparseState") -> complex:
        """``<self|other>``."""
        _check_shape(self, other)
        acc = [a.conjugate() * other._terms[b] for b, a in self._terms.items() if b in other._terms]
        return complex(math.fsum(z.real for z in acc), math.fsum(z.imag for z in acc))

    def __add__(self, other: "SparseState") -> "SparseState":
        _check_shape(self, other)
        out = dict(self._terms)
        for b, a in other._terms.items():
            out[b] = out.get(b, 0j) + a
        return SparseState(self.n, self.m, out)

    def __rmul__(self, scalar: complex) -> "SparseState":
        return SparseState(self.n, self.m, {b: scalar * a for b, a in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseState):
            return NotImplemented
        return (self.n, self.m) == (other.n, other.m) and self._terms == other._terms

    def allclose(self, other: "SparseState", atol: float = 1e-12) -> bool:
        _check_shape(self, other)
        keys = set(self._terms) | set(other._terms)
        return all(abs(self.amplitude(k) - other.amplitude(k)) <= atol for k in keys)

    def __repr__(self) -> str:
        body = ", ".join(f"{b.label(self.n, self.m)}: {a:.6g}" for b, a in self.items()[:4])
        more = "" if len(self) <= 4 else f", ... ({len(self)} terms)"
        return f"SparseState(n={self.n}, m={self.m}, {{{body}{more}}})"


def _sort_key(basis: BasisState):
    return (basis.address, basis.bus, basis.colors, basis.data, basis.cells or ())


def _check_shape(s1: SparseState, s2: SparseState) -> None:
    if (s1.n, s1.m) != (s2.n, s2.m):
        raise ValueError(f"register shape mismatch: (n={s1.n}, m={s1.m}) vs (n={s2.n}, m={s2.m})")


def basis(address: int = 0, bus: tuple[int, int] = (0, 0), colors: int = 0, data: int = 0,
          cells: tuple[int, ...] | None = None) -> BasisState:
    return BasisState(address, tuple(bus), colors, data, cells)


def make_input(addresses: Sequence[int] | set[int], weights: Sequence[complex] | None = None,
               n: int = 1, m: int = 1) -> SparseState:
    """Build ``sum_a w_a |a>_A |0,0>_B |0>_C |0>_D``.

    Args:
        addresses: Addresses in the superposition. When ``weights`` is given
            the two are paired positionally, so pass an ordered sequence.
        weights: Optional amplitudes; normalized here. Uniform by default.
        n: Address width.
        m: Data width.

    Raises:
        ValueError: empty or duplicated addresses, an address outside
            ``[0, 2**n)``, length mismatch or zero-norm weights.
    """
    addrs = sorted(addresses) if isinstance(addresses, (set, frozenset)) else list(addresses)
    if not addrs:
        raise ValueError("address set must be nonempty")
    if len(set(addrs)) != len(addrs):
        raise ValueError("duplicate addresses")
    for a in addrs:
        if not 0 <= a < 2 ** n:
            raise ValueError(f"address {a} out of range for n={n}")
    if weights is None:
        amps = np.full(len(addrs), 1 / math.sqrt(len(addrs)), dtype=complex)
    else:
        amps = np.asarray(weights, dtype=complex)
        if amps.shape != (len(addrs),):
            raise ValueError("weights and addresses differ in length")
        nrm = np.linalg.norm(amps)
        if nrm == 0:
            raise ValueError("weights have zero norm")
        amps = amps / nrm
    return SparseState(n, m, {basis(a): amp for a, amp in zip(addrs, amps)})


def apply_operator(state: SparseState, op: BasisMap) -> SparseState:
    """Linear extension of a basis map.

    ``op`` maps one basis term to an iterable of ``(basis, coefficient)``
    pairs. A :class:`DomainError` raised by ``op`` is re-raised with the
    offending term attached.
    """
    out: dict[BasisState, complex] = {}
    for term, amp in state.items():
        try:
            images = op(term)
        except DomainError as exc:
            if exc.term is None:
                exc.term = term
            if exc.op is None:
                exc.op = getattr(op, "name", getattr(op, "__name__", repr(op)))
            raise
        for image, coeff in images:
            out[image] = out.get(image, 0j) + coeff * amp
    return SparseState(state.n, state.m, out)


def fidelity(s1: SparseState, s2: SparseState) -> float:
    """``|<s1|s2>|**2``, clipped to ``[0, 1]`` against rounding."""
    return min(1.0, abs(s1.inner(s2)) ** 2)


def identity_op(term: BasisState):
    return [(term, 1.0)]


def global_phase_op(theta: float) -> BasisMap:
    phase = complex(math.cos(theta), math.sin(theta))

    def op(term: BasisState):
        return [(term, phase)]

    op.name = f"phase({theta:g})"
    return op


def pauli_x_data_op(bit: int) -> BasisMap:
    def op(term: BasisState):
        return [(term.with_(data=term.data ^ (1 << bit)), 1.0)]

    op.name = f"X_D{bit}"
    return op


def uniform_colors(colors: int, width: int) -> int | None:
    """Return the common color of all walkers, or ``None`` if mixed."""
    if colors == 0:
        return 0
    if colors == (1 << width) - 1:
        return 1
    return None
