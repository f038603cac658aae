"""Check pipeline output against target states built straight from the
qRAM definition, without running any circuit."""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .query import MemorySpec
from .schemes import NO_MUTATION, Mutation, qram, qram_tilde, resolve_mode
from .state import DomainError, SparseState, basis, fidelity, make_input

DEFAULT_TOL = 1e-10


def _amplitudes(addresses: Sequence[int], weights) -> list[complex]:
    if weights is None:
        return [1 / math.sqrt(len(addresses))] * len(addresses)
    w = np.asarray(weights, dtype=complex)
    return list(w / np.linalg.norm(w))


def expected_qram(memory: MemorySpec, addresses: Sequence[int], weights=None,
                  mode: str | None = None) -> SparseState:
    """``sum_a w_a |a>|0,0>|0>|x^(a)>``.

    In quantum mode the data register of branch ``a`` holds the cell's state
    vector, that cell's register is left at zero and every other cell keeps
    its contents.
    """
    mode = resolve_mode(memory, mode)
    n, m = memory.n, memory.m
    amps = _amplitudes(list(addresses), weights)
    terms = {}
    if mode == "classical":
        for a, amp in zip(addresses, amps):
            terms[basis(a, data=memory.word(a))] = amp
        return SparseState(n, m, terms)
    vectors = [memory.vector(b) for b in range(2 ** n)]
    for a, amp in zip(addresses, amps):
        others = [[(0, 1.0)] if b == a else
                  [(int(x), vectors[b][x]) for x in np.flatnonzero(np.abs(vectors[b]) > 0)]
                  for b in range(2 ** n)]
        for x in np.flatnonzero(np.abs(vectors[a]) > 0):
            for combo in itertools.product(*others):
                coeff = amp * vectors[a][x]
                for _, c in combo:
                    coeff *= c
                cells = tuple(w for w, _ in combo)
                key = basis(a, data=int(x), cells=cells)
                terms[key] = terms.get(key, 0) + coeff
    return SparseState(n, m, terms)


def expected_qram_tilde(memory: MemorySpec) -> SparseState:
    """``|A|**-1/2 sum_{a in A} |a>|0,0>|0>|x^(a)>``."""
    des = sorted(memory.designated or ())
    if not des:
        raise ValueError("memory has no designated address set")
    amp = 1 / math.sqrt(len(des))
    return SparseState(memory.n, memory.m, {basis(a, data=memory.word(a)): amp for a in des})


@dataclass
class VerifyResult:
    fidelity: float
    passed: bool
    error: str | None = None
    output: SparseState | None = None


def verify_qram(memory: MemorySpec, addresses: Sequence[int], weights=None, mode: str | None = None,
                mutation: Mutation = NO_MUTATION, tolerance: float = DEFAULT_TOL) -> VerifyResult:
    """Fidelity of ``F-dagger Q F`` (or ``F-dagger Q~ F~`` for ``mode='tilde'``)
    with the definitional target.

    A :class:`DomainError` inside the pipeline counts as a failed check with
    fidelity 0: the circuit under test did not implement the map.
    """
    try:
        if mode == "tilde":
            target = expected_qram_tilde(memory)
            out = qram_tilde(memory, mutation)
        else:
            target = expected_qram(memory, addresses, weights, mode)
            out = qram(memory, make_input(list(addresses), weights, memory.n, memory.m), mode, mutation)
    except DomainError as exc:
        return VerifyResult(0.0, False, str(exc))
    f = fidelity(out, target)
    return VerifyResult(f, f >= 1 - tolerance, None, out)


def all_memories(n: int, m: int) -> Iterator[MemorySpec]:
    """Every classical memory of ``2**n`` cells holding m-bit words."""
    for words in itertools.product(range(2 ** m), repeat=2 ** n):
        yield MemorySpec(n, m, {a: w for a, w in enumerate(words) if w})


def nonempty_subsets(n: int) -> Iterator[tuple[int, ...]]:
    addrs = range(2 ** n)
    for k in range(1, 2 ** n + 1):
        yield from itertools.combinations(addrs, k)


def exhaustive_cases(n: int, m: int) -> Iterator[tuple[MemorySpec, tuple[int, ...], str]]:
    """All classical memories times all nonempty address sets, in both the
    standard and the superposition-building pipeline."""
    for mem in all_memories(n, m):
        for subset in nonempty_subsets(n):
            yield mem, subset, "classical"
            yield MemorySpec(n, m, mem.cells, frozenset(subset)), subset, "tilde"


def random_memory(rng: np.random.Generator, n: int, m: int, quantum: bool = False) -> MemorySpec:
    cells = {}
    for a in range(2 ** n):
        if quantum:
            v = rng.normal(size=2 ** m) + 1j * rng.normal(size=2 ** m)
            cells[a] = v / np.linalg.norm(v)
        else:
            word = int(rng.integers(0, 2 ** m))
            if word:
                cells[a] = word
    return MemorySpec(n, m, cells)


def random_case(rng: np.random.Generator, n: int, m: int):
    """Random (memory, address list, complex weights)."""
    mem = random_memory(rng, n, m)
    k = int(rng.integers(1, 2 ** n + 1))
    addrs = [int(a) for a in rng.choice(2 ** n, size=k, replace=False)]
    weights = rng.normal(size=k) + 1j * rng.normal(size=k)
    return mem, addrs, weights
