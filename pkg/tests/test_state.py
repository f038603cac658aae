import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkqram.state import (BasisState, DomainError, SparseState, apply_operator, basis, fidelity,
                            global_phase_op, identity_op, make_input, pauli_x_data_op)


def test_make_input_single_address():
    s = make_input({5}, None, n=3, m=2)
    assert len(s) == 1
    assert s.amplitude(BasisState(0b101, (0, 0), 0, 0b00)) == 1


def test_make_input_three_uniform():
    s = make_input({1, 3, 6}, None, n=3, m=1)
    assert len(s) == 3
    for a in (1, 3, 6):
        assert s.amplitude(basis(a)) == pytest.approx(1 / math.sqrt(3), abs=1e-15)


def test_make_input_signed_weights():
    s = make_input([0, 1], [1 / math.sqrt(2), -1 / math.sqrt(2)], n=1, m=1)
    assert s.amplitude(basis(0)) == pytest.approx(1 / math.sqrt(2))
    assert s.amplitude(basis(1)) == pytest.approx(-1 / math.sqrt(2))


def test_make_input_normalizes_weights():
    s = make_input([0, 1], [3, 4j], n=1, m=1)
    assert s.norm() == pytest.approx(1)
    assert s.amplitude(basis(1)) == pytest.approx(0.8j)


@pytest.mark.parametrize("addresses, weights", [
    ([], None), ([8], None), ([-1], None), ([0, 0], None), ([0, 1], [0, 0]), ([0, 1], [1]),
])
def test_make_input_rejects(addresses, weights):
    with pytest.raises(ValueError):
        make_input(addresses, weights, n=3, m=1)


def test_identity_and_pauli_x():
    s = make_input([2, 5], [1, 1j], n=3, m=1)
    assert apply_operator(s, identity_op) == s
    flipped = apply_operator(make_input({0}, None, 1, 1), pauli_x_data_op(0))
    assert flipped.items() == [(basis(0, data=1), 1)]


def test_global_phase_pi():
    s = make_input({3}, None, 2, 1)
    out = apply_operator(s, global_phase_op(math.pi))
    assert out.amplitude(basis(3)) == pytest.approx(-1)
    assert out.norm() == pytest.approx(1)


def test_fidelity_values():
    s = make_input([0, 1], None, 1, 1)
    e0 = make_input([0], None, 1, 1)
    e1 = make_input([1], None, 1, 1)
    assert fidelity(s, s) == pytest.approx(1)
    assert fidelity(e0, e1) == 0
    assert fidelity(s, e0) == pytest.approx(0.5)


def test_fidelity_shape_mismatch():
    with pytest.raises(ValueError):
        fidelity(make_input([0], None, 1, 1), make_input([0], None, 1, 2))


def test_pruning_drops_only_dust():
    s = SparseState(1, 1, {basis(0): 1.0, basis(1): 1e-16, basis(0, data=1): 1e-14})
    assert basis(1) not in s
    assert s.amplitude(basis(0, data=1)) == 1e-14
    assert s.amplitude(basis(0)) == 1.0


def test_domain_error_gets_term_attached():
    def bad(term):
        raise DomainError("nope")

    s = make_input({1}, None, 1, 1)
    with pytest.raises(DomainError) as info:
        apply_operator(s, bad)
    assert info.value.term == basis(1)
    assert info.value.op == "bad"


def _random_state(rng, n, m, k):
    terms = {}
    for _ in range(k):
        b = basis(int(rng.integers(2 ** n)), (0, 0), int(rng.integers(2 ** (n + m))),
                  int(rng.integers(2 ** m)))
        terms[b] = complex(rng.normal(), rng.normal())
    return SparseState(n, m, terms)


def _mixing_op(term):
    # a non-permutation basis map: data bit 0 goes through a Hadamard
    d0 = term.data & 1
    rest = term.data & ~1
    s = 1 / math.sqrt(2)
    return [(term.with_(data=rest), s), (term.with_(data=rest | 1), s if d0 == 0 else -s)]


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), alpha=st.complex_numbers(max_magnitude=3, allow_nan=False,
                                                                  allow_infinity=False),
       beta=st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_apply_operator_is_linear(seed, alpha, beta):
    rng = np.random.default_rng(seed)
    s1, s2 = _random_state(rng, 2, 1, 4), _random_state(rng, 2, 1, 4)
    lhs = apply_operator(alpha * s1 + beta * s2, _mixing_op)
    rhs = alpha * apply_operator(s1, _mixing_op) + beta * apply_operator(s2, _mixing_op)
    assert lhs.allclose(rhs, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_unitary_basis_map_preserves_norm(seed):
    s = _random_state(np.random.default_rng(seed), 2, 2, 6).normalized()
    assert apply_operator(s, _mixing_op).norm() == pytest.approx(1, abs=1e-10)
