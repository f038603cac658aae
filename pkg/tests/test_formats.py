import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkqram.formats import FormatError, dump_state, format_memory, parse_dump, parse_memory_text
from walkqram.query import MemorySpec
from walkqram.state import SparseState, basis


def test_parse_single_cell():
    mem = parse_memory_text("n=3 m=4\ncell 110 = 1001\n")
    assert mem.word(6) == 0b1001 and mem.word(0) == 0


def test_parse_empty_cell_list():
    mem = parse_memory_text("# nothing stored\nn=2 m=3\n")
    assert all(mem.word(a) == 0 for a in range(4))


def test_parse_designated_and_quantum():
    h = 1 / math.sqrt(2)
    mem = parse_memory_text(f"n=2 m=1\ndesignated=0,3\ncell 01 = [{h},0; 0,{h}]\n")
    assert mem.designated == {0, 3}
    assert np.allclose(mem.vector(1), [h, 1j * h])
    assert parse_memory_text("n=2 m=1\ndesignated=all\n").designated == {0, 1, 2, 3}


@pytest.mark.parametrize("text", [
    "n=2 m=1\ncell 01 = [0.5,0; 0,0]\n",          # norm 0.5
    "n=2 m=1\ncell 01 = 1\ncell 01 = 0\n",         # duplicate
    "n=2 m=1\ncell 1 = 1\n",                       # address width
    "n=2 m=2\ncell 01 = 101\n",                    # word width
    "n=2 m=1\ncell 01 = [1,0]\n",                  # too few amplitudes
    "n=2 m=1\nfoo\n",
    "cell 01 = 1\n",
    "",
    "n=2 m=1\ndesignated=4\n",
    "n=2 m=1\ndesignated=1,1\n",
])
def test_parse_errors(text):
    with pytest.raises(FormatError):
        parse_memory_text(text)


def test_error_carries_line_number():
    with pytest.raises(FormatError) as info:
        parse_memory_text("n=2 m=1\n\ncell 01 = 3\n")
    assert info.value.line == 3


def test_memory_text_round_trip(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    mem = MemorySpec(3, 2, {1: 3, 4: v / np.linalg.norm(v)}, {1, 4})
    again = parse_memory_text(format_memory(mem))
    assert format_memory(again) == format_memory(mem)
    assert np.array_equal(again.vector(4), mem.vector(4))


amplitudes = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(0, 7), st.integers(0, 31), st.integers(0, 3)),
                       amplitudes, min_size=1, max_size=8),
       st.booleans())
def test_dump_round_trip_byte_identical(terms, with_cells):
    cells = (1, 0, 2, 3, 0, 0, 1, 2) if with_cells else None
    state = SparseState(3, 2, {basis(a, (a, 3), c, d, cells): amp for (a, c, d), amp in terms.items()})
    text = dump_state(state)
    if not text:
        return
    assert dump_state(parse_dump(text)) == text


def test_dump_is_sorted_and_drops_zero():
    s = SparseState(1, 1, {basis(1): 0.6, basis(0): 0.8, basis(0, data=1): 1e-14})
    lines = dump_state(s).splitlines()
    assert lines == ["a=0 bus=(0,0) c=00 d=0 amp=0.800000000000,0.000000000000",
                     "a=1 bus=(0,0) c=00 d=0 amp=0.600000000000,0.000000000000"]


def test_dump_parse_errors():
    with pytest.raises(FormatError):
        parse_dump("garbage\n")
    with pytest.raises(FormatError):
        parse_dump("")
