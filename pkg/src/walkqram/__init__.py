"""Gate-level simulator and resource counter for a quantum-walk qRAM.

Walkers carrying a dual-rail encoded address and data word are routed down a
perfect binary tree by color-dependent roundabouts, pick up the stored word at
a leaf and return by the mirrored tree.
"""

from .circuit import Circuit, GateEvent, SchemeTrace
from .encoder import build_cascade, color_reset, encode_E, encode_E_tilde
from .query import MemorySpec, query_classical, query_quantum, query_tilde
from .resources import ResourceReport, count_scheme, scaling_table
from .schemes import (Mutation, hadamard_like, output_full, qram, qram_tilde, route_full,
                      route_step, route_tilde)
from .state import BasisState, DomainError, SparseState, apply_operator, fidelity, make_input

__all__ = [
    "BasisState", "Circuit", "DomainError", "GateEvent", "MemorySpec", "Mutation",
    "ResourceReport", "SchemeTrace", "SparseState", "apply_operator", "build_cascade",
    "color_reset", "count_scheme", "encode_E", "encode_E_tilde", "fidelity", "hadamard_like",
    "make_input", "output_full", "qram", "qram_tilde", "query_classical", "query_quantum",
    "query_tilde", "route_full", "route_step", "route_tilde", "scaling_table",
]
