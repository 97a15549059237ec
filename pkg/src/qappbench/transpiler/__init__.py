"""Basis rewriting, multi-controlled X synthesis and two-qubit unitary synthesis."""

from .kak import NonUnitaryError, haar_random_su4, kak_decompose
from .mcx import toffoli_approx, toffoli_exact
from .rebase import DecompositionReport, UnknownGateError, expand, rebase, simplify

__all__ = [
    "DecompositionReport",
    "NonUnitaryError",
    "UnknownGateError",
    "expand",
    "haar_random_su4",
    "kak_decompose",
    "rebase",
    "simplify",
    "toffoli_approx",
    "toffoli_exact",
]
