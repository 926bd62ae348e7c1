"""Macaulay tropical ideals of homogeneous tropical polynomials, checked exactly."""

__version__ = "0.1.0"

from .semiring import BOOL, TROP, SemifieldValue, get_semifield, tropically_vanishes
from .polynomial import parse, parse_field, render, macaulay_matrix
from .valuated_matroid import ValuatedMatroid, check_plucker, cocircuits, circuits, membership
from .macaulay_ideal import macaulay_degree, macaulay_ideal, verify_tropical_ideal, hilbert_function

__all__ = [
    "__version__",
    "BOOL",
    "TROP",
    "SemifieldValue",
    "get_semifield",
    "tropically_vanishes",
    "parse",
    "parse_field",
    "render",
    "macaulay_matrix",
    "ValuatedMatroid",
    "check_plucker",
    "cocircuits",
    "circuits",
    "membership",
    "macaulay_degree",
    "macaulay_ideal",
    "verify_tropical_ideal",
    "hilbert_function",
]
