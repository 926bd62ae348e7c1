"""Homogeneous polynomials over a semifield or over the rationals, and their
Macaulay matrices.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .monomials import (
    Monomial,
    enumerate_monomials,
    format_monomial,
    index_map,
    mono_mul,
    parse_monomial,
)
from .semiring import BOOL, Semifield, SemifieldValue

__all__ = [
    "PolynomialError",
    "TropPolynomial",
    "FieldPolynomial",
    "MacaulayMatrix",
    "parse",
    "parse_field",
    "render",
    "monomial_multiple",
    "macaulay_matrix",
    "has_nonzero_maximal_minor",
    "random_lift",
    "infer_n",
]


class PolynomialError(ValueError):
    pass


@dataclass(frozen=True)
class TropPolynomial:
    n: int
    degree: int
    semifield: Semifield
    terms: Mapping[Monomial, SemifieldValue]

    def __post_init__(self):
        if not self.terms:
            raise PolynomialError("the zero polynomial is not allowed")
        for m, c in self.terms.items():
            if len(m) != self.n + 1 or sum(m) != self.degree:
                raise PolynomialError(f"term {format_monomial(m)} is not of degree {self.degree}")
            if c.is_zero:
                raise PolynomialError("zero coefficients are not stored")
            if c.semifield is not self.semifield:
                raise PolynomialError("coefficient from a different semifield")

    @property
    def support(self) -> Tuple[Monomial, ...]:
        order = index_map(self.n, self.degree)
        return tuple(sorted(self.terms, key=order.__getitem__))

    def log_terms(self) -> Dict[Monomial, Fraction]:
        return {m: c.exponent for m, c in self.terms.items()}

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class FieldPolynomial:
    n: int
    degree: int
    terms: Mapping[Monomial, Fraction]

    def __post_init__(self):
        if not self.terms:
            raise PolynomialError("the zero polynomial is not allowed")
        for m, c in self.terms.items():
            if len(m) != self.n + 1 or sum(m) != self.degree:
                raise PolynomialError(f"term {format_monomial(m)} is not of degree {self.degree}")
            if c == 0:
                raise PolynomialError("zero coefficients are not stored")

    @property
    def support(self) -> Tuple[Monomial, ...]:
        order = index_map(self.n, self.degree)
        return tuple(sorted(self.terms, key=order.__getitem__))

    def __str__(self) -> str:
        return render(self)


Polynomial = Union[TropPolynomial, FieldPolynomial]

_TERM = re.compile(r"^\s*(?:(-?\d+(?:/\d+)?)\s*\*\s*)?(.+?)\s*$")
_VAR = re.compile(r"x(\d+)")


def infer_n(text: str) -> int:
    found = [int(v) for v in _VAR.findall(text)]
    return max(found) if found else 0


def _split_terms(text: str) -> List[Tuple[Optional[str], str]]:
    if not text.strip():
        raise PolynomialError("empty polynomial")
    out = []
    for raw in text.split("+"):
        if not raw.strip():
            raise PolynomialError(f"malformed polynomial {text!r}")
        mt = _TERM.match(raw)
        coeff, mono = mt.group(1), mt.group(2)
        if coeff is None and re.fullmatch(r"-?\d+(?:/\d+)?", mono.strip()):
            raise PolynomialError(f"constant term {raw.strip()!r} is not allowed")
        out.append((coeff, mono))
    return out


def _collect(pairs, n):
    terms = {}
    degree = None
    for coeff, mono in pairs:
        try:
            m = parse_monomial(mono, n)
        except ValueError as exc:
            raise PolynomialError(str(exc)) from exc
        if m in terms:
            raise PolynomialError(f"repeated monomial {format_monomial(m)}")
        if degree is None:
            degree = sum(m)
        elif sum(m) != degree:
            raise PolynomialError("inhomogeneous polynomial")
        terms[m] = coeff
    return terms, degree


def parse(text: str, semifield: Semifield = BOOL, n: Optional[int] = None) -> TropPolynomial:
    """Parse ``[coeff*]x0^2*x1 + ...``; coefficients are exponents in the value group."""
    if n is None:
        n = infer_n(text)
    raw, degree = _collect(_split_terms(text), n)
    terms = {}
    for m, c in raw.items():
        value = semifield.one if c is None else semifield.parse(c)
        if value.is_zero:
            raise PolynomialError("zero coefficients are not allowed")
        terms[m] = value
    return TropPolynomial(n, degree, semifield, terms)


def parse_field(text: str, n: Optional[int] = None) -> FieldPolynomial:
    if n is None:
        n = infer_n(text)
    raw, degree = _collect(_split_terms(text), n)
    terms = {m: (Fraction(1) if c is None else Fraction(c)) for m, c in raw.items()}
    if any(c == 0 for c in terms.values()):
        raise PolynomialError("zero coefficients are not allowed")
    return FieldPolynomial(n, degree, terms)


def render(p: Polynomial) -> str:
    out = []
    for m in p.support:
        c = p.terms[m]
        mono = format_monomial(m)
        if isinstance(p, TropPolynomial):
            implicit = c.exponent == 0
        else:
            implicit = c == 1
        out.append(mono if implicit else f"{c}*{mono}")
    return " + ".join(out)


def monomial_multiple(m: Sequence[int], p: Polynomial) -> Polynomial:
    terms = {mono_mul(m, k): c for k, c in p.terms.items()}
    if isinstance(p, TropPolynomial):
        return TropPolynomial(p.n, p.degree + sum(m), p.semifield, terms)
    return FieldPolynomial(p.n, p.degree + sum(m), terms)


@dataclass
class MacaulayMatrix:
    """Sparse Macaulay matrix; ``rows[i]`` maps column index to coefficient."""

    row_labels: Tuple[Monomial, ...]
    col_labels: Tuple[Monomial, ...]
    rows: List[Dict[int, object]]
    semifield: Optional[Semifield] = None  # None for rational entries

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def entry(self, i: int, j: int):
        if j in self.rows[i]:
            return self.rows[i][j]
        return self.semifield.zero if self.semifield is not None else Fraction(0)

    def dense(self) -> List[list]:
        r, c = self.shape
        return [[self.entry(i, j) for j in range(c)] for i in range(r)]

    def pattern(self) -> List[List[int]]:
        return [sorted(row) for row in self.rows]

    def triplets(self) -> Iterator[Tuple[int, int, object]]:
        for i, row in enumerate(self.rows):
            for j in sorted(row):
                yield i, j, row[j]

    def to_json(self) -> dict:
        return {
            "rows": [list(m) for m in self.row_labels],
            "cols": [list(m) for m in self.col_labels],
            "semifield": self.semifield.name if self.semifield is not None else "Q",
            "entries": [[i, j, str(v)] for i, j, v in self.triplets()],
        }


def macaulay_matrix(p: Polynomial, d: int) -> MacaulayMatrix:
    if d < p.degree:
        raise PolynomialError(f"degree {d} is below deg f = {p.degree}")
    row_labels = enumerate_monomials(p.n, d - p.degree)
    col_labels = enumerate_monomials(p.n, d)
    col_index = index_map(p.n, d)
    rows = []
    for X in row_labels:
        rows.append({col_index[mono_mul(X, m)]: c for m, c in p.terms.items()})
    semifield = p.semifield if isinstance(p, TropPolynomial) else None
    return MacaulayMatrix(row_labels, col_labels, rows, semifield)


def _perfect_row_matching(adj: List[List[int]]) -> bool:
    match_col: Dict[int, int] = {}

    def augment(r, seen):
        for c in adj[r]:
            if c in seen:
                continue
            seen.add(c)
            if c not in match_col or augment(match_col[c], seen):
                match_col[c] = r
                return True
        return False

    return all(augment(r, set()) for r in range(len(adj)))


def has_nonzero_maximal_minor(M: MacaulayMatrix) -> bool:
    """Some row-complete partial transversal of the nonzero pattern exists.

    Over an idempotent semifield a maximal minor is nonzero exactly when its
    square submatrix admits a nonzero entry in every row and column, so the
    question reduces to bipartite matching.
    """
    r, c = M.shape
    if r > c:
        return False
    adj = [[j for j, v in row.items() if not _is_zero(v)] for row in M.rows]
    return _perfect_row_matching(adj)


def _is_zero(v) -> bool:
    if isinstance(v, SemifieldValue):
        return v.is_zero
    return v == 0


def random_lift(f: TropPolynomial, rng: random.Random, bound: int = 50) -> FieldPolynomial:
    """Rational polynomial with the support of ``f`` and random nonzero coefficients."""
    terms = {}
    for m in f.support:
        num = 0
        while num == 0:
            num = rng.randint(-bound, bound)
        terms[m] = Fraction(num, rng.randint(1, bound))
    return FieldPolynomial(f.n, f.degree, terms)
