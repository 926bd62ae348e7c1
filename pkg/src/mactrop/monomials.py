"""The monomial simplex and its subsimplex translates.

Monomials are plain tuples of exponents ``(e0, ..., en)``.  Within a degree
they are ordered lexicographically with ``x0`` the greatest variable, and
enumeration runs from the greatest monomial ``x0^d`` down to ``xn^d``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Dict, List, Sequence, Tuple

Monomial = Tuple[int, ...]

__all__ = [
    "Monomial",
    "SimplexTranslate",
    "simplex_size",
    "enumerate_monomials",
    "index_of",
    "monomial_at",
    "index_map",
    "translate_members",
    "translates",
    "mono_mul",
    "divides",
    "format_monomial",
    "parse_monomial",
]


def simplex_size(n: int, d: int) -> int:
    """Number of degree-d monomials in n+1 variables; zero for negative d."""
    if d < 0:
        return 0
    return comb(n + d, d)


def _gen(n: int, d: int):
    if n == 0:
        yield (d,)
        return
    for e in range(d, -1, -1):
        for rest in _gen(n - 1, d - e):
            yield (e,) + rest


@lru_cache(maxsize=None)
def enumerate_monomials(n: int, d: int) -> Tuple[Monomial, ...]:
    if n < 0 or d < 0:
        raise ValueError("n and d must be nonnegative")
    return tuple(_gen(n, d))


@lru_cache(maxsize=None)
def index_map(n: int, d: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(enumerate_monomials(n, d))}


def index_of(m: Sequence[int]) -> int:
    m = tuple(m)
    n, d = len(m) - 1, sum(m)
    # count monomials lexicographically greater than m
    idx = 0
    rem = d
    for k in range(n):
        for e in range(rem, m[k], -1):
            idx += simplex_size(n - k - 1, rem - e)
        rem -= m[k]
    return idx


def monomial_at(n: int, d: int, i: int) -> Monomial:
    if not 0 <= i < simplex_size(n, d):
        raise IndexError(f"index {i} out of range for degree {d} in {n + 1} variables")
    out = []
    rem = d
    for k in range(n):
        for e in range(rem, -1, -1):
            block = simplex_size(n - k - 1, rem - e)
            if i < block:
                out.append(e)
                rem -= e
                break
            i -= block
    out.append(rem)
    return tuple(out)


def mono_mul(a: Sequence[int], b: Sequence[int]) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class SimplexTranslate:
    """The set ``gcd * Delta_inner`` inside the degree ``deg(gcd) + inner`` simplex."""

    gcd: Monomial
    inner_degree: int

    @property
    def degree(self) -> int:
        return sum(self.gcd) + self.inner_degree


def translate_members(t: SimplexTranslate, d: int | None = None) -> Tuple[Monomial, ...]:
    if d is not None and t.degree != d:
        raise ValueError(f"translate of degree {t.degree} does not live in degree {d}")
    n = len(t.gcd) - 1
    return tuple(mono_mul(t.gcd, m) for m in enumerate_monomials(n, t.inner_degree))


def translates(n: int, inner: int, d: int) -> List[SimplexTranslate]:
    """All translates of the degree-``inner`` simplex inside degree ``d``."""
    if inner > d:
        return []
    return [SimplexTranslate(g, inner) for g in enumerate_monomials(n, d - inner)]


def format_monomial(m: Sequence[int]) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts) if parts else "1"


_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_monomial(text: str, n: int) -> Monomial:
    exps = [0] * (n + 1)
    t = text.strip()
    if t == "1":
        return tuple(exps)
    for factor in t.split("*"):
        mt = _FACTOR.match(factor.strip())
        if not mt:
            raise ValueError(f"bad monomial factor {factor!r}")
        var = int(mt.group(1))
        if var > n:
            raise ValueError(f"variable x{var} outside x0..x{n}")
        exps[var] += int(mt.group(2) or 1)
    return tuple(exps)
