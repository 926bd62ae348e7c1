"""Density matroids M_d of x0 + x1 + x2, the generalized density Recipe, and
the degree-6 witness that the Recipe fails for the sum of all cubics.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .macaulay_ideal import macaulay_degree, polynomial_covector
from .monomials import (
    Monomial,
    SimplexTranslate,
    enumerate_monomials,
    index_map,
    mono_mul,
    simplex_size,
    translate_members,
    translates,
)
from .polynomial import TropPolynomial, monomial_multiple
from .semiring import BOOL
from .stiefel import HallWitness, members, to_mask
from .valuated_matroid import ValuatedMatroid, covector_support, underlying

__all__ = [
    "DensityBound",
    "density_ok",
    "DensityVerdict",
    "translate_masks",
    "density_cobases",
    "mr_matroid",
    "MRComparison",
    "compare_mr",
    "cobases_form_matroid",
    "sum_of_simplex",
    "RecipeWitness",
    "recipe_failure_witness",
]

MR_MAX_DEGREE = 6
EXCHANGE_CAP = 15


@dataclass(frozen=True)
class DensityBound:
    n: int
    D: int
    d: int

    def __call__(self, k: int) -> int:
        return simplex_size(self.n, k) - simplex_size(self.n, k - self.D)

    @property
    def cobasis_size(self) -> int:
        return self(self.d)


@dataclass
class DensityVerdict:
    ok: bool
    violation: Optional[Tuple[SimplexTranslate, int]] = None  # translate and |X cap K|
    audit: List[Tuple[int, int, int]] = field(default_factory=list)  # (k, worst count, bound)

    def __bool__(self) -> bool:
        return self.ok


def translate_masks(n: int, d: int) -> List[Tuple[SimplexTranslate, int]]:
    """Every translate K in Delta_{k->d} for k = 0..d, with its ground mask."""
    idx = index_map(n, d)
    out = []
    for k in range(d + 1):
        for t in translates(n, k, d):
            out.append((t, to_mask(idx[m] for m in translate_members(t, d))))
    return out


def _as_mask(X, n: int, d: int) -> int:
    if isinstance(X, int):
        return X
    idx = index_map(n, d)
    return to_mask(idx[tuple(m)] for m in X)


def density_ok(X, bound: DensityBound) -> DensityVerdict:
    """|X cap K| <= bound(k) for every translate K of Delta_k inside Delta_d."""
    mask = _as_mask(X, bound.n, bound.d)
    worst: Dict[int, int] = {}
    violation = None
    for t, K in translate_masks(bound.n, bound.d):
        k = t.inner_degree
        c = bin(mask & K).count("1")
        worst[k] = max(worst.get(k, 0), c)
        if violation is None and c > bound(k):
            violation = (t, c)
    audit = [(k, worst[k], bound(k)) for k in sorted(worst)]
    return DensityVerdict(violation is None, violation, audit)


def _all_subset_masks(size: int, k: int) -> np.ndarray:
    """All k-subsets of range(size) as uint64 bitmasks, in lex order of members."""
    weights = np.array([1 << i for i in range(size)], dtype=np.uint64)
    combos = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(size), k)),
        dtype=np.int64,
        count=comb(size, k) * k,
    ).reshape(-1, k)
    return weights[combos].sum(axis=1, dtype=np.uint64)


def density_cobases(n: int, D: int, d: int) -> Set[int]:
    """All subsets of Delta_d of the bottom-bound size that satisfy the density bound."""
    bound = DensityBound(n, D, d)
    size = simplex_size(n, d)
    k = bound.cobasis_size
    if size > 63:
        raise OverflowError("ground set too large for bitmask scanning")
    X = _all_subset_masks(size, k)
    keep = np.ones(X.shape[0], dtype=bool)
    for t, K in translate_masks(n, d):
        b = bound(t.inner_degree)
        if b >= k or bin(K).count("1") <= b:
            continue  # cannot be violated
        keep &= np.bitwise_count(X & np.uint64(K)) <= b
    return set(int(x) for x in X[keep])


def mr_matroid(n: int, d: int) -> ValuatedMatroid:
    """M_d over the Booleans: bases are complements of density-satisfying (d+1)-sets."""
    if n != 2:
        raise NotImplementedError("M_d is materialized for n = 2 only")
    if d < 1 or d > MR_MAX_DEGREE:
        raise ValueError(f"degree must lie in 1..{MR_MAX_DEGREE}")
    size = simplex_size(n, d)
    full = (1 << size) - 1
    zero = Fraction(0)
    coords = {full & ~X: zero for X in density_cobases(n, 1, d)}
    return ValuatedMatroid(enumerate_monomials(n, d), size - (d + 1), BOOL, coords)


def sum_of_simplex(n: int, D: int) -> TropPolynomial:
    """The Boolean polynomial whose support is all of Delta_D."""
    one = BOOL.one
    return TropPolynomial(n, D, BOOL, {m: one for m in enumerate_monomials(n, D)})


@dataclass
class MRComparison:
    degree: int
    equal: bool
    density_count: int
    transversal_count: int
    only_density: List[int]
    only_transversal: List[int]
    subsets_scanned: int

    def __bool__(self) -> bool:
        return self.equal


def compare_mr(d: int, n: int = 2) -> MRComparison:
    """Cobases of M_d against cobases of the underlying matroid of [x0+x1+x2]_d."""
    if n != 2:
        raise NotImplementedError("the comparison is stated for n = 2")
    size = simplex_size(n, d)
    full = (1 << size) - 1
    dens = density_cobases(n, 1, d)
    f = sum_of_simplex(n, 1)
    space = underlying(macaulay_degree(f, d))
    trans = {full & ~B for B in space.presentation.iter_bases()}
    only_d = sorted(dens - trans, key=members)
    only_t = sorted(trans - dens, key=members)
    return MRComparison(d, not only_d and not only_t, len(dens), len(trans), only_d[:10], only_t[:10], comb(size, d + 1))


def cobases_form_matroid(cobases: Iterable[int], size: int) -> Tuple[bool, Optional[Tuple[int, int, int]]]:
    """Basis exchange on the complements; returns a failing (B1, B2, x) if any."""
    if size > EXCHANGE_CAP:
        raise OverflowError(f"exchange checks are capped at |E| <= {EXCHANGE_CAP}")
    full = (1 << size) - 1
    bases = {full & ~X for X in cobases}
    if not bases:
        return False, None
    for B1 in bases:
        for B2 in bases:
            for x in members(B1 & ~B2):
                if not any((B1 & ~(1 << x)) | (1 << y) in bases for y in members(B2 & ~B1)):
                    return False, (B1, B2, x)
    return True, None


@dataclass
class RecipeWitness:
    f: TropPolynomial
    degree: int
    support: List[Monomial]
    complement: List[Monomial]
    formula_matches: bool
    density: DensityVerdict
    is_basis: bool
    hall: Optional[HallWitness]
    hall_rows: List[Monomial]
    hall_cols: List[Monomial]
    common_monomial: Monomial

    @property
    def verified(self) -> bool:
        return (
            len(self.support) == 18
            and len(self.complement) == 10
            and self.formula_matches
            and self.density.ok
            and not self.is_basis
            and self.hall is not None
        )


def recipe_failure_witness() -> RecipeWitness:
    """The support of g = elimination of x^3 f and y^3 f at x^3 y^3, f the sum of all cubics."""
    from .envelope import minimal_elimination

    n, D, d = 2, 3, 6
    f = sum_of_simplex(n, D)
    x3, y3 = (3, 0, 0), (0, 3, 0)
    v = polynomial_covector(monomial_multiple(x3, f))
    w = polynomial_covector(monomial_multiple(y3, f))
    idx = index_map(n, d)
    common = mono_mul(x3, y3)
    shared = [i for i in range(len(v)) if v[i] is not None and w[i] is not None]
    assert shared == [idx[common]]
    g = minimal_elimination(v, w, idx[common])
    S = covector_support(g)
    ground = enumerate_monomials(n, d)
    support = [ground[i] for i in members(S)]
    complement = [ground[i] for i in members(((1 << len(ground)) - 1) & ~S)]

    cubics = enumerate_monomials(n, D)
    formula = {mono_mul(x3, m) for m in cubics if m != y3} | {mono_mul(y3, m) for m in cubics if m != x3}
    expected_complement = {(a, b, d - a - b) for a in range(3) for b in range(3)} | {common}
    matches = set(support) == formula and set(complement) == expected_complement

    dens = density_ok(S, DensityBound(n, D, d))
    space = macaulay_degree(f, d)
    pres = space.presentation
    comp_mask = ((1 << len(ground)) - 1) & ~S
    hall = pres.hall_witness(comp_mask)
    return RecipeWitness(
        f, d, support, complement, matches, dens, hall is None, hall,
        [pres.row_labels[i] for i in hall.rows] if hall else [],
        [pres.col_labels[i] for i in hall.cols] if hall else [],
        common,
    )
