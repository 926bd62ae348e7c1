"""Minimal-elimination envelopes of finitely generated modules, and the graded
envelope of a principal ideal.

Over the Booleans a module is a union-closed family of subsets, held here as
an indicator array over all 2^|E| subsets, so each round of the fixpoint is a
handful of vectorized passes.  Over the tropical rationals the module is a
list of generators and spans are probed by principal residuation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .macaulay_ideal import GradedTropicalIdeal, polynomial_covector, shift_covector
from .monomials import enumerate_monomials
from .polynomial import TropPolynomial, monomial_multiple
from .semiring import BOOL, Semifield
from .stiefel import members, to_mask
from .valuated_matroid import (
    Covector,
    ValuatedMatroid,
    _span_max_below,
    covector_add,
    covector_scale,
    covector_support,
    normalize_covector,
    unit_matroid,
)

__all__ = [
    "BModuleGens",
    "EnvelopeResult",
    "module_membership",
    "has_j_elimination",
    "minimal_elimination",
    "envelope_fixpoint",
    "graded_envelope",
    "module_matroid",
    "BOOL_SIZE_CAP",
]

BOOL_SIZE_CAP = 22
MAX_ROUNDS = 64


def _mask_vec(S: int, size: int) -> Covector:
    zero = Fraction(0)
    return tuple(zero if (S >> i) & 1 else None for i in range(size))


def _cov_order(v: Covector):
    return (members(covector_support(v)), [x for x in v if x is not None])


@dataclass
class BModuleGens:
    """Canonical generators of a submodule of S^E plus the round counter."""

    size: int
    semifield: Semifield
    generators: List[Covector]
    rounds: int = 0

    def __post_init__(self):
        self.generators = canonicalize(self.generators, self.size, self.semifield)

    def contains(self, v: Covector) -> bool:
        return module_membership(self, v)

    def supports(self) -> List[int]:
        return [covector_support(g) for g in self.generators]


# -- Boolean lattice helpers --------------------------------------------------


def _or_zeta(ind: np.ndarray, size: int) -> np.ndarray:
    """g[X] = union of all marked subsets contained in X."""
    idx = np.arange(1 << size, dtype=np.int64)
    g = np.where(ind, idx, 0).astype(np.int64)
    for e in range(size):
        bit = 1 << e
        view = g.reshape(-1, 2, bit)
        view[:, 1, :] |= view[:, 0, :]
    return g


def _bool_span_indicator(supports: Sequence[int], size: int) -> Tuple[np.ndarray, np.ndarray]:
    """Indicator of the union-closure of ``supports`` (with the empty set) and its cover map."""
    if size > BOOL_SIZE_CAP:
        raise OverflowError(f"ground set of size {size} exceeds the Boolean cap {BOOL_SIZE_CAP}")
    ind = np.zeros(1 << size, dtype=bool)
    for S in supports:
        ind[S] = True
    g = _or_zeta(ind, size)
    idx = np.arange(1 << size, dtype=np.int64)
    span = g == idx
    return span, g


def _irreducible(span: np.ndarray, size: int) -> List[int]:
    """Members of a union-closed family that are not unions of smaller members."""
    idx = np.arange(1 << size, dtype=np.int64)
    g = _or_zeta(span, size)
    below = np.zeros_like(g)
    for e in range(size):
        bit = 1 << e
        has = (idx & bit) != 0
        below[has] |= g[idx[has] ^ bit]
    irr = span & (below != idx) & (idx != 0)
    return [int(x) for x in np.nonzero(irr)[0]]


def canonicalize(gens: Sequence[Covector], size: int, semifield: Semifield) -> List[Covector]:
    gens = [g for g in gens if any(x is not None for x in g)]
    if semifield.trivial_group:
        supports = {covector_support(g) for g in gens}
        span, _ = _bool_span_indicator(list(supports), size)
        irr = _irreducible(span, size)
        return sorted((_mask_vec(S, size) for S in irr), key=_cov_order)
    # drop generators already in the span of the others, one at a time
    out = sorted({normalize_covector(g) for g in gens}, key=_cov_order)
    k = 0
    while k < len(out):
        rest = out[:k] + out[k + 1:]
        if rest and _span_max_below(rest, out[k]) == out[k]:
            out = rest
        else:
            k += 1
    return out


# -- membership and eliminations ----------------------------------------------


def module_membership(G: BModuleGens, v: Covector) -> bool:
    """``v`` is in span(G) iff the residuated hull of G under ``v`` equals ``v``."""
    if len(v) != G.size:
        raise ValueError("covector length does not match the ground set")
    if all(x is None for x in v):
        return True
    return _span_max_below(G.generators, v) == tuple(v)


def minimal_elimination(v: Covector, w: Covector, j: int) -> Covector:
    if v[j] is None or v[j] != w[j]:
        raise ValueError("a j-elimination needs v_j = w_j nonzero")
    s = covector_add(v, w)
    return tuple(None if i == j else x for i, x in enumerate(s))


def has_j_elimination(G: BModuleGens, v: Covector, w: Covector, j: int) -> bool:
    """Some u in span(G) has u_j = 0, u <= v + w, and agrees with v + w off the agreement set."""
    upper = minimal_elimination(v, w, j)
    top = _span_max_below(G.generators, upper)
    return all(top[i] == upper[i] for i in range(len(v)) if i != j and v[i] != w[i])


# -- the fixpoint -------------------------------------------------------------


@dataclass
class EnvelopeResult:
    module: BModuleGens
    converged: Optional[bool]  # None means max_rounds ran out (inconclusive)
    rounds: int
    trace: List[List[Tuple[Covector, Tuple[Covector, Covector, int]]]] = field(default_factory=list)

    @property
    def inconclusive(self) -> bool:
        return self.converged is None


def _bool_round(span: np.ndarray, g: np.ndarray, size: int):
    """All (U, j) where U in the module has a pair lacking a j-elimination.

    A pair with union U fails at j exactly when some e in (U - j) lies outside
    the cover of U - j while j lies in the cover of U - e.
    """
    idx = np.arange(1 << size, dtype=np.int64)
    found = []
    for j in range(size):
        jb = 1 << j
        U = idx[span & ((idx & jb) != 0)]
        if U.size == 0:
            continue
        cov_j = g[U ^ jb]
        bad = np.zeros(U.size, dtype=bool)
        witness_e = np.full(U.size, -1, dtype=np.int64)
        for e in range(size):
            if e == j:
                continue
            eb = 1 << e
            cand = ((U & eb) != 0) & ((cov_j & eb) == 0)
            if not cand.any():
                continue
            hit = cand & ((g[U ^ eb] & jb) != 0) & ~bad
            witness_e[hit] = e
            bad |= hit
        for u, e in zip(U[bad].tolist(), witness_e[bad].tolist()):
            found.append((u, j, e))
    return found


def _bool_fixpoint(G0: BModuleGens, max_rounds: int, keep_trace: bool) -> EnvelopeResult:
    size = G0.size
    span, g = _bool_span_indicator(G0.supports(), size)
    trace = []
    rounds = 0
    while True:
        found = _bool_round(span, g, size)
        additions = {}
        for U, j, e in found:
            new = U & ~(1 << j)
            if new and new not in additions:
                additions[new] = (int(g[U & ~(1 << e)]), U, j)
        fresh = {S: why for S, why in additions.items() if not span[S]}
        if not fresh:
            break
        if rounds >= max_rounds:
            return EnvelopeResult(_gens_from_span(span, size, rounds), None, rounds, trace)
        rounds += 1
        if keep_trace:
            trace.append([
                (_mask_vec(S, size), (_mask_vec(v, size), _mask_vec(U, size), j))
                for S, (v, U, j) in sorted(fresh.items(), key=lambda t: members(t[0]))
            ])
        span, g = _bool_span_indicator(_irreducible(span, size) + list(fresh), size)
    return EnvelopeResult(_gens_from_span(span, size, rounds), True, rounds, trace)


def _gens_from_span(span, size, rounds) -> BModuleGens:
    irr = _irreducible(span, size)
    return BModuleGens(size, BOOL, [_mask_vec(S, size) for S in irr], rounds)


def _trop_fixpoint(G0: BModuleGens, max_rounds: int, keep_trace: bool) -> EnvelopeResult:
    G = G0
    trace = []
    rounds = 0
    while True:
        added = []
        gens = G.generators
        for a, b in itertools.combinations(gens, 2):
            for j in range(G.size):
                if a[j] is None or b[j] is None:
                    continue
                bs = covector_scale(b, a[j] - b[j])
                if not has_j_elimination(G, a, bs, j):
                    added.append((normalize_covector(minimal_elimination(a, bs, j)), (a, bs, j)))
        # merge deterministically, skipping vectors already spanned
        fresh = {}
        for w, why in sorted(added, key=lambda t: _cov_order(t[0])):
            if w not in fresh and not module_membership(G, w):
                fresh[w] = why
        if not fresh:
            return EnvelopeResult(G, True, rounds, trace)
        if rounds >= max_rounds:
            return EnvelopeResult(G, None, rounds, trace)
        rounds += 1
        if keep_trace:
            trace.append(list(fresh.items()))
        G = BModuleGens(G.size, G.semifield, list(gens) + list(fresh), rounds)


def envelope_fixpoint(G0: BModuleGens, max_rounds: int = MAX_ROUNDS, keep_trace: bool = True) -> EnvelopeResult:
    """Iterate M[l+1] = M[l] plus minimal eliminations of pairs lacking one.

    Over the Booleans every pair of module elements is considered.  Over the
    tropical rationals pairs are drawn from the current generators; the
    ``converged`` flag is ``None`` when ``max_rounds`` ran out.
    """
    if G0.semifield.trivial_group:
        return _bool_fixpoint(G0, max_rounds, keep_trace)
    return _trop_fixpoint(G0, max_rounds, keep_trace)


# -- from a module back to a valuated matroid ---------------------------------


def module_matroid(G: BModuleGens, ground: Sequence) -> ValuatedMatroid:
    """The valuated matroid whose cocircuits are the minimal-support module elements.

    Assumes the module is a tropical linear space (e.g. an envelope fixpoint).
    """
    size = G.size
    if not G.generators:
        return unit_matroid(ground, G.semifield)
    span, g = _bool_span_indicator(G.supports(), size)
    full = (1 << size) - 1

    def closure(X):
        return full & ~int(g[full & ~X])

    # greedy rank, then all bases among r-subsets
    indep = 0
    for e in range(size):
        if not (closure(indep) >> e) & 1:
            indep |= 1 << e
    r = bin(indep).count("1")
    bases = []
    for J in itertools.combinations(range(size), r):
        mask = to_mask(J)
        if all(not (closure(mask & ~(1 << x)) >> x) & 1 for x in J):
            bases.append(mask)
    if G.semifield.trivial_group:
        return ValuatedMatroid(ground, r, G.semifield, {B: Fraction(0) for B in bases})

    # cocircuit vector for each minimal support, read from a generator
    cocirc: Dict[int, Covector] = {}
    for v in G.generators:
        cocirc.setdefault(covector_support(v), v)

    def beta(C):
        support = full & ~closure(C)
        v = cocirc.get(support)
        if v is None:
            raise ValueError("module is not a tropical linear space: a cocircuit is missing")
        return v

    base_set = set(bases)
    B0 = bases[0]
    coords = {B0: Fraction(0)}
    queue = [B0]
    while queue:
        B = queue.pop()
        for i in members(B):
            C = B & ~(1 << i)
            v = None
            for k in range(size):
                if (B >> k) & 1:
                    continue
                B2 = C | (1 << k)
                if B2 not in base_set or B2 in coords:
                    continue
                if v is None:
                    v = beta(C)
                coords[B2] = coords[B] + v[k] - v[i]
                queue.append(B2)
    return ValuatedMatroid(ground, r, G.semifield, coords)


# -- the graded envelope ------------------------------------------------------


def graded_envelope(f: TropPolynomial, d_max: int, max_rounds: int = MAX_ROUNDS) -> GradedTropicalIdeal:
    """Degreewise envelope: start from span(f), then shift, add <f>_d, and close."""
    n, D = f.n, f.degree
    modules: Dict[int, EnvelopeResult] = {}
    spaces: Dict[int, ValuatedMatroid] = {}
    prev: Optional[BModuleGens] = None
    for d in range(D, d_max + 1):
        size = len(enumerate_monomials(n, d))
        seeds = [polynomial_covector(monomial_multiple(h, f)) for h in enumerate_monomials(n, d - D)]
        if prev is not None:
            for v in prev.generators:
                for i in range(n + 1):
                    seeds.append(shift_covector(v, n, d - 1, i))
        res = envelope_fixpoint(BModuleGens(size, f.semifield, seeds), max_rounds)
        modules[d] = res
        spaces[d] = module_matroid(res.module, enumerate_monomials(n, d))
        prev = res.module

    def builder(d):
        raise KeyError(f"degree {d} is beyond the computed envelope (d_max = {d_max})")

    J = GradedTropicalIdeal(f, builder, "envelope", spaces)
    J.modules = modules
    J.inconclusive = any(m.inconclusive for m in modules.values())
    return J
