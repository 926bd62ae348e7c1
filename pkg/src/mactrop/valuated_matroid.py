"""Valuated matroids as projective Plücker coordinate maps.

Coordinates are stored as a dict from basis bitmask (over the ordered ground
set) to a group exponent; zero coordinates are simply absent.  Covectors are
tuples of exponents with ``None`` for the zero element.

A matroid may instead be backed by a :class:`~mactrop.stiefel.Presentation`;
then coordinates, closures and ranks are answered by matching, and the dense
map is only built on request.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from .semiring import BOOL, TROP, Semifield, SemifieldValue, vanishes_logs
from .stiefel import Presentation, members, to_mask

__all__ = [
    "Covector",
    "ValuatedMatroid",
    "PluckerCheck",
    "check_plucker",
    "cocircuits",
    "circuits",
    "perp",
    "OrthogonalDual",
    "membership",
    "stable_sum",
    "underlying",
    "equal",
    "elimination_axiom_holds",
    "EliminationResult",
    "orthogonal",
    "normalize_covector",
    "covector_support",
    "covector_add",
    "covector_scale",
    "DENSE_CAP",
]

DENSE_CAP = 5_000_000

Covector = Tuple[Optional[Fraction], ...]


# -- covector helpers ---------------------------------------------------------


def covector_support(v: Covector) -> int:
    m = 0
    for i, x in enumerate(v):
        if x is not None:
            m |= 1 << i
    return m


def covector_add(u: Covector, v: Covector) -> Covector:
    return tuple(
        b if a is None else a if b is None else (a if a >= b else b) for a, b in zip(u, v)
    )


def covector_scale(v: Covector, s: Optional[Fraction]) -> Covector:
    if s is None:
        return tuple(None for _ in v)
    return tuple(None if x is None else x + s for x in v)


def normalize_covector(v: Covector) -> Covector:
    """Scale so the maximal coordinate is One; the zero vector is returned as is."""
    vals = [x for x in v if x is not None]
    if not vals:
        return v
    return covector_scale(v, -max(vals))


def orthogonal(u: Covector, v: Covector) -> bool:
    return vanishes_logs(
        None if a is None or b is None else a + b for a, b in zip(u, v)
    )


# -- the matroid --------------------------------------------------------------


class ValuatedMatroid:
    def __init__(
        self,
        ground: Sequence,
        rank: int,
        semifield: Semifield,
        coords: Optional[Dict[int, Fraction]] = None,
        presentation: Optional[Presentation] = None,
        normalize: bool = True,
    ):
        self.ground = tuple(ground)
        self.rank = rank
        self.semifield = semifield
        self.presentation = presentation
        self._coords: Optional[Dict[int, Fraction]] = None
        self._circuits: Optional[List[Covector]] = None
        if coords is not None:
            if not coords:
                raise ValueError("a valuated matroid needs a nonzero coordinate")
            for B in coords:
                if bin(B).count("1") != rank or B >> len(self.ground):
                    raise ValueError("coordinate subset has wrong size")
            if semifield.trivial_group:
                coords = {B: Fraction(0) for B in coords}
            self._coords = _normalized(coords) if normalize else dict(coords)
        elif presentation is None:
            raise ValueError("need coordinates or a presentation")

    # -- access ---------------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.ground)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def coordinates(self) -> Dict[int, Fraction]:
        if self._coords is None:
            if comb(self.size, self.rank) > DENSE_CAP and self.semifield is not BOOL:
                raise OverflowError("Plücker map above the dense cap; use the presentation")
            self._coords = _normalized(self.presentation.coordinates())
        return self._coords

    @property
    def is_dense(self) -> bool:
        return self._coords is not None

    def coordinate_log(self, subset) -> Optional[Fraction]:
        mask = subset if isinstance(subset, int) else to_mask(subset)
        if self._coords is not None:
            return self._coords.get(mask)
        raw = self.presentation.plucker_log(mask)
        return raw  # unnormalized gauge; use coordinates() for normalized values

    def coordinate(self, subset) -> SemifieldValue:
        return SemifieldValue(self.semifield, self.coordinate_log(subset))

    def bases(self) -> List[int]:
        if self._coords is not None:
            return sorted(self._coords, key=members)
        return list(self.presentation.iter_bases())

    def is_basis(self, subset) -> bool:
        mask = subset if isinstance(subset, int) else to_mask(subset)
        if self._coords is not None:
            return mask in self._coords
        return self.presentation.is_basis(mask)

    def rank_of(self, subset) -> int:
        mask = subset if isinstance(subset, int) else to_mask(subset)
        if self.presentation is not None:
            return self.presentation.rank_of_subset(mask)
        return max(bin(B & mask).count("1") for B in self._coords)

    def closure(self, subset) -> int:
        mask = subset if isinstance(subset, int) else to_mask(subset)
        if self.presentation is not None:
            return self.presentation.closure(mask)
        r = self.rank_of(mask)
        out = mask
        for e in range(self.size):
            if not (mask >> e) & 1 and self.rank_of(mask | (1 << e)) == r:
                out |= 1 << e
        return out

    def independent_sets(self, size: int) -> Iterator[int]:
        if self.presentation is not None and self._coords is None:
            yield from self.presentation.iter_independent(size)
            return
        seen: Set[int] = set()
        for B in self.bases():
            for sub in itertools.combinations(members(B), size):
                m = to_mask(sub)
                if m not in seen:
                    seen.add(m)
        yield from sorted(seen, key=members)

    def contains(self, v: Covector) -> bool:
        return membership(self, v)

    def contains_polynomial(self, p) -> bool:
        from .monomials import index_map

        idx = index_map(p.n, p.degree)
        if len(idx) != self.size:
            raise ValueError("polynomial degree does not match the ground set")
        v: List[Optional[Fraction]] = [None] * self.size
        for m, c in p.terms.items():
            v[idx[m]] = c.exponent
        return membership(self, tuple(v))

    def __repr__(self) -> str:
        kind = "dense" if self._coords is not None else "presented"
        return f"ValuatedMatroid(|E|={self.size}, rank={self.rank}, {self.semifield.name}, {kind})"

    def to_json(self) -> dict:
        def label(x):
            return list(x) if isinstance(x, tuple) else x

        coords = self.coordinates()
        zero_text = "0" if self.semifield.trivial_group else "-inf"
        return {
            "ground": [label(x) for x in self.ground],
            "rank": self.rank,
            "semifield": self.semifield.name,
            "normalized": True,
            "coordinates": [
                [members(B), str(SemifieldValue(self.semifield, coords[B]))]
                for B in sorted(coords, key=members)
            ],
            "zero": zero_text,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ValuatedMatroid":
        from .semiring import get_semifield

        sf = get_semifield(data["semifield"])
        ground = [tuple(x) if isinstance(x, list) else x for x in data["ground"]]
        coords = {to_mask(s): sf.parse(t).exponent for s, t in data["coordinates"]}
        return cls(ground, data["rank"], sf, coords)


def _normalized(coords: Dict[int, Fraction]) -> Dict[int, Fraction]:
    top = max(coords.values())
    if top == 0:
        return dict(coords)
    return {B: v - top for B, v in coords.items()}


# -- Plücker relations --------------------------------------------------------


@dataclass
class PluckerCheck:
    ok: bool
    violation: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None
    pairs_checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def check_plucker(p, ground_size: Optional[int] = None, rank: Optional[int] = None) -> PluckerCheck:
    """Tropical vanishing of every three-term-style Plücker sum.

    Accepts a :class:`ValuatedMatroid` or a raw ``{mask: exponent}`` dict.
    Pairs (A, B) whose sum has no nonzero term vanish trivially and are
    skipped; the rest are evaluated exactly in scaled integers.
    """
    if isinstance(p, ValuatedMatroid):
        coords, E, r = p.coordinates(), p.size, p.rank
    else:
        coords, E, r = p, ground_size, rank
    if not coords:
        return PluckerCheck(False)
    if r == 0 or r == E:
        return PluckerCheck(True)
    bases = list(coords)
    a_set, b_set = set(), set()
    full = (1 << E) - 1
    for B in bases:
        rest = full & ~B
        for j in members(rest):
            a_set.add(B | (1 << j))
        for i in members(B):
            b_set.add(B & ~(1 << i))
    A_list = sorted(a_set, key=members)
    B_list = sorted(b_set, key=members)
    scale = lcm(*(v.denominator for v in coords.values()))
    ivals = {B: int(v * scale) for B, v in coords.items()}
    big = max((abs(x) for x in ivals.values()), default=0)
    use_obj = big > 2**60 // 4
    dtype = object if use_obj else np.int64

    def build(sets, sign):
        vals = np.zeros((len(sets), E), dtype=dtype)
        ok = np.zeros((len(sets), E), dtype=bool)
        for row, S in enumerate(sets):
            for i in range(E):
                bit = 1 << i
                if sign > 0 and (S & bit):
                    key = S & ~bit
                elif sign < 0 and not (S & bit):
                    key = S | bit
                else:
                    continue
                x = ivals.get(key)
                if x is not None:
                    vals[row, i] = x
                    ok[row, i] = True
        return vals, ok

    Av, Aok = build(A_list, +1)
    Bv, Bok = build(B_list, -1)
    nB = len(B_list)
    chunk = max(1, 2_000_000 // max(1, nB * E))
    checked = 0
    for start in range(0, len(A_list), chunk):
        av = Av[start:start + chunk]
        aok = Aok[start:start + chunk]
        tot = av[:, None, :] + Bv[None, :, :]
        valid = aok[:, None, :] & Bok[None, :, :]
        if use_obj:
            floor = -(3 * big + 1)
        else:
            floor = np.iinfo(np.int64).min // 4
        tot = np.where(valid, tot, floor)
        mx = tot.max(axis=2)
        cnt = (tot == mx[:, :, None]).sum(axis=2)
        anyv = valid.any(axis=2)
        bad = anyv & (cnt == 1)
        checked += int(anyv.sum())
        if bad.any():
            ai, bi = np.argwhere(bad)[0]
            A = A_list[start + int(ai)]
            Bm = B_list[int(bi)]
            return PluckerCheck(False, (tuple(members(A)), tuple(members(Bm))), checked)
    return PluckerCheck(True, None, checked)


# -- circuits and cocircuits --------------------------------------------------


def _dedupe(vectors: Iterable[Covector]) -> List[Covector]:
    seen = {}
    for v in vectors:
        if all(x is None for x in v):
            continue
        nv = normalize_covector(v)
        seen.setdefault(nv, None)
    return sorted(seen, key=_cov_key)


def _cov_key(v: Covector):
    return (members(covector_support(v)), [x for x in v if x is not None])


def cocircuits(p: ValuatedMatroid) -> List[Covector]:
    """Cocircuits beta_C, one per independent (r-1)-set C, deduplicated up to scalar."""
    E, r = p.size, p.rank
    if r == 0:
        return []
    if p.semifield.trivial_group and p.presentation is not None and not p.is_dense:
        out = set()
        full = p.full_mask
        for C in p.independent_sets(r - 1):
            out.add(full & ~p.closure(C))
        zero = Fraction(0)
        return sorted(
            (tuple(zero if (S >> i) & 1 else None for i in range(E)) for S in out),
            key=_cov_key,
        )
    coords = p.coordinates()
    Cs = set()
    for B in coords:
        for i in members(B):
            Cs.add(B & ~(1 << i))
    vecs = []
    for C in Cs:
        vecs.append(tuple(
            None if (C >> i) & 1 else coords.get(C | (1 << i)) for i in range(E)
        ))
    return _dedupe(vecs)


def circuits(p: ValuatedMatroid) -> List[Covector]:
    """Fundamental circuits alpha_D, one per (r+1)-set D containing a basis."""
    E, r = p.size, p.rank
    coords = p.coordinates()
    Ds = set()
    full = p.full_mask
    for B in coords:
        for j in members(full & ~B):
            Ds.add(B | (1 << j))
    vecs = []
    for D in Ds:
        vecs.append(tuple(
            coords.get(D & ~(1 << i)) if (D >> i) & 1 else None for i in range(E)
        ))
    return _dedupe(vecs)


# -- orthogonal duals and membership ------------------------------------------


@dataclass
class OrthogonalDual:
    """The set of vectors orthogonal to every member of ``family``."""

    family: List[Covector]
    size: int
    semifield: Semifield

    def contains(self, v: Covector) -> bool:
        return all(orthogonal(v, x) for x in self.family)

    def generators(self) -> List[Covector]:
        """Canonical (union-irreducible) generators of the dual module; Boolean only."""
        if not self.semifield.trivial_group:
            raise NotImplementedError("explicit generators are provided over B only")
        if self.size > 20:
            raise OverflowError("ground set too large for explicit enumeration")
        fam = [covector_support(x) for x in self.family]
        members_ = []
        for S in range(1, 1 << self.size):
            if all(_bool_orth(S, F) for F in fam):
                members_.append(S)
        member_set = set(members_)
        irreducible = []
        for S in members_:
            below = 0
            for T in members_:
                if T != S and T & ~S == 0:
                    below |= T
            if below != S:
                irreducible.append(S)
        zero = Fraction(0)
        return [tuple(zero if (S >> i) & 1 else None for i in range(self.size)) for S in sorted(irreducible, key=members)]


def _bool_orth(S: int, F: int) -> bool:
    return bin(S & F).count("1") != 1


def perp(vectors: Sequence[Covector], size: int, semifield: Semifield = BOOL) -> OrthogonalDual:
    return OrthogonalDual(list(vectors), size, semifield)


def membership(p: ValuatedMatroid, v: Covector) -> bool:
    """``v`` lies in the tropical linear space spanned by the cocircuits of ``p``.

    Over the Booleans with a presentation this is the flat test: the support
    must be the complement of a flat.  Otherwise ``v`` is tested against every
    fundamental circuit.
    """
    if len(v) != p.size:
        raise ValueError("covector length does not match the ground set")
    if all(x is None for x in v):
        return True
    if p.semifield.trivial_group:
        S = covector_support(v)
        F = p.full_mask & ~S
        return p.closure(F) == F
    if p._circuits is None:
        p._circuits = circuits(p)
    return all(orthogonal(v, a) for a in p._circuits)


# -- stable sum, underlying matroid, equality ---------------------------------


def stable_sum(p: ValuatedMatroid, q: ValuatedMatroid) -> ValuatedMatroid:
    if p.ground != q.ground:
        raise ValueError("stable sum needs a common ground set")
    if p.semifield is not q.semifield:
        raise ValueError("stable sum needs a common semifield")
    out: Dict[int, Fraction] = {}
    pc, qc = p.coordinates(), q.coordinates()
    for A, a in pc.items():
        for B, b in qc.items():
            if A & B:
                continue
            I = A | B
            s = a + b
            cur = out.get(I)
            if cur is None or s > cur:
                out[I] = s
    if not out:
        raise ValueError("stable sum degenerate")
    return ValuatedMatroid(p.ground, p.rank + q.rank, p.semifield, out)


def unit_matroid(ground: Sequence, semifield: Semifield) -> ValuatedMatroid:
    """Rank-0 matroid with the single coordinate p_empty = One."""
    return ValuatedMatroid(ground, 0, semifield, {0: Fraction(0)})


def rank_one(ground: Sequence, weights: Dict[int, Fraction], semifield: Semifield) -> ValuatedMatroid:
    return ValuatedMatroid(ground, 1, semifield, {1 << i: w for i, w in weights.items()})


def underlying(p: ValuatedMatroid) -> ValuatedMatroid:
    if p.presentation is not None and not p.is_dense:
        pres = p.presentation
        flat = Presentation(
            [{c: Fraction(0) for c in r} for r in pres.rows], pres.ncols, BOOL,
            pres.col_labels, pres.row_labels,
        )
        return ValuatedMatroid(p.ground, p.rank, BOOL, presentation=flat)
    return ValuatedMatroid(p.ground, p.rank, BOOL, {B: Fraction(0) for B in p.coordinates()})


def equal(p: ValuatedMatroid, q: ValuatedMatroid) -> bool:
    if p.ground != q.ground or p.rank != q.rank or p.semifield is not q.semifield:
        return False
    return p.coordinates() == q.coordinates()


# -- elimination axiom --------------------------------------------------------


@dataclass
class EliminationResult:
    holds: Optional[bool]  # None = inconclusive
    witness: Optional[Tuple[Covector, Covector, int]] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return bool(self.holds)


def _span_max_below(gens: Sequence[Covector], upper: Covector) -> Covector:
    """Largest element of span(gens) bounded coordinatewise by ``upper``."""
    E = len(upper)
    best: List[Optional[Fraction]] = [None] * E
    for g in gens:
        lam = None
        feasible = True
        for i, x in enumerate(g):
            if x is None:
                continue
            u = upper[i]
            if u is None:
                feasible = False
                break
            t = u - x
            if lam is None or t < lam:
                lam = t
        if not feasible or lam is None:
            continue
        for i, x in enumerate(g):
            if x is None:
                continue
            y = x + lam
            if best[i] is None or y > best[i]:
                best[i] = y
    return tuple(best)


def has_j_elimination_in_span(gens: Sequence[Covector], v: Covector, w: Covector, j: int) -> bool:
    if v[j] is None or v[j] != w[j]:
        raise ValueError("a j-elimination needs v_j = w_j nonzero")
    s = covector_add(v, w)
    upper = tuple(None if i == j else x for i, x in enumerate(s))
    top = _span_max_below(gens, upper)
    for i in range(len(v)):
        if i != j and v[i] != w[i] and top[i] != s[i]:
            return False
    return True


def _bool_span(gens: Sequence[int]) -> Set[int]:
    span = {0}
    frontier = [0]
    gens = list(dict.fromkeys(gens))
    while frontier:
        nxt = []
        for S in frontier:
            for g in gens:
                T = S | g
                if T not in span:
                    span.add(T)
                    nxt.append(T)
        frontier = nxt
    return span


def elimination_axiom_holds(generators: Sequence[Covector], semifield: Semifield = BOOL, depth: int = 2) -> EliminationResult:
    """Vector elimination for the module spanned by ``generators``.

    Exact over the Booleans (the module is finite).  Over the tropical
    rationals, pairs are drawn from scalar multiples of sums of at most
    ``depth`` generators; a pass with no failure is reported inconclusive.
    """
    if not generators:
        return EliminationResult(True)
    E = len(generators[0])
    if semifield.trivial_group:
        gm = [covector_support(g) for g in generators]
        span = sorted(_bool_span(gm), key=lambda S: (bin(S).count("1"), members(S)))
        cover_cache: Dict[int, int] = {}

        def cover(X):
            c = cover_cache.get(X)
            if c is None:
                c = 0
                for g in gm:
                    if g & ~X == 0:
                        c |= g
                cover_cache[X] = c
            return c

        for U in span:
            for j in members(U):
                Uj = U & ~(1 << j)
                cj = cover(Uj)
                if cj == Uj:
                    continue
                for e in members(Uj & ~cj):
                    v = cover(U & ~(1 << e))
                    if (v >> j) & 1:
                        zero = Fraction(0)
                        to_vec = lambda S: tuple(zero if (S >> i) & 1 else None for i in range(E))
                        return EliminationResult(False, (to_vec(v), to_vec(U), j))
        return EliminationResult(True)
    pool: List[Covector] = []
    for k in range(1, depth + 1):
        for combo in itertools.combinations(generators, k):
            acc = combo[0]
            for g in combo[1:]:
                acc = covector_add(acc, g)
            pool.append(acc)
    gens = list(generators)
    for a, b in itertools.combinations(pool, 2):
        for j in range(E):
            if a[j] is None or b[j] is None:
                continue
            bs = covector_scale(b, a[j] - b[j])
            if not has_j_elimination_in_span(gens, a, bs, j):
                return EliminationResult(False, (a, bs, j))
    return EliminationResult(None, detail=f"no failure among sums of <= {depth} generators")
