"""Transversal valuated matroids presented by weighted set systems.

A presentation is a list of rows, each a sparse map from column index to a
nonzero weight (a group exponent).  Its Plücker coordinate at a column set J
with ``|J| = #rows`` is the tropical maximal minor: the best total weight of
a perfect matching of rows onto J.  Over the Booleans all weights are 0 and
everything reduces to bipartite matching.

Column subsets are passed around as integer bitmasks.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .semiring import BOOL, Semifield, SemifieldValue

__all__ = [
    "Presentation",
    "HallWitness",
    "to_mask",
    "members",
    "max_weight_assignment",
    "weak_image",
    "WeakImageResult",
    "monomial_multiples_rank_bound_check",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 2_000_000


def to_mask(cols: Iterable[int]) -> int:
    m = 0
    for c in cols:
        m |= 1 << c
    return m


def members(mask: int) -> List[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def max_weight_assignment(weights: Sequence[Sequence[Optional[int]]]) -> Optional[Tuple[int, List[int]]]:
    """Maximum-weight perfect matching of a square integer matrix.

    ``None`` entries are forbidden edges.  Returns ``(total, assignment)``
    with ``assignment[row] = column``, or ``None`` when no perfect matching
    avoids the forbidden entries.  Kuhn-Munkres with potentials, all in
    exact integers.
    """
    n = len(weights)
    if n == 0:
        return 0, []
    if not _pattern_perfect([[j for j, w in enumerate(row) if w is not None] for row in weights]):
        return None
    present = [w for row in weights for w in row if w is not None]
    hi, lo = max(present), min(present)
    big = n * (hi - lo) + 1
    cost = [[(hi - w) if w is not None else big for w in row] for row in weights]
    # potentials u (rows), v (cols); p[j] = row matched to column j, 1-indexed
    INF = float("inf")
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = -1
            row = cost[i0 - 1]
            ui0 = u[i0]
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    assign = [0] * n
    for j in range(1, n + 1):
        assign[p[j] - 1] = j - 1
    total = sum(weights[i][assign[i]] for i in range(n))
    return total, assign


def _pattern_perfect(adj: List[List[int]]) -> bool:
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


@dataclass(frozen=True)
class HallWitness:
    """Rows ``A`` and columns ``B`` with no row of A touching B and |A|+|B| > #rows."""

    rows: Tuple[int, ...]
    cols: Tuple[int, ...]

    def check(self, presentation: "Presentation") -> bool:
        bmask = to_mask(self.cols)
        disjoint = all(not (presentation.row_masks[a] & bmask) for a in self.rows)
        return disjoint and len(self.rows) + len(self.cols) > presentation.nrows


class Presentation:
    """Weighted set system ``A_1, ..., A_r`` on the columns ``0..ncols-1``."""

    def __init__(
        self,
        rows: Sequence[Dict[int, Fraction]],
        ncols: int,
        semifield: Semifield = BOOL,
        col_labels: Optional[Sequence] = None,
        row_labels: Optional[Sequence] = None,
    ):
        self.semifield = semifield
        self.ncols = ncols
        self.rows: List[Dict[int, Fraction]] = [dict(r) for r in rows]
        if any(not r for r in self.rows):
            raise ValueError("every row of a presentation must be nonempty")
        self.nrows = len(self.rows)
        self.col_labels = tuple(col_labels) if col_labels is not None else tuple(range(ncols))
        self.row_labels = tuple(row_labels) if row_labels is not None else tuple(range(self.nrows))
        self.row_masks = [to_mask(r) for r in self.rows]
        self.adj: List[List[int]] = [sorted(r) for r in self.rows]
        self.col_adj: List[List[int]] = [[] for _ in range(ncols)]
        for i, r in enumerate(self.adj):
            for c in r:
                self.col_adj[c].append(i)
        dens = [w.denominator for r in self.rows for w in r.values()]
        self._scale = lcm(*dens) if dens else 1
        self._int_rows = [{c: int(w * self._scale) for c, w in r.items()} for r in self.rows]
        self._coord_cache: Dict[int, Optional[Fraction]] = {}

    @classmethod
    def from_macaulay(cls, M) -> "Presentation":
        rows = [{j: v.exponent for j, v in row.items()} for row in M.rows]
        return cls(rows, len(M.col_labels), M.semifield, M.col_labels, M.row_labels)

    # -- matchings -------------------------------------------------------

    def _max_matching(self, allowed: int) -> Tuple[List[int], Dict[int, int]]:
        """Maximum matching of rows into the allowed columns (row -> col, col -> row)."""
        match_row = [-1] * self.nrows
        match_col: Dict[int, int] = {}
        for r in range(self.nrows):
            self._augment(r, allowed, match_row, match_col, set())
        return match_row, match_col

    def _augment(self, r, allowed, match_row, match_col, seen) -> bool:
        for c in self.adj[r]:
            if not (allowed >> c) & 1 or c in seen:
                continue
            seen.add(c)
            other = match_col.get(c)
            if other is None or self._augment(other, allowed, match_row, match_col, seen):
                match_row[r] = c
                match_col[c] = r
                return True
        return False

    def rank_of_subset(self, cols) -> int:
        """Size of a largest partial transversal inside ``cols``."""
        mask = cols if isinstance(cols, int) else to_mask(cols)
        match_row, _ = self._max_matching(mask)
        return sum(1 for c in match_row if c >= 0)

    def rank(self) -> int:
        return self.rank_of_subset((1 << self.ncols) - 1)

    def corank_contraction(self, cols) -> int:
        """Rank of the contraction by ``cols``: rank(E) - rank(cols)."""
        return self.rank() - self.rank_of_subset(cols)

    def restriction_rank(self, cols) -> int:
        return self.rank_of_subset(cols)

    def closure(self, cols) -> int:
        """Closure of a column set in the transversal matroid, as a bitmask."""
        mask = cols if isinstance(cols, int) else to_mask(cols)
        match_row, match_col = self._max_matching(mask)
        reach_rows = [r for r in range(self.nrows) if match_row[r] < 0]
        seen = set(reach_rows)
        addable = 0
        stack = list(reach_rows)
        while stack:
            r = stack.pop()
            for c in self.adj[r]:
                if (mask >> c) & 1:
                    r2 = match_col.get(c)
                    if r2 is not None and r2 not in seen:
                        seen.add(r2)
                        stack.append(r2)
                else:
                    addable |= 1 << c
        full = (1 << self.ncols) - 1
        return full & ~addable

    def is_flat(self, cols) -> bool:
        mask = cols if isinstance(cols, int) else to_mask(cols)
        return self.closure(mask) == mask

    # -- coordinates -----------------------------------------------------

    def is_basis(self, cols) -> bool:
        mask = cols if isinstance(cols, int) else to_mask(cols)
        if bin(mask).count("1") != self.nrows:
            raise ValueError("basis candidates must have exactly #rows columns")
        return self.rank_of_subset(mask) == self.nrows

    def hall_witness(self, cols) -> Optional[HallWitness]:
        """Hall obstruction for a non-basis column set; ``None`` if it is a basis."""
        mask = cols if isinstance(cols, int) else to_mask(cols)
        if bin(mask).count("1") != self.nrows:
            raise ValueError("basis candidates must have exactly #rows columns")
        match_row, match_col = self._max_matching(mask)
        free = [r for r in range(self.nrows) if match_row[r] < 0]
        if not free:
            return None
        seen_rows = set(free)
        seen_cols = 0
        stack = list(free)
        while stack:
            r = stack.pop()
            for c in self.adj[r]:
                if (mask >> c) & 1 and not (seen_cols >> c) & 1:
                    seen_cols |= 1 << c
                    r2 = match_col[c]
                    if r2 not in seen_rows:
                        seen_rows.add(r2)
                        stack.append(r2)
        witness = HallWitness(tuple(sorted(seen_rows)), tuple(members(mask & ~seen_cols)))
        assert witness.check(self)
        return witness

    def plucker_log(self, cols) -> Optional[Fraction]:
        """Tropical maximal minor at ``cols`` as a group exponent (``None`` = zero)."""
        mask = cols if isinstance(cols, int) else to_mask(cols)
        if mask in self._coord_cache:
            return self._coord_cache[mask]
        J = members(mask)
        if len(J) != self.nrows:
            raise ValueError(f"need {self.nrows} columns, got {len(J)}")
        if self.semifield.trivial_group:
            value = Fraction(0) if self.rank_of_subset(mask) == self.nrows else None
        else:
            mat = [[r.get(c) for c in J] for r in self._int_rows]
            res = max_weight_assignment(mat)
            value = None if res is None else Fraction(res[0], self._scale)
        if len(self._coord_cache) < 1_000_000:
            self._coord_cache[mask] = value
        return value

    def plucker_coordinate(self, cols) -> SemifieldValue:
        return SemifieldValue(self.semifield, self.plucker_log(cols))

    # -- enumeration -----------------------------------------------------

    def iter_independent(self, size: int) -> Iterator[int]:
        """All independent column sets of the given size, as bitmasks, ascending lex."""
        n, r = self.ncols, self.nrows
        if size > r:
            return
        match_row = [-1] * r
        match_col: Dict[int, int] = {}

        def rec(start, depth, mask, match_row, match_col):
            if depth == size:
                yield mask
                return
            for c in range(start, n - (size - depth) + 1):
                mr = list(match_row)
                mc = dict(match_col)
                if self._augment_col(c, mr, mc, set()):
                    yield from rec(c + 1, depth + 1, mask | (1 << c), mr, mc)

        yield from rec(0, 0, 0, match_row, match_col)

    def _augment_col(self, c, match_row, match_col, seen) -> bool:
        for r in self.col_adj[c]:
            if r in seen:
                continue
            seen.add(r)
            other = match_row[r]
            if other < 0 or self._augment_col(other, match_row, match_col, seen):
                match_row[r] = c
                match_col[c] = r
                return True
        return False

    def iter_bases(self) -> Iterator[int]:
        """All bases as bitmasks.  Picks removal or addition search by size."""
        n, r = self.ncols, self.nrows
        if self.rank() < r:
            return
        if n - r < r:
            yield from self._bases_by_removal()
        else:
            yield from self.iter_independent(r)

    def _bases_by_removal(self) -> Iterator[int]:
        n, r = self.ncols, self.nrows
        k = n - r
        full = (1 << n) - 1
        match_row, match_col = self._max_matching(full)
        out: List[int] = []

        def rec(start, depth, removed, match_row, match_col):
            if depth == k:
                out.append(full & ~removed)
                return
            for c in range(start, n - (k - depth) + 1):
                rm = removed | (1 << c)
                row = match_col.get(c)
                if row is None:
                    rec(c + 1, depth + 1, rm, match_row, match_col)
                    continue
                mr = list(match_row)
                mc = dict(match_col)
                del mc[c]
                mr[row] = -1
                if self._augment(row, full & ~rm, mr, mc, set()):
                    rec(c + 1, depth + 1, rm, mr, mc)

        rec(0, 0, 0, match_row, match_col)
        # removal order yields complements in lex order; sort for a stable contract
        out.sort(key=_lex_key)
        return iter(out)

    def count_bases(self) -> int:
        return sum(1 for _ in self.iter_bases())

    def coordinates(self) -> Dict[int, Fraction]:
        """Dense map basis mask -> coordinate exponent (nonzero coordinates only)."""
        return {B: self.plucker_log(B) for B in self.iter_bases()}


def _lex_key(mask: int):
    return members(mask)


@dataclass
class WeakImageResult:
    holds: bool
    checked: int
    exhaustive: bool
    counterexample: Optional[Tuple[int, ...]] = None
    seed: Optional[int] = None

    def __bool__(self) -> bool:
        return self.holds


def weak_image(
    general: Callable[[Tuple[int, ...]], bool],
    image: Callable[[Tuple[int, ...]], bool],
    ground_size: int,
    r: int,
    *,
    general_rank: Optional[int] = None,
    image_rank: Optional[int] = None,
    cap: int = ENUMERATION_CAP,
    seed: int = 0,
) -> WeakImageResult:
    """Every basis of ``image`` is a basis of ``general`` (same rank ``r``).

    Oracles take a sorted tuple of ground indices.  Above ``cap`` subsets a
    seeded sample of ``cap`` subsets is tested instead.
    """
    if general_rank is not None and image_rank is not None and general_rank != image_rank:
        raise ValueError(f"rank mismatch: {general_rank} vs {image_rank}")
    total = comb(ground_size, r)
    if total <= cap:
        subsets: Iterable[Tuple[int, ...]] = itertools.combinations(range(ground_size), r)
        exhaustive = True
    else:
        rng = random.Random(seed)
        subsets = (tuple(sorted(rng.sample(range(ground_size), r))) for _ in range(cap))
        exhaustive = False
    checked = 0
    for J in subsets:
        checked += 1
        if image(J) and not general(J):
            return WeakImageResult(False, checked, exhaustive, J, None if exhaustive else seed)
    return WeakImageResult(True, checked, exhaustive, None, None if exhaustive else seed)


def monomial_multiples_rank_bound_check(space, f, multiples) -> bool:
    """Check that a space containing ``len(multiples)`` monomial multiples of ``f``
    has at least that rank.  ``space`` needs ``contains`` and ``rank``.
    """
    from .polynomial import monomial_multiple

    distinct = {tuple(m) for m in multiples}
    for m in distinct:
        if not space.contains_polynomial(monomial_multiple(m, f)):
            raise ValueError(f"multiple {m} is not a member of the space")
    return space.rank >= len(distinct)
