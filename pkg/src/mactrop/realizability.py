"""The field side: rational Macaulay matrices, the degree-3d non-realizability
witness, and Bonin's beta test for transversality.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .monomials import Monomial, divides, enumerate_monomials, index_map, mono_mul
from .polynomial import FieldPolynomial, TropPolynomial, macaulay_matrix, random_lift
from .semiring import SemifieldValue
from .stiefel import Presentation, max_weight_assignment, members, to_mask

__all__ = [
    "bareiss_rank",
    "bareiss_det",
    "integer_rows",
    "FieldMatroid",
    "field_matroid",
    "HypothesisData",
    "check_nonrealize_hypotheses",
    "NonrealizeHypothesisError",
    "BlockDecomposition",
    "block_decomposition",
    "symbolic_det",
    "NonrealizabilityReport",
    "nonrealizability_witness",
    "BoninResult",
    "bonin_transversality",
]


# -- exact elimination ----------------------------------------------------------


def integer_rows(rows: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    """Scale each row by the lcm of its denominators; row spaces are unchanged."""
    out = []
    for row in rows:
        L = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * L) for x in row])
    return out


def bareiss_rank(mat: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    A = [list(r) for r in mat]
    if not A:
        return 0
    nr, nc = len(A), len(A[0])
    rank = 0
    prev = 1
    for c in range(nc):
        piv = next((i for i in range(rank, nr) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        pv = A[rank][c]
        for i in range(rank + 1, nr):
            a = A[i][c]
            row_i, row_r = A[i], A[rank]
            for j in range(c + 1, nc):
                row_i[j] = (pv * row_i[j] - a * row_r[j]) // prev
            row_i[c] = 0
        prev = pv
        rank += 1
        if rank == nr:
            break
    return rank


def bareiss_det(mat: Sequence[Sequence[int]]) -> int:
    A = [list(r) for r in mat]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# -- realizable matroids ------------------------------------------------------


class FieldMatroid:
    """Matroid of the row space of D_d(F): J is a basis iff the minor at J is nonzero."""

    def __init__(self, F: FieldPolynomial, d: int):
        M = macaulay_matrix(F, d)
        self.F = F
        self.degree = d
        self.ground = M.col_labels
        self.row_labels = M.row_labels
        dense = [[row.get(j, Fraction(0)) for j in range(len(M.col_labels))] for row in M.rows]
        self.matrix = integer_rows(dense)
        self.rank = bareiss_rank(self.matrix)
        if self.rank != len(self.row_labels):
            raise AssertionError("Macaulay matrix of a nonzero polynomial must have full row rank")
        self._rank_cache: Dict[int, int] = {}

    @property
    def size(self) -> int:
        return len(self.ground)

    def rank_of(self, cols) -> int:
        mask = cols if isinstance(cols, int) else to_mask(cols)
        r = self._rank_cache.get(mask)
        if r is None:
            J = members(mask)
            sub = [[row[j] for j in J] for row in self.matrix]
            r = bareiss_rank(sub) if J else 0
            self._rank_cache[mask] = r
        return r

    def minor(self, cols) -> int:
        J = members(cols if isinstance(cols, int) else to_mask(cols))
        if len(J) != self.rank:
            raise ValueError("minor needs #rows columns")
        return bareiss_det([[row[j] for j in J] for row in self.matrix])

    def is_basis(self, cols) -> bool:
        mask = cols if isinstance(cols, int) else to_mask(cols)
        return bin(mask).count("1") == self.rank and self.rank_of(mask) == self.rank


def field_matroid(F: FieldPolynomial, d: int) -> FieldMatroid:
    return FieldMatroid(F, d)


# -- non-realizability witness ------------------------------------------------


class NonrealizeHypothesisError(ValueError):
    pass


@dataclass
class HypothesisData:
    variables: Tuple[int, ...]
    residual: Tuple[Monomial, Monomial, Monomial]


def _power(m: Monomial, k: int) -> Monomial:
    return tuple(e * k for e in m)


def check_nonrealize_hypotheses(f) -> HypothesisData:
    """Find variables generating M with |supp f \\ M| = 3 and the divisibility conditions.

    Smaller variable sets are tried first, then lexicographically.
    """
    supp = list(f.support)
    n = f.n
    for size in range(0, n + 2):
        for vs in itertools.combinations(range(n + 1), size):
            rest = [m for m in supp if all(m[v] == 0 for v in vs)]
            if len(rest) != 3:
                continue
            if _divisibility_ok(rest):
                return HypothesisData(vs, (rest[0], rest[1], rest[2]))
    raise NonrealizeHypothesisError("no monomial ideal of variables leaves three admissible terms")


def _divisibility_ok(fs: Sequence[Monomial]) -> bool:
    for j, k, l in itertools.permutations(range(3)):
        for i in range(4):
            prod = mono_mul(_power(fs[k], i), _power(fs[l], 3 - i))
            if divides(fs[j], prod):
                return False
    return True


@dataclass
class BlockDecomposition:
    U1: List[Monomial]
    U2: List[Monomial]
    V1: List[Monomial]
    V2: List[Monomial]
    P_pattern: List[List[int]]  # entry k in 1..3 means C_k, 0 means zero
    zero_block_ok: bool
    hypotheses: HypothesisData


def block_decomposition(f) -> BlockDecomposition:
    hyp = check_nonrealize_hypotheses(f)
    f1, f2, f3 = hyp.residual
    d = f.degree
    U1 = [mono_mul(a, b) for a, b in [(f1, f1), (f1, f2), (f1, f3), (f2, f2), (f2, f3), (f3, f3)]]
    V1 = [
        mono_mul(mono_mul(f1, f1), f2),
        mono_mul(mono_mul(f1, f1), f3),
        mono_mul(mono_mul(f1, f2), f2),
        mono_mul(mono_mul(f2, f2), f3),
        mono_mul(mono_mul(f1, f3), f3),
        mono_mul(mono_mul(f2, f3), f3),
    ]
    if len(set(U1)) != 6 or len(set(V1)) != 6:
        raise NonrealizeHypothesisError("products of the residual terms are not distinct")
    U1set, V1set = set(U1), set(V1)
    U2 = [m for m in enumerate_monomials(f.n, 2 * d) if m not in U1set]
    V2 = [m for m in enumerate_monomials(f.n, 3 * d) if m not in V1set]
    supp = list(f.support)
    zero_ok = all(mono_mul(u, t) not in V1set for u in U2 for t in supp)
    which = {f1: 1, f2: 2, f3: 3}
    pattern = []
    for u in U1:
        row = []
        for v in V1:
            k = 0
            for t in supp:
                if mono_mul(u, t) == v:
                    # entries outside f1..f3 cannot reach V1 under the hypotheses
                    k = which.get(t, -1)
            row.append(k)
        pattern.append(row)
    if any(k < 0 for row in pattern for k in row):
        raise AssertionError("upper-left block involves a coefficient outside C1..C3")
    return BlockDecomposition(U1, U2, V1, V2, pattern, zero_ok, hyp)


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def symbolic_det(pattern: Sequence[Sequence[int]], nvars: int = 3):
    """Full permutation expansion of a matrix whose entries are variables C_k or 0.

    Returns ``(expansion_terms, polynomial)``: the nonzero permutation terms as
    ``(permutation, sign, exponents)`` and the collected polynomial
    ``{exponents: coefficient}`` with zero coefficients removed.
    """
    n = len(pattern)
    terms = []
    poly: Dict[Tuple[int, ...], int] = {}
    for perm in itertools.permutations(range(n)):
        exps = [0] * nvars
        ok = True
        for i, j in enumerate(perm):
            k = pattern[i][j]
            if k == 0:
                ok = False
                break
            exps[k - 1] += 1
        if not ok:
            continue
        s = _perm_sign(perm)
        key = tuple(exps)
        terms.append((perm, s, key))
        poly[key] = poly.get(key, 0) + s
    return terms, {k: c for k, c in poly.items() if c != 0}


@dataclass
class NonrealizabilityReport:
    blocks: BlockDecomposition
    coordinate_set: List[Monomial]
    trial_lifts: List[Dict[Monomial, Fraction]]
    trial_det_P: List[Fraction]
    trial_full_minor: List[Fraction]
    symbolic_terms: list
    symbolic_poly: Dict[Tuple[int, ...], int]
    tropical_det_P: SemifieldValue
    tropical_coordinate: SemifieldValue
    seed: int

    @property
    def verified(self) -> bool:
        return (
            self.blocks.zero_block_ok
            and all(x == 0 for x in self.trial_det_P)
            and all(x == 0 for x in self.trial_full_minor)
            and not self.symbolic_poly
            and not self.tropical_coordinate.is_zero
            and not self.tropical_det_P.is_zero
        )


def nonrealizability_witness(f: TropPolynomial, trials: int = 10, seed: int = 0) -> NonrealizabilityReport:
    """Plücker coordinate of [f]_{3d} that every rational lift kills.

    The coordinate set is V1 together with f1 * U2.  Any lift F has
    det(P) = 0 there, while the tropical coordinate is nonzero.
    """
    blocks = block_decomposition(f)
    f1 = blocks.hypotheses.residual[0]
    d3 = 3 * f.degree
    coord_set = sorted(set(blocks.V1) | {mono_mul(f1, u) for u in blocks.U2}, key=index_map(f.n, d3).__getitem__)
    col_index = index_map(f.n, d3)
    row_index = index_map(f.n, 2 * f.degree)
    J = to_mask(col_index[m] for m in coord_set)

    rng = random.Random(seed)
    lifts, dets, minors = [], [], []
    for _ in range(trials):
        F = random_lift(f, rng)
        M = macaulay_matrix(F, d3)
        Pm = [[M.rows[row_index[u]].get(col_index[v], Fraction(0)) for v in blocks.V1] for u in blocks.U1]
        L = lcm(*(x.denominator for row in Pm for x in row))
        dets.append(Fraction(bareiss_det([[int(x * L) for x in row] for row in Pm]), L ** 6))
        fm = FieldMatroid(F, d3)
        minors.append(Fraction(fm.minor(J)))
        lifts.append(dict(F.terms))

    terms, poly = symbolic_det(blocks.P_pattern)

    # tropical side: valuation of P under the coefficients of f
    coeff = {1: None, 2: None, 3: None}
    for k, m in enumerate(blocks.hypotheses.residual, start=1):
        coeff[k] = f.terms[m].exponent
    scale = lcm(*(c.denominator for c in coeff.values()))
    tmat = [[None if k == 0 else int(coeff[k] * scale) for k in row] for row in blocks.P_pattern]
    res = max_weight_assignment(tmat)
    tdet = SemifieldValue(f.semifield, None if res is None else Fraction(res[0], scale))

    M = macaulay_matrix(f, d3)
    pres = Presentation.from_macaulay(M)
    tcoord = pres.plucker_coordinate(J)
    return NonrealizabilityReport(blocks, coord_set, lifts, dets, minors, terms, poly, tdet, tcoord, seed)


# -- Bonin's characterization -------------------------------------------------


@dataclass
class BoninResult:
    transversal: bool
    flats: List[int]
    cyclic_flats: List[int]
    beta: Dict[int, int]
    rank: Dict[int, int]
    negative_flat: Optional[int] = None

    def __bool__(self) -> bool:
        return self.transversal


BONIN_CAP = 14


def bonin_transversality(rank_of: Callable[[int], int], size: int, cap: int = BONIN_CAP) -> BoninResult:
    """Transversality via beta(F) = r(M) - r(F) - sum of beta over cyclic flats strictly above F."""
    if size > cap:
        raise ValueError(f"ground set of size {size} exceeds the cap {cap}")
    full = (1 << size) - 1
    rk: Dict[int, int] = {}

    def r(S):
        v = rk.get(S)
        if v is None:
            v = rank_of(S)
            rk[S] = v
        return v

    def closure(S):
        base = r(S)
        out = S
        for e in range(size):
            if not (S >> e) & 1 and r(S | (1 << e)) == base:
                out |= 1 << e
        return out

    bottom = closure(0)
    flats = {bottom}
    layer = [bottom]
    while layer:
        nxt = []
        for F in layer:
            for e in range(size):
                if not (F >> e) & 1:
                    G = closure(F | (1 << e))
                    if G not in flats:
                        flats.add(G)
                        nxt.append(G)
        layer = nxt
    flat_list = sorted(flats, key=lambda S: (-r(S), -bin(S).count("1"), members(S)))
    cyclic = [F for F in flat_list if all(r(F & ~(1 << u)) == r(F) for u in members(F))]
    cyclic_set = set(cyclic)
    rM = r(full)
    beta: Dict[int, int] = {}
    for F in flat_list:  # supersets come first
        above = sum(beta[G] for G in cyclic if G != F and F & ~G == 0)
        beta[F] = rM - r(F) - above
    # re-verify the defining identity
    for F in flat_list:
        total = sum(beta[G] for G in cyclic if F & ~G == 0 and G != F) + beta[F]
        assert total == rM - r(F)
    neg = next((F for F in flat_list if beta[F] < 0), None)
    return BoninResult(neg is None, flat_list, [F for F in flat_list if F in cyclic_set], beta, {F: r(F) for F in flat_list}, neg)
