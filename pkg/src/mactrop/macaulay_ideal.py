"""The Macaulay tropical ideal [f] and related graded families.

Degree d of [f] is the Stiefel tropical linear space of the Macaulay matrix
D_d(f): the stable sum of its rows.  Its coordinates are answered lazily by
the assignment oracle of :mod:`mactrop.stiefel`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .monomials import enumerate_monomials, index_map, mono_mul, simplex_size
from .polynomial import PolynomialError, TropPolynomial, macaulay_matrix, monomial_multiple
from .semiring import TROP, vanishes_logs
from .stiefel import Presentation, members
from .valuated_matroid import (
    Covector,
    ValuatedMatroid,
    cocircuits,
    covector_support,
    membership,
    unit_matroid,
)

__all__ = [
    "GradedTropicalIdeal",
    "IdealCheck",
    "macaulay_degree",
    "macaulay_ideal",
    "verify_tropical_ideal",
    "hilbert_function",
    "binomial_double_perp",
    "binomial_partition",
    "bend_relations_hold",
    "shift_covector",
    "polynomial_covector",
    "variety_containment_sample",
    "VarietyReport",
]


def polynomial_covector(p) -> Covector:
    idx = index_map(p.n, p.degree)
    v: List[Optional[Fraction]] = [None] * simplex_size(p.n, p.degree)
    for m, c in p.terms.items():
        v[idx[m]] = c.exponent if hasattr(c, "exponent") else c
    return tuple(v)


def macaulay_degree(f: TropPolynomial, d: int) -> ValuatedMatroid:
    """[f]_d, presented by the rows of D_d(f)."""
    if d < f.degree:
        raise PolynomialError(f"degree {d} is below deg f = {f.degree}")
    M = macaulay_matrix(f, d)
    pres = Presentation.from_macaulay(M)
    return ValuatedMatroid(M.col_labels, pres.nrows, f.semifield, presentation=pres)


@dataclass
class GradedTropicalIdeal:
    f: TropPolynomial
    builder: Callable[[int], ValuatedMatroid]
    provenance: str = "macaulay"
    spaces: Dict[int, ValuatedMatroid] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.f.n

    def degree(self, d: int) -> ValuatedMatroid:
        """J_d; the zero space (rank 0) below deg f."""
        if d not in self.spaces:
            if d < self.f.degree:
                ground = enumerate_monomials(self.f.n, d)
                self.spaces[d] = unit_matroid(ground, self.f.semifield)
            else:
                self.spaces[d] = self.builder(d)
        return self.spaces[d]

    @property
    def d_max(self) -> Optional[int]:
        return max(self.spaces) if self.spaces else None


def macaulay_ideal(f: TropPolynomial) -> GradedTropicalIdeal:
    return GradedTropicalIdeal(f, lambda d: macaulay_degree(f, d), "macaulay")


def shift_covector(v: Covector, n: int, d: int, var: int) -> Covector:
    """Multiply a degree-d covector by the variable ``x_var``."""
    src = enumerate_monomials(n, d)
    dst = index_map(n, d + 1)
    out: List[Optional[Fraction]] = [None] * simplex_size(n, d + 1)
    step = tuple(1 if k == var else 0 for k in range(n + 1))
    for i, x in enumerate(v):
        if x is not None:
            out[dst[mono_mul(src[i], step)]] = x
    return tuple(out)


@dataclass
class IdealCheck:
    ok: bool
    failure: Optional[Tuple[int, int, Covector]] = None
    cocircuits_checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def verify_tropical_ideal(J: GradedTropicalIdeal, d_max: int) -> IdealCheck:
    """x_i * J_d lands in J_{d+1}, tested on every cocircuit of J_d, d < d_max."""
    n = J.n
    checked = 0
    for d in range(J.f.degree, d_max):
        low = J.degree(d)
        high = J.degree(d + 1)
        for beta in cocircuits(low):
            checked += 1
            for i in range(n + 1):
                if not membership(high, shift_covector(beta, n, d, i)):
                    return IdealCheck(False, (d, i, beta), checked)
    return IdealCheck(True, None, checked)


def hilbert_function(J: GradedTropicalIdeal, d: int) -> int:
    return simplex_size(J.n, d) - J.degree(d).rank


# -- binomials ----------------------------------------------------------------


class _PotentialUnionFind:
    """Union-find carrying a potential phi with phi(a) - phi(b) fixed on links."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.offset = [Fraction(0)] * size  # phi(x) - phi(parent(x))

    def find(self, x: int) -> Tuple[int, Fraction]:
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        # compress, accumulating offsets from the top of the path down
        acc = Fraction(0)
        for y in reversed(path):
            acc += self.offset[y]
            self.offset[y] = acc
            self.parent[y] = root
        return root, (self.offset[path[0]] if path else Fraction(0))

    def union(self, a: int, b: int, diff: Fraction) -> None:
        """Impose phi(a) - phi(b) = diff."""
        ra, oa = self.find(a)
        rb, ob = self.find(b)
        if ra == rb:
            if oa - ob != diff:
                raise RuntimeError("ratio inconsistency along a cycle of binomial links")
            return
        # phi(ra) - phi(rb) = diff - oa + ob
        self.parent[ra] = rb
        self.offset[ra] = diff - oa + ob


def binomial_partition(f: TropPolynomial, d: int) -> Tuple[List[List[int]], List[Fraction]]:
    """Finest partition of Delta_d linking h*f1 ~ h*f2, with potentials.

    Returns the parts (ground indices, ascending) and a potential ``phi`` such
    that phi(h f1) - phi(h f2) = c1 - c2 on every link.
    """
    if len(f.terms) != 2:
        raise ValueError("binomial_double_perp needs a binomial")
    if d < f.degree:
        raise PolynomialError(f"degree {d} is below deg f = {f.degree}")
    (m1, c1), (m2, c2) = sorted(f.terms.items(), key=lambda t: index_map(f.n, f.degree)[t[0]])
    idx = index_map(f.n, d)
    size = len(idx)
    uf = _PotentialUnionFind(size)
    for h in enumerate_monomials(f.n, d - f.degree):
        uf.union(idx[mono_mul(h, m1)], idx[mono_mul(h, m2)], c1.exponent - c2.exponent)
    groups: Dict[int, List[int]] = {}
    phi = []
    for x in range(size):
        r, o = uf.find(x)
        groups.setdefault(r, []).append(x)
        phi.append(o)
    parts = sorted(groups.values())
    return parts, phi


def binomial_double_perp(f: TropPolynomial, d: int) -> ValuatedMatroid:
    """<f>_d^{perp perp}: a direct sum of corank-one uniform blocks on the parts."""
    parts, phi = binomial_partition(f, d)
    ground = enumerate_monomials(f.n, d)
    coords: Dict[int, Fraction] = {0: Fraction(0)}
    for part in parts:
        if len(part) < 2:
            continue
        block = {}
        for u in part:
            B = 0
            for x in part:
                if x != u:
                    B |= 1 << x
            # circuit of the block has entries -phi(u) at u, so p_{U-u} = -phi(u)
            block[B] = -phi[u]
        coords = {A | B: a + b for A, a in coords.items() for B, b in block.items()}
    rank = sum(len(p) - 1 for p in parts if len(p) >= 2)
    if rank == 0:
        return unit_matroid(ground, f.semifield)
    return ValuatedMatroid(ground, rank, f.semifield, coords)


def bend_relations_hold(f: TropPolynomial, d: int, g: Covector) -> bool:
    """g lies in <f>_d^{perp perp}: on each part the rescaled maximum is attained twice."""
    parts, phi = binomial_partition(f, d)
    for part in parts:
        vals = [None if g[u] is None else g[u] - phi[u] for u in part]
        if len(part) == 1:
            if vals[0] is not None:
                return False
        elif not vanishes_logs(vals):
            return False
    return True


# -- tropical variety sampling ------------------------------------------------


@dataclass
class VarietyReport:
    degree: int
    points: List[Tuple[Fraction, ...]]
    on_hypersurface: List[bool]
    violations: List[Tuple[int, Covector]]
    cocircuit_count: int
    seed: int

    @property
    def ok(self) -> bool:
        return not self.violations


def _eval_terms(v: Covector, monos, y) -> List[Optional[Fraction]]:
    out = []
    for x, m in zip(v, monos):
        if x is None:
            out.append(None)
        else:
            out.append(x + sum(e * yi for e, yi in zip(m, y)))
    return out


def on_hypersurface(f: TropPolynomial, y) -> bool:
    vals = [c.exponent + sum(e * yi for e, yi in zip(m, y)) for m, c in f.terms.items()]
    return vanishes_logs(vals)


def sample_hypersurface_points(f: TropPolynomial, count: int, seed: int) -> List[Tuple[Fraction, ...]]:
    """Seeded rational points where the maximum of f is attained at least twice.

    A random point is moved along one coordinate ray until two chosen terms
    tie; the candidate is kept only if the tie is at the maximum.
    """
    if len(f.terms) < 2:
        raise ValueError("a monomial has an empty tropical hypersurface")
    rng = random.Random(seed)
    terms = [(m, c.exponent) for m, c in sorted(f.terms.items())]
    pts: List[Tuple[Fraction, ...]] = []
    attempts = 0
    while len(pts) < count:
        attempts += 1
        if attempts > 1000 * count + 1000:
            raise RuntimeError("could not sample enough hypersurface points")
        y = [Fraction(rng.randint(-40, 40), rng.randint(1, 8)) for _ in range(f.n + 1)]
        i, j = rng.sample(range(len(terms)), 2)
        (mi, ci), (mj, cj) = terms[i], terms[j]
        dirs = [k for k in range(f.n + 1) if mi[k] != mj[k]]
        k = rng.choice(dirs)
        ti = ci + sum(e * v for e, v in zip(mi, y))
        tj = cj + sum(e * v for e, v in zip(mj, y))
        y[k] += (tj - ti) / (mi[k] - mj[k])
        if on_hypersurface(f, y):
            pts.append(tuple(y))
    return pts


def variety_containment_sample(
    f: TropPolynomial,
    J: GradedTropicalIdeal,
    d: int,
    sample_count: int,
    seed: int,
    points=None,
) -> VarietyReport:
    """Every cocircuit of J_d attains its maximum twice at sampled points of V(f)."""
    if f.semifield is not TROP:
        raise ValueError("the variety check is offered over the tropical rationals only")
    if points is None:
        points = sample_hypersurface_points(f, sample_count, seed)
    space = J.degree(d)
    monos = enumerate_monomials(f.n, d)
    cocs = cocircuits(space)
    on = [on_hypersurface(f, y) for y in points]
    violations = []
    for k, y in enumerate(points):
        if not on[k]:
            continue
        for h in cocs:
            if not vanishes_logs(_eval_terms(h, monos, y)):
                violations.append((k, h))
    return VarietyReport(d, list(points), on, violations, len(cocs), seed)
