"""Acceptance suite: one test per criterion, each under its time budget.

Run alone with ``python3 tests/test_acceptance.py`` or ``pytest tests/test_acceptance.py``;
the terminal summary prints one PASS/FAIL line per criterion.
"""
import itertools
import random
import time
from fractions import Fraction
from math import comb

import pytest

from mactrop.envelope import graded_envelope
from mactrop.macaulay_ideal import (
    binomial_double_perp,
    macaulay_degree,
    macaulay_ideal,
    sample_hypersurface_points,
    variety_containment_sample,
    verify_tropical_ideal,
)
from mactrop.monomials import enumerate_monomials, index_map, simplex_size
from mactrop.mr_recipe import compare_mr, density_ok, DensityBound, mr_matroid, recipe_failure_witness
from mactrop.polynomial import parse, parse_field, random_lift
from mactrop.realizability import bonin_transversality, field_matroid, nonrealizability_witness
from mactrop.semiring import BOOL, TROP
from mactrop.stiefel import Presentation, max_weight_assignment, members, to_mask, weak_image
from mactrop.valuated_matroid import (
    check_plucker,
    circuits,
    cocircuits,
    equal,
    normalize_covector,
    orthogonal,
    underlying,
)

SUM_CUBICS = " + ".join(
    "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(m) if e)
    for m in enumerate_monomials(2, 3)
)
F_SET = ["x0 + x1 + x2", "x0^2 + x1*x2", SUM_CUBICS]


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f} s, budget {self.seconds} s"
        return False


def test_criterion_01_plucker_example():
    with Budget(1):
        a, b = Fraction(1), Fraction(1, 2)
        f = parse("1*x0 + 1/2*x1", TROP)
        p = macaulay_degree(f, 2)
        coords = p.coordinates()
        # pairs of {x0^2, x0x1, x1^2}: {0,1} -> a^2, {0,2} -> ab, {1,2} -> b^2
        expected = {0b011: 2 * a, 0b101: a + b, 0b110: 2 * b}
        top = max(expected.values())
        assert coords == {k: v - top for k, v in expected.items()}
        # a^2 x0x1 + ab x1^2,  a^2 x0^2 + b^2 x1^2,  ab x0^2 + b^2 x0x1
        shown = [
            (None, 2 * a, a + b),
            (2 * a, None, 2 * b),
            (a + b, 2 * b, None),
        ]
        assert set(cocircuits(p)) == {normalize_covector(v) for v in shown}
        assert len(cocircuits(p)) == 3


def test_criterion_02_hilbert_function():
    with Budget(10):
        for text in F_SET:
            f = parse(text)
            J = macaulay_ideal(f)
            for d in range(f.degree, f.degree + 4):
                assert J.degree(d).rank == simplex_size(2, d - f.degree)
                assert J.degree(d).presentation.rank() == simplex_size(2, d - f.degree)


def test_criterion_03_tropical_ideal():
    with Budget(60):
        for text in F_SET:
            f = parse(text)
            res = verify_tropical_ideal(macaulay_ideal(f), f.degree + 3)
            assert res.ok, res.failure
            assert res.cocircuits_checked > 0


def test_criterion_04_maclagan_rincon():
    with Budget(300):
        for d in range(2, 7):
            c = compare_mr(d)
            assert c.equal, (d, c.only_density, c.only_transversal)
            assert c.density_count == c.transversal_count > 0
        assert c.subsets_scanned == comb(28, 7)


def test_criterion_05_recipe_failure():
    with Budget(30):
        w = recipe_failure_witness()
        assert len(w.support) == 18
        assert len(w.complement) == 10
        assert density_ok(set(w.support), DensityBound(2, 3, 6)).ok
        assert not w.is_basis
        assert w.hall is not None
        space = macaulay_degree(w.f, 6)
        assert w.hall.check(space.presentation)
        assert w.verified


def test_criterion_06_nonrealizability():
    with Budget(5):
        f = parse("x0 + x1 + x2")
        rep = nonrealizability_witness(f, trials=10, seed=2024)
        assert len(rep.trial_det_P) == 10
        assert all(x == 0 for x in rep.trial_det_P)
        assert len(set(map(str, rep.trial_lifts))) == 10  # independent lifts
        # symbolic: exactly two permutation terms, both C1^2 C2^2 C3^2, opposite signs
        assert rep.symbolic_poly == {}
        assert sorted((s, e) for _, s, e in rep.symbolic_terms) == [(-1, (2, 2, 2)), (1, (2, 2, 2))]
        assert set(rep.coordinate_set) == set(rep.blocks.V1)
        assert not rep.tropical_coordinate.is_zero
        assert rep.verified


def test_criterion_07_non_transversal():
    with Budget(120):
        ground = enumerate_monomials(2, 3)
        fm = field_matroid(parse_field("x0 + x1 + x2"), 3)
        res = bonin_transversality(fm.rank_of, len(ground))
        assert not res.transversal
        assert res.negative_flat is not None and res.beta[res.negative_flat] < 0
        trop = underlying(macaulay_degree(parse("x0 + x1 + x2"), 3))
        control = bonin_transversality(trop.rank_of, len(ground))
        assert control.transversal
        assert control.negative_flat is None


def test_criterion_08_binomial_three_way():
    with Budget(60):
        for text, sf in [("1*x0 + 1/2*x1", TROP), ("x0^2 + x1*x2", BOOL)]:
            f = parse(text, sf)
            top = f.degree + 2
            env = graded_envelope(f, top)
            assert not env.inconclusive
            for d in range(f.degree, top + 1):
                mac = macaulay_degree(f, d)
                perp = binomial_double_perp(f, d)
                assert equal(mac, perp), (text, d)
                assert equal(mac, env.degree(d)), (text, d)


def test_criterion_09_envelope_remark():
    with Budget(120):
        f = parse("x0 + x1 + x2")
        env = graded_envelope(f, 3)
        mac = underlying(macaulay_degree(f, 3))
        assert env.degree(3).rank == 6
        assert mac.rank == 6
        diff = set(env.degree(3).bases()) ^ set(mac.bases())
        assert diff, "envelope degree 3 coincides with [f]_3"


def _all_constructed():
    out = []
    for text in F_SET:
        f = parse(text)
        for d in range(f.degree, f.degree + 4):
            out.append(macaulay_degree(f, d))
    f = parse("1*x0 + 1/2*x1", TROP)
    for d in range(1, 4):
        out.append(macaulay_degree(f, d))
        out.append(binomial_double_perp(f, d))
    g = parse("-1*x0^2 + 3/2*x1*x2", TROP)
    for d in range(2, 5):
        out.append(macaulay_degree(g, d))
        out.append(binomial_double_perp(g, d))
    for d in range(1, 5):
        out.append(mr_matroid(2, d))
    env = graded_envelope(parse("x0^2 + x1*x2"), 4)
    out.extend(env.degree(d) for d in range(2, 5))
    return [p for p in out if comb(p.size, p.rank) <= 10_000]


def _brute_assignment(w):
    best = None
    for perm in itertools.permutations(range(len(w))):
        vals = [w[i][perm[i]] for i in range(len(w))]
        if any(v is None for v in vals):
            continue
        s = sum(vals)
        best = s if best is None else max(best, s)
    return best


def test_criterion_10_property_suites():
    with Budget(300):
        spaces = _all_constructed()
        assert len(spaces) >= 20
        # (a) three-term Plücker relations, exhaustively
        for p in spaces:
            assert check_plucker(p).ok, p
        # (b) circuits against cocircuits
        for p in spaces:
            cs, ks = circuits(p), cocircuits(p)
            assert all(orthogonal(a, b) for a in cs for b in ks), p
        # (c) assignment optimum against brute force over bijections
        rng = random.Random(10)
        for _ in range(200):
            r = rng.randint(1, 7)
            w = [[None if rng.random() < 0.3 else Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(r)] for _ in range(r)]
            L = 12
            iw = [[None if x is None else int(x * L) for x in row] for row in w]
            got = max_weight_assignment(iw)
            want = _brute_assignment(iw)
            assert (None if got is None else got[0]) == want
        # (d) random lifts are weak images of [f]_d
        rng = random.Random(11)
        for text in ["x0 + x1 + x2", "x0^2 + x1*x2"]:
            f = parse(text)
            for d in range(f.degree, 4):
                space = macaulay_degree(f, d)
                pres = space.presentation
                for t in range(20):
                    fm = field_matroid(random_lift(f, rng), d)
                    res = weak_image(
                        lambda J: pres.is_basis(to_mask(J)),
                        lambda J: fm.is_basis(to_mask(J)),
                        space.size, space.rank,
                        general_rank=space.rank, image_rank=fm.rank,
                    )
                    assert res.holds and res.exhaustive, (text, d, t, res.counterexample)


def test_criterion_11_variety_sampling():
    with Budget(10):
        f = parse("x0 + x1 + x2", TROP)
        J = macaulay_ideal(f)
        pts = sample_hypersurface_points(f, 100, seed=11)
        assert len(set(pts)) == 100
        for d in (2, 3):
            rep = variety_containment_sample(f, J, d, 100, 11, points=pts)
            assert all(rep.on_hypersurface)
            assert rep.cocircuit_count > 0
            assert rep.ok, rep.violations[:3]


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
