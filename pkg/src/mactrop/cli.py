"""Command-line front end.  Every command writes a JSON report (or TSV) and
exits 0 when the claim is verified, 1 when refuted, 2 on usage errors and 3
when a cap or round limit left the answer open.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from math import comb
from typing import Callable, Dict, List, Optional, Tuple

from . import __version__
from .monomials import enumerate_monomials, format_monomial, simplex_size
from .polynomial import PolynomialError, macaulay_matrix, has_nonzero_maximal_minor, parse, parse_field, render
from .semiring import SemifieldError, get_semifield

SCHEMA = "mactrop.report/1"
EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
STATUS = {EXIT_OK: "verified", EXIT_REFUTED: "refuted", EXIT_INCONCLUSIVE: "inconclusive"}
PLUCKER_CHECK_CAP = 10_000


class UsageError(Exception):
    pass


def _mono(m):
    return list(m)


def _covector_json(v, ground):
    return [[_mono(ground[i]), str(x)] for i, x in enumerate(v) if x is not None]


def _poly(args):
    try:
        sf = get_semifield(args.semifield)
        return parse(args.f, sf, args.n)
    except (PolynomialError, SemifieldError) as exc:
        raise UsageError(str(exc)) from exc


Table = Optional[Tuple[List[str], List[list]]]
Outcome = Tuple[int, dict, Table]


# -- commands -----------------------------------------------------------------


def cmd_macaulay(args) -> Outcome:
    from .macaulay_ideal import macaulay_degree
    from .valuated_matroid import check_plucker

    f = _poly(args)
    d = args.degree
    if d < f.degree:
        raise UsageError(f"degree {d} is below deg f = {f.degree}")
    M = macaulay_matrix(f, d)
    space = macaulay_degree(f, d)
    minor_ok = has_nonzero_maximal_minor(M)
    result = {"matrix": M.to_json(), "rank": space.rank, "nonzero_maximal_minor": minor_ok}
    table = None
    ok = minor_ok and space.presentation.rank() == space.rank
    if comb(space.size, space.rank) <= PLUCKER_CHECK_CAP:
        pc = check_plucker(space)
        result["plucker_ok"] = pc.ok
        result["matroid"] = space.to_json()
        ok = ok and pc.ok
        ground = space.ground
        rows = [
            [" ".join(format_monomial(ground[i]) for i in _members(B)), str(v)]
            for B, v in sorted(space.coordinates().items(), key=lambda t: _members(t[0]))
        ]
        table = (["basis", "coordinate"], rows)
    else:
        result["plucker_ok"] = None
    return (EXIT_OK if ok else EXIT_REFUTED), result, table


def _members(mask):
    from .stiefel import members

    return members(mask)


def cmd_check_ideal(args) -> Outcome:
    from .macaulay_ideal import hilbert_function, macaulay_ideal, verify_tropical_ideal
    from .valuated_matroid import check_plucker

    f = _poly(args)
    d_max = args.d_max if args.d_max is not None else f.degree + 3
    J = macaulay_ideal(f)
    chk = verify_tropical_ideal(J, d_max)
    plucker = {}
    for d in range(f.degree, d_max + 1):
        space = J.degree(d)
        if comb(space.size, space.rank) <= PLUCKER_CHECK_CAP:
            plucker[str(d)] = check_plucker(space).ok
    hilbert = [[d, J.degree(d).rank, hilbert_function(J, d)] for d in range(0, d_max + 1)]
    result = {
        "d_max": d_max,
        "ideal_ok": chk.ok,
        "cocircuits_checked": chk.cocircuits_checked,
        "plucker_ok": plucker,
        "hilbert": hilbert,
        "justification": "numerically principal (hypersurface Hilbert function) implies tropically principal",
    }
    if chk.failure is not None:
        d, i, beta = chk.failure
        result["failure"] = {"degree": d, "variable": i, "cocircuit": _covector_json(beta, enumerate_monomials(f.n, d))}
    ok = chk.ok and all(plucker.values())
    return (EXIT_OK if ok else EXIT_REFUTED), result, (["d", "rank", "hilbert"], hilbert)


def cmd_hilbert(args) -> Outcome:
    from .macaulay_ideal import hilbert_function, macaulay_ideal

    f = _poly(args)
    lo = args.d_min if args.d_min is not None else 0
    hi = args.d_max if args.d_max is not None else f.degree + 3
    J = macaulay_ideal(f)
    rows = []
    ok = True
    for d in range(lo, hi + 1):
        hf = hilbert_function(J, d)
        expected = simplex_size(f.n, d) - simplex_size(f.n, d - f.degree)
        ok = ok and hf == expected
        rows.append([d, J.degree(d).rank, hf, expected])
    result = {"table": rows, "matches_hypersurface": ok}
    return (EXIT_OK if ok else EXIT_REFUTED), result, (["d", "rank", "hilbert", "hypersurface"], rows)


def cmd_compare_mr(args) -> Outcome:
    from .mr_recipe import compare_mr

    rows = []
    ok = True
    for d in args.degree:
        if not 1 <= d <= 6:
            raise UsageError("compare-mr supports degrees 1..6")
        c = compare_mr(d)
        ok = ok and c.equal
        rows.append([d, c.equal, c.density_count, c.transversal_count, c.subsets_scanned])
        if not c.equal:
            break
    result = {"comparisons": [dict(zip(["degree", "equal", "density_cobases", "transversal_cobases", "subsets"], r)) for r in rows]}
    return (EXIT_OK if ok else EXIT_REFUTED), result, (["d", "equal", "density", "transversal", "subsets"], rows)


def cmd_nonrealizable(args) -> Outcome:
    from .realizability import NonrealizeHypothesisError, nonrealizability_witness

    f = _poly(args)
    try:
        rep = nonrealizability_witness(f, trials=args.trials, seed=args.seed)
    except NonrealizeHypothesisError as exc:
        raise UsageError(f"hypotheses unmet: {exc}") from exc
    b = rep.blocks
    result = {
        "hypotheses": {
            "variables": list(b.hypotheses.variables),
            "residual_terms": [_mono(m) for m in b.hypotheses.residual],
        },
        "U1": [_mono(m) for m in b.U1],
        "U2_size": len(b.U2),
        "V1": [_mono(m) for m in b.V1],
        "V2_size": len(b.V2),
        "zero_block_ok": b.zero_block_ok,
        "P_pattern": b.P_pattern,
        "coordinate_set": [_mono(m) for m in rep.coordinate_set],
        "trial_det_P": [str(x) for x in rep.trial_det_P],
        "trial_full_minor": [str(x) for x in rep.trial_full_minor],
        "tropical_det_P": str(rep.tropical_det_P),
        "tropical_coordinate": str(rep.tropical_coordinate),
        "verified": rep.verified,
    }
    if args.symbolic:
        result["symbolic_terms"] = [[list(p), s, list(e)] for p, s, e in rep.symbolic_terms]
        result["symbolic_det"] = [[list(e), c] for e, c in sorted(rep.symbolic_poly.items())]
    return (EXIT_OK if rep.verified else EXIT_REFUTED), result, None


def cmd_envelope(args) -> Outcome:
    from .envelope import graded_envelope
    from .macaulay_ideal import macaulay_degree
    from .valuated_matroid import equal, underlying

    f = _poly(args)
    d_max = args.d_max if args.d_max is not None else f.degree + 2
    J = graded_envelope(f, d_max, max_rounds=args.max_rounds)
    rows = []
    for d in range(f.degree, d_max + 1):
        env = J.degree(d)
        mac = macaulay_degree(f, d)
        if mac.semifield.trivial_group:
            mac = underlying(mac)
        same = equal(env, mac)
        m = J.modules[d]
        rows.append([d, env.rank, mac.rank, same, m.rounds, m.converged is not None, sum(len(t) for t in m.trace)])
    result = {
        "degrees": [dict(zip(["degree", "envelope_rank", "macaulay_rank", "equal_to_macaulay", "rounds", "converged", "added"], r)) for r in rows],
        "binomial": len(f.terms) == 2,
    }
    if args.trace:
        result["trace"] = {
            str(d): [
                [[_covector_json(w, enumerate_monomials(f.n, d)), _covector_json(v, enumerate_monomials(f.n, d)),
                  _covector_json(vp, enumerate_monomials(f.n, d)), _mono(enumerate_monomials(f.n, d)[j])]
                 for w, (v, vp, j) in rnd]
                for rnd in J.modules[d].trace
            ]
            for d in J.modules
        }
    if J.inconclusive:
        return EXIT_INCONCLUSIVE, result, None
    if len(f.terms) == 2 and not all(r[3] for r in rows):
        return EXIT_REFUTED, result, None
    return EXIT_OK, result, (["d", "env_rank", "mac_rank", "equal", "rounds", "converged", "added"], rows)


def cmd_binomial_perp(args) -> Outcome:
    from .macaulay_ideal import binomial_double_perp, binomial_partition, macaulay_degree
    from .valuated_matroid import equal

    f = _poly(args)
    if len(f.terms) != 2:
        raise UsageError("binomial-perp needs a binomial")
    d = args.degree
    if d < f.degree:
        raise UsageError(f"degree {d} is below deg f = {f.degree}")
    parts, phi = binomial_partition(f, d)
    ground = enumerate_monomials(f.n, d)
    perp = binomial_double_perp(f, d)
    same = equal(perp, macaulay_degree(f, d))
    result = {
        "parts": [[_mono(ground[i]) for i in p] for p in parts],
        "potentials": [str(x) for x in phi],
        "rank": perp.rank,
        "equal_to_macaulay": same,
    }
    return (EXIT_OK if same else EXIT_REFUTED), result, None


def cmd_transversal_test(args) -> Outcome:
    from .macaulay_ideal import macaulay_degree
    from .realizability import bonin_transversality, field_matroid
    from .valuated_matroid import underlying

    try:
        F = parse_field(args.f, args.n)
    except PolynomialError as exc:
        raise UsageError(str(exc)) from exc
    d = args.degree
    if d < F.degree:
        raise UsageError(f"degree {d} is below deg F = {F.degree}")
    ground = enumerate_monomials(F.n, d)
    if len(ground) > 14:
        raise UsageError("ground set above the flat-enumeration cap of 14")
    fm = field_matroid(F, d)
    field_side = bonin_transversality(fm.rank_of, len(ground))
    trop = parse(" + ".join(format_monomial(m) for m in F.support), get_semifield("B"), F.n)
    tm = underlying(macaulay_degree(trop, d))
    trop_side = bonin_transversality(tm.rank_of, len(ground))

    def flat_json(res, F_):
        if F_ is None:
            return None
        return {"flat": [_mono(ground[i]) for i in _members(F_)], "beta": res.beta[F_], "rank": res.rank[F_]}

    result = {
        "field": {"transversal": field_side.transversal, "flats": len(field_side.flats),
                  "cyclic_flats": len(field_side.cyclic_flats), "negative": flat_json(field_side, field_side.negative_flat),
                  "all_negative": [flat_json(field_side, F_) for F_ in field_side.flats if field_side.beta[F_] < 0]},
        "tropical": {"transversal": trop_side.transversal, "flats": len(trop_side.flats),
                     "cyclic_flats": len(trop_side.cyclic_flats), "negative": flat_json(trop_side, trop_side.negative_flat)},
    }
    ok = trop_side.transversal and not field_side.transversal
    return (EXIT_OK if ok else EXIT_REFUTED), result, None


def cmd_recipe_witness(args) -> Outcome:
    from .mr_recipe import recipe_failure_witness

    w = recipe_failure_witness()
    result = {
        "f": render(w.f),
        "degree": w.degree,
        "common_monomial": _mono(w.common_monomial),
        "support": [_mono(m) for m in w.support],
        "complement": [_mono(m) for m in w.complement],
        "formula_matches": w.formula_matches,
        "density_ok": w.density.ok,
        "density_audit": [{"k": k, "max_count": c, "bound": b} for k, c, b in w.density.audit],
        "complement_is_basis": w.is_basis,
        "hall_witness": {"A": [_mono(m) for m in w.hall_rows], "B": [_mono(m) for m in w.hall_cols]},
        "verified": w.verified,
    }
    return (EXIT_OK if w.verified else EXIT_REFUTED), result, None


def cmd_variety_check(args) -> Outcome:
    from .macaulay_ideal import macaulay_ideal, sample_hypersurface_points, variety_containment_sample

    if args.semifield != "T":
        raise UsageError("the variety check is offered over T only")
    f = _poly(args)
    J = macaulay_ideal(f)
    pts = sample_hypersurface_points(f, args.samples, args.seed)
    degrees = args.degree or [f.degree + 1, f.degree + 2]
    rows = []
    ok = True
    for d in degrees:
        if d < f.degree:
            raise UsageError(f"degree {d} is below deg f = {f.degree}")
        rep = variety_containment_sample(f, J, d, args.samples, args.seed, points=pts)
        ok = ok and rep.ok
        rows.append([d, len(pts), rep.cocircuit_count, len(rep.violations)])
    result = {
        "points": [[str(x) for x in y] for y in pts],
        "degrees": [dict(zip(["degree", "points", "cocircuits", "violations"], r)) for r in rows],
    }
    return (EXIT_OK if ok else EXIT_REFUTED), result, (["d", "points", "cocircuits", "violations"], rows)


def cmd_weak_image(args) -> Outcome:
    import random

    from .macaulay_ideal import macaulay_degree
    from .polynomial import random_lift
    from .realizability import field_matroid
    from .stiefel import to_mask, weak_image

    f = _poly(args)
    d = args.degree
    if d < f.degree:
        raise UsageError(f"degree {d} is below deg f = {f.degree}")
    space = macaulay_degree(f, d)
    pres = space.presentation
    rng = random.Random(args.seed)
    rows = []
    ok, exhaustive = True, True
    for t in range(args.lifts):
        F = random_lift(f, rng)
        fm = field_matroid(F, d)
        res = weak_image(
            lambda J: pres.is_basis(to_mask(J)),
            lambda J: fm.is_basis(to_mask(J)),
            space.size, space.rank,
            general_rank=space.rank, image_rank=fm.rank,
            cap=args.cap, seed=args.seed + t,
        )
        exhaustive = exhaustive and res.exhaustive
        ok = ok and res.holds
        rows.append([t, res.holds, res.checked, res.exhaustive,
                     None if res.counterexample is None else [_mono(space.ground[i]) for i in res.counterexample]])
    result = {"lifts": [dict(zip(["trial", "holds", "checked", "exhaustive", "counterexample"], r)) for r in rows]}
    if not ok:
        return EXIT_REFUTED, result, None
    return (EXIT_OK if exhaustive else EXIT_INCONCLUSIVE), result, None


COMMANDS: Dict[str, Callable] = {
    "macaulay": cmd_macaulay,
    "check-ideal": cmd_check_ideal,
    "hilbert": cmd_hilbert,
    "compare-mr": cmd_compare_mr,
    "nonrealizable": cmd_nonrealizable,
    "envelope": cmd_envelope,
    "binomial-perp": cmd_binomial_perp,
    "transversal-test": cmd_transversal_test,
    "recipe-witness": cmd_recipe_witness,
    "variety-check": cmd_variety_check,
    "weak-image": cmd_weak_image,
}


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="report path (default: stdout)")
    common.add_argument("--tsv", action="store_true", help="tabular output where a table exists")
    common.add_argument("--no-timing", action="store_true", help="omit wall time for byte-identical reports")
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is serial")
    common.add_argument("--cache-dir", default=os.environ.get("MACTROP_CACHE_DIR"))

    def poly_parent(default_sf="B"):
        poly = argparse.ArgumentParser(add_help=False)
        poly.add_argument("--f", required=True, help='polynomial text, e.g. "x0 + x1 + x2"')
        poly.add_argument("--n", type=int, default=None, help="number of variables minus one")
        poly.add_argument("--semifield", choices=["B", "T"], default=default_sf)
        return poly

    p = argparse.ArgumentParser(prog="mactrop", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"mactrop {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("macaulay", parents=[common, poly_parent()], help="Macaulay matrix and Stiefel space in one degree")
    s.add_argument("--degree", type=int, required=True)

    s = sub.add_parser("check-ideal", parents=[common, poly_parent()], help="verify the tropical-ideal property")
    s.add_argument("--d-max", type=int)

    s = sub.add_parser("hilbert", parents=[common, poly_parent()], help="Hilbert function table")
    s.add_argument("--d-min", type=int)
    s.add_argument("--d-max", type=int)

    s = sub.add_parser("compare-mr", parents=[common], help="density matroids against [x0+x1+x2]_d")
    s.add_argument("--degree", type=int, nargs="+", required=True)

    s = sub.add_parser("nonrealizable", parents=[common, poly_parent()], help="degree-3d non-realizability witness")
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--symbolic", action="store_true", help="include the full 6x6 permutation expansion")

    s = sub.add_parser("envelope", parents=[common, poly_parent()], help="graded minimal-elimination envelope")
    s.add_argument("--d-max", type=int)
    s.add_argument("--max-rounds", type=int, default=64)
    s.add_argument("--trace", action="store_true")

    s = sub.add_parser("binomial-perp", parents=[common, poly_parent()], help="double dual of a binomial in one degree")
    s.add_argument("--degree", type=int, required=True)

    s = sub.add_parser("transversal-test", parents=[common], help="Bonin test on field and tropical sides")
    s.add_argument("--f", default="x0 + x1 + x2", help="rational polynomial text")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--degree", type=int, default=3)

    sub.add_parser("recipe-witness", parents=[common], help="degree-6 density Recipe failure")

    s = sub.add_parser("variety-check", parents=[common, poly_parent("T")], help="sampled containment in the hypersurface")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--degree", type=int, nargs="+")

    s = sub.add_parser("weak-image", parents=[common, poly_parent()], help="random lifts are weak images of [f]_d")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--lifts", type=int, default=20)
    s.add_argument("--cap", type=int, default=2_000_000)
    return p


_NOT_CONFIG = {"out", "tsv", "no_timing", "threads", "cache_dir"}


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_CONFIG}
    if getattr(args, "f", None) is not None and args.command != "transversal-test":
        try:
            cfg["f"] = render(_poly(args))
        except UsageError:
            pass
    return cfg


def _cache_path(cache_dir: str, cfg: dict) -> str:
    key = hashlib.sha256(json.dumps([__version__, cfg], sort_keys=True).encode()).hexdigest()[:32]
    return os.path.join(cache_dir, f"{cfg['command']}-{key}.json")


def _tsv(table: Table, result: dict) -> str:
    if table is not None:
        header, rows = table
        lines = ["\t".join(header)] + ["\t".join("" if x is None else str(x) for x in r) for r in rows]
    else:
        lines = [f"{k}\t{json.dumps(v, sort_keys=True)}" for k, v in sorted(result.items())]
    return "\n".join(lines) + "\n"


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    cfg = _config(args)
    cached = None
    if args.cache_dir:
        path = _cache_path(args.cache_dir, cfg)
        if os.path.exists(path):
            with open(path) as fh:
                cached = json.load(fh)
    if cached is not None:
        code, result, table = cached["code"], cached["result"], cached.get("table")
    else:
        try:
            code, result, table = COMMANDS[args.command](args)
        except UsageError as exc:
            print(f"mactrop {args.command}: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        except OverflowError as exc:
            code, result, table = EXIT_INCONCLUSIVE, {"reason": str(exc)}, None
        # round-trip through JSON so cached and fresh runs render identically
        result = json.loads(json.dumps(result))
        table = json.loads(json.dumps(table)) if table is not None else None
        if args.cache_dir:
            os.makedirs(args.cache_dir, exist_ok=True)
            with open(_cache_path(args.cache_dir, cfg), "w") as fh:
                json.dump({"code": code, "result": result, "table": table}, fh, sort_keys=True)
    if args.tsv:
        text = _tsv(table, result)
    else:
        report = {
            "schema": SCHEMA,
            "version": __version__,
            "command": args.command,
            "config": cfg,
            "seed": args.seed,
            "status": STATUS[code],
            "exit_code": code,
            "result": result,
        }
        if not args.no_timing:
            report["wall_time_s"] = round(time.perf_counter() - t0, 6)
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
