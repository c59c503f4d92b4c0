"""Command line front end.

Exit codes: 0 the property holds, 1 a hole or counterexample was found,
2 inconclusive or stopped by the enumeration budget, 3 usage or input errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import lattice, normality, sweep, veryample
from .basis import c_basis, lattice_index, z_basis
from .core import ParameterList, build_polytope
from .errors import CyclicLatticeError, HypothesisViolated, InstanceTooLarge, WitnessRefuted
from .facets import enumerate_facets
from .report import dumps, envelope

OK, HOLE, INCONCLUSIVE, USAGE = 0, 1, 2, 3
LIST_LIMIT = 10_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x)


def load_spec(path: str):
    """{"d": d, "tau": [...]} for cyclic polytopes, {"vertices": [[...], ...]} for simplices."""
    try:
        with (sys.stdin if path == "-" else open(path)) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read spec {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("spec must be a JSON object")
    if "vertices" in data:
        return lattice.LatticeSimplex([tuple(int(c) for c in v) for v in data["vertices"]])
    if "d" not in data or "tau" not in data:
        raise UsageError('spec needs "d" and "tau" (or "vertices")')
    return build_polytope(ParameterList(int(data["d"]), tuple(int(t) for t in data["tau"])))


def _instance(P):
    if isinstance(P, lattice.LatticeSimplex):
        return {"vertices": [list(v[1:]) for v in P.vertices]}
    return {"d": P.d, "tau": list(P.taus)}


def _need_cyclic(P, what):
    if isinstance(P, lattice.LatticeSimplex):
        raise UsageError(f"{what} needs a cyclic polytope spec")


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, result object, csv rows, text lines)


def cmd_facets(P, args):
    _need_cyclic(P, "facets")
    F = enumerate_facets(P)
    rows = [["facet"]] + [[" ".join(map(str, S))] for S in F]
    return OK, {"facets": F, "count": len(F)}, rows, [f"{len(F)} facets"] + [" ".join(map(str, S)) for S in F]


def cmd_points(P, args):
    pts = lattice.enumerate_points(P, args.dilate, args.budget)
    res = {"m": args.dilate, "count": pts.count}
    if args.list_points or pts.count <= LIST_LIMIT:
        res["points"] = pts.points
    rows = [["m", "count"], [args.dilate, pts.count]]
    return OK, res, rows, [f"{pts.count} lattice points in {args.dilate}P*"]


def cmd_basis(P, args):
    _need_cyclic(P, "basis")
    order = _ints(args.order) if args.order else tuple(range(1, P.d + 2))
    zb, cb = z_basis(P, order), c_basis(P, order)
    A = lattice.enumerate_points(P, 1, args.budget).points
    idx = lattice_index(A)
    res = {
        "order": order,
        "b_vectors": [{"index_set": order[: k + 1], "value": v} for k, v in enumerate(zb.vectors)],
        "z_basis_determinant": zb.determinant,
        "c_basis": cb.vectors,
        "c_basis_determinant": cb.determinant,
        "lattice_index": idx,
    }
    rows = [["z_det", "c_det", "lattice_index"], [zb.determinant, cb.determinant, idx]]
    return OK, res, rows, [f"z-basis det {zb.determinant}, c-basis det {cb.determinant}, index {idx}"]


def _verdict_code(res) -> int:
    return OK if isinstance(res, (normality.Normal, normality.Verified)) else HOLE


def cmd_idp(P, args):
    res = normality.idp_check(P, args.m_max, args.budget)
    code = _verdict_code(res)
    return code, res, [["verdict"], [res.verdict]], [_describe(res)]


def cmd_normal(P, args):
    if args.covering:
        _need_cyclic(P, "--covering")
        res = normality.normality_via_covering(P, args.m_max, args.budget)
        code = OK if isinstance(res, normality.Verified) else INCONCLUSIVE
        return code, res, [["verdict"], [res.verdict]], [res.verdict]
    res = normality.idp_check(P, args.m_max, args.budget)
    # normality is relative to the lattice the points generate
    effective = res.relative if isinstance(res, normality.HoleReport) and res.relative is not None else res
    code = _verdict_code(effective)
    return code, res, [["verdict"], [effective.verdict]], [_describe(effective)]


def _describe(res) -> str:
    if isinstance(res, normality.Normal):
        return f"Normal up to degree {res.m_max} (lattice index {res.lattice_index})"
    return f"hole at degree {res.m}: {res.alpha}"


def cmd_decompose(P, args):
    _need_cyclic(P, "decompose")
    if args.point:
        points = [_ints(args.point)]
    else:
        points = [lattice.sample_lattice_point(P, args.sample, args.seed + k) for k in range(args.count)]
    certs = [normality.full_decompose(P, x, force=args.force) for x in points]
    rows = [["alpha", "parts"]] + [[" ".join(map(str, c.alpha)), len(c.parts)] for c in certs]
    text = [f"{c.alpha} = " + " + ".join(map(str, c.parts)) for c in certs]
    return OK, certs[0] if len(certs) == 1 else certs, rows, text


def _witness_rows(wf):
    return [["verdict", "base_vertex", "verified_k"], ["NotVeryAmple", wf.base_vertex, " ".join(map(str, wf.verified_k))]]


def cmd_very_ample(P, args):
    _need_cyclic(P, "very-ample-check")
    wf = veryample.very_ample_obstruction(P, args.k_max)
    if wf is None:
        return INCONCLUSIVE, {"verdict": "NoObstruction"}, [["verdict"], ["NoObstruction"]], ["no unit-gap obstruction applies"]
    text = [f"not very ample: p = {wf.p}, base v_{wf.base_vertex}, holes at k = {wf.verified_k}"]
    return HOLE, wf, _witness_rows(wf), text


def cmd_witness(P, args):
    _need_cyclic(P, "witness")
    if P.d != 4:
        raise HypothesisViolated("the direct witness is defined for d = 4")
    wf = veryample.direct_witness(P, args.k_max)
    if wf is None:
        raise HypothesisViolated("needs Delta_23 = 1 or Delta_{n-2,n-1} = 1")
    return HOLE, wf, _witness_rows(wf), [f"p = {wf.p}", "coefficients: " + ", ".join(f"v_{i}: {c}" for i, c in wf.coefficients)]


def cmd_sweep(args):
    spec = sweep.SweepSpec(
        d=args.d, tau_max=args.tau_max, n_min=args.n, n_max=args.n_max or args.n, kind=args.kind,
        budget=args.budget, seed=args.seed, m_max=args.m_max, k_max=args.k_max, threads=args.threads,
    )
    rep = sweep.run_sweep(spec)
    code = HOLE if rep.counterexamples else OK
    guarded = rep.totals.get("Guarded", 0) + rep.totals.get("Error", 0)
    if code == OK and guarded:
        code = INCONCLUSIVE
    rows = [["tau", "verdict", "counterexample"]] + [
        [" ".join(map(str, e["tau"])), e["verdict"], bool(e.get("counterexample"))] for e in rep.instances
    ]
    text = [f"{k}: {v}" for k, v in rep.totals.items()]
    return code, sweep.report_json(rep), rows, text, rep.seconds


COMMANDS = {
    "facets": cmd_facets,
    "points": cmd_points,
    "basis": cmd_basis,
    "normal-check": cmd_normal,
    "idp-check": cmd_idp,
    "decompose": cmd_decompose,
    "very-ample-check": cmd_very_ample,
    "witness": cmd_witness,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="polytope JSON file ('-' for stdin)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--budget", type=int, default=None, help="enumeration budget (default: $CLL_BUDGET or 10^7)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--m-max", type=int, default=None)
    common.add_argument("--k-max", type=int, default=3)
    common.add_argument("--force", action="store_true", help="run the splitting algorithm outside its gap hypothesis")

    p = _Parser(prog="cll", description="Lattice points, normality and very ampleness of integral cyclic polytopes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("facets", parents=[common], help="facets by the evenness condition")
    sp = sub.add_parser("points", parents=[common], help="lattice points of a dilate")
    sp.add_argument("--dilate", type=int, default=1)
    sp.add_argument("--list-points", action="store_true", help="list points even above the size threshold")
    sp = sub.add_parser("basis", parents=[common], help="b-vectors, bases and lattice index")
    sp.add_argument("--order", help="comma-separated vertex order (d+1 indices)")
    sp = sub.add_parser("normal-check", parents=[common], help="normality (relative to the generated lattice)")
    sp.add_argument("--covering", action="store_true", help="check all (d+1)-vertex sub-simplices instead")
    sub.add_parser("idp-check", parents=[common], help="integer decomposition property up to --m-max")
    sp = sub.add_parser("decompose", parents=[common], help="constructive decomposition certificates")
    sp.add_argument("--point", help="comma-separated lattice point")
    sp.add_argument("--sample", type=int, default=2, help="degree of sampled points when --point is absent")
    sp.add_argument("--count", type=int, default=1)
    sub.add_parser("very-ample-check", parents=[common], help="unit-gap non-very-ampleness witness")
    sub.add_parser("witness", parents=[common], help="the explicit dimension-4 witness")
    sp = sub.add_parser("sweep", parents=[common], help="exhaustive conjecture sweep")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--n-max", type=int, default=None)
    sp.add_argument("--tau-max", type=int, required=True)
    sp.add_argument("--kind", choices=sweep.KINDS, default="Normality")
    return p


def _emit(fmt, command, instance, result, rows, text, seconds, out):
    if fmt == "json":
        out.write(dumps(envelope(command, instance, result, seconds)) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write("\n".join(text) + "\n")


def dispatch(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else OK
    if args.budget is not None:
        if args.budget <= 0:
            print("error: --budget must be positive", file=sys.stderr)
            return USAGE
    start = time.perf_counter()
    try:
        if args.command == "sweep":
            code, result, rows, text, seconds = cmd_sweep(args)
            _emit(args.format, "sweep", None, result, rows, text, seconds, out)
            return code
        if not args.spec:
            raise UsageError("--spec is required")
        P = load_spec(args.spec)
        code, result, rows, text = COMMANDS[args.command](P, args)
    except (InstanceTooLarge, WitnessRefuted) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return INCONCLUSIVE
    except (UsageError, CyclicLatticeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    _emit(args.format, args.command, _instance(P), result, rows, text, time.perf_counter() - start, out)
    return code


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
