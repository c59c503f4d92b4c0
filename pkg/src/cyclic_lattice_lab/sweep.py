"""Exhaustive sweeps over small parameter ranges, checking the open conjectures.

Instances are normalized to tau_1 = 0 and taken up to the mirror map
tau -> (tau_n - tau_{n+1-i}), which preserves lattice properties; each entry
records both representatives.
"""
from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from . import lattice
from .core import build_polytope
from .errors import CyclicLatticeError, InstanceTooLarge, WitnessRefuted
from .normality import GradedSplitter, HoleReport, Normal, idp_check
from .report import to_jsonable
from .veryample import CertifiedUpTo, WitnessFamily, revalidate, very_ample_obstruction, vertex_local_certify

KINDS = ("Normality", "VeryAmple", "Monotonicity", "VeryAmpleImpliesNormal")


@dataclass(frozen=True)
class SweepSpec:
    d: int
    tau_max: int
    n_min: int | None = None
    n_max: int | None = None
    kind: str = "Normality"
    budget: int | None = None
    seed: int = 0
    m_max: int | None = None
    k_max: int = 3
    threads: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}; choose from {KINDS}")
        if self.d < 1 or self.tau_max < 0:
            raise ValueError("d must be positive and tau_max nonnegative")
        if self.budget is not None and self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")

    @property
    def n_range(self) -> range:
        lo = self.n_min if self.n_min is not None else self.d + 1
        hi = self.n_max if self.n_max is not None else lo
        return range(max(lo, self.d + 1), hi + 1)


@dataclass
class SweepReport:
    spec: SweepSpec
    instances: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)
    totals: dict = field(default_factory=dict)
    seconds: float = 0.0


def mirror(taus) -> tuple[int, ...]:
    return tuple(taus[-1] - t for t in reversed(taus))


def parameter_tuples(d: int, n: int, tau_max: int, quotient: bool = True):
    """All 0 = tau_1 < ... < tau_n <= tau_max, optionally one per mirror pair."""
    for rest in combinations(range(1, tau_max + 1), n - 1):
        taus = (0,) + rest
        if quotient and mirror(taus) < taus:
            continue
        yield taus


def expected_normality(d: int, taus) -> str | None:
    """What proven results or the conjectures predict for C_d(taus)."""
    n = len(taus)
    gaps = [b - a for a, b in zip(taus, taus[1:])]
    interior_unit = any(gaps[i - 1] == 1 for i in range(2, n - 1))
    if d <= 3:
        return "Normal"
    if d == 4:
        ends = n >= 5 and (gaps[1] == 1 or gaps[n - 3] == 1)
        return "NotNormal" if ends else "Normal"
    if interior_unit:
        return "NotNormal"
    if all(g >= d * d - 1 for g in gaps):
        return "Normal"
    return None


# ---------------------------------------------------------------------------
# per-instance work


def _idp(d, taus, spec: SweepSpec):
    P = build_polytope(d, taus)
    try:
        return idp_check(P, spec.m_max, spec.budget)
    except InstanceTooLarge as exc:
        return exc


def _verdict_name(res) -> str:
    if isinstance(res, Normal):
        return "Normal"
    if isinstance(res, HoleReport):
        return "NotNormal"
    if isinstance(res, InstanceTooLarge):
        return "Guarded"
    return "Error"


def _normality_item(args):
    d, taus, spec = args
    try:
        res = _idp(d, taus, spec)
    except CyclicLatticeError as exc:  # recorded, never fatal
        return {"tau": taus, "mirror": mirror(taus), "verdict": "Error", "error": str(exc)}
    entry = {"tau": taus, "mirror": mirror(taus), "verdict": _verdict_name(res)}
    if isinstance(res, HoleReport):
        entry["hole"] = res
    if isinstance(res, InstanceTooLarge):
        entry["error"] = str(res)
    exp = expected_normality(d, taus)
    entry["expected"] = exp
    entry["counterexample"] = exp is not None and entry["verdict"] in ("Normal", "NotNormal") and entry["verdict"] != exp
    return entry


def _very_ample_item(args):
    d, taus, spec = args
    P = build_polytope(d, taus)
    entry = {"tau": taus, "mirror": mirror(taus)}
    try:
        wf = very_ample_obstruction(P, spec.k_max)
    except (CyclicLatticeError, WitnessRefuted) as exc:
        entry.update(verdict="Error", error=str(exc), counterexample=False)
        return entry
    entry["witness"] = wf
    entry["verdict"] = "NotVeryAmple" if wf is not None else "NoObstruction"
    normal = _idp(d, taus, spec)
    entry["normality"] = _verdict_name(normal)
    # a witness on a normal polytope would contradict normal => very ample
    entry["counterexample"] = wf is not None and isinstance(normal, Normal)
    return entry


def _local_item(args):
    d, taus, spec = args
    P = build_polytope(d, taus)
    entry = {"tau": taus, "mirror": mirror(taus)}
    normal = _idp(d, taus, spec)
    entry["normality"] = _verdict_name(normal)
    bound = spec.m_max if spec.m_max is not None else max(2, d - 1)
    local = []
    if isinstance(normal, HoleReport):
        try:
            for i in range(1, P.n + 1):
                local.append(vertex_local_certify(P, i, bound, budget=spec.budget))
        except InstanceTooLarge as exc:
            entry.update(verdict="Guarded", error=str(exc), counterexample=False)
            return entry
        entry["hole"] = normal
        entry["local"] = local
        certified = all(isinstance(r, CertifiedUpTo) for r in local)
        entry["verdict"] = "LocallyCertified" if certified else "LocalHole"
        # bounded evidence of very ampleness together with a hole
        entry["counterexample"] = certified
    else:
        # no holes below the bound means every vertex certifies trivially
        entry["verdict"] = "LocallyCertified" if isinstance(normal, Normal) else "Guarded"
        entry["counterexample"] = False
    return entry


_WORKERS = {"Normality": _normality_item, "VeryAmple": _very_ample_item, "VeryAmpleImpliesNormal": _local_item}


def _run_items(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=1))


def _monotone_pairs(d, tuples_by_n):
    for n, ts in tuples_by_n.items():
        for a in ts:
            ga = [y - x for x, y in zip(a, a[1:])]
            for b in ts:
                if a == b:
                    continue
                gb = [y - x for x, y in zip(b, b[1:])]
                # consecutive gaps dominate iff all pairwise differences dominate
                if all(y >= x for x, y in zip(ga, gb)):
                    yield a, b


def run_sweep(spec: SweepSpec) -> SweepReport:
    start = time.perf_counter()
    report = SweepReport(spec)
    quotient = True
    tuples = [t for n in spec.n_range for t in parameter_tuples(spec.d, n, spec.tau_max, quotient)]
    items = [(spec.d, t, spec) for t in tuples]
    if spec.kind == "Monotonicity":
        results = _run_items(_normality_item, items, spec.threads)
        verdict = {}
        for e in results:
            verdict[e["tau"]] = verdict[e["mirror"]] = e
        by_n: dict = {}
        for n in spec.n_range:
            by_n[n] = list(parameter_tuples(spec.d, n, spec.tau_max, quotient=False))
        for a, b in _monotone_pairs(spec.d, by_n):
            va, vb = verdict[a], verdict[b]
            entry = {"tau": a, "wider": b, "verdict": f"{va['verdict']}->{vb['verdict']}"}
            entry["counterexample"] = va["verdict"] == "Normal" and vb["verdict"] == "NotNormal"
            if entry["counterexample"]:
                entry["hole"] = vb.get("hole")
            report.instances.append(entry)
    else:
        report.instances = _run_items(_WORKERS[spec.kind], items, spec.threads)
    report.counterexamples = [e for e in report.instances if e.get("counterexample")]
    report.totals = dict(sorted(Counter(e["verdict"] for e in report.instances).items()))
    report.totals["instances"] = len(report.instances)
    report.totals["counterexamples"] = len(report.counterexamples)
    report.seconds = time.perf_counter() - start
    return report


def revalidate_entry(d: int, entry) -> bool:
    """Independent recheck of the certificate embedded in a sweep entry."""
    taus = entry.get("wider", entry["tau"])
    P = build_polytope(d, taus)
    hole = entry.get("hole")
    wf = entry.get("witness")
    if isinstance(hole, HoleReport):
        if not lattice.in_dilate(P, hole.alpha, hole.m):
            return False
        return not GradedSplitter(P).decomposes(hole.alpha, hole.m)
    if isinstance(wf, WitnessFamily):
        return revalidate(P, wf)
    return False


def report_json(report: SweepReport) -> dict:
    s = report.spec
    return {
        "spec": {
            "d": s.d, "tau_max": s.tau_max, "n": [r for r in s.n_range], "kind": s.kind,
            "budget": s.budget, "seed": s.seed, "m_max": s.m_max, "k_max": s.k_max,
        },
        "instances": to_jsonable(report.instances),
        "counterexamples": to_jsonable(report.counterexamples),
        "totals": report.totals,
    }
