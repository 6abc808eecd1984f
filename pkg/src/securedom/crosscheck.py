"""Cross-check experiment runner.

Each suite walks a deterministic corpus, compares the constructive content
against the brute-force oracles and emits one row per check.  Rows carry the
instance spec so every verdict can be recomputed.
"""
from __future__ import annotations

import csv
import itertools
import io
import json
import random
import time
from dataclasses import dataclass, field
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterator

from .domination import (
    gamma,
    epn,
    gamma_s,
    greedy_secure_dominating,
    min_dominating_brute,
    is_secure,
    min_secure_dominating_brute,
)
from .errors import ClaimViolation, GraphInputError
from .generators import (
    InstanceSpec,
    all_bipartite_structures,
    all_split_structures,
    generate,
)
from .graph import Graph, complete_bipartite, is_complete_on
from .recognition import (
    check_pi_convexity,
    find_star_witness,
    is_chordal_bipartite,
    verify_bisplit_partition,
    verify_split_partition,
)
from .reductions import (
    approx_msd_split,
    bisplit_dd_to_sdd,
    cbip_sdd_to_cbip_bisplit_sdd,
    expected_counts,
    lift_solution,
    split_dd_to_sdd,
    split_sdd_to_bisplit_sdd,
)
from .solvers import gamma_s_complete_bipartite, solve_chain, solve_chordal_bisplit

CSV_COLUMNS = [
    "instance_id",
    "suite",
    "class",
    "seed",
    "params",
    "n",
    "m",
    "check",
    "expected",
    "observed",
    "verdict",
    "raw_size",
    "oracle_size",
    "detail",
    "wall_ms",
]



@dataclass
class Instance:
    instance_id: str
    spec: InstanceSpec | None
    graph: Graph
    partition: object


@dataclass
class Budget:
    max_instances: int | None = None
    time_limit: float | None = None


@dataclass
class CrossCheckReport:
    suite: str
    rows: list[dict] = field(default_factory=list)
    incomplete: bool = False

    @property
    def summary(self) -> dict:
        verdicts: dict[str, int] = {}
        for r in self.rows:
            verdicts[r["verdict"]] = verdicts.get(r["verdict"], 0) + 1
        gaps = [r["raw_size"] - r["oracle_size"] for r in self.rows if r.get("raw_size") is not None and r.get("oracle_size") is not None]
        return {
            "rows": len(self.rows),
            "instances": len({r["instance_id"] for r in self.rows}),
            "verdicts": verdicts,
            "misses": verdicts.get("miss", 0),
            "claim_violations": verdicts.get("claim-violation", 0),
            "verification_failures": verdicts.get("verify-fail", 0),
            "raw_gap_histogram": {str(g): gaps.count(g) for g in sorted(set(gaps))},
            "incomplete": self.incomplete,
        }

    def to_json(self) -> dict:
        return {"schema": 1, "suite": self.suite, "summary": self.summary, "rows": self.rows}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow({**r, "params": json.dumps(r.get("params", {}), sort_keys=True), "detail": json.dumps(r.get("detail", {}), sort_keys=True)})
        return buf.getvalue()

    def exit_code(self) -> int:
        s = self.summary
        if s["verification_failures"]:
            return 2
        if s["claim_violations"] or s["misses"]:
            return 3
        return 0


# -- corpora ---------------------------------------------------------------------

def _spec_instance(iid: str, spec: InstanceSpec) -> Instance:
    G, P = generate(spec)
    return Instance(iid, spec, G, P)


def split_corpus(seed: int = 0, count: int = 300, max_n: int = 8, exhaustive_n: int = 6) -> Iterator[Instance]:
    for j, (G, P) in enumerate(all_split_structures(exhaustive_n)):
        yield Instance(f"split-exh-{j:04d}", None, G, P)
    rng = random.Random(seed)
    for j in range(count):
        k = rng.randint(1, max_n - 1)
        i = rng.randint(0, max_n - k)
        spec = InstanceSpec("split", {"k": k, "i": i, "p": round(rng.uniform(0.2, 0.9), 3)}, rng.getrandbits(64))
        yield _spec_instance(f"split-{j:04d}", spec)


def seeded_split_corpus(seed: int = 0, count: int = 300, max_n: int = 8) -> Iterator[Instance]:
    """The random part of :func:`split_corpus` alone."""
    return (inst for inst in split_corpus(seed, count, max_n, exhaustive_n=1))


def bisplit_corpus(seed: int = 1, count: int = 200, max_target_n: int = 14) -> Iterator[Instance]:
    rng = random.Random(seed)
    for j in range(count):
        y = rng.randint(1, 3)
        z = rng.randint(1, 3)
        x = rng.randint(0, max_target_n - 4 - y - z)
        spec = InstanceSpec("bisplit", {"x": x, "y": y, "z": z, "p": round(rng.uniform(0.2, 0.8), 3)}, rng.getrandbits(64))
        yield _spec_instance(f"bisplit-{j:04d}", spec)


def cbip_corpus(max_n: int = 6) -> Iterator[Instance]:
    j = 0
    for G, B in all_bipartite_structures(max_n):
        if is_chordal_bipartite(G):
            yield Instance(f"cbip-exh-{j:04d}", None, G, B)
            j += 1


def small_split_corpus(max_n: int = 5) -> Iterator[Instance]:
    for j, (G, P) in enumerate(all_split_structures(max_n)):
        yield Instance(f"split5-exh-{j:04d}", None, G, P)


def chordal_bisplit_corpus(seed: int = 2, count: int = 250, max_n: int = 12) -> Iterator[Instance]:
    rng = random.Random(seed)
    for j in range(count):
        l = rng.randint(1, 6)
        x = rng.randint(0, max_n - 1 - l)
        spec = InstanceSpec("chordal-bisplit", {"l": l, "x": x, "max_z": rng.randint(1, 4)}, rng.getrandbits(64))
        yield _spec_instance(f"cbisplit-{j:04d}", spec)


def chain_corpus(seed: int = 3, count: int = 250, max_n: int = 10) -> Iterator[Instance]:
    rng = random.Random(seed)
    for j in range(count):
        x = rng.randint(1, max_n - 1)
        y = rng.randint(1, max_n - x)
        spec = InstanceSpec("chain", {"x": x, "y": y}, rng.getrandbits(64))
        yield _spec_instance(f"chain-{j:04d}", spec)


def comb_corpus(seed: int = 4, count: int = 100) -> Iterator[Instance]:
    rng = random.Random(seed)
    for j in range(count):
        spine = rng.randint(1, 3)
        spec = InstanceSpec(
            "comb-convex-split",
            {"k": rng.randint(1, 3), "spine": spine, "teeth": rng.randint(0, spine)},
            rng.getrandbits(64),
        )
        yield _spec_instance(f"comb-{j:04d}", spec)


# -- row helpers -----------------------------------------------------------------

def _row(inst: Instance, suite: str, check: str, expected, observed, verdict: str, **extra) -> dict:
    spec = inst.spec
    return {
        "instance_id": inst.instance_id,
        "suite": suite,
        "class": spec.cls if spec else "exhaustive",
        "seed": spec.seed if spec else None,
        "params": dict(spec.params) if spec else {},
        "n": inst.graph.n,
        "m": inst.graph.m,
        "check": check,
        "expected": expected,
        "observed": observed,
        "verdict": verdict,
        "raw_size": extra.pop("raw_size", None),
        "oracle_size": extra.pop("oracle_size", None),
        "detail": extra.pop("detail", {}),
        "wall_ms": extra.pop("wall_ms", None),
    }


def _eq(a, b) -> str:
    return "hit" if a == b else "miss"


def _count_rows(inst: Instance, suite: str, R) -> list[dict]:
    vn, ve = expected_counts(R)
    return [
        _row(inst, suite, f"{R.kind}:|V|", vn, R.target.n, _eq(vn, R.target.n)),
        _row(inst, suite, f"{R.kind}:|E|", ve, R.target.m, _eq(ve, R.target.m)),
    ]


def _reduction_rows(inst: Instance, suite: str, R, source_value: int, a: int, b: int, source_label: str) -> list[dict]:
    t0 = time.perf_counter()
    target_value = gamma_s(R.target)
    ms = round((time.perf_counter() - t0) * 1000, 3)
    want = a * source_value + b
    rows = _count_rows(inst, suite, R)
    rows.append(
        _row(
            inst,
            suite,
            f"{R.kind}:gamma_s(target)={a}*{source_label}+{b}",
            want,
            target_value,
            _eq(want, target_value),
            detail={"source_value": source_value, "target_n": R.target.n},
            wall_ms=ms,
        )
    )
    partition_ok = (
        verify_split_partition(R.target, R.target_partition)
        if R.kind == "split-dd"
        else verify_bisplit_partition(R.target, R.target_partition)
    )
    rows.append(_row(inst, suite, f"{R.kind}:target-partition", True, partition_ok, "hit" if partition_ok else "verify-fail"))
    return rows


# -- per-instance checks ------------------------------------------------------------

def check_kpq(inst: Instance) -> list[dict]:
    p, q = inst.partition
    want = gamma_s_complete_bipartite(p, q)
    got = gamma_s(inst.graph)
    return [_row(inst, "kpq", "gamma_s(K_pq)=closed-form", want, got, _eq(want, got))]


def check_split_dd(inst: Instance) -> list[dict]:
    R = split_dd_to_sdd(inst.graph, inst.partition)
    return _reduction_rows(inst, "split-dd", R, gamma(inst.graph), 1, 1, "gamma")


def check_bisplit_dd(inst: Instance) -> list[dict]:
    R = bisplit_dd_to_sdd(inst.graph, inst.partition)
    return _reduction_rows(inst, "bisplit-dd", R, gamma(inst.graph), 1, 2, "gamma")


def check_cbip_doubling(inst: Instance) -> list[dict]:
    R = cbip_sdd_to_cbip_bisplit_sdd(inst.graph, inst.partition)
    rows = _reduction_rows(inst, "doubling", R, gamma_s(inst.graph), 2, 2, "gamma_s")
    cb = is_chordal_bipartite(R.target)
    rows.append(_row(inst, "doubling", "cbip-sdd:target-chordal-bipartite", True, cb, "hit" if cb else "verify-fail"))
    return rows


def check_split_doubling(inst: Instance) -> list[dict]:
    R = split_sdd_to_bisplit_sdd(inst.graph, inst.partition)
    return _reduction_rows(inst, "doubling", R, gamma_s(inst.graph), 2, 2, "gamma_s")


def _build_for(inst: Instance):
    if inst.instance_id.startswith("cbip"):
        return [cbip_sdd_to_cbip_bisplit_sdd(inst.graph, inst.partition)]
    if inst.instance_id.startswith("bisplit"):
        return [bisplit_dd_to_sdd(inst.graph, inst.partition)]
    if inst.instance_id.startswith("split5"):
        return [split_sdd_to_bisplit_sdd(inst.graph, inst.partition)]
    return [split_dd_to_sdd(inst.graph, inst.partition)]


def check_counts(inst: Instance) -> list[dict]:
    return [r for R in _build_for(inst) for r in _count_rows(inst, "counts", R)]


def _solver_rows(inst: Instance, suite: str, result) -> list[dict]:
    sound = is_secure(inst.graph, result.vertices)
    raw_sound = is_secure(inst.graph, result.raw)
    oracle = result.certified["oracle_size"]
    detail = {"branch": result.branch, "safeguard": result.safeguard, "cases": result.cases_detected, "raw_sound": raw_sound}
    return [
        _row(inst, suite, "final-set-secure", True, sound, "hit" if sound else "verify-fail"),
        _row(
            inst,
            suite,
            "certified-size=oracle",
            oracle,
            result.size,
            _eq(oracle, result.size),
            raw_size=len(result.raw),
            oracle_size=oracle,
            detail=detail,
        ),
    ]


def check_chain(inst: Instance) -> list[dict]:
    return _solver_rows(inst, "chain", solve_chain(inst.graph, inst.partition, certify=True))


def check_chordal_bisplit(inst: Instance) -> list[dict]:
    return _solver_rows(inst, "chordal-bisplit", solve_chordal_bisplit(inst.graph, inst.partition, certify=True))


def prop1_violations(G: Graph, S) -> list[int]:
    """Members of ``S`` whose external private neighbours are not a clique."""
    return [v for v in sorted(S) if not is_complete_on(G, epn(G, v, S))]


def check_prop1(inst: Instance) -> list[dict]:
    G = inst.graph
    R = split_dd_to_sdd(G, inst.partition)
    sets = {
        "oracle": (G, min_secure_dominating_brute(G)),
        "greedy": (G, greedy_secure_dominating(G)),
        "lifted-target": (R.target, lift_solution(R, "forward", min_dominating_brute(G))),
    }
    rows = []
    for label, (host, S) in sets.items():
        bad = prop1_violations(host, S)
        rows.append(_row(inst, "prop1", f"epn-complete:{label}", [], bad, "hit" if not bad else "miss"))
    return rows


def check_witnesses(inst: Instance) -> list[dict]:
    if isinstance(inst.partition, tuple):
        P, comb = inst.partition
    else:
        P, comb = inst.partition, None
    star_I = find_star_witness(inst.graph, P, "I") if P.I else None
    R = split_dd_to_sdd(inst.graph, P, star_on_I=star_I, comb_on_I=comb)
    rows = []
    wanted = ["star_K"]
    if star_I is not None or not P.I:
        wanted.append("star_I")
    if comb is not None:
        wanted.append("comb_I")
    for name in wanted:
        W = R.witnesses.get(name)
        ok = W is not None and check_pi_convexity(R.target, R.target_partition, W)
        rows.append(_row(inst, "witnesses", f"{name}-convex", True, ok, "hit" if ok else "miss"))
    return rows


def check_approx(inst: Instance) -> list[dict]:
    G, P = inst.graph, inst.partition
    best = gamma_s(G)
    tr: dict = {}
    exact = approx_msd_split(G, P, min_secure_dominating_brute, trace=tr)
    ok = is_secure(G, exact)
    rows = [
        _row(
            inst,
            "approx",
            "exact-approximator-optimal",
            best,
            len(exact),
            ("hit" if len(exact) == best else "miss") if ok else "verify-fail",
            raw_size=len(exact),
            oracle_size=best,
            detail=tr,
        )
    ]
    tr = {}
    greedy = approx_msd_split(G, P, greedy_secure_dominating, trace=tr)
    ok = is_secure(G, greedy)
    rows.append(
        _row(inst, "approx", "greedy-approximator-verified", True, ok, "hit" if ok else "verify-fail",
             raw_size=len(greedy), oracle_size=best, detail=tr)
    )
    return rows


def kpq_corpus(max_side: int = 5) -> Iterator[Instance]:
    for p in range(1, max_side + 1):
        for q in range(p, max_side + 1):
            spec = InstanceSpec("complete-bipartite", {"p": p, "q": q}, 0)
            yield Instance(f"kpq-{p}-{q}", spec, complete_bipartite(p, q), (p, q))


def _split_with_combs() -> Iterator[Instance]:
    yield from split_corpus()
    yield from comb_corpus()


def _all_reduction_sources() -> Iterator[Instance]:
    yield from split_corpus()
    yield from bisplit_corpus()
    yield from cbip_corpus()
    yield from small_split_corpus()


Plan = list[tuple[Callable[[], Iterator[Instance]], Callable[[Instance], list[dict]]]]

SUITE_PLANS: dict[str, Plan] = {
    "kpq": [(kpq_corpus, check_kpq)],
    "split-dd": [(split_corpus, check_split_dd)],
    "bisplit-dd": [(bisplit_corpus, check_bisplit_dd)],
    "doubling": [(cbip_corpus, check_cbip_doubling), (small_split_corpus, check_split_doubling)],
    "counts": [(_all_reduction_sources, check_counts)],
    "chain": [(chain_corpus, check_chain)],
    "chordal-bisplit": [(chordal_bisplit_corpus, check_chordal_bisplit)],
    "prop1": [(lambda: seeded_split_corpus(count=100), check_prop1)],
    "witnesses": [(_split_with_combs, check_witnesses)],
    "approx": [(split_corpus, check_approx)],
}
SUITE_PLANS["equalities"] = SUITE_PLANS["split-dd"] + SUITE_PLANS["bisplit-dd"] + SUITE_PLANS["doubling"]
SUITES = tuple(SUITE_PLANS)


def _run_one(job: tuple[Callable[[Instance], list[dict]], Instance]) -> list[dict]:
    fn, inst = job
    t0 = time.perf_counter()
    rows = fn(inst)
    ms = round((time.perf_counter() - t0) * 1000, 3)
    for r in rows:
        if r["wall_ms"] is None:
            r["wall_ms"] = ms
    return rows


def crosscheck(suite: str, budget: Budget | None = None, workers: int = 1) -> CrossCheckReport:
    """Run ``suite``; rows keep corpus order whatever ``workers`` is."""
    if suite not in SUITE_PLANS:
        raise GraphInputError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    budget = budget or Budget()
    report = CrossCheckReport(suite)
    jobs = ((fn, inst) for corpus, fn in SUITE_PLANS[suite] for inst in corpus())
    if budget.max_instances is not None:
        jobs = itertools.islice(jobs, budget.max_instances + 1)
    jobs = list(jobs)
    if budget.max_instances is not None and len(jobs) > budget.max_instances:
        jobs = jobs[: budget.max_instances]
        report.incomplete = True
    start = time.perf_counter()

    def over_time() -> bool:
        return budget.time_limit is not None and time.perf_counter() - start > budget.time_limit

    if workers <= 1:
        for done, job in enumerate(jobs, 1):
            report.rows.extend(_run_one(job))
            if done < len(jobs) and over_time():
                report.incomplete = True
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_one, j) for j in jobs]
            for done, fut in enumerate(futures, 1):
                report.rows.extend(fut.result())
                if done < len(futures) and over_time():
                    report.incomplete = True
                    for f in futures:
                        f.cancel()
                    break
    return report


def lift_audit(R, sets) -> dict[str, int]:
    """Backward-lift every given target set; tally proof cases and violations."""
    tally: dict[str, int] = {}
    for S in sets:
        tr: dict = {}
        try:
            lift_solution(R, "backward", S, tr)
            key = tr["case"]
        except ClaimViolation as exc:
            key = f"violation:{exc.case}"
        tally[key] = tally.get(key, 0) + 1
    return tally


@dataclass
class ScalingConfig:
    sizes: tuple[int, ...] = (50, 100, 200, 400)
    edge_prob: float = 0.3
    set_fraction: float = 0.5
    repeats: int = 5
    seed: int = 11


def verifier_scaling(cfg: ScalingConfig | None = None) -> dict:
    """Time ``is_secure_dominating`` on G(n, p) with a random dense set.

    At these densities the random half is secure dominating, so the whole
    defence check runs (the ``secure`` flags record it).  Returns the
    best-of-``repeats`` times and the least-squares log-log slope.
    """
    import numpy as np

    from .domination import is_secure_dominating
    from .graph import build_graph

    cfg = cfg or ScalingConfig()
    rng = random.Random(cfg.seed)
    times = []
    secure_flags = []
    for n in cfg.sizes:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < cfg.edge_prob]
        G = build_graph(n, edges)
        S = [v for v in range(n) if rng.random() < cfg.set_fraction]
        best = float("inf")
        for _ in range(cfg.repeats):
            t0 = time.perf_counter()
            cert = is_secure_dominating(G, S)
            best = min(best, time.perf_counter() - t0)
        times.append(best)
        secure_flags.append(cert is not None)
    slope = float(np.polyfit(np.log(cfg.sizes), np.log(times), 1)[0])
    return {"sizes": list(cfg.sizes), "seconds": times, "secure": secure_flags, "slope": slope}
