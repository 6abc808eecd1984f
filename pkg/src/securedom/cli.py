"""``securedom`` command line.

Exit codes: 0 success, 1 bad input or usage, 2 a verification failure was
found, 3 a claim violation (or equality miss) was found.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .crosscheck import SUITES, Budget, crosscheck
from .domination import (
    is_dominating,
    is_secure_dominating,
    min_dominating_brute,
    min_secure_dominating_brute,
    greedy_secure_dominating,
)
from .errors import ClaimViolation, SecureDomError
from .generators import CLASSES, InstanceSpec, generate
from .graph import Graph, format_edge_list, parse_edge_list, read_comment_directives
from .recognition import (
    BisplitPartition,
    ConvexityWitness,
    SplitPartition,
    check_chordal_bisplit,
    is_chordal,
    is_chordal_bipartite,
    recognize_bisplit,
    recognize_chain,
    recognize_chordal_bisplit,
    recognize_split,
)
from .reductions import KINDS, build_reduction, lift_solution
from .solvers import solve_chain, solve_chordal_bisplit

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_CLAIM = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep 2 free for verification failures
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# -- serialization helpers -------------------------------------------------------------

def partition_from_json(data: dict):
    keys = set(data)
    if keys == {"K", "I"}:
        return SplitPartition(frozenset(data["K"]), frozenset(data["I"]))
    if keys == {"X", "Y", "Z"}:
        return BisplitPartition(frozenset(data["X"]), frozenset(data["Y"]), frozenset(data["Z"]))
    if keys == {"X", "Y"}:
        return (frozenset(data["X"]), frozenset(data["Y"]))
    raise SecureDomError(f"unrecognised partition keys {sorted(keys)}")


def partition_to_json(P) -> dict:
    if isinstance(P, tuple):
        return {"X": sorted(P[0]), "Y": sorted(P[1])}
    return P.to_json()


def witness_from_json(data: dict) -> ConvexityWitness:
    return ConvexityWitness(data["side"], data["shape"], tuple(data["spine"]), {int(t): s for t, s in data.get("teeth", {}).items()})


def load_graph(path: str) -> tuple[Graph, dict[str, str]]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_edge_list(text), read_comment_directives(text)


def parse_vertex_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    if text.startswith("["):
        return [int(v) for v in json.loads(text)]
    return [int(v) for v in text.replace(",", " ").split()]


def _param(value: str):
    key, sep, raw = value.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {value!r}")
    try:
        return key, json.loads(raw)
    except json.JSONDecodeError:
        return key, raw


def _flatten(obj: dict) -> dict:
    return {k: json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v for k, v in obj.items()}


def emit(args, payload, text: str | None = None) -> None:
    """Write ``text`` verbatim if given, else ``payload`` in the chosen format."""
    if text is None:
        if args.format == "csv":
            rows = payload if isinstance(payload, list) else [payload]
            rows = [_flatten(r) for r in rows]
            buf = io.StringIO()
            cols = list(dict.fromkeys(k for r in rows for k in r))
            w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
            text = buf.getvalue()
        else:
            text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _partition_for(G: Graph, directives: dict[str, str], explicit: str | None):
    raw = explicit if explicit is not None else directives.get("partition")
    if raw is None:
        return None
    return partition_from_json(json.loads(raw))


# -- commands ----------------------------------------------------------------------

def cmd_gen(args) -> int:
    spec = InstanceSpec(args.cls, dict(args.param or []), args.seed)
    G, P = generate(spec)
    comments = {"spec": json.dumps(spec.to_json(), sort_keys=True)}
    if isinstance(P, tuple) and isinstance(P[1], ConvexityWitness):
        comments["partition"] = json.dumps(P[0].to_json())
        comments["witness"] = json.dumps(P[1].to_json())
    elif P is not None and not hasattr(P, "x_order"):
        comments["partition"] = json.dumps(partition_to_json(P))
    emit(args, None, format_edge_list(G, comments))
    return EXIT_OK


def cmd_recognize(args) -> int:
    G, _ = load_graph(args.graph)
    out: dict = {"n": G.n, "m": G.m}
    split = recognize_split(G)
    out["split"] = split.to_json() if split else None
    out["chordal"] = is_chordal(G)
    chain = None
    try:
        chain = recognize_chain(G)
    except SecureDomError:
        pass
    out["chain"] = chain.to_json() if chain else None
    if G.n <= 20:
        bis = recognize_bisplit(G)
        out["bisplit"] = bis.to_json() if bis else None
        cb = recognize_chordal_bisplit(G)
        out["chordal_bisplit"] = cb.to_json() if cb else None
    if G.n <= 16:
        out["chordal_bipartite"] = is_chordal_bipartite(G)
    emit(args, out)
    return EXIT_OK


def cmd_verify(args) -> int:
    G, _ = load_graph(args.graph)
    S = parse_vertex_list(args.set)
    dom = is_dominating(G, S)
    cert = is_secure_dominating(G, S)
    out = {"set": sorted(set(S)), "dominating": dom, "secure": cert is not None}
    if cert is not None:
        out["certificate"] = cert.to_json()
    emit(args, out)
    ok = dom if args.domination else cert is not None
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_solve(args) -> int:
    G, directives = load_graph(args.graph)
    if args.exact:
        S = min_dominating_brute(G) if args.domination else min_secure_dominating_brute(G)
        out = {"problem": "domination" if args.domination else "secure", "size": len(S), "set": sorted(S)}
    elif args.greedy:
        S = greedy_secure_dominating(G)
        out = {"problem": "secure", "size": len(S), "set": sorted(S)}
    elif args.chain:
        P = recognize_chain(G)
        if P is None:
            raise SecureDomError("input is not a chain graph")
        out = solve_chain(G, P, certify=args.certify).to_json()
    else:
        P = _partition_for(G, directives, args.partition)
        if P is None or not check_chordal_bisplit(G, P):
            P = recognize_chordal_bisplit(G)
        if P is None:
            raise SecureDomError("input is not a chordal bisplit graph")
        out = solve_chordal_bisplit(G, P, certify=args.certify).to_json()
    S = out["set"]
    verified = is_dominating(G, S) if (args.exact and args.domination) else is_secure_dominating(G, S) is not None
    out["verified"] = verified
    emit(args, out)
    return EXIT_OK if verified else EXIT_VERIFY


def cmd_reduce(args) -> int:
    G, directives = load_graph(args.graph)
    P = _partition_for(G, directives, args.partition)
    if P is None:
        P = recognize_split(G) if args.kind in ("split-dd", "split-sdd") else None
        if P is None and args.kind == "bisplit-dd" and G.n <= 20:
            P = recognize_bisplit(G)
        if P is None and args.kind == "cbip-sdd":
            from .graph import two_coloring

            col = two_coloring(G)
            if col is not None:
                P = (frozenset(v for v in range(G.n) if col[v] == 0), frozenset(v for v in range(G.n) if col[v] == 1))
    if P is None:
        raise SecureDomError(f"no partition supplied or recognised for {args.kind}")
    R = build_reduction(args.kind, G, P)
    sidecar = R.to_json()
    code = EXIT_OK
    if args.lift is not None:
        S = parse_vertex_list(args.lift_set or "")
        trace: dict = {}
        try:
            lifted = lift_solution(R, args.lift, S, trace)
            sidecar["lift"] = {"direction": args.lift, "input": sorted(S), "output": sorted(lifted), "trace": trace}
        except ClaimViolation as exc:
            sidecar["lift"] = {"direction": args.lift, "input": sorted(S), "claim_violation": exc.case, "message": str(exc)}
            code = EXIT_CLAIM
    text = format_edge_list(R.target, {"partition": json.dumps(R.target_partition.to_json()), "kind": R.kind})
    if args.out:
        Path(args.out).write_text(text)
        Path(args.out + ".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)
        sys.stderr.write(json.dumps(sidecar, sort_keys=True) + "\n")
    return code


def cmd_crosscheck(args) -> int:
    report = crosscheck(args.suite, Budget(args.max_instances, args.time_limit), workers=args.workers)
    text = report.to_csv() if args.format == "csv" else json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    emit(args, None, text)
    print(json.dumps(report.summary, sort_keys=True), file=sys.stderr)
    return report.exit_code()


def build_parser() -> argparse.ArgumentParser:
    def global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
        # repeated on every subcommand so the flags may follow it
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        parser.add_argument("--seed", type=int, default=d(0), help="seed for generators (default 0)")
        parser.add_argument("--out", default=d(None), help="output file (default stdout)")
        parser.add_argument("--format", choices=("json", "csv"), default=d("json"))

    ap = _Parser(prog="securedom", description="Secure domination toolkit: recognisers, oracles, solvers and reductions.")
    global_flags(ap, suppress=False)
    common = _Parser(add_help=False)
    global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda name, **kw: _add(name, parents=[common], **kw)

    g = sub.add_parser("gen", help="generate a seeded instance as an edge list")
    g.add_argument("cls", choices=CLASSES)
    g.add_argument("--param", "-p", action="append", type=_param, help="size parameter key=value (repeatable)")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("recognize", help="run every class recogniser")
    r.add_argument("graph", help="edge-list file or - for stdin")
    r.set_defaults(func=cmd_recognize)

    v = sub.add_parser("verify", help="check a vertex set")
    v.add_argument("graph")
    v.add_argument("--set", required=True, help="vertices, comma separated or JSON list")
    vmode = v.add_mutually_exclusive_group()
    vmode.add_argument("--domination", action="store_true", help="only require domination for exit status")
    vmode.add_argument("--secure", action="store_true", help="require secure domination (default)")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve", help="compute a secure dominating set")
    s.add_argument("graph")
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true", help="brute-force oracle (n <= 24)")
    mode.add_argument("--greedy", action="store_true")
    mode.add_argument("--chain", action="store_true")
    mode.add_argument("--chordal-bisplit", action="store_true")
    prob = s.add_mutually_exclusive_group()
    prob.add_argument("--domination", action="store_true", help="with --exact: minimum dominating set")
    prob.add_argument("--secure", action="store_true", help="with --exact: minimum secure dominating set (default)")
    s.add_argument("--certify", action="store_true", help="compare against the oracle and keep the smaller set")
    s.add_argument("--partition", help="JSON partition overriding the file's # partition line")
    s.set_defaults(func=cmd_solve)

    d = sub.add_parser("reduce", help="build a reduction target (edge list + JSON sidecar)")
    d.add_argument("graph")
    d.add_argument("--kind", required=True, choices=KINDS)
    d.add_argument("--partition", help="JSON partition of the source")
    d.add_argument("--lift", choices=("forward", "backward"))
    d.add_argument("--lift-set", help="vertex set to lift through the reduction")
    d.set_defaults(func=cmd_reduce)

    c = sub.add_parser("crosscheck", help="run a cross-check suite against the oracles")
    c.add_argument("suite", choices=SUITES)
    c.add_argument("--max-instances", type=int)
    c.add_argument("--time-limit", type=float, help="seconds; exceeding it marks the report incomplete")
    c.add_argument("--workers", type=int, default=1)
    c.set_defaults(func=cmd_crosscheck)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "solve" and (args.domination or args.secure) and not args.exact:
        print("securedom: --domination/--secure need --exact", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except ClaimViolation as exc:
        print(f"securedom: claim violation [{exc.case}]: {exc}", file=sys.stderr)
        return EXIT_CLAIM
    except (SecureDomError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"securedom: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
