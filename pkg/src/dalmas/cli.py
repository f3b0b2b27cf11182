"""Command-line entry point: ``dalmas run | audit | norms``.

Exit codes: 0 success, 1 validation failure, 2 audit divergence or corrupt
trace, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from dalmas.conditions import condition_bqo, verify_bqo
from dalmas.engine import TraceCorruptionError, Trace, audit, run
from dalmas.normative import check_connectivity, check_joining_closure, minimal_norms
from dalmas.positions import check_move_isomorphism, maxiconjunction_table, mcis_over, verify_npcis
from dalmas.prohibition import ConfigurationError
from dalmas.scenario import Scenario, ScenarioError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_DIVERGED = 2
EXIT_IO = 3


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else False
    p.add_argument("--extended-rules", action="store_true", default=default,
                   help="apply the disjunctive/conjunctive consequence rules")
    p.add_argument("--minimal-only", action="store_true", default=default,
                   help="regulate with the minimal norms only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dalmas", description="Norm-regulated multi-agent runs.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a scenario and write its trace")
    p.add_argument("--scenario", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--k", type=int, default=None, help="event count (overrides the scenario)")
    _global_flags(p, suppress=True)

    p = sub.add_parser("audit", help="replay a trace and re-derive every decision")
    p.add_argument("--trace", required=True, type=Path)
    p.add_argument("--scenario", required=True, type=Path)
    _global_flags(p, suppress=True)

    p = sub.add_parser("norms", help="inspect the normative system")
    p.add_argument("what", choices=("min", "check", "table"))
    p.add_argument("--scenario", type=Path, default=None)
    _global_flags(p, suppress=True)
    return parser


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None


def _scenario(path: Path) -> Scenario:
    try:
        return Scenario.loads(_read(path))
    except ScenarioError as exc:
        raise _Fail(EXIT_INVALID, f"invalid scenario {path}: {exc}") from None


def _build(sc: Scenario, args):
    try:
        return sc.build(
            minimal_only=True if args.minimal_only else None,
            extended=True if args.extended_rules else None,
        )
    except (ConfigurationError, ValueError) as exc:
        raise _Fail(EXIT_INVALID, f"invalid scenario: {exc}") from None


def cmd_run(args, out=None) -> int:
    out = out or sys.stdout
    sc = _scenario(args.scenario)
    k = sc.engine.k if args.k is None else args.k
    if k < 0:
        raise _Fail(EXIT_INVALID, "--k must be non-negative")
    d, initial = _build(sc, args)
    trace = run(d, initial, k)
    try:
        args.out.write_text(trace.dumps(d.world))
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write {args.out}: {exc.strerror or exc}") from None
    final = trace.phi(trace.k).state
    print(
        f"events={trace.k} deadlocks={trace.deadlocks()} "
        f"collected={final.total_collected():g} remaining={final.total_waste():g}",
        file=out,
    )
    return EXIT_OK


def cmd_audit(args, out=None) -> int:
    out = out or sys.stdout
    sc = _scenario(args.scenario)
    d, _ = _build(sc, args)
    text = _read(args.trace)
    try:
        trace = Trace.loads(text, d.world)
        report = audit(trace, d)
    except TraceCorruptionError as exc:
        print(f"corrupt trace: {exc}", file=out)
        return EXIT_DIVERGED
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"corrupt trace: unreadable record ({exc})", file=out)
        return EXIT_DIVERGED
    print(report.summary(), file=out)
    if report.ok:
        return EXIT_OK
    first = report.first
    print(f"first divergence: {first}", file=out)
    if report.verdict_differences:
        counts = " ".join(f"{t}:{n}" for t, n in sorted(report.verdict_differences.items()))
        print(f"prohibited-set differences per event: {counts}", file=out)
    return EXIT_DIVERGED


def _print_table(out) -> None:
    print("type  do pass do~  abbreviation", file=out)
    for row in maxiconjunction_table():
        signs = "  ".join(row.signs)
        print(f"T{row.index}    {signs}    {row.abbreviation or ''}".rstrip(), file=out)


def _check(sc: Scenario, norms: list, out) -> bool:
    universe = sc.probe_universe()
    gc = sc.gc_system(norms)
    grounds = [n.ground.base for n in norms]
    ok = True

    by_arity: dict = {}
    for g in grounds:
        by_arity.setdefault(g.arity, []).append(g)
    for n, carrier in sorted(by_arity.items()):
        bqo = condition_bqo(carrier, universe)
        rep = verify_bqo(bqo)
        mrep = verify_bqo(mcis_over(bqo))
        iso = check_move_isomorphism(carrier, universe)
        ok &= rep.ok and mrep.ok and not iso
        print(f"ground Bqo (arity {n}): {'ok' if rep.ok else 'FAIL'} ({rep.checked} instances)", file=out)
        print(f"move-term Bqo (arity {n + 1}): {'ok' if mrep.ok else 'FAIL'} ({mrep.checked} instances)", file=out)
        print(f"move operator commutes: {'ok' if not iso else 'FAIL'}", file=out)
        for v in (rep.violations + mrep.violations + iso)[:5]:
            print(f"  {v}", file=out)

    conseqs = list(dict.fromkeys(n.consequence for n in norms))
    np_rep = verify_npcis(gc.vocab, sample=conseqs)
    ok &= np_rep.ok
    counts = ", ".join(f"{k}={v}" for k, v in np_rep.checked.items())
    print(f"np-cis: {'ok' if np_rep.ok else 'FAIL'} ({counts})", file=out)
    for v in np_rep.violations[:5]:
        print(f"  {v}", file=out)

    closure = check_joining_closure(gc)
    print(
        "joining closure of the norm set: "
        + ("closed" if closure.ok else
           f"not closed (upward={len(closure.upward)}, ground lub={len(closure.ground_lub)}, "
           f"consequence glb={len(closure.consequence_glb)})"),
        file=out,
    )
    conn = check_connectivity(gc)
    print(
        "connectivity: "
        + ("every norm lies above a minimal norm" if conn.connected
           else "unconnected: " + " ".join(n.id for n in conn.failures)),
        file=out,
    )
    ok &= conn.connected
    return ok


def cmd_norms(args, out=None) -> int:
    out = out or sys.stdout
    if args.what == "table":
        _print_table(out)
        return EXIT_OK
    if args.scenario is None:
        raise _Fail(EXIT_INVALID, f"norms {args.what} needs --scenario")
    sc = _scenario(args.scenario)
    try:
        norms = sc.norm_list()
    except ScenarioError as exc:
        raise _Fail(EXIT_INVALID, f"invalid scenario: {exc}") from None
    if args.what == "min":
        mins = minimal_norms(sc.gc_system(norms))
        print(" ".join(n.id for n in mins), file=out)
        return EXIT_OK
    return EXIT_OK if _check(sc, norms, out) else EXIT_INVALID


COMMANDS = {"run": cmd_run, "audit": cmd_audit, "norms": cmd_norms}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except _Fail as exc:
        print(f"dalmas: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
