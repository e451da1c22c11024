"""Command-line interface: stratify, minimize, mult, gb, bench.

Problem files declare variables on the first line (``vars: x y z``) and
one polynomial per following non-blank, non-# line; ``option key value``
lines carry per-problem settings.  Reports are printed human-readable or
as JSON; identical inputs and seeds produce identical reports except for
the timing block.

Exit codes: 0 success, 2 parse error, 3 timeout, 4 genericity failure.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .geometry import GenericityError
from .idealops import Ideal, dimension
from .multiplicity import mult_sequence
from .polyring import (
    Lex,
    ParseError,
    PolyError,
    PolyRing,
    block_order,
    grevlex,
    lex,
    parse_polynomial,
    poly_to_str,
)
from .stratify import Flag, build_tree, whitney, whitney_minimize
from .idealops import EquidimPiece
from .groebner import buchberger

DEFAULT_SEED = 1


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class ProblemFile:
    """Parsed problem: ordered variables, polynomials, option map."""

    ring: PolyRing
    polynomials: list
    options: dict = field(default_factory=dict)
    name: str = ""


def parse_problem(path: str | Path) -> ProblemFile:
    path = Path(path)
    ring = None
    polys = []
    options: dict = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("vars:"):
            names = line[len("vars:"):].split()
            if not names:
                raise ParseError("empty variable list", lineno, 1)
            ring = PolyRing(names)
            continue
        if line.startswith("option "):
            parts = line.split(None, 2)
            if len(parts) < 3:
                raise ParseError("option needs a key and a value", lineno, 1)
            options[parts[1]] = parts[2]
            continue
        if ring is None:
            raise ParseError("polynomial before vars: line", lineno, 1)
        polys.append(parse_polynomial(ring, line, line=lineno))
    if ring is None:
        raise ParseError("missing vars: line", 1, 1)
    return ProblemFile(ring, polys, options, name=path.stem)


# ---------------------------------------------------------------------------
# Reports


def flag_report(flag: Flag, minimized: bool, seed: int,
                timings: dict) -> dict:
    levels = []
    for dim_level, pieces in enumerate(flag.levels):
        if not pieces:
            continue
        comps = []
        for p in sorted(pieces, key=lambda q: q.key()):
            comps.append([poly_to_str(g) for g in p.ideal.generators])
        levels.append({"dim": dim_level, "components": comps})
    return {
        "dimension": flag.dim,
        "variables": list(flag.ring.names),
        "levels": levels,
        "minimized": minimized,
        "seed": seed,
        "timings": {k: int(v) for k, v in timings.items()},
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def report_from_json(text: str) -> dict:
    return json.loads(text)


def flag_from_report(report: dict) -> Flag:
    ring = PolyRing(report["variables"])
    top = report["dimension"]
    levels = [[] for _ in range(top + 1)]
    for entry in report["levels"]:
        d = entry["dim"]
        for gens in entry["components"]:
            ideal = Ideal(ring, [parse_polynomial(ring, g) for g in gens])
            levels[d].append(EquidimPiece(ideal, d))
    return Flag(ring, levels)


def print_report(report: dict, as_json: bool, out=None):
    out = out or sys.stdout
    if as_json:
        out.write(report_to_json(report) + "\n")
        return
    if not report["levels"]:
        out.write("empty variety (unit ideal)\n")
        return
    out.write(f"dimension {report['dimension']}"
              f"{' (minimized)' if report['minimized'] else ''}\n")
    for entry in report["levels"]:
        comps = entry["components"]
        out.write(f"W_{entry['dim']}: {len(comps)} component(s)\n")
        for gens in comps:
            out.write("  V(" + ", ".join(gens) + ")\n")
    tm = report.get("timings", {})
    if tm:
        pretty = ", ".join(f"{k}={v}ms" for k, v in sorted(tm.items()))
        out.write(f"timings: {pretty}\n")


# ---------------------------------------------------------------------------
# Timeout plumbing


class _Timeout(Exception):
    pass


def _alarm_handler(signum, frame):
    raise _Timeout


def _with_timeout(seconds: float | None, fn):
    if not seconds:
        return fn()
    old = signal.signal(signal.SIGALRM, _alarm_handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        return fn()
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _seed_from(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("STRATAKIT_SEED")
    if env:
        return int(env)
    return DEFAULT_SEED


# ---------------------------------------------------------------------------
# Commands


def cmd_stratify(args) -> int:
    try:
        prob = parse_problem(args.file)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    seed = _seed_from(args)
    timings: dict = {}
    ideal = Ideal(prob.ring, prob.polynomials)

    def run():
        t0 = time.monotonic()
        flag = whitney(ideal)
        timings["stratify_ms"] = 1000 * (time.monotonic() - t0)
        if args.minimize and not flag.is_empty():
            t1 = time.monotonic()
            tree = build_tree(flag)
            flag = whitney_minimize(tree, seed)
            timings["minimize_ms"] = 1000 * (time.monotonic() - t1)
        return flag

    try:
        flag = _with_timeout(args.timeout, run)
    except _Timeout:
        print("timeout", file=sys.stderr)
        return 3
    except GenericityError as exc:
        print(f"genericity failure: {exc}", file=sys.stderr)
        return 4
    report = flag_report(flag, bool(args.minimize), seed, timings)
    print_report(report, args.json)
    return 0


def cmd_minimize(args) -> int:
    try:
        report = report_from_json(Path(args.file).read_text())
        flag = flag_from_report(report)
    except (json.JSONDecodeError, KeyError, ParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    seed = _seed_from(args)
    timings: dict = {}

    def run():
        t0 = time.monotonic()
        tree = build_tree(flag)
        out = whitney_minimize(tree, seed)
        timings["minimize_ms"] = 1000 * (time.monotonic() - t0)
        return out

    try:
        mini = _with_timeout(args.timeout, run)
    except _Timeout:
        print("timeout", file=sys.stderr)
        return 3
    except GenericityError as exc:
        print(f"genericity failure: {exc}", file=sys.stderr)
        return 4
    print_report(flag_report(mini, True, seed, timings), args.json)
    return 0


def cmd_mult(args) -> int:
    try:
        prob_x = parse_problem(args.file_x)
        prob_y = parse_problem(args.file_y)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    if prob_x.ring != prob_y.ring:
        print("parse error: the two problems use different variables",
              file=sys.stderr)
        return 2
    seed = _seed_from(args)
    IX = Ideal(prob_x.ring, prob_x.polynomials)
    IY = Ideal(prob_y.ring, prob_y.polynomials)
    try:
        piece = EquidimPiece(IX, dimension(IX))
        seq = mult_sequence(piece, IY, seed)
    except GenericityError as exc:
        print(f"genericity failure: {exc}", file=sys.stderr)
        return 4
    print(" ".join(str(v) for v in seq.values))
    return 0


def cmd_gb(args) -> int:
    try:
        prob = parse_problem(args.file)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    ring = prob.ring
    spec = args.order
    if spec == "grevlex":
        order = grevlex(ring)
    elif spec == "lex":
        order = lex(ring)
    elif spec.startswith("block:"):
        names = [s for s in spec[len("block:"):].split(",") if s]
        try:
            front = [ring.index(nm) for nm in names]
        except PolyError as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return 2
        order = block_order(ring, front)
    else:
        print(f"parse error: unknown order {spec!r}", file=sys.stderr)
        return 2
    if not prob.polynomials:
        return 0
    G = buchberger(prob.polynomials, order)
    for g in G.basis:
        print(poly_to_str(g))
    return 0


def cmd_bench(args) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        print(f"parse error: {corpus} is not a directory", file=sys.stderr)
        return 2
    seed = _seed_from(args)
    problems = sorted(corpus.glob("*.prob"))
    rows = []
    for prob_path in problems:
        prob = parse_problem(prob_path)
        skip = prob.options.get("default_skip", "").lower() in ("1", "true", "yes")
        if skip and not args.run_skipped:
            rows.append((prob.name, "skipped", None, None, None))
            continue
        cmd = [sys.executable, "-m", "stratakit.cli", "stratify",
               str(prob_path), "--json", "--seed", str(seed)]
        t0 = time.monotonic()
        try:
            out = subprocess.run(cmd, capture_output=True, text=True,
                                 timeout=args.timeout)
        except subprocess.TimeoutExpired:
            rows.append((prob.name, "timeout", args.timeout, None, None))
            continue
        wall = time.monotonic() - t0
        if out.returncode != 0:
            rows.append((prob.name, f"error({out.returncode})", wall, None, None))
            continue
        report = json.loads(out.stdout)
        counts = {e["dim"]: len(e["components"]) for e in report["levels"]}
        match = None
        expected = prob.options.get("expected")
        if expected:
            want = {}
            for chunk in expected.split(","):
                dd, cc = chunk.split(":")
                want[int(dd)] = int(cc)
            match = want == counts
        rows.append((prob.name, "ok", wall, counts, match))

    width = max((len(r[0]) for r in rows), default=8)
    print(f"{'problem'.ljust(width)}  {'status':>8}  {'wall_s':>8}  levels")
    for name, status, wall, counts, match in rows:
        wall_s = f"{wall:.1f}" if wall is not None else "-"
        lv = "-"
        if counts:
            lv = " ".join(f"{d}:{c}" for d, c in sorted(counts.items()))
            if match is True:
                lv += "  [matches reference]"
            elif match is False:
                lv += "  [DIFFERS from reference]"
        print(f"{name.ljust(width)}  {status:>8}  {wall_s:>8}  {lv}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="stratakit",
        description="Whitney stratification of affine varieties over Q",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stratify", help="stratify a problem file")
    p.add_argument("file")
    p.add_argument("--minimize", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timeout", type=float, default=None, metavar="S")
    p.set_defaults(fn=cmd_stratify)

    p = sub.add_parser("minimize", help="minimize a previously emitted JSON flag")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timeout", type=float, default=None, metavar="S")
    p.set_defaults(fn=cmd_minimize)

    p = sub.add_parser("mult", help="multiplicity sequence at a random point")
    p.add_argument("file_x")
    p.add_argument("file_y")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_mult)

    p = sub.add_parser("gb", help="print a reduced Groebner basis")
    p.add_argument("file")
    p.add_argument("--order", default="grevlex",
                   help="grevlex | lex | block:v1,v2,...")
    p.set_defaults(fn=cmd_gb)

    p = sub.add_parser("bench", help="run the benchmark corpus")
    p.add_argument("corpus", nargs="?",
                   default=str(Path(__file__).parent / "corpus"))
    p.add_argument("--timeout", type=float, default=900.0, metavar="S")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--run-skipped", action="store_true")
    p.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
