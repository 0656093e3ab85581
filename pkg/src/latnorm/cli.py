"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain failure (bad input data,
not digital convex, oracle mismatch), 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import os
import sys
import traceback
from typing import Optional

from .bench import CSV_HEADER, parse_sizes, run_bench
from .connectivity import Connectivity, classify
from .diameter import lattice_diameter_bruteforce, lattice_diameter_fast
from .errors import (
    BadParams,
    EmptySetError,
    InvariantViolation,
    LatnormError,
    NormalizationFailed,
    NotDigitalConvexError,
    ParseError,
)
from .instances import GeneratorSpec, format_points, generate, parse_points, serialize_result
from .lattice import convex_hull, is_digital_convex
from .normalize import to_almost_4_connected
from .oracle import verify_result

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INTERNAL = 0, 1, 2, 3

GEN_PARAMS = {
    "disc": ("radius",),
    "random_hull": ("count", "box"),
    "thin_slab": ("length", "width", "slope"),
    "pompom": ("k",),
    "rows": ("n",),
}
ALL_GEN_PARAMS = sorted({p for ps in GEN_PARAMS.values() for p in ps})

CLASS_TEXT = {
    Connectivity.CONNECTED4: "4-connected",
    Connectivity.ALMOST4: "almost 4-connected",
    Connectivity.CONNECTED8_ONLY: "8-connected only",
    Connectivity.DISCONNECTED: "disconnected",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _default_seed() -> int:
    raw = os.environ.get("LATNORM_SEED")
    if raw is None:
        return 0
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"LATNORM_SEED is not an integer: {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="latnorm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("check", help="digital convexity and connectivity verdict")
    p.add_argument("file", help="point-list file, '-' for stdin")

    p = sub.add_parser("hull", help="print convex hull vertices (counter-clockwise)")
    p.add_argument("file")

    p = sub.add_parser("diameter", help="lattice diameter")
    p.add_argument("file")
    p.add_argument("--brute", action="store_true", help="cross-check against the pairwise oracle")

    p = sub.add_parser("normalize", help="map to an almost 4-connected set, verified")
    p.add_argument("file")
    p.add_argument("-o", "--output", default="-", help="result JSON path, '-' for stdout")
    p.add_argument("--budget", type=int, default=None, help="fallback search bound on shear parameters")

    p = sub.add_parser("gen", help="write a generated point list")
    p.add_argument("--kind", required=True, choices=sorted(GEN_PARAMS))
    p.add_argument("--seed", type=int, default=None, help="64-bit seed (default $LATNORM_SEED or 0)")
    for name in ALL_GEN_PARAMS:
        p.add_argument(f"--{name}", type=int, default=None)
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("render", help="ASCII or SVG picture of a point set")
    p.add_argument("file")
    p.add_argument("--svg", action="store_true")
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("bench", help="timing ladder on discs, CSV output")
    p.add_argument("--sizes", default="1e3,1e4,1e5,1e6")
    p.add_argument("--warmups", type=int, default=3)
    p.add_argument("--repeats", type=int, default=5)

    sub.add_parser("selftest", help="run the embedded golden suite")
    return parser


def _read_points(path: str) -> frozenset:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_points(text)


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _class_text(cls) -> str:
    text = CLASS_TEXT[cls.tag]
    if cls.witness is not None:
        text += f" (witness {cls.witness[0]} {cls.witness[1]})"
    return text


def cmd_check(args) -> int:
    s = _read_points(args.file)
    if not s:
        raise EmptySetError("input has no points")
    convex = is_digital_convex(s)
    verdict = "digital convex" if convex else "not digital convex"
    print(f"{verdict}; {_class_text(classify(s))}")
    return EXIT_OK if convex else EXIT_DOMAIN


def cmd_hull(args) -> int:
    s = _read_points(args.file)
    if not s:
        raise EmptySetError("input has no points")
    # hull order, not sorted
    sys.stdout.write("".join(f"{x} {y}\n" for x, y in convex_hull(s)))
    return EXIT_OK


def cmd_diameter(args) -> int:
    s = _read_points(args.file)
    result, stats = lattice_diameter_fast(s, check=True)
    print(f"k {result.k}")
    print(f"start {result.p_start[0]} {result.p_start[1]}")
    print(f"end {result.p_end[0]} {result.p_end[1]}")
    print(f"direction {result.direction[0]} {result.direction[1]}")
    if args.brute:
        brute = lattice_diameter_bruteforce(s)
        print(f"brute k {brute.k}")
        if brute.k != result.k:
            print(f"mismatch: fast {result.k} != brute {brute.k}", file=sys.stderr)
            return EXIT_DOMAIN
        print("match")
    return EXIT_OK


def _dump_trace(trace) -> None:
    if trace is None:
        return
    print("trace:", file=sys.stderr)
    for step in trace.steps:
        m = step.map
        print(
            f"  {step.name}: [[{m.a},{m.b}],[{m.c},{m.d}]] + ({m.tx},{m.ty}) -> {step.outcome}",
            file=sys.stderr,
        )


def cmd_normalize(args) -> int:
    s = _read_points(args.file)
    if args.budget is not None and args.budget < 0:
        raise UsageError("--budget must be non-negative")
    try:
        m, c, trace = to_almost_4_connected(s, budget=args.budget)
    except NormalizationFailed as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        _dump_trace(getattr(exc, "trace", None))
        return EXIT_INTERNAL
    report = verify_result(s, m, c)
    if not report.ok:
        print("internal error: result failed verification", file=sys.stderr)
        print(str(report), file=sys.stderr)
        _dump_trace(trace)
        return EXIT_INTERNAL
    _write(args.output, serialize_result(m, c, trace))
    return EXIT_OK


def cmd_gen(args) -> int:
    allowed = GEN_PARAMS[args.kind]
    extra = [name for name in ALL_GEN_PARAMS if name not in allowed and getattr(args, name) is not None]
    if extra:
        raise UsageError(f"--{extra[0]} does not apply to kind {args.kind}")
    missing = [name for name in allowed if getattr(args, name) is None]
    if missing:
        raise UsageError(f"kind {args.kind} needs --{missing[0]}")
    seed = args.seed if args.seed is not None else _default_seed()
    spec = GeneratorSpec(args.kind, {name: getattr(args, name) for name in allowed}, seed)
    try:
        s = generate(spec)
    except BadParams as exc:
        raise UsageError(str(exc)) from None
    _write(args.output, format_points(s))
    return EXIT_OK


def render_ascii(s, witness=None) -> str:
    xs = [p[0] for p in s]
    ys = [p[1] for p in s]
    lines = []
    for y in range(max(ys), min(ys) - 1, -1):
        row = []
        for x in range(min(xs), max(xs) + 1):
            if (x, y) == witness:
                row.append("○")
            elif (x, y) in s:
                row.append("●")
            else:
                row.append("·")
        lines.append("".join(row))
    return "\n".join(lines) + "\n"


def render_svg(s, witness=None, cell: int = 10) -> str:
    x0 = min(p[0] for p in s)
    y1 = max(p[1] for p in s)
    width = (max(p[0] for p in s) - x0 + 1) * cell
    height = (y1 - min(p[1] for p in s) + 1) * cell
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for x, y in sorted(s):
        fill = "white" if (x, y) == witness else "black"
        parts.append(
            f'<rect x="{(x - x0) * cell}" y="{(y1 - y) * cell}" width="{cell}" height="{cell}" '
            f'fill="{fill}" stroke="black"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_render(args) -> int:
    s = _read_points(args.file)
    if not s:
        raise EmptySetError("input has no points")
    witness = classify(s).witness
    text = render_svg(s, witness) if args.svg else render_ascii(s, witness)
    _write(args.output, text)
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        sizes = parse_sizes(args.sizes)
    except ValueError as exc:
        raise UsageError(f"bad --sizes: {exc}") from None
    if args.warmups < 0 or args.repeats < 1:
        raise UsageError("need --warmups >= 0 and --repeats >= 1")
    print(CSV_HEADER)
    for row in run_bench(sizes, args.warmups, args.repeats):
        print(row.csv(), flush=True)
    return EXIT_OK


def _golden_cases():
    for k in range(2, 7):
        yield f"pompom k={k}", GeneratorSpec("pompom", {"k": k})
    for r in (1, 2, 5, 12):
        yield f"disc R={r}", GeneratorSpec("disc", {"radius": r})
    for seed in range(3):
        yield f"thin_slab seed={seed}", GeneratorSpec(
            "thin_slab", {"length": 15, "width": 2, "slope": 6}, seed
        )


def cmd_selftest(args) -> int:
    failures = 0
    for name, spec in _golden_cases():
        s = generate(spec)
        problems = []
        try:
            m, c, trace = to_almost_4_connected(s)
            report = verify_result(s, m, c)
            if not report.ok:
                problems.append("verify: " + ",".join(report.failures()))
            if trace.fallback_used:
                problems.append("fallback used")
            if lattice_diameter_fast(s)[0].k != lattice_diameter_bruteforce(s).k:
                problems.append("diameter mismatch")
        except LatnormError as exc:
            problems.append(f"{type(exc).__name__}: {exc}")
        failures += bool(problems)
        print(f"{'FAIL' if problems else 'PASS'} {name}" + (f" ({'; '.join(problems)})" if problems else ""))
    print(f"{failures} failure(s)")
    return EXIT_OK if failures == 0 else EXIT_DOMAIN


COMMANDS = {
    "check": cmd_check,
    "hull": cmd_hull,
    "diameter": cmd_diameter,
    "normalize": cmd_normalize,
    "gen": cmd_gen,
    "render": cmd_render,
    "bench": cmd_bench,
    "selftest": cmd_selftest,
}


def run(argv: Optional[list] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"latnorm: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        traceback.print_exc(file=sys.stderr)
        return EXIT_INTERNAL
    except (ParseError, EmptySetError, NotDigitalConvexError) as exc:
        print(f"latnorm: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except LatnormError as exc:
        print(f"latnorm: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
