"""Command-line interface.

Every command reads one input file and writes a plain-text report made of
``key: value`` blocks separated by blank lines (``render`` writes SVG).
Numbers are printed with fixed precision so that reports diff cleanly.

Exit codes: 0 success, 2 invalid input, 3 no convergence, 64 usage error,
66 unreadable file.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .confspace import fan_sample
from .errors import DecHypError, ImproperDecoration, MaxFlipsExceeded, NotConverged
from .flipper import (
    DEFAULT_MAX_FLIPS,
    DEFAULT_TOL,
    flip_to_delaunay,
    format_log,
    random_flips,
    tessellation_signature,
    voronoi_dual,
)
from .hull import hull_support_verify, load_orbit, orbit_generate
from .minkcore import CONE, CUSP
from .render import render_svg
from .surface import delaunay_report, load_surface, validate_surface

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_CONVERGED = 3
EXIT_USAGE = 64
EXIT_NOINPUT = 66

COMMANDS = ("validate", "check", "delaunay", "dual", "fan", "render", "hull-verify")
TYPE_NAMES = {CONE: "cone", CUSP: "cusp"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser():
    p = _Parser(prog="dechyp", description="Weighted Delaunay tessellations of decorated surfaces.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file")
    p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL, help="tilt-sum tolerance")
    p.add_argument("--max-flips", type=_positive_int, default=DEFAULT_MAX_FLIPS)
    p.add_argument("--samples", type=_positive_int, default=200, help="fan grid resolution")
    p.add_argument("--seed", type=int, default=0, help="seed for --scramble")
    p.add_argument("--scramble", type=int, default=0, metavar="N",
                   help="apply N random flips before running the flip algorithm")
    p.add_argument("--depth", type=int, default=None,
                   help="render layers (default 4) or orbit word length (default from file)")
    p.add_argument("-o", "--output", metavar="PATH")
    return p


def _type_name(eps):
    return TYPE_NAMES.get(eps, "flare")


def _block(pairs):
    return "\n".join(f"{k}: {v}" for k, v in pairs)


def _unsign(s):
    # never print a negative zero
    return s[1:] if s.startswith("-") and not s.strip("-0.e+") else s


def _f(x):
    return _unsign(f"{x:.12f}")


def _e(x):
    return _unsign(f"{x:.12e}")


class _Failure(Exception):
    def __init__(self, code, text):
        super().__init__(text)
        self.code = code
        self.text = text


def _require_valid(S, tol):
    report = validate_surface(S, tol=tol)
    if not report.ok:
        raise _Failure(EXIT_INVALID, _validation_text(S, report))
    return report


def _validation_text(S, report):
    blocks = [_block([
        ("vertices", S.n_vertices),
        ("edges", S.n_edges),
        ("triangles", S.n_triangles),
        ("euler_characteristic", report.euler_characteristic),
        ("valid", "yes" if report.ok else "no"),
    ])]
    for i, v in enumerate(S.vertices):
        blocks.append(_block([
            ("vertex", v.id),
            ("type", _type_name(v.type)),
            ("weight", _f(v.weight)),
            ("weight_ok", "yes" if report.weights_ok[i] else "no"),
            ("angle_total", _f(report.angle_totals[i])),
        ]))
    for t, ok, msg in report.triangles:
        pairs = [("triangle", t), ("valid", "yes" if ok else "no")]
        if msg:
            pairs.append(("reason", msg))
        blocks.append(_block(pairs))
    for c in report.properness:
        if not c.ok:
            blocks.append(_block([
                ("improper_edge", c.edge),
                ("weight", _f(c.lhs)),
                ("bound", _f(c.rhs)),
            ]))
    return "\n\n".join(blocks)


def _edge_blocks(S, omega, tol):
    blocks = []
    for r in delaunay_report(S, omega, tol):
        u, v = S.edge_endpoints(r.edge)
        blocks.append(_block([
            ("edge", r.edge),
            ("endpoints", f"{S.vertices[u].id} {S.vertices[v].id}"),
            ("length", _f(S.lengths[r.edge])),
            ("tilt_sum", _e(r.tilt_sum)),
            ("status", r.status.name.lower()),
        ]))
    return blocks


def _converge(S, args):
    if args.scramble:
        S = random_flips(S, args.scramble, np.random.default_rng(args.seed), tol=args.tol)
    try:
        return flip_to_delaunay(S, tol=args.tol, max_flips=args.max_flips)
    except MaxFlipsExceeded as exc:
        raise _Failure(EXIT_NOT_CONVERGED, _block([("status", "MaxFlips"), ("detail", str(exc))])) from None
    except ImproperDecoration as exc:
        raise _Failure(EXIT_INVALID, _block([("status", "Improper"), ("detail", str(exc))])) from None


def cmd_validate(S, args):
    report = validate_surface(S, tol=args.tol)
    return (EXIT_OK if report.ok else EXIT_INVALID), _validation_text(S, report)


def cmd_check(S, args):
    _require_valid(S, args.tol)
    blocks = _edge_blocks(S, S.weights, args.tol)
    violating = sum("status: violating" in b for b in blocks)
    head = _block([("delaunay", "no" if violating else "yes"), ("violating_edges", violating)])
    return EXIT_OK, "\n\n".join([head, *blocks])


def cmd_delaunay(S, args):
    _require_valid(S, args.tol)
    result = _converge(S, args)
    final = result.surface
    head = _block([
        ("status", result.reason),
        ("flips", result.flips),
        ("signature", tessellation_signature(final, tol=args.tol)),
    ])
    blocks = [head]
    if result.log:
        blocks.append(format_log(result.log))
    blocks.extend(_edge_blocks(final, result.omega, args.tol))
    blocks.append(final.dumps())
    return EXIT_OK, "\n\n".join(blocks)


def cmd_dual(S, args):
    _require_valid(S, args.tol)
    final = _converge(S, args).surface
    dual = voronoi_dual(final, tol=args.tol)
    blocks = [_block([
        ("dual_vertices", len(dual.vertices)),
        ("dual_edges", len(dual.edges)),
        ("dual_faces", dual.n_faces),
        ("euler_characteristic", dual.euler_characteristic()),
    ])]
    for v in dual.vertices:
        blocks.append(_block([
            ("dual_vertex", v.face),
            ("triangles", " ".join(map(str, v.triangles))),
            ("face_vector", " ".join(_f(x) for x in v.F)),
            ("norm2", _e(v.norm2)),
        ]))
    for d in dual.edges:
        blocks.append(_block([("dual_edge", d.edge), ("joins", f"{d.faces[0]} {d.faces[1]}")]))
    return EXIT_OK, "\n\n".join(blocks)


def cmd_fan(S, args):
    _require_valid(S, args.tol)
    try:
        report = fan_sample(S, args.samples, args.tol, args.max_flips)
    except MaxFlipsExceeded as exc:
        raise _Failure(EXIT_NOT_CONVERGED, _block([("status", "MaxFlips"), ("detail", str(exc))])) from None
    lines = [f"{report.n_maximal} distinct tessellations"]
    lines.append(_block([
        ("resolution", report.resolution),
        ("samples", report.samples),
        ("skipped_improper", report.skipped),
        ("signatures", report.n_signatures),
        ("maximal", report.n_maximal),
        ("max_cone_violation", _e(report.max_violation)),
        ("caveat", report.caveat),
    ]))
    for g in report.groups:
        lines.append(_block([
            ("signature", g.signature),
            ("samples", g.count),
            ("maximal", "yes" if g.maximal else "no"),
            ("bary_min", " ".join(f"{x:.6f}" for x in g.bary_min)),
            ("bary_max", " ".join(f"{x:.6f}" for x in g.bary_max)),
            ("max_cone_violation", _e(g.max_violation)),
        ]))
    return EXIT_OK, "\n\n".join(lines)


def cmd_render(S, args):
    _require_valid(S, args.tol)
    final = _converge(S, args).surface
    depth = 4 if args.depth is None else args.depth
    if depth < 1:
        raise UsageError("--depth must be at least 1")
    return EXIT_OK, render_svg(final, depth=depth, tol=args.tol).rstrip("\n")


def cmd_hull_verify(path, args):
    spec = load_orbit(path)
    depth = spec.depth if args.depth is None else args.depth
    if depth < 0:
        raise UsageError("--depth must be nonnegative")
    orbit = orbit_generate(spec.generators, spec.seeds, depth)
    report = hull_support_verify(spec.faces, orbit)
    blocks = [_block([
        ("result", report.summary()),
        ("faces", len(report.faces)),
        ("violations", len(report.violations)),
    ])]
    for i, f in enumerate(report.faces):
        blocks.append(_block([
            ("face", i),
            ("norm2", _e(f.norm2)),
            ("elliptic", "yes" if f.elliptic else "no"),
            ("max_product", _e(f.max_product)),
        ]))
    for v in report.violations:
        blocks.append(_block([("violation_face", v.face), ("cycle", v.cycle), ("product", _e(v.product))]))
    return (EXIT_OK if report.ok else EXIT_INVALID), "\n\n".join(blocks)


HANDLERS = {
    "validate": cmd_validate,
    "check": cmd_check,
    "delaunay": cmd_delaunay,
    "dual": cmd_dual,
    "fan": cmd_fan,
    "render": cmd_render,
}


def _emit(text, args, stream):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    else:
        stream.write(text + "\n")


def run_command(argv, stdout=None, stderr=None):
    """Run one command and return its exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(f"dechyp: usage error: {exc}\n")
        return EXIT_USAGE
    try:
        if args.command == "hull-verify":
            code, text = cmd_hull_verify(args.file, args)
        else:
            code, text = HANDLERS[args.command](load_surface(args.file), args)
    except OSError as exc:
        stderr.write(f"dechyp: cannot read {args.file}: {exc.strerror or exc}\n")
        return EXIT_NOINPUT
    except UsageError as exc:
        stderr.write(f"dechyp: usage error: {exc}\n")
        return EXIT_USAGE
    except _Failure as exc:
        code, text = exc.code, exc.text
    except NotConverged as exc:
        code, text = EXIT_NOT_CONVERGED, _block([("status", "NotConverged"), ("detail", str(exc))])
    except DecHypError as exc:
        code, text = EXIT_INVALID, _block([("error", type(exc).__name__), ("detail", str(exc))])
    try:
        _emit(text, args, stdout)
    except OSError as exc:
        stderr.write(f"dechyp: cannot write {args.output}: {exc.strerror or exc}\n")
        return EXIT_NOINPUT
    return code


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
