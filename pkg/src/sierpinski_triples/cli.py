"""Command-line entry point: ``sierpinski-triples <subcommand> ...``.

Reports go to stdout as JSON (or CSV for bulk dumps) unless ``--out`` is
given.  Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import graphs, pairing, spectrum, topology, trace, verification
from .graphs import CapExceeded
from .holes import HoleFunction
from .pairing import AxisTestFunction, RationalTestFunction
from .spectrum import TripleSpec
from .topology import Orientation, TriAddress

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- input helpers --------------------------------------------------------


def _read_json(source: str) -> tuple[dict, str]:
    """JSON from a file path or an inline document, with a sha256 digest."""
    text = source if source.lstrip().startswith(("{", "[", '"')) else None
    if text is None:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {source}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {source}: {exc}") from None
    return data, hashlib.sha256(text.encode()).hexdigest()


def load_spec(source: str) -> tuple[TripleSpec, str]:
    """A spec file, inline JSON, or one of the names ``ZGT``/``ZPT``."""
    if source.upper() in ("ZGT", "ZPT"):
        return TripleSpec.from_json({"kind": source.upper()}), source.upper()
    data, digest = _read_json(source)
    try:
        return TripleSpec.from_json(data), digest
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad spec: {exc}") from None


def load_test_function(source: str):
    data, digest = _read_json(source)
    try:
        if "poles" in data:
            return RationalTestFunction.from_json(data), digest
        return AxisTestFunction(tuple(data["point"]), tuple(data["direction"]), int(data.get("power", 1))), digest
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad test function: {exc}") from None


def parse_address(text: str, orient: Orientation) -> TriAddress:
    """``{"orient":..,"level":..,"path":[..]}`` or ``"level digits"`` such as ``"2 01"``."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return TriAddress.from_json(json.loads(text))
        parts = text.split()
        level = int(parts[0])
        digits = [int(c) for c in parts[1]] if len(parts) > 1 else []
        return TriAddress.up(level, digits) if orient is Orientation.UP else TriAddress.down(level, digits)
    except (ValueError, IndexError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad address {text!r}: {exc}") from None


def _jsonable(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def emit(args, payload) -> None:
    """Write a JSON report or CSV rows to ``--out`` or stdout."""
    if isinstance(payload, str):
        text = payload
    else:
        text = json.dumps(_jsonable(payload), indent=2, sort_keys=False) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- subcommands ----------------------------------------------------------


def cmd_topology(args) -> int:
    if args.action == "enumerate":
        if args.down:
            addrs = topology.enumerate_holes(args.max_level)
        else:
            addrs = [a for n in range(args.max_level + 1) for a in topology.enumerate_up(n)]
        items = [{**a.to_json(), "vertices": [list(v.coords()) for v in topology.triangle(a).vertices]}
                 for a in addrs]
        emit(args, {"schema": "topology-enumerate/1", "max_level": args.max_level, "count": len(items),
                    "triangles": [_jsonable(i) for i in items]})
    else:
        if args.up is None or args.down_addr is None:
            raise UsageError("contains needs --up and --down")
        up = parse_address(args.up, Orientation.UP)
        down = parse_address(args.down_addr, Orientation.DOWN)
        emit(args, {"schema": "topology-contains/1", "up": up.to_json(), "down": down.to_json(),
                    "contains": topology.contains(up, down)})
    return EXIT_OK


def cmd_zeta(args) -> int:
    spec, digest = load_spec(args.spec)
    report = {"schema": "zeta/1", "spec_digest": digest, "s": args.s,
              "closed": spectrum.zeta_closed(spec, args.s)}
    if args.direct:
        d = spectrum.zeta_direct(spec, args.s, args.eps)
        report["direct"] = {"value": d.value, "tail_bound": d.tail_bound, "eps": d.eps,
                            "achieved": d.achieved, "max_level": d.max_level, "J": d.J}
        report["agree"] = abs(d.value - report["closed"]) <= d.tail_bound
        report["tolerance"] = "tail_bound"
        report["oracle"] = "closed form"
        emit(args, report)
        return EXIT_OK if report["agree"] else EXIT_FAIL
    report["value"] = report["closed"]
    emit(args, report)
    return EXIT_OK


def cmd_residue(args) -> int:
    spec, digest = load_spec(args.spec)
    r = spectrum.dixmier_residue(spec)
    emit(args, {"schema": "residue/1", "spec_digest": digest, "dimension": r.dimension,
                "estimate": r.estimate, "closed": r.closed,
                "richardson_steps": [list(s) for s in r.steps]})
    return EXIT_OK


def cmd_spectrum(args) -> int:
    spec, _ = load_spec(args.spec)
    eig = spectrum.eigenvalues(spec, args.count)
    emit(args, _csv(["eigenvalue", "multiplicity", "level"], ((str(e.value), e.multiplicity, e.level) for e in eig)))
    return EXIT_OK


def cmd_classify(args) -> int:
    data, digest = _read_json(args.f)
    try:
        f = HoleFunction.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad hole function: {exc}") from None
    emit(args, {"schema": "classify/1", "f_digest": digest, **f.classify()})
    return EXIT_OK


def cmd_pairing(args) -> int:
    spec, sd = load_spec(args.spec)
    u, ud = load_test_function(args.u)
    value = pairing.index_pairing(spec, u, args.depth, args.method)
    emit(args, {"schema": "pairing/1", "spec_digest": sd, "u_digest": ud, "depth": args.depth,
                "method": args.method, "value": value})
    return EXIT_OK


def cmd_distance(args) -> int:
    try:
        x, y = graphs.parse_point(args.x), graphs.parse_point(args.y)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    g = graphs.build_graph(args.kind, args.n)
    try:
        d = graphs.graph_distance(g, x, y)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    emit(args, {"schema": "distance/1", "graph": g.summary(), "x": graphs.format_point(x),
                "y": graphs.format_point(y), "distance": d, "units": "side length s",
                "distance_float": float(d)})
    return EXIT_OK


def cmd_metric_check(args) -> int:
    rep = graphs.metric_bounds_check(args.n, args.samples, args.seed)
    emit(args, rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_trace(args) -> int:
    spec, _ = load_spec(args.spec)
    curve = trace.partial_trace_curve(spec, args.region, args.N)
    rows = [(p.N, repr(p.sigma_N), repr(p.estimate)) for p in curve]
    emit(args, _csv(["N", "sigma_N", "sigma_over_logN"], rows))
    return EXIT_OK


def cmd_scaling_check(args) -> int:
    spec, digest = load_spec(args.spec)
    rep = trace.scaling_check(spec, args.n, args.N)
    rep["spec_digest"] = digest
    rep["tolerance"] = args.tol
    rep["oracle"] = "3^-n"
    rep["passed"] = rep["max_relative_deviation"] <= args.tol
    emit(args, rep)
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def cmd_example_313(args) -> int:
    reps = [trace.example_313(N) for N in args.N]
    out = {"schema": "example-313/1", "reports": reps}
    if len(reps) >= 2:
        g0, g1 = reps[0]["gap"], reps[-1]["gap"]
        out["gap_relative_change"] = abs(g1 - g0) / abs(g0)
    emit(args, out)
    return EXIT_OK


def cmd_verify_all(args) -> int:
    t0 = time.perf_counter()
    results = verification.run_all(quick=args.quick)
    for r in results:
        print(r.line(), file=sys.stderr)
    report = {
        "schema": "run-report/1",
        "command": ["verify-all"] + (["--quick"] if args.quick else []),
        "quick": args.quick,
        "checks": [r.to_json() for r in results],
        "passed": all(r.passed for r in results),
        "wall_seconds": time.perf_counter() - t0,
    }
    emit(args, report)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# -- parser ---------------------------------------------------------------


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--threads", type=_positive_int, default=1,
                        help="accepted for interface stability; computations run single-threaded")

    p = argparse.ArgumentParser(prog="sierpinski-triples",
                                description="Spectral triples on the Sierpinski gasket and pyramid.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("topology", cmd_topology, "Enumerate triangles of the gasket or test up/down containment.")
    sp.add_argument("action", choices=["enumerate", "contains"])
    sp.add_argument("--max-level", type=int, default=2)
    sp.add_argument("--down", nargs="?", const=True, default=None, dest="down_flag",
                    help="enumerate: list holes (down triangles); contains: the hole address")
    sp.add_argument("--up", help='up triangle address: JSON or "level digits", e.g. "1 0"')

    sp = add("zeta", cmd_zeta, "Spectral zeta function: closed form, optionally the certified direct sum.")
    sp.add_argument("--spec", required=True, help="spec JSON file, inline JSON, or ZGT/ZPT")
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--direct", action="store_true", help="also sum the eigenvalues directly")
    sp.add_argument("--eps", type=float, default=1e-8, help="target bracket width of the direct sum")

    sp = add("residue", cmd_residue, "Residue lim (x-1) zeta(x d) at the metric dimension d.")
    sp.add_argument("--spec", required=True)

    sp = add("spectrum", cmd_spectrum, "Smallest distinct |D| eigenvalues as CSV.")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--count", type=_positive_int, default=20)

    sp = add("classify", cmd_classify, "Summability, bounded almost invariance and c_1 membership of a hole function.")
    sp.add_argument("--f", required=True, help="hole function JSON")

    sp = add("pairing", cmd_pairing, "Integer index pairing of a triple with a test function.")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--u", required=True, help='{"poles": [...]} for the gasket, {"point","direction"} for the pyramid')
    sp.add_argument("--depth", type=int, default=12)
    sp.add_argument("--method", choices=["fast", "brute"], default="fast")

    sp = add("distance", cmd_distance, "Exact geodesic distance in a graph approximant, in units of s.")
    sp.add_argument("--kind", choices=["G", "H"], default="H")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--x", required=True, help='"A", "edge-point L 1/4", or "lattice a b n"')
    sp.add_argument("--y", required=True)

    sp = add("metric-check", cmd_metric_check, "Sandwich bounds between d_G, d_H and Euclidean distance.")
    sp.add_argument("--n", type=_positive_int, default=7)
    sp.add_argument("--samples", type=_positive_int, default=200)
    sp.add_argument("--seed", type=int, default=42)

    sp = add("trace", cmd_trace, "Partial traces sigma_N at powers of 2 as CSV.")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--region", default="all", help='"all", "holes", "residual n" or "F n j"')
    sp.add_argument("--N", type=_positive_int, default=10**5)

    sp = add("scaling-check", cmd_scaling_check, "Level-n cell shares of the partial trace against 3^-n.")
    sp.add_argument("--spec", default="ZGT")
    sp.add_argument("--n", type=_positive_int, default=1)
    sp.add_argument("--N", type=_positive_int, default=10**6)
    sp.add_argument("--tol", type=float, default=0.02, help="relative tolerance (default 0.02)")

    sp = add("example-313", cmd_example_313, "Cell shares of the worked non-invariant example h = f + g.")
    sp.add_argument("--N", type=_positive_int, nargs="+", default=[10**5, 10**6])

    sp = add("verify-all", cmd_verify_all, "Run every acceptance check; exit 1 if any fails.")
    sp.add_argument("--quick", action="store_true", help="reduced sample sizes and levels")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "topology":
        args.down = args.down_flag is True
        args.down_addr = args.down_flag if isinstance(args.down_flag, str) else None
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, trace.NotApplicable, spectrum.PoleOrderError, pairing.BoundaryPoleError,
            ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
