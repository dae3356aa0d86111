"""Command-line front end.

Exit status: 0 when every checked inequality holds, 2 when one fails (a
finding, not a crash), 3 when a quadrature misses its accuracy target or a
consistency check trips, 1 on usage and I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .boundary import jump_set
from .diffgeo import PolarGrid, nonpositivity_scan
from .errors import AccuracyError, HarmsurfError, NumericalConsistencyError
from .functionals import (
    area_estimate,
    isoperimetric_report,
    length_sweep,
    riesz_zygmund_sweep,
    sharpness_sweep,
)
from .limits import DEFAULT_LAMBDAS, DEFAULT_SCHEDULE, segment_sweep
from .mesh import obj_text
from .quadrature import DEFAULT_QUADRATURE
from .specs import dumps, load_surface
from .surfaces import BoundarySurface

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_ACCURACY = 0, 1, 2, 3

COMMANDS = ("extend", "lengths", "area", "isoperimetric", "riesz-zygmund", "curvature",
            "cluster", "sharpness", "mesh")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is reserved for violations here
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _points(text):
    try:
        return [complex(x.strip().replace(" ", "")) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated complex numbers like 0.3+0.1j, got {text!r}") from None


def _grid(text):
    try:
        nr, nt = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NRxNT, got {text!r}") from None
    return nr, nt


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="harmsurf", description="Experiments on harmonic surfaces over the unit disk.")
    p.add_argument("--version", action="version", version=f"harmsurf {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", default="builtin:identity",
                   help="builtin:NAME (identity, square, triangle, tilted:M, enneper, saddle, "
                        "random-fourier, random-weierstrass) or a JSON surface file")
    p.add_argument("--output-dir", type=Path, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--angular-nodes", type=int, default=DEFAULT_QUADRATURE.angular_nodes)
    p.add_argument("--radial-nodes", type=int, default=DEFAULT_QUADRATURE.radial_nodes)
    p.add_argument("--tol", type=float, default=DEFAULT_QUADRATURE.abs_tol,
                   help="quadrature accuracy target")
    p.add_argument("--seed", type=int, help="seed for random builtins")
    p.add_argument("--radii", type=_floats, default=[0.9, 0.99, 0.999])
    p.add_argument("--radius", type=float, default=1.0, help="sub-disk radius for area/isoperimetric")
    p.add_argument("--m", type=_floats, default=[0.0, 1.0, 10.0, 100.0, 1000.0])
    p.add_argument("--lambda", dest="lambdas", type=_floats, default=list(DEFAULT_LAMBDAS))
    p.add_argument("--R", dest="schedule", type=_floats, default=list(DEFAULT_SCHEDULE))
    p.add_argument("--angle", type=float, help="cluster probe anchor when the data has no jumps")
    p.add_argument("--cluster-tol", type=float, default=1e-3)
    p.add_argument("--points", type=_points, default=[0j, 0.5, 0.5j])
    p.add_argument("--directions", type=int, default=32)
    p.add_argument("--grid", type=_grid, help="polar grid NRxNT (curvature: 32x32, mesh: 32x64)")
    return p


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating, int, np.integer))
                    and not isinstance(x, (bool, np.bool_)) else str(x).lower() for x in row])
    return buf.getvalue()


def _run_extend(args, s, q):
    z = np.array(args.points, dtype=complex)
    values = s.value(z)
    report = {"points": [[p.real, p.imag] for p in z], "values": values}
    rows = [(p.real, p.imag, *v) for p, v in zip(z, values)]
    header = ["x", "y"] + [f"f{i}" for i in range(s.dimension)]
    return report, _csv(header, rows), True


def _run_lengths(args, s, q):
    sweep = length_sweep(s, args.radii, q)
    ok = sweep.tv_reference is None or all(
        x <= sweep.tv_reference + 10 * q.tolerance(sweep.tv_reference) for x in sweep.lengths)
    return sweep.to_dict(), sweep.to_csv(), ok


def _run_area(args, s, q):
    value, err = area_estimate(s, args.radius, q)
    report = {"radius": args.radius, "area": value, "error_estimate": err}
    return report, _csv(["r", "area", "error_estimate"], [(args.radius, value, err)]), True


def _run_isoperimetric(args, s, q):
    rep = isoperimetric_report(s, q, None if args.radius == 1 else args.radius)
    d = rep.to_dict()
    cols = ["name", "lhs", "rhs", "deficit", "error_estimate", "satisfied"]
    return d, _csv(cols, [[d[c] for c in cols]]), rep.satisfied


def _run_riesz_zygmund(args, s, q):
    reports = riesz_zygmund_sweep(s, args.directions, q)
    rows = [(r.details["direction"], r.lhs, r.rhs, r.deficit, r.details["ratio"] or 0.0,
             r.error_estimate, r.satisfied) for r in reports]
    max_ratio = max((r.details["ratio"] or 0.0) for r in reports)
    out = {"reports": [r.to_dict() for r in reports], "max_ratio": max_ratio}
    cols = ["direction", "lhs", "rhs", "deficit", "ratio", "error_estimate", "satisfied"]
    return out, _csv(cols, rows), all(r.satisfied for r in reports)


def _run_curvature(args, s, q):
    nr, nt = args.grid or (32, 32)
    r_max = 1.0 if s.extends_to_closure else 0.95
    scan = nonpositivity_scan(s, PolarGrid(nr, nt, min(r_max, 0.999)))
    return scan.to_dict(), scan.to_csv(), scan.satisfied


def _run_cluster(args, s, q):
    if not isinstance(s, BoundarySurface):
        raise UsageError("cluster needs a surface given by boundary data")
    targets = jump_set(s.boundary)
    if not targets:
        targets = [args.angle if args.angle is not None else 0.0]
    sweeps = [segment_sweep(s, j, args.lambdas, args.schedule) for j in targets]
    ok = all(sw.satisfied(args.cluster_tol) for sw in sweeps)
    header = None
    body = []
    for sw in sweeps:
        text = sw.to_csv().splitlines()
        header = header or text[0]
        body += text[1:]
    return {"sweeps": [sw.to_dict() for sw in sweeps], "tolerance": args.cluster_tol}, \
        "\n".join([header] + body) + "\n", ok


def _run_sharpness(args, s, q):
    table = sharpness_sweep(args.m, q)
    return table.to_dict(), table.to_csv(), table.monotone and table.bounded


_RUNNERS = {
    "extend": _run_extend,
    "lengths": _run_lengths,
    "area": _run_area,
    "isoperimetric": _run_isoperimetric,
    "riesz-zygmund": _run_riesz_zygmund,
    "curvature": _run_curvature,
    "cluster": _run_cluster,
    "sharpness": _run_sharpness,
}


def _emit(args, name, text):
    if args.output_dir is None:
        sys.stdout.write(text)
        return None
    args.output_dir.mkdir(parents=True, exist_ok=True)
    path = args.output_dir / name
    path.write_text(text)
    return path


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        q = DEFAULT_QUADRATURE.replace(angular_nodes=args.angular_nodes,
                                       radial_nodes=args.radial_nodes, abs_tol=args.tol)
        needs_surface = args.command != "sharpness"
        s = load_surface(args.input, q, args.seed) if needs_surface else None
        if args.command == "mesh":
            nr, nt = args.grid or (32, 64)
            r_max = 1.0 if s.extends_to_closure else 0.999
            path = _emit(args, f"{s.name.replace(':', '_')}.obj", obj_text(s, PolarGrid(nr, nt, r_max)))
            if path is not None:
                print(f"wrote {path}")
            return EXIT_OK
        report, table, ok = _RUNNERS[args.command](args, s, q)
        if args.format == "json":
            doc = {"command": args.command, "input": args.input, "quadrature": q.to_dict(),
                   "surface": None if s is None else s.name, "satisfied": ok, "report": report}
            path = _emit(args, f"{args.command}.json", dumps(doc))
        else:
            path = _emit(args, f"{args.command}.csv", table)
        if path is not None:
            print(f"wrote {path}")
        if not ok:
            print(f"VIOLATION: {args.command} check failed for {args.input}", file=sys.stderr)
            return EXIT_VIOLATION
        return EXIT_OK
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (AccuracyError, NumericalConsistencyError) as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except (HarmsurfError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(argv))
