"""Command-line front end: moments | carleson | apply | verify | sweep.

Exit codes: 0 success (verdicts are data), 2 usage error, 3 input-parse
error, 4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .analyzer import DEFAULT_ANALYSIS, MODES, SWEEP_COLUMNS, sweep
from .measures import MeasureSpec, SpecError, carleson_report, moments
from .operator import (
    DEFAULT_Z_GRID,
    OperatorConfig,
    apply_hankel,
    apply_integral,
    hankel_matrix,
)
from .quadrature import DEFAULT_QUAD, QuadratureError
from .spaces import DEFAULT_GRID, PowerSeries, evaluate

EXIT_USAGE, EXIT_PARSE, EXIT_NUMERIC = 2, 3, 4


class InputError(Exception):
    """Unreadable or malformed input file."""


def fmt(value: Any) -> str:
    """Fixed CSV cell formatting: 15 significant digits, lowercase booleans."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".15g")
    return str(value)


def header(**extra: Any) -> dict:
    """Run defaults, written into every report."""
    h = {
        "tool": f"genhilbert {__version__}",
        "N": 1024,
        "depth": DEFAULT_ANALYSIS.depth,
        "quad_tol": DEFAULT_QUAD.tol,
        "quad_nodes": DEFAULT_QUAD.nodes,
        "quad_max_panels": DEFAULT_QUAD.max_panels,
        "radii": "1-2^-j,j=1..20",
        "bergman_radial_nodes": DEFAULT_GRID.bergman_radial_nodes,
        "pairing_a": "1-2^-j,j=1..12",
    }
    h.update(extra)
    return h


def render_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]], head: dict) -> str:
    buf = io.StringIO()
    for key, val in head.items():
        buf.write(f"# {key}={fmt(val)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def render_json(payload: dict, head: dict) -> str:
    return json.dumps({"header": head, **payload}, indent=2, sort_keys=False) + "\n"


def emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def load_measure(path: str) -> MeasureSpec:
    try:
        return MeasureSpec.from_json(_read(path))
    except SpecError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_series(path: str) -> PowerSeries:
    try:
        return PowerSeries.from_json(_read(path), label=Path(path).stem)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def parse_z(text: str) -> complex:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from None
    return complex(x, y)


def parse_q(text: str) -> float | None:
    if text.lower() == "bloch":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"q must be a number or 'bloch', got {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_moments(args) -> int:
    m = load_measure(args.measure)
    mom = moments(m, args.n)
    head = header(measure=m.label)
    if args.format == "json":
        emit(render_json({"moments": mom.tolist()}, head), args.output)
    else:
        emit(render_csv(["n", "moment"], list(enumerate(mom.tolist())), head), args.output)
    return 0


def cmd_carleson(args) -> int:
    m = load_measure(args.measure)
    rep = carleson_report(m, args.a, args.s, args.depth)
    head = header(measure=m.label, a=args.a, s=args.s, depth=args.depth,
                  constant=rep.constant, argmax_t=rep.argmax_t,
                  divergent=rep.divergent, vanishing=rep.vanishing)
    if args.format == "json":
        emit(render_json({"report": rep.to_dict()}, head), args.output)
    else:
        emit(render_csv(["j", "t", "quotient"], rep.rows(), head), args.output)
    return 0


def cmd_apply(args) -> int:
    m = load_measure(args.measure)
    f = load_series(args.f)
    zs = [args.z] if args.z is not None else list(DEFAULT_Z_GRID)
    if any(abs(z) >= 1 for z in zs):
        raise ValueError("z must lie in the open unit disk")
    cfg = OperatorConfig(args.alpha, N=max(args.N, f.order))
    hf = apply_hankel(hankel_matrix(m, cfg), f)
    hv = np.atleast_1d(evaluate(hf, np.array(zs)))
    iv = np.atleast_1d(apply_integral(m, args.alpha, f, np.array(zs)))
    rows = [
        (z.real, z.imag, h.real, h.imag, i.real, i.imag, abs(h - i))
        for z, h, i in zip(zs, hv, iv)
    ]
    head = header(measure=m.label, series=f.label, alpha=args.alpha, N=cfg.N)
    cols = ["z_re", "z_im", "H_re", "H_im", "I_re", "I_im", "abs_diff"]
    if args.format == "json":
        emit(render_json({"rows": [dict(zip(cols, r)) for r in rows]}, head), args.output)
    else:
        emit(render_csv(cols, rows, head), args.output)
    return 0


def cmd_verify(args) -> int:
    m = load_measure(args.measure)
    rep = MODES[args.mode](m, args.p, args.q, args.alpha)
    if args.plot_data:
        emit(render_csv(["a", "phi"], rep.pairing_values, header(measure=m.label)),
             args.plot_data)
    head = header(measure=m.label)
    if args.format == "json":
        emit(render_json({"verdict": rep.to_dict()}, head), args.output)
    else:
        row = [m.label, rep.p, "bloch" if rep.q is None else rep.q, rep.alpha, rep.mode,
               rep.branch, rep.verdict,
               None if rep.carleson is None else rep.carleson.constant,
               None if rep.carleson is None else rep.carleson.divergent,
               None if rep.carleson is None else rep.carleson.vanishing,
               None if rep.carleson is None else rep.fitted_slope,
               "; ".join(rep.notes)]
        cols = ["family", "p", "q", "alpha", "mode", "branch", "verdict", "constant",
                "divergent", "vanishing", "fitted_slope", "notes"]
        emit(render_csv(cols, [row], head), args.output)
    return 0


def bundled_config_path():
    return resources.files("genhilbert") / "data" / "sweep_default.json"


def load_sweep_config(path: str | None) -> tuple[list[MeasureSpec], list[dict], str]:
    if path is None:
        text = bundled_config_path().read_text(encoding="utf-8")
        base = None
        where = "bundled sweep config"
    else:
        text = _read(path)
        base = Path(path).parent
        where = path
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise InputError(f"{where}: expected a JSON object")
    families = []
    for i, item in enumerate(cfg.get("families", [])):
        try:
            if isinstance(item, str):
                p = Path(item)
                if base is not None and not p.is_absolute():
                    p = base / p
                families.append(MeasureSpec.from_json(_read(str(p))))
            else:
                families.append(MeasureSpec.from_dict(item))
        except SpecError as exc:
            raise InputError(f"{where}: families[{i}]: {exc}") from exc
    params = cfg.get("params", [])
    if not isinstance(params, list) or not all(isinstance(p, dict) for p in params):
        raise InputError(f"{where}: params must be a list of {{p, q, alpha}} objects")
    mode = cfg.get("mode", "classify")
    if mode not in MODES:
        raise InputError(f"{where}: mode must be one of {sorted(MODES)}, got {mode!r}")
    return families, params, mode


def cmd_sweep(args) -> int:
    families, params, mode = load_sweep_config(args.config)
    rows = sweep(families, params, mode, workers=args.workers)
    head = header(config=args.config or "bundled", mode=mode)
    if args.format == "json":
        text = render_json({"rows": rows}, head)
    else:
        text = render_csv(SWEEP_COLUMNS, [[r[c] for c in SWEEP_COLUMNS] for r in rows], head)
    emit(text, args.output)
    counts: dict[str, int] = {}
    for r in rows:
        key = r["verdict"] or "error"
        counts[key] = counts.get(key, 0) + 1
    summary = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    # keep stdout clean when the table itself goes there
    stream = sys.stdout if args.output else sys.stderr
    print(f"{len(rows)} cells: {summary}", file=stream)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genhilbert",
        description="Generalized Hilbert operators: moments, Carleson tests, verdicts.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; every computation is deterministic")

    p = sub.add_parser("moments", help="moments mu_n, n = 0..MAX")
    p.add_argument("measure")
    p.add_argument("--n", type=int, required=True, metavar="MAX")
    common(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("carleson", help="a-logarithmic s-Carleson quotient profile")
    p.add_argument("measure")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--depth", type=int, default=40)
    common(p)
    p.set_defaults(func=cmd_carleson)

    p = sub.add_parser("apply", help="compare the Hankel series and the integral operator")
    p.add_argument("measure")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--f", required=True, help="coefficient file: JSON array of [re, im]")
    where = p.add_mutually_exclusive_group()
    where.add_argument("--z", type=parse_z, default=None, metavar="X,Y")
    where.add_argument("--grid", action="store_true",
                       help="|z| in {0.3, 0.5, 0.7} x 8 angles (default)")
    p.add_argument("--N", type=int, default=1024)
    common(p)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("verify", help="boundedness / compactness verdict")
    p.add_argument("measure")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=parse_q, required=True, help="number or 'bloch'")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--mode", choices=sorted(MODES), default="bounded")
    p.add_argument("--plot-data", default=None, metavar="FILE",
                   help="write the (a, Phi(a)) series as CSV")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="verdict table over measure families x parameters")
    p.add_argument("config", nargs="?", default=None,
                   help="sweep config JSON (default: bundled config)")
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
