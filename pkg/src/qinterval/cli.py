"""Command-line front end.

Exit codes: 0 on success, 1 on usage errors, 2 when a certified value could
not be produced (or a verification suite failed).

Examples
--------
$ qinterval metric --q 0.5 --from 0 --to 1
$ qinterval metric --q 0.5 --from 0 --to zero --tol 1e-10
$ qinterval sweep --q 0.9,0.99,0.999 --out sweep.csv
$ qinterval sweep --start 0.9 --end 0.9999 --count 8 --spacing log-complement --format json
$ qinterval verify --seed 0 --trials 50
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QIntervalError, ToleranceUnreachable
from .ghdist import convergence_certificate
from .qcore import ZERO, QParam, QPoint, diameter_bounds, dq, inv_rho
from .verification import run_all

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TOLERANCE = 2

SWEEP_FIELDS = ("q", "d01", "d01_radius", "diam_lower", "diam_upper", "mesh", "hdist_to_interval")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    """17 significant digits, so CSV round-trips are lossless."""
    return f"{x:.17g}"


@dataclass(frozen=True)
class SweepConfig:
    q_values: tuple[float, ...]
    tol: float = 1e-10
    depth: int | None = None
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if not self.q_values:
            raise UsageError("sweep needs at least one q value")
        for q in self.q_values:
            if not 0.0 < q < 1.0:
                raise UsageError(f"every q must lie in (0, 1), got {q!r}")
        if not self.tol > 0:
            raise UsageError(f"--tol must be positive, got {self.tol!r}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")

    @staticmethod
    def grid(start: float, end: float, count: int, spacing: str = "linear") -> tuple[float, ...]:
        """``count`` values from ``start`` to ``end``; ``log-complement`` spaces ``1 - q`` logarithmically."""
        if count < 1:
            raise UsageError(f"--count must be at least 1, got {count}")
        if not (0.0 < start < 1.0 and 0.0 < end < 1.0):
            raise UsageError("--start and --end must lie in (0, 1)")
        if spacing == "linear":
            vals = np.linspace(start, end, count)
        elif spacing == "log-complement":
            vals = 1.0 - np.geomspace(1.0 - start, 1.0 - end, count)
        else:
            raise UsageError(f"unknown spacing {spacing!r}")
        return tuple(float(v) for v in vals)


def sweep_row(q: float, tol: float, depth: int | None = None) -> dict:
    qp = QParam(q)
    d01 = dq(qp, QPoint(0), ZERO, tol)
    lower, upper = diameter_bounds(qp)
    cert = convergence_certificate(qp, tol, depth)
    return {
        "q": qp.q,
        "d01": d01.value,
        "d01_radius": d01.radius,
        "diam_lower": lower,
        "diam_upper": upper,
        "mesh": inv_rho(qp, 0),
        "hdist_to_interval": cert.hdist.value,
    }


def run_sweep(config: SweepConfig) -> tuple[list[dict], list[str]]:
    """Rows ordered by q; failed rows are kept with NaN fields and reported in the second list."""
    rows, failures = [], []
    for q in sorted(config.q_values):
        try:
            rows.append(sweep_row(q, config.tol, config.depth))
        except ToleranceUnreachable as exc:
            failures.append(f"q={fmt(q)}: {exc}")
            rows.append({"q": q, **{k: math.nan for k in SWEEP_FIELDS[1:]}})
    return rows, failures


def render_rows(rows: list[dict], fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps([{k: r[k] for k in SWEEP_FIELDS} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_FIELDS)
    for r in rows:
        writer.writerow([fmt(r[k]) for k in SWEEP_FIELDS])
    return buf.getvalue()


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_metric(args) -> int:
    qp = QParam(args.q)
    x, y = QPoint.parse(args.source), QPoint.parse(args.target)
    val = dq(qp, x, y, args.tol)
    if args.format == "json":
        out = json.dumps({"q": qp.q, "from": str(x), "to": str(y), "value": val.value, "radius": val.radius})
    else:
        out = f"{fmt(val.value)} +/- {fmt(val.radius)}"
    _emit(out + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.q is not None:
        if args.start is not None or args.end is not None:
            raise UsageError("give either --q or --start/--end, not both")
        try:
            qs = tuple(float(v) for v in args.q.split(","))
        except ValueError:
            raise UsageError(f"cannot parse --q {args.q!r}") from None
    elif args.start is not None and args.end is not None:
        qs = SweepConfig.grid(args.start, args.end, args.count, args.spacing)
    else:
        raise UsageError("sweep needs --q or both --start and --end")
    config = SweepConfig(qs, args.tol, args.depth, args.out, args.format)
    rows, failures = run_sweep(config)
    _emit(render_rows(rows, config.format), config.output)
    for msg in failures:
        print(f"row failed: {msg}", file=sys.stderr)
    return EXIT_TOLERANCE if failures else EXIT_OK


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError(f"--trials must be at least 1, got {args.trials}")
    results = run_all(args.seed, args.trials)
    lines = [r.line() for r in results]
    ok = all(r.passed for r in results)
    lines.append(f"{'ALL PASS' if ok else 'SOME FAILED'} seed={args.seed} trials={args.trials}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_TOLERANCE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qinterval", description="Metric geometry of the quantised interval X_q.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("metric", help="certified distance d_q between two points")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--from", dest="source", required=True, help="index k (point q^(2k)) or 'zero'")
    p.add_argument("--to", dest="target", required=True, help="index k or 'zero'")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--out")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("sweep", help="diameter and convergence data over a range of q")
    p.add_argument("--q", help="comma-separated q values")
    p.add_argument("--start", type=float)
    p.add_argument("--end", type=float)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--spacing", choices=("linear", "log-complement"), default="linear")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--depth", type=int, help="minimum truncation depth for the Hausdorff computation")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the randomised oracle cross-checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ToleranceUnreachable as exc:
        print(f"qinterval: tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except (UsageError, DomainError, QIntervalError, ValueError) as exc:
        print(f"qinterval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
