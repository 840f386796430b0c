"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or precondition error.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass
from fractions import Fraction
import io
import os
import sys

import numpy as np

from . import discretized as dz
from .bounds import Problem, best_upper, m_closed_form, m_of, verify_theorem1
from .brascamplieb import bl_constant, describe_subspace, load_bl_config
from .errors import ConditionError
from .lowerbounds import best_lower, sweep
from .ratmath import format_rational, to_rational

MAX_GRID = 100
MAX_VERIFY_N = 16

# gap buckets; index 0 is reserved for exact (gap 0) cells
PALETTE = (
    "#1a9850", "#66bd63", "#a6d96a", "#d9ef8b", "#ffffbf", "#fee08b",
    "#fdae61", "#f46d43", "#d73027", "#a50026", "#67001f", "#40004b",
)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    out: str = None
    format: str = "text"
    seed: int = 0


def _rat(text):
    try:
        return to_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _problem(n, k):
    try:
        return Problem(n, k)
    except ValueError as exc:
        raise ConditionError(str(exc))


def _threads():
    try:
        return max(1, int(os.environ.get("EXPROJ_THREADS", "1")))
    except ValueError:
        return 1


def _emit(cfg, text):
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(x):
    return format_rational(x) if isinstance(x, (int, Fraction)) else str(x)


def cmd_bounds(args, cfg):
    prob = _problem(args.n, args.k)
    up = best_upper(prob, args.a, args.s)
    lo = best_lower(prob, args.a, args.s)
    gap = up.value - lo.value
    if cfg.format == "csv":
        _emit(cfg, _csv_text(["n", "k", "a", "s", "upper", "upper_source", "lower", "lower_source", "gap"],
                             [[prob.n, prob.k, _fmt(args.a), _fmt(args.s), _fmt(up.value), up.source,
                               _fmt(lo.value), lo.source, _fmt(gap)]]))
    else:
        _emit(cfg, f"upper {up}\nlower {lo}\ngap {_fmt(gap)}\n")
    return 0


def _region_rows(job):
    n, k, a, grid = job
    prob = Problem(n, k)
    s_grid = [Fraction(j, grid) for j in range(1, k * grid)]
    return [(p.a, p.s, p.upper, p.lower) for p in sweep(prob, [a], s_grid)]


def region_points(prob, grid):
    a_grid = [Fraction(i, grid) for i in range(1, prob.n * grid)]
    jobs = [(prob.n, prob.k, a, grid) for a in a_grid]
    threads = _threads()
    if threads > 1:
        with ProcessPoolExecutor(threads) as ex:
            chunks = list(ex.map(_region_rows, jobs))
    else:
        chunks = [_region_rows(j) for j in jobs]
    return [row for chunk in chunks for row in chunk]


def region_svg(prob, grid, points, cell=6):
    """Flat heatmap: x = a, y = s, colour = gap bucket."""
    w, h = prob.n * grid * cell, prob.k * grid * cell
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
           f'<rect width="{w}" height="{h}" fill="#ffffff"/>']
    for a, s, up, lo in points:
        gap = up.value - lo.value
        idx = 0 if gap == 0 else 1 + min(10, int(gap * 10 / prob.gdim))
        x = int(a * grid) * cell - cell // 2
        y = h - int(s * grid) * cell - cell // 2
        out.append(f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{PALETTE[idx]}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_region(args, cfg):
    if not 1 <= args.grid <= MAX_GRID:
        raise UsageError(f"1 <= grid <= {MAX_GRID} fails (grid={args.grid})")
    prob = _problem(args.n, args.k)
    pts = region_points(prob, args.grid)
    rows = [[_fmt(a), _fmt(s), _fmt(up.value), up.source, _fmt(lo.value), lo.source,
             _fmt(up.value - lo.value), int(up.value == lo.value)] for a, s, up, lo in pts]
    max_gap = max((up.value - lo.value for _, _, up, lo in pts), default=Fraction(0))
    n_exact = sum(r[-1] for r in rows)
    summary = f"points {len(rows)}  exact {n_exact}  max gap {_fmt(max_gap)}\n"
    if cfg.format == "svg":
        _emit(cfg, region_svg(prob, args.grid, pts))
        sys.stderr.write(summary)
    elif cfg.format == "csv" or cfg.out:
        _emit(cfg, _csv_text(["a", "s", "upper", "upper_source", "lower", "lower_source", "gap", "exact"], rows))
        (sys.stdout if cfg.out else sys.stderr).write(summary)
    else:
        sys.stdout.write(summary)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(region_svg(prob, args.grid, pts))
    return 0


def closed_form_suite(prob):
    """(u, l, scan, closed) mismatches for 1 <= u <= min(k, n-k), where the
    closed form at u is compared with the scan at t = k(n-k) - u."""
    bad = []
    for u in range(1, min(prob.k, prob.n - prob.k) + 1):
        for l in range(prob.n + 1):
            scan, closed = m_of(prob, prob.gdim - u, l), m_closed_form(prob, u, l)
            if scan != closed:
                bad.append((u, l, scan, closed))
    return bad


def cmd_verify(args, cfg):
    if not 2 <= args.nmax <= MAX_VERIFY_N:
        raise UsageError(f"2 <= nmax <= {MAX_VERIFY_N} fails (nmax={args.nmax})")
    lines, ok = [], True
    for n in range(2, args.nmax + 1):
        for k in range(1, n):
            prob = Problem(n, k)
            rep = verify_theorem1(prob)
            bad = closed_form_suite(prob)
            passed = rep.passed and not bad
            ok &= passed
            lines.append(f"n={n} k={k} u={rep.u}: {'PASS' if passed else 'FAIL'}")
            if args.verbose or not passed:
                lines.extend(rep.lines()[1:])
                lines.extend(f"  closed form mismatch u={u} l={l}: scan {a} closed {b}" for u, l, a, b in bad)
    lines.append("ALL PASS" if ok else "FAILURES PRESENT")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0 if ok else 1


def cmd_bl(args, cfg):
    try:
        config = load_bl_config(args.config)
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot read BL config {args.config}: {exc}")
    res = bl_constant(config, None)
    text = (f"{format_rational(res.value)}, L = {describe_subspace(res.critical)}\n"
            f"certified lower bound on the sup over all L ({res.candidates} candidates"
            f"{', truncated' if res.truncated else ''})\n")
    _emit(cfg, text)
    return 0


def cmd_simulate(args, cfg):
    Ns = args.N
    rows, summary = [], []
    counts_by_N = []
    for N in Ns:
        g = dz.st_grid_example(N, args.a, args.s)
        limit = args.threshold * N ** float(g.s)
        ex, counts = dz.exceptional_scan(g, args.threshold)
        for k in sorted(counts):
            rows.append([N, k, counts[k], f"{limit:.6f}", int(counts[k] <= limit)])
        on_E = max(counts[k] for k in g.slopes)
        counts_by_N.append(len(ex))
        summary.append(f"N={N} #A={g.size} #E={len(g.slopes)} max-on-E = {on_E} "
                       f"(bound 4*floor(N^s)+1 = {4 * g.Y + 1}) #exceptional = {len(ex)}")
    if len(Ns) > 1:
        slope = dz.fit_loglog_slope(Ns, counts_by_N)
        summary.append(f"fitted exponent {slope:.4f} (2s-a = {format_rational(2 * to_rational(args.s) - to_rational(args.a))})")
    summary = "\n".join(summary) + "\n"
    if cfg.format == "csv" or cfg.out:
        _emit(cfg, _csv_text(["N", "slope", "count", "threshold", "is_exceptional"], rows))
        (sys.stdout if cfg.out else sys.stderr).write(summary)
    else:
        sys.stdout.write(summary)
    return 0


def cmd_broadnarrow(args, cfg):
    if args.points:
        try:
            E = dz.load_pointset(args.points)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read point set {args.points}: {exc}")
    else:
        rng = np.random.default_rng(cfg.seed)
        E = dz.random_cantor_set(args.K, args.levels, args.keep, rng)
    try:
        res = dz.broad_narrow(E, args.tau, args.eps, K=args.K, M=args.M, const=args.const)
    except ValueError as exc:
        raise UsageError(str(exc))
    _emit(cfg, res.text() + "\n")
    return 0 if res.success and res.verified else 1


def _positive_int_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty N list")
    return vals


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the main output here instead of stdout")
    common.add_argument("--format", choices=("text", "csv", "svg"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="exproj", parents=[common],
                                description="Exceptional-set bounds for orthogonal projections.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", parents=[common], help="best upper and lower bound for T(a, s)")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--a", type=_rat, required=True)
    b.add_argument("--s", type=_rat, required=True)

    r = sub.add_parser("region", parents=[common], help="sweep a rational (a, s) grid")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--grid", type=int, default=20, help="denominator of the grid step")
    r.add_argument("--svg", help="also write a heatmap to this path")

    v = sub.add_parser("verify", parents=[common], help="integer inequality checks up to nmax")
    v.add_argument("--nmax", type=int, default=8)
    v.add_argument("--verbose", action="store_true")

    c = sub.add_parser("bl", parents=[common], help="Brascamp-Lieb exponent of a config file")
    c.add_argument("config")

    s = sub.add_parser("simulate", parents=[common], help="grid example projection counts")
    s.add_argument("--N", type=_positive_int_list, required=True)
    s.add_argument("--a", type=_rat, required=True)
    s.add_argument("--s", type=_rat, required=True)
    s.add_argument("--threshold", type=float, default=5.0)

    d = sub.add_parser("broadnarrow", parents=[common], help="broad-narrow descent with trace")
    d.add_argument("--points", help="point set file; default is a seeded random Cantor set")
    d.add_argument("--tau", type=_rat, default=Fraction(1, 2))
    d.add_argument("--eps", type=_rat, default=Fraction(1, 10))
    d.add_argument("--K", type=int, default=4)
    d.add_argument("--M", type=int, default=None)
    d.add_argument("--const", type=float, default=None)
    d.add_argument("--levels", type=int, default=6)
    d.add_argument("--keep", type=int, default=2)
    return p


COMMANDS = {
    "bounds": cmd_bounds, "region": cmd_region, "verify": cmd_verify,
    "bl": cmd_bl, "simulate": cmd_simulate, "broadnarrow": cmd_broadnarrow,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cfg = RunConfig(args.command, getattr(args, "out", None), getattr(args, "format", "text"),
                    getattr(args, "seed", 0))
    try:
        return COMMANDS[args.command](args, cfg)
    except (ConditionError, UsageError) as exc:
        sys.stderr.write(f"exproj {args.command}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
