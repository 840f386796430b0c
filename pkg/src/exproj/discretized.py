"""delta-discretized experiments on finite point sets.

Frostman-type (delta, s)-sets, dyadic coverings, the integer grid example
whose projections are small in many directions, projection covering
numbers, the broad-narrow descent through nested K-adic cells, and the
multilinear slab tally.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
import math
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .errors import ConditionError
from .grassmann import slab_membership
from .ratmath import floor_pow, iroot, to_rational

_REL_TOL = 1e-9


@dataclass
class PointSet:
    points: np.ndarray
    delta: float
    separated: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        self.points = pts
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.separated and not is_separated(pts, self.delta):
            raise ValueError("points are not delta-separated")

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return len(self.points)


def is_separated(points, delta):
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return True
    tree = cKDTree(pts)
    return not tree.query_pairs(delta * (1 - _REL_TOL))


def load_pointset(path):
    """'dim count delta' header, then one row of floats per point."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError("point set header must be 'dim count delta'")
    dim, count, delta = int(head[0]), int(head[1]), float(head[2])
    rows = [[float(v) for v in ln.split()] for ln in lines[1:]]
    if len(rows) != count or any(len(r) != dim for r in rows):
        raise ValueError("point set body does not match header")
    return PointSet(np.array(rows, dtype=float).reshape(count, dim), delta)


def save_pointset(P, path):
    out = [f"{P.dim} {len(P)} {P.delta!r}"]
    out += [" ".join(repr(float(v)) for v in row) for row in P.points]
    Path(path).write_text("\n".join(out) + "\n")


def dyadic_radii(points, delta):
    """delta * 2^j for j >= 0, up to the diameter (at least delta itself)."""
    pts = np.asarray(points, dtype=float)
    diam = 0.0
    if len(pts) > 1:
        diam = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
    radii = [delta]
    while radii[-1] < diam:
        radii.append(radii[-1] * 2)
    return np.array(radii)


@dataclass
class FrostmanReport:
    passed: bool
    worst_ratio: float
    worst_center: int = -1
    worst_radius: float = 0.0


def check_frostman(P, s, C, radii=None):
    """#(P ∩ B_r(x)) <= C (r/delta)^s for all x in P and dyadic r >= delta."""
    s = float(to_rational(s)) if not isinstance(s, float) else s
    pts = P.points
    if len(pts) == 0:
        return FrostmanReport(True, 0.0)
    if radii is None:
        radii = dyadic_radii(pts, P.delta)
    tree = cKDTree(pts)
    worst = FrostmanReport(True, 0.0)
    for r in radii:
        counts = tree.query_ball_point(pts, r * (1 + _REL_TOL), return_length=True)
        ratios = counts / (C * (r / P.delta) ** s)
        i = int(np.argmax(ratios))
        if ratios[i] > worst.worst_ratio:
            worst = FrostmanReport(True, float(ratios[i]), i, float(r))
    worst.passed = worst.worst_ratio <= 1 + _REL_TOL
    return worst


def extract_delta_s_set(P, s, C):
    """Greedy (delta, s, C)-subset of P in scan order.

    A point is kept iff every dyadic ball centred at a kept point (or at the
    new point) still satisfies the count bound afterwards.
    """
    s = float(to_rational(s)) if not isinstance(s, float) else s
    pts = P.points
    if len(pts) == 0:
        return PointSet(pts.copy(), P.delta)
    radii = dyadic_radii(pts, P.delta) * (1 + _REL_TOL)
    caps = C * (radii / (1 + _REL_TOL) / P.delta) ** s * (1 + _REL_TOL)
    kept = np.empty((0, pts.shape[1]))
    counts = np.empty((0, len(radii)), dtype=np.int64)
    keep_idx = []
    for i, x in enumerate(pts):
        if len(kept):
            d = np.linalg.norm(kept - x, axis=1)
            near = d[:, None] <= radii[None, :]
        else:
            near = np.zeros((0, len(radii)), dtype=bool)
        own = near.sum(axis=0) + 1
        if np.any(own > caps):
            continue
        if np.any((counts + near)[near] > np.broadcast_to(caps, near.shape)[near]):
            continue
        counts = np.vstack([counts + near, own[None, :]])
        kept = np.vstack([kept, x[None, :]])
        keep_idx.append(i)
    return PointSet(pts[keep_idx], P.delta)


@dataclass
class CoveringReport:
    covers: bool
    measure: float
    measure_ok: bool
    nesting_ok: bool
    uncovered: list = field(default_factory=list)
    nesting_failures: list = field(default_factory=list)

    @property
    def passed(self):
        return self.covers and self.measure_ok and self.nesting_ok


def verify_dyadic_covering(cover, target, s, eps):
    """Check a dyadic cover of target points in [0,1]^m against three conditions:
    coverage, sum of side^s <= eps, and at most 2^((k-l)s) level-k cubes inside
    any level-l dyadic cube for l < k.

    ``cover`` is a list of (level j, integer index tuple); the cube is
    prod [i 2^-j, (i+1) 2^-j].
    """
    s = float(to_rational(s)) if not isinstance(s, float) else s
    eps = float(eps)
    pts = target.points if isinstance(target, PointSet) else np.atleast_2d(np.asarray(target, dtype=float))
    by_level = {}
    dim = None
    for j, idx in cover:
        idx = tuple(int(v) for v in np.atleast_1d(idx))
        if j < 0 or any(not 0 <= v < 2 ** j for v in idx):
            raise ValueError(f"malformed dyadic cube (level {j}, index {idx})")
        if dim is None:
            dim = len(idx)
        elif len(idx) != dim:
            raise ValueError("cubes of different dimensions")
        by_level.setdefault(j, set()).add(idx)
    if dim is not None and pts.size and pts.shape[1] != dim:
        raise ValueError("target dimension does not match the cubes")

    uncovered = []
    for pi, x in enumerate(pts):
        hit = False
        for j, cubes in by_level.items():
            side = 2.0 ** -j
            # a point on a cube face belongs to both neighbours
            u = x / side
            lo = np.minimum(np.floor(u).astype(int), 2 ** j - 1)
            opts = [(int(v), int(v) - 1) if np.isclose(ui, v) and v > 0 else (int(v),) for ui, v in zip(u, lo)]
            if any(c in cubes for c in product(*opts)):
                hit = True
                break
        if not hit:
            uncovered.append(pi)

    measure = sum(len(c) * 2.0 ** (-j * s) for j, c in by_level.items())
    failures = []
    for k, cubes in by_level.items():
        for l in range(k):
            groups = {}
            for idx in cubes:
                key = tuple(v >> (k - l) for v in idx)
                groups[key] = groups.get(key, 0) + 1
            cap = 2.0 ** ((k - l) * s) * (1 + _REL_TOL)
            for key, cnt in groups.items():
                if cnt > cap:
                    failures.append((k, l, key, cnt))
    return CoveringReport(not uncovered, measure, measure <= eps * (1 + _REL_TOL), not failures,
                          uncovered, failures)


@dataclass(frozen=True)
class GridExample:
    """Integer grid A = [-X, X] x [-Y, Y] with X = floor(N^(a-s)), Y = floor(N^s),
    slopes |k| <= floor(N^(2s-a)) and lines y = kx + m with |m| <= floor(10 N^s)."""

    N: int
    a: Fraction
    s: Fraction
    X: int
    Y: int
    slope_max: int
    offset_max: int

    @property
    def A(self):
        xs, ys = np.meshgrid(np.arange(-self.X, self.X + 1), np.arange(-self.Y, self.Y + 1), indexing="ij")
        return np.column_stack([xs.ravel(), ys.ravel()])

    @property
    def size(self):
        return (2 * self.X + 1) * (2 * self.Y + 1)

    @property
    def slopes(self):
        return list(range(-self.slope_max, self.slope_max + 1))

    @property
    def num_lines(self):
        return len(self.slopes) * (2 * self.offset_max + 1)


def st_grid_example(N, a, s):
    a, s = to_rational(a), to_rational(s)
    if N < 4:
        raise ConditionError(f"N >= 4 fails (N={N})")
    if not 0 < a <= 2:
        raise ConditionError(f"0 < a <= 2 fails (a={a})")
    if not a / 2 <= s <= min(1, a):
        raise ConditionError(f"a/2 <= s <= min(1, a) fails (a={a}, s={s})")
    return GridExample(N, a, s, floor_pow(N, a - s), floor_pow(N, s), floor_pow(N, 2 * s - a),
                       _floor_ten_pow(N, s))


def _floor_ten_pow(N, s):
    # floor(10 N^(p/q)) = largest y with y^q <= 10^q N^p
    return iroot(10 ** s.denominator * N ** s.numerator, s.denominator)


def slope_projection_count(g, slope):
    """Number of distinct values y - slope*x over the grid, by enumeration."""
    X, Y = g.X, g.Y
    span = Y + abs(slope) * X
    seen = np.zeros(2 * span + 1, dtype=bool)
    xs = np.arange(-X, X + 1)
    ys = np.arange(-Y, Y + 1)
    vals = ys[None, :] - slope * xs[:, None] + span
    seen[vals.ravel()] = True
    return int(seen.sum())


def slope_projection_count_closed(g, slope):
    """Columns project to length-(2Y+1) runs shifted by |slope|; they merge
    into one run exactly when the shift is at most 2Y+1."""
    k = abs(slope)
    if k <= 2 * g.Y + 1:
        return 2 * (g.Y + k * g.X) + 1
    return g.size


def exceptional_scan(g, threshold_mult=5.0, sweep=None):
    """Integer slopes |k| <= sweep (default N) whose projection count is at
    most threshold_mult * N^s.  Returns (slopes, counts-dict)."""
    if threshold_mult < 1:
        raise ValueError("threshold multiplier must be >= 1")
    sweep = g.N if sweep is None else sweep
    limit = threshold_mult * g.N ** float(g.s)
    counts = {k: slope_projection_count(g, k) for k in range(-sweep, sweep + 1)}
    return [k for k, c in counts.items() if c <= limit], counts


def fit_loglog_slope(xs, ys):
    """Least-squares slope of log y against log x."""
    lx, ly = np.log(np.asarray(xs, dtype=float)), np.log(np.asarray(ys, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


def projection_covering_number(P, V, delta):
    """Greedy delta-separated count of the projections of P onto V."""
    pts = P.points if isinstance(P, PointSet) else np.asarray(P, dtype=float)
    if pts.shape[1] != V.n:
        raise ValueError("point dimension does not match the subspace")
    proj = pts @ V.orthonormal_basis()
    return greedy_separated_count(proj, delta)


def greedy_separated_count(points, delta):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    kept = []
    for x in pts:
        if kept:
            arr = np.asarray(kept)
            if np.min(np.linalg.norm(arr - x, axis=1)) < delta * (1 - _REL_TOL):
                continue
        kept.append(x)
    return len(kept)


class CellTree:
    """Nested K-adic cube partitions of [0,1]^d at levels 0..M.

    A level-r cell is the integer tuple floor(x K^r) (clipped to K^r - 1 so
    that x = 1 stays inside); its parent is obtained by integer division by K.
    """

    def __init__(self, points, K, M):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if np.any(pts < 0) or np.any(pts > 1):
            raise ValueError("cell tree points must lie in [0, 1]^d")
        self.points = pts
        self.K = K
        self.M = M
        self.labels = []
        for r in range(M + 1):
            scale = K ** r
            self.labels.append(np.minimum(np.floor(pts * scale).astype(np.int64), scale - 1))

    def members(self, r, cell):
        if r == 0:
            return np.ones(len(self.points), dtype=bool)
        return np.all(self.labels[r] == np.asarray(cell), axis=1)

    def count(self, r, cell):
        return int(self.members(r, cell).sum())

    def children_counts(self, r, cell):
        """Counts of the nonempty level-(r+1) children of a level-r cell."""
        mask = self.members(r, cell)
        sub = self.labels[r + 1][mask]
        if len(sub) == 0:
            return {}
        keys, cnt = np.unique(sub, axis=0, return_counts=True)
        return {tuple(int(v) for v in key): int(c) for key, c in zip(keys, cnt)}


@dataclass
class BroadNarrowResult:
    success: bool
    r: int
    parent: tuple
    cells: list
    counts: list
    threshold: float
    needed: int
    trace: list
    flags: dict
    verified: bool = False

    def text(self):
        lines = [f"broad-narrow: {'found' if self.success else 'FAILED'} "
                 f"(needed {self.needed} significant cells)"]
        for row in self.trace:
            lines.append(f"  level r={row['r']} parent={row['parent']} threshold={row['threshold']:.4g} "
                         f"significant={row['significant']} max_child={row['max_count']}")
        if self.success:
            lines.append(f"  chosen r={self.r} parent={self.parent}")
            for c, n in zip(self.cells, self.counts):
                lines.append(f"    cell {c}: {n} points")
        for k, v in self.flags.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


def bn_threshold(r, K, tau, eps, delta, const, logd):
    """Significance threshold of a level-r child:
    const * |log delta|^-3 * K^(eps (r-1)) * 2^-(r-1) * (K^(r-1) delta)^-tau."""
    return const * logd ** -3 * K ** (eps * (r - 1)) * 2.0 ** -(r - 1) * (K ** (r - 1) * delta) ** -tau


def broad_narrow(E, tau, eps, K=4, M=None, const=None):
    """Descend through K-adic cells until some cell has at least
    floor(K^(tau-eps)) significant children.

    At each level the children of the current cell are compared with the
    significance threshold; on failure the descent continues into the most
    populous child.  ``const`` defaults to K^(-d^4) for points in [0,1]^d.
    """
    tau, eps = float(to_rational(tau)), float(to_rational(eps))
    delta = E.delta
    logd = abs(math.log(delta))
    d = E.dim
    if const is None:
        const = float(K) ** -(d ** 4)
    if M is None:
        M = max(1, math.ceil(math.log2(max(2.0, math.log2(1 / delta)))))
    # one significant child is no split at all, so at least two are required
    needed = max(2, math.floor(K ** (tau - eps)))
    flags = {
        "size_ok": len(E) >= logd ** -3 * delta ** -tau,
        "K_large": K ** eps / 2 > 1,
    }
    tree = CellTree(E.points, K, M)
    parent = tuple([0] * d)
    trace = []
    for r in range(1, M + 1):
        thr = bn_threshold(r, K, tau, eps, delta, const, logd)
        kids = tree.children_counts(r - 1, parent)
        sig = sorted((c for c, n in kids.items() if n >= thr), key=lambda c: (-kids[c], c))
        top = max(kids.items(), key=lambda kv: (kv[1], tuple(-v for v in kv[0])))
        trace.append({"r": r, "parent": parent, "threshold": thr, "significant": len(sig), "max_count": top[1]})
        if len(sig) >= needed:
            res = BroadNarrowResult(True, r, parent, sig, [kids[c] for c in sig], thr, needed, trace, flags)
            res.verified = all(tree.count(r, c) >= thr for c in sig) and len(sig) >= needed
            return res
        if r < M:
            parent = min((c for c, n in kids.items() if n == top[1]))
    return BroadNarrowResult(False, -1, parent, [], [], float("nan"), needed, trace, flags)


@dataclass
class TopCells:
    cells: list
    counts: list
    certificate: float
    rest_average: float

    @property
    def holds(self):
        return self.counts[-1] >= self.rest_average


def top_cells(labels, n_cells, J):
    """The J most populated cells (ties by index) and the averaging certificate
    #(Q_J ∩ E) >= (sum of the remaining counts) / #cells."""
    if J > n_cells or J < 1:
        raise ValueError(f"need 1 <= J <= #cells, got J={J}, #cells={n_cells}")
    counts = np.bincount(np.asarray(labels, dtype=np.int64), minlength=n_cells)
    order = sorted(range(n_cells), key=lambda i: (-counts[i], i))
    top = order[:J]
    rest = sum(int(counts[i]) for i in order[J:])
    return TopCells(top, [int(counts[i]) for i in top], float(counts[top[-1]]), rest / n_cells)


def ball_grid_nodes(centers, delta):
    """delta-lattice nodes within distance delta of some centre, deduplicated."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    n = centers.shape[1]
    offs = np.array(np.meshgrid(*[np.arange(-1, 2)] * n, indexing="ij")).reshape(n, -1).T
    offs = offs[np.linalg.norm(offs, axis=1) <= 1 + _REL_TOL]
    base = np.round(centers / delta).astype(np.int64)
    nodes = (base[:, None, :] + offs[None, :, :]).reshape(-1, n)
    nodes = np.unique(nodes, axis=0)
    pts = nodes * delta
    dist = cKDTree(centers).query(pts)[0]
    return pts[dist <= delta * (1 + _REL_TOL)]


def multilinear_tally(W, slab_families, p, delta=None):
    """delta^n * sum over grid nodes of W of (number of slabs containing the node)^p.

    W is a PointSet of delta-ball centres (or an array together with delta).
    """
    p = float(to_rational(p)) if not isinstance(p, float) else p
    if isinstance(W, PointSet):
        W_centers, delta = W.points, W.delta if delta is None else delta
    else:
        W_centers = W
    if delta is None:
        raise ValueError("delta is required for a bare array of centres")
    nodes = ball_grid_nodes(W_centers, delta)
    total = np.zeros(len(nodes))
    for family in slab_families:
        for slab in family:
            total += slab_membership(slab, nodes)
    n = nodes.shape[1] if nodes.size else np.atleast_2d(W_centers).shape[1]
    return float(delta ** n * np.sum(total ** p))


def random_cantor_set(K, levels, keep, rng, dim=1):
    """Random Cantor-type set: each K-adic cell keeps ``keep`` of its K^dim
    children, for ``levels`` generations.  Points are the kept cells' lower
    corners, so they are K^-levels separated and roughly
    (delta, log keep / log K)-regular."""
    if not 1 <= keep <= K ** dim:
        raise ValueError(f"need 1 <= keep <= K^dim, got keep={keep}")
    cells = np.zeros((1, dim), dtype=np.int64)
    offs = np.array(list(product(range(K), repeat=dim)), dtype=np.int64)
    for _ in range(levels):
        nxt = []
        for c in cells:
            pick = rng.choice(len(offs), size=keep, replace=False)
            nxt.append(c * K + offs[np.sort(pick)])
        cells = np.vstack(nxt)
    delta = float(K) ** -levels
    return PointSet(cells * delta, delta)
