"""Lower bounds for T(a, s) from explicit constructions.

Four product-type families (a coordinate plane times a thin fractal factor,
optionally crossed with the sharp planar example), a plateau family of
constant bounds coming from sets inside a w-plane, and the two printed
tables for lines and planes in R^3.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import math

from .bounds import BoundValue, best_upper
from .errors import ConditionError
from .grassmann import exceptional_locus_dim
from .ratmath import to_rational

LOWER_SOURCES = ("type1", "type2", "type3", "type4", "plateau", "r3_table", "ren_wang", "trivial")


def decompose(a):
    """a = m + beta with m a nonnegative integer and beta in (0, 1]."""
    a = to_rational(a)
    if a <= 0:
        raise ValueError(f"need a > 0, got {a}")
    m = math.ceil(a) - 1
    return m, a - m


@dataclass
class TypeBound:
    type_id: str
    params: dict
    conditions_met: bool
    value: Fraction = Fraction(0)
    failed: str = ""
    extra: dict = field(default_factory=dict)

    def bound(self):
        return BoundValue(self.value, self.type_id)


def _check_lower(prob, a, s):
    a, s = to_rational(a), to_rational(s)
    if not 0 < a < prob.n:
        raise ConditionError(f"0 < a < n fails (a={a}, n={prob.n})")
    if not 0 < s <= min(prob.k, a):
        raise ConditionError(f"0 < s <= min(k, a) fails (s={s}, k={prob.k}, a={a})")
    return a, s


def type_bounds(prob, a, s):
    a, s = _check_lower(prob, a, s)
    n, k, g = prob.n, prob.k, prob.gdim
    m, beta = decompose(a)
    l, gamma = decompose(s)
    params = {"m": m, "beta": beta, "l": l, "gamma": gamma}
    out = []

    def add(tid, conds, value):
        failed = next((name for name, ok in conds if not ok), "")
        tb = TypeBound(tid, dict(params), not failed, failed=failed)
        if not failed:
            tb.value = Fraction(value)
        out.append(tb)

    add("type1",
        [("1 <= m", 1 <= m), ("m <= n+l-k", m <= n + l - k), ("gamma > (beta+1)/2", gamma > (beta + 1) / 2)],
        g - (m - l) * (k - l) + 2 * gamma - (beta + 1))
    add("type2",
        [("m <= n+l-k", m <= n + l - k), ("gamma > beta", gamma > beta)],
        g - (m - l) * (k - l))
    # the planar factor's exceptional directions form a subset of G(1,2),
    # so their dimension 2*gamma - beta is capped at 1
    add("type3",
        [("m <= n+l-k-1", m <= n + l - k - 1), ("gamma > beta/2", gamma > beta / 2)],
        g - (m + 1 - l) * (k - l) + min(Fraction(1), 2 * gamma - beta))
    add("type4",
        [("1 <= l", 1 <= l), ("m <= n+l-k-1", m <= n + l - k - 1)],
        g - (m - l + 1) * (k - l + 1))
    return out


def plateau_bound(prob, a, s):
    """Best constant bound from sets lying in (or thickened off) a w-plane.

    For a w-plane W, if dim pi_V(W) <= l then dim pi_V(A) <= l + max(0, a - w),
    which is < s whenever the pair (w, l) qualifies.
    """
    a, s = _check_lower(prob, a, s)
    n, k = prob.n, prob.k
    best = None
    for w in range(n + 1):
        for l in range(min(k, w) + 1):
            if l + max(Fraction(0), a - w) < s:
                val = Fraction(exceptional_locus_dim(n, k, l, w))
                if best is None or val > best.value:
                    best = TypeBound("plateau", {"w": w, "l": l}, True, val)
    if best is None:
        return TypeBound("plateau", {}, False, failed="no (w, l) with l + max(0, a-w) < s")
    return best


def r3_line_table(a, s):
    """Lower bound for lines in R^3 (n=3, k=1), piecewise as printed."""
    a, s = to_rational(a), to_rational(s)
    if not (0 < a < 3 and 0 < s < min(1, a)):
        raise ConditionError(f"need 0 < a < 3 and 0 < s < min(1, a), got a={a}, s={s}")
    if a <= 1:
        return Fraction(1)
    if a <= 2:
        if s <= (a - 1) / 2:
            return Fraction(0)
        if s <= a - 1:
            return 1 + 2 * s - a
        return Fraction(1)
    if s <= (a - 1) / 2:
        return Fraction(0)
    return 1 + 2 * s - a


def r3_plane_table(a, s):
    """Lower bound for planes in R^3 (n=3, k=2), piecewise as printed."""
    a, s = to_rational(a), to_rational(s)
    if not (0 < a < 3 and 0 < s < min(2, a)):
        raise ConditionError(f"need 0 < a < 3 and 0 < s < min(2, a), got a={a}, s={s}")
    if a <= 1:
        return max(Fraction(0), 2 * s - a)
    if a <= 2:
        if s <= a / 2:
            return Fraction(0)
        if s <= 1:
            return 2 * s - a
        if s <= (a + 1) / 2:
            return Fraction(1)
        return 2 * s - a
    if s <= a - 1:
        return Fraction(0)
    if s <= (a + 1) / 2:
        return Fraction(1)
    return 2 * s - a


def lower_candidates(prob, a, s):
    a, s = _check_lower(prob, a, s)
    out = [tb.bound() for tb in type_bounds(prob, a, s) if tb.conditions_met]
    pl = plateau_bound(prob, a, s)
    if pl.conditions_met:
        out.append(BoundValue(pl.value, f"plateau(w={pl.params['w']},l={pl.params['l']})"))
    if prob.n == 3 and s < min(prob.k, a):
        table = r3_line_table if prob.k == 1 else r3_plane_table
        out.append(BoundValue(table(a, s), "r3_table"))
    if prob.n == 2 and prob.k == 1:
        out.append(BoundValue(max(Fraction(0), 2 * s - a), "ren_wang"))
    out.append(BoundValue(Fraction(0), "trivial"))
    return out


def best_lower(prob, a, s):
    """Largest applicable lower bound; ties resolved in LOWER_SOURCES order."""
    def rank(b):
        return LOWER_SOURCES.index(b.source.split("(")[0])

    return max(lower_candidates(prob, a, s), key=lambda b: (b.value, -rank(b)))


@dataclass(frozen=True)
class RegionPoint:
    a: Fraction
    s: Fraction
    upper: BoundValue
    lower: BoundValue

    @property
    def gap(self):
        return self.upper.value - self.lower.value


def sweep(prob, a_grid, s_grid):
    """Upper and lower bound at every admissible (a, s) grid point."""
    out = []
    for a in a_grid:
        a = to_rational(a)
        if not 0 < a < prob.n:
            continue
        for s in s_grid:
            s = to_rational(s)
            if not 0 < s < min(prob.k, a):
                continue
            out.append(RegionPoint(a, s, best_upper(prob, a, s), best_lower(prob, a, s)))
    return out


def exact_regions(prob, a_grid, s_grid):
    """Grid points where the best upper and lower bounds coincide: (a, s, value)."""
    return [(p.a, p.s, p.upper.value) for p in sweep(prob, a_grid, s_grid) if p.gap == 0]


def explicit_region_points(prob, step=Fraction(1, 20)):
    """Grid points of the (beta, gamma) regions where T is known exactly,
    with the predicted value.

    k <= n/2: a = 1 + beta, s = gamma, beta < gamma <= k(1 + beta)/n, value k(n-k) - k.
    k >= n/2: a = n - 1 + beta, s = k - 1 + gamma,
              beta < gamma <= (1 - k/n) + (k/n) beta, value k(n-k) - (n-k).
    """
    n, k = prob.n, prob.k
    step = to_rational(step)
    steps = int(1 / step)
    pts = []
    for i in range(1, steps + 1):
        beta = i * step
        for j in range(1, steps + 1):
            gamma = j * step
            if gamma <= beta:
                continue
            if 2 * k <= n and gamma <= Fraction(k, n) * (1 + beta):
                pts.append((1 + beta, gamma, Fraction(prob.gdim - k)))
            if 2 * k >= n and gamma <= (1 - Fraction(k, n)) + Fraction(k, n) * beta:
                pts.append((n - 1 + beta, k - 1 + gamma, Fraction(prob.gdim - (n - k))))
    return pts
