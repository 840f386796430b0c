"""Upper bounds for the exceptional-set dimension T(a, s).

The central quantity is ``s_star(a, t)``: the largest s for which the
Brascamp-Lieb argument certifies dim E_s(A) <= t, written as

    sup over q in [0, 1] of  min over l in {0..n} of  (a - l) q + m(t, l)

with q = 1/p.  The inner minimum is a concave piecewise-linear function of
q, so its maximum sits at q = 0, q = 1 or a crossing of two of the lines,
and can be found exactly by enumerating those breakpoints.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math

from .errors import ConditionError
from .grassmann import exceptional_locus_dim
from .ratmath import floor_half_diff, to_rational

# provenance tags, most specific first; used for tie-breaking in best_upper
UPPER_SOURCES = ("mainthm", "ren_wang", "theorem1", "he", "falconer", "kaufman_mattila", "trivial")


@dataclass(frozen=True)
class Problem:
    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k < self.n:
            raise ValueError(f"need 1 <= k < n, got n={self.n}, k={self.k}")

    @property
    def gdim(self):
        """dim G(k, n) = k(n - k)."""
        return self.k * (self.n - self.k)


@dataclass(frozen=True, order=True)
class BoundValue:
    value: Fraction
    source: str = field(compare=False)

    def __str__(self):
        from .ratmath import format_rational

        return f"{format_rational(self.value)} ({self.source})"


def _floor_t(prob, t):
    t = to_rational(t)
    tf = math.floor(t)
    if not 0 <= tf < prob.gdim:
        raise ValueError(f"need 0 <= t < k(n-k) = {prob.gdim}, got t={t}")
    return tf


def m_of(prob, t, l):
    """Smallest m >= 0 with E(m, l) > t, by linear scan.

    Only floor(t) matters since E is integer valued.
    """
    tf = _floor_t(prob, t)
    if not 0 <= l <= prob.n:
        raise ValueError(f"need 0 <= l <= n, got l={l}")
    return _m_table(prob, tf)[l]


@lru_cache(maxsize=None)
def _m_table(prob, tf):
    n, k = prob.n, prob.k
    out = []
    for l in range(n + 1):
        m = 0
        while exceptional_locus_dim(n, k, m, l) <= tf:
            m += 1
        assert m <= min(l, k) + 1
        out.append(m)
    return tuple(out)


def m_closed_form(prob, u, l):
    """max(0, floor((k + l - sqrt((k-l)^2 + 4u)) / 2) + 1), integer-exact."""
    if not 1 <= u <= prob.gdim:
        raise ValueError(f"need 1 <= u <= k(n-k) = {prob.gdim}, got u={u}")
    if not 0 <= l <= prob.n:
        raise ValueError(f"need 0 <= l <= n, got l={l}")
    k = prob.k
    return max(0, floor_half_diff(k + l, (k - l) ** 2 + 4 * u) + 1)


def lambda_p(prob, t, p):
    """max over integer l in [0, n] of l - p * m(t, l)."""
    p = to_rational(p)
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    ms = _m_table(prob, _floor_t(prob, t))
    return max(l - p * m for l, m in enumerate(ms))


def candidate_qs(prob, t):
    """Breakpoints of the inner minimum, clipped to [0, 1], sorted."""
    ms = _m_table(prob, _floor_t(prob, t))
    qs = {Fraction(0), Fraction(1)}
    for l1 in range(len(ms)):
        for l2 in range(l1 + 1, len(ms)):
            q = Fraction(ms[l2] - ms[l1], l2 - l1)
            if 0 <= q <= 1:
                qs.add(q)
    return sorted(qs)


def inner_min(prob, a, t, q):
    ms = _m_table(prob, _floor_t(prob, t))
    return min((a - l) * q + m for l, m in enumerate(ms))


def s_star(prob, a, t):
    """Exact sup_q min_l ((a - l) q + m(t, l)) over q = 1/p in [0, 1]."""
    a = to_rational(a)
    if not 0 < a < prob.n:
        raise ValueError(f"need 0 < a < n, got a={a}")
    return _s_star(prob, a, _floor_t(prob, t))


@lru_cache(maxsize=None)
def _s_star(prob, a, tf):
    return max(inner_min(prob, a, tf, q) for q in candidate_qs(prob, tf))


def s_star_argmax(prob, a, t):
    """The smallest maximising q (so p = 1/q) together with the value."""
    a = to_rational(a)
    best = max(inner_min(prob, a, t, q) for q in candidate_qs(prob, t))
    q = min(q for q in candidate_qs(prob, t) if inner_min(prob, a, t, q) == best)
    return q, best


def s_star_dual(prob, a, t):
    """Same supremum computed as max_q (a - lambda_{1/q}) q, the form the
    multilinear estimate produces.  q = 0 contributes min_l m(t, l)."""
    a = to_rational(a)
    tf = _floor_t(prob, t)
    vals = [Fraction(min(_m_table(prob, tf)))]
    for q in candidate_qs(prob, tf):
        if q > 0:
            vals.append((a - lambda_p(prob, tf, 1 / q)) * q)
    return max(vals)


def _check_as(prob, a, s):
    a, s = to_rational(a), to_rational(s)
    if not 0 < a < prob.n:
        raise ConditionError(f"0 < a < n fails (a={a}, n={prob.n})")
    if not 0 < s < min(prob.k, a):
        raise ConditionError(f"0 < s < min(k, a) fails (s={s}, k={prob.k}, a={a})")
    return a, s


def upper_bound_mainthm(prob, a, s):
    """Smallest integer t with s_star(a, t) >= s; E_s only grows with s, so
    dim E_s <= t.  Falls back to the trivial k(n-k)."""
    a, s = _check_as(prob, a, s)
    for j in range(prob.gdim):
        if _s_star(prob, a, j) >= s:
            return BoundValue(Fraction(j), f"mainthm(t={j})")
    return BoundValue(Fraction(prob.gdim), "trivial")


def upper_bound_classical(prob, a, s):
    a, s = _check_as(prob, a, s)
    n, k, g = prob.n, prob.k, prob.gdim
    out = [
        BoundValue(Fraction(g), "trivial"),
        BoundValue(g + s - k, "kaufman_mattila"),
        BoundValue(max(g + s - a, Fraction(0)), "falconer"),
    ]
    if s <= Fraction(k, n) * a:
        out.append(BoundValue(Fraction(g - 1), "he"))
        out.append(BoundValue(Fraction(g - min(k, n - k)), "theorem1"))
    if n == 2 and k == 1:
        out.append(BoundValue(max(Fraction(0), 2 * s - a), "ren_wang"))
    return out


def _source_rank(tag):
    base = tag.split("(")[0]
    return UPPER_SOURCES.index(base)


def best_upper(prob, a, s):
    """Minimum over every applicable upper bound; ties go to the mainthm tag."""
    cands = [upper_bound_mainthm(prob, a, s)] + upper_bound_classical(prob, a, s)
    return min(cands, key=lambda b: (b.value, _source_rank(b.source)))


@dataclass
class VerifyRow:
    l: int
    case: int
    mu: int
    alpha: int
    subcase: str
    lhs: Fraction
    rhs: int
    case_ok: bool
    ok: bool


@dataclass
class VerifyReport:
    n: int
    k: int
    u: int
    rows: list

    @property
    def passed(self):
        return all(r.ok for r in self.rows)

    def lines(self):
        head = f"n={self.n} k={self.k} u={self.u}: {'PASS' if self.passed else 'FAIL'}"
        body = [
            f"  l={r.l} case={r.case} mu={r.mu} alpha={r.alpha} ({r.subcase}) "
            f"lk/n={r.lhs} <= {r.rhs}: {'ok' if r.ok else 'FAIL'}"
            for r in self.rows
        ]
        return [head] + body


def verify_theorem1(prob):
    """Check l*k/n <= floor((k + l - sqrt((k-l)^2 + 4u)) / 2) + 1 for every l,
    with u = min(k, n - k), and the equivalent per-case inequality
    (k -+ mu) k <= n (k - alpha) in terms of mu = |l - k|."""
    n, k = prob.n, prob.k
    u = min(k, n - k)
    rows = []
    for l in range(n + 1):
        lhs = Fraction(l * k, n)
        rhs = floor_half_diff(k + l, (k - l) ** 2 + 4 * u) + 1
        if l <= k:
            case, mu = 1, k - l
            alpha = -floor_half_diff(-mu, mu * mu + 4 * u) - 1
            case_ok = (k - mu) * k <= n * (k - alpha)
        else:
            case, mu = 2, l - k
            alpha = -floor_half_diff(mu, mu * mu + 4 * u) - 1
            case_ok = (k + mu) * k <= n * (k - alpha)
        subcase = "u<=mu" if u <= mu else "u>=mu+1"
        rows.append(VerifyRow(l, case, mu, alpha, subcase, lhs, rhs, case_ok, lhs <= rhs and case_ok))
    return VerifyReport(n, k, u, rows)
