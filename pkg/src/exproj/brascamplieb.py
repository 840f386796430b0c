"""Brascamp-Lieb exponents over finite families of candidate subspaces.

For subspaces W_1..W_J of R^n and p >= 1 the exponent is

    sup over L <= R^n of  dim L - (p/J) * sum_j dim pi_{W_j}(L).

The supremum is taken over a finite lattice of candidates, so every value
returned here is a certified lower bound on the true supremum.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
import random

from .bounds import Problem, lambda_p, m_of
from .grassmann import Subspace, _parse_subspace_lines, intersect, orthocomplement, proj_dim, subspace_sum
from .ratmath import to_rational

DEFAULT_CAP = 512


@dataclass(frozen=True)
class BLConfig:
    n: int
    subspaces: tuple
    p: Fraction

    def __post_init__(self):
        subs = tuple(self.subspaces)
        if not subs:
            raise ValueError("need at least one subspace")
        dims = {W.dim for W in subs}
        if any(W.n != self.n for W in subs) or len(dims) != 1:
            raise ValueError("all subspaces must share the ambient space and dimension")
        object.__setattr__(self, "subspaces", subs)
        object.__setattr__(self, "p", to_rational(self.p))
        if self.p < 1:
            raise ValueError("need p >= 1")

    @property
    def J(self):
        return len(self.subspaces)


@dataclass
class CandidateFamily:
    subspaces: list
    truncated: bool = False

    def __len__(self):
        return len(self.subspaces)


@dataclass
class BLResult:
    value: Fraction
    critical: Subspace
    candidates: int
    truncated: bool
    # the sup over L is only searched on a finite family
    lower_bound_only: bool = True


def coordinate_subspaces(n):
    return [Subspace.coordinate(n, axes) for r in range(n + 1) for axes in combinations(range(n), r)]


def lattice_closure(seeds, cap=DEFAULT_CAP, n=None):
    """Close seeds and their orthocomplements under sum and intersection.

    Coordinate subspaces (including {0} and R^n) are always included.  Stops
    once ``cap`` distinct subspaces exist and flags the family as truncated.
    """
    seeds = list(seeds)
    if n is None:
        if not seeds:
            raise ValueError("ambient dimension needed when there are no seeds")
        n = seeds[0].n
    if any(S.n != n for S in seeds):
        raise ValueError("seeds must share the ambient dimension")
    found = {}

    def add(S):
        if S not in found:
            found[S] = None
            return True
        return False

    for S in coordinate_subspaces(n) + seeds + [orthocomplement(S) for S in seeds]:
        add(S)
        if len(found) >= cap:
            return CandidateFamily(_sorted(found), truncated=True)
    frontier = list(found)
    while frontier:
        new = []
        current = list(found)
        for A in frontier:
            for B in current:
                for C in (subspace_sum(A, B), intersect(A, B)):
                    if add(C):
                        new.append(C)
                        if len(found) >= cap:
                            return CandidateFamily(_sorted(found), truncated=True)
        frontier = new
    return CandidateFamily(_sorted(found))


def _sorted(found):
    return sorted(found, key=Subspace.sort_key)


def _objective(config, L):
    total = sum(proj_dim(W, L) for W in config.subspaces)
    return L.dim - config.p * Fraction(total, config.J)


def critical_subspace(config, candidates):
    """Maximiser of the BL objective; ties go to the smallest dim, then canonical order."""
    subs = candidates.subspaces if isinstance(candidates, CandidateFamily) else list(candidates)
    best, best_val = None, None
    for L in sorted(subs, key=Subspace.sort_key):
        if L.n != config.n:
            raise ValueError("candidate ambient dimension mismatch")
        val = _objective(config, L)
        if best_val is None or val > best_val:
            best, best_val = L, val
    return best, best_val


def bl_constant(config, candidates=None):
    if candidates is None:
        candidates = lattice_closure(config.subspaces)
    L, val = critical_subspace(config, candidates)
    truncated = getattr(candidates, "truncated", False)
    return BLResult(val, L, len(candidates), truncated)


def transversal_count(patches, L, threshold):
    """Number of patches V with dim pi_L(V) >= threshold."""
    return sum(1 for V in patches if proj_dim(L, V) >= threshold)


def random_subspace(n, k, rng, lo=-3, hi=3):
    while True:
        vecs = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(k)]
        V = Subspace(n, vecs)
        if V.dim == k:
            return V


@dataclass
class CrosscheckReport:
    checks: int
    violations: list

    @property
    def ok(self):
        return not self.violations


def lambda_p_crosscheck(prob, t, p, trials, seed=0, J=4):
    """Random rational patch configurations against the lambda_p ceiling.

    For each coordinate L of dimension l on which every sampled patch V has
    dim pi_L(V) >= m(t, l), both the worst-patch and the averaged exponent
    must stay below lambda_p.
    """
    rng = random.Random(seed)
    p = to_rational(p)
    lam = lambda_p(prob, t, p)
    coords = coordinate_subspaces(prob.n)
    checks, violations = 0, []
    for trial in range(trials):
        patches = [random_subspace(prob.n, prob.k, rng) for _ in range(J)]
        for L in coords:
            dims = [proj_dim(L, V) for V in patches]
            if min(dims) < m_of(prob, t, L.dim):
                continue
            checks += 1
            worst = L.dim - p * min(dims)
            avg = L.dim - p * Fraction(sum(dims), len(dims))
            if worst > lam or avg > lam:
                violations.append((trial, L, dims, worst, avg, lam))
    return CrosscheckReport(checks, violations)


def parse_bl_config(text):
    """'n J p' header followed by J subspace blocks ('n d' + d rows)."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty BL config")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError(f"bad BL header {lines[0]!r}; expected 'n J p'")
    n, J, p = int(head[0]), int(head[1]), to_rational(head[2])
    rest = lines[1:]
    subs = []
    for _ in range(J):
        if not rest:
            raise ValueError("fewer subspace blocks than J")
        W, rest = _parse_subspace_lines(rest, to_rational)
        if W.n != n:
            raise ValueError("subspace ambient dimension differs from header")
        subs.append(W)
    if rest:
        raise ValueError("trailing lines after the last subspace block")
    return BLConfig(n, tuple(subs), p)


def load_bl_config(path):
    return parse_bl_config(Path(path).read_text())


def describe_subspace(L):
    if L.dim == 0:
        return "{0}"
    if L.dim == L.n:
        return f"R^{L.n}"
    from .ratmath import format_rational

    rows = "; ".join("(" + ", ".join(format_rational(v) for v in r) + ")" for r in L.basis)
    return f"span{{{rows}}}"


__all__ = [
    "BLConfig", "BLResult", "CandidateFamily", "CrosscheckReport", "Problem",
    "bl_constant", "coordinate_subspaces", "critical_subspace", "describe_subspace",
    "lambda_p_crosscheck", "lattice_closure", "load_bl_config", "parse_bl_config",
    "random_subspace", "transversal_count",
]
