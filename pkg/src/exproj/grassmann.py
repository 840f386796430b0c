"""Subspaces of Q^n with exact rank arithmetic, plus float metrics on G(k,n) and A(k,n).

All dimension counts go through exact row reduction over the rationals;
there is no rank tolerance anywhere in this module.  Only the metrics
(operator norms) are evaluated in binary64.
"""
import builtins
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ConditionError


def rref(rows, ncols):
    """Reduced row echelon form of a list of rational rows.

    Returns ``(nonzero_rows, pivot_columns)``.  Pivots are chosen at the
    lowest available column, so the result is canonical for the row space.
    """
    m = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        if lead != 1:
            m[r] = [v / lead for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def nullspace(rows, ncols):
    """Basis of {x : row . x = 0 for every row}, exact."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


class Subspace:
    """A linear subspace of R^n spanned by rational vectors.

    The stored basis is the canonical reduced row echelon form, so two
    Subspaces compare equal exactly when they are the same subspace.
    Dependent spanning vectors are accepted and reduced away.
    """

    __slots__ = ("n", "basis", "_pivots")

    def __init__(self, n, vectors=()):
        if n < 1:
            raise ValueError("ambient dimension must be positive")
        vecs = [tuple(Fraction(v) for v in vec) for vec in vectors]
        for v in vecs:
            if len(v) != n:
                raise ValueError(f"vector of length {len(v)} in R^{n}")
        basis, pivots = rref(vecs, n)
        self.n = n
        self.basis = tuple(basis)
        self._pivots = tuple(pivots)

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def full(cls, n):
        return cls.coordinate(n, range(n))

    @classmethod
    def coordinate(cls, n, axes):
        vecs = []
        for i in axes:
            e = [0] * n
            e[i] = 1
            vecs.append(e)
        return cls(n, vecs)

    @property
    def dim(self):
        return len(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, self.basis))

    def __repr__(self):
        rows = ", ".join("(" + ", ".join(str(v) for v in r) + ")" for r in self.basis)
        return f"Subspace(n={self.n}, dim={self.dim}, basis=[{rows}])"

    def sort_key(self):
        return (self.dim, self.basis)

    def contains(self, other):
        return self.n == other.n and subspace_sum(self, other).dim == self.dim

    def matrix(self):
        """Basis as a float array of shape (dim, n)."""
        return np.array([[float(v) for v in r] for r in self.basis], dtype=float).reshape(self.dim, self.n)

    def projector(self):
        """Exact orthogonal projection matrix onto this subspace, as nested Fractions."""
        n, d = self.n, self.dim
        if d == 0:
            return [[Fraction(0)] * n for _ in range(n)]
        B = self.basis
        gram = [[builtins.sum((a * b for a, b in zip(B[i], B[j])), Fraction(0)) for j in range(d)] for i in range(d)]
        ginv = _invert(gram)
        # P = B^T G^{-1} B
        GB = [[builtins.sum((ginv[i][t] * B[t][c] for t in range(d)), Fraction(0)) for c in range(n)] for i in range(d)]
        return [[builtins.sum((B[t][r] * GB[t][c] for t in range(d)), Fraction(0)) for c in range(n)] for r in range(n)]

    def projector_float(self):
        return np.array([[float(v) for v in row] for row in self.projector()], dtype=float)

    def orthonormal_basis(self):
        """Float orthonormal basis, shape (n, dim)."""
        if self.dim == 0:
            return np.zeros((self.n, 0))
        q, _ = np.linalg.qr(self.matrix().T)
        return q


def _invert(a):
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular Gram matrix")
    return [list(r[n:]) for r in red[:n]]


def _check_ambient(U, W):
    if U.n != W.n:
        raise ValueError(f"ambient dimension mismatch: {U.n} vs {W.n}")


def subspace_sum(U, W):
    _check_ambient(U, W)
    return Subspace(U.n, U.basis + W.basis)


# the mathematical name; shadows the builtin only as a module attribute
sum = subspace_sum


def orthocomplement(U):
    return Subspace(U.n, nullspace(U.basis, U.n))


def intersect(U, W):
    """U ∩ W as the common nullspace of the stacked orthocomplement bases."""
    _check_ambient(U, W)
    duals = orthocomplement(U).basis + orthocomplement(W).basis
    return Subspace(U.n, nullspace(duals, U.n))


def proj_dim(V, W):
    """dim of the orthogonal projection of W onto V, i.e. dim W - dim(W ∩ V^⊥).

    Symmetric in its arguments.
    """
    _check_ambient(V, W)
    return W.dim - intersect(W, orthocomplement(V)).dim


def grassmann_dim(m, n):
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    return m * (n - m)


def schubert_dim(n, k, m, l):
    """dim {V in G(k,n) : dim pi_V(W) <= l} for a fixed W in G(m,n)."""
    for name, val in (("n", n), ("k", k), ("m", m), ("l", l)):
        if not 0 <= val <= n:
            raise ConditionError(f"0 <= {name} <= n fails ({name}={val}, n={n})")
    if n - k < m - l:
        raise ConditionError(f"n-k >= m-l fails ({n - k} < {m - l})")
    if l > k:
        raise ConditionError(f"l <= k fails (l={l}, k={k})")
    if l > m:
        raise ConditionError(f"l <= m fails (l={l}, m={m})")
    return grassmann_dim(k - l, n - m) + grassmann_dim(l, n - (k - l))


def exceptional_locus_dim(n, k, m, l):
    """dim {V in G(k,n) : dim pi_L(V) <= m} for a fixed L in G(l,n).

    Zero below the generic lower bound max(0, l+k-n), full k(n-k) above the
    trivial upper bound min(l, k), and k(n-k) - (k-m)(l-m) in between.
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    if not 0 <= l <= n:
        raise ValueError(f"need 0 <= l <= n, got l={l}")
    if not -1 <= m <= n:
        raise ValueError(f"need -1 <= m <= n, got m={m}")
    if m < max(0, l + k - n):
        return 0
    if m > min(l, k):
        return k * (n - k)
    return k * (n - k) - (k - m) * (l - m)


@dataclass(frozen=True)
class AffinePlane:
    """A k-plane dir + offset with offset ⟂ dir and |offset| <= 1/2."""

    direction: Subspace
    offset: tuple

    def __post_init__(self):
        off = tuple(Fraction(v) for v in self.offset)
        if len(off) != self.direction.n:
            raise ValueError("offset length does not match ambient dimension")
        for b in self.direction.basis:
            if sum_products(b, off) != 0:
                raise ValueError("offset is not orthogonal to the direction")
        if sum_products(off, off) > Fraction(1, 4):
            raise ValueError("offset norm exceeds 1/2")
        object.__setattr__(self, "offset", off)

    @classmethod
    def through_origin(cls, direction):
        return cls(direction, (0,) * direction.n)

    @property
    def n(self):
        return self.direction.n

    @property
    def dim(self):
        return self.direction.dim

    def offset_float(self):
        return np.array([float(v) for v in self.offset])


def sum_products(u, v):
    total = Fraction(0)
    for a, b in zip(u, v):
        total += a * b
    return total


@dataclass(frozen=True)
class Slab:
    """V_r = N_r(V) ∩ B^n(0,1) for an affine plane V."""

    plane: AffinePlane
    radius: float

    def __post_init__(self):
        if not 0 < self.radius < 1:
            raise ValueError("slab radius must lie in (0, 1)")


def _op_norm(M):
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def _direction_pair(V1, V2):
    if isinstance(V1, AffinePlane) != isinstance(V2, AffinePlane):
        raise TypeError("metric arguments must both be Subspaces or both AffinePlanes")
    d1 = V1.direction if isinstance(V1, AffinePlane) else V1
    d2 = V2.direction if isinstance(V2, AffinePlane) else V2
    _check_ambient(d1, d2)
    if d1.dim != d2.dim:
        raise ValueError(f"metric on G(k,n) needs equal dimensions, got {d1.dim} and {d2.dim}")
    return d1, d2


def metric_d(V1, V2):
    """||pi_1 - pi_2|| for subspaces; adds |x_1 - x_2| for affine planes."""
    d1, d2 = _direction_pair(V1, V2)
    val = _op_norm(d1.projector_float() - d2.projector_float())
    if isinstance(V1, AffinePlane):
        val += float(np.linalg.norm(V1.offset_float() - V2.offset_float()))
    return val


def metric_rho(V1, V2):
    """Smallest rho with B^n(0,1) ∩ V1 contained in the rho-neighbourhood of V2."""
    d1, d2 = _direction_pair(V1, V2)
    n = d1.n
    Q = np.eye(n) - d2.projector_float()
    if not isinstance(V1, AffinePlane):
        return _op_norm(Q @ d1.projector_float())
    x1, x2 = V1.offset_float(), V2.offset_float()
    # points of V1 in the ball: x1 + v, v in dir(V1), |v| <= R
    R = float(np.sqrt(max(0.0, 1.0 - x1 @ x1)))
    c = Q @ x1 - x2
    M = Q @ d1.orthonormal_basis()
    return _max_norm_on_ball(c, M, R)


def _max_norm_on_ball(c, M, R):
    """max |c + M u| over |u| <= R (attained on the sphere |u| = R)."""
    if M.shape[1] == 0 or R == 0.0:
        return float(np.linalg.norm(c))
    H = M.T @ M
    g = M.T @ c
    lam, vecs = np.linalg.eigh(H)
    gc = vecs.T @ g
    top = lam[-1]
    scale = max(1.0, abs(top), float(np.abs(gc).max()))
    tol = 1e-12 * scale
    cands = []

    def value(u):
        return float(np.linalg.norm(c + M @ u))

    on_top = np.abs(lam - top) <= tol
    if np.all(np.abs(gc[on_top]) <= tol):
        # stationary point may sit at mu = top; fill the rest with a top eigenvector
        coef = np.zeros_like(gc)
        rest = ~on_top
        coef[rest] = gc[rest] / (top - lam[rest])
        r2 = R * R - coef @ coef
        if r2 >= 0:
            coef_top = coef.copy()
            coef_top[np.argmax(on_top)] = np.sqrt(r2)
            cands.append(vecs @ coef_top)
    # secular equation |(mu I - H)^{-1} g| = R for mu > top
    def unorm(mu):
        return np.linalg.norm(gc / (mu - lam))

    lo = top + 1e-15 * scale
    hi = top + np.linalg.norm(gc) / R + scale
    while unorm(hi) > R:
        hi = top + 2 * (hi - top)
    if unorm(lo) > R:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if unorm(mid) > R:
                lo = mid
            else:
                hi = mid
        cands.append(vecs @ (gc / (hi - lam)))
    # always consider the top eigen-directions as a safeguard
    e = vecs[:, -1]
    cands.extend([R * e, -R * e])
    return max(value(u) for u in cands)


def rescale_star(V, scale):
    """(L(V^⊥))^⊥ for the diagonal dilation L = diag(scale)."""
    scale = [Fraction(s) for s in scale]
    if len(scale) != V.n:
        raise ValueError("scale length does not match ambient dimension")
    if any(s <= 0 for s in scale):
        raise ValueError("scale entries must be positive")
    perp = orthocomplement(V)
    stretched = Subspace(V.n, [[s * v for s, v in zip(scale, b)] for b in perp.basis])
    return orthocomplement(stretched)


def slab_membership(slab, x):
    """Whether x (shape (n,) or (M, n)) lies in the slab; vectorised over rows."""
    x = np.asarray(x, dtype=float)
    plane = slab.plane
    Q = np.eye(plane.n) - plane.direction.projector_float()
    pts = np.atleast_2d(x)
    dist = np.linalg.norm(pts @ Q.T - plane.offset_float(), axis=1)
    inside = (np.linalg.norm(pts, axis=1) <= 1.0) & (dist <= slab.radius)
    return bool(inside[0]) if x.ndim == 1 else inside


def parse_subspace(text):
    """Parse the plain-text format: 'n d' then d rows of n rationals."""
    from .ratmath import to_rational

    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    return _parse_subspace_lines(lines, to_rational)[0]


def _parse_subspace_lines(lines, conv):
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"bad subspace header {lines[0]!r}")
    n, d = int(head[0]), int(head[1])
    if len(lines) < 1 + d:
        raise ValueError("truncated subspace block")
    rows = []
    for ln in lines[1:1 + d]:
        vals = ln.split()
        if len(vals) != n:
            raise ValueError(f"expected {n} entries, got {ln!r}")
        rows.append([conv(v) for v in vals])
    U = Subspace(n, rows)
    if U.dim != d:
        raise ValueError(f"rows are dependent: rank {U.dim} < {d}")
    return U, lines[1 + d:]


def format_subspace(U):
    from .ratmath import format_rational

    out = [f"{U.n} {U.dim}"]
    out += [" ".join(format_rational(v) for v in row) for row in U.basis]
    return "\n".join(out) + "\n"


def load_subspace(path):
    return parse_subspace(Path(path).read_text())


def save_subspace(U, path):
    Path(path).write_text(format_subspace(U))
