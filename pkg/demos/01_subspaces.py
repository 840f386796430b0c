# Exact subspace arithmetic: sums, intersections, projection dimensions and
# the two metrics on the Grassmannian.
from fractions import Fraction

from exproj.grassmann import (Subspace, AffinePlane, intersect, metric_d, metric_rho,
                              orthocomplement, proj_dim, rescale_star, subspace_sum)

U = Subspace(3, [[1, 1, 0], [0, 0, 1]])
W = Subspace(3, [[1, 1, 1]])
print("U =", U)
print("U + W has dim", subspace_sum(U, W).dim, "; U cap W =", intersect(U, W))
print("complement of span(1,2):", orthocomplement(Subspace(2, [[1, 2]])))

# projection dimension is symmetric
V = Subspace(3, [[1, 1, 0]])
X = Subspace(3, [[1, 0, 0], [0, 1, 1]])
print("dim pi_V(X) =", proj_dim(V, X), " dim pi_X(V) =", proj_dim(X, V))

# metrics: for lines both equal the sine of the angle
a, b = Subspace(2, [[1, 0]]), Subspace(2, [[1, 1]])
print("d = %.6f  rho = %.6f" % (metric_d(a, b), metric_rho(a, b)))

P1 = AffinePlane(Subspace(3, [[1, 0, 0]]), (0, Fraction(1, 4), 0))
P2 = AffinePlane(Subspace(3, [[1, 1, 0]]), (0, 0, Fraction(1, 3)))
print("affine lines: d = %.6f  rho = %.6f" % (metric_d(P1, P2), metric_rho(P1, P2)))

# the dual rescaling map
print("rescale_star(span(1,1), (1,5)) =", rescale_star(Subspace(2, [[1, 1]]), (1, 5)))
