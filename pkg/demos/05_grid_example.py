# The integer grid whose projections are small in ~N^(2s-a) directions.
from fractions import Fraction as F

from exproj.discretized import exceptional_scan, fit_loglog_slope, slope_projection_count, st_grid_example

a, s = F(1), F(3, 4)
g = st_grid_example(16, a, s)
print("X=%d Y=%d #A=%d slopes |k|<=%d" % (g.X, g.Y, g.size, g.slope_max))
for k in (0, 1, 4, 5, 17, 18, 20):
    print("  slope %3d -> %d distinct values" % (k, slope_projection_count(g, k)))

Ns = [256, 1024, 4096]
counts = []
for N in Ns:
    ex, _ = exceptional_scan(st_grid_example(N, a, s), 5)
    counts.append(len(ex))
    print("N=%5d: %d slopes with count <= 5 N^s" % (N, len(ex)))
print("fitted exponent %.3f (expected 2s - a = %s)" % (fit_loglog_slope(Ns, counts), 2 * s - a))
