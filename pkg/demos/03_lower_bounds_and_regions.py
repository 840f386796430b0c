# Lower-bound constructions and the regions where upper = lower.
from fractions import Fraction as F

from exproj.bounds import Problem
from exproj.lowerbounds import best_lower, exact_regions, plateau_bound, type_bounds

prob = Problem(3, 2)
a, s = F(5, 2), F(8, 5)
for tb in type_bounds(prob, a, s):
    print(tb.type_id, "ok" if tb.conditions_met else "fails " + tb.failed, tb.value)
pl = plateau_bound(prob, a, s)
print("plateau", pl.params, pl.value)
print("best lower:", best_lower(prob, a, s))

# exact cells on a coarse grid
grid = [F(j, 10) for j in range(1, 30)]
for n, k in [(3, 1), (3, 2), (4, 2)]:
    pts = exact_regions(Problem(n, k), grid, grid)
    vals = sorted({v for _, _, v in pts})
    print("n=%d k=%d: %d exact grid cells, values %s" % (n, k, len(pts), [str(v) for v in vals]))
