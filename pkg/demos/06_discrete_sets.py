# delta-discretized sets: Frostman checks, greedy extraction, dyadic
# coverings, broad-narrow descent and the multilinear tally.
from fractions import Fraction as F

import numpy as np

from exproj.discretized import (PointSet, broad_narrow, check_frostman, extract_delta_s_set,
                                random_cantor_set, top_cells, verify_dyadic_covering)

rng = np.random.default_rng(0)
P = PointSet(rng.random((400, 2)), 0.01)
print("random cloud (delta, 1, 2)-set?", check_frostman(P, 1, 2).passed)
Q = extract_delta_s_set(P, 1, 2)
print("greedy subset keeps", len(Q), "of", len(P), "->", check_frostman(Q, 1, 2).passed)

cover = [(3, (i,)) for i in range(8)]
rep = verify_dyadic_covering(cover, PointSet(np.linspace(0, 1, 50), 0.01), 1, F(1, 2))
print("eight level-3 intervals: covers=%s measure=%.3f nesting=%s" % (rep.covers, rep.measure, rep.nesting_ok))

E = random_cantor_set(4, 5, 2, rng)
print(broad_narrow(E, F(1, 2), F(1, 10), K=4).text())

labels = rng.integers(0, 10, size=300)
tc = top_cells(labels, 10, 3)
print("top cells", tc.cells, tc.counts, "certificate holds:", tc.holds)
