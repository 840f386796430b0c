# Brascamp-Lieb exponents over a finite lattice of candidate subspaces.
from fractions import Fraction as F

from exproj.bounds import Problem, lambda_p
from exproj.brascamplieb import BLConfig, bl_constant, describe_subspace, lambda_p_crosscheck, lattice_closure
from exproj.grassmann import Subspace

lw = [Subspace.coordinate(3, axes) for axes in ((0, 1), (0, 2), (1, 2))]
fam = lattice_closure(lw)
print("candidates:", len(fam))
for p in [F(1), F(5, 4), F(3, 2), F(2), F(3)]:
    res = bl_constant(BLConfig(3, lw, p), fam)
    print("p=%-4s BL >= %-5s critical L = %s" % (p, res.value, describe_subspace(res.critical)))

# random patches never beat lambda_p on the admissible coordinate subspaces
rep = lambda_p_crosscheck(Problem(3, 1), 1, 3, trials=50, seed=1)
print("crosscheck:", rep.checks, "checks,", len(rep.violations), "violations; lambda_3 =", lambda_p(Problem(3, 1), 1, 3))
