# The upper-bound engine: m(t, l), lambda_p, s_star and the best bound
# among all known estimates.
from fractions import Fraction as F

from exproj.bounds import Problem, best_upper, lambda_p, m_of, s_star_argmax, upper_bound_classical

prob = Problem(3, 1)
for t in range(prob.gdim):
    print("t=%d  m(t, .) =" % t, [m_of(prob, t, l) for l in range(prob.n + 1)],
          " lambda_3 =", lambda_p(prob, t, 3))

a = F(3, 2)
for t in range(prob.gdim):
    q, val = s_star_argmax(prob, a, t)
    print("s_star(a=3/2, t=%d) = %s at q = %s" % (t, val, q))

# sweep s at fixed a and show which estimate wins
for s in [F(1, 10), F(1, 4), F(2, 5), F(1, 2), F(7, 10), F(9, 10)]:
    b = best_upper(prob, a, s)
    others = ", ".join(str(c) for c in upper_bound_classical(prob, a, s))
    print("s=%-5s best %-18s | %s" % (s, b, others))

# k(n-k) - min(k, n-k) is reached at s = ka/n
for n, k in [(4, 2), (5, 2), (6, 3)]:
    p = Problem(n, k)
    a = F(7, 3)
    print((n, k), "T(a, ka/n) <=", best_upper(p, a, F(k, n) * a))
