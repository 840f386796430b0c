from fractions import Fraction as F
import random

import pytest
from hypothesis import given, settings, strategies as st

from exproj.bounds import (
    Problem, best_upper, candidate_qs, lambda_p, m_closed_form, m_of, s_star, s_star_dual,
    upper_bound_classical, upper_bound_mainthm, verify_theorem1,
)
from exproj.errors import ConditionError
from oracles import m_direct, s_star_lp

P = Problem

problems = st.integers(2, 8).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1)))


def test_problem_validation():
    with pytest.raises(ValueError):
        Problem(3, 3)
    assert Problem(4, 2).gdim == 4


@pytest.mark.parametrize("n,k,t,l,m", [(2, 1, 0, 1, 1), (3, 1, 1, 0, 0), (3, 1, 1, 2, 1)])
def test_m_of_examples(n, k, t, l, m):
    assert m_of(P(n, k), t, l) == m


def test_m_of_range_error():
    with pytest.raises(ValueError):
        m_of(P(2, 1), 1, 0)


def test_m_of_floors_rational_t():
    assert m_of(P(3, 1), F(3, 2), 2) == m_of(P(3, 1), 1, 2)


@pytest.mark.parametrize("u,l,m", [(1, 1, 1), (1, 0, 0), (1, 3, 1)])
def test_m_closed_form_examples(u, l, m):
    assert m_closed_form(P(3, 1), u, l) == m


def test_m_of_matches_direct_scan_and_range():
    for n in range(2, 9):
        for k in range(1, n):
            prob = P(n, k)
            for t in range(prob.gdim):
                for l in range(n + 1):
                    m = m_of(prob, t, l)
                    assert m == m_direct(n, k, t, l)
                    assert 0 <= m <= min(l, k) + 1
                    if t:
                        assert m >= m_of(prob, t - 1, l)


def test_closed_form_agrees_where_used():
    # agreement on u <= min(k, n-k); the full-range statement is tested in
    # the acceptance suite
    for n in range(2, 13):
        for k in range(1, n):
            prob = P(n, k)
            for u in range(1, min(k, n - k) + 1):
                for l in range(n + 1):
                    assert m_closed_form(prob, u, l) == m_of(prob, prob.gdim - u, l)


def test_closed_form_first_disagreement():
    # m(t, l) is 2 here but the quadratic-root formula gives 1: the scan sees
    # E(1, 4) = 0 because 1 < l + k - n = 2
    prob = P(4, 2)
    assert m_of(prob, 0, 4) == 2
    assert m_closed_form(prob, 4, 4) == 1


@pytest.mark.parametrize("n,k,t,p,val", [(2, 1, 0, 2, 0), (2, 1, 0, 1, 1), (3, 1, 1, 3, 0)])
def test_lambda_examples(n, k, t, p, val):
    assert lambda_p(P(n, k), t, p) == val


def test_lambda_rejects_small_p():
    with pytest.raises(ValueError):
        lambda_p(P(2, 1), 0, F(1, 2))


def test_lambda_nonincreasing_in_p():
    for n in range(2, 7):
        for k in range(1, n):
            for t in range(k * (n - k)):
                vals = [lambda_p(P(n, k), t, F(p, 4)) for p in range(4, 30)]
                assert all(a >= b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("n,k,a,t,val", [
    (2, 1, F(1), 0, F(1, 2)),
    (3, 1, F(3, 2), 1, F(1, 2)),
    (3, 1, F(3, 2), 0, F(1, 4)),
])
def test_s_star_examples(n, k, a, t, val):
    assert s_star(P(n, k), a, t) == val


def test_s_star_domain():
    with pytest.raises(ValueError):
        s_star(P(2, 1), F(2), 0)


@settings(max_examples=300, deadline=None)
@given(problems, st.data())
def test_s_star_vs_lp_and_dual(nk, data):
    n, k = nk
    prob = P(n, k)
    a = F(data.draw(st.integers(1, 12 * n - 1)), 12)
    t = data.draw(st.integers(0, prob.gdim - 1))
    v = s_star(prob, a, t)
    assert abs(float(v) - s_star_lp(n, k, a, t)) < 1e-9
    assert s_star_dual(prob, a, t) == v
    # zero at q = 0 and every candidate q lies in [0, 1]
    assert all(0 <= q <= 1 for q in candidate_qs(prob, t))


def test_s_star_monotone():
    for n in range(2, 7):
        for k in range(1, n):
            prob = P(n, k)
            a_grid = [F(j, 6) for j in range(1, 6 * n)]
            for t in range(prob.gdim):
                row = [s_star(prob, a, t) for a in a_grid]
                assert all(x <= y for x, y in zip(row, row[1:]))
                if t:
                    assert all(s_star(prob, a, t - 1) <= s_star(prob, a, t) for a in a_grid)


@pytest.mark.parametrize("n,k,a,s,val", [(3, 1, F(3, 2), F(1, 2), 1), (2, 1, F(1), F(1, 2), 0), (2, 1, F(1), F(3, 4), 1)])
def test_mainthm_examples(n, k, a, s, val):
    assert upper_bound_mainthm(P(n, k), a, s).value == val


def test_mainthm_range():
    with pytest.raises(ConditionError, match="min"):
        upper_bound_mainthm(P(3, 1), F(1), F(1))


def _classical(prob, a, s):
    return {b.source: b.value for b in upper_bound_classical(prob, a, s)}


def test_classical_examples():
    c = _classical(P(3, 2), F(5, 2), F(3, 2))
    assert c["kaufman_mattila"] == F(3, 2) and c["falconer"] == 1 and c["he"] == 1 and c["theorem1"] == 1
    assert _classical(P(2, 1), F(1), F(1, 2))["ren_wang"] == 0
    assert _classical(P(5, 1), F(1, 2), F(1, 4))["falconer"] == F(15, 4)


def test_best_upper_examples():
    b = best_upper(P(3, 1), F(13, 10), F(2, 5))
    assert b.value == 1 and b.source.split("(")[0] in ("mainthm", "theorem1")
    assert best_upper(P(2, 1), F(1), F(1, 2)).value == 0
    assert best_upper(P(3, 2), F(5, 2), F(8, 5)).value == 1
    # ties prefer the mainthm tag
    assert best_upper(P(3, 2), F(5, 2), F(8, 5)).source.startswith("mainthm")


def test_best_upper_nondecreasing_in_s():
    for n in range(2, 6):
        for k in range(1, n):
            prob = P(n, k)
            for i in range(1, 10 * n):
                a = F(i, 10)
                col = [best_upper(prob, a, F(j, 10)).value for j in range(1, 10 * k) if F(j, 10) < min(k, a)]
                assert all(x <= y for x, y in zip(col, col[1:]))


def test_theorem1_beats_falconer_range():
    for n in range(2, 8):
        for k in range(1, n // 2 + 1):
            prob = P(n, k)
            for i in range(1, 20 * n):
                a = F(i, 20)
                s = F(k, n) * a
                if not 0 < s < min(k, a):
                    continue
                c = _classical(prob, a, s)
                assert (c["theorem1"] < c["falconer"]) == (a < F(n * k, n - k))


@pytest.mark.parametrize("n,k", [(3, 1), (5, 2), (8, 4)])
def test_verify_examples(n, k):
    rep = verify_theorem1(P(n, k))
    assert rep.passed and len(rep.rows) == n + 1


def test_verify_all_up_to_16():
    assert all(verify_theorem1(P(n, k)).passed for n in range(2, 17) for k in range(1, n))


def test_threshold_sets_nest():
    # E_s only grows with s: a direction whose projection count is below a
    # threshold stays below any larger one
    rng = random.Random(0)
    for _ in range(200):
        counts = [rng.randint(0, 50) for _ in range(30)]
        s1, s2 = sorted(rng.sample(range(60), 2))
        assert {i for i, c in enumerate(counts) if c < s1} <= {i for i, c in enumerate(counts) if c < s2}
