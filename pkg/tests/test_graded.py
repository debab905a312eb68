from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from affembed.fields import QQ
from affembed.graded import degree_data, filtration_basis, sagbi_complete, subduct
from affembed.semigroup import NumericalSemigroup, frobenius_number, in_semigroup

from conftest import pres, svar


def brute_semigroup(gens, limit=20):
    reach = {0}
    for n in range(1, limit + 1):
        if any(n - g in reach for g in gens if n - g >= 0):
            reach.add(n)
    return reach


def test_cusp_semigroup():
    s = svar(QQ)
    sg = degree_data(pres(QQ, [s**2, s**3]), 20)
    assert sg.to_json() == {"generators": [2, 3], "d": 1, "frobenius": 1,
                            "conductor_exponent": 2}
    assert {n for n in range(21) if n in sg} == brute_semigroup([2, 3])


def test_scaled_cusp_semigroup(sqrt2):
    K, a = sqrt2
    s = svar(K)
    sg = degree_data(pres(K, [a * s**2, a * s**3]), 20)
    assert list(sg.generators) == [2, 3] and sg.d == 1


def test_full_semigroup():
    sg = degree_data(pres(QQ, [svar(QQ)]), 10)
    assert list(sg.generators) == [1] and sg.conductor_exponent == 0


def test_cusp_filtration_dims():
    s = svar(QQ)
    piece = filtration_basis(pres(QQ, [s**2, s**3]), 5)
    assert piece.dim_table() == [1, 1, 2, 3, 4, 5]


def test_polynomial_ring_filtration_dims():
    piece = filtration_basis(pres(QQ, [svar(QQ)]), 3)
    assert piece.dim_table() == [1, 2, 3, 4]


def test_hidden_coefficient_in_degree_five(Qu):
    U, u = Qu
    s = svar(U)
    w1, w2 = s**2 + u * s, s**3
    assert w1**3 - w2**2 == 3 * u * s**5 + 3 * u**2 * s**4 + u**3 * s**3
    piece = filtration_basis(pres(U, [w1, w2]), 6)
    lcs = [elem.lc for _, elem, _ in piece.leading[5]]
    # leading coefficients in degree 5 span Q + Q*u, so 3u is among them
    assert len(lcs) == 2 and U(1) in lcs and u in lcs
    assert piece.dim_table()[5] - piece.dim_table()[4] == 2


def test_subduct_examples():
    s = svar(QQ)
    P = pres(QQ, [s**2, s**3])
    r = subduct(s**5, P, 8)
    assert r.is_member and r.expression == {(1, 1): 1}
    r = subduct(s, P, 8)
    assert not r.is_member and r.remainder == s
    r = subduct(s**2 + s**3, P, 8)
    assert r.is_member and r.expression == {(1, 0): 1, (0, 1): 1}


def test_sagbi_examples(Qu):
    s = svar(QQ)
    assert sagbi_complete(pres(QQ, [s**2, s**3]), 12).added == []
    U, u = Qu
    su = svar(U)
    gens = [su**2 + u * su, su**3]
    full = sagbi_complete(pres(U, gens, U), 12)
    assert full.added == [] and not full.bounded
    over_q = sagbi_complete(pres(U, gens), 6)
    assert over_q.bounded
    (new, expr), = over_q.added
    assert new.leading_form() == 3 * u * su**5
    assert expr == {(3, 0): 1, (0, 2): -1}


def test_semigroup_helpers():
    assert frobenius_number([3, 5]) == 7
    assert in_semigroup(8, [3, 5]) and not in_semigroup(7, [3, 5])
    sg = NumericalSemigroup.from_elements([4, 6, 9])
    assert sg.d == 1 and sg.conductor_exponent == 12


gen_sets = st.lists(st.integers(min_value=2, max_value=9), min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(gen_sets)
def test_semigroup_matches_brute_force(gens):
    sg = NumericalSemigroup.from_elements(gens)
    reach = brute_semigroup(gens, 60)
    d = sg.d
    assert all(g % d == 0 for g in gens)
    for n in range(61):
        assert (n in sg) == (n in reach)
    if d == 1:
        assert sg.frobenius not in reach
        assert all(n in reach for n in range(sg.conductor_exponent, 61))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=5), min_size=1, max_size=3))
def test_subduction_of_products_and_dims(coeff_lists):
    s = svar(QQ)
    gens = []
    for cs in coeff_lists:
        g = sum((Fraction(c) * s**i for i, c in enumerate(cs) if i > 0), 0 * s)
        if g.degree >= 1:
            gens.append(g)
    if not gens:
        return
    P = pres(QQ, gens)
    N = 10
    piece = filtration_basis(P, N)
    dims = piece.dim_table()
    assert all(a <= b for a, b in zip(dims, dims[1:]))
    f = gens[0] * gens[-1]
    if f.degree <= N:
        assert subduct(f, P, N, piece).is_member
