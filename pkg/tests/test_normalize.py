from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affembed.errors import UnsupportedTowerShape
from affembed.fields import QQ
from affembed.graded import subduct
from affembed.normalize import (
    conductor,
    conductor_membership,
    extension_conductor_check,
    invert_luroth,
    luroth_generator,
    normalize_curve,
)
from affembed.unipoly import RationalFunction, UniPoly

from conftest import pres, svar


def rf(p):
    return RationalFunction(p, p**0)


def test_luroth_single_generator_unchanged():
    s = svar(QQ)
    assert luroth_generator([rf(s**2)]) == rf(s**2)
    assert luroth_generator([rf(s**2 + 1)]) == rf(s**2 + 1)


def test_luroth_cusp_gives_s():
    s = svar(QQ)
    assert luroth_generator([rf(s**2), rf(s**3)]) == rf(s)


def test_invert_luroth_expresses_s():
    s = svar(QQ)
    P, Q = invert_luroth([rf(s**2), rf(s**3)], rf(s))
    # s = w2 / w1
    assert P == {(0, 1): 1} and Q == {(1, 0): 1}


def test_normalize_cusp():
    s = svar(QQ)
    norm = normalize_curve(pres(QQ, [s**2, s**3]))
    y = svar(QQ, "y")
    assert norm.theta == s and norm.e == 1
    assert norm.expressions == [y**2, y**3]


def test_normalize_already_normal():
    s = svar(QQ)
    norm = normalize_curve(pres(QQ, [s**2]))
    assert norm.theta == s**2 and norm.e == 2


def test_normalize_single_composite_generator():
    s = svar(QQ)
    f = s**6 + 2 * s**3 + 1
    norm = normalize_curve(pres(QQ, [f]))
    # k[f] is a polynomial ring, hence its own normalization; s^3 is not in k(f)
    assert norm.theta == s**6 + 2 * s**3
    assert norm.expressions == [svar(QQ, "y") + 1]


def test_normalize_refuses_algebraic_coefficients(sqrt2):
    K, a = sqrt2
    s = svar(K)
    with pytest.raises(UnsupportedTowerShape):
        normalize_curve(pres(K, [a * s**2, a * s**3]))


def brute_conductor_exponent(limit=20):
    s = svar(QQ)
    P = pres(QQ, [s**2, s**3])
    member = [subduct(s**n, P, limit).is_member for n in range(limit + 1)]
    c = limit
    while c > 0 and member[c - 1]:
        c -= 1
    return c


def test_cusp_conductor_exact():
    s = svar(QQ)
    P = pres(QQ, [s**2, s**3])
    cond = conductor(P, normalize_curve(P))
    assert cond.exact and cond.exponent == 2 and cond.generator == s**2
    assert brute_conductor_exponent(20) == 2


def test_normal_rings_have_unit_conductor():
    s = svar(QQ)
    for gens in ([s], [s**2]):
        P = pres(QQ, gens)
        cond = conductor(P, normalize_curve(P))
        assert cond.exponent == 0 and cond.generator == UniPoly(QQ, [1], "s")


def test_bounded_conductor_elements_are_in_conductor():
    s = svar(QQ)
    P = pres(QQ, [s**2 + s, s**3])
    norm = normalize_curve(P)
    cond = conductor(P, norm)
    assert not cond.exact
    for a in cond.elements:
        assert conductor_membership(a, P, norm.theta, cond.bound)


def test_extension_conductor_cusp():
    s = svar(QQ)
    P = pres(QQ, [s**2, s**3])
    norm = normalize_curve(P)
    out = extension_conductor_check(norm, conductor(P, norm), bound=10)
    assert out["exponent"] == 2 and out["contains"] and out["minimal"]


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=3),
       st.sampled_from([[2, 3], [3, 4], [2, 5], [3, 5], [4, 6, 9]]))
def test_normalization_expressions_recompose(hc, degs):
    h = UniPoly(QQ, [0] + hc, "s")
    if h.degree < 1:
        return
    gens = [h**d for d in degs]
    norm = normalize_curve(pres(QQ, gens))
    for g, ex in zip(gens, norm.expressions):
        assert ex.compose(norm.theta) == g
    assert norm.theta.degree == h.degree * gcd(*degs)
