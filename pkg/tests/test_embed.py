import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affembed.embed import (
    ALGEBRAIC,
    SPECIALIZED,
    EmbeddingProblem,
    construct_embedding,
    discover_coefficient_field,
    integer_kernel,
    jacobian_trdeg,
    specialization_points,
    verify_certificate,
)
from affembed.errors import VerificationFailed
from affembed.fields import QQ
from affembed.unipoly import UniPoly

from conftest import pres, svar


@pytest.fixture
def ex1(sqrt2):
    K, a = sqrt2
    s = svar(K)
    problem = EmbeddingProblem(pres(K, [a * s**2, a * s**3]), bound=10, seed=1)
    return problem, construct_embedding(problem), a


def test_integer_kernel():
    assert integer_kernel([2, 3]) == [(3, -2)]


def test_lattice_ratio_is_u(Qu):
    U, u = Qu
    s = svar(U)
    rep = discover_coefficient_field(EmbeddingProblem(pres(U, [u * s**2, u * s**3])))
    assert [tuple(v) for v in rep.lattice] == [(3, -2)]
    assert rep.generators == [u] and rep.trdeg == 1


def test_lattice_ratio_is_alpha(sqrt2):
    K, a = sqrt2
    s = svar(K)
    rep = discover_coefficient_field(EmbeddingProblem(pres(K, [a * s**2, a * s**3])))
    assert rep.generators == [a] and rep.trdeg == 0


def test_hidden_u_found_in_degree_five(Qu):
    U, u = Qu
    s = svar(U)
    rep = discover_coefficient_field(EmbeddingProblem(pres(U, [s**2 + u * s, s**3]), bound=6))
    assert rep.generators == [u] and rep.trdeg == 1
    assert rep.sources == ["leading:5"]


def test_ex1_certificate(ex1):
    problem, cert, a = ex1
    F = cert.field_tower
    c = F.gen()
    t = svar(F, "t")
    assert cert.case == ALGEBRAIC and cert.d == 1
    assert len(cert.adjunctions) == 1 and c**2 == F(a)
    assert cert.images == [t**2, c.inverse() * t**3]
    assert all(cert.verification["checks"].values())
    assert cert.verification["trdeg_source"] == 1


def test_ex1_witness_for_t(ex1):
    _, cert, _ = ex1
    w = cert.verification["witnesses"][-1]
    assert w["generator"] == "t" and "X^2" in w["polynomial"]


def test_identity_certificate():
    s = svar(QQ)
    problem = EmbeddingProblem(pres(QQ, [s]))
    cert = construct_embedding(problem)
    assert cert.case == ALGEBRAIC and cert.field_tower == QQ
    assert cert.images == [svar(QQ, "t")] and cert.d == 1 and cert.adjunctions == []
    verify_certificate(problem, cert)


def test_hidden_coefficient_reclassification(Qu):
    U, u = Qu
    s = svar(U)
    problem = EmbeddingProblem(pres(U, [s**2 + u * s, s**3]), bound=6)
    cert = construct_embedding(problem)
    assert cert.rejected[0]["u0"] == 0
    assert cert.rejected[0]["reason"]["rank_drop_at"] == 6
    assert cert.case == ALGEBRAIC and "u" in cert.field_tower.generators
    t = svar(cert.field_tower, "t")
    assert cert.images == [t**2 + u * t, t**3]


def test_specialized_case(Qu):
    U, u = Qu
    s = svar(U)
    problem = EmbeddingProblem(pres(U, [s**2 + u * s]))
    cert = construct_embedding(problem)
    assert cert.case == SPECIALIZED and cert.point.rep == 0
    assert cert.images == [svar(QQ, "t") ** 2]


def test_tampered_certificate_fails_homomorphism(ex1):
    problem, cert, _ = ex1
    t = svar(cert.field_tower, "t")
    bad = dataclasses.replace(cert, images=[cert.images[0], t**2])
    with pytest.raises(VerificationFailed) as info:
        verify_certificate(problem, bad)
    assert info.value.check == "homomorphism"


def test_wrong_degree_is_caught(ex1):
    problem, cert, _ = ex1
    F = cert.field_tower
    t = svar(F, "t")
    bad = dataclasses.replace(cert, images=[t**4, t**6])
    with pytest.raises(VerificationFailed) as info:
        verify_certificate(problem, bad)
    assert info.value.check in ("homomorphism", "degree")


def test_jacobian_trdeg(sqrt2, Qu):
    K, a = sqrt2
    s = svar(K)
    assert jacobian_trdeg([a * s**2, a * s**3], QQ) == 1
    U, u = Qu
    su = svar(U)
    assert jacobian_trdeg([u * su**2, su**3], QQ) == 2
    assert jacobian_trdeg([], QQ) == 0


def test_specialization_points_order():
    assert specialization_points(0, 5) == [0, 1, -1, 2, -2]
    assert specialization_points(1, 5) == [0, -1, 1, 2, -2]


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=4),
       st.lists(st.integers(-3, 3), min_size=2, max_size=4))
def test_certificates_over_q_verify(c1, c2):
    gens = [UniPoly(QQ, [0] + c, "s") for c in (c1, c2)]
    gens = [g for g in gens if g.degree >= 1]
    if not gens:
        return
    problem = EmbeddingProblem(pres(QQ, gens))
    cert = construct_embedding(problem)
    report = verify_certificate(problem, cert)
    assert all(report["checks"].values())
    # degree preservation
    for g, img in zip(gens, cert.images):
        assert img.degree * (cert.d if cert.t_mode == "power" else 1) == g.degree
