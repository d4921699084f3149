import random

import numpy as np
import pytest

from qlimit.algebra import ONE_POLY, ZERO_POLY, StarPolynomial, tensor, u, w
from qlimit.errors import CoherenceError, NotARepresentation, SectionsUnavailable
from qlimit.morphisms import (
    GenMorphism, IDENTITY, TensorMorphism, apply, comultiplication, projection_theta,
)
from qlimit.numeric import contraction_rep_build
from qlimit.prolimit import (
    VIA_SECTIONS, CoherentElement, InverseSystem, check_coherence, direct_eval, gamma_split,
    generator_sequence, hypothesis_check, iota, kappa_factor, limit_delta_apply, project,
    random_coherent_words, validate_system,
)

L = StarPolynomial.letter


@pytest.fixture(scope="module")
def W4():
    return InverseSystem.contraction(4)


@pytest.fixture(scope="module")
def SU3():
    return InverseSystem.suq(3)


@pytest.fixture(scope="module")
def SU3_naive():
    return InverseSystem.suq(3, sections="naive")


def corrupted_theta(n=3):
    th = projection_theta(n)
    images = dict(th.images)
    images[u(1, 1, n)] = L(u(1, 2, n - 1))
    return GenMorphism(f"theta_{n}[corrupted]", th.source, th.target, images)


def test_validate_suq(SU3):
    rep = validate_system(SU3, 3)
    assert rep.status == "PASS"


def test_validate_w(W4):
    assert validate_system(W4, 4).status == "PASS"


def test_validate_corrupted_theta():
    with pytest.raises(ValueError):
        InverseSystem("u", 3, thetas={3: corrupted_theta()})
    sys_ = InverseSystem("u", 3, thetas={3: corrupted_theta()}, validate=False)
    rep = validate_system(sys_, 3)
    assert rep.status == "FAIL"
    assert "row(1,1)" in rep.witness and "theta_3[corrupted]" in rep.witness


def test_gamma_examples(W4):
    e = gamma_split(W4, 2, w(1, 2, 2))
    assert e.tail_rule == VIA_SECTIONS
    assert e.component(1) == ZERO_POLY
    assert e.component(2) == L(w(1, 2, 2))
    assert e.component(3) == L(w(1, 2, 3))
    e = gamma_split(W4, 1, w(1, 1, 1))
    assert all(e.component(j) == L(w(1, 1, j)) for j in range(1, 6))


def test_projection_after_gamma_is_identity(W4):
    rng = random.Random(0)
    for _ in range(20):
        i = rng.randint(1, 4)
        g = w(rng.randint(1, i), rng.randint(1, i), i)
        assert project(gamma_split(W4, i, g), i) == L(g)


def test_gamma_needs_sections(SU3):
    with pytest.raises(SectionsUnavailable):
        gamma_split(SU3, 2, u(1, 1, 2))
    with pytest.raises(SectionsUnavailable):
        hypothesis_check(SU3, 3)


def test_coherence_examples(SU3):
    assert check_coherence(generator_sequence(SU3, u(1, 1, 3), 3), 3).status == "PASS"
    assert check_coherence(CoherentElement.constant(SU3), 3).status == "PASS"
    bad = CoherentElement.from_sequence(SU3, {2: L(u(1, 2, 2)), 1: ONE_POLY})
    rep = check_coherence(bad, 2)
    assert rep.status == "FAIL" and "theta_2" in rep.witness


def test_coherent_components_follow_theta(SU3):
    S = SU3
    e = CoherentElement(S, 3, L(u(1, 2, 3)) * L(u(2, 1, 3)) + L(u(3, 3, 3)))
    for k in (3, 2):
        assert S.nf(k - 1, apply(S.theta(k), e.component(k))) == S.nf(k - 1, e.component(k - 1))


def test_truncated_tail_has_no_upper_levels(SU3):
    e = generator_sequence(SU3, u(1, 1, 2), 2)
    with pytest.raises(CoherenceError):
        e.component(3)


def test_hypothesis_w(W4):
    rep = hypothesis_check(W4, 4)
    assert rep.status == "PASS"
    assert all(p.status == "PASS" for p in rep.parts)


def test_hypothesis_naive_suq(SU3_naive):
    rep = hypothesis_check(SU3_naive, 3)
    assert rep.status == "FAIL"
    part = next(p for p in rep.parts if p.data["i"] == 2 and p.data["j"] == 3)
    assert part.status == "FAIL"
    assert "cyclic permutation point [0,0,1;1,0,0;0,1,0]" in part.witness
    assert abs(part.residual - 1.0) <= 1e-9
    # the residual 1 - sum_{k<=2} u(1,k)u(1,k)* is u(1,3)u(1,3)* modulo the ideal, and nonzero
    row = ONE_POLY - sum((L(u(1, k, 3)) * L(u(1, k, 3, True)) for k in (1, 2)), ZERO_POLY)
    corner = StarPolynomial.monomial((u(1, 3, 3), u(1, 3, 3, True)))
    assert SU3_naive.nf(3, row) == SU3_naive.nf(3, corner)
    assert not SU3_naive.nf(3, row).is_zero()


def test_hypothesis_depth_one():
    assert hypothesis_check(InverseSystem.suq(1, sections="naive"), 1).status == "PASS"


def test_iota_examples(W4):
    e = iota(W4, {n: w(1, 1, n) for n in range(1, 5)})
    assert e.component(4) == L(w(1, 1, 4))
    g = gamma_split(W4, 3, w(2, 3, 3))
    assert iota(W4, g).component(3) == L(w(2, 3, 3))
    with pytest.raises(CoherenceError):
        iota(W4, {2: w(1, 1, 2), 3: w(2, 2, 3)})
    with pytest.raises(CoherenceError):
        iota(W4, {2: L(w(1, 1, 2)) * L(w(1, 2, 2))})


def test_kappa_examples(W4):
    rng = np.random.default_rng(4)
    dim = 3
    images = {}
    from qlimit.numeric import MatrixRep, random_unitary
    from qlimit.presentations import build_contraction

    P = build_contraction(4)
    for g in P.generators:
        images[g] = random_unitary(dim, rng) if g.i == g.j else 0.5 * random_unitary(dim, rng)
    rho = MatrixRep(P, dim, images)
    e = iota(W4, {n: w(2, 2, n) for n in range(2, 5)})
    assert np.allclose(kappa_factor(rho, e), images[w(2, 2, 4)], atol=1e-12)
    one = CoherentElement.constant(W4)
    assert np.array_equal(kappa_factor(rho, one), np.eye(dim))


def test_kappa_rejects_non_representation():
    rho = contraction_rep_build(3, 2, 1)
    g = next(iter(rho.images))
    rho.images[g] = rho.images[g] * 3
    with pytest.raises(NotARepresentation):
        kappa_factor(rho, CoherentElement.constant(InverseSystem.contraction(3)))


def test_kappa_triangle(W4):
    for dim in (1, 2, 4):
        rho = contraction_rep_build(4, dim, 10 + dim)
        for e, letters in random_coherent_words(W4, 20, 4, seed=dim):
            assert np.max(np.abs(kappa_factor(rho, e) - direct_eval(rho, letters))) <= 1e-12


def test_limit_delta_examples(SU3):
    e = generator_sequence(SU3, u(1, 1, 3), 3)
    d = limit_delta_apply(SU3, e)
    for n in (1, 2, 3):
        expected = sum((tensor(L(u(1, k, n)), L(u(k, 1, n))) for k in range(1, n + 1)), ZERO_POLY)
        assert d.component(n) == expected
    one = limit_delta_apply(SU3, CoherentElement.from_sequence(SU3, {3: ONE_POLY}))
    assert all(one.component(n) == ONE_POLY for n in (1, 2, 3))


def test_limit_delta_coassociative(SU3):
    for g in SU3.presentation(3).generators:
        d = limit_delta_apply(SU3, generator_sequence(SU3, g, 3))
        for n in (1, 2, 3):
            D = comultiplication(n)
            left = TensorMorphism((D, IDENTITY))(d.component(n))
            right = TensorMorphism((IDENTITY, D))(d.component(n))
            assert left == right


@pytest.mark.parametrize("depth", [2, 3, 4])
def test_limit_delta_commutes_with_truncation(depth):
    S = InverseSystem.suq(depth)
    for g in S.presentation(depth).generators:
        for starred in (False, True):
            e = generator_sequence(S, g, depth)
            if starred:
                e = e.star()
            d = limit_delta_apply(S, e)
            for k in range(1, depth + 1):
                assert d.component(k) == apply(comultiplication(k), e.component(k))
