import itertools
from fractions import Fraction

import pytest

from qlimit.algebra import ONE_POLY, StarPolynomial, poly_star, u
from qlimit.presentations import (
    build_circle, build_contraction, build_suq, e_symbol, inversion_count, is_star_closed,
)
from qlimit.scalars import ZERO, Q, rf_eval

L = StarPolynomial.letter


def brute_inversions(t):
    return sum(1 for a, b in itertools.combinations(range(len(t)), 2) if t[a] > t[b])


def test_inversion_examples():
    assert inversion_count((1, 2, 3)) == 0
    assert inversion_count((2, 1)) == 1
    assert inversion_count((3, 2, 1)) == 3


def test_e_symbol_examples():
    for n in range(1, 5):
        assert e_symbol(tuple(range(1, n + 1)), n) == 1
    assert e_symbol((2, 1), 2) == -Q
    assert e_symbol((1, 1), 2) == ZERO
    with pytest.raises(IndexError):
        e_symbol((1, 3), 2)


def test_suq1_relations():
    rels = {r.body for r in build_suq(1).relations}
    x = L(u(1, 1, 1))
    assert x * x.star() - ONE_POLY in rels
    assert x.star() * x - ONE_POLY in rels
    assert x - ONE_POLY in rels


def test_suq2_determinant_relations():
    P = build_suq(2)
    bodies = {r.label: r.body for r in P.relations}
    a, b, c, d = (L(u(i, j, 2)) for i, j in [(1, 1), (1, 2), (2, 1), (2, 2)])
    assert bodies["det(1,2)"] == a * d - Q * b * c - ONE_POLY
    assert bodies["det(1,1)"] == a * b - Q * b * a
    assert P.meta["base_relation_count"] == 12
    assert P.star_closed


@pytest.mark.parametrize("n", [1, 2, 3])
def test_suq_star_closed_and_generators_known(n):
    P = build_suq(n)
    assert P.star_closed
    assert P.weakly_admissible and P.admissibility_note == "unitarity bounds generator norms"
    assert len(P.generators) == n * n


def test_distinct_tuples_flag():
    P = build_suq(2, det_tuples="distinct")
    labels = [r.label for r in P.relations if r.label.startswith("det")]
    assert "det(1,1)" not in labels and "det(1,2)" in labels


def test_contraction():
    P = build_contraction(2)
    assert len(P.norm_relations) == 4 and not P.algebraic_relations
    assert len(build_contraction(1).relations) == 1
    assert P.star_closed
    assert all(r.bound == Fraction(1) for r in P.relations)


def test_circle():
    P = build_circle()
    assert len(P.relations) == 2 and P.weakly_admissible and P.star_closed


def test_levels_below_one_rejected():
    with pytest.raises(IndexError):
        build_suq(0)
    with pytest.raises(IndexError):
        build_contraction(0)


def test_star_closure_detects_missing_adjoint():
    from qlimit.presentations import algebraic

    r = algebraic(L(u(1, 1, 2)) * L(u(1, 2, 2)) - ONE_POLY, "lonely")
    assert not is_star_closed([r])
    assert is_star_closed([r, algebraic(poly_star(r.body), "lonely*")])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_e_symbol_exhaustive(n):
    for t in itertools.product(range(1, n + 1), repeat=n):
        e = e_symbol(t, n)
        if len(set(t)) < n:
            assert e == ZERO
        else:
            assert e == (-Q) ** brute_inversions(t)
            assert rf_eval(e, 1) == (-1) ** brute_inversions(t)
