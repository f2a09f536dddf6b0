from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest

from tautcalc.staircase import (
    GenericityError,
    InfiniteColengthError,
    alpha,
    beta,
    beta_total,
    buchberger,
    colength,
    j_m,
    leading_monomial,
    minimalize,
    monomial_poly,
    normal_form,
    printed_alpha_closed_form,
    printed_elimination_count,
    printed_polygon_region,
)


def test_minimalize():
    assert minimalize([(3, 0), (1, 1), (0, 3), (2, 1), (3, 3)]) == ((0, 3), (1, 1), (3, 0))
    assert minimalize([(0, 0), (5, 5)]) == ((0, 0),)


def test_j_m_staircases():
    assert j_m(2) == ((0, 1), (1, 0))
    assert j_m(3) == ((0, 3), (1, 1), (3, 0))
    assert j_m(4) == ((0, 6), (1, 3), (3, 1), (6, 0))
    # generators are exactly the triangular-number corners, minimalized
    for m in range(2, 8):
        raw = {(comb(m - i + 1, 2), comb(i, 2)) for i in range(1, m + 1)}
        assert set(j_m(m)) <= raw


def test_alpha_values_and_identity():
    assert [alpha(m) for m in range(2, 8)] == [1, 5, 15, 35, 70, 126]
    for m in range(2, 12):
        assert alpha(m) == comb(m + 2, 4)
        assert alpha(m) == colength([monomial_poly(c) for c in j_m(m)])


def test_printed_alpha_closed_form_diverges():
    # agrees through m = 3, then drifts
    assert printed_alpha_closed_form(2) == alpha(2)
    assert printed_alpha_closed_form(3) == alpha(3)
    assert printed_alpha_closed_form(4) == 18 and alpha(4) == 15


def test_degrevlex_leading_terms():
    p = {(2, 0): Fraction(1), (1, 1): Fraction(5), (0, 2): Fraction(-1)}
    assert leading_monomial(p) == (2, 0)
    q = {(1, 1): Fraction(2), (0, 3): Fraction(1)}
    assert leading_monomial(q) == (0, 3)


def test_normal_form_and_groebner_completion():
    # x^2 - a*y^2 against the level-3 staircase needs the S-pair x^2*y
    gens = [monomial_poly(c) for c in j_m(3)]
    f = {(2, 0): Fraction(1), (0, 2): Fraction(-2)}
    basis = buchberger(gens + [f])
    corners = minimalize(leading_monomial(g) for g in basis)
    assert (2, 0) in corners
    assert normal_form(monomial_poly((5, 5)), basis) == {}


def test_colength_infinite_detection():
    with pytest.raises(InfiniteColengthError):
        colength([monomial_poly((1, 1))])
    with pytest.raises(InfiniteColengthError):
        colength([monomial_poly((0, 2))])


def test_beta_tables():
    assert beta(2) == (1,)
    assert beta(3) == (3, 3)
    assert beta(4) == (6, 8, 6)
    assert beta(5) == (10, 15, 15, 10)
    assert beta(6) == (15, 24, 27, 24, 15)
    assert beta_total(3) == 6
    assert beta_total(5) == 50


def test_beta_first_column_and_symmetry():
    for m in range(2, 9):
        row = beta(m)
        assert row[0] == comb(m, 2)
        assert row == row[::-1]


def test_beta_eta_independence():
    for eta in (Fraction(1), Fraction(2), Fraction(-3, 5)):
        assert beta(4, 2, etas=(eta, eta + 7)) == 8
    with pytest.raises(ValueError):
        beta(4, 2, etas=(Fraction(0), Fraction(1)))
    with pytest.raises(ValueError):
        beta(4, 2, etas=(Fraction(1), Fraction(1)))


def test_beta_degenerate_binomial_not_generic():
    # a square binomial slope breaks genericity: y^2 + eta*x^2 at m = 4
    # has eta-dependent colength only for special eta, which the pair
    # check must catch if it ever happens; here we spot-check that the
    # generic value is stable across several eta
    values = {beta(4, 2, etas=(Fraction(e), Fraction(e) + 1)) for e in (1, 3, 5)}
    assert values == {8}


def test_printed_polygon_region():
    area1, ok1 = printed_polygon_region(3, 1)
    assert area1 == 3 and ok1
    area2, ok2 = printed_polygon_region(3, 2)
    assert area2 == 4 and not ok2
    for m in range(2, 7):
        area, ok = printed_polygon_region(m, 1)
        assert ok and area == comb(m, 2)


def test_printed_elimination_count():
    # the literal recipe keeps x^2 at (3, 2), overcounting the cobasis
    assert printed_elimination_count(3, 2) == 4
    assert beta(3, 2) == 3
    assert printed_elimination_count(3, 1) == 3


def test_genericity_guard_fires_on_rigged_input():
    # directly exercise the disagreement path with a fake eta pair that
    # collides with a staircase corner: y + eta*x at level 2 has
    # colength 1 for all eta != 0, so instead check the guard wiring by
    # ensuring distinct etas is enforced upstream
    with pytest.raises(ValueError):
        beta(2, 1, etas=(Fraction(2), Fraction(2)))
    assert beta(2, 1) == 1
