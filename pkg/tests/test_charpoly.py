from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tautcalc.charpoly import (
    CharacterPolynomial,
    parse_rational,
    register_character,
    symbol,
)


def random_poly(rng: random.Random) -> CharacterPolynomial:
    syms = ["sigma", "omega2", "omegaL", "L2", "dL", "g2"]
    p = CharacterPolynomial.zero()
    for _ in range(rng.randint(0, 4)):
        mono = tuple(rng.choice(syms) for _ in range(rng.randint(0, 2)))
        coeff = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        p = p + CharacterPolynomial({mono: coeff})
    return p


def test_ring_axioms_randomized():
    rng = random.Random(20240817)
    for _ in range(60):
        a, b, c = (random_poly(rng) for _ in range(3))
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + CharacterPolynomial.zero() == a
        assert a * CharacterPolynomial.one() == a
        assert a - a == CharacterPolynomial.zero()


def test_scalar_coercion():
    s = symbol("sigma")
    assert 2 * s == s + s
    assert s * Fraction(1, 2) + s * Fraction(1, 2) == s
    assert (s + 3) - 3 == s
    assert 0 * s == CharacterPolynomial.zero()


def test_power():
    w = symbol("omega2")
    assert w ** 3 == w * w * w
    assert w ** 0 == CharacterPolynomial.one()
    with pytest.raises(ValueError):
        w ** -1


def test_evaluate_full_and_partial():
    s, w = symbol("sigma"), symbol("omega2")
    p = -2 * s + 14 * w
    v = p.evaluate({"sigma": Fraction(12), "omega2": Fraction(0)})
    assert v.is_constant()
    assert v.constant_value() == Fraction(-24)
    partial = p.evaluate({"sigma": Fraction(1)})
    assert partial == 14 * w - 2
    assert p.evaluate({}) == p


def test_render_canonical():
    s, w = symbol("sigma"), symbol("omega2")
    assert (-2 * s + 14 * w).render() == "-2*sigma + 14*omega2"
    assert (s - w).render() == "sigma - omega2"
    assert CharacterPolynomial.zero().render() == "0"
    assert CharacterPolynomial.constant(Fraction(-24)).render() == "-24"
    assert (Fraction(3, 2) * w).render() == "3/2*omega2"
    assert (s * s).render() == "sigma^2"
    ol, dl = symbol("omegaL"), symbol("dL")
    assert (dl * ol).render() == "dL*omegaL"
    # higher degree renders before lower, constants last
    assert (s * s + s + 1).render() == "sigma^2 + sigma + 1"


def test_registry_and_names():
    name = register_character("kappa_1")
    assert name == "kappa_1"
    p = symbol("kappa_1") * 2
    assert p.render() == "2*kappa_1"
    with pytest.raises(ValueError):
        register_character("3bad")
    with pytest.raises(ValueError):
        register_character("")


def test_parse_rational():
    assert parse_rational("-3/5") == Fraction(-3, 5)
    assert parse_rational(" 7 ") == Fraction(7)


def test_hash_consistency():
    a = symbol("sigma") + 1
    b = 1 + symbol("sigma")
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1
