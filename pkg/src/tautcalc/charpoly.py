"""Exact polynomials in named numerical characters.

Integrals computed by the engine are not plain numbers: they are
polynomials with rational coefficients in a handful of named characters
of the fibration (node count, self-intersections of distinguished
divisors, fibre degrees).  This module provides that coefficient ring.
"""
from __future__ import annotations

from fractions import Fraction

Rational = Fraction

# Characters every geometry starts with.  g2 stores the fibre degree of
# the relative dualizing class, i.e. 2g-2 for fibre genus g; g2J and g2K
# are the analogous degrees on the two sides of a generic node.
DEFAULT_CHARACTERS = ("sigma", "omega2", "omegaL", "L2", "dL", "g2", "g2J", "g2K")

KNOWN_CHARACTERS: set[str] = set(DEFAULT_CHARACTERS)


def register_character(name: str) -> str:
    """Register a character name for use in polynomials.

    Names live in one flat session-wide registry, so re-registering an
    existing name is a no-op rather than an error.
    """
    if not name or not name[0].isalpha() or not name.replace("_", "").isalnum():
        raise ValueError(f"bad character name: {name!r}")
    KNOWN_CHARACTERS.add(name)
    return name


def parse_rational(text: str) -> Rational:
    return Fraction(text.strip())


class CharacterPolynomial:
    """Polynomial over Q in registered character symbols.

    Internally a map from monomials to coefficients, where a monomial is
    the tuple of its symbol names sorted ascending (with multiplicity).
    Immutable; all operations return fresh instances.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[tuple[str, ...], Rational] | None = None):
        cleaned: dict[tuple[str, ...], Rational] = {}
        if terms:
            for mono, coeff in terms.items():
                c = Fraction(coeff)
                if c:
                    cleaned[tuple(sorted(mono))] = cleaned.get(tuple(sorted(mono)), 0) + c
        self._terms = {k: v for k, v in cleaned.items() if v}

    @classmethod
    def zero(cls) -> "CharacterPolynomial":
        return cls()

    @classmethod
    def one(cls) -> "CharacterPolynomial":
        return cls({(): Fraction(1)})

    @classmethod
    def constant(cls, value) -> "CharacterPolynomial":
        return cls({(): Fraction(value)})

    @classmethod
    def symbol(cls, name: str) -> "CharacterPolynomial":
        register_character(name)
        return cls({(name,): Fraction(1)})

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Rational:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self._terms.get((), Fraction(0))

    def degree(self) -> int:
        if not self._terms:
            return 0
        return max(len(m) for m in self._terms)

    def symbols(self) -> set[str]:
        return {s for m in self._terms for s in m}

    def coefficient(self, mono: tuple[str, ...]) -> Rational:
        return self._terms.get(tuple(sorted(mono)), Fraction(0))

    def terms(self) -> dict[tuple[str, ...], Rational]:
        return dict(self._terms)

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return CharacterPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return CharacterPolynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[tuple[str, ...], Rational] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return CharacterPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers not supported")
        result = CharacterPolynomial.one()
        for _ in range(n):
            result = result * self
        return result

    def evaluate(self, assignment: dict[str, Rational]) -> "CharacterPolynomial":
        """Substitute rational values for some symbols.

        Symbols absent from the assignment stay symbolic, so partial
        evaluation is fine.
        """
        out: dict[tuple[str, ...], Rational] = {}
        for mono, coeff in self._terms.items():
            c = coeff
            rest = []
            for sym in mono:
                if sym in assignment:
                    c *= Fraction(assignment[sym])
                else:
                    rest.append(sym)
            if c:
                key = tuple(rest)
                out[key] = out.get(key, Fraction(0)) + c
        return CharacterPolynomial(out)

    # -- comparison / rendering ---------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono in sorted(self._terms, key=lambda m: (len(m), m), reverse=True):
            coeff = self._terms[mono]
            body = _render_monomial(mono)
            if body is None:
                text = str(abs(coeff))
            elif abs(coeff) == 1:
                text = body
            else:
                text = f"{abs(coeff)}*{body}"
            if not parts:
                parts.append(text if coeff > 0 else f"-{text}")
            else:
                parts.append(f"+ {text}" if coeff > 0 else f"- {text}")
        return " ".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"CharacterPolynomial({self.render()})"


def _render_monomial(mono: tuple[str, ...]) -> str | None:
    if not mono:
        return None
    pieces = []
    i = 0
    while i < len(mono):
        j = i
        while j < len(mono) and mono[j] == mono[i]:
            j += 1
        pieces.append(mono[i] if j - i == 1 else f"{mono[i]}^{j - i}")
        i = j
    return "*".join(pieces)


def _coerce(value):
    if isinstance(value, CharacterPolynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return CharacterPolynomial.constant(value)
    return NotImplemented


ZERO = CharacterPolynomial.zero()
ONE = CharacterPolynomial.one()


def symbol(name: str) -> CharacterPolynomial:
    return CharacterPolynomial.symbol(name)
