"""Punctual monomial ideals, their colengths, and blowup weights.

The family of ideals studied here is generated by the staircase
x^C(m-i+1,2) * y^C(i,2), i = 1..m, with C(n,2) the triangular numbers.
The weight beta(m, j) is the colength of that ideal plus one generic
binomial y^j + eta*x^(m-j); these weights drive the node-scroll terms
of the intersection calculus.  Colengths are computed exactly by a
bivariate Buchberger loop in degrevlex order with x > y.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

Mono = tuple[int, int]
Poly = dict[Mono, Fraction]


class GenericityError(RuntimeError):
    """Colength depends on the binomial coefficient eta, so no generic
    value can be reported."""


class InfiniteColengthError(ValueError):
    """The quotient by the ideal is not finite dimensional."""


# -- staircases -------------------------------------------------------


def minimalize(corners) -> tuple[Mono, ...]:
    """Drop monomial generators dominated by another generator."""
    corners = set(corners)
    keep = []
    for a, b in sorted(corners):
        if not any((c, d) != (a, b) and c <= a and d <= b for c, d in corners):
            keep.append((a, b))
    return tuple(keep)


def j_m(m: int) -> tuple[Mono, ...]:
    """Minimal generators of the basic punctual ideal at level m."""
    if m < 1:
        raise ValueError("level must be positive")
    return minimalize((comb(m - i + 1, 2), comb(i, 2)) for i in range(1, m + 1))


def alpha(m: int) -> int:
    """Colength of the basic ideal, via the rectangle decomposition."""
    return sum(i * comb(m + 1 - i, 2) for i in range(1, m))


def printed_alpha_closed_form(m: int) -> int:
    # reference closed form; disagrees with alpha() from m = 4 on
    return 3 * comb(m, 4) + 3 * comb(m, 3) + m - 1


# -- exact bivariate Groebner -----------------------------------------


def _deg(mono: Mono) -> int:
    return mono[0] + mono[1]


def _term_key(mono: Mono):
    # degrevlex with x > y: higher total degree wins, ties go to the
    # monomial with the smaller y exponent
    return (_deg(mono), -mono[1])


def leading_monomial(p: Poly) -> Mono:
    return max(p, key=_term_key)


def _divides(a: Mono, b: Mono) -> bool:
    return a[0] <= b[0] and a[1] <= b[1]


def _shift_scale(p: Poly, shift: Mono, scale: Fraction) -> Poly:
    return {(a + shift[0], b + shift[1]): c * scale for (a, b), c in p.items()}


def _add(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for mono, c in q.items():
        s = out.get(mono, Fraction(0)) + c
        if s:
            out[mono] = s
        else:
            out.pop(mono, None)
    return out


def normal_form(p: Poly, basis: list[Poly]) -> Poly:
    """Fully reduce p against the basis."""
    remainder: Poly = {}
    work = dict(p)
    while work:
        lm = leading_monomial(work)
        lc = work[lm]
        for g in basis:
            glm = leading_monomial(g)
            if _divides(glm, lm):
                shift = (lm[0] - glm[0], lm[1] - glm[1])
                work = _add(work, _shift_scale(g, shift, -lc / g[glm]))
                break
        else:
            remainder[lm] = lc
            del work[lm]
    return remainder


def buchberger(gens) -> list[Poly]:
    basis = [dict(g) for g in gens if g]
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        # process pairs by lcm degree to keep intermediate growth down
        pairs.sort(key=lambda ij: _deg(_lcm(leading_monomial(basis[ij[0]]),
                                             leading_monomial(basis[ij[1]]))))
        i, j = pairs.pop(0)
        lmi, lmj = leading_monomial(basis[i]), leading_monomial(basis[j])
        if min(lmi[0], lmj[0]) == 0 and min(lmi[1], lmj[1]) == 0:
            # coprime leading terms, S-polynomial reduces to zero
            continue
        s = _s_poly(basis[i], basis[j])
        s = normal_form(s, basis)
        if s:
            basis.append(s)
            pairs.extend((len(basis) - 1, k) for k in range(len(basis) - 1))
    return basis


def _lcm(a: Mono, b: Mono) -> Mono:
    return (max(a[0], b[0]), max(a[1], b[1]))


def _s_poly(p: Poly, q: Poly) -> Poly:
    lp, lq = leading_monomial(p), leading_monomial(q)
    lcm = _lcm(lp, lq)
    left = _shift_scale(p, (lcm[0] - lp[0], lcm[1] - lp[1]), Fraction(1) / p[lp])
    right = _shift_scale(q, (lcm[0] - lq[0], lcm[1] - lq[1]), Fraction(1) / q[lq])
    return _add(left, {m: -c for m, c in right.items()})


def monomial_poly(mono: Mono, coeff=1) -> Poly:
    return {mono: Fraction(coeff)}


def colength(gens) -> int:
    """Dimension of the quotient by the ideal the generators span."""
    basis = buchberger(gens)
    corners = minimalize(leading_monomial(g) for g in basis)
    if not any(b == 0 for _, b in corners) or not any(a == 0 for a, _ in corners):
        raise InfiniteColengthError(f"no pure-power leading terms in {corners}")
    height = min(b for a, b in corners if a == 0)
    total = 0
    for b in range(height):
        total += min(a for a, bb in corners if bb <= b)
    return total


# -- the beta weights --------------------------------------------------


def _beta_single(m: int, j: int, eta: Fraction) -> int:
    gens = [monomial_poly(c) for c in j_m(m)]
    binom = _add(monomial_poly((0, j)), monomial_poly((m - j, 0), eta))
    return colength(gens + [binom])


@lru_cache(maxsize=None)
def _beta_cached(m: int, j: int, etas: tuple[Fraction, ...]) -> int:
    values = {_beta_single(m, j, Fraction(e)) for e in etas}
    if len(values) != 1:
        raise GenericityError(
            f"colength at level {m}, slope {j} varies with eta: {sorted(values)}"
        )
    return values.pop()


def beta(m: int, j: int | None = None, etas=(Fraction(1), Fraction(2))):
    """Generic colength weight(s) at level m.

    With j given, returns the single weight; otherwise the full row
    (beta(m,1), ..., beta(m,m-1)).  The colength is computed at every
    eta in `etas`; any disagreement raises GenericityError since the
    weight is only meaningful for generic eta.
    """
    if m < 2:
        raise ValueError("weights start at level 2")
    etas = tuple(Fraction(e) for e in etas)
    if any(e == 0 for e in etas):
        raise ValueError("eta must be nonzero")
    if len(set(etas)) < 2:
        raise ValueError("need at least two distinct eta values")
    if j is not None:
        if not 1 <= j <= m - 1:
            raise ValueError(f"slope index {j} out of range for level {m}")
        return _beta_cached(m, j, etas)
    return tuple(_beta_cached(m, jj, etas) for jj in range(1, m))


def beta_total(m: int, etas=(Fraction(1), Fraction(2))) -> int:
    return sum(beta(m, etas=etas))


# -- reference-text diagnostics ---------------------------------------


def printed_polygon_region(m: int, j: int):
    """Area of the literal polygon-union construction for beta(m, j).

    Returns (area, agrees) where agrees compares against the colength
    value.  The construction reads: take the staircase region, its
    translate by (-j, m+1-j), and the half plane y >= j; the area of
    the complement should be the weight.  It matches only for j = 1.
    """
    base = j_m(m)
    quadrants = set(base)
    for gx, gy in base:
        quadrants.add((max(gx - j, 0), gy + m + 1 - j))
    quadrants.add((0, j))
    corners = minimalize(quadrants)
    if not any(b == 0 for _, b in corners) or not any(a == 0 for a, _ in corners):
        raise InfiniteColengthError(f"unbounded complement for ({m}, {j})")
    height = min(b for a, b in corners if a == 0)
    area = sum(min(a for a, bb in corners if bb <= b) for b in range(height))
    return area, area == beta(m, j)


def printed_elimination_count(m: int, i: int) -> int:
    """Size of the cobasis produced by the literal elimination recipe.

    Start from the standard monomials of the basic ideal, drop all
    monomials with y-exponent >= i, then for every j with C(j,2) >= i
    drop multiples of x^(C(m+1-j,2)+m+1-i) * y^(C(j,2)-i).  Undercounts
    the true eliminations, e.g. it keeps x^2 at (m, i) = (3, 2).
    """
    corners = j_m(m)
    height = max(b for _, b in corners)
    standard = [
        (a, b)
        for b in range(height)
        for a in range(min(x for x, y in corners if y <= b))
    ]
    kept = [(a, b) for a, b in standard if b < i]
    for j in range(1, m + 1):
        if comb(j, 2) >= i:
            bound = (comb(m + 1 - j, 2) + m + 1 - i, comb(j, 2) - i)
            kept = [p for p in kept if not _divides(bound, p)]
    return len(kept)
