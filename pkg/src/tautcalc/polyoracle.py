"""Exact arithmetic in Q[x_1..x_m, y_1..y_m, t] modulo (x_i*y_i - t).

The local model of the punctual locus lives in this quotient ring.  Its
distinguished generators G_i are signed determinants of mixed
Vandermonde matrices; the chain and syzygy identities they satisfy, and
the t-adic valuations of their restrictions to coordinate arcs, are the
ground truth that the intersection calculus is checked against.

Monomials x^a y^b t^e with some min(a_i, b_i) > 0 are reduced by
x_i y_i -> t.  Reduced monomials stay reduced under multiplication by
t, so the minimal t-exponent of a normal form is the exact t-adic
valuation.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

Coeff = Fraction


class ValuationInstabilityError(RuntimeError):
    """Arc valuations kept disagreeing across random parameter draws."""


class ExactDivisionError(ArithmeticError):
    pass


class QuotPoly:
    """Element of the quotient ring at level m, kept in normal form.

    Keys are integer tuples (x_1..x_m, y_1..y_m, t).
    """

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms=None, reduce: bool = True):
        self.m = m
        raw = terms or {}
        out: dict[tuple, Coeff] = {}
        for mono, coeff in raw.items():
            c = Fraction(coeff)
            if not c:
                continue
            key = _reduce_mono(m, mono) if reduce else tuple(mono)
            out[key] = out.get(key, Fraction(0)) + c
        self.terms = {k: v for k, v in out.items() if v}

    @classmethod
    def zero(cls, m: int) -> "QuotPoly":
        return cls(m)

    @classmethod
    def constant(cls, m: int, value) -> "QuotPoly":
        return cls(m, {(0,) * (2 * m + 1): Fraction(value)})

    @classmethod
    def variable(cls, m: int, name: str, index: int = 0) -> "QuotPoly":
        mono = [0] * (2 * m + 1)
        if name == "x":
            mono[index - 1] = 1
        elif name == "y":
            mono[m + index - 1] = 1
        elif name == "t":
            mono[2 * m] = 1
        else:
            raise ValueError(f"unknown variable {name!r}")
        return cls(m, {tuple(mono): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        assert self.m == other.m
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, Fraction(0)) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return QuotPoly(self.m, out, reduce=False)

    def __neg__(self):
        return QuotPoly(self.m, {k: -v for k, v in self.terms.items()}, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuotPoly(
                self.m, {k: v * other for k, v in self.terms.items()}, reduce=False
            )
        assert self.m == other.m
        out: dict[tuple, Coeff] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key = _reduce_mono(self.m, tuple(a + b for a, b in zip(m1, m2)))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return QuotPoly(self.m, out, reduce=False)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = QuotPoly.constant(self.m, 1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        return isinstance(other, QuotPoly) and self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    def min_t_exponent(self) -> int:
        """Exact t-adic valuation of a nonzero element."""
        if not self.terms:
            raise ValueError("zero element has no valuation")
        return min(mono[2 * self.m] for mono in self.terms)

    def __repr__(self):
        return f"QuotPoly(m={self.m}, {len(self.terms)} terms)"


def _reduce_mono(m: int, mono) -> tuple:
    mono = list(mono)
    for i in range(m):
        k = min(mono[i], mono[m + i])
        if k:
            mono[i] -= k
            mono[m + i] -= k
            mono[2 * m] += k
    return tuple(mono)


def normalize(m: int, terms: dict) -> QuotPoly:
    """Public entry: reduce an arbitrary term dictionary."""
    return QuotPoly(m, terms)


# -- determinants over the free polynomial ring ------------------------

# Free-ring polynomials reuse the same exponent tuples but are never
# reduced; the quotient map is applied once at the end.


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict[tuple, Coeff] = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            key = tuple(a + b for a, b in zip(m1, m2))
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _poly_sub(p: dict, q: dict) -> dict:
    out = dict(p)
    for mono, c in q.items():
        s = out.get(mono, Fraction(0)) - c
        if s:
            out[mono] = s
        else:
            out.pop(mono, None)
    return out


def _poly_exact_div(n: dict, d: dict) -> dict:
    """Divide n by d in the free ring, failing loudly if not exact."""
    if not d:
        raise ZeroDivisionError
    quotient: dict[tuple, Coeff] = {}
    work = dict(n)
    d_lead = max(d)
    while work:
        lead = max(work)
        diff = tuple(a - b for a, b in zip(lead, d_lead))
        if any(e < 0 for e in diff):
            raise ExactDivisionError("division left a remainder")
        scale = work[lead] / d[d_lead]
        quotient[diff] = scale
        work = _poly_sub(work, _poly_mul({diff: scale}, d))
    return quotient


def _det_bareiss(matrix: list[list[dict]], width: int) -> dict:
    """Fraction-free Bareiss elimination; entries are free-ring polys."""
    n = len(matrix)
    a = [[dict(e) for e in row] for row in matrix]
    one = {(0,) * width: Fraction(1)}
    prev = one
    sign = 1
    for k in range(n - 1):
        if not a[k][k]:
            pivot_row = next((r for r in range(k + 1, n) if a[r][k]), None)
            if pivot_row is None:
                return {}
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _poly_sub(
                    _poly_mul(a[k][k], a[i][j]), _poly_mul(a[i][k], a[k][j])
                )
                a[i][j] = _poly_exact_div(num, prev) if prev != one else num
            a[i][k] = {}
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else {k: -v for k, v in det.items()}


def _det_cofactor(matrix: list[list[dict]]) -> dict:
    """Laplace expansion with memoization on column subsets."""
    n = len(matrix)
    cache: dict[tuple, dict] = {(): {}}

    def minor(row: int, cols: tuple) -> dict:
        if row == n:
            return {}
        if (row, cols) in cache:
            return cache[(row, cols)]
        total: dict[tuple, Coeff] = {}
        for pos, col in enumerate(cols):
            entry = matrix[row][col]
            if not entry:
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1 :])
            if row == n - 1:
                piece = entry
            elif not sub:
                continue
            else:
                piece = _poly_mul(entry, sub)
            if pos % 2:
                piece = {k: -v for k, v in piece.items()}
            for mono, c in piece.items():
                s = total.get(mono, Fraction(0)) + c
                if s:
                    total[mono] = s
                else:
                    total.pop(mono, None)
        cache[(row, cols)] = total
        return total

    return minor(0, tuple(range(n)))


def vdm_det(m: int, i: int) -> QuotPoly:
    """Mixed Vandermonde generator G_i as a normalized quotient element.

    Row degrees are 1, x, ..., x^(m-i), y, ..., y^(i-1); column k uses
    the variables x_k, y_k.  The sign is fixed so the lexicographically
    leading monomial is positive.
    """
    if not 1 <= i <= m:
        raise ValueError(f"generator index {i} out of range for level {m}")
    width = 2 * m + 1

    def entry(var: str, index: int, power: int) -> dict:
        mono = [0] * width
        if power:
            mono[index - 1 if var == "x" else m + index - 1] = power
        return {tuple(mono): Fraction(1)}

    rows: list[list[dict]] = []
    for p in range(m - i + 1):
        rows.append([entry("x", k, p) for k in range(1, m + 1)])
    for p in range(1, i):
        rows.append([entry("y", k, p) for k in range(1, m + 1)])
    try:
        det = _det_bareiss(rows, width)
    except ExactDivisionError:
        if m > 4:
            raise
        det = _det_cofactor(rows)
    if not det:
        return QuotPoly.zero(m)
    if det[max(det)] < 0:
        det = {k: -v for k, v in det.items()}
    return QuotPoly(m, det)


def elementary_symmetric(m: int, k: int, variable: str) -> QuotPoly:
    """e_k in the x- or y-variables at level m."""
    if not 0 <= k <= m:
        raise ValueError(f"symmetric degree {k} out of range")
    offset = 0 if variable == "x" else m
    terms = {}
    for subset in combinations(range(m), k):
        mono = [0] * (2 * m + 1)
        for idx in subset:
            mono[offset + idx] = 1
        terms[tuple(mono)] = Fraction(1)
    return QuotPoly(m, terms)


def _t_power(m: int, e: int) -> QuotPoly:
    mono = [0] * (2 * m + 1)
    mono[2 * m] = e
    return QuotPoly(m, {tuple(mono): Fraction(1)})


def _match_up_to_sign(lhs: QuotPoly, rhs: QuotPoly) -> int:
    if lhs == rhs:
        return 1
    if lhs == -rhs:
        return -1
    raise AssertionError("sides differ beyond a global sign")


def check_chain(m: int, i: int) -> int:
    """Verify t^(m-i) * G_(i+1) = +- e_m(y) * G_i; returns the sign."""
    if not 1 <= i <= m - 1:
        raise ValueError(f"chain index {i} out of range for level {m}")
    lhs = _t_power(m, m - i) * vdm_det(m, i + 1)
    rhs = elementary_symmetric(m, m, "y") * vdm_det(m, i)
    return _match_up_to_sign(lhs, rhs)


def check_syzygy(m: int, i: int, j: int, kind: str = "lower") -> int:
    """Verify the two syzygy families on the generators, up to sign.

    kind "lower": e_(m-j)(y) * G_i = t^(m-j-i) * e_j(x) * G_(i+1),
    for 1 <= i <= m-1, 0 <= j <= m-1.
    kind "raise": e_(m-j)(x) * G_i = t^(i-j-1) * e_j(y) * G_(i-1),
    for 2 <= i <= m, 0 <= j <= m-1.

    The raise family is the x<->y mirror of the lower family under
    G_i -> G_(m-i+1); only the exponent i-j-1 is degree-consistent
    (t carries bidegree (1, 1)).

    A negative t-exponent is checked as the equivalent divisibility
    statement with the power moved to the other side.
    """
    if kind == "lower":
        if not (1 <= i <= m - 1 and 0 <= j <= m - 1):
            raise ValueError(f"syzygy indices ({i}, {j}) out of range")
        left = elementary_symmetric(m, m - j, "y") * vdm_det(m, i)
        right = elementary_symmetric(m, j, "x") * vdm_det(m, i + 1)
        e = m - j - i
    elif kind == "raise":
        if not (2 <= i <= m and 0 <= j <= m - 1):
            raise ValueError(f"syzygy indices ({i}, {j}) out of range")
        left = elementary_symmetric(m, m - j, "x") * vdm_det(m, i)
        right = elementary_symmetric(m, j, "y") * vdm_det(m, i - 1)
        e = i - j - 1
    else:
        raise ValueError(f"unknown syzygy kind {kind!r}")
    if e >= 0:
        right = _t_power(m, e) * right
    else:
        left = _t_power(m, -e) * left
    return _match_up_to_sign(left, right)


# -- arc valuations ----------------------------------------------------


def arc_valuation(m: int, j: int, component, seed: int = 0) -> int:
    """t-adic order of G_j along an arc through the stratum `component`.

    `component` is the set of slots whose x-coordinate stays generic
    (x_i = c_i, y_i = t/c_i); the remaining slots have y generic.  Two
    independent random draws of the constants must agree; accidental
    cancellations trigger a retry, then an error.
    """
    I = frozenset(component)
    if not I <= set(range(1, m + 1)):
        raise ValueError(f"component {sorted(I)} not within [1, {m}]")
    g = vdm_det(m, j)
    attempts = []
    for attempt in range(5):
        vals = []
        for sub in range(2):
            rng = random.Random(hash((seed, attempt, sub, m, j, tuple(sorted(I)))))
            consts = {i: Fraction(rng.randint(2, 10 ** 6)) for i in range(1, m + 1)}
            vals.append(_substituted_valuation(g, m, I, consts))
        if vals[0] == vals[1]:
            return vals[0]
        attempts.append(tuple(vals))
    raise ValuationInstabilityError(
        f"valuation of G_{j} on {sorted(I)} unstable after 5 draws: {attempts}"
    )


def _substituted_valuation(g: QuotPoly, m: int, I: frozenset, consts) -> int:
    by_exponent: dict[int, Coeff] = {}
    for mono, coeff in g.terms.items():
        t_exp = mono[2 * m]
        scale = coeff
        for i in range(1, m + 1):
            xe, ye = mono[i - 1], mono[m + i - 1]
            if i in I:
                t_exp += ye
                scale *= consts[i] ** (xe - ye)
            else:
                t_exp += xe
                scale *= consts[i] ** (ye - xe)
        s = by_exponent.get(t_exp, Fraction(0)) + scale
        if s:
            by_exponent[t_exp] = s
        else:
            by_exponent.pop(t_exp, None)
    if not by_exponent:
        raise ValueError("arc restriction vanished identically")
    return min(by_exponent)


def ord_table(m: int, seed: int = 0) -> dict[tuple[int, int], int]:
    """Arc valuations of every G_j on every stratum size.

    The valuation only depends on |component|; this is verified on two
    distinct components per size where possible.  Keys are (j, size).
    """
    table: dict[tuple[int, int], int] = {}
    for j in range(1, m + 1):
        for size in range(m + 1):
            first = frozenset(range(1, size + 1))
            value = arc_valuation(m, j, first, seed)
            if 0 < size < m:
                second = frozenset(range(m - size + 1, m + 1))
                other = arc_valuation(m, j, second, seed)
                if other != value:
                    raise AssertionError(
                        f"valuation depends on the component, not just its size: "
                        f"G_{j} on {sorted(first)} vs {sorted(second)}"
                    )
            table[(j, size)] = value
    return table


def derived_ord_formula(m: int, j: int, size: int) -> int:
    """Closed form matching the computed table: C(k'-j+1, 2) with
    k' = m - size counting slots off the component."""
    k = m - size
    return (k - j) * (k - j + 1) // 2


def printed_ord_formula(k: int, j: int) -> int:
    # reference quadratic; twice the computed order, in the complement count
    return (k - j) ** 2 + (k - j)


def eta_valuation(m: int, i: int, j: int) -> int:
    """t-adic valuation of e_m(y)^(i+j-2) * G_1^2."""
    if not (1 <= i <= m and 1 <= j <= m):
        raise ValueError(f"indices ({i}, {j}) out of range for level {m}")
    g1 = vdm_det(m, 1)
    p = elementary_symmetric(m, m, "y") ** (i + j - 2) * g1 * g1
    return p.min_t_exponent()


def derived_eta_exponent(m: int, i: int, j: int) -> int:
    value = (i - 1) * (Fraction(2 * m - i, 2)) + (j - 1) * (Fraction(2 * m - j, 2))
    assert value.denominator == 1
    return int(value)


def printed_eta_exponent(m: int, i: int, j: int) -> int:
    return (i - 1) * (m - i) + (j - 1) * (m - j)


def diagonal_vanish(m: int, i: int) -> bool:
    """G_i dies when slots 1 and 2 collide."""
    if m < 2:
        raise ValueError("need at least two slots")
    g = vdm_det(m, i)
    folded: dict[tuple, Coeff] = {}
    for mono, coeff in g.terms.items():
        merged = list(mono)
        merged[0] += merged[1]
        merged[1] = 0
        merged[m] += merged[m + 1]
        merged[m + 1] = 0
        key = tuple(merged)
        s = folded.get(key, Fraction(0)) + coeff
        if s:
            folded[key] = s
        else:
            folded.pop(key, None)
    return QuotPoly(m, folded).is_zero()
