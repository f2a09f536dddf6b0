"""Command-line front end for the intersection calculus.

Subcommands cover the staircase weights (alpha, beta, colength), the
Vandermonde oracle (vdm-check, ord-table, eta), the rewriting engine
(normalize, integrate, chern), the Grassmannian side (schubert, nsec3)
and a regression driver (verify-paper) that replays every recorded
reference value and reports engine-vs-printed discrepancies as NOTE
lines.

Exit codes: 0 success, 1 parse or usage error, 2 grading/dimension or
unsupported-product error, 3 verify-paper mismatch.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from math import comb

from .charpoly import CharacterPolynomial, symbol
from .exprparse import ParseError, evaluate_integral, evaluate_normal
from .polyoracle import (
    check_chain,
    check_syzygy,
    derived_eta_exponent,
    eta_valuation,
    ord_table,
    printed_eta_exponent,
    printed_ord_formula,
)
from .schubert import NSEC3_TUPLES, grassmann_integral, nsec3, nsec3_terms
from .staircase import (
    alpha,
    beta,
    colength,
    j_m,
    monomial_poly,
    printed_alpha_closed_form,
)
from .surface import parse_character_config
from .tautring import (
    DimensionError,
    UnsupportedProductError,
    chern_taut,
    integrate_word,
    render_expr,
)

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"bad rational {text!r}")


def _load_assignment(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_character_config(handle.read())
    except OSError as exc:
        raise _UsageError(f"cannot read character file: {exc}")
    except ValueError as exc:
        raise _UsageError(str(exc))


def _finish(poly: CharacterPolynomial, assignment: dict) -> CharacterPolynomial:
    return poly.evaluate(assignment) if assignment else poly


def _emit(args, pairs):
    """Print (name, value) pairs per the selected format.

    Pretty mode prints a single value bare and keeps labels only for
    multi-line output; kv mode always prints `name = value` lines.
    """
    for name, value in pairs:
        if args.format == "kv":
            print(f"{name} = {value}")
        elif len(pairs) == 1:
            print(value)
        else:
            print(f"{name} = {value}")


# -- simple numeric commands ---------------------------------------------


def _etas_from(args):
    base = (Fraction(1), Fraction(2))
    if getattr(args, "eta", None) is None:
        return base
    extra = args.eta
    etas = tuple(dict.fromkeys(base + (extra,)))
    return etas if len(etas) >= 2 else base


def cmd_alpha(args) -> int:
    value = alpha(args.level)
    printed = printed_alpha_closed_form(args.level)
    if args.format == "kv":
        print(f"alpha = {value}")
        print(f"printed_closed_form = {printed}")
    else:
        print(value)
        if printed != value:
            print(f"note: the printed closed form evaluates to {printed}")
    return 0


def cmd_beta(args) -> int:
    etas = _etas_from(args)
    if args.slope is not None:
        value = beta(args.level, args.slope, etas=etas)
        _emit(args, [("beta", value)])
        return 0
    row = beta(args.level, etas=etas)
    _emit(args, [("beta", " ".join(str(v) for v in row))])
    return 0


def cmd_colength(args) -> int:
    gens = [monomial_poly(c) for c in j_m(args.level)]
    _emit(args, [("colength", colength(gens))])
    return 0


def cmd_vdm_check(args) -> int:
    top = args.level or 5
    for m in range(2, top + 1):
        for i in range(1, m):
            sign = check_chain(m, i)
            print(f"chain m={m} i={i} sign={sign:+d} OK")
    for m in range(2, min(top, 4) + 1):
        for i in range(1, m):
            for j in range(0, m):
                sign = check_syzygy(m, i, j, "lower")
                print(f"syzygy lower m={m} i={i} j={j} sign={sign:+d} OK")
        for i in range(2, m + 1):
            for j in range(0, m):
                sign = check_syzygy(m, i, j, "raise")
                print(f"syzygy raise m={m} i={i} j={j} sign={sign:+d} OK")
    return 0


def cmd_ord_table(args) -> int:
    m = args.level or 4
    table = ord_table(m, seed=args.seed)
    for j in range(1, m + 1):
        row = " ".join(str(table[(j, size)]) for size in range(m + 1))
        print(f"ord j={j} = {row}")
    # reference quadratic, shown for comparison only: k counts the
    # slots off the component and the printed value is twice the order
    for j in range(1, m + 1):
        row = " ".join(str(printed_ord_formula(m - size, j))
                       for size in range(m + 1))
        print(f"printed-quadratic j={j} = {row}")
    return 0


def cmd_eta(args) -> int:
    m, i, j = args.level, args.i, args.j
    value = eta_valuation(m, i, j)
    derived = derived_eta_exponent(m, i, j)
    printed = printed_eta_exponent(m, i, j)
    _emit(args, [("eta_valuation", value),
                 ("quadratic_exponent", derived),
                 ("printed_exponent", printed)])
    if args.format != "kv":
        if value != derived:
            print("note: the product of the two generators carries extra"
                  " t-order here, so the quadratic undercounts")
        if printed != derived:
            print("note: the printed exponent misses the half-integer"
                  " correction")
    return 0


# -- engine commands -------------------------------------------------------


def cmd_normalize(args) -> int:
    nf = evaluate_normal(args.expr, args.level)
    _emit(args, [("normal_form", render_expr(nf))])
    return 0


def cmd_integrate(args) -> int:
    assignment = _load_assignment(args.chars)
    value = _finish(evaluate_integral(args.expr, args.level), assignment)
    _emit(args, [("integral", value.render())])
    return 0


def cmd_chern(args) -> int:
    pieces = chern_taut(args.level)
    _emit(args, [(f"c_{d}", render_expr(p)) for d, p in enumerate(pieces)])
    return 0


def _parse_factor(text: str):
    text = text.strip()
    if len(text) < 2 or text[0] not in "rc" or not text[1:].isdigit():
        raise _UsageError(
            f"bad factor {text!r}: use rN for a row strip, cN for a column")
    return ("row" if text[0] == "r" else "column", int(text[1:]))


def cmd_schubert(args) -> int:
    try:
        a, b = (int(x) for x in args.box.split(","))
    except ValueError:
        raise _UsageError(f"bad box {args.box!r}: use A,B")
    factors = [_parse_factor(f) for f in args.factors.split(",")]
    _emit(args, [("integral", grassmann_integral((a, b), factors))])
    return 0


def cmd_nsec3(args) -> int:
    assignment = _load_assignment(args.chars)
    total = _finish(nsec3(), assignment)
    _emit(args, [("nsec3", total.render())])
    if args.breakdown:
        for (j1, j2, j3), (g, w) in sorted(nsec3_terms().items()):
            wtext = _finish(w, assignment).render()
            print(f"term j=({j1},{j2},{j3}) G={g} W={wtext}")
    if total.is_constant():
        print(f"N3 = {total.constant_value() / 6}")
    return 0


# -- the regression driver -------------------------------------------------


def _sym(name):
    return symbol(name)


def _battery():
    """Replay of every recorded reference computation.

    Each entry is (check id, status, detail): PASS when the engine
    agrees with the printed value, NOTE when the engine result is
    frozen but disagrees with the printed one (documented discrepancy),
    FAIL on any deviation from the frozen engine value.
    """
    sigma, omega2, omegaL = _sym("sigma"), _sym("omega2"), _sym("omegaL")
    L2, dL = _sym("L2"), _sym("dL")
    checks = []

    def record(cid, ok, detail):
        checks.append((cid, "PASS" if ok else "FAIL", detail))

    def note(cid, ok, detail):
        checks.append((cid, "NOTE" if ok else "FAIL", detail))

    # section-zero tables
    printed_rows = {2: (1,), 3: (3, 3), 4: (6, 8, 6), 5: (10, 15, 15, 10),
                    6: (15, 24, 27, 24, 15)}
    ok = all(beta(m) == printed_rows[m] for m in printed_rows)
    record("beta-rows", ok, "rows m=2..6 match the printed tables")
    ok = all(beta(m, 1) == comb(m, 2)
             and beta(m) == beta(m)[::-1] for m in range(2, 9))
    record("beta-symmetry", ok, "first entry C(m,2), palindromic rows, m<=8")
    etas = (Fraction(1), Fraction(2), Fraction(-3, 5))
    ok = all(beta(m, etas=etas) == beta(m) for m in range(2, 7))
    record("beta-eta-independence", ok, "rows agree at eta = 1, 2, -3/5")
    ok = all(alpha(m) == colength([monomial_poly(c) for c in j_m(m)])
             == comb(m + 2, 4) for m in range(2, 9))
    record("alpha-colength", ok, "alpha = colength = C(m+2,4) for m=2..8")
    diverging = [m for m in range(2, 9)
                 if printed_alpha_closed_form(m) != alpha(m)]
    note("alpha-closed-form", diverging == [4, 5, 6, 7, 8],
         "printed closed form diverges from the table for every m >= 4")

    # Vandermonde identities
    ok = all(check_chain(m, i) in (-1, 1)
             for m in range(2, 6) for i in range(1, m))
    record("vdm-chain", ok, "t^(m-i) G_(i+1) = +-e_m(y) G_i for m<=5")
    ok = all(check_syzygy(m, i, j, "lower") in (-1, 1)
             for m in range(2, 5)
             for i in range(1, m) for j in range(0, m))
    record("vdm-syzygy-lower", ok, "lower family holds up to sign for m<=4")
    ok = all(check_syzygy(m, i, j, "raise") in (-1, 1)
             for m in range(2, 5)
             for i in range(2, m + 1) for j in range(0, m))
    note("vdm-syzygy-raise", ok,
         "raise family holds with t-exponent i-j-1; the printed exponent"
         " m-j-i is not degree-consistent")

    # valuation table
    ok = True
    zero_ok = True
    for m in (2, 3, 4):
        table = ord_table(m)
        ok = ok and all(v >= 0 for v in table.values())
        for j in range(1, m + 1):
            zeros = {size for size in range(m + 1) if table[(j, size)] == 0}
            want = {s for s in (m - j, m - j + 1) if 0 <= s <= m}
            zero_ok = zero_ok and zeros == want
    record("ord-nonnegative", ok, "arc valuations have no poles for m<=4")
    record("ord-zero-set", zero_ok,
           "order vanishes exactly on two adjacent component sizes")
    note("ord-quadratic", all(
        printed_ord_formula(k, 1) == 2 * ((k - 1) * k // 2)
        for k in range(1, 5)),
        "printed quadratic is twice the computed order")

    # eta exponents
    ok = all(eta_valuation(m, i, j) == derived_eta_exponent(m, i, j)
             for m in (2, 3, 4)
             for i in range(1, m + 1) for j in range(1, m + 1)
             if abs(i - j) <= 1)
    record("eta-exponent-near", ok,
           "quadratic exponent exact whenever |i-j| <= 1, m<=4")
    extremes = [(m, i, j) for m in (2, 3, 4)
                for i in range(1, m + 1) for j in range(1, m + 1)
                if eta_valuation(m, i, j) != derived_eta_exponent(m, i, j)]
    note("eta-exponent-far", all(abs(i - j) >= 2 for _, i, j in extremes)
         and len(extremes) == 8,
         "eight pairs with |i-j| >= 2 exceed the quadratic; printed"
         " exponent misses the correction")

    # the intersection battery
    def ival(text, m):
        return evaluate_integral(text, m)

    record("nf-pair-diagonal-cube",
           render_expr(evaluate_normal("Gamma<2>^3", 2))
           == "omega2*q[{1,2}](pt) - NS(12:)",
           "third power of the level-2 diagonal")
    note("nf-pair-diagonal-square",
         render_expr(evaluate_normal("Delta<2>^2", 2))
         == "-q[{1,2}](omega) + F(12:)",
         "engine carries -omega on the diagonal term; the printed form"
         " shows +omega, inconsistent with its own later normal forms")
    record("nf-top-diagonal-square",
           render_expr(evaluate_normal("Delta<3>^2", 3))
           == "2*q[{1,2,3}](1) - q[{1,3}](omega) - q[{2,3}](omega)"
              " + F(13:) + F(23:)",
           "printed normal form reproduced verbatim")
    note("int-lclass-delta2-squared",
         all(ival(f"L({i})*Delta<2>^2", 2) == -omegaL for i in (1, 2))
         and all(ival(f"L({i})*Delta<2>^2*Delta<3>", 3) == -2 * omegaL
                 for i in (1, 2, 3)),
         "engine gives -omegaL (twice that at level 3); printed value"
         " is +omegaL")
    record("int-lclass-pair-delta2",
           all(ival(f"L({i})*L({j})*Delta<2>", 2) == L2
               for i, j in ((1, 1), (1, 2), (2, 2)))
           and all(ival(f"L({i})*L({j})*Delta<2>*Delta<3>", 3) == 2 * L2
                   for i, j in ((1, 1), (1, 2), (2, 2), (1, 3), (2, 3),
                                (3, 3))),
           "L.L.Delta integrals equal L2, doubling at level 3")
    record("int-lclass-triple",
           ival("L(1)*L(2)^2", 2) == dL * L2
           and ival("L(1)*L(2)*L(3)*Delta<3>", 3) == 2 * dL * L2
           and ival("L(1)*L(3)^2*Delta<3>", 3) == dL * L2
           and ival("L(2)*L(3)^2*Delta<3>", 3) == dL * L2,
           "pure L-words with one fibre direction free")
    record("int-delta2-cubed",
           ival("Delta<2>^3", 2) == -sigma + omega2
           and ival("Delta<2>^3*Delta<3>", 3) == 2 * (-sigma + omega2),
           "cube of the level-2 diagonal")
    record("int-lclass3-delta3-squared",
           all(ival(f"L(3)*L({i})*Delta<3>^2", 3) == 2 * L2 - dL * omegaL
               for i in (1, 2))
           and ival("L(3)^2*Delta<3>^2", 3) == 2 * L2,
           "the slot-3 polarized square")
    record("int-lclass-delta2-delta3sq",
           all(ival(f"L({i})*Delta<2>*Delta<3>^2", 3) == -4 * omegaL
               for i in (1, 2)),
           "mixed divisor word gives -4 omegaL")
    record("int-delta2sq-delta3sq",
           ival("Delta<2>^2*Delta<3>^2", 3) == -2 * sigma + 4 * omega2,
           "squares of both diagonals")
    note("int-lclass-delta3-cubed",
         all(ival(f"L({i})*Delta<3>^3", 3)
             == -6 * omegaL - 2 * dL * sigma + dL * omega2 for i in (1, 2))
         and ival("L(3)*Delta<3>^3", 3) == -6 * omegaL,
         "engine result disagrees with the printed 2*omegaL")
    record("int-delta2-delta3-cubed",
           ival("Delta<2>*Delta<3>^3", 3) == -6 * sigma + 8 * omega2,
           "one low diagonal against the top cube")
    record("int-delta3-fourth",
           ival("Delta<3>^4", 3) == -2 * sigma + 14 * omega2,
           "fourth power of the top diagonal")
    record("small-diagonal-facts",
           integrate_word([("gamma", 3), ("gamma", 3), ("smalldiag",)], 3)
           == -6 * sigma + 9 * omega2
           and integrate_word([("gamma", 3), ("gamma", 2), ("smalldiag",)], 3)
           == -2 * sigma + 3 * omega2
           and integrate_word([("gamma", 2), ("gamma", 2), ("smalldiag",)], 3)
           == -sigma + omega2,
           "the three small-diagonal squares at level 3")
    scroll_vals = []
    for i in (1, 2):
        seed = evaluate_normal(f"F({i}3:)", 3)
        scroll_vals.append((
            integrate_word([("gamma", 3), ("gamma", 3)], 3, seed=seed),
            integrate_word([("gamma", 2), ("gamma", 2)], 3, seed=seed)))
    note("node-scroll-integrals",
         all(a == -2 * sigma and b.is_zero() for a, b in scroll_vals),
         "top-square -2 sigma, low-square 0; the printed mixed product"
         " lands outside the generator basis and is not evaluated")
    closure_ok = True
    for m in (2, 3):
        got = integrate_word([("gamma", m), ("gamma", m), ("smalldiag",)], m)
        bm = sum(beta(m))
        want = (CharacterPolynomial.constant(-bm) * sigma
                + CharacterPolynomial.constant(comb(m, 2) ** 2) * omega2)
        closure_ok = closure_ok and got == want
    record("closure-weights", closure_ok,
           "small-diagonal square equals -sigma beta_m + C(m,2)^2 omega2")

    # Grassmannian side
    record("grassmann-degrees",
           all(grassmann_integral((2, 4), [("row", 4 - j) for j in t]) == 1
               for t in NSEC3_TUPLES)
           and grassmann_integral((2, 2), [("row", 1)] * 4) == 2,
           "all box-(2,4) factors give 1; the classical quadric degree is 2")
    terms = nsec3_terms()
    note("nsec3-tuple-list",
         len(terms) == 10 and terms[(3, 0, 1)][1].is_zero()
         and not terms[(2, 0, 2)][1].is_zero(),
         "ten exponent tuples contribute; the printed list omits (3,0,1),"
         " which vanishes, and (2,0,2), which does not")
    total = nsec3()
    frozen = (3 * L2 * dL * dL + 6 * dL * sigma - 12 * dL * omegaL
              - 3 * dL * omega2 - 3 * L2 * _sym("g2") - 27 * L2 * dL
              - 12 * sigma + 72 * omegaL + 28 * omega2 + 60 * L2)
    record("nsec3-assembly", total == frozen,
           "assembled 3!N3 matches the frozen engine polynomial")

    return sorted(checks)


def cmd_verify_paper(args) -> int:
    failed = 0
    for cid, status, detail in _battery():
        print(f"{status} {cid}: {detail}")
        if status == "FAIL":
            failed += 1
    if failed:
        print(f"FAIL: {failed} checks regressed")
        return 3
    print("OK: all checks consistent")
    return 0


# -- wiring ----------------------------------------------------------------


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="taut-calc",
                             description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("pretty", "kv"),
                       default="pretty")
        return p

    p = add("alpha", cmd_alpha, help="discriminant ideal colength")
    p.add_argument("level", type=int)

    p = add("beta", cmd_beta, help="staircase weight row")
    p.add_argument("level", type=int)
    p.add_argument("-j", "--slope", type=int, default=None)
    p.add_argument("--eta", type=_rational, default=None,
                   help="extra slope parameter for the genericity check")

    p = add("colength", cmd_colength, help="colength of the level ideal")
    p.add_argument("level", type=int)

    p = add("vdm-check", cmd_vdm_check,
            help="chain and syzygy identities on the mixed Vandermondes")
    p.add_argument("-m", "--level", type=int, default=None)

    p = add("ord-table", cmd_ord_table, help="arc valuations by stratum size")
    p.add_argument("-m", "--level", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)

    p = add("eta", cmd_eta, help="t-order of e_m(y)^(i+j-2) G_1^2")
    p.add_argument("level", type=int)
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)

    p = add("normalize", cmd_normalize, help="normal form of a product word")
    p.add_argument("-m", "--level", type=int, required=True)
    p.add_argument("expr")

    p = add("integrate", cmd_integrate, help="integral of a product word")
    p.add_argument("-m", "--level", type=int, required=True)
    p.add_argument("expr")
    p.add_argument("--chars", default=None,
                   help="character assignment file; keys become numbers")

    p = add("chern", cmd_chern, help="graded pieces of the bundle class")
    p.add_argument("-m", "--level", type=int, required=True)

    p = add("schubert", cmd_schubert, help="boxed Grassmannian integral")
    p.add_argument("--box", required=True, help="A,B bounding box")
    p.add_argument("--factors", required=True,
                   help="comma list of rN / cN special classes")

    p = add("nsec3", cmd_nsec3, help="assembled 3-node count, times 3!")
    p.add_argument("--chars", default=None)
    p.add_argument("--breakdown", action="store_true")

    add("verify-paper", cmd_verify_paper,
        help="replay every recorded reference computation")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DimensionError, UnsupportedProductError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
