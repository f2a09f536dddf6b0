from __future__ import annotations

import contextlib
import io

import pytest

from tautcalc.charpoly import symbol
from tautcalc.cli import main
from tautcalc.exprparse import ParseError, evaluate_integral, evaluate_normal
from tautcalc.tautring import render_expr

omegaL = symbol("omegaL")
L2 = symbol("L2")
dL = symbol("dL")


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


class TestRoundTrip:
    # render_expr output must parse back to the same expression
    CASES = [
        ("Delta<2>^2", 2),
        ("Gamma<2>^3", 2),
        ("Delta<3>^2", 3),
        ("Delta<3>^3", 3),
        ("Gamma<3>^4", 3),
        ("L(3)*Delta<3>^2", 3),
        ("Gamma<2>*Gamma<3>", 3),
    ]

    @pytest.mark.parametrize("text,m", CASES)
    def test_render_parse_fixpoint(self, text, m):
        e = evaluate_normal(text, m)
        assert evaluate_normal(render_expr(e), m) == e

    def test_unit_character_renders_bare(self):
        assert render_expr(evaluate_normal("sigma", 2)) == "sigma"


class TestParseForms:
    def test_whitespace_insensitive(self):
        loose = evaluate_normal("  Delta<3>  ^ 2 ", 3)
        assert loose == evaluate_normal("Delta<3>^2", 3)

    def test_rational_coefficients(self):
        half = evaluate_normal("1/2*Delta<2>", 2)
        assert half + half == evaluate_normal("Delta<2>", 2)

    def test_integer_arithmetic(self):
        got = evaluate_normal("2*Delta<2> - Delta<2>", 2)
        assert got == evaluate_normal("Delta<2>", 2)

    def test_parenthesized_integral(self):
        got = evaluate_integral("L(1)*(L(2)-Delta<2>)^2", 2)
        assert got == L2 * dL - omegaL - 2 * L2

    def test_short_node_form_sums_unit_fillings(self):
        short = evaluate_normal("F(13:)", 3)
        explicit = (evaluate_normal("F(1|3:{2}|)", 3)
                    + evaluate_normal("F(1|3:|{2})", 3))
        assert short == explicit

    def test_decorated_side_block(self):
        e = evaluate_normal("NS(1|3:{2}(omega)|)", 3)
        assert render_expr(e) == "NS(1|3:{2}(omega)|)"

    def test_irreducible_marker(self):
        e = evaluate_normal("NS(1|23:)@irr", 3)
        assert render_expr(e) == "NS(1|23:)@irr"


class TestParseErrors:
    def test_position_in_message(self):
        with pytest.raises(ParseError, match="line 1, column 11") as info:
            evaluate_normal("Gamma<2> +* L(1)", 2)
        assert info.value.pos == 10

    def test_level_out_of_range(self):
        with pytest.raises(ParseError, match="level index 4 outside 1..3"):
            evaluate_normal("Gamma<4>", 3)

    def test_slot_out_of_range(self):
        with pytest.raises(ParseError, match="slot index 5 outside 1..3"):
            evaluate_normal("L(5)", 3)

    def test_unknown_character(self):
        with pytest.raises(ParseError, match="unknown character 'sigmaX'"):
            evaluate_normal("sigmaX", 2)

    def test_truncated_input(self):
        with pytest.raises(ParseError, match="expected expression"):
            evaluate_normal("Delta<2>^2 + ", 2)


class TestCliValues:
    def test_beta_row(self):
        assert run_cli(["beta", "6"]) == (0, "15 24 27 24 15\n", "")

    def test_integrate_top_diagonal_fourth(self):
        code, out, err = run_cli(["integrate", "-m", "3", "Delta<3>^4"])
        assert (code, out, err) == (0, "-2*sigma + 14*omega2\n", "")

    def test_normalize_top_diagonal_square(self):
        code, out, _ = run_cli(["normalize", "-m", "3", "Delta<3>^2"])
        assert code == 0
        assert out == ("2*q[{1,2,3}](1) - q[{1,3}](omega) - q[{2,3}](omega)"
                       " + F(13:) + F(23:)\n")

    def test_alpha_notes_closed_form_gap(self):
        code, out, _ = run_cli(["alpha", "4"])
        assert code == 0
        assert out == "15\nnote: the printed closed form evaluates to 18\n"

    def test_colength(self):
        assert run_cli(["colength", "5"]) == (0, "35\n", "")

    def test_schubert_box_degrees(self):
        line = run_cli(["schubert", "--box", "2,4",
                        "--factors", "r2,r3,r3"])
        assert line == (0, "1\n", "")
        quadric = run_cli(["schubert", "--box", "2,2",
                           "--factors", "r1,r1,r1,r1"])
        assert quadric == (0, "2\n", "")

    def test_ord_table(self):
        code, out, _ = run_cli(["ord-table", "-m", "3"])
        assert code == 0
        assert out.splitlines() == [
            "ord j=1 = 3 1 0 0",
            "ord j=2 = 1 0 0 1",
            "ord j=3 = 0 0 1 3",
            "printed-quadratic j=1 = 6 2 0 0",
            "printed-quadratic j=2 = 2 0 0 2",
            "printed-quadratic j=3 = 0 0 2 6",
        ]

    def test_chern_level_two(self):
        code, out, _ = run_cli(["chern", "-m", "2"])
        assert code == 0
        assert out.splitlines() == [
            "c_0 = 1",
            "c_1 = q[{1}](L) - q[{1,2}](1) + q[{2}](L)",
            "c_2 = q[{1},{2}](L, L) - q[{1,2}](L)",
            "c_3 = 0",
        ]

    def test_vdm_check(self):
        code, out, _ = run_cli(["vdm-check", "-m", "3"])
        lines = out.splitlines()
        assert code == 0
        assert lines[:3] == [
            "chain m=2 i=1 sign=-1 OK",
            "chain m=3 i=1 sign=-1 OK",
            "chain m=3 i=2 sign=+1 OK",
        ]
        assert len(lines) == 19
        assert all(line.endswith(" OK") for line in lines)

    def test_eta_reports_both_gaps(self):
        code, out, _ = run_cli(["eta", "3", "1", "3"])
        lines = out.splitlines()
        assert code == 0
        assert lines[:3] == [
            "eta_valuation = 4",
            "quadratic_exponent = 3",
            "printed_exponent = 0",
        ]
        assert len(lines) == 5
        assert all(line.startswith("note:") for line in lines[3:])

    def test_nsec3_breakdown(self):
        code, out, _ = run_cli(["nsec3", "--breakdown"])
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == ("3*L2*dL^2 + 6*dL*sigma - 12*dL*omegaL"
                            " - 3*dL*omega2 - 3*L2*g2 - 27*L2*dL"
                            " - 12*sigma + 72*omegaL + 28*omega2 + 60*L2")
        terms = [line for line in lines if line.startswith("term ")]
        assert len(terms) == 10
        assert "term j=(3,0,1) G=1 W=0" in terms
        assert "term j=(2,0,2) G=1 W=-L2*g2 - 2*L2*dL + 2*L2" in terms


class TestCliFormats:
    def test_alpha_kv(self):
        code, out, _ = run_cli(["alpha", "4", "--format", "kv"])
        assert code == 0
        assert out == "alpha = 15\nprinted_closed_form = 18\n"

    def test_eta_kv_drops_notes(self):
        code, out, _ = run_cli(["eta", "3", "1", "3", "--format", "kv"])
        assert code == 0
        assert out == ("eta_valuation = 4\nquadratic_exponent = 3\n"
                       "printed_exponent = 0\n")

    def test_beta_kv(self):
        code, out, _ = run_cli(["beta", "6", "--format", "kv"])
        assert code == 0
        assert out == "beta = 15 24 27 24 15\n"


class TestCliCharsFile:
    def write_cfg(self, tmp_path, g2="sym"):
        cfg = tmp_path / "chars.cfg"
        cfg.write_text(
            "# test surface\n"
            "sigma = 0\nomega2 = 0\nomegaL = 1\nL2 = 2\ndL = 3\n"
            f"g2 = {g2}\n")
        return str(cfg)

    def test_integrate_with_assignment(self, tmp_path):
        cfg = self.write_cfg(tmp_path)
        code, out, _ = run_cli(["integrate", "-m", "3", "Delta<3>^4",
                                "--chars", cfg])
        assert (code, out) == (0, "0\n")

    def test_nsec3_partial_assignment(self, tmp_path):
        cfg = self.write_cfg(tmp_path)
        code, out, _ = run_cli(["nsec3", "--chars", cfg])
        assert (code, out) == (0, "-6*g2 + 48\n")

    def test_nsec3_full_assignment_divides(self, tmp_path):
        cfg = self.write_cfg(tmp_path, g2="1")
        code, out, _ = run_cli(["nsec3", "--chars", cfg])
        assert (code, out) == (0, "42\nN3 = 7\n")

    def test_bad_key_rejected(self, tmp_path):
        cfg = tmp_path / "chars.cfg"
        cfg.write_text("bogus = 1\n")
        code, out, err = run_cli(["integrate", "-m", "3", "Delta<3>^4",
                                  "--chars", str(cfg)])
        assert code == 1
        assert out == ""
        assert err.startswith("error:")


class TestCliExitCodes:
    @pytest.mark.parametrize("argv", [
        ["integrate", "-m", "3", "Gamma<4>"],
        ["beta", "6", "--bogus-flag"],
        ["no-such-command"],
        ["eta", "3", "1"],
    ])
    def test_usage_and_parse_errors(self, argv):
        code, out, err = run_cli(argv)
        assert code == 1
        assert out == ""
        assert err.startswith("error:")

    @pytest.mark.parametrize("argv", [
        ["integrate", "-m", "3", "Delta<3>^3"],
        ["normalize", "-m", "3", "F(13:)*F(23:)"],
        ["beta", "1"],
    ])
    def test_engine_errors(self, argv):
        code, out, err = run_cli(argv)
        assert code == 2
        assert out == ""
        assert err.startswith("error:")


class TestVerifyBattery:
    def test_all_checks_consistent(self):
        code, out, _ = run_cli(["verify-paper"])
        lines = out.splitlines()
        assert code == 0
        assert lines[-1] == "OK: all checks consistent"
        for line in lines[:-1]:
            assert line.startswith(("PASS ", "NOTE "))
