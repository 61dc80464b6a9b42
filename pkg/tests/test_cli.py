import json
from fractions import Fraction

import pytest

from qlab.algebra import CycloElem
from qlab.cli import main
from qlab.zexpr import parse_z_expr


def run_cli(capsys, *argv):
    try:
        rc = main(list(argv))
    except SystemExit as exc:
        rc = exc.code if isinstance(exc.code, int) else 2
    captured = capsys.readouterr()
    doc = json.loads(captured.out) if captured.out.strip() else None
    return rc, doc, captured.err


class TestZExpressions:
    def test_rationals(self):
        assert parse_z_expr("3") == Fraction(3)
        assert parse_z_expr("-5/7") == Fraction(-5, 7)
        assert parse_z_expr("0.25") == Fraction(1, 4)

    def test_gaussian(self):
        assert parse_z_expr("2+i") == CycloElem.from_powers(4, {0: 2, 1: 1})
        assert parse_z_expr("1/2-3i") == CycloElem.from_powers(4, {0: Fraction(1, 2), 1: -3})
        assert parse_z_expr("i") == CycloElem.zeta(4)
        assert parse_z_expr("-i") == CycloElem.zeta(4) * -1

    def test_zeta_tokens(self):
        assert parse_z_expr("zeta(8)") == CycloElem.zeta(8)
        assert parse_z_expr("zeta(8)^3") == CycloElem.zeta(8, 3)
        assert parse_z_expr("1/2*zeta(8)") == CycloElem.zeta(8) * Fraction(1, 2)

    def test_junk(self):
        with pytest.raises(ValueError):
            parse_z_expr("spam")


class TestExpandCommand:
    def test_f_order_five(self, capsys):
        rc, doc, _ = run_cli(capsys, "expand", "f", "--order", "5")
        assert rc == 0
        assert len(doc["coeffs"]) == 6

    def test_utilde_q2_coefficient(self, capsys):
        rc, doc, _ = run_cli(capsys, "expand", "utilde", "--k", "1", "--order", "2")
        assert rc == 0
        assert doc["coeffs"][2]["poly"] == {"-1": "1", "0": "1", "1": "1"}

    def test_unknown_series_exits_2(self, capsys):
        rc, _, err = run_cli(capsys, "expand", "unknown", "--order", "3")
        assert rc == 2
        assert "unknown series" in err

    def test_usage_error_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["expand"])  # missing required --order
        assert exc.value.code == 2


class TestRootCommand:
    def test_g3_minus_three_sevenths(self, capsys):
        rc, doc, _ = run_cli(capsys, "root", "g3", "--m", "1", "--z", "3")
        assert rc == 0
        assert doc == {"kind": "rational", "value": "-3/7"}

    def test_zeta5_product_from_exact_outputs(self, capsys):
        rc, doc, _ = run_cli(capsys, "root", "f", "--m", "5", "--exact")
        assert rc == 0
        coords = [Fraction(c) for c in doc["coords"]]
        value = CycloElem(5, coords)
        prod = value
        for i in (2, 3, 4):
            prod = prod * value.galois(i)
        assert prod.as_rational() == Fraction(256, 81)

    def test_singular_exits_2(self, capsys):
        rc, _, err = run_cli(capsys, "root", "g3", "--m", "4", "--z", "zeta(24)")
        assert rc == 2
        assert "singular" in err.lower()


class TestRadialCommand:
    def test_f_matches_exact_root_value(self, capsys):
        rc, doc, _ = run_cli(
            capsys, "radial", "f", "--zeta", "3", "--jlo", "4", "--jhi", "12",
            "--precision", "192",
        )
        assert rc == 0
        from qlab.roots import f_at_odd_root
        import mpmath

        exact = f_at_odd_root(3).embed(192)
        est = mpmath.mpc(mpmath.mpf(doc["estimate"]["re"]), mpmath.mpf(doc["estimate"]["im"]))
        assert abs(est - exact.value) < mpmath.mpf(doc["error_bound"])

    def test_single_rho_flagged(self, capsys):
        rc, doc, _ = run_cli(capsys, "radial", "f", "--zeta", "3", "--rho", "0.5")
        assert rc == 0
        assert doc["unreliable"] is True

    def test_g3_matches_exact(self, capsys):
        rc, doc, _ = run_cli(
            capsys, "radial", "g3", "--zeta", "3", "--z", "2", "--jlo", "4",
            "--jhi", "12", "--precision", "192",
        )
        assert rc == 0
        from qlab.roots import g3_at_root
        import mpmath

        exact = g3_at_root(Fraction(2), 3).embed(192)
        est = mpmath.mpc(mpmath.mpf(doc["estimate"]["re"]), mpmath.mpf(doc["estimate"]["im"]))
        assert abs(est - exact.value) < mpmath.mpf(doc["error_bound"])


class TestEnumerateCommand:
    def test_table(self, capsys):
        rc, doc, _ = run_cli(capsys, "enumerate", "--max-weight", "4", "--k", "2", "--strong")
        assert rc == 0
        assert doc["strong"] is True
        # double peaks: (1,1) at weight 2 and (2,2) at weight 4; strong sides
        # need parts below the peak, so weight 3 is unreachable
        assert {(c["rank"], c["weight"], c["count"]) for c in doc["counts"]} == {
            (0, 2, 1), (0, 4, 1),
        }


class TestVerifyCommand:
    def test_single_suite_passes(self, capsys):
        rc, doc, _ = run_cli(capsys, "verify", "--suite", "ZETA5")
        assert rc == 0
        assert doc["all_passed"] is True

    def test_unknown_suite_exits_2(self, capsys):
        rc, _, err = run_cli(capsys, "verify", "--suite", "NOPE")
        assert rc == 2
        assert "unknown suite" in err

    def test_failing_suite_exits_1(self, capsys):
        rc, doc, _ = run_cli(capsys, "verify", "--suite", "EQ17")
        assert rc == 1
        assert doc["all_passed"] is False

    def test_multiple_suites(self, capsys):
        rc, doc, _ = run_cli(
            capsys, "verify", "--suite", "ZETA5", "--suite", "EQ16", "--order", "12"
        )
        assert rc == 0
        assert [r["id"] for r in doc["reports"]] == ["EQ16", "ZETA5"]


class TestSeriesJsonRoundTrip:
    def test_expand_doc_reconstructs_exact_coefficients(self, capsys):
        from qlab.algebra import LaurentPoly
        from qlab.series import jbracket_cleared

        rc, doc, _ = run_cli(capsys, "expand", "jbracket", "--order", "6")
        assert rc == 0
        original = jbracket_cleared(6)
        assert doc["pole_exp"] == original.pole_exp
        for entry, coeff in zip(doc["coeffs"], original.coeffs):
            rebuilt = LaurentPoly(
                {int(e): Fraction(v) for e, v in entry["poly"].items()}
            )
            assert rebuilt == coeff
