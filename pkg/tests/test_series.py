from fractions import Fraction

import mpmath
import pytest

from qlab import numeric
from qlab.algebra import (
    BigComplex,
    LAURENT_RING,
    LaurentPoly,
    RATIONAL_RING,
    TruncatedSeries,
    series_inv,
    series_mul,
)
from qlab.errors import DivergenceError, SingularEvaluationError, UnknownSeriesError
from qlab.partitions import crank_weight, jz_weight, partitions_of
from qlab.series import (
    PochhammerSpec,
    b_modular,
    by_name,
    crank_gf,
    eval_numeric,
    f_mock,
    g3_forward,
    g3_inverted,
    jbracket_cleared,
    pochhammer,
    qbracket,
    strong_unimodal_gf,
    triple_product,
    unimodal_gf,
)


def pentagonal_expansion(order):
    """Euler's pentagonal number theorem for (q;q)_inf, as an independent oracle."""
    coeffs = [Fraction(0)] * (order + 1)
    coeffs[0] = Fraction(1)
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > order and g2 > order:
            break
        sign = Fraction(-1 if k % 2 else 1)
        if g1 <= order:
            coeffs[g1] += sign
        if g2 <= order:
            coeffs[g2] += sign
        k += 1
    return coeffs


class TestPochhammer:
    def test_count_zero_is_one(self):
        s = pochhammer(PochhammerSpec(z_exp=1, count=0), 5)
        assert s == TruncatedSeries.one(LAURENT_RING, 5)

    def test_z_q_two(self):
        s = pochhammer(PochhammerSpec(z_exp=1, count=2), 3)
        # (1-z)(1-zq) = 1 - z - zq + z^2 q
        assert s.coeffs[0] == LaurentPoly({0: 1, 1: -1})
        assert s.coeffs[1] == LaurentPoly({1: -1, 2: 1})
        assert s.coeffs[2] == LaurentPoly.zero()

    def test_euler_product_matches_pentagonal_oracle(self):
        s = pochhammer(PochhammerSpec(q_exp=1), 12)
        assert list(s.coeffs) == pentagonal_expansion(12)

    def test_infinite_needs_qadic_convergence(self):
        with pytest.raises(DivergenceError):
            pochhammer(PochhammerSpec(z_exp=1, q_step=0), 5)

    def test_negative_q_exponent_rejected(self):
        with pytest.raises(ValueError):
            pochhammer(PochhammerSpec(q_exp=-1, count=2), 5)


class TestTripleProduct:
    def test_q0_coefficient(self):
        assert triple_product(4).coeffs[0] == LaurentPoly({0: 1, 1: -1})

    def test_every_coefficient_vanishes_at_z_one(self):
        tp = triple_product(15)
        for n in range(16):
            assert tp.coeffs[n].eval_at_one() == 0

    def test_inverse_round_trip(self):
        tp = triple_product(10)
        assert series_mul(tp, series_inv(tp)).same_object(
            TruncatedSeries.one(LAURENT_RING, 10)
        )


class TestQBracket:
    def test_constant_weight_collapses(self):
        got = qbracket(lambda lam: LaurentPoly.one(), 10)
        assert got == TruncatedSeries.one(LAURENT_RING, 10)

    def test_jz_weight_gives_cleared_bracket(self):
        got = qbracket(jz_weight, 8)
        jb = jbracket_cleared(8)
        assert list(got.coeffs) == list(jb.coeffs)

    def test_literal_crank_sums_match_crank_gf_beyond_n1(self):
        # the partition-weighted sum itself (no Euler factor) is C(z;q), n >= 2
        from qlab.partitions import crank

        cg = crank_gf(10)
        for n in range(2, 11):
            total = LaurentPoly.zero()
            for lam in partitions_of(n):
                total = total + LaurentPoly.z(crank(lam))
            assert total == cg.coeffs[n], n

    def test_crank_weight_convention_matches_everywhere(self):
        cg = crank_gf(10)
        for n in range(11):
            total = LaurentPoly.zero()
            for lam in partitions_of(n):
                total = total + crank_weight(lam)
            assert total == cg.coeffs[n], n


class TestJBracket:
    def test_q0_is_one(self):
        assert jbracket_cleared(6).coeffs[0] == LaurentPoly.one()

    def test_pole_marker(self):
        assert jbracket_cleared(3).pole_exp == 1

    def test_times_euler_product_is_crank_gf(self):
        jb = jbracket_cleared(12).with_pole_exp_marker(0)
        qq = pochhammer(PochhammerSpec(q_exp=1), 12, LAURENT_RING)
        assert list(series_mul(jb, qq).coeffs) == list(crank_gf(12).coeffs)


class TestG3:
    def test_forward_cleared_q0(self):
        assert g3_forward(5).coeffs[0] == LaurentPoly.one()
        assert g3_forward(5).pole_exp == 1

    def test_inverted_cleared_q1(self):
        g = g3_inverted(5)
        assert g.coeffs[0] == LaurentPoly.zero()
        assert g.coeffs[1] == LaurentPoly.one()

    def test_forward_numeric_vs_termwise(self):
        # tail decays like (z q)^n = 0.3^n, so order 80 covers 40 digits
        s = g3_forward(80)
        got = eval_numeric(s, Fraction(3), BigComplex.from_rational(Fraction(1, 10), 256))
        want = numeric.g3_value(Fraction(3), Fraction(1, 10), 256)
        assert abs(got.value - want) < mpmath.mpf(10) ** -40

    def test_not_z_symmetric(self):
        s = g3_forward(6)
        flipped = [c.invert_z() for c in s.coeffs]
        assert any(a != b for a, b in zip(s.coeffs, flipped))

    def test_inverted_numeric_continues_outside(self):
        # the |q| > 1 branch: g3(1/5, 7) equals the inverted series at (5, 1/7)
        inside = numeric.g3_inverted_value(Fraction(5), Fraction(1, 7), 256)
        outside = numeric.g3_value(Fraction(1, 5), Fraction(7), 256)
        assert abs(inside - outside) < mpmath.mpf(10) ** -20


class TestUnimodalSeries:
    def test_low_coefficients(self):
        u = unimodal_gf(1, 2)
        assert u.coeffs[0] == LaurentPoly.one()
        assert u.coeffs[1] == LaurentPoly.one()
        assert u.coeffs[2] == LaurentPoly({-1: 1, 0: 1, 1: 1})

    def test_twofold_low_weight(self):
        u = unimodal_gf(2, 3)
        assert u.coeffs[0] == LaurentPoly.one()
        assert u.coeffs[1] == LaurentPoly.zero()

    def test_palindromic(self):
        u = unimodal_gf(1, 12)
        for c in u.coeffs:
            assert c == c.invert_z()

    def test_strong_low_coefficients(self):
        u = strong_unimodal_gf(1, 3)
        assert u.coeffs[1] == LaurentPoly.one()
        assert u.coeffs[2] == LaurentPoly.one()
        assert u.coeffs[3] == LaurentPoly({-1: 1, 0: 1, 1: 1})

    @pytest.mark.parametrize("fold", (1, 2, 3))
    def test_strong_z_inverse_symmetry(self, fold):
        u = strong_unimodal_gf(fold, 12)
        for c in u.coeffs:
            assert c == c.invert_z()

    def test_alternating_signs_at_minus_one(self):
        from qlab.partitions import unimodal_counts

        u = strong_unimodal_gf(1, 10)
        tab = unimodal_counts(10, 1, True)
        for n in range(1, 11):
            got = u.coeffs[n].eval_at(Fraction(-1))
            want = sum(
                (-1) ** m * tab.count(m, n) for m in range(-n, n + 1)
            )
            assert got == want


class TestMockTheta:
    def test_q0(self):
        assert f_mock(4).coeffs[0] == Fraction(1)

    def test_q1(self):
        assert f_mock(4).coeffs[1] == Fraction(1)

    def test_known_expansion_prefix(self):
        # f(q) = 1 + q - 2q^2 + 3q^3 - 3q^4 + 3q^5 - 5q^6 + ...
        assert [int(c) for c in f_mock(6).coeffs] == [1, 1, -2, 3, -3, 3, -5]

    def test_two_forms_agree_to_40(self):
        assert f_mock(40, "EQ1") == f_mock(40, "FINE")

    def test_unknown_form(self):
        with pytest.raises(UnknownSeriesError):
            f_mock(5, "NOPE")


class TestBModular:
    def test_q0(self):
        assert b_modular(6).coeffs[0] == Fraction(1)

    def test_definition_round_trip(self):
        b = b_modular(20)
        neg = pochhammer(PochhammerSpec(scalar=Fraction(-1), q_exp=1), 20)
        assert series_mul(series_mul(b, neg), neg) == pochhammer(
            PochhammerSpec(q_exp=1), 20
        )

    def test_numeric_against_product(self):
        got = eval_numeric(b_modular(90), None, BigComplex.from_rational(Fraction(3, 10), 256))
        want = numeric.b_value(Fraction(3, 10), 256)
        assert abs(got.value - want) < mpmath.mpf(10) ** -30


class TestEvalNumeric:
    def test_constant_one(self):
        one = TruncatedSeries.one(RATIONAL_RING, 5)
        got = eval_numeric(one, None, BigComplex.from_rational(Fraction(1, 2), 128))
        assert abs(got.value - 1) == 0

    def test_truncation_stability(self):
        q = BigComplex.from_rational(Fraction(1, 10), 256)
        a = eval_numeric(f_mock(30), None, q)
        b = eval_numeric(f_mock(40), None, q)
        assert abs(a.value - b.value) < mpmath.mpf(10) ** -25

    def test_jbracket_against_product_oracle(self):
        # coefficient growth ~ 2^n at z=2, so the tail decays like 0.4^n
        q = BigComplex.from_rational(Fraction(1, 5), 256)
        got = eval_numeric(jbracket_cleared(60), Fraction(2), q)
        want = numeric.jbracket_value(Fraction(2), Fraction(1, 5), 256)
        assert abs(got.value - want) < mpmath.mpf(10) ** -20

    def test_pole_guard(self):
        q = BigComplex.from_rational(Fraction(1, 5), 128)
        with pytest.raises(SingularEvaluationError):
            eval_numeric(jbracket_cleared(5), Fraction(1), q)

    def test_modulus_guard(self):
        with pytest.raises(SingularEvaluationError):
            eval_numeric(f_mock(5), None, BigComplex.from_rational(Fraction(3, 2), 128))

    def test_named_series_dispatch(self):
        q = BigComplex.from_rational(Fraction(1, 10), 128)
        got = eval_numeric("f", None, q, order=30)
        want = numeric.f_value(Fraction(1, 10), 128)
        assert abs(got.value - want) < mpmath.mpf(10) ** -25


class TestCatalog:
    def test_all_names_construct(self):
        for name in ("f", "b", "g3_forward", "g3_inverted", "U_k", "Utilde_k",
                     "crank_gf", "jbracket", "triple_product"):
            s = by_name(name, 6, fold=2)
            assert s.order == 6

    def test_unknown_name(self):
        with pytest.raises(UnknownSeriesError):
            by_name("nope", 5)


class TestCycloScalarPochhammer:
    def test_gaussian_product_is_neg_q2_product(self):
        # (iq;q)_inf (-iq;q)_inf = (-q^2;q^2)_inf, over the 4th cyclotomic field
        from qlab.algebra import CycloElem, cyclo_ring

        i4 = CycloElem.zeta(4)
        n = 12
        a = pochhammer(PochhammerSpec(scalar=i4, q_exp=1), n)
        b = pochhammer(PochhammerSpec(scalar=-1 * i4, q_exp=1), n)
        prod = series_mul(a, b)
        target = pochhammer(PochhammerSpec(scalar=Fraction(-1), q_exp=2, q_step=2), n)
        lifted = target.map_coefficients(
            lambda c: CycloElem.from_rational(4, c), cyclo_ring(4)
        )
        assert list(prod.coeffs) == list(lifted.coeffs)
