import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from qlab.algebra import (
    BiLaurent,
    BigComplex,
    CycloElem,
    LAURENT_RING,
    LaurentPoly,
    ONE_MINUS_Z,
    RATIONAL_RING,
    TruncatedSeries,
    bi_pochhammer,
    clear_pole,
    cyclo_canon,
    cyclo_embed,
    cyclotomic_polynomial,
    series_inv,
    series_mul,
)
from qlab.errors import InexactDivisionError, NonInvertibleError, RingMismatchError


def rational_series(coeffs, pole_exp=0):
    return TruncatedSeries(RATIONAL_RING, [Fraction(c) for c in coeffs], pole_exp=pole_exp)


fractions_st = st.fractions(min_value=-9, max_value=9, max_denominator=5)


@st.composite
def laurent_polys(draw):
    n_terms = draw(st.integers(0, 4))
    coeffs = {}
    for _ in range(n_terms):
        coeffs[draw(st.integers(-4, 4))] = draw(fractions_st)
    return LaurentPoly(coeffs)


@st.composite
def rational_truncated(draw, max_order=8):
    order = draw(st.integers(0, max_order))
    return rational_series([draw(fractions_st) for _ in range(order + 1)])


@st.composite
def laurent_truncated(draw, max_order=6):
    order = draw(st.integers(0, max_order))
    return TruncatedSeries(LAURENT_RING, [draw(laurent_polys()) for _ in range(order + 1)])


class TestLaurentPoly:
    def test_zero_coefficients_dropped(self):
        assert LaurentPoly({3: 0, 1: 1}).support() == (1,)

    def test_arithmetic(self):
        p = LaurentPoly({1: 1, -1: 1})
        assert p + 1 == LaurentPoly({1: 1, 0: 1, -1: 1})
        assert p - p == LaurentPoly.zero()
        assert p * LaurentPoly.z(2) == LaurentPoly({3: 1, 1: 1})

    def test_eval_at(self):
        p = LaurentPoly({2: 1, 0: -2, -1: Fraction(1, 3)})
        assert p.eval_at(Fraction(2)) == 4 - 2 + Fraction(1, 6)

    def test_div_one_minus_z_exact(self):
        p = LaurentPoly({0: 1, 2: -1})  # 1 - z^2 = (1-z)(1+z)
        assert p.div_one_minus_z() == LaurentPoly({0: 1, 1: 1})

    def test_div_one_minus_z_inexact(self):
        with pytest.raises(InexactDivisionError):
            LaurentPoly({0: 1, 1: 1}).div_one_minus_z()

    @given(laurent_polys(), st.integers(1, 3))
    @settings(max_examples=60, deadline=None)
    def test_div_round_trip(self, p, power):
        multiplied = p * ONE_MINUS_Z ** power
        back = multiplied
        for _ in range(power):
            back = back.div_one_minus_z()
        assert back == p

    def test_unit_inverse(self):
        u = LaurentPoly({-2: Fraction(3, 4)})
        assert u * u.inverse() == LaurentPoly.one()
        with pytest.raises(NonInvertibleError):
            LaurentPoly({0: 1, 1: 1}).inverse()

    def test_invert_z(self):
        p = LaurentPoly({2: 1, -1: 5})
        assert p.invert_z() == LaurentPoly({-2: 1, 1: 5})


class TestSeriesMul:
    def test_one_plus_q_times_one_minus_q(self):
        a = rational_series([1, 1, 0])
        b = rational_series([1, -1, 0])
        assert series_mul(a, b) == rational_series([1, 0, -1])

    def test_multiplicative_identity(self):
        a = rational_series([3, Fraction(1, 2), -4, 7])
        assert series_mul(a, TruncatedSeries.one(RATIONAL_RING, 3)) == a

    def test_euler_product_times_inverse(self):
        # (q;q)_inf * 1/(q;q)_inf -> 1 at order 20, both factors built separately
        n = 20
        prod = TruncatedSeries.one(RATIONAL_RING, n)
        for i in range(1, n + 1):
            prod = prod.mul_monomial_factor(Fraction(1), 0, i)
        inv = series_inv(prod)
        assert series_mul(prod, inv) == TruncatedSeries.one(RATIONAL_RING, n)

    def test_truncates_to_min_order(self):
        a = rational_series([1, 2, 3])
        b = rational_series([1, 1])
        assert series_mul(a, b).order == 1

    def test_pole_exponents_add(self):
        a = TruncatedSeries(LAURENT_RING, [LaurentPoly.one()] * 3, pole_exp=1)
        assert series_mul(a, a).pole_exp == 2

    def test_ring_mismatch(self):
        a = rational_series([1, 2])
        b = TruncatedSeries(LAURENT_RING, [LaurentPoly.one()] * 2)
        with pytest.raises(RingMismatchError):
            series_mul(a, b)

    @given(rational_truncated(), rational_truncated(), rational_truncated())
    @settings(max_examples=40, deadline=None)
    def test_ring_laws(self, a, b, c):
        n = min(a.order, b.order, c.order)
        a, b, c = a.truncate(n), b.truncate(n), c.truncate(n)
        assert series_mul(a, b) == series_mul(b, a)
        assert series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c))
        assert series_mul(a, b + c) == series_mul(a, b) + series_mul(a, c)

    @given(laurent_truncated(), laurent_truncated())
    @settings(max_examples=25, deadline=None)
    def test_laurent_commutativity(self, a, b):
        n = min(a.order, b.order)
        assert series_mul(a.truncate(n), b.truncate(n)) == series_mul(b.truncate(n), a.truncate(n))


class TestSeriesInv:
    def test_geometric(self):
        geo = series_inv(rational_series([1, -1, 0, 0, 0]))
        assert list(geo.coeffs) == [Fraction(1)] * 5

    def test_identity(self):
        one = TruncatedSeries.one(RATIONAL_RING, 6)
        assert series_inv(one) == one

    def test_double_inverse_round_trip(self):
        rng = random.Random(5)
        for _ in range(100):
            coeffs = [Fraction(1)] + [
                Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(12)
            ]
            a = rational_series(coeffs)
            assert series_inv(series_inv(a)) == a

    def test_inv_is_right_inverse(self):
        rng = random.Random(11)
        for _ in range(100):
            coeffs = [Fraction(rng.choice((1, -1, 2)))] + [
                Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(10)
            ]
            a = rational_series(coeffs)
            assert series_mul(a, series_inv(a)) == TruncatedSeries.one(RATIONAL_RING, 10)

    def test_zero_constant_term_rejected(self):
        with pytest.raises(NonInvertibleError):
            series_inv(rational_series([0, 1, 2]))

    def test_laurent_non_unit_rejected(self):
        bad = TruncatedSeries(LAURENT_RING, [LaurentPoly({0: 1, 2: 1}), LaurentPoly.one()])
        with pytest.raises(NonInvertibleError):
            series_inv(bad)

    def test_one_minus_z_unit_moves_to_pole(self):
        # constant term (1-z): inverse carries pole_exp 1 when all coefficients divide
        coeffs = [ONE_MINUS_Z, ONE_MINUS_Z * LaurentPoly.z(1)]
        a = TruncatedSeries(LAURENT_RING, coeffs)
        inv = series_inv(a)
        assert inv.pole_exp == 1
        assert series_mul(a, inv).same_object(TruncatedSeries.one(LAURENT_RING, 1))


class TestClearPole:
    def _cleared_bracket(self, order):
        out = TruncatedSeries.one(LAURENT_RING, order)
        for i in range(1, order + 1):
            out = out.div_monomial_factor(1, 1, i)
            out = out.div_monomial_factor(1, -1, i)
        return out.with_pole_exp_marker(1)

    def test_identity_case(self):
        jb = self._cleared_bracket(6)
        assert clear_pole(jb, jb.pole_exp) is jb

    def test_round_trip(self):
        jb = self._cleared_bracket(8)
        up = clear_pole(jb, 3)
        assert up.pole_exp == 3
        assert clear_pole(up, 1) == jb

    def test_lowering_a_genuine_pole_fails(self):
        jb = self._cleared_bracket(8)
        with pytest.raises(InexactDivisionError):
            clear_pole(jb, 0)

    def test_divisible_object_lowers_exactly(self):
        base = self._cleared_bracket(8)
        scaled = TruncatedSeries(
            LAURENT_RING, [c * ONE_MINUS_Z for c in base.coeffs], pole_exp=1
        )
        lowered = clear_pole(scaled, 0)
        assert lowered.pole_exp == 0
        assert list(lowered.coeffs) == list(base.coeffs)

    def test_same_object_across_pole_markers(self):
        jb = self._cleared_bracket(5)
        assert jb.same_object(clear_pole(jb, 4))

    def test_rational_ring_rejected(self):
        with pytest.raises(RingMismatchError):
            clear_pole(rational_series([1, 2]), 1)


class TestCyclo:
    def test_i_squared(self):
        assert cyclo_canon(4, {2: 1}) == CycloElem.from_rational(4, -1)

    def test_conductor_one(self):
        assert cyclo_canon(1, {17: Fraction(2, 3)}) == CycloElem.from_rational(1, Fraction(2, 3))

    def test_fifth_roots_sum_to_zero(self):
        total = cyclo_canon(5, {k: 1 for k in range(5)})
        assert total.is_zero()
        emb = cyclo_embed(sum((CycloElem.zeta(5) ** k for k in range(1, 5)), CycloElem.one(5)), 128)
        assert abs(emb) < mpmath.mpf(2) ** -100

    @pytest.mark.parametrize("m", list(range(1, 31)))
    def test_zeta_m_to_the_m_is_one(self, m):
        assert CycloElem.zeta(m) ** m == CycloElem.one(m)

    def test_cyclotomic_polynomials_against_sympy(self):
        sympy = pytest.importorskip("sympy")
        x = sympy.symbols("x")
        for m in range(1, 31):
            ours = cyclotomic_polynomial(m)
            theirs = sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()[::-1]
            assert list(ours) == [int(c) for c in theirs]

    def test_embedding_values(self):
        bits = 128
        z2 = cyclo_embed(CycloElem.zeta(2), bits)
        assert abs(z2 - (-1)) < mpmath.mpf(2) ** (-bits + 4)
        z4 = cyclo_embed(CycloElem.zeta(4), bits)
        assert abs(z4 - BigComplex(mpmath.mpc(0, 1), bits)) < mpmath.mpf(2) ** (-bits + 4)

    def test_embedding_is_ring_homomorphism(self):
        rng = random.Random(3)
        bits = 128
        tol = mpmath.mpf(2) ** (-bits + 8)
        for _ in range(25)            :
            m = rng.randint(1, 12)
            x = CycloElem.from_powers(
                m, {rng.randrange(m): Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                    for _ in range(3)}
            )
            y = CycloElem.from_powers(
                m, {rng.randrange(m): Fraction(rng.randint(-4, 4)) for _ in range(2)}
            )
            assert abs(cyclo_embed(x * y, bits) - cyclo_embed(x, bits) * cyclo_embed(y, bits)) < tol
            assert abs(cyclo_embed(x + y, bits) - (cyclo_embed(x, bits) + cyclo_embed(y, bits))) < tol

    def test_inverse(self):
        x = CycloElem.zeta(7) + 2
        assert x * x.inverse() == CycloElem.one(7)
        with pytest.raises(NonInvertibleError):
            CycloElem.zero(5).inverse()

    def test_negative_powers(self):
        z = CycloElem.zeta(9)
        assert z ** -1 * z == CycloElem.one(9)

    def test_lift_and_mixed_conductors(self):
        i = CycloElem.zeta(4)
        z8sq = CycloElem.zeta(8) ** 2
        assert i == z8sq
        assert (i + CycloElem.zeta(8)).m == 8

    def test_galois(self):
        z = CycloElem.zeta(5)
        x = z + z ** 4
        assert x.galois(2) == z ** 2 + z ** 3
        with pytest.raises(ValueError):
            z.galois(5)

    def test_embed_requires_64_bits(self):
        with pytest.raises(ValueError):
            cyclo_embed(CycloElem.zeta(3), 32)


class TestBigComplex:
    def test_arithmetic_and_precision(self):
        a = BigComplex.from_rational(Fraction(1, 3), 200)
        b = BigComplex.from_rational(Fraction(1, 7), 100)
        c = a * b
        assert c.bits == 100  # accuracy is bounded by the weaker operand
        assert abs(c - BigComplex.from_rational(Fraction(1, 21), 200)) < mpmath.mpf(2) ** -90
        exact_mix = a * Fraction(1, 7)
        assert exact_mix.bits == 200
        assert abs(exact_mix - BigComplex.from_rational(Fraction(1, 21), 200)) < mpmath.mpf(2) ** -190

    def test_root_of_unity(self):
        w = BigComplex.root_of_unity(6, bits=150)
        assert abs(w ** 6 - 1) < mpmath.mpf(2) ** -140

    def test_division_and_pow(self):
        x = BigComplex(mpmath.mpc(3, 4), 100)
        assert abs(x / x - 1) < mpmath.mpf(2) ** -90
        assert abs(x ** -1 * x - 1) < mpmath.mpf(2) ** -90


class TestBiLaurent:
    def test_pochhammer_inversion_n2(self):
        lhs = bi_pochhammer(1, 1, 0, 1, 2) * bi_pochhammer(1, -1, 1, 1, 2)
        rhs = BiLaurent.term(1, 0, 4) * bi_pochhammer(1, -1, 0, -1, 2) * bi_pochhammer(1, 1, -1, -1, 2)
        assert lhs == rhs

    def test_basic_ops(self):
        t = BiLaurent.term(1, 1, -1)
        assert t * t == BiLaurent.term(1, 2, -2)
        assert t - t == BiLaurent()
