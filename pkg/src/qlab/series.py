"""Construction of the q-series zoo as truncated series.

Everything is exact: series over Laurent polynomials in z (symbolic), over
the rationals, or over a cyclotomic field.  Infinite q-Pochhammer products
and the n-indexed sums only ever multiply/divide by factors (1 - c z^a q^b)
with b >= 1, which keeps construction O(N^2) in the truncation order.

Numeric evaluation of the named series (term-wise, at a point) lives in
:mod:`qlab.numeric`; here ``eval_numeric`` substitutes into a truncated
series and reports a tail estimate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

import mpmath

from .algebra import (
    BigComplex,
    CycloElem,
    LAURENT_RING,
    LaurentPoly,
    RATIONAL_RING,
    Ring,
    TruncatedSeries,
    complex_ring,
    cyclo_ring,
    series_inv,
    series_mul,
)
from .errors import DivergenceError, SingularEvaluationError, UnknownSeriesError
from .partitions import Partition, partitions_of

INFINITE = None

SERIES_CATALOG = (
    "f",
    "b",
    "g3_forward",
    "g3_inverted",
    "U_k",
    "Utilde_k",
    "crank_gf",
    "jbracket",
    "triple_product",
)


@dataclass(frozen=True)
class PochhammerSpec:
    """(a; q^step)_count with a = scalar * z^z_exp * q^q_exp.

    count=None means the infinite product; it q-adically converges as long
    as step >= 1, since every factor beyond the first carries a positive
    power of q.
    """

    scalar: object = 1
    z_exp: int = 0
    q_exp: int = 0
    q_step: int = 1
    count: int | None = INFINITE


def _ring_for(spec: PochhammerSpec) -> Ring:
    if spec.z_exp != 0:
        return LAURENT_RING
    if isinstance(spec.scalar, CycloElem):
        return cyclo_ring(spec.scalar.m)
    if isinstance(spec.scalar, BigComplex):
        return complex_ring(spec.scalar.bits)
    return RATIONAL_RING


def pochhammer(spec: PochhammerSpec, order: int, ring: Ring | None = None) -> TruncatedSeries:
    """Expand the q-Pochhammer product exactly to the given order.

    Factors whose q-power exceeds the order are identically 1 there, so the
    infinite product needs only finitely many of them.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    ring = ring or _ring_for(spec)
    out = TruncatedSeries.one(ring, order)
    if spec.count == 0:
        return out
    if spec.count is INFINITE and spec.q_step < 1:
        raise DivergenceError(
            "infinite q-Pochhammer with non-increasing q-powers does not converge q-adically"
        )
    if spec.q_step < 0:
        raise ValueError("negative q-steps cannot live in a power series (use BiLaurent)")
    i = 0
    while spec.count is INFINITE or i < spec.count:
        q_pow = spec.q_exp + spec.q_step * i
        if q_pow < 0:
            raise ValueError("factor with negative q-power cannot live in a power series")
        if q_pow > order:
            break  # this and all later factors are 1 + O(q^{>order})
        out = out.mul_monomial_factor(spec.scalar, spec.z_exp, q_pow)
        i += 1
    return out


def _inv_poch_into(series: TruncatedSeries, scalar, z_exp: int, q_start: int,
                   q_stop: int, q_step: int = 1) -> TruncatedSeries:
    """Multiply by 1/(a;q)-style factors (1 - scalar z^z_exp q^j)^-1 for
    j = q_start, q_start+q_step, ... < q_stop (capped at the order)."""
    j = q_start
    while j < q_stop and j <= series.order:
        series = series.div_monomial_factor(scalar, z_exp, j)
        j += q_step
    return series


def triple_product(order: int) -> TruncatedSeries:
    """j(z;q) = (z;q)_inf (z^-1 q;q)_inf (q;q)_inf over Laurent coefficients."""
    out = TruncatedSeries.one(LAURENT_RING, order)
    out = out.mul_monomial_factor(1, 1, 0)  # (1 - z)
    for i in range(1, order + 1):
        out = out.mul_monomial_factor(1, 1, i)
        out = out.mul_monomial_factor(1, -1, i)
        out = out.mul_monomial_factor(1, 0, i)
    return out


def jbracket_cleared(order: int) -> TruncatedSeries:
    """The pole-cleared q-bracket of j_z: 1/((zq;q)_inf (z^-1 q;q)_inf),
    stored with pole_exp = 1 since <j_z>_q itself has a simple pole at z=1."""
    out = TruncatedSeries.one(LAURENT_RING, order)
    out = _inv_poch_into(out, 1, 1, 1, order + 1)
    out = _inv_poch_into(out, 1, -1, 1, order + 1)
    return out.with_pole_exp_marker(1)


def crank_gf(order: int) -> TruncatedSeries:
    """C(z;q) = (q;q)_inf / ((zq;q)_inf (z^-1 q;q)_inf)."""
    out = jbracket_cleared(order).with_pole_exp_marker(0)
    qq = pochhammer(PochhammerSpec(q_exp=1), order, LAURENT_RING)
    return series_mul(out, qq)


def qbracket(weight: Callable[[Partition], LaurentPoly], order: int) -> TruncatedSeries:
    """(q;q)_inf * sum over partitions of weight(lam) q^|lam|, truncated."""
    coeffs = [LaurentPoly.zero() for _ in range(order + 1)]
    for n in range(order + 1):
        total = LaurentPoly.zero()
        for lam in partitions_of(n):
            total = total + weight(lam)
        coeffs[n] = total
    weighted = TruncatedSeries(LAURENT_RING, coeffs, order)
    qq = pochhammer(PochhammerSpec(q_exp=1), order, LAURENT_RING)
    return series_mul(weighted, qq)


def _inverted_sum(a: int, order: int) -> TruncatedSeries:
    """Cleared form of sum_{n>=1} q^(a n) / ((z;q)_n (z^-1 q;q)_n):
    multiplying by (1-z) turns the n-th summand into
    q^(a n) / ((zq;q)_{n-1} (z^-1 q;q)_n).  Result carries pole_exp 1.
    """
    total = TruncatedSeries.zero(LAURENT_RING, order)
    cur = TruncatedSeries.one(LAURENT_RING, order)
    n = 1
    while a * n <= order:
        if n >= 2:
            cur = cur.div_monomial_factor(1, 1, n - 1)  # (zq;q)_{n-1} gains (1 - z q^{n-1})
        cur = cur.div_monomial_factor(1, -1, n)  # (z^-1 q;q)_n gains (1 - z^-1 q^n)
        total = total + cur.shift_q(a * n)
        n += 1
    return total.with_pole_exp_marker(1)


def g3_inverted(order: int) -> TruncatedSeries:
    """Cleared expansion of g3(z^-1, q^-1) = sum_{n>=1} q^n/((z;q)_n (z^-1 q;q)_n).

    Its object-level coefficients are the gamma_n; the stored form is
    (1-z) * g3(z^-1,q^-1) with pole_exp = 1.
    """
    return _inverted_sum(1, order)


def g3_inverted_double(order: int) -> TruncatedSeries:
    """Cleared form of the companion sum with q^(2n) numerators (the second
    series of the corrected q-bracket lemma)."""
    return _inverted_sum(2, order)


def g3_forward(order: int) -> TruncatedSeries:
    """Cleared expansion of g3(z,q) = sum_{n>=1} q^(n(n-1))/((z;q)_n (z^-1 q;q)_n).

    The n-th summand enters at q-order n(n-1), so O(sqrt(order)) summands
    suffice.  Stored as (1-z) g3 with pole_exp = 1.
    """
    total = TruncatedSeries.zero(LAURENT_RING, order)
    cur = TruncatedSeries.one(LAURENT_RING, order)
    n = 1
    while n * (n - 1) <= order:
        if n >= 2:
            cur = cur.div_monomial_factor(1, 1, n - 1)
        cur = cur.div_monomial_factor(1, -1, n)
        total = total + cur.shift_q(n * (n - 1))
        n += 1
    return total.with_pole_exp_marker(1)


def unimodal_gf(fold: int, order: int) -> TruncatedSeries:
    """Utilde_k(z,q) = sum_{n>=0} q^(k n) / ((zq;q)_n (z^-1 q;q)_n)."""
    if fold < 1:
        raise ValueError("fold must be >= 1")
    total = TruncatedSeries.one(LAURENT_RING, order)
    cur = TruncatedSeries.one(LAURENT_RING, order)
    n = 1
    while fold * n <= order:
        cur = cur.div_monomial_factor(1, 1, n)
        cur = cur.div_monomial_factor(1, -1, n)
        total = total + cur.shift_q(fold * n)
        n += 1
    return total


def strong_unimodal_gf(fold: int, order: int) -> TruncatedSeries:
    """U_k(z,q) = sum_{n>=0} q^(k(n+1)) (-zq;q)_n (-z^-1 q;q)_n."""
    if fold < 1:
        raise ValueError("fold must be >= 1")
    total = TruncatedSeries.zero(LAURENT_RING, order)
    cur = TruncatedSeries.one(LAURENT_RING, order)
    n = 0
    while fold * (n + 1) <= order:
        if n >= 1:
            cur = cur.mul_monomial_factor(-1, 1, n)   # (1 + z q^n)
            cur = cur.mul_monomial_factor(-1, -1, n)  # (1 + z^-1 q^n)
        total = total + cur.shift_q(fold * (n + 1))
        n += 1
    return total


def f_mock(order: int, form: str = "EQ1") -> TruncatedSeries:
    """Ramanujan's f(q), by the defining sum (EQ1) or Fine's form (FINE).

    EQ1:  sum_{n>=0} q^(n^2) / (-q;q)_n^2
    FINE: 1 - sum_{n>=1} (-1)^n q^n / (-q;q)_n
    """
    if form == "EQ1":
        total = TruncatedSeries.one(RATIONAL_RING, order)
        cur = TruncatedSeries.one(RATIONAL_RING, order)  # 1/(-q;q)_n^2
        n = 1
        while n * n <= order:
            cur = cur.div_monomial_factor(Fraction(-1), 0, n)
            cur = cur.div_monomial_factor(Fraction(-1), 0, n)
            total = total + cur.shift_q(n * n)
            n += 1
        return total
    if form == "FINE":
        total = TruncatedSeries.one(RATIONAL_RING, order)
        cur = TruncatedSeries.one(RATIONAL_RING, order)
        for n in range(1, order + 1):
            cur = cur.div_monomial_factor(Fraction(-1), 0, n)
            sign = Fraction(-1) if n % 2 else Fraction(1)
            total = total + (-cur.scale(sign)).shift_q(n)
        return total
    raise UnknownSeriesError(f"unknown f(q) form {form!r}; use EQ1 or FINE")


def b_modular(order: int) -> TruncatedSeries:
    """b(q) = (q;q)_inf (-q;q)_inf^-2."""
    out = pochhammer(PochhammerSpec(q_exp=1), order)
    for i in range(1, order + 1):
        out = out.div_monomial_factor(Fraction(-1), 0, i)
        out = out.div_monomial_factor(Fraction(-1), 0, i)
    return out


def by_name(name: str, order: int, fold: int = 1, form: str = "EQ1") -> TruncatedSeries:
    """Catalog dispatch for the named series."""
    if name == "f":
        return f_mock(order, form)
    if name == "b":
        return b_modular(order)
    if name == "g3_forward":
        return g3_forward(order)
    if name == "g3_inverted":
        return g3_inverted(order)
    if name == "U_k":
        return strong_unimodal_gf(fold, order)
    if name == "Utilde_k":
        return unimodal_gf(fold, order)
    if name == "crank_gf":
        return crank_gf(order)
    if name == "jbracket":
        return jbracket_cleared(order)
    if name == "triple_product":
        return triple_product(order)
    raise UnknownSeriesError(f"unknown series {name!r}; catalog: {', '.join(SERIES_CATALOG)}")


# ---------------------------------------------------------------------------
# Numeric substitution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NumericValue:
    """Value of a truncated series at a point, with a crude tail estimate
    (magnitude of the last retained term over 1 - |q0|)."""

    value: BigComplex
    tail_estimate: object  # mpmath.mpf


def _to_bigcomplex(x, bits: int) -> BigComplex:
    if isinstance(x, BigComplex):
        return x
    if isinstance(x, CycloElem):
        return x.embed(bits)
    if isinstance(x, (int, Fraction)):
        return BigComplex.from_rational(x, bits)
    return BigComplex(x, bits)


def eval_numeric(
    series: Union[TruncatedSeries, str],
    z0,
    q0: BigComplex,
    order: int | None = None,
    bits: int | None = None,
    fold: int = 1,
) -> NumericValue:
    """Substitute numeric z0, q0 into a truncated series (or a catalog name
    expanded at the given order); divides by (1 - z0)^pole_exp.

    Requires |q0| < 1 (the truncation tail is otherwise meaningless) and
    z0 != 1 whenever the series carries pole bookkeeping.
    """
    bits = bits or (q0.bits if isinstance(q0, BigComplex) else 256)
    q0 = _to_bigcomplex(q0, bits)
    if abs(q0) >= 1:
        raise SingularEvaluationError("numeric substitution needs |q0| < 1")
    if isinstance(series, str):
        if order is None:
            raise ValueError("order is required when naming a series")
        series = by_name(series, order, fold=fold)
    zv = None
    if series.ring.name == "laurent":
        if z0 is None:
            raise SingularEvaluationError("symbolic-z series needs a z0")
        zv = _to_bigcomplex(z0, bits)
        if zv.is_zero():
            raise SingularEvaluationError("z0 = 0 is outside the domain")
        if series.pole_exp and (zv - 1).is_zero():
            raise SingularEvaluationError("z0 = 1 hits the (1-z) pole")
    one = BigComplex(1, bits)
    total = BigComplex(0, bits)
    qpow = one
    last = mpmath.mpf(0)
    for n in range(series.order + 1):
        c = series.coeffs[n]
        if series.ring.name == "laurent":
            cv = c.eval_at(zv, one)
        else:
            cv = _to_bigcomplex(c, bits)
        term = cv * qpow
        total = total + term
        last = abs(term) if not term.is_zero() else last
        qpow = qpow * q0
    if series.pole_exp:
        total = total / (one - zv) ** series.pole_exp
    tail = last * abs(q0) / (1 - abs(q0))
    return NumericValue(total, tail)
