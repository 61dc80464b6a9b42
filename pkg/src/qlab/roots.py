"""Evaluation at roots of unity and radial limits.

Periodic summatory closed forms, Euler continued fractions, q-hypergeometric
series at roots of unity, the finite formulas for g3, U_k and Ramanujan's
f(q), and Richardson-extrapolated radial limits along rays to the circle.

Exact inputs (rationals, cyclotomic elements) stay exact end to end; the
only analytic decision -- whether |f(m)| < 1 -- goes through a high-precision
embedding with a guard band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath

from .algebra import (
    BigComplex,
    CycloElem,
    DEFAULT_PRECISION,
)
from .errors import (
    DivergenceError,
    IndeterminateMagnitudeError,
    SingularEvaluationError,
)
from .numeric import b_value, f_value

FieldElement = object  # Fraction | CycloElem | BigComplex


def _one_like(x):
    return x ** 0


def _is_zero(x) -> bool:
    if isinstance(x, CycloElem):
        return x.is_zero()
    if isinstance(x, BigComplex):
        return x.is_zero()
    return x == 0


def _magnitude(x, bits: int = DEFAULT_PRECISION):
    if isinstance(x, BigComplex):
        return abs(x)
    if isinstance(x, CycloElem):
        return abs(x.embed(bits))
    f = Fraction(x)
    with mpmath.workprec(bits):
        return abs(mpmath.mpf(f.numerator) / f.denominator)


def _unit_distance(x, bits: int):
    """|x| - 1 with an indeterminacy guard for embedded exact values."""
    mag = _magnitude(x, bits)
    gap = mag - 1
    if isinstance(x, CycloElem) and abs(gap) < mpmath.mpf(2) ** (-bits // 2):
        if not _is_zero(x - 1) and not _is_zero(x + 1):
            raise IndeterminateMagnitudeError(
                f"|{x!r}| is within the guard band of 1 at {bits} bits"
            )
    return gap


# ---------------------------------------------------------------------------
# Periodic summatory functions (the pivotal lemma)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodicFactor:
    """m-periodic factor sequence phi(1..m); f(j) = prod_{i<=j} phi(i),
    F(n) = sum_{j<=n} f(j)."""

    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("need at least one factor value")

    @property
    def period(self) -> int:
        return len(self.values)

    def phi(self, i: int):
        """phi(i) for i >= 1, extended m-periodically."""
        if i < 1:
            raise ValueError("factors are indexed from 1")
        return self.values[(i - 1) % self.period]

    def prefix_products(self) -> list:
        """[f(1), ..., f(m)]."""
        out = []
        acc = _one_like(self.values[0])
        for v in self.values:
            acc = acc * v
            out.append(acc)
        return out

    def f_period(self):
        """f(m), the product over one full period."""
        return self.prefix_products()[-1]

    def partial_sum_direct(self, n: int):
        """F(n) by direct summation (the oracle route)."""
        total = None
        acc = _one_like(self.values[0])
        for j in range(1, n + 1):
            acc = acc * self.phi(j)
            total = acc if total is None else total + acc
        if total is None:
            return _one_like(self.values[0]) - _one_like(self.values[0])
        return total


@dataclass(frozen=True)
class PartialSumResult:
    value: FieldElement
    closed_form_used: bool


def periodic_partial(pf: PeriodicFactor, k: int, r: int) -> PartialSumResult:
    """F(mk + r) by the closed form
    F(mk+r) = (1 - f(m)^k)/(1 - f(m)) F(m) + f(m)^k F(r), for 0 <= r < m.

    When f(m) = 1 the formula divides by zero; the direct sum is used and
    flagged.
    """
    m = pf.period
    if not (0 <= r < m):
        raise ValueError("need 0 <= r < period")
    if k < 0:
        raise ValueError("k must be non-negative")
    fm = pf.f_period()
    one = _one_like(fm)
    if _is_zero(fm - one):
        return PartialSumResult(pf.partial_sum_direct(m * k + r), False)
    fmk = fm ** k
    big_f_m = pf.partial_sum_direct(m)
    big_f_r = pf.partial_sum_direct(r)
    value = (one - fmk) / (one - fm) * big_f_m + fmk * big_f_r
    return PartialSumResult(value, True)


def periodic_infinite(pf: PeriodicFactor, bits: int = DEFAULT_PRECISION) -> FieldElement:
    """F(infinity) = F(m) / (1 - f(m)), valid for |f(m)| < 1."""
    fm = pf.f_period()
    if _unit_distance(fm, bits) >= 0:
        raise DivergenceError(f"|f(m)| >= 1 (f(m) = {fm!r}); the series diverges")
    one = _one_like(fm)
    return pf.partial_sum_direct(pf.period) / (one - fm)


def euler_cf(pf: PeriodicFactor, depth: int) -> FieldElement:
    """Depth-truncated Euler continued fraction
    phi(1) / (1 - phi(2)/(1 + phi(2) - phi(3)/(1 + phi(3) - ...))).

    The depth-d convergent equals the partial sum F(d) exactly.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    one = _one_like(pf.values[0])
    if depth == 1:
        return pf.phi(1)
    den = one + pf.phi(depth)
    for j in range(depth - 1, 1, -1):
        if _is_zero(den):
            raise DivergenceError(f"zero convergent denominator at level {j + 1}")
        den = one + pf.phi(j) - pf.phi(j + 1) / den
    if _is_zero(den):
        raise DivergenceError("zero convergent denominator at level 2")
    den = one - pf.phi(2) / den
    if _is_zero(den):
        raise DivergenceError("zero convergent denominator at level 1")
    return pf.phi(1) / den


def euler_cf_finite(pf: PeriodicFactor, bits: int = DEFAULT_PRECISION) -> FieldElement:
    """The finite m-level continued fraction form of F(infinity):
    (1/(1 - f(m))) times the depth-m convergent.  Requires |f(m)| < 1 for
    the value to be the actual limit; the algebraic identity with
    F(m)/(1-f(m)) holds whenever f(m) != 1."""
    fm = pf.f_period()
    one = _one_like(fm)
    if _is_zero(fm - one):
        raise DivergenceError("f(m) = 1: the closed form divides by zero")
    return euler_cf(pf, pf.period) / (one - fm)


# ---------------------------------------------------------------------------
# q-hypergeometric series at roots of unity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HypergeoSpec:
    """Parameters of r_F_s(a_1..a_r; b_1..b_s; t : q)."""

    numerator_params: tuple = ()
    denominator_params: tuple = ()
    argument: FieldElement = Fraction(1, 2)


def hypergeo_at_root(spec: HypergeoSpec, m: int, bits: int = DEFAULT_PRECISION) -> FieldElement:
    """Evaluate the q-hypergeometric series at q = zeta_m via the periodic
    closed form: phi(i) = t prod(1 - a_* zeta^(i-1)) / prod(1 - b_* zeta^(i-1))
    has period m, so F(infinity) = F(m)/(1 - f(m)) when |f(m)| < 1.
    """
    if m < 1:
        raise ValueError("m must be positive")
    exact = all(
        isinstance(p, (int, Fraction, CycloElem))
        for p in (*spec.numerator_params, *spec.denominator_params, spec.argument)
    )
    if exact:
        big_m = m
        for p in (*spec.numerator_params, *spec.denominator_params, spec.argument):
            if isinstance(p, CycloElem):
                big_m = math.lcm(big_m, p.m)
        zeta = CycloElem.zeta(big_m, big_m // m)

        def lift(x):
            return x.lift(big_m) if isinstance(x, CycloElem) else CycloElem.from_rational(big_m, x)

    else:
        zeta = BigComplex.root_of_unity(m, bits=bits)

        def lift(x):
            if isinstance(x, BigComplex):
                return x
            if isinstance(x, CycloElem):
                return x.embed(bits)
            return BigComplex.from_rational(x, bits)

    t = lift(spec.argument)
    values = []
    for i in range(1, m + 1):
        zp = zeta ** (i - 1)
        num = t
        for a in spec.numerator_params:
            num = num * (_one_like(t) - lift(a) * zp)
        den = _one_like(t)
        for b in spec.denominator_params:
            factor = _one_like(t) - lift(b) * zp
            if _is_zero(factor):
                raise SingularEvaluationError(
                    f"denominator parameter {b!r} vanishes at zeta_{m}^{i - 1}"
                )
            den = den * factor
        values.append(num / den)
    return periodic_infinite(PeriodicFactor(tuple(values)), bits)


# ---------------------------------------------------------------------------
# Finite formulas for g3, U_k, f at roots of unity
# ---------------------------------------------------------------------------


def _lift_pair(z, m: int, bits: int):
    """Common arithmetic domain for z and zeta_m: cyclotomic when z is
    exact, complex otherwise.  Returns (z, zeta, exact_flag)."""
    if isinstance(z, BigComplex):
        return z, BigComplex.root_of_unity(m, bits=max(bits, z.bits)), False
    if isinstance(z, (int, Fraction)):
        big_m = m
        zv = CycloElem.from_rational(big_m, z)
        return zv, CycloElem.zeta(big_m), True
    if isinstance(z, CycloElem):
        big_m = math.lcm(z.m, m)
        return z.lift(big_m), CycloElem.zeta(big_m, big_m // m), True
    raise TypeError(f"unsupported evaluation point {type(z).__name__}")


def _check_g3_admissible(z, zeta, m: int):
    if _is_zero(z):
        raise SingularEvaluationError("z = 0 is excluded")
    zi = z ** -1
    for j in range(m):
        zp = zeta ** j
        if _is_zero(_one_like(z) - z * zp) or _is_zero(_one_like(z) - zi * zp):
            raise SingularEvaluationError(
                f"z is a rational power of zeta_{m} (factor vanishes at power {j})"
            )
    lead = _one_like(z) - z ** m - z ** -m
    if _is_zero(lead):
        raise SingularEvaluationError("z^m + z^-m = 1: singular leading factor")
    return lead


def _agree(a, b, bits: int) -> bool:
    if isinstance(a, BigComplex) or isinstance(b, BigComplex):
        return bool(abs(a - b) < mpmath.mpf(2) ** (-bits // 2))
    return _is_zero(a - b)


def g3_at_root(z, m: int, bits: int = DEFAULT_PRECISION) -> FieldElement:
    """g3(z, zeta_m) by the finite formula
    (1 - z^m - z^-m)^(-1) sum_{n=0}^{m-1} zeta^n (z;zeta)_n (z^-1 zeta;zeta)_n,
    cross-checked exactly against the two longer finite forms (the direct
    periodic folding and its index-reversed variant) before returning.
    """
    if m < 1:
        raise ValueError("m must be positive")
    zv, zeta, exact = _lift_pair(z, m, bits)
    lead = _check_g3_admissible(zv, zeta, m)
    one = _one_like(zv)
    zi = zv ** -1

    # route 1: the simple finite formula
    total1 = None
    poch = one
    for n in range(m):
        if n >= 1:
            poch = poch * (one - zv * zeta ** (n - 1)) * (one - zi * zeta ** n)
        term = zeta ** n * poch
        total1 = term if total1 is None else total1 + term
    route1 = total1 / lead

    # route 2: periodic folding of the defining series
    # (2 - z^m - z^-m)/(1 - z^m - z^-m) sum_{n=1}^m zeta^(n(n-1)) / ((z;zeta)_n (z^-1 zeta;zeta)_n)
    factor = (one + one - zv ** m - zv ** -m) / lead
    total2 = None
    poch = one
    for n in range(1, m + 1):
        poch = poch * (one - zv * zeta ** (n - 1)) * (one - zi * zeta ** n)
        term = zeta ** (n * (n - 1)) / poch
        total2 = term if total2 is None else total2 + term
    route2 = factor * total2

    # route 3: the same folding applied to the inverted-series identity,
    # with z -> z^-1 and zeta -> zeta^-1
    zeta_inv = zeta ** -1
    total3 = None
    poch = one
    for n in range(1, m + 1):
        poch = poch * (one - zi * zeta_inv ** (n - 1)) * (one - zv * zeta_inv ** n)
        term = zeta_inv ** n / poch
        total3 = term if total3 is None else total3 + term
    route3 = factor * total3

    if not (_agree(route1, route2, bits) and _agree(route1, route3, bits)):
        raise AssertionError(
            f"finite-formula routes disagree at z={z!r}, m={m}: "
            f"{route1!r} / {route2!r} / {route3!r}"
        )
    return route1


def uk_at_root(fold: int, z, m: int, bits: int = DEFAULT_PRECISION) -> FieldElement:
    """U_k(-z, zeta_m) by the finite formula
    -(1 - z^m - z^-m)^(-1) sum_{n=0}^{m-1} zeta^(k(n+1)) (z zeta;zeta)_n (z^-1 zeta;zeta)_n.
    """
    if fold < 1:
        raise ValueError("fold must be >= 1")
    if m < 1:
        raise ValueError("m must be positive")
    zv, zeta, _ = _lift_pair(z, m, bits)
    if _is_zero(zv):
        raise SingularEvaluationError("z = 0 is excluded")
    one = _one_like(zv)
    lead = one - zv ** m - zv ** -m
    if _is_zero(lead):
        raise SingularEvaluationError("z^m + z^-m = 1: singular leading factor")
    zi = zv ** -1
    total = None
    poch = one
    for n in range(m):
        if n >= 1:
            poch = poch * (one - zv * zeta ** n) * (one - zi * zeta ** n)
        term = zeta ** (fold * (n + 1)) * poch
        total = term if total is None else total + term
    return -(total / lead)


@dataclass(frozen=True)
class Cor2Result:
    value: BigComplex
    terms_used: int


def cor2_series(z: BigComplex, m: int, tol, bits: int | None = None) -> Cor2Result:
    """g3(z, zeta_m) = (z-1)/z sum_{k>=1} U_k(-z, zeta_m) z^k zeta_m^(-k),
    truncated once the geometric tail bound falls below tol; |z| < 1.
    """
    if not isinstance(z, BigComplex):
        z = BigComplex.from_rational(z, bits or DEFAULT_PRECISION)
    bits = bits or z.bits
    mag = abs(z)
    if not (0 < mag < 1):
        raise SingularEvaluationError("the k-sum needs 0 < |z| < 1")
    zeta = BigComplex.root_of_unity(m, bits=bits)
    one = BigComplex(1, bits)
    # uniform bound on |U_k(-z, zeta_m)|: m * max_n |(z zeta)_n (z^-1 zeta)_n| / |lead|
    lead = one - z ** m - z ** -m
    if _is_zero(lead):
        raise SingularEvaluationError("z^m + z^-m = 1: singular leading factor")
    poch = one
    poch_max = mpmath.mpf(1)
    for n in range(1, m):
        poch = poch * (one - z * zeta ** n) * (one - (z ** -1) * zeta ** n)
        poch_max = max(poch_max, abs(poch))
    uk_bound = m * poch_max / abs(lead)
    budget = 64 * int(mpmath.ceil(1 / (1 - mag)))
    total = BigComplex(0, bits)
    zpow = one
    with mpmath.workprec(bits + 16):
        tol = mpmath.mpf(tol)
    for k in range(1, budget + 1):
        zpow = zpow * z * (zeta ** -1)
        total = total + uk_at_root(k, z, m, bits) * zpow
        tail = abs((z - one) / z) * uk_bound * mag ** (k + 1) / (1 - mag)
        if tail < tol:
            return Cor2Result((z - one) / z * total, k)
    raise DivergenceError(
        f"tail bound did not reach {tol} within {budget} terms (|z| = {mpmath.nstr(mag, 8)})"
    )


def f_at_odd_root(m: int, form: str = "EX2") -> CycloElem:
    """Exact value of Ramanujan's f at a primitive odd-order root of unity.

    Three finite formulas are evaluated in Q(zeta_m) and must agree exactly:
    the radial-lemma folding 1 - (2/3) sum_{n=1}^m (-1)^n zeta^n / (-zeta;zeta)_n,
    and the two index-reversed variants
      EX1: 4/3 - (2/3) sum_{n=0}^{m-2} (-1)^n zeta^-(n+1) (-zeta^-1;zeta^-1)_n
      EX2: (4/3)     sum_{n=0}^{m-1} (-1)^n (-zeta^-1;zeta^-1)_n.
    """
    if m < 1 or m % 2 == 0:
        raise ValueError("odd m >= 1 required (f(q) is singular at even-order roots)")
    if form not in ("EX1", "EX2"):
        raise ValueError("form must be EX1 or EX2")
    one = CycloElem.one(m)
    zeta = CycloElem.zeta(m)
    zeta_inv = zeta ** -1
    third = Fraction(1, 3)

    # B'_n = (-zeta^-1; zeta^-1)_n, n = 0..m-1
    bprime = [one]
    for n in range(1, m):
        bprime.append(bprime[-1] * (one + zeta_inv ** n))

    ex2 = CycloElem.zero(m)
    for n in range(m):
        term = bprime[n] * (4 * third)
        ex2 = ex2 + (term if n % 2 == 0 else -term)

    ex1 = CycloElem.from_rational(m, Fraction(4, 3))
    for n in range(m - 1):
        term = zeta_inv ** (n + 1) * bprime[n] * (2 * third)
        ex1 = ex1 - (term if n % 2 == 0 else -term)

    lemma = CycloElem.one(m)
    poch = one
    for n in range(1, m + 1):
        poch = poch * (one + zeta ** n)
        term = zeta ** n * poch.inverse() * (2 * third)
        lemma = lemma - (-term if n % 2 else term)

    if not (ex1 == ex2 and ex2 == lemma):
        raise AssertionError(
            f"finite formulas for f(zeta_{m}) disagree: {ex1!r} / {ex2!r} / {lemma!r}"
        )
    return ex1 if form == "EX1" else ex2


# ---------------------------------------------------------------------------
# Radial limits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialSchedule:
    """Approach q = rho * zeta_m along strictly increasing rho in (0,1)."""

    target_m: int
    rho_values: tuple
    precision_bits: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.target_m < 1:
            raise ValueError("target root order must be positive")
        rhos = [Fraction(r) if not isinstance(r, Fraction) else r for r in self.rho_values]
        if not rhos:
            raise ValueError("need at least one rho")
        if any(not (0 < r < 1) for r in rhos):
            raise ValueError("rho values must lie in (0,1)")
        if any(rhos[i] >= rhos[i + 1] for i in range(len(rhos) - 1)):
            raise ValueError("rho values must be strictly increasing")
        object.__setattr__(self, "rho_values", tuple(rhos))


def default_radial_schedule(m: int, j_lo: int = 4, j_hi: int = 16,
                            bits: int = DEFAULT_PRECISION) -> RadialSchedule:
    """rho_j = 1 - 2^-j for j = j_lo..j_hi."""
    rhos = tuple(Fraction(2 ** j - 1, 2 ** j) for j in range(j_lo, j_hi + 1))
    return RadialSchedule(m, rhos, bits)


@dataclass(frozen=True)
class RadialSample:
    rho: Fraction
    value: BigComplex


@dataclass(frozen=True)
class RadialReport:
    target_m: int
    estimate: BigComplex
    error_bound: object  # mpmath.mpf | None
    samples: tuple
    unreliable: bool = False

    def to_json_dict(self) -> dict:
        digits = max(8, int(self.samples[0].value.bits * 0.301) if self.samples else 40)
        return {
            "target_m": self.target_m,
            "samples": [
                {
                    "rho": f"{s.rho.numerator}/{s.rho.denominator}",
                    "value_re": mpmath.nstr(s.value.real, digits),
                    "value_im": mpmath.nstr(s.value.imag, digits),
                }
                for s in self.samples
            ],
            "estimate": {
                "re": mpmath.nstr(self.estimate.real, digits),
                "im": mpmath.nstr(self.estimate.imag, digits),
            },
            "error_bound": None if self.error_bound is None else mpmath.nstr(self.error_bound, 10),
            "unreliable": self.unreliable,
        }


def radial_limit(evaluator: Callable[[BigComplex], BigComplex],
                 sched: RadialSchedule) -> RadialReport:
    """Evaluate along the schedule and Richardson-extrapolate (first order)
    in h = 1 - rho; the error bound is the last successive difference of
    extrapolants.  Evaluator failures propagate (reported, not masked).
    """
    bits = sched.precision_bits
    zeta = BigComplex.root_of_unity(sched.target_m, bits=bits)
    samples = []
    for rho in sched.rho_values:
        q = BigComplex.from_rational(rho, bits) * zeta
        samples.append(RadialSample(rho, evaluator(q)))
    values = [s.value for s in samples]
    if len(values) == 1:
        return RadialReport(sched.target_m, values[0], None, tuple(samples), unreliable=True)
    extrap = []
    for i in range(len(values) - 1):
        h0 = 1 - samples[i].rho
        h1 = 1 - samples[i + 1].rho
        factor = h1 / (h0 - h1)
        extrap.append(values[i + 1] + (values[i + 1] - values[i]) * factor)
    if len(extrap) == 1:
        return RadialReport(sched.target_m, extrap[0], abs(extrap[0] - values[-1]),
                            tuple(samples), unreliable=True)
    bound = abs(extrap[-1] - extrap[-2])
    return RadialReport(sched.target_m, extrap[-1], bound, tuple(samples))


@dataclass(frozen=True)
class WatsonReport:
    k: int
    lhs_estimate: BigComplex
    rhs_value: BigComplex
    gap: object       # mpmath.mpf
    error_bound: object
    unreliable: bool
    samples: tuple

    @property
    def within_bound(self) -> bool:
        return (not self.unreliable) and self.error_bound is not None \
            and bool(self.gap < self.error_bound)


def watson_limit_check(k: int, sched: RadialSchedule | None = None) -> WatsonReport:
    """Check lim_{q -> zeta_2k} (f(q) - (-1)^k b(q)) against the finite
    formula -4 U(1, zeta_2k) (the k=1 strongly-unimodal value at z = -1 in
    the U_k(-z, .) parametrization).

    f and b individually blow up like exp(c 2^j) at rho = 1 - 2^-j, so the
    working precision per sample is chosen adaptively from a low-precision
    magnitude estimate; the default schedule stops at j = 9.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    m = 2 * k
    if sched is None:
        sched = default_radial_schedule(m, j_lo=4, j_hi=9)
    if sched.target_m != m:
        raise ValueError(f"schedule targets zeta_{sched.target_m}, expected zeta_{m}")
    sign = -1 if k % 2 else 1

    def evaluator(q: BigComplex) -> BigComplex:
        # magnitude pre-pass at low precision to absorb the blow-up
        probe = b_value(BigComplex(q.value, 64), 64)
        mag = abs(probe)
        extra = int(mpmath.log(mag, 2)) + 64 if mag > 1 else 64
        bits = sched.precision_bits + max(extra, 0)
        qq = BigComplex(q.value, bits)
        val = f_value(qq, bits) - b_value(qq, bits) * sign
        return BigComplex(val.value, sched.precision_bits)

    report = radial_limit(evaluator, sched)
    rhs = uk_at_root(1, Fraction(-1), m) * (-4)
    rhs_num = rhs.embed(sched.precision_bits) if isinstance(rhs, CycloElem) else rhs
    gap = abs(report.estimate - rhs_num)
    return WatsonReport(
        k=k,
        lhs_estimate=report.estimate,
        rhs_value=rhs_num,
        gap=gap,
        error_bound=report.error_bound,
        unreliable=report.unreliable,
        samples=report.samples,
    )
