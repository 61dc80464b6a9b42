"""Direct numeric evaluation of the named series at a point.

These are term-wise summations of the defining formulas (independent of the
truncated-series constructors), used as oracles by the radial-limit engine,
the trend checks, and the numeric identity suites.  All functions work on
mpmath values under an explicit precision and return BigComplex.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .algebra import BigComplex, CycloElem, DEFAULT_PRECISION
from .errors import DivergenceError, SingularEvaluationError

_MAX_TERMS = 5_000_000


def _mpc_of(x, bits: int):
    if isinstance(x, BigComplex):
        return x.value
    if isinstance(x, CycloElem):
        return x.embed(bits).value
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        return mpmath.mpf(f.numerator) / f.denominator
    return mpmath.mpc(x)


def _tol(bits: int):
    return mpmath.mpf(2) ** (-(bits + 16))


def qpoch_inf(a, q, bits: int = DEFAULT_PRECISION) -> BigComplex:
    """(a;q)_inf for |q| < 1, truncated when the factors are 1 within tolerance."""
    with mpmath.workprec(bits + 32):
        av, qv = _mpc_of(a, bits), _mpc_of(q, bits)
        if abs(qv) >= 1:
            raise SingularEvaluationError("infinite q-Pochhammer needs |q| < 1")
        tol = _tol(bits)
        prod = mpmath.mpc(1)
        cur = av
        n = 0
        while abs(cur) > tol:
            prod *= 1 - cur
            cur *= qv
            n += 1
            if n > _MAX_TERMS:
                raise DivergenceError("q-Pochhammer product did not settle")
        return BigComplex(prod, bits)


def _sum_terms(term_iter, bits: int, min_terms: int = 16):
    tol = _tol(bits)
    total = mpmath.mpc(0)
    for n, term in enumerate(term_iter):
        total += term
        if n >= min_terms and abs(term) < tol * max(1, abs(total)):
            return total
        if n > _MAX_TERMS:
            raise DivergenceError("series did not converge within the term budget")
    return total


def f_value(q, bits: int = DEFAULT_PRECISION) -> BigComplex:
    """Ramanujan's f(q) by its defining sum; |q| < 1."""
    with mpmath.workprec(bits + 32):
        qv = _mpc_of(q, bits)
        if abs(qv) >= 1:
            raise SingularEvaluationError("f(q) series needs |q| < 1")

        def terms():
            den = mpmath.mpc(1)
            yield mpmath.mpc(1)
            n = 1
            while True:
                den *= 1 + qv**n
                yield qv ** (n * n) / den**2
                n += 1

        return BigComplex(_sum_terms(terms(), bits), bits)


def b_value(q, bits: int = DEFAULT_PRECISION) -> BigComplex:
    """b(q) = (q;q)_inf (-q;q)_inf^(-2); |q| < 1."""
    with mpmath.workprec(bits + 32):
        qv = _mpc_of(q, bits)
        if abs(qv) >= 1:
            raise SingularEvaluationError("b(q) needs |q| < 1")
        tol = _tol(bits)
        p_plain = mpmath.mpc(1)
        p_neg = mpmath.mpc(1)
        cur = qv
        n = 0
        while abs(cur) > tol:
            p_plain *= 1 - cur
            p_neg *= 1 + cur
            cur *= qv
            n += 1
            if n > _MAX_TERMS:
                raise DivergenceError("b(q) product did not settle")
        return BigComplex(p_plain / p_neg**2, bits)


def jbracket_value(z, q, bits: int = DEFAULT_PRECISION) -> BigComplex:
    """<j_z>_q = 1/((z;q)_inf (z^-1 q;q)_inf); |q| < 1, z != 0."""
    with mpmath.workprec(bits + 32):
        zv, qv = _mpc_of(z, bits), _mpc_of(q, bits)
        if zv == 0:
            raise SingularEvaluationError("z = 0 is outside the domain")
        a = qpoch_inf(BigComplex(zv, bits), BigComplex(qv, bits), bits).value
        b = qpoch_inf(BigComplex(qv / zv, bits), BigComplex(qv, bits), bits).value
        if a == 0 or b == 0:
            raise SingularEvaluationError("q-bracket pole: a Pochhammer factor vanished")
        return BigComplex(1 / (a * b), bits)


def g3_value(z, q, bits: int = DEFAULT_PRECISION) -> BigComplex:
    """g3(z,q) = sum_{n>=1} q^(n(n-1)) / ((z;q)_n (z^-1 q;q)_n).

    The same term-wise formula converges both for |q| < 1 and for |q| > 1
    (ratio ~ 1/q), realizing the two branches of the piecewise extension.
    """
    with mpmath.workprec(bits + 32):
        zv, qv = _mpc_of(z, bits), _mpc_of(q, bits)
        if zv == 0 or abs(qv) == 1:
            raise SingularEvaluationError("needs z != 0 and |q| != 1")

        def terms():
            dz = mpmath.mpc(1)
            dzi = mpmath.mpc(1)
            n = 1
            while True:
                dz *= 1 - zv * qv ** (n - 1)
                dzi *= 1 - qv**n / zv
                den = dz * dzi
                if den == 0:
                    raise SingularEvaluationError("vanishing Pochhammer factor in g3")
                yield qv ** (n * (n - 1)) / den
                n += 1

        return BigComplex(_sum_terms(terms(), bits), bits)


def g3_inverted_value(z, q, bits: int = DEFAULT_PRECISION) -> BigComplex:
    """g3(z^-1, q^-1) = sum_{n>=1} q^n / ((z;q)_n (z^-1 q;q)_n).

    Converges for |q| < 1, and also for |q| > 1 (where it continues g3
    across the unit circle: the summand rewriting of the inversion identity
    is term-wise, so this equals g3(z^-1, q^-1) on both sides).
    """
    with mpmath.workprec(bits + 32):
        zv, qv = _mpc_of(z, bits), _mpc_of(q, bits)
        if zv == 0 or abs(qv) == 1:
            raise SingularEvaluationError("needs z != 0 and |q| != 1")

        def terms():
            dz = mpmath.mpc(1)
            dzi = mpmath.mpc(1)
            n = 1
            while True:
                dz *= 1 - zv * qv ** (n - 1)
                dzi *= 1 - qv**n / zv
                den = dz * dzi
                if den == 0:
                    raise SingularEvaluationError("vanishing Pochhammer factor")
                yield qv**n / den
                n += 1

        return BigComplex(_sum_terms(terms(), bits), bits)


def utilde_value(fold: int, z, q, bits: int = DEFAULT_PRECISION) -> BigComplex:
    """Utilde_k(z,q) = sum_{n>=0} q^(k n) / ((zq;q)_n (z^-1 q;q)_n); |q| < 1."""
    with mpmath.workprec(bits + 32):
        zv, qv = _mpc_of(z, bits), _mpc_of(q, bits)
        if zv == 0 or abs(qv) >= 1:
            raise SingularEvaluationError("needs z != 0 and |q| < 1")

        def terms():
            pa = mpmath.mpc(1)
            pb = mpmath.mpc(1)
            n = 0
            while True:
                yield qv ** (fold * n) * pa * pb
                n += 1
                fa = (1 - zv * qv**n) * (1 - qv**n / zv)
                if fa == 0:
                    raise SingularEvaluationError("vanishing Pochhammer factor")
                pa /= 1 - zv * qv**n
                pb /= 1 - qv**n / zv

        return BigComplex(_sum_terms(terms(), bits), bits)


def u_value(fold: int, z, q, bits: int = DEFAULT_PRECISION) -> BigComplex:
    """U_k(z,q) = sum_{n>=0} q^(k(n+1)) (-zq;q)_n (-z^-1 q;q)_n; |q| < 1."""
    with mpmath.workprec(bits + 32):
        zv, qv = _mpc_of(z, bits), _mpc_of(q, bits)
        if zv == 0 or abs(qv) >= 1:
            raise SingularEvaluationError("needs z != 0 and |q| < 1")

        def terms():
            pa = mpmath.mpc(1)
            pb = mpmath.mpc(1)
            n = 0
            while True:
                yield qv ** (fold * (n + 1)) * pa * pb
                n += 1
                pa *= 1 + zv * qv**n
                pb *= 1 + qv**n / zv

        return BigComplex(_sum_terms(terms(), bits, min_terms=32), bits)


def fine_remark_value(z, q, bits: int = DEFAULT_PRECISION) -> BigComplex:
    """The two-term expression of the Fine-form remark, evaluated literally
    as printed: (z^-1 q;q)_inf^-1 (-z;q)_inf^-1 * sum (-1)^n z^(-2n) q^(n(n+1)/2)
    minus sum_{n>=0} z^(-n+1) (z^-1;q)_n.  (Known not to match the series;
    see the EQ17 suite.)  Requires |z| > 1 for the second sum to converge.
    """
    with mpmath.workprec(bits + 32):
        zv, qv = _mpc_of(z, bits), _mpc_of(q, bits)
        if abs(zv) <= 1 or abs(qv) >= 1:
            raise SingularEvaluationError("needs |z| > 1 and |q| < 1")

        def theta_terms():
            n = 0
            while True:
                yield (-1) ** n * zv ** (-2 * n) * qv ** (n * (n + 1) // 2)
                n += 1

        def tail_terms():
            p = mpmath.mpc(1)
            n = 0
            while True:
                yield zv ** (-n + 1) * p
                p *= 1 - qv**n / zv
                n += 1

        theta = _sum_terms(theta_terms(), bits)
        pref = (
            qpoch_inf(BigComplex(qv / zv, bits), BigComplex(qv, bits), bits).value
            * qpoch_inf(BigComplex(-zv, bits), BigComplex(qv, bits), bits).value
        )
        tail = _sum_terms(tail_terms(), bits, min_terms=48)
        return BigComplex(theta / pref - tail, bits)


def series_value(name: str, z, q, bits: int = DEFAULT_PRECISION, fold: int = 1) -> BigComplex:
    """Dispatch the term-wise evaluators by catalog name."""
    if name == "f":
        return f_value(q, bits)
    if name == "b":
        return b_value(q, bits)
    if name == "g3_forward":
        return g3_value(z, q, bits)
    if name == "g3_inverted":
        return g3_inverted_value(z, q, bits)
    if name == "U_k":
        return u_value(fold, z, q, bits)
    if name == "Utilde_k":
        return utilde_value(fold, z, q, bits)
    if name == "jbracket":
        return jbracket_value(z, q, bits)
    raise SingularEvaluationError(f"no term-wise evaluator for {name!r}")
