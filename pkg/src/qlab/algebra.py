"""Exact arithmetic kernels.

Everything symbolic is exact: arbitrary-precision rationals
(``fractions.Fraction``), Laurent polynomials in z over the rationals,
truncated power series in q over a pluggable coefficient ring, and elements
of cyclotomic fields in the reduced power basis.  Floating point appears
only in :class:`BigComplex`, a thin wrapper over mpmath with an explicit
working precision in bits.

All values are immutable after construction; every operation is a pure
function.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Union

import mpmath

from .errors import (
    InexactDivisionError,
    NonInvertibleError,
    RingMismatchError,
)

Rational = Fraction

DEFAULT_PRECISION = 256

Scalar = Union[int, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# Laurent polynomials in z
# ---------------------------------------------------------------------------


class LaurentPoly:
    """Finite map from integer powers of z to rationals.

    Zero coefficients are never stored; the empty map is 0.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        clean: dict[int, Fraction] = {}
        if coeffs:
            for e, c in coeffs.items():
                c = _as_fraction(c)
                if c != 0:
                    clean[int(e)] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def z(cls, exp: int = 1, coeff: Scalar = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def from_scalar(cls, c: Scalar) -> "LaurentPoly":
        return cls({0: c})

    # -- predicates / accessors

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_scalar(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {0}

    def __getitem__(self, exp: int) -> Fraction:
        return self.coeffs.get(exp, Fraction(0))

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.coeffs))

    # -- ring operations

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.from_scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return LaurentPoly()
        out: dict[int, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in o.coeffs.items():
                e = e1 + e2
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "LaurentPoly(0)"
        terms = " + ".join(f"{c}*z^{e}" for e, c in sorted(self.coeffs.items()))
        return f"LaurentPoly({terms})"

    # -- units and exact division

    def is_unit_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def inverse(self) -> "LaurentPoly":
        """Inverse of a unit, i.e. a single-term c*z^e."""
        if not self.is_unit_monomial():
            raise NonInvertibleError(f"{self!r} is not a unit in the Laurent ring")
        ((e, c),) = self.coeffs.items()
        return LaurentPoly({-e: Fraction(1) / c})

    def eval_at_one(self) -> Fraction:
        return sum(self.coeffs.values(), Fraction(0))

    def div_one_minus_z(self) -> "LaurentPoly":
        """Exact quotient by (1-z); raises if (1-z) does not divide."""
        if not self.coeffs:
            return LaurentPoly()
        if self.eval_at_one() != 0:
            raise InexactDivisionError(
                f"(1-z) does not divide {self!r}: value at z=1 is {self.eval_at_one()}"
            )
        lo = min(self.coeffs)
        hi = max(self.coeffs)
        # (1-z)*r = p  =>  r_e = p_e + r_{e-1}, accumulating upward from lo.
        out: dict[int, Fraction] = {}
        acc = Fraction(0)
        for e in range(lo, hi):
            acc = self.coeffs.get(e, Fraction(0)) + acc
            if acc:
                out[e] = acc
        return LaurentPoly(out)

    def one_minus_z_multiplicity(self, cap: int = 64) -> int:
        """Largest d <= cap with (1-z)^d dividing self (0 for the zero poly)."""
        if not self.coeffs:
            return 0
        d = 0
        cur = self
        while d < cap and cur.eval_at_one() == 0:
            cur = cur.div_one_minus_z()
            d += 1
        return d

    # -- substitutions

    def invert_z(self) -> "LaurentPoly":
        """z -> 1/z."""
        return LaurentPoly({-e: c for e, c in self.coeffs.items()})

    def eval_at(self, x, one=None):
        """Substitute a ring element (Fraction, CycloElem, BigComplex) for z."""
        if one is None:
            one = x ** 0
        if not self.coeffs:
            return one - one
        exps = sorted(self.coeffs)
        total = None
        power = x ** exps[0]
        prev = exps[0]
        for e in exps:
            while prev < e:
                power = power * x
                prev += 1
            term = power * self.coeffs[e]
            total = term if total is None else total + term
        return total


ONE_MINUS_Z = LaurentPoly({0: 1, 1: -1})


# ---------------------------------------------------------------------------
# Bivariate Laurent polynomials in (z, q) -- used for the finite
# Pochhammer-inversion identities, where negative powers of q occur.
# ---------------------------------------------------------------------------


class BiLaurent:
    """Finite map (z-exponent, q-exponent) -> rational."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[tuple[int, int], Scalar] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        if coeffs:
            for k, c in coeffs.items():
                c = _as_fraction(c)
                if c != 0:
                    clean[(int(k[0]), int(k[1]))] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("BiLaurent is immutable")

    @classmethod
    def one(cls) -> "BiLaurent":
        return cls({(0, 0): 1})

    @classmethod
    def term(cls, coeff: Scalar = 1, z_exp: int = 0, q_exp: int = 0) -> "BiLaurent":
        return cls({(z_exp, q_exp): coeff})

    def _coerce(self, other):
        if isinstance(other, BiLaurent):
            return other
        if isinstance(other, (int, Fraction)):
            return BiLaurent({(0, 0): other})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.coeffs)
        for k, c in o.coeffs.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return BiLaurent(out)

    __radd__ = __add__

    def __neg__(self):
        return BiLaurent({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[tuple[int, int], Fraction] = {}
        for (z1, q1), c1 in self.coeffs.items():
            for (z2, q2), c2 in o.coeffs.items():
                k = (z1 + z2, q1 + q2)
                s = out.get(k, Fraction(0)) + c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return BiLaurent(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "BiLaurent(0)"
        terms = " + ".join(
            f"{c}*z^{ze}*q^{qe}" for (ze, qe), c in sorted(self.coeffs.items())
        )
        return f"BiLaurent({terms})"


def bi_pochhammer(scalar: Scalar, z_exp: int, q_exp: int, q_step: int, n: int) -> BiLaurent:
    """(a; q^step)_n as a BiLaurent, with a = scalar * z^z_exp * q^q_exp.

    Steps may be negative: this is how (z; q^-1)_n style symbols are formed.
    """
    out = BiLaurent.one()
    for i in range(n):
        out = out * (BiLaurent.one() - BiLaurent.term(scalar, z_exp, q_exp + q_step * i))
    return out


# ---------------------------------------------------------------------------
# Cyclotomic field elements
# ---------------------------------------------------------------------------


def euler_phi(m: int) -> int:
    result = m
    p = 2
    mm = m
    while p * p <= mm:
        if mm % p == 0:
            while mm % p == 0:
                mm //= p
            result -= result // p
        p += 1
    if mm > 1:
        result -= result // mm
    return result


def _divisors(m: int) -> list[int]:
    out = [d for d in range(1, m + 1) if m % d == 0]
    return out


def _int_poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer polynomials with monic denominator."""
    num = list(num)
    dlen = len(den)
    q = [0] * max(1, len(num) - dlen + 1)
    while len(num) >= dlen and any(num):
        while num and num[-1] == 0:
            num.pop()
        if len(num) < dlen:
            break
        lead = num[-1]
        shift = len(num) - dlen
        q[shift] = lead
        for i, c in enumerate(den):
            num[shift + i] -= lead * c
    while num and num[-1] == 0:
        num.pop()
    return q, num


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients (constant first) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in _divisors(m)[:-1]:
        poly, rem = _int_poly_divmod(poly, list(cyclotomic_polynomial(d)))
        assert not rem
    return tuple(poly)


class CycloElem:
    """Element of Q(zeta_m), reduced modulo the m-th cyclotomic polynomial.

    Stored as coordinates in the power basis 1, zeta, ..., zeta^(phi(m)-1)
    with zeta = e^(2 pi i / m).  Mixed-conductor arithmetic lifts both
    operands into the lcm conductor.
    """

    __slots__ = ("m", "coords")

    def __init__(self, m: int, coords: Sequence[Scalar]):
        phi = euler_phi(m)
        cs = [_as_fraction(c) for c in coords]
        if len(cs) != phi:
            raise ValueError(f"need {phi} coordinates for conductor {m}, got {len(cs)}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coords", tuple(cs))

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("CycloElem is immutable")

    # -- construction

    @classmethod
    def _reduce(cls, m: int, dense: list[Fraction]) -> "CycloElem":
        phi_poly = cyclotomic_polynomial(m)
        deg = len(phi_poly) - 1  # = phi(m)
        dense = list(dense)
        while len(dense) > deg:
            lead = dense.pop()
            if lead == 0:
                continue
            shift = len(dense) - deg
            for i in range(deg):
                dense[shift + i] -= lead * phi_poly[i]
        dense += [Fraction(0)] * (deg - len(dense))
        return cls(m, dense)

    @classmethod
    def from_powers(cls, m: int, powers: Mapping[int, Scalar]) -> "CycloElem":
        """Sum of c * zeta_m^k terms, exponents taken mod m."""
        dense = [Fraction(0)] * m if m > 1 else [Fraction(0)]
        for k, c in powers.items():
            dense[k % m] += _as_fraction(c)
        return cls._reduce(m, dense)

    @classmethod
    def from_rational(cls, m: int, c: Scalar) -> "CycloElem":
        return cls.from_powers(m, {0: c})

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "CycloElem":
        return cls.from_powers(m, {k: 1})

    @classmethod
    def zero(cls, m: int) -> "CycloElem":
        return cls.from_rational(m, 0)

    @classmethod
    def one(cls, m: int) -> "CycloElem":
        return cls.from_rational(m, 1)

    # -- conductor handling

    def lift(self, big_m: int) -> "CycloElem":
        """Re-express in Q(zeta_M) for m | M."""
        if big_m == self.m:
            return self
        if big_m % self.m != 0:
            raise ValueError(f"cannot lift conductor {self.m} into {big_m}")
        step = big_m // self.m
        dense = [Fraction(0)] * big_m
        for j, c in enumerate(self.coords):
            dense[j * step] += c
        return CycloElem._reduce(big_m, dense)

    @staticmethod
    def _common(a: "CycloElem", b: "CycloElem") -> tuple["CycloElem", "CycloElem"]:
        if a.m == b.m:
            return a, b
        m = math.lcm(a.m, b.m)
        return a.lift(m), b.lift(m)

    def _coerce(self, other):
        if isinstance(other, CycloElem):
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElem.from_rational(self.m, other)
        return None

    # -- predicates

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coords[0]

    # -- arithmetic

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = CycloElem._common(self, o)
        return CycloElem(a.m, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.m, [-c for c in self.coords])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return CycloElem(self.m, [x * c for x in self.coords])
        if not isinstance(other, CycloElem):
            return NotImplemented
        a, b = CycloElem._common(self, other)
        n1, n2 = len(a.coords), len(b.coords)
        dense = [Fraction(0)] * (n1 + n2 - 1)
        for i, x in enumerate(a.coords):
            if x == 0:
                continue
            for j, y in enumerate(b.coords):
                if y:
                    dense[i + j] += x * y
        return CycloElem._reduce(a.m, dense)

    __rmul__ = __mul__

    def inverse(self) -> "CycloElem":
        """Field inverse via extended Euclid against the cyclotomic polynomial."""
        if self.is_zero():
            raise NonInvertibleError("division by zero in cyclotomic field")
        if self.is_rational():
            return CycloElem.from_rational(self.m, Fraction(1) / self.coords[0])
        mod = [Fraction(c) for c in cyclotomic_polynomial(self.m)]
        a = list(self.coords)
        # extended gcd over Q[x]: find u with u*a = 1 (mod Phi_m)
        r0, r1 = mod, _trim(a)
        s0: list[Fraction] = [Fraction(0)]
        s1: list[Fraction] = [Fraction(1)]
        while _degree(r1) > 0:
            q, r = _poly_divmod_q(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if _degree(r1) < 0:
            raise NonInvertibleError("element not invertible (zero divisor?)")
        c = r1[0]
        inv = [x / c for x in s1]
        return CycloElem._reduce(self.m, inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloElem.one(self.m)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = CycloElem._common(self, o)
        return a.coords == b.coords

    __hash__ = None  # mixed-conductor equality makes hashing unreliable

    def __repr__(self):
        terms = [f"{c}*zeta{self.m}^{j}" for j, c in enumerate(self.coords) if c != 0]
        return f"CycloElem({' + '.join(terms) or '0'})"

    # -- maps

    def galois(self, k: int) -> "CycloElem":
        """Apply the automorphism zeta -> zeta^k (requires gcd(k, m) = 1)."""
        if math.gcd(k, self.m) != 1:
            raise ValueError(f"zeta -> zeta^{k} is not an automorphism mod {self.m}")
        return CycloElem.from_powers(
            self.m, _accumulate_powers(self.coords, k, self.m)
        )

    def conjugate(self) -> "CycloElem":
        return self.galois(self.m - 1) if self.m > 1 else self

    def embed(self, bits: int = DEFAULT_PRECISION) -> "BigComplex":
        """Numerical image under zeta_m -> e^(2 pi i / m)."""
        with mpmath.workprec(bits + 16):
            z = mpmath.exp(2j * mpmath.pi / self.m)
            total = mpmath.mpc(0)
            power = mpmath.mpc(1)
            for c in self.coords:
                if c != 0:
                    total += power * mpmath.mpf(c.numerator) / c.denominator
                power *= z
        return BigComplex(total, bits)


def _accumulate_powers(coords, k, m):
    powers: dict[int, Fraction] = {}
    for j, c in enumerate(coords):
        if c != 0:
            e = (j * k) % m
            powers[e] = powers.get(e, Fraction(0)) + c
    return powers


def _trim(p: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _degree(p: list[Fraction]) -> int:
    return len(_trim(p)) - 1


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0)) for i in range(n)]
    return _trim(out)


def _poly_divmod_q(num: list[Fraction], den: list[Fraction]):
    num = _trim(num)
    den = _trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    while len(num) >= len(den):
        lead = num[-1] / den[-1]
        shift = len(num) - len(den)
        q[shift] = lead
        for i, c in enumerate(den):
            num[shift + i] -= lead * c
        num = _trim(num)
    return _trim(q), num


def cyclo_canon(m: int, raw: Mapping[int, Scalar] | Sequence[Scalar]) -> CycloElem:
    """Reduce a raw polynomial in zeta_m into the canonical basis.

    ``raw`` is either a mapping exponent -> rational or a dense coefficient
    sequence (constant term first).
    """
    if m < 1:
        raise ValueError("conductor must be positive")
    if isinstance(raw, Mapping):
        return CycloElem.from_powers(m, raw)
    dense = [Fraction(0)] * m if m > 1 else [Fraction(0)]
    for k, c in enumerate(raw):
        dense[k % m] += _as_fraction(c)
    return CycloElem._reduce(m, dense)


def cyclo_embed(x: CycloElem, bits: int = DEFAULT_PRECISION) -> "BigComplex":
    if bits < 64:
        raise ValueError("embedding precision below 64 bits is not supported")
    return x.embed(bits)


# ---------------------------------------------------------------------------
# Arbitrary-precision complex numbers
# ---------------------------------------------------------------------------


class BigComplex:
    """mpmath complex value with an explicit working precision in bits."""

    __slots__ = ("value", "bits")

    def __init__(self, value, bits: int = DEFAULT_PRECISION):
        if bits < 1:
            raise ValueError("precision must be positive")
        with mpmath.workprec(bits + 8):
            v = mpmath.mpc(value)
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("BigComplex is immutable")

    # -- constructors

    @classmethod
    def from_rational(cls, x: Scalar, bits: int = DEFAULT_PRECISION) -> "BigComplex":
        x = _as_fraction(x)
        with mpmath.workprec(bits + 8):
            v = mpmath.mpf(x.numerator) / x.denominator
        return cls(v, bits)

    @classmethod
    def root_of_unity(cls, m: int, k: int = 1, bits: int = DEFAULT_PRECISION) -> "BigComplex":
        with mpmath.workprec(bits + 8):
            v = mpmath.exp(2j * mpmath.pi * k / m)
        return cls(v, bits)

    # -- accessors

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag

    def __abs__(self):
        with mpmath.workprec(self.bits + 8):
            return abs(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    # -- arithmetic

    @staticmethod
    def _lift(x, bits):
        # exact operands lift losslessly; two inexact values carry the
        # accuracy of the weaker one
        if isinstance(x, BigComplex):
            return x.value, min(bits, x.bits)
        if isinstance(x, (int, Fraction)):
            f = _as_fraction(x)
            with mpmath.workprec(bits + 8):
                return mpmath.mpf(f.numerator) / f.denominator, bits
        if isinstance(x, (float, complex, mpmath.mpf, mpmath.mpc)):
            return mpmath.mpc(x), bits
        return None, bits

    def _binop(self, other, op):
        ov, bits = BigComplex._lift(other, self.bits)
        if ov is None:
            return NotImplemented
        with mpmath.workprec(bits + 8):
            return BigComplex(op(self.value, ov), bits)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __neg__(self):
        return BigComplex(-self.value, self.bits)

    def __pow__(self, n: int):
        with mpmath.workprec(self.bits + 8):
            return BigComplex(self.value ** n, self.bits)

    def __eq__(self, other):
        ov, _ = BigComplex._lift(other, self.bits)
        if ov is None:
            return NotImplemented
        return self.value == ov

    __hash__ = None

    def __repr__(self):
        return f"BigComplex({mpmath.nstr(self.value, 12)}, bits={self.bits})"

    def conjugate(self) -> "BigComplex":
        return BigComplex(mpmath.conj(self.value), self.bits)

    def to_mpc(self):
        return self.value


# ---------------------------------------------------------------------------
# Coefficient rings
# ---------------------------------------------------------------------------


class Ring:
    """Descriptor for a coefficient ring: name, parameters, zero/one."""

    __slots__ = ("name", "param", "zero", "one", "from_int")

    def __init__(self, name: str, zero, one, from_int: Callable, param=None):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "param", param)
        object.__setattr__(self, "zero", zero)
        object.__setattr__(self, "one", one)
        object.__setattr__(self, "from_int", from_int)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("Ring is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.name == other.name
            and self.param == other.param
        )

    __hash__ = None

    def __repr__(self):
        if self.param is None:
            return f"Ring({self.name})"
        return f"Ring({self.name}, {self.param})"


RATIONAL_RING = Ring("rational", Fraction(0), Fraction(1), Fraction)
LAURENT_RING = Ring("laurent", LaurentPoly.zero(), LaurentPoly.one(), LaurentPoly.from_scalar)


@functools.lru_cache(maxsize=None)
def cyclo_ring(m: int) -> Ring:
    return Ring(
        "cyclo",
        CycloElem.zero(m),
        CycloElem.one(m),
        lambda n, m=m: CycloElem.from_rational(m, n),
        param=m,
    )


@functools.lru_cache(maxsize=None)
def complex_ring(bits: int = DEFAULT_PRECISION) -> Ring:
    return Ring(
        "complex",
        BigComplex(0, bits),
        BigComplex(1, bits),
        lambda n, bits=bits: BigComplex(n, bits),
        param=bits,
    )


# ---------------------------------------------------------------------------
# Truncated power series in q
# ---------------------------------------------------------------------------


class TruncatedSeries:
    """Power series in q through order N over a coefficient ring.

    ``pole_exp`` is bookkeeping for the (1-z) singularity: the represented
    object is (stored series) * (1-z)^(-pole_exp).  Laurent-ring series may
    carry a positive pole_exp; all other rings require pole_exp = 0.
    """

    __slots__ = ("ring", "order", "coeffs", "pole_exp")

    def __init__(self, ring: Ring, coeffs: Sequence, order: int | None = None, pole_exp: int = 0):
        coeffs = tuple(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if len(coeffs) != order + 1:
            raise ValueError(f"need {order + 1} coefficients, got {len(coeffs)}")
        if order < 0:
            raise ValueError("order must be non-negative")
        if pole_exp < 0:
            raise ValueError("pole_exp must be non-negative")
        if pole_exp and ring.name != "laurent":
            raise ValueError("pole_exp is only meaningful over the Laurent ring")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "pole_exp", pole_exp)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("TruncatedSeries is immutable")

    # -- constructors

    @classmethod
    def constant(cls, ring: Ring, value, order: int, pole_exp: int = 0) -> "TruncatedSeries":
        coeffs = [value] + [ring.zero] * order
        return cls(ring, coeffs, order, pole_exp)

    @classmethod
    def one(cls, ring: Ring, order: int) -> "TruncatedSeries":
        return cls.constant(ring, ring.one, order)

    @classmethod
    def zero(cls, ring: Ring, order: int) -> "TruncatedSeries":
        return cls.constant(ring, ring.zero, order)

    @classmethod
    def monomial(cls, ring: Ring, value, q_exp: int, order: int) -> "TruncatedSeries":
        coeffs = [ring.zero] * (order + 1)
        if q_exp <= order:
            coeffs[q_exp] = value
        return cls(ring, coeffs, order)

    # -- accessors

    def coefficient(self, n: int):
        if n < 0 or n > self.order:
            raise IndexError(f"coefficient q^{n} outside truncation order {self.order}")
        return self.coeffs[n]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.ring, self.coeffs[: order + 1], order, self.pole_exp)

    def with_pole_exp_marker(self, pole_exp: int) -> "TruncatedSeries":
        """Relabel pole_exp without touching coefficients (caller asserts intent)."""
        return TruncatedSeries(self.ring, self.coeffs, self.order, pole_exp)

    def with_coefficient(self, n: int, value) -> "TruncatedSeries":
        coeffs = list(self.coeffs)
        coeffs[n] = value
        return TruncatedSeries(self.ring, coeffs, self.order, self.pole_exp)

    def map_coefficients(self, fn: Callable, ring: Ring) -> "TruncatedSeries":
        return TruncatedSeries(ring, [fn(c) for c in self.coeffs], self.order,
                               self.pole_exp if ring.name == "laurent" else 0)

    # -- ring checks

    def _check_ring(self, other: "TruncatedSeries"):
        if self.ring != other.ring:
            raise RingMismatchError(
                f"cannot combine series over {self.ring!r} and {other.ring!r}"
            )

    # -- arithmetic

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_ring(other)
        if self.pole_exp != other.pole_exp:
            a, b = _match_pole(self, other)
            return a + b
        n = min(self.order, other.order)
        coeffs = [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)]
        return TruncatedSeries(self.ring, coeffs, n, self.pole_exp)

    def __neg__(self):
        return TruncatedSeries(self.ring, [-c for c in self.coeffs], self.order, self.pole_exp)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, scalar) -> "TruncatedSeries":
        """Multiply every coefficient by a ring element (or int/Fraction)."""
        return TruncatedSeries(
            self.ring, [c * scalar for c in self.coeffs], self.order, self.pole_exp
        )

    def shift_q(self, k: int) -> "TruncatedSeries":
        """Multiply by q^k (k >= 0), truncating at the same order."""
        if k < 0:
            raise ValueError("negative q-shift would leave the power-series ring")
        coeffs = [self.ring.zero] * min(k, self.order + 1) + list(self.coeffs)
        return TruncatedSeries(self.ring, coeffs[: self.order + 1], self.order, self.pole_exp)

    # -- sparse monomial factors (the workhorses for q-Pochhammer products)

    def mul_monomial_factor(self, scalar, z_exp: int, q_exp: int) -> "TruncatedSeries":
        """Multiply by (1 - c * z^z_exp * q^q_exp)."""
        mult = self._monomial(scalar, z_exp)
        coeffs = list(self.coeffs)
        if q_exp == 0:
            coeffs = [c - c * mult for c in coeffs]
        else:
            for n in range(self.order, q_exp - 1, -1):
                coeffs[n] = coeffs[n] - self.coeffs[n - q_exp] * mult
        return TruncatedSeries(self.ring, coeffs, self.order, self.pole_exp)

    def div_monomial_factor(self, scalar, z_exp: int, q_exp: int) -> "TruncatedSeries":
        """Divide by (1 - c * z^z_exp * q^q_exp); requires q_exp >= 1."""
        if q_exp < 1:
            raise ValueError("monomial division needs a positive q-power")
        mult = self._monomial(scalar, z_exp)
        coeffs = list(self.coeffs)
        for n in range(q_exp, self.order + 1):
            coeffs[n] = coeffs[n] + coeffs[n - q_exp] * mult
        return TruncatedSeries(self.ring, coeffs, self.order, self.pole_exp)

    def _monomial(self, scalar, z_exp: int):
        if z_exp != 0:
            if self.ring.name != "laurent":
                raise RingMismatchError("z-monomials require the Laurent coefficient ring")
            return LaurentPoly({z_exp: scalar})
        if self.ring.name == "laurent":
            return LaurentPoly.from_scalar(scalar)
        return scalar

    # -- comparisons

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.order == other.order
            and self.pole_exp == other.pole_exp
            and list(self.coeffs) == list(other.coeffs)
        )

    __hash__ = None

    def same_object(self, other: "TruncatedSeries") -> bool:
        """Mathematical equality up to the common truncation order.

        Normalizes differing pole_exp bookkeeping by cross-multiplying with
        powers of (1-z), so no exact division is required.
        """
        self._check_ring(other)
        a, b = _match_pole(self, other)
        n = min(a.order, b.order)
        return all(a.coeffs[i] == b.coeffs[i] for i in range(n + 1))

    def __repr__(self):
        head = ", ".join(repr(c) for c in self.coeffs[:3])
        tail = ", ..." if self.order > 2 else ""
        return (
            f"TruncatedSeries(order={self.order}, pole_exp={self.pole_exp}, "
            f"ring={self.ring!r}, coeffs=[{head}{tail}])"
        )


def _match_pole(a: TruncatedSeries, b: TruncatedSeries):
    """Raise both series to the larger pole_exp by multiplying stored coefficients."""
    if a.pole_exp == b.pole_exp:
        return a, b
    target = max(a.pole_exp, b.pole_exp)
    return clear_pole(a, target), clear_pole(b, target)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to min(a.order, b.order); pole exponents add."""
    a._check_ring(b)
    n = min(a.order, b.order)
    zero = a.ring.zero
    out = [zero] * (n + 1)
    for i in range(n + 1):
        ai = a.coeffs[i]
        if ai == zero:
            continue
        for j in range(n + 1 - i):
            bj = b.coeffs[j]
            if bj == zero:
                continue
            out[i + j] = out[i + j] + ai * bj
    return TruncatedSeries(a.ring, out, n, a.pole_exp + b.pole_exp)


def series_inv(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse to the truncation order.

    The constant term must be a unit, or (over the Laurent ring) a unit times
    (1-z)^d with every coefficient divisible by (1-z)^d; the d surplus powers
    move into the result's pole bookkeeping, net of ``a.pole_exp``.
    """
    c0 = a.coeffs[0]
    ring = a.ring
    coeffs = list(a.coeffs)
    d = 0
    if ring.name == "laurent":
        d = c0.one_minus_z_multiplicity()
        if d:
            try:
                for i, c in enumerate(coeffs):
                    cur = c
                    for _ in range(d):
                        cur = cur.div_one_minus_z()
                    coeffs[i] = cur
            except InexactDivisionError as exc:
                raise NonInvertibleError(
                    f"coefficient q^{i} is not divisible by (1-z)^{d}: {exc}"
                ) from exc
        u = coeffs[0]
        if not u.is_unit_monomial():
            raise NonInvertibleError(
                f"constant term {c0!r} is not a unit times a power of (1-z)"
            )
        u_inv = u.inverse()
    else:
        if c0 == ring.zero:
            raise NonInvertibleError("constant term is zero")
        if ring.name == "rational":
            u_inv = Fraction(1) / c0
        elif ring.name == "cyclo":
            u_inv = c0.inverse()
        else:
            u_inv = 1 / c0
    n = a.order
    inv = [ring.zero] * (n + 1)
    inv[0] = u_inv
    for k in range(1, n + 1):
        acc = ring.zero
        for i in range(1, k + 1):
            ci = coeffs[i]
            if ci == ring.zero:
                continue
            acc = acc + ci * inv[k - i]
        inv[k] = -(u_inv * acc)
    net = d - a.pole_exp
    if net >= 0:
        return TruncatedSeries(ring, inv, n, net)
    surplus = ONE_MINUS_Z ** (-net)
    return TruncatedSeries(ring, [c * surplus for c in inv], n, 0)


def clear_pole(a: TruncatedSeries, e: int) -> TruncatedSeries:
    """Re-express the same mathematical object with pole_exp = e.

    Raising e multiplies the stored coefficients by (1-z)^(e - pole_exp);
    lowering divides exactly and raises InexactDivisionError if the object
    genuinely has a pole of order beyond e at z = 1.
    """
    if e < 0:
        raise ValueError("pole_exp must be non-negative")
    if a.ring.name != "laurent":
        raise RingMismatchError("pole bookkeeping applies to the Laurent ring only")
    if e == a.pole_exp:
        return a
    if e > a.pole_exp:
        factor = ONE_MINUS_Z ** (e - a.pole_exp)
        return TruncatedSeries(a.ring, [c * factor for c in a.coeffs], a.order, e)
    drop = a.pole_exp - e
    coeffs = []
    for n, c in enumerate(a.coeffs):
        cur = c
        for _ in range(drop):
            try:
                cur = cur.div_one_minus_z()
            except InexactDivisionError as exc:
                raise InexactDivisionError(
                    f"coefficient of q^{n} has a genuine pole at z=1: {exc}"
                ) from exc
        coeffs.append(cur)
    return TruncatedSeries(a.ring, coeffs, a.order, e)
