"""Parsing of z-expressions from the command line and API.

Accepted forms: exact rationals ("3", "-5/7", "0.25"), Gaussian rationals
("2+i", "1/2-3i", "-i"), and root-of-unity tokens ("zeta(8)", "zeta(8)^3",
"1/2*zeta(8)^3").  Gaussian rationals map into the 4th cyclotomic field;
zeta tokens into the m-th.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import CycloElem

_RATIONAL = r"[+-]?\d+(?:/\d+|\.\d+)?"
_ZETA_RE = re.compile(
    rf"^(?:(?P<scalar>{_RATIONAL})\*)?zeta\((?P<m>\d+)\)(?:\^(?P<k>-?\d+))?$"
)
_GAUSS_RE = re.compile(
    rf"^(?P<re>{_RATIONAL})(?P<sign>[+-])(?P<im>\d+(?:/\d+|\.\d+)?)?i$"
)
_IMAG_RE = re.compile(r"^(?P<sign>[+-])?(?P<im>\d+(?:/\d+|\.\d+)?)?i$")


def _frac(s: str) -> Fraction:
    return Fraction(s)


def parse_z_expr(text: str):
    """Parse into Fraction or CycloElem; raises ValueError on junk."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty z-expression")
    m = _ZETA_RE.match(s)
    if m:
        order = int(m.group("m"))
        if order < 1:
            raise ValueError("zeta order must be positive")
        k = int(m.group("k") or 1)
        scalar = _frac(m.group("scalar")) if m.group("scalar") else Fraction(1)
        return CycloElem.zeta(order, k) * scalar
    m = _GAUSS_RE.match(s)
    if m:
        re_part = _frac(m.group("re"))
        im = _frac(m.group("im")) if m.group("im") else Fraction(1)
        if m.group("sign") == "-":
            im = -im
        return CycloElem.from_powers(4, {0: re_part, 1: im})
    m = _IMAG_RE.match(s)
    if m:
        im = _frac(m.group("im")) if m.group("im") else Fraction(1)
        if m.group("sign") == "-":
            im = -im
        return CycloElem.from_powers(4, {1: im})
    try:
        return _frac(s)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse z-expression {text!r}") from None
