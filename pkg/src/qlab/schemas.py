"""Pydantic request/response models and exact-number serialization.

All numbers travel as strings ("p/q" rationals, decimal floats with an
explicit precision) so consumers never round-trip through binary floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional

import mpmath
from pydantic import BaseModel, Field

from .algebra import BigComplex, CycloElem, LaurentPoly, TruncatedSeries


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def parse_fraction(s: str) -> Fraction:
    return Fraction(s.strip())


def poly_doc(p: LaurentPoly) -> dict[str, str]:
    return {str(e): fraction_str(c) for e, c in sorted(p.coeffs.items())}


def mpf_str(x, bits: int) -> str:
    digits = max(8, int(bits * 0.30103))
    return mpmath.nstr(x, digits)


class CoeffDoc(BaseModel):
    n: int
    poly: dict[str, str]


class SeriesDoc(BaseModel):
    order: int
    pole_exp: int
    coeffs: list[CoeffDoc]


def series_doc(s: TruncatedSeries) -> SeriesDoc:
    coeffs = []
    for n, c in enumerate(s.coeffs):
        if isinstance(c, LaurentPoly):
            coeffs.append(CoeffDoc(n=n, poly=poly_doc(c)))
        else:
            coeffs.append(CoeffDoc(n=n, poly={"0": fraction_str(c)} if c else {}))
    return SeriesDoc(order=s.order, pole_exp=s.pole_exp, coeffs=coeffs)


class ValueDoc(BaseModel):
    kind: Literal["rational", "cyclotomic", "complex"]
    value: Optional[str] = None                 # rational
    m: Optional[int] = None                      # cyclotomic conductor
    coords: Optional[list[str]] = None           # cyclotomic power-basis coords
    re: Optional[str] = None                     # complex
    im: Optional[str] = None
    precision_bits: Optional[int] = None


def value_doc(x, bits: int = 256) -> ValueDoc:
    if isinstance(x, (int, Fraction)):
        return ValueDoc(kind="rational", value=fraction_str(Fraction(x)))
    if isinstance(x, CycloElem):
        if x.is_rational():
            return ValueDoc(kind="rational", value=fraction_str(x.as_rational()))
        return ValueDoc(kind="cyclotomic", m=x.m, coords=[fraction_str(c) for c in x.coords])
    if isinstance(x, BigComplex):
        return ValueDoc(
            kind="complex",
            re=mpf_str(x.real, x.bits),
            im=mpf_str(x.imag, x.bits),
            precision_bits=x.bits,
        )
    raise TypeError(f"cannot serialize {type(x).__name__}")


class ExpandRequest(BaseModel):
    series: str
    order: int = Field(ge=0)
    k: int = Field(default=1, ge=1)
    form: Literal["EQ1", "FINE"] = "EQ1"


class EvalRequest(BaseModel):
    series: str
    q: str
    z: Optional[str] = None
    order: int = Field(default=40, ge=0)
    k: int = Field(default=1, ge=1)
    precision_bits: int = Field(default=256, ge=64)


class EvalResponse(BaseModel):
    value: ValueDoc
    tail_estimate: str


class RootRequest(BaseModel):
    series: Literal["g3", "uk", "f"]
    m: int = Field(ge=1)
    z: Optional[str] = None
    k: int = Field(default=1, ge=1)
    form: Literal["EX1", "EX2"] = "EX2"
    exact: bool = True
    precision_bits: int = Field(default=256, ge=64)


class RadialRequest(BaseModel):
    series: Literal["f", "b", "g3", "g3inv", "u", "utilde"]
    m: int = Field(ge=1)
    z: Optional[str] = None
    k: int = Field(default=1, ge=1)
    rho: Optional[list[str]] = None   # explicit rationals in (0,1)
    j_lo: int = Field(default=4, ge=1)
    j_hi: int = Field(default=16, ge=1)
    precision_bits: int = Field(default=256, ge=64)


class RadialSampleDoc(BaseModel):
    rho: str
    value_re: str
    value_im: str


class RadialReportDoc(BaseModel):
    target_m: int
    samples: list[RadialSampleDoc]
    estimate: dict[str, str]
    error_bound: Optional[str]
    unreliable: bool


class EnumerateRequest(BaseModel):
    max_weight: int = Field(ge=0)
    k: int = Field(default=1, ge=1)
    strong: bool = False


class CountDoc(BaseModel):
    rank: int
    weight: int
    count: int


class TableDoc(BaseModel):
    strong: bool
    k: int
    max_weight: int
    counts: list[CountDoc]


class VerifyRequest(BaseModel):
    suites: Optional[list[str]] = None  # None = all
    order: int = Field(default=30, ge=10)


class DiscrepancyDoc(BaseModel):
    where: str
    lhs: str
    rhs: str


class SuiteReportDoc(BaseModel):
    id: str
    strategy: str
    passed: bool
    order: Optional[int]
    tolerance: Optional[str]
    first_discrepancy: Optional[DiscrepancyDoc]
    runtime_seconds: float
    detail: Optional[str]


class VerifyResponse(BaseModel):
    reports: list[SuiteReportDoc]
    all_passed: bool


class CatalogResponse(BaseModel):
    series: list[str]
    suites: list[str]


class ErrorResponse(BaseModel):
    error: str
