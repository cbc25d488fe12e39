"""Named series constructors.

Bernoulli numbers, Eisenstein series E_k at q, q^2, q^4, generalized
Pochhammer products described by a ProductSpec, and the two fixed
products used throughout the verification suites:

    A(q) = (-q; q^2)_inf / (q^2; q^2)_inf     (space prefactor)
    F(q) = q (-q; q^2)_inf (q^2; q^2)_inf^11  (weight-6 basis completion)

Every eta-type object used here has an integral q-expansion; the
ProductSpec representation only allows integral leading q-powers, so
fractional exponents never arise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .series import QSeries

_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli(k: int) -> Fraction:
    """B_k via the recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0 (B_1 = -1/2)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    while len(_BERNOULLI) <= k:
        m = len(_BERNOULLI)
        s = sum(comb(m + 1, j) * _BERNOULLI[j] for j in range(m))
        _BERNOULLI.append(-s / (m + 1))
    return _BERNOULLI[k]


def bernoulli_table(kmax: int) -> dict[int, Fraction]:
    return {k: bernoulli(k) for k in range(kmax + 1)}


def divisor_power_sums(power: int, prec: int) -> list[int]:
    """sigma_power(n) for n = 0..prec (index 0 unused, set to 0)."""
    acc = [0] * (prec + 1)
    for d in range(1, prec + 1):
        dp = d**power
        for n in range(d, prec + 1, d):
            acc[n] += dp
    return acc


@lru_cache(maxsize=None)
def eisenstein(k: int, prec: int) -> QSeries:
    """E_k(q) = 1 - (2k/B_k) sum_{n>=1} sigma_{k-1}(n) q^n, k even >= 2."""
    if k < 2 or k % 2:
        raise ValueError("Eisenstein weight must be even and >= 2")
    mult = -Fraction(2 * k) / bernoulli(k)
    if mult.denominator == 1:
        mult = int(mult)
    sig = divisor_power_sums(k - 1, prec)
    coeffs = [1] + [mult * sig[n] for n in range(1, prec + 1)]
    return QSeries(coeffs, prec)


@dataclass(frozen=True)
class ProductFactor:
    """One generalized Pochhammer block prod_{k>=0} (1 + s q^{a+kd})^e."""

    a: int
    d: int
    s: int
    e: int

    def __post_init__(self):
        if self.a < 1:
            raise ValueError("factor offset must be >= 1")
        if self.d < 1:
            raise ValueError("factor step must be >= 1")
        if self.s not in (1, -1):
            raise ValueError("factor sign must be +1 or -1")


@dataclass(frozen=True)
class ProductSpec:
    """Symbolic product q^t * prod of ProductFactor blocks."""

    factors: tuple[ProductFactor, ...]
    qpower: int = 0

    def __post_init__(self):
        if self.qpower < 0:
            raise ValueError("leading q-power must be >= 0")

    def canonical(self) -> "ProductSpec":
        """Merge exponents of identical blocks and sort by (d, a, s)."""
        merged: dict[tuple[int, int, int], int] = {}
        for f in self.factors:
            key = (f.a, f.d, f.s)
            merged[key] = merged.get(key, 0) + f.e
        factors = tuple(
            ProductFactor(a, d, s, e)
            for (a, d, s), e in sorted(merged.items(), key=lambda kv: (kv[0][1], kv[0][0], kv[0][2]))
            if e != 0
        )
        return ProductSpec(factors, self.qpower)

    def to_string(self) -> str:
        spec = self.canonical()
        parts = []
        if spec.qpower:
            parts.append(f"q^{spec.qpower}")
        parts.extend(f"PROD({f.a},{f.d},{f.s},{f.e})" for f in spec.factors)
        return "*".join(parts) if parts else "1"

    @classmethod
    def parse(cls, text: str) -> "ProductSpec":
        text = text.replace(" ", "")
        if text in ("", "1"):
            return cls((), 0)
        qpower = 0
        factors = []
        for piece in text.split("*"):
            m = re.fullmatch(r"q\^(\d+)", piece)
            if m:
                qpower += int(m.group(1))
                continue
            if piece == "q":
                qpower += 1
                continue
            m = re.fullmatch(r"PROD\((-?\d+),(-?\d+),(-?\d+),(-?\d+)\)", piece)
            if not m:
                raise ValueError(f"cannot parse product factor {piece!r}")
            a, d, s, e = map(int, m.groups())
            factors.append(ProductFactor(a, d, s, e))
        return cls(tuple(factors), qpower)

    def expand(self, prec: int) -> QSeries:
        return expand_product(self, prec)


def _mul_binomial_inplace(coeffs: list, j: int, s: int):
    """In-place multiply by (1 + s q^j)."""
    for n in range(len(coeffs) - 1, j - 1, -1):
        c = coeffs[n - j]
        if c:
            coeffs[n] += s * c


@lru_cache(maxsize=64)
def _factor_base(a: int, d: int, s: int, prec: int) -> QSeries:
    coeffs = [0] * (prec + 1)
    coeffs[0] = 1
    j = a
    while j <= prec:
        _mul_binomial_inplace(coeffs, j, s)
        j += d
    return QSeries(coeffs, prec)


def expand_product(spec: ProductSpec, prec: int) -> QSeries:
    """Exact expansion of a ProductSpec; the finite truncation of each
    infinite product at a + kd <= prec determines all coefficients."""
    spec = spec.canonical()
    if spec.qpower > prec:
        return QSeries.zero(prec)
    inner_prec = prec - spec.qpower
    result = QSeries.one(inner_prec)
    for f in spec.factors:
        result = result * (_factor_base(f.a, f.d, f.s, inner_prec) ** f.e)
    if spec.qpower:
        result = result.shift(spec.qpower)
    return result


def euler_series(prec: int, step: int = 1) -> QSeries:
    """(q^step; q^step)_inf via the pentagonal-number expansion (sparse)."""
    coeffs = [0] * (prec + 1)
    coeffs[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2 * step
        g2 = k * (3 * k + 1) // 2 * step
        if g1 > prec and g2 > prec:
            break
        sign = -1 if k % 2 else 1
        if g1 <= prec:
            coeffs[g1] += sign
        if g2 <= prec:
            coeffs[g2] += sign
        k += 1
    return QSeries(coeffs, prec)


def euler_cube_series(prec: int, step: int = 1) -> QSeries:
    """(q^step; q^step)_inf^3 = sum (-1)^k (2k+1) q^{step*k(k+1)/2} (sparse)."""
    coeffs = [0] * (prec + 1)
    k = 0
    while True:
        t = step * k * (k + 1) // 2
        if t > prec:
            break
        coeffs[t] += (2 * k + 1) * (-1 if k % 2 else 1)
        k += 1
    return QSeries(coeffs, prec)


SPEC_EULER = ProductSpec((ProductFactor(1, 1, -1, 1),))
SPEC_A = ProductSpec((ProductFactor(1, 2, 1, 1), ProductFactor(2, 2, -1, -1)))
SPEC_F = ProductSpec((ProductFactor(1, 2, 1, 1), ProductFactor(2, 2, -1, 11)), qpower=1)
SPEC_ETA2_12 = ProductSpec((ProductFactor(2, 2, -1, 12),), qpower=1)


@lru_cache(maxsize=None)
def prefactor_A(prec: int) -> QSeries:
    """A(q) = (-q; q^2)_inf / (q^2; q^2)_inf.

    Also the count of partitions without repeated odd parts, and the
    zeroth moment shared by all four statistic families.
    """
    return expand_product(SPEC_A, prec)


@lru_cache(maxsize=None)
def form_F(prec: int) -> QSeries:
    """F(q) = q (-q; q^2)_inf (q^2; q^2)_inf^11."""
    return expand_product(SPEC_F, prec)
