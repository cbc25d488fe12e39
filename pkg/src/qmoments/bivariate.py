"""Truncated series in q with Laurent-polynomial coefficients in z.

Houses the two-variable rank and crank generating functions.  Row n
stores the z-coefficients of q^n as a dict m -> value with the bound
|m| <= n + zslack; the slack is zero for all the named generating
functions (no partition statistic exceeds the partition size) and only
grows when a computation multiplies by explicit powers of z.

Crank-type functions are built from their infinite-product definitions;
rank-type functions wrap the statistic-resolved rows of the partition
DP, which is the enumerative definition of those series.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .series import QSeries
from . import partitions as po
from .forms import ProductFactor, ProductSpec, expand_product


class InvalidOffsetError(ValueError):
    """Pochhammer factor offsets must be >= 1 (unit constant term)."""


def _strip(row: dict) -> dict:
    return {m: c for m, c in row.items() if c != 0}


class BivariateSeries:
    """rows[n][m] is the coefficient of z^m q^n, exact for n <= prec."""

    __slots__ = ("rows", "prec", "zslack")

    def __init__(self, rows: Iterable[dict], prec: int | None = None, zslack: int = 0,
                 validate: bool = True):
        rows = [_strip(r) for r in rows]
        if prec is None:
            prec = len(rows) - 1
        if prec < 0:
            raise ValueError("prec must be >= 0")
        while len(rows) < prec + 1:
            rows.append({})
        rows = rows[: prec + 1]
        if validate:
            for n, row in enumerate(rows):
                for m in row:
                    if abs(m) > n + zslack:
                        raise ValueError(
                            f"z-exponent {m} at q^{n} exceeds bound n + {zslack}"
                        )
        self.rows = rows
        self.prec = prec
        self.zslack = zslack

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, prec: int) -> "BivariateSeries":
        return cls([{} for _ in range(prec + 1)], prec, 0, validate=False)

    @classmethod
    def one(cls, prec: int) -> "BivariateSeries":
        rows = [{} for _ in range(prec + 1)]
        rows[0] = {0: 1}
        return cls(rows, prec, 0, validate=False)

    @classmethod
    def lift(cls, a: QSeries) -> "BivariateSeries":
        rows = [({0: c} if c else {}) for c in a.coeffs]
        return cls(rows, a.prec, 0, validate=False)

    # -- basics -----------------------------------------------------------

    def row(self, n: int) -> dict:
        return dict(self.rows[n])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return self.prec == other.prec and all(
            _strip(a) == _strip(b) for a, b in zip(self.rows, other.rows)
        )

    def __repr__(self) -> str:
        return f"BivariateSeries(prec={self.prec}, zslack={self.zslack})"

    def first_difference(self, other: "BivariateSeries"):
        """(n, m) of the first differing entry up to min prec, or None."""
        prec = min(self.prec, other.prec)
        for n in range(prec + 1):
            a, b = self.rows[n], other.rows[n]
            for m in sorted(set(a) | set(b)):
                if a.get(m, 0) != b.get(m, 0):
                    return (n, m)
        return None

    def is_z_symmetric(self) -> bool:
        return all(row.get(m, 0) == row.get(-m, 0) for row in self.rows for m in row)

    def truncate(self, prec: int) -> "BivariateSeries":
        if prec > self.prec:
            raise ValueError("cannot extend precision by truncation")
        return BivariateSeries(self.rows[: prec + 1], prec, self.zslack, validate=False)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, BivariateSeries):
            prec = min(self.prec, other.prec)
            rows = []
            for n in range(prec + 1):
                row = dict(self.rows[n])
                for m, c in other.rows[n].items():
                    row[m] = row.get(m, 0) + c
                rows.append(row)
            return BivariateSeries(rows, prec, max(self.zslack, other.zslack),
                                   validate=False)
        return NotImplemented

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            rows = [{m: c * other for m, c in row.items()} for row in self.rows]
            return BivariateSeries(rows, self.prec, self.zslack, validate=False)
        if isinstance(other, QSeries):
            other = BivariateSeries.lift(other)
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        prec = min(self.prec, other.prec)
        rows = [dict() for _ in range(prec + 1)]
        for n1 in range(prec + 1):
            r1 = self.rows[n1]
            if not r1:
                continue
            for n2 in range(prec + 1 - n1):
                r2 = other.rows[n2]
                if not r2:
                    continue
                dst = rows[n1 + n2]
                for m1, c1 in r1.items():
                    for m2, c2 in r2.items():
                        m = m1 + m2
                        dst[m] = dst.get(m, 0) + c1 * c2
        return BivariateSeries(rows, prec, self.zslack + other.zslack, validate=False)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "BivariateSeries":
        if e < 0:
            raise ValueError("negative bivariate powers are not supported")
        result = BivariateSeries.one(self.prec)
        for _ in range(e):
            result = result * self
        return result

    def zshift(self, k: int) -> "BivariateSeries":
        """Multiply by z^k."""
        rows = [{m + k: c for m, c in row.items()} for row in self.rows]
        return BivariateSeries(rows, self.prec, self.zslack + abs(k), validate=False)

    def mul_binomial(self, zpow: int, qexp: int, sign: int) -> "BivariateSeries":
        """Multiply by (1 + sign * z^zpow q^qexp), qexp >= 1."""
        if qexp < 1:
            raise InvalidOffsetError("binomial q-exponent must be >= 1")
        rows = [dict(r) for r in self.rows]
        for n in range(self.prec, qexp - 1, -1):
            src = self.rows[n - qexp]
            dst = rows[n]
            for m, c in src.items():
                dst[m + zpow] = dst.get(m + zpow, 0) + sign * c
        return BivariateSeries(rows, self.prec, self.zslack + max(0, abs(zpow) - qexp),
                               validate=False)

    def div_binomial(self, zpow: int, qexp: int) -> "BivariateSeries":
        """Divide by (1 - z^zpow q^qexp), qexp >= 1 (progressive expansion)."""
        if qexp < 1:
            raise InvalidOffsetError("binomial q-exponent must be >= 1")
        rows = [dict(r) for r in self.rows]
        for n in range(qexp, self.prec + 1):
            src = rows[n - qexp]
            dst = rows[n]
            for m, c in list(src.items()):
                dst[m + zpow] = dst.get(m + zpow, 0) + c
        extra = 0
        if abs(zpow) > qexp:  # repeated applications can outrun the q-exponent
            extra = (abs(zpow) - qexp) * (self.prec // qexp)
        return BivariateSeries(rows, self.prec, self.zslack + extra, validate=False)

    # -- operators ---------------------------------------------------------

    def delz(self) -> "BivariateSeries":
        """z * d/dz: entry (m, n) scaled by m."""
        rows = [{m: m * c for m, c in row.items()} for row in self.rows]
        return BivariateSeries(rows, self.prec, self.zslack, validate=False)

    def delq(self) -> "BivariateSeries":
        """q * d/dq applied row-wise."""
        rows = [{m: n * c for m, c in row.items()} for n, row in enumerate(self.rows)]
        return BivariateSeries(rows, self.prec, self.zslack, validate=False)

    def moment_series(self, k: int) -> QSeries:
        """QSeries with coefficient sum_m m^k c(m, n) at q^n."""
        if k < 0:
            raise ValueError("moment order must be >= 0")
        out = []
        for row in self.rows:
            out.append(sum(m**k * c for m, c in row.items()))
        return QSeries(out, self.prec)

    def eval_z1(self) -> QSeries:
        """Row sums (z = 1 specialisation); equals moment_series(0)."""
        return self.moment_series(0)

    # -- serialisation -------------------------------------------------------

    def dumps(self) -> str:
        lines = [f"bivariate v1 prec={self.prec}"]
        for n, row in enumerate(self.rows):
            for m in sorted(row):
                c = row[m]
                num = c.numerator if isinstance(c, Fraction) else c
                den = c.denominator if isinstance(c, Fraction) else 1
                lines.append(f"{n} {m} {num}/{den}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "BivariateSeries":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = lines[0].split()
        if header[:2] != ["bivariate", "v1"]:
            raise ValueError("not a bivariate v1 payload")
        prec = int(header[2][5:])
        rows: list[dict] = [dict() for _ in range(prec + 1)]
        for ln in lines[1:]:
            ns, ms, frac = ln.split()
            num, den = frac.split("/")
            c = Fraction(int(num), int(den))
            rows[int(ns)][int(ms)] = int(c) if c.denominator == 1 else c
        slack = 0
        for n, row in enumerate(rows):
            for m in row:
                slack = max(slack, abs(m) - n)
        return cls(rows, prec, slack)


# -- product constructors -----------------------------------------------------


def binvert_factor(offset: int, step: int, zpow: int, prec: int) -> BivariateSeries:
    """prod_{k>=0} (1 - z^zpow q^{offset + k*step})^{-1} truncated at prec."""
    if offset < 1:
        raise InvalidOffsetError("offset must be >= 1")
    result = BivariateSeries.one(prec)
    j = offset
    while j <= prec:
        result = result.div_binomial(zpow, j)
        j += step
    return result


def bfactor(offset: int, step: int, zpow: int, sign: int, prec: int) -> BivariateSeries:
    """prod_{k>=0} (1 + sign * z^zpow q^{offset + k*step}) truncated at prec."""
    if offset < 1:
        raise InvalidOffsetError("offset must be >= 1")
    result = BivariateSeries.one(prec)
    j = offset
    while j <= prec:
        result = result.mul_binomial(zpow, j, sign)
        j += step
    return result


def _tight(gf: BivariateSeries) -> BivariateSeries:
    # named generating functions satisfy |m| <= n exactly; enforce it
    return BivariateSeries(gf.rows, gf.prec, 0, validate=True)


def crank_gf(prec: int, qstep: int = 1) -> BivariateSeries:
    """C(z, q^qstep) = (q^s; q^s)_inf / ((z q^s; q^s)_inf (z^-1 q^s; q^s)_inf)."""
    s = qstep
    uni = expand_product(ProductSpec((ProductFactor(s, s, -1, 1),)), prec)
    gf = BivariateSeries.lift(uni) * binvert_factor(s, s, 1, prec)
    return _tight(gf * binvert_factor(s, s, -1, prec))


def c1_gf(prec: int) -> BivariateSeries:
    """(q^2; q^4)_inf (q; q)_inf / ((zq; q)_inf (z^-1 q; q)_inf)."""
    uni = expand_product(
        ProductSpec((ProductFactor(2, 4, -1, 1), ProductFactor(1, 1, -1, 1))), prec
    )
    gf = BivariateSeries.lift(uni) * binvert_factor(1, 1, 1, prec)
    return _tight(gf * binvert_factor(1, 1, -1, prec))


def c2_gf(prec: int) -> BivariateSeries:
    """(-q; q^2)_inf (q^2; q^2)_inf / ((zq^2; q^2)_inf (z^-1 q^2; q^2)_inf)."""
    uni = expand_product(
        ProductSpec((ProductFactor(1, 2, 1, 1), ProductFactor(2, 2, -1, 1))), prec
    )
    gf = BivariateSeries.lift(uni) * binvert_factor(2, 2, 1, prec)
    return _tight(gf * binvert_factor(2, 2, -1, prec))


def c4_gf(prec: int) -> BivariateSeries:
    """(q^4; q^4)_inf / ((q; q^2)_inf (zq^4; q^4)_inf (z^-1 q^4; q^4)_inf)."""
    uni = expand_product(
        ProductSpec((ProductFactor(4, 4, -1, 1), ProductFactor(1, 2, -1, -1))), prec
    )
    gf = BivariateSeries.lift(uni) * binvert_factor(4, 4, 1, prec)
    return _tight(gf * binvert_factor(4, 4, -1, prec))


def theta_pair(prec: int) -> BivariateSeries:
    """(-qz, -q/z; q^2)_inf as the product of two z-signed factors."""
    return _tight(bfactor(1, 2, 1, 1, prec) * bfactor(1, 2, -1, 1, prec))


def _rows_gf(kind: str, prec: int) -> BivariateSeries:
    rows = [dict(r) for r in po.rank_rows(kind, prec)]
    return BivariateSeries(rows, prec, 0)


def rank_gf(prec: int) -> BivariateSeries:
    """R(z, q): partitions of n resolved by rank."""
    return _rows_gf("rank", prec)


def m2rank_gf(prec: int) -> BivariateSeries:
    """R2(z, q): partitions without repeated odd parts resolved by M2-rank."""
    return _rows_gf("m2rank", prec)


def overline_rank_gf(prec: int) -> BivariateSeries:
    """Rbar(z, q): overpartitions resolved by Dyson rank."""
    return _rows_gf("overline-rank", prec)
