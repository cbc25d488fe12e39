"""Exact truncated power series in one variable q.

Two coefficient domains are supported: arbitrary-precision rationals
(QSeries) and residue rings Z/mZ (ZmSeries).  Values are immutable and
every operation returns a fresh series.  Binary operations between
series of different truncation orders return a result at the shorter
order, so each series always knows exactly how far it can be trusted.

Coefficients of a QSeries are Python ints or fractions.Fraction; ints
are kept as ints so that the common integer-coefficient case never pays
for rational normalisation.  No floating point appears anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Coeff = Union[int, Fraction]


class ZeroConstantTermError(ZeroDivisionError):
    """Inversion of a series whose constant term is not a unit."""


class NonInvertibleDenominatorError(ArithmeticError):
    """A rational coefficient cannot be reduced modulo m."""

    def __init__(self, index: int, modulus: int):
        super().__init__(
            f"denominator of coefficient q^{index} is not invertible mod {modulus}"
        )
        self.index = index
        self.modulus = modulus


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction))


class QSeries:
    """Truncated power series with exact rational coefficients.

    ``coeffs[n]`` is the coefficient of q^n, exact for every n <= prec.
    """

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: Iterable[Coeff], prec: int | None = None):
        cs = tuple(coeffs)
        if prec is None:
            prec = len(cs) - 1
        if prec < 0:
            raise ValueError("prec must be >= 0")
        if len(cs) < prec + 1:
            cs = cs + (0,) * (prec + 1 - len(cs))
        elif len(cs) > prec + 1:
            cs = cs[: prec + 1]
        self.coeffs = cs
        self.prec = prec

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, prec: int) -> "QSeries":
        return cls((0,) * (prec + 1), prec)

    @classmethod
    def one(cls, prec: int) -> "QSeries":
        return cls((1,) + (0,) * prec, prec)

    @classmethod
    def monomial(cls, n: int, prec: int, c: Coeff = 1) -> "QSeries":
        if not 0 <= n <= prec:
            raise ValueError("monomial exponent outside truncation range")
        cs = [0] * (prec + 1)
        cs[n] = c
        return cls(cs, prec)

    # -- basics -------------------------------------------------------

    def __getitem__(self, n: int) -> Coeff:
        if not 0 <= n <= self.prec:
            raise IndexError(f"coefficient q^{n} beyond truncation order {self.prec}")
        return self.coeffs[n]

    def __len__(self) -> int:
        return self.prec + 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.prec == other.prec and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.prec, self.coeffs))

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.prec >= 6 else ""
        return f"QSeries([{head}{tail}], prec={self.prec})"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def agrees_with(self, other: "QSeries", upto: int | None = None) -> bool:
        """Coefficientwise equality up to min(precisions) or `upto`."""
        n = min(self.prec, other.prec)
        if upto is not None:
            n = min(n, upto)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def truncate(self, prec: int) -> "QSeries":
        if prec > self.prec:
            raise ValueError("cannot extend precision by truncation")
        if prec == self.prec:
            return self
        return QSeries(self.coeffs[: prec + 1], prec)

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        if _is_scalar(other):
            cs = list(self.coeffs)
            cs[0] = cs[0] + other
            return QSeries(cs, self.prec)
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec, other.prec)
        a, b = self.coeffs, other.coeffs
        return QSeries([a[i] + b[i] for i in range(prec + 1)], prec)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        if _is_scalar(other):
            return self + (-other)
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec, other.prec)
        a, b = self.coeffs, other.coeffs
        return QSeries([a[i] - b[i] for i in range(prec + 1)], prec)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            if other == 0:
                return QSeries.zero(self.prec)
            return QSeries([c * other for c in self.coeffs], self.prec)
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec, other.prec)
        a = self.coeffs[: prec + 1]
        b = other.coeffs[: prec + 1]
        # iterate over the sparser operand to skip zero terms
        na = sum(1 for c in a if c)
        nb = sum(1 for c in b if c)
        if nb < na:
            a, b = b, a
        out = [0] * (prec + 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            lim = prec - i
            for j, bj in enumerate(b[: lim + 1]):
                if bj:
                    out[i + j] += ai * bj
        return QSeries(out, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            return self * (Fraction(1, 1) / other)
        if isinstance(other, QSeries):
            return self * other.invert()
        return NotImplemented

    def invert(self) -> "QSeries":
        """Multiplicative inverse; requires a unit constant term."""
        a = self.coeffs
        if a[0] == 0:
            raise ZeroConstantTermError("cannot invert a series with zero constant term")
        a0 = a[0]
        inv0 = a0 if a0 in (1, -1) else Fraction(1, 1) / a0
        out = [inv0] + [0] * self.prec
        for n in range(1, self.prec + 1):
            s = 0
            for k in range(1, n + 1):
                ak = a[k]
                if ak:
                    s += ak * out[n - k]
            if s:
                out[n] = -inv0 * s
        return QSeries(out, self.prec)

    def __pow__(self, e: int) -> "QSeries":
        if not isinstance(e, int):
            return NotImplemented
        if e == 0:
            return QSeries.one(self.prec)
        base = self.invert() if e < 0 else self
        e = abs(e)
        result = None
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- q operations ---------------------------------------------------

    def delq(self) -> "QSeries":
        """The operator q * d/dq: coefficient of q^n becomes n*a(n)."""
        return QSeries([n * c for n, c in enumerate(self.coeffs)], self.prec)

    def subst_qpow(self, m: int, prec: int | None = None) -> "QSeries":
        """Replace q by q^m.

        The result keeps the original truncation order by default; an
        explicit `prec` may request up to m*prec + m - 1 (every such
        coefficient is determined exactly by the input).
        """
        if m < 1:
            raise ValueError("substitution power must be >= 1")
        if m == 1:
            return self if prec is None else self.truncate(min(prec, self.prec))
        max_exact = m * self.prec + m - 1
        new_prec = self.prec if prec is None else min(prec, max_exact)
        out = [0] * (new_prec + 1)
        for n in range(0, new_prec // m + 1):
            out[m * n] = self.coeffs[n]
        return QSeries(out, new_prec)

    def shift(self, t: int) -> "QSeries":
        """Multiply by q^t (t >= 0); precision grows to prec + t."""
        if t < 0:
            raise ValueError("shift must be >= 0")
        if t == 0:
            return self
        return QSeries((0,) * t + self.coeffs, self.prec + t)

    def decimate(self, m: int) -> "QSeries":
        """Keep every m-th coefficient: b(n) = a(mn), prec = floor(prec/m)."""
        if m < 1:
            raise ValueError("decimation step must be >= 1")
        return QSeries(self.coeffs[::m], self.prec // m)

    def sift(self, m: int, r: int) -> "QSeries":
        """Zero all coefficients off the progression mn + r, exponents kept."""
        if not 0 <= r < m:
            raise ValueError("residue must satisfy 0 <= r < m")
        out = [c if n % m == r else 0 for n, c in enumerate(self.coeffs)]
        return QSeries(out, self.prec)

    # -- reduction and serialisation ------------------------------------

    def reduce_mod(self, m: int) -> "ZmSeries":
        if m < 2:
            raise ValueError("modulus must be >= 2")
        out = [0] * (self.prec + 1)
        for n, c in enumerate(self.coeffs):
            num = c.numerator if isinstance(c, Fraction) else c
            den = c.denominator if isinstance(c, Fraction) else 1
            if den == 1:
                out[n] = num % m
            else:
                try:
                    out[n] = num * pow(den, -1, m) % m
                except ValueError:
                    raise NonInvertibleDenominatorError(n, m) from None
        return ZmSeries(out, m, self.prec)

    def dumps(self) -> str:
        lines = [f"qseries v1 prec={self.prec}"]
        for n, c in enumerate(self.coeffs):
            num = c.numerator if isinstance(c, Fraction) else c
            den = c.denominator if isinstance(c, Fraction) else 1
            lines.append(f"{n} {num}/{den}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "QSeries":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = lines[0].split()
        if header[:2] != ["qseries", "v1"] or not header[2].startswith("prec="):
            raise ValueError("not a qseries v1 payload")
        prec = int(header[2][5:])
        coeffs = [0] * (prec + 1)
        seen = set()
        for ln in lines[1:]:
            idx, frac = ln.split()
            num, den = frac.split("/")
            n = int(idx)
            c = Fraction(int(num), int(den))
            coeffs[n] = int(c) if c.denominator == 1 else c
            seen.add(n)
        if seen != set(range(prec + 1)):
            raise ValueError("qseries payload must list every index 0..prec")
        return cls(coeffs, prec)


def _kronecker_mul(a: tuple, b: tuple, m: int, out_len: int) -> list:
    """Convolution of residue sequences via big-integer multiplication.

    Packs each sequence into one integer with fixed-width slots; slot
    width is chosen so no convolution coefficient can overflow, making
    the result identical to schoolbook convolution reduced mod m.
    """
    bound = min(len(a), len(b)) * (m - 1) * (m - 1)
    slot = max(1, (bound.bit_length() + 7) // 8)

    def pack(cs):
        buf = bytearray(len(cs) * slot)
        for i, c in enumerate(cs):
            if c:
                buf[i * slot : i * slot + slot] = c.to_bytes(slot, "little")
        return int.from_bytes(buf, "little")

    prod = pack(a) * pack(b)
    raw = prod.to_bytes((len(a) + len(b)) * slot, "little")
    out = [0] * out_len
    for n in range(out_len):
        chunk = raw[n * slot : (n + 1) * slot]
        out[n] = int.from_bytes(chunk, "little") % m
    return out


class ZmSeries:
    """Truncated power series over Z/mZ; residues stored in [0, m)."""

    __slots__ = ("coeffs", "modulus", "prec")

    def __init__(self, coeffs: Iterable[int], modulus: int, prec: int | None = None):
        if modulus < 2:
            raise ValueError("modulus must be >= 2")
        cs = [c % modulus for c in coeffs]
        if prec is None:
            prec = len(cs) - 1
        if prec < 0:
            raise ValueError("prec must be >= 0")
        if len(cs) < prec + 1:
            cs = cs + [0] * (prec + 1 - len(cs))
        elif len(cs) > prec + 1:
            cs = cs[: prec + 1]
        self.coeffs = tuple(cs)
        self.modulus = modulus
        self.prec = prec

    @classmethod
    def zero(cls, modulus: int, prec: int) -> "ZmSeries":
        return cls([0] * (prec + 1), modulus, prec)

    @classmethod
    def one(cls, modulus: int, prec: int) -> "ZmSeries":
        return cls([1] + [0] * prec, modulus, prec)

    def __getitem__(self, n: int) -> int:
        if not 0 <= n <= self.prec:
            raise IndexError(f"coefficient q^{n} beyond truncation order {self.prec}")
        return self.coeffs[n]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZmSeries):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.prec == other.prec
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.prec, self.coeffs))

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:8])
        tail = ", ..." if self.prec >= 8 else ""
        return f"ZmSeries([{head}{tail}], m={self.modulus}, prec={self.prec})"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _check_compatible(self, other: "ZmSeries"):
        if self.modulus != other.modulus:
            raise ValueError("mixed moduli")

    def __add__(self, other):
        if isinstance(other, int):
            cs = list(self.coeffs)
            cs[0] = (cs[0] + other) % self.modulus
            return ZmSeries(cs, self.modulus, self.prec)
        self._check_compatible(other)
        prec = min(self.prec, other.prec)
        m = self.modulus
        return ZmSeries(
            [(self.coeffs[i] + other.coeffs[i]) % m for i in range(prec + 1)], m, prec
        )

    __radd__ = __add__

    def __neg__(self):
        m = self.modulus
        return ZmSeries([(-c) % m for c in self.coeffs], m, self.prec)

    def __sub__(self, other):
        return self + (-other if not isinstance(other, int) else -other)

    def __mul__(self, other):
        m = self.modulus
        if isinstance(other, int):
            return ZmSeries([c * other % m for c in self.coeffs], m, self.prec)
        self._check_compatible(other)
        prec = min(self.prec, other.prec)
        out = _kronecker_mul(
            self.coeffs[: prec + 1], other.coeffs[: prec + 1], m, prec + 1
        )
        return ZmSeries(out, m, prec)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "ZmSeries":
        if e == 0:
            return ZmSeries.one(self.modulus, self.prec)
        base = self.invert() if e < 0 else self
        e = abs(e)
        result = None
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def invert(self) -> "ZmSeries":
        """Inverse series by Newton iteration x -> x(2 - ax).

        The inverse is unique once the constant term is a unit, so the
        result coincides with the direct back-substitution recurrence.
        """
        m = self.modulus
        a = self.coeffs
        try:
            inv0 = pow(a[0], -1, m)
        except ValueError:
            raise ZeroConstantTermError(
                f"constant term {a[0]} is not a unit mod {m}"
            ) from None
        n_target = self.prec + 1
        cur = [inv0]
        k = 1
        while k < n_target:
            k = min(2 * k, n_target)
            ak = a[:k]
            t = _kronecker_mul(tuple(ak), tuple(cur), m, k)
            t[0] = (2 - t[0]) % m
            for i in range(1, k):
                t[i] = (-t[i]) % m
            cur = _kronecker_mul(tuple(cur), tuple(t), m, k)
        return ZmSeries(cur, m, self.prec)

    def delq(self) -> "ZmSeries":
        m = self.modulus
        return ZmSeries([n * c % m for n, c in enumerate(self.coeffs)], m, self.prec)

    def subst_qpow(self, mm: int, prec: int | None = None) -> "ZmSeries":
        if mm < 1:
            raise ValueError("substitution power must be >= 1")
        if mm == 1:
            return self
        max_exact = mm * self.prec + mm - 1
        new_prec = self.prec if prec is None else min(prec, max_exact)
        out = [0] * (new_prec + 1)
        for n in range(0, new_prec // mm + 1):
            out[mm * n] = self.coeffs[n]
        return ZmSeries(out, self.modulus, new_prec)

    def shift(self, t: int) -> "ZmSeries":
        if t < 0:
            raise ValueError("shift must be >= 0")
        if t == 0:
            return self
        return ZmSeries((0,) * t + self.coeffs, self.modulus, self.prec + t)

    def decimate(self, m: int) -> "ZmSeries":
        if m < 1:
            raise ValueError("decimation step must be >= 1")
        return ZmSeries(self.coeffs[::m], self.modulus, self.prec // m)

    def sift(self, m: int, r: int) -> "ZmSeries":
        if not 0 <= r < m:
            raise ValueError("residue must satisfy 0 <= r < m")
        out = [c if n % m == r else 0 for n, c in enumerate(self.coeffs)]
        return ZmSeries(out, self.modulus, self.prec)

    def truncate(self, prec: int) -> "ZmSeries":
        if prec > self.prec:
            raise ValueError("cannot extend precision by truncation")
        if prec == self.prec:
            return self
        return ZmSeries(self.coeffs[: prec + 1], self.modulus, prec)

    def dumps(self) -> str:
        lines = [f"zmseries v1 m={self.modulus} prec={self.prec}"]
        for n, c in enumerate(self.coeffs):
            lines.append(f"{n} {c}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ZmSeries":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = lines[0].split()
        if header[:2] != ["zmseries", "v1"]:
            raise ValueError("not a zmseries v1 payload")
        modulus = int(header[2][2:])
        prec = int(header[3][5:])
        coeffs = [0] * (prec + 1)
        seen = set()
        for ln in lines[1:]:
            idx, val = ln.split()
            coeffs[int(idx)] = int(val)
            seen.add(int(idx))
        if seen != set(range(prec + 1)):
            raise ValueError("zmseries payload must list every index 0..prec")
        return cls(coeffs, modulus, prec)


def reduce_mod(a: QSeries, m: int) -> ZmSeries:
    """Coefficientwise reduction of an exact series modulo m."""
    return a.reduce_mod(m)
