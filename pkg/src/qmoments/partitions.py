"""Combinatorial ground truth for partition statistics.

Enumerates partitions of the four classes used by the verification
suites (unrestricted, distinct odd parts, smallest-part-even with
distinct odd parts, overpartitions), evaluates the statistics (rank,
crank, M2-rank, overpartition rank, residual crank), and provides two
accelerated counting layers that must agree with plain enumeration:

* ``rank_rows``          -- statistic-resolved counts per (m, n);
* ``rank_moment_series`` -- power sums sum_m m^k N(m, n) directly.

Both DPs iterate over the largest part l of a partition, maintaining a
running generating function B of the remaining smaller parts in which
every part contributes a factor z^{-1}; the statistic of a completed
partition is read off from l and the accumulated z-exponent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterator, Mapping

from .series import QSeries

CLASSES = ("all", "distinct-odd", "s2", "overpartition")
STAT_KINDS = ("rank", "crank", "m2rank", "overline-rank", "residual-crank-2")

_DP_KIND = {"rank": "rank", "m2rank": "m2rank", "overline-rank": "overline-rank"}


class UndefinedStatisticError(ValueError):
    """The requested statistic has no defined value for this partition."""


class DivisibilityError(ArithmeticError):
    """A weighted count that must be an exact integer is not."""


@dataclass(frozen=True)
class Partition:
    """Non-increasing parts; overline marks apply to first occurrences only,
    so they are recorded per part value."""

    parts: tuple[int, ...]
    overlined: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if any(p < 1 for p in self.parts):
            raise ValueError("parts must be positive")
        if any(self.parts[i] < self.parts[i + 1] for i in range(len(self.parts) - 1)):
            raise ValueError("parts must be non-increasing")
        if not self.overlined <= set(self.parts):
            raise ValueError("overline marks must name existing part values")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def largest(self) -> int:
        return self.parts[0] if self.parts else 0

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    def multiplicity(self, v: int) -> int:
        return self.parts.count(v)


def _raw_partitions(n: int, max_part: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _raw_partitions(n - first, first):
            yield (first,) + rest


def enumerate_partitions(n: int, klass: str = "all") -> Iterator[Partition]:
    """Each object of the class exactly once; n = 0 yields the empty one."""
    if klass not in CLASSES:
        raise ValueError(f"unknown partition class {klass!r}")
    if n < 0:
        raise ValueError("n must be >= 0")
    for parts in _raw_partitions(n, n if n else 1):
        if klass == "distinct-odd" or klass == "s2":
            odds = [p for p in parts if p % 2]
            if len(odds) != len(set(odds)):
                continue
            if klass == "s2" and (not parts or parts[-1] % 2):
                continue
            yield Partition(parts)
        elif klass == "overpartition":
            values = sorted(set(parts))
            for mask in range(1 << len(values)):
                marks = frozenset(v for i, v in enumerate(values) if mask >> i & 1)
                yield Partition(parts, marks)
        else:
            yield Partition(parts)


def _crank(parts: tuple[int, ...]) -> int:
    total = sum(parts)
    if total <= 1:
        raise UndefinedStatisticError("crank needs a partition of n >= 2")
    ones = parts.count(1)
    if ones == 0:
        return parts[0]
    return sum(1 for p in parts if p > ones) - ones


def statistic(p: Partition, kind: str) -> int:
    """Evaluate one partition statistic; raises UndefinedStatisticError
    where no convention-free value exists."""
    if kind == "rank" or kind == "overline-rank":
        return p.largest - p.num_parts
    if kind == "crank":
        return _crank(p.parts)
    if kind == "m2rank":
        return -(-p.largest // 2) - p.num_parts
    if kind == "residual-crank-2":
        halved = tuple(sorted((x // 2 for x in p.parts if x % 2 == 0), reverse=True))
        if sum(halved) <= 1:
            raise UndefinedStatisticError(
                "residual crank undefined when the halved even parts sum to <= 1"
            )
        return _crank(halved)
    raise ValueError(f"unknown statistic kind {kind!r}")


_STAT_CLASS = {
    "rank": "all",
    "crank": "all",
    "m2rank": "distinct-odd",
    "overline-rank": "overpartition",
    "residual-crank-2": "distinct-odd",
}


@dataclass(frozen=True)
class StatTable:
    """Counts of objects of size n by statistic value m.

    ``undefined`` counts the objects the statistic does not cover
    (only nonzero for the residual crank, whose boundary convention is
    fixed by the generating product rather than by enumeration).
    """

    kind: str
    n: int
    counts: Mapping[int, int]
    undefined: int = 0

    def moment(self, k: int) -> int:
        return sum(m**k * c for m, c in self.counts.items())

    def total(self) -> int:
        return sum(self.counts.values())

    def dump_lines(self) -> list[str]:
        return [f"{self.kind} {self.n} {m} {c}" for m, c in sorted(self.counts.items())]


def stat_table_enumerated(n: int, kind: str) -> StatTable:
    """Ground-truth table by explicit object-by-object enumeration."""
    if kind not in STAT_KINDS:
        raise ValueError(f"unknown statistic kind {kind!r}")
    counts: dict[int, int] = {}
    undefined = 0
    for p in enumerate_partitions(n, _STAT_CLASS[kind]):
        try:
            m = statistic(p, kind)
        except UndefinedStatisticError:
            undefined += 1
            continue
        counts[m] = counts.get(m, 0) + 1
    return StatTable(kind, n, counts, undefined)


def stat_table(n: int, kind: str) -> StatTable:
    """Statistic-resolved counts; DP-backed for the rank-type kinds,
    enumeration for the crank kinds."""
    if kind in _DP_KIND:
        rows = rank_rows(kind, n)
        return StatTable(kind, n, dict(rows[n]))
    return stat_table_enumerated(n, kind)


# -- row DP: statistic-resolved counts --------------------------------------


def _rows_div(rows: list[dict], zpow: int, qexp: int, prec: int):
    # rows /= (1 - z^zpow q^qexp): progressive, reads updated rows
    for n in range(qexp, prec + 1):
        src = rows[n - qexp]
        if not src:
            continue
        dst = rows[n]
        for m, c in list(src.items()):
            dst[m + zpow] = dst.get(m + zpow, 0) + c


def _rows_mul(rows: list[dict], zpow: int, qexp: int, prec: int):
    # rows *= (1 + z^zpow q^qexp): descending n reads untouched rows (qexp >= 1)
    for n in range(prec, qexp - 1, -1):
        src = rows[n - qexp]
        if not src:
            continue
        dst = rows[n]
        for m, c in src.items():
            dst[m + zpow] = dst.get(m + zpow, 0) + c


def _rows_shifted(rows: list[dict], zpow: int, qexp: int, prec: int, scale: int) -> list[dict]:
    out: list[dict] = [dict() for _ in range(prec + 1)]
    for n in range(qexp, prec + 1):
        for m, c in rows[n - qexp].items():
            out[n][m + zpow] = scale * c
    return out


def _rows_contrib(res: list[dict], rows: list[dict], zshift: int, qexp: int, prec: int, scale: int = 1):
    for n in range(qexp, prec + 1):
        src = rows[n - qexp]
        if not src:
            continue
        dst = res[n]
        for m, c in src.items():
            dst[m + zshift] = dst.get(m + zshift, 0) + scale * c


@lru_cache(maxsize=8)
def _rank_rows_bucket(kind: str, prec: int) -> tuple:
    B: list[dict] = [dict() for _ in range(prec + 1)]
    B[0][0] = 1
    res: list[dict] = [dict() for _ in range(prec + 1)]
    res[0][0] = 1
    if kind == "rank":
        for l in range(1, prec + 1):
            _rows_div(B, -1, l, prec)
            _rows_contrib(res, B, l - 1, l, prec)
    elif kind == "m2rank":
        for l in range(1, prec + 1):
            if l % 2 == 0:
                _rows_div(B, -1, l, prec)
                _rows_contrib(res, B, l // 2 - 1, l, prec)
            else:
                _rows_contrib(res, B, (l - 1) // 2, l, prec)
                _rows_mul(B, -1, l, prec)
    elif kind == "overline-rank":
        for l in range(1, prec + 1):
            # largest part l: 2 z^{-1} q^l / (1 - z^{-1} q^l) applied to B
            C = _rows_shifted(B, -1, l, prec, 2)
            _rows_div(C, -1, l, prec)
            _rows_contrib(res, C, l, 0, prec)
            _rows_mul(B, -1, l, prec)
            _rows_div(B, -1, l, prec)
    else:
        raise ValueError(f"no row DP for kind {kind!r}")
    for row in res:
        for m in [m for m, c in row.items() if c == 0]:
            del row[m]
    return tuple(res)


def _bucket(prec: int, floor: int = 128) -> int:
    b = floor
    while b < prec:
        b *= 2
    return b


def rank_rows(kind: str, prec: int) -> tuple:
    """Rows n = 0..prec of dicts m -> count for a rank-type statistic.

    Returned rows are shared cached objects; callers must not mutate.
    """
    if kind not in _DP_KIND:
        raise ValueError(f"no row DP for kind {kind!r}")
    rows = _rank_rows_bucket(kind, _bucket(prec))
    return rows[: prec + 1]


# -- power-sum DP: sum_m m^j N(m, n) directly --------------------------------


def _ps_transform_matrix(K: int, zpow: int) -> list[list[int]]:
    # entry [j][i] = C(j, i) zpow^(j-i); power sums transform linearly
    # under a z-exponent shift
    return [[comb(j, i) * zpow ** (j - i) for i in range(j + 1)] for j in range(K + 1)]


def _ps_div(S: list[list[int]], T: list[list[int]], qexp: int, prec: int, K: int):
    # S /= (1 - z^zpow q^qexp) with transform T; progressive in n
    for n in range(qexp, prec + 1):
        base = n - qexp
        for j in range(K, -1, -1):
            row = T[j]
            acc = 0
            for i in range(j + 1):
                s = S[i][base]
                if s:
                    acc += row[i] * s
            if acc:
                S[j][n] += acc


def _ps_mul(S: list[list[int]], T: list[list[int]], qexp: int, prec: int, K: int):
    # S *= (1 + z^zpow q^qexp): descending n reads untouched rows
    for n in range(prec, qexp - 1, -1):
        base = n - qexp
        for j in range(K, -1, -1):
            row = T[j]
            acc = 0
            for i in range(j + 1):
                s = S[i][base]
                if s:
                    acc += row[i] * s
            if acc:
                S[j][n] += acc


def _ps_contrib(res, S, zshift: int, qexp: int, prec: int, K: int, scale: int = 1):
    P = _ps_transform_matrix(K, zshift)
    for n in range(qexp, prec + 1):
        base = n - qexp
        for j in range(K + 1):
            row = P[j]
            acc = 0
            for i in range(j + 1):
                s = S[i][base]
                if s:
                    acc += row[i] * s
            if acc:
                res[j][n] += scale * acc


def _ps_scaled_monomial(S, zpow: int, qexp: int, prec: int, K: int, scale: int):
    T = _ps_transform_matrix(K, zpow)
    out = [[0] * (prec + 1) for _ in range(K + 1)]
    for n in range(qexp, prec + 1):
        base = n - qexp
        for j in range(K + 1):
            row = T[j]
            acc = 0
            for i in range(j + 1):
                s = S[i][base]
                if s:
                    acc += row[i] * s
            if acc:
                out[j][n] = scale * acc
    return out


@lru_cache(maxsize=12)
def _moment_dp_bucket(kind: str, K: int, prec: int) -> tuple:
    Tm1 = _ps_transform_matrix(K, -1)
    B = [[0] * (prec + 1) for _ in range(K + 1)]
    B[0][0] = 1
    res = [[0] * (prec + 1) for _ in range(K + 1)]
    res[0][0] = 1
    if kind == "rank":
        for l in range(1, prec + 1):
            _ps_div(B, Tm1, l, prec, K)
            _ps_contrib(res, B, l - 1, l, prec, K)
    elif kind == "m2rank":
        for l in range(1, prec + 1):
            if l % 2 == 0:
                _ps_div(B, Tm1, l, prec, K)
                _ps_contrib(res, B, l // 2 - 1, l, prec, K)
            else:
                _ps_contrib(res, B, (l - 1) // 2, l, prec, K)
                _ps_mul(B, Tm1, l, prec, K)
    elif kind == "overline-rank":
        for l in range(1, prec + 1):
            C = _ps_scaled_monomial(B, -1, l, prec, K, 2)
            _ps_div(C, Tm1, l, prec, K)
            _ps_contrib(res, C, l, 0, prec, K)
            _ps_mul(B, Tm1, l, prec, K)
            _ps_div(B, Tm1, l, prec, K)
    else:
        raise ValueError(f"no moment DP for kind {kind!r}")
    return tuple(tuple(r) for r in res)


def rank_moment_series(kind: str, k: int, prec: int) -> QSeries:
    """QSeries of sum_m m^k N(m, n) over n for a rank-type statistic."""
    if kind not in _DP_KIND:
        raise ValueError(f"no moment DP for kind {kind!r}")
    if k < 0:
        raise ValueError("moment order must be >= 0")
    K = 2 if k <= 2 else (4 if k <= 4 else ((k + 1) // 2) * 2)
    table = _moment_dp_bucket(kind, K, _bucket(prec))
    return QSeries(table[k][: prec + 1], prec)


# -- smallest-parts counts ----------------------------------------------------


def spt_classic(n: int) -> int:
    """Total multiplicity of the smallest part over all partitions of n."""
    if n < 1:
        return 0
    return sum(p.multiplicity(p.parts[-1]) for p in enumerate_partitions(n, "all"))


def mspt(n: int) -> int:
    """Total multiplicity of the smallest part over partitions of n with
    even smallest part and distinct odd parts."""
    if n < 1:
        return 0
    return sum(p.multiplicity(p.parts[-1]) for p in enumerate_partitions(n, "s2"))


def mspt2(n: int) -> int:
    """Second-order smallest-parts count over the same class.

    Weights each partition by C(f1+1, 3) + f1 * sum_{m>=2} C(fm+1, 2)
    where f_j is the frequency of the j-th smallest distinct even part
    value.
    """
    if n < 1:
        return 0
    total = 0
    for p in enumerate_partitions(n, "s2"):
        evens = sorted({x for x in p.parts if x % 2 == 0})
        freqs = [p.multiplicity(v) for v in evens]
        f1 = freqs[0]
        total += comb(f1 + 1, 3) + f1 * sum(comb(f + 1, 2) for f in freqs[1:])
    return total


def g_poly(k: int, x: int) -> int:
    """g_k(x) = prod_{j=0}^{k-1} (x^2 - j^2)."""
    out = 1
    for j in range(k):
        out *= x * x - j * j
    return out


def gk_moment(counts: Mapping[int, int], k: int) -> int:
    """(1/(2k)!) sum_m g_k(m) counts(m); the division must be exact."""
    from math import factorial

    raw = sum(g_poly(k, m) * c for m, c in counts.items())
    denom = factorial(2 * k)
    if raw % denom:
        raise DivisibilityError(f"(2k)! = {denom} does not divide weighted sum {raw}")
    return raw // denom
