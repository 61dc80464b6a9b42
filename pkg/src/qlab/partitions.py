"""Integer partitions and their statistics.

Partition enumeration, the Andrews-Garvan crank, the partition Moebius
function, subpartition sums (the weights whose q-brackets produce the
reciprocal triple product), and exhaustive unimodal-sequence counting used
as the oracle for the rank generating functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

from .algebra import LaurentPoly
from .errors import InexactDivisionError


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.parts):
            raise ValueError("parts must be positive")
        if any(self.parts[i] < self.parts[i + 1] for i in range(len(self.parts) - 1)):
            raise ValueError("parts must be weakly decreasing")

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def is_empty(self) -> bool:
        return not self.parts

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.parts:
            out[p] = out.get(p, 0) + 1
        return out

    def __repr__(self):
        return f"Partition{self.parts}"


EMPTY = Partition(())


def partitions_of(n: int) -> list[Partition]:
    """All partitions of n, each exactly once; n=0 yields the empty partition."""
    if n < 0:
        raise ValueError("cannot partition a negative integer")
    out: list[Partition] = []

    def descend(remaining: int, cap: int, acc: list[int]):
        if remaining == 0:
            out.append(Partition(tuple(acc)))
            return
        for part in range(min(cap, remaining), 0, -1):
            acc.append(part)
            descend(remaining - part, part, acc)
            acc.pop()

    descend(n, n, [])
    return out


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) via Euler's pentagonal-number recurrence (independent of the enumerator)."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > n and g2 > n:
            break
        sign = -1 if k % 2 == 0 else 1
        if g1 <= n:
            total += sign * partition_count(n - g1)
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def crank(lam: Partition) -> int:
    """Andrews-Garvan crank: the largest part when there are no 1's, else
    #{parts larger than m1} - m1, where m1 is the multiplicity of 1."""
    if lam.is_empty():
        raise ValueError("crank of the empty partition is undefined")
    m1 = sum(1 for p in lam.parts if p == 1)
    if m1 == 0:
        return lam.parts[0]
    return sum(1 for p in lam.parts if p > m1) - m1


def crank_weight(lam: Partition) -> LaurentPoly:
    """z-weight of a partition by crank, in the crank generating function
    convention: summed over all partitions of n this equals the q^n
    coefficient of C(z;q) for every n.

    Identical to z^crank except at the two classical boundary cases: the
    empty partition weighs z^0, and the single partition of 1 weighs
    z - 1 + z^-1 (the n=1 anomaly of the crank generating function).
    """
    if lam.is_empty():
        return LaurentPoly.one()
    if lam.parts == (1,):
        return LaurentPoly({1: 1, 0: -1, -1: 1})
    return LaurentPoly.z(crank(lam))


def subpartitions(lam: Partition) -> list[Partition]:
    """All sub-multisets of the parts, from empty to the partition itself."""
    items = sorted(lam.multiplicities().items(), reverse=True)
    out: list[list[int]] = [[]]
    for part, mult in items:
        out = [acc + [part] * k for acc in out for k in range(mult + 1)]
    return [Partition(tuple(sorted(acc, reverse=True))) for acc in out]


def delete_subpartition(lam: Partition, sub: Partition) -> Partition:
    """The partition lam/sub, deleting sub's parts; sub must divide lam."""
    remaining = lam.multiplicities()
    for p, k in sub.multiplicities().items():
        if remaining.get(p, 0) < k:
            raise ValueError(f"{sub!r} is not a subpartition of {lam!r}")
        remaining[p] -= k
    parts: list[int] = []
    for p, k in remaining.items():
        parts.extend([p] * k)
    return Partition(tuple(sorted(parts, reverse=True)))


def partition_mobius(lam: Partition) -> int:
    """0 if any part repeats, else (-1)^length; mu(empty) = 1."""
    mults = lam.multiplicities()
    if any(k > 1 for k in mults.values()):
        return 0
    return -1 if lam.length % 2 else 1


def jz_weight(lam: Partition) -> LaurentPoly:
    """(1-z) * j_z(lam): the double subpartition sum of crank weights.

    The q-bracket coefficients j_z all carry a simple pole at z=1, so the
    cleared value (a genuine Laurent polynomial) is returned; summed over
    lam |- n it equals the q^n coefficient of the pole-cleared reciprocal
    triple product, and its q-bracket is the cleared <j_z>_q.
    """
    total = LaurentPoly.zero()
    for delta in subpartitions(lam):
        for eps in subpartitions(delta):
            total = total + crank_weight(eps)
    return total


def cn_coefficient(n: int) -> LaurentPoly:
    """(1-z) * c_n(z): the quadruple nested subpartition sum with Moebius
    signs, i.e. the q^n coefficient of the pole-cleared q-bracket of j_z."""
    if n < 1:
        raise ValueError("defined for n >= 1")
    total = LaurentPoly.zero()
    for lam in partitions_of(n):
        for delta in subpartitions(lam):
            mu = partition_mobius(delete_subpartition(lam, delta))
            if mu == 0:
                continue
            inner = LaurentPoly.zero()
            for eps in subpartitions(delta):
                for phi in subpartitions(eps):
                    inner = inner + crank_weight(phi)
            total = total + (inner if mu == 1 else -inner)
    return total


def crank_sum(n: int) -> LaurentPoly:
    """Sum of z^crank over all partitions of n (literal Definition-1 crank)."""
    total = LaurentPoly.zero()
    for lam in partitions_of(n):
        total = total + LaurentPoly.z(crank(lam))
    return total


# ---------------------------------------------------------------------------
# Unimodal sequence enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnimodalCountTable:
    """Counts of (strongly) unimodal sequences with a k-fold peak, by
    (rank, weight) for weight <= max_weight."""

    max_weight: int
    fold: int
    strong: bool
    counts: Mapping[tuple[int, int], int]

    def count(self, rank: int, weight: int) -> int:
        return self.counts.get((rank, weight), 0)

    def to_json_dict(self) -> dict:
        items = [
            {"rank": m, "weight": n, "count": c}
            for (m, n), c in sorted(self.counts.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        ]
        return {
            "strong": self.strong,
            "k": self.fold,
            "max_weight": self.max_weight,
            "counts": items,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, doc: dict) -> "UnimodalCountTable":
        counts = {(e["rank"], e["weight"]): e["count"] for e in doc["counts"]}
        return cls(doc["max_weight"], doc["k"], doc["strong"], counts)


def _side_counts(max_weight: int, cap: int, distinct: bool) -> dict[tuple[int, int], int]:
    """Number of partitions by (length, weight) with parts <= cap,
    optionally with distinct parts.  These are the one-sided generating
    function coefficients of 1/(zq;q)_cap resp. (-zq;q)_cap."""
    counts: dict[tuple[int, int], int] = {(0, 0): 1}
    for part in range(1, cap + 1):
        new = dict(counts)
        if distinct:
            for (r, w), c in counts.items():
                if w + part <= max_weight:
                    key = (r + 1, w + part)
                    new[key] = new.get(key, 0) + c
        else:
            for (r, w), c in sorted(counts.items(), key=lambda kv: kv[0][1]):
                copies = 1
                while w + copies * part <= max_weight:
                    key = (r + copies, w + copies * part)
                    new[key] = new.get(key, 0) + counts[(r, w)]
                    copies += 1
        counts = new
    return counts


def unimodal_counts(max_weight: int, fold: int, strong: bool) -> UnimodalCountTable:
    """Exhaustive (rank, weight) counts of unimodal sequences with a k-fold
    peak, by enumerating the peak value and the two independent sides.

    A sequence is a nondecreasing run a_1..a_r, then k copies of the peak c,
    then a nonincreasing run b_1..b_s, all parts positive; rank = s - r,
    weight = total sum.  Weak sides allow parts up to and including c;
    strong sides are strictly increasing/decreasing with parts below c and
    the k peak copies equal.
    """
    if max_weight < 0:
        raise ValueError("max_weight must be non-negative")
    if fold < 1:
        raise ValueError("fold must be >= 1")
    counts: dict[tuple[int, int], int] = {}
    for peak in range(1, max_weight // fold + 1):
        budget = max_weight - fold * peak
        cap = peak - 1 if strong else peak
        side = _side_counts(budget, cap, distinct=strong)
        items = sorted(side.items(), key=lambda kv: kv[0][1])
        for (r, w1), c1 in items:
            for (s, w2), c2 in items:
                w = fold * peak + w1 + w2
                if w > max_weight:
                    continue
                key = (s - r, w)
                counts[key] = counts.get(key, 0) + c1 * c2
    return UnimodalCountTable(max_weight, fold, strong, counts)


def naive_unimodal_counts(max_weight: int, fold: int, strong: bool) -> UnimodalCountTable:
    """Fully naive oracle: enumerate every composition (ordered tuple of
    positive integers) of weight <= max_weight and every marked k-fold peak
    position within it.  Exponential; validates the structured enumerator.
    """
    counts: dict[tuple[int, int], int] = {}

    def compositions(total: int) -> Iterator[tuple[int, ...]]:
        yield ()
        for first in range(1, total + 1):
            for rest in compositions(total - first):
                yield (first,) + rest

    for n in range(1, max_weight + 1):
        for seq in compositions(n):
            if sum(seq) != n:
                continue
            length = len(seq)
            for start in range(0, length - fold + 1):
                peak_run = seq[start : start + fold]
                c = peak_run[0]
                if any(x != c for x in peak_run):
                    continue
                left = seq[: start]
                right = seq[start + fold :]
                if strong:
                    if any(left[i] >= left[i + 1] for i in range(len(left) - 1)):
                        continue
                    if any(right[i] <= right[i + 1] for i in range(len(right) - 1)):
                        continue
                    if left and left[-1] >= c:
                        continue
                    if right and right[0] >= c:
                        continue
                else:
                    if any(left[i] > left[i + 1] for i in range(len(left) - 1)):
                        continue
                    if any(right[i] < right[i + 1] for i in range(len(right) - 1)):
                        continue
                    if left and left[-1] > c:
                        continue
                    if right and right[0] > c:
                        continue
                key = (len(right) - len(left), n)
                counts[key] = counts.get(key, 0) + 1
    return UnimodalCountTable(max_weight, fold, strong, counts)
