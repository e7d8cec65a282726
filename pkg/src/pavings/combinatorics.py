"""Subsets of [n] as bit masks, colex ranking, shadows, and classical
factorial/binomial estimates with exact comparison helpers.

Ground sets are always [n] = {1, ..., n} with the natural order.  Subsets
are stored as integer bit masks (bit i-1 set means element i is present),
which keeps intersection and containment tests O(1) for n <= 128.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

MAX_GROUND_SET = 128


def mask_of(elements: Iterable[int]) -> int:
    """Bit mask of a collection of 1-based elements."""
    m = 0
    for e in elements:
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    """Sorted 1-based elements of a bit mask."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


@dataclass(frozen=True)
class Subset:
    """An r-subset of [n].

    Invariants: 1 <= elements <= n, strictly increasing; the colex rank
    round-trips through :func:`rank_subset` / :func:`unrank_subset`.
    """

    n: int
    mask: int

    def __post_init__(self) -> None:
        if not 0 < self.n <= MAX_GROUND_SET:
            raise ValueError(f"ground set size {self.n} out of range 1..{MAX_GROUND_SET}")
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError("subset not contained in the ground set")

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[int]) -> "Subset":
        elems = tuple(elements)
        if len(set(elems)) != len(elems):
            raise ValueError(f"repeated elements in {elems!r}")
        return cls(n, mask_of(elems))

    @property
    def elements(self) -> tuple[int, ...]:
        return elements_of(self.mask)

    @property
    def cardinality(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, e: int) -> bool:
        return bool(self.mask >> (e - 1) & 1)

    def __le__(self, other: "Subset") -> bool:
        return self.mask & ~other.mask == 0


def rank_subset(s: Subset) -> int:
    """Colexicographic rank of ``s`` among all subsets of its cardinality."""
    return sum(math.comb(e - 1, j + 1) for j, e in enumerate(s.elements))


def unrank_subset(n: int, r: int, idx: int) -> Subset:
    """Inverse of :func:`rank_subset`: the idx-th r-subset of [n] in colex order."""
    if not 0 <= r <= n:
        raise ValueError(f"invalid cardinality r={r} for n={n}")
    if not 0 <= idx < math.comb(n, r):
        raise ValueError(f"rank {idx} out of range for C({n},{r})")
    elems = [0] * r
    k = r
    c = n
    while k > 0:
        c -= 1
        offset = math.comb(c, k)
        if idx >= offset:
            idx -= offset
            k -= 1
            elems[k] = c + 1
    return Subset(n, mask_of(elems))


def shadow(family: Iterable[Subset], s: int) -> set[Subset]:
    """All s-subsets contained in some member of ``family``."""
    out: set[Subset] = set()
    for member in family:
        if member.cardinality < s:
            raise ValueError(f"family member of size {member.cardinality} smaller than s={s}")
        for combo in combinations(member.elements, s):
            out.add(Subset(member.n, mask_of(combo)))
    return out


def mask_shadow(mask: int, s: int) -> Iterator[int]:
    """The s-subsets of a mask, as masks (internal fast path)."""
    for combo in combinations(elements_of(mask), s):
        yield mask_of(combo)


def stirling_bounds(k: int) -> tuple[float, float]:
    """Two-sided factorial estimate: sqrt(2 pi k)(k/e)^k <= k! <= e sqrt(k)(k/e)^k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    core = (k / math.e) ** k
    return math.sqrt(2 * math.pi * k) * core, math.e * math.sqrt(k) * core


def binom_sum_upper(n: int, m: int) -> float:
    """Upper bound (e n / m)^m on sum_{k=0}^{m} C(n, k).

    The sum index runs over the binomial's lower argument; see the module
    docs for the reading of the classical display this implements.
    """
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    return (math.e * n / m) ** m


def binom_lower(n: int, k: int) -> tuple[float, float]:
    """Lower bound on C(n, k) of the form (e^{1-eps} n / k)^k.

    Returns (eps, bound) where
    eps = (1/k) ln( e sqrt(k) / prod_{i<k} (1 - i/n) ),
    so the bound is exactly the Stirling-based estimate
    C(n,k) >= (en/k)^k * prod(1 - i/n) / (e sqrt(k)).
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    log_prod = sum(math.log1p(-i / n) for i in range(k))
    eps = (1.0 + 0.5 * math.log(k) - log_prod) / k
    bound = (math.exp(1.0 - eps) * n / k) ** k
    return eps, bound


# Outward-rounding slack for comparing a float bound against an exact
# integer/rational quantity: a handful of ulps on the float side.
_REL_SLACK = 1e-12


def float_leq(lhs: float, rhs: float, rel: float = _REL_SLACK) -> bool:
    """lhs <= rhs, giving lhs the benefit of float rounding error."""
    return lhs <= rhs + rel * max(1.0, abs(lhs), abs(rhs))
