"""Triple systems with collision-free middle elements.

A set of triples from [n] is *good* when (i) no two triples share both
their middle element and their minimum, nor both their middle and their
maximum, and (ii) it contains at most T = C(n,3)/(n-2) triples.  Grouping
a good system by middle element turns condition (i) into a partial
matching between the elements below and above each middle, which gives
exact counts and probabilities by elementary enumeration.

The rate function ``f_eval`` scores a middle-element profile; its
discrete maximum over all feasible profiles (``f_max``) tracks the
logarithmic probability that a random t-set of triples is good.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

from .census import Budget, BudgetExceeded


@dataclass(frozen=True)
class TripleSystem:
    n: int
    triples: frozenset[tuple[int, int, int]]

    @classmethod
    def of(cls, n: int, triples) -> "TripleSystem":
        norm = set()
        for t in triples:
            tt = tuple(sorted(t))
            if len(tt) != 3 or len(set(tt)) != 3:
                raise ValueError(f"not a triple: {t!r}")
            if tt[0] < 1 or tt[2] > n:
                raise ValueError(f"triple {t!r} outside [1..{n}]")
            norm.add(tt)
        return cls(n, frozenset(norm))

    @property
    def t(self) -> int:
        return len(self.triples)


@dataclass(frozen=True)
class MiddleProfile:
    """z[i-2] counts the triples whose middle element is i, for i in 2..n-1."""

    n: int
    z: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.z) != self.n - 2:
            raise ValueError(f"profile length {len(self.z)} != n-2 = {self.n - 2}")
        if any(zi < 0 for zi in self.z):
            raise ValueError("negative profile entry")

    @property
    def t(self) -> int:
        return sum(self.z)

    def in_feasible_region(self) -> bool:
        """Membership in the capped profile set: z_i <= min(i-1, n-i)."""
        return all(zi <= cap for zi, cap in zip(self.z, middle_caps(self.n)))


@dataclass(frozen=True)
class GoodSetBudget:
    """Size budget T = C(n,3)/(n-2) and the near-budget integer window
    [(1 - 4/ln n) T, T] used when summing over set sizes."""

    n: int
    T: Fraction
    window: tuple[int, int]

    @classmethod
    def for_n(cls, n: int) -> "GoodSetBudget":
        if n < 4:
            raise ValueError("need n >= 4")
        T = Fraction(math.comb(n, 3), n - 2)
        lo = max(0, math.ceil((1 - 4 / math.log(n)) * T))
        hi = math.floor(T)
        return cls(n, T, (lo, hi))


def size_budget(n: int) -> Fraction:
    return Fraction(math.comb(n, 3), n - 2)


@lru_cache(maxsize=None)
def middle_caps(n: int) -> tuple[int, ...]:
    return tuple(min(i - 1, n - i) for i in range(2, n))


def is_good(x: TripleSystem) -> bool:
    """Condition (i) via per-middle buckets, plus the size budget."""
    if x.t > size_budget(x.n):
        return False
    seen_lo: set[tuple[int, int]] = set()
    seen_hi: set[tuple[int, int]] = set()
    for a, b, c in x.triples:
        if (b, a) in seen_lo or (b, c) in seen_hi:
            return False
        seen_lo.add((b, a))
        seen_hi.add((b, c))
    return True


def middle_profile(x: TripleSystem) -> MiddleProfile:
    z = [0] * (x.n - 2)
    for _, b, _ in x.triples:
        z[b - 2] += 1
    return MiddleProfile(x.n, tuple(z))


# ---------------------------------------------------------------------------
# exact counting


def good_systems_with_profile(n: int, z: Sequence[int]) -> int:
    """Number of good systems with the given middle profile.

    The triples with middle i form a z_i-matching between the i-1 smaller
    and n-i larger elements: C(i-1, z_i) C(n-i, z_i) z_i! choices,
    independent across middles.
    """
    out = 1
    for idx, zi in enumerate(z):
        i = idx + 2
        out *= math.comb(i - 1, zi) * math.comb(n - i, zi) * math.factorial(zi)
    return out


def profiles(n: int, t: int) -> Iterator[tuple[int, ...]]:
    """Capped compositions: profiles with sum t and z_i <= min(i-1, n-i)."""
    caps = middle_caps(n)
    suffix = [0] * (len(caps) + 1)
    for i in range(len(caps) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + caps[i]
    cur: list[int] = []

    def rec(idx: int, rem: int) -> Iterator[tuple[int, ...]]:
        if idx == len(caps):
            if rem == 0:
                yield tuple(cur)
            return
        if rem > suffix[idx]:
            return
        for zi in range(min(caps[idx], rem) + 1):
            cur.append(zi)
            yield from rec(idx + 1, rem - zi)
            cur.pop()

    yield from rec(0, t)


def count_good_exact(n: int, budget: Budget | None = None) -> int:
    """Exhaustive count of good systems by direct backtracking.

    Visits every good system once (each node of the search is itself a
    good system), so the node budget caps the answer size.
    """
    b = budget or Budget()
    tmax = math.floor(size_budget(n))
    all_triples = sorted(combinations(range(1, n + 1), 3))
    count = 0

    def rec(start: int, depth: int, lo: set, hi: set) -> None:
        nonlocal count
        count += 1
        if count > b.max_nodes:
            raise BudgetExceeded("good-set budget exceeded", count, count, 0.0)
        if depth == tmax:
            return
        for j in range(start, len(all_triples)):
            a, bb, c = all_triples[j]
            if (bb, a) in lo or (bb, c) in hi:
                continue
            lo.add((bb, a))
            hi.add((bb, c))
            rec(j + 1, depth + 1, lo, hi)
            lo.remove((bb, a))
            hi.remove((bb, c))

    rec(0, 0, set(), set())
    return count


def count_good_by_profiles(n: int) -> int:
    """Same count through the matching-product formula; fast closed path."""
    tmax = math.floor(size_budget(n))
    return sum(
        good_systems_with_profile(n, z)
        for t in range(tmax + 1)
        for z in profiles(n, t)
    )


# ---------------------------------------------------------------------------
# probabilities


def hypergeom_pmf(n: int, t: int, z: MiddleProfile) -> Fraction:
    """P(profile of a uniform t-set of triples equals z): multivariate
    hypergeometric with category sizes k_i = (i-1)(n-i)."""
    if z.n != n:
        raise ValueError("profile is for a different ground set")
    if z.t != t:
        raise ValueError(f"profile sums to {z.t}, not t={t}")
    N = math.comb(n, 3)
    if t > N:
        raise ValueError(f"t={t} exceeds the number of triples C({n},3)={N}")
    num = 1
    for idx, zi in enumerate(z.z):
        i = idx + 2
        ki = (i - 1) * (n - i)
        if zi > ki:
            raise ValueError(f"z_{i}={zi} exceeds the category size {ki}")
        num *= math.comb(ki, zi)
    return Fraction(num, math.comb(N, t))


def falling(x: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= x - j
    return out


def cond_good_prob(n: int, z: MiddleProfile) -> Fraction:
    """Probability that independently drawn triples with profile z are
    collision-free in the middle sense.

    Model: for each middle i, draw z_i triples by choosing the smaller and
    larger element uniformly and independently (with replacement); the
    result is prod_i (i-1)_{z_i} (n-i)_{z_i} / ((i-1) (n-i))^{z_i}.
    Entries beyond min(i-1, n-i) simply give probability 0.

    Note this is the with-replacement model.  The conditional probability
    for a uniform *set* of distinct triples has falling factorials in the
    denominator as well; :func:`good_prob` uses that exact set model.
    """
    if z.n != n:
        raise ValueError("profile is for a different ground set")
    num = 1
    den = 1
    for idx, zi in enumerate(z.z):
        i = idx + 2
        num *= falling(i - 1, zi) * falling(n - i, zi)
        if num <= 0:
            return Fraction(0)
        den *= ((i - 1) * (n - i)) ** zi
    return Fraction(num, den)


def cond_good_prob_sets(n: int, z: MiddleProfile) -> Fraction:
    """Exact P(good | profile = z) for a uniform set of t distinct triples:
    the good systems with profile z over all systems with profile z."""
    if z.n != n:
        raise ValueError("profile is for a different ground set")
    num = good_systems_with_profile(n, z.z)
    den = 1
    for idx, zi in enumerate(z.z):
        i = idx + 2
        den *= math.comb((i - 1) * (n - i), zi)
    return Fraction(num, den)


@dataclass(frozen=True)
class GoodProbResult:
    n: int
    t: int
    method: str
    value: float
    exact: Fraction | None = None
    stderr: float | None = None
    samples: int | None = None
    seed: int | None = None


MC_CHUNK = 5000


def mc_chunk_successes(args: tuple) -> int:
    """Good-set successes in one seeded chunk of uniform t-samples."""
    n, t, seed, chunk_index, chunk_size = args
    rng = random.Random(f"{seed}:{chunk_index}")
    all_triples = sorted(combinations(range(1, n + 1), 3))
    N = len(all_triples)
    hits = 0
    for _ in range(chunk_size):
        lo: set[tuple[int, int]] = set()
        hi: set[tuple[int, int]] = set()
        ok = True
        for j in rng.sample(range(N), t):
            a, b, c = all_triples[j]
            if (b, a) in lo or (b, c) in hi:
                ok = False
                break
            lo.add((b, a))
            hi.add((b, c))
        hits += ok
    return hits


def mc_chunks(samples: int) -> list[int]:
    """Fixed chunk sizes, independent of worker count."""
    out = []
    while samples > 0:
        out.append(min(MC_CHUNK, samples))
        samples -= out[-1]
    return out


def good_prob(n: int, t: int, method: str = "exact", samples: int = 100_000,
              seed: int = 0, max_profiles: int = 5_000_000) -> GoodProbResult:
    """P(a uniform random t-set of triples from [n] is good).

    ``exact`` sums good-system counts over middle profiles with exact
    rational arithmetic; ``monte_carlo`` draws seeded samples without
    replacement and reports the binomial standard error.
    """
    N = math.comb(n, 3)
    if not 0 <= t <= N:
        raise ValueError(f"t={t} out of range 0..C({n},3)={N}")
    if method == "exact":
        if t > size_budget(n):
            return GoodProbResult(n, t, method, 0.0, exact=Fraction(0))
        good = 0
        seen = 0
        for z in profiles(n, t):
            seen += 1
            if seen > max_profiles:
                raise BudgetExceeded("profile budget exceeded", seen, seen, 0.0)
            good += good_systems_with_profile(n, z)
        exact = Fraction(good, math.comb(N, t))
        return GoodProbResult(n, t, method, float(exact), exact=exact)
    if method == "monte_carlo":
        if samples <= 0:
            raise ValueError("samples must be positive")
        hits = 0
        for idx, size in enumerate(mc_chunks(samples)):
            hits += mc_chunk_successes((n, t, seed, idx, size))
        p = hits / samples
        se = math.sqrt(p * (1 - p) / samples)
        return GoodProbResult(n, t, method, p, stderr=se, samples=samples, seed=seed)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# rate function


def _psi_table(n: int, t: int) -> list[list[float]]:
    """psi[idx][z] for middle i = idx+2, so that the profile score is
    -2 - (1/t) sum_i psi_i(z_i).

    psi_i(z) = (i-1) h(z/(i-1)) + (n-i) h(z/(n-i)) + z ln((z/t) / (k_i/N))
    with h(y) = (1-y) ln(1-y), h(1) = 0 and 0 ln 0 = 0.  The two h-terms
    are evaluated in sorted-argument order so mirror middles i and n+1-i
    produce bitwise identical rows, keeping ties exact.
    """
    N = math.comb(n, 3)
    caps = middle_caps(n)
    tab: list[list[float]] = []
    for idx in range(n - 2):
        i = idx + 2
        m1, m2 = sorted((i - 1, n - i))
        k = (i - 1) * (n - i)
        row = []
        for z in range(caps[idx] + 1):
            a = (m1 - z) * math.log((m1 - z) / m1) if z < m1 else 0.0
            bb = (m2 - z) * math.log((m2 - z) / m2) if z < m2 else 0.0
            c = z * math.log(z / t) - z * math.log(k / N) if z > 0 else 0.0
            row.append(a + bb + c)
        tab.append(row)
    return tab


def f_eval(n: int, t: int, z: MiddleProfile | Sequence[int]) -> float:
    """Rate-function value of a feasible profile with sum t >= 1."""
    prof = z if isinstance(z, MiddleProfile) else MiddleProfile(n, tuple(z))
    if prof.n != n:
        raise ValueError("profile is for a different ground set")
    if t < 1:
        raise ValueError("t must be >= 1")
    if prof.t != t:
        raise ValueError(f"profile sums to {prof.t}, not t={t}")
    if not prof.in_feasible_region():
        raise ValueError("profile exceeds the middle caps")
    tab = _psi_table(n, t)
    return -2.0 - sum(tab[i][prof.z[i]] for i in range(n - 2)) / t


def _is_discretely_convex(row: Sequence[float], tol: float = 1e-9) -> bool:
    return all(
        row[z + 1] - 2 * row[z] + row[z - 1] >= -tol
        for z in range(1, len(row) - 1)
    )


def f_max(n: int, t: int) -> tuple[MiddleProfile, float]:
    """Exact discrete maximiser of the rate function over feasible profiles.

    The score separates across middles with discretely convex summands, so
    allocating t units one by one to the smallest marginal cost is exact;
    convexity is verified numerically first, and any violation falls back
    to the dynamic program.  Marginal ties go to the lowest middle.
    """
    caps = middle_caps(n)
    if t < 1 or t > sum(caps):
        raise ValueError(f"t={t} outside 1..{sum(caps)}")
    tab = _psi_table(n, t)
    if not all(_is_discretely_convex(row) for row in tab):
        return f_max_dp(n, t)
    z = [0] * (n - 2)
    for _ in range(t):
        best = math.inf
        best_i = -1
        for i in range(n - 2):
            if z[i] < caps[i]:
                marg = tab[i][z[i] + 1] - tab[i][z[i]]
                if marg < best:
                    best = marg
                    best_i = i
        z[best_i] += 1
    value = -2.0 - sum(tab[i][z[i]] for i in range(n - 2)) / t
    return MiddleProfile(n, tuple(z)), value


def f_max_dp(n: int, t: int) -> tuple[MiddleProfile, float]:
    """Dynamic program over (middle, remaining units); independent of the
    greedy path and used as its oracle.  Reconstruction gives each middle,
    lowest first, the largest allocation consistent with optimality."""
    caps = middle_caps(n)
    if t < 1 or t > sum(caps):
        raise ValueError(f"t={t} outside 1..{sum(caps)}")
    tab = _psi_table(n, t)
    m = n - 2
    INF = math.inf
    best = [[INF] * (t + 1) for _ in range(m + 1)]
    best[m][0] = 0.0
    for i in range(m - 1, -1, -1):
        row = tab[i]
        for s in range(t + 1):
            acc = INF
            for zi in range(min(caps[i], s) + 1):
                v = row[zi] + best[i + 1][s - zi]
                if v < acc:
                    acc = v
            best[i][s] = acc
    z: list[int] = []
    s = t
    for i in range(m):
        target = best[i][s]
        slack = 1e-12 * max(1.0, abs(target))
        chosen = 0
        for zi in range(min(caps[i], s), -1, -1):
            if tab[i][zi] + best[i + 1][s - zi] <= target + slack:
                chosen = zi
                break
        z.append(chosen)
        s -= chosen
    value = -2.0 - sum(tab[i][z[i]] for i in range(m)) / t
    return MiddleProfile(n, tuple(z)), value
