"""Exact enumeration of paving matroids via their hyperplane families.

A rank-r paving matroid on [n] is identified with its d-partition
(d = r-1): a family of proper blocks, each of size >= d, covering every
d-subset exactly once.  Only the "long" blocks (size >= r) carry
information; blocks of size d are forced.  The enumerator walks a
canonical decision tree over the d-subsets in lexicographic order:
the least d-subset not yet covered is either declared trivial (it is its
own block) or assigned to one of the admissible long blocks containing
it.  Every valid family is reached by exactly one decision sequence, so
the census is duplicate-free and its order is deterministic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

from .combinatorics import elements_of, mask_of

DEFAULT_MAX_NODES = 50_000_000
DEFAULT_MAX_SECONDS = 600.0


class CensusError(Exception):
    pass


class InvariantViolation(CensusError):
    """A structure failed validation that the engine guarantees."""


class BudgetExceeded(CensusError):
    """Search aborted by a resource cap; carries partial progress."""

    def __init__(self, message: str, nodes: int, partial_count: int, elapsed: float):
        super().__init__(message)
        self.nodes = nodes
        self.partial_count = partial_count
        self.elapsed = elapsed


@dataclass(frozen=True)
class Budget:
    max_nodes: int = DEFAULT_MAX_NODES
    max_seconds: float = DEFAULT_MAX_SECONDS


@dataclass(frozen=True)
class DPartition:
    """Hyperplane family of a rank-(d+1) paving matroid on [n].

    ``blocks`` holds one bit mask per hyperplane.  Blocks are proper
    subsets of [n] of size >= d, every d-subset of [n] lies in exactly
    one block, and there are at least two blocks.
    """

    n: int
    d: int
    blocks: frozenset[int]

    @property
    def r(self) -> int:
        return self.d + 1

    @classmethod
    def from_blocks(cls, n: int, d: int, blocks: Sequence[Sequence[int]]) -> "DPartition":
        return cls(n, d, frozenset(mask_of(b) for b in blocks))

    @classmethod
    def from_long_blocks(cls, n: int, r: int, long_masks: Sequence[int]) -> "DPartition":
        """Complete a family of long blocks with the uncovered (r-1)-sets."""
        subs, _, _ = _subset_tables(n, r - 1)
        covered = 0
        for bm in long_masks:
            covered |= _shadow_index_mask(n, r - 1, bm)
        blocks = set(long_masks)
        for i, sm in enumerate(subs):
            if not covered >> i & 1:
                blocks.add(sm)
        return cls(n, r - 1, frozenset(blocks))

    @property
    def block_tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(elements_of(b) for b in self.blocks))

    @property
    def long_blocks(self) -> tuple[int, ...]:
        """Masks of the dependent hyperplanes (size >= r), sorted by elements."""
        longs = [b for b in self.blocks if b.bit_count() >= self.r]
        return tuple(sorted(longs, key=elements_of))

    @property
    def is_sparse(self) -> bool:
        return all(b.bit_count() <= self.r for b in self.blocks)

    def validate(self) -> None:
        """Raise InvariantViolation unless this is a valid d-partition."""
        n, d = self.n, self.d
        full = (1 << n) - 1
        if len(self.blocks) < 2:
            raise InvariantViolation("fewer than 2 blocks")
        for b in self.blocks:
            if b.bit_count() < d:
                raise InvariantViolation(f"block {elements_of(b)} smaller than d={d}")
            if b == full:
                raise InvariantViolation("block equals the whole ground set")
            if b & ~full:
                raise InvariantViolation("block leaves the ground set")
        blocks = list(self.blocks)
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                if (blocks[i] & blocks[j]).bit_count() >= d:
                    raise InvariantViolation(
                        f"blocks {elements_of(blocks[i])} and {elements_of(blocks[j])} "
                        f"share {d} or more elements"
                    )
        # pairwise intersections < d already imply "at most one"; check "at least one"
        for combo in combinations(range(1, n + 1), d):
            cm = mask_of(combo)
            if not any(cm & ~b == 0 for b in blocks):
                raise InvariantViolation(f"{combo} not covered by any block")


@dataclass(frozen=True)
class HyperplaneProfile:
    """Block-size histogram: h[k] dependent hyperplanes of size r+k, plus
    the n_small blocks of size r-1."""

    n: int
    r: int
    h: tuple[int, ...]
    n_small: int


def hyperplane_profile(m: DPartition) -> HyperplaneProfile:
    n, r = m.n, m.r
    sizes = [b.bit_count() for b in m.blocks]
    n_small = sum(1 for s in sizes if s == r - 1)
    kmax = max((s - r for s in sizes if s >= r), default=-1)
    h = [0] * (kmax + 1)
    for s in sizes:
        if s >= r:
            h[s - r] += 1
    total = sum(hk * math.comb(r + k, r - 1) for k, hk in enumerate(h)) + n_small
    if total != math.comb(n, r - 1):
        raise InvariantViolation("profile does not cover every (r-1)-set exactly once")
    return HyperplaneProfile(n, r, tuple(h), n_small)


# ---------------------------------------------------------------------------
# candidate tables


@lru_cache(maxsize=None)
def _subset_tables(n: int, size: int):
    """(masks in lex order of element tuples, mask -> index, count)."""
    subs = [mask_of(c) for c in combinations(range(1, n + 1), size)]
    index = {m: i for i, m in enumerate(subs)}
    return subs, index, len(subs)


def _shadow_index_mask(n: int, size: int, block_mask: int) -> int:
    _, index, _ = _subset_tables(n, size)
    out = 0
    for combo in combinations(elements_of(block_mask), size):
        out |= 1 << index[mask_of(combo)]
    return out


@lru_cache(maxsize=None)
def _candidate_tables(n: int, r: int, sizes: tuple[int, ...]):
    """Per (r-1)-set index: [(block_mask, shadow_index_mask), ...] for every
    proper block of an allowed size containing that (r-1)-set."""
    subs, _, nsets = _subset_tables(n, r - 1)
    cand: list[list[tuple[int, int]]] = [[] for _ in range(nsets)]
    for a_idx, am in enumerate(subs):
        rest = [e for e in range(1, n + 1) if not am >> (e - 1) & 1]
        for size in sizes:
            extra = size - (r - 1)
            if extra < 1 or size >= n:
                continue
            for add in combinations(rest, extra):
                bm = am | mask_of(add)
                cand[a_idx].append((bm, _shadow_index_mask(n, r - 1, bm)))
    return cand, nsets


def _allowed_sizes(n: int, r: int, k: int | None) -> tuple[int, ...]:
    if k is None:
        return tuple(range(r, n))
    return (r + k,) if r + k < n else ()


def _check_params(n: int, r: int) -> None:
    if r < 3:
        raise ValueError(f"rank r={r} below 3")
    if r > n:
        raise ValueError(f"rank r={r} exceeds ground set size n={n}")
    if math.comb(n, r - 1) > 512:
        raise ValueError(f"C({n},{r - 1}) d-subsets exceed the engine limit of 512")


# ---------------------------------------------------------------------------
# search


class _Ticker:
    """Node counter with budget enforcement."""

    __slots__ = ("nodes", "max_nodes", "deadline", "t0", "leaves")

    def __init__(self, budget: Budget | None):
        b = budget or Budget()
        self.nodes = 0
        self.leaves = 0
        self.max_nodes = b.max_nodes
        self.t0 = time.monotonic()
        self.deadline = self.t0 + b.max_seconds

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExceeded(
                f"node budget {self.max_nodes} exceeded",
                self.nodes, self.leaves, time.monotonic() - self.t0,
            )
        if self.nodes % 4096 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded(
                "time budget exceeded",
                self.nodes, self.leaves, time.monotonic() - self.t0,
            )

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.t0


def _root_branches(cand, full: int) -> list[tuple[int, int | None]]:
    """Decisions available for the lex-least d-subset at the root."""
    if full == 0:
        return []
    branches: list[tuple[int, int | None]] = [(1, None)]
    for bm, sh in cand[0]:
        branches.append((sh, bm))
    return branches


def _count_subtree(cand, full: int, decided: int, ticker: _Ticker,
                   shadow_tally: dict[int, int] | None = None,
                   shadow_mask: int = 0) -> int:
    """Count leaves below a node; optionally tally long-block shadow sizes."""
    ticker.tick()
    if decided == full:
        ticker.leaves += 1
        if shadow_tally is not None:
            a = shadow_mask.bit_count()
            shadow_tally[a] = shadow_tally.get(a, 0) + 1
        return 1
    low = (~decided) & full
    a_idx = (low & -low).bit_length() - 1
    total = _count_subtree(cand, full, decided | (1 << a_idx), ticker,
                           shadow_tally, shadow_mask)
    for bm, sh in cand[a_idx]:
        if sh & decided == 0:
            total += _count_subtree(cand, full, decided | sh, ticker,
                                    shadow_tally, shadow_mask | sh)
    return total


def _iter_leaves(cand, full: int, ticker: _Ticker) -> Iterator[tuple[int, ...]]:
    """Yield the long-block masks of every leaf, in canonical order."""
    if full == 0:
        ticker.tick()
        yield ()
        return
    blocks: list[int] = []

    def branches(decided: int) -> list[tuple[int, int | None]]:
        low = (~decided) & full
        a_idx = (low & -low).bit_length() - 1
        out: list[tuple[int, int | None]] = [(decided | (1 << a_idx), None)]
        for bm, sh in cand[a_idx]:
            if sh & decided == 0:
                out.append((decided | sh, bm))
        return out

    # frame: [branch list, cursor, block pushed on entry or None]
    stack: list[list] = [[branches(0), 0, None]]
    ticker.tick()
    while stack:
        frame = stack[-1]
        br, i, _ = frame
        if i == len(br):
            stack.pop()
            if frame[2] is not None:
                blocks.pop()
            continue
        frame[1] += 1
        decided, bm = br[i]
        ticker.tick()
        if bm is not None:
            blocks.append(bm)
        if decided == full:
            ticker.leaves += 1
            yield tuple(blocks)
            if bm is not None:
                blocks.pop()
        else:
            stack.append([branches(decided), 0, bm])


# ---------------------------------------------------------------------------
# public interface


@dataclass(frozen=True)
class CensusResult:
    n: int
    r: int
    k: int | None
    count: int
    nodes: int
    elapsed: float


def enumerate_paving(n: int, r: int, budget: Budget | None = None) -> Iterator[DPartition]:
    """Every rank-r paving matroid on [n], exactly once, canonical order."""
    _check_params(n, r)
    cand, nsets = _candidate_tables(n, r, _allowed_sizes(n, r, None))
    full = (1 << nsets) - 1
    ticker = _Ticker(budget)
    for longs in _iter_leaves(cand, full, ticker):
        yield DPartition.from_long_blocks(n, r, longs)


def _run_count(n: int, r: int, k: int | None, budget: Budget | None,
               shadow_tally: dict[int, int] | None = None) -> CensusResult:
    _check_params(n, r)
    cand, nsets = _candidate_tables(n, r, _allowed_sizes(n, r, k))
    full = (1 << nsets) - 1
    ticker = _Ticker(budget)
    if full == 0:
        count = 1
        ticker.tick()
        if shadow_tally is not None:
            shadow_tally[0] = 1
    else:
        count = _count_subtree(cand, full, 0, ticker, shadow_tally)
    return CensusResult(n, r, k, count, ticker.nodes, ticker.elapsed)


def count_paving(n: int, r: int, budget: Budget | None = None) -> CensusResult:
    return _run_count(n, r, None, budget)


def count_sparse(n: int, r: int, budget: Budget | None = None) -> CensusResult:
    return _run_count(n, r, 0, budget)


def count_sk(n: int, r: int, k: int, budget: Budget | None = None) -> CensusResult:
    if k < 0:
        raise ValueError("k must be >= 0")
    return _run_count(n, r, k, budget)


@dataclass
class ShadowCensus:
    n: int
    r: int
    by_shadow_size: dict[int, int]
    nodes: int = 0
    elapsed: float = 0.0


def census_by_shadow(n: int, r: int, budget: Budget | None = None) -> ShadowCensus:
    """Sparse paving matroids grouped by the (r-1)-shadow size of their
    circuit-hyperplane family."""
    tally: dict[int, int] = {}
    res = _run_count(n, r, 0, budget, shadow_tally=tally)
    return ShadowCensus(n, r, dict(sorted(tally.items())), res.nodes, res.elapsed)


# ---------------------------------------------------------------------------
# deterministic work splitting: the root's decisions partition the search
# tree, so subtree counts can run on separate workers and merge in order.


def split_tasks(n: int, r: int, k: int | None) -> int:
    """Number of independent root branches for (n, r, k)."""
    _check_params(n, r)
    cand, nsets = _candidate_tables(n, r, _allowed_sizes(n, r, k))
    full = (1 << nsets) - 1
    return len(_root_branches(cand, full))


def run_task(args: tuple) -> tuple[int, int, dict[int, int] | None]:
    """Count one root branch: returns (count, nodes, shadow tally or None).

    ``args`` = (n, r, k, branch_index, max_nodes, max_seconds, want_shadow);
    a plain tuple so the function can cross a process boundary.
    """
    n, r, k, branch_index, max_nodes, max_seconds, want_shadow = args
    cand, nsets = _candidate_tables(n, r, _allowed_sizes(n, r, k))
    full = (1 << nsets) - 1
    branches = _root_branches(cand, full)
    decided, bm = branches[branch_index]
    ticker = _Ticker(Budget(max_nodes, max_seconds))
    tally: dict[int, int] | None = {} if want_shadow else None
    count = _count_subtree(cand, full, decided, ticker, tally,
                           shadow_mask=decided if bm is not None else 0)
    return count, ticker.nodes, tally
