"""Window encoding of paving matroids.

Each dependent hyperplane H (size >= r) is summarised by its consecutive
r-windows under the natural order of [n]: sorting H as h_0 < h_1 < ...,
the i-th window is {h_i, ..., h_{i+r-1}}.  The union of all windows
determines the matroid; splitting each hyperplane's windows into even and
odd positions yields two families that are stable in the Johnson graph
J(n, r) (no two members share r-1 elements).  ``decode`` inverts the map
by merging window sets that are forced into a common hyperplane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .census import DPartition, InvariantViolation
from .combinatorics import elements_of, mask_of


class NotEncodable(ValueError):
    """No d-partition with at least two blocks covers the given windows."""


@dataclass(frozen=True)
class VEncoding:
    """Window family of a matroid: members of ``v`` are r-subsets of [n];
    ``v0``/``v1`` index the even/odd windows, partitioning ``v``;
    ``chains`` maps each dependent hyperplane to its window list in
    increasing min-element order."""

    n: int
    r: int
    v: tuple[tuple[int, ...], ...]
    v0: tuple[int, ...]
    v1: tuple[int, ...]
    chains: tuple[tuple[tuple[int, ...], tuple[tuple[int, ...], ...]], ...]

    @property
    def v0_sets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.v[i] for i in self.v0)

    @property
    def v1_sets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.v[i] for i in self.v1)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "V": [list(w) for w in self.v],
            "V0": list(self.v0),
            "V1": list(self.v1),
        }


def hyperplane_windows(block: Sequence[int], r: int) -> list[tuple[int, ...]]:
    """Consecutive r-windows of a sorted block; empty for blocks below size r."""
    b = sorted(block)
    return [tuple(b[i:i + r]) for i in range(len(b) - r + 1)]


def encode(m: DPartition) -> VEncoding:
    n, r = m.n, m.r
    chains = []
    windows: set[tuple[int, ...]] = set()
    even: set[tuple[int, ...]] = set()
    odd: set[tuple[int, ...]] = set()
    for bm in m.long_blocks:
        ws = hyperplane_windows(elements_of(bm), r)
        chains.append((elements_of(bm), tuple(ws)))
        for i, w in enumerate(ws):
            windows.add(w)
            (even if i % 2 == 0 else odd).add(w)
    v = tuple(sorted(windows))
    index = {w: i for i, w in enumerate(v)}
    return VEncoding(
        n, r, v,
        tuple(sorted(index[w] for w in even)),
        tuple(sorted(index[w] for w in odd)),
        tuple(chains),
    )


def decode(v_sets: Iterable[Sequence[int]], n: int, r: int) -> DPartition:
    """The d-partition with the most blocks whose hyperplanes cover every
    member of ``v_sets`` (d = r-1).

    Two candidate blocks sharing >= d elements must lie in a common
    hyperplane, so they merge into their union; merging repeats until no
    pair conflicts (a union can create new overlaps).  Uncovered d-subsets
    become their own blocks.  Raises NotEncodable if merging swallows the
    whole ground set.
    """
    d = r - 1
    masks: list[int] = []
    for s in v_sets:
        sm = mask_of(s)
        if sm.bit_count() != r:
            raise ValueError(f"window {tuple(s)} does not have cardinality r={r}")
        if sm >> n:
            raise ValueError(f"window {tuple(s)} leaves the ground set [1..{n}]")
        if sm not in masks:
            masks.append(sm)
    full = (1 << n) - 1
    changed = True
    while changed:
        changed = False
        out: list[int] = []
        for cm in masks:
            merged = cm
            acc: list[int] = []
            for om in out:
                if (merged & om).bit_count() >= d:
                    merged |= om
                    changed = True
                else:
                    acc.append(om)
            acc.append(merged)
            out = acc
        masks = out
    for bm in masks:
        if bm == full:
            raise NotEncodable("windows force a block equal to the whole ground set")
    result = DPartition.from_long_blocks(n, r, sorted(masks, key=elements_of))
    result.validate()
    return result


@dataclass(frozen=True)
class EncodingLemmaReport:
    """Checked facts about one matroid's window encoding."""

    n: int
    r: int
    v_size: int
    v0_size: int
    v1_size: int
    shadow_v0: int
    shadow_v1: int
    stable_ok: bool         # distinct windows never share r-1 elements
    size_ok: bool           # |V| <= C(n, r) / (n - r + 1)
    v0v1_ok: bool           # |dV0| + (r-1)/2 |dV1| <= C(n, r-1)
    shadow_identity_ok: bool  # |dVi| == r * |Vi| for i in {0, 1}

    @property
    def all_ok(self) -> bool:
        return self.stable_ok and self.size_ok and self.v0v1_ok and self.shadow_identity_ok


def _shadow_size(sets: Iterable[tuple[int, ...]], s: int) -> int:
    out = set()
    for w in sets:
        out.update(combinations(w, s))
    return len(out)


def check_encoding_lemmas(m: DPartition) -> EncodingLemmaReport:
    n, r = m.n, m.r
    enc = encode(m)

    # stability: within a chain exactly the consecutive windows share r-1
    # elements; across chains any sharing of >= r-1 elements is a violation.
    stable_ok = True
    entries = []
    for ci, (_, ws) in enumerate(enc.chains):
        for pos, w in enumerate(ws):
            entries.append((set(w), ci, pos))
    for a in range(len(entries)):
        for b in range(a + 1, len(entries)):
            wa, ca, pa = entries[a]
            wb, cb, pb = entries[b]
            inter = len(wa & wb)
            if ca != cb:
                if inter >= r - 1:
                    stable_ok = False
            elif abs(pa - pb) == 1:
                if inter != r - 1:
                    stable_ok = False
            elif inter >= r - 1:
                stable_ok = False
    for parity_sets in (enc.v0_sets, enc.v1_sets):
        sl = list(parity_sets)
        for i in range(len(sl)):
            for j in range(i + 1, len(sl)):
                if len(set(sl[i]) & set(sl[j])) >= r - 1:
                    stable_ok = False

    size_ok = len(enc.v) * (n - r + 1) <= math.comb(n, r)

    shadow_v0 = _shadow_size(enc.v0_sets, r - 1)
    shadow_v1 = _shadow_size(enc.v1_sets, r - 1)
    # compare in integers: 2*lhs <= 2*rhs avoids rational arithmetic
    v0v1_ok = 2 * shadow_v0 + (r - 1) * shadow_v1 <= 2 * math.comb(n, r - 1)
    shadow_identity_ok = (shadow_v0 == r * len(enc.v0)) and (shadow_v1 == r * len(enc.v1))

    return EncodingLemmaReport(
        n, r, len(enc.v), len(enc.v0), len(enc.v1),
        shadow_v0, shadow_v1,
        stable_ok, size_ok, v0v1_ok, shadow_identity_ok,
    )


def roundtrip_ok(m: DPartition) -> bool:
    """decode(encode(m)) reproduces m exactly."""
    try:
        return decode(encode(m).v, m.n, m.r) == m
    except (NotEncodable, InvariantViolation):
        return False
