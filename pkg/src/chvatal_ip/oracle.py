"""Brute-force ground truth for small ground sets.

Every downset of ``2^[n]`` is enumerated and its largest intersecting
subfamily is compared with its largest star.  The largest intersecting
subfamily is a maximum clique in the "members meet" graph, found by a
bitset branch-and-bound with greedy colouring bounds.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import njit
from .setcore import Family, downward_closure, is_downset, max_star, popcount

MAX_N = 5
LONG_RUN_N = 6


class EnumerationLimitError(ValueError):
    pass


@dataclass(frozen=True)
class OracleReport:
    n: int
    downsets_checked: int
    all_satisfy: bool
    first_violation: Family | None
    max_gap: int


def _check_n(n: int, long_run: bool) -> None:
    limit = LONG_RUN_N if long_run else MAX_N
    if not isinstance(n, int) or n < 1:
        raise EnumerationLimitError(f"n must be a positive integer, got {n!r}")
    if n > limit:
        hint = "" if long_run or n > LONG_RUN_N else " (n=6 needs the long-run flag)"
        raise EnumerationLimitError(f"downset enumeration is limited to n <= {limit}{hint}")


def enumerate_downsets(n: int, long_run: bool = False):
    """Yield every downset of ``2^[n]`` once, the empty family included.

    Sets are decided in decreasing cardinality.  A set below an included set
    is forced in; any other set is first included, then excluded.
    """
    _check_n(n, long_run)
    order = sorted(range(1 << n), key=lambda c: (-popcount(c), c))
    below = {}
    for c in order:
        mask = 0
        sub = c
        while True:
            mask |= 1 << sub
            if sub == 0:
                break
            sub = (sub - 1) & c
        below[c] = mask
    total = len(order)

    def rec(i, chosen, forced):
        if i == total:
            yield Family(n, tuple(c for c in range(1 << n) if chosen >> c & 1))
            return
        c = order[i]
        if forced >> c & 1:
            yield from rec(i + 1, chosen | 1 << c, forced)
            return
        yield from rec(i + 1, chosen | 1 << c, forced | below[c])
        yield from rec(i + 1, chosen, forced)

    yield from rec(0, 0, 0)


def enumerate_downsets_via_antichains(n: int, long_run: bool = False):
    """Independent enumerator: every antichain, closed downward."""
    _check_n(n, long_run)
    codes = list(range(1 << n))

    def comparable(a, b):
        return a & b == a or a & b == b

    def rec(i, chosen):
        if i == len(codes):
            if not chosen:
                yield Family(n, ())
            else:
                yield downward_closure(Family(n, tuple(chosen)))
            return
        c = codes[i]
        if all(not comparable(c, d) for d in chosen):
            chosen.append(c)
            yield from rec(i + 1, chosen)
            chosen.pop()
        yield from rec(i + 1, chosen)

    yield from rec(0, [])


# ------------------------------------------------------------ max clique
@njit
def popcount64(x):
    c = 0
    while x != 0:
        x &= x - 1
        c += 1
    return c


@njit
def _max_clique(adj, nv):
    """Maximum clique of a graph on ``nv <= 63`` vertices given as int64 bitsets."""
    best = 0
    best_set = np.int64(0)
    if nv == 0:
        return best, best_set
    order = np.zeros((nv + 1, nv), dtype=np.int64)
    colors = np.zeros((nv + 1, nv), dtype=np.int64)
    pos = np.zeros(nv + 1, dtype=np.int64)
    cand = np.zeros(nv + 1, dtype=np.int64)
    chosen = np.zeros(nv + 1, dtype=np.int64)
    full = np.int64(0)
    for v in range(nv):
        full |= np.int64(1) << v
    depth = 0
    cand[0] = full
    chosen[0] = 0
    need_color = True
    while depth >= 0:
        if need_color:
            # greedy colouring of cand[depth], vertices listed by colour class
            uncol = cand[depth]
            k = 0
            col = 0
            while uncol != 0:
                col += 1
                q = uncol
                while q != 0:
                    v = 0
                    while not (q >> v) & 1:
                        v += 1
                    bit = np.int64(1) << v
                    q &= ~bit
                    q &= ~adj[v]
                    uncol &= ~bit
                    order[depth, k] = v
                    colors[depth, k] = col
                    k += 1
            pos[depth] = k - 1
            need_color = False
        i = pos[depth]
        size = popcount64(chosen[depth])
        if i < 0 or size + colors[depth, i] <= best:
            depth -= 1
            continue
        v = order[depth, i]
        pos[depth] = i - 1
        bit = np.int64(1) << v
        newc = cand[depth] & adj[v]
        cand[depth] &= ~bit
        nxt = chosen[depth] | bit
        if newc == 0:
            if size + 1 > best:
                best = size + 1
                best_set = nxt
            continue
        depth += 1
        cand[depth] = newc
        chosen[depth] = nxt
        need_color = True
    return best, best_set


def _meet_graph(members) -> np.ndarray:
    adj = np.zeros(len(members), dtype=np.int64)
    for i, a in enumerate(members):
        mask = 0
        for j, b in enumerate(members):
            if i != j and a & b:
                mask |= 1 << j
        adj[i] = mask
    return adj


def max_intersecting_subfamily(f: Family) -> tuple[int, Family]:
    """Size and witness of a largest intersecting subfamily of ``f`` (never containing the empty set)."""
    members = [c for c in f.members if c]
    if len(members) > 63:
        raise ValueError("families with more than 63 nonempty members are not supported")
    size, mask = _max_clique(_meet_graph(members), len(members))
    mask = int(mask)
    witness = Family(f.n, tuple(c for k, c in enumerate(members) if mask >> k & 1))
    return int(size), witness


def has_star_property(d: Family) -> bool:
    if not is_downset(d):
        raise ValueError(f"not a downset: {d}")
    return max_star(d)[1] >= max_intersecting_subfamily(d)[0]


def verify_conjecture(n: int, long_run: bool = False, progress=None) -> OracleReport:
    """Check the star property on every downset of ``2^[n]``.

    ``progress`` is called with the running count every 100000 downsets.
    """
    checked = 0
    first = None
    gap = None
    for d in enumerate_downsets(n, long_run=long_run):
        checked += 1
        g = max_intersecting_subfamily(d)[0] - max_star(d)[1]
        if g > 0 and first is None:
            first = d
        gap = g if gap is None else max(gap, g)
        if progress is not None and checked % 100000 == 0:
            progress(checked)
    return OracleReport(n, checked, first is None, first, gap)
