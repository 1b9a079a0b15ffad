"""Set families over a small ground set ``[n]``.

A subset of ``[n]`` is an ``int`` whose bit ``i - 1`` marks element ``i``.
A :class:`Family` is an immutable, duplicate-free collection of such codes
kept in increasing order, so equality and hashing are structural.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from ._accel import USE_NUMBA, njit

MAX_N = 10
MAX_CANON_N = 8


def popcount(code: int) -> int:
    return bin(code).count("1")


def elements(code: int) -> list[int]:
    """Elements of the subset, 1-based and increasing."""
    out = []
    i = 1
    while code:
        if code & 1:
            out.append(i)
        code >>= 1
        i += 1
    return out


def subset(*elems: int) -> int:
    code = 0
    for e in elems:
        if e < 1:
            raise ValueError(f"elements are 1-based, got {e}")
        code |= 1 << (e - 1)
    return code


def format_subset(code: int) -> str:
    return "{" + ",".join(map(str, elements(code))) + "}"


def subsets_of(code: int):
    """All subsets of ``code`` (including 0 and ``code``), decreasing."""
    s = code
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & code


def subsets_of_size(n: int, m: int) -> list[int]:
    """All ``m``-subsets of ``[n]`` in increasing code order."""
    return sorted(sum(1 << (e - 1) for e in c) for c in itertools.combinations(range(1, n + 1), m))


@dataclass(frozen=True)
class Family:
    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"ground set size must be in [1, {MAX_N}], got {self.n}")
        mem = tuple(sorted(set(int(c) for c in self.members)))
        limit = 1 << self.n
        for c in mem:
            if c < 0 or c >= limit:
                raise ValueError(f"subset code {c} does not fit in {self.n} bits")
        object.__setattr__(self, "members", mem)

    @classmethod
    def of(cls, n: int, sets) -> "Family":
        """Build from iterables of 1-based elements, e.g. ``Family.of(3, [(1, 2), (3,)])``."""
        return cls(n, tuple(subset(*s) for s in sets))

    @classmethod
    def power_set(cls, n: int) -> "Family":
        return cls(n, tuple(range(1 << n)))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, code):
        return code in self._set

    @property
    def _set(self):
        s = self.__dict__.get("_memberset")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_memberset", s)
        return s

    def issubfamily(self, other: "Family") -> bool:
        return self._set <= other._set

    def nonempty(self) -> "Family":
        return Family(self.n, tuple(c for c in self.members if c))

    def __str__(self):
        return format_family(self)


_SET_RE = re.compile(r"\{([^{}]*)\}")


def parse_family(text: str, n: int | None = None) -> Family:
    """Parse a family literal such as ``{1,2},{3}``; ``{}`` is the empty set.

    Whitespace is ignored.  ``n`` defaults to the largest element mentioned
    (at least 1).
    """
    s = re.sub(r"\s+", "", text)
    sets = []
    pos = 0
    while pos < len(s):
        m = _SET_RE.match(s, pos)
        if not m:
            raise ValueError(f"malformed family literal at offset {pos}: {text!r}")
        body = m.group(1)
        elems = [int(tok) for tok in body.split(",")] if body else []
        sets.append(elems)
        pos = m.end()
        if pos < len(s):
            if s[pos] != ",":
                raise ValueError(f"expected ',' at offset {pos}: {text!r}")
            pos += 1
            if pos == len(s):
                raise ValueError(f"trailing ',' in family literal: {text!r}")
    top = max((e for es in sets for e in es), default=1)
    if n is None:
        n = max(top, 1)
    elif top > n:
        raise ValueError(f"element {top} exceeds ground set size {n}")
    return Family.of(n, sets)


def format_family(f: Family) -> str:
    return ",".join(format_subset(c) for c in f.members)


def union_of(f: Family) -> int:
    u = 0
    for c in f.members:
        u |= c
    return u


def is_downset(f: Family) -> bool:
    # immediate subsets suffice: closure under single-element removal is
    # closure under all subsets
    for c in f.members:
        rest = c
        while rest:
            low = rest & -rest
            if (c ^ low) not in f:
                return False
            rest ^= low
    return True


def downward_closure(f: Family) -> Family:
    """Smallest downset containing ``f``; the empty family closes to ``{∅}``."""
    out = {0}
    for c in f.members:
        if c in out:
            continue
        out.update(subsets_of(c))
    return Family(f.n, tuple(out))


def is_intersecting(f: Family) -> bool:
    mem = f.members
    for i, a in enumerate(mem):
        for b in mem[i + 1:]:
            if a & b == 0:
                return False
    return True


def max_star(f: Family) -> tuple[int, int]:
    """``(element, count)`` of a largest star inside ``f``; ties go to the smaller element."""
    best_e, best = 1, 0
    for i in range(f.n):
        bit = 1 << i
        cnt = sum(1 for c in f.members if c & bit)
        if cnt > best:
            best_e, best = i + 1, cnt
    return best_e, best


def permute(f: Family, perm) -> Family:
    """Apply ``perm`` (a sequence with ``perm[i]`` the image of element ``i + 1``, 1-based)."""
    out = []
    for c in f.members:
        img = 0
        for e in elements(c):
            img |= 1 << (perm[e - 1] - 1)
        out.append(img)
    return Family(f.n, tuple(out))


@lru_cache(maxsize=None)
def _image_table(n: int) -> np.ndarray:
    """``table[p, code]`` = image of ``code`` under the ``p``-th permutation of ``range(n)``."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    codes = np.arange(1 << n, dtype=np.int64)
    table = np.zeros((perms.shape[0], 1 << n), dtype=np.int32)
    for i in range(n):
        bit = ((codes >> i) & 1).astype(np.int32)
        table |= bit[None, :] << perms[:, i : i + 1].astype(np.int32)
    return table


@njit
def _canon_numba(table, members):
    k = members.shape[0]
    best = np.empty(k, dtype=np.int32)
    cur = np.empty(k, dtype=np.int32)
    for t in range(k):
        best[t] = table[0, members[t]]
    best.sort()
    for p in range(1, table.shape[0]):
        for t in range(k):
            cur[t] = table[p, members[t]]
        # selection sort with early exit once the prefix exceeds best
        better = False
        for t in range(k):
            j = t
            for u in range(t + 1, k):
                if cur[u] < cur[j]:
                    j = u
            cur[t], cur[j] = cur[j], cur[t]
            if not better:
                if cur[t] > best[t]:
                    break
                if cur[t] < best[t]:
                    better = True
        else:
            if better:
                best[:] = cur
    return best


def _canon_numpy(table, members):
    imgs = np.sort(table[:, members], axis=1)
    # lexsort keys: last key is primary
    order = np.lexsort(imgs.T[::-1])
    return imgs[order[0]]


_canon_kernel = _canon_numba if USE_NUMBA else _canon_numpy


def canonical_form(f: Family) -> Family:
    """Lexicographically smallest image of ``f`` over all permutations of ``[n]``."""
    if f.n > MAX_CANON_N:
        raise ValueError(f"canonical_form supports n <= {MAX_CANON_N}, got {f.n}")
    if len(f) == 0:
        return f
    table = _image_table(f.n)
    best = _canon_kernel(table, np.asarray(f.members, dtype=np.int64))
    return Family(f.n, tuple(int(c) for c in best))


@dataclass(frozen=True)
class IsoClassSet:
    n: int
    m: int
    k: int
    representatives: tuple[Family, ...]

    def __len__(self):
        return len(self.representatives)


def enumerate_iso_classes(n: int, m: int, k: int) -> IsoClassSet:
    """One canonical representative per isomorphism class of ``k``-families of ``m``-subsets of ``[n]``.

    Classes of size ``k`` are grown from those of size ``k - 1`` by adding one
    ``m``-set and deduplicating canonical forms.
    """
    if not 1 <= m <= n <= MAX_CANON_N:
        raise ValueError(f"need 1 <= m <= n <= {MAX_CANON_N}, got n={n}, m={m}")
    total = comb(n, m)
    if not 0 <= k <= total:
        raise ValueError(f"k must lie in [0, {total}], got {k}")
    return IsoClassSet(n, m, k, _classes(n, m, k))


@lru_cache(maxsize=64)
def _classes(n: int, m: int, k: int) -> tuple[Family, ...]:
    if k == 0:
        return (Family(n, ()),)
    total = comb(n, m)
    if 2 * k > total:
        # complement within the m-layer is an isomorphism-respecting bijection
        layer = set(subsets_of_size(n, m))
        seen = {}
        for rep in _classes(n, m, total - k):
            comp = canonical_form(Family(n, tuple(layer - set(rep.members))))
            seen.setdefault(comp.members, comp)
        return tuple(seen[key] for key in sorted(seen))
    layer = subsets_of_size(n, m)
    seen = {}
    for rep in _classes(n, m, k - 1):
        present = set(rep.members)
        for s in layer:
            if s in present:
                continue
            cf = canonical_form(Family(n, rep.members + (s,)))
            seen.setdefault(cf.members, cf)
    return tuple(seen[key] for key in sorted(seen))
