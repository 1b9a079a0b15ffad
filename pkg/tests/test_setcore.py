import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chvatal_ip.setcore import (
    Family,
    canonical_form,
    downward_closure,
    enumerate_iso_classes,
    format_family,
    is_downset,
    is_intersecting,
    max_star,
    parse_family,
    permute,
    subset,
    union_of,
)


def fam(n, *sets):
    return Family.of(n, sets)


@st.composite
def families(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    members = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=12, unique=True))
    return Family(n, tuple(sorted(members)))


@st.composite
def family_and_perm(draw):
    f = draw(families())
    perm = draw(st.permutations(list(range(1, f.n + 1))))
    return f, perm


# ------------------------------------------------------------------ basics
def test_family_is_sorted_and_deduplicated():
    f = Family(3, (5, 1, 5, 3))
    assert f.members == (1, 3, 5)
    with pytest.raises(ValueError):
        Family(2, (4,))


def test_union_examples():
    assert union_of(fam(3, ())) == 0
    assert union_of(fam(3, (1, 2), (3,))) == subset(1, 2, 3)
    assert union_of(Family(4, tuple(range(1, 16)))) == 0b1111


def test_is_downset_examples():
    assert is_downset(fam(2, (), (1,), (2,), (1, 2)))
    assert not is_downset(fam(2, (1, 2)))


def test_downward_closure_examples():
    assert downward_closure(fam(2, (1, 2))) == fam(2, (), (1,), (2,), (1, 2))
    assert downward_closure(Family(3, ())) == fam(3, ())
    got = downward_closure(fam(3, (1, 2), (2, 3)))
    assert got == fam(3, (), (1,), (2,), (3,), (1, 2), (2, 3))
    assert len(got) == 6 and is_downset(got)


def _closure_by_definition(f):
    out = {0}
    for c in f.members:
        out |= {s for s in range(1 << f.n) if s & c == s}
    return Family(f.n, tuple(out))


@given(families())
def test_closure_matches_definition(f):
    assert downward_closure(f) == _closure_by_definition(f)


@given(families(), families())
def test_closure_monotone_idempotent_extensive(f, g):
    if f.n != g.n:
        return
    both = Family(f.n, tuple(set(f.members) | set(g.members)))
    cf, cb = downward_closure(f), downward_closure(both)
    assert set(cf.members) <= set(cb.members)
    assert downward_closure(cf) == cf
    assert set(c for c in f.members if c) <= set(cf.members)
    assert is_downset(cf)


def test_is_intersecting_examples():
    assert is_intersecting(fam(3, (1,), (1, 2), (1, 3)))
    assert not is_intersecting(fam(2, (1,), (2,)))
    assert is_intersecting(fam(2, ()))  # a single member, even the empty set
    assert is_intersecting(Family(2, ()))
    assert not is_intersecting(fam(2, (), (1,)))


@given(families())
def test_intersecting_is_hereditary(f):
    if is_intersecting(f):
        for r in range(len(f.members) + 1):
            for sub in itertools.combinations(f.members, r):
                assert is_intersecting(Family(f.n, sub))
                if r > 3:
                    break


def test_max_intersecting_of_cube3_by_brute_force():
    ne = list(range(1, 8))
    best = max(r for r in range(8) for s in itertools.combinations(ne, r) if is_intersecting(Family(3, s)))
    assert best == 4


def test_max_star_examples():
    assert max_star(Family.power_set(4))[1] == 8
    assert max_star(fam(2, (1,), (1, 2))) == (1, 2)
    assert max_star(Family.power_set(3))[1] == 4
    assert max_star(fam(3, ())) == (1, 0)
    assert max_star(fam(3, (2,), (3,))) == (2, 1)


def test_family_literals_round_trip():
    f = parse_family("{1,2}, {3}, {}")
    assert f == Family(3, (0, 3, 4))
    assert parse_family(format_family(f), 3) == f
    for bad in ("{1,2", "{1},", "{1}{2}", "{x}"):
        with pytest.raises(ValueError):
            parse_family(bad)
    with pytest.raises(ValueError):
        parse_family("{4}", 3)


# --------------------------------------------------------------- canonical
def _canon_by_definition(f):
    best = None
    for perm in itertools.permutations(range(1, f.n + 1)):
        img = permute(f, perm).members
        if best is None or img < best:
            best = img
    return Family(f.n, best)


def test_canonical_examples():
    assert canonical_form(fam(3, (1, 2), (3,))) == canonical_form(fam(3, (2, 3), (1,)))
    c = canonical_form(fam(4, (1, 2), (2, 3, 4)))
    assert canonical_form(c) == c
    for n in range(2, 6):
        big = [s for s in range(1 << n) if bin(s).count("1") == n - 1]
        for k in range(1, n + 1):
            forms = {canonical_form(Family(n, combo)) for combo in itertools.combinations(big, k)}
            assert len(forms) == 1


@given(families(max_n=4))
def test_canonical_matches_exhaustive_definition(f):
    assert canonical_form(f) == _canon_by_definition(f)


def test_canonical_invariance_1000_random_pairs():
    rng = random.Random(7)
    for _ in range(1000):
        n = rng.randint(1, 6)
        f = Family(n, tuple(rng.sample(range(1 << n), rng.randint(0, min(10, 1 << n)))))
        perm = list(range(1, n + 1))
        rng.shuffle(perm)
        cf = canonical_form(f)
        assert canonical_form(permute(f, perm)) == cf
        assert canonical_form(cf) == cf


@settings(max_examples=200)
@given(family_and_perm())
def test_canonical_invariance_property(fp):
    f, perm = fp
    assert canonical_form(permute(f, perm)) == canonical_form(f)


# --------------------------------------------------------------- iso classes
def _classes_brute(n, m, k):
    layer = [s for s in range(1 << n) if bin(s).count("1") == m]
    return {canonical_form(Family(n, c)).members for c in itertools.combinations(layer, k)}


def test_iso_class_examples():
    assert len(enumerate_iso_classes(5, 4, 2)) == 1 == len(_classes_brute(5, 4, 2))
    got = enumerate_iso_classes(6, 3, 2)
    assert len(got) == 3 == len(_classes_brute(6, 3, 2))
    sizes = sorted(bin(r.members[0] & r.members[1]).count("1") for r in got.representatives)
    assert sizes == [0, 1, 2]
    assert enumerate_iso_classes(4, 2, 0).representatives == (Family(4, ()),)


def test_one_class_per_k_for_co_singletons():
    for n in range(2, 7):
        assert sum(len(enumerate_iso_classes(n, n - 1, k)) for k in range(n + 1)) == n + 1


@pytest.mark.parametrize("n,m", [(4, 2), (5, 2), (5, 3), (6, 2)])
def test_iso_classes_match_brute_force(n, m):
    for k in range(comb(n, m) + 1):
        if comb(comb(n, m), k) > 5000:
            continue
        got = enumerate_iso_classes(n, m, k)
        assert {r.members for r in got.representatives} == _classes_brute(n, m, k)
        for r in got.representatives:
            assert len(r) == k and all(bin(c).count("1") == m for c in r.members)
            assert canonical_form(r) == r


def test_graph_classes_on_six_vertices():
    # non-isomorphic simple graphs on 6 vertices: 156 (a standard count)
    assert sum(len(enumerate_iso_classes(6, 2, k)) for k in range(16)) == 156


def test_iso_class_argument_errors():
    with pytest.raises(ValueError):
        enumerate_iso_classes(5, 6, 1)
    with pytest.raises(ValueError):
        enumerate_iso_classes(5, 4, 6)
