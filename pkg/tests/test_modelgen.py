from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from chvatal_ip import certcheck
from chvatal_ip.modelgen import (
    LevelFixingConflict,
    LinearConstraint,
    Model,
    Variable,
    apply_level_fixings,
    berge_cut,
    build_inf,
    build_opt,
    build_red,
    emit,
    model_stats,
    partition_cuts,
    x_index,
    y_index,
    z_index,
)
from chvatal_ip.setcore import Family, format_subset, subset


def dense(model, rows=None):
    """Integer matrix, senses and rhs of ``model`` (or of ``rows``)."""
    rows = model.constraints if rows is None else rows
    A = np.zeros((len(rows), model.num_vars), dtype=np.int64)
    for i, c in enumerate(rows):
        for j, a in c.terms:
            A[i, j] = int(a)
    return A, [c.sense for c in rows], np.array([int(c.rhs) for c in rows])


def satisfied(A, senses, b, X):
    lhs = X @ A.T
    ok = np.ones(len(X), dtype=bool)
    for i, s in enumerate(senses):
        ok &= (lhs[:, i] <= b[i]) if s == "L" else (lhs[:, i] >= b[i]) if s == "G" else (lhs[:, i] == b[i])
    return ok


def all_binary_points(k):
    return np.array(list(product((0, 1), repeat=k)), dtype=np.int64)


# ------------------------------------------------------------------ sizes
@pytest.mark.parametrize("n,vars_,ineqs", [(5, 63, 427), (6, 127, 1336), (7, 255, 4125), (8, 511, 12618)])
def test_table_one_opt_sizes(n, vars_, ineqs):
    st = model_stats(build_opt(n))
    assert (st["vars"], st["ineqs"]) == (vars_, ineqs)


@pytest.mark.parametrize("n", range(1, 9))
def test_opt_counts_closed_form(n):
    st = model_stats(build_opt(n))
    assert st["vars"] == 2 * (2 ** n - 1) + 1
    assert st["ineqs"] == 2 * (3 ** n - 2 ** (n + 1) + 1) + n + 2 * (2 ** n - 1)


def test_opt_row_classes_and_order():
    m = build_opt(3)
    kinds = [c.label.split(":")[0] for c in m.constraints]
    # ordered disjoint nonempty pairs, then stars, then nonempty S within T
    assert kinds == ["inter"] * (27 - 16 + 1) + ["star"] * 3 + ["gen"] * (27 - 8)
    assert m.variables[z_index(3)].ub is None and m.variables[z_index(3)].kind == "int"


def test_inf_n1_structure():
    m = build_inf(1)
    assert [v.name for v in m.variables] == ["x{1}", "y{1}"]
    assert [c.label for c in m.constraints] == ["cont:{1}", "star:1"]


def test_inf_star_row_normalised():
    m = build_inf(2)
    star = [c for c in m.constraints if c.label == "star:1"][0]
    assert star.sense == "L" and star.rhs == -1
    assert dict(star.terms) == {x_index(2, 1): 1, x_index(2, 3): 1, y_index(2, 1): -1, y_index(2, 2): -1,
                                y_index(2, 3): -1}


def test_inf3_has_no_integral_point():
    m = build_inf(3)
    A, senses, b = dense(m)
    assert not satisfied(A, senses, b, all_binary_points(14)).any()


def _decode(n, point, role):
    off = 0 if role == "x" else (1 << n) - 1
    return {c for c in range(1, 1 << n) if point[off + c - 1]}


def test_inf_points_encode_counterexamples_when_star_row_dropped():
    # without the star rows the integral points are exactly (downset, intersecting subfamily) pairs
    n = 3
    m = build_inf(n)
    rows = [c for c in m.constraints if not c.label.startswith("star")]
    A, senses, b = dense(m, rows)
    X = all_binary_points(14)
    for p in X[satisfied(A, senses, b, X)]:
        xs, ys = _decode(n, p, "x"), _decode(n, p, "y")
        assert all(s in xs for t in xs for s in range(1, 1 << n) if s & t == s)
        assert ys <= xs and all(s & t for s in ys for t in ys)


def _opt_points(n):
    """All integral feasible points of build_opt(n) with z at its least feasible value."""
    m = build_opt(n)
    k = 2 * ((1 << n) - 1)
    X = all_binary_points(k)
    stars = np.array([[1 if (c >> i) & 1 else 0 for c in range(1, 1 << n)] for i in range(n)])
    z = (X[:, : (1 << n) - 1] @ stars.T).max(axis=1)
    P = np.concatenate([X, z[:, None]], axis=1)
    A, senses, b = dense(m)
    return m, P[satisfied(A, senses, b, P)]


@pytest.mark.parametrize("n", [2, 3])
def test_opt_cut_validity_exhaustive(n):
    m, P = _opt_points(n)
    assert len(P) > 0
    A, senses, b = dense(m, partition_cuts(n, n))
    assert satisfied(A, senses, b, P).all()
    # the Berge row drops points (the empty set is not a variable) but keeps the optimum
    c = np.array([int(dict(m.objective).get(j, 0)) for j in range(m.num_vars)])
    A, senses, b = dense(m, [berge_cut(n)])
    kept = satisfied(A, senses, b, P)
    assert (P @ c).max() == (P[kept] @ c).max() == 0


def test_partition_cut_examples():
    assert len(partition_cuts(2, 2)) == 1
    (cut,) = partition_cuts(2, 2)
    assert dict(cut.terms) == {y_index(2, 1): 1, y_index(2, 2): 1} and cut.rhs == 1
    three = [c for c in partition_cuts(3, 3) if c.label == "part:{1}|{2}|{3}"]
    assert len(three) == 1
    assert dict(three[0].terms) == {y_index(3, subset(i)): 1 for i in (1, 2, 3)}
    # Bell(4) - 1 partitions into at least two blocks
    assert len(partition_cuts(4, 4)) == 14
    with pytest.raises(ValueError):
        partition_cuts(3, 1)


def test_partition_cuts_hold_on_intersecting_points():
    n = 3
    m = build_opt(n)
    inter = [c for c in m.constraints if c.label.startswith("inter")]
    off = (1 << n) - 1
    Y = all_binary_points(off)
    P = np.zeros((len(Y), m.num_vars), dtype=np.int64)
    P[:, off: 2 * off] = Y
    A, s, b = dense(m, inter)
    good = P[satisfied(A, s, b, P)]
    A, s, b = dense(m, partition_cuts(n, n))
    assert satisfied(A, s, b, good).all()


def test_partition_cut_dominates_pair_rows():
    n = 4
    full = (1 << n) - 1
    cuts = {c.label: c for c in partition_cuts(n, 3)}
    for s in range(1, full):
        for t in range(1, full):
            if s & t or s | t == full:
                continue
            rest = full & ~(s | t)
            blocks = sorted([s, t, rest])
            cut = cuts["part:" + "|".join(format_subset(x) for x in blocks)]
            coef = dict(cut.terms)
            assert coef[y_index(n, s)] == 1 and coef[y_index(n, t)] == 1 and cut.rhs == 1


# ----------------------------------------------------------------- red
def test_red5_fixings():
    m = build_red(5)
    fixed = [v for v in m.variables if v.fixed]
    assert len(fixed) == 31
    assert sum(1 for v in fixed if v.role == "x" and v.lb == 1) == 16
    assert sum(1 for v in fixed if v.role == "y" and v.lb == 0) == 15
    assert m.constraints[-1].label == "berge"
    assert m.constraints[:-1] == build_opt(5).constraints


def test_red4_fixes_all_of_four():
    m = build_red(4)
    for c in range(1, 16):
        v = m.variables[x_index(4, c)]
        assert v.fixed and v.lb == 1
    with pytest.raises(ValueError):
        build_red(3)


def test_red_free_counts():
    assert [model_stats(build_red(n))["free"] for n in (5, 6, 7, 8)] == [31, 88, 208, 455]


def test_red_points_are_opt_points():
    n = 4
    red, opt = build_red(n), build_opt(n)
    rng = np.random.default_rng(3)
    A, s, b = dense(red)
    Ao, so, bo = dense(opt)
    lo = np.array([int(v.lb) for v in red.variables])
    hi = np.array([1 if v.ub is None else int(v.ub) for v in red.variables])
    # sample points within the fixings, z at the largest star
    stars = np.array([[1 if (c >> i) & 1 else 0 for c in range(1, 16)] for i in range(n)])
    X = rng.integers(0, 2, size=(20000, red.num_vars))
    X = np.clip(X, lo, hi)
    X[:, z_index(n)] = (X[:, :15] @ stars.T).max(axis=1)
    feas = satisfied(A, s, b, X)
    assert satisfied(Ao, so, bo, X[feas]).all()


def test_level_fixings():
    base = build_red(5)
    one = Family.of(5, [(1, 2, 3, 5)])
    m = apply_level_fixings(base, 4, one)
    fours = [m.variables[x_index(5, c)] for c in range(32) if bin(c).count("1") == 4]
    assert sum(v.lb == 1 for v in fours) == 1 and sum(v.ub == 0 for v in fours) == 4
    assert not m.variables[x_index(5, subset(1, 2, 3))].fixed  # the x_[3] fixing is lifted
    assert m.variables[x_index(5, subset(1))].fixed  # singletons stay
    assert m.constraints == base.constraints
    with pytest.raises(LevelFixingConflict):
        apply_level_fixings(base, 4, Family(5, ()))
    with pytest.raises(ValueError):
        apply_level_fixings(base, 4, Family.of(5, [(1, 2, 3)]))
    with pytest.raises(ValueError):
        apply_level_fixings(base, 5, one)
    with pytest.raises(ValueError):
        apply_level_fixings(build_opt(5), 4, one)


def test_level_fixings_zero_family_below_four():
    # m = 4 with an empty family would zero x_[4] while the reduction fixes it to one
    with pytest.raises(LevelFixingConflict):
        apply_level_fixings(build_red(6), 4, Family(6, ()))
    m = apply_level_fixings(build_red(6), 5, Family(6, ()))
    assert all(m.variables[x_index(6, c)].ub == 0 for c in range(64) if bin(c).count("1") == 5)
    assert m.variables[x_index(6, 63)].ub == 1 and not m.variables[x_index(6, 63)].fixed


# ----------------------------------------------------------------- emit
def test_emit_round_trip_and_counts():
    for m in (build_opt(1), build_inf(3), build_red(5)):
        text = emit(m)
        c = certcheck.parse_model(text)
        assert certcheck.write_problem(c) == text
        assert [v.name for v in c.variables] == [v.name for v in m.variables]
        assert [(r.label, r.sense, r.rhs, r.terms) for r in c.constraints] == [
            (r.label, r.sense, r.rhs, r.terms) for r in m.constraints]
    assert len(certcheck.parse_model(emit(build_opt(1))).variables) == 3
    assert "VARS 63\n" in emit(build_opt(5))


def test_emit_reduces_rationals():
    v = (Variable("a", "int", Fraction(0), None),)
    m = Model(v, ((0, Fraction(2, 4)),), (LinearConstraint("r", "L", Fraction(6, 4), ((0, Fraction(2, 4)),)),))
    text = emit(m)
    assert "OBJ max 1 0 1/2" in text and "r L 3/2 1 0 1/2" in text
    assert "r: 1/2*a <= 3/2" in emit(m, "readable")


def test_builders_reject_bad_n():
    for bad in (0, 11):
        with pytest.raises(ValueError):
            build_opt(bad)
        with pytest.raises(ValueError):
            build_inf(bad)
