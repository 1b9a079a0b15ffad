"""Exact checks of an :class:`LpOutcome` against its problem."""
from __future__ import annotations

from fractions import Fraction

from .problem import LpOutcome, LpProblem


def _normalized(p: LpProblem):
    for terms, sense, b in zip(p.rows, p.senses, p.rhs):
        if sense == "G":
            yield tuple((j, -a) for j, a in terms), -b, sense
        else:
            yield terms, b, sense


def _row_value(terms, x) -> Fraction:
    return sum((a * x[j] for j, a in terms), Fraction(0))


def is_feasible(p: LpProblem, x) -> bool:
    for j, v in enumerate(x):
        if v < p.lower[j] or (p.upper[j] is not None and v > p.upper[j]):
            return False
    for terms, sense, b in zip(p.rows, p.senses, p.rhs):
        lhs = _row_value(terms, x)
        if (sense == "L" and lhs > b) or (sense == "G" and lhs < b) or (sense == "E" and lhs != b):
            return False
    return True


def _combine(p: LpProblem, mult, lower, upper):
    """Aggregate ``sum mult_i row_i + upper.x - lower.x`` in the <= orientation."""
    coef = [Fraction(0)] * p.num_vars
    rhs = Fraction(0)
    for y, (terms, b, sense) in zip(mult, _normalized(p)):
        if y == 0:
            continue
        if y < 0 and sense != "E":
            raise AssertionError("negative multiplier on an inequality row")
        for j, a in terms:
            coef[j] += y * a
        rhs += y * b
    for j in range(p.num_vars):
        if lower[j] < 0 or upper[j] < 0:
            raise AssertionError("negative bound multiplier")
        if upper[j]:
            if p.upper[j] is None:
                raise AssertionError("multiplier on a missing upper bound")
            coef[j] += upper[j]
            rhs += upper[j] * p.upper[j]
        if lower[j]:
            coef[j] -= lower[j]
            rhs -= lower[j] * p.lower[j]
    return coef, rhs


def check_outcome(p: LpProblem, out: LpOutcome) -> None:
    """Raise ``AssertionError`` unless ``out`` is exactly certified."""
    if out.status == "optimal":
        assert is_feasible(p, out.primal), "primal point infeasible"
        c = [Fraction(0)] * p.num_vars
        for j, a in p.objective:
            c[j] = a
        assert sum(a * out.primal[j] for j, a in p.objective) == out.value, "objective value mismatch"
        coef, rhs = _combine(p, out.dual, out.dual_lower, out.dual_upper)
        assert coef == c, "dual combination does not reproduce the objective"
        assert rhs == out.value, "duality gap is not zero"
    elif out.status == "infeasible":
        coef, rhs = _combine(p, out.farkas, out.farkas_lower, out.farkas_upper)
        assert all(v == 0 for v in coef), "Farkas combination has nonzero coefficients"
        assert rhs == -1, "Farkas right-hand side is not -1"
    elif out.status == "unbounded":
        assert is_feasible(p, out.primal), "primal point infeasible"
        r = out.ray
        for j, v in enumerate(r):
            assert v >= 0, "ray decreases a variable with a finite lower bound"
            assert p.upper[j] is None or v <= 0, "ray increases a bounded variable"
        for terms, b, sense in _normalized(p):
            lhs = _row_value(terms, r)
            assert lhs <= 0 and (sense != "E" or lhs == 0), "ray leaves the feasible region"
        assert sum(a * r[j] for j, a in p.objective) > 0, "ray does not improve the objective"
    else:
        raise AssertionError(f"unknown status {out.status!r}")
