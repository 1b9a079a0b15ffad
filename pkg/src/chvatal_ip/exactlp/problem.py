from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

Terms = tuple[tuple[int, Fraction], ...]


class MalformedProblemError(ValueError):
    """The LP itself is ill-formed (not merely infeasible)."""


@dataclass(frozen=True)
class LpProblem:
    """``max c.x`` subject to sparse rows ``a_i.x (<=|>=|=) b_i`` and ``lb <= x <= ub``.

    ``upper[j] is None`` means no upper bound; every lower bound is finite.
    """

    num_vars: int
    rows: tuple[Terms, ...]
    senses: tuple[str, ...]
    rhs: tuple[Fraction, ...]
    lower: tuple[Fraction, ...]
    upper: tuple[Fraction | None, ...]
    objective: Terms

    def __post_init__(self):
        validate(self)

    @classmethod
    def build(cls, num_vars, rows, senses, rhs, lower, upper, objective):
        def q(v):
            if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
                raise MalformedProblemError(f"expected an exact rational, got {v!r}")
            return Fraction(v)

        def terms(t):
            items = t.items() if isinstance(t, dict) else t
            return tuple(sorted((int(j), q(a)) for j, a in items if a != 0))

        return cls(
            num_vars,
            tuple(terms(r) for r in rows),
            tuple(senses),
            tuple(q(b) for b in rhs),
            tuple(q(v) for v in lower),
            tuple(None if v is None else q(v) for v in upper),
            terms(objective),
        )


def validate(p: LpProblem) -> None:
    n = p.num_vars
    if not isinstance(n, int) or n < 0:
        raise MalformedProblemError(f"num_vars must be a nonnegative int, got {n!r}")
    m = len(p.rows)
    if len(p.senses) != m or len(p.rhs) != m:
        raise MalformedProblemError(f"{m} rows but {len(p.senses)} senses and {len(p.rhs)} right-hand sides")
    if len(p.lower) != n or len(p.upper) != n:
        raise MalformedProblemError(f"{n} variables but {len(p.lower)} lower and {len(p.upper)} upper bounds")
    for s in p.senses:
        if s not in ("L", "G", "E"):
            raise MalformedProblemError(f"unknown sense {s!r}")
    for v in p.rhs + p.lower:
        if not isinstance(v, Fraction):
            raise MalformedProblemError(f"expected Fraction, got {v!r}")
    for j, (lo, hi) in enumerate(zip(p.lower, p.upper)):
        if hi is not None and not isinstance(hi, Fraction):
            raise MalformedProblemError(f"expected Fraction upper bound, got {hi!r}")
        if hi is not None and hi < lo:
            raise MalformedProblemError(f"variable {j}: upper bound {hi} below lower bound {lo}")
    for terms in p.rows + (p.objective,):
        prev = -1
        for j, a in terms:
            if not 0 <= j < n:
                raise MalformedProblemError(f"column index {j} out of range [0, {n})")
            if j <= prev:
                raise MalformedProblemError("term indices must be strictly increasing")
            if not isinstance(a, Fraction):
                raise MalformedProblemError(f"expected Fraction coefficient, got {a!r}")
            prev = j


@dataclass(frozen=True)
class LpOutcome:
    """Result of an exact LP solve.

    Multipliers use the ``<=`` orientation: a ``>=`` row is read as
    ``-a.x <= -b``.  Row multipliers are then nonnegative except on equality
    rows.  ``*_lower`` and ``*_upper`` are nonnegative weights on
    ``-x_j <= -lb_j`` and ``x_j <= ub_j``.

    optimal:    ``sum dual_i a_i + dual_upper - dual_lower == c`` and the same
                combination of right-hand sides equals ``value``.
    infeasible: the ``farkas`` combination has zero coefficients and
                right-hand side exactly ``-1``.
    unbounded:  ``primal`` is feasible and ``ray`` is an improving recession
                direction.
    """

    status: str
    value: Fraction | None = None
    primal: tuple[Fraction, ...] | None = None
    dual: tuple[Fraction, ...] | None = None
    dual_lower: tuple[Fraction, ...] | None = None
    dual_upper: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None
    farkas_lower: tuple[Fraction, ...] | None = None
    farkas_upper: tuple[Fraction, ...] | None = None
    ray: tuple[Fraction, ...] | None = None
    iterations: int = field(default=0, compare=False)
