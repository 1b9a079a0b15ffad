"""Exact depth-first branch-and-bound with certificate emission.

Every node solves its LP relaxation exactly on one warm-started engine and
leaves a derivation behind: the LP dual bound on the objective (rounded down
when the objective is integral), a Farkas contradiction, or the resolution
of its two children.  Branching bounds are assumptions, so the root
derivation is assumption-free and proves the final bound.
"""
from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .certcheck import Certificate, Derivation, Row, Var
from .exactlp import BoundedSimplex, LpProblem
from .modelgen import Model
from .rational import format_rational

ONE = Fraction(1)


@dataclass(frozen=True)
class SolveResult:
    status: str  # optimal | infeasible | limit
    best_solution: tuple[Fraction, ...] | None
    best_objective: Fraction | None
    dual_bound: Fraction | None  # None: no bound proven (nothing solved)
    node_count: int
    certificate: Certificate | None = None
    bound_history: tuple[Fraction, ...] = field(default=(), repr=False)
    seconds: float = 0.0


class _Limit(Exception):
    pass


def model_to_lp(model: Model) -> LpProblem:
    return LpProblem(
        model.num_vars,
        tuple(c.terms for c in model.constraints),
        tuple(c.sense for c in model.constraints),
        tuple(c.rhs for c in model.constraints),
        tuple(v.lb for v in model.variables),
        tuple(v.ub for v in model.variables),
        model.objective,
    )


def _validate(model: Model) -> None:
    for v in model.variables:
        if v.kind not in ("bin", "int"):
            raise ValueError(f"variable {v.name}: unsupported kind {v.kind!r}")
        if v.lb.denominator != 1 or (v.ub is not None and v.ub.denominator != 1):
            raise ValueError(f"variable {v.name}: integer variables need integral bounds")
        if v.kind == "bin" and (v.lb < 0 or v.ub is None or v.ub > 1):
            raise ValueError(f"variable {v.name}: binary bounds must lie in [0, 1]")
        if v.ub is not None and v.ub < v.lb:
            raise ValueError(f"variable {v.name}: empty domain")


def problem_section(model: Model) -> Certificate:
    variables = tuple(Var(v.name, v.kind, v.lb, v.ub) for v in model.variables)
    rows = tuple(Row(c.label, c.sense, c.rhs, c.terms) for c in model.constraints)
    return Certificate(variables, model.objective, rows, ("range", None, None))


def star_gap(model: Model, x) -> Fraction | None:
    """``z - max_i sum_{S contains i} x_S`` for opt/red models, else ``None``."""
    if model.form not in ("opt", "red"):
        return None
    best = Fraction(0)
    zi = None
    for c in model.constraints:
        if c.label.startswith("star:"):
            s = sum((a * x[j] for j, a in c.terms if model.variables[j].role == "x"), Fraction(0))
            best = max(best, s)
    for j, v in enumerate(model.variables):
        if v.role == "z":
            zi = j
    return x[zi] - best


class _Search:
    def __init__(self, model: Model, time_limit, node_limit, progress):
        self.model = model
        self.lp = model_to_lp(model)
        self.engine = BoundedSimplex(self.lp)
        self.n = model.num_vars
        self.integral_obj = all(a.denominator == 1 for _, a in model.objective)
        self.lower = list(self.lp.lower)
        self.upper = list(self.lp.upper)
        # most recent assumption derivation for each side of each variable
        self.asm_lb: dict[int, list[int]] = {}
        self.asm_ub: dict[int, list[int]] = {}
        self.ders: list[Derivation] = []
        self.sols: list[tuple] = []
        self.best = None
        self.best_x = None
        self.nodes = 0
        self.history: list[Fraction] = []
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.node_limit = node_limit
        self.progress = progress
        # open-subtree bounds for the running dual bound: one slot per depth
        self.pending: list[Fraction | None] = []
        self.closed: Fraction | None = None

    # -------------------------------------------------------- bookkeeping
    def _add(self, der: Derivation) -> int:
        self.ders.append(der)
        return len(self.ders) - 1

    def _bound_row(self, value: Fraction, label: str) -> Row:
        return Row(label, "L", value, self.model.objective)

    def _refs_from_multipliers(self, mult, lower, upper):
        refs = []
        for i, y in enumerate(mult):
            if y:
                sense = self.lp.senses[i]
                refs.append((("C", i), -y if sense == "G" else y))
        for j in range(self.n):
            if lower[j]:
                stack = self.asm_lb.get(j)
                ref = ("D", stack[-1]) if stack else ("LB", j)
                refs.append((ref, -lower[j]))
            if upper[j]:
                stack = self.asm_ub.get(j)
                ref = ("D", stack[-1]) if stack else ("UB", j)
                refs.append((ref, upper[j]))
        refs.sort(key=lambda r: ({"C": 0, "LB": 1, "UB": 2, "D": 3}[r[0][0]], r[0][1]))
        return tuple(refs)

    def _dual_bound(self) -> Fraction | None:
        vals = [v for v in self.pending if v is not None]
        if self.closed is not None:
            vals.append(self.closed)
        if self.best is not None:
            vals.append(self.best)
        return max(vals) if vals else None

    def _record(self):
        b = self._dual_bound()
        if b is not None:
            if self.history and b > self.history[-1]:
                raise AssertionError("dual bound increased")
            self.history.append(b)

    def _check_limits(self):
        if self.node_limit is not None and self.nodes >= self.node_limit:
            raise _Limit()
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _Limit()

    def _close(self, value: Fraction | None):
        if value is not None:
            self.closed = value if self.closed is None else max(self.closed, value)

    # -------------------------------------------------------------- search
    def node(self, depth: int) -> tuple[int, Fraction | None]:
        """Solve the subtree under the current bounds; returns (derivation, bound or None if infeasible)."""
        self._check_limits()
        self.nodes += 1
        label = f"n{self.nodes}"
        self.engine.set_bounds(self.lower, self.upper)
        out = self.engine.solve()
        if self.progress and self.nodes % 100 == 0:
            inc = "-" if self.best is None else format_rational(self.best)
            bnd = self._dual_bound()
            print(f"nodes={self.nodes} dual_bound={'-' if bnd is None else format_rational(bnd)} incumbent={inc}",
                  file=sys.stderr)
        if out.status == "unbounded":
            raise ValueError("LP relaxation is unbounded; only bounded relaxations are supported")
        if out.status == "infeasible":
            refs = self._refs_from_multipliers(out.farkas, out.farkas_lower, out.farkas_upper)
            d = self._add(Derivation(Row(f"{label}_infeas", "L", Fraction(-1), ()), "lin", refs=refs))
            return d, None
        value = out.value
        bound = Fraction(floor(value)) if self.integral_obj else value
        refs = self._refs_from_multipliers(out.dual, out.dual_lower, out.dual_upper)

        def leaf():
            rule = "rnd" if bound != value else "lin"
            return self._add(Derivation(self._bound_row(bound, f"{label}_bound"), rule, refs=refs)), bound

        x = out.primal
        frac = [j for j in range(self.n) if x[j].denominator != 1]
        if not frac:
            if self.best is None or value > self.best:
                self.best, self.best_x = value, x
                self.sols.append(tuple((j, v) for j, v in enumerate(x) if v))
            return leaf()
        if self.best is not None and bound <= self.best:
            return leaf()
        # most fractional, lowest index on ties
        half = Fraction(1, 2)
        j = min(frac, key=lambda k: (abs(x[k] - floor(x[k]) - half), k))
        lo = floor(x[j])
        results = []
        self.pending.append(bound)
        for side in ("down", "up"):
            if side == "down":
                row = Row(f"{label}d", "L", Fraction(lo), ((j, ONE),))
                saved = self.upper[j]
                self.upper[j] = Fraction(lo)
                stack = self.asm_ub
            else:
                row = Row(f"{label}u", "G", Fraction(lo + 1), ((j, ONE),))
                saved = self.lower[j]
                self.lower[j] = Fraction(lo + 1)
                stack = self.asm_lb
            a = self._add(Derivation(row, "asm"))
            stack.setdefault(j, []).append(a)
            try:
                d, b = self.node(depth + 1)
            finally:
                stack[j].pop()
                if side == "down":
                    self.upper[j] = saved
                else:
                    self.lower[j] = saved
            results.append((d, a, b))
            self._close(b)
            self._record()
        self.pending.pop()
        (d1, a1, b1), (d2, a2, b2) = results
        if b1 is None and b2 is None:
            stated, out_bound = Row(f"{label}_infeas", "L", Fraction(-1), ()), None
        else:
            out_bound = max(b for b in (b1, b2) if b is not None)
            stated = self._bound_row(out_bound, f"{label}_bound")
        return self._add(Derivation(stated, "uns", uns=(d1, a1, d2, a2))), out_bound


def solve_ip(model: Model, time_limit: float | None = None, node_limit: int | None = None,
             progress: bool = False) -> SolveResult:
    """Maximise ``model`` exactly; on completion the result carries a certificate."""
    _validate(model)
    start = time.monotonic()
    s = _Search(model, time_limit, node_limit, progress)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20 * model.num_vars + 1000))
    try:
        _, bound = s.node(0)
    except _Limit:
        bound = s._dual_bound()
        return SolveResult("limit", s.best_x, s.best, bound, s.nodes, None, tuple(s.history),
                           time.monotonic() - start)
    finally:
        sys.setrecursionlimit(limit)
    base = problem_section(model)
    sols = tuple(s.sols)
    if bound is None:
        cert = Certificate(base.variables, base.objective, base.constraints, ("infeas",), sols, tuple(s.ders))
        return SolveResult("infeasible", None, None, None, s.nodes, cert, tuple(s.history),
                           time.monotonic() - start)
    if s.best != bound:
        raise AssertionError(f"final bound {bound} does not match incumbent {s.best}")
    if not s.history or s.history[-1] != bound:
        s.history.append(bound)
    gap = star_gap(model, s.best_x)
    if gap is not None and gap != 0:
        raise AssertionError(f"optimal solution has z above the largest star (gap {gap})")
    cert = Certificate(base.variables, base.objective, base.constraints, ("range", bound, bound), sols,
                       tuple(s.ders))
    return SolveResult("optimal", s.best_x, s.best, bound, s.nodes, cert, tuple(s.history),
                       time.monotonic() - start)
