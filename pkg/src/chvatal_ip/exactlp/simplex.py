"""Exact bounded-variable simplex on an integer-preserving tableau.

Internally every row is scaled to integers (``>=`` rows negated) and gets a
slack: ``[0, inf)`` for inequalities, ``[0, 0]`` for equalities.  The tableau
holds ``d * B^-1 [A | I]`` restricted to nonbasic columns, where ``d`` is the
absolute basis determinant, so everything is an integer:

    d * x_B = beta - T x_N          (row 0: d * objective)

Nonbasic variables sit at a finite bound.  Values are kept scaled by
``d * L`` where ``L`` clears the denominators of the bounds.

Solves run dual simplex from the current basis whenever it can be made dual
feasible by choosing bound sides, which is always the case when bounds are
tightened in branch-and-bound.  Otherwise a zero-objective dual simplex finds
a feasible basis (or a Farkas proof) and primal simplex finishes.  Both
phases fall back to Bland's smallest-index rule after a run of degenerate
pivots, which guarantees termination.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..rational import lcm_of_denominators
from ._pivot import SAFE, VALUE_SAFE, basic_values, pivot
from .problem import LpOutcome, LpProblem

ZERO = Fraction(0)
DEGENERATE_LIMIT = 50


class BoundedSimplex:
    """Stateful solver; the basis survives :meth:`set_bounds` for warm starts."""

    def __init__(self, problem: LpProblem):
        self.problem = problem
        n, m = problem.num_vars, len(problem.rows)
        self.n, self.m = n, m
        self.row_den = []
        rows_int = []
        b_int = []
        for terms, sense, b in zip(problem.rows, problem.senses, problem.rhs):
            den = lcm_of_denominators([a for _, a in terms] + [b])
            sgn = -den if sense == "G" else den
            row = [0] * n
            for j, a in terms:
                row[j] = int(a * sgn)
            rows_int.append(row)
            b_int.append(int(b * sgn))
            self.row_den.append(den)
        self.obj_den = lcm_of_denominators([a for _, a in problem.objective])
        c_int = [0] * (n + m)
        for j, a in problem.objective:
            c_int[j] = int(a * self.obj_den)
        biggest = max([abs(v) for row in rows_int for v in row] + [abs(v) for v in b_int + c_int] + [1])
        self.object_mode = biggest >= SAFE
        dtype = object if self.object_mode else np.int64

        self.A0 = np.array(rows_int, dtype=dtype).reshape(m, n)
        self.b0 = np.array(b_int, dtype=dtype)
        self.c_all = np.array(c_int, dtype=dtype)
        self.T = np.zeros((m + 1, n), dtype=dtype)
        self.T[0] = -self.c_all[:n]
        self.T[1:] = self.A0
        self.beta = np.zeros(m + 1, dtype=dtype)
        self.beta[1:] = self.b0
        self.d = 1
        self.maxabs = biggest
        self.basis = np.arange(n, n + m, dtype=np.int64)
        self.nonbasic = np.arange(n, dtype=np.int64)
        self.at_upper = np.zeros(n + m, dtype=bool)
        self.slack_fixed = np.array([s == "E" for s in problem.senses], dtype=bool)
        self.iterations = 0
        self.set_bounds(problem.lower, problem.upper)

    # ----------------------------------------------------------------- setup
    def set_bounds(self, lower, upper) -> None:
        n, m = self.n, self.m
        lower = tuple(Fraction(v) for v in lower)
        upper = tuple(None if v is None else Fraction(v) for v in upper)
        if len(lower) != n or len(upper) != n:
            raise ValueError("bound vectors must have one entry per variable")
        for lo, hi in zip(lower, upper):
            if hi is not None and hi < lo:
                raise ValueError(f"empty bound interval [{lo}, {hi}]")
        self.lower, self.upper = lower, upper
        self.L = lcm_of_denominators([v for v in lower] + [v for v in upper if v is not None])
        lbL = [int(v * self.L) for v in lower] + [0] * m
        ubL = [0 if v is None else int(v * self.L) for v in upper] + [0] * m
        biggest = max([abs(v) for v in lbL + ubL] + [self.L])
        if biggest >= SAFE and not self.object_mode:
            self._to_object()
        dtype = object if self.object_mode else np.int64
        self.lbL = np.array(lbL, dtype=dtype)
        self.ubL = np.array(ubL, dtype=dtype)
        self.has_ub = np.concatenate([np.array([v is not None for v in upper], dtype=bool), self.slack_fixed])
        self.fixed = self.has_ub & (self.lbL == self.ubL)
        self.bound_scale = biggest

    def _to_object(self) -> None:
        self.object_mode = True
        for name in ("A0", "b0", "c_all", "T", "beta", "lbL", "ubL"):
            arr = getattr(self, name, None)
            if arr is not None:
                setattr(self, name, np.array([int(v) for v in arr.ravel()], dtype=object).reshape(arr.shape))

    def _check_scale(self) -> None:
        if not self.object_mode and (self.maxabs >= SAFE or self.d >= SAFE):
            self._to_object()

    def _pivot(self, row: int, col: int) -> None:
        self._check_scale()
        self.d, maxabs = pivot(self.T, self.beta, self.d, row + 1, col)
        if maxabs is not None:
            self.maxabs = maxabs
        leaving = self.basis[row]
        self.basis[row] = self.nonbasic[col]
        self.nonbasic[col] = leaving
        self.iterations += 1

    def _nonbasic_values(self):
        nb = self.nonbasic
        return np.where(self.at_upper[nb], self.ubL[nb], self.lbL[nb])

    def _values(self):
        v = self._nonbasic_values()
        if not self.object_mode:
            vsum = int(np.abs(v).sum())
            if self.maxabs * max(vsum, 1) + self.L * self.maxabs >= VALUE_SAFE or self.d * self.bound_scale >= VALUE_SAFE:
                self._to_object()
                v = self._nonbasic_values()
        return basic_values(self.T, self.beta, v, self.L)

    def _set_objective(self, c_all) -> None:
        if not self.object_mode:
            cmax = int(np.abs(c_all).max(initial=0))
            if cmax * max(self.m, 1) * max(self.maxabs, self.d) >= VALUE_SAFE:
                self._to_object()
                c_all = np.array([int(v) for v in c_all], dtype=object)
        cb = c_all[self.basis]
        self.T[0] = cb @ self.T[1:] - self.d * c_all[self.nonbasic] if self.m else -self.d * c_all[self.nonbasic]
        self.beta[0] = cb @ self.beta[1:] if self.m else 0
        if not self.object_mode:
            self.maxabs = max(self.maxabs, int(np.abs(self.T[0]).max(initial=0)), abs(int(self.beta[0])))

    # ------------------------------------------------------------- iterations
    def _dual_simplex(self):
        """Returns ``("optimal", r)`` or ``("infeasible", row, sigma)``."""
        degenerate = 0
        bland = False
        while True:
            r = self._values()
            rb = r[1:]
            bas = self.basis
            lo = self.d * self.lbL[bas]
            hi = self.d * self.ubL[bas]
            below = rb < lo
            above = self.has_ub[bas] & (rb > hi)
            infeasible = np.nonzero(below | above)[0]
            if infeasible.size == 0:
                return ("optimal", r)
            if bland:
                row = int(infeasible[np.argmin(bas[infeasible])])
            else:
                amount = np.where(below, lo - rb, rb - hi)[infeasible]
                top = amount.max()
                ties = infeasible[amount == top]
                row = int(ties[np.argmin(bas[ties])])
            sigma = 1 if below[row] else -1
            trow = self.T[row + 1]
            nb = self.nonbasic
            atup = self.at_upper[nb]
            s = trow * sigma
            eligible = ~self.fixed[nb] & ((~atup & (s < 0)) | (atup & (s > 0)))
            cand = np.nonzero(eligible)[0]
            if cand.size == 0:
                return ("infeasible", row, sigma)
            t0 = self.T[0]
            best = None
            for j in cand.tolist():
                num = abs(int(t0[j]))
                den = abs(int(trow[j]))
                if best is None:
                    best = (j, num, den)
                    continue
                _, bn, bd = best
                lhs, rhs = num * bd, bn * den
                if lhs < rhs or (lhs == rhs and nb[j] < nb[best[0]]):
                    best = (j, num, den)
            q = best[0]
            degenerate = degenerate + 1 if best[1] == 0 else 0
            if degenerate > DEGENERATE_LIMIT:
                bland = True
            leaving = int(bas[row])
            self._pivot(row, q)
            self.at_upper[leaving] = sigma < 0

    def _primal_simplex(self):
        """Returns ``("optimal", r)`` or ``("unbounded", col, delta, r)``; needs a feasible basis."""
        degenerate = 0
        bland = False
        while True:
            r = self._values()
            t0 = self.T[0]
            nb = self.nonbasic
            atup = self.at_upper[nb]
            improving = ~self.fixed[nb] & ((~atup & (t0 < 0)) | (atup & (t0 > 0)))
            cand = np.nonzero(improving)[0]
            if cand.size == 0:
                return ("optimal", r)
            if bland:
                q = int(cand[np.argmin(nb[cand])])
            else:
                mag = np.abs(t0[cand])
                top = mag.max()
                ties = cand[mag == top]
                q = int(ties[np.argmin(nb[ties])])
            delta = -1 if atup[q] else 1
            qvar = int(nb[q])
            col = self.T[1:, q]
            rb = r[1:]
            bas = self.basis
            best = None  # (num, den, tiebreak, row or -1)
            if self.has_ub[qvar]:
                best = (int(self.ubL[qvar] - self.lbL[qvar]), 1, -1, -1)
            dcol = col * delta
            dec = np.nonzero(dcol > 0)[0]
            inc = np.nonzero((dcol < 0) & self.has_ub[bas])[0]
            cands = [(int(rb[i] - self.d * self.lbL[bas[i]]), abs(int(col[i])), int(bas[i]), int(i)) for i in dec.tolist()]
            cands += [(int(self.d * self.ubL[bas[i]] - rb[i]), abs(int(col[i])), int(bas[i]), int(i)) for i in inc.tolist()]
            for c in cands:
                if best is None:
                    best = c
                    continue
                lhs, rhs = c[0] * best[1], best[0] * c[1]
                if lhs < rhs or (lhs == rhs and best[3] != -1 and c[2] < best[2]):
                    best = c
            if best is None:
                return ("unbounded", q, delta, r)
            degenerate = degenerate + 1 if best[0] == 0 else 0
            if degenerate > DEGENERATE_LIMIT:
                bland = True
            if best[3] == -1:
                self.at_upper[qvar] = not self.at_upper[qvar]
                self.iterations += 1
                continue
            row = best[3]
            leaving = int(bas[row])
            self._pivot(row, q)
            # the leaving variable stops at the bound it hit
            self.at_upper[leaving] = bool(dcol[row] < 0)

    # ------------------------------------------------------------------ solve
    def solve(self) -> LpOutcome:
        self.iterations = 0
        nb = self.nonbasic
        self.at_upper[nb] &= self.has_ub[nb] & ~self.fixed[nb]
        t0 = self.T[0]
        atup = self.at_upper[nb]
        free = ~self.fixed[nb]
        wrong_lower = free & ~atup & (t0 < 0)
        wrong_upper = free & atup & (t0 > 0)
        flip = wrong_lower & self.has_ub[nb]
        self.at_upper[nb[flip]] = True
        self.at_upper[nb[wrong_upper]] = False
        stuck = wrong_lower & ~self.has_ub[nb]
        if not stuck.any():
            res = self._dual_simplex()
            if res[0] == "infeasible":
                return self._farkas(res[1], res[2])
            return self._optimal(res[1])
        dtype = object if self.object_mode else np.int64
        self._set_objective(np.zeros(self.n + self.m, dtype=dtype))
        res = self._dual_simplex()
        self._set_objective(self.c_all)
        if res[0] == "infeasible":
            return self._farkas(res[1], res[2])
        res = self._primal_simplex()
        if res[0] == "unbounded":
            return self._unbounded(*res[1:])
        return self._optimal(res[1])

    # ------------------------------------------------------------- extraction
    def _point(self, r) -> list[Fraction]:
        x = [None] * self.n
        scale = self.d * self.L
        for i, var in enumerate(self.basis.tolist()):
            if var < self.n:
                x[var] = Fraction(int(r[i + 1]), scale)
        for var in self.nonbasic.tolist():
            if var < self.n:
                x[var] = self.upper[var] if self.at_upper[var] else self.lower[var]
        return x

    def _optimal(self, r) -> LpOutcome:
        n, m = self.n, self.m
        scale = self.d * self.obj_den
        dual = [ZERO] * m
        lower = [ZERO] * n
        upper = [ZERO] * n
        t0 = self.T[0]
        for col, var in enumerate(self.nonbasic.tolist()):
            a = int(t0[col])
            if a == 0:
                continue
            if var >= n:
                k = var - n
                dual[k] = Fraction(a * self.row_den[k], scale)
            else:
                rc = Fraction(-a, scale)
                if rc > 0:
                    upper[var] = rc
                else:
                    lower[var] = -rc
        value = Fraction(int(r[0]), self.d * self.L * self.obj_den)
        return LpOutcome("optimal", value=value, primal=tuple(self._point(r)), dual=tuple(dual),
                         dual_lower=tuple(lower), dual_upper=tuple(upper), iterations=self.iterations)

    def _farkas(self, row: int, sigma: int) -> LpOutcome:
        n, m = self.n, self.m
        y = np.zeros(m, dtype=object)
        trow = self.T[row + 1]
        for col, var in enumerate(self.nonbasic.tolist()):
            if var >= n and trow[col] != 0:
                y[var - n] = sigma * int(trow[col])
        bvar = int(self.basis[row])
        if bvar >= n:
            y[bvar - n] = sigma * self.d
        nz = np.nonzero(y)[0]
        g = [0] * n
        rhs = 0
        for k in nz.tolist():
            yk = int(y[k])
            rhs += yk * int(self.b0[k])
            for j in np.nonzero(self.A0[k])[0].tolist():
                g[j] += yk * int(self.A0[k, j])
        total = Fraction(rhs)
        lower = [ZERO] * n
        upper = [ZERO] * n
        for j, gj in enumerate(g):
            if gj > 0:
                lower[j] = Fraction(gj)
                total -= gj * self.lower[j]
            elif gj < 0:
                if self.upper[j] is None:
                    raise AssertionError("Farkas row needs a missing upper bound")
                upper[j] = Fraction(-gj)
                total += -gj * self.upper[j]
        if total >= 0:
            raise AssertionError(f"Farkas aggregation does not yield a contradiction (rhs {total})")
        norm = -total
        farkas = [ZERO] * m
        for k in nz.tolist():
            farkas[k] = Fraction(int(y[k]) * self.row_den[k]) / norm
        return LpOutcome("infeasible", farkas=tuple(farkas),
                         farkas_lower=tuple(v / norm for v in lower),
                         farkas_upper=tuple(v / norm for v in upper), iterations=self.iterations)

    def _unbounded(self, q: int, delta: int, r) -> LpOutcome:
        ray = [ZERO] * self.n
        qvar = int(self.nonbasic[q])
        if qvar < self.n:
            ray[qvar] = Fraction(delta)
        col = self.T[1:, q]
        for i, var in enumerate(self.basis.tolist()):
            if var < self.n and col[i] != 0:
                ray[var] = Fraction(-delta * int(col[i]), self.d)
        return LpOutcome("unbounded", primal=tuple(self._point(r)), ray=tuple(ray), iterations=self.iterations)


def solve_lp(problem: LpProblem) -> LpOutcome:
    """Solve ``problem`` exactly from a slack basis."""
    return BoundedSimplex(problem).solve()
