"""Exact integer programs for Chvátal's conjecture over a ground set ``[n]``.

Three formulations are built here:

``inf``  a downset ``x`` and an intersecting family ``y ⊆ x`` larger than
         every star; feasible exactly when a counterexample exists.
``opt``  maximise ``|y| - z`` where ``z`` bounds every star of the downset
         generated by ``y``; optimum zero exactly when no counterexample exists.
``red``  ``opt`` plus the Berge cut ``2|y| <= |x|`` and the standard fixings
         (small ``y`` sets to 0, singletons and subsets of ``[4]`` in ``x``).

There is no variable for the empty set.  Variables are ordered ``x`` by
subset code, then ``y`` by subset code, then ``z``.  Fixings are expressed
as ``lb == ub`` and never remove a variable, so every ``red`` variant shares
one constraint matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .rational import format_rational
from .setcore import Family, format_subset, popcount, subsets_of_size

ONE = Fraction(1)
ZERO = Fraction(0)
SENSES = ("L", "G", "E")
_SENSE_SYMBOL = {"L": "<=", "G": ">=", "E": "="}


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # "bin" or "int"
    lb: Fraction
    ub: Fraction | None  # None is +inf
    role: str | None = field(default=None, compare=False)
    subset: int | None = field(default=None, compare=False)

    @property
    def fixed(self) -> bool:
        return self.ub is not None and self.lb == self.ub


@dataclass(frozen=True)
class LinearConstraint:
    label: str
    sense: str
    rhs: Fraction
    terms: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        if self.sense not in SENSES:
            raise ValueError(f"unknown sense {self.sense!r}")
        prev = -1
        for j, a in self.terms:
            if j <= prev:
                raise ValueError(f"{self.label}: term indices must strictly increase")
            if a == 0:
                raise ValueError(f"{self.label}: zero coefficient on column {j}")
            prev = j


@dataclass(frozen=True)
class Model:
    variables: tuple[Variable, ...]
    objective: tuple[tuple[int, Fraction], ...]
    constraints: tuple[LinearConstraint, ...]
    name: str = field(default="model", compare=False)
    n: int = field(default=0, compare=False)
    form: str | None = field(default=None, compare=False)
    level: tuple | None = field(default=None, compare=False)  # (m, Family) for level-fixed red

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    def index_of(self, name: str) -> int:
        lookup = self.__dict__.get("_names")
        if lookup is None:
            lookup = {v.name: i for i, v in enumerate(self.variables)}
            object.__setattr__(self, "_names", lookup)
        return lookup[name]

    def objective_value(self, values) -> Fraction:
        return sum((a * values[j] for j, a in self.objective), ZERO)

    def with_constraints(self, extra) -> "Model":
        return Model(self.variables, self.objective, self.constraints + tuple(extra),
                     name=self.name, n=self.n, form=self.form, level=self.level)


def x_name(code: int) -> str:
    return "x" + format_subset(code)


def y_name(code: int) -> str:
    return "y" + format_subset(code)


def x_index(n: int, code: int) -> int:
    return code - 1


def y_index(n: int, code: int) -> int:
    return (1 << n) - 1 + code - 1


def z_index(n: int) -> int:
    return 2 * ((1 << n) - 1)


def _check_n(n: int, low: int = 1) -> None:
    if not isinstance(n, int) or not low <= n <= 10:
        raise ValueError(f"n must be an integer in [{low}, 10], got {n!r}")


def _xy_variables(n: int) -> list[Variable]:
    codes = range(1, 1 << n)
    out = [Variable(x_name(c), "bin", ZERO, ONE, "x", c) for c in codes]
    out += [Variable(y_name(c), "bin", ZERO, ONE, "y", c) for c in codes]
    return out


def _row(label, sense, rhs, coeffs: dict) -> LinearConstraint:
    terms = tuple((j, Fraction(a)) for j, a in sorted(coeffs.items()) if a != 0)
    return LinearConstraint(label, sense, Fraction(rhs), terms)


def _intersecting_rows(n: int) -> list[LinearConstraint]:
    rows = []
    codes = range(1, 1 << n)
    for t in codes:
        for s in codes:
            if s & t == 0:
                rows.append(_row(f"inter:{format_subset(t)}:{format_subset(s)}", "L", 1,
                                 {y_index(n, t): 1, y_index(n, s): 1}))
    return rows


def build_inf(n: int) -> Model:
    _check_n(n)
    codes = range(1, 1 << n)
    variables = _xy_variables(n)
    objective = tuple((x_index(n, c), ONE) for c in codes)
    rows = []
    for t in codes:
        for s in codes:
            if s != t and s & t == s:
                rows.append(_row(f"down:{format_subset(t)}:{format_subset(s)}", "L", 0,
                                 {x_index(n, t): 1, x_index(n, s): -1}))
    rows += _intersecting_rows(n)
    for s in codes:
        rows.append(_row(f"cont:{format_subset(s)}", "L", 0, {y_index(n, s): 1, x_index(n, s): -1}))
    for i in range(1, n + 1):
        coeffs = {y_index(n, c): -1 for c in codes}
        coeffs.update({x_index(n, c): 1 for c in codes if c >> (i - 1) & 1})
        rows.append(_row(f"star:{i}", "L", -1, coeffs))
    return Model(tuple(variables), objective, tuple(rows), name=f"inf{n}", n=n, form="inf")


def _opt_parts(n: int):
    codes = range(1, 1 << n)
    variables = _xy_variables(n)
    variables.append(Variable("z", "int", ZERO, None, "z", None))
    objective = tuple((y_index(n, c), ONE) for c in codes) + ((z_index(n), -ONE),)
    rows = _intersecting_rows(n)
    for i in range(1, n + 1):
        coeffs = {x_index(n, c): 1 for c in codes if c >> (i - 1) & 1}
        coeffs[z_index(n)] = -1
        rows.append(_row(f"star:{i}", "L", 0, coeffs))
    for t in codes:
        for s in codes:
            if s & t == s:
                rows.append(_row(f"gen:{format_subset(s)}:{format_subset(t)}", "L", 0,
                                 {y_index(n, t): 1, x_index(n, s): -1}))
    return variables, objective, rows


def build_opt(n: int) -> Model:
    _check_n(n)
    variables, objective, rows = _opt_parts(n)
    return Model(tuple(variables), objective, tuple(rows), name=f"opt{n}", n=n, form="opt")


def berge_cut(n: int) -> LinearConstraint:
    codes = range(1, 1 << n)
    coeffs = {y_index(n, c): 2 for c in codes}
    coeffs.update({x_index(n, c): -1 for c in codes})
    return _row("berge", "L", 0, coeffs)


def _fix(variables: list[Variable], j: int, value: Fraction) -> None:
    v = variables[j]
    if v.fixed and v.lb != value:
        raise LevelFixingConflict(f"{v.name} already fixed to {format_rational(v.lb)}, cannot fix to {format_rational(value)}")
    variables[j] = Variable(v.name, v.kind, value, value, v.role, v.subset)


class LevelFixingConflict(ValueError):
    pass


def _red_fixings(n: int, keep_four: bool) -> dict[int, Fraction]:
    fix = {}
    for c in range(1, 1 << n):
        if 1 <= popcount(c) <= 2:
            fix[y_index(n, c)] = ZERO
        if popcount(c) == 1:
            fix[x_index(n, c)] = ONE
        if keep_four and c & ~0b1111 == 0:
            fix[x_index(n, c)] = ONE
    return fix


def _red_model(n: int, fixings: dict[int, Fraction], name: str, level=None) -> Model:
    variables, objective, rows = _opt_parts(n)
    rows.append(berge_cut(n))
    for j, v in sorted(fixings.items()):
        _fix(variables, j, v)
    return Model(tuple(variables), objective, tuple(rows), name=name, n=n, form="red", level=level)


def build_red(n: int) -> Model:
    _check_n(n, low=4)
    return _red_model(n, _red_fixings(n, keep_four=True), f"red{n}")


def apply_level_fixings(base: Model, m: int, fix_family: Family) -> Model:
    """Split ``red`` by which ``m``-sets the downset contains.

    ``x_S = 1`` for ``S`` in ``fix_family``, ``x_S = 0`` for the other
    ``m``-sets and for every ``S`` with ``m < |S| <= n - 1``.  A nonempty
    family drops the ``[4]`` fixings; an empty one keeps them, and a zero
    fixing on a subset of ``[4]`` then raises :class:`LevelFixingConflict`.
    """
    n = base.n
    if base.form != "red" or base.level is not None:
        raise ValueError("apply_level_fixings expects a plain build_red(n) model")
    if base != build_red(n):
        raise ValueError("base model differs from build_red(n)")
    if not 4 <= m <= n - 1:
        raise ValueError(f"m must lie in [4, n-1] = [4, {n - 1}], got {m}")
    if fix_family.n != n:
        raise ValueError(f"family is over [{fix_family.n}], model over [{n}]")
    for c in fix_family.members:
        if popcount(c) != m:
            raise ValueError(f"family member {format_subset(c)} does not have size {m}")
    k = len(fix_family)
    fixings = _red_fixings(n, keep_four=(k == 0))
    chosen = set(fix_family.members)
    level = {}
    for c in subsets_of_size(n, m):
        level[x_index(n, c)] = ONE if c in chosen else ZERO
    for size in range(m + 1, n):
        for c in subsets_of_size(n, size):
            level[x_index(n, c)] = ZERO
    for j, v in level.items():
        if j in fixings and fixings[j] != v:
            raise LevelFixingConflict(
                f"x{format_subset(j + 1)} fixed to {format_rational(fixings[j])} "
                f"by the base model; level fixing wants {format_rational(v)}")
        fixings[j] = v
    name = f"red{n}^{{{k},{m}}}"
    return _red_model(n, fixings, name, level=(m, fix_family))


def set_partitions(n: int, max_parts: int):
    """Partitions of ``[n]`` into between 2 and ``max_parts`` blocks, as lists of codes."""
    def rec(i, blocks):
        if i == n:
            if 2 <= len(blocks) <= max_parts:
                yield sorted(blocks)
            return
        bit = 1 << i
        for b in range(len(blocks)):
            blocks[b] |= bit
            yield from rec(i + 1, blocks)
            blocks[b] ^= bit
        if len(blocks) < max_parts:
            blocks.append(bit)
            yield from rec(i + 1, blocks)
            blocks.pop()

    yield from rec(0, [])


def partition_cuts(n: int, max_parts: int) -> list[LinearConstraint]:
    """``sum(y_S for S in P) <= 1`` for each partition ``P`` of ``[n]``; valid for inf/opt/red."""
    _check_n(n)
    if not 2 <= max_parts <= n:
        raise ValueError(f"max_parts must lie in [2, {n}], got {max_parts}")
    cuts = []
    for blocks in sorted(set_partitions(n, max_parts)):
        label = "part:" + "|".join(format_subset(b) for b in blocks)
        cuts.append(_row(label, "L", 1, {y_index(n, b): 1 for b in blocks}))
    return cuts


def model_stats(model: Model) -> dict:
    """Sizes under the Table-1 counting convention.

    ``vars`` counts every variable.  ``ineqs`` counts the emitted rows (all
    ``<=``) plus one upper-bound row per ``x`` variable; the ``y`` upper
    bounds are implied by ``y_S <= x_S`` and are not counted.  Fixings are
    reported separately; ``free`` is the Table-1 style count for ``red`` rows
    (unfixed ``x`` and ``y``, no ``z``).
    """
    xs = sum(1 for v in model.variables if v.role == "x")
    fixed = sum(1 for v in model.variables if v.fixed)
    free = sum(1 for v in model.variables if v.role in ("x", "y") and not v.fixed)
    return {
        "vars": model.num_vars,
        "ineqs": len(model.constraints) + xs,
        "rows": len(model.constraints),
        "fixings": fixed,
        "free": free,
    }


def _format_terms(model: Model, terms) -> str:
    if not terms:
        return "0"
    return " + ".join(f"{format_rational(a)}*{model.variables[j].name}" for j, a in terms)


def emit(model: Model, fmt: str = "cert-problem") -> str:
    """Serialise the problem section (``cert-problem``) or a commented listing (``readable``)."""
    if fmt == "cert-problem":
        return _emit_problem(model)
    if fmt == "readable":
        return _emit_readable(model)
    raise ValueError(f"unknown format {fmt!r}")


def _terms_tokens(terms) -> str:
    parts = [str(len(terms))]
    for j, a in terms:
        parts.append(str(j))
        parts.append(format_rational(a))
    return " ".join(parts)


def _emit_problem(model: Model) -> str:
    out = ["CERT 1", f"VARS {model.num_vars}"]
    for v in model.variables:
        ub = "inf" if v.ub is None else format_rational(v.ub)
        out.append(f"{v.name} {v.kind} {format_rational(v.lb)} {ub}")
    out.append(f"OBJ max {_terms_tokens(model.objective)}")
    out.append(f"CONS {len(model.constraints)}")
    for c in model.constraints:
        out.append(f"{c.label} {c.sense} {format_rational(c.rhs)} {_terms_tokens(c.terms)}")
    return "\n".join(out) + "\n"


def _emit_readable(model: Model) -> str:
    out = [f"# model {model.name} (n={model.n})", f"# {model.num_vars} variables"]
    for v in model.variables:
        ub = "inf" if v.ub is None else format_rational(v.ub)
        tag = " fixed" if v.fixed else ""
        out.append(f"# {v.name} {v.kind} [{format_rational(v.lb)}, {ub}]{tag}")
    out.append(f"max: {_format_terms(model, model.objective)}")
    for c in model.constraints:
        out.append(f"{c.label}: {_format_terms(model, c.terms)} {_SENSE_SYMBOL[c.sense]} {format_rational(c.rhs)}")
    return "\n".join(out) + "\n"
