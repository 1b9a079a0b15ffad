"""Branch-and-bound certificates: parsing, writing, checking, input verification.

A certificate is the problem (variables, objective, constraints), a goal,
some solutions and a list of derived inequalities.  Each derivation is an
assumption (``asm``), a nonnegative aggregation of earlier rows (``lin``),
an aggregation followed by rounding of the right-hand side (``rnd``), or the
resolution of two derivations made under complementary assumptions
``x_j <= a`` and ``x_j >= a + 1`` (``uns``).

Checking uses rational additions, multiplications and comparisons only.
The input verifier rebuilds the expected problem from the combinatorial
definitions in this module and does not call the model generator.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .rational import RationalFormatError, format_rational, parse_rational

KINDS = ("bin", "int")
SENSES = ("L", "G", "E")
RULES = ("asm", "lin", "rnd", "uns")


class CertificateParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class GrammarError(CertificateParseError):
    pass


class IndexRangeError(CertificateParseError):
    pass


class RationalLiteralError(CertificateParseError, RationalFormatError):
    pass


class DuplicateNameError(CertificateParseError):
    pass


# ------------------------------------------------------------------- types
Terms = tuple  # ((index, Fraction), ...)
Ref = tuple  # (kind, index) with kind in "C", "LB", "UB", "D"


@dataclass(frozen=True)
class Var:
    name: str
    kind: str
    lb: Fraction
    ub: Fraction | None


@dataclass(frozen=True)
class Row:
    label: str
    sense: str
    rhs: Fraction
    terms: Terms


@dataclass(frozen=True)
class Derivation:
    row: Row
    rule: str
    refs: tuple = ()  # ((Ref, Fraction), ...) for lin/rnd
    uns: tuple = ()  # (ref1, aref1, ref2, aref2) as derivation indices
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Certificate:
    variables: tuple[Var, ...]
    objective: Terms
    constraints: tuple[Row, ...]
    goal: tuple  # ("infeas",) or ("range", lb|None, ub|None)
    solutions: tuple[Terms, ...] = ()
    derivations: tuple[Derivation, ...] = ()
    lines: dict = field(default_factory=dict, compare=False, repr=False)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""
    line: int | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "verified"
        where = f" at line {self.line}" if self.line is not None else ""
        return f"refuted{where}: {self.reason}"


# ------------------------------------------------------------------ writing
def _terms_text(terms) -> str:
    out = [str(len(terms))]
    for j, a in terms:
        out.append(str(j))
        out.append(format_rational(a))
    return " ".join(out)


def _ref_text(ref) -> str:
    return f"{ref[0]}{ref[1]}"


def _row_text(r: Row) -> str:
    return f"{r.label} {r.sense} {format_rational(r.rhs)} {_terms_text(r.terms)}"


def write_problem(c: Certificate) -> str:
    out = ["CERT 1", f"VARS {len(c.variables)}"]
    for v in c.variables:
        ub = "inf" if v.ub is None else format_rational(v.ub)
        out.append(f"{v.name} {v.kind} {format_rational(v.lb)} {ub}")
    out.append(f"OBJ max {_terms_text(c.objective)}")
    out.append(f"CONS {len(c.constraints)}")
    out.extend(_row_text(r) for r in c.constraints)
    return "\n".join(out) + "\n"


def write_certificate(c: Certificate) -> str:
    out = [write_problem(c).rstrip("\n")]
    if c.goal[0] == "infeas":
        out.append("RTP infeas")
    else:
        lb = "-inf" if c.goal[1] is None else format_rational(c.goal[1])
        ub = "inf" if c.goal[2] is None else format_rational(c.goal[2])
        out.append(f"RTP range {lb} {ub}")
    out.append(f"SOLS {len(c.solutions)}")
    out.extend(_terms_text(s) for s in c.solutions)
    out.append(f"DERS {len(c.derivations)}")
    for d in c.derivations:
        head = _row_text(d.row)
        if d.rule == "asm":
            out.append(f"{head} asm")
        elif d.rule in ("lin", "rnd"):
            body = " ".join(f"{_ref_text(r)} {format_rational(m)}" for r, m in d.refs)
            out.append(f"{head} {d.rule} {len(d.refs)}" + (f" {body}" if body else ""))
        else:
            out.append(f"{head} uns " + " ".join(f"D{i}" for i in d.uns))
    return "\n".join(out) + "\n"


# ------------------------------------------------------------------ parsing
class _Lines:
    def __init__(self, text: str):
        self.items = []
        for no, raw in enumerate(text.split("\n"), start=1):
            body, hash_, _ = raw.rstrip("\r").partition("#")
            if hash_ and body.endswith(" "):
                body = body[:-1]  # the single separator before a trailing comment
            if body.strip():
                self.items.append((no, body))
        self.pos = 0

    def next(self, section: str):
        if self.pos >= len(self.items):
            last = self.items[-1][0] if self.items else 1
            raise GrammarError(f"unexpected end of file in section {section}", last)
        no, body = self.items[self.pos]
        self.pos += 1
        toks = body.strip().split(" ")
        if "" in toks or body != body.strip():
            raise GrammarError(f"tokens must be separated by single spaces ({section})", no)
        return no, toks


def _rat(tok: str, no: int) -> Fraction:
    try:
        return parse_rational(tok)
    except RationalFormatError as exc:
        raise RationalLiteralError(str(exc), no) from None


def _int(tok: str, no: int, what: str) -> int:
    if not tok.isdigit() or (len(tok) > 1 and tok[0] == "0"):
        raise GrammarError(f"expected a nonnegative integer for {what}, got {tok!r}", no)
    return int(tok)


def _header(lines: _Lines, keyword: str) -> tuple[int, list[str]]:
    no, toks = lines.next(keyword)
    if toks[0] != keyword:
        raise GrammarError(f"expected section {keyword}, got {toks[0]!r}", no)
    return no, toks


def _count(lines: _Lines, keyword: str) -> tuple[int, int]:
    no, toks = _header(lines, keyword)
    if len(toks) != 2:
        raise GrammarError(f"{keyword} header takes one count", no)
    return no, _int(toks[1], no, f"{keyword} count")


def _parse_terms(toks, at: int, no: int, nvars: int, section: str):
    """Parse ``t {idx coef}*t`` from ``toks[at:]``; returns (terms, next position)."""
    if at >= len(toks):
        raise GrammarError(f"missing term count in {section}", no)
    t = _int(toks[at], no, "term count")
    end = at + 1 + 2 * t
    if end > len(toks):
        raise GrammarError(f"{section}: term count {t} exceeds the tokens on the line", no)
    terms = []
    prev = -1
    for k in range(t):
        j = _int(toks[at + 1 + 2 * k], no, "variable index")
        if j >= nvars:
            raise IndexRangeError(f"variable index {j} out of range [0, {nvars})", no)
        if j <= prev:
            raise GrammarError(f"{section}: variable indices must strictly increase", no)
        a = _rat(toks[at + 2 + 2 * k], no)
        if a == 0:
            raise GrammarError(f"{section}: zero coefficient on variable {j}", no)
        terms.append((j, a))
        prev = j
    return tuple(terms), end


def _parse_row(toks, no, nvars, section) -> tuple[Row, int]:
    if len(toks) < 4:
        raise GrammarError(f"{section}: row needs label, sense, rhs and terms", no)
    label, sense = toks[0], toks[1]
    if sense not in SENSES:
        raise GrammarError(f"{section}: unknown sense {sense!r}", no)
    rhs = _rat(toks[2], no)
    terms, end = _parse_terms(toks, 3, no, nvars, section)
    return Row(label, sense, rhs, terms), end


def _parse_ref(tok: str, no: int, nvars: int, ncons: int, nders: int):
    for kind, limit in (("LB", nvars), ("UB", nvars), ("C", ncons), ("D", nders)):
        if tok.startswith(kind):
            idx = _int(tok[len(kind):], no, "reference index")
            if idx >= limit:
                what = "earlier derivation" if kind == "D" else kind
                raise IndexRangeError(f"reference {tok} out of range ({what} count {limit})", no)
            return (kind, idx)
    raise GrammarError(f"bad reference {tok!r}", no)


def parse_model(text: str) -> Certificate:
    """Parse the problem section only (goal left as an empty range)."""
    lines = _Lines(text)
    cert = _parse_problem(lines)
    if lines.pos != len(lines.items):
        raise GrammarError("trailing content after CONS section", lines.items[lines.pos][0])
    return cert


def _parse_problem(lines: _Lines) -> Certificate:
    no, toks = _header(lines, "CERT")
    if toks != ["CERT", "1"]:
        raise GrammarError("unsupported certificate version", no)
    _, nvars = _count(lines, "VARS")
    variables = []
    seen = set()
    for _ in range(nvars):
        no, toks = lines.next("VARS")
        if len(toks) != 4:
            if toks[0] in ("OBJ", "CONS"):
                raise GrammarError(f"VARS section shorter than its count {nvars}", no)
            raise GrammarError("VARS line needs name, kind, lb, ub", no)
        name, kind = toks[0], toks[1]
        if kind not in KINDS:
            raise GrammarError(f"unknown variable kind {kind!r}", no)
        if name in seen:
            raise DuplicateNameError(f"duplicate variable name {name!r}", no)
        seen.add(name)
        lb = _rat(toks[2], no)
        ub = None if toks[3] == "inf" else _rat(toks[3], no)
        if ub is not None and ub < lb:
            raise GrammarError(f"variable {name}: ub {toks[3]} below lb {toks[2]}", no)
        if kind == "bin" and (lb < 0 or ub is None or ub > 1):
            raise GrammarError(f"binary variable {name} must have bounds within [0, 1]", no)
        variables.append(Var(name, kind, lb, ub))
    no, toks = _header(lines, "OBJ")
    if len(toks) < 3 or toks[1] != "max":
        raise GrammarError("objective must read 'OBJ max <t> ...'", no)
    objective, end = _parse_terms(toks, 2, no, nvars, "OBJ")
    if end != len(toks):
        raise GrammarError("trailing tokens after objective", no)
    cons_no, ncons = _count(lines, "CONS")
    rows = []
    row_lines = []
    for _ in range(ncons):
        no, toks = lines.next("CONS")
        if toks[0] in ("RTP", "SOLS", "DERS"):
            raise GrammarError(f"CONS section declares {ncons} rows but has {len(rows)}", no)
        row, end = _parse_row(toks, no, nvars, "CONS")
        if end != len(toks):
            raise GrammarError("trailing tokens after constraint", no)
        rows.append(row)
        row_lines.append(no)
    return Certificate(tuple(variables), objective, tuple(rows), ("range", None, None),
                       lines={"cons": row_lines, "cons_header": cons_no})


def parse_certificate(text: str) -> Certificate:
    lines = _Lines(text)
    base = _parse_problem(lines)
    nvars, ncons = len(base.variables), len(base.constraints)
    no, toks = _header(lines, "RTP")
    if toks[0] != "RTP":
        raise GrammarError(f"CONS section declares {ncons} rows but more follow", no)
    if toks == ["RTP", "infeas"]:
        goal = ("infeas",)
    elif len(toks) == 4 and toks[1] == "range":
        lb = None if toks[2] == "-inf" else _rat(toks[2], no)
        ub = None if toks[3] == "inf" else _rat(toks[3], no)
        if lb is not None and ub is not None and lb > ub:
            raise GrammarError("range goal with lb > ub", no)
        goal = ("range", lb, ub)
    else:
        raise GrammarError("RTP must be 'infeas' or 'range <lb> <ub>'", no)
    rtp_line = no
    _, nsols = _count(lines, "SOLS")
    sols, sol_lines = [], []
    for _ in range(nsols):
        no, toks = lines.next("SOLS")
        if toks[0] == "DERS":
            raise GrammarError(f"SOLS section declares {nsols} solutions but has {len(sols)}", no)
        terms, end = _parse_terms(toks, 0, no, nvars, "SOLS")
        if end != len(toks):
            raise GrammarError("trailing tokens after solution", no)
        sols.append(terms)
        sol_lines.append(no)
    _, nders = _count(lines, "DERS")
    ders = []
    for i in range(nders):
        no, toks = lines.next("DERS")
        row, at = _parse_row(toks, no, nvars, "DERS")
        if at >= len(toks):
            raise GrammarError("derivation is missing its rule", no)
        rule = toks[at]
        rest = toks[at + 1:]
        if rule == "asm":
            if rest:
                raise GrammarError("asm takes no arguments", no)
            ders.append(Derivation(row, "asm", line=no))
        elif rule in ("lin", "rnd"):
            if not rest:
                raise GrammarError(f"{rule} needs a reference count", no)
            r = _int(rest[0], no, "reference count")
            if len(rest) != 1 + 2 * r:
                raise GrammarError(f"{rule} declares {r} references but has {(len(rest) - 1) / 2:g}", no)
            refs = tuple((_parse_ref(rest[1 + 2 * k], no, nvars, ncons, i), _rat(rest[2 + 2 * k], no))
                         for k in range(r))
            ders.append(Derivation(row, rule, refs=refs, line=no))
        elif rule == "uns":
            if len(rest) != 4:
                raise GrammarError("uns takes four derivation references", no)
            idx = []
            for tok in rest:
                ref = _parse_ref(tok, no, nvars, ncons, i)
                if ref[0] != "D":
                    raise GrammarError("uns references must be derivations", no)
                idx.append(ref[1])
            ders.append(Derivation(row, "uns", uns=tuple(idx), line=no))
        else:
            raise GrammarError(f"unknown rule {rule!r}", no)
    if lines.pos != len(lines.items):
        raise GrammarError(f"DERS section declares {nders} derivations but more lines follow",
                           lines.items[lines.pos][0])
    return Certificate(base.variables, base.objective, base.constraints, goal, tuple(sols), tuple(ders),
                       lines={**base.lines, "rtp": rtp_line, "sols": sol_lines})


# ----------------------------------------------------------------- checking
class _Refuted(Exception):
    def __init__(self, reason, line):
        self.reason, self.line = reason, line


def _le_forms(row: Row):
    """The ``<=`` inequalities a row asserts, as (coef dict, rhs)."""
    pos = dict(row.terms)
    neg = {j: -a for j, a in row.terms}
    if row.sense == "L":
        return [(pos, row.rhs)]
    if row.sense == "G":
        return [(neg, -row.rhs)]
    return [(pos, row.rhs), (neg, -row.rhs)]


def _is_contradiction(row: Row) -> bool:
    if row.terms:
        return False
    return (row.sense == "L" and row.rhs < 0) or (row.sense == "G" and row.rhs > 0) or (
        row.sense == "E" and row.rhs != 0)


def dominates(have: list, want: Row) -> bool:
    """``have`` is a list of ``<=`` forms; exact coefficient match, weaker rhs."""
    for coef, rhs in have:
        if not coef and rhs < 0:
            return True
    for wc, wr in _le_forms(want):
        if not any(hc == wc and hr <= wr for hc, hr in have):
            return False
    return True


def _ref_row(c: Certificate, ref) -> Row:
    kind, i = ref
    if kind == "C":
        return c.constraints[i]
    if kind == "D":
        return c.derivations[i].row
    v = c.variables[i]
    if kind == "LB":
        return Row(f"LB{i}", "G", v.lb, ((i, Fraction(1)),))
    if v.ub is None:
        return None
    return Row(f"UB{i}", "L", v.ub, ((i, Fraction(1)),))


def _aggregate(c: Certificate, d: Derivation):
    coef: dict[int, Fraction] = {}
    rhs = Fraction(0)
    all_eq = True
    for ref, mult in d.refs:
        row = _ref_row(c, ref)
        name = _ref_text(ref)
        if row is None:
            raise _Refuted(f"{name} refers to an infinite upper bound", d.line)
        if row.sense == "L" and mult < 0:
            raise _Refuted(f"negative multiplier on <= reference {name}", d.line)
        if row.sense == "G" and mult > 0:
            raise _Refuted(f"positive multiplier on >= reference {name}", d.line)
        if row.sense != "E" and mult != 0:
            all_eq = False
        if mult == 0:
            continue
        for j, a in row.terms:
            v = coef.get(j, 0) + mult * a
            if v:
                coef[j] = v
            else:
                coef.pop(j, None)
        rhs += mult * row.rhs
    return coef, rhs, all_eq


def _integer_var(c: Certificate, j: int) -> bool:
    return c.variables[j].kind in KINDS


def _check_solution(c: Certificate, sol, line) -> Fraction:
    x = dict(sol)
    for j, v in enumerate(c.variables):
        val = x.get(j, Fraction(0))
        if val < v.lb or (v.ub is not None and val > v.ub):
            raise _Refuted(f"solution violates the bounds of {v.name}", line)
        if v.kind in KINDS and val.denominator != 1:
            raise _Refuted(f"solution value of {v.name} is not integral", line)
    for row in c.constraints:
        lhs = sum((a * x.get(j, 0) for j, a in row.terms), Fraction(0))
        if (row.sense == "L" and lhs > row.rhs) or (row.sense == "G" and lhs < row.rhs) or (
                row.sense == "E" and lhs != row.rhs):
            raise _Refuted(f"solution violates constraint {row.label}", line)
    return sum((a * x.get(j, 0) for j, a in c.objective), Fraction(0))


def _check_derivations(c: Certificate) -> list[frozenset]:
    assumptions: list[frozenset] = []
    for i, d in enumerate(c.derivations):
        if d.rule == "asm":
            assumptions.append(frozenset((i,)))
            continue
        if d.rule in ("lin", "rnd"):
            coef, rhs, all_eq = _aggregate(c, d)
            if d.rule == "rnd":
                for j, a in coef.items():
                    if not _integer_var(c, j):
                        raise _Refuted(f"rounding with continuous variable {j}", d.line)
                    if a.denominator != 1:
                        raise _Refuted(f"rounding with fractional coefficient on variable {j}", d.line)
                have = [(coef, Fraction(floor(rhs)))]
            elif all_eq:
                have = [(coef, rhs), ({j: -a for j, a in coef.items()}, -rhs)]
            else:
                have = [(coef, rhs)]
            if not dominates(have, d.row):
                raise _Refuted(f"{d.rule} aggregation does not yield the stated constraint {d.row.label}", d.line)
            deps = [assumptions[r[1]] for r, m in d.refs if r[0] == "D" and m != 0]
            assumptions.append(frozenset().union(*deps))
            continue
        r1, a1, r2, a2 = d.uns
        for a in (a1, a2):
            if c.derivations[a].rule != "asm":
                raise _Refuted(f"uns reference D{a} is not an assumption", d.line)
        lo, hi = c.derivations[a1].row, c.derivations[a2].row
        if not (len(lo.terms) == 1 and len(hi.terms) == 1 and lo.terms[0][1] == 1 and hi.terms[0][1] == 1):
            raise _Refuted("uns assumptions must bound a single variable with coefficient 1", d.line)
        j = lo.terms[0][0]
        if hi.terms[0][0] != j or lo.sense != "L" or hi.sense != "G":
            raise _Refuted("uns assumptions must read x_j <= a and x_j >= a+1", d.line)
        if not _integer_var(c, j) or lo.rhs.denominator != 1 or hi.rhs != lo.rhs + 1:
            raise _Refuted("uns assumptions are not a complementary integer disjunction", d.line)
        for r in (r1, r2):
            if not dominates(_le_forms(c.derivations[r].row), d.row):
                raise _Refuted(f"uns: D{r} does not dominate the stated constraint", d.line)
        assumptions.append((assumptions[r1] - {a1}) | (assumptions[r2] - {a2}))
    return assumptions


def check_certificate(c: Certificate) -> Verdict:
    """Verify solutions, every derivation and the goal; first failure wins."""
    try:
        best = None
        for k, sol in enumerate(c.solutions):
            line = c.lines.get("sols", [None] * len(c.solutions))[k]
            val = _check_solution(c, sol, line)
            best = val if best is None else max(best, val)
        assumptions = _check_derivations(c)
        rtp = c.lines.get("rtp")
        if c.goal[0] == "infeas" or c.goal[2] is not None:
            if not c.derivations:
                raise _Refuted("goal needs a final derivation", rtp)
            last = c.derivations[-1]
            if assumptions[-1]:
                raise _Refuted("final derivation still depends on assumptions", last.line)
            if c.goal[0] == "infeas":
                if not _is_contradiction(last.row):
                    raise _Refuted("final derivation is not a contradiction 0 <= c < 0", last.line)
            else:
                want = Row("obj", "L", c.goal[2], c.objective)
                if not dominates(_le_forms(last.row), want):
                    raise _Refuted("final derivation does not bound the objective by the goal ub", last.line)
        if c.goal[0] == "range" and c.goal[1] is not None:
            if best is None or best < c.goal[1]:
                raise _Refuted("no listed solution reaches the goal lb", rtp)
    except _Refuted as exc:
        return Verdict(False, exc.reason, exc.line)
    return Verdict(True)


# ----------------------------------------------------------- input checking
def _fmt_set(code: int) -> str:
    return "{" + ",".join(str(i + 1) for i in range(code.bit_length()) if code >> i & 1) + "}"


def _bits(code: int) -> int:
    return bin(code).count("1")


def expected_problem(form: str, n: int, m: int | None = None, family=None) -> Certificate:
    """The problem section for ``form`` over ``[n]``, written from the definitions.

    ``family`` is a collection of subset codes of size ``m`` (level fixing).
    """
    if form not in ("inf", "opt", "red"):
        raise ValueError(f"unknown formulation {form!r}")
    if not 1 <= n <= 10 or (form == "red" and n < 4):
        raise ValueError(f"unsupported n={n} for {form}")
    N = (1 << n) - 1
    codes = list(range(1, N + 1))
    one, zero = Fraction(1), Fraction(0)
    X = {s: s - 1 for s in codes}
    Y = {s: N + s - 1 for s in codes}
    Z = 2 * N
    lb = {}
    ub = {}
    names = [f"x{_fmt_set(s)}" for s in codes] + [f"y{_fmt_set(s)}" for s in codes]
    for j in range(2 * N):
        lb[j], ub[j] = zero, one
    kinds = ["bin"] * (2 * N)
    rows = []

    def row(label, sense, rhs, coef):
        rows.append(Row(label, sense, Fraction(rhs), tuple((j, Fraction(a)) for j, a in sorted(coef.items()))))

    if form == "inf":
        for t in codes:
            for s in codes:
                if s != t and s & t == s:
                    row(f"down:{_fmt_set(t)}:{_fmt_set(s)}", "L", 0, {X[t]: 1, X[s]: -1})
    for t in codes:
        for s in codes:
            if s & t == 0:
                row(f"inter:{_fmt_set(t)}:{_fmt_set(s)}", "L", 1, {Y[t]: 1, Y[s]: 1})
    if form == "inf":
        for s in codes:
            row(f"cont:{_fmt_set(s)}", "L", 0, {Y[s]: 1, X[s]: -1})
        for i in range(n):
            coef = {X[s]: 1 for s in codes if s >> i & 1}
            coef.update({Y[s]: -1 for s in codes})
            row(f"star:{i + 1}", "L", -1, coef)
        objective = tuple((X[s], one) for s in codes)
    else:
        names.append("z")
        kinds.append("int")
        lb[Z], ub[Z] = zero, None
        for i in range(n):
            coef = {X[s]: 1 for s in codes if s >> i & 1}
            coef[Z] = -1
            row(f"star:{i + 1}", "L", 0, coef)
        for t in codes:
            for s in codes:
                if s & t == s:
                    row(f"gen:{_fmt_set(s)}:{_fmt_set(t)}", "L", 0, {Y[t]: 1, X[s]: -1})
        objective = tuple((Y[s], one) for s in codes) + ((Z, -one),)
    if form == "red":
        coef = {X[s]: -1 for s in codes}
        coef.update({Y[s]: 2 for s in codes})
        row("berge", "L", 0, coef)
        fix = {}
        for s in codes:
            if _bits(s) <= 2:
                fix[Y[s]] = zero
            if _bits(s) == 1:
                fix[X[s]] = one
        level = {}
        if m is not None:
            chosen = set(family or ())
            for s in codes:
                if _bits(s) == m:
                    level[X[s]] = one if s in chosen else zero
                elif m < _bits(s) < n:
                    level[X[s]] = zero
        if m is None or not family:
            for s in codes:
                if s < 16:
                    fix[X[s]] = one
        for j, v in level.items():
            if j in fix and fix[j] != v:
                raise ValueError(f"level fixing contradicts the base fixing of {names[j]}")
            fix[j] = v
        for j, v in fix.items():
            lb[j] = ub[j] = v
    variables = tuple(Var(names[j], kinds[j], lb[j], ub[j]) for j in range(len(names)))
    return Certificate(variables, objective, tuple(rows), ("range", None, None))


def compare_problems(got: Certificate, want: Certificate) -> str | None:
    """First difference between two problem sections, or ``None``."""
    lines = got.lines.get("cons", [])
    if len(got.variables) != len(want.variables):
        return f"variable count {len(got.variables)} != expected {len(want.variables)}"
    for j, (a, b) in enumerate(zip(got.variables, want.variables)):
        if a.name != b.name:
            return f"variable {j}: name {a.name} != expected {b.name}"
        if a.kind != b.kind:
            return f"variable {a.name}: kind {a.kind} != expected {b.kind}"
    if got.objective != want.objective:
        return _terms_diff("objective", got.objective, want.objective, got)
    for i, (a, b) in enumerate(zip(got.constraints, want.constraints)):
        where = f"row {i} ({b.label}" + (f", line {lines[i]})" if i < len(lines) else ")")
        if a.label != b.label:
            return f"{where}: label {a.label} != expected {b.label}"
        if a.sense != b.sense:
            return f"{where}: sense {a.sense} != expected {b.sense}"
        if a.rhs != b.rhs:
            return f"{where}: rhs {format_rational(a.rhs)} != expected {format_rational(b.rhs)}"
        if a.terms != b.terms:
            return _terms_diff(where, a.terms, b.terms, got)
    if len(got.constraints) != len(want.constraints):
        if len(got.constraints) < len(want.constraints):
            missing = want.constraints[len(got.constraints)]
            return f"row count {len(got.constraints)} != expected {len(want.constraints)}; missing row {missing.label}"
        extra = got.constraints[len(want.constraints)]
        return f"row count {len(got.constraints)} != expected {len(want.constraints)}; unexpected row {extra.label}"
    for a, b in zip(got.variables, want.variables):
        if a.lb != b.lb or a.ub != b.ub:
            def show(v):
                return "inf" if v is None else format_rational(v)
            return (f"variable {a.name}: bounds [{show(a.lb)}, {show(a.ub)}] "
                    f"!= expected [{show(b.lb)}, {show(b.ub)}]")
    return None


def _terms_diff(where, got, want, cert) -> str:
    g, w = dict(got), dict(want)
    for j in sorted(set(g) | set(w)):
        if g.get(j) != w.get(j):
            name = cert.variables[j].name if j < len(cert.variables) else str(j)
            show = lambda v: "0" if v is None else format_rational(v)  # noqa: E731
            return f"{where}: coefficient of {name} (column {j}) is {show(g.get(j))}, expected {show(w.get(j))}"
    return f"{where}: terms differ"


def verify_input(c: Certificate, form: str, n: int, m: int | None = None, family=None) -> Verdict:
    """Compare the problem section with an independent regeneration."""
    try:
        want = expected_problem(form, n, m, family)
    except ValueError as exc:
        return Verdict(False, str(exc))
    diff = compare_problems(c, want)
    if diff is None:
        return Verdict(True)
    return Verdict(False, diff)


__all__ = [
    "Certificate", "CertificateParseError", "Derivation", "DuplicateNameError", "GrammarError",
    "IndexRangeError", "RationalLiteralError", "Row", "Var", "Verdict", "check_certificate",
    "dominates", "expected_problem", "parse_certificate", "parse_model",
    "verify_input", "write_certificate", "write_problem",
]
