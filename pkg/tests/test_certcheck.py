import random
from fractions import Fraction

import pytest

from _mutate import single_token_mutations
from _oracles import naive_certificate_valid
from chvatal_ip import certcheck
from chvatal_ip.bbsolver import problem_section
from chvatal_ip.certcheck import (
    CertificateParseError,
    DuplicateNameError,
    GrammarError,
    IndexRangeError,
    RationalLiteralError,
    check_certificate,
    parse_certificate,
    parse_model,
    verify_input,
    write_certificate,
    write_problem,
)
from chvatal_ip.modelgen import build_opt, build_red, emit
from conftest import solved

HAND = """CERT 1
VARS 1
x bin 0 1
OBJ max 1 0 1
CONS 1
half L 1/2 1 0 1
RTP range 0 0
SOLS 1
0
DERS 1
cg L 0 1 0 1 rnd 1 C0 1
"""


def check_text(text):
    return check_certificate(parse_certificate(text))


def replace_line(text, no, new):
    lines = text.split("\n")
    lines[no - 1] = new
    return "\n".join(lines)


# ------------------------------------------------------------ hand examples
def test_hand_rounding_certificate():
    v = check_text(HAND)
    assert v.ok and str(v) == "verified"


def test_hand_without_rounding_is_refuted():
    v = check_text(HAND.replace("rnd 1 C0 1", "lin 1 C0 1"))
    assert not v.ok and v.line == 11


def test_rnd_needs_integral_coefficients_on_integer_vars():
    text = HAND.replace("cg L 0 1 0 1 rnd 1 C0 1", "cg L 0 1 0 1/2 rnd 1 C0 1/2")
    assert not check_text(text).ok


def test_range_needs_a_solution_reaching_lb():
    assert not check_text(HAND.replace("RTP range 0 0", "RTP range 1 1")).ok
    assert check_text(HAND.replace("RTP range 0 0", "RTP range -inf 0")).ok
    assert check_text(HAND.replace("RTP range 0 0", "RTP range 0 inf")).ok


def test_branching_infeasibility_proof():
    # x binary, 2x = 1 has no integral solution: branch x <= 0 and x >= 1
    text = """CERT 1
VARS 1
x bin 0 1
OBJ max 0
CONS 1
odd E 1 1 0 2
RTP infeas
SOLS 0
DERS 5
a L 0 1 0 1 asm
l L -1 0 lin 2 C0 -1 D0 2
b G 1 1 0 1 asm
r L -1 0 lin 2 C0 1 D2 -2
done L -1 0 uns D1 D0 D3 D2
"""
    assert check_text(text).ok
    assert naive_certificate_valid(text)
    # leaving out the resolution leaves an assumption on the final line
    cut = text.replace("DERS 5", "DERS 4").replace("done L -1 0 uns D1 D0 D3 D2\n", "")
    v = check_text(cut)
    assert not v.ok and "assumption" in v.reason
    # the branches must be complementary
    bad = text.replace("b G 1 1 0 1 asm", "b G 2 1 0 1 asm").replace("D2 -2", "D2 -1")
    assert not check_text(bad).ok


def test_wrong_multiplier_sign_refuted():
    text = HAND.replace("cg L 0 1 0 1 rnd 1 C0 1", "cg L 0 1 0 1 rnd 2 C0 1 LB0 1")
    v = check_text(text)
    assert not v.ok and v.line == 11


# ------------------------------------------------------------ parse errors
@pytest.mark.parametrize("mutate,err", [
    (lambda t: t.replace("VARS 1", "VARS x"), GrammarError),
    (lambda t: t.replace("half L 1/2", "half Q 1/2"), GrammarError),
    (lambda t: t.replace("cg L 0 1 0 1 rnd", "cg L 0 1 3 1 rnd"), IndexRangeError),
    (lambda t: t.replace("rnd 1 C0 1", "rnd 1 C4 1"), IndexRangeError),
    (lambda t: t.replace("half L 1/2", "half L 2/4"), RationalLiteralError),
    (lambda t: t.replace("half L 1/2", "half L 0.5"), RationalLiteralError),
    (lambda t: t.replace("VARS 1\nx bin 0 1", "VARS 2\nx bin 0 1\nx bin 0 1"), DuplicateNameError),
    (lambda t: t.replace("CERT 1", "CERT 2"), GrammarError),
    (lambda t: t.replace("half L 1/2", "half  L 1/2"), GrammarError),
])
def test_distinct_parse_errors(mutate, err):
    with pytest.raises(err):
        parse_certificate(mutate(HAND))


def test_parse_error_kinds_are_distinct():
    kinds = [GrammarError, IndexRangeError, RationalLiteralError, DuplicateNameError]
    for a in kinds:
        assert issubclass(a, CertificateParseError)
        for b in kinds:
            assert a is b or not issubclass(a, b)


def test_constraint_count_mismatch_names_section():
    with pytest.raises(CertificateParseError) as exc:
        parse_certificate(HAND.replace("CONS 1", "CONS 2"))
    assert "CONS" in str(exc.value)


def test_comments_are_ignored():
    text = HAND.replace("OBJ max 1 0 1", "OBJ max 1 0 1 # maximise x")
    assert check_text(text).ok


def test_opt1_model_parses():
    c = parse_model(emit(build_opt(1)))
    assert len(c.variables) == 3 and c.variables[2].name == "z"
    trivial = emit(build_opt(1)) + "RTP range -inf inf\nSOLS 0\nDERS 0\n"
    assert check_text(trivial).ok


# ------------------------------------------------------------ solver round trips
@pytest.mark.parametrize("form,n", [("inf", 3), ("opt", 3), ("red", 5)])
def test_parse_write_identity(form, n):
    _, res, text = solved(form, n)
    parsed = parse_certificate(text)
    assert write_certificate(parsed) == text
    assert parsed.derivations == res.certificate.derivations
    assert parsed.solutions == res.certificate.solutions
    assert check_certificate(parsed).ok


def test_rhs_perturbation_refuted_at_that_line():
    _, _, text = solved("red", 5)
    lines = text.split("\n")
    # tighten the rhs of the last derivation that aggregates rows (loosening would still be implied)
    no = max(i + 1 for i, ln in enumerate(lines) if " lin " in ln or " rnd " in ln)
    toks = lines[no - 1].split(" ")
    toks[2] = certcheck.format_rational(Fraction(toks[2]) - Fraction(1, 1000000))
    v = check_text(replace_line(text, no, " ".join(toks)))
    assert not v.ok and v.line == no


def test_constraint_rhs_perturbation_refuted():
    _, _, text = solved("opt", 3)
    lines = text.split("\n")
    no = next(i + 1 for i, ln in enumerate(lines) if ln.startswith("star:"))
    toks = lines[no - 1].split(" ")
    toks[2] = certcheck.format_rational(Fraction(toks[2]) - Fraction(1, 1000000))
    mutated = replace_line(text, no, " ".join(toks))
    # the problem section no longer matches the model
    assert not verify_input(parse_certificate(mutated), "opt", 3).ok


# ------------------------------------------------------------ input verification
def test_verify_input_red6():
    text = write_problem(problem_section(build_red(6)))
    c = parse_model(text)
    assert verify_input(c, "red", 6).ok
    v = verify_input(c, "opt", 6)
    assert not v.ok and "berge" in v.reason


def test_verify_input_match_implies_identical_emission():
    for form, build, n in (("opt", build_opt, 4), ("red", build_red, 5)):
        c = parse_model(emit(build(n)))
        assert verify_input(c, form, n).ok
        assert write_problem(c) == emit(build(n))


def test_verify_input_coefficient_defect():
    text = emit(build_opt(4))
    lines = text.split("\n")
    no = next(i for i, ln in enumerate(lines) if ln.startswith("gen:"))
    toks = lines[no].split(" ")
    # change the first coefficient equal to 1 (tokens alternate column, value)
    for pos in range(5, len(toks), 2):
        if toks[pos] == "1":
            toks[pos] = "2"
            col = int(toks[pos - 1])
            break
    lines[no] = " ".join(toks)
    v = verify_input(parse_model("\n".join(lines)), "opt", 4)
    assert not v.ok
    label = lines[no].split(" ")[0]
    name = build_opt(4).variables[col].name
    assert label in v.reason and name in v.reason and f"column {col}" in v.reason


def test_verify_input_bound_defect():
    text = emit(build_red(5)).replace("x{1} bin 1 1", "x{1} bin 0 1")
    v = verify_input(parse_model(text), "red", 5)
    assert not v.ok and "x{1}" in v.reason


# ------------------------------------------------------------ mutation soundness
@pytest.mark.parametrize("form,n,seed", [("opt", 3, 1), ("inf", 3, 2), ("red", 5, 3)])
def test_mutations_are_refuted(form, n, seed):
    _, _, text = solved(form, n)
    rng = random.Random(seed)
    refuted = screened = 0
    for _, mutated in single_token_mutations(text, rng, 110):
        try:
            ok = check_text(mutated).ok
        except CertificateParseError:
            ok = False
        if ok:
            # only a still-valid certificate may pass
            assert naive_certificate_valid(mutated)
            screened += 1
        else:
            refuted += 1
    assert refuted + screened == 110 and refuted >= 60
