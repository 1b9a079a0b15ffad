import functools

import pytest

from chvatal_ip import certcheck, modelgen
from chvatal_ip.bbsolver import solve_ip

BUILDERS = {"inf": modelgen.build_inf, "opt": modelgen.build_opt, "red": modelgen.build_red}


@functools.lru_cache(maxsize=None)
def solved(form, n):
    """(model, SolveResult, certificate text) for a formulation, solved once per session."""
    model = BUILDERS[form](n)
    res = solve_ip(model)
    text = certcheck.write_certificate(res.certificate) if res.certificate is not None else None
    return model, res, text


@pytest.fixture
def solve_cached():
    return solved
