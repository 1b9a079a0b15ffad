"""Exact integer programs, certificates and a brute-force oracle for Chvatal's conjecture."""
from .bbsolver import SolveResult, solve_ip
from .certcheck import check_certificate, parse_certificate, verify_input, write_certificate
from .modelgen import apply_level_fixings, build_inf, build_opt, build_red, emit, model_stats, partition_cuts
from .oracle import max_intersecting_subfamily, verify_conjecture
from .setcore import Family, canonical_form, enumerate_iso_classes

__version__ = "0.1.0"

__all__ = [
    "Family", "SolveResult", "apply_level_fixings", "build_inf", "build_opt", "build_red",
    "canonical_form", "check_certificate", "emit", "enumerate_iso_classes", "max_intersecting_subfamily",
    "model_stats", "parse_certificate", "partition_cuts", "solve_ip", "verify_conjecture", "verify_input",
    "write_certificate",
]
