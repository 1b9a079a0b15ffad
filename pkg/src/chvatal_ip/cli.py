"""Command-line entry point: ``chvatal-ip <subcommand> ...``.

Exit codes: 0 success or verified, 1 refuted, mismatch, violation or limit,
2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from . import certcheck, modelgen
from .rational import format_rational
from .setcore import Family, enumerate_iso_classes, format_family, parse_family, popcount

DEFAULT_TIME_LIMIT = 43200.0


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    n: int | None = None
    form: str | None = None
    m: int | None = None
    k: int | None = None
    family: str | None = None
    out: str | None = None
    cert: str | None = None
    stats: bool = False
    time_limit: float = DEFAULT_TIME_LIMIT
    nodes: int | None = None
    workers: int = 1
    long_run: bool = False

    @classmethod
    def from_args(cls, a: argparse.Namespace) -> "RunConfig":
        cert = getattr(a, "cert", None) or getattr(a, "certificate", None)
        return cls(a.command, a.n, a.form, a.m, a.k, a.family, a.out, cert, a.stats,
                   a.time_limit, a.nodes, a.workers, a.long_run)

    def echo(self) -> str:
        parts = []
        for key, val in asdict(self).items():
            if val is None:
                val = "-"
            elif isinstance(val, bool):
                val = str(val).lower()
            elif isinstance(val, str) and (" " in val or not val):
                val = json.dumps(val)
            parts.append(f"{key}={val}")
        return "config " + " ".join(parts)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--form", choices=("inf", "opt", "red"))
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--family", help='level-fixing family literal, e.g. "{1,2,3,4},{1,2,3,5}"')
    common.add_argument("--out")
    common.add_argument("--cert")
    common.add_argument("--stats", action="store_true")
    common.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
    common.add_argument("--nodes", type=int)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--long-run", action="store_true")

    p = argparse.ArgumentParser(prog="chvatal-ip", description="Exact IP models for Chvatal's conjecture.")
    sub = p.add_subparsers(dest="command", required=True)
    g = sub.add_parser("generate", parents=[common], help="write a model (problem section)")
    g.add_argument("--readable", action="store_true", help="human-readable listing instead")
    sub.add_parser("solve", parents=[common], help="solve a model and write its certificate")
    c = sub.add_parser("check", parents=[common], help="verify a certificate")
    c.add_argument("certificate", nargs="?")
    v = sub.add_parser("verify-input", parents=[common], help="compare a certificate with a regenerated model")
    v.add_argument("certificate", nargs="?")
    o = sub.add_parser("oracle", parents=[common], help="brute-force check of all downsets")
    o.add_argument("--json", action="store_true", help="also print a single-line JSON record")
    cl = sub.add_parser("classes", parents=[common], help="isomorphism classes of k-families of m-sets")
    cl.add_argument("--solve", action="store_true", help="solve the level-fixed model of every class")
    sub.add_parser("pipeline", parents=[common], help="generate, solve, check and verify-input in one go")
    return p


# ------------------------------------------------------------------ helpers
def _need(cfg: RunConfig, *names):
    for name in names:
        if getattr(cfg, name) is None:
            raise UsageError(f"{cfg.subcommand} needs --{name.replace('_', '-')}")


def _level(cfg: RunConfig):
    """(m, Family) for level-fixed red models, else None."""
    if cfg.family is None and cfg.m is None:
        return None
    if cfg.form != "red":
        raise UsageError("--m/--family apply to --form red only")
    try:
        fam = parse_family(cfg.family or "", cfg.n) if cfg.family else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    m = cfg.m
    if fam is None:
        if m is None:
            raise UsageError("--family needs --m when empty")
        fam = Family(cfg.n, ())
    if m is None:
        m = popcount(fam.members[0])
    if cfg.k is not None and cfg.k != len(fam):
        raise UsageError(f"--k {cfg.k} disagrees with the family size {len(fam)}")
    return m, fam


def _build(cfg: RunConfig) -> modelgen.Model:
    _need(cfg, "form", "n")
    builders = {"inf": modelgen.build_inf, "opt": modelgen.build_opt, "red": modelgen.build_red}
    try:
        model = builders[cfg.form](cfg.n)
        level = _level(cfg)
        if level is not None:
            model = modelgen.apply_level_fixings(model, *level)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return model


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def _read(path: str) -> str:
    with open(path, encoding="ascii") as fh:
        return fh.read()


def _cert_path(cfg: RunConfig, args) -> str:
    path = getattr(args, "certificate", None) or cfg.cert
    if path is None:
        raise UsageError(f"{cfg.subcommand} needs a certificate file")
    return path


def _fmt(q) -> str:
    return "-" if q is None else format_rational(q)


# -------------------------------------------------------------- subcommands
def cmd_generate(cfg: RunConfig, args) -> int:
    model = _build(cfg)
    if cfg.stats:
        st = modelgen.model_stats(model)
        line = f"vars={st['vars']} ineqs={st['ineqs']}"
        if model.form == "red":
            line += f" rows={st['rows']} fixings={st['fixings']} free={st['free']}"
        print(line)
        if cfg.out is None:
            return 0
    text = modelgen.emit(model, "readable" if args.readable else "cert-problem")
    _write(cfg.out, text)
    return 0


def _solve_model(model, cfg: RunConfig, cert_path: str | None, progress: bool):
    from .bbsolver import solve_ip

    res = solve_ip(model, time_limit=cfg.time_limit, node_limit=cfg.nodes, progress=progress)
    if res.certificate is not None and cert_path is not None:
        _write(cert_path, certcheck.write_certificate(res.certificate))
    return res


def _counterexample(model, res) -> bool:
    if model.form == "inf":
        return res.status == "optimal"
    if model.form in ("opt", "red"):
        return res.status == "optimal" and res.best_objective > 0
    return False


def _report_solve(model, res) -> None:
    print(f"model={model.name} status={res.status} objective={_fmt(res.best_objective)} "
          f"dual_bound={_fmt(res.dual_bound)} nodes={res.node_count} seconds={res.seconds:.3f}")


def cmd_solve(cfg: RunConfig, args) -> int:
    model = _build(cfg)
    res = _solve_model(model, cfg, cfg.cert or cfg.out, progress=True)
    _report_solve(model, res)
    if res.status == "limit":
        print("limit reached before the search finished", file=sys.stderr)
        return 1
    return 1 if _counterexample(model, res) else 0


def cmd_check(cfg: RunConfig, args) -> int:
    text = _read(_cert_path(cfg, args))
    try:
        cert = certcheck.parse_certificate(text)
    except certcheck.CertificateParseError as exc:
        print(f"parse error ({type(exc).__name__}): {exc}")
        return 2
    verdict = certcheck.check_certificate(cert)
    print(verdict)
    return 0 if verdict else 1


def cmd_verify_input(cfg: RunConfig, args) -> int:
    text = _read(_cert_path(cfg, args))
    _need(cfg, "form", "n")
    try:
        cert = certcheck.parse_certificate(text)
    except certcheck.CertificateParseError:
        try:
            cert = certcheck.parse_model(text)
        except certcheck.CertificateParseError as exc:
            print(f"parse error ({type(exc).__name__}): {exc}")
            return 2
    level = _level(cfg)
    m, members = (None, None) if level is None else (level[0], level[1].members)
    verdict = certcheck.verify_input(cert, cfg.form, cfg.n, m, members)
    print("match" if verdict else f"mismatch: {verdict.reason}")
    return 0 if verdict else 1


def cmd_oracle(cfg: RunConfig, args) -> int:
    from .oracle import EnumerationLimitError, verify_conjecture

    _need(cfg, "n")
    try:
        rep = verify_conjecture(cfg.n, long_run=cfg.long_run,
                                progress=lambda k: print(f"progress downsets={k}", file=sys.stderr))
    except EnumerationLimitError as exc:
        raise UsageError(str(exc)) from None
    viol = "-" if rep.first_violation is None else format_family(rep.first_violation)
    print(f"n={rep.n}")
    print(f"downsets_checked={rep.downsets_checked}")
    print(f"all_satisfy={str(rep.all_satisfy).lower()}")
    print(f"first_violation={viol}")
    print(f"max_gap={rep.max_gap}")
    if args.json:
        print(json.dumps({"n": rep.n, "downsets_checked": rep.downsets_checked, "all_satisfy": rep.all_satisfy,
                          "first_violation": None if rep.first_violation is None else viol,
                          "max_gap": rep.max_gap}, sort_keys=True))
    return 0 if rep.all_satisfy else 1


def _solve_class(job):
    n, m, members, cfg, path = job
    fam = Family(n, members)
    try:
        model = modelgen.apply_level_fixings(modelgen.build_red(n), m, fam)
    except modelgen.LevelFixingConflict as exc:
        return format_family(fam), None, str(exc)
    res = _solve_model(model, cfg, path, progress=False)
    return format_family(fam), res, None


def cmd_classes(cfg: RunConfig, args) -> int:
    _need(cfg, "n", "m", "k")
    try:
        classes = enumerate_iso_classes(cfg.n, cfg.m, cfg.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"classes={len(classes)}")
    for i, rep in enumerate(classes.representatives):
        print(f"class {i}: {{{format_family(rep)}}}")
    if cfg.out is not None and not args.solve:
        os.makedirs(cfg.out, exist_ok=True)
        for i, rep in enumerate(classes.representatives):
            try:
                model = modelgen.apply_level_fixings(modelgen.build_red(cfg.n), cfg.m, rep)
            except modelgen.LevelFixingConflict as exc:
                print(f"class {i}: no model ({exc})")
                continue
            _write(os.path.join(cfg.out, f"red{cfg.n}_m{cfg.m}_k{cfg.k}_c{i}.txt"), modelgen.emit(model))
    if not args.solve:
        return 0
    if cfg.out is not None:
        os.makedirs(cfg.out, exist_ok=True)
    jobs = []
    for i, rep in enumerate(classes.representatives):
        path = None if cfg.out is None else os.path.join(cfg.out, f"red{cfg.n}_m{cfg.m}_k{cfg.k}_c{i}.cert")
        jobs.append((cfg.n, cfg.m, rep.members, cfg, path))
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_solve_class, jobs))
    else:
        results = [_solve_class(j) for j in jobs]
    code = 0
    for i, (fam, res, err) in enumerate(results):
        if err is not None:
            print(f"class {i}: conflict {err}")
            code = 1
            continue
        print(f"class {i}: status={res.status} objective={_fmt(res.best_objective)} nodes={res.node_count}")
        if res.status != "optimal" or res.best_objective != 0:
            code = 1
    return code


def cmd_pipeline(cfg: RunConfig, args) -> int:
    model = _build(cfg)
    level = _level(cfg)
    st = modelgen.model_stats(model)
    print(f"modeling: {model.name} vars={st['vars']} ineqs={st['ineqs']}")
    res = _solve_model(model, cfg, None, progress=True)
    _report_solve(model, res)
    if res.certificate is None:
        print("solving: limit reached, no certificate")
        return 1
    text = certcheck.write_certificate(res.certificate)
    if cfg.cert or cfg.out:
        _write(cfg.cert or cfg.out, text)
    cert = certcheck.parse_certificate(text)
    verdict = certcheck.check_certificate(cert)
    print(f"output verification: {verdict}")
    m, members = (None, None) if level is None else (level[0], level[1].members)
    match = certcheck.verify_input(cert, cfg.form, cfg.n, m, members)
    print("input verification: " + ("match" if match else f"mismatch: {match.reason}"))
    if not verdict or not match or _counterexample(model, res):
        return 1
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "check": cmd_check,
    "verify-input": cmd_verify_input,
    "oracle": cmd_oracle,
    "classes": cmd_classes,
    "pipeline": cmd_pipeline,
}


def run(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    cfg = RunConfig.from_args(args)
    print(cfg.echo(), flush=True)
    if cfg.workers < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return 2
    try:
        return COMMANDS[cfg.subcommand](cfg, args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
