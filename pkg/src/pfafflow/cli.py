"""Command-line front end.

Subcommands: schurq, measure, matrixpp, bkp, pfaffian, selftest.  Output is
machine-readable JSON on stdout (deterministic key and term order) or a
plain table with --format table.  Exit codes: 0 success, 2 identity-check
failure, 1 usage error.

Configuration: an optional key=value file (--config), the PFAFFLOW_THREADS
environment variable, then command-line flags, in increasing precedence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from fractions import Fraction

from . import bkp, matrixpp, measure, pfaffian, schurq, selftest
from .series import OddPoly, _fraction_str, parse_fraction

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Caps, tolerances and output options shared by the subcommands."""

    degree: int = 10
    degree_neg: int = 4
    tol: float = 1e-8
    fmt: str = "json"
    threads: int = 1

    def validate(self):
        if self.degree <= 0 or self.degree_neg <= 0:
            raise UsageError("degree caps must be positive")
        if not 0 < self.tol < 1:
            raise UsageError("tolerance must lie in (0, 1)")
        if self.fmt not in ("json", "table"):
            raise UsageError(f"unknown format {self.fmt!r}")
        if self.threads < 1:
            raise UsageError("threads must be >= 1")
        return self


_CONFIG_KEYS = {"degree": int, "degree_neg": int, "tol": float,
                "format": str, "threads": int}


def load_config(path):
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not eq or key not in _CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: bad config line {line!r}")
            try:
                values["fmt" if key == "format" else key] = \
                    _CONFIG_KEYS[key](value)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from exc
    return values


def _parse_rationals(text, what):
    if text is None or text.strip() == "":
        return ()
    try:
        return tuple(parse_fraction(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad {what}: {exc}") from exc


def _parse_ints(text, what):
    if text is None or text.strip() == "":
        return ()
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad {what}: {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    top = _Parser(prog="pfafflow", description=__doc__)
    top.add_argument("--config", default=None)
    top.add_argument("--format", dest="fmt", choices=("json", "table"),
                     default=None)
    top.add_argument("--threads", type=int, default=None)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schurq", description="Schur Q/P function values")
    ssub = p.add_subparsers(dest="action", required=True)
    ev = ssub.add_parser("eval")
    ev.add_argument("--lambda", dest="lam", required=True,
                    help="strict partition, e.g. 3,1")
    ev.add_argument("--x", default=None,
                    help="Miwa points; omit for the symbolic polynomial")
    ev.add_argument("--p", action="store_true",
                    help="Schur P instead of Schur Q")

    p = sub.add_parser("measure", description="shifted measure correlations")
    msub = p.add_subparsers(dest="action", required=True)
    rho = msub.add_parser("rho")
    rho.add_argument("--x", required=True)
    rho.add_argument("--y", required=True)
    rho.add_argument("--set", dest="a_set", required=True)
    rho.add_argument("--method", choices=("pf", "brute"), default="pf")
    rho.add_argument("--tol", type=float, default=None)
    rho.add_argument("--cutoff", type=int, default=None)

    p = sub.add_parser("matrixpp", description="finite-space correlations")
    xsub = p.add_subparsers(dest="action", required=True)
    corr = xsub.add_parser("corr")
    corr.add_argument("--points", required=True)
    corr.add_argument("--weights", required=True)
    corr.add_argument("--n", type=int, required=True)
    corr.add_argument("--S", dest="s_points", default="")
    corr.add_argument("--method", choices=("pf", "direct"), default="pf")

    p = sub.add_parser("bkp", description="bilinear identity checks")
    bsub = p.add_subparsers(dest="action", required=True)
    chk = bsub.add_parser("check")
    chk.add_argument("--equation", required=True,
                     choices=bkp.EQUATION_NAMES)
    chk.add_argument("--g", default="",
                     help="group element, e.g. 'c=1/2,r=2,s=1;c=1,r=4,s=3'")
    chk.add_argument("--tau-file", default=None,
                     help="JSON polynomial to check instead of a "
                          "group-element tau (bkp-residue only)")
    chk.add_argument("--degree", type=int, default=None)
    chk.add_argument("--degree-neg", type=int, default=None)
    chk.add_argument("--z", default="1/2")

    p = sub.add_parser("pfaffian", description="Pfaffian of a JSON matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--oracle", action="store_true",
                   help="also evaluate the permutation-sum form (order <= 7)")

    p = sub.add_parser("selftest", description="run invariant suites")
    p.add_argument("--suite", default="all",
                   choices=("all",) + tuple(selftest.SUITES))
    return top


def _emit(obj, cfg):
    if cfg.fmt == "json":
        print(json.dumps(obj, indent=None, separators=(", ", ": ")))
    else:
        _emit_table(obj)


def _emit_table(obj, indent=""):
    for key, value in obj.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            print(f"{indent}{key}:")
            for item in value:
                _emit_table(item, indent + "  ")
        else:
            print(f"{indent}{key}: {value}")


def _value_obj(v):
    if isinstance(v, OddPoly):
        return v.to_json_obj()
    if isinstance(v, Fraction):
        return _fraction_str(v)
    return v


def cmd_schurq(ns, cfg):
    parts = _parse_ints(ns.lam, "--lambda")
    try:
        lam = schurq.StrictPartition(parts)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    x = _parse_rationals(ns.x, "--x") if ns.x is not None else None
    fn = schurq.schur_p if ns.p else schurq.schur_q
    value = fn(lam, x=x)
    out = {"lambda": list(lam.parts),
           "function": "P" if ns.p else "Q",
           "value": _value_obj(value)}
    _emit(out, cfg)
    return EXIT_OK


def cmd_measure(ns, cfg):
    x = _parse_rationals(ns.x, "--x")
    y = _parse_rationals(ns.y, "--y")
    a_set = _parse_ints(ns.a_set, "--set")
    tol = ns.tol if ns.tol is not None else cfg.tol
    try:
        spec = measure.SpecPair(x, y)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if ns.method == "pf":
        value = measure.rho_pf(a_set, spec, tol)
        out = {"rho": value, "tail_bound": tol, "method": "pf"}
    else:
        value, tail = measure.rho_brute(a_set, spec, cutoff=ns.cutoff)
        out = {"rho": float(value), "tail_bound": float(tail),
               "method": "brute", "exact": _fraction_str(value)}
    _emit(out, cfg)
    return EXIT_OK


def cmd_matrixpp(ns, cfg):
    points = _parse_rationals(ns.points, "--points")
    weights = _parse_rationals(ns.weights, "--weights")
    s_points = _parse_rationals(ns.s_points, "--S")
    try:
        space = matrixpp.FiniteSpace(points, weights)
        spec = matrixpp.ProcessSpec(ns.n, space)
        fn = matrixpp.corr_pf if ns.method == "pf" else matrixpp.corr_direct
        value = fn(spec, s_points)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = {"points": [_fraction_str(p) for p in space.points],
           "n": ns.n,
           "S": [_fraction_str(p) for p in sorted(s_points)],
           "method": ns.method,
           "value": _fraction_str(value)}
    _emit(out, cfg)
    return EXIT_OK


def cmd_bkp(ns, cfg):
    deg = ns.degree if ns.degree is not None else cfg.degree
    deg_neg = ns.degree_neg if ns.degree_neg is not None else cfg.degree_neg
    try:
        g = bkp.GSpec.parse(ns.g)
        z = parse_fraction(ns.z)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    eq = ns.equation
    checked = deg
    if eq == "bkp-residue":
        if ns.tau_file is not None:
            with open(ns.tau_file, "r", encoding="utf-8") as fh:
                tau = OddPoly.from_json_obj(json.load(fh), deg)
        else:
            tau = bkp.tau_from_g(g)
        residual = bkp.bkp_residue_check(tau, deg)
    elif eq in ("mbkp1", "mbkp2"):
        op = bkp.named_operator(eq)
        wt = 3 if eq == "mbkp1" else 5
        tau_n, tau_n1 = bkp.tau_pair_from_g(g, z, deg + wt)
        residual = bkp.hirota_zero_check(op, tau_n, tau_n1, deg)
    elif eq == "negflow1":
        op = bkp.named_operator(eq)
        tau = bkp.tau_two_sided(g, deg + 4, deg_neg + 4)
        residual = bkp.hirota_zero_check(op, tau, tau, deg, deg_neg)
        checked = [deg, deg_neg]
    else:  # mixed1
        op = bkp.named_operator(eq)
        tau_n, tau_n1 = bkp.tau_pair_two_sided(g, z, deg + 2, deg_neg + 2)
        residual = bkp.hirota_zero_check(op, tau_n, tau_n1, deg, deg_neg)
        checked = [deg, deg_neg]
    zero = residual.is_zero()
    out = {"equation": eq,
           "g": ns.g,
           "residual_zero": zero,
           "max_degree_checked": checked,
           "nonzero_terms": residual.to_json_obj()}
    _emit(out, cfg)
    return EXIT_OK if zero else EXIT_CHECK_FAILED


def cmd_pfaffian(ns, cfg):
    try:
        mat = pfaffian.SkewMatrix.load(ns.matrix)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read matrix: {exc}") from exc
    value = pfaffian.pfaffian_debruijn(mat)
    out = {"n": mat.n, "pfaffian": _value_obj(value)}
    if ns.oracle:
        out["sigma_sum"] = _value_obj(pfaffian.pfaffian_sigma_sum(mat))
    _emit(out, cfg)
    return EXIT_OK


def cmd_selftest(ns, cfg):
    results = selftest.run_suite(ns.suite, threads=cfg.threads)
    checks = [{"name": name, "ok": ok} for name, ok in results]
    failed = sum(1 for c in checks if not c["ok"])
    out = {"suite": ns.suite,
           "checks": checks,
           "passed": len(checks) - failed,
           "failed": failed}
    _emit(out, cfg)
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def run(argv):
    """Dispatch a command line; returns the process exit code."""
    try:
        ns = build_parser().parse_args(argv)
        cfg = RunConfig()
        if ns.config:
            try:
                cfg = replace(cfg, **load_config(ns.config))
            except OSError as exc:
                raise UsageError(f"cannot read config: {exc}") from exc
        env_threads = os.environ.get("PFAFFLOW_THREADS")
        if env_threads:
            try:
                cfg = replace(cfg, threads=int(env_threads))
            except ValueError as exc:
                raise UsageError("bad PFAFFLOW_THREADS value") from exc
        if ns.fmt:
            cfg = replace(cfg, fmt=ns.fmt)
        if ns.threads is not None:
            cfg = replace(cfg, threads=ns.threads)
        cfg.validate()
        handler = {
            "schurq": cmd_schurq,
            "measure": cmd_measure,
            "matrixpp": cmd_matrixpp,
            "bkp": cmd_bkp,
            "pfaffian": cmd_pfaffian,
            "selftest": cmd_selftest,
        }[ns.command]
        return handler(ns, cfg)
    except UsageError as exc:
        print(f"pfafflow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
