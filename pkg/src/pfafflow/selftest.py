"""Invariant suites behind the `selftest` subcommand.

Each suite returns (name, ok) pairs at desk scale; the acceptance-grade
versions of the same statements live in the test suite.  Checks are
independent, so a thread pool may evaluate them concurrently; results are
reported in registration order either way.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import bkp, matrixpp, measure, pfaffian, schurq, series
from .series import INF_CAP, OddPoly


def _random_odd_poly(rng, cap=5, terms=4):
    out = OddPoly.zero(cap, 0)
    vars_ = [1, 3, 5]
    for _ in range(terms):
        n = rng.choice(vars_)
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
        out = out + OddPoly.var(n, cap) * c
    return out


def _random_skew(rng, n):
    upper = [Fraction(rng.randint(-9, 9), rng.randint(1, 9))
             for _ in range(n * (n - 1) // 2)]
    return pfaffian.SkewMatrix.from_upper_list(n, upper)


def series_checks():
    rng = random.Random(20260809)
    out = []
    ok = True
    for _ in range(8):
        a = _random_odd_poly(rng)
        prod = series.poly_exp(a) * series.poly_exp(-a)
        ok &= (prod - 1).is_zero()
    out.append(("poly_exp(a) * poly_exp(-a) == 1", ok))

    ok = True
    for powers in ({1: 1}, {1: 2, 3: 1}, {3: 1}, {1: 3}):
        p = series.hirota_monomial(powers, cap=12)
        wt = sum(abs(n) * e for n, e in powers.items())
        f, g = _random_odd_poly(rng, 6), _random_odd_poly(rng, 6)
        fg = series.hirota(p, f, g)
        gf = series.hirota(p, g, f)
        ok &= (fg - gf * ((-1) ** wt)).is_zero()
    out.append(("hirota transpose sign (-1)^deg", ok))

    ok = True
    for _ in range(4):
        f = _random_odd_poly(rng, 6)
        p = series.hirota_monomial({1: 1}, cap=12)
        ok &= series.hirota(p, f, f).is_zero()
    out.append(("odd hirota monomial kills equal arguments", ok))

    ok = True
    for _ in range(4):
        p = _random_odd_poly(rng, 6)
        sh = series.miwa_shift(p, -1)
        ok &= (sh.coeff(0) - p).is_zero()
    out.append(("miwa_shift at z^-1 = 0 recovers the input", ok))

    e = series.exp_laurent(series.xi_series(6, scale=1, zpow=1))
    one = series.miwa_shift(OddPoly.one(6), -1)
    ok = (e.residue_with(one) - 1).is_zero()
    out.append(("residue of e^xi against the unit shift is 1", ok))
    return out


def pfaffian_checks():
    rng = random.Random(20260810)
    out = []
    ok = True
    for n in (4, 6):
        for _ in range(10):
            a = _random_skew(rng, n)
            b_rows = [[Fraction(rng.randint(-4, 4)) for _ in range(n)]
                      for _ in range(n)]
            bab = [[sum(b_rows[i][k] * a.entry(k, l) * b_rows[j][l]
                        for k in range(n) for l in range(n))
                    for j in range(n)] for i in range(n)]
            lhs = pfaffian.pfaffian_even(pfaffian.SkewMatrix.from_rows(bab))
            rhs = pfaffian.det_exact(b_rows) * pfaffian.pfaffian_even(a)
            ok &= lhs == rhs
    out.append(("Pf(B A B^T) == det(B) Pf(A)", ok))

    ok = True
    for n in (2, 4, 6, 8):
        a = _random_skew(rng, n)
        ok &= pfaffian.pfaffian_even(a) ** 2 == pfaffian.det_exact(a.rows())
    out.append(("Pf(A)^2 == det(A)", ok))

    ok = True
    for n in (1, 3, 5):
        a = _random_skew(rng, n)
        ok &= pfaffian.pfaffian_sigma_sum(a) == pfaffian.pfaffian_debruijn(a)
    out.append(("sigma-sum == bordered Pfaffian (odd orders)", ok))

    a = _random_skew(rng, 6)
    ok = pfaffian.pfaffian_even(a.swap(1, 4)) == -pfaffian.pfaffian_even(a)
    out.append(("row/column swap flips the sign", ok))
    return out


def schurq_checks():
    out = []
    ok = True
    for a in range(0, 7):
        for b in range(0, 7):
            if (a, b) == (0, 0):
                continue
            s = schurq.q_pair(a, b) + schurq.q_pair(b, a)
            ok &= s.is_zero()
    out.append(("q_pair skewness away from (0,0)", ok))

    ok = True
    for m in range(1, 6):
        total = OddPoly.zero(INF_CAP, INF_CAP)
        for i in range(0, 2 * m + 1):
            term = schurq.q_poly(i, 1) * schurq.q_poly(2 * m - i, 1)
            total = total + (term if i % 2 == 0 else -term)
        ok &= total.is_zero()
    out.append(("orthogonality sum (-1)^i q_i q_{2m-i} == 0", ok))

    ok = True
    for w in range(0, 9):
        for lam in schurq.strict_partitions_of_weight(w):
            a = schurq.schur_q(lam)
            b = schurq.schur_q_via_vev(lam)
            diff = a - b if isinstance(a, OddPoly) else b - a
            ok &= diff.is_zero()
    out.append(("Pfaffian and Wick routes to Q agree (|lambda| <= 8)", ok))

    x = (Fraction(1, 3), Fraction(1, 5))
    y = (Fraction(1, 4), Fraction(1, 6))
    target = measure._z_product(x, y)
    partial = schurq.cauchy_sum(x, y, 25)
    ok = abs(float(partial - target)) < 1e-9
    out.append(("Cauchy sum approaches the product formula", ok))
    return out


def measure_checks():
    out = []
    spec = measure.SpecPair((Fraction(2, 5), Fraction(1, 5)),
                            (Fraction(3, 10), Fraction(1, 10)))
    total, tail = measure.rho_brute([], spec)
    out.append(("measure normalises to 1",
                abs(float(total) - 1) <= float(tail) + 1e-12))

    ok = True
    for a_set in ([1], [2], [2, 1], [3, 1], [3, 2, 1]):
        pf = measure.rho_pf(a_set, spec, 1e-8)
        br, tl = measure.rho_brute(a_set, spec)
        ok &= abs(pf - float(br)) <= 1e-8 + float(tl)
    out.append(("rho_pf matches rho_brute", ok))

    one = measure.SpecPair((Fraction(1, 2),), (Fraction(1, 2),))
    ok = True
    for k in range(1, 5):
        cf = float(measure.rho_closed_form_one_var(k, one))
        ok &= abs(measure.rho_pf([k], one, 1e-8) - cf) <= 1e-8
    out.append(("one-variable closed form", ok))

    ok = True
    for a in range(-2, 3):
        for b in range(-2, 3):
            if a + b == 0:
                continue
            s = measure.kernel_K(a, b, spec, 1e-12) + \
                measure.kernel_K(b, a, spec, 1e-12)
            ok &= abs(s) <= 1e-12
    out.append(("kernel skew symmetry off the antidiagonal", ok))
    return out


def matrixpp_checks():
    out = []
    sp = matrixpp.FiniteSpace([1, 2, 3, 4], [1, Fraction(1, 2), 1, 2])
    ok = True
    for n in (2, 3, 4):
        spec = matrixpp.ProcessSpec(n, sp)
        for l in range(0, n + 1):
            for s_pts in itertools.combinations(sp.points, l):
                ok &= matrixpp.corr_direct(spec, s_pts) == \
                    matrixpp.corr_pf(spec, s_pts)
    out.append(("corr_pf == corr_direct (4-point space, n=2,3,4)", ok))

    spec = matrixpp.ProcessSpec(3, sp)
    ok = matrixpp.corr_direct(spec, [1, 2, 3, 4]) == Fraction(0)
    ok &= matrixpp.corr_pf(spec, [1, 2, 3, 4]) == Fraction(0)
    out.append(("R(S) == 0 beyond n points", ok))

    ok = True
    for n in (2, 3):
        spec = matrixpp.ProcessSpec(n, sp)
        for s_pts in ([], [2], [1, 3]):
            lhs = Fraction(0)
            for x, mu in zip(sp.points, sp.weights):
                rows = matrixpp.kernel_matrix(spec, sorted(list(s_pts) + [x]))
                lhs += pfaffian.pfaffian_even(
                    pfaffian.SkewMatrix.from_rows(rows)) * mu
            rows = matrixpp.kernel_matrix(spec, sorted(s_pts))
            rhs = (n - len(s_pts)) * pfaffian.pfaffian_even(
                pfaffian.SkewMatrix.from_rows(rows))
            ok &= lhs == rhs
    out.append(("integration-out identity", ok))

    ok = True
    try:
        for n in (1, 2, 3):
            matrixpp.bures_tau(sp, n)
            matrixpp.bures_tau(sp, n, cap=1)
    except AssertionError:
        ok = False
    out.append(("bures tau: sum and moment-Pfaffian forms agree", ok))
    return out


def bkp_checks():
    out = []
    ok = True
    for g in bkp.catalog():
        tau = bkp.tau_from_g(g)
        ok &= bkp.bkp_residue_check(tau, 8).is_zero()
    out.append(("BKP residue identity on the catalog (degree 8)", ok))

    p1 = bkp.named_operator("mbkp1")
    ok = True
    for g in bkp.catalog()[:4]:
        tn, tn1 = bkp.tau_pair_from_g(g, Fraction(1, 2), 9)
        ok &= bkp.hirota_zero_check(p1, tn, tn1, 6).is_zero()
    out.append(("first modified member on catalog pairs (degree 6)", ok))

    pneg = bkp.named_operator("negflow1")
    pmix = bkp.named_operator("mixed1")
    ok = True
    for g in bkp.catalog()[:2]:
        tau = bkp.tau_two_sided(g, 10, 7)
        ok &= bkp.hirota_zero_check(pneg, tau, tau, 6, 3).is_zero()
        tn, tn1 = bkp.tau_pair_two_sided(g, Fraction(1, 2), 8, 5)
        ok &= bkp.hirota_zero_check(pmix, tn, tn1, 6, 3).is_zero()
    out.append(("negative-flow and mixed members (bidegree (6,3))", ok))

    tau = bkp.tau_two_sided(bkp.GSpec(()), 8, 4)
    ok = (tau.body - bkp.exp_quadratic(8, 4)).is_zero()
    out.append(("G=1 two-sided tau is the quadratic exponential", ok))
    return out


SUITES = {
    "series": series_checks,
    "pfaffian": pfaffian_checks,
    "schurq": schurq_checks,
    "measure": measure_checks,
    "matrixpp": matrixpp_checks,
    "bkp": bkp_checks,
}


def run_suite(name, threads=1):
    """Run one suite or 'all'; returns a list of (check name, ok)."""
    if name == "all":
        fns = list(SUITES.values())
    elif name in SUITES:
        fns = [SUITES[name]]
    else:
        raise ValueError(f"unknown suite {name!r}")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            groups = list(pool.map(lambda f: f(), fns))
    else:
        groups = [f() for f in fns]
    out = []
    for fn, group in zip(fns, groups):
        prefix = fn.__name__.replace("_checks", "")
        out.extend((f"{prefix}: {name}", ok) for name, ok in group)
    return out
