"""Tau functions from group-like elements and bilinear identity engines.

Group-like elements are finite products G = prod_j (1 + c_j phi_{r_j}
phi_{s_j}) with r_j > s_j >= 0, so every vacuum expectation reduces to the
exact q-calculus.  One-sided taus <0|e^{H_+(t)} G|0> are exact polynomials;
pair and two-sided constructions are truncated at explicit weighted-degree
caps, with the generating parameter z of the modified pair held at fixed
rational values.

The identity engines return residual polynomials, expected to vanish
identically up to the stated degree:

  * hirota_zero_check     P(D) tau . sigma
  * bkp_residue_check     the one-sided bilinear residue identity
  * mbkp_residue_check    the modified-pair contour identity
  * negflow_residue_check the two-contour identity with negative times
  * mixed_residue_check   the modified two-contour identity

The contour integrals over z (around infinity or zero) act on formal
Laurent objects, where both reduce to extraction of the z^0 coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .schurq import (QTABLE, q_poly, schur_q, strict_partitions_of_weight,
                     vev_modes, vev_modes_alpha)
from .series import (INF_CAP, LaurentSeries, OddPoly, exp_laurent, hirota,
                     hirota_monomial, miwa_shift, xi_series)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class GSpec:
    """Finite product prod_j (1 + c_j phi_{r_j} phi_{s_j}), r_j > s_j >= 0."""

    factors: tuple

    def __init__(self, factors):
        fs = []
        for c, r, s in factors:
            c, r, s = Fraction(c), int(r), int(s)
            if not c:
                raise ValueError("factor coefficients must be nonzero")
            if not r > s >= 0:
                raise ValueError(f"factor needs r > s >= 0, got ({r}, {s})")
            fs.append((c, r, s))
        object.__setattr__(self, "factors", tuple(fs))

    @classmethod
    def parse(cls, text):
        """Parse 'c=1/2,r=2,s=1;c=1,r=4,s=3' (empty text is G = 1)."""
        text = text.strip()
        if not text:
            return cls(())
        factors = []
        for chunk in text.split(";"):
            fields = {}
            for kv in chunk.split(","):
                k, _, v = kv.partition("=")
                fields[k.strip()] = v.strip()
            try:
                factors.append((Fraction(fields["c"]), int(fields["r"]),
                                int(fields["s"])))
            except (KeyError, ValueError) as exc:
                raise ValueError(f"bad group-element factor {chunk!r}") from exc
        return cls(factors)

    def max_mode(self):
        return max((r for _c, r, _s in self.factors), default=0)

    def subsets(self):
        """(coefficient, mode list) for every sub-product, in factor order."""
        out = [(Fraction(1), [])]
        for c, r, s in self.factors:
            out += [(coef * c, modes + [r, s]) for coef, modes in out]
        return out


@dataclass(frozen=True)
class TauSeries:
    """A tau polynomial with the construction it came from."""

    body: OddPoly
    provenance: str

    def caps(self):
        return self.body.cap, self.body.cap_neg


def _body(tau):
    return tau.body if isinstance(tau, TauSeries) else tau


def tau_from_g(g, cap=None, qt=None):
    """tau(t) = <0| e^{H_+(t)} G |0>; exact unless a cap is given."""
    qt = qt or QTABLE
    total = None
    for coef, modes in g.subsets():
        v = vev_modes(modes, cap=cap, qt=qt) * coef
        total = v if total is None else total + v
    if cap is not None:
        total = total.truncated(cap)
    return TauSeries(total, f"tau_from_g({g.factors})")


def tau_phi0_sandwich(g, cap, qt=None):
    """2 <0| phi_0 e^{H_+(t)} G phi_0 |0>, for cross-checking tau_from_g.

    The left phi_0 is pushed through the evolution with the reversed-time
    conjugation e^{-H_+} phi_0 e^{H_+} = sum_k q_k(-t/2) phi_{-k}.
    """
    qt = qt or QTABLE
    total = OddPoly.zero(cap, INF_CAP)
    for k in range(0, cap + 1):
        qk = qt.poly(k, -HALF)
        inner = None
        for coef, modes in g.subsets():
            v = vev_modes([-k] + modes + [0], cap=cap, qt=qt) * coef
            inner = v if inner is None else inner + v
        total = total + qk * inner * 2
    return total.truncated(cap)


def tau_pair_from_g(g, z, cap, qt=None):
    """The modified pair (tau_n, tau_{n+1}) at a fixed rational z.

    tau_{n+1} = 2 <0| e^{H_+(t)} phi(z) G phi_0 |0>, with phi(z) expanded
    over the finite mode window the degree cap leaves alive.
    """
    z = Fraction(z)
    if not z:
        raise ValueError("z must be nonzero")
    qt = qt or QTABLE
    tau_n = tau_from_g(g, cap=cap, qt=qt)
    w = cap + g.max_mode()
    total = OddPoly.zero(cap, INF_CAP)
    for i in range(-w, w + 1):
        inner = None
        for coef, modes in g.subsets():
            v = vev_modes([i] + modes + [0], cap=cap, qt=qt) * coef
            inner = v if inner is None else inner + v
        if not inner.is_zero():
            total = total + inner * (2 * z ** i)
    tau_n1 = TauSeries(total.truncated(cap),
                       f"tau_pair_from_g({g.factors}, z={z})")
    return tau_n, tau_n1


def tau_two_sided(g, cap_pos, cap_neg, qt=None):
    """tau(t_+, t_-) = <0| e^{H_+(t)} G e^{H_-(t)} |0> to a bidegree.

    e^{H_-}|0> is expanded over the Schur-Q basis of strict partitions; the
    half powers of 2 from odd lengths cancel between the 2^{-l/2} weight and
    the |1>-sector normalisation, which the sqrt(2) bookkeeping enforces.
    """
    qt = qt or QTABLE
    total = OddPoly.zero(cap_pos, cap_neg)
    for w in range(0, cap_neg + 1):
        for lam in strict_partitions_of_weight(w):
            l = lam.length
            q_minus = schur_q(lam, side=-1, qt=qt) if l else \
                OddPoly.one(INF_CAP, INF_CAP)
            weight = OddPoly.const(1, INF_CAP, INF_CAP, r2=-l)
            inner = None
            for coef, modes in g.subsets():
                v = vev_modes_alpha(modes + list(lam.parts), l % 2,
                                    cap=cap_pos, qt=qt) * coef
                inner = v if inner is None else inner + v
            total = total + weight * q_minus * inner
    return TauSeries(total.truncated(cap_pos, cap_neg),
                     f"tau_two_sided({g.factors})")


def tau_pair_two_sided(g, z, cap_pos, cap_neg, qt=None):
    """Two-sided modified pair: tau_{n+1} = 2<0|e^{H_+}phi(z) G e^{H_-}phi_0|0>.

    e^{H_-} phi_0 |0> = sum_k q_k(t_-/2) phi_k e^{H_-}|0>, then the
    Schur-Q expansion of e^{H_-}|0> as in tau_two_sided.
    """
    z = Fraction(z)
    if not z:
        raise ValueError("z must be nonzero")
    qt = qt or QTABLE
    tau_n = tau_two_sided(g, cap_pos, cap_neg, qt=qt)
    w = cap_pos + max(g.max_mode(), cap_neg)
    total = OddPoly.zero(cap_pos, cap_neg)
    for k in range(0, cap_neg + 1):
        qk_minus = qt.poly(k, HALF, side=-1)
        for wt in range(0, cap_neg - k + 1):
            for lam in strict_partitions_of_weight(wt):
                l = lam.length
                q_minus = schur_q(lam, side=-1, qt=qt) if l else \
                    OddPoly.one(INF_CAP, INF_CAP)
                weight = OddPoly.const(1, INF_CAP, INF_CAP, r2=-l)
                prefix = qk_minus * q_minus * weight * 2
                for i in range(-w, w + 1):
                    inner = None
                    for coef, modes in g.subsets():
                        v = vev_modes_alpha([i] + modes + [k] + list(lam.parts),
                                            l % 2, cap=cap_pos, qt=qt) * coef
                        inner = v if inner is None else inner + v
                    if not inner.is_zero():
                        total = total + prefix * inner * z ** i
    tau_n1 = TauSeries(total.truncated(cap_pos, cap_neg),
                       f"tau_pair_two_sided({g.factors}, z={z})")
    return tau_n, tau_n1


def _operator_weight(p_op):
    return max((sum(abs(n) * e for _f, n, e in mono)
                for mono in p_op.terms), default=0)


def hirota_zero_check(p_op, tau, sigma, deg, deg_neg=0):
    """Residual of P(D) tau . sigma, truncated to the checkable bidegree.

    The inputs must be exact to degree deg + weight(P) on the positive side
    (and deg_neg + weight on the negative side when negative flows appear),
    otherwise the truncated residual would not be trustworthy.
    """
    f, g = _body(tau), _body(sigma)
    wp = _operator_weight(p_op)
    if f.cap < deg + wp or g.cap < deg + wp:
        raise ValueError(f"inputs must carry caps >= {deg + wp}")
    if deg_neg or any(n < 0 for m in p_op.terms for _f, n, _e in m):
        if f.cap_neg < deg_neg + wp or g.cap_neg < deg_neg + wp:
            raise ValueError(f"inputs must carry negative caps >= "
                             f"{deg_neg + wp}")
    res = hirota(p_op, f, g)
    return res.truncated(deg, deg_neg)


EQUATION_NAMES = ("bkp-residue", "mbkp1", "mbkp2", "negflow1", "mixed1")


def named_operator(name):
    """Hirota operators of the displayed first members, by CLI name."""
    if name == "mbkp1":
        return hirota_monomial({1: 3}) - hirota_monomial({3: 1})
    if name == "mbkp2":
        return (hirota_monomial({5: 1}) * 6
                - hirota_monomial({3: 1, 1: 2}) * 5
                - hirota_monomial({1: 5}))
    if name == "negflow1":
        return hirota_monomial({-1: 1}) * (hirota_monomial({3: 1})
                                           - hirota_monomial({1: 3}))
    if name == "mixed1":
        return hirota_monomial({1: 1, -1: 1})
    raise ValueError(f"unknown equation {name!r}")


@lru_cache(maxsize=None)
def _exp_xi_diff(cap, cap_neg=0):
    """e^{xi(t - t', z)} truncated; shared across residue checks."""
    s = xi_series(cap, cap_neg, scale=1, zpow=+1)
    sp = xi_series(cap, cap_neg, scale=-1, primed=True, zpow=+1)
    return exp_laurent(s + sp)


@lru_cache(maxsize=None)
def _exp_xi_diff_neg(cap_pos, cap_neg):
    """e^{xi(t'_- - t_-, 1/z)} truncated (negative-side times)."""
    s = xi_series(cap_pos, cap_neg, scale=-1, side=-1, zpow=-1)
    sp = xi_series(cap_pos, cap_neg, scale=1, side=-1, primed=True, zpow=-1)
    return exp_laurent(s + sp)


def _prepare_pair(tau, sigma, cap, cap_neg=0):
    f = _body(tau).truncated(cap, cap_neg)
    g = _body(sigma).truncated(cap, cap_neg)
    if _body(tau).cap < cap or _body(sigma).cap < cap:
        raise ValueError(f"inputs must carry caps >= {cap}")
    if _body(tau).cap_neg < cap_neg or _body(sigma).cap_neg < cap_neg:
        raise ValueError(f"inputs must carry negative caps >= {cap_neg}")
    return f, g.primed()


def bkp_residue_check(tau, deg, qt=None):
    """Residual of the bilinear residue identity for a one-sided tau.

    Res_z [ z^{-1} e^{xi(t-t',z)} tau(t-[1/z]) tau(t'+[1/z]) ] - tau(t)tau(t')
    as a polynomial in the two independent time sets, exact up to joint
    weighted degree `deg`.
    """
    f, gp = _prepare_pair(tau, tau, deg)
    shifted_f = miwa_shift(f, -1, zpow=-1)
    shifted_g = miwa_shift(gp, +1, primed=True, zpow=-1)
    lhs = (shifted_f * shifted_g).residue_with(_exp_xi_diff(deg))
    return (lhs - f * gp).truncated(deg)


def mbkp_residue_check(tau_n, tau_n1, deg, qt=None):
    """Residual of the modified contour identity for a pair (tau_n, tau_{n+1}).

    Res_z [ z^{-1} e^{xi(t-t',z)} tau_{n+1}(t-[1/z]) tau_n(t'+[1/z]) ]
    = 2 tau_n(t) tau_{n+1}(t') - tau_{n+1}(t) tau_n(t').
    """
    f1, g0p = _prepare_pair(tau_n1, tau_n, deg)
    f0 = _body(tau_n).truncated(deg)
    g1p = _body(tau_n1).truncated(deg).primed()
    shifted = miwa_shift(f1, -1, zpow=-1) * miwa_shift(g0p, +1, primed=True,
                                                       zpow=-1)
    lhs = shifted.residue_with(_exp_xi_diff(deg))
    rhs = f0 * g1p * 2 - f1 * g0p
    return (lhs - rhs).truncated(deg)


def negflow_residue_check(tau, cap_pos, cap_neg, qt=None):
    """Residual of the two-contour negative-flow identity for one tau.

    C_infinity side: e^{xi(t_+-t'_+,z)} tau(t_+-[1/z],t_-) tau(t'_++[1/z],t'_-)
    C_zero side:     e^{xi(t'_--t_-,1/z)} tau(t_+,t_-+[z]) tau(t'_+,t'_--[z])
    both reduced to z^0 extraction; returns (infinity side) - (zero side).
    """
    f, gp = _prepare_pair(tau, tau, cap_pos, cap_neg)
    inf_side = (miwa_shift(f, -1, zpow=-1)
                * miwa_shift(gp, +1, primed=True, zpow=-1)) \
        .residue_with(_exp_xi_diff(cap_pos, cap_neg))
    zero_side = (miwa_shift(f, +1, side=-1, zpow=+1)
                 * miwa_shift(gp, -1, side=-1, primed=True, zpow=+1)) \
        .residue_with(_exp_xi_diff_neg(cap_pos, cap_neg))
    return (inf_side - zero_side).truncated(cap_pos, cap_neg)


def mixed_residue_check(tau_n, tau_n1, cap_pos, cap_neg, qt=None):
    """Residual of the modified two-contour identity for a two-sided pair.

    C_0[e^{xi(t'_--t_-,1/z)} tau_{n+1}(t_+,t_-+[z]) tau_n(t'_+,t'_--[z])]
    + C_inf[e^{xi(t_+-t'_+,z)} tau_{n+1}(t_+-[1/z],t_-) tau_n(t'_++[1/z],t'_-)]
    - 2 tau_n(t) tau_{n+1}(t').
    """
    f1, g0p = _prepare_pair(tau_n1, tau_n, cap_pos, cap_neg)
    f0 = _body(tau_n).truncated(cap_pos, cap_neg)
    g1p = _body(tau_n1).truncated(cap_pos, cap_neg).primed()
    zero_side = (miwa_shift(f1, +1, side=-1, zpow=+1)
                 * miwa_shift(g0p, -1, side=-1, primed=True, zpow=+1)) \
        .residue_with(_exp_xi_diff_neg(cap_pos, cap_neg))
    inf_side = (miwa_shift(f1, -1, zpow=-1)
                * miwa_shift(g0p, +1, primed=True, zpow=-1)) \
        .residue_with(_exp_xi_diff(cap_pos, cap_neg))
    rhs = f0 * g1p * 2
    return (zero_side + inf_side - rhs).truncated(cap_pos, cap_neg)


def exp_quadratic(cap_pos, cap_neg):
    """e^{sum_{n odd} (n/2) t_n t_{-n}} truncated to the bidegree."""
    from .series import poly_exp
    arg = OddPoly.zero(cap_pos, cap_neg)
    for n in range(1, min(cap_pos, cap_neg) + 1, 2):
        arg = arg + OddPoly({((0, n, 1), (0, -n, 1)): Fraction(n, 2)},
                            cap_pos, cap_neg)
    return poly_exp(arg)


def catalog():
    """Group-like elements the identity suites run over."""
    return (
        GSpec(()),
        GSpec(((Fraction(1), 2, 1),)),
        GSpec(((Fraction(1, 2), 2, 1),)),
        GSpec(((Fraction(1, 3), 3, 0),)),
        GSpec(((Fraction(1, 2), 2, 1), (Fraction(1, 3), 4, 3))),
        GSpec(((Fraction(1), 3, 1), (Fraction(1, 2), 2, 0))),
    )
