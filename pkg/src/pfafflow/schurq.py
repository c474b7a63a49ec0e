"""Schur Q/P functions and the neutral-mode vacuum-expectation calculus.

The elementary objects are the polynomials q_k defined by the expansion
e^{2 xi(t,z)} = sum_k q_k(t) z^k with xi(t,z) = sum_{n odd} t_n z^n.  They
are computed through the first-order recurrence

    k q_k = 2s * sum_{n odd <= k} n t_n q_{k-n}      (s = argument scale)

which serves symbolic polynomials, finite time vectors and Miwa
specialisations t_n = (2/n) sum_i x_i^n alike.  On top of the q-calculus sit
the pair polynomials q_{a,b}, evolved two-point functions, Wick Pfaffians of
mode products, and the Schur Q and P functions as (bordered) Pfaffians.

All q_k are homogeneous of weighted degree k, so symbolic values are exact
and carry the INF_CAP marker.  Caches are append-only and safe to share.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .pfaffian import SkewMatrix, pfaffian_even
from .series import INF_CAP, OddPoly, TimeVector, miwa_times

HALF = Fraction(1, 2)


class StrictPartition:
    """Strictly decreasing positive integer parts; () is the partition of 0."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError("parts must be positive")
        if any(a <= b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be strictly decreasing: {parts}")
        self.parts = parts

    @property
    def weight(self):
        return sum(self.parts)

    @property
    def length(self):
        return len(self.parts)

    def as_set(self):
        return frozenset(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __eq__(self, other):
        return isinstance(other, StrictPartition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"StrictPartition{self.parts}"


def strict_partitions(max_part, max_length=None, contains=()):
    """Strict partitions with parts <= max_part, optionally bounded length
    and required to contain the given parts.  Yields StrictPartition."""
    required = sorted(set(int(a) for a in contains), reverse=True)
    if any(a > max_part or a <= 0 for a in required):
        return
    if max_length is not None and len(required) > max_length:
        return
    free = sorted(set(range(1, max_part + 1)) - set(required), reverse=True)
    max_extra = len(free) if max_length is None else max_length - len(required)
    for size in range(0, max_extra + 1):
        for extra in itertools.combinations(free, size):
            yield StrictPartition(sorted(required + list(extra), reverse=True))


def strict_partitions_of_weight(w):
    """All strict partitions of weight exactly w."""
    def rec(remaining, max_part):
        if remaining == 0:
            yield ()
            return
        top = min(remaining, max_part)
        for first in range(top, 0, -1):
            for rest in rec(remaining - first, first - 1):
                yield (first,) + rest
    for parts in rec(w, w):
        yield StrictPartition(parts)


class QTable:
    """Append-only cache of q_k values for every argument flavour.

    Symbolic entries are exact homogeneous OddPoly values; numeric entries
    are exact Fractions, keyed either by a finite TimeVector or by a Miwa
    point multiset.  `scale` is the argument scale s in q_k(s*t); the
    recurrence only needs 2s.
    """

    def __init__(self):
        self._sym = {}
        self._num = {}

    def poly(self, k, scale=HALF, side=+1, primed=False):
        if k < 0:
            return OddPoly.zero(INF_CAP, INF_CAP)
        key = (Fraction(scale), side, primed)
        seq = self._sym.setdefault(key, [OddPoly.one(INF_CAP, INF_CAP)])
        while len(seq) <= k:
            m = len(seq)
            acc = OddPoly.zero(INF_CAP, INF_CAP)
            for n in range(1, m + 1, 2):
                v = OddPoly({((1 if primed else 0, side * n, 1),):
                             Fraction(2 * n, 1) * Fraction(scale)},
                            INF_CAP, INF_CAP)
                acc = acc + v * seq[m - n]
            seq.append(acc * Fraction(1, m))
        return seq[k]

    def at_time(self, k, t, scale=HALF):
        if k < 0:
            return Fraction(0)
        key = ("time", t.items(), Fraction(scale))
        seq = self._num.setdefault(key, [Fraction(1)])
        while len(seq) <= k:
            m = len(seq)
            acc = Fraction(0)
            for n, tn in t.items():
                if 0 < n <= m:
                    acc += 2 * Fraction(scale) * n * tn * seq[m - n]
            seq.append(acc / m)
        return seq[k]

    def miwa(self, k, x, scale=HALF):
        """q_k(scale * t(x)) for the Miwa times of the points x; exact."""
        if k < 0:
            return Fraction(0)
        xs = tuple(Fraction(v) for v in x)
        key = ("miwa", xs, Fraction(scale))
        seq = self._num.setdefault(key, [Fraction(1)])
        # power sums sum_i x_i^n are extended alongside q
        pkey = ("pows", xs)
        pows = self._num.setdefault(pkey, [list(xs)])
        while len(seq) <= k:
            m = len(seq)
            acc = Fraction(0)
            for n in range(1, m + 1, 2):
                while len(pows) < n:
                    pows.append([a * b for a, b in zip(pows[-1], pows[0])])
                ps = sum(pows[n - 1], Fraction(0)) if xs else Fraction(0)
                acc += 4 * Fraction(scale) * ps * seq[m - n]
            seq.append(acc / m)
        return seq[k]


QTABLE = QTable()


def q_poly(k, scale=1, side=+1, primed=False, qt=None):
    """The coefficient q_k at argument scale 1 (for t) or 1/2 (for t/2).

    Negative k gives 0 by convention (the contraction support demands it).
    """
    qt = qt or QTABLE
    return qt.poly(k, Fraction(scale), side, primed)


def q_miwa(k, x, scale=HALF, qt=None):
    qt = qt or QTABLE
    return qt.miwa(k, x, Fraction(scale))


def q_pair(a, b, scale=HALF, side=+1, primed=False, qt=None):
    """q_{a,b} = q_a q_b + 2 sum_{k=1..b} (-1)^k q_{a+k} q_{b-k}.

    Skew in (a, b) except for the (0,0) entry, which equals 1; the Schur
    Q Pfaffians never read that entry because parts are positive.
    """
    qt = qt or QTABLE
    if a < 0 or b < 0:
        raise ValueError("q_pair indices must be nonnegative")
    out = qt.poly(a, scale, side, primed) * qt.poly(b, scale, side, primed)
    for k in range(1, b + 1):
        term = qt.poly(a + k, scale, side, primed) * \
            qt.poly(b - k, scale, side, primed)
        out = out + term * (2 if k % 2 == 0 else -2)
    return out


def q_pair_miwa(a, b, x, scale=HALF, qt=None):
    qt = qt or QTABLE
    if a < 0 or b < 0:
        raise ValueError("q_pair indices must be nonnegative")
    out = qt.miwa(a, x, scale) * qt.miwa(b, x, scale)
    for k in range(1, b + 1):
        sgn = 2 if k % 2 == 0 else -2
        out += sgn * qt.miwa(a + k, x, scale) * qt.miwa(b - k, x, scale)
    return out


def two_point(a, b, t=None, cap=None, qt=None):
    """Evolved two-point value <0| e^{H_+(t)} phi_a phi_b |0> for any integers.

    Symbolic (t None) or exact at a finite TimeVector.  The contraction
    support makes the value vanish unless b >= 0 and a + b >= 0.  A cap
    truncates the symbolic result (valid termwise: degrees only add).
    """
    if t is None:
        return _two_point_sym(a, b, cap, qt or QTABLE)
    qt = qt or QTABLE
    total = Fraction(0)
    if b < 0:
        return total
    if a >= 0:
        total += qt.at_time(a, t, HALF) * qt.at_time(b, t, HALF) * HALF
    for n in range(max(1, -a), b + 1):
        term = qt.at_time(a + n, t, HALF) * qt.at_time(b - n, t, HALF)
        total += term if n % 2 == 0 else -term
    return total


_TWO_POINT_CACHE = {}


def _two_point_sym(a, b, cap, qt):
    key = (a, b, cap, id(qt))
    hit = _TWO_POINT_CACHE.get(key)
    if hit is not None:
        return hit
    def q(k):
        p = qt.poly(k, HALF)
        return p if cap is None else p.truncated(cap)
    total = OddPoly.zero(INF_CAP if cap is None else cap, INF_CAP)
    if b >= 0:
        if a >= 0:
            total = total + q(a) * q(b) * HALF
        for n in range(max(1, -a), b + 1):
            term = q(a + n) * q(b - n)
            total = total + (term if n % 2 == 0 else term * -1)
    _TWO_POINT_CACHE[key] = total
    return total


_VEV_CACHE = {}


def vev_modes(modes, t=None, cap=None, qt=None):
    """Wick evaluation <0| e^{H_+(t)} phi_{m1} ... phi_{m_2s} |0>.

    The Pfaffian of the ordered pair contractions; an odd number of modes is
    rejected (append mode 0 explicitly to realise the |1> sector).
    """
    modes = tuple(modes)
    if len(modes) % 2:
        raise ValueError("vev_modes needs an even number of modes")
    n = len(modes)
    if n == 0:
        return OddPoly.one(INF_CAP, INF_CAP) if t is None else Fraction(1)
    if t is None:
        key = (modes, cap, id(qt))
        hit = _VEV_CACHE.get(key)
        if hit is not None:
            return hit
    upper = {}
    for i in range(n):
        for j in range(i + 1, n):
            upper[(i, j)] = two_point(modes[i], modes[j], t, cap=cap, qt=qt)
    out = pfaffian_even(SkewMatrix(n, upper))
    if t is None:
        if not isinstance(out, OddPoly):
            out = OddPoly.const(out, INF_CAP if cap is None else cap, INF_CAP)
        _VEV_CACHE[key] = out
    return out


def vev_modes_alpha(modes, alpha, cap=None, qt=None):
    """<0| e^{H_+(t)} phi_{m1}...phi_{mk} |alpha> with |1> = sqrt2 phi_0 |0>.

    Returns an OddPoly carrying the sqrt(2) exponent; the caller is expected
    to cancel it against a 2^{l/2}-type factor before exposing the value.
    """
    if alpha not in (0, 1):
        raise ValueError("alpha must be 0 or 1")
    modes = list(modes) + [0] * alpha
    val = vev_modes(modes, cap=cap, qt=qt)
    if alpha:
        val = OddPoly(val.terms, val.cap, val.cap_neg, val.r2 + 1)
    return val


def _sp(lam):
    return lam if isinstance(lam, StrictPartition) else StrictPartition(lam)


def schur_q(lam, x=None, side=+1, primed=False, qt=None):
    """Schur Q-function of a strict partition.

    Symbolic mode returns the polynomial Q_lambda at half argument, i.e. the
    Pfaffian of q_{lambda_i, lambda_j}(t/2) (bordered with the column
    q_{lambda_i}(t/2) when the length is odd).  With x given, the Miwa
    specialisation is evaluated instead; exact rationals throughout.
    """
    lam = _sp(lam)
    qt = qt or QTABLE
    parts = lam.parts
    l = len(parts)
    if l == 0:
        return Fraction(1) if x is not None else OddPoly.one(INF_CAP, INF_CAP)
    if x is not None:
        def pair(a, b):
            return q_pair_miwa(a, b, x, qt=qt)

        def single(a):
            return qt.miwa(a, x, HALF)
    else:
        def pair(a, b):
            return q_pair(a, b, side=side, primed=primed, qt=qt)

        def single(a):
            return qt.poly(a, HALF, side, primed)
    upper = {}
    for i in range(l):
        for j in range(i + 1, l):
            upper[(i, j)] = pair(parts[i], parts[j])
    if l % 2 == 0:
        return pfaffian_even(SkewMatrix(l, upper))
    for i in range(l):
        upper[(i, l)] = single(parts[i])
    return pfaffian_even(SkewMatrix(l + 1, upper))


def schur_p(lam, x=None, side=+1, primed=False, qt=None):
    """Schur P-function: P_lambda = 2^{-l(lambda)} Q_lambda."""
    lam = _sp(lam)
    return schur_q(lam, x, side, primed, qt) * Fraction(1, 2 ** lam.length)


def schur_q_via_vev(lam, qt=None):
    """Q_lambda through the Wick route 2^{l/2} <0|e^{H_+} phi_lambda |alpha>.

    Cross-checks the Pfaffian definition; the sqrt(2) bookkeeping must
    cancel to an integer power of two.
    """
    lam = _sp(lam)
    l = lam.length
    val = vev_modes_alpha(list(lam.parts), l % 2, qt=qt)
    return OddPoly(val.terms, val.cap, val.cap_neg, val.r2 + l)


def phi_pair_vev(z1, z2):
    """<phi(z1) phi(z2)> = (1/2)(1 - z2/z1)/(1 + z2/z1), |z2| < |z1|."""
    z1, z2 = Fraction(z1), Fraction(z2)
    if abs(z2) >= abs(z1):
        raise ValueError("needs |z2| < |z1|")
    r = z2 / z1
    return HALF * (1 - r) / (1 + r)


def phi_product_vev_pf(zs):
    """<phi(z1)...phi(z_2s)> as the Pfaffian of pairwise contractions."""
    zs = [Fraction(z) for z in zs]
    if len(zs) % 2:
        raise ValueError("needs an even number of points")
    n = len(zs)
    upper = {(i, j): phi_pair_vev(zs[i], zs[j])
             for i in range(n) for j in range(i + 1, n)}
    return pfaffian_even(SkewMatrix(n, upper))


def phi_product_formula(zs):
    """(1/2^s) prod_{j<j'} (1 - z_{j'}/z_j)/(1 + z_{j'}/z_j)."""
    zs = [Fraction(z) for z in zs]
    if len(zs) % 2:
        raise ValueError("needs an even number of points")
    s = len(zs) // 2
    out = Fraction(1, 2 ** s)
    for j in range(len(zs)):
        for jp in range(j + 1, len(zs)):
            r = zs[jp] / zs[j]
            out *= (1 - r) / (1 + r)
    return out


def cauchy_sum(x, y, max_part, qt=None):
    """sum over strict partitions with parts <= max_part of P(x) Q(y).

    Only lengths up to min(len(x), len(y)) contribute; longer partitions
    vanish under either specialisation (covered by tests).
    """
    qt = qt or QTABLE
    x = tuple(Fraction(v) for v in x)
    y = tuple(Fraction(v) for v in y)
    total = Fraction(0)
    max_len = min(len(x), len(y))
    for lam in strict_partitions(max_part, max_len):
        total += schur_p(lam, x, qt=qt) * schur_q(lam, y, qt=qt)
    return total
