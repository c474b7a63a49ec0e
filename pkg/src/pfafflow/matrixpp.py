"""Pfaffian point processes on finite discrete spaces, all exact.

A process is given by n functions phi_i (monomials by default), a skew
kernel eps (default (x-y)/(x+y)) and a finite weighted point set standing in
for the measure space.  Correlation functions are computed two independent
ways: a direct summation over the free coordinates against the
det(phi_i(x_j)) * Pf(eps(x_i,x_j)) integrand, and the Pfaffian of an
assembled kernel matrix built from the inverse-transpose moment matrix.
For odd n the moment matrix is bordered by the plain phi-moments and the
kernel matrix for l points is the (2l+2)-square with one global border
row/column pair; the border carries the constant -1/+1 entries of the
four-square display (which is the l = 1 case of the assembly).

The Bures-ensemble partition function is computed both as the n-fold sum of
the squared-Vandermonde density and as a Pfaffian of moments; the moment
orientation that makes the two agree exactly at every order is
eps_moment(x,y) = (y-x)/(x+y), and that orientation is frozen here.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .pfaffian import (SkewMatrix, det_exact, invert_exact, pfaffian_debruijn,
                       pfaffian_even)
from .series import INF_CAP, OddPoly, poly_exp


class FiniteSpace:
    """Distinct positive rational points with positive rational weights."""

    __slots__ = ("points", "weights")

    def __init__(self, points, weights):
        pts = tuple(Fraction(p) for p in points)
        wts = tuple(Fraction(w) for w in weights)
        if len(pts) != len(wts):
            raise ValueError("points and weights differ in length")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        if any(p <= 0 for p in pts):
            raise ValueError("points must be positive")
        if any(w <= 0 for w in wts):
            raise ValueError("weights must be positive")
        order = sorted(range(len(pts)), key=lambda i: pts[i])
        self.points = tuple(pts[i] for i in order)
        self.weights = tuple(wts[i] for i in order)

    def __len__(self):
        return len(self.points)

    def index(self, x):
        return self.points.index(Fraction(x))

    def __repr__(self):
        return f"FiniteSpace(points={self.points}, weights={self.weights})"


def bures_eps(x, y):
    return (x - y) / (x + y)


class ProcessSpec:
    """n-particle process data: functions, skew kernel and the space."""

    def __init__(self, n, space, phi=None, eps=None):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.space = space
        if phi is None:
            self.phi = tuple((lambda i: (lambda x: x ** i))(i) for i in range(n))
        else:
            self.phi = tuple(phi)
            if len(self.phi) != n:
                raise ValueError("need exactly n functions")
        self.eps = eps if eps is not None else bures_eps
        for x in space.points:
            if self.eps(x, x) != 0:
                raise ValueError("eps(x,x) must vanish")
        for x, y in itertools.combinations(space.points, 2):
            if self.eps(x, y) + self.eps(y, x) != 0:
                raise ValueError("eps must be skew-symmetric")
        self._moment = None
        self._minv_t = None

    @property
    def odd(self):
        return self.n % 2 == 1

    def moment_matrix(self):
        if self._moment is None:
            self._moment = moment_matrix(self)
        return self._moment

    def minv_t(self):
        """Inverse transpose of the (bordered) moment matrix; exact."""
        if self._minv_t is None:
            rows = self.moment_matrix().rows()
            try:
                inv = invert_exact(rows)
            except ZeroDivisionError:
                raise ValueError("singular moment matrix; the process is "
                                 "undefined") from None
            size = len(inv)
            self._minv_t = [[inv[j][i] for j in range(size)]
                            for i in range(size)]
        return self._minv_t


def moment_matrix(spec):
    """Skew moment matrix; order n for even n, bordered n+1 for odd n."""
    sp = spec.space
    n = spec.n
    upper = {}
    for i in range(n):
        for j in range(i + 1, n):
            s = Fraction(0)
            for p, mu_p in zip(sp.points, sp.weights):
                for q, mu_q in zip(sp.points, sp.weights):
                    s += spec.phi[i](p) * spec.phi[j](q) * \
                        spec.eps(p, q) * mu_p * mu_q
            upper[(i, j)] = s
    if not spec.odd:
        return SkewMatrix(n, upper)
    for i in range(n):
        upper[(i, n)] = sum((spec.phi[i](p) * mu
                             for p, mu in zip(sp.points, sp.weights)),
                            Fraction(0))
    return SkewMatrix(n + 1, upper)


def eps_dot(spec, j):
    """(eps . phi_j)(x_p) = sum_q eps(x_p, x_q) phi_j(x_q) mu_q, per point."""
    sp = spec.space
    f = spec.phi[j]
    return tuple(sum((spec.eps(p, q) * f(q) * mu
                      for q, mu in zip(sp.points, sp.weights)), Fraction(0))
                 for p in sp.points)


def _eps_dot_at(spec, j, x):
    sp = spec.space
    f = spec.phi[j]
    return sum((spec.eps(x, q) * f(q) * mu
                for q, mu in zip(sp.points, sp.weights)), Fraction(0))


def kernel_block(spec, x, y):
    """The 2x2 kernel block of the even-n process at (x, y); exact."""
    if spec.odd:
        raise ValueError("kernel_block is the even-n kernel; "
                         "use kernel_block_plus")
    return _inner_block(spec, x, y, spec.n)


def _point_block(spec, x, y):
    """Effective 2x2 block between real points; border-corrected if n odd.

    For odd n the process coincides with the even (n+1)-function process on
    the space extended by a virtual point carrying the border function, and
    the even kernel of that extension picks up the border sums:
    K12 += b1(x), K21 -= b1(y), K22 += b2(x) - b2(y).
    """
    blk = _inner_block(spec, x, y, spec.n)
    if spec.odd:
        bx1, bx2 = _border_pair(spec, x)
        by1, by2 = _border_pair(spec, y)
        blk[0][1] += bx1
        blk[1][0] -= by1
        blk[1][1] += bx2 - by2
    return blk


def _inner_block(spec, x, y, idx_range):
    minv_t = spec.minv_t()
    x, y = Fraction(x), Fraction(y)
    phi_x = [spec.phi[i](x) for i in range(idx_range)]
    phi_y = [spec.phi[j](y) for j in range(idx_range)]
    eph_x = [_eps_dot_at(spec, i, x) for i in range(idx_range)]
    eph_y = [_eps_dot_at(spec, j, y) for j in range(idx_range)]
    k11 = k12 = k21 = k22 = Fraction(0)
    for i in range(idx_range):
        for j in range(idx_range):
            m = minv_t[i][j]
            if not m:
                continue
            k11 += phi_x[i] * m * phi_y[j]
            k12 += phi_x[i] * m * eph_y[j]
            k21 += eph_x[i] * m * phi_y[j]
            k22 += eph_x[i] * m * eph_y[j]
    k22 -= spec.eps(x, y)
    return [[k11, k12], [k21, k22]]


def _border_pair(spec, x):
    """Border column entries (phi-row, eps.phi-row) at a point x."""
    minv_t = spec.minv_t()
    n = spec.n
    b1 = sum((spec.phi[i](x) * minv_t[i][n] for i in range(n)), Fraction(0))
    b2 = sum((_eps_dot_at(spec, i, x) * minv_t[i][n] for i in range(n)),
             Fraction(0))
    return b1, b2


def kernel_block_plus(spec, x, y):
    """The 4x4 bordered kernel block of the odd-n process at (x, y).

    Layout: the border-corrected point block, bordered by the virtual-point
    column pair (b1(x), 0; b2(x), 0), its skew transpose, and the constant
    corner ((0, 1), (-1, 0)).  This placement of the constant +-1 entries
    (in the corner rather than against the point rows) is the one under
    which Pf(K+(S)) reproduces the direct correlation for every |S|; it is
    pinned by the corr_pf == corr_direct oracle.
    """
    if not spec.odd:
        raise ValueError("kernel_block_plus needs odd n")
    inner = _point_block(spec, x, y)
    bx1, bx2 = _border_pair(spec, x)
    by1, by2 = _border_pair(spec, y)
    zero, one = Fraction(0), Fraction(1)
    return [
        [inner[0][0], inner[0][1], bx1, zero],
        [inner[1][0], inner[1][1], bx2, zero],
        [-by1, -by2, zero, one],
        [zero, zero, -one, zero],
    ]


def kernel_matrix(spec, s_points):
    """Assembled kernel matrix for the ordered point list S.

    Even n: the 2l x 2l grid of 2x2 blocks.  Odd n: the (2l+2)-square of
    border-corrected blocks plus one virtual-point row/column pair (the
    blockwise 4x4 picture duplicates that pair per point; it appears once
    here).  For odd n and empty S the matrix is the constant corner, whose
    Pfaffian is 1.
    """
    pts = [Fraction(p) for p in s_points]
    l = len(pts)
    size = 2 * l + (2 if spec.odd else 0)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for a in range(l):
        for b in range(l):
            blk = _point_block(spec, pts[a], pts[b])
            for r in range(2):
                for c in range(2):
                    rows[2 * a + r][2 * b + c] = blk[r][c]
    if spec.odd:
        for a in range(l):
            b1, b2 = _border_pair(spec, pts[a])
            rows[2 * a][2 * l] = b1
            rows[2 * a + 1][2 * l] = b2
            rows[2 * l][2 * a] = -b1
            rows[2 * l][2 * a + 1] = -b2
        rows[2 * l][2 * l + 1] = Fraction(1)
        rows[2 * l + 1][2 * l] = Fraction(-1)
    return rows


def corr_pf(spec, s_points):
    """Correlation R(S) as the Pfaffian of the assembled kernel matrix."""
    pts = sorted(Fraction(p) for p in s_points)
    if len(set(pts)) != len(pts):
        return Fraction(0)
    if len(pts) > spec.n:
        return Fraction(0)
    if not pts:
        return Fraction(1)
    _check_in_space(spec, pts)
    rows = kernel_matrix(spec, pts)
    return pfaffian_even(SkewMatrix.from_rows(rows))


def corr_direct(spec, s_points):
    """Correlation R(S) by exact summation over the free coordinates.

    R(S) = sum over (n-l)-subsets T of the space of
    det(phi_i over S+T) Pf(eps over S+T, bordered if n odd) mu(T),
    divided by Pf(M).  The subset sum absorbs the (n-l)! of the ordered
    form; coincident points vanish through the determinant.
    """
    pts = sorted(Fraction(p) for p in s_points)
    if len(set(pts)) != len(pts):
        return Fraction(0)
    n = spec.n
    if len(pts) > n:
        return Fraction(0)
    _check_in_space(spec, pts)
    sp = spec.space
    pf_m = pfaffian_even(spec.moment_matrix())
    if not pf_m:
        raise ValueError("singular moment matrix; the process is undefined")
    free = [(p, mu) for p, mu in zip(sp.points, sp.weights) if p not in pts]
    total = Fraction(0)
    for extra in itertools.combinations(free, n - len(pts)):
        coords = pts + [p for p, _mu in extra]
        term = _det_phi(spec, coords) * _pf_eps(spec, coords)
        for _p, mu in extra:
            term *= mu
        total += term
    return total / pf_m


def _check_in_space(spec, pts):
    space_pts = set(spec.space.points)
    for p in pts:
        if p not in space_pts:
            raise ValueError(f"point {p} is not in the space")


def _det_phi(spec, coords):
    return det_exact([[spec.phi[i](x) for x in coords]
                      for i in range(spec.n)])


def _pf_eps(spec, coords):
    m = len(coords)
    upper = {(i, j): spec.eps(coords[i], coords[j])
             for i in range(m) for j in range(i + 1, m)}
    return pfaffian_debruijn(SkewMatrix(m, upper))


def _moment_eps(x, y):
    # orientation pinned by the density/moments equality (see module doc)
    return (y - x) / (x + y)


def bures_tau(space, n, cap=0, n_max=None):
    """Bures partition function tau_n on a finite space, two ways.

    Computes the n-fold sum of prod (x_i-x_j)^2/(x_i+x_j) * prod omega(x_i;t)
    and the (bordered, if n odd) Pfaffian of the moments of omega(x;t), with
    omega(x;t) = weight * exp(sum_{k odd <= n_max} t_k x^k) truncated at
    weighted degree `cap`; asserts they agree and returns the value.  With
    cap=0 the result is a plain Fraction.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n_max is None:
        n_max = cap if cap % 2 else max(cap - 1, 1)
    if cap > 0:
        omegas = []
        for p, mu in zip(space.points, space.weights):
            arg = OddPoly({((0, k, 1),): p ** k
                           for k in range(1, n_max + 1, 2)}, cap)
            omegas.append(poly_exp(arg) * mu)
        one = OddPoly.one(cap)
    else:
        omegas = list(space.weights)
        one = Fraction(1)
    pts = space.points
    # n-fold sum over unordered n-subsets (repeats vanish against the
    # squared Vandermonde), absorbing the 1/n!
    direct = None
    for sub in itertools.combinations(range(len(pts)), n):
        dens = one
        for a, b in itertools.combinations(sub, 2):
            xi, xj = pts[a], pts[b]
            dens = dens * ((xi - xj) ** 2 / (xi + xj))
        for a in sub:
            dens = dens * omegas[a]
        direct = dens if direct is None else direct + dens
    if direct is None:
        raise ValueError("space has fewer than n points")
    moments = {}
    for i in range(n):
        for j in range(i + 1, n):
            s = None
            for p, wp in zip(pts, omegas):
                for q, wq in zip(pts, omegas):
                    term = wp * wq * (_moment_eps(p, q) * p ** i * q ** j)
                    s = term if s is None else s + term
            moments[(i, j)] = s
    if n % 2 == 1:
        for i in range(n):
            s = None
            for p, wp in zip(pts, omegas):
                term = wp * (p ** i)
                s = term if s is None else s + term
            moments[(i, n)] = s
        pf = pfaffian_even(SkewMatrix(n + 1, moments))
    else:
        pf = pfaffian_even(SkewMatrix(n, moments))
    if not _values_equal(direct, pf):
        raise AssertionError("n-fold sum and Pfaffian-of-moments disagree; "
                             "convention drift")
    return pf


def _values_equal(a, b):
    diff = a - b
    return diff.is_zero() if isinstance(diff, OddPoly) else diff == 0
