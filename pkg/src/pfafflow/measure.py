"""The shifted Schur measure on strict partitions and its Pfaffian kernel.

Weights are M(lambda) = P_lambda(x) Q_lambda(y) / Z with the normalisation
Z = prod (1+x_i y_j)/(1-x_i y_j); everything on the brute-force side is an
exact rational.  The kernel side works in floats: the coefficients f_m of
F(z) = e^{xi(t_+,z) - xi(t_-,1/z)} are computed from exact partial sums
with geometric tail bounds, the kernel values are

    K(a,b) = (1/2) f_a f_b + sum_{k>=1} (-1)^k f_{a+k} f_{b-k},

and rho(A) is a Pfaffian over the index order (a_1 > ... > a_s, -a_s, ...,
-a_1) with the diagonal sign normalisation S(a) = 1 for a > 0 and
S(a) = (-1)^a for a < 0, pinned by the one-point brute-force oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .pfaffian import SkewMatrix, pfaffian_even
from .schurq import QTABLE, schur_p, schur_q, strict_partitions

_KERNEL_GUARD = Fraction(1, 1000)  # entry accuracy: tol * guard / matrix size


class KernelAccuracyError(ArithmeticError):
    """The requested tolerance cannot be certified by the tail bounds."""


@dataclass(frozen=True)
class SpecPair:
    """Point specialisation (x; y), all values rational in (0, 1)."""

    x: tuple
    y: tuple

    def __init__(self, x, y):
        x = tuple(Fraction(v) for v in x)
        y = tuple(Fraction(v) for v in y)
        for v in x + y:
            if not 0 < v < 1:
                raise ValueError(f"specialisation values must lie in (0,1): {v}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def r(self):
        if not self.x or not self.y:
            return Fraction(0)
        return max(self.x) * max(self.y)


def _z_product(xs, ys):
    out = Fraction(1)
    for xi in xs:
        for yj in ys:
            p = xi * yj
            if abs(p) >= 1:
                raise ValueError("divergent specialisation: |x_i y_j| >= 1")
            out *= (1 + p) / (1 - p)
    return out


def z_value(spec):
    """Partition-function product Z = prod (1+x_i y_j)/(1-x_i y_j); exact."""
    return _z_product(spec.x, spec.y)


def measure_weight(lam, spec, qt=None):
    """M(lambda) = P_lambda(x) Q_lambda(y) / Z; exact and nonnegative."""
    qt = qt or QTABLE
    return schur_p(lam, spec.x, qt=qt) * schur_q(lam, spec.y, qt=qt) / z_value(spec)


def tail_bound(spec, cutoff):
    """Bound on the measure of {lambda_1 > cutoff}, by rescaling x.

    P and Q have nonnegative monomial coefficients and are homogeneous of
    degree |lambda| >= lambda_1, so for any theta in (1, 1/r) the tail is at
    most theta^-(cutoff+1) * Z(theta x, y)/Z(x, y).
    """
    if not spec.x or not spec.y:
        return Fraction(0)
    r = spec.r
    theta = (1 + 1 / r) / 2
    if theta <= 1:
        raise ValueError("no room for a rescaling bound; r >= 1?")
    scaled = _z_product(tuple(v * theta for v in spec.x), spec.y)
    return scaled / z_value(spec) * theta ** -(cutoff + 1)


def rho_brute(a_set, spec, cutoff=None, qt=None):
    """Correlation rho(A) by exact summation over strict partitions.

    Sums M(lambda) over lambda containing A with lambda_1 <= cutoff; lengths
    beyond len(x) carry zero weight and are skipped.  Returns (value, tail)
    with the geometric bound on the omitted mass, both exact Fractions.
    """
    qt = qt or QTABLE
    a_set = frozenset(int(a) for a in a_set)
    if any(a <= 0 for a in a_set):
        raise ValueError("correlation sets contain positive integers only")
    if cutoff is None:
        cutoff = _default_cutoff(spec, max(a_set, default=0))
    if a_set and cutoff < max(a_set):
        raise ValueError("cutoff below max(A)")
    z = z_value(spec)
    total = Fraction(0)
    max_len = min(len(spec.x), len(spec.y))
    for lam in strict_partitions(cutoff, max_len, contains=a_set):
        total += schur_p(lam, spec.x, qt=qt) * schur_q(lam, spec.y, qt=qt)
    return total / z, tail_bound(spec, cutoff)


def _default_cutoff(spec, at_least):
    r = spec.r
    if r == 0:
        return max(1, at_least)
    cutoff = max(1, at_least)
    while float(tail_bound(spec, cutoff)) > 1e-12 and cutoff < 500:
        cutoff += 5
    return cutoff


@dataclass(frozen=True)
class KernelCoeffs:
    """Window of Laurent coefficients f_m of F(z), with tail data.

    decay_base_pos / decay_base_neg are the geometric bases s, s' of the
    rigorous envelopes |f_m| <= C s^m (m >= 0) and |f_m| <= C s'^{|m|}
    (m < 0); tail is the bound on the truncation error of each entry.
    """

    spec: SpecPair
    window: int
    f: dict
    envelope: float
    decay_base_pos: float
    decay_base_neg: float
    tail: float

    def __getitem__(self, m):
        if abs(m) > self.window:
            raise KernelAccuracyError(
                f"index {m} outside the computed window {self.window}")
        return self.f.get(m, 0.0)

    def bound(self, m):
        """Rigorous bound on |f_m| for any m, inside or outside the window."""
        base = self.decay_base_pos if m >= 0 else self.decay_base_neg
        return self.envelope * base ** abs(m)


@lru_cache(maxsize=None)
def _series_coeffs(points, k_max):
    """Coefficients of prod_i (1 + p z)/(1 - p z) up to z^k_max; exact."""
    coeffs = [Fraction(1)] + [Fraction(0)] * k_max
    for p in points:
        # multiply by (1 + p z) then divide by (1 - p z)
        for k in range(k_max, 0, -1):
            coeffs[k] += p * coeffs[k - 1]
        for k in range(1, k_max + 1):
            coeffs[k] += p * coeffs[k - 1]
    return coeffs


def _decay_data(spec):
    """Geometric envelope data (sx, sy, env_a, env_b) for the f-series."""
    x, y = spec.x, spec.y
    sx = (1 + max(x, default=Fraction(0))) / 2
    sy = (1 + max(y, default=Fraction(0))) / 2
    return sx, sy, _envelope_at(x, sx), _envelope_at(y, sy)


def kernel_coeffs(spec, window, tol=1e-12):
    """Laurent coefficients f_m, |m| <= window, of F(z); error below tol.

    f_m = sum_{j >= 0} a_{m+j} b_j with a_k = q_k(t_+/2) from the x-side
    product and b_j = q_j(-t_-/2) from the y-side; each entry's series is
    cut once the geometric envelope certifies the requested tolerance.
    """
    sx, sy, env_a, env_b = _decay_data(spec)
    ss = sx * sy
    cut = 0
    tail = env_a * env_b * ss / (1 - ss)
    while float(tail) > tol:
        cut += 4
        tail = env_a * env_b * ss ** (cut + 1) / (1 - ss)
        if cut > 10000:
            raise KernelAccuracyError("tolerance unachievable; achieved "
                                      f"bound {float(tail)}")
    a = _series_coeffs(spec.x, window + cut)
    b = _series_coeffs(tuple(-v for v in spec.y), window + cut)
    f = {}
    for m in range(-window, window + 1):
        j0 = max(0, -m)
        s = Fraction(0)
        for j in range(j0, j0 + cut + 1):
            s += a[m + j] * b[j]
        v = float(s)
        if v:
            f[m] = v
    env = env_a * env_b / (1 - ss)
    return KernelCoeffs(spec=spec, window=window, f=f,
                        envelope=float(env), decay_base_pos=float(sx),
                        decay_base_neg=float(sy), tail=float(tail))


def _envelope_at(points, s):
    out = Fraction(1)
    for p in points:
        q = p / s
        if q >= 1:
            raise ValueError("envelope base must dominate the points")
        out *= (1 + q) / (1 - q)
    return out


@lru_cache(maxsize=None)
def _cached_coeffs(spec, window, tol):
    return kernel_coeffs(spec, window, tol)


def _series_cut(spec, a, b, tol):
    """k-range after which the K(a,b) series tail is certified below tol."""
    sx, sy, env_a, env_b = _decay_data(spec)
    env = env_a * env_b / (1 - sx * sy)
    ss = sx * sy
    prefac = env * env * sx ** max(a, 0) * sy ** max(-b, 0)
    cut = 0
    while float(prefac * ss ** (cut + 1) / (1 - ss)) > tol:
        cut += 4
        if cut > 10000:
            raise KernelAccuracyError("tolerance unachievable for K "
                                      f"({a},{b})")
    return cut


def kernel_K(a, b, spec, tol=1e-10, coeffs=None):
    """Kernel entry K(a,b) = <Phi_a Phi_b>, truncated with a certified tail."""
    cut = _series_cut(spec, a, b, tol / 2)
    if coeffs is None:
        coeffs = _cached_coeffs(spec, max(abs(a), abs(b)) + cut, tol / 8)
    c = coeffs
    if max(abs(a + cut), abs(b - cut), abs(a), abs(b)) > c.window:
        raise KernelAccuracyError("window too small for requested tolerance")
    total = 0.5 * c[a] * c[b]
    for k in range(1, cut + 1):
        term = c[a + k] * c[b - k]
        total += term if k % 2 == 0 else -term
    return total


def rho_pf(a_set, spec, tol=1e-8):
    """Correlation rho(A) as the Pfaffian of the 2|A| x 2|A| kernel matrix."""
    a_list = sorted({int(a) for a in a_set}, reverse=True)
    if any(a <= 0 for a in a_list):
        raise ValueError("correlation sets contain positive integers only")
    if not a_list:
        return 1.0
    s = len(a_list)
    order = a_list + [-a for a in reversed(a_list)]
    m = 2 * s
    entry_tol = float(tol * _KERNEL_GUARD) / m
    cut = max(_series_cut(spec, i, j, entry_tol / 2)
              for i in order for j in order)
    coeffs = _cached_coeffs(spec, max(a_list) + cut, entry_tol / 8)
    upper = {}
    maxabs = 1.0
    for i in range(m):
        for j in range(i + 1, m):
            v = _sign(order[i]) * _sign(order[j]) * \
                kernel_K(order[i], order[j], spec, entry_tol, coeffs)
            upper[(i, j)] = v
            maxabs = max(maxabs, abs(v))
    # crude sensitivity: |dPf| <= (m-1)!! * m/2 * max(1,|entry|)^{m/2-1} * d
    matchings = 1
    for k in range(m - 1, 0, -2):
        matchings *= k
    sens = matchings * (m // 2) * maxabs ** (m // 2 - 1) * entry_tol
    if sens > tol:
        raise KernelAccuracyError(
            f"cannot certify tolerance {tol}: entry sensitivity {sens}")
    return pfaffian_even(SkewMatrix(m, upper))


def _sign(a):
    if a > 0:
        return 1.0
    return -1.0 if a % 2 else 1.0


def rho_closed_form_one_var(k, spec):
    """rho({k}) = 2 (xy)^k (1-xy)/(1+xy) for one-variable specialisations."""
    if len(spec.x) != 1 or len(spec.y) != 1:
        raise ValueError("closed form needs one-variable x and y")
    p = spec.x[0] * spec.y[0]
    return 2 * p ** k * (1 - p) / (1 + p)


def log_z_miwa_check(spec, n_max):
    """Truncated sum_{n odd} (n/2) t_n t_{-n} under the Miwa map; exact.

    Converges to log Z; used to validate the normalisation identity.
    """
    total = Fraction(0)
    for n in range(1, n_max + 1, 2):
        tn = Fraction(2, n) * sum((v ** n for v in spec.x), Fraction(0))
        tmn = Fraction(2, n) * sum((v ** n for v in spec.y), Fraction(0))
        total += Fraction(n, 2) * tn * tmn
    return total
