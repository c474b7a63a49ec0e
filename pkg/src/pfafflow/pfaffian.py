"""Pfaffians of skew-symmetric matrices, over exact rationals or floats.

Odd orders are handled by the bordered (de Bruijn) extension: append a
column of ones and a row of minus ones.  A direct permutation-sum evaluator
is kept for orders up to 7 as an independent oracle.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

from .series import OddPoly, parse_fraction, _fraction_str

SIGMA_SUM_MAX_ORDER = 7
FLOAT_SINGULAR_TOL = 1e-12


class SkewMatrix:
    """Square skew-symmetric matrix; only the strict upper triangle is stored.

    Entries may be Fractions/ints (exact), floats, or OddPoly values; a
    single matrix must not mix exact and float entries.
    """

    __slots__ = ("n", "upper")

    def __init__(self, n, upper):
        if n < 0:
            raise ValueError("order must be nonnegative")
        self.n = n
        self.upper = {}
        for (i, j), v in upper.items():
            if not (0 <= i < j < n):
                raise ValueError(f"bad upper index ({i}, {j}) for order {n}")
            if _nonzero(v):
                self.upper[(i, j)] = v

    @classmethod
    def from_rows(cls, rows):
        n = len(rows)
        upper = {}
        for i in range(n):
            if len(rows[i]) != n:
                raise ValueError("matrix is not square")
            if _nonzero(rows[i][i]):
                raise ValueError("nonzero diagonal entry")
            for j in range(i + 1, n):
                a, b = rows[i][j], rows[j][i]
                if _nonzero(_add(a, b)):
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) are "
                                     "not skew")
                upper[(i, j)] = a
        return cls(n, upper)

    @classmethod
    def from_upper_list(cls, n, entries):
        """Build from row-major upper-triangle entries (a_01, a_02, ..)."""
        entries = list(entries)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        if len(entries) != len(pairs):
            raise ValueError("wrong number of upper-triangle entries")
        return cls(n, dict(zip(pairs, entries)))

    def entry(self, i, j):
        if i == j:
            return self._zero()
        if i < j:
            return self.upper.get((i, j), self._zero())
        v = self.upper.get((j, i))
        return self._zero() if v is None else -v

    def _zero(self):
        ring = Fraction(0)
        for v in self.upper.values():
            if isinstance(v, OddPoly):
                return OddPoly.zero(v.cap, v.cap_neg)
            if isinstance(v, float):
                ring = 0.0
        return ring

    def rows(self):
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def is_float(self):
        return any(isinstance(v, float) for v in self.upper.values())

    def swap(self, i, j):
        """Simultaneous row/column swap i <-> j (flips the Pfaffian sign)."""
        perm = list(range(self.n))
        perm[i], perm[j] = perm[j], perm[i]
        out = {}
        for (a, b), v in self.upper.items():
            p, q = perm[a], perm[b]
            if p < q:
                out[(p, q)] = v
            else:
                out[(q, p)] = -v
        return SkewMatrix(self.n, out)

    def to_json_obj(self):
        items = sorted(self.upper.items())
        return {"n": self.n,
                "upper": [[i, j, _entry_str(v)] for (i, j), v in items]}

    @classmethod
    def from_json_obj(cls, obj):
        n = int(obj["n"])
        upper = {}
        for i, j, v in obj["upper"]:
            upper[(int(i), int(j))] = parse_fraction(v) if isinstance(v, str) \
                else (float(v) if isinstance(v, float) else Fraction(v))
        return cls(n, upper)

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_obj(json.load(fh))

    def __repr__(self):
        return f"SkewMatrix(n={self.n}, nnz={len(self.upper)})"


def _nonzero(v):
    if isinstance(v, OddPoly):
        return not v.is_zero()
    return bool(v)


def _add(a, b):
    return a + b


def _entry_str(v):
    if isinstance(v, float):
        return v
    if isinstance(v, OddPoly):
        raise TypeError("polynomial matrices are not JSON-serialisable here")
    return _fraction_str(v)


def border_plus(a):
    """Bordered extension of an odd-order matrix: last column 1, row -1."""
    if a.n % 2 == 0:
        raise ValueError("border_plus expects an odd-order matrix")
    one = 1.0 if a.is_float() else Fraction(1)
    upper = dict(a.upper)
    for i in range(a.n):
        upper[(i, a.n)] = one
    return SkewMatrix(a.n + 1, upper)


def pfaffian_even(a, tol=FLOAT_SINGULAR_TOL):
    """Pfaffian of an even-order skew matrix.

    Exact entries use expansion by minors below order 8 and skew Gaussian
    elimination above; float entries use elimination with partial pivoting
    (pivots below `tol` in absolute value give a zero result).
    """
    if a.n % 2 != 0:
        raise ValueError("pfaffian_even expects an even order; "
                         "use pfaffian_debruijn for odd orders")
    if a.n == 0:
        return Fraction(1)
    if a.is_float():
        return _pf_float(a.rows(), tol)
    if a.n < 8 or any(isinstance(v, OddPoly) for v in a.upper.values()):
        return _pf_minors(a.rows())
    return _pf_exact_elim(a.rows())


def pfaffian_debruijn(a, tol=FLOAT_SINGULAR_TOL):
    """Pfaffian for any order: classical when even, bordered when odd."""
    if a.n % 2 == 0:
        return pfaffian_even(a, tol)
    return pfaffian_even(border_plus(a), tol)


def pfaffian_sigma_sum(a):
    """Direct permutation-sum Pfaffian (independent oracle, order <= 7).

    Pf(A) = (1 / (2^m m!)) * sum over permutations (j_1..j_n) of sign *
    a_{j1 j2} ... a_{j_{2m-1} j_{2m}}, with m = floor(n/2); for odd n the
    last index rides along in the sign only.
    """
    n = a.n
    if n > SIGMA_SUM_MAX_ORDER:
        raise ValueError("sigma-sum oracle is limited to order "
                         f"{SIGMA_SUM_MAX_ORDER}")
    if n == 0:
        return Fraction(1)
    m = n // 2
    rows = a.rows()
    total = None
    for perm in itertools.permutations(range(n)):
        v = _perm_sign(perm)
        term = None
        for k in range(m):
            e = rows[perm[2 * k]][perm[2 * k + 1]]
            term = e if term is None else term * e
        term = v if term is None else term * v
        total = term if total is None else total + term
    denom = Fraction(2 ** m * _factorial(m))
    return total * (Fraction(1) / denom)


def _factorial(m):
    out = 1
    for k in range(2, m + 1):
        out *= k
    return out


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def _pf_minors(rows):
    n = len(rows)
    if n == 0:
        return Fraction(1)
    idx = list(range(n))

    def rec(active):
        if not active:
            return None
        i = active[0]
        total = None
        for pos in range(1, len(active)):
            j = active[pos]
            e = rows[i][j]
            if not _nonzero(e):
                continue
            rest = active[1:pos] + active[pos + 1:]
            sub = rec(rest)
            term = e if sub is None else e * sub
            if pos % 2 == 0:
                term = -term
            total = term if total is None else total + term
        if total is None:
            total = rows[i][i]  # a zero of the right ring
        return total

    out = rec(idx)
    return out


def _pf_exact_elim(rows):
    n = len(rows)
    m = [list(r) for r in rows]
    pf = Fraction(1)
    for k in range(0, n, 2):
        piv = None
        for j in range(k + 1, n):
            if m[k][j]:
                piv = j
                break
        if piv is None:
            return Fraction(0)
        if piv != k + 1:
            _swap_sym(m, piv, k + 1)
            pf = -pf
        p = m[k][k + 1]
        pf *= p
        inv = Fraction(1) / p
        for i in range(k + 2, n):
            cki, ck1i = m[k][i], m[k + 1][i]
            if not cki and not ck1i:
                continue
            for j in range(i + 1, n):
                upd = (ck1i * m[k][j] - cki * m[k + 1][j]) * inv
                if upd:
                    m[i][j] += upd
                    m[j][i] -= upd
    return pf


def _pf_float(rows, tol):
    n = len(rows)
    m = [[float(v) for v in r] for r in rows]
    pf = 1.0
    for k in range(0, n, 2):
        piv = max(range(k + 1, n), key=lambda j: abs(m[k][j]))
        if abs(m[k][piv]) <= tol:
            return 0.0
        if piv != k + 1:
            _swap_sym(m, piv, k + 1)
            pf = -pf
        p = m[k][k + 1]
        pf *= p
        for i in range(k + 2, n):
            cki, ck1i = m[k][i], m[k + 1][i]
            for j in range(i + 1, n):
                upd = (ck1i * m[k][j] - cki * m[k + 1][j]) / p
                m[i][j] += upd
                m[j][i] -= upd
    return pf


def _swap_sym(m, i, j):
    m[i], m[j] = m[j], m[i]
    for row in m:
        row[i], row[j] = row[j], row[i]


def det_exact(rows):
    """Determinant over exact rationals by fraction elimination."""
    n = len(rows)
    m = [[Fraction(v) for v in r] for r in rows]
    det = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if m[i][k]:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        inv = Fraction(1) / m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] * inv
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return det


def invert_exact(rows):
    """Inverse of an exact rational matrix; raises on singularity."""
    n = len(rows)
    m = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for k in range(n):
        piv = None
        for i in range(k, n):
            if m[i][k]:
                piv = i
                break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
        inv = Fraction(1) / m[k][k]
        m[k] = [v * inv for v in m[k]]
        for i in range(n):
            if i != k and m[i][k]:
                f = m[i][k]
                m[i] = [a - f * b for a, b in zip(m[i], m[k])]
    return [row[n:] for row in m]
