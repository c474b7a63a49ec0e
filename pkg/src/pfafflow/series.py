"""Exact truncated polynomial arithmetic in odd-indexed time variables.

Values live in Q[t_1, t_3, ...][t_-1, t_-3, ...], optionally doubled with a
second ("primed") family u_n used when a bilinear identity needs two
independent copies of the times.  Truncation is by weighted degree, the
weight of t_n (or u_n) being |n|; positive-index and negative-index weights
are capped separately so two-sided objects can be cut at a bidegree.

A polynomial may carry a scalar factor sqrt(2)**r2 as a separate integer
exponent; even exponents are folded into the coefficients on normalisation,
so the canonical r2 is 0 or 1.  Any attempt to expose a value with r2 = 1
(serialisation, exact extraction) raises SqrtTwoParityError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


INF_CAP = 10 ** 9
"""Degree cap sentinel for polynomials that are exact at every degree."""


class SqrtTwoParityError(ArithmeticError):
    """A value with an odd sqrt(2) exponent escaped to the exact API."""


class TruncationError(ValueError):
    """A declared z-window cannot hold the exponents an operation produced."""


def _check_var(n, fam):
    if n == 0 or n % 2 == 0:
        raise ValueError(f"time index must be odd, got {n}")
    if fam not in (0, 1):
        raise ValueError(f"variable family must be 0 or 1, got {fam}")


def _mono_weights(mono):
    """(positive-side, negative-side) weighted degree of a monomial key."""
    wp = wn = 0
    for _fam, n, e in mono:
        if n > 0:
            wp += n * e
        else:
            wn += -n * e
    return wp, wn


def var_name(fam, n):
    return ("t" if fam == 0 else "u") + str(n)


def _parse_var_name(name):
    if not name or name[0] not in ("t", "u"):
        raise ValueError(f"bad variable name {name!r}")
    fam = 0 if name[0] == "t" else 1
    n = int(name[1:])
    _check_var(n, fam)
    return fam, n


def _fraction_str(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text):
    """Parse 'p/q', integer or decimal text into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


class OddPoly:
    """Sparse polynomial over exact rationals in odd time variables.

    terms maps a monomial key -- a sorted tuple of (family, index, exponent)
    triples -- to a nonzero Fraction.  cap / cap_neg bound the weighted
    degree on the positive / negative index side; monomials beyond either
    cap are dropped on construction.
    """

    __slots__ = ("terms", "cap", "cap_neg", "r2")

    def __init__(self, terms, cap, cap_neg=0, r2=0):
        if cap < 0 or cap_neg < 0:
            raise ValueError("degree caps must be nonnegative")
        kept = {}
        for mono, c in terms.items():
            c = Fraction(c)
            if not c:
                continue
            wp, wn = _mono_weights(mono)
            if wp <= cap and wn <= cap_neg:
                if len(mono) > 1 and any(mono[i] > mono[i + 1]
                                         for i in range(len(mono) - 1)):
                    mono = tuple(sorted(mono))
                    c = kept.get(mono, Fraction(0)) + c
                kept[mono] = c
        if not kept:
            r2 = 0
        elif r2 % 2 == 0:
            if r2:
                scale = Fraction(2) ** (r2 // 2)
                kept = {m: c * scale for m, c in kept.items()}
            r2 = 0
        else:
            scale = Fraction(2) ** ((r2 - 1) // 2)
            if scale != 1:
                kept = {m: c * scale for m, c in kept.items()}
            r2 = 1
        self.terms = kept
        self.cap = cap
        self.cap_neg = cap_neg
        self.r2 = r2

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, cap, cap_neg=0):
        return cls({}, cap, cap_neg)

    @classmethod
    def const(cls, c, cap, cap_neg=0, r2=0):
        return cls({(): Fraction(c)}, cap, cap_neg, r2)

    @classmethod
    def one(cls, cap, cap_neg=0):
        return cls.const(1, cap, cap_neg)

    @classmethod
    def var(cls, n, cap, cap_neg=0, primed=False):
        fam = 1 if primed else 0
        _check_var(n, fam)
        p = cls({((fam, n, 1),): Fraction(1)}, cap, cap_neg)
        if p.is_zero():
            raise ValueError(
                f"variable {var_name(fam, n)} does not fit caps ({cap}, {cap_neg})")
        return p

    # -- basic queries ----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def constant_term(self):
        if self.r2:
            raise SqrtTwoParityError("constant term of a sqrt(2)-scaled value")
        return self.terms.get((), Fraction(0))

    def coeff(self, mono):
        if self.r2:
            raise SqrtTwoParityError("coefficient of a sqrt(2)-scaled value")
        return self.terms.get(tuple(sorted(mono)), Fraction(0))

    def weighted_degree(self):
        """Max total weighted degree over both sides; -1 for the zero poly."""
        if not self.terms:
            return -1
        return max(sum(w for w in _mono_weights(m)) for m in self.terms)

    def variables(self):
        return sorted({(fam, n) for m in self.terms for fam, n, _ in m})

    def sorted_terms(self):
        """Terms in graded-lexicographic order (total weight, then key)."""
        def key(item):
            mono = item[0]
            wp, wn = _mono_weights(mono)
            return (wp + wn, mono)
        return sorted(self.terms.items(), key=key)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, OddPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return OddPoly.const(other, self.cap, self.cap_neg)
        return None

    def _join_caps(self, other):
        return min(self.cap, other.cap), min(self.cap_neg, other.cap_neg)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        cap, cap_neg = self._join_caps(other)
        a, b = self, other
        if a.r2 != b.r2:
            if a.is_zero():
                return OddPoly(b.terms, cap, cap_neg, b.r2)
            if b.is_zero():
                return OddPoly(a.terms, cap, cap_neg, a.r2)
            raise SqrtTwoParityError("cannot add values of different sqrt(2) parity")
        out = dict(a.terms)
        for m, c in b.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return OddPoly(out, cap, cap_neg, a.r2)

    __radd__ = __add__

    def __neg__(self):
        p = OddPoly.__new__(OddPoly)
        p.terms = {m: -c for m, c in self.terms.items()}
        p.cap, p.cap_neg, p.r2 = self.cap, self.cap_neg, self.r2
        return p

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return OddPoly.zero(self.cap, self.cap_neg)
            p = OddPoly.__new__(OddPoly)
            p.terms = {m: c * other for m, c in self.terms.items()}
            p.cap, p.cap_neg, p.r2 = self.cap, self.cap_neg, self.r2
            return p
        if not isinstance(other, OddPoly):
            return NotImplemented
        cap, cap_neg = self._join_caps(other)
        out = {}
        bw = [(m, c, *_mono_weights(m)) for m, c in other.terms.items()]
        for ma, ca in self.terms.items():
            wpa, wna = _mono_weights(ma)
            for mb, cb, wpb, wnb in bw:
                if wpa + wpb > cap or wna + wnb > cap_neg:
                    continue
                m = _mono_mul(ma, mb)
                s = out.get(m, Fraction(0)) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return OddPoly(out, cap, cap_neg, self.r2 + other.r2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = OddPoly.one(self.cap, self.cap_neg)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.r2 == other.r2 and self.terms == other.terms

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.r2))

    # -- calculus and substitution ----------------------------------------

    def deriv(self, n, primed=False):
        fam = 1 if primed else 0
        _check_var(n, fam)
        out = {}
        for mono, c in self.terms.items():
            for i, (f, m, e) in enumerate(mono):
                if f == fam and m == n:
                    if e == 1:
                        new = mono[:i] + mono[i + 1:]
                    else:
                        new = mono[:i] + ((f, m, e - 1),) + mono[i + 1:]
                    out[new] = out.get(new, Fraction(0)) + c * e
                    break
        return OddPoly(out, self.cap, self.cap_neg, self.r2)

    def substitute(self, values):
        """Substitute rationals for variables; keys are (family, index).

        Unlisted variables are kept.  Returns an OddPoly (a constant one if
        everything was substituted).
        """
        vals = {k: Fraction(v) for k, v in values.items()}
        out = {}
        for mono, c in self.terms.items():
            coef = c
            rest = []
            for f, n, e in mono:
                if (f, n) in vals:
                    coef *= vals[(f, n)] ** e
                else:
                    rest.append((f, n, e))
            if not coef:
                continue
            key = tuple(rest)
            s = out.get(key, Fraction(0)) + coef
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return OddPoly(out, self.cap, self.cap_neg, self.r2)

    def evaluate(self, t):
        """Evaluate at a TimeVector (missing times are zero); exact."""
        if self.r2:
            raise SqrtTwoParityError("evaluation of a sqrt(2)-scaled value")
        total = Fraction(0)
        for mono, c in self.terms.items():
            v = c
            for f, n, e in mono:
                if f != 0:
                    raise ValueError("evaluate() expects a single-family polynomial")
                v *= t.get(n) ** e
            total += v
        return total

    def drop_negative(self):
        """Set every negative-index variable to zero."""
        out = {m: c for m, c in self.terms.items()
               if all(n > 0 for _f, n, _e in m)}
        return OddPoly(out, self.cap, self.cap_neg, self.r2)

    def primed(self):
        """Rename the t-family to the u-family (for a second time set)."""
        out = {}
        for mono, c in self.terms.items():
            if any(f == 1 for f, _n, _e in mono):
                raise ValueError("polynomial already uses the primed family")
            out[tuple(sorted((1, n, e) for _f, n, e in mono))] = c
        return OddPoly(out, self.cap, self.cap_neg, self.r2)

    def truncated(self, cap, cap_neg=None):
        if cap_neg is None:
            cap_neg = self.cap_neg
        return OddPoly(self.terms, min(cap, self.cap), min(cap_neg, self.cap_neg), self.r2)

    def with_caps(self, cap, cap_neg=0):
        """Re-register caps (monomials beyond the new caps are dropped)."""
        return OddPoly(self.terms, cap, cap_neg, self.r2)

    # -- rendering ---------------------------------------------------------

    def to_json_obj(self):
        if self.r2:
            raise SqrtTwoParityError("cannot serialise a sqrt(2)-scaled value")
        out = []
        for mono, c in self.sorted_terms():
            exps = {var_name(f, n): e for f, n, e in mono}
            out.append({"exponents": exps, "coeff": _fraction_str(c)})
        return out

    @classmethod
    def from_json_obj(cls, obj, cap, cap_neg=0):
        terms = {}
        for item in obj:
            mono = []
            for name, e in item["exponents"].items():
                fam, n = _parse_var_name(name)
                mono.append((fam, n, int(e)))
            terms[tuple(sorted(mono))] = parse_fraction(item["coeff"])
        return cls(terms, cap, cap_neg)

    def __repr__(self):
        if not self.terms:
            return "OddPoly(0)"
        bits = []
        for mono, c in self.sorted_terms():
            factors = [str(c)]
            factors += [f"{var_name(f, n)}^{e}" if e > 1 else var_name(f, n)
                        for f, n, e in mono]
            bits.append("*".join(factors))
        body = " + ".join(bits)
        if self.r2:
            body = f"sqrt2*({body})"
        return f"OddPoly({body})"


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = {}
    for f, n, e in a:
        d[(f, n)] = e
    for f, n, e in b:
        d[(f, n)] = d.get((f, n), 0) + e
    return tuple(sorted((f, n, e) for (f, n), e in d.items()))


@dataclass(frozen=True)
class TimeVector:
    """Finitely supported assignment of exact rationals to odd times."""

    values: tuple

    def __init__(self, values):
        items = []
        for n, v in dict(values).items():
            _check_var(n, 0)
            v = Fraction(v)
            if v:
                items.append((n, v))
        object.__setattr__(self, "values", tuple(sorted(items)))

    def get(self, n):
        for m, v in self.values:
            if m == n:
                return v
        return Fraction(0)

    def items(self):
        return self.values

    def scaled(self, c):
        return TimeVector({n: v * Fraction(c) for n, v in self.values})


def miwa_times(x, n_max, side=+1):
    """Miwa map t_{side*n} = (2/n) * sum_i x_i**n for odd n <= n_max."""
    if n_max < 1 or n_max % 2 == 0:
        raise ValueError("n_max must be odd and positive")
    if side not in (+1, -1):
        raise ValueError("side must be +1 or -1")
    xs = [Fraction(v) for v in x]
    vals = {}
    for n in range(1, n_max + 1, 2):
        s = sum((v ** n for v in xs), Fraction(0))
        if s:
            vals[side * n] = Fraction(2, n) * s
    return TimeVector(vals)


def poly_exp(p, cap=None):
    """exp(p) = sum p**k / k!, truncated; p must have zero constant term."""
    if p.r2:
        raise SqrtTwoParityError("poly_exp of a sqrt(2)-scaled value")
    if p.constant_term():
        raise ValueError("poly_exp requires a zero constant term")
    if cap is None:
        cap, cap_neg = p.cap, p.cap_neg
    else:
        if cap > p.cap:
            raise ValueError("requested cap exceeds the argument's cap")
        cap_neg = p.cap_neg
    if cap >= INF_CAP and p.terms:
        raise ValueError("poly_exp needs a finite degree cap")
    p = p.truncated(cap, cap_neg)
    out = OddPoly.one(cap, cap_neg)
    term = OddPoly.one(cap, cap_neg)
    k = 0
    while True:
        k += 1
        term = term * p * Fraction(1, k)
        if term.is_zero():
            return out
        out = out + term


class LaurentSeries:
    """Polynomial-coefficient Laurent object over a declared z-window.

    Exponents outside [zmin, zmax] do not exist in the represented value
    (they were either never produced or an operation that would have
    produced them raised TruncationError), so reads inside the window are
    always exact.
    """

    __slots__ = ("coeffs", "zmin", "zmax")

    def __init__(self, coeffs, window=None):
        coeffs = {k: p for k, p in coeffs.items() if not p.is_zero()}
        if window is None:
            if coeffs:
                window = (min(coeffs), max(coeffs))
            else:
                window = (0, 0)
        zmin, zmax = window
        if zmin > zmax:
            raise ValueError("empty z-window")
        bad = [k for k in coeffs if k < zmin or k > zmax]
        if bad:
            raise TruncationError(
                f"window [{zmin}, {zmax}] cannot hold exponents {sorted(bad)}")
        self.coeffs = coeffs
        self.zmin = zmin
        self.zmax = zmax

    @classmethod
    def from_poly(cls, p, window=(0, 0)):
        return cls({0: p}, window)

    def window(self):
        return (self.zmin, self.zmax)

    def coeff(self, k):
        if k < self.zmin or k > self.zmax:
            raise TruncationError(
                f"z^{k} lies outside the window [{self.zmin}, {self.zmax}]")
        if k in self.coeffs:
            return self.coeffs[k]
        some = next(iter(self.coeffs.values()), None)
        if some is None:
            return OddPoly.zero(0, 0)
        return OddPoly.zero(some.cap, some.cap_neg)

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        out = dict(self.coeffs)
        for k, p in other.coeffs.items():
            out[k] = out[k] + p if k in out else p
        window = (min(self.zmin, other.zmin), max(self.zmax, other.zmax))
        return LaurentSeries(out, window)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, OddPoly)):
            return LaurentSeries({k: p * other for k, p in self.coeffs.items()},
                                 (self.zmin, self.zmax))
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        out = {}
        for i, p in self.coeffs.items():
            for j, q in other.coeffs.items():
                k = i + j
                r = p * q
                if r.is_zero():
                    continue
                out[k] = out[k] + r if k in out else r
        window = (self.zmin + other.zmin, self.zmax + other.zmax)
        return LaurentSeries(out, window)

    __rmul__ = __mul__

    def residue_with(self, other):
        """z^0 coefficient of self*other without forming the full product."""
        total = None
        for i, p in self.coeffs.items():
            q = other.coeffs.get(-i)
            if q is None:
                continue
            r = p * q
            total = r if total is None else total + r
        if total is None:
            caps = next(iter(self.coeffs.values()), None)
            cap = caps.cap if caps is not None else 0
            cap_neg = caps.cap_neg if caps is not None else 0
            total = OddPoly.zero(cap, cap_neg)
        lo = self.zmin + other.zmin
        hi = self.zmax + other.zmax
        if lo > 0 or hi < 0:
            raise TruncationError("z^0 lies outside the product window")
        return total

    def __repr__(self):
        ks = sorted(self.coeffs)
        return (f"LaurentSeries(window=[{self.zmin},{self.zmax}], "
                f"exponents={ks})")


def residue_z0(s):
    """Formal contour extraction: the z^0 coefficient of a Laurent object."""
    return s.coeff(0)


def miwa_shift(p, sign, side=+1, primed=False, zpow=-1, window=None):
    """Substitute t_n -> t_n + sign*(2/|n|)*z**(|n|*zpow) on one index side.

    With the defaults (side=+1, zpow=-1) and sign=-1 this realises the
    classical shift p(t - [z^{-1}]) with [z] = (2z, 2z^3/3, 2z^5/5, ...).
    Only variables of the selected family whose index sign matches `side`
    are shifted.  Returns a LaurentSeries whose coefficients are OddPoly.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    if side not in (+1, -1) or zpow not in (+1, -1):
        raise ValueError("side and zpow must be +1 or -1")
    fam = 1 if primed else 0
    out = {}
    for mono, c in p.terms.items():
        expansions = [(0, (), c)]
        for f, n, e in mono:
            if f != fam or (n > 0) != (side > 0):
                expansions = [(z, m + ((f, n, e),), v) for z, m, v in expansions]
                continue
            w = abs(n)
            shift_c = Fraction(2 * sign, w)
            new = []
            for z, m, v in expansions:
                for k in range(e + 1):
                    coef = v * math.comb(e, k) * shift_c ** k
                    mm = m if k == e else m + ((f, n, e - k),)
                    new.append((z + k * w * zpow, mm, coef))
            expansions = new
        for z, m, v in expansions:
            key = tuple(sorted(m))
            d = out.setdefault(z, {})
            s = d.get(key, Fraction(0)) + v
            if s:
                d[key] = s
            else:
                d.pop(key, None)
    coeffs = {z: OddPoly(d, p.cap, p.cap_neg, p.r2) for z, d in out.items()}
    if window is None:
        window = (min(coeffs, default=0), max(coeffs, default=0))
    return LaurentSeries(coeffs, window)


def exp_laurent(s, window=None):
    """exp of a Laurent object whose coefficients all lack constant terms."""
    for k, p in s.coeffs.items():
        if p.constant_term():
            raise ValueError("exp_laurent requires coefficient polynomials "
                             "with zero constant term")
    caps = next(iter(s.coeffs.values()), None)
    cap = caps.cap if caps is not None else 0
    cap_neg = caps.cap_neg if caps is not None else 0
    if cap >= INF_CAP or cap_neg >= INF_CAP:
        raise ValueError("exp_laurent needs finite degree caps")
    one = LaurentSeries.from_poly(OddPoly.one(cap, cap_neg))
    out = one
    term = one
    k = 0
    while True:
        k += 1
        term = term * s * Fraction(1, k)
        if not term.coeffs:
            break
        out = out + term
    if window is not None:
        return LaurentSeries(out.coeffs, window)
    return out


def xi_series(cap, cap_neg=0, scale=1, side=+1, primed=False, zpow=+1,
              n_max=None):
    """The Laurent object sum_n scale * t_{side*n} * z**(n*zpow), n odd.

    Indices run over odd n up to n_max, which defaults to the largest index
    the relevant degree cap can accommodate.
    """
    if n_max is None:
        n_max = cap if side > 0 else cap_neg
    coeffs = {}
    for n in range(1, n_max + 1, 2):
        v = OddPoly({((1 if primed else 0, side * n, 1),): Fraction(scale)},
                    cap, cap_neg)
        if not v.is_zero():
            k = n * zpow
            coeffs[k] = coeffs[k] + v if k in coeffs else v
    return LaurentSeries(coeffs) if coeffs else LaurentSeries(
        {}, (0, 0))


def hirota(p_op, f, g):
    """Apply a Hirota operator P(D) to the ordered pair (f, g).

    p_op is a polynomial in commuting symbols D_n, represented as an OddPoly
    whose variable (0, n) stands for D_n (indices odd, possibly negative).
    P(D) f.g = P(d/dt - d/dt') f(t) g(t') at t' = t.
    """
    if p_op.r2 or f.r2 or g.r2:
        raise SqrtTwoParityError("hirota over sqrt(2)-scaled values")
    cap = min(f.cap, g.cap)
    cap_neg = min(f.cap_neg, g.cap_neg)
    total = OddPoly.zero(cap, cap_neg)
    for mono, c in p_op.terms.items():
        pairs = [(f, g, Fraction(c))]
        for fam, n, e in mono:
            if fam != 0:
                raise ValueError("Hirota symbols must use the unprimed family")
            new = []
            for a, b, coef in pairs:
                da = [a]
                for _ in range(e):
                    da.append(da[-1].deriv(n))
                db = [b]
                for _ in range(e):
                    db.append(db[-1].deriv(n))
                for k in range(e + 1):
                    sign = -1 if (e - k) % 2 else 1
                    new.append((da[k], db[e - k],
                                coef * math.comb(e, k) * sign))
            pairs = new
        for a, b, coef in pairs:
            total = total + (a * b) * coef
    return total


def hirota_monomial(powers, cap=INF_CAP):
    """Build the operator D_{n1}^{e1}... from a mapping {n: e}."""
    out = OddPoly.one(cap, cap)
    for n, e in powers.items():
        _check_var(n, 0)
        out = out * OddPoly({((0, n, 1),): Fraction(1)}, cap, cap) ** e
    return out
