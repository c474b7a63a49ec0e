from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from pfafflow.series import (INF_CAP, LaurentSeries, OddPoly,
                             SqrtTwoParityError, TimeVector, TruncationError,
                             exp_laurent, hirota, hirota_monomial, miwa_shift,
                             miwa_times, poly_exp, residue_z0, xi_series)


def t(n, cap=12, cap_neg=0):
    return OddPoly.var(n, cap, cap_neg)


def naive_exp(coeffs, cap):
    """Independent Taylor oracle: exp of a linear form sum c_n t_n.

    Uses its own dense representation (dict keyed by sorted exponent
    tuples) and multiplication, sharing no code with OddPoly.
    """
    def mul(a, b):
        out = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                k = {}
                for n, e in ka + kb:
                    k[n] = k.get(n, 0) + e
                if sum(abs(n) * e for n, e in k.items()) > cap:
                    continue
                key = tuple(sorted(k.items()))
                out[key] = out.get(key, F(0)) + va * vb
        return {k: v for k, v in out.items() if v}

    lin = {((n, 1),): F(c) for n, c in coeffs.items() if c}
    total = {(): F(1)}
    term = {(): F(1)}
    k = 0
    while True:
        k += 1
        term = mul(term, lin)
        term = {key: v / k for key, v in term.items()}
        if not term:
            return total
        for key, v in term.items():
            total[key] = total.get(key, F(0)) + v
            if not total[key]:
                del total[key]


def as_plain(p):
    return {tuple((n, e) for _f, n, e in mono): c for mono, c in p.terms.items()}


class TestPolyExp:
    def test_exp_t1_degree3(self):
        got = poly_exp(t(1, 3))
        want = {(): F(1), ((0, 1, 1),): F(1), ((0, 1, 2),): F(1, 2),
                ((0, 1, 3),): F(1, 6)}
        assert got.terms == want

    def test_exp_zero(self):
        assert poly_exp(OddPoly.zero(5)) == OddPoly.one(5)

    def test_exp_2t1_2t3_matches_taylor_oracle(self):
        got = poly_exp(t(1, 3) * 2 + t(3, 3) * 2)
        assert as_plain(got) == naive_exp({1: 2, 3: 2}, 3)
        # frozen expansion: 1 + 2 t1 + 2 t1^2 + 4/3 t1^3 + 2 t3
        assert got.coeff([(0, 1, 3)]) == F(4, 3)
        assert got.coeff([(0, 3, 1)]) == F(2)

    def test_nonzero_constant_rejected(self):
        with pytest.raises(ValueError):
            poly_exp(OddPoly.one(4))

    def test_needs_finite_cap(self):
        with pytest.raises(ValueError):
            poly_exp(OddPoly.var(1, INF_CAP))

    @given(st.lists(st.tuples(st.sampled_from([1, 3, 5]),
                              st.integers(-3, 3)), max_size=4))
    @settings(max_examples=40, deadline=None)
    def test_exp_inverse(self, items):
        a = OddPoly.zero(6)
        for n, c in items:
            a = a + t(n, 6) * c
        assert (poly_exp(a) * poly_exp(-a) - 1).is_zero()


class TestMiwaTimes:
    def test_half_point(self):
        tv = miwa_times([F(1, 2)], 3)
        assert tv.get(1) == 1 and tv.get(3) == F(1, 12)

    def test_empty(self):
        assert miwa_times([], 5).items() == ()

    def test_odd_power_cancellation(self):
        assert miwa_times([1, -1], 3).items() == ()

    def test_even_nmax_rejected(self):
        with pytest.raises(ValueError):
            miwa_times([1], 4)


class TestMiwaShift:
    def test_t1_minus(self):
        s = miwa_shift(t(1), -1)
        assert s.coeff(0) == t(1)
        assert s.coeff(-1).constant_term() == F(-2)

    def test_constant(self):
        s = miwa_shift(OddPoly.one(4), -1)
        assert s.window() == (0, 0) and s.coeff(0) == OddPoly.one(4)

    def test_t3_minus(self):
        s = miwa_shift(t(3), -1)
        assert s.coeff(-3).constant_term() == F(-2, 3)
        assert s.coeff(0) == t(3)

    def test_substitution_oracle(self):
        # evaluate the shift at numeric z and compare with substituting
        # t_n -> t_n - 2 z^-n / n directly
        p = t(1) * t(3) + t(5) * 2 + t(1) ** 3
        z = F(3, 2)
        tv = TimeVector({1: F(1, 2), 3: F(-1, 3), 5: F(2)})
        shifted = miwa_shift(p, -1)
        total = sum(shifted.coeff(k).evaluate(tv) * z ** k
                    for k in range(shifted.zmin, shifted.zmax + 1))
        tv2 = TimeVector({n: tv.get(n) - F(2, n) * z ** -n for n in (1, 3, 5)})
        assert total == p.evaluate(tv2)

    def test_zero_shift_recovers(self):
        p = t(1) * t(3) + t(1) * 5
        assert (miwa_shift(p, -1).coeff(0) - p).is_zero()

    def test_window_too_small(self):
        with pytest.raises(TruncationError):
            miwa_shift(t(3), -1, window=(-1, 0))


class TestHirota:
    def test_odd_monomial_on_equal_args(self):
        f = t(1) * 2 + t(3) + t(1) ** 3
        assert hirota(hirota_monomial({1: 1}), f, f).is_zero()
        assert hirota(hirota_monomial({3: 1}), f, f).is_zero()

    def test_d1_example(self):
        got = hirota(hirota_monomial({1: 1}), t(1, 8), t(1, 8) ** 2)
        assert (got + t(1, 8) ** 2).is_zero()

    def test_exponential_eigenfunction(self):
        # (D1^3 - D3)(1 . e^{xi(t,z)}) reduces to (-z^3 + z^3) e^{xi} = 0
        z = F(2, 3)
        cap = 9
        e = OddPoly.zero(cap)
        from pfafflow.schurq import QTABLE
        for k in range(cap + 1):
            e = e + QTABLE.poly(k, F(1, 2)).truncated(cap) * z ** k
        p_op = hirota_monomial({1: 3}) - hirota_monomial({3: 1})
        assert hirota(p_op, OddPoly.one(cap), e).is_zero()

    def test_bilinear(self):
        p_op = hirota_monomial({1: 2, 3: 1})
        f, g, h = t(1) ** 2, t(3), t(1) * t(3)
        lhs = hirota(p_op, f + g * 3, h)
        rhs = hirota(p_op, f, h) + hirota(p_op, g, h) * 3
        assert (lhs - rhs).is_zero()

    @given(st.sampled_from([{1: 1}, {1: 2}, {3: 1}, {1: 1, 3: 1}, {1: 3}]))
    @settings(max_examples=10, deadline=None)
    def test_transpose_sign(self, powers):
        p_op = hirota_monomial(powers)
        wt = sum(abs(n) * e for n, e in powers.items())
        f = t(1) * 2 + t(3) + t(1) ** 2
        g = t(1) ** 3 + t(5)
        assert (hirota(p_op, f, g) - hirota(p_op, g, f) * (-1) ** wt).is_zero()

    def test_even_index_rejected(self):
        with pytest.raises(ValueError):
            hirota_monomial({2: 1})


class TestResidue:
    def test_constant_window(self):
        s = LaurentSeries({1: OddPoly.one(4), 0: OddPoly.one(4),
                           -1: OddPoly.one(4)})
        assert residue_z0(s) == OddPoly.one(4)

    def test_pure_pole(self):
        s = LaurentSeries({-1: t(1)}, window=(-1, 0))
        assert residue_z0(s).is_zero()

    def test_z0_outside_window(self):
        s = LaurentSeries({2: t(1)}, window=(1, 3))
        with pytest.raises(TruncationError):
            residue_z0(s)

    def test_residue_with_matches_full_product(self):
        e = exp_laurent(xi_series(6, scale=1, zpow=1))
        sh = miwa_shift(t(1, 6) ** 2 + t(3, 6), -1)
        assert (e.residue_with(sh) - residue_z0(e * sh)).is_zero()

    def test_unit_convolution(self):
        e = exp_laurent(xi_series(6, scale=1, zpow=1))
        one = miwa_shift(OddPoly.one(6), -1)
        assert (e.residue_with(one) - 1).is_zero()


class TestSqrtTwoBookkeeping:
    def test_even_exponent_folds(self):
        p = OddPoly.const(3, 4, r2=2)
        assert p.constant_term() == F(6) and p.r2 == 0

    def test_negative_odd_exponent_canonicalises(self):
        p = OddPoly.const(1, 4, r2=-1)
        assert p.r2 == 1 and p.terms[()] == F(1, 2)

    def test_parity_mismatch_rejected(self):
        a = OddPoly.const(1, 4, r2=1)
        b = OddPoly.const(1, 4)
        with pytest.raises(SqrtTwoParityError):
            _ = a + b

    def test_exposure_rejected(self):
        a = OddPoly.const(1, 4, r2=1)
        with pytest.raises(SqrtTwoParityError):
            a.to_json_obj()
        with pytest.raises(SqrtTwoParityError):
            a.constant_term()

    def test_product_restores_parity(self):
        a = OddPoly.const(1, 4, r2=1)
        assert (a * a).constant_term() == F(2)


class TestSerialization:
    def test_round_trip(self):
        p = t(1) ** 2 * F(3, 7) - t(3) * 2 + OddPoly.one(12)
        obj = p.to_json_obj()
        back = OddPoly.from_json_obj(obj, 12)
        assert back == p

    def test_graded_lex_order(self):
        # weight first (1 before 3), then lexicographic on the monomial key
        p = t(3) + t(1) + t(1) ** 3
        exps = [item["exponents"] for item in p.to_json_obj()]
        assert exps == [{"t1": 1}, {"t1": 3}, {"t3": 1}]

    def test_fraction_format(self):
        obj = (t(1) * F(-4, 6)).to_json_obj()
        assert obj[0]["coeff"] == "-2/3"


class TestCaps:
    def test_truncation_on_construction(self):
        p = t(1, 2) ** 3
        assert p.is_zero()

    def test_mul_takes_min_cap(self):
        a, b = t(1, 8), t(1, 4)
        assert (a * b).cap == 4

    def test_negative_side_needs_cap(self):
        with pytest.raises(ValueError):
            OddPoly.var(-1, 4)  # cap_neg defaults to 0
        p = OddPoly.var(-1, 4, 4)
        assert not p.is_zero()

    def test_two_sided_grading(self):
        p = OddPoly.var(-3, 6, 3) * t(5, 6, 3)
        q = p * OddPoly.var(-1, 6, 3)
        assert q.is_zero()  # negative weight 4 > cap_neg 3
