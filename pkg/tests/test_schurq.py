from fractions import Fraction as F

import pytest

from pfafflow.schurq import (QTABLE, QTable, StrictPartition, cauchy_sum,
                             phi_pair_vev, phi_product_formula,
                             phi_product_vev_pf, q_miwa, q_pair, q_pair_miwa,
                             q_poly, schur_p, schur_q, schur_q_via_vev,
                             strict_partitions, strict_partitions_of_weight,
                             two_point, vev_modes, vev_modes_alpha)
from pfafflow.series import INF_CAP, OddPoly, TimeVector


def contraction(m, n):
    """The bare two-mode vacuum pairing <phi_m phi_n>."""
    if n > 0:
        return F((-1) ** n) if m == -n else F(0)
    if n == 0:
        return F(1, 2) if m == 0 else F(0)
    return F(0)


def two_point_oracle(a, b, k_max=24):
    """Raw double contraction sum over evolved modes, independent of the
    closed-form support analysis in two_point."""
    total = OddPoly.zero(INF_CAP, INF_CAP)
    for k in range(k_max + 1):
        for l in range(k_max + 1):
            c = contraction(a - k, b - l)
            if c:
                total = total + QTABLE.poly(k, F(1, 2)) * \
                    QTABLE.poly(l, F(1, 2)) * c
    return total


class TestStrictPartition:
    def test_validation(self):
        assert StrictPartition([3, 2, 1]).weight == 6
        assert StrictPartition([]).length == 0
        with pytest.raises(ValueError):
            StrictPartition([2, 2])
        with pytest.raises(ValueError):
            StrictPartition([1, 2])
        with pytest.raises(ValueError):
            StrictPartition([0])

    def test_enumeration_by_weight(self):
        # strict partition counts 1,1,1,2,2,3,4,5,6,8 for n = 0..9
        counts = [len(list(strict_partitions_of_weight(w))) for w in range(10)]
        assert counts == [1, 1, 1, 2, 2, 3, 4, 5, 6, 8]

    def test_enumeration_with_containment(self):
        got = {p.parts for p in strict_partitions(4, 2, contains={3})}
        assert got == {(3,), (4, 3), (3, 2), (3, 1)}


class TestQPoly:
    def test_q0(self):
        assert q_poly(0) == OddPoly.one(INF_CAP, INF_CAP)

    def test_q3_full_argument(self):
        got = q_poly(3, scale=1)
        want = {((0, 1, 3),): F(4, 3), ((0, 3, 1),): F(2)}
        assert got.terms == want

    def test_negative_index_is_zero(self):
        assert q_poly(-2).is_zero()

    def test_homogeneous_degree(self):
        for k in range(1, 10):
            p = q_poly(k, scale=F(1, 2))
            degs = {sum(abs(n) * e for _f, n, e in m) for m in p.terms}
            assert degs == {k}

    def test_one_variable_geometric(self):
        # sum q_k(t(x)/2) z^k = (1+xz)/(1-xz): q_k = 2 x^k for k >= 1
        x = (F(2, 7),)
        assert q_miwa(0, x) == 1
        for k in range(1, 12):
            assert q_miwa(k, x) == 2 * F(2, 7) ** k

    def test_miwa_consistent_with_symbolic(self):
        xs = (F(1, 3), F(1, 5))
        for k in range(8):
            tv = TimeVector({n: F(2, n) * sum(x ** n for x in xs)
                             for n in range(1, k + 1, 2)} if k else {})
            assert q_poly(k, F(1, 2)).evaluate(tv) == q_miwa(k, xs)

    def test_negated_argument_alternates(self):
        xs = (F(1, 4), F(1, 6))
        for k in range(8):
            assert QTABLE.miwa(k, xs, -F(1, 2)) == \
                (-1) ** k * QTABLE.miwa(k, xs, F(1, 2))


class TestQPair:
    def test_antidiagonal_vanishes(self):
        for a in range(1, 6):
            assert q_pair(a, a).is_zero()

    def test_zero_zero_is_one(self):
        assert q_pair(0, 0) == OddPoly.one(INF_CAP, INF_CAP)

    def test_q21_half(self):
        got = q_pair(2, 1)
        want = {((0, 1, 3),): F(1, 6), ((0, 3, 1),): F(-2)}
        assert got.terms == want

    def test_skewness(self):
        for a in range(7):
            for b in range(7):
                if (a, b) == (0, 0):
                    continue
                assert (q_pair(a, b) + q_pair(b, a)).is_zero()

    def test_orthogonality_sum(self):
        for m in range(1, 7):
            total = OddPoly.zero(INF_CAP, INF_CAP)
            for i in range(2 * m + 1):
                term = q_poly(i, 1) * q_poly(2 * m - i, 1)
                total = total + (term if i % 2 == 0 else -term)
            assert total.is_zero()

    def test_miwa_matches_symbolic(self):
        xs = (F(1, 3), F(2, 5))
        tv = TimeVector({n: F(2, n) * sum(x ** n for x in xs)
                         for n in range(1, 12, 2)})
        for a, b in ((2, 1), (3, 2), (4, 0)):
            # q_{a,b} has degree <= a+b <= 6 < 12, so the truncated Miwa
            # time vector evaluates it exactly
            assert q_pair(a, b).evaluate(tv) == q_pair_miwa(a, b, xs)


class TestTwoPoint:
    def test_paper_pairing(self):
        for a in range(5):
            for b in range(a):
                assert (two_point(a, b) * 2 - q_pair(a, b)).is_zero()

    def test_vacuum_value(self):
        assert two_point(0, 0, TimeVector({})) == F(1, 2)

    def test_support(self):
        for a in range(-4, 5):
            for b in range(-4, 0):
                assert two_point(a, b).is_zero()
        assert two_point(-3, 2).is_zero()  # b < -a

    def test_contraction_oracle(self):
        for a in range(-3, 4):
            for b in range(-3, 4):
                assert (two_point(a, b) - two_point_oracle(a, b)).is_zero()

    def test_car_anticommutator(self):
        for a in range(-3, 4):
            for b in range(-3, 4):
                s = two_point(a, b) + two_point(b, a)
                want = F((-1) ** a) if a == -b else F(0)
                assert (s - want).is_zero()


class TestVevModes:
    def test_odd_count_rejected(self):
        with pytest.raises(ValueError):
            vev_modes([1])

    def test_annihilation_at_zero_times(self):
        assert vev_modes([-1, -3], TimeVector({})) == 0

    def test_q_identity(self):
        # Q_lambda(t/2) = 2^{l/2} <0|e^{H} phi_{l1}...phi_{l_2n}|0>
        for lam in ((2, 1), (3, 1), (4, 3, 2, 1)):
            got = vev_modes(lam) * F(2) ** (len(lam) // 2)
            assert (got - schur_q(lam)).is_zero()

    def test_wick_product_formula_4(self):
        zs = (F(5), F(3), F(1), F(1, 2))
        assert phi_product_vev_pf(zs) == phi_product_formula(zs)

    def test_wick_product_formula_6(self):
        zs = (F(8), F(5), F(3), F(1), F(1, 2), F(1, 4))
        assert phi_product_vev_pf(zs) == phi_product_formula(zs)

    def test_pair_vev_mode_sum_oracle(self):
        # <phi(z1) phi(z2)> = sum over the contraction table, truncated
        z1, z2 = F(4), F(1, 3)
        acc = F(1, 2)  # m = n = 0 term
        for n in range(1, 200):
            acc += (-1) ** n * z1 ** -n * z2 ** n
        exact = phi_pair_vev(z1, z2)
        assert abs(float(acc - exact)) < 1e-15

    def test_alpha_sector_sqrt2(self):
        v = vev_modes_alpha([2], 1)
        assert v.r2 == 1
        # pairing with the 2^{l/2} normalisation lands back in Q
        from pfafflow.series import OddPoly
        scaled = OddPoly(v.terms, v.cap, v.cap_neg, v.r2 + 1)
        assert (scaled - schur_q([2])).is_zero()


class TestSchurQ:
    def test_empty(self):
        assert schur_q([]) == OddPoly.one(INF_CAP, INF_CAP)
        assert schur_q([], x=(F(1, 2),)) == 1

    def test_single_part_one_variable(self):
        assert schur_q([1], x=(F(1, 2),)) == 1  # 2x at x = 1/2

    def test_length_exceeds_variables(self):
        assert schur_q([2, 1], x=(F(1, 2),)) == 0
        assert schur_q([3, 2, 1], x=(F(1, 3), F(1, 5))) == 0
        assert schur_q([4, 3, 2, 1], x=(F(1, 3), F(1, 5))) == 0

    def test_non_strict_rejected(self):
        with pytest.raises(ValueError):
            schur_q([2, 2])

    def test_schur_p_scaling(self):
        lam = (3, 1)
        assert (schur_p(lam) * 4 - schur_q(lam)).is_zero()

    def test_pfaffian_wick_consistency_weight_12(self):
        for w in range(13):
            for lam in strict_partitions_of_weight(w):
                a = schur_q(lam)
                b = schur_q_via_vev(lam)
                if isinstance(a, OddPoly):
                    assert (a - b).is_zero(), lam
                else:
                    assert a == b

    def test_q21_polynomial(self):
        got = schur_q([2, 1])
        assert got.terms == {((0, 1, 3),): F(1, 6), ((0, 3, 1),): F(-2)}

    def test_cauchy_partial_sums_converge(self):
        from pfafflow.measure import _z_product
        x = (F(1, 3),)
        y = (F(1, 4), F(1, 5))
        target = _z_product(x, y)
        for n in (10, 20, 30):
            err = abs(float(cauchy_sum(x, y, n) - target))
            assert err < 4.0 * float(F(1, 12)) ** n

    def test_negative_side_polynomials(self):
        p = schur_q([2, 1], side=-1)
        assert all(n < 0 for m in p.terms for _f, n, _e in m)
