import math
from fractions import Fraction as F

import pytest

from pfafflow.measure import (KernelAccuracyError, SpecPair, kernel_K,
                              kernel_coeffs, log_z_miwa_check, measure_weight,
                              rho_brute, rho_closed_form_one_var, rho_pf,
                              tail_bound, z_value)
from pfafflow.schurq import q_miwa

SPEC2 = SpecPair((F(2, 5), F(1, 5)), (F(3, 10), F(1, 10)))
SPEC1 = SpecPair((F(1, 2),), (F(1, 2),))


class TestSpecPair:
    def test_r(self):
        assert SPEC2.r == F(2, 5) * F(3, 10)

    def test_bounds_enforced(self):
        with pytest.raises(ValueError):
            SpecPair((F(3, 2),), (F(1, 2),))
        with pytest.raises(ValueError):
            SpecPair((F(0),), ())


class TestZValue:
    def test_half_half(self):
        assert z_value(SPEC1) == F(5, 3)

    def test_empty(self):
        assert z_value(SpecPair((), (F(1, 2),))) == 1

    def test_log_z_matches_miwa_series(self):
        # log Z = sum_{n odd} (n/2) t_n t_{-n}, geometrically convergent
        target = math.log(float(z_value(SPEC2)))
        got = float(log_z_miwa_check(SPEC2, 41))
        assert abs(got - target) < 1e-12


class TestMeasureWeight:
    def test_empty_partition(self):
        assert measure_weight([], SPEC1) == 1 / z_value(SPEC1)

    def test_single_box(self):
        assert measure_weight([1], SPEC1) == F(3, 10)

    def test_total_mass(self):
        total, tail = rho_brute([], SPEC1, cutoff=40)
        assert abs(float(total) - 1) <= float(tail)
        assert float(tail) < 1e-10

    def test_nonnegative(self):
        for lam in ([2], [2, 1], [5, 3]):
            assert measure_weight(lam, SPEC2) >= 0


class TestRhoBrute:
    def test_empty_set(self):
        v, _ = rho_brute([], SPEC2)
        assert abs(float(v) - 1) < 1e-9

    def test_one_variable_closed_form(self):
        for k in range(1, 7):
            v, tail = rho_brute([k], SPEC1)
            cf = rho_closed_form_one_var(k, SPEC1)
            assert v == cf  # single-variable sums are finite, hence exact

    def test_monotone_under_containment(self):
        big, _ = rho_brute([2], SPEC2)
        small, _ = rho_brute([2, 1], SPEC2)
        assert small <= big

    def test_cutoff_below_max_rejected(self):
        with pytest.raises(ValueError):
            rho_brute([5], SPEC2, cutoff=3)

    def test_tail_bound_decreases(self):
        assert tail_bound(SPEC2, 30) < tail_bound(SPEC2, 10)


class TestKernelCoeffs:
    def test_one_sided(self):
        spec = SpecPair((F(1, 2),), ())
        kc = kernel_coeffs(spec, 12, 1e-14)
        for m in range(13):
            assert abs(kc[m] - float(q_miwa(m, spec.x))) < 1e-12
        for m in range(-12, 0):
            assert kc[m] == 0.0

    def test_outside_window_rejected(self):
        kc = kernel_coeffs(SPEC2, 8, 1e-10)
        with pytest.raises(KernelAccuracyError):
            kc[9]

    def test_normalisation_convolution(self):
        # F(z) F(-z) = 1 termwise: sum_{m+n=N} (-1)^n f_m f_n = [N == 0]
        kc = kernel_coeffs(SPEC2, 40, 1e-15)
        for big_n in range(0, 4):
            s = sum((-1) ** n * kc[big_n - n] * kc[n]
                    for n in range(-35, 36) if abs(big_n - n) <= 40)
            assert abs(s - (1.0 if big_n == 0 else 0.0)) < 1e-12

    def test_f0_against_log_expansion(self):
        # independent route: f_0 as the z^0 coefficient of exp(log F)
        # with log F = sum_n (t_n z^n - t_{-n} z^-n) truncated
        spec = SPEC1
        n_terms = 60
        window = 70
        coeffs = {k: 0.0 for k in range(-window, window + 1)}
        coeffs[0] = 1.0
        log_c = {}
        for n in range(1, n_terms, 2):
            tn = float(F(2, n) * sum(x ** n for x in spec.x))
            tmn = float(F(2, n) * sum(y ** n for y in spec.y))
            log_c[n] = tn
            log_c[-n] = -tmn
        # exp via Taylor in the Laurent algebra, truncated to the window
        total = dict(coeffs)
        term = dict(coeffs)
        for k in range(1, 40):
            new = {j: 0.0 for j in range(-window, window + 1)}
            for i, v in term.items():
                if v == 0.0:
                    continue
                for n, c in log_c.items():
                    j = i + n
                    if -window <= j <= window:
                        new[j] += v * c / k
            term = new
            if max(abs(v) for v in term.values()) < 1e-18:
                break
            for j, v in term.items():
                total[j] = total.get(j, 0.0) + v
        kc = kernel_coeffs(spec, 4, 1e-13)
        assert abs(total[0] - kc[0]) < 1e-12

    def test_envelope_bound_holds(self):
        kc = kernel_coeffs(SPEC2, 30, 1e-14)
        for m in range(-30, 31):
            assert abs(kc[m]) <= kc.bound(m) * (1 + 1e-9)


class TestKernelK:
    def test_skew_off_antidiagonal(self):
        for a in range(-3, 4):
            for b in range(-3, 4):
                if a + b == 0:
                    continue
                s = kernel_K(a, b, SPEC2, 1e-12) + kernel_K(b, a, SPEC2, 1e-12)
                assert abs(s) < 1e-12

    def test_vacuum_value(self):
        assert kernel_K(0, 0, SpecPair((), ())) == 0.5

    def test_single_point_assembly(self):
        # rho({k}) = (-1)^k K(k, -k) matches the brute force
        for k in (1, 2, 3):
            v = (-1) ** k * kernel_K(k, -k, SPEC2, 1e-12)
            br, tail = rho_brute([k], SPEC2)
            assert abs(v - float(br)) <= 1e-10 + float(tail)


class TestRhoPf:
    def test_empty(self):
        assert rho_pf([], SPEC2) == 1.0

    def test_single_point_closed_form(self):
        got = rho_pf([1], SPEC1, 1e-8)
        want = float(rho_closed_form_one_var(1, SPEC1))
        assert abs(got - want) <= 1e-8

    def test_matches_brute(self):
        for a_set in ([1], [3], [2, 1], [4, 2], [3, 2, 1], [5, 3, 1]):
            pf = rho_pf(a_set, SPEC2, 1e-8)
            br, tail = rho_brute(a_set, SPEC2)
            assert abs(pf - float(br)) <= 1e-8 + float(tail), a_set

    def test_larger_r_spec(self):
        spec = SpecPair((F(1, 2), F(1, 4)), (F(3, 5),))
        for a_set in ([1], [2, 1]):
            pf = rho_pf(a_set, spec, 1e-8)
            br, tail = rho_brute(a_set, spec)
            assert abs(pf - float(br)) <= 1e-8 + float(tail)

    def test_positive_ints_required(self):
        with pytest.raises(ValueError):
            rho_pf([0, 1], SPEC2)
