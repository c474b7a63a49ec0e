"""Exact Schur Q-functions, Pfaffian point processes and bilinear checks."""

from .series import (INF_CAP, LaurentSeries, OddPoly, SqrtTwoParityError,
                     TimeVector, TruncationError, exp_laurent, hirota,
                     hirota_monomial, miwa_shift, miwa_times, poly_exp,
                     residue_z0, xi_series)
from .pfaffian import (SkewMatrix, border_plus, det_exact, invert_exact,
                       pfaffian_debruijn, pfaffian_even, pfaffian_sigma_sum)
from .schurq import (QTable, StrictPartition, cauchy_sum, phi_pair_vev,
                     phi_product_formula, phi_product_vev_pf, q_miwa, q_pair,
                     q_pair_miwa, q_poly, schur_p, schur_q, schur_q_via_vev,
                     strict_partitions, strict_partitions_of_weight,
                     two_point, vev_modes, vev_modes_alpha)
from .measure import (KernelAccuracyError, KernelCoeffs, SpecPair,
                      kernel_K, kernel_coeffs, measure_weight, rho_brute,
                      rho_closed_form_one_var, rho_pf, tail_bound, z_value)
from .matrixpp import (FiniteSpace, ProcessSpec, bures_eps, bures_tau,
                       corr_direct, corr_pf, eps_dot, kernel_block,
                       kernel_block_plus, kernel_matrix, moment_matrix)
from .bkp import (GSpec, TauSeries, bkp_residue_check, catalog,
                  exp_quadratic, hirota_zero_check, mbkp_residue_check,
                  mixed_residue_check, named_operator, negflow_residue_check,
                  tau_from_g, tau_pair_from_g, tau_pair_two_sided,
                  tau_phi0_sandwich, tau_two_sided)

__version__ = "0.1.0"
