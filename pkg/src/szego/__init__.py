"""Zeros of the scaled exponential partial sums ``p_{n-1}(n z)``.

The submodules are importable on their own; the names below are the ones
most scripts need.
"""

__version__ = "0.1.0"

from .branches import phi, phi_tilde
from .cauchy import (fn_expansion_local, fn_expansion_outer, fn_quadrature, fn_residue,
                     parametrix, stirling_integral)
from .conformal import lambda_eval, lambda_inverse
from .curves import distance_to_szego, szego_curve
from .errors import SzegoError
from .partial_sums import partial_sum_scaled
from .specfun import erfc_zero, h_transform
from .zeros import (ZeroEstimate, match_zeros, newton_solve, newton_solve_all, oracle_zeros,
                    thm41_expansion, thm42_expansion)

__all__ = [
    "ZeroEstimate", "SzegoError", "distance_to_szego", "erfc_zero", "fn_expansion_local",
    "fn_expansion_outer", "fn_quadrature", "fn_residue", "h_transform", "lambda_eval",
    "lambda_inverse", "match_zeros", "newton_solve", "newton_solve_all", "oracle_zeros",
    "parametrix", "partial_sum_scaled", "phi", "phi_tilde", "stirling_integral", "szego_curve",
    "thm41_expansion", "thm42_expansion",
]
