"""Exact stringy Hodge-Deligne invariants of cyclic quotient singularities.

Computes the twisted-arc sector formula for [A^n/mu_N] (and sector weights
for diagonal G_m quotients), cross-validated against the classical
log-resolution formula and finite-field jet/groupoid counts.  The kernel is
a graded Smith normal form engine over truncated power series rings and a
cotangent-complex heights calculator.
"""

from .quotient import CyclicQuotientStack
from .stringypoly import StringyPolynomial, batyrev_factor, hd_L_power
from .invariants import (compare_all, stringy_via_batyrev, stringy_via_sectors,
                         gorenstein_measure_oracle)

__all__ = [
    "CyclicQuotientStack",
    "StringyPolynomial",
    "batyrev_factor",
    "hd_L_power",
    "compare_all",
    "stringy_via_batyrev",
    "stringy_via_sectors",
    "gorenstein_measure_oracle",
]

__version__ = "0.1.0"
