"""Exact colored Jones data, cyclotomic and loop expansions, and their asymptotics."""

from .cyclotomic import (
    CyclotomicCoefficients,
    cyclotomic_from_jones,
    cyclotomic_kernel,
    integrality_check,
    jones_from_cyclotomic,
)
from .expansions import LoopData, loop_data_from_jones, mmr_check, reconstruct_loop_polynomial
from .knots import BraidWord, KnotRecord, alexander, colored_jones, load_catalog
from .laurent import LaurentPolynomial, TruncatedSeries
from .precision import PrecisionComplex

__all__ = [
    "BraidWord", "CyclotomicCoefficients", "KnotRecord", "LaurentPolynomial", "LoopData",
    "PrecisionComplex", "TruncatedSeries", "alexander", "colored_jones", "cyclotomic_from_jones",
    "cyclotomic_kernel", "integrality_check", "jones_from_cyclotomic", "load_catalog",
    "loop_data_from_jones", "mmr_check", "reconstruct_loop_polynomial",
]
