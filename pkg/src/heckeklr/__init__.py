"""Exact symbolic engine for enhanced Hecke and KLR algebras.

The package constructs degenerate and q-deformed affine Hecke algebras
with an odd square-zero enhancement, the matching KLR algebras with
floating dots, faithful polynomial actions for both, the completed
isomorphism between them at a finite truncation order, and homology of
the resulting differential graded algebras at small rank.  All
arithmetic is exact over the rationals.
"""

from .homology import (
    CyclotomicDims,
    FiniteComplex,
    HomologyReport,
    build_filtration_complex,
    build_quotient_complex,
    cyclotomic_dim_hecke,
    homology_ranks,
    verify_quasi_iso,
)
from .params import ParamSet, Quiver, Scalar, parse_scalar, scalar_str

__all__ = [
    "CyclotomicDims",
    "FiniteComplex",
    "HomologyReport",
    "ParamSet",
    "Quiver",
    "Scalar",
    "build_filtration_complex",
    "build_quotient_complex",
    "cyclotomic_dim_hecke",
    "homology_ranks",
    "parse_scalar",
    "scalar_str",
    "verify_quasi_iso",
]

__version__ = "0.1.0"
