"""Exact arithmetic for truncated period series and their p-adic congruences."""

from .exactnum import (
    PRational,
    ResidueInt,
    embed_rational,
    hensel_unit_root,
    is_prime,
    padic_ord,
)
from .laurent import LaurentPoly
from .polytope import LatticePolytope, OpenSubset
from .seriesring import ConeSeries, PeriodMatrix, TruncSeries

__version__ = "0.1.0"

__all__ = [
    "ConeSeries",
    "LatticePolytope",
    "LaurentPoly",
    "OpenSubset",
    "PRational",
    "PeriodMatrix",
    "ResidueInt",
    "TruncSeries",
    "embed_rational",
    "hensel_unit_root",
    "is_prime",
    "padic_ord",
]
