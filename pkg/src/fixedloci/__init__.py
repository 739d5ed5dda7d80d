"""Torus fixed loci of framed sheaf moduli on the plane and the q-series identities around them."""

from .census import Cocharacter, FixedPoint, NonCompactError, h0_series, poincare_series
from .identities import IdentityCase, Report, catalog, compare, run_case
from .partitions import Partition
from .qseries import BivariateSeries, TruncatedSeries
from .specdsl import evaluate, parse

__version__ = "0.1.0"

__all__ = [
    "BivariateSeries",
    "Cocharacter",
    "FixedPoint",
    "IdentityCase",
    "NonCompactError",
    "Partition",
    "Report",
    "TruncatedSeries",
    "catalog",
    "compare",
    "evaluate",
    "h0_series",
    "parse",
    "poincare_series",
    "run_case",
]
