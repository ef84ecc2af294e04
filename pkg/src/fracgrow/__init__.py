"""Fractional-calculus toolkit for the modified growth model.

Submodules
----------
special
    Gamma and Mittag-Leffler functions.
fractional
    Riemann-Liouville integral and Caputo derivative (closed forms,
    exponential rules, singular-kernel quadrature).
terms
    Closed term algebra and the Adomian decomposition recursion.
growth
    The fractional growth model: closed form, rate estimation, prediction
    grids, MAE-based order selection.
abalone
    Published reference data for the abalone case study.
cli
    The ``fracgrow`` command-line interface.
"""

from .errors import (
    DomainError,
    FracgrowError,
    NonConvergenceError,
    ParseError,
    PoleError,
    TermOverflowError,
    ValidationError,
)
from .fractional import FracOrder, PowerFunction, QuadratureSpec
from .growth import (
    Convention,
    EtaMode,
    EtaSchedule,
    GrowthParams,
    ObservationSeries,
    PredictionGrid,
)
from .special import MLParams
from .terms import PolynomialNonlinearity, SeriesTerm, TermSum

__version__ = "0.1.0"

__all__ = [
    "Convention",
    "DomainError",
    "EtaMode",
    "EtaSchedule",
    "FracOrder",
    "FracgrowError",
    "GrowthParams",
    "MLParams",
    "NonConvergenceError",
    "ObservationSeries",
    "ParseError",
    "PoleError",
    "PolynomialNonlinearity",
    "PowerFunction",
    "PredictionGrid",
    "QuadratureSpec",
    "SeriesTerm",
    "TermOverflowError",
    "TermSum",
    "ValidationError",
    "__version__",
]
