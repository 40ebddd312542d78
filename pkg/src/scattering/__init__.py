"""Exact computation of rank-2 scattering diagrams and the invariants read off their walls."""

from .automorphism import HamiltonianError, TorusAutomorphism, compose, deviation, from_wall, ordered_product
from .diagram import (
    ConsistencyError,
    Diagram,
    FactorizedWallFunction,
    OrientationError,
    Wall,
    complete,
    factorize,
    loop_product,
    wall_function,
)
from .gwquiver import (
    GWRecord,
    Partition,
    QuiverRecord,
    framed_series,
    gw_aggregate,
    gw_number,
    ordered_coefficient,
    quiver_chi,
    recursion_oracle1,
    recursion_oracle2,
    unordered_coefficient,
    vanishing_report,
)
from .lattice import DegenerateLatticeError, LatticeReduction, TwoLineProblem, reduce, transport
from .mutation import RegionVerdict, Verdict, classify, in_dense_region, mutate1, mutate2, verify_classification
from .polyfit import BinomialExpansion, MuNuPolynomial, interpolate, to_binomial_basis, verify_vanishing
from .series import ConfigurationError, NonUnitError, Truncation, TruncatedSeries, parse_series
from .standard import CoefficientTable, TableCache, coefficients, multi_param_standard, standard_diagram

__version__ = "0.1.0"

__all__ = [
    "BinomialExpansion",
    "CoefficientTable",
    "ConfigurationError",
    "ConsistencyError",
    "DegenerateLatticeError",
    "Diagram",
    "FactorizedWallFunction",
    "GWRecord",
    "HamiltonianError",
    "LatticeReduction",
    "MuNuPolynomial",
    "NonUnitError",
    "OrientationError",
    "Partition",
    "QuiverRecord",
    "RegionVerdict",
    "TableCache",
    "TorusAutomorphism",
    "TruncatedSeries",
    "Truncation",
    "TwoLineProblem",
    "Verdict",
    "Wall",
    "classify",
    "coefficients",
    "complete",
    "compose",
    "deviation",
    "factorize",
    "framed_series",
    "from_wall",
    "gw_aggregate",
    "gw_number",
    "in_dense_region",
    "interpolate",
    "loop_product",
    "multi_param_standard",
    "mutate1",
    "mutate2",
    "ordered_coefficient",
    "ordered_product",
    "parse_series",
    "quiver_chi",
    "recursion_oracle1",
    "recursion_oracle2",
    "reduce",
    "standard_diagram",
    "to_binomial_basis",
    "transport",
    "unordered_coefficient",
    "vanishing_report",
    "verify_classification",
    "verify_vanishing",
    "wall_function",
]
