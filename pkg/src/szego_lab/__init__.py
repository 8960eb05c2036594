"""Eigenvalue asymptotics of truncated Toeplitz matrices on weighted
Bergman-type spaces of a disc or the plane, studied numerically.

Typical use::

    from szego_lab import MomentSpace, szego_experiment
    rep = szego_experiment(MomentSpace.bergman(), "cos(theta)", "x^2", [16, 64, 256])
    print(rep.to_csv())
"""

from .errors import (ConfigError, DegenerateWeightError, DomainError, EvaluationError,
                     HermiticityError, NumericalError, ParseError, SzegoError)
from .expr import evaluate, free_variables, parse, serialize, substitute
from .moments import (MomentSpace, RadialMeasure, log_moment, mass_below, moment_ratio,
                      radial_expectation)
from .quad import DEFAULT_QUAD, QuadConfig, QuadratureRule, gauss_legendre, trapezoid_periodic
from .spectra import Spectrum, count_in, eigenvalues, trace_psi, write_spectrum_csv
from .symbol import (BoundarySymbol, Symbol, TestFunction, boundary_average,
                     boundary_level_measure, classify, radial_limit)
from .szego import (ConvergenceReport, DensityReport, MeasuresReport, averaging_experiment,
                    measures_experiment, szego_experiment, weyl_experiment)
from .toeplitz import (CompressedMatrix, assemble, assemble_angle_only, assemble_general,
                       assemble_radial, symbol_deviation)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DegenerateWeightError", "DomainError", "EvaluationError",
    "HermiticityError", "NumericalError", "ParseError", "SzegoError",
    "evaluate", "free_variables", "parse", "serialize", "substitute",
    "MomentSpace", "RadialMeasure", "log_moment", "mass_below", "moment_ratio",
    "radial_expectation",
    "DEFAULT_QUAD", "QuadConfig", "QuadratureRule", "gauss_legendre", "trapezoid_periodic",
    "Spectrum", "count_in", "eigenvalues", "trace_psi", "write_spectrum_csv",
    "BoundarySymbol", "Symbol", "TestFunction", "boundary_average", "boundary_level_measure",
    "classify", "radial_limit",
    "ConvergenceReport", "DensityReport", "MeasuresReport", "averaging_experiment",
    "measures_experiment", "szego_experiment", "weyl_experiment",
    "CompressedMatrix", "assemble", "assemble_angle_only", "assemble_general",
    "assemble_radial", "symbol_deviation",
]
