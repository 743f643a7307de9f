"""Weighted sums of i.i.d. gamma variables: transforms, densities, entropies
and numerical certificates of their majorization and maximal-density bounds."""

__version__ = "0.1.0"

from .density import (
    ConvolutionDensity,
    DensityCurve,
    density_bounds_pointwise,
    density_cf_inversion,
    density_closed,
    density_curve,
    density_function,
    fourier_density_bound,
    sample,
)
from .entropy import (
    EntropyResult,
    MaxDensity,
    entropy,
    max_density,
    relative_entropy_to_gaussian,
    renyi_entropy,
    shannon_entropy,
)
from .errors import (
    ConfigError,
    DivergenceError,
    DomainError,
    GammaSumError,
    IntegrabilityError,
    NonConvergenceError,
    PreconditionError,
    RegimeError,
)
from .model import GammaSumModel, MajorizationPair, WeightVector, is_majorized, random_majorization_pair
from .numerics import DEFAULT_QUADRATURE, QuadratureConfig
from .transforms import MomentTable, central_moments, cf, cf_envelope, cumulant, mgf

__all__ = [
    "ConvolutionDensity", "DensityCurve", "density_bounds_pointwise", "density_cf_inversion",
    "density_closed", "density_curve", "density_function", "fourier_density_bound", "sample",
    "EntropyResult", "MaxDensity", "entropy", "max_density", "relative_entropy_to_gaussian",
    "renyi_entropy", "shannon_entropy",
    "ConfigError", "DivergenceError", "DomainError", "GammaSumError", "IntegrabilityError",
    "NonConvergenceError", "PreconditionError", "RegimeError",
    "GammaSumModel", "MajorizationPair", "WeightVector", "is_majorized", "random_majorization_pair",
    "DEFAULT_QUADRATURE", "QuadratureConfig",
    "MomentTable", "central_moments", "cf", "cf_envelope", "cumulant", "mgf",
]
