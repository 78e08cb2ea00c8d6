"""Cubic matrix Szego equation: direct simulation and the explicit formula."""

from ._szego import (
    ConfigError,
    Datum,
    DomainError,
    Grid,
    NumericalError,
    ShapeError,
    config_hash,
    explicit_poisson,
    integrate,
    poisson_eval,
    sample,
    selftest,
    spectrum,
)

__all__ = [
    "ConfigError",
    "Datum",
    "DomainError",
    "Grid",
    "NumericalError",
    "ShapeError",
    "config_hash",
    "explicit_poisson",
    "integrate",
    "poisson_eval",
    "sample",
    "selftest",
    "spectrum",
]
