"""Residual-stress basis modes on a spherical shell and a fitting harness."""

from .basis import BasisMode, FunctionalParams, ModeConstants, compute_basis, solve_mode
from .candidates import (
    ShrinkFitSpec,
    ThermoelasticSpec,
    load_sampled_field,
    shrinkfit_field,
    thermoelastic_field,
)
from .fields import RadialField, ShellGeometry
from .fitting import FitReport, fit
from .quadrature import QuadratureSpec

__all__ = [
    "BasisMode",
    "FitReport",
    "FunctionalParams",
    "ModeConstants",
    "QuadratureSpec",
    "RadialField",
    "ShellGeometry",
    "ShrinkFitSpec",
    "ThermoelasticSpec",
    "compute_basis",
    "fit",
    "load_sampled_field",
    "shrinkfit_field",
    "solve_mode",
    "thermoelastic_field",
]
