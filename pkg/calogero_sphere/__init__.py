"""Center-of-mass reduction of the rational Calogero model and its Higgs oscillator on the sphere."""

from calogero_sphere.charts import PolarState, SphericalState
from calogero_sphere.dynamics import Trajectory, check_run, conservation_report, integrate
from calogero_sphere.errors import (
    CalogeroError,
    ChartSingularityError,
    DegenerateDenominatorError,
    IntegrationAbortedError,
    InvalidInputError,
    InvalidParameterError,
    SingularConfigurationError,
)
from calogero_sphere.geometry import ModelParams, RootSystem, com_join, com_split, root_system
from calogero_sphere.integrals import ObservableSet
from calogero_sphere.numerics import BracketConfig, PhaseField, poisson_bracket
from calogero_sphere.states import PhaseState, ReducedPhaseState

__all__ = [
    "BracketConfig",
    "CalogeroError",
    "ChartSingularityError",
    "DegenerateDenominatorError",
    "IntegrationAbortedError",
    "InvalidInputError",
    "InvalidParameterError",
    "ModelParams",
    "ObservableSet",
    "PhaseField",
    "PhaseState",
    "PolarState",
    "ReducedPhaseState",
    "RootSystem",
    "SingularConfigurationError",
    "SphericalState",
    "Trajectory",
    "check_run",
    "com_join",
    "com_split",
    "conservation_report",
    "integrate",
    "poisson_bracket",
    "root_system",
]
