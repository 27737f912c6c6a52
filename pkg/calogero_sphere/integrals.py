"""
The N=3 integrals F and K, their algebraic relation with H and I, and the bracket checks.

Everything here works on the polar chart z = (r, phi, p_r, p_phi) of charts.PolarState.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from calogero_sphere.charts import PolarState
from calogero_sphere.errors import DegenerateDenominatorError
from calogero_sphere.hamiltonians import (
    angular_closed_n3,
    angular_potential_n3,
    angular_potential_n3_derivative,
)
from calogero_sphere.numerics import (
    BracketConfig,
    PhaseField,
    bracket_terms,
    normalized_residual,
)

logger = logging.getLogger(__name__)

DEGENERATE_TOL = 1e-10


@dataclass(frozen=True)
class ObservableSet:
    """The four N=3 conserved quantities at one phase point."""

    h_reduced: float
    i_angular: float
    f_integral: float
    k_integral: float

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class BracketRelations:
    """
    Normalized residuals of the bracket relations at one phase point.

    Attributes:
        r1: {I, F} - 3K
        r2: {I, K} + 6IF
        r3: {K, F} - 3(8H^3 - F^2)
        h_i: {H, I}
        h_f: {H, F}
        h_k: {H, K}
    """

    r1: float
    r2: float
    r3: float
    h_i: float
    h_f: float
    h_k: float

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)

    def max_abs(self) -> float:
        return max(abs(v) for v in asdict(self).values())


class _PolarTerms:
    """Shared pieces A = p_r^2 - 6I/r^2 and B = 3p_r^2 - 2I/r^2 with their z-gradients."""

    def __init__(self, z: np.ndarray, g: float):
        r, phi, p_r, p_phi = (float(v) for v in z)
        self.r, self.phi, self.p_r, self.p_phi = r, phi, p_r, p_phi
        self.i = angular_closed_n3(phi, p_phi, g)
        self.i_phi = angular_potential_n3_derivative(phi, g)
        self.s = math.sin(3.0 * phi)
        self.c = math.cos(3.0 * phi)
        j = self.i / r**2
        self.a = p_r**2 - 6.0 * j
        self.b = 3.0 * p_r**2 - 2.0 * j
        self.dj = np.array([-2.0 * self.i / r**3, self.i_phi / r**2, 0.0, p_phi / r**2])
        self.di = np.array([0.0, self.i_phi, 0.0, p_phi])
        self.da = -6.0 * self.dj + np.array([0.0, 0.0, 2.0 * p_r, 0.0])
        self.db = -2.0 * self.dj + np.array([0.0, 0.0, 6.0 * p_r, 0.0])


def _as_z(state) -> np.ndarray:
    if isinstance(state, PolarState):
        return state.as_vector()
    return np.asarray(state, dtype=float).reshape(-1)


def integral_F(state: PolarState, g: float) -> float:
    """
    Third-order integral F = (p_r^2 - 6I/r^2) p_r sin 3phi + (3p_r^2 - 2I/r^2) p_phi cos 3phi / r.

    Raises:
        SingularConfigurationError: If phi is at an angular singularity
    """
    t = _PolarTerms(_as_z(state), g)
    return t.a * t.p_r * t.s + t.b * t.p_phi * t.c / t.r


def integral_F_gradient(state: PolarState, g: float) -> np.ndarray:
    """Analytic dF/dz, z = (r, phi, p_r, p_phi)."""
    t = _PolarTerms(_as_z(state), g)
    x = t.p_r * t.s
    dx = np.array([0.0, 3.0 * t.p_r * t.c, t.s, 0.0])
    y = t.p_phi * t.c / t.r
    dy = np.array([-t.p_phi * t.c / t.r**2, -3.0 * t.p_phi * t.s / t.r, 0.0, t.c / t.r])
    return t.da * x + t.a * dx + t.db * y + t.b * dy


def integral_K(state: PolarState, g: float) -> float:
    """
    Third-order integral K = (p_r^2 - 6I/r^2) p_r p_phi cos 3phi - (3p_r^2 - 2I/r^2) 2I sin 3phi / r.

    Raises:
        SingularConfigurationError: If phi is at an angular singularity
    """
    t = _PolarTerms(_as_z(state), g)
    return t.a * t.p_r * t.p_phi * t.c - t.b * 2.0 * t.i * t.s / t.r


def integral_K_gradient(state: PolarState, g: float) -> np.ndarray:
    """Analytic dK/dz, z = (r, phi, p_r, p_phi)."""
    t = _PolarTerms(_as_z(state), g)
    u = t.p_r * t.p_phi * t.c
    du = np.array(
        [0.0, -3.0 * t.p_r * t.p_phi * t.s, t.p_phi * t.c, t.p_r * t.c]
    )
    w = 2.0 * t.i * t.s / t.r
    dw = np.array(
        [
            -2.0 * t.i * t.s / t.r**2,
            (2.0 * t.i_phi * t.s + 6.0 * t.i * t.c) / t.r,
            0.0,
            2.0 * t.p_phi * t.s / t.r,
        ]
    )
    return t.da * u + t.a * du - (t.db * w + t.b * dw)


def polar_energy(state: PolarState, g: float) -> float:
    """H = p_r^2/2 + I/r^2 in the polar chart."""
    z = _as_z(state)
    return 0.5 * z[2] ** 2 + angular_closed_n3(z[1], z[3], g) / z[0] ** 2


def polar_energy_gradient(state: PolarState, g: float) -> np.ndarray:
    t = _PolarTerms(_as_z(state), g)
    return t.dj + np.array([0.0, 0.0, t.p_r, 0.0])


def polar_angular(state: PolarState, g: float) -> float:
    """I = p_phi^2/2 + 9g/(1 + cos 6phi)."""
    z = _as_z(state)
    return angular_closed_n3(z[1], z[3], g)


def polar_angular_gradient(state: PolarState, g: float) -> np.ndarray:
    z = _as_z(state)
    return np.array([0.0, angular_potential_n3_derivative(z[1], g), 0.0, z[3]])


def polar_fields(g: float) -> Dict[str, PhaseField]:
    """H, I, F and K as PhaseFields on z = (r, phi, p_r, p_phi), with analytic gradients."""
    return {
        "h_reduced": PhaseField(
            value=lambda z: polar_energy(z, g),
            gradient=lambda z: polar_energy_gradient(z, g),
            name="h_reduced",
        ),
        "i_angular": PhaseField(
            value=lambda z: polar_angular(z, g),
            gradient=lambda z: polar_angular_gradient(z, g),
            name="i_angular",
        ),
        "f_integral": PhaseField(
            value=lambda z: integral_F(z, g),
            gradient=lambda z: integral_F_gradient(z, g),
            name="f_integral",
        ),
        "k_integral": PhaseField(
            value=lambda z: integral_K(z, g),
            gradient=lambda z: integral_K_gradient(z, g),
            name="k_integral",
        ),
    }


def observables(state: PolarState, g: float) -> ObservableSet:
    """Evaluate H, I, F and K at a polar state."""
    return ObservableSet(
        h_reduced=polar_energy(state, g),
        i_angular=polar_angular(state, g),
        f_integral=integral_F(state, g),
        k_integral=integral_K(state, g),
    )


def _ksq_sides(obs: ObservableSet, g: float) -> Tuple[float, float]:
    h, i, f, k = obs.h_reduced, obs.i_angular, obs.f_integral, obs.k_integral
    return k * k + 2.0 * i * f * f, 8.0 * h**3 * (2.0 * i - 9.0 * g)


def check_ksq(state: PolarState, g: float) -> float:
    """
    Normalized residual of K^2 + 2IF^2 = 8H^3(2I - 9g).

    The residual is divided by max(|K^2|, |8H^3(2I - 9g)|, 1).

    Raises:
        SingularConfigurationError: If the state is at an angular singularity
    """
    obs = observables(state, g)
    lhs, rhs = _ksq_sides(obs, g)
    return (lhs - rhs) / max(obs.k_integral**2, abs(rhs), 1.0)


def solve_I(h: float, f: float, k: float, g: float) -> float:
    """
    Angular integral recovered from (H, F, K): I = (k^2 + 72 g h^3) / (16 h^3 - 2 f^2).

    Raises:
        DegenerateDenominatorError: If |16h^3 - 2f^2| < 1e-10 max(k^2, 1)
    """
    den = 16.0 * h**3 - 2.0 * f * f
    if abs(den) < DEGENERATE_TOL * max(k * k, 1.0):
        raise DegenerateDenominatorError(
            f"16h^3 - 2f^2 = {den} is degenerate for h={h}, f={f}"
        )
    return (k * k + 72.0 * g * h**3) / den


def kf_bracket_forms(state: PolarState, g: float) -> Tuple[float, float]:
    """
    The two closed forms of {K, F}: 3(8H^3 - F^2) and 3(K^2 + 9gF^2)/(2I - 9g).

    They agree wherever the algebraic relation holds and 2I != 9g.

    Raises:
        DegenerateDenominatorError: If 2I - 9g vanishes
    """
    obs = observables(state, g)
    den = 2.0 * obs.i_angular - 9.0 * g
    if abs(den) < DEGENERATE_TOL * max(abs(obs.i_angular), 1.0):
        raise DegenerateDenominatorError(f"2I - 9g = {den} is degenerate")
    energy_form = 3.0 * (8.0 * obs.h_reduced**3 - obs.f_integral**2)
    integral_form = 3.0 * (obs.k_integral**2 + 9.0 * g * obs.f_integral**2) / den
    return energy_form, integral_form


def bracket_relations_report(
    state: PolarState, g: float, cfg: Optional[BracketConfig] = None
) -> BracketRelations:
    """
    Residuals of the bracket algebra of H, I, F and K at one polar state.

    Each residual is normalized by max(term magnitude of the bracket, |expected|, 1).

    Args:
        state: Nonsingular polar state
        g: Coupling
        cfg: Bracket engine settings; analytic_if_available uses the exact gradients

    Returns:
        BracketRelations: r1, r2, r3 and the three conservation brackets with H
    """
    cfg = BracketConfig() if cfg is None else cfg
    z = state.as_vector()
    fields = polar_fields(g)
    h_field, i_field = fields["h_reduced"], fields["i_angular"]
    f_field, k_field = fields["f_integral"], fields["k_integral"]
    obs = observables(state, g)

    sign = 1.0 if cfg.convention == "momentum_first" else -1.0

    def residual(a: PhaseField, b: PhaseField, expected: float) -> float:
        value, scale = bracket_terms(a, b, z, cfg)
        return normalized_residual(value, sign * expected, scale)

    h, i, f, k = obs.h_reduced, obs.i_angular, obs.f_integral, obs.k_integral
    relations = BracketRelations(
        r1=residual(i_field, f_field, 3.0 * k),
        r2=residual(i_field, k_field, -6.0 * i * f),
        r3=residual(k_field, f_field, 3.0 * (8.0 * h**3 - f * f)),
        h_i=residual(h_field, i_field, 0.0),
        h_f=residual(h_field, f_field, 0.0),
        h_k=residual(h_field, k_field, 0.0),
    )
    logger.debug("Bracket relations at %s: %s", z, relations)
    return relations
