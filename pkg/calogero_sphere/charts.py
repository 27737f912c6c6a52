"""Canonical polar (N=3) and spherical (N=4) charts of the reduced phase space."""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Tuple

import numpy as np

from calogero_sphere.errors import ChartSingularityError, InvalidInputError
from calogero_sphere.geometry import orthogonal_frame, root_system
from calogero_sphere.states import ReducedPhaseState

logger = logging.getLogger(__name__)

Chart = Literal["b13_aligned", "a_frame"]
CHARTS: Tuple[Chart, ...] = ("b13_aligned", "a_frame")

POLE_TOL = 1e-12

# Rotates the reduced frame so the N=3 roots sit at chart angles 0, pi/3, 2pi/3.
N3_CHART_ANGLE = math.pi / 6.0


def _rotation2(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class PolarState:
    """Canonical polar chart (r, phi; p_r, p_phi) of the N=3 reduced system."""

    r: float
    phi: float
    p_r: float
    p_phi: float

    def __post_init__(self):
        if not self.r > 0:
            raise InvalidInputError(f"Polar radius must be positive, got {self.r}")

    def as_vector(self) -> np.ndarray:
        return np.array([self.r, self.phi, self.p_r, self.p_phi], dtype=float)

    @classmethod
    def from_vector(cls, z: np.ndarray) -> "PolarState":
        return cls(r=float(z[0]), phi=float(z[1]), p_r=float(z[2]), p_phi=float(z[3]))


@dataclass(frozen=True)
class SphericalState:
    """Canonical spherical chart (r, theta, phi; p_r, p_theta, p_phi) of the N=4 system."""

    r: float
    theta: float
    phi: float
    p_r: float
    p_theta: float
    p_phi: float
    chart: Chart

    def __post_init__(self):
        if not self.r > 0:
            raise InvalidInputError(f"Spherical radius must be positive, got {self.r}")
        if not 0.0 < self.theta < math.pi:
            raise InvalidInputError(f"theta must lie in (0, pi), got {self.theta}")
        if self.chart not in CHARTS:
            raise InvalidInputError(f"Unknown chart: {self.chart}")

    def as_vector(self) -> np.ndarray:
        return np.array(
            [self.r, self.theta, self.phi, self.p_r, self.p_theta, self.p_phi],
            dtype=float,
        )

    @classmethod
    def from_vector(cls, z: np.ndarray, chart: Chart) -> "SphericalState":
        return cls(*(float(v) for v in z[:6]), chart=chart)


def polar_from_reduced(state: ReducedPhaseState) -> PolarState:
    """
    Map an N=3 reduced state to the polar chart.

    Raises:
        InvalidInputError: If the state is not 2-dimensional or y = 0
    """
    if state.dimension != 2:
        raise InvalidInputError(f"Polar chart needs N=3 (dimension 2), got {state.dimension}")
    rot = _rotation2(N3_CHART_ANGLE)
    w, pw = rot @ state.y, rot @ state.py
    r = float(np.hypot(w[0], w[1]))
    if r == 0.0:
        raise InvalidInputError("Polar chart is undefined at y = 0")
    return PolarState(
        r=r,
        phi=math.atan2(w[1], w[0]),
        p_r=float(w @ pw) / r,
        p_phi=float(w[0] * pw[1] - w[1] * pw[0]),
    )


def polar_unit_vectors(phi: float) -> Tuple[np.ndarray, np.ndarray]:
    """Radial and angular unit vectors at chart angle phi, in reduced coordinates."""
    back = _rotation2(-N3_CHART_ANGLE)
    n = np.array([math.cos(phi), math.sin(phi)])
    t = np.array([-math.sin(phi), math.cos(phi)])
    return back @ n, back @ t


def reduced_from_polar(state: PolarState) -> ReducedPhaseState:
    """Inverse of polar_from_reduced."""
    n, t = polar_unit_vectors(state.phi)
    return ReducedPhaseState(
        y=state.r * n, py=state.p_r * n + (state.p_phi / state.r) * t
    )


def polar_sphere_point(state: PolarState) -> Tuple[np.ndarray, np.ndarray]:
    """Unit vector and unit-sphere momentum p_phi * t of a polar state."""
    n, t = polar_unit_vectors(state.phi)
    return n, state.p_phi * t


@lru_cache(maxsize=None)
def _chart_frame_cached(chart: str) -> np.ndarray:
    rs = root_system(4)
    if chart == "a_frame":
        frame = np.array(orthogonal_frame(rs).axes)
    else:
        e1 = rs.vector((1, 3))
        e2 = rs.vector((1, 2)) - (rs.vector((1, 2)) @ e1) * e1
        e2 = e2 / np.linalg.norm(e2)
        frame = np.vstack([e1, e2, np.cross(e1, e2)])
    frame.setflags(write=False)
    return frame


def chart_frame(chart: Chart) -> np.ndarray:
    """
    Rows are the chart axes expressed in reduced N=4 coordinates.

    b13_aligned: axis 1 along b^{13}, axis 2 in span(b^{12}, b^{13}), axis 3 = axis 1 x axis 2.
    a_frame: axes a_1, a_2, a_3.

    Raises:
        InvalidInputError: If the chart name is unknown
    """
    if chart not in CHARTS:
        raise InvalidInputError(f"Unknown chart: {chart}")
    return _chart_frame_cached(chart)


def _spherical_basis(theta: float, phi: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(phi), math.cos(phi)
    n = np.array([st * cp, st * sp, ct])
    e_theta = np.array([ct * cp, ct * sp, -st])
    e_phi = np.array([-sp, cp, 0.0])
    return n, e_theta, e_phi


def spherical_from_reduced(state: ReducedPhaseState, chart: Chart) -> SphericalState:
    """
    Map an N=4 reduced state to a spherical chart.

    Raises:
        InvalidInputError: If the state is not 3-dimensional or y = 0
        ChartSingularityError: If the point is at a chart pole
    """
    if state.dimension != 3:
        raise InvalidInputError(
            f"Spherical chart needs N=4 (dimension 3), got {state.dimension}"
        )
    frame = chart_frame(chart)
    w, pw = frame @ state.y, frame @ state.py
    r = float(np.linalg.norm(w))
    if r == 0.0:
        raise InvalidInputError("Spherical chart is undefined at y = 0")
    rho = float(np.hypot(w[0], w[1]))
    if rho / r < POLE_TOL:
        raise ChartSingularityError(
            f"Point is at a pole of the {chart} chart", value=rho / r
        )
    theta = math.atan2(rho, w[2])
    phi = math.atan2(w[1], w[0])
    n, e_theta, e_phi = _spherical_basis(theta, phi)
    return SphericalState(
        r=r,
        theta=theta,
        phi=phi,
        p_r=float(n @ pw),
        p_theta=r * float(e_theta @ pw),
        p_phi=r * math.sin(theta) * float(e_phi @ pw),
        chart=chart,
    )


def reduced_from_spherical(state: SphericalState) -> ReducedPhaseState:
    """Inverse of spherical_from_reduced for the chart tag of the state."""
    frame = chart_frame(state.chart)
    n, e_theta, e_phi = _spherical_basis(state.theta, state.phi)
    w = state.r * n
    pw = (
        state.p_r * n
        + (state.p_theta / state.r) * e_theta
        + (state.p_phi / (state.r * math.sin(state.theta))) * e_phi
    )
    return ReducedPhaseState(y=frame.T @ w, py=frame.T @ pw)


def spherical_sphere_point(state: SphericalState) -> Tuple[np.ndarray, np.ndarray]:
    """Unit vector and unit-sphere momentum of a spherical state, in reduced coordinates."""
    frame = chart_frame(state.chart)
    n, e_theta, e_phi = _spherical_basis(state.theta, state.phi)
    tangent = state.p_theta * e_theta + (state.p_phi / math.sin(state.theta)) * e_phi
    return frame.T @ n, frame.T @ tangent


def change_chart(state: SphericalState, chart: Chart) -> SphericalState:
    """Re-express a spherical state in another chart."""
    return spherical_from_reduced(reduced_from_spherical(state), chart)
