"""Energy functions of the Calogero model and of its angular (spherical) part."""

import logging
import math
from typing import Literal, Optional, Tuple

import numpy as np

from calogero_sphere.charts import Chart, SphericalState, spherical_sphere_point
from calogero_sphere.errors import InvalidInputError, SingularConfigurationError
from calogero_sphere.geometry import ModelParams, RootSystem, root_system
from calogero_sphere.states import PhaseState, ReducedPhaseState

logger = logging.getLogger(__name__)

SINGULAR_REL_TOL = 1e-12
UNIT_TOL = 1e-10
CLOSED_FORM_CHECK_TOL = 1e-10
N4_CLOSED_FORM_CHECK_TOL = 1e-9

KineticMode = Literal["as_printed", "standard_half"]
ClosedForm = Literal["rederived", "as_printed"]


def _check_reduced_dimension(y: np.ndarray, rs: RootSystem) -> None:
    if y.size != rs.dimension:
        raise InvalidInputError(
            f"State dimension {y.size} does not match N-1={rs.dimension}"
        )


def root_projections(y: np.ndarray, rs: RootSystem, g: float) -> np.ndarray:
    """
    Projections b^a . y, guarded against the collision hyperplanes.

    Raises:
        SingularConfigurationError: If g != 0 and some |b^a . y| < 1e-12 |y|
    """
    y = np.asarray(y, dtype=float)
    _check_reduced_dimension(y, rs)
    s = rs.matrix @ y
    if g != 0:
        k = int(np.argmin(np.abs(s)))
        if abs(s[k]) < SINGULAR_REL_TOL * np.linalg.norm(y) or s[k] == 0:
            pair = rs.entries[k].pair
            raise SingularConfigurationError(
                f"Configuration lies on the collision hyperplane of pair {pair}",
                pair=pair,
                value=float(s[k]),
            )
    return s


def potential_full(x: np.ndarray, g: float) -> float:
    """Pair potential sum_{i<j} g/(x_i - x_j)^2."""
    if g == 0:
        return 0.0
    x = np.asarray(x, dtype=float)
    diff = x[:, None] - x[None, :]
    iu = np.triu_indices(x.size, k=1)
    d = diff[iu]
    scale = max(float(np.max(np.abs(x))), 1.0)
    k = int(np.argmin(np.abs(d)))
    if abs(d[k]) < SINGULAR_REL_TOL * scale:
        pair = (int(iu[0][k]) + 1, int(iu[1][k]) + 1)
        raise SingularConfigurationError(
            f"Particles {pair} coincide", pair=pair, value=float(d[k])
        )
    return float(np.sum(g / d**2))


def potential_gradient_full(x: np.ndarray, g: float) -> np.ndarray:
    """Gradient dV/dx_k = -sum_{j != k} 2g/(x_k - x_j)^3."""
    x = np.asarray(x, dtype=float)
    if g == 0:
        return np.zeros_like(x)
    potential_full(x, g)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, np.inf)
    return -2.0 * g * np.sum(1.0 / diff**3, axis=1)


def energy_full(state: PhaseState, params: ModelParams) -> float:
    """
    Lab-frame energy 1/2 sum p^2 + sum_{i<j} g/(x_i - x_j)^2.

    Raises:
        InvalidInputError: If the state size differs from params.n_particles
        SingularConfigurationError: If two particles coincide and g != 0
    """
    if state.n_particles != params.n_particles:
        raise InvalidInputError(
            f"State has {state.n_particles} particles, expected {params.n_particles}"
        )
    return 0.5 * float(state.p @ state.p) + potential_full(state.x, params.coupling)


def potential_reduced(y: np.ndarray, rs: RootSystem, g: float) -> float:
    """Reduced potential sum_a g/(2 (b^a . y)^2)."""
    if g == 0:
        _check_reduced_dimension(np.asarray(y), rs)
        return 0.0
    s = root_projections(y, rs, g)
    return float(np.sum(g / (2.0 * s**2)))


def potential_gradient_reduced(y: np.ndarray, rs: RootSystem, g: float) -> np.ndarray:
    """Gradient -g sum_a b^a / (b^a . y)^3 of the reduced potential."""
    y = np.asarray(y, dtype=float)
    if g == 0:
        _check_reduced_dimension(y, rs)
        return np.zeros_like(y)
    s = root_projections(y, rs, g)
    return -g * (rs.matrix.T @ (1.0 / s**3))


def energy_reduced(state: ReducedPhaseState, rs: RootSystem, g: float) -> float:
    """
    Center-of-mass Hamiltonian 1/2 sum py^2 + sum_a g/(2 (b^a . y)^2).

    Raises:
        SingularConfigurationError: If y lies on a collision hyperplane and g != 0
    """
    return 0.5 * float(state.py @ state.py) + potential_reduced(state.y, rs, g)


def angular_integral(state: ReducedPhaseState, rs: RootSystem, g: float) -> float:
    """
    Angular Hamiltonian I written in Cartesian reduced coordinates, valid for any N.

    I = 1/2 (|y|^2 |p|^2 - (y.p)^2) + |y|^2 V(y), so that H = p_r^2/2 + I/r^2.
    """
    y, p = state.y, state.py
    r2 = float(y @ y)
    yp = float(y @ p)
    return 0.5 * (r2 * float(p @ p) - yp**2) + r2 * potential_reduced(y, rs, g)


def angular_integral_gradient(
    state: ReducedPhaseState, rs: RootSystem, g: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Analytic (dI/dy, dI/dpy) of angular_integral."""
    y, p = state.y, state.py
    r2 = float(y @ y)
    yp = float(y @ p)
    v = potential_reduced(y, rs, g)
    dv = potential_gradient_reduced(y, rs, g)
    grad_y = float(p @ p) * y - yp * p + 2.0 * v * y + r2 * dv
    grad_p = r2 * p - yp * y
    return grad_y, grad_p


def angular_energy_general(
    n_hat: np.ndarray, tangent_p: np.ndarray, rs: RootSystem, g: float
) -> float:
    """
    Angular Hamiltonian 1/2 |tangent_p|^2 + sum_a g/(2 cos^2 theta_a), cos theta_a = n.b^a.

    Args:
        n_hat: Unit vector on the (N-2)-sphere
        tangent_p: Momentum on the unit sphere, orthogonal to n_hat
        rs: Root system of the model
        g: Coupling

    Raises:
        InvalidInputError: If n_hat is not unit or tangent_p is not tangent
        SingularConfigurationError: If n_hat is orthogonal to some root and g != 0
    """
    n_hat = np.asarray(n_hat, dtype=float)
    tangent_p = np.asarray(tangent_p, dtype=float)
    _check_reduced_dimension(n_hat, rs)
    if abs(np.linalg.norm(n_hat) - 1.0) > UNIT_TOL:
        raise InvalidInputError(f"n_hat is not a unit vector: |n|={np.linalg.norm(n_hat)}")
    if abs(n_hat @ tangent_p) > UNIT_TOL * max(1.0, float(np.linalg.norm(tangent_p))):
        raise InvalidInputError("tangent_p is not orthogonal to n_hat")
    return 0.5 * float(tangent_p @ tangent_p) + potential_reduced(n_hat, rs, g)


def higgs_split(n_hat: np.ndarray, rs: RootSystem, g: float) -> Tuple[float, float]:
    """
    Split of the angular potential into N(N-1)g/4 plus the Higgs sum (g/2) sum tan^2.

    Returns:
        Tuple of (constant, oscillator_sum)

    Raises:
        SingularConfigurationError: If n_hat is orthogonal to some root and g != 0
    """
    n = rs.n_particles
    cos = root_projections(n_hat, rs, g) if g != 0 else rs.matrix @ np.asarray(n_hat)
    constant = n * (n - 1) * g / 4.0
    if g == 0:
        return constant, 0.0
    tan2 = (1.0 - cos**2) / cos**2
    return constant, 0.5 * g * float(np.sum(tan2))


def _self_check_enabled(self_check: Optional[bool]) -> bool:
    return logger.isEnabledFor(logging.DEBUG) if self_check is None else self_check


def three_center_potential_n3(phi: float, g: float) -> float:
    """Sum of g/(2 cos^2(phi - c)) over the force centers c = 0, pi/3, 2pi/3."""
    return sum(
        g / (2.0 * math.cos(phi + shift) ** 2)
        for shift in (0.0, math.pi / 3.0, -math.pi / 3.0)
    )


def angular_potential_n3(phi: float, g: float) -> float:
    """
    N=3 angular potential 9g/(1 + cos 6phi), evaluated as 9g/(2 cos^2 3phi).

    Raises:
        SingularConfigurationError: If cos 6phi = -1 and g != 0
    """
    if g == 0:
        return 0.0
    c3 = math.cos(3.0 * phi)
    if abs(c3) < SINGULAR_REL_TOL:
        raise SingularConfigurationError(
            f"phi={phi} is on a force-center singularity", value=c3
        )
    return 9.0 * g / (2.0 * c3 * c3)


def angular_potential_n3_derivative(phi: float, g: float) -> float:
    """d/dphi of angular_potential_n3, i.e. 27 g sin 3phi / cos^3 3phi."""
    if g == 0:
        return 0.0
    c3 = math.cos(3.0 * phi)
    if abs(c3) < SINGULAR_REL_TOL:
        raise SingularConfigurationError(
            f"phi={phi} is on a force-center singularity", value=c3
        )
    return 27.0 * g * math.sin(3.0 * phi) / c3**3


def angular_closed_n3(
    phi: float, p_phi: float, g: float, self_check: Optional[bool] = None
) -> float:
    """
    Closed-form N=3 angular Hamiltonian p_phi^2/2 + 9g/(1 + cos 6phi).

    Args:
        phi: Chart angle (force centers at 0, pi/3, 2pi/3)
        p_phi: Conjugate angular momentum
        g: Coupling
        self_check: Compare with the three-center form; defaults to DEBUG logging

    Raises:
        SingularConfigurationError: If phi is at a singularity
    """
    value = 0.5 * p_phi * p_phi + angular_potential_n3(phi, g)
    if g != 0 and _self_check_enabled(self_check):
        three_center = 0.5 * p_phi * p_phi + three_center_potential_n3(phi, g)
        if abs(three_center - value) > CLOSED_FORM_CHECK_TOL * max(1.0, abs(value)):
            raise AssertionError(
                f"N=3 closed forms disagree at phi={phi}: {value} vs {three_center}"
            )
    return value


def _require_off_pole(theta: float) -> Tuple[float, float]:
    s, c = math.sin(theta), math.cos(theta)
    if abs(s) < SINGULAR_REL_TOL:
        raise SingularConfigurationError(f"theta={theta} is at a pole", value=s)
    return s, c


def _checked_denominator(value: float, name: str) -> float:
    if abs(value) < SINGULAR_REL_TOL:
        raise SingularConfigurationError(f"{name} vanishes", value=value)
    return value


def _check_n4_closed_form(
    value: float,
    chart: Chart,
    theta: float,
    phi: float,
    p_theta: float,
    p_phi: float,
    g: float,
) -> None:
    """Compare an N=4 closed form with the root sum at the same sphere point."""
    state = SphericalState(
        r=1.0, theta=theta, phi=phi, p_r=0.0, p_theta=p_theta, p_phi=p_phi, chart=chart
    )
    n_hat, tangent = spherical_sphere_point(state)
    general = angular_energy_general(n_hat, tangent, root_system(4), g)
    if abs(general - value) > N4_CLOSED_FORM_CHECK_TOL * max(1.0, abs(value)):
        raise AssertionError(
            f"N=4 {chart} closed form disagrees at theta={theta}, phi={phi}: "
            f"{value} vs {general}"
        )


def potential_n4_s23(theta: float, phi: float, g: float, form: ClosedForm = "rederived") -> float:
    """
    N=4 angular potential in the chart with axis 1 along b^{13} (Z_3 about axis 3).

    The rederived form reads
    27g(8c^2 - s^2)^2/(4E^2) + 36g c/E + 9g/(s^2 (1 + cos 6phi)),
    E = 3 s^2 c - 8 c^3 + s^3 sin 3phi / sqrt(2), with c = cos theta, s = sin theta.
    The as_printed form is the tan-theta variant; it does not match the root sum.
    """
    if g == 0:
        return 0.0
    s, c = _require_off_pole(theta)
    c3 = _checked_denominator(math.cos(3.0 * phi), "1 + cos 6phi")
    equatorial_den = 2.0 * c3 * c3
    if form == "rederived":
        e = _checked_denominator(
            3.0 * s * s * c - 8.0 * c**3 + s**3 * math.sin(3.0 * phi) / math.sqrt(2.0),
            "E",
        )
        return (
            27.0 * g * (8.0 * c * c - s * s) ** 2 / (4.0 * e * e)
            + 36.0 * g * c / e
            + 9.0 * g / (s * s * equatorial_den)
        )
    if form == "as_printed":
        t = math.tan(theta)
        k = t * t
        d = _checked_denominator(3.0 * k - 8.0 + t**3 * math.cos(3.0 * phi), "D")
        return (
            9.0 * g * (8.0 - k) ** 2 / (2.0 * d * d)
            + 12.0 * g / d
            + 9.0 * g / (4.0 * s * s * equatorial_den)
        )
    raise InvalidInputError(f"Unknown closed form: {form}")


def angular_closed_n4_s23(
    theta: float,
    phi: float,
    p_theta: float,
    p_phi: float,
    g: float,
    form: ClosedForm = "rederived",
    self_check: Optional[bool] = None,
) -> float:
    """
    N=4 angular Hamiltonian in the b^{13}-aligned spherical chart.

    Args:
        theta: Polar angle from axis 3, in (0, pi)
        phi: Azimuth, b^{13} at phi = 0
        p_theta: Momentum conjugate to theta
        p_phi: Momentum conjugate to phi
        g: Coupling
        form: "rederived" (default) or "as_printed"
        self_check: Compare the rederived form with the root sum; defaults to DEBUG logging

    Raises:
        SingularConfigurationError: If sin theta = 0 or a potential denominator vanishes
    """
    s, _ = _require_off_pole(theta)
    kinetic = 0.5 * p_theta**2 + p_phi**2 / (2.0 * s * s)
    value = kinetic + potential_n4_s23(theta, phi, g, form)
    if form == "rederived" and g != 0 and _self_check_enabled(self_check):
        _check_n4_closed_form(value, "b13_aligned", theta, phi, p_theta, p_phi, g)
    return value


def potential_n4_z4(theta: float, phi: float, g: float, form: ClosedForm = "rederived") -> float:
    """
    N=4 angular potential in the a-frame chart (D_3 form), polar axis a_3.

    Both forms clear k = tan^2 theta = (1 - cos 2theta)/(1 + cos 2theta) from the
    denominators through R = s^4 (1 - cos 4phi) - 8 s^2 c^2 + 8 c^4 = k Q c^4, which keeps
    theta = pi/2 finite. The rederived form is
    4g/(s^2(1+cos 4phi)) + 16g(s^2 - 6c^2)/R + 256g(s^2 - 2c^2)^2 c^2/R^2.
    """
    if g == 0:
        return 0.0
    s, c = _require_off_pole(theta)
    s2, c2 = s * s, c * c
    cos2 = _checked_denominator(math.cos(2.0 * phi), "1 + cos 4phi")
    planar = 4.0 * g / (s2 * 2.0 * cos2 * cos2)
    r = _checked_denominator(
        s2 * s2 * (1.0 - math.cos(4.0 * phi)) - 8.0 * s2 * c2 + 8.0 * c2 * c2, "Q"
    )
    if form == "rederived":
        return (
            planar
            + 16.0 * g * (s2 - 6.0 * c2) / r
            + 256.0 * g * (s2 - 2.0 * c2) ** 2 * c2 / (r * r)
        )
    if form == "as_printed":
        return (
            planar
            + 4.0 * g * (s2 - 6.0 * c2) / r
            + 16.0 * g * (s2 * s2 - 16.0 * s2 * c2 + 16.0 * c2 * c2) * c2 / (r * r)
        )
    raise InvalidInputError(f"Unknown closed form: {form}")


def angular_closed_n4_z4(
    theta: float,
    phi: float,
    p_theta: float,
    p_phi: float,
    g: float,
    kinetic_coefficient_mode: KineticMode = "standard_half",
    form: ClosedForm = "rederived",
    self_check: Optional[bool] = None,
) -> float:
    """
    N=4 angular Hamiltonian in the a-frame spherical chart.

    Args:
        theta: Polar angle from a_3, in (0, pi)
        phi: Azimuth, a_1 at phi = 0
        p_theta: Momentum conjugate to theta
        p_phi: Momentum conjugate to phi
        g: Coupling
        kinetic_coefficient_mode: "as_printed" uses p_phi^2/sin^2 theta,
            "standard_half" uses p_phi^2/(2 sin^2 theta)
        form: "rederived" (default) or "as_printed" potential
        self_check: Compare the rederived form in standard_half mode with the root sum;
            defaults to DEBUG logging

    Raises:
        SingularConfigurationError: If sin theta = 0 or a potential denominator vanishes
        InvalidInputError: If the mode or form is unknown
    """
    s, _ = _require_off_pole(theta)
    if kinetic_coefficient_mode == "standard_half":
        azimuthal = p_phi**2 / (2.0 * s * s)
    elif kinetic_coefficient_mode == "as_printed":
        azimuthal = p_phi**2 / (s * s)
    else:
        raise InvalidInputError(f"Unknown kinetic mode: {kinetic_coefficient_mode}")
    value = 0.5 * p_theta**2 + azimuthal + potential_n4_z4(theta, phi, g, form)
    if (
        form == "rederived"
        and kinetic_coefficient_mode == "standard_half"
        and g != 0
        and _self_check_enabled(self_check)
    ):
        _check_n4_closed_form(value, "a_frame", theta, phi, p_theta, p_phi, g)
    return value


def energy_d3(u: np.ndarray, pu: np.ndarray, g: float) -> float:
    """
    Three-particle D_3 Calogero energy sum p^2/2 + sum_{i<j} g/(u_i-u_j)^2 + g/(u_i+u_j)^2.

    Raises:
        SingularConfigurationError: If u_i = +-u_j for some i < j and g != 0
    """
    u = np.asarray(u, dtype=float)
    pu = np.asarray(pu, dtype=float)
    kinetic = 0.5 * float(pu @ pu)
    if g == 0:
        return kinetic
    scale = max(float(np.linalg.norm(u)), 1.0)
    total = 0.0
    for i in range(u.size):
        for j in range(i + 1, u.size):
            for d in (u[i] - u[j], u[i] + u[j]):
                if abs(d) < SINGULAR_REL_TOL * scale:
                    raise SingularConfigurationError(
                        f"u_{i + 1} = +-u_{j + 1}", pair=(i + 1, j + 1), value=float(d)
                    )
                total += g / d**2
    return kinetic + total
