"""Seeded random phase points kept a fixed margin away from every singular set."""

import logging
import math
from typing import List, Optional

import numpy as np

from calogero_sphere.charts import Chart, PolarState, SphericalState, spherical_from_reduced
from calogero_sphere.errors import InvalidParameterError
from calogero_sphere.geometry import RootSystem
from calogero_sphere.hamiltonians import energy_reduced, potential_reduced
from calogero_sphere.states import ReducedPhaseState

logger = logging.getLogger(__name__)

R_RANGE = (0.5, 2.0)
SINGULARITY_MARGIN = 0.05
MAX_REJECTIONS = 10_000


def make_rng(seed: Optional[int]) -> np.random.Generator:
    """
    numpy Generator for a required seed.

    Raises:
        InvalidParameterError: If seed is None
    """
    if seed is None:
        raise InvalidParameterError("A seed is required for randomized sampling")
    return np.random.default_rng(int(seed))


def _check_count(count: int) -> None:
    if int(count) != count or count < 1:
        raise InvalidParameterError(f"Sample count must be a positive integer, got {count}")


def distance_to_n3_singularity(phi: float) -> float:
    """Angular distance from phi to the nearest zero of cos 3phi (phi = pi/6 + k pi/3)."""
    step = math.pi / 3.0
    offset = (phi - math.pi / 6.0) % step
    return min(offset, step - offset)


def random_polar_states(
    rng: np.random.Generator, count: int, margin: float = SINGULARITY_MARGIN
) -> List[PolarState]:
    """
    Polar states with r in [0.5, 2], phi uniform on [-pi, pi) at least `margin` away
    from the angular singularities, and standard normal momenta.
    """
    _check_count(count)
    states: List[PolarState] = []
    rejected = 0
    while len(states) < count:
        phi = float(rng.uniform(-math.pi, math.pi))
        if distance_to_n3_singularity(phi) < margin:
            rejected += 1
            if rejected > MAX_REJECTIONS * count:
                raise InvalidParameterError(f"Margin {margin} rejects every polar sample")
            continue
        r = float(rng.uniform(*R_RANGE))
        p_r, p_phi = (float(v) for v in rng.standard_normal(2))
        states.append(PolarState(r=r, phi=phi, p_r=p_r, p_phi=p_phi))
    logger.debug("Drew %d polar states (%d rejected)", count, rejected)
    return states


def random_unit_vectors(
    rng: np.random.Generator,
    rs: RootSystem,
    count: int,
    margin: float = SINGULARITY_MARGIN,
) -> List[np.ndarray]:
    """Unit vectors in R^(N-1) with |n . b^a| >= margin for every root."""
    _check_count(count)
    vectors: List[np.ndarray] = []
    draws = 0
    while len(vectors) < count:
        draws += 1
        if draws > MAX_REJECTIONS * count:
            raise InvalidParameterError(f"Margin {margin} rejects every unit vector sample")
        v = rng.standard_normal(rs.dimension)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            continue
        n = v / norm
        if np.min(np.abs(rs.matrix @ n)) < margin:
            continue
        vectors.append(n)
    return vectors


def random_reduced_states(
    rng: np.random.Generator,
    rs: RootSystem,
    count: int,
    margin: float = SINGULARITY_MARGIN,
) -> List[ReducedPhaseState]:
    """Reduced states with |y| in [0.5, 2], direction away from the walls, normal momenta."""
    states = []
    for n in random_unit_vectors(rng, rs, count, margin):
        r = float(rng.uniform(*R_RANGE))
        py = rng.standard_normal(rs.dimension)
        states.append(ReducedPhaseState(y=r * n, py=py))
    return states


def tangent_momentum(rng: np.random.Generator, n_hat: np.ndarray) -> np.ndarray:
    """Standard normal vector projected onto the tangent space at n_hat."""
    v = rng.standard_normal(n_hat.size)
    return v - (v @ n_hat) * n_hat


def random_spherical_states(
    rng: np.random.Generator,
    rs: RootSystem,
    chart: Chart,
    count: int,
    margin: float = SINGULARITY_MARGIN,
) -> List[SphericalState]:
    """N=4 spherical states in `chart`, away from the walls and with sin theta >= margin."""
    _check_count(count)
    states: List[SphericalState] = []
    draws = 0
    while len(states) < count:
        draws += 1
        if draws > MAX_REJECTIONS * count:
            raise InvalidParameterError(f"Margin {margin} rejects every spherical sample")
        (reduced,) = random_reduced_states(rng, rs, 1, margin)
        state = spherical_from_reduced(reduced, chart)
        if math.sin(state.theta) < margin:
            continue
        states.append(state)
    return states


def turning_time(state: ReducedPhaseState, rs: RootSystem, g: float) -> float:
    """
    Time at which |y| is smallest along the exact flow.

    r^2(t) = r0^2 + 2 (y . py) t + 2 H t^2, so the minimum sits at -(y . py) / (2H).
    Negative for a state that is already moving outward.

    Raises:
        InvalidParameterError: If the energy is not positive
    """
    energy = energy_reduced(state, rs, g)
    if not energy > 0:
        raise InvalidParameterError(f"Turning time needs a positive energy, got {energy}")
    return -float(state.y @ state.py) / (2.0 * energy)


def acceptance_start(
    rng: np.random.Generator,
    rs: RootSystem,
    g: float,
    max_energy: float,
    duration: float,
    margin: float = SINGULARITY_MARGIN,
) -> ReducedPhaseState:
    """
    Incoming reduced state with energy in [max_energy/2, max_energy] whose closest
    approach to the origin falls inside a run of the given duration.

    The direction is drawn away from the walls. The energy is split at random into
    potential, radial kinetic and tangential kinetic shares, and the radius is set
    so the potential takes its share. p_r < 0, and a draw is kept only if the
    turning time lies in [duration/10, duration/2].

    Every pair term g/(2 (b.y)^2) is bounded by H, so |b.y| >= sqrt(g/(2H)) along
    the whole trajectory. With g = 1 and max_energy = 0.5 that keeps every wall at
    distance >= 1, and the leapfrog energy error at dt = 1e-4 stays well below a
    relative 1e-7 over 10^5 steps.

    Raises:
        InvalidParameterError: If g, max_energy or duration is not positive, or no draw
            bounces in time
    """
    if not g > 0:
        raise InvalidParameterError(f"A bounded bouncing start needs g > 0, got {g}")
    if not (math.isfinite(max_energy) and max_energy > 0):
        raise InvalidParameterError(f"max_energy must be positive, got {max_energy}")
    if not (math.isfinite(duration) and duration > 0):
        raise InvalidParameterError(f"duration must be positive, got {duration}")

    for draw in range(1, MAX_REJECTIONS + 1):
        (n_hat,) = random_unit_vectors(rng, rs, 1, margin)
        tangent = tangent_momentum(rng, n_hat)
        tangent_norm = float(np.linalg.norm(tangent))
        energy = float(rng.uniform(0.5, 1.0)) * max_energy
        potential = float(rng.uniform(0.2, 0.8)) * energy
        if tangent_norm == 0.0:
            # N=2 has no tangent direction
            tangent_norm = 1.0
            radial = energy - potential
        else:
            radial = float(rng.uniform(0.2, 0.8)) * (energy - potential)
        r = math.sqrt(potential_reduced(n_hat, rs, g) / potential)
        p_r = -math.sqrt(2.0 * radial)
        p_t = math.sqrt(max(0.0, 2.0 * (energy - potential - radial)))
        t_turn = -r * p_r / (2.0 * energy)
        if not 0.1 * duration <= t_turn <= 0.5 * duration:
            continue
        logger.debug(
            "Start after %d draws: r=%.3f H=%.3f turning at t=%.3f", draw, r, energy, t_turn
        )
        return ReducedPhaseState(
            y=r * n_hat, py=p_r * n_hat + p_t * tangent / tangent_norm
        )
    raise InvalidParameterError(
        f"No start with H <= {max_energy} turns within {0.5 * duration} time units"
    )
