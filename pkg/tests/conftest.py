"""Pytest configuration and fixtures for calogero_sphere tests."""

import math

import numpy as np
import pytest
import yaml

from calogero_sphere.charts import PolarState, reduced_from_polar
from calogero_sphere.geometry import ModelParams, com_split, root_system
from calogero_sphere.sampling import acceptance_start, make_rng
from calogero_sphere.states import PhaseState, ReducedPhaseState


@pytest.fixture
def rs3():
    """A_2 root system (N=3)."""
    return root_system(3)


@pytest.fixture
def rs4():
    """A_3 root system (N=4)."""
    return root_system(4)


@pytest.fixture
def rng():
    """Seeded generator so every randomized test is reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def worked_point():
    """Polar state r=1, phi=pi/12, p_r=1, p_phi=0 where I = 9 and H = 9.5 at g = 1."""
    return PolarState(r=1.0, phi=math.pi / 12.0, p_r=1.0, p_phi=0.0)


@pytest.fixture
def n3_start():
    """
    Bounded-energy N=3 reduced state with outgoing radial momentum.

    Since d^2(r^2)/dt^2 = 4H > 0 and p_r > 0, r grows monotonically and the
    trajectory never approaches a collision.
    """
    return reduced_from_polar(PolarState(r=2.0, phi=math.pi / 18.0, p_r=0.5, p_phi=0.7))


@pytest.fixture
def n4_start():
    """N=4 reduced state from the evenly spaced configuration x ~ (3, 1, -1, -3)."""
    params = ModelParams(n_particles=4, coupling=1.0)
    _, _, reduced = com_split(
        PhaseState(x=[3.0, 1.0, -1.0, -3.0], p=[0.0, 0.0, 0.0, 0.0]), params
    )
    n_hat = reduced.y / np.linalg.norm(reduced.y)
    tangent = np.array([1.0, -1.0, 0.5])
    tangent = tangent - (tangent @ n_hat) * n_hat
    tangent = tangent / np.linalg.norm(tangent)
    return ReducedPhaseState(y=2.0 * n_hat, py=0.3 * n_hat + 0.2 * tangent)


# 10^5 leapfrog steps at dt = 1e-4
LONG_RUN_DURATION = 10.0


@pytest.fixture
def n3_bounce(rs3):
    """Seeded N=3 start with H <= 0.5 at g = 1 that turns in the first half of a long run."""
    return acceptance_start(make_rng(7), rs3, 1.0, max_energy=0.5, duration=LONG_RUN_DURATION)


@pytest.fixture
def n4_bounce(rs4):
    """Seeded N=4 start with H <= 0.5 at g = 1 that turns in the first half of a long run."""
    return acceptance_start(make_rng(11), rs4, 1.0, max_energy=0.5, duration=LONG_RUN_DURATION)


@pytest.fixture
def init_file(tmp_path):
    """Write an initial-state YAML file and return its path."""

    def _write(data, name="init.yaml"):
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as f:
            if isinstance(data, str):
                f.write(data)
            else:
                yaml.safe_dump(data, f)
        return path

    return _write
