"""Unit tests for the seeded samplers."""

import math

import numpy as np
import pytest

from calogero_sphere.dynamics import conservation_report, integrate
from calogero_sphere.errors import InvalidParameterError
from calogero_sphere.geometry import ModelParams, root_system
from calogero_sphere.hamiltonians import energy_reduced
from calogero_sphere.sampling import (
    acceptance_start,
    distance_to_n3_singularity,
    make_rng,
    random_polar_states,
    random_unit_vectors,
    turning_time,
)
from calogero_sphere.states import ReducedPhaseState


class TestMakeRng:
    """Test make_rng."""

    def test_same_seed_same_stream(self):
        """Test two generators with one seed draw the same numbers."""
        np.testing.assert_array_equal(make_rng(3).normal(size=5), make_rng(3).normal(size=5))

    def test_seed_required(self):
        """Test a missing seed is rejected."""
        with pytest.raises(InvalidParameterError, match="seed"):
            make_rng(None)


class TestMarginSamplers:
    """Test the samplers that keep away from the singular sets."""

    def test_polar_states_avoid_singularities(self, rng):
        """Test every polar sample is at least the margin away from cos 3phi = 0."""
        states = random_polar_states(rng, 200, margin=0.1)

        assert len(states) == 200
        assert min(distance_to_n3_singularity(s.phi) for s in states) >= 0.1
        assert all(0.5 <= s.r <= 2.0 for s in states)

    def test_unit_vectors_avoid_walls(self, rng, rs4):
        """Test |n . b| >= margin for every root."""
        vectors = random_unit_vectors(rng, rs4, 100, margin=0.1)

        for n in vectors:
            assert np.linalg.norm(n) == pytest.approx(1.0)
            assert np.min(np.abs(rs4.matrix @ n)) >= 0.1

    @pytest.mark.parametrize("count", [0, -1, 2.5])
    def test_invalid_count(self, rng, count):
        """Test a non-positive or fractional count is rejected."""
        with pytest.raises(InvalidParameterError):
            random_polar_states(rng, count)


class TestTurningTime:
    """Test the time of closest approach."""

    def test_matches_radius_minimum(self, rs3):
        """Test r^2(t) = r0^2 + 2 (y.p) t + 2 H t^2 is smallest at the turning time."""
        state = ReducedPhaseState(y=[3.0, 1.0], py=[-0.4, 0.1])
        energy = energy_reduced(state, rs3, 1.0)
        t_turn = turning_time(state, rs3, 1.0)

        assert t_turn == pytest.approx(-float(state.y @ state.py) / (2.0 * energy))
        assert t_turn > 0

    def test_outgoing_state(self, rs3):
        """Test a state moving outward has a negative turning time."""
        state = ReducedPhaseState(y=[3.0, 1.0], py=[0.4, 0.1])

        assert turning_time(state, rs3, 1.0) < 0

    def test_zero_energy(self, rs3):
        """Test a free particle at rest has no turning time."""
        with pytest.raises(InvalidParameterError):
            turning_time(ReducedPhaseState(y=[3.0, 1.0], py=[0.0, 0.0]), rs3, 0.0)


class TestAcceptanceStart:
    """Test the bounded-energy incoming start used by the long runs."""

    @pytest.mark.parametrize("n", [3, 4])
    def test_energy_and_turning_time(self, n):
        """Test H lies in [E/2, E], p_r < 0 and the turn falls in the first half of the run."""
        rs = root_system(n)

        for seed in range(20):
            state = acceptance_start(make_rng(seed), rs, 1.0, max_energy=0.5, duration=10.0)
            energy = energy_reduced(state, rs, 1.0)

            assert state.dimension == n - 1
            assert 0.25 - 1e-12 <= energy <= 0.5 + 1e-12
            assert float(state.y @ state.py) < 0
            assert 1.0 - 1e-9 <= turning_time(state, rs, 1.0) <= 5.0 + 1e-9

    def test_walls_stay_far(self, rs4):
        """Test |b.y| >= sqrt(g/(2H)) at the start, the bound that holds along the flow."""
        state = acceptance_start(make_rng(11), rs4, 1.0, max_energy=0.5, duration=10.0)
        energy = energy_reduced(state, rs4, 1.0)

        assert np.min(np.abs(rs4.matrix @ state.y)) >= math.sqrt(1.0 / (2.0 * energy))

    def test_two_particles(self):
        """Test N=2 starts move straight in along the single root."""
        rs = root_system(2)

        state = acceptance_start(make_rng(1), rs, 2.0, max_energy=1.0, duration=10.0)

        assert state.y[0] * state.py[0] < 0
        assert 0.5 - 1e-12 <= energy_reduced(state, rs, 2.0) <= 1.0 + 1e-12

    def test_reproducible(self, rs3):
        """Test the same seed gives the same start."""
        a = acceptance_start(make_rng(5), rs3, 1.0, max_energy=0.5, duration=10.0)
        b = acceptance_start(make_rng(5), rs3, 1.0, max_energy=0.5, duration=10.0)

        np.testing.assert_array_equal(a.y, b.y)
        np.testing.assert_array_equal(a.py, b.py)

    def test_short_run_bounces(self, rs3):
        """Test a short leapfrog run passes through the closest approach and keeps H."""
        state = acceptance_start(make_rng(7), rs3, 1.0, max_energy=0.5, duration=2.0)

        traj = integrate(state, ModelParams(3, 1.0), dt=1e-3, steps=2_000, record_stride=20)

        radii = [float(np.linalg.norm(s.state.y)) for s in traj.samples]
        assert 0 < int(np.argmin(radii)) < len(radii) - 1
        assert conservation_report(traj)["h_reduced"].max_rel_drift < 1e-5

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"g": 0.0},
            {"g": -1.0},
            {"max_energy": 0.0},
            {"max_energy": math.inf},
            {"duration": -1.0},
        ],
    )
    def test_invalid(self, rs3, kwargs):
        """Test non-positive coupling, energy or duration is rejected."""
        args = {"g": 1.0, "max_energy": 0.5, "duration": 10.0} | kwargs

        with pytest.raises(InvalidParameterError):
            acceptance_start(make_rng(0), rs3, **args)

    def test_unreachable_turn(self, rs4):
        """Test a run too short for any bounce is reported."""
        with pytest.raises(InvalidParameterError, match="turns within"):
            acceptance_start(make_rng(0), rs4, 1.0, max_energy=0.5, duration=1e-9)
