"""Unit tests for the canonical polar and spherical charts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calogero_sphere.charts import (
    CHARTS,
    PolarState,
    SphericalState,
    change_chart,
    chart_frame,
    polar_from_reduced,
    reduced_from_polar,
    reduced_from_spherical,
    spherical_from_reduced,
)
from calogero_sphere.errors import (
    ChartSingularityError,
    InvalidInputError,
    SingularConfigurationError,
)
from calogero_sphere.geometry import orthogonal_frame, root_system
from calogero_sphere.hamiltonians import energy_reduced, potential_reduced
from calogero_sphere.numerics import fd_jacobian, symplectic_form
from calogero_sphere.states import ReducedPhaseState

finite = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)


def _coordinate_bracket_defect(to_chart, z0: np.ndarray) -> float:
    jac = fd_jacobian(to_chart, z0, 1e-6)
    omega = symplectic_form(z0.size // 2)
    return float(np.max(np.abs(jac @ omega @ jac.T - omega)))


class TestPolarChart:
    """Test the N=3 polar chart."""

    @given(
        r=st.floats(min_value=0.1, max_value=10.0),
        phi=st.floats(min_value=-3.0, max_value=3.0),
        p_r=finite,
        p_phi=finite,
    )
    @settings(max_examples=50, deadline=None)
    def test_round_trip(self, r, phi, p_r, p_phi):
        """Test polar -> reduced -> polar returns the same point."""
        state = PolarState(r=r, phi=phi, p_r=p_r, p_phi=p_phi)

        back = polar_from_reduced(reduced_from_polar(state))

        np.testing.assert_allclose(back.as_vector(), state.as_vector(), atol=1e-9)

    def test_roots_at_multiples_of_pi_over_3(self, rs3):
        """Test the three roots sit at chart angles 0, pi/3 and 2pi/3."""
        angles = []
        for pair in ((1, 2), (1, 3), (2, 3)):
            state = ReducedPhaseState(y=rs3.vector(pair), py=np.zeros(2))
            angles.append(polar_from_reduced(state).phi)

        np.testing.assert_allclose(sorted(angles), [0.0, math.pi / 3.0, 2.0 * math.pi / 3.0], atol=1e-12)

    @pytest.mark.parametrize("k", range(6))
    def test_singularities_at_odd_multiples_of_pi_over_6(self, rs3, k):
        """Test the reduced potential is singular at phi = pi/6 + k pi/3."""
        phi = math.pi / 6.0 + k * math.pi / 3.0
        reduced = reduced_from_polar(PolarState(r=1.0, phi=phi, p_r=0.0, p_phi=0.0))

        with pytest.raises(SingularConfigurationError):
            potential_reduced(reduced.y, rs3, 1.0)

    def test_momenta(self):
        """Test p_r = y.py/|y| and p_phi = y x py."""
        reduced = ReducedPhaseState(y=[1.0, 2.0], py=[0.5, -0.3])

        state = polar_from_reduced(reduced)

        assert state.r == pytest.approx(math.sqrt(5.0))
        assert state.p_r == pytest.approx((0.5 - 0.6) / math.sqrt(5.0))
        assert state.p_phi == pytest.approx(-0.3 - 1.0)

    def test_canonical(self):
        """Test every coordinate bracket of the polar chart is canonical."""
        z0 = reduced_from_polar(PolarState(r=1.3, phi=0.4, p_r=0.7, p_phi=-1.1)).as_vector()

        defect = _coordinate_bracket_defect(
            lambda z: polar_from_reduced(ReducedPhaseState.from_vector(z)).as_vector(), z0
        )

        assert defect < 1e-7

    def test_origin_rejected(self):
        """Test y = 0 has no polar coordinates."""
        with pytest.raises(InvalidInputError):
            polar_from_reduced(ReducedPhaseState(y=[0.0, 0.0], py=[1.0, 0.0]))

    def test_wrong_dimension(self, n4_start):
        """Test only N=3 states are accepted."""
        with pytest.raises(InvalidInputError):
            polar_from_reduced(n4_start)

    def test_non_positive_radius(self):
        """Test PolarState rejects r <= 0."""
        with pytest.raises(InvalidInputError):
            PolarState(r=0.0, phi=0.0, p_r=0.0, p_phi=0.0)


class TestChartFrames:
    """Test the axes of the two N=4 charts."""

    @pytest.mark.parametrize("chart", CHARTS)
    def test_orthonormal(self, chart):
        """Test each chart frame is a rotation."""
        frame = chart_frame(chart)

        np.testing.assert_allclose(frame @ frame.T, np.eye(3), atol=1e-12)
        assert np.linalg.det(frame) == pytest.approx(1.0)

    def test_a_frame_is_orthogonal_frame(self, rs4):
        """Test the a_frame chart uses a_1, a_2, a_3."""
        np.testing.assert_allclose(chart_frame("a_frame"), orthogonal_frame(rs4).axes)

    def test_b13_on_equator(self, rs4):
        """Test b^{13} sits at theta = pi/2, phi = 0 in the b13_aligned chart."""
        state = spherical_from_reduced(
            ReducedPhaseState(y=rs4.vector((1, 3)), py=np.zeros(3)), "b13_aligned"
        )

        assert state.theta == pytest.approx(math.pi / 2.0)
        assert state.phi == pytest.approx(0.0, abs=1e-12)

    def test_unknown_chart(self):
        """Test an unknown chart name raises."""
        with pytest.raises(InvalidInputError):
            chart_frame("north_pole")


class TestSphericalChart:
    """Test the N=4 spherical charts."""

    @pytest.mark.parametrize("chart", CHARTS)
    def test_round_trip(self, chart, n4_start):
        """Test reduced -> spherical -> reduced returns the same point."""
        back = reduced_from_spherical(spherical_from_reduced(n4_start, chart))

        np.testing.assert_allclose(back.as_vector(), n4_start.as_vector(), atol=1e-12)

    @pytest.mark.parametrize("chart", CHARTS)
    def test_canonical(self, chart, n4_start):
        """Test every coordinate bracket of the spherical chart is canonical."""
        defect = _coordinate_bracket_defect(
            lambda z: spherical_from_reduced(ReducedPhaseState.from_vector(z), chart).as_vector(),
            n4_start.as_vector(),
        )

        assert defect < 1e-7

    @pytest.mark.parametrize("chart", CHARTS)
    def test_pole_rejected(self, chart):
        """Test a point on the polar axis raises ChartSingularityError."""
        axis = chart_frame(chart)[2]

        with pytest.raises(ChartSingularityError):
            spherical_from_reduced(ReducedPhaseState(y=2.0 * axis, py=np.ones(3)), chart)

    def test_change_chart_preserves_energy(self, rs4, n4_start):
        """Test changing chart keeps r and the reduced energy."""
        state = spherical_from_reduced(n4_start, "b13_aligned")

        moved = change_chart(state, "a_frame")

        assert moved.chart == "a_frame"
        assert moved.r == pytest.approx(state.r)
        assert moved.p_r == pytest.approx(state.p_r)
        assert energy_reduced(reduced_from_spherical(moved), rs4, 1.0) == pytest.approx(
            energy_reduced(n4_start, rs4, 1.0), rel=1e-12
        )

    def test_state_validation(self):
        """Test theta outside (0, pi) and unknown charts are rejected."""
        with pytest.raises(InvalidInputError):
            SphericalState(r=1.0, theta=0.0, phi=0.0, p_r=0.0, p_theta=0.0, p_phi=0.0, chart="a_frame")
        with pytest.raises(InvalidInputError):
            SphericalState(r=1.0, theta=1.0, phi=0.0, p_r=0.0, p_theta=0.0, p_phi=0.0, chart="z4")

    def test_wrong_dimension(self, n3_start):
        """Test only N=4 states are accepted."""
        with pytest.raises(InvalidInputError):
            spherical_from_reduced(n3_start, "a_frame")

    def test_radial_momentum_matches_cartesian(self):
        """Test p_r = y.py/|y| in every chart."""
        rs = root_system(4)
        reduced = ReducedPhaseState(y=rs.vector((1, 2)) + 0.3 * rs.vector((3, 4)), py=[0.2, -0.5, 0.9])
        expected = float(reduced.y @ reduced.py) / float(np.linalg.norm(reduced.y))

        for chart in CHARTS:
            assert spherical_from_reduced(reduced, chart).p_r == pytest.approx(expected)
