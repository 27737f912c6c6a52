"""Unit tests for the N=3 integrals F, K and their bracket algebra."""

import math

import numpy as np
import pytest

from calogero_sphere.charts import PolarState, reduced_from_polar
from calogero_sphere.errors import DegenerateDenominatorError, SingularConfigurationError
from calogero_sphere.hamiltonians import energy_reduced
from calogero_sphere.integrals import (
    BracketRelations,
    bracket_relations_report,
    check_ksq,
    integral_F,
    integral_F_gradient,
    integral_K,
    integral_K_gradient,
    kf_bracket_forms,
    observables,
    polar_angular,
    polar_angular_gradient,
    polar_energy,
    polar_energy_gradient,
    polar_fields,
    solve_I,
)
from calogero_sphere.numerics import BracketConfig, grad_fd, poisson_bracket
from calogero_sphere.sampling import random_polar_states


@pytest.fixture
def polar_samples(rng):
    """Twenty seeded polar states away from the angular singularities."""
    return random_polar_states(rng, 20)


class TestObservables:
    """Test H, I, F and K at known points."""

    def test_worked_point(self, worked_point):
        """Test I = 9, H = 9.5, F = -53/sqrt(2), K = 135 sqrt(2) at g = 1."""
        obs = observables(worked_point, 1.0)

        assert obs.i_angular == pytest.approx(9.0)
        assert obs.h_reduced == pytest.approx(9.5)
        assert obs.f_integral == pytest.approx(-53.0 / math.sqrt(2.0))
        assert obs.k_integral == pytest.approx(135.0 * math.sqrt(2.0))

    def test_worked_point_relation(self, worked_point):
        """Test K^2 + 2IF^2 = 8H^3(2I - 9g) = 61731 at the worked point."""
        obs = observables(worked_point, 1.0)

        assert obs.k_integral**2 + 2.0 * obs.i_angular * obs.f_integral**2 == pytest.approx(61731.0)
        assert abs(check_ksq(worked_point, 1.0)) < 1e-12

    def test_zero_momenta(self):
        """Test F vanishes at rest while the relation still holds."""
        state = PolarState(r=1.4, phi=0.2, p_r=0.0, p_phi=0.0)

        assert integral_F(state, 1.0) == pytest.approx(0.0)
        assert abs(check_ksq(state, 1.0)) < 1e-12

    def test_parity(self):
        """Test F is odd under momentum reversal and both are odd under phi -> -phi."""
        state = PolarState(r=1.2, phi=0.3, p_r=0.8, p_phi=-0.4)
        reversed_ = PolarState(r=1.2, phi=0.3, p_r=-0.8, p_phi=0.4)
        mirrored = PolarState(r=1.2, phi=-0.3, p_r=0.8, p_phi=0.4)

        assert integral_F(reversed_, 1.0) == pytest.approx(-integral_F(state, 1.0))
        assert integral_K(reversed_, 1.0) == pytest.approx(integral_K(state, 1.0))
        assert integral_F(mirrored, 1.0) == pytest.approx(-integral_F(state, 1.0))
        assert integral_K(mirrored, 1.0) == pytest.approx(-integral_K(state, 1.0))

    def test_energy_matches_reduced_energy(self, rs3, polar_samples):
        """Test the polar H equals the Cartesian reduced energy."""
        for state in polar_samples:
            assert polar_energy(state, 1.0) == pytest.approx(
                energy_reduced(reduced_from_polar(state), rs3, 1.0), rel=1e-10
            )

    def test_accepts_raw_vectors(self, worked_point):
        """Test the integrals accept z = (r, phi, p_r, p_phi) arrays."""
        z = worked_point.as_vector()

        assert integral_F(z, 1.0) == pytest.approx(integral_F(worked_point, 1.0))
        assert polar_angular(z, 1.0) == pytest.approx(9.0)

    def test_singular_angle(self):
        """Test the integrals raise at phi = pi/6."""
        with pytest.raises(SingularConfigurationError):
            integral_K(PolarState(r=1.0, phi=math.pi / 6.0, p_r=0.0, p_phi=0.0), 1.0)


class TestAlgebraicRelation:
    """Test K^2 + 2IF^2 = 8H^3(2I - 9g) and its solved form."""

    @pytest.mark.parametrize("g", [0.5, 1.0, 3.0])
    def test_random_points(self, polar_samples, g):
        """Test the relation at random nonsingular points."""
        for state in polar_samples:
            assert abs(check_ksq(state, g)) < 1e-9

    def test_solve_I_round_trip(self, worked_point):
        """Test solve_I recovers I from (H, F, K)."""
        obs = observables(worked_point, 1.0)

        recovered = solve_I(obs.h_reduced, obs.f_integral, obs.k_integral, 1.0)

        assert recovered == pytest.approx(obs.i_angular, rel=1e-10)

    def test_solve_I_degenerate(self):
        """Test a vanishing 16h^3 - 2f^2 raises."""
        with pytest.raises(DegenerateDenominatorError):
            solve_I(1.0, math.sqrt(8.0), 0.0, 1.0)

    def test_kf_forms_agree(self, polar_samples):
        """Test the two closed forms of {K, F} agree away from 2I = 9g."""
        for state in polar_samples:
            try:
                energy_form, integral_form = kf_bracket_forms(state, 1.0)
            except DegenerateDenominatorError:
                continue
            assert integral_form == pytest.approx(energy_form, rel=1e-8, abs=1e-8)


class TestGradients:
    """Test the analytic gradients against central differences."""

    @pytest.mark.parametrize(
        "value,gradient",
        [
            (integral_F, integral_F_gradient),
            (integral_K, integral_K_gradient),
            (polar_energy, polar_energy_gradient),
            (polar_angular, polar_angular_gradient),
        ],
    )
    def test_matches_finite_difference(self, polar_samples, value, gradient):
        """Test each analytic gradient at random points."""
        for state in polar_samples[:10]:
            z = state.as_vector()
            analytic = gradient(state, 1.0)
            numeric = grad_fd(lambda v: value(v, 1.0), z, 1e-6)
            scale = max(1.0, float(np.max(np.abs(analytic))))

            np.testing.assert_allclose(analytic, numeric, atol=1e-5 * scale)

    def test_fields_carry_gradients(self):
        """Test polar_fields exposes all four observables with gradients."""
        fields = polar_fields(1.0)

        assert set(fields) == {"h_reduced", "i_angular", "f_integral", "k_integral"}
        assert all(field.gradient is not None for field in fields.values())


class TestBracketRelations:
    """Test the bracket algebra of H, I, F and K."""

    def test_finite_difference(self, polar_samples):
        """Test every relation holds to 1e-4 with finite differences."""
        for state in polar_samples:
            assert bracket_relations_report(state, 1.0).max_abs() < 1e-4

    @pytest.mark.parametrize("convention", ["momentum_first", "position_first"])
    def test_analytic(self, polar_samples, convention):
        """Test every relation holds to 1e-7 with analytic gradients in both conventions."""
        cfg = BracketConfig(mode="analytic_if_available", convention=convention)
        for state in polar_samples:
            assert bracket_relations_report(state, 1.0, cfg).max_abs() < 1e-7

    def test_if_sign_follows_convention(self, worked_point):
        """Test {I, F} = 3K in the momentum-first convention and -3K in the other."""
        fields = polar_fields(1.0)
        z = worked_point.as_vector()
        k = integral_K(worked_point, 1.0)

        momentum_first = poisson_bracket(
            fields["i_angular"], fields["f_integral"], z, BracketConfig(mode="analytic_if_available")
        )
        position_first = poisson_bracket(
            fields["i_angular"],
            fields["f_integral"],
            z,
            BracketConfig(mode="analytic_if_available", convention="position_first"),
        )

        assert momentum_first == pytest.approx(3.0 * k, rel=1e-10)
        assert position_first == pytest.approx(-3.0 * k, rel=1e-10)

    def test_report_fields(self, worked_point):
        """Test the report names the six relations."""
        report = bracket_relations_report(worked_point, 1.0)

        assert isinstance(report, BracketRelations)
        assert set(report.as_dict()) == {"r1", "r2", "r3", "h_i", "h_f", "h_k"}
