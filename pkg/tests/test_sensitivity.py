"""Fisher information and Cramér-Rao bounds: analytic families and limits."""

import math

import numpy as np
import pytest

from qgallery.propagation import InterferencePattern
from qgallery.sensitivity import (
    EFFICIENCY_CAVEAT,
    SensitivityError,
    SensitivityProblem,
    charge_to_acceleration,
    cramer_rao,
    fisher_information,
    shift_experiment,
)

AXIS = np.linspace(-10.0, 10.0, 4001)
SIGMA = 1.0
SLOPE = 0.5  # pattern mean shifts by SLOPE * a


def gaussian_generator(scale=1.0, slope=SLOPE, sigma=SIGMA):
    """Location family: mean = slope*a. Fisher information about a for a
    Gaussian location family is (slope/sigma)^2 exactly."""

    def gen(a):
        mu = slope * a
        vals = scale * np.exp(-0.5 * ((AXIS - mu) / sigma) ** 2)
        return InterferencePattern(axis=AXIS, v=np.array([1.0]), values=vals[None, :])

    return gen


def make_problem(gen, delta_a=0.02, n_events=10000, a0=1.0):
    return SensitivityProblem(
        generator=gen, nominal_a=a0, n_events=n_events, delta_a=delta_a
    )


class TestLocationFamily:
    def test_analytic_information(self):
        fi = fisher_information(make_problem(gaussian_generator()))
        expected = (SLOPE / SIGMA) ** 2
        assert abs(fi.information - expected) / expected < 0.01

    def test_information_independent_of_flux_scale(self):
        fi1 = fisher_information(make_problem(gaussian_generator(scale=1.0)))
        fi2 = fisher_information(make_problem(gaussian_generator(scale=7.5)))
        assert math.isclose(fi1.information, fi2.information, rel_tol=1e-12)

    def test_reparameterization_scaling(self):
        # doubling the response slope quadruples the information
        fi1 = fisher_information(make_problem(gaussian_generator(slope=SLOPE)))
        fi2 = fisher_information(
            make_problem(gaussian_generator(slope=2 * SLOPE), delta_a=0.01)
        )
        assert abs(fi2.information / fi1.information - 4.0) < 1e-3

    def test_fd_step_halving_converges(self):
        fi1 = fisher_information(make_problem(gaussian_generator(), delta_a=0.04))
        fi2 = fisher_information(make_problem(gaussian_generator(), delta_a=0.02))
        expected = (SLOPE / SIGMA) ** 2
        err1 = abs(fi1.information - expected)
        err2 = abs(fi2.information - expected)
        assert err2 < err1
        assert abs(fi1.information - fi2.information) / expected < 0.01

    def test_caveat_attached(self):
        fi = fisher_information(make_problem(gaussian_generator()))
        assert fi.metadata["caveat"] == EFFICIENCY_CAVEAT


class TestDiagnostics:
    def test_flat_pattern_has_zero_information(self):
        gen = lambda a: InterferencePattern(  # noqa: E731
            axis=AXIS, v=np.array([1.0]), values=np.ones((1, len(AXIS)))
        )
        fi = fisher_information(make_problem(gen))
        assert fi.information == 0.0
        assert math.isinf(cramer_rao(fi.information, 1000))

    def test_too_small_step_rejected_with_suggestion(self):
        with pytest.raises(SensitivityError, match="try delta_a"):
            fisher_information(make_problem(gaussian_generator(), delta_a=1e-9))

    def test_too_large_step_rejected(self):
        with pytest.raises(SensitivityError, match="outside"):
            fisher_information(make_problem(gaussian_generator(), delta_a=5.0))

    def test_changing_grid_rejected(self):
        def gen(a):
            axis = AXIS * (1.0 + 0.01 * (a - 1.0))
            vals = np.exp(-0.5 * (axis - SLOPE * a) ** 2)
            return InterferencePattern(
                axis=axis, v=np.array([1.0]), values=vals[None, :]
            )

        with pytest.raises(SensitivityError, match="grid"):
            fisher_information(make_problem(gen))

    def test_zero_flux_rejected(self):
        gen = lambda a: InterferencePattern(  # noqa: E731
            axis=AXIS, v=np.array([1.0]), values=np.zeros((1, len(AXIS)))
        )
        with pytest.raises(SensitivityError, match="zero total flux"):
            fisher_information(make_problem(gen))

    def test_problem_validation(self):
        with pytest.raises(SensitivityError):
            make_problem(gaussian_generator(), n_events=0)
        with pytest.raises(SensitivityError):
            make_problem(gaussian_generator(), delta_a=0.0)


class TestCramerRao:
    def test_scaling_with_events(self):
        info = 25.0
        assert math.isclose(cramer_rao(info, 100), 1.0 / math.sqrt(2500.0))
        assert math.isclose(
            cramer_rao(info, 400) * 2.0, cramer_rao(info, 100), rel_tol=1e-12
        )

    def test_gaussian_location_bound_is_sigma_over_slope_sqrt_n(self):
        n = 10000
        fi = fisher_information(make_problem(gaussian_generator(), n_events=n))
        sigma_a = cramer_rao(fi.information, n)
        expected = SIGMA / (SLOPE * math.sqrt(n))
        assert abs(sigma_a - expected) / expected < 0.01

    def test_invalid_event_count(self):
        with pytest.raises(SensitivityError):
            cramer_rao(1.0, 0)


class TestShiftExperiment:
    def test_detectability_definition(self):
        problem = make_problem(gaussian_generator(), n_events=10000)
        res = shift_experiment(problem, a_extra=0.1)
        assert math.isclose(
            res.detectability, 0.1 / res.sigma_a, rel_tol=1e-12
        )
        assert res.a_extra == 0.1

    def test_difference_integrates_to_zero(self):
        problem = make_problem(gaussian_generator())
        res = shift_experiment(problem, a_extra=0.1)
        # both patterns are normalized densities: the difference has no mass
        assert abs(res.difference.sum()) < 1e-12

    def test_charge_mode(self):
        problem = make_problem(gaussian_generator(), n_events=10000)
        # charge sized so the induced shift stays inside the detector window
        q, e_field, mass = 1.67e-34, 1.0e6, 1.67e-27
        res = shift_experiment(problem, 0.0, e_field=e_field, charge=q, mass=mass)
        assert math.isclose(res.a_extra, q * e_field / mass, rel_tol=1e-12)

    def test_charge_mode_needs_all_arguments(self):
        problem = make_problem(gaussian_generator())
        with pytest.raises(SensitivityError, match="charge mode"):
            shift_experiment(problem, 0.0, e_field=1.0e6)

    def test_charge_to_acceleration(self):
        assert charge_to_acceleration(2.0, 3.0, 4.0) == 1.5
