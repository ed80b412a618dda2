"""Hot-kernel dispatch: compiled extension vs pure-NumPy twin, closed forms."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qgallery import _kernels_np, kernels

try:
    from qgallery import _kernels_cy

    HAVE_CY = True
except ImportError:
    HAVE_CY = False


def _random_superposition(rng, n_states=5, n_t=64):
    amps = rng.normal(size=n_states) + 1j * rng.normal(size=n_states)
    rates = -np.abs(rng.normal(size=n_states)) - 1j * rng.normal(size=n_states)
    t = np.linspace(0.0, 3.0, n_t)
    return amps, rates, t


class TestClosedForms:
    def test_superpose_intensity_is_squared_modulus(self, rng):
        amps, rates, t = _random_superposition(rng)
        direct = np.abs(
            np.sum(amps[None, :] * np.exp(rates[None, :] * t[:, None]), axis=1)
        ) ** 2
        np.testing.assert_allclose(
            kernels.superpose_intensity(amps, rates, t), direct, rtol=1e-12
        )

    def test_single_state_intensity_is_pure_exponential(self):
        amps = np.array([2.0 + 0j])
        rates = np.array([-0.5 - 3.0j])
        t = np.linspace(0.0, 5.0, 101)
        out = kernels.superpose_intensity(amps, rates, t)
        np.testing.assert_allclose(out, 4.0 * np.exp(-1.0 * t), rtol=1e-12)

    def test_superpose_fields_matches_matmul(self, rng):
        coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
        phases = np.exp(1j * rng.normal(size=4))
        psis = rng.normal(size=(4, 33)) + 1j * rng.normal(size=(4, 33))
        direct = np.einsum("i,i,ij->j", coeffs, phases, psis)
        np.testing.assert_allclose(
            kernels.superpose_fields(coeffs, psis, phases), direct, rtol=1e-12
        )

    def test_intensity_nonnegative(self, rng):
        amps, rates, t = _random_superposition(rng, n_states=8, n_t=256)
        assert (kernels.superpose_intensity(amps, rates, t) >= 0).all()


@pytest.mark.skipif(not HAVE_CY, reason="compiled extension not built")
class TestImplementationsAgree:
    def test_superpose_intensity(self, rng):
        amps, rates, t = _random_superposition(rng, n_states=7, n_t=200)
        np.testing.assert_allclose(
            _kernels_cy.superpose_intensity(amps, rates, t),
            _kernels_np.superpose_intensity(amps, rates, t),
            rtol=1e-12,
        )

    def test_superpose_fields(self, rng):
        coeffs = rng.normal(size=6) + 1j * rng.normal(size=6)
        phases = np.exp(1j * rng.normal(size=6))
        psis = rng.normal(size=(6, 257)) + 1j * rng.normal(size=(6, 257))
        np.testing.assert_allclose(
            _kernels_cy.superpose_fields(coeffs, psis, phases),
            _kernels_np.superpose_fields(coeffs, psis, phases),
            rtol=1e-12,
        )

    def test_airy_family(self):
        x = np.linspace(-35.0, 4.0, 901)
        for name in ("airy_ai", "airy_bi"):
            a = getattr(_kernels_cy, name)(x)
            b = getattr(_kernels_np, name)(x)
            env = np.hypot(np.abs(a), 1e-3)
            assert np.max(np.abs(a - b) / env) < 1e-11
        xp = np.linspace(0.0, 80.0, 801)
        for name in ("airy_ai_scaled", "airy_bi_scaled"):
            a = getattr(_kernels_cy, name)(xp)
            b = getattr(_kernels_np, name)(xp)
            assert np.max(np.abs(a - b) / np.abs(b)) < 1e-11

    def test_dispatch_selected_compiled(self):
        import os

        if os.environ.get("QGALLERY_PURE_PYTHON") == "1":
            assert kernels.IMPLEMENTATION == "numpy"
        else:
            assert kernels.IMPLEMENTATION == "cython"


@settings(max_examples=50, deadline=None)
@given(
    re=arrays(np.float64, 5, elements=st.floats(-5, 5)),
    im=arrays(np.float64, 5, elements=st.floats(-5, 5)),
)
def test_intensity_scale_invariance(re, im):
    """Scaling every amplitude by s scales the intensity by |s|^2."""
    amps = re + 1j * im
    rates = np.full(5, -0.3 - 1.0j)
    t = np.linspace(0.0, 2.0, 16)
    base = kernels.superpose_intensity(amps, rates, t)
    scaled = kernels.superpose_intensity(2j * amps, rates, t)
    np.testing.assert_allclose(scaled, 4.0 * base, rtol=1e-10, atol=1e-12)
