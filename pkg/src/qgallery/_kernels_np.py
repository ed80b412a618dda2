"""Pure-NumPy implementations of the numerical hot kernels.

Mirror of the compiled extension `qgallery._kernels_cy`; `qgallery.kernels`
picks whichever is available at import time. Keep signatures in sync.
"""

from __future__ import annotations

import numpy as np

from ._airy_np import (  # noqa: F401  (re-exported kernel surface)
    airy_ai,
    airy_ai_scaled,
    airy_bi,
    airy_bi_scaled,
)


def superpose_intensity(amps, rates, t):
    """|sum_i amps[i] * exp(rates[i] * t)|^2 evaluated on a time grid.

    `rates` are complex (-i*E/hbar - Gamma/(2*hbar) in physics use); the
    i-sum runs over quasi-bound states, the t-grid over arrival times.
    """
    amps = np.asarray(amps, dtype=complex)
    rates = np.asarray(rates, dtype=complex)
    t = np.asarray(t, dtype=float)
    s = np.exp(t[:, None] * rates[None, :]) @ amps
    return (s.real**2 + s.imag**2)


def superpose_fields(coeffs, psis, phases):
    """Sum_i coeffs[i]*phases[i]*psis[i, :] -> complex field on the grid.

    `psis` is the (n_states, n_x) eigenfunction matrix; `phases` the complex
    evolution factors at a single time.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    phases = np.asarray(phases, dtype=complex)
    psis = np.asarray(psis)
    return (coeffs * phases) @ psis
