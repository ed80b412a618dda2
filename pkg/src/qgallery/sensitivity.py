"""Fisher-information / Cramér-Rao sensitivity of an interference pattern
to an applied acceleration.

Per-event information

    I = integral (dP/da)^2 / P dX dV,

with P the flux pattern normalized to 1 over the detector window and
dP/da a central finite difference; the bound on an unbiased efficient
estimator from N events is sigma_a = 1/sqrt(N*I). The bound is a lower
bound: bias or inefficiency of the actual estimator only increase the
error, and nuisance parameters are held fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .propagation import InterferencePattern

EFFICIENCY_CAVEAT = (
    "Cramér-Rao bound: lower bound on sigma assuming an unbiased, "
    "efficient estimator; nuisance parameters held fixed."
)

_P_FLOOR_REL = 1e-12
_REL_CHANGE_MIN = 1e-4
_REL_CHANGE_MAX = 1e-1


class SensitivityError(ValueError):
    """Invalid sensitivity problem (normalization, step size, grids)."""


@dataclass(frozen=True)
class SensitivityProblem:
    """Pattern generator P(a) plus the experiment bookkeeping.

    `generator` maps an acceleration [m/s^2] to an InterferencePattern on
    a fixed grid; the flux is normalized over the detector window here, so
    the generator need not normalize.
    """

    generator: Callable[[float], InterferencePattern]
    nominal_a: float  # m/s^2
    n_events: int
    delta_a: float  # m/s^2 finite-difference step
    nuisance_note: str = ""

    def __post_init__(self):
        if self.n_events < 1:
            raise SensitivityError("n_events must be >= 1")
        if not self.delta_a > 0:
            raise SensitivityError("delta_a must be positive")


@dataclass(frozen=True)
class FisherResult:
    information: float  # per event, (s^2/m)^2
    excluded_mass: float  # probability mass below the P floor
    peak_rel_change: float  # |dP|/P at the pattern peak, step diagnostic
    window: tuple  # (axis_min, axis_max) normalization window
    metadata: dict = field(default_factory=dict)


def _normalized_density(pattern: InterferencePattern) -> tuple:
    """Flux -> probability density over the detector window; returns
    (P flat array, cell measure array) for (v, x) quadrature."""
    vals = pattern.values
    dx = pattern.dx
    if len(pattern.v) > 1:
        dv = np.gradient(pattern.v)
        measure = dv[:, None] * dx * np.ones_like(vals)
    else:
        measure = np.full_like(vals, dx)
    total = float((vals * measure).sum())
    if total <= 0:
        raise SensitivityError("pattern has zero total flux; cannot normalize")
    return vals / total, measure


def fisher_information(problem: SensitivityProblem) -> FisherResult:
    """Per-event Fisher information by central finite difference.

    Grid cells with P below 1e-12 of the peak are excluded from the
    quadrature; their probability mass is reported. The step `delta_a`
    must change P at the pattern peak by a relative 1e-4..1e-1, else an
    error suggests a step.
    """
    a0, da = problem.nominal_a, problem.delta_a
    pat0 = problem.generator(a0)
    pat_p = problem.generator(a0 + da)
    pat_m = problem.generator(a0 - da)
    for p in (pat_p, pat_m):
        if p.values.shape != pat0.values.shape or not np.allclose(p.axis, pat0.axis):
            raise SensitivityError("generator changed the pattern grid with a")

    p0, measure = _normalized_density(pat0)
    pp, _ = _normalized_density(pat_p)
    pm, _ = _normalized_density(pat_m)

    # step diagnostic over the pattern's main lobes (P >= 10% of max): the
    # exact peak cell of a symmetric lobe only moves at second order
    lobe = p0 >= 0.1 * float(p0.max())
    peak_rel = float(
        np.max(np.abs(pp[lobe] - pm[lobe]) / (2.0 * p0[lobe]))
    )
    if float(np.max(np.abs(pp - pm))) <= 1e-14 * float(p0.max()):
        # pattern genuinely independent of a: zero information
        return FisherResult(
            information=0.0,
            excluded_mass=0.0,
            peak_rel_change=0.0,
            window=(float(pat0.axis[0]), float(pat0.axis[-1])),
            metadata={
                "caveat": EFFICIENCY_CAVEAT,
                "nuisance_note": problem.nuisance_note,
                "delta_a": da,
                "note": "pattern independent of a",
            },
        )
    if not _REL_CHANGE_MIN <= peak_rel <= _REL_CHANGE_MAX:
        # aim the suggested step at a 1e-2 relative peak change
        suggested = da * 1e-2 / peak_rel if peak_rel > 0 else da * 1e3
        raise SensitivityError(
            f"delta_a={da:.3e} changes P at the peak by a relative "
            f"{peak_rel:.3e}, outside [{_REL_CHANGE_MIN}, {_REL_CHANGE_MAX}]; "
            f"try delta_a ~ {suggested:.3e}"
        )

    floor = _P_FLOOR_REL * float(p0.max())
    keep = p0 > floor
    excluded = float((p0[~keep] * measure[~keep]).sum())
    dpda = (pp - pm) / (2.0 * da)
    info = float(((dpda[keep] ** 2 / p0[keep]) * measure[keep]).sum())
    return FisherResult(
        information=info,
        excluded_mass=excluded,
        peak_rel_change=peak_rel,
        window=(float(pat0.axis[0]), float(pat0.axis[-1])),
        metadata={
            "caveat": EFFICIENCY_CAVEAT,
            "nuisance_note": problem.nuisance_note,
            "delta_a": da,
        },
    )


def cramer_rao(information: float, n_events: int) -> float:
    """sigma_a = 1/sqrt(N * I) — the Cramér-Rao lower bound."""
    if information <= 0:
        return float("inf")
    if n_events < 1:
        raise SensitivityError("n_events must be >= 1")
    return 1.0 / np.sqrt(n_events * information)


@dataclass(frozen=True)
class ShiftResult:
    baseline: InterferencePattern
    shifted: InterferencePattern
    difference: np.ndarray = field(repr=False)  # normalized density difference
    a_extra: float  # m/s^2
    sigma_a: float  # m/s^2 Cramér-Rao bound
    detectability: float  # a_extra / sigma_a (sigma units)
    fisher: FisherResult = None


def charge_to_acceleration(charge: float, e_field: float, mass: float) -> float:
    """a = q*E/m: hypothesized charge q [C] in a field E [V/m]."""
    return charge * e_field / mass


def shift_experiment(
    problem: SensitivityProblem,
    a_extra: float,
    e_field: Optional[float] = None,
    charge: Optional[float] = None,
    mass: Optional[float] = None,
) -> ShiftResult:
    """Paired baseline / extra-acceleration patterns and the resolvability
    of the shift at the problem's event count.

    In charge mode pass `e_field`, `charge`, `mass` instead of a_extra
    (a_extra = q*E/m). Detectability is a_extra over the Cramér-Rao bound.
    """
    if e_field is not None:
        if charge is None or mass is None:
            raise SensitivityError("charge mode needs e_field, charge, and mass")
        a_extra = charge_to_acceleration(charge, e_field, mass)
    baseline = problem.generator(problem.nominal_a)
    shifted = problem.generator(problem.nominal_a + a_extra)
    if shifted.values.shape != baseline.values.shape or not np.allclose(
        shifted.axis, baseline.axis
    ):
        raise SensitivityError("baseline and shifted scenes use different grids")
    p0, _ = _normalized_density(baseline)
    p1, _ = _normalized_density(shifted)
    fi = fisher_information(problem)
    sigma = cramer_rao(fi.information, problem.n_events)
    return ShiftResult(
        baseline=baseline,
        shifted=shifted,
        difference=p1 - p0,
        a_extra=a_extra,
        sigma_a=sigma,
        detectability=abs(a_extra) / sigma if sigma > 0 else float("inf"),
        fisher=fi,
    )
