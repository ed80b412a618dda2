"""Scene execution: solve, evolve, propagate, emit patterns.

One `Variant` runs as:

1. two-wall quasi-bound states at the variant's acceleration and slit,
   absorber widths attached;
2. initial amplitudes from uniform slit illumination, c_i proportional to
   the integral of psi_i over the slit, normalized over populated states;
3. absorber dephasing over L_A (widths active), then lossless phase
   evolution over the remaining mirror length;
4. detector pattern by far-field propagation (fall + resolution applied)
   and/or on-mirror surface current over the mirror length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constants import HBAR
from . import propagation as prop
from . import qr, solver
from .scenario import Scenario, Variant


@dataclass(frozen=True)
class VariantResult:
    label: str
    pattern: Optional[prop.InterferencePattern]
    surface_current: Optional[prop.InterferencePattern]
    states: list = field(repr=False, default_factory=list)
    coeffs: np.ndarray = field(repr=False, default=None)
    packet: Optional[solver.WavePacket] = field(repr=False, default=None)


def slit_illumination_coeffs(states, dx: float) -> np.ndarray:
    """Amplitudes of a uniform packet over the slit, projected onto the
    populated states; normalized so the populated probability sums to 1."""
    populated = [s for s in states if s.populated]
    if not populated:
        raise solver.SolverError("no populated states below the slit")
    c = np.array(
        [np.trapezoid(s.psi, dx=dx) for s in populated], dtype=complex
    )
    total = float(np.sum(np.abs(c) ** 2))
    if total <= 0:
        raise solver.SolverError("slit illumination projects to zero amplitude")
    return c / math.sqrt(total)


def solve_variant(scenario: Scenario, variant: Variant, grid=None):
    """States (with widths) and slit-illumination amplitudes."""
    mass = scenario.particle.mass
    if grid is None:
        grid = solver.grid_for(
            mass, variant.acceleration, variant.n_states + 5, dh=variant.dh
        )
    states = solver.solve_two_wall(
        mass, variant.acceleration, variant.dh, variant.n_states, grid
    )
    states = solver.absorber_widths(states, variant.dh)
    coeffs = slit_illumination_coeffs(states, grid.dx)
    return states, coeffs


def exit_packet(scenario: Scenario, states, coeffs, v: float) -> solver.WavePacket:
    """Packet at the mirror exit face for one velocity slice."""
    populated = [s for s in states if s.populated]
    t_abs = scenario.absorber_length / v
    t_total = scenario.mirror_length / v
    gammas = np.array([s.gamma for s in populated])
    # widths act over the absorber length only; phases over the full mirror
    damped = coeffs * np.exp(-0.5 * gammas * t_abs / HBAR)
    lossless = [solver.QuasiBoundState(
        n=s.n, energy=s.energy, gamma=0.0, psi=s.psi, omega=s.omega,
        x_turn=s.x_turn, grid=s.grid, mass=s.mass,
        acceleration=s.acceleration, populated=True,
    ) for s in populated]
    return solver.evolve(
        lossless, damped, t_total, v=v, particle=scenario.particle
    )


def detector_pattern(
    scenario: Scenario,
    variant: Variant,
    states,
    coeffs,
    fall_acceleration: Optional[float] = None,
):
    """Far-field pattern over all velocity slices of the variant."""
    mass = scenario.particle.mass
    det = prop.DetectorConfig(
        distance=scenario.detector_distance,
        fall_acceleration=(
            scenario.fall_acceleration
            if fall_acceleration is None
            else fall_acceleration
        ),
        position_resolution=scenario.position_resolution,
        time_resolution=scenario.time_resolution,
    )
    slices = []
    for v in variant.velocities:
        packet = exit_packet(scenario, states, coeffs, v)
        spec = prop.with_wavenumber(prop.to_spectrum(packet), mass, v)
        slices.append(
            prop.far_field_flux(spec, det, v, source=packet, force=True)
        )
    if len(slices) == 1:
        pattern = slices[0]
    else:
        # each slice's axis scales with 1/k0: resample every slice onto
        # the median-velocity axis before merging
        ref = slices[len(slices) // 2].axis
        resampled = [
            prop.InterferencePattern(
                axis=ref,
                v=s.v,
                values=np.interp(ref, s.axis, s.values[0], left=0.0, right=0.0)[
                    None, :
                ],
                axis_name=s.axis_name,
                metadata=s.metadata,
            )
            for s in slices
        ]
        pattern = prop.merge_slices(resampled)
    pattern = prop.fall_shift(pattern, det)
    return prop.convolve_resolution(pattern, det)


_MATERIAL_TABLES = {"silica_h": "silica_h", "silica_hbar": "silica_hbar"}


def material_scattering_length(scenario: Scenario) -> Optional[complex]:
    if scenario.material == "hard_wall":
        return None
    return qr.builtin_scattering_length(_MATERIAL_TABLES[scenario.material])


def surface_current_pattern(scenario: Scenario, variant: Variant, states, coeffs):
    """On-mirror current over [0, L] for the variant's (single) velocity."""
    v = variant.velocities[0]
    populated = [s for s in states if s.populated]
    energies = [s.energy for s in populated]
    a_sc = material_scattering_length(scenario)
    if len(energies) > 1:
        beat = 2.0 * math.pi * HBAR * v / (max(energies) - min(energies))
        n_z = int(math.ceil(scenario.mirror_length / (beat / 8.0)))
    else:
        n_z = 500
    n_z = min(max(n_z, 500), 40000)
    z = np.linspace(0.0, scenario.mirror_length, n_z)
    return prop.surface_current(
        populated,
        coeffs,
        z,
        v,
        particle=scenario.particle,
        scattering_length=a_sc,
    )


def run_variant(scenario: Scenario, variant: Variant) -> VariantResult:
    states, coeffs = solve_variant(scenario, variant)
    pattern = (
        detector_pattern(scenario, variant, states, coeffs)
        if scenario.output_pattern
        else None
    )
    current = (
        surface_current_pattern(scenario, variant, states, coeffs)
        if scenario.output_surface_current
        else None
    )
    packet = exit_packet(
        scenario, states, coeffs, variant.velocities[0]
    )
    return VariantResult(
        label=variant.label,
        pattern=pattern,
        surface_current=current,
        states=states,
        coeffs=coeffs,
        packet=packet,
    )


def _resample_pattern(pattern, axis):
    values = np.vstack(
        [
            np.interp(axis, pattern.axis, row, left=0.0, right=0.0)
            for row in pattern.values
        ]
    )
    return prop.InterferencePattern(
        axis=axis,
        v=pattern.v,
        values=values,
        axis_name=pattern.axis_name,
        metadata=pattern.metadata,
    )


def run_scenario(scenario: Scenario) -> list:
    """All variants; sibling variants that differ only in acceleration
    (paired a_extra runs on one physical detector) share the first
    sibling's detector axis so their patterns compare pointwise."""
    import dataclasses

    results = []
    ref_axes: dict = {}
    for variant in scenario.variants():
        res = run_variant(scenario, variant)
        if res.pattern is not None:
            key = (variant.dh, variant.velocities)
            if key in ref_axes:
                res = dataclasses.replace(
                    res, pattern=_resample_pattern(res.pattern, ref_axes[key])
                )
            else:
                ref_axes[key] = res.pattern.axis
        results.append(res)
    return results


def fringe_contrast(pattern: prop.InterferencePattern, slice_index: int = 0) -> float:
    """Michelson contrast of the fringes inside the pattern envelope.

    Local maxima and the minima between them are collected over the
    contiguous region holding at least 10% of the peak flux; the contrast
    is (<max> - <min>)/(<max> + <min>). A pattern with no interior
    minima (fully washed out) scores 0.
    """
    vals = pattern.values[slice_index]
    peak = float(vals.max())
    if peak <= 0:
        return 0.0
    above = np.flatnonzero(vals >= 0.1 * peak)
    lo_i, hi_i = above[0], above[-1]
    core = vals[lo_i : hi_i + 1]
    if len(core) < 3:
        return 0.0
    interior = slice(1, -1)
    maxima = core[interior][
        (core[1:-1] > core[:-2]) & (core[1:-1] >= core[2:])
    ]
    minima = core[interior][
        (core[1:-1] < core[:-2]) & (core[1:-1] <= core[2:])
    ]
    if len(maxima) < 2 or len(minima) < 1:
        return 0.0
    hi = float(np.mean(maxima))
    lo = float(np.mean(minima))
    if hi + lo == 0:
        return 0.0
    return (hi - lo) / (hi + lo)
