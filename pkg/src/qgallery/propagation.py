"""From the exit-face wave packet to observables.

Far-field detector flux by the stationary-phase result

    F(x) = n(v)*v * (k0/z) * |psi_tilde(k0*x/z)|^2,

valid for z >> z0 = 2*k0*l0^2 (l0 the rms size of the exit packet); an
optional uniform-acceleration fall remaps x -> x + a*D^2/(2*v^2); detector
resolution enters as a Gaussian in position (stated resolution = 2 sigma)
and a boxcar in velocity (chopper opening); and the on-mirror observable is
the probability current into an absorbing wall,

    F(z) = exp(-t/tau) * n(v) * (hbar/m) * |Im a_sc| * |sum_i c_i psi_i'(0)
           * exp((-i*E_i - Gamma_i/2) t / hbar)|^2,   t = z/v,

with the wall derivative taken by a one-sided 4th-order finite difference
and the boundary absorption folded into a uniform extra width
Gamma_abs = 2*m*a*|Im a_sc|.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .constants import HBAR
from . import kernels
from .solver import QuasiBoundState, SolverError, WavePacket

_FRINGE_SAMPLES = 8  # minimum samples per narrowest fringe on detector grids


class PropagationError(ValueError):
    """Violated propagation precondition (grid support, far-field regime)."""


@dataclass(frozen=True)
class SpectralPacket:
    """Transverse momentum spectrum of an exit-face packet.

    psi_k uses the unitary convention psi~(k) = (2*pi)^(-1/2) * integral of
    psi(x) exp(-i*k*x) dx, so Parseval reads
    integral |psi~|^2 dk = integral |psi|^2 dx.
    """

    k: np.ndarray = field(repr=False)  # 1/m, uniform ascending
    psi_k: np.ndarray = field(repr=False)  # complex
    k0: float  # 1/m total (longitudinal) wavenumber m*v/hbar
    l0: float  # m rms size of the source packet (sets z0)
    norm: float  # position-space norm of the source packet
    x_c: float = 0.0  # m centroid of the source packet (pattern center offset)

    @property
    def dk(self) -> float:
        return float(self.k[1] - self.k[0])

    def z0(self) -> float:
        """Fresnel distance 2*k0*l0^2 separating near and far field."""
        return 2.0 * self.k0 * self.l0 * self.l0


@dataclass(frozen=True)
class DetectorConfig:
    distance: float  # m, mirror exit to detector
    fall_acceleration: float = 0.0  # m/s^2, signed, along the pattern axis
    position_resolution: float = 0.0  # m, Gaussian, stated value = 2 sigma
    velocity_resolution: float = 0.0  # m/s, boxcar full width
    time_resolution: float = 0.0  # s, chopper opening; converted via TOF

    def __post_init__(self):
        if not self.distance > 0:
            raise PropagationError("detector distance must be positive")
        for name in ("position_resolution", "velocity_resolution", "time_resolution"):
            if getattr(self, name) < 0:
                raise PropagationError(f"{name} must be >= 0")

    def velocity_width(self, v: float) -> float:
        """Boxcar full width in velocity, merging the chopper opening time
        through the time-of-flight relation |dv| = v^2*dt/D."""
        dv_t = v * v * self.time_resolution / self.distance
        return self.velocity_resolution + dv_t


@dataclass(frozen=True)
class InterferencePattern:
    """Flux over (position axis, velocity); values shape (len(v), len(axis))."""

    axis: np.ndarray = field(repr=False)  # m, uniform ascending
    v: np.ndarray = field(repr=False)  # m/s
    values: np.ndarray = field(repr=False)  # >= 0, shape (n_v, n_axis)
    axis_name: str = "x"  # "x" (detector) or "z" (mirror surface)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.atleast_2d(np.asarray(self.values, dtype=float))
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "axis", np.asarray(self.axis, dtype=float))
        object.__setattr__(self, "v", np.atleast_1d(np.asarray(self.v, dtype=float)))
        if vals.shape != (len(self.v), len(self.axis)):
            raise PropagationError(
                f"values shape {vals.shape} != (n_v={len(self.v)}, "
                f"n_axis={len(self.axis)})"
            )
        if (vals < 0).any():
            raise PropagationError("flux values must be >= 0")
        if not np.isfinite(vals).all():
            raise PropagationError("flux values must be finite")

    @property
    def dx(self) -> float:
        return float(self.axis[1] - self.axis[0])

    def integral(self) -> float:
        """Total flux integral over the axis, summed over velocity slices."""
        return float(np.trapezoid(self.values, dx=self.dx, axis=1).sum())


# -- spectra -----------------------------------------------------------------


def _transform(psi: np.ndarray, dx: float, pad_factor: int):
    """Zero-padded unitary FFT: returns (k, psi~(k)) with the convention
    psi~(k) = (2*pi)^(-1/2) * integral psi(x) exp(-i*k*x) dx."""
    n_fft = 1 << int(math.ceil(math.log2(max(pad_factor, 1) * len(psi))))
    psi_k = np.fft.fftshift(np.fft.fft(psi, n=n_fft))
    k = 2.0 * math.pi * np.fft.fftshift(np.fft.fftfreq(n_fft, d=dx))
    return k, psi_k * (dx / math.sqrt(2.0 * math.pi))


def to_spectrum(packet: WavePacket, pad_factor: int = 8) -> SpectralPacket:
    """Zero-padded FFT of the packet; enforces Parseval and spectral support.

    Zero-padding by `pad_factor` refines the k sampling so downstream
    detector grids resolve every fringe; the k *range* pi/dx is fixed by
    the position grid, and an error is raised if it does not cover six
    standard deviations of the spectral support.
    """
    x = packet.grid.x
    dx = packet.grid.dx
    psi = np.asarray(packet.psi, dtype=complex)
    norm = packet.norm
    if norm <= 0:
        raise PropagationError("cannot transform a null packet")

    k, psi_k = _transform(psi, dx, pad_factor)

    dk = float(k[1] - k[0])
    spec_norm = float(np.sum(np.abs(psi_k) ** 2) * dk)
    if abs(spec_norm - norm) > 1e-8 * norm:
        raise PropagationError(
            f"Parseval violated: spectral norm {spec_norm:.12e} vs "
            f"position norm {norm:.12e}"
        )

    w = np.abs(psi_k) ** 2
    k_mean = float(np.sum(k * w) * dk) / spec_norm
    k_rms = math.sqrt(
        max(float(np.sum((k - k_mean) ** 2 * w) * dk) / spec_norm, 0.0)
    )
    k_max = float(k[-1])
    if k_max < abs(k_mean) + 6.0 * k_rms:
        raise PropagationError(
            f"insufficient grid support: k range {k_max:.3e} 1/m does not "
            f"cover 6 sigma of the spectrum (|mean| {abs(k_mean):.3e} + "
            f"6*{k_rms:.3e})"
        )

    x_mean = float(np.trapezoid(x * np.abs(psi) ** 2, dx=dx)) / norm
    l0 = math.sqrt(
        max(float(np.trapezoid((x - x_mean) ** 2 * np.abs(psi) ** 2, dx=dx)) / norm, 0.0)
    )
    # k0 attaches later via with_wavenumber (needs the particle mass)
    return SpectralPacket(k=k, psi_k=psi_k, k0=0.0, l0=l0, norm=norm, x_c=x_mean)


def with_wavenumber(spec: SpectralPacket, mass: float, v: float) -> SpectralPacket:
    """Attach the longitudinal wavenumber k0 = m*v/hbar to a spectrum."""
    if not v > 0:
        raise PropagationError("longitudinal velocity must be positive")
    return replace(spec, k0=mass * v / HBAR)


# -- detector-plane operations ----------------------------------------------


def far_field_flux(
    spec: SpectralPacket,
    det: DetectorConfig,
    v: float,
    nv_weight: Union[float, Callable[[float], float]] = 1.0,
    n_points: Optional[int] = None,
    force: bool = False,
    source: Optional[WavePacket] = None,
    pad_factor: int = 8,
) -> InterferencePattern:
    """Stationary-phase detector flux F(x) = n(v)*v*(k0/z)*|psi~(k0*x/z)|^2.

    The x grid maps the spectral grid through x = k*z/k0, so the sampling
    inherits the (zero-padded) spectral resolution; `n_points` subsamples
    if given. The far-field ratio z/z0 is recorded in metadata; below 100
    a warning is issued, below 20 an error unless `force=True`.

    When `source` (the exit-face packet behind `spec`) is given, the
    Fresnel quadratic phase exp(i*k0*(x - x_c)^2/(2z)) is retained in the
    transform — the next stationary-phase order, which removes the
    residual chirp error for packets with hard-edged support.
    """
    if spec.k0 <= 0:
        raise PropagationError(
            "spectrum has no longitudinal wavenumber; use with_wavenumber()"
        )
    z = det.distance
    ratio = z / spec.z0()
    if source is None:
        # the pure stationary-phase formula degrades in the near field;
        # the chirped transform (source given) stays exact in z
        if ratio < 20.0 and not force:
            raise PropagationError(
                f"z/z0 = {ratio:.1f} < 20: stationary-phase far field invalid "
                "(pass force=True to evaluate anyway)"
            )
        if ratio < 100.0:
            warnings.warn(
                f"z/z0 = {ratio:.1f} < 100: stationary-phase flux is "
                "approximate",
                stacklevel=2,
            )
    weight = nv_weight(v) if callable(nv_weight) else float(nv_weight)
    k, psi_k = spec.k, spec.psi_k
    if source is not None:
        xs = source.grid.x
        chirp = np.exp(1j * spec.k0 * (xs - spec.x_c) ** 2 / (2.0 * z))
        k, psi_k = _transform(
            np.asarray(source.psi, dtype=complex) * chirp,
            source.grid.dx,
            pad_factor,
        )
    # pattern features sit at x = x_c + k*z/k0: the packet centroid enters
    # the Fresnel kernel as a linear phase on psi~ and recentres the pattern
    x = spec.x_c + k * (z / spec.k0)
    f = weight * (spec.k0 / z) * np.abs(psi_k) ** 2
    if n_points is not None and n_points < len(x):
        idx = np.linspace(0, len(x) - 1, n_points).round().astype(int)
        x, f = x[idx], f[idx]
    return InterferencePattern(
        axis=x,
        v=np.array([v]),
        values=f[None, :],
        axis_name="x",
        metadata={
            "far_field_ratio": ratio,
            "distance_m": z,
            "convolved": False,
            "fall_applied": False,
            "nv_weight": weight,
        },
    )


def _shift_slice(axis: np.ndarray, vals: np.ndarray, shift: float) -> np.ndarray:
    """Values of the shifted pattern on the same axis (zero outside)."""
    if shift == 0.0:
        return vals.copy()
    return np.interp(axis - shift, axis, vals, left=0.0, right=0.0)


def fall_shift(pattern: InterferencePattern, det: DetectorConfig) -> InterferencePattern:
    """Remap x -> x + a_fall*(D/v)^2/2 (classical free fall during flight).

    Each velocity slice falls by its own amount; the common axis is kept
    and slices are linearly interpolated onto it (zero outside).
    """
    a = det.fall_acceleration
    if pattern.axis_name != "x":
        raise PropagationError("fall_shift applies to detector (x) patterns")
    if a == 0.0:
        meta = dict(pattern.metadata, fall_applied=True, fall_acceleration=0.0)
        return replace(pattern, metadata=meta)
    out = np.empty_like(pattern.values)
    for i, v in enumerate(pattern.v):
        shift = 0.5 * a * (det.distance / v) ** 2
        out[i] = _shift_slice(pattern.axis, pattern.values[i], shift)
    meta = dict(pattern.metadata, fall_applied=True, fall_acceleration=a)
    return replace(pattern, values=out, metadata=meta)


def _gaussian_kernel(dx: float, sigma: float, n: int) -> np.ndarray:
    half = min(int(math.ceil(6.0 * sigma / dx)), n - 1)
    t = np.arange(-half, half + 1) * dx
    ker = np.exp(-0.5 * (t / sigma) ** 2)
    return ker / ker.sum()


def convolve_resolution(
    pattern: InterferencePattern, det: DetectorConfig
) -> InterferencePattern:
    """Gaussian position blur (sigma = stated resolution / 2) and boxcar
    velocity average (chopper opening); the discrete integral is preserved
    exactly by kernel normalization, boundary handling is zero-padded."""
    vals = pattern.values
    sigma = 0.5 * det.position_resolution
    dx = pattern.dx
    if sigma > 0.25 * dx:
        ker = _gaussian_kernel(dx, sigma, len(pattern.axis))
        vals = np.vstack([np.convolve(row, ker, mode="same") for row in vals])

    applied_dv = 0.0
    if len(pattern.v) > 1:
        # boxcar in v on the (possibly nonuniform) slice grid: each output
        # slice is the kernel-weighted trapezoid average over its window
        out = np.empty_like(vals)
        vgrid = pattern.v
        any_box = False
        for i, v in enumerate(vgrid):
            width = det.velocity_width(float(v))
            lo, hi = v - 0.5 * width, v + 0.5 * width
            sel = (vgrid >= lo) & (vgrid <= hi)
            if width <= 0 or sel.sum() < 2:
                out[i] = vals[i]
                continue
            any_box = True
            vv = vgrid[sel]
            out[i] = np.trapezoid(vals[sel], x=vv, axis=0) / (vv[-1] - vv[0])
            applied_dv = max(applied_dv, width)
        if any_box:
            vals = out
    elif det.velocity_width(float(pattern.v[0])) > 0:
        warnings.warn(
            "velocity/time resolution given but the pattern has a single "
            "velocity slice; boxcar average skipped",
            stacklevel=2,
        )

    vals = np.maximum(vals, 0.0)
    meta = dict(
        pattern.metadata,
        convolved=True,
        position_resolution_m=det.position_resolution,
        velocity_boxcar_m_s=applied_dv,
    )
    return replace(pattern, values=vals, metadata=meta)


def merge_slices(patterns: Sequence[InterferencePattern]) -> InterferencePattern:
    """Stack single-velocity patterns (shared axis) into one (v, x) pattern."""
    if not patterns:
        raise PropagationError("no patterns to merge")
    axis = patterns[0].axis
    for p in patterns[1:]:
        if len(p.axis) != len(axis) or not np.allclose(p.axis, axis):
            raise PropagationError("patterns live on different axes")
        if p.axis_name != patterns[0].axis_name:
            raise PropagationError("patterns mix axis kinds")
    v = np.concatenate([p.v for p in patterns])
    order = np.argsort(v)
    vals = np.vstack([p.values for p in patterns])[order]
    meta = dict(patterns[0].metadata)
    return InterferencePattern(
        axis=axis,
        v=v[order],
        values=vals,
        axis_name=patterns[0].axis_name,
        metadata=meta,
    )


# -- surface current ---------------------------------------------------------


def _wall_derivative(psi: np.ndarray, dx: float) -> complex:
    """One-sided 4th-order 5-point finite difference at the wall (x = 0)."""
    if len(psi) < 5:
        raise SolverError("need >= 5 grid points for the wall derivative")
    c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
    return complex(np.dot(c, psi[:5]) / dx)


def absorption_width(mass: float, acceleration: float, scattering_length: complex) -> float:
    """Uniform annihilation width Gamma = 2*m*a*|Im a_sc| of the absorbing
    wall (independent of the state index for linear-potential states)."""
    return 2.0 * mass * acceleration * abs(scattering_length.imag)


def surface_current(
    states: Sequence[QuasiBoundState],
    coeffs: np.ndarray,
    z: np.ndarray,
    v: float,
    particle=None,
    scattering_length: Optional[complex] = None,
    nv_weight: float = 1.0,
) -> InterferencePattern:
    """Probability current into an absorbing mirror along the flight path.

    t = z/v converts mirror position to interaction time. A complex
    scattering length adds the uniform width `absorption_width` to every
    state and scales the current by (hbar/m)|Im a_sc|; particle decay adds
    the exp(-t/tau) envelope. With neither loss channel the current is
    identically zero (warned).
    """
    if not states:
        raise SolverError("no states for surface current")
    if not v > 0:
        raise PropagationError("v must be positive")
    z = np.asarray(z, dtype=float)
    coeffs = np.asarray(coeffs, dtype=complex)
    mass = states[0].mass
    im_a = abs(scattering_length.imag) if scattering_length is not None else 0.0
    has_decay = particle is not None and particle.decays
    has_width = any(s.gamma > 0 for s in states)
    if im_a == 0.0 and not has_decay and not has_width:
        warnings.warn(
            "stable particle on a lossless wall: surface current is zero",
            stacklevel=2,
        )
        return InterferencePattern(
            axis=z,
            v=np.array([v]),
            values=np.zeros((1, len(z))),
            axis_name="z",
            metadata={"convolved": False, "loss_channel": "none"},
        )

    gamma_abs = (
        absorption_width(mass, states[0].acceleration, scattering_length)
        if scattering_length is not None
        else 0.0
    )
    dx = states[0].grid.dx
    dpsi0 = np.array([_wall_derivative(s.psi, dx) for s in states])
    energies = np.array([s.energy for s in states])
    gammas = np.array([s.gamma for s in states]) + gamma_abs
    t = z / v
    rates = (-1j * energies - 0.5 * gammas) / HBAR
    current = kernels.superpose_intensity(coeffs * dpsi0, rates, t)
    # with no complex scattering length the absolute scale is model-
    # uncertain (loss via widths/decay only): report in arbitrary units
    scale = nv_weight * (HBAR / mass) * (im_a if im_a > 0 else 1.0)
    f = scale * current
    if has_decay:
        f = f * np.exp(-t / particle.lifetime)
    return InterferencePattern(
        axis=z,
        v=np.array([v]),
        values=f[None, :],
        axis_name="z",
        metadata={
            "convolved": False,
            "loss_channel": "scattering_length" if im_a > 0 else "widths/decay",
            "arbitrary_units": im_a == 0,
            "gamma_absorption_J": gamma_abs,
            "velocity_m_s": v,
        },
    )
