"""Experiment-design chains: from a particle, a reflection model, and a
bounce/state budget to a complete whispering-gallery or reduced-gravity
parameter set.

All relations here are order-of-magnitude design rules implemented as
equalities; the full simulation modules validate the resulting parameter
sets. The chain:

    E_lim   from the 50%-survival criterion of the reflection model
    E_WGS = E_lim / gamma          (gamma ~ 3 + N retained states)
    tau   = hbar / E_WGS           (uncertainty relation)
    a     = sqrt(2*hbar/(m*tau^3)) (inverting the characteristic-time law)
    v     = L/(beta*tau), or sqrt(a*R) when the radius is imposed
    R     = v^2 / a
    dH    = gamma * l              (slit height: 3*l plus l per excited state)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .constants import G_EARTH, HBAR
from .particles import ParticleSpec, get_particle
from .qr import QRModel, effective_critical_energy
from .scales import (
    acceleration_for_formation_time,
    centrifugal_acceleration,
    characteristic_scales,
)


class DesignError(ValueError):
    """Under- or over-constrained design input."""


@dataclass(frozen=True)
class DesignInput:
    particle: ParticleSpec
    qr: Optional[QRModel] = None
    beta: float = 1.0
    gamma: float = 3.0
    length: Optional[float] = None  # mirror length L [m]
    velocity: Optional[float] = None  # longitudinal v [m/s]
    radius: Optional[float] = None  # mirror radius R [m]
    e_lim: Optional[float] = None  # J; overrides the qr-model criterion

    def __post_init__(self):
        if self.beta < 1:
            raise DesignError("beta must be >= 1")
        if self.gamma < 3:
            raise DesignError("gamma must be >= 3 (ground state needs ~3)")


@dataclass(frozen=True)
class DesignResult:
    e_lim: float  # J
    e_wgs: float  # J (per-state energy scale)
    tau: float  # s (state formation time)
    a: float  # m/s^2
    v: float  # m/s
    radius: float  # m
    l: float  # m (state size)
    dh_suggested: float  # m (absorber slit height)
    shift_ratio: float  # g / a
    t_obs: float  # s (mirror traversal time)
    n_bounces_check: float  # t_obs / tau, should be of order beta


def design_wgs(inp: DesignInput) -> DesignResult:
    """Close the whispering-gallery design chain.

    Two closures are supported:

    * energy-driven — E_lim known (via `qr` + beta or `e_lim`); then the
      velocity comes from L/(beta*tau), or from sqrt(a*R) when `radius`
      is imposed as a manufacturing constraint;
    * kinematic — no E_lim: `velocity` and `length` fix tau = L/(beta*v)
      directly, and the energy scale follows from the acceleration.
    """
    m = inp.particle.mass

    if inp.e_lim is not None or inp.qr is not None:
        e_lim = (
            inp.e_lim
            if inp.e_lim is not None
            else effective_critical_energy(inp.qr, inp.beta)
        )
        e_wgs = e_lim / inp.gamma
        tau = HBAR / e_wgs
        a = acceleration_for_formation_time(inp.particle, tau)
        if inp.radius is not None:
            v = math.sqrt(a * inp.radius)
            radius = inp.radius
        elif inp.length is not None and inp.velocity is None:
            v = inp.length / (inp.beta * tau)
            radius = v * v / a
        elif inp.velocity is not None:
            v = inp.velocity
            radius = v * v / a
        else:
            raise DesignError(
                "energy-driven closure needs one of: radius, length, velocity"
            )
    else:
        if inp.velocity is None or inp.length is None:
            raise DesignError(
                "kinematic closure needs velocity and length (no reflection "
                "model or e_lim was given)"
            )
        v = inp.velocity
        tau = inp.length / (inp.beta * v)
        a = acceleration_for_formation_time(inp.particle, tau)
        radius = inp.radius if inp.radius is not None else v * v / a
        e_wgs = HBAR / tau
        e_lim = inp.gamma * e_wgs

    scales = characteristic_scales(inp.particle, a)
    length = inp.length if inp.length is not None else inp.beta * tau * v
    t_obs = length / v
    return DesignResult(
        e_lim=e_lim,
        e_wgs=e_wgs,
        tau=tau,
        a=a,
        v=v,
        radius=radius,
        l=scales.height,
        dh_suggested=inp.gamma * scales.height,
        shift_ratio=G_EARTH / a,
        t_obs=t_obs,
        n_bounces_check=t_obs / tau,
    )


# Idealized conducting mirror for muonium: purely absorptive scattering
# length sized so the 50%-survival criterion lands at the published
# state-count budget (gamma ~ 8.6e2 at the design bounce count).
DEFAULT_MU_SCATTERING_LENGTH = -1.495e-9j  # m


@dataclass(frozen=True)
class MuDesignResult:
    length: float  # m
    tau_wgs: float  # s (formation time at the chosen acceleration)
    beta: float  # lifetime / formation time
    a: float  # m/s^2
    radius: float  # m
    l: float  # m
    gamma_material: float  # E_lim/E_WGS for the configured mirror material
    shift_ratio: float  # g / a
    dh_per_state: float  # m; dH = dh_per_state * (3 + N)
    absorber_selection: bool  # state count must be limited by the absorber


def design_mu(
    v: float = 2.2e3,
    a: float = 1.0e6,
    lifetime_multiple: float = 3.0,
    qr: Optional[QRModel] = None,
    particle: Optional[ParticleSpec] = None,
) -> MuDesignResult:
    """Muonium chain: the lifetime, not a survival criterion, sets the scale.

    The mirror length spends `lifetime_multiple` lifetimes of flight; the
    acceleration is chosen for the target gravitational-shift sensitivity
    (default 1e6 m/s^2, i.e. g/a ~ 1e-5); the material only matters through
    the (huge) state budget gamma, reported for the configured model.
    """
    p = particle if particle is not None else get_particle("Mu")
    if not p.decays:
        raise DesignError("design_mu expects a decaying particle")
    length = v * lifetime_multiple * p.lifetime
    scales = characteristic_scales(p, a)
    tau_wgs = scales.time
    beta = p.lifetime / tau_wgs
    model = qr if qr is not None else QRModel.from_scattering_length(
        p.mass, DEFAULT_MU_SCATTERING_LENGTH, name="idealized conductor"
    )
    e_lim = effective_critical_energy(model, max(beta, 1.0))
    gamma_material = e_lim / scales.energy
    return MuDesignResult(
        length=length,
        tau_wgs=tau_wgs,
        beta=beta,
        a=a,
        radius=v * v / a,
        l=scales.height,
        gamma_material=gamma_material,
        shift_ratio=G_EARTH / a,
        dh_per_state=scales.height,
        absorber_selection=gamma_material > 20,
    )


@dataclass(frozen=True)
class ReducedGravityResult:
    tau: float  # s
    g_reduced: float  # m/s^2
    tilt_angle: float  # rad
    energy: float  # J
    v_perp: float  # m/s
    l: float  # m
    t_obs: float  # s
    trajectory_length: float  # m
    pattern_size: float  # m (2 * v_perp * t_obs)
    survival: float  # specular-storage survival over t_obs
    n_traversals: float
    warning: Optional[str] = None


def design_reduced_gravity(
    particle: ParticleSpec,
    beta: float,
    length: float,
    v: float,
    mirror_width: float = 1.0,
    n_traversals: float = 40.0,
    off_specular_loss: float = 2e-3,
    collision_frequency: float = 5.0,
) -> ReducedGravityResult:
    """Tilted-mirror design: gravity reduced to its projection on the slit.

    The storage bookkeeping counts `n_traversals` specular crossings of a
    `mirror_width`-wide box (t_obs = n*W/v) and reports the survival
    against off-specular losses at the given wall-collision frequency.
    No closed-form overlap criterion is claimed: the pattern size
    2*v_perp*t_obs is reported so the caller can check it against the
    geometry.
    """
    if beta <= 0 or length <= 0 or v <= 0:
        raise DesignError("beta, length, v must be positive")
    tau = length / (beta * v)
    g_red = acceleration_for_formation_time(particle, tau)
    tilt = g_red / G_EARTH
    warning = None
    if tilt > 0.1:
        warning = (
            f"tilt angle {tilt:.3f} rad exceeds 0.1: small-angle treatment "
            "of the gravity projection breaks down"
        )
    scales = characteristic_scales(particle, g_red)
    v_perp = math.sqrt(2.0 * scales.energy / particle.mass)
    t_obs = n_traversals * mirror_width / v
    survival = (1.0 - off_specular_loss) ** (collision_frequency * t_obs)
    return ReducedGravityResult(
        tau=tau,
        g_reduced=g_red,
        tilt_angle=tilt,
        energy=scales.energy,
        v_perp=v_perp,
        l=scales.height,
        t_obs=t_obs,
        trajectory_length=v * t_obs,
        pattern_size=2.0 * v_perp * t_obs,
        survival=survival,
        n_traversals=n_traversals,
        warning=warning,
    )


@dataclass(frozen=True)
class PhaseSpaceResult:
    height_extent: float  # m: (gamma + 2) * l
    velocity_extent: float  # m/s: 2*sqrt(2*E*gamma/m)
    collimation_factor: float  # dimensionless
    accepted_volume: float  # m^2/s: height * velocity * collimation


def phase_space_acceptance(
    design: DesignResult,
    particle: ParticleSpec,
    gamma: float,
    beam_width: float = 1.0,
    collimation_margin: float = 5.0,
) -> PhaseSpaceResult:
    """Phase-space bookkeeping for event-count estimates.

    Returns the accepted beam-height and transverse-velocity extents and
    the angular-collimation penalty; multiplying `accepted_volume` by the
    source brightness (per area, per velocity, per time) and beam width
    gives a count-rate estimate.
    """
    if collimation_margin < 1:
        raise DesignError("collimation margin must be >= 1")
    m = particle.mass
    height = (gamma + 2.0) * design.l
    vel = 2.0 * math.sqrt(2.0 * design.e_wgs * gamma / m)
    collimation = 2.0 * math.sqrt(design.e_wgs * gamma / m) / design.v
    factor = collimation / collimation_margin
    return PhaseSpaceResult(
        height_extent=height,
        velocity_extent=vel,
        collimation_factor=factor,
        accepted_volume=beam_width * height * vel * factor,
    )
