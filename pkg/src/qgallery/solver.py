"""Quasi-bound spectra and wavefunctions in the linear-potential well.

Single wall: V(x) = m*a*x with an infinite step at x = 0; eigenvalues are
E_n = E_c * lambda_n with lambda_n the Airy-zero magnitudes and
E_c = (hbar^2*m*a^2/2)^(1/3); eigenfunctions are shifted Airy functions.

Two walls: a second infinite step at x = dH (the absorber slit). In the
scaled variable eps = E/E_c the eigenvalue condition is the vanishing of

    D(eps) = Ai(-eps)*Bi(xi_H) - Ai(xi_H)*Bi(-eps),   xi_H = dH/l - eps,

evaluated with exponentially scaled Airy functions so deep slits
(dH >> l) neither overflow nor lose the single-wall limit. States whose
classical turning point x_n = E_n/(m*a) reaches the slit height are marked
unpopulated (rejected by the absorber).

The absorber is treated perturbatively for populated states: each gets a
width Gamma_n = hbar*omega_n*P_n with omega_n the classical bounce rate
and P_n a WKB tunneling factor through the linear barrier between x_n
and dH (closed form; pluggable via the width-model argument).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .constants import HBAR
from . import kernels

_POINTS_PER_WAVELENGTH = 16


class SolverError(ValueError):
    """Invalid grid or solver input."""


@dataclass(frozen=True)
class HeightGrid:
    """Uniform grid on [0, x_max] with n_points samples (endpoints included)."""

    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_max > 0:
            raise SolverError("x_max must be positive")
        if self.n_points < 32:
            raise SolverError("n_points must be >= 32")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.x_max, self.n_points)

    @property
    def dx(self) -> float:
        return self.x_max / (self.n_points - 1)

    def validate_for(self, mass: float, a: float, e_max: float, x_need: float):
        """Refuse grids too coarse or too short for the highest state."""
        lam_db = 2.0 * math.pi * HBAR / math.sqrt(2.0 * mass * e_max)
        dx_need = lam_db / _POINTS_PER_WAVELENGTH
        if self.dx > dx_need:
            n_suggest = int(math.ceil(self.x_max / dx_need)) + 1
            raise SolverError(
                f"grid too coarse: dx={self.dx:.3e} m exceeds 1/{_POINTS_PER_WAVELENGTH} "
                f"of the local de Broglie wavelength {lam_db:.3e} m of the highest "
                f"state; need n_points >= {n_suggest}"
            )
        if self.x_max < x_need:
            raise SolverError(
                f"grid too short: x_max={self.x_max:.3e} m but the highest state "
                f"extends to ~{x_need:.3e} m"
            )


def grid_for(mass: float, a: float, n_max: int, dh: Optional[float] = None,
             margin: float = 8.0) -> HeightGrid:
    """Build a grid adequate for the first n_max states (helper)."""
    lam = kernels.airy_ai_zeros(n_max)
    e_c = (HBAR**2 * mass * a**2 / 2.0) ** (1.0 / 3.0)
    l_char = e_c / (mass * a)
    eps_top = lam[-1]
    x_top = lam[-1] * l_char + margin * l_char
    if dh is not None:
        x_top = max(min(x_top, dh + 2 * l_char), dh)
        # wall compression raises eigenvalues above the free Airy zeros:
        # invert the semiclassical action S(eps) = pi*(n_max + 1) for the
        # top energy the grid must resolve
        xi_h = dh / l_char

        def action(eps):
            return (2.0 / 3.0) * (
                eps**1.5 - max(eps - xi_h, 0.0) ** 1.5
            )

        target = math.pi * (n_max + 1)
        hi = max(lam[-1], 1.0)
        while action(hi) < target:
            hi *= 2.0
        lo = 0.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if action(mid) < target:
                lo = mid
            else:
                hi = mid
        eps_top = hi
    e_max = eps_top * e_c
    lam_db = 2.0 * math.pi * HBAR / math.sqrt(2.0 * mass * e_max)
    n_points = int(math.ceil(x_top / (lam_db / _POINTS_PER_WAVELENGTH))) + 1
    return HeightGrid(x_max=x_top, n_points=max(n_points, 256))


@dataclass(frozen=True)
class QuasiBoundState:
    n: int  # 1-based index
    energy: float  # J (real part)
    gamma: float  # J (width, >= 0)
    psi: np.ndarray = field(repr=False)  # complex samples, unit norm on grid
    omega: float  # 1/s classical bounce frequency (2*pi / period)
    x_turn: float  # m classical turning point E/(m*a)
    grid: HeightGrid = field(repr=False)
    mass: float = 0.0
    acceleration: float = 0.0
    populated: bool = True

    @property
    def lifetime(self) -> float:
        """hbar / Gamma (inf for zero width)."""
        return HBAR / self.gamma if self.gamma > 0 else math.inf


@dataclass(frozen=True)
class WavePacket:
    psi: np.ndarray  # complex samples on grid
    grid: HeightGrid
    v: float = 0.0  # longitudinal velocity m/s
    t: float = 0.0  # elapsed propagation time s

    @property
    def norm(self) -> float:
        return float(np.trapezoid(np.abs(self.psi) ** 2, dx=self.grid.dx))


def _normalize_on_grid(psi: np.ndarray, dx: float) -> np.ndarray:
    norm = np.trapezoid(np.abs(psi) ** 2, dx=dx)
    if norm <= 0:
        raise SolverError("cannot normalize a null wavefunction")
    psi = psi / math.sqrt(norm)
    # deterministic sign: first antinode positive
    idx = np.argmax(np.abs(psi.real) > 0.1 * np.max(np.abs(psi.real)))
    if psi.real[idx] < 0:
        psi = -psi
    return psi


def _bounce_omega(mass: float, a: float, energy: float) -> float:
    """2*pi over the classical bounce period 2*sqrt(2E/m)/a."""
    return math.pi * a * math.sqrt(mass / (2.0 * energy))


def solve_single_wall(mass: float, a: float, n_max: int,
                      grid: HeightGrid) -> list[QuasiBoundState]:
    """First n_max states over a single mirror: shifted-Airy eigenfunctions."""
    if not a > 0:
        raise SolverError("acceleration must be positive")
    if n_max < 1:
        raise SolverError("n_max must be >= 1")
    lam = kernels.airy_ai_zeros(n_max)
    e_c = (HBAR**2 * mass * a**2 / 2.0) ** (1.0 / 3.0)
    l_char = e_c / (mass * a)
    grid.validate_for(mass, a, lam[-1] * e_c, (lam[-1] + 5.0) * l_char)
    x = grid.x
    states = []
    for n in range(1, n_max + 1):
        e_n = e_c * lam[n - 1]
        psi = kernels.airy_ai(x / l_char - lam[n - 1]).astype(complex)
        psi[0] = 0.0  # hard wall (Ai(-lambda_n) is zero to solver tolerance)
        psi = _normalize_on_grid(psi, grid.dx)
        states.append(
            QuasiBoundState(
                n=n,
                energy=e_n,
                gamma=0.0,
                psi=psi,
                omega=_bounce_omega(mass, a, e_n),
                x_turn=e_n / (mass * a),
                grid=grid,
                mass=mass,
                acceleration=a,
            )
        )
    return states


def _two_wall_det(eps: np.ndarray, xi_h: float):
    """Scaled two-wall determinant; same zeros as the unscaled one.

    D_scaled = Ai(-eps)*Bi_s(xi) - Ai_s(xi)*exp(-2*zeta)*Bi(-eps), xi = xi_h - eps.
    For xi <= 0 the plain determinant is used (all terms O(1)).
    """
    eps = np.atleast_1d(np.asarray(eps, dtype=float))
    xi = xi_h - eps
    ai_m = kernels.airy_ai(-eps)
    bi_m = kernels.airy_bi(-eps)
    out = np.empty_like(eps)
    pos = xi > 0
    if pos.any():
        zeta = (2.0 / 3.0) * xi[pos] ** 1.5
        with np.errstate(under="ignore"):
            damp = np.exp(-2.0 * zeta)
        out[pos] = (
            ai_m[pos] * kernels.airy_bi_scaled(xi[pos])
            - kernels.airy_ai_scaled(xi[pos]) * damp * bi_m[pos]
        )
    if (~pos).any():
        out[~pos] = ai_m[~pos] * kernels.airy_bi(xi[~pos]) - kernels.airy_ai(
            xi[~pos]
        ) * bi_m[~pos]
    return out


def _two_wall_psi(eps: float, x_over_l: np.ndarray, xi_h: float) -> np.ndarray:
    """Unnormalized two-wall eigenfunction.

    When the second wall sits in the classically forbidden region
    (xi_h - eps > 0), the Bi coefficient is taken from the upper boundary
    condition psi(dH) = 0 as Ai(xi_H)/Bi(xi_H) — exponentially small and
    assembled in log space — rather than from Ai(-eps), whose value at a
    deep-barrier eigenvalue sits below the evaluation noise floor.
    """
    xi = x_over_l - eps
    xih = xi_h - eps
    psi = np.empty_like(xi)
    if xih <= 0:
        # wall inside the classically allowed region: everything is O(1)
        ai_m = float(kernels.airy_ai(-eps))
        bi_m = float(kernels.airy_bi(-eps))
        return bi_m * kernels.airy_ai(xi) - ai_m * kernels.airy_bi(xi)
    zeta_h = (2.0 / 3.0) * xih ** 1.5
    log_ratio = (
        math.log(kernels.airy_ai_scaled(xih))
        - math.log(kernels.airy_bi_scaled(xih))
        - 2.0 * zeta_h
    )
    neg = xi <= 0
    with np.errstate(under="ignore"):
        ratio = math.exp(log_ratio) if log_ratio > -700.0 else 0.0
        psi[neg] = kernels.airy_ai(xi[neg]) - ratio * kernels.airy_bi(xi[neg])
        pos = ~neg
        if pos.any():
            xp = xi[pos]
            zeta = (2.0 / 3.0) * xp ** 1.5
            t1 = kernels.airy_ai_scaled(xp) * np.exp(-zeta)
            log_t2 = log_ratio + np.log(kernels.airy_bi_scaled(xp)) + zeta
            psi[pos] = t1 - np.exp(log_t2)
    return psi


def solve_two_wall(mass: float, a: float, dh: float, n_max: int,
                   grid: HeightGrid, allow_narrow: bool = False) -> list[QuasiBoundState]:
    """States between the mirror and a hard second wall at height dH.

    States with x_turn >= dH are returned with populated=False (the paper's
    absorber population rule); eigenfunctions still vanish at both walls.

    A slit below half the free ground-state size returns empty with a
    diagnostic (the absorber passes nothing); `allow_narrow=True` solves
    anyway, which is the meaningful regime for the weak-field/box limit.
    """
    if not dh > 0:
        raise SolverError("dH must be positive")
    lam1 = 2.3381074104597674  # ground-state Airy zero
    e_c = (HBAR**2 * mass * a**2 / 2.0) ** (1.0 / 3.0)
    l_char = e_c / (mass * a)
    if dh < 0.5 * lam1 * l_char and not allow_narrow:
        warnings.warn(
            f"slit dH={dh:.3e} m is below half the free ground-state size "
            f"{lam1 * l_char:.3e} m; no states returned (pass "
            "allow_narrow=True to solve the box-like well anyway)",
            stacklevel=2,
        )
        return []
    xi_h = dh / l_char

    # scan the scaled energy axis for sign changes, then refine; the local
    # eigenvalue spacing follows from the semiclassical action
    # S(eps) = (2/3)[eps^(3/2) - max(eps - xi_h, 0)^(3/2)] via
    # d(eps) = pi / S'(eps), valid from the Airy to the box regime
    eps_limit = (xi_h + math.pi**2 * (n_max + 2) ** 2 / xi_h**2) * 1.5 + 10.0
    roots: list[float] = []
    eps = 1e-6
    f_prev = float(_two_wall_det(eps, xi_h)[0])
    while len(roots) < n_max:
        # S'(eps) diverges to 0 at the well bottom; evaluate the spacing no
        # lower than the ground-state region so the first step stays safe
        e_eff = max(eps, 2.0)
        s_prime = math.sqrt(e_eff) - math.sqrt(max(e_eff - xi_h, 0.0))
        gap = math.pi / max(s_prime, 1e-12)
        step = max(0.25 * gap, 0.02)
        e_next = eps + step
        f_next = float(_two_wall_det(e_next, xi_h)[0])
        if f_prev == 0.0:
            roots.append(eps)
        elif f_prev * f_next < 0:
            roots.append(brentq(
                lambda e: float(_two_wall_det(e, xi_h)[0]),
                eps, e_next, xtol=1e-13, rtol=8.9e-16,
            ))
        eps, f_prev = e_next, f_next
        if eps > eps_limit:
            raise SolverError(
                f"found only {len(roots)} of {n_max} two-wall eigenvalues "
                f"by eps={eps:.1f} (xi_h={xi_h:.2f})"
            )

    e_top = roots[n_max - 1] * e_c
    grid.validate_for(mass, a, e_top, min(dh, (roots[n_max - 1] + 5.0) * l_char))
    x = grid.x
    inside = x <= dh
    states = []
    for n, eps_n in enumerate(roots[:n_max], start=1):
        psi = np.zeros_like(x, dtype=complex)
        psi[inside] = _two_wall_psi(eps_n, x[inside] / l_char, xi_h)
        # clamp both hard-wall nodes exactly
        psi[0] = 0.0
        e_n = eps_n * e_c
        psi = _normalize_on_grid(psi, grid.dx)
        states.append(
            QuasiBoundState(
                n=n,
                energy=e_n,
                gamma=0.0,
                psi=psi,
                omega=_bounce_omega(mass, a, e_n),
                x_turn=e_n / (mass * a),
                grid=grid,
                mass=mass,
                acceleration=a,
                populated=e_n / (mass * a) < dh,
            )
        )
    return states


def wkb_tunneling_probability(state: QuasiBoundState, dh: float) -> float:
    """WKB barrier factor through the linear potential from x_n to dH.

    P = exp(-2 * integral of kappa), kappa = sqrt(2m(m*a*x - E))/hbar;
    the integral is (2/3)*sqrt(2*m*m*a)*(dH - x_n)^(3/2)/hbar in closed form.
    """
    if state.x_turn >= dh:
        return 1.0
    m, a = state.mass, state.acceleration
    integral = (2.0 / 3.0) * math.sqrt(2.0 * m * m * a) * (
        dh - state.x_turn
    ) ** 1.5 / HBAR
    return math.exp(-2.0 * integral)


def absorber_widths(
    states: Sequence[QuasiBoundState],
    dh: float,
    width_model: Callable[[QuasiBoundState, float], float] = wkb_tunneling_probability,
) -> list[QuasiBoundState]:
    """Attach Gamma_n = hbar*omega_n*P_n; states at/above the slit are
    flagged unpopulated."""
    out = []
    for s in states:
        p = width_model(s, dh)
        out.append(
            replace(
                s,
                gamma=HBAR * s.omega * p,
                populated=s.x_turn < dh,
            )
        )
    return out


def project(packet: WavePacket, states: Sequence[QuasiBoundState]) -> np.ndarray:
    """Amplitudes c_i = integral of psi(x)*psi_i(x) dx (unconjugated:
    the quasi-bound basis is bi-orthogonal, left functions are not
    conjugated; for real Gamma=0 eigenfunctions this is the ordinary
    inner product)."""
    if not states:
        return np.zeros(0, dtype=complex)
    for s in states:
        if s.grid != packet.grid:
            raise SolverError("packet and states live on different grids")
    psis = np.vstack([s.psi for s in states])
    return np.trapezoid(psis * packet.psi[None, :], dx=packet.grid.dx, axis=1)


def evolve(
    states: Sequence[QuasiBoundState],
    coeffs: np.ndarray,
    t: float,
    v: float = 0.0,
    particle=None,
) -> WavePacket:
    """psi(x, t) = sum_i c_i psi_i(x) exp(-i*E_i*t/hbar - Gamma_i*t/(2*hbar)),
    with an overall exp(-t/(2*tau_life)) amplitude factor for decaying
    species."""
    if t < 0:
        raise SolverError("t must be >= 0")
    if not states:
        raise SolverError("no states to evolve")
    coeffs = np.asarray(coeffs, dtype=complex)
    energies = np.array([s.energy for s in states])
    gammas = np.array([s.gamma for s in states])
    phases = np.exp((-1j * energies - 0.5 * gammas) * (t / HBAR))
    psis = np.vstack([s.psi for s in states])
    psi = kernels.superpose_fields(coeffs, psis, phases)
    if particle is not None and particle.decays:
        psi = psi * math.exp(-t / (2.0 * particle.lifetime))
    return WavePacket(psi=psi, grid=states[0].grid, v=v, t=t)


def sudden_transition(
    packet: WavePacket, new_states: Sequence[QuasiBoundState]
) -> np.ndarray:
    """Re-project the packet onto a new region's basis at a potential
    discontinuity (sudden approximation)."""
    return project(packet, new_states)
