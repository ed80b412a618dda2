"""Quantum reflection of slow (anti)atoms from a material surface, and the
effective critical-energy criterion built on it.

Three model modes:

* ``hard_wall`` — idealized neutron mirror: P = 1 below a configured
  critical energy (the material optical potential), 0 above.
* ``scattering_length`` — near-threshold parameterization with a complex
  scattering length a = a_r - i*b (Im(a) <= 0 enforced): the reflection
  amplitude is r(k) = -(1 - i*k*a)/(1 + i*k*a) and P = |r|^2, whose small-k
  limit is P ~ 1 - 4*k*b. Valid for k*|a| <= 1 (P is not monotone beyond).
* ``tabulated`` — externally computed P(E_perp) pairs, interpolated linearly
  in (sqrt(E), ln P) space, the natural grid for the 1 - c*sqrt(E) threshold
  behavior.

The effective critical energy E_lim solves P(E_lim)^beta = 0.5: the
transverse energy at which half the atoms survive beta bounces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .constants import E_CHARGE, HBAR
from .units import ENERGY, magnitude_si

_MODES = ("hard_wall", "scattering_length", "tabulated")


class QRModelError(ValueError):
    """Invalid model construction or evaluation outside the model domain."""


@dataclass(frozen=True)
class QRModel:
    """Reflection-probability model for one particle/surface pair."""

    mode: str
    mass: float  # kg of the reflected particle (converts E_perp -> k)
    scattering_length: complex = 0j  # m, mode "scattering_length"
    table_e: Optional[np.ndarray] = field(default=None, repr=False)  # J
    table_p: Optional[np.ndarray] = field(default=None, repr=False)
    critical_energy: float = 0.0  # J, mode "hard_wall"
    material_name: str = ""

    def __post_init__(self):
        if self.mode not in _MODES:
            raise QRModelError(f"unknown mode {self.mode!r}; expected {_MODES}")
        if not self.mass > 0:
            raise QRModelError("mass must be positive")
        if self.mode == "scattering_length":
            if self.scattering_length.imag > 0:
                raise QRModelError(
                    "Im(scattering_length) must be <= 0 (absorption convention)"
                )
            if abs(self.scattering_length) == 0:
                raise QRModelError("scattering length must be nonzero")
        if self.mode == "tabulated":
            e, p = self.table_e, self.table_p
            if e is None or p is None or len(e) != len(p) or len(e) < 2:
                raise QRModelError("tabulated mode needs >= 2 (E, P) pairs")
            if not (np.diff(e) > 0).all():
                raise QRModelError("table energies must be strictly increasing")
            if (p < 0).any() or (p > 1).any():
                raise QRModelError("table P values must lie in [0, 1]")
            if e[0] < 0:
                raise QRModelError("table energies must be >= 0")
        if self.mode == "hard_wall" and not self.critical_energy > 0:
            raise QRModelError("hard_wall mode needs a positive critical energy")

    # -- constructors -------------------------------------------------------

    @classmethod
    def hard_wall(cls, mass: float, critical_energy, name: str = "") -> "QRModel":
        """Idealized mirror: total reflection below the optical potential."""
        return cls(
            mode="hard_wall",
            mass=mass,
            critical_energy=magnitude_si(critical_energy, ENERGY),
            material_name=name,
        )

    @classmethod
    def from_scattering_length(
        cls, mass: float, a: complex, name: str = ""
    ) -> "QRModel":
        return cls(
            mode="scattering_length",
            mass=mass,
            scattering_length=complex(a),
            material_name=name,
        )

    @classmethod
    def from_table(cls, mass: float, e_joule, p, name: str = "") -> "QRModel":
        return cls(
            mode="tabulated",
            mass=mass,
            table_e=np.asarray(e_joule, dtype=float),
            table_p=np.asarray(p, dtype=float),
            material_name=name,
        )

    def wavenumber(self, e_perp) -> np.ndarray:
        """Normal-incidence wavenumber k = sqrt(2*m*E)/hbar."""
        e = np.asarray(e_perp, dtype=float)
        return np.sqrt(2.0 * self.mass * e) / HBAR

    @property
    def domain_max_energy(self) -> float:
        """Upper edge of the validity domain in J."""
        if self.mode == "tabulated":
            return float(self.table_e[-1])
        if self.mode == "scattering_length":
            k_max = 1.0 / abs(self.scattering_length)
            return (HBAR * k_max) ** 2 / (2.0 * self.mass)
        return np.inf


def reflection_probability(model: QRModel, e_perp, clamp: bool = False):
    """P(E_perp) in [0, 1]; scalar in -> float out, array in -> array out.

    Outside the model's energy domain a QRModelError is raised unless
    ``clamp=True``, which evaluates at the nearest domain edge.
    """
    scalar = np.isscalar(e_perp) or (
        hasattr(e_perp, "magnitude") and not hasattr(e_perp, "__len__")
    )
    e = np.atleast_1d(
        np.asarray(
            [magnitude_si(v, ENERGY) for v in np.atleast_1d(e_perp)], dtype=float
        )
    )
    if (e < 0).any():
        raise QRModelError("E_perp must be >= 0")

    if model.mode == "hard_wall":
        p = np.where(e <= model.critical_energy, 1.0, 0.0)
    elif model.mode == "scattering_length":
        e_max = model.domain_max_energy
        if (e > e_max).any():
            if not clamp:
                raise QRModelError(
                    f"E_perp beyond scattering-length validity k*|a| <= 1 "
                    f"(max {e_max / E_CHARGE:.3e} eV); pass clamp=True to saturate"
                )
            e = np.minimum(e, e_max)
        k = model.wavenumber(e)
        num = np.abs(1.0 - 1j * k * model.scattering_length) ** 2
        den = np.abs(1.0 + 1j * k * model.scattering_length) ** 2
        p = num / den
    else:  # tabulated
        lo, hi = model.table_e[0], model.table_e[-1]
        if ((e < lo) | (e > hi)).any():
            if not clamp:
                raise QRModelError(
                    f"E_perp outside table range [{lo / E_CHARGE:.3e}, "
                    f"{hi / E_CHARGE:.3e}] eV; pass clamp=True"
                )
            e = np.clip(e, lo, hi)
        # linear in (sqrt(E), ln P); exact zeros floored for the log
        logp = np.log(np.maximum(model.table_p, 1e-300))
        p = np.exp(np.interp(np.sqrt(e), np.sqrt(model.table_e), logp))
        p = np.clip(p, 0.0, 1.0)
    return float(p[0]) if scalar else p


def survival_probability(model: QRModel, e_perp, beta: float, clamp: bool = False):
    """Survival after beta quasi-classical bounces: P(E)^beta."""
    p = reflection_probability(model, e_perp, clamp=clamp)
    return np.exp(beta * np.log(np.maximum(p, 1e-300))) if beta != 1 else p


def effective_critical_energy(model: QRModel, beta: float) -> float:
    """E_lim in J solving P(E_lim)^beta = 0.5 (50% survival criterion)."""
    if beta < 1:
        raise QRModelError("beta must be >= 1")
    if model.mode == "hard_wall":
        return model.critical_energy

    target = 0.5 ** (1.0 / beta)

    def f(e):
        return reflection_probability(model, e) - target

    e_hi = model.domain_max_energy
    if model.mode == "tabulated":
        e_lo = model.table_e[0] if model.table_e[0] > 0 else model.table_e[1]
    else:
        e_lo = 1e-12 * e_hi
    f_lo, f_hi = f(e_lo), f(e_hi)
    if f_lo < 0 or f_hi > 0:
        raise QRModelError(
            "no 50%-survival bracket inside the model domain: "
            f"P(E_min)={f_lo + target:.6f}, P(E_max)={f_hi + target:.6f}, "
            f"target P={target:.6f}"
        )
    # solve in log-energy: the scenes span ~20 decades in E, so an absolute
    # tolerance on E itself would be meaningless
    u = brentq(lambda u: f(np.exp(u)), np.log(e_lo), np.log(e_hi), xtol=1e-9)
    return float(np.exp(u))


# -- table I/O ---------------------------------------------------------------


def load_table(path, mass: float, name: str = "") -> QRModel:
    """Load a two-column (E_perp in eV, P) text table.

    '#' lines are comments; energies must be strictly increasing. Errors
    carry 1-based line numbers.
    """
    e_ev, p = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) != 2:
                raise QRModelError(
                    f"{path}:{lineno}: expected 2 columns, got {len(parts)}"
                )
            try:
                ev, pv = float(parts[0]), float(parts[1])
            except ValueError:
                raise QRModelError(f"{path}:{lineno}: non-numeric entry") from None
            if not 0.0 <= pv <= 1.0:
                raise QRModelError(f"{path}:{lineno}: P={pv} outside [0, 1]")
            if e_ev and ev <= e_ev[-1]:
                raise QRModelError(
                    f"{path}:{lineno}: energies must be strictly increasing"
                )
            e_ev.append(ev)
            p.append(pv)
    if len(e_ev) < 2:
        raise QRModelError(f"{path}: table needs at least 2 rows")
    return QRModel.from_table(
        mass, np.asarray(e_ev) * E_CHARGE, np.asarray(p), name=name or str(path)
    )


def load_builtin_table(table_name: str, mass: float) -> QRModel:
    """Load one of the shipped reflection tables (e.g. 'silica_h')."""
    from importlib import resources

    ref = resources.files("qgallery.data").joinpath(f"{table_name}.txt")
    with resources.as_file(ref) as path:
        return load_table(path, mass, name=table_name)


def builtin_scattering_length(table_name: str) -> complex:
    """Complex scattering length recorded in a shipped table's header."""
    import re
    from importlib import resources

    ref = resources.files("qgallery.data").joinpath(f"{table_name}.txt")
    if not ref.is_file():
        raise QRModelError(f"no builtin table {table_name!r}")
    match = re.search(
        r"scattering length:\s*a\s*=\s*([0-9eE.+-]+j?)\s*m", ref.read_text()
    )
    if not match:
        raise QRModelError(
            f"table {table_name!r} does not record a scattering length"
        )
    return complex(match.group(1))
