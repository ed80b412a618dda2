"""Dimension-checked scalar values.

Internally everything in this package is plain SI floats; `Quantity` is the
boundary type used when parsing configuration, printing reports, and in the
public physical-core API. Mixing dimensions in addition, subtraction, or
comparison raises `DimensionError`. Multiplication and division combine
exponents, so derived dimensions (e.g. velocity * time -> length) work.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .constants import E_CHARGE


class DimensionError(TypeError):
    """Arithmetic attempted between incompatible dimensions."""


@dataclass(frozen=True)
class Dimension:
    """SI dimension as (metre, kilogram, second) exponents. Angles are
    tracked as dimensionless but carry a display name."""

    m: Fraction = Fraction(0)
    kg: Fraction = Fraction(0)
    s: Fraction = Fraction(0)

    def __mul__(self, other: "Dimension") -> "Dimension":
        return Dimension(self.m + other.m, self.kg + other.kg, self.s + other.s)

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return Dimension(self.m - other.m, self.kg - other.kg, self.s - other.s)

    def __str__(self) -> str:
        return _DIM_NAMES.get(self, f"m^{self.m} kg^{self.kg} s^{self.s}")


def _dim(m=0, kg=0, s=0) -> Dimension:
    return Dimension(Fraction(m), Fraction(kg), Fraction(s))


DIMENSIONLESS = _dim()
LENGTH = _dim(m=1)
TIME = _dim(s=1)
MASS = _dim(kg=1)
ENERGY = _dim(m=2, kg=1, s=-2)
VELOCITY = _dim(m=1, s=-1)
ACCELERATION = _dim(m=1, s=-2)
FREQUENCY = _dim(s=-1)
ANGLE = DIMENSIONLESS  # radians

_DIM_NAMES = {
    DIMENSIONLESS: "1",
    LENGTH: "m",
    TIME: "s",
    MASS: "kg",
    ENERGY: "J",
    VELOCITY: "m/s",
    ACCELERATION: "m/s^2",
    FREQUENCY: "1/s",
}


@dataclass(frozen=True)
class Quantity:
    """A magnitude with an SI dimension."""

    magnitude: float
    dimension: Dimension = DIMENSIONLESS

    def _require_same(self, other: "Quantity", op: str) -> None:
        if self.dimension != other.dimension:
            raise DimensionError(
                f"cannot {op} {self.dimension} and {other.dimension}"
            )

    def __add__(self, other: "Quantity") -> "Quantity":
        self._require_same(other, "add")
        return Quantity(self.magnitude + other.magnitude, self.dimension)

    def __sub__(self, other: "Quantity") -> "Quantity":
        self._require_same(other, "subtract")
        return Quantity(self.magnitude - other.magnitude, self.dimension)

    def __mul__(self, other):
        if isinstance(other, Quantity):
            return Quantity(
                self.magnitude * other.magnitude, self.dimension * other.dimension
            )
        return Quantity(self.magnitude * other, self.dimension)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Quantity):
            return Quantity(
                self.magnitude / other.magnitude, self.dimension / other.dimension
            )
        return Quantity(self.magnitude / other, self.dimension)

    def __lt__(self, other: "Quantity") -> bool:
        self._require_same(other, "compare")
        return self.magnitude < other.magnitude

    def __le__(self, other: "Quantity") -> bool:
        self._require_same(other, "compare")
        return self.magnitude <= other.magnitude

    @property
    def ev(self) -> float:
        """Energy expressed in eV (exact conversion via the elementary charge)."""
        if self.dimension != ENERGY:
            raise DimensionError(f"{self.dimension} is not an energy")
        return self.magnitude / E_CHARGE

    @classmethod
    def from_ev(cls, e_ev: float) -> "Quantity":
        return cls(e_ev * E_CHARGE, ENERGY)

    def __str__(self) -> str:
        return f"{self.magnitude:.6g} {self.dimension}"


def magnitude_si(value, dimension: Dimension) -> float:
    """Accept a bare float (assumed SI) or a Quantity of the right dimension."""
    if isinstance(value, Quantity):
        if value.dimension != dimension:
            raise DimensionError(f"expected {dimension}, got {value.dimension}")
        return value.magnitude
    return float(value)
