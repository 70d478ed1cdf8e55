"""Susceptibility models, the second-order product X_AB, skin depth and Bose factors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, UnsupportedVariantError
from .units import AMU_EV, DEFAULT_UNITS, UnitSystem


@dataclass(frozen=True)
class Constant:
    """Dispersionless real susceptibility."""

    chi: float

    def __post_init__(self):
        if not np.isfinite(self.chi):
            raise DomainError("constant susceptibility must be finite")


@dataclass(frozen=True)
class Drude:
    """chi = -omega_p^2 / (omega^2 + i omega nu)."""

    omega_p: float
    nu: float

    def __post_init__(self):
        if not (self.omega_p > 0 and self.nu > 0):
            raise DomainError("Drude parameters must be positive")


@dataclass(frozen=True)
class Lorentz:
    """chi = omega_pt^2 / (omega0^2 - omega^2 - i omega gamma)."""

    omega_pt: float
    omega0: float
    gamma: float

    def __post_init__(self):
        if not (self.omega_pt > 0 and self.omega0 > 0 and self.gamma > 0):
            raise DomainError("Lorentz parameters must be positive")

    @property
    def static_chi(self) -> float:
        return self.omega_pt**2 / self.omega0**2


@dataclass(frozen=True)
class BlackbodySurface:
    """Surface layer with thickness * Im chi = 1/(4 omega) and no real part.

    Only meaningful through the plate force; generic evaluation rejects it.
    """


SusceptibilityModel = Union[Constant, Drude, Lorentz, BlackbodySurface]


@dataclass(frozen=True)
class ThermalPair:
    """Environment and body temperatures in eV."""

    T_env: float
    T_body: float

    def __post_init__(self):
        if self.T_env < 0 or self.T_body < 0:
            raise DomainError("temperatures must be non-negative")
        if self.T_env == 0 and self.T_body == 0:
            raise DomainError("at least one temperature must be positive")

    @property
    def T_max(self) -> float:
        return max(self.T_env, self.T_body)

    @property
    def equilibrium(self) -> bool:
        return self.T_env == self.T_body

    @classmethod
    def from_kelvin(cls, T_env_K: float, T_body_K: float, units: UnitSystem = DEFAULT_UNITS):
        return cls(units.temperature(T_env_K), units.temperature(T_body_K))


def _positive_omega(omega):
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)):
        raise DomainError("frequency must be positive")
    return w


def eval_chi(model: SusceptibilityModel, omega):
    """Complex susceptibility at real frequency ``omega`` (eV)."""
    if isinstance(model, Constant):
        w = np.asarray(omega, dtype=float)
        out = np.full(w.shape, complex(model.chi))
        return out if out.ndim else complex(out)
    if isinstance(model, BlackbodySurface):
        raise UnsupportedVariantError("blackbody surface has no bulk susceptibility")
    w = _positive_omega(omega)
    if isinstance(model, Drude):
        out = -model.omega_p**2 / (w * w + 1j * w * model.nu)
    elif isinstance(model, Lorentz):
        out = model.omega_pt**2 / (model.omega0**2 - w * w - 1j * w * model.gamma)
    else:
        raise UnsupportedVariantError(f"unknown model {model!r}")
    return out if np.ndim(out) else complex(out)


def x_ab(model_a: SusceptibilityModel, model_b: SusceptibilityModel, omega):
    """Im chi_A Re chi_B - Re chi_A Im chi_B."""
    ca = eval_chi(model_a, omega)
    cb = eval_chi(model_b, omega)
    # plain real products: exactly zero for A == B and exactly odd under A <-> B
    return np.imag(ca) * np.real(cb) - np.real(ca) * np.imag(cb)


def skin_depth(model: SusceptibilityModel, omega, units: UnitSystem | None = None):
    """Penetration depth sqrt(2 (omega^2+nu^2) / (omega omega_p^2 nu)).

    Returned in eV^-1, or in cm when ``units`` is given.
    """
    if not isinstance(model, Drude):
        raise UnsupportedVariantError("skin depth is defined for the Drude model")
    w = _positive_omega(omega)
    d = np.sqrt(2.0 * (w * w + model.nu**2) / (w * model.omega_p**2 * model.nu))
    if units is not None:
        d = units.to_cm(d)
    return d if np.ndim(d) else float(d)


def bose(omega, T):
    """Occupation 1/(exp(omega/T) - 1); zero at T = 0 and beyond overflow."""
    w = np.asarray(omega, dtype=float)
    if T == 0:
        out = np.zeros_like(w)
    else:
        x = w / T
        with np.errstate(over="ignore"):
            out = np.where(x > 700.0, 0.0, 1.0 / np.expm1(np.minimum(x, 700.0)))
    return out if out.ndim else float(out)


def bose_diff(omega, thermal: ThermalPair):
    """n(omega/T_env) - n(omega/T_body)."""
    if thermal.equilibrium:
        w = np.asarray(omega, dtype=float)
        out = np.zeros_like(w)
        return out if out.ndim else 0.0
    out = np.asarray(bose(omega, thermal.T_env)) - np.asarray(bose(omega, thermal.T_body))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Substance:
    """A named susceptibility model plus the bulk data used for masses and heat capacity."""

    name: str
    model: SusceptibilityModel
    mass_density_g_cm3: float | None = None
    number_density_cm3: float | None = None
    atomic_mass_amu: float | None = None

    def mass_density(self, units: UnitSystem = DEFAULT_UNITS) -> float:
        if self.mass_density_g_cm3 is None:
            raise DomainError(f"no mass density recorded for {self.name}")
        return units.mass_density(self.mass_density_g_cm3)

    def number_density(self, units: UnitSystem = DEFAULT_UNITS) -> float:
        if self.number_density_cm3 is None:
            raise DomainError(f"no number density recorded for {self.name}")
        return units.number_density(self.number_density_cm3)

    @property
    def atomic_mass(self) -> float:
        if self.atomic_mass_amu is None:
            raise DomainError(f"no atomic mass recorded for {self.name}")
        return self.atomic_mass_amu * AMU_EV


GOLD = Substance(
    "gold",
    Drude(omega_p=9.0, nu=0.035),
    mass_density_g_cm3=19.3,
    number_density_cm3=5.9e22,
    atomic_mass_amu=196.97,
)


def polystyrene(units: UnitSystem = DEFAULT_UNITS, static_chi: float = 1.5) -> Substance:
    """Single-resonance fit y0 = 240, mu = 26 in units of 1/beta0.

    The oscillator strength is not part of that fit; it is fixed through ``static_chi``.
    """
    omega0 = 240.0 / units.beta0
    return Substance(
        "polystyrene",
        Lorentz(omega_pt=float(omega0 * np.sqrt(static_chi)), omega0=omega0, gamma=26.0 / units.beta0),
        mass_density_g_cm3=1.05,
    )


PRESETS = {
    "gold": lambda units=DEFAULT_UNITS: GOLD,
    "polystyrene": polystyrene,
}


def preset(name: str, units: UnitSystem = DEFAULT_UNITS) -> Substance:
    try:
        return PRESETS[name](units)
    except KeyError:
        raise KeyError(f"unknown material preset {name!r}; known: {sorted(PRESETS)}") from None
