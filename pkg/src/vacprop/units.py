"""Natural-unit bookkeeping.

Everything inside the library is expressed in powers of eV with hbar = c = k_B = 1.
Lengths enter through the configured hbar*c, so 1 cm = 1/hbar_c_eV_cm eV^-1.
SI values are produced only by the conversion helpers below.
"""

from __future__ import annotations

from dataclasses import dataclass

EV_JOULE = 1.602176634e-19
C_CM_PER_S = 2.99792458e10
GRAM_EV = 5.609588603804e32  # rest energy of one gram, in eV
AMU_EV = 931.49410242e6
K_B_EV_PER_K = 8.617333262e-5


@dataclass(frozen=True)
class UnitSystem:
    """Reference scales and conversion constants.

    ``kelvin_eV`` is the energy of one kelvin.  The physical value is the default;
    :meth:`reference` returns the rounded convention in which 300 K is exactly
    1/beta0, which is how the published figure values were produced.
    """

    hbar_c_eV_cm: float = 2e-5
    beta0_inv_eV: float = 40.0
    a0_cm: float = 1.0
    kelvin_eV: float = K_B_EV_PER_K

    def __post_init__(self):
        for name in ("hbar_c_eV_cm", "beta0_inv_eV", "a0_cm", "kelvin_eV"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def reference(cls) -> "UnitSystem":
        return cls(kelvin_eV=1.0 / (300.0 * 40.0))

    # reference scales in natural units
    @property
    def beta0(self) -> float:
        return self.beta0_inv_eV

    @property
    def T0(self) -> float:
        return 1.0 / self.beta0_inv_eV

    @property
    def a0(self) -> float:
        return self.length(self.a0_cm)

    @property
    def size_ratio(self) -> float:
        """a0/beta0, the dimensionless size parameter of the needle integrals."""
        return self.a0 / self.beta0

    # SI or cgs -> natural
    def length(self, cm: float) -> float:
        return cm / self.hbar_c_eV_cm

    def area(self, cm2: float) -> float:
        return cm2 / self.hbar_c_eV_cm**2

    def number_density(self, per_cm3: float) -> float:
        return per_cm3 * self.hbar_c_eV_cm**3

    def mass_density(self, g_per_cm3: float) -> float:
        return g_per_cm3 * GRAM_EV * self.hbar_c_eV_cm**3

    def temperature(self, kelvin: float) -> float:
        return kelvin * self.kelvin_eV

    # natural -> SI or cgs
    def to_cm(self, length: float) -> float:
        return length * self.hbar_c_eV_cm

    def to_kelvin(self, energy: float) -> float:
        return energy / self.kelvin_eV

    @property
    def second_per_natural(self) -> float:
        """Duration in seconds of one eV^-1 of time (length over c)."""
        return self.hbar_c_eV_cm / C_CM_PER_S

    def to_seconds(self, t: float) -> float:
        return t * self.second_per_natural

    def from_seconds(self, s: float) -> float:
        return s / self.second_per_natural

    @property
    def newton_per_eV2(self) -> float:
        return EV_JOULE / (self.hbar_c_eV_cm * 1e-2)

    def to_newtons(self, force: float) -> float:
        return force * self.newton_per_eV2

    def to_m_per_s(self, v: float) -> float:
        return v * C_CM_PER_S * 1e-2

    def to_kg(self, mass: float) -> float:
        return mass / GRAM_EV * 1e-3

    def to_watts(self, power: float) -> float:
        return power * EV_JOULE / self.second_per_natural


DEFAULT_UNITS = UnitSystem()
REFERENCE_UNITS = UnitSystem.reference()
