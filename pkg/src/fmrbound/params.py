"""Material, field-geometry and solver parameters (CGS-Gaussian units).

Fields are in Oe, magnetization in G (emu/cc), energy densities in
erg/cc, angular frequencies in rad/s.  All parameters are plain binary64
values; the interval machinery treats them as exact points, so the model
being enclosed is the one defined by these floats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

__all__ = [
    "GAMMA_PER_G",
    "MaterialParams",
    "FieldDirection",
    "load_preset",
    "PRESET_COUNT",
]

# Gyromagnetic ratio per unit Lande factor, rad s^-1 G^-1 (mu_B / hbar).
GAMMA_PER_G = 8.79410e6


@dataclass(frozen=True, slots=True)
class MaterialParams:
    """Wire material constants and the driving microwave frequency.

    g: Lande g-factor (dimensionless).
    four_pi_ms: Saturation induction 4*pi*Ms (G).
    k_u: Uniaxial anisotropy constant about the wire axis (erg/cc);
        positive favors the axis.
    k_4: Fourth-order anisotropy constant (erg/cc).
    omega_exp: Driving angular frequency (rad/s).
    demag_factor: Scale on the infinite-cylinder self-energy
        pi*Ms^2*sin^2(theta); 1 is the physical wire, 0 turns the shape
        term off for testing.
    """

    g: float = 2.00
    four_pi_ms: float = 6400.0
    k_u: float = 0.0
    k_4: float = 0.0
    omega_exp: float = 2.0 * math.pi * 9.243e9
    demag_factor: float = 1.0

    def __post_init__(self) -> None:
        if not (self.g > 0.0 and math.isfinite(self.g)):
            raise ValueError(f"g must be positive, got {self.g}")
        if not (self.four_pi_ms > 0.0 and math.isfinite(self.four_pi_ms)):
            raise ValueError(f"4*pi*Ms must be positive, got {self.four_pi_ms}")
        if not (self.omega_exp > 0.0 and math.isfinite(self.omega_exp)):
            raise ValueError(f"omega_exp must be positive, got {self.omega_exp}")
        if not (0.0 <= self.demag_factor <= 1.0):
            raise ValueError(f"demag_factor must be in [0, 1], got {self.demag_factor}")
        for name in ("k_u", "k_4"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def gamma(self) -> float:
        """Gyromagnetic ratio (rad s^-1 G^-1)."""
        return self.g * GAMMA_PER_G

    @property
    def m_s(self) -> float:
        """Saturation magnetization Ms (G)."""
        return self.four_pi_ms / (4.0 * math.pi)

    @property
    def aniso_a(self) -> float:
        """Effective second-order constant pi*Ms^2*demag + K_u (erg/cc).

        The shape and uniaxial terms always enter the energy through this
        sum, so it is folded once here.
        """
        return math.pi * self.m_s * self.m_s * self.demag_factor + self.k_u

    @property
    def target_sq(self) -> float:
        """(omega_exp / gamma)^2, the resonance level set in Oe^2."""
        r = self.omega_exp / self.gamma
        return r * r


@dataclass(frozen=True, slots=True)
class FieldDirection:
    """Applied-field direction in spherical angles (rad).

    theta_h: Polar angle from the wire axis, in [0, pi].
    phi_h: Azimuth, in [0, 2*pi).
    """

    theta_h: float
    phi_h: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta_h <= math.pi):
            raise ValueError(f"theta_h must be in [0, pi], got {self.theta_h}")
        if not (0.0 <= self.phi_h < 2.0 * math.pi):
            raise ValueError(f"phi_h must be in [0, 2*pi), got {self.phi_h}")

    def unit(self) -> tuple[float, float, float]:
        """Cartesian unit vector (hx, hy, hz) of the field direction."""
        st = math.sin(self.theta_h)
        return (
            st * math.cos(self.phi_h),
            st * math.sin(self.phi_h),
            math.cos(self.theta_h),
        )


def _preset_table() -> dict:
    text = resources.files("fmrbound").joinpath("presets.json").read_text()
    return json.loads(text)


PRESET_COUNT = 12


def load_preset(index: int, **overrides) -> MaterialParams:
    """Material preset by 1-based index; keyword overrides win.

    Presets 1..12 cover the anisotropy-constant combinations used in the
    acceptance sweep, all at g = 2.00, 4*pi*Ms = 6400 G, 9.243 GHz.
    """
    table = _preset_table()
    key = str(index)
    if key not in table:
        raise KeyError(f"no preset {index}; valid are 1..{PRESET_COUNT}")
    kwargs = dict(table[key])
    kwargs.update(overrides)
    return MaterialParams(**kwargs)
