"""Physical constants and the noncommutativity parameter.

Natural units hbar = c = 1 throughout; energies in eV, lengths in eV^-1.
The squared electron charge equals the fine-structure constant in these
units (Gaussian convention), so e^2 = alpha everywhere.  The only place a
dimensional constant appears is the Hz <-> eV conversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError

GEV = 1.0e9  # eV per GeV

# Published theoretical accuracies of the hydrogen Lamb shift, used as
# default ceilings when converting level splittings into bounds.
LAMB_ACCURACY_2P_HZ = 80.0
LAMB_ACCURACY_1S_HZ = 14.0e3

# Short-distance cutoff regularizing divergent S-state expectation values.
DEFAULT_LAMBDA_QCD_EV = 2.0e8

HZ_CONVENTIONS = ("two_pi_hbar", "planck_h")


@dataclass(frozen=True)
class PhysicalConstants:
    """Electron mass, fine-structure constant, and hbar in eV s."""

    m_e: float = 510998.95
    alpha: float = 7.2973525693e-3
    hbar_eV_s: float = 6.582119569e-16

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.m_e > 0.0:
            raise ValidationError(f"m_e must be positive, got {self.m_e}")

    @property
    def bohr_radius(self) -> float:
        """a0 = 1/(m alpha) in eV^-1."""
        return 1.0 / (self.m_e * self.alpha)

    def with_(self, **kwargs) -> "PhysicalConstants":
        return replace(self, **kwargs)


DEFAULT_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class ThetaParam:
    """Noncommutativity magnitude theta in eV^-2, axis fixed along z."""

    theta: float

    def __post_init__(self):
        if self.theta < 0.0:
            raise ValidationError(f"theta must be >= 0, got {self.theta}")

    @property
    def vector(self) -> np.ndarray:
        return np.array([0.0, 0.0, self.theta])


@dataclass(frozen=True)
class ThetaTensor:
    """Antisymmetric space-space block (as its dual vector) plus the
    time-space row theta^{0j}.

    The spectroscopy in this package keeps theta^{0j} = 0; the potential
    evaluator accepts it anyway so the full deformed potential can be
    inspected.
    """

    space_vector: tuple[float, float, float]
    time_row: tuple[float, float, float] = (0.0, 0.0, 0.0)

    @classmethod
    def z_axis(cls, theta: float, time_row=(0.0, 0.0, 0.0)) -> "ThetaTensor":
        return cls(space_vector=(0.0, 0.0, float(theta)), time_row=tuple(time_row))

    @property
    def space_matrix(self) -> np.ndarray:
        """The 3x3 antisymmetric matrix theta^{ij} = eps_{ijk} theta_k."""
        tx, ty, tz = self.space_vector
        return np.array([[0.0, tz, -ty], [-tz, 0.0, tx], [ty, -tx, 0.0]])


def hz_to_ev(frequency_hz: float, constants: PhysicalConstants = DEFAULT_CONSTANTS,
             convention: str = "two_pi_hbar") -> float:
    """Convert an ordinary frequency in Hz to an energy in eV.

    Both conventions multiply by one full Planck quantum per cycle:
    "two_pi_hbar" computes 2 pi hbar f, "planck_h" computes h f with
    h = 2 pi hbar.  They agree; both names are accepted so configuration
    files can state the convention explicitly.
    """
    if convention not in HZ_CONVENTIONS:
        raise ValidationError(f"unknown hz convention {convention!r}; use one of {HZ_CONVENTIONS}")
    return 2.0 * math.pi * constants.hbar_eV_s * frequency_hz


def ev2_to_gev_scale(theta_ev2: float) -> float:
    """Render a theta value (eV^-2) as the X of 'theta = (X GeV)^-2'."""
    if theta_ev2 <= 0.0:
        raise ValidationError(f"theta must be positive, got {theta_ev2}")
    return 1.0 / (math.sqrt(theta_ev2) * GEV)
