"""Exact relativistic hydrogen bound states.

States are labeled by the radial quantum number n_r = 0, 1, 2, ... and the
angular quantum number kappa = +l (j = l - 1/2) or -(l + 1) (j = l + 1/2).
Energies come from the closed-form Coulomb spectrum; the normalized radial
pair (f, g) multiplies the spinor harmonics for (j, l, M) and its
opposite-parity partner.

Conventions worth stating once:

* nu = sqrt(kappa^2 - alpha^2); lam = sqrt(m^2 - E^2); x = 2 lam r.
  The dimensionless x is the natural Gauss-Laguerre variable.
* Both radial components share the envelope x^(nu-1) e^(-x/2); the
  polynomial parts mix x L_{n_r-1}^{2 nu + 1} and L_{n_r}^{2 nu - 1}.
  The coefficient of the first polynomial is written per unit mass so the
  two terms carry the same dimension; with that reading the pair solves
  the coupled radial equations to machine precision (checked in tests).
* The overall normalization constant is computed numerically, with sign
  fixed positive; the physics downstream only consumes normalized shapes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .constants import DEFAULT_CONSTANTS, PhysicalConstants, ThetaTensor
from .errors import DomainError, SingularityError, ValidationError
from .specfun import gamma_real, gauss_laguerre, laguerre_general

__all__ = [
    "RelativisticState",
    "kappa_to_lj",
    "lj_to_kappa",
    "make_state",
    "dirac_energy",
    "dirac_binding_energy",
    "radial_shape_coefficients",
    "radial_polynomials",
    "radial_fg",
    "normalization_constant",
    "norm_integral_x",
    "deformed_potential",
    "parse_level_label",
    "level_label",
    "SPECTROSCOPIC_LETTERS",
]

SPECTROSCOPIC_LETTERS = "SPDFGHIK"


def kappa_to_lj(kappa: int) -> tuple[int, float]:
    """Orbital l and total j encoded by a nonzero integer kappa."""
    if kappa == 0:
        raise ValidationError("kappa = 0 is not allowed")
    j = abs(kappa) - 0.5
    l = kappa if kappa > 0 else -kappa - 1
    return l, j


def lj_to_kappa(l: int, j: float) -> int:
    if abs(j - (l - 0.5)) < 1e-9:
        return l
    if abs(j - (l + 0.5)) < 1e-9:
        return -(l + 1)
    raise ValidationError(f"(l, j) = ({l}, {j}) is not a valid fine-structure pair")


@dataclass(frozen=True)
class RelativisticState:
    """One Dirac-Coulomb bound level with all derived quantities attached."""

    n_r: int
    kappa: int
    M: float
    constants: PhysicalConstants
    j: float
    l: int
    nu: float
    energy: float
    a: float          # sqrt(m^2 - E^2)/m, dimensionless momentum scale
    lam: float        # sqrt(m^2 - E^2) in eV
    norm: float       # multiplies the raw radial shapes; > 0

    @property
    def n_principal(self) -> int:
        return self.n_r + abs(self.kappa)

    @property
    def label(self) -> str:
        return level_label(self.n_r, self.kappa)


def _check_half_integer(M: float):
    if abs(2.0 * M - round(2.0 * M)) > 1e-12 or abs(round(2.0 * M)) % 2 != 1:
        raise ValidationError(f"M must be a half-integer, got {M}")


def dirac_energy(n_r: int, kappa: int, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Bound-state energy E = m (n_r + nu) / sqrt(alpha^2 + (n_r + nu)^2)."""
    alpha, m = constants.alpha, constants.m_e
    if kappa == 0:
        raise ValidationError("kappa = 0 is not allowed")
    if alpha >= abs(kappa):
        raise ValidationError(f"alpha = {alpha} >= |kappa| = {abs(kappa)}: nu is not real")
    nu = math.sqrt(kappa * kappa - alpha * alpha)
    return m * (n_r + nu) / math.sqrt(alpha * alpha + (n_r + nu) ** 2)


def dirac_binding_energy(n_r: int, kappa: int,
                         constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """m - E evaluated without cancellation (log1p/expm1 route)."""
    alpha, m = constants.alpha, constants.m_e
    nu = math.sqrt(kappa * kappa - alpha * alpha)
    u = (alpha / (n_r + nu)) ** 2
    # 1 - (1+u)^(-1/2), computed stably
    return -m * math.expm1(-0.5 * math.log1p(u))


def make_state(n_r: int, kappa: int, M: float,
               constants: PhysicalConstants = DEFAULT_CONSTANTS) -> RelativisticState:
    """Validate quantum numbers and build a fully derived state.

    n_r = 0 with kappa > 0 is rejected: the closed-form prefactor vanishes
    there, i.e. no such bound state exists.
    """
    if kappa == 0:
        raise ValidationError("kappa = 0 is not allowed")
    if n_r < 0:
        raise ValidationError(f"n_r must be >= 0, got {n_r}")
    if n_r == 0 and kappa > 0:
        raise ValidationError(f"(n_r=0, kappa={kappa}): state is unnormalizable")
    _check_half_integer(M)
    l, j = kappa_to_lj(kappa)
    if abs(M) > j:
        raise ValidationError(f"|M| = {abs(M)} exceeds j = {j}")
    alpha, m = constants.alpha, constants.m_e
    if alpha >= abs(kappa):
        raise ValidationError(f"alpha = {alpha} >= |kappa| = {abs(kappa)}: nu is not real")
    nu = math.sqrt(kappa * kappa - alpha * alpha)
    energy = dirac_energy(n_r, kappa, constants)
    lam = math.sqrt((m - energy) * (m + energy))
    a = lam / m
    norm = _norm_constant(n_r, kappa, constants)
    return RelativisticState(n_r=n_r, kappa=kappa, M=M, constants=constants,
                             j=j, l=l, nu=nu, energy=energy, a=a, lam=lam, norm=norm)


def radial_shape_coefficients(n_r: int, kappa: int,
                              constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """Coefficients (f1, f2, g1, g2) of the two radial polynomial terms.

    f = x^(nu-1) e^(-x/2) [f1 x L_{n_r-1}^{2nu+1} + f2 L_{n_r}^{2nu-1}],
    and likewise g with (g1, g2).  f1 and g1 carry a factor m relative to
    the bare ratio a alpha / (E kappa - m nu) so that both terms are
    dimensionless; for n_r = 0 the first term is absent and f1 = g1 = 0.
    """
    alpha, m = constants.alpha, constants.m_e
    nu = math.sqrt(kappa * kappa - alpha * alpha)
    E = dirac_energy(n_r, kappa, constants)
    a = math.sqrt((m - E) * (m + E)) / m
    f2 = kappa - nu
    g2 = alpha
    if n_r == 0:
        return 0.0, f2, 0.0, g2
    denom = E * kappa - m * nu
    f1 = m * a * alpha / denom
    g1 = m * a * (kappa - nu) / denom
    return f1, f2, g1, g2


def _poly_pair(n_r: int, kappa: int, nu: float, constants: PhysicalConstants, x):
    f1, f2, g1, g2 = radial_shape_coefficients(n_r, kappa, constants)
    low = laguerre_general(n_r, 2.0 * nu - 1.0, x)
    if n_r >= 1:
        high = np.asarray(x, dtype=float) * laguerre_general(n_r - 1, 2.0 * nu + 1.0, x)
    else:
        high = 0.0
    return f1 * high + f2 * low, g1 * high + g2 * low


def radial_polynomials(state: RelativisticState, x):
    """Polynomial parts (P_f, P_g) of the radial pair at dimensionless x."""
    return _poly_pair(state.n_r, state.kappa, state.nu, state.constants, x)


def norm_integral_x(state: RelativisticState, order: int = 96) -> float:
    """The x-space norm integral I = int x^(2 nu) e^-x (P_f^2 + P_g^2) dx.

    The integrand is a polynomial against the generalized weight, so a
    modest-order rule is exact.  The physical norm is norm^2 I / (2 lam)^3.
    """
    rule = gauss_laguerre(order, beta=2.0 * state.nu)

    def poly(x):
        pf, pg = radial_polynomials(state, x)
        return pf * pf + pg * pg

    return rule.integrate(poly)


@lru_cache(maxsize=4096)
def _norm_constant(n_r: int, kappa: int, constants: PhysicalConstants) -> float:
    alpha, m = constants.alpha, constants.m_e
    nu = math.sqrt(kappa * kappa - alpha * alpha)
    E = dirac_energy(n_r, kappa, constants)
    lam = math.sqrt((m - E) * (m + E))
    rule = gauss_laguerre(96, beta=2.0 * nu)

    def poly(x):
        pf, pg = _poly_pair(n_r, kappa, nu, constants, x)
        return pf * pf + pg * pg

    integral = rule.integrate(poly)
    return math.sqrt((2.0 * lam) ** 3 / integral)


def normalization_constant(state: RelativisticState) -> float:
    """Constant C > 0 with C^2 int (f~^2 + g~^2) r^2 dr = 1 for the raw shapes."""
    return _norm_constant(state.n_r, state.kappa, state.constants)


def radial_fg(state: RelativisticState, r):
    """Normalized radial pair (f, g) at radius r > 0 (eV^-1; scalar or array).

    Both components decay as e^(-x/2) with x = 2 sqrt(m^2 - E^2) r and share
    the x^(nu-1) envelope.  int (f^2 + g^2) r^2 dr = 1.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0.0):
        raise DomainError("radial_fg requires r > 0")
    x = 2.0 * state.lam * r_arr
    pf, pg = radial_polynomials(state, x)
    envelope = np.exp(-0.5 * x + (state.nu - 1.0) * np.log(x))
    f = state.norm * envelope * pf
    g = state.norm * envelope * pg
    if np.ndim(r):
        return f, g
    return float(f), float(g)


def analytic_norm_nodeless(state: RelativisticState) -> float:
    """Closed-form normalization for n_r = 0 states (single-term shapes)."""
    if state.n_r != 0:
        raise ValidationError("closed-form norm only applies to n_r = 0 states")
    f2 = state.kappa - state.nu
    g2 = state.constants.alpha
    integral = (f2 * f2 + g2 * g2) * gamma_real(2.0 * state.nu + 1.0)
    return math.sqrt((2.0 * state.lam) ** 3 / integral)


# ---------------------------------------------------------------------------
# Deformed Coulomb potential
# ---------------------------------------------------------------------------


def deformed_potential(x_vec, theta: ThetaTensor,
                       constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """First-order deformed Coulomb potential at the point x_vec.

    Returns (a0, a_vec): the scalar part -e/r - e^3 (theta^{0j} x_j)/r^4 and
    the vector part e^3 (x cross theta)/(4 r^4), with e = sqrt(alpha).
    Setting all theta components to zero recovers (-e/r, 0).
    """
    xv = np.asarray(x_vec, dtype=float)
    if xv.shape != (3,):
        raise DomainError(f"x_vec must be a 3-vector, got shape {xv.shape}")
    r = float(np.linalg.norm(xv))
    if r == 0.0:
        raise SingularityError("deformed_potential is singular at r = 0")
    e = math.sqrt(constants.alpha)
    e3 = e ** 3
    a0 = -e / r - e3 * float(np.dot(theta.time_row, xv)) / r ** 4
    a_vec = e3 / (4.0 * r ** 4) * np.cross(xv, np.asarray(theta.space_vector, dtype=float))
    return a0, a_vec


# ---------------------------------------------------------------------------
# Spectroscopic labels: N l_j with l in S, P, D, ... and j printed as "3/2"
# ---------------------------------------------------------------------------

_LABEL_RE = re.compile(r"^\s*(\d+)\s*([A-Za-z])\s*(\d+)\s*/\s*2\s*$")


def parse_level_label(label: str) -> tuple[int, int]:
    """Parse a label like '2P3/2' into (n_r, kappa).

    Grammar: principal integer, orbital letter (S, P, D, F, ...), total j as
    an odd numerator over 2.  Raises ValidationError on anything else or on
    physically impossible combinations.
    """
    match = _LABEL_RE.match(label)
    if not match:
        raise ValidationError(f"cannot parse level label {label!r} (expected e.g. '2P3/2')")
    n_principal = int(match.group(1))
    letter = match.group(2).upper()
    two_j = int(match.group(3))
    if letter not in SPECTROSCOPIC_LETTERS:
        raise ValidationError(f"unknown orbital letter {letter!r} in {label!r}")
    if two_j % 2 == 0:
        raise ValidationError(f"j must be half-integral, got {two_j}/2 in {label!r}")
    l = SPECTROSCOPIC_LETTERS.index(letter)
    j = two_j / 2.0
    kappa = lj_to_kappa(l, j)  # raises if |l - j| != 1/2
    n_r = n_principal - abs(kappa)
    if n_r < 0 or (n_r == 0 and kappa > 0) or n_principal <= l:
        raise ValidationError(f"{label!r} does not name a bound state")
    return n_r, kappa


def level_label(n_r: int, kappa: int) -> str:
    l, j = kappa_to_lj(kappa)
    if l >= len(SPECTROSCOPIC_LETTERS):
        raise ValidationError(f"l = {l} has no spectroscopic letter here")
    return f"{n_r + abs(kappa)}{SPECTROSCOPIC_LETTERS[l]}{int(2 * j)}/2"
