"""Nonrelativistic limit: Schrodinger hydrogen and its correction budget.

Covers the Schrodinger radial stack R_nl, the closed-form inverse-radius
moments <r^-3>, <r^-4>, <r^-5> with quadrature cross-checks, the table of
first-order expectation values that the noncommutative Hamiltonian needs,
the ordinary fine-structure shift, the theta-proportional hyperfine-like
shift, and the cutoff-regularized S-state channel.

Sign conventions carried over verbatim from the closed-form tables are kept
verbatim (and flagged where they disagree with independent routes):

* the quartic momentum line is tabulated with a negative sign although the
  operator is positive definite; fine_structure_shift consumes it as
  tabulated by default and flips it with p4_sign_corrected=True, which then
  reproduces the standard Dirac expansion to O(alpha^6);
* the S-state shift formula and its parent cutoff expectation value are
  mutually consistent, but assembling the same quantity line by line from
  the expectation table gives 1/3 of the parent value.  All three numbers
  are exposed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import (DEFAULT_CONSTANTS, DEFAULT_LAMBDA_QCD_EV, LAMB_ACCURACY_1S_HZ,
                        PhysicalConstants)
from .errors import DivergenceError, DomainError, ValidationError
from .shifts import ThetaBound, theta_bound
from .specfun import gauss_laguerre, laguerre_general

__all__ = [
    "SchrodingerState",
    "schrodinger_energy",
    "radial_R",
    "radial_R_prime",
    "r_inverse_moment",
    "r_inverse_moment_quadrature",
    "expectation_p2",
    "expectation_p4_physical",
    "pi_delta_expectation",
    "ExpectationTable",
    "expectation_table",
    "fine_structure_shift",
    "fine_structure_dirac_expansion",
    "HyperfineShift",
    "nc_hyperfine_shift",
    "s_state_cutoff_expectation",
    "s_state_shift",
    "s_state_shift_assembled",
    "s_state_bound",
]


@dataclass(frozen=True)
class SchrodingerState:
    """Hydrogen level (n, l, j = l +/- 1/2, m_j) in the nonrelativistic stack."""

    n: int
    l: int
    j: float
    m_j: float
    constants: PhysicalConstants = DEFAULT_CONSTANTS

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.l < self.n:
            raise ValidationError(f"l must satisfy 0 <= l < n, got l={self.l}, n={self.n}")
        if abs(self.j - (self.l + 0.5)) > 1e-9 and abs(self.j - (self.l - 0.5)) > 1e-9:
            raise ValidationError(f"j must be l +/- 1/2, got j={self.j}, l={self.l}")
        if self.j < 0:
            raise ValidationError("j must be positive")
        if abs(self.m_j) > self.j + 1e-12:
            raise ValidationError(f"|m_j| = {abs(self.m_j)} exceeds j = {self.j}")
        if abs(2 * self.m_j - round(2 * self.m_j)) > 1e-12:
            raise ValidationError(f"m_j must be a half-integer, got {self.m_j}")

    @property
    def branch(self) -> int:
        """+1 for j = l + 1/2, -1 for j = l - 1/2."""
        return 1 if abs(self.j - (self.l + 0.5)) < 1e-9 else -1

    @property
    def a0(self) -> float:
        return self.constants.bohr_radius


def schrodinger_energy(n: int, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Unperturbed level energy -alpha^2 m / (2 n^2) in eV."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    return -constants.alpha ** 2 * constants.m_e / (2.0 * n * n)


def _radial_norm(n: int, l: int, a0: float) -> float:
    # makes int R^2 r^2 dr = 1 with the modern lower-index Laguerre
    return math.sqrt((2.0 / (n * a0)) ** 3
                     * math.factorial(n - l - 1) / (2.0 * n * math.factorial(n + l)))


def radial_R(n: int, l: int, r, constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """Normalized Schrodinger radial function R_nl(r), r in eV^-1."""
    if not 0 <= l < n:
        raise DomainError(f"radial_R requires 0 <= l < n, got n={n}, l={l}")
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0.0):
        raise DomainError("radial_R requires r > 0")
    a0 = constants.bohr_radius
    x = 2.0 * r_arr / (n * a0)
    val = (_radial_norm(n, l, a0) * x ** l * np.exp(-x / 2.0)
           * laguerre_general(n - l - 1, 2 * l + 1, x))
    return val if np.ndim(r) else float(val)


def radial_R_prime(n: int, l: int, r, constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """dR_nl/dr, using d/dx L_q^a = -L_{q-1}^{a+1}."""
    r_arr = np.asarray(r, dtype=float)
    a0 = constants.bohr_radius
    scale = 2.0 / (n * a0)
    x = scale * r_arr
    q = n - l - 1
    lag = laguerre_general(q, 2 * l + 1, x)
    dlag = -laguerre_general(q - 1, 2 * l + 2, x) if q >= 1 else 0.0
    norm = _radial_norm(n, l, a0)
    poly = (l * x ** max(l - 1, 0) * (1.0 if l >= 1 else 0.0) - 0.5 * x ** l) * lag + x ** l * dlag
    val = norm * np.exp(-x / 2.0) * poly * scale
    return val if np.ndim(r) else float(val)


# ---------------------------------------------------------------------------
# Inverse-radius moments
# ---------------------------------------------------------------------------


def _moment_precondition(l: int, k: int):
    if k not in (3, 4, 5):
        raise DomainError(f"k must be 3, 4 or 5, got {k}")
    if k in (3, 4) and l < 1:
        raise DivergenceError(
            f"<r^-{k}> diverges for l = 0; use the cutoff S-state channel instead")
    if k == 5 and l < 2:
        raise DivergenceError(f"<r^-5> diverges for l = {l} (needs l >= 2)")


def r_inverse_moment(n: int, l: int, k: int,
                     constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Closed-form <r^-k> for k in {3, 4, 5}, in eV^k.

    Raises DivergenceError when the moment does not exist (l = 0 for any k,
    l = 1 for k = 5).
    """
    if not 0 <= l < n:
        raise DomainError(f"need 0 <= l < n, got n={n}, l={l}")
    _moment_precondition(l, k)
    a0 = constants.bohr_radius
    if k == 3:
        return 1.0 / (a0 ** 3 * n ** 3) / (l * (l + 0.5) * (l + 1.0))
    if k == 4:
        return (2.0 / (a0 ** 4 * n ** 3) / ((2.0 * l + 3.0) * (2.0 * l - 1.0) * (l + 0.5))
                * (-1.0 / n ** 2 + 3.0 / (l * (l + 1.0))))
    bracket = (-2.0 / (n ** 2 * l * (l + 1.0))
               + 5.0 / ((2.0 * l + 3.0) * (l - 0.5)) * (-1.0 / n ** 2 + 3.0 / (l * (l + 1.0))))
    return 1.0 / (3.0 * a0 ** 5 * n ** 3) / ((l + 2.0) * (l - 1.0) * (l + 0.5)) * bracket


def r_inverse_moment_quadrature(n: int, l: int, k: int,
                                constants: PhysicalConstants = DEFAULT_CONSTANTS,
                                order: int = 128, check: bool = True) -> float:
    """<r^-k> by Gauss-Laguerre quadrature of int R^2 r^(2-k) dr.

    With check=True the divergent cases raise DivergenceError up front
    (their x-space exponent 2l + 2 - k falls to -1 or below); with
    check=False the raw finite sample is returned, which lets callers probe
    the non-convergence directly.
    """
    if not 0 <= l < n:
        raise DomainError(f"need 0 <= l < n, got n={n}, l={l}")
    if check:
        _moment_precondition(l, k)
    a0 = constants.bohr_radius
    power = 2 * l + 2 - k
    rule = gauss_laguerre(order)
    x = rule.nodes
    lag = laguerre_general(n - l - 1, 2 * l + 1, x)
    with np.errstate(divide="ignore"):
        xs = np.where(x > 0, x, 1.0) ** power
    val = float(np.sum(rule.weights * xs * lag * lag))
    norm = _radial_norm(n, l, a0) ** 2
    return val * norm * (n * a0 / 2.0) ** (3 - k)


def expectation_p2(n: int, l: int, constants: PhysicalConstants = DEFAULT_CONSTANTS,
                   order: int = 160) -> float:
    """<p^2> by quadrature: int (R'^2 + l(l+1) R^2/r^2) r^2 dr, in eV^2.

    Everything is assembled in the scaled variable x = 2r/(n a0) so the
    exponential lives entirely in the Gauss-Laguerre weight.
    """
    a0 = constants.bohr_radius
    s = n * a0 / 2.0
    q = n - l - 1
    norm2 = _radial_norm(n, l, a0) ** 2
    rule = gauss_laguerre(order)
    x = rule.nodes
    lag = laguerre_general(q, 2 * l + 1, x)
    dlag = -laguerre_general(q - 1, 2 * l + 2, x) if q >= 1 else np.zeros_like(x)
    # R(r) = N x^l e^{-x/2} L(x) with x = r/s; dR/dr = (N/s) e^{-x/2} Q(x)
    poly_dr = (l * x ** max(l - 1, 0) * (1.0 if l >= 1 else 0.0)
               - 0.5 * x ** l) * lag + x ** l * dlag
    term_grad = float(np.sum(rule.weights * poly_dr * poly_dr * x * x))
    term_cent = l * (l + 1.0) * float(np.sum(rule.weights * x ** (2 * l) * lag * lag))
    return norm2 * s * (term_grad + term_cent)


def expectation_p4_physical(n: int, l: int,
                            constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Positive-definite <p^4> = (4 m^2 e^4 / n^3 a0^2) [1/(l+1/2) - 3/(4n)]."""
    m, alpha = constants.m_e, constants.alpha
    a0 = constants.bohr_radius
    return 4.0 * m * m * alpha * alpha / (n ** 3 * a0 ** 2) * (1.0 / (l + 0.5) - 3.0 / (4.0 * n))


def pi_delta_expectation(n: int, l: int,
                         constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """pi <delta^3(r)> = (e^2 m)^3 / n^3 for l = 0, and 0 otherwise (eV^3)."""
    if not 0 <= l < n:
        raise DomainError(f"need 0 <= l < n, got n={n}, l={l}")
    if l > 0:
        return 0.0
    return (constants.alpha * constants.m_e) ** 3 / n ** 3


# ---------------------------------------------------------------------------
# Expectation-value table for the perturbed Hamiltonian (l >= 1)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpectationTable:
    """All tabulated first-order expectation values for one (n, l, j, m_j).

    Entries proportional to <r^-5> diverge for l = 1; those fields are set
    to +/-inf (or 0 when their angular coefficient vanishes) and listed in
    `divergent`.  hbar = 1: angular momenta are pure numbers.
    """

    p4_printed: float
    p4_physical: float
    theta_L_over_r3: float
    theta_L_over_r4: float
    theta_L_over_r5: float
    sigma_theta_over_r4: float
    sigma_r_theta_r_over_r6: float
    sigma_L_over_r3: float
    thetaL_sigmaL_over_r5: float
    pi_delta3: float
    thetaL_p2_over_r3: float
    l_z: float
    s_z: float
    divergent: tuple[str, ...]


def _branch_factors(state: SchrodingerState):
    sgn = state.branch                    # +1 upper (j = l + 1/2), -1 lower
    lz_factor = 1.0 - sgn / (2.0 * state.l + 1.0)
    so_factor = state.j * (state.j + 1.0) - state.l * (state.l + 1.0) - 0.75
    return sgn, lz_factor, so_factor


def _bracket5(state: SchrodingerState) -> float:
    l, mj, sgn = state.l, state.m_j, state.branch
    first = (l + mj + 0.5) * (l - mj + 0.5) / (2.0 * l + 1.0) ** 2
    second = (l + mj + 0.5 + sgn) * (l - mj + 1.5) / (2.0 * (l + sgn) + 1.0) ** 2
    return first + second


def expectation_table(state: SchrodingerState, theta: float) -> ExpectationTable:
    """Evaluate every tabulated entry for an l >= 1 state at a given theta."""
    if state.l < 1:
        raise DomainError("the expectation table applies to l >= 1; "
                          "use the cutoff S-state channel for l = 0")
    if theta < 0.0:
        raise ValidationError(f"theta must be >= 0, got {theta}")
    c = state.constants
    n, l, mj = state.n, state.l, state.m_j
    sgn, lz_factor, so_factor = _branch_factors(state)
    r3 = r_inverse_moment(n, l, 3, c)
    r4 = r_inverse_moment(n, l, 4, c)
    divergent = []
    r5_exists = l >= 2
    if r5_exists:
        r5 = r_inverse_moment(n, l, 5, c)
    else:
        r5 = math.inf

    def r5_entry(coefficient: float, name: str) -> float:
        if coefficient == 0.0:
            return 0.0
        if not r5_exists:
            divergent.append(name)
            return math.copysign(math.inf, coefficient)
        return coefficient * r5

    p4_phys = expectation_p4_physical(n, l, c)
    tl3 = theta * mj * lz_factor * r3
    tl4 = theta * mj * lz_factor * r4
    tl5 = r5_entry(theta * mj * lz_factor, "theta_L_over_r5")
    sth4 = sgn * theta * 2.0 * mj / (2.0 * l + 1.0) * r4
    srtr = sgn * theta * 2.0 * mj / (2.0 * l + 1.0) * _bracket5(state) * r4
    sl3 = so_factor * r3
    tlsl5 = r5_entry(theta * mj * lz_factor * so_factor, "thetaL_sigmaL_over_r5")
    tlp2 = (2.0 * theta * c.m_e * c.alpha * mj * lz_factor
            * (r3 / (2.0 * c.bohr_radius * n * n) + r4))
    return ExpectationTable(
        p4_printed=-p4_phys,
        p4_physical=p4_phys,
        theta_L_over_r3=tl3,
        theta_L_over_r4=tl4,
        theta_L_over_r5=tl5,
        sigma_theta_over_r4=sth4,
        sigma_r_theta_r_over_r6=srtr,
        sigma_L_over_r3=sl3,
        thetaL_sigmaL_over_r5=tlsl5,
        pi_delta3=0.0,
        thetaL_p2_over_r3=tlp2,
        l_z=mj * lz_factor,
        s_z=sgn * mj / (2.0 * l + 1.0),
        divergent=tuple(divergent),
    )


# ---------------------------------------------------------------------------
# Fine structure and the theta-proportional hyperfine analog
# ---------------------------------------------------------------------------


def fine_structure_shift(n: int, l: int, j: float,
                         constants: PhysicalConstants = DEFAULT_CONSTANTS,
                         p4_sign_corrected: bool = False) -> float:
    """Ordinary fine-structure correction for l >= 1, in eV.

    By default the quartic-momentum term enters with the positive sign the
    closed-form table carries; with p4_sign_corrected=True it enters with
    the physical negative sign, and the total then matches the standard
    expansion -(alpha^4 m / 2 n^4)(n/(j+1/2) - 3/4) to O(alpha^6).
    """
    if l < 1:
        raise DomainError("fine_structure_shift applies to l >= 1")
    if abs(j - (l + 0.5)) > 1e-9 and abs(j - (l - 0.5)) > 1e-9:
        raise ValidationError(f"j must be l +/- 1/2, got j={j}, l={l}")
    m, alpha = constants.m_e, constants.alpha
    kinetic = m * alpha ** 4 / (2.0 * n ** 3) * (1.0 / (l + 0.5) - 3.0 / (4.0 * n))
    if p4_sign_corrected:
        kinetic = -kinetic
    so_factor = j * (j + 1.0) - l * (l + 1.0) - 0.75
    spin_orbit = alpha / (4.0 * m * m) * so_factor * r_inverse_moment(n, l, 3, constants)
    return kinetic + spin_orbit


def fine_structure_dirac_expansion(n: int, j: float,
                                   constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Standard O(alpha^4) fine-structure term of the exact spectrum."""
    m, alpha = constants.m_e, constants.alpha
    return -(alpha ** 4 * m / (2.0 * n ** 4)) * (n / (j + 0.5) - 0.75)


@dataclass(frozen=True)
class HyperfineShift:
    """theta-proportional first-order shift, split by moment order."""

    total: float
    r3_term: float
    r4_term: float
    r5_term: float
    r5_divergent: bool

    @property
    def finite_part(self) -> float:
        return self.r3_term + self.r4_term + (0.0 if self.r5_divergent else self.r5_term)


def nc_hyperfine_shift(state: SchrodingerState, theta: float) -> HyperfineShift:
    """The hyperfine-analog shift for l >= 1, assembled as tabulated.

    Linear in theta.  For l = 1 the <r^-5> moment does not exist: its term
    is flagged divergent unless its angular coefficient vanishes (which
    happens for j = l - 1/2, where the bracket is exactly zero and the
    total stays finite).
    """
    if state.l < 1:
        raise DomainError("nc_hyperfine_shift applies to l >= 1; "
                          "use s_state_shift for l = 0")
    if theta < 0.0:
        raise ValidationError(f"theta must be >= 0, got {theta}")
    c = state.constants
    m, alpha = c.m_e, c.alpha
    n, l, mj = state.n, state.l, state.m_j
    sgn, lz_factor, _ = _branch_factors(state)
    prefactor = 0.5 * theta * alpha * mj

    r3 = r_inverse_moment(n, l, 3, c)
    r4 = r_inverse_moment(n, l, 4, c)
    c3 = (-1.0 + alpha * alpha / (4.0 * n * n)) * lz_factor
    c4 = -(alpha / (2.0 * m)) * ((5.0 + sgn * 6.0 / (2.0 * l + 1.0))
                                 + sgn * 4.0 / (2.0 * l + 1.0) * _bracket5(state))
    c5 = (3.0 / (4.0 * m * m)) * lz_factor * (state.j * (state.j + 1.0)
                                              - l * (l + 1.0) + 1.25)
    r3_term = prefactor * c3 * r3
    r4_term = prefactor * c4 * r4
    if c5 == 0.0 or prefactor == 0.0:
        r5_term, divergent = 0.0, False
    elif l >= 2:
        r5_term, divergent = prefactor * c5 * r_inverse_moment(n, l, 5, c), False
    else:
        r5_term, divergent = math.copysign(math.inf, prefactor * c5), True
    total = r3_term + r4_term + r5_term
    return HyperfineShift(total=total, r3_term=r3_term, r4_term=r4_term,
                          r5_term=r5_term, r5_divergent=divergent)


# ---------------------------------------------------------------------------
# S states: cutoff-regularized channel
# ---------------------------------------------------------------------------


def s_state_cutoff_expectation(theta: float, lambda_qcd: float = DEFAULT_LAMBDA_QCD_EV,
                               constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Cutoff-regularized 1S expectation of the sigma/theta contact pair,
    (4 theta / 3) alpha^3 m^3 Lambda, in eV^2."""
    _check_s_inputs(theta, lambda_qcd)
    alpha, m = constants.alpha, constants.m_e
    return (4.0 * theta / 3.0) * alpha ** 3 * m ** 3 * lambda_qcd


def s_state_shift(theta: float, lambda_qcd: float = DEFAULT_LAMBDA_QCD_EV,
                  constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """1S level shift theta alpha^5 m^2 Lambda / 6 in eV.

    Consistent with (e^4 / 8m) times s_state_cutoff_expectation.  Linear in
    both theta and the cutoff.
    """
    _check_s_inputs(theta, lambda_qcd)
    alpha, m = constants.alpha, constants.m_e
    return theta * alpha ** 5 * m * m * lambda_qcd / 6.0


def s_state_shift_assembled(theta: float, lambda_qcd: float = DEFAULT_LAMBDA_QCD_EV,
                            constants: PhysicalConstants = DEFAULT_CONSTANTS,
                            m_j: float = 0.5) -> float:
    """The same shift assembled line by line from the expectation table.

    Uses the cutoff moment <r^-4>_1S = 4 alpha^3 m^3 Lambda and the two
    l = 0 table lines; the result is theta alpha^5 m^2 Lambda / 18 at
    m_j = 1/2, one third of s_state_shift.  Exposed so the discrepancy
    between the two assemblies stays visible.
    """
    _check_s_inputs(theta, lambda_qcd)
    alpha, m = constants.alpha, constants.m_e
    r4_cut = 4.0 * alpha ** 3 * m ** 3 * lambda_qcd
    l = 0
    bracket = ((l + m_j + 0.5) * (l - m_j + 0.5) / (2.0 * l + 1.0) ** 2
               + (l + m_j + 1.5) * (l - m_j + 1.5) / (2.0 * (l + 1.0) + 1.0) ** 2)
    combo = theta * 2.0 * m_j * r4_cut * (1.0 - 4.0 * bracket)
    return (alpha * alpha / (8.0 * m)) * combo


def s_state_bound(accuracy_hz: float = LAMB_ACCURACY_1S_HZ,
                  lambda_qcd: float = DEFAULT_LAMBDA_QCD_EV,
                  constants: PhysicalConstants = DEFAULT_CONSTANTS,
                  convention: str = "two_pi_hbar") -> ThetaBound:
    """Bound on theta from the 1S accuracy: theta_max = E(acc)/(alpha^5 m^2 Lambda/6)."""
    if accuracy_hz <= 0.0:
        raise DomainError("accuracy must be positive")
    if lambda_qcd <= 0.0:
        raise DomainError("lambda_qcd must be positive")
    alpha, m = constants.alpha, constants.m_e
    coefficient = alpha ** 5 * m * m * lambda_qcd / 6.0
    return theta_bound(coefficient, accuracy_hz, constants, convention)


def _check_s_inputs(theta: float, lambda_qcd: float):
    if theta < 0.0:
        raise ValidationError(f"theta must be >= 0, got {theta}")
    if lambda_qcd <= 0.0:
        raise ValidationError(f"lambda_qcd must be positive, got {lambda_qcd}")
