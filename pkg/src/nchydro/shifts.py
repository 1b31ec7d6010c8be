"""First-order corrections from space-space noncommutativity.

The perturbation splits into a scalar piece -(e^2 / 2 r^3) theta.L and a
vector piece (e^4 / 4) theta.(alpha x r / r^4).  With theta along z the
scalar piece is diagonal in M and factorizes into a radial integral times
an angular block; the vector piece only connects opposite-parity partners
(the 2S-2P channel).

Every radial quantity is computed twice:

* "closed_form" evaluates the tabulated closed expressions verbatim.  For
  l >= 1 levels these tables take kappa as +(j + 1/2); the l = 0 column
  keeps the signed value.  Several of these expressions are internally
  inconsistent with their own defining integrals, which is exactly why the
  second route exists.
* "quadrature" integrates the defining integral int (f^2 +/- g^2)/r dr
  directly.  For |kappa| = 1 that integral has a nonintegrable x^(2nu-3)
  endpoint (2nu - 3 < -1) and mathematically diverges; the adaptive driver
  then reports the order-capped sampled value with converged=False and the
  report is flagged rather than silently trusted.

Reports carry both values plus flags so downstream consumers can see any
disagreement instead of having it averaged away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import (DEFAULT_CONSTANTS, LAMB_ACCURACY_2P_HZ, PhysicalConstants,
                        ev2_to_gev_scale, hz_to_ev)
from .dirac import (RelativisticState, kappa_to_lj, make_state, parse_level_label,
                    radial_polynomials)
from .errors import DomainError, SingularityError, ValidationError
from .specfun import (IntegrationResult, adaptive_sampled_endpoint, adaptive_weighted,
                      sphere_integrate, sphere_rule, spinor_harmonic, spinor_orbital_m)

__all__ = [
    "AngularBlock",
    "ThetaBound",
    "ShiftReport",
    "Level",
    "lz_expectation",
    "lz_block",
    "lz_block_numeric",
    "sigma_cross_block",
    "radial_integral_closed",
    "radial_integral_quadrature",
    "cross_radial_integral_closed",
    "cross_radial_integral_quadrature",
    "level_shift",
    "transition_element_2s2p",
    "selection_allowed",
    "theta_bound",
    "perturbation_kernels",
    "RADIAL_AGREEMENT_TOL",
]

RADIAL_AGREEMENT_TOL = 1e-8


# ---------------------------------------------------------------------------
# Levels and angular blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Level:
    """A full j-multiplet of one fine-structure level."""

    label: str
    n_r: int
    kappa: int
    j: float
    l: int
    states: tuple[RelativisticState, ...]

    @classmethod
    def from_label(cls, label: str,
                   constants: PhysicalConstants = DEFAULT_CONSTANTS) -> "Level":
        n_r, kappa = parse_level_label(label)
        return cls.from_quantum_numbers(n_r, kappa, constants)

    @classmethod
    def from_quantum_numbers(cls, n_r: int, kappa: int,
                             constants: PhysicalConstants = DEFAULT_CONSTANTS) -> "Level":
        l, j = kappa_to_lj(kappa)
        ms = m_values(j)
        states = tuple(make_state(n_r, kappa, m, constants) for m in ms)
        return cls(label=states[0].label, n_r=n_r, kappa=kappa, j=j, l=l, states=states)

    @property
    def m_basis(self) -> tuple[float, ...]:
        return tuple(s.M for s in self.states)

    @property
    def constants(self) -> PhysicalConstants:
        return self.states[0].constants


def m_values(j: float) -> tuple[float, ...]:
    """All magnetic quantum numbers -j ... +j in increasing order."""
    count = int(round(2 * j)) + 1
    return tuple(-j + k for k in range(count))


@dataclass(frozen=True)
class AngularBlock:
    """Hermitian angular matrix over the M basis of a level, in units of theta."""

    label: str
    basis: tuple[float, ...]
    matrix: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.sort(np.linalg.eigvalsh(self.matrix))

    @property
    def is_diagonal(self) -> bool:
        off = self.matrix - np.diag(np.diag(self.matrix))
        return bool(np.max(np.abs(off)) < 1e-12)


def lz_expectation(j: float, l: int, M: float) -> float:
    """<L_z> = M (1 -/+ 1/(2l+1)), upper sign for j = l + 1/2."""
    if abs(j - (l + 0.5)) < 1e-9:
        return M * (1.0 - 1.0 / (2.0 * l + 1.0))
    if abs(j - (l - 0.5)) < 1e-9:
        return M * (1.0 + 1.0 / (2.0 * l + 1.0))
    raise ValidationError(f"(j, l) = ({j}, {l}) is not a fine-structure pair")


def lz_block(j: float, l: int, label: str = "") -> AngularBlock:
    """Closed-form theta.L block: diagonal in M with entries <L_z>."""
    basis = m_values(j)
    diag = [lz_expectation(j, l, m) for m in basis]
    return AngularBlock(label=label or f"Lz(j={j}, l={l})", basis=basis,
                        matrix=np.diag(np.asarray(diag, dtype=complex)))


def lz_block_numeric(j: float, l: int, rule=None, label: str = "") -> AngularBlock:
    """theta.L block from 2-D sphere quadrature over spinor harmonics.

    L_z acts on each spinor component through its definite orbital magnetic
    number; only the sphere integrals are numerical.
    """
    if rule is None:
        rule = sphere_rule()
    th, ph, _ = rule
    basis = m_values(j)
    dim = len(basis)
    mat = np.zeros((dim, dim), dtype=complex)
    spinors = [spinor_harmonic(j, l, m, th, ph) for m in basis]
    for b, mb in enumerate(basis):
        m_up, m_dn = spinor_orbital_m(mb)
        acted = np.empty_like(spinors[b])
        acted[0] = m_up * spinors[b][0]
        acted[1] = m_dn * spinors[b][1]
        for a in range(dim):
            mat[a, b] = sphere_integrate(
                np.conj(spinors[a][0]) * acted[0] + np.conj(spinors[a][1]) * acted[1], rule)
    return AngularBlock(label=label or f"Lz numeric(j={j}, l={l})", basis=basis, matrix=mat)


def sigma_cross_block(bra, ket, rule=None, label: str = "") -> AngularBlock:
    """Angular block of sigma.(z-hat x r-hat) between two levels sharing j.

    Computed by sphere quadrature.  The operator connects opposite-parity
    partners; within a level (equal l) the block vanishes identically.  The
    overall phase i is included so the matrix comes out real for allowed
    transitions, matching the convention in which the small bi-spinor
    component carries an explicit i.
    """
    j_a, l_a = bra.j, bra.l
    j_b, l_b = ket.j, ket.l
    if abs(j_a - j_b) > 1e-9:
        raise ValidationError(f"states must share j, got {j_a} and {j_b}")
    if rule is None:
        rule = sphere_rule()
    th, ph, _ = rule
    sin_th = np.sin(th)
    w_top = -1j * np.exp(-1j * ph) * sin_th  # acting on the lower component
    w_bot = 1j * np.exp(1j * ph) * sin_th    # acting on the upper component
    basis = m_values(j_a)
    dim = len(basis)
    mat = np.zeros((dim, dim), dtype=complex)
    bras = [spinor_harmonic(j_a, l_a, m, th, ph) for m in basis]
    kets = [spinor_harmonic(j_b, l_b, m, th, ph) for m in basis]
    for a in range(dim):
        for b in range(dim):
            val = sphere_integrate(
                np.conj(bras[a][0]) * w_top * kets[b][1]
                + np.conj(bras[a][1]) * w_bot * kets[b][0], rule)
            mat[a, b] = 1j * val
    return AngularBlock(label=label or f"sigma-cross(l={l_a}->{l_b}, j={j_a})",
                        basis=basis, matrix=mat)


# ---------------------------------------------------------------------------
# Radial integrals
# ---------------------------------------------------------------------------


def _closed_form_kappa(kappa: int, l: int) -> int:
    # The tabulated closed forms take kappa as +(j + 1/2) for every l >= 1
    # level; the l = 0 column keeps the signed value.
    return abs(kappa) if l >= 1 else kappa


def radial_integral_closed(state: RelativisticState, kind: str = "sum",
                           kappa_override: int | None = None) -> float:
    """Closed-form value of int (f^2 +/- g^2)/r dr in eV^3.

    kind="sum" is the (f^2 + g^2) integral, kind="diff" the (f^2 - g^2) one.
    These expressions are evaluated verbatim; use the quadrature route for a
    definition-level cross-check (the two are known to disagree for some
    levels and the reports flag that).
    """
    c = state.constants
    m, nu, E, a = c.m_e, state.nu, state.energy, state.a
    kappa = kappa_override if kappa_override is not None else _closed_form_kappa(state.kappa, state.l)
    if abs(nu - 0.5) < 1e-12 or abs(nu - 1.0) < 1e-12:
        raise DomainError(f"closed form has a vanishing denominator at nu = {nu}")
    denom_common = nu * (4.0 * nu * nu - 1.0) * (nu * nu - 1.0)
    if kind == "sum":
        num = 3.0 * E * kappa * (E * kappa - m) - (nu * nu - 1.0)
        return (m * a) ** 3 * num / (m * m * denom_common)
    if kind == "diff":
        num = m + 2.0 * m * nu * nu - 3.0 * E * kappa
        return 2.0 * (m * a) ** 3 * E / (m * m) * num / denom_common
    raise ValidationError(f"kind must be 'sum' or 'diff', got {kind!r}")


def radial_integral_quadrature(state: RelativisticState, kind: str = "sum",
                               tol: float = 1e-10, start: int = 80,
                               max_order: int = 1280) -> IntegrationResult:
    """Direct quadrature of int (f^2 +/- g^2)/r dr in eV^3.

    In the Gauss-Laguerre variable the integrand is x^(2nu-3) e^-x times a
    polynomial.  For nu > 1 the power is folded into a generalized weight
    and the rule is exact; for nu < 1 (|kappa| = 1) the integral diverges at
    the origin and the order-capped sampled value is returned with
    converged=False.
    """
    if kind not in ("sum", "diff"):
        raise ValidationError(f"kind must be 'sum' or 'diff', got {kind!r}")
    sign = 1.0 if kind == "sum" else -1.0
    nu = state.nu
    norm = norm_x_integral(state)

    def poly(x):
        pf, pg = radial_polynomials(state, x)
        return pf * pf + sign * pg * pg

    beta = 2.0 * nu - 3.0
    if beta > -1.0 + 1e-9:
        res = adaptive_weighted(poly, beta=beta, tol=tol, start=start, max_order=max_order)
    else:
        def singular(x):
            return np.exp(beta * np.log(x)) * poly(x)

        res = adaptive_sampled_endpoint(singular, tol=tol, start=start, max_order=max_order)
    scale = (2.0 * state.lam) ** 3 / norm
    return IntegrationResult(value=res.value * scale, order=res.order,
                             drift=res.drift, converged=res.converged)


def norm_x_integral(state: RelativisticState) -> float:
    """x-space norm integral (exact generalized-weight quadrature)."""
    from .dirac import norm_integral_x

    return norm_integral_x(state)


def _cross_states(constants: PhysicalConstants):
    s2s = make_state(1, -1, 0.5, constants)
    s2p = make_state(1, +1, 0.5, constants)
    return s2s, s2p


def cross_radial_integral_closed(constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Closed-form 2S-2P cross integral: the 'diff' expression with kappa = 1
    evaluated at the shared n = 2, |kappa| = 1 energy."""
    alpha, m = constants.alpha, constants.m_e
    nu1 = math.sqrt(1.0 - alpha * alpha)
    e1 = m / math.sqrt(1.0 + (alpha / (1.0 + nu1)) ** 2)
    a1 = math.sqrt((m - e1) * (m + e1)) / m
    num = m + 2.0 * m * nu1 * nu1 - 3.0 * e1
    den = nu1 * (4.0 * nu1 * nu1 - 1.0) * (nu1 * nu1 - 1.0)
    return 2.0 * (m * a1) ** 3 * e1 / (m * m) * num / den


def cross_radial_integral_quadrature(constants: PhysicalConstants = DEFAULT_CONSTANTS,
                                     tol: float = 1e-10, start: int = 80,
                                     max_order: int = 1280) -> IntegrationResult:
    """Direct quadrature of int (f_2S f_2P - g_2S g_2P)/r dr in eV^3.

    The two states are degenerate so they share the same x variable.  The
    sign convention of each state's normalization constant is positive,
    which fixes the (otherwise arbitrary) overall sign of this element.
    """
    s2s, s2p = _cross_states(constants)
    nu = s2s.nu
    norm_s = norm_x_integral(s2s)
    norm_p = norm_x_integral(s2p)

    def integrand(x):
        pfs, pgs = radial_polynomials(s2s, x)
        pfp, pgp = radial_polynomials(s2p, x)
        return np.exp((2.0 * nu - 3.0) * np.log(x)) * (pfs * pfp - pgs * pgp)

    res = adaptive_sampled_endpoint(integrand, tol=tol, start=start, max_order=max_order)
    scale = (2.0 * s2s.lam) ** 3 / math.sqrt(norm_s * norm_p)
    return IntegrationResult(value=res.value * scale, order=res.order,
                             drift=res.drift, converged=res.converged)


# ---------------------------------------------------------------------------
# Shifts, bounds, transition element
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaBound:
    """Upper bound on theta implied by one splitting coefficient."""

    theta_max_ev2: float
    gev_scale: float          # the X of "theta <= (X GeV)^-2"
    coefficient_ev3: float
    accuracy_hz: float
    convention: str = "two_pi_hbar"


def theta_bound(shift_coefficient_ev3: float, accuracy_hz: float,
                constants: PhysicalConstants = DEFAULT_CONSTANTS,
                convention: str = "two_pi_hbar") -> ThetaBound:
    """Largest theta compatible with |coefficient| theta <= E(accuracy).

    The accuracy is an ordinary frequency; its energy equivalent is one
    Planck quantum per cycle (see hz_to_ev).  Doubling the accuracy doubles
    the bound.
    """
    if shift_coefficient_ev3 <= 0.0:
        raise DomainError("shift coefficient must be positive")
    if accuracy_hz <= 0.0:
        raise DomainError("accuracy must be positive")
    e_acc = hz_to_ev(accuracy_hz, constants, convention)
    theta_max = e_acc / shift_coefficient_ev3
    return ThetaBound(theta_max_ev2=theta_max, gev_scale=ev2_to_gev_scale(theta_max),
                      coefficient_ev3=shift_coefficient_ev3, accuracy_hz=accuracy_hz,
                      convention=convention)


@dataclass(frozen=True)
class ShiftReport:
    """First-order shift data for one level at a given theta."""

    label: str
    theta: float
    eigenvalues: tuple[float, ...]          # angular eigenvalues per unit theta
    rho1: float                              # closed-form sum integral, eV^3
    rho2: float                              # closed-form diff integral, eV^3
    rho1_quadrature: float
    rho2_quadrature: float
    quadrature_converged: bool
    coefficients: tuple[float, ...]          # closed-form route, eV^3 per theta
    coefficients_quadrature: tuple[float, ...]
    shifts_eV: tuple[float, ...]             # closed-form coefficients times theta
    theta_bound: ThetaBound | None
    flagged: bool
    notes: tuple[str, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        d = {
            "label": self.label,
            "theta_eV2": self.theta,
            "eigenvalues": list(self.eigenvalues),
            "rho1_closed_eV3": self.rho1,
            "rho2_closed_eV3": self.rho2,
            "rho1_quadrature_eV3": self.rho1_quadrature,
            "rho2_quadrature_eV3": self.rho2_quadrature,
            "quadrature_converged": self.quadrature_converged,
            "coefficients_eV3": list(self.coefficients),
            "coefficients_quadrature_eV3": list(self.coefficients_quadrature),
            "shifts_eV": list(self.shifts_eV),
            "flagged": self.flagged,
            "notes": list(self.notes),
        }
        if self.theta_bound is not None:
            d["theta_bound_eV2"] = self.theta_bound.theta_max_ev2
            d["theta_bound_gev_scale"] = self.theta_bound.gev_scale
        return d


def level_shift(level, theta: float,
                constants: PhysicalConstants = DEFAULT_CONSTANTS,
                accuracy_hz: float = LAMB_ACCURACY_2P_HZ,
                convention: str = "two_pi_hbar",
                quad_start: int = 80) -> ShiftReport:
    """First-order shifts Delta E = -(e^2/2) rho1 lambda_k theta for a level.

    `level` is a Level or a spectroscopic label.  Both the closed-form and
    the quadrature radial integrals feed coefficient lists; the closed-form
    ones are the headline numbers and the report is flagged whenever the
    two routes disagree beyond RADIAL_AGREEMENT_TOL (or the quadrature did
    not converge).  The within-level vector-piece block vanishes by parity
    and contributes nothing here.
    """
    if theta < 0.0:
        raise ValidationError(f"theta must be >= 0, got {theta}")
    if isinstance(level, str):
        level = Level.from_label(level, constants)
    state0 = level.states[0]
    alpha = constants.alpha
    block = lz_block(level.j, level.l, label=level.label)
    eigenvalues = tuple(float(np.real(v)) for v in np.diag(block.matrix))

    rho1_c = radial_integral_closed(state0, "sum")
    rho2_c = radial_integral_closed(state0, "diff")
    rho1_q = radial_integral_quadrature(state0, "sum", start=quad_start)
    rho2_q = radial_integral_quadrature(state0, "diff", start=quad_start)

    coeff_closed = tuple(-(alpha / 2.0) * rho1_c * lam for lam in eigenvalues)
    coeff_quad = tuple(-(alpha / 2.0) * rho1_q.value * lam for lam in eigenvalues)
    shifts = tuple(c * theta for c in coeff_closed)

    notes = []
    rel = abs(rho1_c - rho1_q.value) / max(abs(rho1_q.value), 1e-300)
    flagged = rel > RADIAL_AGREEMENT_TOL or not rho1_q.converged
    if not rho1_q.converged:
        notes.append("defining radial integral diverges at the origin for |kappa| = 1; "
                     "quadrature value is the order-capped sample")
    if rel > RADIAL_AGREEMENT_TOL:
        notes.append(f"closed-form and quadrature radial integrals disagree "
                     f"(relative difference {rel:.3e}); both are reported")

    bound = None
    max_coeff = max((abs(c) for c in coeff_closed), default=0.0)
    if max_coeff > 0.0:
        bound = theta_bound(max_coeff, accuracy_hz, constants, convention)

    return ShiftReport(label=level.label, theta=theta, eigenvalues=eigenvalues,
                       rho1=rho1_c, rho2=rho2_c,
                       rho1_quadrature=rho1_q.value, rho2_quadrature=rho2_q.value,
                       quadrature_converged=rho1_q.converged and rho2_q.converged,
                       coefficients=coeff_closed, coefficients_quadrature=coeff_quad,
                       shifts_eV=shifts, theta_bound=bound, flagged=flagged,
                       notes=tuple(notes))


def transition_element_2s2p(theta: float,
                            constants: PhysicalConstants = DEFAULT_CONSTANTS,
                            method: str = "closed_form") -> float:
    """Magnitude of the 2S1/2 <-> 2P1/2 vector-channel element in eV.

    Evaluates (e^4/4) times the 2/3 entry of the angular cross block times
    the radial cross integral (by the requested method).  Linear in theta.
    """
    if theta < 0.0:
        raise ValidationError(f"theta must be >= 0, got {theta}")
    if method == "closed_form":
        rho = cross_radial_integral_closed(constants)
    elif method == "quadrature":
        rho = cross_radial_integral_quadrature(constants).value
    else:
        raise ValidationError(f"method must be 'closed_form' or 'quadrature', got {method!r}")
    alpha = constants.alpha
    return (alpha * alpha / 4.0) * (2.0 / 3.0) * abs(rho) * theta


def selection_allowed(state_a: RelativisticState, state_b: RelativisticState,
                      kind: str) -> bool:
    """Selection rules for the two perturbation channels.

    within_level: Delta l = 0 and Delta M in {0, +-1} (theta.L channel);
    cross_level:  Delta l = 1 and Delta M in {0, +-1} (vector channel).
    """
    delta_l = abs(state_a.l - state_b.l)
    delta_m = abs(state_a.M - state_b.M)
    if kind == "within_level":
        return delta_l == 0 and delta_m <= 1.0 + 1e-12
    if kind == "cross_level":
        return delta_l == 1 and delta_m <= 1.0 + 1e-12
    raise ValidationError(f"kind must be 'within_level' or 'cross_level', got {kind!r}")


def perturbation_kernels(state: RelativisticState, theta: float, position):
    """Point evaluation of the two perturbation kernels.

    Returns (scalar_term, vector_term): the scalar kernel
    -(e^2 / 2 r^3) theta <L_z> for the state's effective L_z eigenvalue, and
    the vector kernel (e^4/4)(r x theta)/r^4 that multiplies the alpha
    matrices.  The vector is perpendicular to both r and the theta axis.
    """
    pos = np.asarray(position, dtype=float)
    if pos.shape != (3,):
        raise DomainError(f"position must be a 3-vector, got shape {pos.shape}")
    r = float(np.linalg.norm(pos))
    if r == 0.0:
        raise SingularityError("perturbation kernels are singular at r = 0")
    if theta < 0.0:
        raise ValidationError(f"theta must be >= 0, got {theta}")
    alpha = state.constants.alpha
    m_eff = lz_expectation(state.j, state.l, state.M)
    term1 = -(alpha / (2.0 * r ** 3)) * theta * m_eff
    theta_vec = np.array([0.0, 0.0, theta])
    term2 = (alpha * alpha / 4.0) * np.cross(pos, theta_vec) / r ** 4
    return term1, term2
