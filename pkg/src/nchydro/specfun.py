"""Special functions and quadrature kernel.

Everything here is a pure function of its arguments: gamma, generalized
Laguerre polynomials, complex spherical harmonics with the Condon-Shortley
phase, two-component spinor spherical harmonics, and Gauss-Laguerre
quadrature (plain and generalized weight x^beta e^-x) with an adaptive
driver.  Units never enter; callers scale their own variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, ValidationError

__all__ = [
    "QuadratureRule",
    "IntegrationResult",
    "gamma_real",
    "laguerre_general",
    "spherical_harmonic",
    "spinor_harmonic",
    "spinor_orbital_m",
    "gauss_laguerre",
    "integrate_weighted",
    "integrate_sampled_endpoint",
    "adaptive_weighted",
    "adaptive_sampled_endpoint",
    "sphere_rule",
    "sphere_integrate",
]

# Lanczos approximation, g = 7, 9 coefficients.  Good to ~1e-14 relative
# for positive real arguments, which is all the bound-state formulas need.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_real(x: float) -> float:
    """Gamma function for real x > 0.

    Raises DomainError for x <= 0; the reflection branch below 0.5 is kept
    only so arguments slightly under 1/2 do not lose accuracy.
    """
    if not x > 0.0:
        raise DomainError(f"gamma_real requires x > 0, got {x}")
    if x < 0.5:
        # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.pi / (math.sin(math.pi * x) * gamma_real(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def laguerre_general(n: int, a: float, x):
    """Generalized Laguerre polynomial L_n^a(x) by forward recurrence.

    The recurrence (k+1) L_{k+1} = (2k+1+a-x) L_k - (k+a) L_{k-1} is stable
    for the moderate degrees and x ranges bound states produce.  n = -1 is
    accepted and returns 0 (empty-sum convention used by radial solutions).
    Accepts scalar or ndarray x.
    """
    if n == -1:
        return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
    if n < -1:
        raise DomainError(f"laguerre_general requires n >= -1, got {n}")
    if a <= -1.0:
        raise DomainError(f"laguerre_general requires a > -1, got {a}")
    xa = np.asarray(x, dtype=float)
    ones = np.ones_like(xa)
    if n == 0:
        result = ones
    elif n == 1:
        result = 1.0 + a - xa
    else:
        prev, cur = ones, 1.0 + a - xa
        for k in range(1, n):
            prev, cur = cur, ((2.0 * k + 1.0 + a - xa) * cur - (k + a) * prev) / (k + 1.0)
        result = cur
    return result if np.ndim(x) else float(result)


def _norm_legendre(l: int, m: int, cos_theta, sin_theta):
    """Fully normalized associated Legendre P~_l^m for m >= 0.

    Normalization includes sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) and the
    Condon-Shortley phase, so Y_lm = P~_l^m(cos theta) e^{i m phi}.
    Stable seeded recurrence (sectoral seed, upward in l).
    """
    p_mm = np.full_like(cos_theta, 1.0 / math.sqrt(4.0 * math.pi))
    for k in range(1, m + 1):
        p_mm = -math.sqrt((2.0 * k + 1.0) / (2.0 * k)) * sin_theta * p_mm
    if l == m:
        return p_mm
    p_next = math.sqrt(2.0 * m + 3.0) * cos_theta * p_mm
    if l == m + 1:
        return p_next
    for ll in range(m + 2, l + 1):
        a = math.sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m))
        b = math.sqrt(((ll - 1.0) ** 2 - m * m) / (4.0 * (ll - 1.0) ** 2 - 1.0))
        p_mm, p_next = p_next, a * (cos_theta * p_next - b * p_mm)
    return p_next


def spherical_harmonic(l: int, m: int, theta, phi):
    """Orthonormal complex spherical harmonic Y_lm(theta, phi).

    Condon-Shortley phase; integral of |Y_lm|^2 over the sphere is 1.
    theta and phi may be scalars or broadcastable arrays.
    """
    if l < 0:
        raise DomainError(f"spherical_harmonic requires l >= 0, got l={l}")
    if abs(m) > l:
        raise DomainError(f"spherical_harmonic requires |m| <= l, got l={l}, m={m}")
    th = np.asarray(theta, dtype=float)
    ph = np.asarray(phi, dtype=float)
    am = abs(m)
    p = _norm_legendre(l, am, np.cos(th), np.sin(th))
    y = p * np.exp(1j * am * ph)
    if m < 0:
        y = (-1) ** am * np.conj(y)
    return y if (np.ndim(theta) or np.ndim(phi)) else complex(y)


def _half_integer(value: float) -> bool:
    return abs(2.0 * value - round(2.0 * value)) < 1e-12


def spinor_clebsch(j: float, l: int, M: float) -> tuple[float, float]:
    """Coefficients (c_up, c_down) coupling Y_{l,M-1/2}, Y_{l,M+1/2} to (j, M)."""
    if not _half_integer(j) or not _half_integer(M) or _half_integer(j + 0.25):
        raise ValidationError(f"j and M must be half-integers, got j={j}, M={M}")
    if abs(M) > j:
        raise ValidationError(f"|M| must not exceed j, got j={j}, M={M}")
    if abs(l - (j - 0.5)) < 1e-9:  # j = l + 1/2
        c_up = math.sqrt((l + M + 0.5) / (2.0 * l + 1.0))
        c_dn = math.sqrt((l - M + 0.5) / (2.0 * l + 1.0))
    elif abs(l - (j + 0.5)) < 1e-9:  # j = l - 1/2
        c_up = -math.sqrt((l - M + 0.5) / (2.0 * l + 1.0))
        c_dn = math.sqrt((l + M + 0.5) / (2.0 * l + 1.0))
    else:
        raise ValidationError(f"(j, l) must satisfy l = j -/+ 1/2, got j={j}, l={l}")
    return c_up, c_dn


def spinor_harmonic(j: float, l: int, M: float, theta, phi):
    """Two-component spinor spherical harmonic for total momentum (j, M).

    Upper component carries Y_{l, M-1/2}, lower Y_{l, M+1/2}, weighted by
    the two-branch coupling coefficients.  Normalized over the sphere.
    Returns an array of shape (2,) + broadcast shape of theta/phi.
    """
    c_up, c_dn = spinor_clebsch(j, l, M)
    th = np.asarray(theta, dtype=float)
    ph = np.asarray(phi, dtype=float)
    shape = np.broadcast(th, ph).shape
    out = np.zeros((2,) + shape, dtype=complex)
    m_up, m_dn = M - 0.5, M + 0.5
    if abs(m_up) <= l and c_up != 0.0:
        out[0] = c_up * spherical_harmonic(l, int(round(m_up)), th, ph)
    if abs(m_dn) <= l and c_dn != 0.0:
        out[1] = c_dn * spherical_harmonic(l, int(round(m_dn)), th, ph)
    return out


def spinor_orbital_m(M: float) -> tuple[float, float]:
    """Orbital magnetic numbers (M-1/2, M+1/2) carried by the two components."""
    return M - 0.5, M + 0.5


# ---------------------------------------------------------------------------
# Gauss-Laguerre quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for integration against x^beta e^-x on (0, inf)."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: str = "gauss_laguerre"  # or "adaptive" when produced by the driver
    beta: float = 0.0

    def integrate(self, func) -> float:
        return float(np.sum(self.weights * func(self.nodes)))


@lru_cache(maxsize=512)
def _laguerre_rule(n: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    # Golub-Welsch nodes from the symmetric Jacobi matrix; weights from the
    # Christoffel sum 1/sum_k p~_k(x)^2 evaluated in exponentially scaled
    # form q_k = p~_k(x) x^{beta/2} e^{-x/2} so nothing overflows.
    i = np.arange(n, dtype=float)
    diag = 2.0 * i + 1.0 + beta
    k = np.arange(1, n, dtype=float)
    off = np.sqrt(k * (k + beta))
    jmat = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    x = np.linalg.eigvalsh(jmat)
    mu0 = gamma_real(1.0 + beta)
    with np.errstate(under="ignore"):
        log_w = -x + beta * np.log(x)
        q = np.exp(0.5 * log_w) / math.sqrt(mu0)
        s = q * q
        q_prev = np.zeros_like(x)
        for kk in range(1, n):
            b_k = math.sqrt(kk * (kk + beta))
            b_km = math.sqrt((kk - 1.0) * (kk - 1.0 + beta)) if kk >= 2 else 0.0
            q_prev, q = q, ((x - (2.0 * (kk - 1.0) + 1.0 + beta)) * q - b_km * q_prev) / b_k
            s += q * q
        w = np.zeros_like(x)
        alive = s > 0.0  # far-tail nodes underflow; their true weights are ~0
        w[alive] = np.exp(log_w[alive]) / s[alive]
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_laguerre(n: int, beta: float = 0.0) -> QuadratureRule:
    """n-point Gauss rule for the weight x^beta e^-x on (0, inf).

    beta = 0 is the plain Gauss-Laguerre rule, exact for polynomials of
    degree <= 2n - 1.  Requires beta > -1 for an integrable weight.
    """
    if n < 1:
        raise DomainError(f"gauss_laguerre requires n >= 1, got {n}")
    if beta <= -1.0:
        raise DomainError(f"weight x^beta e^-x is not integrable for beta={beta}")
    nodes, weights = _laguerre_rule(int(n), float(beta))
    return QuadratureRule(nodes=nodes, weights=weights, kind="gauss_laguerre", beta=beta)


@dataclass(frozen=True)
class IntegrationResult:
    """Outcome of an adaptive integral: value, final order, refinement drift."""

    value: float
    order: int
    drift: float
    converged: bool


def integrate_weighted(func, order: int, beta: float = 0.0) -> float:
    """Approximate integral of func(x) x^beta e^-x dx over (0, inf)."""
    return gauss_laguerre(order, beta).integrate(func)


def integrate_sampled_endpoint(func, order: int) -> float:
    """Approximate integral of func(x) e^-x dx via the substitution x = t^2.

    Intended for integrands with an algebraic endpoint singularity; the
    substitution clusters nodes near the origin.  If the underlying integral
    diverges, this returns the (order-dependent) sampled value.
    """
    rule = gauss_laguerre(order, 0.0)
    t = rule.nodes
    with np.errstate(under="ignore"):
        vals = 2.0 * t * func(t * t) * np.exp(-t * t + t)
    return float(np.sum(rule.weights * vals))


def _adaptive(evaluate, tol: float, start: int, max_order: int) -> IntegrationResult:
    order = start
    prev = evaluate(order)
    drift = math.inf
    while order < max_order:
        order *= 2
        cur = evaluate(order)
        scale = max(abs(cur), abs(prev), 1e-300)
        drift = abs(cur - prev) / scale
        if drift <= tol:
            return IntegrationResult(value=cur, order=order, drift=drift, converged=True)
        prev = cur
    return IntegrationResult(value=prev, order=order, drift=drift, converged=False)


def adaptive_weighted(func, beta: float = 0.0, tol: float = 1e-10,
                      start: int = 80, max_order: int = 1280) -> IntegrationResult:
    """Doubling refinement of integrate_weighted until the relative change
    between successive orders falls below tol."""
    return _adaptive(lambda n: integrate_weighted(func, n, beta), tol, start, max_order)


def adaptive_sampled_endpoint(func, tol: float = 1e-10, start: int = 80,
                              max_order: int = 1280) -> IntegrationResult:
    """Doubling refinement of integrate_sampled_endpoint.

    For a divergent integrand the drift never reaches tol and the result is
    returned with converged=False; callers decide whether that is an error.
    """
    return _adaptive(lambda n: integrate_sampled_endpoint(func, n), tol, start, max_order)


# ---------------------------------------------------------------------------
# Sphere quadrature: Gauss-Legendre in cos(theta) x trapezoid in phi
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def sphere_rule(n_theta: int = 64, n_phi: int = 128):
    """Tensor rule over the unit sphere; exact for low-degree harmonics.

    Returns (theta_grid, phi_grid, weight_grid), each of shape
    (n_theta, n_phi), with sum(weights) = 4 pi.
    """
    x, w = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    th_grid, ph_grid = np.meshgrid(theta, phi, indexing="ij")
    w_grid = np.repeat(w[:, None], n_phi, axis=1) * (2.0 * math.pi / n_phi)
    for arr in (th_grid, ph_grid, w_grid):
        arr.setflags(write=False)
    return th_grid, ph_grid, w_grid


def sphere_integrate(values, rule=None) -> complex:
    """Integrate grid samples produced on sphere_rule grids."""
    if rule is None:
        rule = sphere_rule()
    _, _, w = rule
    return complex(np.sum(w * values))
