"""Dressed environmental propagators between the plates.

The screened density channel hybridizes with the amplitude mode, so the
momentum-space propagator has two poles q = i*gamma with gamma^2 solving

    gamma^4 - (Delta_h + kappa^2) gamma^2 + (Delta_h kappa^2 - C^2) = 0,

with kappa^2 = k_par^2 + m_A^2 and Delta_h = k_par^2 + m_H^2 - omega^2/u_psi^2.
The biquadratic is solved in closed form with a numerically stable root
pairing (larger root from the quadratic formula, smaller via Vieta), and the
retarded prescription omega -> omega + i*eps_ret fixes a deterministic
decaying/outgoing branch whenever a root turns propagating.

Sign convention: the inter-plate value is fixed so that the decoupled limit
(C = 0) reproduces the bulk form +exp(-gamma*a)/(2*gamma).  Contour
integration of the dressed momentum-space propagator gives exactly this sign;
it matters only for plots of the retarded kernel since every rate involves
|G|^2.

Degenerate poles (gamma1^2 ~ gamma2^2) are evaluated through the analytic
confluent limit (first-order expansion of the two-pole formula), which has
been validated against a numeric limit sequence in the test suite.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .dispersion import MomentumPoint
from .params import DerivedParams, ModelParams

DEFAULT_EPS_RET = 1e-9   # retarded frequency shift, model frequency units
DEFAULT_TOL_DEG = 1e-8   # relative pole-degeneracy threshold
_EVANESCENT_RATIO = 1e-8


class EvanescenceError(ValueError):
    """Bulk symmetric-phase propagator requested in the propagating regime."""


@dataclass(frozen=True)
class KernelPoint:
    """Frequency/momentum point prepared for the pole solver.

    ``delta_h`` is the exact real value k_par^2 + m_H^2 - omega^2/u_psi^2;
    the retarded shift is applied later, inside the branch solver, which is
    why 1/u_psi^2 is carried along.
    """

    omega: float
    k: MomentumPoint
    kappa: float
    delta_h: float
    inv_u2: float


@dataclass(frozen=True)
class Branches:
    """The two decay rates of the dressed propagator, Re gamma >= 0."""

    gamma1: complex
    gamma2: complex
    kind1: str            # "evanescent" or "propagating"
    kind2: str
    degenerate: bool


def kernel_point(d: DerivedParams, p: ModelParams, omega: float,
                 k: MomentumPoint) -> KernelPoint:
    kpar2 = k.kpar_sq
    inv_u2 = 1.0 / (p.u_psi * p.u_psi)
    return KernelPoint(
        omega=omega,
        k=k,
        kappa=math.sqrt(kpar2 + d.m_A * d.m_A),
        delta_h=kpar2 + d.m_H * d.m_H - omega * omega * inv_u2,
        inv_u2=inv_u2,
    )


def retarded_delta(kp: KernelPoint, eps_ret: float = DEFAULT_EPS_RET) -> complex:
    """Delta_h evaluated at omega + i*eps_ret."""
    # (omega + i eps)^2 = omega^2 + 2 i omega eps - eps^2
    return kp.delta_h - (2j * kp.omega * eps_ret - eps_ret * eps_ret) * kp.inv_u2


def _dressed_roots(delta: complex, kappa2: complex,
                   c_mix: float) -> tuple[complex, complex]:
    """gamma^2 roots of the pole biquadratic, stable under cancellation.

    The discriminant is regrouped exactly as (delta - kappa^2)^2 + 4 C^2,
    which removes the catastrophic cancellation of s^2 - 4p near degenerate
    points; the larger root comes from the quadratic formula with the sign
    that avoids subtraction and the other follows from Vieta.  Returned
    sorted by (real, imag).
    """
    s = delta + kappa2
    prod = delta * kappa2 - c_mix * c_mix
    diff = delta - kappa2
    disc = cmath.sqrt(diff * diff + 4.0 * c_mix * c_mix)
    if (s.real * disc.real + s.imag * disc.imag) >= 0.0:
        big = 0.5 * (s + disc)
    else:
        big = 0.5 * (s - disc)
    small = prod / big if big != 0.0 else 0.5 * (s - disc)
    if (small.real, small.imag) <= (big.real, big.imag):
        return small, big
    return big, small


def _is_degenerate(x1: complex, x2: complex, tol_deg: float) -> bool:
    scale = max(abs(x1), abs(x2))
    if scale == 0.0:
        return True
    return abs(x1 - x2) <= tol_deg * scale


def _value_from_roots(x1: complex, x2: complex, kappa2: complex, a: float,
                      degenerate: bool) -> complex:
    """Inter-plate propagator from the two gamma^2 roots (sign-fixed)."""
    if degenerate:
        xm = 0.5 * (x1 + x2)
        g = cmath.sqrt(xm)
        return cmath.exp(-g * a) / (4.0 * g) * (
            (kappa2 + xm) / xm + a * (kappa2 - xm) / g)
    g1 = cmath.sqrt(x1)
    g2 = cmath.sqrt(x2)
    num = (kappa2 - x1) / g1 * cmath.exp(-g1 * a) \
        - (kappa2 - x2) / g2 * cmath.exp(-g2 * a)
    return num / (2.0 * (x2 - x1))


def dressed_inter(delta: complex, kappa2: complex, c_mix: float, a: float,
                  tol_deg: float = DEFAULT_TOL_DEG) -> complex:
    """Raw inter-plate propagator from scalar kernel data.

    Hot-loop entry point shared with the rate integrands; the public
    ``solve_branches`` + ``g_inter`` pair wraps the same root and value
    helpers, so there is a single source of truth for the pole algebra.
    """
    x1, x2 = _dressed_roots(delta, kappa2, c_mix)
    return _value_from_roots(x1, x2, kappa2, a, _is_degenerate(x1, x2, tol_deg))


def _classify(g: complex) -> str:
    return "evanescent" if g.real > abs(g.imag) * _EVANESCENT_RATIO else "propagating"


def solve_branches(kp: KernelPoint, c_mix: float, *,
                   eps_ret: float = DEFAULT_EPS_RET,
                   tol_deg: float = DEFAULT_TOL_DEG) -> Branches:
    """Solve the biquadratic pole equation at the retarded-shifted frequency."""
    delta = retarded_delta(kp, eps_ret) if eps_ret != 0.0 else complex(kp.delta_h)
    kappa2 = kp.kappa * kp.kappa
    x1, x2 = _dressed_roots(delta, kappa2, c_mix)
    g1 = cmath.sqrt(x1)
    g2 = cmath.sqrt(x2)
    return Branches(
        gamma1=g1,
        gamma2=g2,
        kind1=_classify(g1),
        kind2=_classify(g2),
        degenerate=_is_degenerate(x1, x2, tol_deg),
    )


def g_inter(b: Branches, kp: KernelPoint, a_sep: float) -> complex:
    """Inter-plate propagator G(a, 0) for already-solved branches."""
    return _value_from_roots(b.gamma1 * b.gamma1, b.gamma2 * b.gamma2,
                             kp.kappa * kp.kappa, a_sep, b.degenerate)


def g_same(b: Branches, kp: KernelPoint) -> complex:
    """Same-plate (z = z') value; identical to ``g_inter`` at zero separation."""
    return g_inter(b, kp, 0.0)


def gamma_min(b: Branches) -> float:
    """Slowest attenuation rate of the two branches."""
    return min(b.gamma1.real, b.gamma2.real)


def g_bulk_symmetric(p: ModelParams, omega: float, k: MomentumPoint,
                     m_gap: float) -> float:
    """Single-particle bulk propagator of the uncondensed medium.

    exp(-kappa_tilde * a_sep) / (2 kappa_tilde) with
    kappa_tilde^2 = k_par^2 + M^2 - (omega - mu)^2 / u_psi^2.
    Only the evanescent regime is supported.
    """
    u2 = p.u_psi * p.u_psi
    kt2 = k.kpar_sq + m_gap * m_gap - (omega - p.mu) ** 2 / u2
    if kt2 <= 0.0:
        raise EvanescenceError(
            f"kappa_tilde^2 = {kt2:g} <= 0: bulk mode is propagating")
    kt = math.sqrt(kt2)
    return math.exp(-kt * p.a_sep) / (2.0 * kt)
