"""Cross-decoherence rate integrals.

Three routes to the same channel:

* ``im_gamma_cross`` / ``rate_resonant`` -- ideal spectral lines.  The delta
  functions are consumed exactly by the on-shell reduction, leaving a single
  ky integral of |G(omega*, k*; a, 0)|^2 / (ky^2 + m_phi^2 u_phi^2) with the
  prefactor lambda_A^2 lambda_B^2 u_phi^2 / (8 pi v).  The rate-density
  normalization is fixed so that ``rate_resonant`` equals this integral
  exactly (the boundary histories only fix it up to a prefactor).

* ``rate_regularized`` -- Lorentzian-broadened lines of width gamma_phi.
  The frequency integral of the two broadened lines is a Lorentzian
  convolution; with the dressed kernel pinned at the local overlap peak
  (omega = v kx / 2, the midpoint of the two line centers) it evaluates in
  closed form to the overlap weight

      W(v, k) = (pi u_phi^2 / Omega_k)^2 * L_{2 gamma}(v kx - 2 Omega_k),

  leaving a 2D momentum quadrature.  An exact-omega mode keeps the kernel's
  frequency dependence inside a numeric frequency integral for validation.
  The narrow-width limit reproduces ``rate_resonant``.

* ``im_gamma_symmetric`` -- the uncondensed benchmark: same shell reduction
  with bare couplings g_A^2 g_B^2 and a plug-in kernel slot, defaulting to
  the single-particle bulk propagator as a stand-in for the composite
  density response.

All quadratures are adaptive (QUADPACK) with configurable absolute/relative
targets and tail truncation at ``tail_ratio`` of the running peak; sharply
peaked integrands are fed telescoping split points so the subdivision always
finds the resonance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

from scipy.integrate import quad

from .dispersion import MomentumPoint, WidthError, lorentzian, lorentzian_pm, omega_k
from .params import DerivedParams, ModelParams
from .propagator import DEFAULT_EPS_RET, dressed_inter, g_bulk_symmetric, gamma_min
from .resonance import above_threshold, shell_point

DEFAULT_REL_TOL = 1e-6
DEFAULT_ABS_TOL = 1e-9
DEFAULT_TAIL_RATIO = 1e-8
DEFAULT_N_MAX = 10 ** 6
_ERR_SAFETY = 50.0
_MAX_DOUBLINGS = 60

KernelFn = Callable[[float, float, float], complex]   # (omega, kx, ky)


class QuadratureError(RuntimeError):
    """Adaptive integration failed to reach its target."""


@dataclass(frozen=True)
class RateResult:
    """Scalar rate density with an error estimate and shell metadata."""

    value: float
    abs_err: float
    n_evals: int
    mode: str                      # im_gamma | resonant | regularized | symmetric
    meta: dict = field(default_factory=dict)


class _Budget:
    """Counts integrand evaluations and enforces the n_max ceiling."""

    def __init__(self, n_max: int):
        self.n = 0
        self.n_max = n_max

    def spend(self):
        self.n += 1
        if self.n > self.n_max:
            raise QuadratureError(
                f"evaluation budget exceeded ({self.n_max} integrand calls)")


def _checked_quad(f, lo, hi, *, rel_tol, points=None, limit=200):
    """quad() with the error target enforced."""
    val, err = quad(f, lo, hi, epsabs=0.0, epsrel=rel_tol,
                    points=points, limit=limit)
    if err > _ERR_SAFETY * rel_tol * abs(val) + 1e-300:
        raise QuadratureError(
            f"error estimate {err:g} misses target for integral {val:g}")
    return val, err


def _expand_tail(f, start: float, peak: float, tail_ratio: float,
                 grow: float = 2.0) -> float:
    """Smallest bound (by doubling) where f has fallen below tail_ratio*peak."""
    bound = start
    for _ in range(_MAX_DOUBLINGS):
        if f(bound) <= tail_ratio * peak:
            return bound
        bound *= grow
    raise QuadratureError(f"integrand tail not decaying (reached {bound:g})")


def _telescope(center: float, width: float, lo: float, hi: float,
               factor: float = 4.0, count: int = 10) -> list[float]:
    """Split points clustering geometrically around a sharp peak."""
    pts = {center}
    w = width
    for _ in range(count):
        pts.add(center - w)
        pts.add(center + w)
        w *= factor
    return sorted(x for x in pts if lo < x < hi)


# --------------------------------------------------------------------------
# resonant (ideal-line) rate


def _shell_kernel_factory(p: ModelParams, d: DerivedParams,
                          eps_ret: float) -> KernelFn:
    inv_u2 = 1.0 / (p.u_psi * p.u_psi)
    m_h2 = d.m_H * d.m_H
    m_a2 = d.m_A * d.m_A
    c_mix = d.c_mix
    a = p.a_sep

    def kernel(omega: float, kx: float, ky: float) -> complex:
        kpar2 = kx * kx + ky * ky
        delta = kpar2 + m_h2 - (omega + 1j * eps_ret) ** 2 * inv_u2
        return dressed_inter(delta, kpar2 + m_a2, c_mix, a)

    return kernel


def _shell_reduced_integral(p: ModelParams, kernel: KernelFn, coupling4: float,
                            *, rel_tol: float, tail_ratio: float,
                            n_max: int) -> tuple[float, float, int]:
    """Common ky quadrature behind the two on-shell rates."""
    u = p.u_phi
    v = p.v_rel
    beta0sq = (p.m_phi * u) ** 2
    denom = math.sqrt(v * v - 4.0 * u * u)
    budget = _Budget(n_max)

    def integrand(ky: float) -> float:
        budget.spend()
        beta2 = ky * ky + beta0sq
        beta = math.sqrt(beta2)
        kx = 2.0 * u * beta / denom
        om = u * v * beta / denom
        g = kernel(om, kx, ky)
        gr = g.real
        gi = g.imag
        return (gr * gr + gi * gi) / beta2

    f0 = integrand(0.0)
    k_start = max(1.0, 4.0 * math.sqrt(beta0sq))
    probe = max(f0, integrand(0.5 * k_start))
    if probe == 0.0:
        # attenuation underflows everywhere; the integral is numerically zero
        return 0.0, 0.0, budget.n
    bound = _expand_tail(integrand, k_start, probe, tail_ratio)
    # integrand is even in ky: integrate the half line and double
    val, err = _checked_quad(integrand, 0.0, bound, rel_tol=rel_tol)
    pref = coupling4 * u * u / (8.0 * math.pi * v)
    return pref * 2.0 * val, pref * 2.0 * err, budget.n


def im_gamma_cross(p: ModelParams, d: DerivedParams, *,
                   kernel: KernelFn | None = None,
                   rel_tol: float = DEFAULT_REL_TOL,
                   tail_ratio: float = DEFAULT_TAIL_RATIO,
                   n_max: int = DEFAULT_N_MAX,
                   eps_ret: float = DEFAULT_EPS_RET) -> RateResult:
    """On-shell cross rate in the ideal-line mode.

    Exactly zero below the kinematic threshold (no quadrature is run).
    ``kernel`` replaces the dressed inter-plate propagator when given;
    it receives (omega, kx, ky) and must return the complex amplitude.
    """
    if not above_threshold(p):
        return RateResult(0.0, 0.0, 0, "im_gamma", meta={"below_threshold": True})
    sp0 = shell_point(p, 0.0)
    kern = kernel if kernel is not None else _shell_kernel_factory(p, d, eps_ret)
    coupling4 = (d.lambda_A * d.lambda_B) ** 2
    value, abs_err, n = _shell_reduced_integral(
        p, kern, coupling4, rel_tol=rel_tol, tail_ratio=tail_ratio, n_max=n_max)
    return RateResult(value, abs_err, n, "im_gamma", meta={
        "omega_star": sp0.omega_star,
        "kx_star": sp0.kx_star,
        "near_threshold": sp0.near_threshold,
    })


def rate_resonant(p: ModelParams, d: DerivedParams, **kwargs) -> RateResult:
    """Resonant decoherence-rate density.

    Unit-prefactor convention: numerically identical to ``im_gamma_cross``,
    relabeled, so every rate plot is well defined.
    """
    return replace(im_gamma_cross(p, d, **kwargs), mode="resonant")


def im_gamma_symmetric(p: ModelParams, m_gap: float, *,
                       kernel: Callable[[float, float, float], complex] | None = None,
                       rel_tol: float = DEFAULT_REL_TOL,
                       tail_ratio: float = DEFAULT_TAIL_RATIO,
                       n_max: int = DEFAULT_N_MAX) -> RateResult:
    """Symmetric-phase benchmark rate.

    The kernel slot defaults to the single-particle bulk propagator of the
    uncondensed medium with gap ``m_gap``; a computed composite-response
    kernel can be plugged in without touching the shell reduction.  The
    default stand-in is flagged in the result metadata.
    """
    if not above_threshold(p):
        return RateResult(0.0, 0.0, 0, "symmetric",
                          meta={"below_threshold": True,
                                "kernel": "bulk_standin" if kernel is None else "custom"})
    if kernel is None:
        def kernel(om: float, kx: float, ky: float) -> complex:
            return complex(g_bulk_symmetric(p, om, MomentumPoint(kx, ky), m_gap))
        label = "bulk_standin"
    else:
        label = "custom"
    coupling4 = (p.g_A * p.g_B) ** 2
    value, abs_err, n = _shell_reduced_integral(
        p, kernel, coupling4, rel_tol=rel_tol, tail_ratio=tail_ratio, n_max=n_max)
    sp0 = shell_point(p, 0.0)
    return RateResult(value, abs_err, n, "symmetric", meta={
        "omega_star": sp0.omega_star,
        "kx_star": sp0.kx_star,
        "kernel": label,
        "m_gap": m_gap,
    })


# --------------------------------------------------------------------------
# broadened (Lorentzian) rate


def _overlap_centers(p: ModelParams, v: float, k: MomentumPoint) -> tuple[float, float]:
    om = omega_k(p, k)
    return v * k.kx - om, om


def overlap_weight(p: ModelParams, v: float, k: MomentumPoint, *,
                   rel_tol: float = DEFAULT_REL_TOL,
                   n_max: int = DEFAULT_N_MAX) -> float:
    """Frequency integral of the two broadened spectral lines.

    The dressed-kernel frequency dependence is factored out at the overlap
    peak, so this is the pure spectral weight; it is strictly positive, peaks
    on the resonance shell, and integrates two Lorentzians of width gamma_phi
    numerically (the closed convolution form is kept separately as a
    cross-check and for the fast path of the 2D rate).
    """
    if p.gamma_phi <= 0.0:
        raise WidthError("overlap weight requires gamma_phi > 0")
    c_minus, c_plus = _overlap_centers(p, v, k)
    budget = _Budget(n_max)

    def integrand(om: float) -> float:
        budget.spend()
        return lorentzian_pm(p, -1, om - v * k.kx, k) * lorentzian_pm(p, +1, om, k)

    # +-3000 widths around each center leave ~1e-11 relative Lorentzian mass
    g = p.gamma_phi
    lo = min(c_minus, c_plus) - 3e3 * g
    hi = max(c_minus, c_plus) + 3e3 * g
    pts = sorted(set(_telescope(c_minus, g, lo, hi)
                     + _telescope(c_plus, g, lo, hi)))
    val, _ = _checked_quad(integrand, lo, hi, rel_tol=rel_tol, points=pts,
                           limit=100 + 20 * len(pts))
    return val


def overlap_weight_closed(p: ModelParams, v: float, k: MomentumPoint,
                          gamma_phi: float | None = None) -> float:
    """Closed convolution form of the overlap weight."""
    g = p.gamma_phi if gamma_phi is None else gamma_phi
    if g <= 0.0:
        raise WidthError("overlap weight requires gamma_phi > 0")
    om = omega_k(p, k)
    coeff = math.pi * p.u_phi * p.u_phi / om
    return coeff * coeff * lorentzian(v * k.kx - 2.0 * om, 2.0 * g)


def rate_regularized(p: ModelParams, d: DerivedParams, *,
                     exact_omega: bool = False,
                     rel_tol: float = DEFAULT_REL_TOL,
                     inner_rel_tol: float = 1e-7,
                     tail_ratio: float = DEFAULT_TAIL_RATIO,
                     n_max: int = 4 * DEFAULT_N_MAX,
                     eps_ret: float = DEFAULT_EPS_RET) -> RateResult:
    """Broadened cross rate: 2D momentum quadrature of W(v,k) |G|^2 / (2 pi)^3.

    Default mode pins |G|^2 at the local overlap peak omega = v kx / 2 and
    uses the closed convolution form of the frequency integral;
    ``exact_omega=True`` integrates the frequency dependence of the kernel
    numerically at every momentum node (slow; for validation).
    """
    gam = p.gamma_phi
    if gam <= 0.0:
        raise WidthError("rate_regularized requires gamma_phi > 0")
    u = p.u_phi
    v = p.v_rel
    beta0sq = (p.m_phi * u) ** 2
    inv_u2 = 1.0 / (p.u_psi * p.u_psi)
    m_h2 = d.m_H * d.m_H
    m_a2 = d.m_A * d.m_A
    c_mix = d.c_mix
    a = p.a_sep
    above = above_threshold(p)
    g2 = 2.0 * gam   # width of the convolved overlap line
    budget = _Budget(n_max)

    def g_sq(om: float, kpar2: float) -> float:
        delta = kpar2 + m_h2 - (om + 1j * eps_ret) ** 2 * inv_u2
        g = dressed_inter(delta, kpar2 + m_a2, c_mix, a)
        return g.real * g.real + g.imag * g.imag

    def w_exact(kx: float, ky2: float, om_k: float, kpar2: float) -> float:
        c_minus = v * kx - om_k
        c_plus = om_k
        coeff = math.pi * u * u / om_k

        def fw(om: float) -> float:
            budget.spend()
            return (coeff * lorentzian(om - c_minus, gam)
                    * coeff * lorentzian(om - c_plus, gam)
                    * g_sq(om, kpar2))

        lo = min(c_minus, c_plus) - 3e3 * gam
        hi = max(c_minus, c_plus) + 3e3 * gam
        pts = sorted(set(_telescope(c_minus, gam, lo, hi)
                         + _telescope(c_plus, gam, lo, hi)))
        val, _ = quad(fw, lo, hi, epsabs=0.0, epsrel=inner_rel_tol,
                      points=pts, limit=100 + 20 * len(pts))
        return val

    def integrand_kx_factory(ky: float):
        ky2 = ky * ky
        beta2 = ky2 + beta0sq

        def integrand(kx: float) -> float:
            budget.spend()
            kpar2 = kx * kx + ky2
            om_k = u * math.sqrt(kx * kx + beta2)
            if exact_omega:
                return w_exact(kx, ky2, om_k, kpar2)
            coeff = math.pi * u * u / om_k
            w = coeff * coeff * lorentzian(v * kx - 2.0 * om_k, g2)
            return w * g_sq(0.5 * v * kx, kpar2)

        return integrand, beta2

    def inner(ky: float) -> float:
        integrand, beta2 = integrand_kx_factory(ky)
        beta = math.sqrt(beta2)
        if above:
            denom = math.sqrt(v * v - 4.0 * u * u)
            k_hat = 2.0 * u * beta / denom
            fprime = (v * v - 4.0 * u * u) / v
        else:
            # overlap mismatch is smallest where v*kx - 2*Omega peaks
            denom = math.sqrt(4.0 * u * u - v * v)
            k_hat = v * beta / denom
            fprime = v
        peak = max(integrand(k_hat), 1e-300)
        hi = _expand_tail(integrand, max(4.0 * k_hat, 4.0 * beta, 1.0),
                          peak, tail_ratio)
        lo = -_expand_tail(lambda x: integrand(-x),
                           max(4.0 * beta, 1.0), peak, tail_ratio)
        width = max(g2 / fprime, 1e-14)
        pts = _telescope(k_hat, width, lo, hi)
        val, _ = quad(integrand, lo, hi, epsabs=0.0, epsrel=inner_rel_tol,
                      points=pts, limit=100 + 20 * len(pts))
        return val

    i0 = inner(0.0)
    if i0 <= 0.0:
        return RateResult(0.0, 0.0, budget.n, "regularized",
                          meta={"gamma_phi": gam, "underflow": True})
    bound = _expand_tail(inner, max(1.0, 4.0 * math.sqrt(beta0sq)), i0, tail_ratio)
    val, err = _checked_quad(inner, 0.0, bound, rel_tol=rel_tol)
    pref = (d.lambda_A * d.lambda_B) ** 2 / (2.0 * math.pi) ** 3
    return RateResult(pref * 2.0 * val, pref * 2.0 * err, budget.n,
                      "regularized",
                      meta={"gamma_phi": gam, "exact_omega": exact_omega})
