"""Kinematic threshold and the Doppler resonance shell.

Moving plate A Doppler-shifts its spectral lines; the negative-frequency
branch of A overlaps the positive-frequency branch of B only where
v*kx = 2*Omega_k, which has a real solution kx* iff v > 2*u_phi.  Solving the
constraint gives, with beta^2 = ky^2 + m_phi^2 u_phi^2,

    kx* = 2 u_phi beta / sqrt(v^2 - 4 u_phi^2),
    omega* = u_phi v beta / sqrt(v^2 - 4 u_phi^2),

and the delta-function reduction carries the Jacobian weight v/(v^2-4u_phi^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dispersion import MomentumPoint, omega_k
from .params import ModelParams

# kx* flagged as effectively divergent beyond this multiple of beta
NEAR_THRESHOLD_RATIO = 1e5


class ThresholdError(ValueError):
    """Shell requested at or below the kinematic threshold v = 2*u_phi."""


@dataclass(frozen=True)
class ShellPoint:
    kx_star: float
    omega_star: float
    jacobian_w: float
    ky: float
    beta2: float
    near_threshold: bool = False

    @property
    def momentum(self) -> MomentumPoint:
        return MomentumPoint(self.kx_star, self.ky)


def above_threshold(p: ModelParams) -> bool:
    """True iff the resonant shell exists (strict inequality; the boundary
    point v = 2*u_phi is excluded because kx* diverges there)."""
    return p.v_rel > 2.0 * p.u_phi


def shell_point(p: ModelParams, ky: float) -> ShellPoint:
    """On-shell solution at transverse wavenumber ky.

    Near the threshold kx* grows without bound; values are returned unclamped
    with ``near_threshold`` set, and the exponential attenuation of the
    propagator makes such points negligible in every integral.
    """
    if not above_threshold(p):
        raise ThresholdError(
            f"v_rel = {p.v_rel:g} <= 2*u_phi = {2 * p.u_phi:g}: no shell")
    beta2 = ky * ky + (p.m_phi * p.u_phi) ** 2
    beta = math.sqrt(beta2)
    denom = math.sqrt(p.v_rel * p.v_rel - 4.0 * p.u_phi * p.u_phi)
    kx_star = 2.0 * p.u_phi * beta / denom
    omega_star = p.u_phi * p.v_rel * beta / denom
    return ShellPoint(
        kx_star=kx_star,
        omega_star=omega_star,
        jacobian_w=p.v_rel / (p.v_rel * p.v_rel - 4.0 * p.u_phi * p.u_phi),
        ky=ky,
        beta2=beta2,
        near_threshold=kx_star > NEAR_THRESHOLD_RATIO * beta,
    )


def jacobian_check(p: ModelParams, ky: float, step: float = 1e-5) -> float:
    """Central finite difference of v*kx - 2*Omega at kx*, minus the closed
    form (v^2 - 4 u_phi^2)/v.  Testing aid only."""
    sp = shell_point(p, ky)

    def f(kx: float) -> float:
        return p.v_rel * kx - 2.0 * omega_k(p, MomentumPoint(kx, ky))

    fd = (f(sp.kx_star + step) - f(sp.kx_star - step)) / (2.0 * step)
    return abs(fd) - (p.v_rel * p.v_rel - 4.0 * p.u_phi * p.u_phi) / p.v_rel
