"""Boundary-mode dispersion and spectral densities.

The boundary modes disperse as Omega_k = u_phi * sqrt(k_par^2 + m_phi^2 u_phi^2).
Their spectral density splits into positive- and negative-frequency lines with
weight pi u_phi^2 / Omega_k.  In the ideal mode the lines are kept symbolic
(coefficient + location) so the on-shell reduction can consume them exactly;
the broadened mode replaces each line by the weight times a unit-normalized
Lorentzian of width gamma_phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import ModelParams


class WidthError(ValueError):
    """Broadened spectral density requested with gamma_phi = 0."""


@dataclass(frozen=True)
class MomentumPoint:
    kx: float
    ky: float

    @property
    def kpar_sq(self) -> float:
        return self.kx * self.kx + self.ky * self.ky


@dataclass(frozen=True)
class SpectralLine:
    """A delta line: ``coefficient`` sitting at ``omega_peak``."""

    coefficient: float
    omega_peak: float


def omega_k(p: ModelParams, k: MomentumPoint) -> float:
    """Boundary dispersion; even in kx and ky, minimum m_phi * u_phi^2 at k=0."""
    return p.u_phi * math.sqrt(k.kpar_sq + (p.m_phi * p.u_phi) ** 2)


def spectral_coefficient(p: ModelParams, k: MomentumPoint) -> float:
    return math.pi * p.u_phi * p.u_phi / omega_k(p, k)


def spectral_pm(p: ModelParams, sign: int, omega: float, k: MomentumPoint) -> SpectralLine:
    """Ideal-mode spectral line of the requested frequency branch.

    The returned object is symbolic: the delta function is never evaluated at
    ``omega`` (the argument is accepted only for interface symmetry with the
    broadened form).  sign=+1 puts the line at +Omega_k, sign=-1 at -Omega_k.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    om = omega_k(p, k)
    return SpectralLine(coefficient=math.pi * p.u_phi * p.u_phi / om,
                        omega_peak=sign * om)


def lorentzian(x: float, gamma: float) -> float:
    """Unit-normalized Lorentzian of half width gamma, centered at 0."""
    return gamma / (math.pi * (x * x + gamma * gamma))


def lorentzian_pm(p: ModelParams, sign: int, omega: float, k: MomentumPoint) -> float:
    """Broadened spectral density at ``omega``.

    Equals the ideal-line coefficient times a unit-normalized Lorentzian
    centered at sign*Omega_k, so the total spectral weight of each branch is
    preserved for every gamma_phi and the ideal line is recovered as
    gamma_phi -> 0.
    """
    if p.gamma_phi <= 0.0:
        raise WidthError("gamma_phi must be > 0 for the broadened density; "
                         "use spectral_pm in the ideal mode")
    line = spectral_pm(p, sign, omega, k)
    return line.coefficient * lorentzian(omega - line.omega_peak, p.gamma_phi)
