"""Boundary 2x2 kernels: retarded matrix, spectral function, noise matrix.

Both plates couple to the same dressed mode, so the retarded influence matrix
has entries lambda_i lambda_j G(z_i, z_j) with z in {a_sep, 0}; the bulk
approximation makes the two diagonal (same-plate) values equal.

The spectral function is computed as the discontinuity across the real
frequency axis, rho = i[G(omega + i eps) - G(omega - i eps)], evaluated with
the sign of the influence kernel so that sgn(omega) * rho >= 0 and the noise
matrix built from it is positive semidefinite.  (The plotting convention for
the propagator itself fixes the decoupled limit to +exp(-gamma a)/(2 gamma);
the two signs are opposite, which only ever shows up in retarded-kernel plots
since rates involve |G|^2.)

The noise matrix follows from the fluctuation-dissipation relation
N = (1/2) coth(beta omega / 2) rho, which at zero temperature becomes
(1/2) sgn(omega) rho exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dispersion import MomentumPoint
from .params import DerivedParams, ModelParams
from .propagator import DEFAULT_EPS_RET, dressed_inter

PAIRS = ("aa", "ab", "ba", "bb")


class ZeroFrequencyError(ValueError):
    """Hadamard kernel at omega = 0 and zero temperature: sgn(0) undefined."""


@dataclass(frozen=True)
class KernelMatrix2:
    """Boundary-indexed 2x2 kernel (A at z = a_sep, B at z = 0)."""

    aa: complex
    ab: complex
    ba: complex
    bb: complex


def _pair_values(d: DerivedParams, p: ModelParams, omega: complex,
                 k: MomentumPoint) -> tuple[complex, complex]:
    """(same-plate, inter-plate) propagator values at complex frequency."""
    kpar2 = k.kpar_sq
    inv_u2 = 1.0 / (p.u_psi * p.u_psi)
    delta = kpar2 + d.m_H * d.m_H - omega * omega * inv_u2
    kappa2 = kpar2 + d.m_A * d.m_A
    same = dressed_inter(delta, kappa2, d.c_mix, 0.0)
    inter = dressed_inter(delta, kappa2, d.c_mix, p.a_sep)
    return same, inter


def retarded_matrix(d: DerivedParams, p: ModelParams, omega: float,
                    k: MomentumPoint, *,
                    eps_ret: float = DEFAULT_EPS_RET) -> KernelMatrix2:
    """Retarded influence matrix; off-diagonals are equal by reciprocity."""
    same, inter = _pair_values(d, p, omega + 1j * eps_ret, k)
    la, lb = d.lambda_A, d.lambda_B
    return KernelMatrix2(
        aa=la * la * same,
        ab=la * lb * inter,
        ba=la * lb * inter,
        bb=lb * lb * same,
    )


def spectral_rho_h(d: DerivedParams, p: ModelParams, omega: float,
                   k: MomentumPoint, at: str = "ab", *,
                   eps_ret: float = DEFAULT_EPS_RET) -> float:
    """Spectral function of the dressed mode at the requested boundary pair.

    Evaluated as the symmetric eps-discontinuity; the result is real up to
    conjugation roundoff, odd in omega, and vanishes (to O(eps)) in the fully
    evanescent regime where the propagator is real-analytic.
    """
    if at not in PAIRS:
        raise ValueError(f"at must be one of {PAIRS}, got {at!r}")
    idx = 1 if at in ("ab", "ba") else 0
    g_plus = _pair_values(d, p, omega + 1j * eps_ret, k)[idx]
    g_minus = _pair_values(d, p, omega - 1j * eps_ret, k)[idx]
    # influence-kernel sign: rho = i [(-G)(w+ie) - (-G)(w-ie)] = i (G- - G+)
    rho = 1j * (g_minus - g_plus)
    if abs(rho.imag) > 1e-10 * max(1.0, abs(rho)):
        raise ArithmeticError(f"spectral function not real: {rho!r}")
    return rho.real


def hadamard(d: DerivedParams, p: ModelParams, omega: float,
             k: MomentumPoint, at: str = "ab", *,
             eps_ret: float = DEFAULT_EPS_RET) -> float:
    """Symmetrized (noise) kernel via the fluctuation-dissipation relation.

    Zero temperature uses the exact sgn(omega) branch and refuses omega = 0.
    At finite temperature omega = 0 is returned as the continuous limit,
    evaluated a half-width off the axis.
    """
    if omega == 0.0:
        if p.zero_temperature:
            raise ZeroFrequencyError(
                "hadamard kernel undefined at omega = 0 for beta = inf")
        delta_w = eps_ret
        rho = spectral_rho_h(d, p, delta_w, k, at, eps_ret=eps_ret)
        return 0.5 * rho / math.tanh(0.5 * p.beta_inv_temp * delta_w)
    rho = spectral_rho_h(d, p, omega, k, at, eps_ret=eps_ret)
    if p.zero_temperature:
        return 0.5 * math.copysign(1.0, omega) * rho
    return 0.5 * rho / math.tanh(0.5 * p.beta_inv_temp * omega)


def noise_matrix(d: DerivedParams, p: ModelParams, omega: float,
                 k: MomentumPoint, *,
                 eps_ret: float = DEFAULT_EPS_RET) -> KernelMatrix2:
    """Noise kernel matrix; real entries, full matrix positive semidefinite.

    The off-diagonal entry may take either sign; only the matrix as a whole
    is constrained.
    """
    same = hadamard(d, p, omega, k, "aa", eps_ret=eps_ret)
    inter = hadamard(d, p, omega, k, "ab", eps_ret=eps_ret)
    la, lb = d.lambda_A, d.lambda_B
    return KernelMatrix2(
        aa=la * la * same,
        ab=la * lb * inter,
        ba=la * lb * inter,
        bb=lb * lb * same,
    )
