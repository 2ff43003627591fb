"""Model inputs and condensate-derived quantities.

Everything downstream consumes two immutable value objects: ``ModelParams``
(the microscopic inputs, in model units with hbar = 1) and ``DerivedParams``
(condensate amplitude, effective couplings, screening mass, mixing constant
and the amplitude-mode gap).  Parameters can also be assembled from a plain
``key=value`` text file, optionally seeded by a named platform preset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path


class PhaseError(ValueError):
    """Raised when the medium is not condensed (condensate amplitude^2 <= 0)."""


class ConfigError(ValueError):
    """Malformed configuration file or override string."""


class RegimeWarning:
    """A soft warning about leaving the quasi-static, slow-motion window."""

    def __init__(self, message: str):
        self.message = message

    def __repr__(self):  # pragma: no cover - cosmetic
        return f"{type(self).__name__}({self.message!r})"


class VelocityWarning(RegimeWarning):
    pass


class QuasiStaticWarning(RegimeWarning):
    pass


@dataclass(frozen=True)
class ModelParams:
    """Microscopic inputs.

    Velocities are dimensionless (units of the light speed of the underlying
    description), masses and wavenumbers are inverse lengths, ``a_sep`` is a
    length and ``gamma_phi`` a frequency.  ``beta_inv_temp = inf`` selects the
    exact zero-temperature branch of the noise kernels; no huge-float proxy is
    involved.  ``m_H`` optionally overrides the amplitude-mode gap; when left
    ``None`` the standard quartic-condensate value sqrt(lambda/2)*rho0 is used.
    """

    u_phi: float = 0.01        # boundary-mode velocity
    m_phi: float = 200.0       # boundary mass parameter
    u_psi: float = 1.0         # medium velocity
    m_psi: float = 0.0         # bare scalar mass
    lambda_psi: float = 4.0    # quartic self-coupling
    mu: float = 1.0            # effective chemical potential
    e_charge: float = 1.0      # gauge charge
    g_A: float = 1.0           # bare coupling, moving plate
    g_B: float = 1.0           # bare coupling, fixed plate
    a_sep: float = 2.0         # plate separation
    v_rel: float = 0.03        # relative velocity of plate A
    gamma_phi: float = 0.0     # boundary linewidth (0 = ideal spectral lines)
    beta_inv_temp: float = math.inf   # inverse temperature, inf = T=0
    m_H: float | None = 12.0   # amplitude-gap override (None = condensate value)

    def __post_init__(self):
        if not self.u_phi > 0:
            raise ValueError(f"u_phi must be > 0, got {self.u_phi}")
        if not self.u_psi > 0:
            raise ValueError(f"u_psi must be > 0, got {self.u_psi}")
        if not self.lambda_psi > 0:
            raise ValueError(f"lambda_psi must be > 0, got {self.lambda_psi}")
        if self.a_sep < 0:
            raise ValueError(f"a_sep must be >= 0, got {self.a_sep}")
        if self.gamma_phi < 0:
            raise ValueError(f"gamma_phi must be >= 0, got {self.gamma_phi}")

    @property
    def zero_temperature(self) -> bool:
        return math.isinf(self.beta_inv_temp)


@dataclass(frozen=True)
class DerivedParams:
    """Quantities fixed by the condensate."""

    rho0: float       # condensate amplitude
    lambda_A: float   # effective coupling g_A * rho0
    lambda_B: float   # effective coupling g_B * rho0
    m_A: float        # screening mass e * rho0 / u_psi
    c_mix: float      # amplitude/density mixing constant 2 mu e rho0 / u_psi^2
    m_H: float        # amplitude-mode gap


def condensate_amplitude_sq(p: ModelParams) -> float:
    """rho0^2 = (4/lambda) * (mu^2/u_psi^2 - m_psi^2 u_psi^2).

    Negative or zero means the symmetric (uncondensed) phase.
    """
    u2 = p.u_psi * p.u_psi
    return (4.0 / p.lambda_psi) * (p.mu * p.mu / u2 - p.m_psi * p.m_psi * u2)


def derive_condensate(p: ModelParams) -> DerivedParams:
    """Populate all condensate-derived quantities.

    Raises
    ------
    PhaseError
        If rho0^2 <= 0.  The caller must switch to the symmetric-phase
        benchmark path instead of the dressed-mode machinery.
    """
    rho0_sq = condensate_amplitude_sq(p)
    if rho0_sq <= 0.0:
        raise PhaseError(
            f"rho0^2 = {rho0_sq:g} <= 0: medium is in the symmetric phase; "
            "use the symmetric-phase rate path"
        )
    rho0 = math.sqrt(rho0_sq)
    u2 = p.u_psi * p.u_psi
    m_H = p.m_H if p.m_H is not None else math.sqrt(0.5 * p.lambda_psi * rho0_sq)
    return DerivedParams(
        rho0=rho0,
        lambda_A=p.g_A * rho0,
        lambda_B=p.g_B * rho0,
        m_A=p.e_charge * rho0 / p.u_psi,
        c_mix=2.0 * p.mu * p.e_charge * rho0 / u2,
        m_H=m_H,
    )


# Soft limits of the quasi-static, slow-motion window.  The theory only says
# "much less than"; these numbers are artifact conventions.
VELOCITY_LIMIT = 0.3
SHELL_FREQUENCY_FRACTION = 0.5


def validate_regime(p: ModelParams, d: DerivedParams) -> list[RegimeWarning]:
    """Check the approximation window; returns warnings, never raises."""
    warnings: list[RegimeWarning] = []
    if p.v_rel >= VELOCITY_LIMIT:
        warnings.append(VelocityWarning(
            f"v_rel = {p.v_rel:g} is not small (limit {VELOCITY_LIMIT})"))
    if p.u_phi >= VELOCITY_LIMIT:
        warnings.append(VelocityWarning(
            f"u_phi = {p.u_phi:g} is not small (limit {VELOCITY_LIMIT})"))
    if p.v_rel > 2.0 * p.u_phi:
        # characteristic on-shell frequency at ky = 0
        beta0 = p.m_phi * p.u_phi
        omega_star = p.u_phi * p.v_rel * beta0 / math.sqrt(
            p.v_rel * p.v_rel - 4.0 * p.u_phi * p.u_phi)
        if omega_star > SHELL_FREQUENCY_FRACTION * d.m_A:
            warnings.append(QuasiStaticWarning(
                f"shell frequency {omega_star:g} exceeds "
                f"{SHELL_FREQUENCY_FRACTION:g} * m_A = "
                f"{SHELL_FREQUENCY_FRACTION * d.m_A:g}"))
    return warnings


# --------------------------------------------------------------------------
# key=value configuration files

_FLOAT_FIELDS = (
    "u_phi", "m_phi", "u_psi", "m_psi", "lambda_psi", "mu", "e_charge",
    "g_A", "g_B", "a_sep", "v_rel", "gamma_phi", "beta_inv_temp",
)


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key == "platform":
        return raw
    if key == "m_H" and raw.lower() in ("auto", "none"):
        return None
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"cannot parse value for {key!r}: {raw!r}") from None


def load_config(path: str | Path) -> dict:
    """Read a plain key=value file; '#' starts a comment, blank lines ignored."""
    cfg: dict = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, raw = line.split("=", 1)
        key = key.strip()
        if key != "platform" and key != "m_H" and key not in _FLOAT_FIELDS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        cfg[key] = _parse_value(key, raw)
    return cfg


def parse_overrides(pairs: list[str]) -> dict:
    """Parse repeated ``key=value`` override strings (CLI --set)."""
    cfg: dict = {}
    for item in pairs:
        if "=" not in item:
            raise ConfigError(f"override must be key=value, got {item!r}")
        key, raw = item.split("=", 1)
        key = key.strip()
        if key != "platform" and key != "m_H" and key not in _FLOAT_FIELDS:
            raise ConfigError(f"unknown override key {key!r}")
        cfg[key] = _parse_value(key, raw)
    return cfg


def params_from_config(cfg: dict | None = None, overrides: dict | None = None) -> ModelParams:
    """Assemble ModelParams: defaults < platform preset < file keys < overrides."""
    merged: dict = {}
    for source in (cfg or {}, overrides or {}):
        merged.update(source)
    platform = merged.pop("platform", None)
    p = ModelParams()
    if platform is not None:
        from . import sweep  # deferred: sweep imports params
        preset = sweep.get_platform(platform)
        p = replace(p, a_sep=preset.a_si / preset.xi_si)
    if merged:
        p = replace(p, **merged)
    return p
