"""Decoherence exponent and coherence factor for stationary windowed histories.

For histories that stay near one shell point over a time window T and an
effective transverse area, the cross damping exponent is simply
delta_A * delta_B * T * area * rate, and the off-diagonal coherence decays as
exp(-damping).  Diagonal (single-plate) damping uses the same formula with
the local kernel magnitude; it is an artifact extension, labeled as such,
since only the cross channel is treated quantitatively upstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .rates import RateResult


class NegativeDampingError(ValueError):
    """Damping exponent came out negative (bad rate or history signs)."""


@dataclass(frozen=True)
class History:
    delta_A: float = 1.0
    delta_B: float = 1.0
    duration_T: float = 1.0
    area: float = 1.0

    def __post_init__(self):
        if self.duration_T < 0:
            raise ValueError("duration_T must be >= 0")
        if self.area < 0:
            raise ValueError("area must be >= 0")


def damping(h: History, r: RateResult) -> float:
    """Cross damping exponent; linear in each history factor."""
    if r.mode != "resonant":
        raise ValueError(f"damping expects a resonant-mode rate, got {r.mode!r}")
    return h.delta_A * h.delta_B * h.duration_T * h.area * r.value


def coherence(h: History, r: RateResult) -> float:
    """Coherence factor exp(-damping); in (0, 1], multiplicative in T."""
    exponent = damping(h, r)
    if exponent < 0.0:
        raise NegativeDampingError(f"damping exponent {exponent:g} < 0")
    return math.exp(-exponent)
