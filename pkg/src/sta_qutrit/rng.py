"""Seeded 64-bit generator for reproducible random parameter draws.

The generator is SplitMix64: state advances by the additive constant
0x9E3779B97F4A7C15 and each output is the state passed through the
xor-shift/multiply finalizer

    z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27;  z *= 0x94D049BB133111EB
    z ^= z >> 31

with all arithmetic modulo 2^64.  Uniform doubles in [0, 1) take the top
53 bits: (z >> 11) * 2^-53.  The algorithm is integer-only and therefore
reproduces the same stream on any platform or language for the same seed.
"""

from __future__ import annotations

from typing import Iterator

from .schedule import ScheduleParams

__all__ = ["draw_schedule_params", "splitmix64", "unit_doubles", "DRAW_RANGES"]

_MASK = (1 << 64) - 1

# Verification draw box. All four intervals sit inside the admissible
# schedule ranges; gamma0 and tau1 are capped so the window-truncation
# residuals of the ramp boundaries keep 1 - P_d below the few-1e-3 level
# that the path-tracking checks assert.
DRAW_RANGES = {
    "tau1": (0.08, 0.12),
    "tau2": (0.20, 0.30),
    "gamma0_pi": (0.05, 0.20),
    "phi_pi": (0.25, 0.50),
}


def splitmix64(seed: int) -> Iterator[int]:
    """Infinite stream of 64-bit outputs for the given seed."""
    x = seed & _MASK
    while True:
        x = (x + 0x9E3779B97F4A7C15) & _MASK
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        yield z ^ (z >> 31)


def unit_doubles(seed: int) -> Iterator[float]:
    """Uniform doubles in [0, 1) from the top 53 bits of each output."""
    for z in splitmix64(seed):
        yield (z >> 11) * 2.0**-53


def draw_schedule_params(seed: int, n: int, T: float = 1.0) -> list[ScheduleParams]:
    """n schedule draws, uniform over DRAW_RANGES, consuming 4 doubles each."""
    import numpy as np

    u = unit_doubles(seed)
    out = []
    for _ in range(n):
        lo, hi = DRAW_RANGES["tau1"]
        tau1 = (lo + (hi - lo) * next(u)) * T
        lo, hi = DRAW_RANGES["tau2"]
        tau2 = (lo + (hi - lo) * next(u)) * T
        lo, hi = DRAW_RANGES["gamma0_pi"]
        gamma0 = (lo + (hi - lo) * next(u)) * np.pi
        lo, hi = DRAW_RANGES["phi_pi"]
        phi = (lo + (hi - lo) * next(u)) * np.pi
        out.append(ScheduleParams(tau1=tau1, tau2=tau2, gamma0=gamma0, phi=phi, T=T))
    return out
