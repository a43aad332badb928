"""Seeded, platform-stable random sampling for sweeps and self-checks.

All randomized paths draw from a counter-based Philox generator keyed by
the run seed, so identical configs reproduce identical streams on any
machine and under any worker count.
"""

from __future__ import annotations

import math

import numpy as np

from .su2 import LoopParams


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator for one run."""
    return np.random.Generator(np.random.Philox(seed))


def sample_loop_params(
    rng: np.random.Generator,
    count: int,
    theta_range: tuple[float, float] = (0.0, math.pi),
    phi_range: tuple[float, float] = (-0.5 * math.pi, 0.5 * math.pi),
    omega_range: tuple[float, float] = (0.0, 2.0 * math.pi),
) -> list[LoopParams]:
    """Draw loop coordinates uniformly from the given ranges."""
    thetas = rng.uniform(*theta_range, size=count)
    omegas = rng.uniform(*omega_range, size=count)
    phis = rng.uniform(*phi_range, size=count)
    return [LoopParams(t, o, p) for t, o, p in zip(thetas, omegas, phis)]
