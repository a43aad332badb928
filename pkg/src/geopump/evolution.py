"""Cycle-by-cycle evolution under a fixed driving loop.

One cycle acts as a single special-unitary matrix; n cycles are its n-th
power.  This module builds that operator from loop coordinates, records
inter-band pump statistics over many cycles, reduces the 1D
field-reversal problem to its closed-form zero crossings, and exposes the
per-cycle jump angles of the Bloch-sphere trajectory.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .su2 import (
    TWO_PI,
    LoopParams,
    axis_angle_from_euler,
    euler_from_loop,
    ground_state,
)

# strip accumulated rounding from the iterated operator this often
RENORM_INTERVAL = 1 << 10


class ZeroFieldError(ValueError):
    """The field magnitude vanished, so the two-valued index is undefined."""


def build_loop_operator(lp: LoopParams) -> np.ndarray:
    """Special-unitary one-cycle operator of the loop (theta, omega, phi)."""
    c = math.cos(0.5 * lp.theta)
    s = math.sin(0.5 * lp.theta)
    return np.array(
        [
            [c * cmath.exp(-1j * lp.phi), -s * cmath.exp(-1j * (lp.omega - lp.phi))],
            [s * cmath.exp(1j * (lp.omega - lp.phi)), c * cmath.exp(1j * lp.phi)],
        ]
    )


@dataclass(frozen=True)
class PumpTrace:
    """Per-cycle pump record: q[j-1] is the excited-state weight after j
    cycles and p[j-1] the running (Cesaro) mean of q over the first j."""

    q: np.ndarray
    p: np.ndarray


def _project_entries(a, b, c, d):
    # nearest special-unitary matrix, in Cayley-Klein form
    qa = 0.5 * (a + d.conjugate())
    qb = 0.5 * (c - b.conjugate())
    norm = math.hypot(abs(qa), abs(qb))
    qa /= norm
    qb /= norm
    return qa, -qb.conjugate(), qb, qa.conjugate()


def _checked_initial(initial) -> tuple[complex, complex]:
    if initial is None:
        initial = ground_state()
    initial = np.asarray(initial, dtype=complex)
    if initial.shape != (2,):
        raise ValueError(f"initial state must have shape (2,), got {initial.shape}")
    norm = abs(initial[0]) ** 2 + abs(initial[1]) ** 2
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"initial state must be normalized, |state|^2 = {norm}")
    return complex(initial[0]), complex(initial[1])


def pump_trace(lp: LoopParams, cycles: int, initial=None) -> PumpTrace:
    """Excited-state weights q_j and their running means over `cycles` cycles.

    The cumulative operator is iterated one cycle at a time and projected
    back onto the group every RENORM_INTERVAL multiplications to keep long
    runs inside the rounding budget.
    """
    if cycles < 1:
        raise ValueError(f"cycles must be >= 1, got {cycles}")
    s0, s1 = _checked_initial(initial)
    u = build_loop_operator(lp)
    ua, ub = complex(u[0, 0]), complex(u[0, 1])
    uc, ud = complex(u[1, 0]), complex(u[1, 1])
    a, b = 1.0 + 0.0j, 0.0j
    c, d = 0.0j, 1.0 + 0.0j
    q = np.empty(cycles)
    for j in range(cycles):
        a, b, c, d = (
            ua * a + ub * c,
            ua * b + ub * d,
            uc * a + ud * c,
            uc * b + ud * d,
        )
        amp = c * s0 + d * s1
        q[j] = amp.real * amp.real + amp.imag * amp.imag
        if (j + 1) % RENORM_INTERVAL == 0:
            a, b, c, d = _project_entries(a, b, c, d)
    np.clip(q, 0.0, 1.0, out=q)  # rounding can nudge |amp|^2 a hair past 1
    p = np.cumsum(q) / np.arange(1, cycles + 1)
    return PumpTrace(q=q, p=p)


def propagate_state(lp: LoopParams, cycles: int, initial=None):
    """Apply the loop operator `cycles` times to a state, with no rescaling.

    Returns (final_state, max_norm_error) where max_norm_error is the
    largest deviation of the state norm from 1 seen along the way.  This
    is the raw measure-preservation probe: nothing is renormalized.
    """
    if cycles < 1:
        raise ValueError(f"cycles must be >= 1, got {cycles}")
    s0, s1 = _checked_initial(initial)
    u = build_loop_operator(lp)
    ua, ub = complex(u[0, 0]), complex(u[0, 1])
    uc, ud = complex(u[1, 0]), complex(u[1, 1])
    worst = 0.0
    for _ in range(cycles):
        s0, s1 = ua * s0 + ub * s1, uc * s0 + ud * s1
        err = abs(
            math.sqrt(
                s0.real * s0.real
                + s0.imag * s0.imag
                + s1.real * s1.real
                + s1.imag * s1.imag
            )
            - 1.0
        )
        if err > worst:
            worst = err
    return np.array([s0, s1]), worst


def z2_index(field_sign: int, spin_sign: int) -> int:
    """Two-valued alignment index: 0 when the field and spin z-signs agree,
    1 when they oppose.

    Raises ZeroFieldError for a vanishing field sign (gap closed, index
    undefined).
    """
    if field_sign == 0:
        raise ZeroFieldError("field sign is zero; the index is undefined")
    if field_sign not in (-1, 1) or spin_sign not in (-1, 1):
        raise ValueError("signs must be -1 or +1")
    return 0 if field_sign * spin_sign > 0 else 1


@dataclass(frozen=True)
class FieldCycle1D:
    """One period of the scalar drive b0 * (a + cos(omega * t)) along z."""

    a: float
    omega: float = 1.0
    b0: float = 1.0

    def __post_init__(self):
        for name, value in (("a", self.a), ("omega", self.omega), ("b0", self.b0)):
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.omega <= 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.b0 <= 0.0:
            raise ValueError(f"b0 must be positive, got {self.b0}")


@dataclass(frozen=True)
class PumpEvent1D:
    """A zero of the drive within one cycle, located by its phase fraction."""

    time_fraction: float
    transversal: bool


def cosine_cycle_zeros(offset: float) -> tuple[PumpEvent1D, ...]:
    """Zeros of offset + cos(2*pi*x) for x in [0, 1).

    Two transversal crossings for |offset| < 1, a single tangential touch
    at |offset| = 1, nothing otherwise.  Fractions come back ascending.
    """
    if abs(offset) > 1.0:
        return ()
    if offset == 1.0:
        return (PumpEvent1D(0.5, transversal=False),)
    if offset == -1.0:
        return (PumpEvent1D(0.0, transversal=False),)
    x = math.acos(-offset) / TWO_PI
    return (
        PumpEvent1D(x, transversal=True),
        PumpEvent1D(1.0 - x, transversal=True),
    )


def pump_1d(fc: FieldCycle1D) -> tuple[PumpEvent1D, ...]:
    """Field-reversal events of the 1D drive over one cycle, in time order."""
    return cosine_cycle_zeros(fc.a)


def trajectory_angles(lp: LoopParams, n: int) -> np.ndarray:
    """Accumulated rotation angles (j * delta) mod 2*pi for j = 1..n.

    delta is the per-cycle turn angle of the loop operator about its fixed
    axis.  Raises IdentityRotationError when the operator has no axis.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    aa = axis_angle_from_euler(euler_from_loop(lp))
    return (aa.delta * np.arange(1, n + 1)) % TWO_PI
