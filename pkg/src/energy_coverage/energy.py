"""Battery depletion model with piecewise-constant coefficients.

Energies are in percent of full charge; rates are positive magnitudes in
percent per step.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

RATE_CHANGE_THRESHOLD = 0.2


class EnergyStateError(ValueError):
    """Raised when energy readings contradict the depletion model."""


@dataclass(frozen=True)
class Segment:
    from_step: int
    alpha: float
    beta: float


@dataclass(frozen=True)
class EnergyProfile:
    e_init: float
    schedule: tuple[Segment, ...]

    def __post_init__(self) -> None:
        if not 0.0 < self.e_init <= 100.0:
            raise ValueError("e_init must lie in (0, 100]")
        sched = tuple(self.schedule)
        if not sched:
            raise ValueError("schedule needs at least one segment")
        if sched[0].from_step != 0:
            raise ValueError("schedule must start at step 0")
        for a, b in zip(sched, sched[1:]):
            if b.from_step <= a.from_step:
                raise ValueError("schedule from_step values must be strictly increasing")
        for seg in sched:
            if not seg.alpha > 0.0:
                raise ValueError("alpha must be > 0 (idle robots still consume energy)")
            if not seg.beta >= 0.0:
                raise ValueError("beta must be >= 0")
        object.__setattr__(self, "schedule", sched)

    @classmethod
    def constant(cls, e_init: float, alpha: float, beta: float) -> "EnergyProfile":
        return cls(e_init, (Segment(0, alpha, beta),))

    def segment_at(self, step: int) -> Segment:
        active = self.schedule[0]
        for seg in self.schedule:
            if seg.from_step <= step:
                active = seg
            else:
                break
        return active


@dataclass(frozen=True)
class EnergyState:
    e_current: float
    e_dot_last: float
    e_dot_prev: float
    e_init_ref: float

    @classmethod
    def fresh(cls, e_init: float, prior_rate: float) -> "EnergyState":
        """Full-reserve state whose rate history holds ``prior_rate``."""
        return cls(e_init, prior_rate, prior_rate, e_init)


def depletion_rate(alpha: float, beta: float, speed: float) -> float:
    return alpha + beta * abs(speed)


def step_energy(state: EnergyState, rate: float, dt: float = 1.0) -> EnergyState:
    if not (rate > 0.0 and dt > 0.0):
        raise ValueError("rate and dt must be positive")
    return replace(
        state,
        e_current=max(state.e_current - rate * dt, 0.0),
        e_dot_prev=state.e_dot_last,
        e_dot_last=rate,
    )


def estimate_rate_online(e_prev: float, e_now: float, dt: float = 1.0) -> float:
    """Depletion rate from two consecutive energy readings."""
    rate = (e_prev - e_now) / dt
    if rate <= 0.0:
        raise EnergyStateError(
            f"energy went from {e_prev} to {e_now}; the model has no regeneration and alpha > 0"
        )
    return rate


def detect_rate_change_and_reset(
    state: EnergyState,
    threshold: float = RATE_CHANGE_THRESHOLD,
    two_sided: bool = True,
) -> tuple[bool, EnergyState]:
    """Re-anchor the reference energy when the depletion rate jumps.

    With ``two_sided=False`` only increases larger than ``threshold`` count.
    An empty battery is never used as a reference: the apparent rate drop
    caused by clamping at zero would otherwise set ``e_init_ref`` to 0.
    """
    if state.e_current <= 0.0:
        return False, state
    diff = state.e_dot_last - state.e_dot_prev
    changed = abs(diff) > threshold if two_sided else diff > threshold
    if changed:
        return True, replace(state, e_init_ref=state.e_current)
    return False, state


def energy_replay(e_init: float, rates: Sequence[float], dt: float = 1.0) -> list[float]:
    """Energy levels obtained by integrating ``rates`` from ``e_init`` (clamped at 0)."""
    out = [e_init]
    for r in rates:
        out.append(max(out[-1] - r * dt, 0.0))
    return out
