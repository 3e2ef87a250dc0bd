"""Weight-adaptation laws and position laws for the four coverage controllers.

EAC
    energy-aware: balances ``w_i Edot_i / E_i^init`` across neighbours.
ATC
    adaptive trust weighting with trust ``(k_e / Edot_i)^2``; equilibrates
    additive offsets ``w_i - e_i``.
WMTC
    constant unit weights (plain move-to-centroid).
PBC
    weights ``E/E_max - 1`` and an energy-scaled, saturated velocity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .energy import EnergyStateError
from .geometry import ConvexPolygon

CONTROLLERS = ("EAC", "ATC", "WMTC", "PBC")
MASS_FLOOR = 1e-6
WEIGHT_FLOOR = 0.05


@dataclass(frozen=True)
class Gains:
    """Controller gains; ``k_w=None`` means ``0.1 * M(Q) / n`` at run time."""

    k_p: float = 1.0
    k_w: Optional[float] = None
    k_e: float = 1.0
    alpha_atc: float = 1.0
    v_max: float = 0.4
    dt: float = 1.0
    eps_position: float = 0.01
    delta_energy: float = 1.0
    w_floor: float = WEIGHT_FLOOR
    mass_floor: float = MASS_FLOOR

    def __post_init__(self) -> None:
        for name, value in vars(self).items():
            if value is None and name == "k_w":
                continue
            if not (isinstance(value, (int, float)) and np.isfinite(value) and value > 0):
                raise ValueError(f"gain {name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class NeighborReport:
    robot: int
    weight: float
    e_init_ref: float
    e_dot: float


def _check_reports(reports: Sequence[NeighborReport]) -> None:
    for r in reports:
        if not r.weight > 0.0:
            raise EnergyStateError(f"robot {r.robot} reported non-positive weight {r.weight}")
        if not (r.e_dot > 0.0 and r.e_init_ref > 0.0):
            raise EnergyStateError(f"robot {r.robot} reported a non-positive energy quantity")


def eac_weight_delta(me: NeighborReport, neighbors: Sequence[NeighborReport], mass: float, k_w: float) -> float:
    """Weight rate of the energy-aware law.

    ``-(k_w / M) * sum_j (w_i / w_j - (E_i / E_j) * (Edot_j / Edot_i))``
    """
    _check_reports([me, *neighbors])
    total = 0.0
    for nb in neighbors:
        total += me.weight / nb.weight - (me.e_init_ref / nb.e_init_ref) * (nb.e_dot / me.e_dot)
    return -(k_w / mass) * total


def atc_trust(e_dot: float, k_e: float) -> float:
    return (k_e / e_dot) ** 2


def atc_weight_delta(
    me: NeighborReport,
    neighbors: Sequence[NeighborReport],
    mass: float,
    k_w: float,
    k_e: float,
    alpha_atc: float = 1.0,
) -> float:
    _check_reports([me, *neighbors])
    e_me = atc_trust(me.e_dot, k_e)
    total = 0.0
    for nb in neighbors:
        total += (nb.weight - me.weight) - (atc_trust(nb.e_dot, k_e) - e_me)
    return alpha_atc * k_w / (2.0 * mass) * total


def pbc_weight(e_current: float, e_max: float) -> float:
    return e_current / e_max - 1.0


def wmtc_weight() -> float:
    return 1.0


def pbc_velocity(p, centroid, e_current: float, e_max: float, k_p: float) -> np.ndarray:
    """Saturated move-to-centroid velocity with gain ``k_p * E / E_max``."""
    d = np.asarray(centroid, dtype=float) - np.asarray(p, dtype=float)
    dist = float(np.hypot(*d))
    if dist > 1.0:
        d = d / dist
    return k_p * (e_current / e_max) * d


def clamp_speed(v: np.ndarray, v_max: float) -> np.ndarray:
    s = float(np.hypot(*v))
    return v * (v_max / s) if s > v_max else v


def position_step(p, centroid, gains: Gains, domain: Optional[ConvexPolygon] = None) -> np.ndarray:
    """One move-to-centroid step, speed capped at ``v_max`` and kept inside ``domain``."""
    p = np.asarray(p, dtype=float)
    v = clamp_speed(gains.k_p * (np.asarray(centroid, dtype=float) - p), gains.v_max)
    new = p + v * gains.dt
    return domain.project(new) if domain is not None else new
