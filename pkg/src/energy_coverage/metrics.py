"""Coverage-quality and weight-convergence measures."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .density import DensityField
from .geometry import PowerCell, second_moment
from .graph import CommGraph


def locational_cost(cells: Sequence[PowerCell], positions, weights, density: DensityField) -> float:
    """Sum over cells of the integral of ``0.5 (|q - p_i|^2 - w_i) phi(q)``.

    Cells must already carry their masses.
    """
    pos = np.asarray(positions, dtype=float).reshape(-1, 2)
    total = 0.0
    for cell in cells:
        if cell.polygon is None:
            continue
        i = cell.owner
        total += 0.5 * (second_moment(cell.polygon, density, pos[i]) - weights[i] * cell.mass)
    return float(total)


def weight_energy_products(weights, e_dots) -> np.ndarray:
    return np.asarray(weights, dtype=float) * np.asarray(e_dots, dtype=float)


def convergence_values(weights, e_dots, e_refs) -> np.ndarray:
    """Per-robot ``w_i Edot_i / E_i^ref``."""
    return weight_energy_products(weights, e_dots) / np.asarray(e_refs, dtype=float)


def convergence_cost(graph: CommGraph, c) -> float:
    """``sum_i sum_{j in N_i} (c_i - c_j)^2``; every edge is counted from both ends."""
    c = np.asarray(c, dtype=float)
    diff = c[:, None] - c[None, :]
    return float(np.sum(np.where(graph.adjacency, diff * diff, 0.0)))


def relative_spread(values) -> float:
    """``(max - min) / mean``; zero for a single value."""
    v = np.asarray(values, dtype=float)
    return float((v.max() - v.min()) / v.mean()) if len(v) > 1 else 0.0


def lyapunov_weight_energy(weights, e_dots) -> float:
    """``sum_i 0.5 (w_i Edot_i)^2``."""
    x = weight_energy_products(weights, e_dots)
    return float(0.5 * np.dot(x, x))
