"""Importance density over the workspace."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class GaussianBump:
    mean: tuple[float, float]
    covariance: tuple[tuple[float, float], tuple[float, float]]
    weight: float = 1.0

    def __post_init__(self) -> None:
        cov = np.asarray(self.covariance, dtype=float)
        if cov.shape != (2, 2) or not np.all(np.isfinite(cov)):
            raise ValueError("covariance must be a finite 2x2 matrix")
        if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-12):
            raise ValueError("covariance must be symmetric")
        if np.linalg.eigvalsh(cov).min() <= 0.0:
            raise ValueError("covariance must be positive definite")
        if not self.weight > 0.0:
            raise ValueError("mixture weight must be positive")
        object.__setattr__(self, "mean", (float(self.mean[0]), float(self.mean[1])))
        object.__setattr__(self, "covariance", tuple(tuple(float(c) for c in row) for row in cov))
        object.__setattr__(self, "weight", float(self.weight))


@dataclass(frozen=True)
class DensityField:
    """Either exactly 1 everywhere, or ``floor + sum_k w_k exp(-0.5 d_k^T S_k^-1 d_k)``.

    Bumps are unnormalised: each peaks at its mixture weight.
    """

    kind: str = "uniform"
    components: tuple[GaussianBump, ...] = ()
    floor: float = 0.01

    def __post_init__(self) -> None:
        if self.kind not in ("uniform", "gaussian-mixture"):
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.kind == "gaussian-mixture":
            if not self.components:
                raise ValueError("gaussian-mixture needs at least one component")
            if not self.floor > 0.0:
                raise ValueError("density floor must be positive")
        # canonical order so the floating-point sum is independent of input order
        comps = sorted(self.components, key=lambda c: (c.mean, c.covariance, c.weight))
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def uniform(cls) -> "DensityField":
        return cls()

    @classmethod
    def mixture(cls, components: Sequence[GaussianBump], floor: float = 0.01) -> "DensityField":
        return cls("gaussian-mixture", tuple(components), floor)

    @classmethod
    def bimodal(cls) -> "DensityField":
        """Two bumps at (2, 2) and (4, 4) with covariance 0.9 I."""
        cov = ((0.9, 0.0), (0.0, 0.9))
        return cls.mixture([GaussianBump((2.0, 2.0), cov), GaussianBump((4.0, 4.0), cov)])

    @property
    def is_uniform(self) -> bool:
        return self.kind == "uniform"

    def __call__(self, pts) -> np.ndarray:
        """Evaluate at an ``(m, 2)`` array of points (or a single point)."""
        pts = np.asarray(pts, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if self.is_uniform:
            out = np.ones(len(pts))
        else:
            out = np.full(len(pts), self.floor)
            for comp in self.components:
                d = pts - np.asarray(comp.mean)
                prec = np.linalg.inv(np.asarray(comp.covariance))
                quad = (d @ prec * d).sum(axis=1)
                out = out + comp.weight * np.exp(-0.5 * quad)
        return out[0] if single else out


def eval_density(field: DensityField, q) -> float:
    return float(field(np.asarray(q, dtype=float)))
