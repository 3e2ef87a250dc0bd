"""Robot communication graph and its spectral connectivity."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

JACOBI_TOL = 1e-10
CONNECTED_TOL = 1e-9


class DisconnectedGraphError(ValueError):
    """The communication graph does not connect every robot."""


@dataclass(frozen=True)
class GraphPolicy:
    kind: str = "complete"
    radius: Optional[float] = None
    frozen: bool = True

    def __post_init__(self) -> None:
        if self.kind not in ("complete", "disk"):
            raise ValueError(f"unknown graph policy {self.kind!r}")
        if self.kind == "disk" and not (self.radius is not None and self.radius > 0.0):
            raise ValueError("disk policy needs a positive radius")


@dataclass(frozen=True, eq=False)
class CommGraph:
    adjacency: np.ndarray
    policy: GraphPolicy = GraphPolicy()

    def __post_init__(self) -> None:
        a = np.array(self.adjacency, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if np.any(a != a.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(a)):
            raise ValueError("self-loops are not allowed")
        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[i])

    def degree(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def with_edge(self, i: int, j: int) -> "CommGraph":
        a = self.adjacency.copy()
        a[i, j] = a[j, i] = True
        return CommGraph(a, self.policy)

    def components(self) -> int:
        """Number of connected components, by breadth-first search."""
        seen = np.zeros(self.n, dtype=bool)
        count = 0
        for start in range(self.n):
            if seen[start]:
                continue
            count += 1
            seen[start] = True
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for v in self.neighbors(u):
                    if not seen[v]:
                        seen[v] = True
                        queue.append(v)
        return count

    def is_connected(self) -> bool:
        return self.components() == 1


def build_graph(positions, policy: GraphPolicy = GraphPolicy(), require_connected: bool = True) -> CommGraph:
    pos = np.asarray(positions, dtype=float).reshape(-1, 2)
    n = len(pos)
    if n < 1:
        raise ValueError("need at least one robot")
    if policy.kind == "complete":
        adj = ~np.eye(n, dtype=bool)
    else:
        d = np.hypot(pos[:, None, 0] - pos[None, :, 0], pos[:, None, 1] - pos[None, :, 1])
        adj = (d <= policy.radius) & ~np.eye(n, dtype=bool)
    g = CommGraph(adj, policy)
    if require_connected and not g.is_connected():
        raise DisconnectedGraphError(
            f"communication graph has {g.components()} components; robots must form a connected network"
        )
    return g


def laplacian(g: CommGraph) -> np.ndarray:
    a = g.adjacency.astype(float)
    return np.diag(a.sum(axis=1)) - a


def jacobi_eigenvalues(sym: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending."""
    a = np.array(sym, dtype=float)
    n = a.shape[0]
    if n == 1:
        return a.diagonal().copy()
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        if np.sqrt(2.0 * np.sum(a[iu] ** 2)) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:
                    t = 0.5 / theta  # theta^2 would overflow
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # rotate rows/columns p and q
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.sort(a.diagonal())


def algebraic_connectivity(g: CommGraph) -> float:
    """Second-smallest Laplacian eigenvalue; 0 for a single robot or a disconnected graph."""
    if g.n < 2:
        return 0.0
    lam = jacobi_eigenvalues(laplacian(g))
    return max(float(lam[1]), 0.0)
