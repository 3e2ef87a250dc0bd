"""Power diagrams clipped to a convex workspace, and density moments over cells.

Polygons are plain ``(k, 2)`` float arrays wrapped in :class:`ConvexPolygon`;
an empty region is represented by ``None`` everywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

if TYPE_CHECKING:
    from .density import DensityField

GEOM_TOL = 1e-9
QUAD_ORDER = 16


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _dedupe(v: np.ndarray, tol: float = GEOM_TOL) -> np.ndarray:
    """Drop consecutive (cyclic) vertices closer than ``tol``."""
    if len(v) < 2:
        return v
    keep = [0]
    for k in range(1, len(v)):
        if np.hypot(*(v[k] - v[keep[-1]])) > tol:
            keep.append(k)
    if len(keep) > 1 and np.hypot(*(v[keep[-1]] - v[keep[0]])) <= tol:
        keep.pop()
    return v[keep]


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Convex polygon with counter-clockwise vertices."""

    vertices: np.ndarray
    area: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        v = np.array(self.vertices, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(v)):
            raise ValueError("polygon vertices must be finite")
        v = _dedupe(v)
        if len(v) < 3:
            raise ValueError("polygon needs at least 3 distinct vertices")
        area = _signed_area(v)
        if area <= 0.0:
            raise ValueError("polygon must be counter-clockwise with positive area")
        e = np.roll(v, -1, axis=0) - v
        cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
        scale = np.hypot(e[:, 0], e[:, 1]) * np.roll(np.hypot(e[:, 0], e[:, 1]), -1)
        if np.any(cross < -GEOM_TOL * np.maximum(scale, 1.0)):
            raise ValueError("polygon is not convex")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "area", area)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConvexPolygon):
            return NotImplemented
        return self.vertices.shape == other.vertices.shape and bool(np.all(self.vertices == other.vertices))

    def __hash__(self) -> int:
        return hash(self.vertices.tobytes())

    @classmethod
    def rectangle(cls, xmin: float, ymin: float, xmax: float, ymax: float) -> "ConvexPolygon":
        return cls(np.array([[xmin, ymin], [xmax, ymin], [xmax, ymax], [xmin, ymax]]))

    @property
    def centroid(self) -> np.ndarray:
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        cross = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
        return ((v + w) * cross[:, None]).sum(axis=0) / (6.0 * self.area)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        lo, hi = self.vertices.min(axis=0), self.vertices.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def contains(self, pts: np.ndarray, tol: float = GEOM_TOL) -> np.ndarray:
        """Boolean mask of points inside (or within ``tol`` of) the polygon."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        v = self.vertices
        e = np.roll(v, -1, axis=0) - v
        lengths = np.hypot(e[:, 0], e[:, 1])
        # outward distance to each edge line; CCW so inside has cross >= 0
        d = ((pts[:, None, 0] - v[None, :, 0]) * e[None, :, 1]
             - (pts[:, None, 1] - v[None, :, 1]) * e[None, :, 0]) / lengths
        return np.all(d <= tol, axis=1)

    def project(self, p: np.ndarray) -> np.ndarray:
        """Nearest point of the polygon to ``p``."""
        p = np.asarray(p, dtype=float)
        if self.contains(p)[0]:
            return p.copy()
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        e = w - v
        t = np.clip(((p - v) * e).sum(axis=1) / (e * e).sum(axis=1), 0.0, 1.0)
        cand = v + t[:, None] * e
        k = int(np.argmin(((cand - p) ** 2).sum(axis=1)))
        return cand[k]

    def translated(self, offset) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.asarray(offset, dtype=float))


def _clip_array(v: np.ndarray, normal: np.ndarray, offset: float) -> Optional[np.ndarray]:
    """Keep the part of ``v`` with ``q . normal <= offset``; ``normal`` is unit length."""
    s = v @ normal - offset
    if np.all(s <= GEOM_TOL):
        return v
    if np.all(s >= -GEOM_TOL):
        return None
    out = []
    k = len(v)
    for a in range(k):
        b = (a + 1) % k
        sa, sb = s[a], s[b]
        if sa <= 0.0:
            out.append(v[a])
        if (sa < 0.0 < sb) or (sb < 0.0 < sa):
            t = sa / (sa - sb)
            out.append(v[a] + t * (v[b] - v[a]))
    if len(out) < 3:
        return None
    res = _dedupe(np.array(out))
    if len(res) < 3 or _signed_area(res) <= GEOM_TOL * GEOM_TOL:
        return None
    return res


def halfplane_clip(poly: ConvexPolygon, point, normal) -> Optional[ConvexPolygon]:
    """Intersect ``poly`` with the closed half-plane ``(q - point) . normal <= 0``.

    Returns ``None`` when the intersection has no interior.
    """
    n = np.asarray(normal, dtype=float)
    norm = float(np.hypot(*n))
    if not np.isfinite(norm) or norm <= GEOM_TOL:
        raise ValueError("half-plane normal must be nonzero and finite")
    n = n / norm
    res = _clip_array(poly.vertices, n, float(np.dot(np.asarray(point, dtype=float), n)))
    if res is None:
        return None
    if res is poly.vertices:
        return poly
    return ConvexPolygon(res)


@dataclass
class PowerCell:
    owner: int
    polygon: Optional[ConvexPolygon]
    mass: float = 0.0
    centroid: Optional[np.ndarray] = None

    @property
    def area(self) -> float:
        return 0.0 if self.polygon is None else self.polygon.area

    @property
    def empty(self) -> bool:
        return self.polygon is None


def power_halfplanes(positions: np.ndarray, weights: np.ndarray, i: int):
    """Unit normals and offsets of the constraints ``q . n <= c`` bounding site ``i``.

    Also returns a flag that is True when a coincident competitor owns the whole
    region (larger weight, or equal weight and lower id).
    """
    d = positions - positions[i]
    dist = np.hypot(d[:, 0], d[:, 1])
    c = 0.5 * ((positions * positions).sum(axis=1) - positions[i] @ positions[i]
               + weights[i] - weights)
    others = np.arange(len(positions)) != i
    coincident = others & (dist <= GEOM_TOL)
    dominated = bool(np.any(coincident & ((weights > weights[i])
                                          | ((weights == weights[i]) & (np.arange(len(positions)) < i)))))
    use = others & ~coincident
    return d[use] / dist[use, None], c[use] / dist[use], dominated


def compute_power_diagram(positions, weights, domain: ConvexPolygon) -> list[PowerCell]:
    """Power diagram of weighted sites clipped to ``domain``.

    Cell ``i`` is the set of domain points whose power distance
    ``|q - p_i|^2 - w_i`` is minimal at ``i``. Constraints are applied most
    violated first until the cell lies inside every half-plane.
    """
    pos = np.asarray(positions, dtype=float).reshape(-1, 2)
    w = np.asarray(weights, dtype=float).reshape(-1)
    if len(pos) == 0 or len(pos) != len(w):
        raise ValueError("need one weight per site and at least one site")
    if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(w))):
        raise ValueError("site positions and weights must be finite")
    cells = []
    for i in range(len(pos)):
        normals, offsets, dominated = power_halfplanes(pos, w, i)
        v: Optional[np.ndarray] = None if dominated else domain.vertices
        while v is not None and len(offsets):
            viol = (v @ normals.T - offsets).max(axis=0)
            j = int(np.argmax(viol))
            if viol[j] <= GEOM_TOL:
                break
            v = _clip_array(v, normals[j], offsets[j])
        if v is None:
            poly = None
        elif v is domain.vertices:
            poly = domain
        else:
            poly = ConvexPolygon(v)
        cells.append(PowerCell(owner=i, polygon=poly))
    return cells


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _unit_triangle_rule(order: int = QUAD_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Collapsed tensor Gauss-Legendre rule on the reference triangle.

    Returns barycentric-style coefficients ``(a, b)`` so that a point is
    ``v0 + a (v1 - v0) + b (v2 - v0)``, plus weights summing to 1/2.
    """
    if order not in _GL_CACHE:
        x, wx = np.polynomial.legendre.leggauss(order)
        u, wu = 0.5 * (x + 1.0), 0.5 * wx
        uu, vv = np.meshgrid(u, u, indexing="ij")
        ww = np.outer(wu, wu) * uu
        a = uu * (1.0 - vv)
        b = uu * vv
        _GL_CACHE[order] = (np.stack([a.ravel(), b.ravel()], axis=1), ww.ravel())
    return _GL_CACHE[order]


def quadrature_rule(poly: ConvexPolygon, order: int = QUAD_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Points and weights integrating over ``poly`` via a fan triangulation."""
    ab, wt = _unit_triangle_rule(order)
    v = poly.vertices
    v0 = v[0]
    e1 = v[1:-1] - v0
    e2 = v[2:] - v0
    jac = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    pts = v0 + ab[None, :, 0:1] * e1[:, None, :] + ab[None, :, 1:2] * e2[:, None, :]
    wts = jac[:, None] * wt[None, :]
    return pts.reshape(-1, 2), wts.ravel()


def cell_moments(poly: Optional[ConvexPolygon], density: "DensityField") -> tuple[float, Optional[np.ndarray]]:
    """Mass and mass centroid of ``poly`` under ``density``.

    An empty cell returns ``(0.0, None)``.
    """
    if poly is None:
        return 0.0, None
    if density.is_uniform:
        return poly.area, poly.centroid
    pts, wts = quadrature_rule(poly)
    f = wts * density(pts)
    mass = float(f.sum())
    return mass, (f @ pts) / mass


def second_moment(poly: Optional[ConvexPolygon], density: "DensityField", about) -> float:
    """Integral of ``|q - about|^2 phi(q)`` over ``poly``."""
    if poly is None:
        return 0.0
    about = np.asarray(about, dtype=float)
    if density.is_uniform:
        # exact for polygons: translate so ``about`` is the origin
        v = poly.vertices - about
        w = np.roll(v, -1, axis=0)
        cross = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
        ixx = (cross * (v[:, 1] ** 2 + v[:, 1] * w[:, 1] + w[:, 1] ** 2)).sum() / 12.0
        iyy = (cross * (v[:, 0] ** 2 + v[:, 0] * w[:, 0] + w[:, 0] ** 2)).sum() / 12.0
        return float(ixx + iyy)
    pts, wts = quadrature_rule(poly)
    r2 = ((pts - about) ** 2).sum(axis=1)
    return float((wts * density(pts) * r2).sum())


def fill_moments(cells: Sequence[PowerCell], density: "DensityField") -> list[PowerCell]:
    for cell in cells:
        cell.mass, cell.centroid = cell_moments(cell.polygon, density)
    return list(cells)
