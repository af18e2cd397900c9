"""
Graded axisymmetric triangle mesh on the meridian half-plane (rho, zeta).

Charges sit on the symmetry axis rho = 0 and are mesh nodes. Spacing grows
geometrically away from the charges and the midpoints between neighbouring
charges, which keeps the mesh mirror symmetric for symmetric charge layouts.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from config.settings import (
    STATIC_CORE_CELLS,
    STATIC_GROWTH,
    STATIC_OUTER_FACTOR,
    STATIC_QUADRATURE_LEVEL,
)
from physics.errors import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass
class GridConfig:
    """Resolution controls for the static solver."""

    core_cells: int = STATIC_CORE_CELLS
    growth: float = STATIC_GROWTH
    outer_factor: float = STATIC_OUTER_FACTOR
    coarse_cells: int = 12
    quadrature_level: int = STATIC_QUADRATURE_LEVEL
    refine_layers: float = 3.0

    def validate(self):
        if self.core_cells < 2:
            raise ConfigurationError("core_cells must be at least 2", path='grid.core_cells')
        if not 1.0 < self.growth <= 2.0:
            raise ConfigurationError("growth must lie in (1, 2]", path='grid.growth')
        if self.outer_factor < 4.0:
            raise ConfigurationError("outer_factor must be at least 4", path='grid.outer_factor')
        if self.coarse_cells < 4:
            raise ConfigurationError("coarse_cells must be at least 4", path='grid.coarse_cells')
        if not 0 <= self.quadrature_level <= 5:
            raise ConfigurationError("quadrature_level must lie in [0, 5]", path='grid.quadrature_level')
        return self

    def to_dict(self) -> dict:
        return {
            'core_cells': self.core_cells,
            'growth': self.growth,
            'outer_factor': self.outer_factor,
            'coarse_cells': self.coarse_cells,
            'quadrature_level': self.quadrature_level,
            'refine_layers': self.refine_layers,
        }


@dataclass
class QuadratureRule:
    """Quadrature points on the mesh; each point belongs to one triangle."""

    triangle: np.ndarray
    rho: np.ndarray
    zeta: np.ndarray
    weight: np.ndarray

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.rho, self.zeta])


@dataclass
class AxisymmetricMesh:
    rho: np.ndarray
    zeta: np.ndarray
    triangles: np.ndarray
    grads: np.ndarray
    areas: np.ndarray
    centroids: np.ndarray
    quadrature: QuadratureRule
    anchors: np.ndarray
    h_min: float
    radius: float
    zeta_center: float
    charge_nodes: List[int] = field(default_factory=list)

    @property
    def shape(self):
        return (self.rho.size, self.zeta.size)

    @property
    def num_nodes(self) -> int:
        return self.rho.size * self.zeta.size

    @property
    def nodes(self) -> np.ndarray:
        R, Z = np.meshgrid(self.rho, self.zeta, indexing='ij')
        return np.column_stack([R.ravel(), Z.ravel()])

    def node_index(self, i: int, j: int) -> int:
        return i * self.zeta.size + j

    @property
    def axis_nodes(self) -> np.ndarray:
        return np.array([self.node_index(0, j) for j in range(self.zeta.size)])

    @property
    def outer_nodes(self) -> np.ndarray:
        n_rho, n_zeta = self.shape
        idx = set(self.node_index(n_rho - 1, j) for j in range(n_zeta))
        idx.update(self.node_index(i, 0) for i in range(n_rho))
        idx.update(self.node_index(i, n_zeta - 1) for i in range(n_rho))
        return np.array(sorted(idx))

    def descriptor(self) -> dict:
        return {
            'n_rho': int(self.rho.size),
            'n_zeta': int(self.zeta.size),
            'triangles': int(self.triangles.shape[0]),
            'quadrature_points': int(self.quadrature.weight.size),
            'h_min': float(self.h_min),
            'radius': float(self.radius),
        }


def _march(start: float, stop: float, h_min: float, growth: float, h_max: float) -> List[float]:
    """Geometric spacing from ``start`` towards ``stop`` (exclusive of ``stop``)."""
    direction = 1.0 if stop >= start else -1.0
    points = [start]
    h = h_min
    position = start
    while True:
        nxt = position + direction * h
        if direction * (stop - nxt) <= 0.5 * h:
            break
        points.append(nxt)
        position = nxt
        h = min(h * growth, h_max)
    return points


def _graded_segment(left: float, right: float, h_min: float, growth: float, h_max: float) -> List[float]:
    """Nodes on [left, right) refined at both ends and symmetric about the midpoint."""
    middle = 0.5 * (left + right)
    from_left = _march(left, middle, h_min, growth, h_max)
    from_right = [right - (p - left) for p in from_left]
    return from_left + [middle] + from_right[:0:-1]


def graded_axis(anchors: Sequence[float], h_min: float, growth: float, h_max: float,
                radius: float) -> np.ndarray:
    """Zeta coordinates: anchors, midpoints between them and graded tails of length ``radius``."""
    anchors = sorted(anchors)
    coords: List[float] = []
    tail = _march(anchors[0], anchors[0] - radius, h_min, growth, h_max)
    coords.extend(tail[1:])
    coords.append(anchors[0] - radius)
    for left, right in zip(anchors[:-1], anchors[1:]):
        coords.extend(_graded_segment(left, right, h_min, growth, h_max))
    upper = _march(anchors[-1], anchors[-1] + radius, h_min, growth, h_max)
    coords.extend(upper)
    coords.append(anchors[-1] + radius)
    return np.unique(np.array(coords, dtype=float))


def _subdivision_barycentrics(level: int) -> np.ndarray:
    """Barycentric centroids (l1, l2) of the 4**level uniform sub-triangles."""
    m = 2 ** level
    pts = []
    for i in range(m):
        for j in range(m - i):
            pts.append(((i + 1.0 / 3.0) / m, (j + 1.0 / 3.0) / m))
            if i + j <= m - 2:
                pts.append(((i + 2.0 / 3.0) / m, (j + 2.0 / 3.0) / m))
    return np.array(pts, dtype=float)


def _p1_gradients(vertices: np.ndarray):
    """Gradients (M, 2, 3) of the barycentric basis and signed doubled areas."""
    x = vertices[:, :, 0]
    y = vertices[:, :, 1]
    area2 = (x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0]) - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0])
    grads = np.empty((vertices.shape[0], 2, 3))
    grads[:, 0, 0] = y[:, 1] - y[:, 2]
    grads[:, 0, 1] = y[:, 2] - y[:, 0]
    grads[:, 0, 2] = y[:, 0] - y[:, 1]
    grads[:, 1, 0] = x[:, 2] - x[:, 1]
    grads[:, 1, 1] = x[:, 0] - x[:, 2]
    grads[:, 1, 2] = x[:, 1] - x[:, 0]
    grads /= area2[:, None, None]
    return grads, area2


def _triangulate(n_rho: int, zeta: np.ndarray, zeta_center: float) -> np.ndarray:
    """Split each rectangle into two triangles, diagonals mirrored about ``zeta_center``."""
    n_zeta = zeta.size
    tris = []
    for i in range(n_rho - 1):
        for j in range(n_zeta - 1):
            a = i * n_zeta + j
            b = (i + 1) * n_zeta + j
            c = i * n_zeta + j + 1
            d = (i + 1) * n_zeta + j + 1
            if 0.5 * (zeta[j] + zeta[j + 1]) < zeta_center:
                tris.append((a, b, d))
                tris.append((a, d, c))
            else:
                tris.append((c, d, b))
                tris.append((c, b, a))
    return np.array(tris, dtype=np.int64)


def build_quadrature(vertices: np.ndarray, areas: np.ndarray, refine: np.ndarray,
                     level: int) -> QuadratureRule:
    """Centroid rule everywhere, uniform subdivision of the ``refine`` triangles."""
    m = vertices.shape[0]
    coarse = np.flatnonzero(~refine)
    fine = np.flatnonzero(refine)
    centroids = vertices.mean(axis=1)

    tri_ids = [coarse]
    pts = [centroids[coarse]]
    weights = [areas[coarse]]
    if fine.size:
        bary = _subdivision_barycentrics(level)
        v0 = vertices[fine, 0, :][:, None, :]
        e1 = (vertices[fine, 1, :] - vertices[fine, 0, :])[:, None, :]
        e2 = (vertices[fine, 2, :] - vertices[fine, 0, :])[:, None, :]
        fine_pts = v0 + bary[None, :, 0:1] * e1 + bary[None, :, 1:2] * e2
        tri_ids.append(np.repeat(fine, bary.shape[0]))
        pts.append(fine_pts.reshape(-1, 2))
        weights.append(np.repeat(areas[fine] / bary.shape[0], bary.shape[0]))
    tri = np.concatenate(tri_ids)
    xy = np.concatenate(pts)
    w = np.concatenate(weights)
    order = np.argsort(tri, kind='stable')
    logger.debug("Quadrature: %d triangles, %d refined, %d points", m, fine.size, w.size)
    return QuadratureRule(triangle=tri[order], rho=xy[order, 0], zeta=xy[order, 1], weight=w[order])


def build_axisymmetric_mesh(anchors: Sequence[float], beta: float,
                            config: GridConfig = None) -> AxisymmetricMesh:
    """
    Build the meridian mesh for charges at axial positions ``anchors``.

    Args:
        anchors: Axial coordinates of the charges (may be empty)
        beta (float): Aether constant, sets the core length scale
        config (GridConfig): Resolution controls

    Returns:
        AxisymmetricMesh: Mesh with charge nodes and quadrature rule
    """
    config = (config or GridConfig()).validate()
    anchors = sorted(float(a) for a in anchors) or [0.0]
    separations = np.diff(anchors)
    length = min([beta] + [float(s) for s in separations])
    h_min = length / config.core_cells
    span = anchors[-1] - anchors[0]
    radius = config.outer_factor * max(span, beta)
    h_max = radius / config.coarse_cells

    zeta = graded_axis(anchors, h_min, config.growth, h_max, radius)
    rho_pts = _march(0.0, radius, h_min, config.growth, h_max) + [radius]
    rho = np.array(rho_pts, dtype=float)
    zeta_center = 0.5 * (anchors[0] + anchors[-1])

    triangles = _triangulate(rho.size, zeta, zeta_center)
    R, Z = np.meshgrid(rho, zeta, indexing='ij')
    node_xy = np.column_stack([R.ravel(), Z.ravel()])
    vertices = node_xy[triangles]
    grads, area2 = _p1_gradients(vertices)
    areas = 0.5 * np.abs(area2)
    centroids = vertices.mean(axis=1)

    # triangles within a few local diameters of a charge get the fine rule
    diam = np.sqrt(np.max(np.sum((vertices - np.roll(vertices, 1, axis=1)) ** 2, axis=2), axis=1))
    refine = np.zeros(triangles.shape[0], dtype=bool)
    for a in anchors:
        dist = np.hypot(centroids[:, 0], centroids[:, 1] - a)
        refine |= dist < config.refine_layers * diam
    quadrature = build_quadrature(vertices, areas, refine, config.quadrature_level)

    charge_nodes = [int(np.argmin(np.abs(zeta - a))) for a in anchors]
    mesh = AxisymmetricMesh(
        rho=rho,
        zeta=zeta,
        triangles=triangles,
        grads=grads,
        areas=areas,
        centroids=centroids,
        quadrature=quadrature,
        anchors=np.array(anchors),
        h_min=h_min,
        radius=radius,
        zeta_center=zeta_center,
        charge_nodes=charge_nodes,
    )
    logger.info(f"Built axisymmetric mesh: {mesh.descriptor()}")
    return mesh
