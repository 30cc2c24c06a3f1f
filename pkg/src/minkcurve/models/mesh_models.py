"""
Domain records for maximal graphs over the projected convex domain.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import List

import numpy as np

# fraction of the domain used for interior error norms
CORE_SHRINK = 0.7


@dataclass(frozen=True, eq=False)
class ConvexDomainMesh:
    """
    Conforming triangulation of the domain bounded by the projected curve.
    The first n_boundary vertices are the boundary polygon, counterclockwise,
    and boundary_samples[i] is the curve sample under boundary vertex i.
    Triangles are stored counterclockwise.
    """
    vertices: np.ndarray
    triangles: np.ndarray
    boundary_samples: np.ndarray
    target_h: float

    @property
    def n_boundary(self) -> int:
        return len(self.boundary_samples)

    @property
    def boundary_polygon(self) -> np.ndarray:
        return self.vertices[: self.n_boundary]

    @property
    def interior(self) -> np.ndarray:
        return np.arange(self.n_boundary, len(self.vertices))

    @cached_property
    def areas(self) -> np.ndarray:
        a, b, c = (self.vertices[self.triangles[:, k]] for k in range(3))
        return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))

    @cached_property
    def shape_gradients(self) -> np.ndarray:
        """grad(phi_k) on each triangle, shape (n_triangles, 3, 2)."""
        x = self.vertices[self.triangles]
        twice = 2.0 * self.areas
        grads = np.empty((len(self.triangles), 3, 2))
        for k in range(3):
            i, j = (k + 1) % 3, (k + 2) % 3
            grads[:, k, 0] = (x[:, i, 1] - x[:, j, 1]) / twice
            grads[:, k, 1] = (x[:, j, 0] - x[:, i, 0]) / twice
        return grads

    def gradients(self, u: np.ndarray) -> np.ndarray:
        """Du on each triangle, shape (n_triangles, 2)."""
        return np.einsum("tkd,tk->td", self.shape_gradients, u[self.triangles])

    @cached_property
    def centroid(self) -> np.ndarray:
        """Area centroid of the boundary polygon."""
        x, y = self.boundary_polygon[:, 0], self.boundary_polygon[:, 1]
        xn, yn = np.roll(x, -1), np.roll(y, -1)
        w = x * yn - xn * y
        area = 0.5 * np.sum(w)
        return np.array([np.sum((x + xn) * w), np.sum((y + yn) * w)]) / (6.0 * area)

    def core_triangles(self, shrink: float = CORE_SHRINK) -> np.ndarray:
        """
        Triangles whose centroid lies in the boundary polygon scaled by
        `shrink` about its centroid. The region does not depend on h.
        """
        c = self.centroid
        q = c + (self.vertices[self.triangles].mean(axis=1) - c) / shrink
        a = self.boundary_polygon
        d = np.roll(a, -1, axis=0) - a
        rel = q[:, None, :] - a[None, :, :]
        side = d[None, :, 0] * rel[..., 1] - d[None, :, 1] * rel[..., 0]
        return np.all(side > 0, axis=1)


@dataclass(frozen=True, eq=False)
class GraphSurface:
    """Piecewise-linear height u over the mesh; spacelike iff grad_bound < 1."""
    mesh: ConvexDomainMesh
    u: np.ndarray
    grad_bound: float

    def points(self) -> np.ndarray:
        return np.column_stack([self.mesh.vertices, self.u])


@dataclass
class SolveLog:
    iterations: int = 0
    converged: bool = False
    area_history: List[float] = field(default_factory=list)
    grad_history: List[float] = field(default_factory=list)
    residual_history: List[float] = field(default_factory=list)
    step_history: List[float] = field(default_factory=list)
