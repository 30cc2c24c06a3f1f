"""
Projection planes through the origin of R^3_1.

A spacelike plane is the Lorentz-orthogonal complement of a unit timelike
normal n; a lightlike plane is the complement of a null normal n, and its
projection also needs a null transversal n_star with <n, n_star> = 1.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from minkcurve.core import lorentz
from minkcurve.core.errors import DegeneratePlane

PLANE_TOL = 1e-12


class PlaneKind(str, Enum):
    SPACELIKE = "Spacelike"
    LIGHTLIKE = "Lightlike"


@dataclass(frozen=True, eq=False)
class ProjectionPlane:
    kind: PlaneKind
    normal: np.ndarray
    n_star: Optional[np.ndarray] = None

    def __post_init__(self):
        n = self.normal
        if self.kind == PlaneKind.SPACELIKE:
            if abs(lorentz.inner(n, n) + 1.0) > PLANE_TOL:
                raise DegeneratePlane(
                    "Spacelike plane needs a unit timelike normal",
                    {"normal": n.tolist(), "normSq": float(lorentz.inner(n, n))},
                )
            return
        if self.n_star is None:
            raise DegeneratePlane("Lightlike plane needs a transversal n_star")
        m = self.n_star
        gaps = (
            abs(float(lorentz.inner(n, n))),
            abs(float(lorentz.inner(m, m))),
            abs(float(lorentz.inner(n, m)) - 1.0),
        )
        if max(gaps) > PLANE_TOL:
            raise DegeneratePlane(
                "Lightlike plane needs <n,n> = <n*,n*> = 0 and <n,n*> = 1",
                {"normal": n.tolist(), "nStar": m.tolist(), "gaps": list(gaps)},
            )

    # ---------- constructors ----------
    @classmethod
    def spacelike(cls, normal) -> "ProjectionPlane":
        """Plane with the given timelike normal, rescaled to unit length and made future-directed."""
        n = lorentz.as_array(normal)
        if not lorentz.is_timelike(n):
            raise DegeneratePlane(
                "Normal of a spacelike plane must be timelike",
                {"normal": n.tolist(), "normSq": float(lorentz.inner(n, n))},
            )
        return cls(PlaneKind.SPACELIKE, lorentz.future(lorentz.unit(n)))

    @classmethod
    def lightlike(cls, normal, n_star=None) -> "ProjectionPlane":
        """
        Plane with the given null normal n = (a, b, c). The default
        transversal is n_star = (a, b, -c) / (2 c^2).
        """
        n = lorentz.as_array(normal)
        scale = max(1.0, float(lorentz.euclidean_sq(n)))
        if n[2] == 0.0 or abs(float(lorentz.inner(n, n))) > PLANE_TOL * scale:
            raise DegeneratePlane(
                "Normal of a lightlike plane must be a nonzero null vector",
                {"normal": n.tolist(), "normSq": float(lorentz.inner(n, n))},
            )
        if n_star is None:
            n_star = np.array([n[0], n[1], -n[2]]) / (2.0 * n[2] ** 2)
        return cls(PlaneKind.LIGHTLIKE, n, lorentz.as_array(n_star))

    # ---------- geometry ----------
    def project(self, v) -> np.ndarray:
        """sigma(v); broadcasts over leading axes."""
        v = lorentz.as_array(v)
        weight = lorentz.inner(v, self.normal)[..., None]
        if self.kind == PlaneKind.SPACELIKE:
            return v + weight * self.normal
        return v - weight * self.n_star

    def basis(self) -> np.ndarray:
        """
        Rows (e1, e2) spanning the plane. Orthonormal for a spacelike plane;
        (e1, n) with e1 unit spacelike for a lightlike plane.
        """
        n = self.normal
        if self.kind == PlaneKind.LIGHTLIKE:
            e1 = lorentz.unit(lorentz.cross(n, self.n_star))
            return np.stack([e1, n])
        # seed e1 from whichever axis projects least degenerately
        candidates = self.project(np.eye(3)[:2])
        seed = candidates[int(np.argmax(lorentz.inner(candidates, candidates)))]
        e1 = lorentz.unit(seed)
        e2 = lorentz.unit(lorentz.cross(e1, n))
        return np.stack([e1, e2])

    def coordinates(self, v) -> np.ndarray:
        """
        2D coordinates of sigma(v) in the plane basis. For a lightlike plane
        the second coordinate is <sigma(v), n_star>, the n-component.
        """
        w = self.project(v)
        e1, e2 = self.basis()
        if self.kind == PlaneKind.LIGHTLIKE:
            return np.stack([lorentz.inner(w, e1), lorentz.inner(w, self.n_star)], axis=-1)
        return np.stack([lorentz.inner(w, e1), lorentz.inner(w, e2)], axis=-1)
