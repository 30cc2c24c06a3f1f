"""
Domain records for the ruled surface X(s, t) = (1 - t) gamma0(s) + t gamma1(s)
spanned by a closed curve split into two arcs of equal length.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from minkcurve.models.curve_models import ClosedCurve


@dataclass(frozen=True, eq=False)
class RuledSurface:
    """
    gamma0(s) = gamma(start + s) and gamma1(s) = gamma(start + L_total - s)
    for s in [0, L], L = L_total / 2, sampled on an (Ns x Nt) lattice.
    The rulings join the two arcs; p = gamma0(0) and q = gamma0(L).
    """
    curve: ClosedCurve = field(repr=False)
    start: float
    half_length: float
    s: np.ndarray
    t: np.ndarray
    gamma0: np.ndarray
    tangents0: np.ndarray
    curvature0: np.ndarray
    gamma1: np.ndarray
    tangents1: np.ndarray
    curvature1: np.ndarray
    # +-1 making Xs x Xt future-directed
    orientation: float = 1.0

    @property
    def grid(self) -> Tuple[int, int]:
        return len(self.s), len(self.t)

    @property
    def spacing(self) -> float:
        return self.half_length / (len(self.s) - 1)

    @property
    def p(self) -> np.ndarray:
        return self.gamma0[0]

    @property
    def q(self) -> np.ndarray:
        return self.gamma0[-1]

    @property
    def ruling(self) -> np.ndarray:
        """v(s) = gamma1(s) - gamma0(s)."""
        return self.gamma1 - self.gamma0

    def positions(self) -> np.ndarray:
        """X on the lattice, shape (Ns, Nt, 3)."""
        t = self.t[None, :, None]
        return (1.0 - t) * self.gamma0[:, None, :] + t * self.gamma1[:, None, :]

    def arcs(self, s):
        """(gamma0, T0, kN0, gamma1, T1, kN1) at arbitrary s in [0, L]."""
        s = np.asarray(s, dtype=float)
        g0, T0, k0 = self.curve.at_arclength(self.start + s)
        g1, Tc, k1 = self.curve.at_arclength(self.start + self.curve.arc_length - s)
        return g0, T0, k0, g1, -Tc, k1


@dataclass(frozen=True)
class SurfaceSampleFrame:
    s: float
    t: float
    position: np.ndarray
    xs: np.ndarray
    xt: np.ndarray
    # future-directed unit timelike normal
    normal: np.ndarray
    first_ff: Tuple[float, float, float]
    second_ff: Tuple[float, float, float]
    gauss_k: float


@dataclass(frozen=True, eq=False)
class SurfaceFields:
    """Lattice-wide frames; every array is indexed [i_s, i_t]."""
    positions: np.ndarray
    xs: np.ndarray
    xt: np.ndarray
    normals: np.ndarray
    first_ff: Tuple[np.ndarray, np.ndarray, np.ndarray]
    second_ff: Tuple[np.ndarray, np.ndarray, np.ndarray]
    gauss_k: np.ndarray
    area_element: np.ndarray


@dataclass(frozen=True, eq=False)
class BoundaryCurvatureProfile:
    """
    Per boundary sample, in curve order starting at p: curve curvature,
    geodesic curvature kappa*cosh(theta_p), |theta_p|, and the geodesic
    curvature measured directly as the in-surface turning of T.
    """
    arclength: np.ndarray
    kappa: np.ndarray
    kappa_g: np.ndarray
    hyperbolic_angle: np.ndarray
    kappa_g_direct: np.ndarray
    spacing: float

    @property
    def min_gap(self) -> float:
        return float(np.min(self.kappa_g - self.kappa))

    @property
    def agreement(self) -> float:
        """Largest relative difference of the two geodesic curvatures."""
        return float(np.max(np.abs(self.kappa_g - self.kappa_g_direct) / np.abs(self.kappa_g)))

    def as_records(self):
        return [
            {"kappa": float(k), "kappaG": float(g), "hyperbolicAngle": float(a)}
            for k, g, a in zip(self.kappa, self.kappa_g, self.hyperbolic_angle)
        ]
