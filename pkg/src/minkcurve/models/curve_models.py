"""
Domain records for discrete closed curves.

A ClosedCurve keeps the smooth periodic interpolant it was sampled from, so
downstream code (ruled surfaces, meshes) can ask for the curve at any arc
length instead of being tied to the stored sample spacing.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from minkcurve.core import lorentz
from minkcurve.core.errors import NonSpacelikeSegment

# Gauss-Legendre rule used for every arc-length integral
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)
_EVAL_CHUNK = 8192


# -----------------------
# Periodic interpolants
# -----------------------
class SplineInterpolant:
    """
    Periodic cubic spline through the input points, parametrized by
    cumulative Lorentz chord length.
    """
    kind = "spline"

    def __init__(self, points: np.ndarray):
        closed = np.vstack([points, points[:1]])
        chords = np.diff(closed, axis=0)
        chord_len = np.sqrt(lorentz.inner(chords, chords))
        knots = np.concatenate([[0.0], np.cumsum(chord_len)])
        self.period = float(knots[-1])
        self.knots = knots
        self._spline = CubicSpline(knots, closed, bc_type="periodic", axis=0)

    def breakpoints(self, min_panels: int) -> np.ndarray:
        """Panel edges aligned with the knots, each knot interval split evenly."""
        m = len(self.knots) - 1
        split = max(1, int(np.ceil(min_panels / m)))
        frac = np.linspace(0.0, 1.0, split + 1)[:-1]
        left = self.knots[:-1, None] + np.diff(self.knots)[:, None] * frac[None, :]
        return np.concatenate([left.ravel(), [self.period]])

    def __call__(self, u: np.ndarray, nu: int = 0) -> np.ndarray:
        return self._spline(np.mod(u, self.period), nu)


class FourierInterpolant:
    """
    Trigonometric interpolant of points sampled at uniform parameters
    u_j = 2*pi*j/m. Exact for trigonometric polynomials of degree < m/2.
    """
    kind = "fourier"

    def __init__(self, points: np.ndarray):
        m = len(points)
        self.period = 2.0 * np.pi
        self.coeffs = np.fft.fft(points, axis=0) / m
        self.freqs = np.fft.fftfreq(m, d=1.0 / m)

    def breakpoints(self, min_panels: int) -> np.ndarray:
        return np.linspace(0.0, self.period, max(min_panels, 64) + 1)

    def __call__(self, u: np.ndarray, nu: int = 0) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        flat = u.ravel()
        weighted = self.coeffs * ((1j * self.freqs) ** nu)[:, None]
        out = np.empty((flat.size, 3))
        for start in range(0, flat.size, _EVAL_CHUNK):
            chunk = flat[start:start + _EVAL_CHUNK]
            phase = np.exp(1j * np.outer(chunk, self.freqs))
            out[start:start + _EVAL_CHUNK] = (phase @ weighted).real
        return out.reshape(u.shape + (3,))


# -----------------------
# Arc-length map
# -----------------------
class ArclengthMap:
    """
    s(u) and its inverse for a periodic interpolant, by panel-wise
    Gauss-Legendre quadrature of the Lorentz speed and Newton refinement.
    """

    def __init__(self, interp, min_panels: int):
        self.interp = interp
        self.edges = interp.breakpoints(min_panels)
        a, b = self.edges[:-1], self.edges[1:]
        half = 0.5 * (b - a)
        nodes = a[:, None] + half[:, None] * (1.0 + _GL_NODES[None, :])
        speed_sq = self._speed_sq(nodes)
        if np.any(speed_sq <= 0):
            bad = np.unravel_index(np.argmin(speed_sq), speed_sq.shape)
            raise NonSpacelikeSegment(
                "Interpolated tangent is not spacelike",
                {"parameter": float(nodes[bad]), "tangentNormSq": float(speed_sq[bad])},
            )
        panel = half * (np.sqrt(speed_sq) @ _GL_WEIGHTS)
        self.cumulative = np.concatenate([[0.0], np.cumsum(panel)])
        self.length = float(self.cumulative[-1])

    def _speed_sq(self, u: np.ndarray) -> np.ndarray:
        d1 = self.interp(u, 1)
        return lorentz.inner(d1, d1)

    def speed(self, u: np.ndarray) -> np.ndarray:
        return np.sqrt(np.maximum(self._speed_sq(u), 0.0))

    def s_of_u(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        p = np.clip(np.searchsorted(self.edges, u, side="right") - 1, 0, len(self.edges) - 2)
        a = self.edges[p]
        half = 0.5 * (u - a)
        nodes = a[:, None] + half[:, None] * (1.0 + _GL_NODES[None, :])
        return self.cumulative[p] + half * (self.speed(nodes) @ _GL_WEIGHTS)

    def u_of_s(self, s: np.ndarray, iterations: int = 12) -> np.ndarray:
        s = np.mod(np.asarray(s, dtype=float), self.length)
        u = np.interp(s, self.cumulative, self.edges)
        for _ in range(iterations):
            step = (self.s_of_u(u) - s) / self.speed(u)
            u = np.clip(u - step, 0.0, self.interp.period)
            if np.max(np.abs(step)) < 1e-15 * self.interp.period:
                break
        return u


# -----------------------
# Closed curve
# -----------------------
@dataclass(frozen=True, eq=False)
class ClosedCurve:
    """
    N samples equally spaced in Lorentz arc length, with unit tangents T,
    curvature vectors kappa*N = gamma''(s) and scalar curvature kappa.
    kappa is NaN wherever gamma'' is not spacelike.
    """
    points: np.ndarray
    tangents: np.ndarray
    curvature_vectors: np.ndarray
    kappa: np.ndarray
    arc_length: float
    parameters: np.ndarray
    reversed: bool
    interpolant: object = field(repr=False)
    arclength_map: ArclengthMap = field(repr=False)
    orientation: int = 1

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def spacing(self) -> float:
        return self.arc_length / self.n

    @property
    def sample_arclengths(self) -> np.ndarray:
        return np.arange(self.n) * self.spacing

    def at_arclength(self, s) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Point, unit tangent and curvature vector at arc length s (any shape)."""
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        u = self.arclength_map.u_of_s(self.orientation * flat)
        pts, T, kN = curve_frame(self.interpolant, u, self.orientation)
        shape = s.shape + (3,)
        return pts.reshape(shape), T.reshape(shape), kN.reshape(shape)


def curve_frame(interp, u: np.ndarray, orientation: int = 1):
    """Unit-speed kinematics at interpolant parameters u."""
    pts = interp(u, 0)
    d1 = interp(u, 1)
    d2 = interp(u, 2)
    q = lorentz.inner(d1, d1)
    T = orientation * d1 / np.sqrt(q)[:, None]
    kN = (d2 - (lorentz.inner(d2, d1) / q)[:, None] * d1) / q[:, None]
    return pts, T, kN


@dataclass(frozen=True)
class TangentIndicatrix:
    """Continuous longitude lift theta and hyperbolic latitude phi of T."""
    theta: np.ndarray
    phi: np.ndarray
    theta_rate: np.ndarray
    phi_rate: np.ndarray
    winding: float
    monotone: bool

    def reconstruct(self) -> np.ndarray:
        """T = (cosh phi cos theta, cosh phi sin theta, sinh phi)."""
        ch = np.cosh(self.phi)
        return np.stack(
            [ch * np.cos(self.theta), ch * np.sin(self.theta), np.sinh(self.phi)], axis=-1
        )
