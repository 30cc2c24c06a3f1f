"""
Lorentz linear algebra on R^3_1 with signature (+, +, -).

All functions accept anything array-like with a trailing axis of length 3
and broadcast over the leading axes, so the same kernel serves single
vectors and whole sample grids.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

ArrayLike = Union[np.ndarray, Sequence[float], "MinkVec3"]

# Diagonal of the Lorentz metric in the canonical basis
METRIC = np.array([1.0, 1.0, -1.0])


@dataclass(frozen=True)
class MinkVec3:
    """A vector of R^3_1 in canonical coordinates."""
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.x1, self.x2, self.x3])):
            raise ValueError(f"MinkVec3 coordinates must be finite, got {self.as_tuple()}")

    def as_tuple(self):
        return (self.x1, self.x2, self.x3)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.as_tuple(), dtype=dtype or float)

    @classmethod
    def from_array(cls, a) -> "MinkVec3":
        a = np.asarray(a, dtype=float)
        return cls(float(a[0]), float(a[1]), float(a[2]))


class CausalTag(str, Enum):
    SPACELIKE = "Spacelike"
    LIGHTLIKE = "Lightlike"
    TIMELIKE = "Timelike"


class TimeOrientation(str, Enum):
    FUTURE = "Future"
    PAST = "Past"


@dataclass(frozen=True)
class CausalClass:
    tag: CausalTag
    time_orientation: Optional[TimeOrientation] = None


def as_array(X: ArrayLike) -> np.ndarray:
    return np.asarray(X, dtype=float)


def inner(X: ArrayLike, Y: ArrayLike) -> np.ndarray:
    """<X, Y> = x1*y1 + x2*y2 - x3*y3."""
    X = as_array(X)
    Y = as_array(Y)
    return X[..., 0] * Y[..., 0] + X[..., 1] * Y[..., 1] - X[..., 2] * Y[..., 2]


def norm_sq(X: ArrayLike) -> np.ndarray:
    return inner(X, X)


def euclidean_sq(X: ArrayLike) -> np.ndarray:
    X = as_array(X)
    return np.sum(X * X, axis=-1)


def cross(X: ArrayLike, Y: ArrayLike) -> np.ndarray:
    """Lorentz cross product; Lorentz-orthogonal to both factors."""
    X = as_array(X)
    Y = as_array(Y)
    x1, x2, x3 = X[..., 0], X[..., 1], X[..., 2]
    y1, y2, y3 = Y[..., 0], Y[..., 1], Y[..., 2]
    return np.stack(
        [-x2 * y3 + x3 * y2, -x3 * y1 + x1 * y3, x1 * y2 - x2 * y1],
        axis=-1,
    )


def default_zero_tol(X: ArrayLike) -> float:
    return 1e-12 * max(1.0, float(euclidean_sq(X)))


def classify(X: ArrayLike, zero_tol: Optional[float] = None) -> CausalClass:
    """Causal character of a single vector."""
    X = as_array(X)
    if zero_tol is None:
        zero_tol = default_zero_tol(X)
    if zero_tol < 0:
        raise ValueError("zero_tol must be >= 0")
    q = float(inner(X, X))
    if q > zero_tol:
        return CausalClass(CausalTag.SPACELIKE)
    tag = CausalTag.TIMELIKE if q < -zero_tol else CausalTag.LIGHTLIKE
    if X[2] > 0:
        return CausalClass(tag, TimeOrientation.FUTURE)
    if X[2] < 0:
        return CausalClass(tag, TimeOrientation.PAST)
    # the zero vector, or a lightlike vector numerically flat in x3
    return CausalClass(tag)


def is_timelike(X: ArrayLike) -> np.ndarray:
    """Vectorized timelike test with the scale-aware tolerance."""
    X = as_array(X)
    tol = 1e-12 * np.maximum(1.0, euclidean_sq(X))
    return inner(X, X) < -tol


def normalized_form(X: ArrayLike) -> np.ndarray:
    """<X, X> / |X|^2_E, a scale-free causal margin in [-1, 1]."""
    X = as_array(X)
    e = euclidean_sq(X)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(e > 0, inner(X, X) / np.where(e > 0, e, 1.0), 0.0)


def unit(X: ArrayLike) -> np.ndarray:
    """Scale a non-null vector to <X, X> = +-1."""
    X = as_array(X)
    q = np.abs(inner(X, X))
    return X / np.sqrt(np.asarray(q))[..., None]


def future(X: ArrayLike) -> np.ndarray:
    """Flip past-pointing vectors so that x3 >= 0."""
    X = as_array(X)
    sign = np.where(X[..., 2] < 0, -1.0, 1.0)
    return X * sign[..., None]


def hyperbolic_angle(n1: ArrayLike, n2: ArrayLike) -> np.ndarray:
    """Angle between two unit timelike vectors: cosh(angle) = |<n1, n2>|."""
    c = np.abs(inner(n1, n2))
    return np.arccosh(np.maximum(c, 1.0))
