'''
Generators of closed strong spacelike index-1 test curves.

Every family is a trigonometric polynomial in its parameter t, sampled at
uniform t and resampled through the trigonometric interpolant, which is
exact for such curves. Each generator checks its own output before
returning it.
'''

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from minkcurve.core import config
from minkcurve.core.errors import InvalidConfig, MinkError, RejectionExhausted
from minkcurve.models.curve_models import ClosedCurve
from minkcurve.schemas.schemas import GeneratorSpec
from minkcurve.services.curve_service import CurveService
from minkcurve.services.log_service import LogService

_CHECK_GRID = 4096


@dataclass(frozen=True)
class HeightPolynomial:
    """h(t) = sum_k alpha_k cos(k t) + beta_k sin(k t), k = 1..K."""
    alpha: np.ndarray
    beta: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.alpha)

    def __call__(self, t, nu: int = 0) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        k = np.arange(1, self.degree + 1, dtype=float)
        kt = np.multiply.outer(t, k)
        # d^nu/dt^nu of cos and sin expressed as phase shifts
        shift = nu * np.pi / 2.0
        return (k ** nu * (self.alpha * np.cos(kt + shift) + self.beta * np.sin(kt + shift))).sum(axis=-1)

    @classmethod
    def from_pairs(cls, amplitudes) -> "HeightPolynomial":
        a = np.asarray(amplitudes, dtype=float).reshape(-1, 2)
        return cls(alpha=a[:, 0].copy(), beta=a[:, 1].copy())

    @classmethod
    def zero(cls) -> "HeightPolynomial":
        return cls(alpha=np.zeros(0), beta=np.zeros(0))


def analytic_amplitude_cap(harmonics: int, radius: float = 1.0) -> float:
    """
    Largest c such that |alpha_k|, |beta_k| <= c / k^2 guarantees
    h'^2 + h''^2 < R^2, the exact strong spacelike condition for a graph
    over the circle of radius R.
    """
    k = np.arange(1, harmonics + 1, dtype=float)
    harmonic = float(np.sum(1.0 / k))
    return radius / (2.0 * np.hypot(harmonic, harmonics)) * (1.0 - 1e-9)


class GeneratorService:
    """
    Service layer for test-curve generation.

    Responsibilities:
    - Instantiate the deterministic families (circle, tilted ellipse, graph)
    - Draw seeded random graph curves with rejection checks
    - Provide the equality-gap and limacon families
    """
    def __init__(self, run_id: str = "local"):
        self.run_id = run_id
        self.curves = CurveService(run_id=run_id)

    # ---------- public API ----------
    def generate(self, spec: GeneratorSpec) -> ClosedCurve:
        """Return the curve described by spec, verified strong spacelike with index 1."""
        curve, _ = self.generate_with_height(spec)
        return curve

    def generate_with_height(self, spec: GeneratorSpec) -> Tuple[ClosedCurve, HeightPolynomial]:
        """Same as generate, also returning the height polynomial h(t) of the family."""
        if spec.kind == "planar-circle":
            R = spec.radius
            height = HeightPolynomial.zero()
            curve = self._build(lambda t: np.stack([R * np.cos(t), R * np.sin(t), 0.0 * t], axis=-1),
                                spec.samples, degree=1)
        elif spec.kind == "tilted-ellipse":
            a, b, c = spec.a, spec.b, spec.c
            height = HeightPolynomial(alpha=np.array([c * a]), beta=np.array([0.0]))
            curve = self._build(
                lambda t: np.stack([a * np.cos(t), b * np.sin(t), c * a * np.cos(t)], axis=-1),
                spec.samples, degree=1,
            )
        elif spec.kind == "graph-over-convex":
            height = HeightPolynomial.from_pairs(spec.amplitudes) if spec.amplitudes else HeightPolynomial.zero()
            curve = self._build(self._graph(spec.a, spec.b, height), spec.samples, degree=max(1, height.degree))
        else:
            curve, height = self._random_fourier(spec)
        self._self_check(curve)
        return curve, height

    def equality_gap_family(self, eps: float, samples: int = config.DEFAULT_SAMPLES) -> ClosedCurve:
        """(cos t, sin t, eps*sin 2t): total curvature tends to 2*pi from below as eps -> 0."""
        if not 0.0 <= eps < 0.5:
            raise InvalidConfig(f"eps must lie in [0, 0.5), got {eps}")
        curve = self._build(
            lambda t: np.stack([np.cos(t), np.sin(t), eps * np.sin(2.0 * t)], axis=-1),
            samples, degree=2,
        )
        self._self_check(curve)
        return curve

    def limacon(self, b: float = 1.0, a: float = 0.8, samples: int = 512) -> ClosedCurve:
        """Planar limacon r = b + a*cos t; not convex when b < 2a. No self check."""
        def shape(t):
            r = b + a * np.cos(t)
            return np.stack([r * np.cos(t), r * np.sin(t), 0.0 * t], axis=-1)
        return self._build(shape, samples, degree=2)

    # ---------- internals ----------
    @staticmethod
    def _graph(a: float, b: float, height: HeightPolynomial) -> Callable:
        return lambda t: np.stack([a * np.cos(t), b * np.sin(t), height(t)], axis=-1)

    def _build(self, shape: Callable, samples: int, degree: int) -> ClosedCurve:
        m = max(64, 8 * (degree + 1))
        t = 2.0 * np.pi * np.arange(m) / m
        return self.curves.resample_arclength(shape(t), samples, method="fourier")

    def _random_fourier(self, spec: GeneratorSpec) -> Tuple[ClosedCurve, HeightPolynomial]:
        K, R = spec.harmonics, spec.radius
        cap = spec.amplitude_cap if spec.amplitude_cap is not None else analytic_amplitude_cap(K, R)
        rng = np.random.default_rng(spec.seed)
        k2 = np.arange(1, K + 1, dtype=float) ** 2
        grid = 2.0 * np.pi * np.arange(_CHECK_GRID) / _CHECK_GRID
        for attempt in range(1, config.REJECTION_LIMIT + 1):
            draw = rng.uniform(-1.0, 1.0, size=(K, 2)) * cap / k2[:, None]
            height = HeightPolynomial(alpha=draw[:, 0], beta=draw[:, 1])
            # exact strong spacelike condition for a graph over a circle
            if np.max(height(grid, 1) ** 2 + height(grid, 2) ** 2) >= R * R:
                continue
            try:
                curve = self._build(self._graph(R, R, height), spec.samples, degree=K)
                self._self_check(curve)
            except MinkError:
                continue
            if attempt > 1:
                LogService.log_check_event(
                    "random_fourier_rejection", True,
                    {"seed": spec.seed, "attempts": attempt}, self.run_id,
                )
            return curve, height
        raise RejectionExhausted(
            f"No strong spacelike index-1 curve after {config.REJECTION_LIMIT} draws; "
            f"amplitude cap {cap} is too large",
            {"seed": spec.seed, "amplitudeCap": cap, "harmonics": K},
        )

    def _self_check(self, curve: ClosedCurve) -> None:
        self.curves.require_valid_input_curve(curve)
