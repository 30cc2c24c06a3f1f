'''
Service layer for discrete closed curves:
* arc-length resampling of a closed spacelike polyline
* strong spacelike test and its indicatrix form
* index, total curvature and the tangent indicatrix
'''

from typing import Literal, Sequence

import numpy as np
from scipy.integrate import simpson

from minkcurve.core import lorentz
from minkcurve.core.errors import (
    AmbiguousLift, NonSpacelikeSegment, NotStrongSpacelike, TooFewPoints, WrongIndex,
)
from minkcurve.models.curve_models import (
    ArclengthMap, ClosedCurve, FourierInterpolant, SplineInterpolant,
    TangentIndicatrix, curve_frame,
)
from minkcurve.schemas.schemas import StrongSpacelikeReport
from minkcurve.services.log_service import LogService

MIN_POINTS = 8

class CurveService:
    """
    Service layer for curve operations.

    Responsibilities:
    - Build ClosedCurve objects from raw points
    - Check the hypotheses of the Fenchel theorem on a curve
    - Compute index, total curvature and the tangent indicatrix
    """
    def __init__(self, run_id: str = "local"):
        self.run_id = run_id

    # ---------- construction ----------
    def resample_arclength(
        self,
        points: Sequence[Sequence[float]],
        n: int,
        method: Literal["spline", "fourier"] = "spline",
    ) -> ClosedCurve:
        """
        Return n samples equally spaced in Lorentz arc length on the periodic
        interpolant of a closed polyline.

        method="spline" uses a periodic cubic spline (chord-length parameter);
        method="fourier" treats the input as uniformly parametrized samples of
        a periodic curve and uses its trigonometric interpolant.

        Raises:
            TooFewPoints: fewer than 8 input points.
            NonSpacelikeSegment: a chord or an interpolated tangent is not spacelike.
        """
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise TooFewPoints(f"Expected an (m, 3) array of points, got shape {pts.shape}")
        # Tolerate an explicitly repeated first point
        if len(pts) > 1 and np.array_equal(pts[0], pts[-1]):
            pts = pts[:-1]
        if len(pts) < MIN_POINTS:
            raise TooFewPoints(f"A closed curve needs at least {MIN_POINTS} points, got {len(pts)}")
        if n < MIN_POINTS:
            raise TooFewPoints(f"Cannot resample to fewer than {MIN_POINTS} samples, got {n}")

        chords = np.roll(pts, -1, axis=0) - pts
        chord_sq = lorentz.inner(chords, chords)
        if np.any(chord_sq <= 0):
            i = int(np.argmin(chord_sq))
            raise NonSpacelikeSegment(
                f"Segment {i} -> {(i + 1) % len(pts)} is not spacelike",
                {"segment": i, "chordNormSq": float(chord_sq[i])},
            )

        interp = SplineInterpolant(pts) if method == "spline" else FourierInterpolant(pts)
        arcmap = ArclengthMap(interp, min_panels=4 * max(n, len(pts)))

        curve = self._sample(interp, arcmap, n, orientation=1)
        winding = self._winding(curve.tangents)
        if winding < 0:
            curve = self._sample(interp, arcmap, n, orientation=-1)
            LogService.log_check_event(
                "orientation", True, {"reversed": True, "rawWinding": winding}, self.run_id
            )
        return curve

    def _sample(self, interp, arcmap: ArclengthMap, n: int, orientation: int) -> ClosedCurve:
        s = np.arange(n) * (arcmap.length / n)
        u = arcmap.u_of_s(orientation * s)
        pts, T, kN = curve_frame(interp, u, orientation)
        q = lorentz.inner(kN, kN)
        with np.errstate(invalid="ignore"):
            kappa = np.where(q > 0, np.sqrt(q), np.nan)
        return ClosedCurve(
            points=pts,
            tangents=T,
            curvature_vectors=kN,
            kappa=kappa,
            arc_length=arcmap.length,
            parameters=u,
            reversed=orientation < 0,
            interpolant=interp,
            arclength_map=arcmap,
            orientation=orientation,
        )

    # ---------- hypotheses ----------
    def is_strong_spacelike(self, c: ClosedCurve) -> StrongSpacelikeReport:
        """
        Pointwise test: gamma'' spacelike, and equivalently
        cosh^2(phi) theta'^2 - phi'^2 > 0 on the indicatrix.
        """
        margin = lorentz.inner(c.curvature_vectors, c.curvature_vectors)
        theta_rate, phi_rate = self._indicatrix_rates(c)
        phi = np.arcsinh(c.tangents[:, 2])
        ind_form = np.cosh(phi) ** 2 * theta_rate ** 2 - phi_rate ** 2

        scale = 1e-9 * max(1.0, float(np.max(np.abs(margin))))
        decided = (np.abs(margin) > scale) & (np.abs(ind_form) > scale)
        agree = bool(np.all((margin[decided] > 0) == (ind_form[decided] > 0)))

        worst = int(np.argmin(margin))
        report = StrongSpacelikeReport(
            ok=bool(margin[worst] > 0 and np.min(ind_form) > 0),
            worst_margin=float(margin[worst]),
            worst_index=worst,
            indicatrix_margin=float(np.min(ind_form)),
            tests_agree=agree,
        )
        if not report.ok:
            LogService.log_check_event("strong_spacelike", False, report.to_json_dict(), self.run_id)
        return report

    def require_strong_spacelike(self, c: ClosedCurve) -> None:
        report = self.is_strong_spacelike(c)
        if not report.ok:
            raise NotStrongSpacelike(
                f"Curvature vector is not spacelike at sample {report.worst_index}",
                report.to_json_dict(),
            )

    # ---------- indicatrix ----------
    @staticmethod
    def _indicatrix_rates(c: ClosedCurve):
        T, dT = c.tangents, c.curvature_vectors
        planar_sq = T[:, 0] ** 2 + T[:, 1] ** 2
        theta_rate = (T[:, 0] * dT[:, 1] - T[:, 1] * dT[:, 0]) / planar_sq
        phi_rate = dT[:, 2] / np.sqrt(1.0 + T[:, 2] ** 2)
        return theta_rate, phi_rate

    @staticmethod
    def _lift(T: np.ndarray):
        raw = np.arctan2(T[:, 1], T[:, 0])
        closed = np.append(raw, raw[0])
        steps = np.angle(np.exp(1j * np.diff(closed)))
        if np.max(np.abs(steps)) >= np.pi - 1e-12:
            raise AmbiguousLift(
                "Longitude jumps by pi or more between samples; resample finer",
                {"sample": int(np.argmax(np.abs(steps)))},
            )
        theta = raw[0] + np.concatenate([[0.0], np.cumsum(steps)])
        return theta[:-1], float(theta[-1] - theta[0])

    def _winding(self, T: np.ndarray) -> float:
        _, total = self._lift(T)
        return total / (2.0 * np.pi)

    def indicatrix(self, c: ClosedCurve) -> TangentIndicatrix:
        """phi = arcsinh(T.x3), theta = continuous lift of atan2(T.x2, T.x1)."""
        theta, total = self._lift(c.tangents)
        theta_rate, phi_rate = self._indicatrix_rates(c)
        monotone = bool(np.all(theta_rate > 0))
        if not monotone:
            LogService.log_check_event(
                "theta_monotone", False,
                {"minThetaRate": float(np.min(theta_rate))}, self.run_id,
            )
        return TangentIndicatrix(
            theta=theta,
            phi=np.arcsinh(c.tangents[:, 2]),
            theta_rate=theta_rate,
            phi_rate=phi_rate,
            winding=total / (2.0 * np.pi),
            monotone=monotone,
        )

    def index(self, c: ClosedCurve) -> int:
        """Winding number of the tangent indicatrix, positive by orientation."""
        _, total = self._lift(c.tangents)
        if c.reversed:
            LogService.log_check_event("index_orientation", True, {"reversed": True}, self.run_id)
        return int(round(total / (2.0 * np.pi)))

    # ---------- total curvature ----------
    def total_curvature(self, c: ClosedCurve) -> float:
        """Composite Simpson quadrature of kappa over one period."""
        if np.any(~np.isfinite(c.kappa)):
            raise NotStrongSpacelike(
                "Curvature is undefined where gamma'' is not spacelike",
                {"sample": int(np.argmax(~np.isfinite(c.kappa)))},
            )
        return float(simpson(np.append(c.kappa, c.kappa[0]), dx=c.spacing))

    def fenchel_margin(self, c: ClosedCurve) -> float:
        return 2.0 * np.pi - self.total_curvature(c)

    def indicatrix_length(self, c: ClosedCurve) -> float:
        """Lorentzian length of s -> T(s) on the de Sitter sphere."""
        ind = self.indicatrix(c)
        integrand_sq = np.cosh(ind.phi) ** 2 * ind.theta_rate ** 2 - ind.phi_rate ** 2
        if np.any(integrand_sq <= 0):
            raise NotStrongSpacelike("Tangent indicatrix is not spacelike")
        speed = np.sqrt(integrand_sq)
        return float(simpson(np.append(speed, speed[0]), dx=c.spacing))

    def require_valid_input_curve(self, c: ClosedCurve) -> int:
        """Strong spacelike and index 1, as every construction downstream needs."""
        self.require_strong_spacelike(c)
        idx = self.index(c)
        if idx != 1:
            raise WrongIndex(f"Curve has index {idx}, expected 1", {"index": idx})
        return idx
