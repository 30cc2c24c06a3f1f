'''
Ruled spacelike surface spanning a closed strong spacelike curve.

1. RuledService.build_ruled(curve) - split at p and q, sample X(s, t)
2. RuledService.frame_at / surface_fields - partials, normal, forms, K
3. RuledService.verify_spacelike - causal sweep of the normal field
4. RuledService.boundary_geodesic_curvature / gauss_bonnet_check
5. RuledService.export_mesh - OBJ of the lattice
'''

from typing import Tuple

import numpy as np
from scipy.integrate import simpson

from minkcurve.core import config, lorentz
from minkcurve.core.errors import DegenerateFrame, InvalidConfig
from minkcurve.models.curve_models import ClosedCurve
from minkcurve.models.surface_models import (
    BoundaryCurvatureProfile, RuledSurface, SurfaceFields, SurfaceSampleFrame,
)
from minkcurve.repositories.file_repository import MeshRepository
from minkcurve.schemas.schemas import GaussBonnetReport, RuledReport, SpacelikeSurfaceReport
from minkcurve.services.curve_service import CurveService
from minkcurve.services.log_service import LogService


def gauss_curvature(xs, xt, xss, xst, xtt):
    """
    K = -(eg - f^2) / (EG - F^2) with forms taken against the unit timelike
    normal. Planes give 0, the hyperbolic plane gives -1. Broadcasts.
    """
    normal = lorentz.cross(xs, xt)
    n_hat = lorentz.unit(normal)
    E, F, G = lorentz.inner(xs, xs), lorentz.inner(xs, xt), lorentz.inner(xt, xt)
    e, f, g = lorentz.inner(xss, n_hat), lorentz.inner(xst, n_hat), lorentz.inner(xtt, n_hat)
    return -(e * g - f * f) / (E * G - F * F)


def _second_difference(a: np.ndarray, h: float) -> np.ndarray:
    """d2/ds2 along axis 0, central inside and second-order one-sided at both ends."""
    out = np.empty_like(a)
    out[1:-1] = (a[2:] - 2.0 * a[1:-1] + a[:-2]) / h ** 2
    out[0] = (2.0 * a[0] - 5.0 * a[1] + 4.0 * a[2] - a[3]) / h ** 2
    out[-1] = (2.0 * a[-1] - 5.0 * a[-2] + 4.0 * a[-3] - a[-4]) / h ** 2
    return out


def _osculating_normal(T: np.ndarray, kN: np.ndarray) -> np.ndarray:
    return lorentz.future(lorentz.unit(lorentz.cross(T, kN)))


class RuledService:
    """
    Service layer for the ruled surface X(s, t) = (1 - t) gamma0(s) + t gamma1(s).

    Responsibilities:
    - Build the surface from a valid input curve
    - Evaluate frames, fundamental forms and Gauss curvature
    - Check spacelikeness, boundary geodesic curvature and Gauss-Bonnet
    """
    def __init__(self, run_id: str = "local"):
        self.run_id = run_id
        self.curves = CurveService(run_id=run_id)

    # ---------- construction ----------
    def build_ruled(
        self,
        c: ClosedCurve,
        grid: Tuple[int, int] = config.DEFAULT_GRID,
        start: float = 0.0,
    ) -> RuledSurface:
        """
        Split c at arc length `start` and `start + L_total/2` and sample both
        arcs on a common grid of [0, L].
        """
        ns, nt = grid
        if ns < 4 or nt < 2:
            raise InvalidConfig(f"Grid must be at least 4 x 2, got {ns} x {nt}", {"grid": [ns, nt]})
        self.curves.require_valid_input_curve(c)

        L = 0.5 * c.arc_length
        s = np.linspace(0.0, L, ns)
        t = np.linspace(0.0, 1.0, nt)
        g0, T0, k0 = c.at_arclength(start + s)
        g1, Tc, k1 = c.at_arclength(start + c.arc_length - s)
        # both arcs meet exactly at p and q
        g1[0], g1[-1] = g0[0], g0[-1]

        mid = ns // 2
        mid_normal = lorentz.cross(0.5 * (T0[mid] - Tc[mid]), g1[mid] - g0[mid])
        rs = RuledSurface(
            curve=c, start=float(start), half_length=L, s=s, t=t,
            gamma0=g0, tangents0=T0, curvature0=k0,
            gamma1=g1, tangents1=-Tc, curvature1=k1,
            orientation=1.0 if mid_normal[2] >= 0 else -1.0,
        )
        LogService.log_check_event(
            "ruled_build", True,
            {"grid": [ns, nt], "start": float(start), "halfLength": L}, self.run_id,
        )
        return rs

    # ---------- single frame ----------
    def frame_at(self, rs: RuledSurface, s: float, t: float) -> SurfaceSampleFrame:
        """
        Frame at (s, t). At s = 0 and s = L the tangent plane is the osculating
        plane of the curve at p (resp. q), the limit along the regular
        parameter u = s^2, and K is taken from the nearest interior stencil.
        """
        L, h = rs.half_length, rs.spacing
        if not (0.0 <= s <= L and 0.0 <= t <= 1.0):
            raise InvalidConfig(f"(s, t) = ({s}, {t}) lies outside [0, {L}] x [0, 1]")

        if s == 0.0 or s == L:
            g0, T0, k0, g1, T1, _ = rs.arcs(s)
            xs = (1.0 - t) * T0 + t * T1
            xt = g1 - g0
            nearest = self.frame_at(rs, h if s == 0.0 else L - h, t)
            normal = _osculating_normal(T0, k0)
            return SurfaceSampleFrame(
                s=s, t=t, position=g0, xs=xs, xt=xt, normal=normal,
                first_ff=self._forms(xs, xt),
                second_ff=nearest.second_ff,
                gauss_k=nearest.gauss_k,
            )

        # three-point stencil in s, shifted inward near the ends
        if s < h:
            nodes, center = s + h * np.arange(3), 0
        elif s > L - h:
            nodes, center = s - h * np.arange(2, -1, -1), 2
        else:
            nodes, center = s + h * np.arange(-1, 2), 1
        g0, T0, _, g1, T1, _ = rs.arcs(nodes)
        X = (1.0 - t) * g0 + t * g1
        v = g1 - g0
        xs = (1.0 - t) * T0[center] + t * T1[center]
        xt = v[center]
        xss = (X[0] - 2.0 * X[1] + X[2]) / h ** 2
        if center == 0:
            xst = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
        elif center == 2:
            xst = (3.0 * v[2] - 4.0 * v[1] + v[0]) / (2.0 * h)
        else:
            xst = (v[2] - v[0]) / (2.0 * h)
        # X is affine in t
        xtt = np.zeros(3)

        E, F, G = self._forms(xs, xt)
        if not E * G - F * F > 0:
            raise DegenerateFrame(
                f"First fundamental form is not positive definite at (s, t) = ({s}, {t})",
                {"s": s, "t": t, "detI": E * G - F * F},
            )
        normal = rs.orientation * lorentz.cross(xs, xt)
        n_hat = lorentz.unit(normal)
        second = tuple(float(lorentz.inner(x, n_hat)) for x in (xss, xst, xtt))
        return SurfaceSampleFrame(
            s=s, t=t, position=X[center], xs=xs, xt=xt, normal=n_hat,
            first_ff=(E, F, G),
            second_ff=second,
            gauss_k=float(gauss_curvature(xs, xt, xss, xst, xtt)),
        )

    @staticmethod
    def _forms(xs, xt) -> Tuple[float, float, float]:
        return (float(lorentz.inner(xs, xs)), float(lorentz.inner(xs, xt)), float(lorentz.inner(xt, xt)))

    # ---------- lattice ----------
    def normal_field(self, rs: RuledSurface) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        (Xs, Xt, N) on the lattice with N = orientation * Xs x Xt, unnormalized.
        The s = 0 and s = L rows carry the osculating normals at p and q.
        """
        t = rs.t[None, :, None]
        xs = (1.0 - t) * rs.tangents0[:, None, :] + t * rs.tangents1[:, None, :]
        xt = np.broadcast_to(rs.ruling[:, None, :], xs.shape).copy()
        normal = rs.orientation * lorentz.cross(xs, xt)
        normal[0] = _osculating_normal(rs.tangents0[0], rs.curvature0[0])
        normal[-1] = _osculating_normal(rs.tangents0[-1], rs.curvature0[-1])
        return xs, xt, normal

    def surface_fields(self, rs: RuledSurface) -> SurfaceFields:
        """Vectorized frames over the whole lattice; second derivatives by differences in s."""
        X = rs.positions()
        xs, xt, normal = self.normal_field(rs)
        E, F, G = lorentz.inner(xs, xs), lorentz.inner(xs, xt), lorentz.inner(xt, xt)
        det = E * G - F * F

        interior = det[1:-1]
        if np.any(interior <= 0):
            i, j = np.unravel_index(np.argmin(interior), interior.shape)
            raise DegenerateFrame(
                "First fundamental form is not positive definite",
                {"s": float(rs.s[i + 1]), "t": float(rs.t[j]), "detI": float(interior[i, j])},
            )

        h = rs.spacing
        xss = _second_difference(X, h)
        xst = np.broadcast_to(
            np.gradient(rs.ruling, h, axis=0, edge_order=2)[:, None, :], X.shape
        )
        n_hat = lorentz.unit(normal)
        e = lorentz.inner(xss, n_hat)
        f = lorentz.inner(xst, n_hat)
        g = np.zeros_like(e)

        K = np.empty_like(E)
        K[1:-1] = -(e[1:-1] * g[1:-1] - f[1:-1] ** 2) / det[1:-1]
        K[0], K[-1] = K[1], K[-2]
        area = np.sqrt(np.maximum(det, 0.0))
        area[0] = area[-1] = 0.0
        return SurfaceFields(
            positions=X, xs=xs, xt=xt, normals=n_hat,
            first_ff=(E, F, G), second_ff=(e, f, g),
            gauss_k=K, area_element=area,
        )

    # ---------- checks ----------
    def verify_spacelike(self, rs: RuledSurface) -> SpacelikeSurfaceReport:
        """
        Every normal, boundary rows included, must be timelike and future;
        the margin <N,N>/|N|^2 is best when most negative.
        """
        _, _, normal = self.normal_field(rs)
        margin = lorentz.normalized_form(normal)
        future = normal[..., 2] > 0
        worst = np.unravel_index(np.argmax(margin), margin.shape)
        report = SpacelikeSurfaceReport(
            ok=bool(np.all(margin < 0) and np.all(future)),
            worst_margin=float(margin[worst]),
            location=[float(rs.s[worst[0]]), float(rs.t[worst[1]])],
        )
        if not report.ok:
            LogService.log_check_event("ruled_spacelike", False, report.to_json_dict(), self.run_id)
        return report

    def boundary_geodesic_curvature(self, rs: RuledSurface) -> BoundaryCurvatureProfile:
        """
        Walks the boundary in curve order (gamma0 forward, then gamma1 back
        from q to p) and returns kappa, kappa_g = kappa cosh(theta_p) and the
        direct in-surface turning rate <dT/ds, nu> with nu the inward conormal.
        """
        _, _, normal = self.normal_field(rs)
        n_hat = lorentz.unit(normal)
        inner_rows = slice(rs.grid[0] - 2, 0, -1)

        T = np.concatenate([rs.tangents0, -rs.tangents1[inner_rows]])
        kN = np.concatenate([rs.curvature0, rs.curvature1[inner_rows]])
        nb = np.concatenate([n_hat[:, 0], n_hat[inner_rows, -1]])
        inward = np.concatenate([rs.ruling, -rs.ruling[inner_rows]])
        # at p and q the ruling vanishes; the curve bends into the surface there
        inward[0] = kN[0]
        inward[rs.grid[0] - 1] = kN[rs.grid[0] - 1]

        kappa = np.sqrt(lorentz.inner(kN, kN))
        binormal = _osculating_normal(T, kN)
        angle = lorentz.hyperbolic_angle(nb, binormal)
        kappa_g = kappa * np.cosh(angle)

        h = rs.spacing
        dT = (np.roll(T, -1, axis=0) - np.roll(T, 1, axis=0)) / (2.0 * h)
        nu = lorentz.unit(lorentz.cross(nb, T))
        nu = nu * np.sign(lorentz.inner(nu, inward))[:, None]
        direct = lorentz.inner(dT, nu)

        return BoundaryCurvatureProfile(
            arclength=np.arange(len(T)) * h,
            kappa=kappa,
            kappa_g=kappa_g,
            hyperbolic_angle=angle,
            kappa_g_direct=direct,
            spacing=h,
        )

    def gauss_bonnet_check(self, rs: RuledSurface) -> GaussBonnetReport:
        fields = self.surface_fields(rs)
        profile = self.boundary_geodesic_curvature(rs)
        return self._gauss_bonnet(rs, fields, profile)

    @staticmethod
    def _gauss_bonnet(rs: RuledSurface, fields: SurfaceFields, profile: BoundaryCurvatureProfile) -> GaussBonnetReport:
        integrand = fields.gauss_k * fields.area_element
        area_k = simpson(simpson(integrand, x=rs.t, axis=1), x=rs.s)
        kg = np.append(profile.kappa_g, profile.kappa_g[0])
        boundary = simpson(kg, dx=profile.spacing)
        return GaussBonnetReport(
            area_integral_k=float(area_k),
            boundary_integral_kg=float(boundary),
            residual=float(area_k + boundary - 2.0 * np.pi),
        )

    def endpoint_plane_angle(self, rs: RuledSurface, s: float, t: float) -> float:
        """Hyperbolic angle between the tangent plane at (s, t) and the osculating plane at p."""
        frame = self.frame_at(rs, s, t)
        b = _osculating_normal(rs.tangents0[0], rs.curvature0[0])
        return float(lorentz.hyperbolic_angle(frame.normal, b))

    def report(self, rs: RuledSurface) -> RuledReport:
        """Spacelike sweep, boundary curvature and Gauss-Bonnet in one report."""
        fields = self.surface_fields(rs)
        profile = self.boundary_geodesic_curvature(rs)
        gb = self._gauss_bonnet(rs, fields, profile)
        spacelike = self.verify_spacelike(rs)
        report = RuledReport(
            area_integral_k=gb.area_integral_k,
            boundary_integral_kg=gb.boundary_integral_kg,
            residual=gb.residual,
            min_gauss_k=float(np.min(fields.gauss_k)),
            spacelike_margin=spacelike.worst_margin,
            spacelike_ok=spacelike.ok,
            min_kappa_gap=profile.min_gap,
            kappa_g_agreement=profile.agreement,
            total_curvature=self.curves.total_curvature(rs.curve),
        )
        LogService.log_check_event(
            "gauss_bonnet", abs(gb.residual) < 1e-3, gb.to_json_dict(), self.run_id
        )
        return report

    # ---------- export ----------
    @staticmethod
    def mesh(rs: RuledSurface) -> Tuple[np.ndarray, np.ndarray]:
        """Lattice vertices (row-major in s) and two triangles per quad."""
        ns, nt = rs.grid
        vertices = rs.positions().reshape(-1, 3)
        idx = np.arange(ns * nt).reshape(ns, nt)
        a, b = idx[:-1, :-1].ravel(), idx[1:, :-1].ravel()
        c, d = idx[1:, 1:].ravel(), idx[:-1, 1:].ravel()
        faces = np.concatenate([np.stack([a, b, c], axis=-1), np.stack([a, c, d], axis=-1)])
        return vertices, faces

    def export_mesh(self, rs: RuledSurface, path) -> str:
        vertices, faces = self.mesh(rs)
        return MeshRepository.write_obj(path, vertices, faces)
