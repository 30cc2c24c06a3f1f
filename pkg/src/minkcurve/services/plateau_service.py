'''
Maximal spacelike graph spanning a closed strong spacelike curve.

1. PlateauService.build_domain(curve, h) - Delaunay mesh of the projected domain
2. PlateauService.dirichlet_data(curve, mesh) - boundary heights
3. PlateauService.initial_guess(rs, mesh) - heights of the ruled surface
4. PlateauService.solve_maximal(g0) - damped Newton on the spacelike area
5. PlateauService.verify_maximal(g) - gradient bound, residual, area
'''

from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.interpolate import CubicHermiteSpline
from scipy.sparse.linalg import spsolve
from scipy.spatial import Delaunay

from minkcurve.core import config
from minkcurve.core.errors import (
    CorrespondenceMismatch, GradientBlowup, InvalidConfig, LookupMiss,
    MeshError, NoConvergence, NonConvexProjection,
)
from minkcurve.models.curve_models import ClosedCurve
from minkcurve.models.mesh_models import ConvexDomainMesh, GraphSurface, SolveLog
from minkcurve.models.surface_models import RuledSurface
from minkcurve.schemas.schemas import MaximalReport
from minkcurve.services.lemma_service import is_simple_polygon, polygon_turns
from minkcurve.services.log_service import LogService

SNAP_TOL = 1e-9
MIN_STEP = 2.0 ** -40
BISECTION_STEPS = 60


# -----------------------
# Discrete spacelike area
# -----------------------
def area_functional(mesh: ConvexDomainMesh, u: np.ndarray) -> float:
    """A(u) = sum_T area_T * sqrt(1 - |Du_T|^2)."""
    p = mesh.gradients(u)
    q = 1.0 - np.sum(p * p, axis=1)
    if np.any(q <= 0):
        raise GradientBlowup("Graph is not spacelike: |Du| >= 1", {"gradBound": float(np.sqrt(np.max(1.0 - q)))})
    return float(np.sum(mesh.areas * np.sqrt(q)))


def _weights(mesh: ConvexDomainMesh, u: np.ndarray):
    p = mesh.gradients(u)
    w = 1.0 / np.sqrt(1.0 - np.sum(p * p, axis=1))
    return p, w


def area_gradient(mesh: ConvexDomainMesh, u: np.ndarray) -> np.ndarray:
    """dA/du_i = -sum_T area_T w_T <grad phi_i, Du_T>, w = 1/sqrt(1 - |Du|^2)."""
    p, w = _weights(mesh, u)
    local = -(mesh.areas * w)[:, None] * np.einsum("tkd,td->tk", mesh.shape_gradients, p)
    g = np.zeros(len(mesh.vertices))
    np.add.at(g, mesh.triangles, local)
    return g


def area_hessian(mesh: ConvexDomainMesh, u: np.ndarray) -> sp.csr_matrix:
    """Negative definite Hessian, -sum_T area_T grad(phi)^T (w I + w^3 p p^T) grad(phi)."""
    p, w = _weights(mesh, u)
    D = mesh.shape_gradients
    Dp = np.einsum("tkd,td->tk", D, p)
    local = w[:, None, None] * np.einsum("tid,tjd->tij", D, D) + (w ** 3)[:, None, None] * Dp[:, :, None] * Dp[:, None, :]
    local *= -mesh.areas[:, None, None]
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    n = len(mesh.vertices)
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()


def grad_bound(mesh: ConvexDomainMesh, u: np.ndarray) -> float:
    p = mesh.gradients(u)
    return float(np.sqrt(np.max(np.sum(p * p, axis=1))))


def stiffness_matrix(mesh: ConvexDomainMesh) -> sp.csr_matrix:
    D = mesh.shape_gradients
    local = mesh.areas[:, None, None] * np.einsum("tid,tjd->tij", D, D)
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    n = len(mesh.vertices)
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()


def mean_curvature_defect(mesh: ConvexDomainMesh, u: np.ndarray) -> float:
    """
    L2 norm of the divergence of the flux Du/sqrt(1 - |Du|^2), recovered at
    the vertices by area weighting, over the core triangles of the mesh.
    The core region does not change with h.
    """
    p, w = _weights(mesh, u)
    flux = p * w[:, None]
    n = len(mesh.vertices)
    weight = np.zeros(n)
    recovered = np.zeros((n, 2))
    np.add.at(weight, mesh.triangles, np.repeat(mesh.areas[:, None], 3, axis=1))
    np.add.at(recovered, mesh.triangles, (mesh.areas[:, None] * flux)[:, None, :].repeat(3, axis=1))
    recovered /= weight[:, None]
    div = np.einsum("tkd,tkd->t", mesh.shape_gradients, recovered[mesh.triangles])
    core = mesh.core_triangles()
    if not np.any(core):
        return 0.0
    return float(np.sqrt(np.sum(mesh.areas[core] * div[core] ** 2)))


class PlateauService:
    """
    Service layer for the maximal graph.

    Responsibilities:
    - Mesh the convex domain under the projected curve
    - Build initial guesses (ruled surface, harmonic extension)
    - Run the damped Newton solve keeping every iterate spacelike
    """
    def __init__(self, run_id: str = "local"):
        self.run_id = run_id

    # ---------- domain ----------
    def build_domain(self, c: ClosedCurve, h: float = config.DEFAULT_MESH_H) -> ConvexDomainMesh:
        """
        Boundary vertices are curve samples spaced about h apart; interior
        vertices come from a triangular lattice of spacing h, keeping only
        points at least h/2 inside.
        """
        if not h > 0:
            raise InvalidConfig(f"Mesh size must be positive, got {h}")
        projected = c.points[:, :2]
        turns = polygon_turns(projected)
        if not (np.all(turns > 0) or np.all(turns < 0)) or not is_simple_polygon(projected):
            bad = int(np.argmin(turns * np.sign(np.sum(turns))))
            raise NonConvexProjection(
                "Projection of the curve to the x1x2-plane is not strictly convex",
                {"sample": bad},
            )

        edge = np.linalg.norm(np.roll(projected, -1, axis=0) - projected, axis=1)
        stride = max(1, int(round(h / np.mean(edge))))
        samples = np.arange(0, c.n, stride)
        if c.n - samples[-1] < stride / 2 and len(samples) > 3:
            samples = samples[:-1]
        if np.sum(turns) < 0:
            samples = samples[::-1]
        boundary = projected[samples]
        if len(boundary) < 3:
            raise MeshError(f"Mesh size {h} leaves fewer than 3 boundary vertices")

        interior = self._lattice_points(boundary, h)
        vertices = np.vstack([boundary, interior])
        tri = Delaunay(vertices)
        triangles = tri.simplices.astype(int)

        used = np.zeros(len(vertices), dtype=bool)
        used[triangles.ravel()] = True
        if not np.all(used[: len(boundary)]):
            raise MeshError(
                "Triangulation dropped boundary vertices",
                {"missing": np.flatnonzero(~used[: len(boundary)]).tolist()},
            )

        a, b, cc = (vertices[triangles[:, k]] for k in range(3))
        signed = (b[:, 0] - a[:, 0]) * (cc[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (cc[:, 0] - a[:, 0])
        triangles[signed < 0] = triangles[signed < 0][:, [0, 2, 1]]
        if np.min(np.abs(signed)) <= 1e-14 * h * h:
            raise MeshError("Triangulation contains degenerate triangles", {"minArea": float(np.min(np.abs(signed)) / 2)})

        mesh = ConvexDomainMesh(
            vertices=vertices, triangles=triangles,
            boundary_samples=samples.astype(int), target_h=float(h),
        )
        LogService.log_check_event(
            "domain_mesh", True,
            {"h": h, "vertices": len(vertices), "triangles": len(triangles), "boundary": len(boundary)},
            self.run_id,
        )
        return mesh

    @staticmethod
    def _lattice_points(boundary: np.ndarray, h: float) -> np.ndarray:
        lo, hi = boundary.min(axis=0), boundary.max(axis=0)
        dy = h * np.sqrt(3.0) / 2.0
        rows = np.arange(lo[1], hi[1] + dy, dy)
        cols = np.arange(lo[0] - h, hi[0] + h, h)
        X, Y = np.meshgrid(cols, rows)
        X = X + (np.arange(len(rows)) % 2)[:, None] * (h / 2.0)
        pts = np.column_stack([X.ravel(), Y.ravel()])

        # signed distance to every edge line of the counterclockwise polygon
        a = boundary
        d = np.roll(boundary, -1, axis=0) - boundary
        length = np.linalg.norm(d, axis=1)
        rel = pts[:, None, :] - a[None, :, :]
        dist = (d[None, :, 0] * rel[..., 1] - d[None, :, 1] * rel[..., 0]) / length[None, :]
        return pts[np.min(dist, axis=1) >= h / 2.0]

    def dirichlet_data(self, c: ClosedCurve, mesh: ConvexDomainMesh) -> np.ndarray:
        """x3 of the curve sample under each boundary vertex."""
        idx = mesh.boundary_samples
        if np.any(idx < 0) or np.any(idx >= c.n):
            raise CorrespondenceMismatch("Boundary vertex refers to a missing curve sample")
        gap = np.max(np.abs(c.points[idx, :2] - mesh.boundary_polygon))
        if gap > 1e-10:
            raise CorrespondenceMismatch(
                "Boundary vertices do not sit on the projected curve samples", {"maxGap": float(gap)}
            )
        return c.points[idx, 2].copy()

    # ---------- initial guesses ----------
    def initial_guess(self, rs: RuledSurface, mesh: ConvexDomainMesh) -> GraphSurface:
        """
        Height of the ruled surface above every vertex. The ruling through a
        vertex P is the root of g(s) = det(v(s), P - gamma0(s)) / (s (L - s)),
        bracketed on the lattice and refined by bisection.
        """
        u = np.empty(len(mesh.vertices))
        u[: mesh.n_boundary] = self.dirichlet_data(rs.curve, mesh)
        P = mesh.vertices[mesh.n_boundary:]
        if len(P):
            u[mesh.n_boundary:] = self._ruled_heights(rs, P)
        gb = grad_bound(mesh, u)
        if not gb < 1.0:
            raise GradientBlowup("Ruled-surface initial guess is not spacelike", {"gradBound": gb})
        return GraphSurface(mesh=mesh, u=u, grad_bound=gb)

    @staticmethod
    def _ruled_heights(rs: RuledSurface, P: np.ndarray) -> np.ndarray:
        s, L = rs.s, rs.half_length
        arc0 = CubicHermiteSpline(s, rs.gamma0, rs.tangents0, axis=0)
        arc1 = CubicHermiteSpline(s, rs.gamma1, rs.tangents1, axis=0)
        Tp, Tq = rs.tangents0[0, :2], rs.tangents0[-1, :2]
        p, q = rs.p[:2], rs.q[:2]

        def det2(a, b):
            return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]

        def g(sv, pts):
            g0, g1 = arc0(sv)[..., :2], arc1(sv)[..., :2]
            return det2(g1 - g0, pts - g0) / (sv * (L - sv))

        inner = s[1:-1]
        G = np.empty((len(P), len(s)))
        G[:, 0] = -2.0 * det2(Tp, P - p) / L
        G[:, -1] = 2.0 * det2(Tq, P - q) / L
        G[:, 1:-1] = g(inner[None, :], P[:, None, :])

        change = (G[:, :-1] <= 0) & (G[:, 1:] > 0)
        found = change.any(axis=1)
        j = np.argmax(change, axis=1)
        if not np.all(found):
            near = np.min(np.abs(G), axis=1)
            if np.any(near[~found] > SNAP_TOL):
                miss = int(np.flatnonzero(~found & (near > SNAP_TOL))[0])
                raise LookupMiss(
                    "Vertex lies outside the footprint of the ruled surface",
                    {"vertex": P[miss].tolist(), "closest": float(near[miss])},
                )
            snapped = np.argmin(np.abs(G), axis=1)
            j = np.where(found, j, np.minimum(snapped, len(s) - 2))

        # g(lo) <= 0 < g(hi) on every bracket
        lo, hi = s[j].copy(), s[j + 1].copy()
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            left = g(mid, P) <= 0
            lo = np.where(left, mid, lo)
            hi = np.where(left, hi, mid)
        root = 0.5 * (lo + hi)

        g0, g1 = arc0(root), arc1(root)
        d = (g1 - g0)[:, :2]
        dd = np.sum(d * d, axis=1)
        t = np.where(dd > 0, np.sum((P - g0[:, :2]) * d, axis=1) / np.where(dd > 0, dd, 1.0), 0.5)
        t = np.clip(t, 0.0, 1.0)
        return (1.0 - t) * g0[:, 2] + t * g1[:, 2]

    def harmonic_extension(self, mesh: ConvexDomainMesh, heights: np.ndarray) -> GraphSurface:
        """Discrete Laplace extension of the boundary heights."""
        K = stiffness_matrix(mesh)
        b, i = np.arange(mesh.n_boundary), mesh.interior
        u = np.empty(len(mesh.vertices))
        u[b] = heights
        if len(i):
            rhs = -K[i][:, b] @ heights
            u[i] = spsolve(K[i][:, i].tocsc(), rhs)
        return GraphSurface(mesh=mesh, u=u, grad_bound=grad_bound(mesh, u))

    # ---------- solve ----------
    def solve_maximal(
        self,
        g0: GraphSurface,
        tol: float = config.DEFAULT_TOL,
        max_iter: int = config.DEFAULT_MAX_ITER,
    ) -> Tuple[GraphSurface, SolveLog]:
        """
        Damped Newton for the stationary point of A with the boundary fixed.
        Steps are halved until the iterate keeps |Du| <= 1 - EPS_SAFE and A
        does not drop; the gradient norm over interior vertices is the stopping test.
        """
        if not tol > 0:
            raise InvalidConfig(f"tol must be positive, got {tol}")
        mesh = g0.mesh
        limit = 1.0 - config.EPS_SAFE
        if not g0.grad_bound < 1.0:
            raise GradientBlowup("Initial guess is not spacelike", {"gradBound": g0.grad_bound})

        i = mesh.interior
        u = g0.u.copy()
        area = area_functional(mesh, u)
        log = SolveLog(area_history=[area], grad_history=[g0.grad_bound])

        for it in range(1, max_iter + 1):
            grad = area_gradient(mesh, u)[i]
            residual = float(np.linalg.norm(grad))
            log.residual_history.append(residual)
            log.iterations = it
            if residual < tol:
                log.converged = True
                break

            K = -area_hessian(mesh, u)[i][:, i]
            delta = spsolve(K.tocsc(), grad)
            step = 1.0
            while True:
                trial = u.copy()
                trial[i] += step * delta
                gb = grad_bound(mesh, trial)
                if gb <= limit:
                    trial_area = area_functional(mesh, trial)
                    if trial_area >= area - 64.0 * np.finfo(float).eps * abs(area):
                        break
                step *= 0.5
                if step < MIN_STEP:
                    raise GradientBlowup(
                        "Line search cannot keep the graph spacelike",
                        {"iteration": it, "residual": residual, "gradBound": gb},
                    )
            u, area = trial, trial_area
            log.area_history.append(area)
            log.grad_history.append(gb)
            log.step_history.append(step)
            LogService.log_solver_event(it, area, gb, residual, step, self.run_id)

        if not log.converged:
            raise NoConvergence(
                f"Newton did not reach tol={tol} in {max_iter} iterations",
                {"residual": log.residual_history[-1], "iterations": log.iterations},
            )
        return GraphSurface(mesh=mesh, u=u, grad_bound=grad_bound(mesh, u)), log

    def verify_maximal(self, g: GraphSurface) -> MaximalReport:
        mesh = g.mesh
        return MaximalReport(
            grad_bound=grad_bound(mesh, g.u),
            residual_norm=float(np.linalg.norm(area_gradient(mesh, g.u)[mesh.interior])),
            area_value=area_functional(mesh, g.u),
            mean_curvature_defect=mean_curvature_defect(mesh, g.u),
        )

    def compare_solutions(
        self, solved: GraphSurface, alternative: GraphSurface, tol: float, max_iter: int
    ) -> Tuple[bool, Optional[float]]:
        """
        Solve again from a second initial guess and return (checked, sup |u1 - u2|).
        Skipped when the second guess is not spacelike.
        """
        if not alternative.grad_bound < 1.0 - config.EPS_SAFE:
            LogService.log_check_event(
                "uniqueness", True, {"skipped": True, "gradBound": alternative.grad_bound}, self.run_id
            )
            return False, None
        other, _ = self.solve_maximal(alternative, tol=tol, max_iter=max_iter)
        gap = float(np.max(np.abs(other.u - solved.u)))
        LogService.log_check_event("uniqueness", gap <= 1e-6, {"supGap": gap}, self.run_id)
        return True, gap

    @staticmethod
    def mesh_faces(g: GraphSurface) -> Tuple[np.ndarray, np.ndarray]:
        return g.points(), g.mesh.triangles
